//! Shared test oracles.
//!
//! Two independent recomputation routes live here: octonion arithmetic by
//! Cayley–Dickson doubling over explicit quaternion pairs, and frame /
//! identity evaluation by plain central-difference stencils. Neither touches
//! the dual-number machinery it is used to check.

#![allow(dead_code)]

use moufang_gle::actions::{ActionSide, MoufangAction, PairActionMap, RegularAction};
use moufang_gle::jets::{fd_hessians, fd_jacobian};
use moufang_gle::loops::{JointMultiplyMap, LoopChart};
use ndarray::{Array2, Array3};

pub const INNER_STEP: f64 = 1e-5;
pub const OUTER_STEP: f64 = 1e-4;

// ---------------------------------------------------------------------------
// Cayley-Dickson doubling oracle
// ---------------------------------------------------------------------------

pub fn quat_mul(a: &[f64; 4], b: &[f64; 4]) -> [f64; 4] {
    [
        a[0] * b[0] - a[1] * b[1] - a[2] * b[2] - a[3] * b[3],
        a[0] * b[1] + a[1] * b[0] + a[2] * b[3] - a[3] * b[2],
        a[0] * b[2] + a[2] * b[0] + a[3] * b[1] - a[1] * b[3],
        a[0] * b[3] + a[3] * b[0] + a[1] * b[2] - a[2] * b[1],
    ]
}

pub fn quat_conj(a: &[f64; 4]) -> [f64; 4] {
    [a[0], -a[1], -a[2], -a[3]]
}

/// Octonion product from quaternion pairs:
/// `(a, b)(c, d) = (a c - conj(d) b, d a + b conj(c))`.
pub fn oct_mul(x: &[f64; 8], y: &[f64; 8]) -> [f64; 8] {
    let a: [f64; 4] = x[..4].try_into().unwrap();
    let b: [f64; 4] = x[4..].try_into().unwrap();
    let c: [f64; 4] = y[..4].try_into().unwrap();
    let d: [f64; 4] = y[4..].try_into().unwrap();
    let ac = quat_mul(&a, &c);
    let db = quat_mul(&quat_conj(&d), &b);
    let da = quat_mul(&d, &a);
    let bc = quat_mul(&b, &quat_conj(&c));
    let mut out = [0.0; 8];
    for i in 0..4 {
        out[i] = ac[i] - db[i];
        out[4 + i] = da[i] + bc[i];
    }
    out
}

pub fn oct_lift(x: &[f64]) -> [f64; 8] {
    assert_eq!(x.len(), 7);
    let nsq: f64 = x.iter().map(|c| c * c).sum();
    let mut out = [0.0; 8];
    out[0] = (1.0 - nsq).sqrt();
    out[1..].copy_from_slice(x);
    out
}

/// Chart product of two octonion chart points, doubling route.
pub fn oct_chart_mul(x: &[f64], y: &[f64]) -> Vec<f64> {
    let p = oct_mul(&oct_lift(x), &oct_lift(y));
    p[1..].to_vec()
}

pub fn oct_norm(x: &[f64; 8]) -> f64 {
    x.iter().map(|c| c * c).sum::<f64>().sqrt()
}

// ---------------------------------------------------------------------------
// Finite-difference frame oracle
// ---------------------------------------------------------------------------

/// `u` and `v` frames by central differences of the two translation maps.
pub fn aux_fd(chart: &LoopChart, g: &[f64], step: f64) -> (Array2<f64>, Array2<f64>) {
    let r = chart.dim();
    let mut u = Array2::zeros((r, r));
    let mut v = Array2::zeros((r, r));
    for j in 0..r {
        let mut hi = vec![0.0; r];
        let mut lo = vec![0.0; r];
        hi[j] = step;
        lo[j] = -step;
        let left_hi = chart.multiply(&hi, g).unwrap();
        let left_lo = chart.multiply(&lo, g).unwrap();
        let right_hi = chart.multiply(g, &hi).unwrap();
        let right_lo = chart.multiply(g, &lo).unwrap();
        for s in 0..r {
            u[[s, j]] = (left_hi[s] - left_lo[s]) / (2.0 * step);
            v[[s, j]] = (right_hi[s] - right_lo[s]) / (2.0 * step);
        }
    }
    (u, v)
}

pub struct FdFrames {
    pub u: Array2<f64>,
    pub v: Array2<f64>,
    pub w: Array2<f64>,
    pub du: Array3<f64>,
    pub dv: Array3<f64>,
}

/// Frames plus their `g`-derivatives, everything by nested stencils
/// (`du[[s, j, p]] = d u^s_j / d g^p`).
pub fn frames_fd(chart: &LoopChart, g: &[f64]) -> FdFrames {
    let r = chart.dim();
    let (u, v) = aux_fd(chart, g, INNER_STEP);
    let w = Array2::from_shape_fn((r, r), |(s, j)| -(u[[s, j]] + v[[s, j]]));
    let mut du = Array3::zeros((r, r, r));
    let mut dv = Array3::zeros((r, r, r));
    for p in 0..r {
        let mut hi = g.to_vec();
        let mut lo = g.to_vec();
        hi[p] += OUTER_STEP;
        lo[p] -= OUTER_STEP;
        let spread = hi[p] - lo[p];
        let (u_hi, v_hi) = aux_fd(chart, &hi, INNER_STEP);
        let (u_lo, v_lo) = aux_fd(chart, &lo, INNER_STEP);
        for s in 0..r {
            for j in 0..r {
                du[[s, j, p]] = (u_hi[[s, j]] - u_lo[[s, j]]) / spread;
                dv[[s, j, p]] = (v_hi[[s, j]] - v_lo[[s, j]]) / spread;
            }
        }
    }
    FdFrames { u, v, w, du, dv }
}

pub struct FdSecondary {
    pub u2: Array3<f64>,
    pub v2: Array3<f64>,
    pub w2: Array3<f64>,
    pub lr: Array3<f64>,
    pub rl: Array3<f64>,
}

/// Secondary frames and mixed brackets assembled from stencil frames.
pub fn secondary_fd(chart: &LoopChart, g: &[f64]) -> FdSecondary {
    let r = chart.dim();
    let f = frames_fd(chart, g);
    let dw = |s: usize, j: usize, p: usize| -(f.du[[s, j, p]] + f.dv[[s, j, p]]);
    let mut u2 = Array3::zeros((r, r, r));
    let mut v2 = Array3::zeros((r, r, r));
    let mut w2 = Array3::zeros((r, r, r));
    let mut lr = Array3::zeros((r, r, r));
    let mut rl = Array3::zeros((r, r, r));
    for s in 0..r {
        for j in 0..r {
            for k in 0..r {
                for p in 0..r {
                    u2[[s, j, k]] += f.u[[p, k]] * f.du[[s, j, p]] - f.u[[p, j]] * f.du[[s, k, p]];
                    v2[[s, j, k]] += f.v[[p, k]] * f.dv[[s, j, p]] - f.v[[p, j]] * f.dv[[s, k, p]];
                    w2[[s, j, k]] += f.w[[p, k]] * dw(s, j, p) - f.w[[p, j]] * dw(s, k, p);
                    lr[[s, j, k]] += f.u[[p, j]] * f.dv[[s, k, p]] - f.v[[p, k]] * f.du[[s, j, p]];
                    rl[[s, j, k]] += f.v[[p, j]] * f.du[[s, k, p]] - f.u[[p, k]] * f.dv[[s, j, p]];
                }
            }
        }
    }
    FdSecondary { u2, v2, w2, lr, rl }
}

pub fn yamaguti_fd(chart: &LoopChart, g: &[f64]) -> Array3<f64> {
    let sf = secondary_fd(chart, g);
    (&sf.u2 + &sf.v2 + &sf.w2) / 6.0
}

/// Structure constants by second differences of the joint product map.
pub fn structure_constants_fd(chart: &LoopChart, sigma: f64) -> Array3<f64> {
    let r = chart.dim();
    let map = JointMultiplyMap { chart };
    let hessians = fd_hessians(&map, &vec![0.0; 2 * r], INNER_STEP).unwrap();
    Array3::from_shape_fn((r, r, r), |(s, j, k)| {
        sigma * (hessians[s][[j, r + k]] - hessians[s][[k, r + j]])
    })
}

// ---------------------------------------------------------------------------
// Finite-difference identity oracles (regular birepresentation)
// ---------------------------------------------------------------------------

/// Jacobian blocks of one action map by stencils.
pub fn action_jacobians_fd(
    space: &RegularAction,
    side: ActionSide,
    g: &[f64],
    a: &[f64],
) -> (Vec<f64>, Array2<f64>, Array2<f64>) {
    let chart = space.base();
    let r = chart.dim();
    let map = PairActionMap { space, side };
    let mut joint = g.to_vec();
    joint.extend_from_slice(a);
    let jac = fd_jacobian(&map, &joint, INNER_STEP).unwrap();
    let out = match side {
        ActionSide::S => chart.multiply(g, a).unwrap(),
        ActionSide::T => chart.multiply(a, g).unwrap(),
    };
    let jg = Array2::from_shape_fn((r, r), |(mu, s)| jac[[mu, s]]);
    let ja = Array2::from_shape_fn((r, r), |(mu, nu)| jac[[mu, r + nu]]);
    (out, jg, ja)
}

/// The first generalized Lie equation for `S_g A`, all ingredients from
/// stencils: `u(g) dS/dg + T(A) dS/dA + P(S_g A)`.
pub fn gle_s_residuals_fd(chart: &LoopChart, g: &[f64], a: &[f64]) -> [Array2<f64>; 3] {
    let space = RegularAction::new(chart.clone());
    let (out, jg, ja) = action_jacobians_fd(&space, ActionSide::S, g, a);
    let r = chart.dim();
    let (u_g, v_g) = aux_fd(chart, g, INNER_STEP);
    let w_g = Array2::from_shape_fn((r, r), |(s, j)| -(u_g[[s, j]] + v_g[[s, j]]));
    // Regular action: S = u, T = v, P = w at the space point.
    let (s_a, t_a) = aux_fd(chart, a, INNER_STEP);
    let p_a = Array2::from_shape_fn((r, r), |(m, j)| -(s_a[[m, j]] + t_a[[m, j]]));
    let (s_o, t_o) = aux_fd(chart, &out, INNER_STEP);
    let p_o = Array2::from_shape_fn((r, r), |(m, j)| -(s_o[[m, j]] + t_o[[m, j]]));

    let row = |lf: &Array2<f64>, sp: &Array2<f64>, tr: &Array2<f64>| {
        Array2::from_shape_fn((r, r), |(mu, j)| {
            let from_g: f64 = (0..r).map(|s| lf[[s, j]] * jg[[mu, s]]).sum();
            let from_a: f64 = (0..r).map(|nu| sp[[nu, j]] * ja[[mu, nu]]).sum();
            from_g + from_a + tr[[mu, j]]
        })
    };
    [
        row(&u_g, &t_a, &p_o),
        row(&v_g, &p_a, &t_o),
        row(&w_g, &s_a, &s_o),
    ]
}

/// Yamaguti transport residual for `S_g A`, all ingredients from stencils.
pub fn thm11a_residual_fd(chart: &LoopChart, g: &[f64], a: &[f64]) -> Array3<f64> {
    let space = RegularAction::new(chart.clone());
    let (out, jg, ja) = action_jacobians_fd(&space, ActionSide::S, g, a);
    let r = chart.dim();
    let y_g = yamaguti_fd(chart, g);
    let y_a = yamaguti_fd(chart, a);
    let y_o = yamaguti_fd(chart, &out);
    Array3::from_shape_fn((r, r, r), |(mu, j, k)| {
        let from_g: f64 = (0..r).map(|s| y_g[[s, j, k]] * jg[[mu, s]]).sum();
        let from_a: f64 = (0..r).map(|nu| y_a[[nu, j, k]] * ja[[mu, nu]]).sum();
        from_g + from_a - y_o[[mu, j, k]]
    })
}

pub fn max_abs_arr<'a>(values: impl IntoIterator<Item = &'a f64>) -> f64 {
    values.into_iter().fold(0.0f64, |m, v| m.max(v.abs()))
}
