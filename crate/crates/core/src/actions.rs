//! Transformation actions of a loop on a representation space: the paired
//! actions `S_g`, `T_g`, their auxiliary frames `S`, `T`, `P = -(S + T)`,
//! secondary frames, the action-side Yamaguti tensor, the action-side
//! Maurer-Cartan and decomposition checks, and the generalized Lie
//! equation residuals.

use ndarray::{Array2, Array3};
use thiserror::Error;

use crate::jets::{jet1, Dual, Real, SmoothMap, SmoothMapDyn};
use crate::loops::{LoopChart, LoopError, StructureConstants, YamagutiTensor};
use crate::report::Residual;

/// A pair of actions `(S_g, T_g)` on a coordinate space, smooth in both
/// the loop element and the space point.
///
/// Check code is generic over this trait, so further action families can
/// be added without touching any identity evaluation.
pub trait MoufangAction {
    fn name(&self) -> &'static str;
    fn base(&self) -> &LoopChart;
    /// Dimension of the space coordinates `A`.
    fn dim(&self) -> usize;
    fn eval_s<T: Real>(&self, g: &[T], a: &[T]) -> Vec<T>;
    fn eval_t<T: Real>(&self, g: &[T], a: &[T]) -> Vec<T>;
    fn check_space_point(&self, a: &[f64]) -> Result<(), ActionError>;
}

/// The regular birepresentation: the loop acting on its own chart by
/// `S_g A = g A` and `T_g A = A g`.
#[derive(Debug, Clone)]
pub struct RegularAction {
    chart: LoopChart,
}

impl RegularAction {
    pub fn new(chart: LoopChart) -> Self {
        Self { chart }
    }
}

impl MoufangAction for RegularAction {
    fn name(&self) -> &'static str {
        "regular"
    }
    fn base(&self) -> &LoopChart {
        &self.chart
    }
    fn dim(&self) -> usize {
        self.chart.dim()
    }
    fn eval_s<T: Real>(&self, g: &[T], a: &[T]) -> Vec<T> {
        self.chart.eval_multiply(g, a)
    }
    fn eval_t<T: Real>(&self, g: &[T], a: &[T]) -> Vec<T> {
        self.chart.eval_multiply(a, g)
    }
    fn check_space_point(&self, a: &[f64]) -> Result<(), ActionError> {
        Ok(self.chart.check_point(a)?)
    }
}

#[derive(Debug, Error)]
pub enum ActionError {
    #[error(transparent)]
    Loop(#[from] LoopError),
    #[error("action `{action}`: {reason}")]
    Domain {
        action: &'static str,
        reason: String,
    },
}

/// Which of the two actions a map evaluates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ActionSide {
    S,
    T,
}

/// `S_g A` with both arguments validated.
pub fn act_s<A: MoufangAction>(space: &A, g: &[f64], a: &[f64]) -> Result<Vec<f64>, ActionError> {
    space.base().check_point(g)?;
    space.check_space_point(a)?;
    Ok(space.eval_s(g, a))
}

/// `T_g A` with both arguments validated.
pub fn act_t<A: MoufangAction>(space: &A, g: &[f64], a: &[f64]) -> Result<Vec<f64>, ActionError> {
    space.base().check_point(g)?;
    space.check_space_point(a)?;
    Ok(space.eval_t(g, a))
}

/// Auxiliary frames of the action at `A`: `S` and `T` are the
/// `g`-derivatives of the two actions at `g = e`, and `P = -(S + T)`.
#[derive(Debug, Clone)]
pub struct ActionAuxFrame {
    pub s: Array2<f64>,
    pub t: Array2<f64>,
    pub p: Array2<f64>,
}

impl ActionAuxFrame {
    /// Sup-norm of `S + T + P`; zero by construction.
    pub fn constraint_gap(&self) -> f64 {
        let mut m = 0.0f64;
        for ((mu, j), val) in self.s.indexed_iter() {
            m = m.max((val + self.t[[mu, j]] + self.p[[mu, j]]).abs());
        }
        m
    }
}

/// Flattened `S` and `T` frames (row-major `[mu * r + j]`), generic over
/// the scalar so they stay differentiable in `A`.
fn action_aux_st<A: MoufangAction, T: Real>(space: &A, a: &[T]) -> (Vec<T>, Vec<T>) {
    let r = space.base().dim();
    let n = space.dim();
    let g: Vec<Dual<T>> = (0..r).map(|j| Dual::variable(T::zero(), j, r)).collect();
    let ac: Vec<Dual<T>> = a.iter().map(|c| Dual::constant(c.clone())).collect();
    let s_out = space.eval_s(&g, &ac);
    let t_out = space.eval_t(&g, &ac);
    let mut s = Vec::with_capacity(n * r);
    let mut t = Vec::with_capacity(n * r);
    for mu in 0..n {
        for j in 0..r {
            s.push(s_out[mu].partial(j));
            t.push(t_out[mu].partial(j));
        }
    }
    (s, t)
}

pub fn action_aux<A: MoufangAction>(space: &A, a: &[f64]) -> Result<ActionAuxFrame, ActionError> {
    space.check_space_point(a)?;
    let r = space.base().dim();
    let n = space.dim();
    let (sf, tf) = action_aux_st(space, a);
    let s = Array2::from_shape_vec((n, r), sf).expect("frame shape");
    let t = Array2::from_shape_vec((n, r), tf).expect("frame shape");
    let p = Array2::from_shape_fn((n, r), |(mu, j)| -(s[[mu, j]] + t[[mu, j]]));
    Ok(ActionAuxFrame { s, t, p })
}

/// Action-side secondary frames (indexed `[mu, j, k]`) and the mixed
/// bracket arrays `st` (for `[S_x, T_y]`) and `ts` (for `[T_x, S_y]`).
#[derive(Debug, Clone)]
pub struct ActionSecondaryFrame {
    pub s2: Array3<f64>,
    pub t2: Array3<f64>,
    pub p2: Array3<f64>,
    pub st: Array3<f64>,
    pub ts: Array3<f64>,
}

pub fn action_secondary<A: MoufangAction>(
    space: &A,
    a: &[f64],
) -> Result<ActionSecondaryFrame, ActionError> {
    space.check_space_point(a)?;
    let r = space.base().dim();
    let n = space.dim();
    let jr = jet1(&ActionAuxMap { space }, a).expect("point validated");

    let val = |block: usize, mu: usize, j: usize| jr.value[block * n * r + mu * r + j];
    let der = |block: usize, mu: usize, j: usize, nu: usize| {
        jr.jacobian[[block * n * r + mu * r + j, nu]]
    };
    let s = |mu, j| val(0, mu, j);
    let t = |mu, j| val(1, mu, j);
    let p = |mu, j| -(s(mu, j) + t(mu, j));
    let ds = |mu, j, nu| der(0, mu, j, nu);
    let dt = |mu, j, nu| der(1, mu, j, nu);
    let dp = |mu, j, nu| -(ds(mu, j, nu) + dt(mu, j, nu));

    let mut s2 = Array3::zeros((n, r, r));
    let mut t2 = Array3::zeros((n, r, r));
    let mut p2 = Array3::zeros((n, r, r));
    let mut st = Array3::zeros((n, r, r));
    let mut ts = Array3::zeros((n, r, r));
    for mu in 0..n {
        for j in 0..r {
            for k in 0..r {
                let mut a_s2 = 0.0;
                let mut a_t2 = 0.0;
                let mut a_p2 = 0.0;
                let mut a_st = 0.0;
                let mut a_ts = 0.0;
                for nu in 0..n {
                    a_s2 += s(nu, k) * ds(mu, j, nu) - s(nu, j) * ds(mu, k, nu);
                    a_t2 += t(nu, k) * dt(mu, j, nu) - t(nu, j) * dt(mu, k, nu);
                    a_p2 += p(nu, k) * dp(mu, j, nu) - p(nu, j) * dp(mu, k, nu);
                    a_st += s(nu, j) * dt(mu, k, nu) - t(nu, k) * ds(mu, j, nu);
                    a_ts += t(nu, j) * ds(mu, k, nu) - s(nu, k) * dt(mu, j, nu);
                }
                s2[[mu, j, k]] = a_s2;
                t2[[mu, j, k]] = a_t2;
                p2[[mu, j, k]] = a_p2;
                st[[mu, j, k]] = a_st;
                ts[[mu, j, k]] = a_ts;
            }
        }
    }
    Ok(ActionSecondaryFrame { s2, t2, p2, st, ts })
}

/// Action-side Yamaguti tensor `(S2 + T2 + P2) / 6` at `A`.
pub fn yamaguti_x<A: MoufangAction>(space: &A, a: &[f64]) -> Result<YamagutiTensor, ActionError> {
    let sf = action_secondary(space, a)?;
    let y = (&sf.s2 + &sf.t2 + &sf.p2) / 6.0;
    Ok(YamagutiTensor { y })
}

/// Action-side Maurer-Cartan residuals (self-brackets against `C` plus
/// mixed brackets, and mixed-bracket symmetry).
pub fn check_action_mc<A: MoufangAction>(
    space: &A,
    c: &StructureConstants,
    a: &[f64],
) -> Result<Vec<Residual>, ActionError> {
    let af = action_aux(space, a)?;
    let sf = action_secondary(space, a)?;
    let r = space.base().dim();
    let n = space.dim();
    let mut m7a = 0.0f64;
    let mut m7b = 0.0f64;
    let mut m7c = 0.0f64;
    for mu in 0..n {
        for j in 0..r {
            for k in 0..r {
                let cs: f64 = (0..r).map(|m| c.c[[m, j, k]] * af.s[[mu, m]]).sum();
                let ct: f64 = (0..r).map(|m| c.c[[m, j, k]] * af.t[[mu, m]]).sum();
                m7a = m7a.max((-sf.s2[[mu, j, k]] - cs + 2.0 * sf.st[[mu, j, k]]).abs());
                m7b = m7b.max((-sf.t2[[mu, j, k]] + ct + 2.0 * sf.ts[[mu, j, k]]).abs());
                m7c = m7c.max((sf.st[[mu, j, k]] - sf.ts[[mu, j, k]]).abs());
            }
        }
    }
    Ok(vec![
        Residual::new("mc.7a", m7a),
        Residual::new("mc.7b", m7b),
        Residual::new("mc.7c", m7c),
    ])
}

/// Action-side decomposition residuals (secondary frames against the
/// Yamaguti tensor plus `C`-terms) and the `C`-term cancellation sum.
pub fn check_lemma2<A: MoufangAction>(
    space: &A,
    c: &StructureConstants,
    tau: f64,
    a: &[f64],
) -> Result<Vec<Residual>, ActionError> {
    let af = action_aux(space, a)?;
    let sf = action_secondary(space, a)?;
    let y = (&sf.s2 + &sf.t2 + &sf.p2) / 6.0;
    let r = space.base().dim();
    let n = space.dim();
    let third = tau / 3.0;
    let mut m9a = 0.0f64;
    let mut m9b = 0.0f64;
    let mut m9c = 0.0f64;
    let mut msum = 0.0f64;
    for mu in 0..n {
        for j in 0..r {
            for k in 0..r {
                let contract = |f: &dyn Fn(usize) -> f64| -> f64 {
                    (0..r).map(|m| c.c[[m, j, k]] * f(m)).sum()
                };
                let c_s2t = contract(&|m| af.s[[mu, m]] + 2.0 * af.t[[mu, m]]);
                let c_2st = contract(&|m| 2.0 * af.s[[mu, m]] + af.t[[mu, m]]);
                let c_st = contract(&|m| af.s[[mu, m]] - af.t[[mu, m]]);
                let y2 = 2.0 * y[[mu, j, k]];
                let rhs_a = y2 + third * c_s2t;
                let rhs_b = y2 - third * c_2st;
                let rhs_c = y2 + third * c_st;
                m9a = m9a.max((sf.s2[[mu, j, k]] - rhs_a).abs());
                m9b = m9b.max((sf.t2[[mu, j, k]] - rhs_b).abs());
                m9c = m9c.max((sf.p2[[mu, j, k]] - rhs_c).abs());
                msum = msum.max((rhs_a + rhs_b + rhs_c - 6.0 * y[[mu, j, k]]).abs());
            }
        }
    }
    Ok(vec![
        Residual::new("lemma2.9a", m9a),
        Residual::new("lemma2.9b", m9b),
        Residual::new("lemma2.9c", m9c),
        Residual::new("lemma2.sum", msum),
    ])
}

/// The three residual matrices (indexed `[mu, j]`) of one generalized
/// Lie equation triple.
#[derive(Debug, Clone)]
pub struct GleResiduals {
    pub a: Array2<f64>,
    pub b: Array2<f64>,
    pub c: Array2<f64>,
}

impl GleResiduals {
    pub fn max_abs(&self) -> [f64; 3] {
        [
            crate::report::max_abs(self.a.iter()),
            crate::report::max_abs(self.b.iter()),
            crate::report::max_abs(self.c.iter()),
        ]
    }
}

/// Transported point plus the two Jacobian blocks of an action map.
pub(crate) type JacobianBlocks = (Vec<f64>, Array2<f64>, Array2<f64>);

/// Transported point plus `d(X_g A)/dg` (columns of the loop chart) and
/// `d(X_g A)/dA`.
pub(crate) fn action_jacobians<A: MoufangAction>(
    space: &A,
    side: ActionSide,
    g: &[f64],
    a: &[f64],
) -> Result<JacobianBlocks, ActionError> {
    space.base().check_point(g)?;
    space.check_space_point(a)?;
    let r = space.base().dim();
    let n = space.dim();
    let mut joint = Vec::with_capacity(r + n);
    joint.extend_from_slice(g);
    joint.extend_from_slice(a);
    let jr = jet1(&PairActionMap { space, side }, &joint).expect("points validated");
    let out = jr.value.to_vec();
    let jg = Array2::from_shape_fn((n, r), |(mu, s)| jr.jacobian[[mu, s]]);
    let ja = Array2::from_shape_fn((n, n), |(mu, nu)| jr.jacobian[[mu, r + nu]]);
    Ok((out, jg, ja))
}

/// Residuals of the generalized Lie equations for `S_g A`.
///
/// Each equation couples one loop frame at `g` contracted with the
/// `g`-Jacobian, one action frame at `A` contracted with the `A`-Jacobian,
/// and one action frame at the transported point `S_g A`:
/// `u`/`T`/`P`, then `v`/`P`/`T`, then `w`/`S`/`S`.
pub fn gle_residual_s<A: MoufangAction>(
    space: &A,
    g: &[f64],
    a: &[f64],
) -> Result<GleResiduals, ActionError> {
    let (out, jg, ja) = action_jacobians(space, ActionSide::S, g, a)?;
    let af_g = space.base().aux_frame(g)?;
    let aux_a = action_aux(space, a)?;
    let aux_out = action_aux(space, &out)?;
    let r = space.base().dim();
    let n = space.dim();
    let row = |lf: &Array2<f64>, sp: &Array2<f64>, tr: &Array2<f64>| {
        Array2::from_shape_fn((n, r), |(mu, j)| {
            let from_g: f64 = (0..r).map(|s| lf[[s, j]] * jg[[mu, s]]).sum();
            let from_a: f64 = (0..n).map(|nu| sp[[nu, j]] * ja[[mu, nu]]).sum();
            from_g + from_a + tr[[mu, j]]
        })
    };
    Ok(GleResiduals {
        a: row(&af_g.u, &aux_a.t, &aux_out.p),
        b: row(&af_g.v, &aux_a.p, &aux_out.t),
        c: row(&af_g.w, &aux_a.s, &aux_out.s),
    })
}

/// Residuals of the generalized Lie equations for `T_g A`
/// (frame pattern `v`/`S`/`P`, `u`/`P`/`S`, `w`/`T`/`T`).
pub fn gle_residual_t<A: MoufangAction>(
    space: &A,
    g: &[f64],
    a: &[f64],
) -> Result<GleResiduals, ActionError> {
    let (out, jg, ja) = action_jacobians(space, ActionSide::T, g, a)?;
    let af_g = space.base().aux_frame(g)?;
    let aux_a = action_aux(space, a)?;
    let aux_out = action_aux(space, &out)?;
    let r = space.base().dim();
    let n = space.dim();
    let row = |lf: &Array2<f64>, sp: &Array2<f64>, tr: &Array2<f64>| {
        Array2::from_shape_fn((n, r), |(mu, j)| {
            let from_g: f64 = (0..r).map(|s| lf[[s, j]] * jg[[mu, s]]).sum();
            let from_a: f64 = (0..n).map(|nu| sp[[nu, j]] * ja[[mu, nu]]).sum();
            from_g + from_a + tr[[mu, j]]
        })
    };
    Ok(GleResiduals {
        a: row(&af_g.v, &aux_a.s, &aux_out.p),
        b: row(&af_g.u, &aux_a.p, &aux_out.s),
        c: row(&af_g.w, &aux_a.t, &aux_out.t),
    })
}

/// One action `(g, A) -> X_g A` as a single smooth map on the joined
/// coordinates, for joint differentiation.
pub struct PairActionMap<'a, A: MoufangAction> {
    pub space: &'a A,
    pub side: ActionSide,
}

impl<A: MoufangAction> SmoothMap for PairActionMap<'_, A> {
    fn name(&self) -> &str {
        match self.side {
            ActionSide::S => "act_s",
            ActionSide::T => "act_t",
        }
    }
    fn in_dim(&self) -> usize {
        self.space.base().dim() + self.space.dim()
    }
    fn out_dim(&self) -> usize {
        self.space.dim()
    }
    fn eval<T: Real>(&self, x: &[T]) -> Vec<T> {
        let r = self.space.base().dim();
        match self.side {
            ActionSide::S => self.space.eval_s(&x[..r], &x[r..]),
            ActionSide::T => self.space.eval_t(&x[..r], &x[r..]),
        }
    }
    fn check_domain(&self, x: &[f64]) -> Result<(), String> {
        let r = self.space.base().dim();
        self.space
            .base()
            .check_point(&x[..r])
            .map_err(|e| e.to_string())?;
        self.space
            .check_space_point(&x[r..])
            .map_err(|e| e.to_string())
    }
}

/// `A -> (S(A), T(A))` flattened; differentiating it through `jet1`
/// yields the action-frame derivatives.
pub struct ActionAuxMap<'a, A: MoufangAction> {
    pub space: &'a A,
}

impl<A: MoufangAction> SmoothMap for ActionAuxMap<'_, A> {
    fn name(&self) -> &str {
        "action_aux"
    }
    fn in_dim(&self) -> usize {
        self.space.dim()
    }
    fn out_dim(&self) -> usize {
        2 * self.space.dim() * self.space.base().dim()
    }
    fn eval<T: Real>(&self, x: &[T]) -> Vec<T> {
        let (mut s, mut t) = action_aux_st(self.space, x);
        s.append(&mut t);
        s
    }
    fn check_domain(&self, x: &[f64]) -> Result<(), String> {
        self.space.check_space_point(x).map_err(|e| e.to_string())
    }
}

/// `g ↦ S_g A + T_g A + third-action(g, A)` at a fixed `A`, the action-side
/// analogue of the translation sum: its `g`-Jacobian at the identity is
/// `S + T + P`, so finite differences of this map recompute the action
/// frame constraint.
pub struct ActionTranslationSumMap<'a, A: MoufangAction> {
    pub space: &'a A,
    pub at: Vec<f64>,
}

impl<A: MoufangAction> SmoothMap for ActionTranslationSumMap<'_, A> {
    fn name(&self) -> &str {
        "action_translation_sum"
    }
    fn in_dim(&self) -> usize {
        self.space.base().dim()
    }
    fn out_dim(&self) -> usize {
        self.space.dim()
    }
    fn eval<T: Real>(&self, g: &[T]) -> Vec<T> {
        let a: Vec<T> = self.at.iter().map(|&c| T::from_f64(c)).collect();
        let s = self.space.eval_s(g, &a);
        let t = self.space.eval_t(g, &a);
        let third: Vec<T> = self
            .space
            .eval_s(g, &a)
            .into_iter()
            .zip(self.space.eval_t(g, &a))
            .map(|(x, y)| -(x + y))
            .collect();
        s.into_iter()
            .zip(t)
            .zip(third)
            .map(|((x, y), z)| x + y + z)
            .collect()
    }
    fn check_domain(&self, x: &[f64]) -> Result<(), String> {
        self.space.base().check_point(x).map_err(|e| e.to_string())
    }
}

/// The maps this module exposes to the differentiation-integrity checks.
pub fn registered_maps<'a, A: MoufangAction>(space: &'a A) -> Vec<Box<dyn SmoothMapDyn + 'a>> {
    vec![
        Box::new(PairActionMap {
            space,
            side: ActionSide::S,
        }),
        Box::new(PairActionMap {
            space,
            side: ActionSide::T,
        }),
        Box::new(ActionAuxMap { space }),
    ]
}
