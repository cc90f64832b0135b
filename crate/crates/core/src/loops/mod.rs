//! Analytic Moufang loop instances in a local chart around the identity:
//! their multiplication, auxiliary frames, structure constants, secondary
//! frames, Yamaguti tensor, and the loop-side identity checks.
//!
//! Three instances span the degeneracy layers: abelian `R^n` (trivial),
//! unit quaternions on `S^3` (associative, noncommutative) and unit
//! octonions on `S^7` (Moufang, nonassociative). The sphere instances use
//! the imaginary-part chart `g = (sqrt(1 - |x|^2), x)`.

mod algebra;

pub use algebra::{chart_lift, chart_multiply, AlgTable, OCTONION_TABLE, QUATERNION_TABLE};

use ndarray::{Array2, Array3};
use thiserror::Error;

use crate::jets::{jet1, jet2, Dual, Real, SmoothMap, SmoothMapDyn};
use crate::report::{max_abs, Residual};

/// Hard bound on chart coordinates; evaluation beyond it is refused.
/// Sampling stays at radius <= 0.5, so products of sampled points remain
/// well inside this bound.
pub const CHART_LIMIT: f64 = 0.9;

/// Default safe sampling radius.
pub const DEFAULT_RADIUS: f64 = 0.3;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LoopKind {
    Abelian,
    Quaternion,
    Octonion,
}

/// A loop instance in chart coordinates around the identity (all zeros).
#[derive(Debug, Clone)]
pub struct LoopChart {
    kind: LoopKind,
    dim: usize,
    radius: f64,
}

#[derive(Debug, Error)]
pub enum LoopError {
    #[error("{loop_name}: expected {expected} chart coordinates, got {got}")]
    Dimension {
        loop_name: &'static str,
        expected: usize,
        got: usize,
    },
    #[error(
        "{loop_name}: point {point:?} outside the chart (|x| = {norm:.4}, limit {CHART_LIMIT})"
    )]
    OutsideChart {
        loop_name: &'static str,
        point: Vec<f64>,
        norm: f64,
    },
    #[error("{loop_name}: product left the chart hemisphere")]
    ProductLeftChart { loop_name: &'static str },
}

fn norm(p: &[f64]) -> f64 {
    p.iter().map(|x| x * x).sum::<f64>().sqrt()
}

impl LoopChart {
    pub fn abelian(dim: usize) -> Self {
        assert!(dim >= 1, "abelian dimension must be positive");
        Self {
            kind: LoopKind::Abelian,
            dim,
            radius: DEFAULT_RADIUS,
        }
    }

    pub fn quaternion() -> Self {
        Self {
            kind: LoopKind::Quaternion,
            dim: 3,
            radius: DEFAULT_RADIUS,
        }
    }

    pub fn octonion() -> Self {
        Self {
            kind: LoopKind::Octonion,
            dim: 7,
            radius: DEFAULT_RADIUS,
        }
    }

    pub fn with_radius(mut self, radius: f64) -> Self {
        assert!(
            radius > 0.0 && radius <= 0.5,
            "sampling radius must lie in (0, 0.5]"
        );
        self.radius = radius;
        self
    }

    pub fn kind(&self) -> LoopKind {
        self.kind
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn name(&self) -> &'static str {
        match self.kind {
            LoopKind::Abelian => "abelian",
            LoopKind::Quaternion => "quaternion",
            LoopKind::Octonion => "octonion",
        }
    }

    pub fn identity(&self) -> Vec<f64> {
        vec![0.0; self.dim]
    }

    fn table(&self) -> Option<&'static AlgTable> {
        match self.kind {
            LoopKind::Abelian => None,
            LoopKind::Quaternion => Some(&QUATERNION_TABLE),
            LoopKind::Octonion => Some(&OCTONION_TABLE),
        }
    }

    /// Validate a chart point (dimension, and the sphere-chart bound).
    pub fn check_point(&self, p: &[f64]) -> Result<(), LoopError> {
        if p.len() != self.dim {
            return Err(LoopError::Dimension {
                loop_name: self.name(),
                expected: self.dim,
                got: p.len(),
            });
        }
        if self.table().is_some() {
            let n = norm(p);
            if n >= CHART_LIMIT {
                return Err(LoopError::OutsideChart {
                    loop_name: self.name(),
                    point: p.to_vec(),
                    norm: n,
                });
            }
        }
        Ok(())
    }

    /// Raw product kernel in chart coordinates, no domain checks.
    pub fn eval_multiply<T: Real>(&self, g: &[T], h: &[T]) -> Vec<T> {
        match self.table() {
            None => g
                .iter()
                .zip(h)
                .map(|(a, b)| a.clone() + b.clone())
                .collect(),
            Some(table) => chart_multiply(table, g, h),
        }
    }

    /// The third translation route: `-(a g + g a)`. Its `a`-derivative at
    /// the identity is the `w` frame, making it the generating map behind
    /// `w = -(u + v)`.
    pub fn eval_third_translation<T: Real>(&self, a: &[T], g: &[T]) -> Vec<T> {
        let left = self.eval_multiply(a, g);
        let right = self.eval_multiply(g, a);
        left.into_iter().zip(right).map(|(l, r)| -(l + r)).collect()
    }

    /// Chart coordinates of the product `g h`.
    pub fn multiply(&self, g: &[f64], h: &[f64]) -> Result<Vec<f64>, LoopError> {
        self.check_point(g)?;
        self.check_point(h)?;
        if let Some(table) = self.table() {
            if algebra::chart_product_re(table, g, h) <= 0.0 {
                return Err(LoopError::ProductLeftChart {
                    loop_name: self.name(),
                });
            }
        }
        Ok(self.eval_multiply(g, h))
    }

    /// Flattened `u` and `v` frames at `g` (row-major `[s * dim + j]`),
    /// generic over the scalar so the frames themselves stay differentiable.
    ///
    /// `u^s_j(g)` is the `a`-derivative of `a g` at `a = e` (left
    /// translations), `v^s_j(g)` the `a`-derivative of `g a` (right
    /// translations); both come out of one dual-seeded product evaluation.
    fn aux_uv<T: Real>(&self, g: &[T]) -> (Vec<T>, Vec<T>) {
        let r = self.dim;
        let a: Vec<Dual<T>> = (0..r).map(|j| Dual::variable(T::zero(), j, r)).collect();
        let gc: Vec<Dual<T>> = g.iter().map(|c| Dual::constant(c.clone())).collect();
        let left = self.eval_multiply(&a, &gc);
        let right = self.eval_multiply(&gc, &a);
        let mut u = Vec::with_capacity(r * r);
        let mut v = Vec::with_capacity(r * r);
        for s in 0..r {
            for j in 0..r {
                u.push(left[s].partial(j));
                v.push(right[s].partial(j));
            }
        }
        (u, v)
    }

    /// Auxiliary frames `u`, `v` and `w = -(u + v)` at `g`.
    pub fn aux_frame(&self, g: &[f64]) -> Result<AuxFrame, LoopError> {
        self.check_point(g)?;
        let r = self.dim;
        let (uf, vf) = self.aux_uv(g);
        let u = Array2::from_shape_vec((r, r), uf).expect("frame shape");
        let v = Array2::from_shape_vec((r, r), vf).expect("frame shape");
        let w = Array2::from_shape_fn((r, r), |(s, j)| -(u[[s, j]] + v[[s, j]]));
        Ok(AuxFrame { u, v, w })
    }

    /// Structure constants of the tangent algebra commutator,
    /// `C^s_{jk} = sigma * (d2 m^s / da^j db^k - d2 m^s / da^k db^j)` at the
    /// identity. The global sign `sigma` is calibrated by the harness.
    pub fn structure_constants(&self, sigma: f64) -> StructureConstants {
        let r = self.dim;
        let jr = jet2(&JointMultiplyMap { chart: self }, &vec![0.0; 2 * r])
            .expect("identity is interior to the chart");
        let hessians = jr.hessians.expect("jet2 carries hessians");
        let mut c = Array3::zeros((r, r, r));
        for (s, h) in hessians.iter().enumerate() {
            for j in 0..r {
                for k in 0..r {
                    c[[s, j, k]] = sigma * (h[[j, r + k]] - h[[k, r + j]]);
                }
            }
        }
        StructureConstants { c }
    }

    /// Secondary frames and the mixed translation brackets at `g`.
    ///
    /// The frame derivatives come from differentiating the auxiliary-frame
    /// map through [`jet1`], i.e. with first-order duals nested through the
    /// inner `a`-derivative.
    pub fn secondary_frame(&self, g: &[f64]) -> Result<SecondaryFrame, LoopError> {
        self.check_point(g)?;
        let r = self.dim;
        let jr = jet1(&AuxFrameMap { chart: self }, g).expect("point validated");

        let val = |block: usize, s: usize, j: usize| jr.value[block * r * r + s * r + j];
        let der = |block: usize, s: usize, j: usize, p: usize| {
            jr.jacobian[[block * r * r + s * r + j, p]]
        };
        let u = |s, j| val(0, s, j);
        let v = |s, j| val(1, s, j);
        let w = |s, j| -(u(s, j) + v(s, j));
        let du = |s, j, p| der(0, s, j, p);
        let dv = |s, j, p| der(1, s, j, p);
        let dw = |s, j, p| -(du(s, j, p) + dv(s, j, p));

        let mut u2 = Array3::zeros((r, r, r));
        let mut v2 = Array3::zeros((r, r, r));
        let mut w2 = Array3::zeros((r, r, r));
        let mut lr = Array3::zeros((r, r, r));
        let mut rl = Array3::zeros((r, r, r));
        for s in 0..r {
            for j in 0..r {
                for k in 0..r {
                    let mut t_u2 = 0.0;
                    let mut t_v2 = 0.0;
                    let mut t_w2 = 0.0;
                    let mut t_lr = 0.0;
                    let mut t_rl = 0.0;
                    for p in 0..r {
                        t_u2 += u(p, k) * du(s, j, p) - u(p, j) * du(s, k, p);
                        t_v2 += v(p, k) * dv(s, j, p) - v(p, j) * dv(s, k, p);
                        t_w2 += w(p, k) * dw(s, j, p) - w(p, j) * dw(s, k, p);
                        t_lr += u(p, j) * dv(s, k, p) - v(p, k) * du(s, j, p);
                        t_rl += v(p, j) * du(s, k, p) - u(p, k) * dv(s, j, p);
                    }
                    u2[[s, j, k]] = t_u2;
                    v2[[s, j, k]] = t_v2;
                    w2[[s, j, k]] = t_w2;
                    lr[[s, j, k]] = t_lr;
                    rl[[s, j, k]] = t_rl;
                }
            }
        }
        Ok(SecondaryFrame { u2, v2, w2, lr, rl })
    }

    /// Yamaguti tensor `Y = (u2 + v2 + w2) / 6` at `g`.
    pub fn yamaguti(&self, g: &[f64]) -> Result<YamagutiTensor, LoopError> {
        Ok(YamagutiTensor::from_frames(&self.secondary_frame(g)?))
    }

    /// Residuals of the loop-side generalized Maurer-Cartan relations:
    /// the self-brackets of the translation fields against `C` and the
    /// mixed brackets, plus the mixed-bracket symmetry.
    pub fn check_maurer_cartan(
        &self,
        c: &StructureConstants,
        g: &[f64],
    ) -> Result<Vec<Residual>, LoopError> {
        let af = self.aux_frame(g)?;
        let sf = self.secondary_frame(g)?;
        let r = self.dim;
        let mut m4a = 0.0f64;
        let mut m4b = 0.0f64;
        let mut m4c = 0.0f64;
        for s in 0..r {
            for j in 0..r {
                for k in 0..r {
                    let cu: f64 = (0..r).map(|m| c.c[[m, j, k]] * af.u[[s, m]]).sum();
                    let cv: f64 = (0..r).map(|m| c.c[[m, j, k]] * af.v[[s, m]]).sum();
                    m4a = m4a.max((-sf.u2[[s, j, k]] - cu + 2.0 * sf.lr[[s, j, k]]).abs());
                    m4b = m4b.max((-sf.v2[[s, j, k]] + cv + 2.0 * sf.rl[[s, j, k]]).abs());
                    m4c = m4c.max((sf.lr[[s, j, k]] - sf.rl[[s, j, k]]).abs());
                }
            }
        }
        Ok(vec![
            Residual::new("mc.4a", m4a),
            Residual::new("mc.4b", m4b),
            Residual::new("mc.4c", m4c),
        ])
    }

    /// Residuals of the decomposition of the secondary frames into the
    /// Yamaguti tensor plus `C`-terms, and the cancellation of the
    /// `C`-terms in their sum. The global sign `tau` is calibrated by the
    /// harness together with `sigma`.
    pub fn check_lemma1(
        &self,
        c: &StructureConstants,
        tau: f64,
        g: &[f64],
    ) -> Result<Vec<Residual>, LoopError> {
        let af = self.aux_frame(g)?;
        let sf = self.secondary_frame(g)?;
        let yam = YamagutiTensor::from_frames(&sf);
        let r = self.dim;
        let third = tau / 3.0;
        let mut m6a = 0.0f64;
        let mut m6b = 0.0f64;
        let mut m6c = 0.0f64;
        let mut msum = 0.0f64;
        for s in 0..r {
            for j in 0..r {
                for k in 0..r {
                    let contract = |f: &dyn Fn(usize) -> f64| -> f64 {
                        (0..r).map(|m| c.c[[m, j, k]] * f(m)).sum()
                    };
                    let c_u2v = contract(&|m| af.u[[s, m]] + 2.0 * af.v[[s, m]]);
                    let c_2uv = contract(&|m| 2.0 * af.u[[s, m]] + af.v[[s, m]]);
                    let c_uv = contract(&|m| af.u[[s, m]] - af.v[[s, m]]);
                    let y2 = 2.0 * yam.y[[s, j, k]];
                    let rhs_a = y2 + third * c_u2v;
                    let rhs_b = y2 - third * c_2uv;
                    let rhs_c = y2 + third * c_uv;
                    m6a = m6a.max((sf.u2[[s, j, k]] - rhs_a).abs());
                    m6b = m6b.max((sf.v2[[s, j, k]] - rhs_b).abs());
                    m6c = m6c.max((sf.w2[[s, j, k]] - rhs_c).abs());
                    msum = msum.max((rhs_a + rhs_b + rhs_c - 6.0 * yam.y[[s, j, k]]).abs());
                }
            }
        }
        Ok(vec![
            Residual::new("lemma1.6a", m6a),
            Residual::new("lemma1.6b", m6b),
            Residual::new("lemma1.6c", m6c),
            Residual::new("lemma1.sum", msum),
        ])
    }

    /// Residual of the Moufang identity `(g h)(k g) = g ((h k) g)`.
    pub fn check_moufang(&self, g: &[f64], h: &[f64], k: &[f64]) -> Result<Residual, LoopError> {
        let gh = self.multiply(g, h)?;
        let kg = self.multiply(k, g)?;
        let lhs = self.multiply(&gh, &kg)?;
        let hk = self.multiply(h, k)?;
        let hkg = self.multiply(&hk, g)?;
        let rhs = self.multiply(g, &hkg)?;
        let gap = lhs
            .iter()
            .zip(&rhs)
            .fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
        Ok(Residual::new("moufang", gap))
    }
}

/// Coefficient matrices of the infinitesimal left/right/"third"
/// translations; `w` is constructed as `-(u + v)`, so the constraint
/// `u + v + w = 0` holds exactly.
#[derive(Debug, Clone)]
pub struct AuxFrame {
    pub u: Array2<f64>,
    pub v: Array2<f64>,
    pub w: Array2<f64>,
}

impl AuxFrame {
    /// Sup-norm of `u + v + w`; zero by construction.
    pub fn constraint_gap(&self) -> f64 {
        let mut m = 0.0f64;
        for ((s, j), val) in self.u.indexed_iter() {
            m = m.max((val + self.v[[s, j]] + self.w[[s, j]]).abs());
        }
        m
    }
}

/// Secondary frames (antisymmetrized frame derivatives, indexed
/// `[s, j, k]`) and the mixed bracket coefficient arrays: `lr` holds the
/// left-right translation bracket, `rl` the right-left one.
#[derive(Debug, Clone)]
pub struct SecondaryFrame {
    pub u2: Array3<f64>,
    pub v2: Array3<f64>,
    pub w2: Array3<f64>,
    pub lr: Array3<f64>,
    pub rl: Array3<f64>,
}

/// Structure constants `C^s_{jk}` of the tangent algebra commutator,
/// antisymmetric in `(j, k)`.
#[derive(Debug, Clone)]
pub struct StructureConstants {
    pub c: Array3<f64>,
}

/// Element of the tangent algebra at the identity.
#[derive(Debug, Clone, PartialEq)]
pub struct TangentVector {
    pub components: Vec<f64>,
}

impl TangentVector {
    pub fn new(components: Vec<f64>) -> Self {
        Self { components }
    }

    /// Basis vector `e_j` of an `r`-dimensional tangent algebra.
    pub fn basis(j: usize, r: usize) -> Self {
        let mut components = vec![0.0; r];
        components[j] = 1.0;
        Self { components }
    }
}

impl StructureConstants {
    /// Tangent-algebra commutator `[x, y]^s = C^s_{jk} x^j y^k`.
    pub fn bracket(&self, x: &TangentVector, y: &TangentVector) -> TangentVector {
        let r = self.c.shape()[0];
        let mut out = vec![0.0; r];
        for (s, out_s) in out.iter_mut().enumerate() {
            for j in 0..r {
                for k in 0..r {
                    *out_s += self.c[[s, j, k]] * x.components[j] * y.components[k];
                }
            }
        }
        TangentVector::new(out)
    }
}

/// Yamaguti tensor: one sixth of the sum of the three secondary frames.
#[derive(Debug, Clone)]
pub struct YamagutiTensor {
    pub y: Array3<f64>,
}

impl YamagutiTensor {
    pub fn from_frames(sf: &SecondaryFrame) -> Self {
        let y = (&sf.u2 + &sf.v2 + &sf.w2) / 6.0;
        Self { y }
    }

    /// Coefficients of the Yamagutian operator field `Y(x; y)`,
    /// `-x^j y^k Y^s_{jk}` in the chart frame.
    pub fn apply(&self, x: &TangentVector, y: &TangentVector) -> Vec<f64> {
        let r = self.y.shape()[0];
        let mut out = vec![0.0; r];
        for (s, out_s) in out.iter_mut().enumerate() {
            for j in 0..r {
                for k in 0..r {
                    *out_s -= self.y[[s, j, k]] * x.components[j] * y.components[k];
                }
            }
        }
        out
    }

    pub fn max_abs(&self) -> f64 {
        max_abs(self.y.iter())
    }
}

/// The two-argument product `(g, h) -> g h` as a single smooth map on the
/// doubled chart, for joint differentiation.
pub struct JointMultiplyMap<'a> {
    pub chart: &'a LoopChart,
}

impl SmoothMap for JointMultiplyMap<'_> {
    fn name(&self) -> &str {
        "multiply"
    }
    fn in_dim(&self) -> usize {
        2 * self.chart.dim()
    }
    fn out_dim(&self) -> usize {
        self.chart.dim()
    }
    fn eval<T: Real>(&self, x: &[T]) -> Vec<T> {
        let r = self.chart.dim();
        self.chart.eval_multiply(&x[..r], &x[r..])
    }
    fn check_domain(&self, x: &[f64]) -> Result<(), String> {
        let r = self.chart.dim();
        self.chart
            .check_point(&x[..r])
            .and_then(|_| self.chart.check_point(&x[r..]))
            .map_err(|e| e.to_string())
    }
}

/// `g -> (u(g), v(g))` flattened, so frame derivatives are obtained by
/// differentiating this map through `jet1`.
pub struct AuxFrameMap<'a> {
    pub chart: &'a LoopChart,
}

impl SmoothMap for AuxFrameMap<'_> {
    fn name(&self) -> &str {
        "aux"
    }
    fn in_dim(&self) -> usize {
        self.chart.dim()
    }
    fn out_dim(&self) -> usize {
        2 * self.chart.dim() * self.chart.dim()
    }
    fn eval<T: Real>(&self, x: &[T]) -> Vec<T> {
        let (mut u, mut v) = self.chart.aux_uv(x);
        u.append(&mut v);
        u
    }
    fn check_domain(&self, x: &[f64]) -> Result<(), String> {
        self.chart.check_point(x).map_err(|e| e.to_string())
    }
}

/// `a ↦ (a g) + (g a) + third-translation(a, g)`: the pointwise sum of the
/// three translation routes at a fixed `g`. Its Jacobian at the identity
/// is `u + v + w`, so a finite-difference Jacobian of this map recomputes
/// the frame constraint without touching dual arithmetic.
pub struct TranslationSumMap<'a> {
    pub chart: &'a LoopChart,
    pub at: Vec<f64>,
}

impl SmoothMap for TranslationSumMap<'_> {
    fn name(&self) -> &str {
        "translation_sum"
    }
    fn in_dim(&self) -> usize {
        self.chart.dim()
    }
    fn out_dim(&self) -> usize {
        self.chart.dim()
    }
    fn eval<T: Real>(&self, a: &[T]) -> Vec<T> {
        let g: Vec<T> = self.at.iter().map(|&c| T::from_f64(c)).collect();
        let left = self.chart.eval_multiply(a, &g);
        let right = self.chart.eval_multiply(&g, a);
        let third = self.chart.eval_third_translation(a, &g);
        left.into_iter()
            .zip(right)
            .zip(third)
            .map(|((l, r), t)| l + r + t)
            .collect()
    }
    fn check_domain(&self, x: &[f64]) -> Result<(), String> {
        self.chart.check_point(x).map_err(|e| e.to_string())
    }
}

/// The maps this module exposes to the differentiation-integrity checks.
pub fn registered_maps<'a>(chart: &'a LoopChart) -> Vec<Box<dyn SmoothMapDyn + 'a>> {
    vec![
        Box::new(JointMultiplyMap { chart }),
        Box::new(AuxFrameMap { chart }),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn abelian_multiply_adds() {
        let ab = LoopChart::abelian(2);
        let p = ab.multiply(&[0.1, 0.2], &[0.3, -0.1]).unwrap();
        assert_eq!(p, vec![0.4, 0.1]);
    }

    #[test]
    fn identity_laws_exact() {
        for chart in [
            LoopChart::abelian(2),
            LoopChart::quaternion(),
            LoopChart::octonion(),
        ] {
            let e = chart.identity();
            let mut g = vec![0.0; chart.dim()];
            for (i, c) in g.iter_mut().enumerate() {
                *c = 0.02 * (i as f64 + 1.0) - 0.05;
            }
            assert_eq!(chart.multiply(&g, &e).unwrap(), g, "{} g e", chart.name());
            assert_eq!(chart.multiply(&e, &g).unwrap(), g, "{} e g", chart.name());
        }
    }

    #[test]
    fn octonion_e1_e2_product_has_e3_component() {
        let oct = LoopChart::octonion();
        let mut x = vec![0.0; 7];
        let mut y = vec![0.0; 7];
        x[0] = 0.1; // 0.1 e1
        y[1] = 0.1; // 0.1 e2
        let p = oct.multiply(&x, &y).unwrap();
        // e1 e2 = e3, so the e3 slot carries x1 * y2 = 0.01.
        assert!((p[2] - 0.01).abs() < 1e-15);
    }

    #[test]
    fn aux_frame_at_identity() {
        for chart in [
            LoopChart::abelian(3),
            LoopChart::quaternion(),
            LoopChart::octonion(),
        ] {
            let af = chart.aux_frame(&chart.identity()).unwrap();
            for s in 0..chart.dim() {
                for j in 0..chart.dim() {
                    let id = if s == j { 1.0 } else { 0.0 };
                    assert_eq!(af.u[[s, j]], id, "{} u", chart.name());
                    assert_eq!(af.v[[s, j]], id, "{} v", chart.name());
                    assert_eq!(af.w[[s, j]], -2.0 * id, "{} w", chart.name());
                }
            }
        }
    }

    #[test]
    fn abelian_aux_constant_and_secondary_zero() {
        let ab = LoopChart::abelian(2);
        let af = ab.aux_frame(&[0.2, -0.1]).unwrap();
        assert_eq!(af.u[[0, 0]], 1.0);
        assert_eq!(af.u[[0, 1]], 0.0);
        assert_eq!(af.constraint_gap(), 0.0);
        let sf = ab.secondary_frame(&[0.2, -0.1]).unwrap();
        assert_eq!(max_abs(sf.u2.iter()), 0.0);
        assert_eq!(max_abs(sf.v2.iter()), 0.0);
        assert_eq!(max_abs(sf.w2.iter()), 0.0);
        assert_eq!(max_abs(sf.lr.iter()), 0.0);
        assert_eq!(max_abs(sf.rl.iter()), 0.0);
    }

    /// Closed form for the quaternion chart frames:
    /// u^s_j(g) = sqrt(1 - |g|^2) δ_sj + ε_{sjq} g^q, and v with the
    /// cross-product term negated.
    #[test]
    fn quaternion_aux_closed_form() {
        let q = LoopChart::quaternion();
        let g = [0.2, 0.0, 0.0];
        let af = q.aux_frame(&g).unwrap();
        let s = (1.0f64 - 0.04).sqrt();
        let expect_u = [[s, 0.0, 0.0], [0.0, s, 0.2], [0.0, -0.2, s]];
        for (r, row) in expect_u.iter().enumerate() {
            for (c, &exp_u) in row.iter().enumerate() {
                assert!((af.u[[r, c]] - exp_u).abs() < 1e-15, "u[{r}][{c}]");
                let exp_v = if r == c { s } else { -exp_u };
                assert!((af.v[[r, c]] - exp_v).abs() < 1e-15, "v[{r}][{c}]");
            }
        }
    }

    #[test]
    fn abelian_structure_constants_vanish() {
        let ab = LoopChart::abelian(2);
        let c = ab.structure_constants(1.0);
        assert_eq!(max_abs(c.c.iter()), 0.0);
    }

    #[test]
    fn quaternion_structure_constants_are_twice_levi_civita() {
        let q = LoopChart::quaternion();
        let c = q.structure_constants(1.0);
        let eps = |s: usize, j: usize, k: usize| -> f64 {
            match (s, j, k) {
                (0, 1, 2) | (1, 2, 0) | (2, 0, 1) => 1.0,
                (0, 2, 1) | (2, 1, 0) | (1, 0, 2) => -1.0,
                _ => 0.0,
            }
        };
        for s in 0..3 {
            for j in 0..3 {
                for k in 0..3 {
                    assert!(
                        (c.c[[s, j, k]] - 2.0 * eps(s, j, k)).abs() < 1e-12,
                        "C[{s}][{j}][{k}] = {}",
                        c.c[[s, j, k]]
                    );
                }
            }
        }
    }

    #[test]
    fn structure_constants_antisymmetric() {
        for chart in [LoopChart::quaternion(), LoopChart::octonion()] {
            let c = chart.structure_constants(-1.0);
            let r = chart.dim();
            for s in 0..r {
                for j in 0..r {
                    for k in 0..r {
                        assert_eq!(c.c[[s, j, k]], -c.c[[s, k, j]]);
                    }
                }
            }
        }
    }

    #[test]
    fn secondary_frames_antisymmetric() {
        let oct = LoopChart::octonion();
        let g: Vec<f64> = (0..7).map(|i| 0.03 * (i as f64) - 0.08).collect();
        let sf = oct.secondary_frame(&g).unwrap();
        for arr in [&sf.u2, &sf.v2, &sf.w2] {
            for s in 0..7 {
                for j in 0..7 {
                    for k in 0..7 {
                        assert_eq!(arr[[s, j, k]], -arr[[s, k, j]]);
                    }
                }
            }
        }
    }

    #[test]
    fn group_mixed_brackets_vanish() {
        let q = LoopChart::quaternion();
        let g = [0.12, -0.2, 0.07];
        let sf = q.secondary_frame(&g).unwrap();
        assert!(
            max_abs(sf.lr.iter()) < 1e-10,
            "lr = {}",
            max_abs(sf.lr.iter())
        );
        assert!(
            max_abs(sf.rl.iter()) < 1e-10,
            "rl = {}",
            max_abs(sf.rl.iter())
        );
    }

    /// The third-translation map generates `w`: differentiating it at the
    /// identity reproduces `-(u + v)` bitwise.
    #[test]
    fn third_translation_derivative_reproduces_w_exactly() {
        struct ThirdMap<'a> {
            chart: &'a LoopChart,
            at: Vec<f64>,
        }
        impl SmoothMap for ThirdMap<'_> {
            fn name(&self) -> &str {
                "third_translation"
            }
            fn in_dim(&self) -> usize {
                self.chart.dim()
            }
            fn out_dim(&self) -> usize {
                self.chart.dim()
            }
            fn eval<T: Real>(&self, a: &[T]) -> Vec<T> {
                let g: Vec<T> = self.at.iter().map(|&c| T::from_f64(c)).collect();
                self.chart.eval_third_translation(a, &g)
            }
        }

        for chart in [LoopChart::quaternion(), LoopChart::octonion()] {
            let g: Vec<f64> = (0..chart.dim())
                .map(|i| 0.05 * (i as f64 + 1.0) - 0.15)
                .collect();
            let af = chart.aux_frame(&g).unwrap();
            let jr = jet1(
                &ThirdMap {
                    chart: &chart,
                    at: g.clone(),
                },
                &chart.identity(),
            )
            .unwrap();
            for s in 0..chart.dim() {
                for j in 0..chart.dim() {
                    assert_eq!(jr.jacobian[[s, j]], af.w[[s, j]], "{}", chart.name());
                }
            }
        }
    }

    /// Commutator through the structure constants: `[e1, e2] = -2 e3` on
    /// the quaternion instance under the calibrated commutator sign.
    #[test]
    fn tangent_bracket_on_quaternions() {
        let q = LoopChart::quaternion();
        let c = q.structure_constants(-1.0);
        let e1 = TangentVector::basis(0, 3);
        let e2 = TangentVector::basis(1, 3);
        let b = c.bracket(&e1, &e2);
        assert!((b.components[2] + 2.0).abs() < 1e-12, "{:?}", b.components);
        assert!(b.components[0].abs() < 1e-12);
        assert!(b.components[1].abs() < 1e-12);
        // antisymmetry
        let ba = c.bracket(&e2, &e1);
        for (x, y) in b.components.iter().zip(&ba.components) {
            assert_eq!(*x, -*y);
        }
    }

    /// The Yamagutian operator is antisymmetric in its arguments and
    /// vanishes on the diagonal.
    #[test]
    fn yamagutian_operator_antisymmetric() {
        let oct = LoopChart::octonion();
        let g: Vec<f64> = (0..7).map(|i| 0.04 * (i as f64 + 1.0) - 0.13).collect();
        let yam = oct.yamaguti(&g).unwrap();
        let x = TangentVector::new((0..7).map(|i| 0.1 * (i as f64) - 0.3).collect());
        let y = TangentVector::new((0..7).map(|i| 0.07 * (i as f64 + 2.0) - 0.2).collect());
        let xy = yam.apply(&x, &y);
        let yx = yam.apply(&y, &x);
        for (a, b) in xy.iter().zip(&yx) {
            assert!((a + b).abs() <= 1e-15);
        }
        let xx = yam.apply(&x, &x);
        assert!(max_abs(xx.iter()) <= 1e-15);
        // and it is actually nonzero at a generic octonion point
        assert!(max_abs(xy.iter()) > 1e-4, "{:?}", xy);
    }

    /// On a group the mixed brackets vanish, so the third secondary frame
    /// collapses to the sum of the first two and 6Y = 2(u2 + v2).
    #[test]
    fn group_yamaguti_reduces_to_self_brackets() {
        let q = LoopChart::quaternion();
        let g = [0.15, 0.08, -0.11];
        let sf = q.secondary_frame(&g).unwrap();
        let y = q.yamaguti(&g).unwrap();
        let mut gap = 0.0f64;
        for s in 0..3 {
            for j in 0..3 {
                for k in 0..3 {
                    let lhs = 6.0 * y.y[[s, j, k]];
                    let rhs = 2.0 * (sf.u2[[s, j, k]] + sf.v2[[s, j, k]]);
                    gap = gap.max((lhs - rhs).abs());
                }
            }
        }
        assert!(gap <= 1e-10, "gap {gap}");
    }

    #[test]
    fn moufang_residual_zero_on_abelian() {
        let ab = LoopChart::abelian(2);
        let res = ab
            .check_moufang(&[0.1, 0.2], &[0.05, -0.1], &[-0.04, 0.02])
            .unwrap();
        assert_eq!(res.max_abs, 0.0);
    }

    #[test]
    fn moufang_residual_small_on_quaternion() {
        let q = LoopChart::quaternion();
        let res = q
            .check_moufang(
                &[0.1, 0.05, -0.02],
                &[0.03, -0.08, 0.11],
                &[-0.06, 0.04, 0.02],
            )
            .unwrap();
        assert!(res.max_abs <= 1e-12, "residual {}", res.max_abs);
    }

    #[test]
    fn out_of_chart_point_is_rejected() {
        let oct = LoopChart::octonion();
        let mut far = vec![0.0; 7];
        far[0] = 0.95;
        let err = oct.multiply(&far, &[0.0; 7]).unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("octonion"));
        assert!(msg.contains("outside the chart"));
    }

    #[test]
    fn dimension_mismatch_is_rejected() {
        let q = LoopChart::quaternion();
        assert!(matches!(
            q.multiply(&[0.1, 0.2], &[0.0, 0.0, 0.0]),
            Err(LoopError::Dimension { .. })
        ));
    }
}
