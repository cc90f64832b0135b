//! Forward-mode differentiation of smooth vector maps.
//!
//! First derivatives propagate through [`Dual`] numbers, second derivatives
//! through [`Dual2`], so identity residuals downstream are limited by
//! rounding rather than finite-difference truncation. [`fd_jacobian`] and
//! [`fd_hessians`] provide the independent central-difference oracles used
//! by the test suites; they never feed identity evaluation.

mod dual;
mod hyperdual;
mod real;

pub use dual::Dual;
pub use hyperdual::Dual2;
pub use real::Real;

use ndarray::{Array1, Array2};
use thiserror::Error;

/// A smooth vector map, evaluable on any [`Real`] scalar.
///
/// Implementors write `eval` once; the jet drivers instantiate it at
/// `f64`, `Dual<f64>` or `Dual2`. A map whose body takes derivatives of
/// its own (such as an auxiliary-frame map) nests `Dual<T>` inside and
/// stays differentiable.
pub trait SmoothMap {
    fn name(&self) -> &str;
    fn in_dim(&self) -> usize;
    fn out_dim(&self) -> usize;
    fn eval<T: Real>(&self, x: &[T]) -> Vec<T>;

    /// Reject points where the map is not defined (chart exits).
    fn check_domain(&self, _x: &[f64]) -> Result<(), String> {
        Ok(())
    }
}

/// Object-safe view of a [`SmoothMap`], for heterogeneous map registries.
pub trait SmoothMapDyn {
    fn name(&self) -> &str;
    fn in_dim(&self) -> usize;
    fn out_dim(&self) -> usize;
    fn check_domain(&self, x: &[f64]) -> Result<(), String>;
    fn eval_f64(&self, x: &[f64]) -> Vec<f64>;
    fn eval_dual(&self, x: &[Dual<f64>]) -> Vec<Dual<f64>>;
    fn eval_dual2(&self, x: &[Dual2]) -> Vec<Dual2>;
}

impl<M: SmoothMap> SmoothMapDyn for M {
    fn name(&self) -> &str {
        SmoothMap::name(self)
    }
    fn in_dim(&self) -> usize {
        SmoothMap::in_dim(self)
    }
    fn out_dim(&self) -> usize {
        SmoothMap::out_dim(self)
    }
    fn check_domain(&self, x: &[f64]) -> Result<(), String> {
        SmoothMap::check_domain(self, x)
    }
    fn eval_f64(&self, x: &[f64]) -> Vec<f64> {
        self.eval(x)
    }
    fn eval_dual(&self, x: &[Dual<f64>]) -> Vec<Dual<f64>> {
        self.eval(x)
    }
    fn eval_dual2(&self, x: &[Dual2]) -> Vec<Dual2> {
        self.eval(x)
    }
}

/// Value, Jacobian, and (for second-order jets) per-output Hessians.
#[derive(Clone, Debug)]
pub struct JetResult {
    pub value: Array1<f64>,
    /// Rows index outputs, columns index inputs.
    pub jacobian: Array2<f64>,
    pub hessians: Option<Vec<Array2<f64>>>,
}

#[derive(Debug, Error)]
pub enum JetError {
    #[error("map `{map}` expects {expected} inputs, got {got}")]
    Dimension {
        map: String,
        expected: usize,
        got: usize,
    },
    #[error("map `{map}` not defined at {point:?}: {reason}")]
    Domain {
        map: String,
        point: Vec<f64>,
        reason: String,
    },
}

fn check_input(map: &dyn SmoothMapDyn, at: &[f64]) -> Result<(), JetError> {
    if at.len() != map.in_dim() {
        return Err(JetError::Dimension {
            map: map.name().to_string(),
            expected: map.in_dim(),
            got: at.len(),
        });
    }
    map.check_domain(at).map_err(|reason| JetError::Domain {
        map: map.name().to_string(),
        point: at.to_vec(),
        reason,
    })
}

/// Value and exact Jacobian of `map` at `at`.
pub fn jet1(map: &dyn SmoothMapDyn, at: &[f64]) -> Result<JetResult, JetError> {
    check_input(map, at)?;
    let n = at.len();
    let seeds: Vec<Dual<f64>> = at
        .iter()
        .enumerate()
        .map(|(i, &v)| Dual::variable(v, i, n))
        .collect();
    let out = map.eval_dual(&seeds);
    assert_eq!(
        out.len(),
        map.out_dim(),
        "map `{}` output arity",
        map.name()
    );

    let value = Array1::from_iter(out.iter().map(|y| y.re));
    let mut jacobian = Array2::zeros((out.len(), n));
    for (r, y) in out.iter().enumerate() {
        for c in 0..n {
            jacobian[[r, c]] = y.partial(c);
        }
    }
    Ok(JetResult {
        value,
        jacobian,
        hessians: None,
    })
}

/// Value, Jacobian, and one symmetric Hessian per output component.
pub fn jet2(map: &dyn SmoothMapDyn, at: &[f64]) -> Result<JetResult, JetError> {
    check_input(map, at)?;
    let n = at.len();
    let seeds: Vec<Dual2> = at
        .iter()
        .enumerate()
        .map(|(i, &v)| Dual2::variable(v, i, n))
        .collect();
    let out = map.eval_dual2(&seeds);
    assert_eq!(
        out.len(),
        map.out_dim(),
        "map `{}` output arity",
        map.name()
    );

    let value = Array1::from_iter(out.iter().map(|y| y.v));
    let mut jacobian = Array2::zeros((out.len(), n));
    let mut hessians = Vec::with_capacity(out.len());
    for (r, y) in out.iter().enumerate() {
        let g = y.gradient(n);
        for c in 0..n {
            jacobian[[r, c]] = g[c];
        }
        hessians.push(Array2::from_shape_vec((n, n), y.hessian(n)).expect("hessian shape"));
    }
    Ok(JetResult {
        value,
        jacobian,
        hessians: Some(hessians),
    })
}

/// Central-difference Jacobian; the independent oracle for [`jet1`].
pub fn fd_jacobian(map: &dyn SmoothMapDyn, at: &[f64], step: f64) -> Result<Array2<f64>, JetError> {
    assert!(step > 0.0, "step must be positive");
    check_input(map, at)?;
    let n = at.len();
    let mut jacobian = Array2::zeros((map.out_dim(), n));
    for j in 0..n {
        let mut hi = at.to_vec();
        let mut lo = at.to_vec();
        hi[j] += step;
        lo[j] -= step;
        check_input(map, &hi)?;
        check_input(map, &lo)?;
        let fh = map.eval_f64(&hi);
        let fl = map.eval_f64(&lo);
        // Divide by the realized spread, not 2*step: the rounded stencil
        // points are what the evaluations actually saw.
        let spread = hi[j] - lo[j];
        for r in 0..map.out_dim() {
            jacobian[[r, j]] = (fh[r] - fl[r]) / spread;
        }
    }
    Ok(jacobian)
}

/// Central second-difference Hessians; the independent oracle for [`jet2`].
pub fn fd_hessians(
    map: &dyn SmoothMapDyn,
    at: &[f64],
    step: f64,
) -> Result<Vec<Array2<f64>>, JetError> {
    assert!(step > 0.0, "step must be positive");
    check_input(map, at)?;
    let n = at.len();
    let m = map.out_dim();
    let f0 = map.eval_f64(at);
    let shifted = |dj: f64, j: usize, dk: f64, k: usize| -> Result<Vec<f64>, JetError> {
        let mut x = at.to_vec();
        x[j] += dj;
        x[k] += dk;
        check_input(map, &x)?;
        Ok(map.eval_f64(&x))
    };
    let mut hessians = vec![Array2::zeros((n, n)); m];
    for j in 0..n {
        for k in j..n {
            let vals: Vec<f64> = if j == k {
                let fp = shifted(step, j, 0.0, j)?;
                let fm = shifted(-step, j, 0.0, j)?;
                (0..m)
                    .map(|r| (fp[r] - 2.0 * f0[r] + fm[r]) / (step * step))
                    .collect()
            } else {
                let fpp = shifted(step, j, step, k)?;
                let fpm = shifted(step, j, -step, k)?;
                let fmp = shifted(-step, j, step, k)?;
                let fmm = shifted(-step, j, -step, k)?;
                (0..m)
                    .map(|r| (fpp[r] - fpm[r] - fmp[r] + fmm[r]) / (4.0 * step * step))
                    .collect()
            };
            for r in 0..m {
                hessians[r][[j, k]] = vals[r];
                hessians[r][[k, j]] = vals[r];
            }
        }
    }
    Ok(hessians)
}
