//! Multi-directional first-order dual numbers.

use std::ops::{Add, Div, Mul, Neg, Sub};

use super::real::Real;

/// First-order dual number carrying one partial per active input.
///
/// An empty partial vector marks a constant; constants broadcast against
/// seeded values, so `Real::from_f64` needs no knowledge of the active
/// variable count. The coefficient type is generic: `Dual<f64>` computes
/// first derivatives, `Dual<Dual<f64>>` differentiates a quantity that is
/// itself a derivative.
#[derive(Clone, Debug, PartialEq)]
pub struct Dual<T> {
    pub re: T,
    pub eps: Vec<T>,
}

impl<T: Real> Dual<T> {
    pub fn constant(re: T) -> Self {
        Self {
            re,
            eps: Vec::new(),
        }
    }

    /// Seed variable `idx` out of `width` active inputs.
    pub fn variable(re: T, idx: usize, width: usize) -> Self {
        let mut eps = vec![T::zero(); width];
        eps[idx] = T::one();
        Self { re, eps }
    }

    /// Partial with respect to input `idx` (zero for constants).
    pub fn partial(&self, idx: usize) -> T {
        self.eps.get(idx).cloned().unwrap_or_else(T::zero)
    }
}

/// Combine two partial vectors entrywise, broadcasting empty (constant) sides.
fn zip_eps<T: Real>(a: &[T], b: &[T], f: impl Fn(T, T) -> T) -> Vec<T> {
    match (a.is_empty(), b.is_empty()) {
        (true, true) => Vec::new(),
        (true, false) => b.iter().map(|y| f(T::zero(), y.clone())).collect(),
        (false, true) => a.iter().map(|x| f(x.clone(), T::zero())).collect(),
        (false, false) => {
            assert_eq!(a.len(), b.len(), "mixed dual widths");
            a.iter()
                .zip(b)
                .map(|(x, y)| f(x.clone(), y.clone()))
                .collect()
        }
    }
}

impl<T: Real> Add for Dual<T> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self {
            re: self.re.clone() + rhs.re.clone(),
            eps: zip_eps(&self.eps, &rhs.eps, |x, y| x + y),
        }
    }
}

impl<T: Real> Sub for Dual<T> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Self {
            re: self.re.clone() - rhs.re.clone(),
            eps: zip_eps(&self.eps, &rhs.eps, |x, y| x - y),
        }
    }
}

#[allow(clippy::suspicious_arithmetic_impl)]
impl<T: Real> Mul for Dual<T> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        // Product rule: (f g)' = f g' + f' g.
        let re = self.re.clone() * rhs.re.clone();
        let eps = zip_eps(&self.eps, &rhs.eps, |x, y| {
            self.re.clone() * y + x * rhs.re.clone()
        });
        Self { re, eps }
    }
}

#[allow(clippy::suspicious_arithmetic_impl)]
impl<T: Real> Div for Dual<T> {
    type Output = Self;
    fn div(self, rhs: Self) -> Self {
        // Quotient rule in the form (f/g)' = (f' - (f/g) g') / g.
        let q = self.re.clone() / rhs.re.clone();
        let eps = zip_eps(&self.eps, &rhs.eps, |x, y| {
            (x - q.clone() * y) / rhs.re.clone()
        });
        Self { re: q, eps }
    }
}

impl<T: Real> Neg for Dual<T> {
    type Output = Self;
    fn neg(self) -> Self {
        Self {
            re: -self.re,
            eps: self.eps.into_iter().map(|x| -x).collect(),
        }
    }
}

impl<T: Real> Real for Dual<T> {
    fn from_f64(c: f64) -> Self {
        Self::constant(T::from_f64(c))
    }

    fn sqrt(&self) -> Self {
        // (sqrt f)' = f' / (2 sqrt f)
        let r = self.re.sqrt();
        let denom = r.clone() + r.clone();
        Self {
            re: r,
            eps: self.eps.iter().map(|x| x.clone() / denom.clone()).collect(),
        }
    }
}
