//! Second-order (hyper-dual) numbers with a full Hessian.

use std::ops::{Add, Div, Mul, Neg, Sub};

use super::real::Real;

/// Scalar carrying value, gradient and Hessian over `n` active inputs.
///
/// The Hessian is stored dense (row-major `n * n`). Every operation fills
/// the upper triangle once and mirrors it, so Hessians stay bitwise
/// symmetric no matter how expressions associate.
#[derive(Clone, Debug, PartialEq)]
pub struct Dual2 {
    pub v: f64,
    /// Gradient; empty marks a constant.
    pub g: Vec<f64>,
    /// Hessian, row-major; empty marks a constant.
    pub h: Vec<f64>,
}

impl Dual2 {
    pub fn constant(v: f64) -> Self {
        Self {
            v,
            g: Vec::new(),
            h: Vec::new(),
        }
    }

    /// Seed variable `idx` out of `width` active inputs.
    pub fn variable(v: f64, idx: usize, width: usize) -> Self {
        let mut g = vec![0.0; width];
        g[idx] = 1.0;
        Self {
            v,
            g,
            h: vec![0.0; width * width],
        }
    }

    fn width(&self, rhs: &Self) -> usize {
        let (a, b) = (self.g.len(), rhs.g.len());
        if a != 0 && b != 0 {
            assert_eq!(a, b, "mixed hyper-dual widths");
        }
        a.max(b)
    }

    fn grad(&self, i: usize) -> f64 {
        self.g.get(i).copied().unwrap_or(0.0)
    }

    fn hess(&self, n: usize, i: usize, j: usize) -> f64 {
        self.h.get(i * n + j).copied().unwrap_or(0.0)
    }

    pub fn gradient(&self, width: usize) -> Vec<f64> {
        (0..width).map(|i| self.grad(i)).collect()
    }

    pub fn hessian(&self, width: usize) -> Vec<f64> {
        let mut out = vec![0.0; width * width];
        if !self.h.is_empty() {
            out.copy_from_slice(&self.h);
        }
        out
    }

    /// Build gradient/Hessian from closures, mirroring the upper triangle.
    fn map2(
        n: usize,
        grad: impl Fn(usize) -> f64,
        hess: impl Fn(usize, usize) -> f64,
    ) -> (Vec<f64>, Vec<f64>) {
        let g: Vec<f64> = (0..n).map(&grad).collect();
        let mut h = vec![0.0; n * n];
        for i in 0..n {
            for j in i..n {
                let val = hess(i, j);
                h[i * n + j] = val;
                h[j * n + i] = val;
            }
        }
        (g, h)
    }
}

impl Add for Dual2 {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        let n = self.width(&rhs);
        let (g, h) = Dual2::map2(
            n,
            |i| self.grad(i) + rhs.grad(i),
            |i, j| self.hess(n, i, j) + rhs.hess(n, i, j),
        );
        Self {
            v: self.v + rhs.v,
            g,
            h,
        }
    }
}

impl Sub for Dual2 {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        let n = self.width(&rhs);
        let (g, h) = Dual2::map2(
            n,
            |i| self.grad(i) - rhs.grad(i),
            |i, j| self.hess(n, i, j) - rhs.hess(n, i, j),
        );
        Self {
            v: self.v - rhs.v,
            g,
            h,
        }
    }
}

#[allow(clippy::suspicious_arithmetic_impl)]
impl Mul for Dual2 {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        // (f g)'  = f g' + f' g
        // (f g)'' = f g'' + f'' g + f_i g_j + f_j g_i
        let n = self.width(&rhs);
        let (g, h) = Dual2::map2(
            n,
            |i| self.v * rhs.grad(i) + self.grad(i) * rhs.v,
            |i, j| {
                self.v * rhs.hess(n, i, j)
                    + self.hess(n, i, j) * rhs.v
                    + self.grad(i) * rhs.grad(j)
                    + self.grad(j) * rhs.grad(i)
            },
        );
        Self {
            v: self.v * rhs.v,
            g,
            h,
        }
    }
}

#[allow(clippy::suspicious_arithmetic_impl)]
impl Div for Dual2 {
    type Output = Self;
    fn div(self, rhs: Self) -> Self {
        // From f = q g: q' = (f' - q g') / g and
        // q'' = (f'' - q_i g_j - q_j g_i - q g'') / g.
        let n = self.width(&rhs);
        let q = self.v / rhs.v;
        let qg: Vec<f64> = (0..n)
            .map(|i| (self.grad(i) - q * rhs.grad(i)) / rhs.v)
            .collect();
        let (g, h) = Dual2::map2(
            n,
            |i| qg[i],
            |i, j| {
                (self.hess(n, i, j)
                    - qg[i] * rhs.grad(j)
                    - qg[j] * rhs.grad(i)
                    - q * rhs.hess(n, i, j))
                    / rhs.v
            },
        );
        Self { v: q, g, h }
    }
}

impl Neg for Dual2 {
    type Output = Self;
    fn neg(self) -> Self {
        Self {
            v: -self.v,
            g: self.g.into_iter().map(|x| -x).collect(),
            h: self.h.into_iter().map(|x| -x).collect(),
        }
    }
}

impl Real for Dual2 {
    fn from_f64(c: f64) -> Self {
        Self::constant(c)
    }

    fn sqrt(&self) -> Self {
        // r = sqrt f: r' = f' / (2 r), r'' = (f'' - 2 r_i r_j) / (2 r).
        let r = self.v.sqrt();
        let denom = r + r;
        let n = self.g.len();
        let rg: Vec<f64> = (0..n).map(|i| self.grad(i) / denom).collect();
        let (g, h) = Dual2::map2(
            n,
            |i| rg[i],
            |i, j| (self.hess(n, i, j) - 2.0 * rg[i] * rg[j]) / denom,
        );
        Self { v: r, g, h }
    }
}
