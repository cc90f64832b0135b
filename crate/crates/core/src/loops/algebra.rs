//! Basis multiplication tables of the quaternions and octonions, plus the
//! unit-sphere chart kernels built on them.

use std::sync::LazyLock;

use crate::jets::Real;

/// Basis products of a real composition algebra with unit `e0`.
///
/// `mul[i][j] = (sign, k)` encodes `e_i e_j = sign * e_k`; every basis
/// product is a signed basis element, so a bilinear product needs only
/// table lookups.
pub struct AlgTable {
    pub dim: usize,
    mul: Vec<Vec<(f64, usize)>>,
}

impl AlgTable {
    /// Build the table from positively oriented imaginary triples
    /// (`(a, b, c)` meaning `e_a e_b = e_c` cyclically).
    #[allow(clippy::needless_range_loop)]
    fn from_triples(dim: usize, triples: &[(usize, usize, usize)]) -> Self {
        let mut mul = vec![vec![None; dim]; dim];
        mul[0][0] = Some((1.0, 0));
        for i in 1..dim {
            mul[0][i] = Some((1.0, i));
            mul[i][0] = Some((1.0, i));
            mul[i][i] = Some((-1.0, 0));
        }
        for &(a, b, c) in triples {
            for &(x, y, z) in &[(a, b, c), (b, c, a), (c, a, b)] {
                mul[x][y] = Some((1.0, z));
                mul[y][x] = Some((-1.0, z));
            }
        }
        let mul = mul
            .into_iter()
            .map(|row| {
                row.into_iter()
                    .map(|e| e.expect("incomplete multiplication table"))
                    .collect()
            })
            .collect();
        Self { dim, mul }
    }

    pub fn entry(&self, i: usize, j: usize) -> (f64, usize) {
        self.mul[i][j]
    }

    /// Bilinear product of two coefficient vectors.
    #[allow(clippy::needless_range_loop)]
    pub fn multiply<T: Real>(&self, x: &[T], y: &[T]) -> Vec<T> {
        let mut out = vec![T::zero(); self.dim];
        for i in 0..self.dim {
            for j in 0..self.dim {
                let (sign, k) = self.mul[i][j];
                let term = x[i].clone() * y[j].clone();
                out[k] = out[k].clone() + if sign < 0.0 { -term } else { term };
            }
        }
        out
    }
}

/// Hamilton quaternions: ij = k.
pub static QUATERNION_TABLE: LazyLock<AlgTable> =
    LazyLock::new(|| AlgTable::from_triples(4, &[(1, 2, 3)]));

/// Octonions as Cayley–Dickson pairs of quaternions, e4 = (0, 1).
pub static OCTONION_TABLE: LazyLock<AlgTable> = LazyLock::new(|| {
    AlgTable::from_triples(
        8,
        &[
            (1, 2, 3),
            (1, 4, 5),
            (2, 4, 6),
            (3, 4, 7),
            (2, 5, 7),
            (1, 7, 6),
            (3, 6, 5),
        ],
    )
});

/// Complete a chart point to a unit element: `(sqrt(1 - |x|^2), x)`.
/// The chart covers the hemisphere with positive real part.
pub fn chart_lift<T: Real>(x: &[T]) -> Vec<T> {
    let mut nsq = T::zero();
    for c in x {
        nsq = nsq + c.clone() * c.clone();
    }
    let re = (T::one() - nsq).sqrt();
    let mut out = Vec::with_capacity(x.len() + 1);
    out.push(re);
    out.extend_from_slice(x);
    out
}

/// Product of two chart points: lift, multiply, drop the real part.
pub fn chart_multiply<T: Real>(table: &AlgTable, x: &[T], y: &[T]) -> Vec<T> {
    let qx = chart_lift(x);
    let qy = chart_lift(y);
    let q = table.multiply(&qx, &qy);
    q[1..].to_vec()
}

/// Real part of the product of two chart points (hemisphere test).
pub fn chart_product_re(table: &AlgTable, x: &[f64], y: &[f64]) -> f64 {
    let q = table.multiply(&chart_lift(x), &chart_lift(y));
    q[0]
}
