//! Column Hermite normal form over the integers with a unimodular transform.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

pub(crate) type IntMatrix = Vec<Vec<BigInt>>;

/// `H = A * U` with `U` unimodular and `H` in column echelon form: the first
/// `rank` columns have strictly increasing pivot rows with positive pivots,
/// the remaining columns are zero.
#[derive(Debug, Clone)]
pub(crate) struct ColumnHermite {
    pub h: IntMatrix,
    pub u: IntMatrix,
    /// Pivot row of each of the first `rank` columns.
    pub pivots: Vec<usize>,
}

impl ColumnHermite {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Columns of `U` mapping to zero columns of `H`: a basis of the integer kernel of `A`.
    pub fn kernel(&self) -> Vec<Vec<BigInt>> {
        let cols = self.u.first().map_or(0, |r| r.len());
        (self.rank()..cols).map(|j| column(&self.u, j)).collect()
    }

    /// Integer `x` with `A x = b`, if any.
    pub fn solve(&self, b: &[BigInt]) -> Option<Vec<BigInt>> {
        let rows = self.h.len();
        let cols = self.u.len();
        let mut y = vec![BigInt::zero(); cols];
        let mut residual: Vec<BigInt> = b.to_vec();
        for (j, &p) in self.pivots.iter().enumerate() {
            // rows above p are already zero in the residual
            if residual[..p].iter().any(|r| !r.is_zero()) {
                return None;
            }
            let (q, rem) = residual[p].div_rem(&self.h[p][j]);
            if !rem.is_zero() {
                return None;
            }
            for (i, r) in residual.iter_mut().enumerate().take(rows) {
                *r -= &q * &self.h[i][j];
            }
            y[j] = q;
        }
        if residual.iter().any(|r| !r.is_zero()) {
            return None;
        }
        Some(mat_vec(&self.u, &y))
    }
}

fn column(m: &IntMatrix, j: usize) -> Vec<BigInt> {
    m.iter().map(|row| row[j].clone()).collect()
}

pub(crate) fn mat_vec(m: &IntMatrix, v: &[BigInt]) -> Vec<BigInt> {
    m.iter()
        .map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum())
        .collect()
}

pub(crate) fn identity(n: usize) -> IntMatrix {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    if i == j {
                        BigInt::one()
                    } else {
                        BigInt::zero()
                    }
                })
                .collect()
        })
        .collect()
}

/// Replaces columns `(p, q)` of `m` by `(x c_p + y c_q, s c_p + t c_q)`.
fn column_op(m: &mut IntMatrix, p: usize, q: usize, coeffs: [&BigInt; 4]) {
    let [x, y, s, t] = coeffs;
    for row in m.iter_mut() {
        let (a, b) = (row[p].clone(), row[q].clone());
        row[p] = x * &a + y * &b;
        row[q] = s * &a + t * &b;
    }
}

fn negate_column(m: &mut IntMatrix, p: usize) {
    for row in m.iter_mut() {
        row[p] = -&row[p];
    }
}

fn swap_columns(m: &mut IntMatrix, p: usize, q: usize) {
    for row in m.iter_mut() {
        row.swap(p, q);
    }
}

pub(crate) fn column_hermite(a: &IntMatrix, cols: usize) -> ColumnHermite {
    let mut h = a.clone();
    let mut u = identity(cols);
    let mut pivots = Vec::new();
    let mut next = 0;
    for i in 0..h.len() {
        if next == cols {
            break;
        }
        for j in next + 1..cols {
            if h[i][j].is_zero() {
                continue;
            }
            if h[i][next].is_zero() {
                swap_columns(&mut h, next, j);
                swap_columns(&mut u, next, j);
                continue;
            }
            let (a, b) = (h[i][next].clone(), h[i][j].clone());
            let e = a.extended_gcd(&b);
            let (g, x, y) = (e.gcd, e.x, e.y);
            let s = -(&b / &g);
            let t = &a / &g;
            column_op(&mut h, next, j, [&x, &y, &s, &t]);
            column_op(&mut u, next, j, [&x, &y, &s, &t]);
        }
        if !h[i][next].is_zero() {
            if h[i][next].is_negative() {
                negate_column(&mut h, next);
                negate_column(&mut u, next);
            }
            pivots.push(i);
            next += 1;
        }
    }
    ColumnHermite { h, u, pivots }
}

/// Determinant by fraction-free Gaussian elimination (Bareiss).
pub(crate) fn determinant(m: &IntMatrix) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut a = m.clone();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(i, k);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    sign * &a[n - 1][n - 1]
}
