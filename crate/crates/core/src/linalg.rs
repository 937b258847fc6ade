//! Dense exact-rational matrices and fraction-free elimination.
//!
//! All the operator identities in this crate are checked as equalities of
//! matrices over Q. Dimensions stay small (a few hundred at most), so a
//! dense representation keeps the code auditable. Rank and kernel go through
//! Bareiss fraction-free elimination on integer matrices obtained by clearing
//! denominators row by row.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::scalar::Q;

/// Dense matrix over the rationals, row-major.
#[derive(Clone, PartialEq, Eq)]
pub struct QMat {
    pub rows: usize,
    pub cols: usize,
    data: Vec<Q>,
}

impl std::fmt::Debug for QMat {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "QMat {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols)
                .map(|j| crate::scalar::format_rat(self.at(i, j)))
                .collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

impl QMat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        QMat {
            rows,
            cols,
            data: vec![Q::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            *m.at_mut(i, i) = Q::one();
        }
        m
    }

    /// Builds a matrix from its columns.
    pub fn from_cols(rows: usize, cols: Vec<Vec<Q>>) -> Self {
        let ncols = cols.len();
        let mut m = Self::zeros(rows, ncols);
        for (j, col) in cols.into_iter().enumerate() {
            assert_eq!(col.len(), rows, "column length mismatch");
            for (i, v) in col.into_iter().enumerate() {
                *m.at_mut(i, j) = v;
            }
        }
        m
    }

    #[inline]
    pub fn at(&self, i: usize, j: usize) -> &Q {
        &self.data[i * self.cols + j]
    }

    #[inline]
    pub fn at_mut(&mut self, i: usize, j: usize) -> &mut Q {
        &mut self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Q) {
        self.data[i * self.cols + j] = v;
    }

    pub fn add_at(&mut self, i: usize, j: usize, v: &Q) {
        let cell = self.at_mut(i, j);
        *cell += v;
    }

    pub fn column(&self, j: usize) -> Vec<Q> {
        (0..self.rows).map(|i| self.at(i, j).clone()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    /// Matrix product `self * rhs`.
    pub fn mul(&self, rhs: &QMat) -> QMat {
        assert_eq!(self.cols, rhs.rows, "matrix shapes do not compose");
        let mut out = QMat::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.at(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = rhs.at(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let cell = out.at_mut(i, j);
                    *cell += a * b;
                }
            }
        }
        out
    }

    pub fn add(&self, rhs: &QMat) -> QMat {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        let mut out = self.clone();
        for (a, b) in out.data.iter_mut().zip(rhs.data.iter()) {
            *a += b;
        }
        out
    }

    pub fn sub(&self, rhs: &QMat) -> QMat {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        let mut out = self.clone();
        for (a, b) in out.data.iter_mut().zip(rhs.data.iter()) {
            *a -= b;
        }
        out
    }

    pub fn scale(&self, c: &Q) -> QMat {
        let mut out = self.clone();
        for a in out.data.iter_mut() {
            *a *= c;
        }
        out
    }

    /// Applies the matrix to a coordinate vector.
    pub fn apply(&self, v: &[Q]) -> Vec<Q> {
        assert_eq!(v.len(), self.cols);
        let mut out = vec![Q::zero(); self.rows];
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self.at(i, j);
                if !a.is_zero() && !v[j].is_zero() {
                    out[i] += a * &v[j];
                }
            }
        }
        out
    }

    /// Kronecker (tensor) product; the left factor is the major index, so
    /// this matches the big-endian word indexing used for tensor powers.
    pub fn kron(&self, rhs: &QMat) -> QMat {
        let mut out = QMat::zeros(self.rows * rhs.rows, self.cols * rhs.cols);
        for ia in 0..self.rows {
            for ja in 0..self.cols {
                let a = self.at(ia, ja);
                if a.is_zero() {
                    continue;
                }
                for ib in 0..rhs.rows {
                    for jb in 0..rhs.cols {
                        let b = rhs.at(ib, jb);
                        if !b.is_zero() {
                            out.set(ia * rhs.rows + ib, ja * rhs.cols + jb, a * b);
                        }
                    }
                }
            }
        }
        out
    }

    /// Stacks `self` on top of `other` (same number of columns).
    pub fn vstack(&self, other: &QMat) -> QMat {
        assert_eq!(self.cols, other.cols);
        let mut out = QMat::zeros(self.rows + other.rows, self.cols);
        out.data[..self.rows * self.cols].clone_from_slice(&self.data);
        out.data[self.rows * self.cols..].clone_from_slice(&other.data);
        out
    }

    /// Clears denominators row by row, yielding an integer matrix with the
    /// same row space (and hence the same rank and kernel).
    fn to_integer_rows(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows)
            .map(|i| {
                let mut lcm = BigInt::one();
                for j in 0..self.cols {
                    lcm = lcm.lcm(self.at(i, j).denom());
                }
                (0..self.cols)
                    .map(|j| {
                        let x = self.at(i, j);
                        x.numer() * (&lcm / x.denom())
                    })
                    .collect()
            })
            .collect()
    }

    /// Exact rank via Bareiss fraction-free elimination.
    pub fn rank(&self) -> usize {
        let mut m = self.to_integer_rows();
        bareiss_echelon(&mut m).len()
    }

    /// Basis of the right kernel `{ v : self * v = 0 }`.
    pub fn kernel(&self) -> Vec<Vec<Q>> {
        let mut m = self.to_integer_rows();
        let pivots = bareiss_echelon(&mut m);
        let pivot_cols: Vec<usize> = pivots.iter().map(|&(_, c)| c).collect();
        let mut basis = Vec::new();
        for free in 0..self.cols {
            if pivot_cols.contains(&free) {
                continue;
            }
            let mut v = vec![Q::zero(); self.cols];
            v[free] = Q::one();
            // Back-substitute pivot coordinates from bottom to top.
            for &(r, c) in pivots.iter().rev() {
                let mut acc = Q::zero();
                for j in c + 1..self.cols {
                    if !m[r][j].is_zero() && !v[j].is_zero() {
                        acc += Q::from_integer(m[r][j].clone()) * &v[j];
                    }
                }
                v[c] = -acc / Q::from_integer(m[r][c].clone());
            }
            basis.push(v);
        }
        basis
    }

    /// Solves `self * X = rhs` when `self` has full column rank and a
    /// solution exists; returns `None` otherwise.
    pub fn solve(&self, rhs: &QMat) -> Option<QMat> {
        assert_eq!(self.rows, rhs.rows);
        // Rational Gauss-Jordan on the augmented system; sizes here are small
        // and the elimination stays exact.
        let n = self.rows;
        let mut aug: Vec<Vec<Q>> = (0..n)
            .map(|i| {
                let mut row: Vec<Q> = (0..self.cols).map(|j| self.at(i, j).clone()).collect();
                row.extend((0..rhs.cols).map(|j| rhs.at(i, j).clone()));
                row
            })
            .collect();
        let total = self.cols + rhs.cols;
        let mut pivot_row = 0usize;
        let mut pivots = Vec::new();
        for col in 0..self.cols {
            let Some(r) = (pivot_row..n).find(|&r| !aug[r][col].is_zero()) else {
                return None; // rank-deficient in a needed column
            };
            aug.swap(pivot_row, r);
            let p = aug[pivot_row][col].clone();
            for j in col..total {
                aug[pivot_row][j] = &aug[pivot_row][j] / &p;
            }
            for r2 in 0..n {
                if r2 != pivot_row && !aug[r2][col].is_zero() {
                    let f = aug[r2][col].clone();
                    for j in col..total {
                        let delta = &f * &aug[pivot_row][j];
                        aug[r2][j] = &aug[r2][j] - &delta;
                    }
                }
            }
            pivots.push((pivot_row, col));
            pivot_row += 1;
        }
        // Consistency: rows below the pivots must have zero right-hand side.
        for r in pivot_row..n {
            if aug[r][self.cols..].iter().any(|x| !x.is_zero()) {
                return None;
            }
        }
        let mut x = QMat::zeros(self.cols, rhs.cols);
        for &(r, c) in &pivots {
            for j in 0..rhs.cols {
                x.set(c, j, aug[r][self.cols + j].clone());
            }
        }
        Some(x)
    }
}

/// In-place Bareiss fraction-free row echelon; returns the pivot positions
/// (row, col) in order. All divisions are exact by construction.
fn bareiss_echelon(m: &mut [Vec<BigInt>]) -> Vec<(usize, usize)> {
    let rows = m.len();
    if rows == 0 {
        return Vec::new();
    }
    let cols = m[0].len();
    let mut pivots: Vec<(usize, usize)> = Vec::new();
    let mut prev = BigInt::one();
    let mut r = 0usize;
    for c in 0..cols {
        // Prefer a pivot of small magnitude to slow coefficient growth.
        let Some(best) = (r..rows)
            .filter(|&i| !m[i][c].is_zero())
            .min_by_key(|&i| m[i][c].magnitude().bits())
        else {
            continue;
        };
        m.swap(r, best);
        for i in r + 1..rows {
            for j in c + 1..cols {
                let num = &m[r][c] * &m[i][j] - &m[i][c] * &m[r][j];
                m[i][j] = num / &prev;
            }
            m[i][c] = BigInt::zero();
        }
        prev = m[r][c].clone();
        pivots.push((r, c));
        r += 1;
        if r == rows {
            break;
        }
    }
    pivots
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{qi, qr};

    fn mat(rows: usize, cols: usize, entries: &[i64]) -> QMat {
        assert_eq!(entries.len(), rows * cols);
        let mut m = QMat::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m.set(i, j, qi(entries[i * cols + j]));
            }
        }
        m
    }

    #[test]
    fn rank_of_projector() {
        // Symmetrizer on a 2-dim space: rank 3 on the 4-dim tensor square.
        let half = qr(1, 2);
        let mut p = QMat::zeros(4, 4);
        p.set(0, 0, qi(1));
        p.set(3, 3, qi(1));
        for (i, j) in [(1, 1), (1, 2), (2, 1), (2, 2)] {
            p.set(i, j, half.clone());
        }
        assert_eq!(p.rank(), 3);
        assert_eq!(p.mul(&p), p);
    }

    #[test]
    fn kernel_members_annihilate() {
        let m = mat(2, 4, &[1, 2, 3, 4, 2, 4, 6, 8]);
        let ker = m.kernel();
        assert_eq!(ker.len(), 3);
        for v in &ker {
            assert!(m.apply(v).iter().all(|x| x.is_zero()));
        }
    }

    #[test]
    fn solve_recovers_inverse_action() {
        let a = mat(3, 3, &[2, 1, 0, 0, 1, 1, 1, 0, 1]);
        let b = QMat::identity(3);
        let x = a.solve(&b).unwrap();
        assert_eq!(a.mul(&x), QMat::identity(3));
    }

    #[test]
    fn solve_detects_inconsistency() {
        let a = mat(2, 1, &[1, 1]);
        let mut b = QMat::zeros(2, 1);
        b.set(0, 0, qi(1));
        b.set(1, 0, qi(2));
        assert!(a.solve(&b).is_none());
    }

    #[test]
    fn kron_is_block_structured() {
        let a = mat(2, 2, &[1, 2, 3, 4]);
        let id = QMat::identity(2);
        let k = a.kron(&id);
        assert_eq!(k.rows, 4);
        assert_eq!(*k.at(0, 0), qi(1));
        assert_eq!(*k.at(1, 3), qi(2));
        assert_eq!(*k.at(2, 0), qi(3));
    }
}
