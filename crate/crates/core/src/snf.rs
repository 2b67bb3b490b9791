//! Smith normal form over the integers with unimodular transforms.
//!
//! For an `m x n` matrix `A` we compute unimodular `U` (`m x m`) and `V`
//! (`n x n`) with `D = U A V` diagonal, the nonzero diagonal entries positive
//! and forming a divisibility chain, followed by zeros.
//!
//! Pivoting always picks the nonzero entry of least absolute value in the
//! active submatrix, ties broken by lowest `(row, col)`. The inverses of `U`
//! and `V` are tracked alongside so callers that need kernel coordinates
//! (homology, truncations) never invert a matrix.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::matrix::IntMatrix;

/// `D = U * A * V` with `U`, `V` unimodular.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SnfResult {
    pub u: IntMatrix,
    pub d: IntMatrix,
    pub v: IntMatrix,
}

impl SnfResult {
    /// Diagonal of `D` (length `min(rows, cols)`).
    pub fn diagonal(&self) -> Vec<BigInt> {
        let k = self.d.rows().min(self.d.cols());
        (0..k).map(|i| self.d[(i, i)].clone()).collect()
    }

    pub fn rank(&self) -> usize {
        self.diagonal().iter().filter(|x| !x.is_zero()).count()
    }
}

/// Full decomposition including the inverse transforms.
#[derive(Clone, Debug)]
pub(crate) struct Smith {
    pub u: IntMatrix,
    #[allow(dead_code)]
    pub u_inv: IntMatrix,
    pub d: IntMatrix,
    pub v: IntMatrix,
    pub v_inv: IntMatrix,
    pub rank: usize,
}

pub fn smith_normal_form(a: &IntMatrix) -> SnfResult {
    let s = smith(a);
    SnfResult {
        u: s.u,
        d: s.d,
        v: s.v,
    }
}

/// Invariant diagonal of the Smith form without materialising transforms.
pub fn smith_diagonal(a: &IntMatrix) -> Vec<BigInt> {
    let mut w = Worker::new(a.clone(), false);
    w.run();
    let k = a.rows().min(a.cols());
    (0..k).map(|i| w.a[(i, i)].clone()).collect()
}

pub(crate) fn smith(a: &IntMatrix) -> Smith {
    let mut w = Worker::new(a.clone(), true);
    let rank = w.run();
    let t = w.transforms.expect("transforms requested");
    Smith {
        u: t.u,
        u_inv: t.u_inv,
        d: w.a,
        v: t.v,
        v_inv: t.v_inv,
        rank,
    }
}

struct Transforms {
    u: IntMatrix,
    u_inv: IntMatrix,
    v: IntMatrix,
    v_inv: IntMatrix,
}

struct Worker {
    a: IntMatrix,
    transforms: Option<Transforms>,
}

impl Worker {
    fn new(a: IntMatrix, track: bool) -> Self {
        let (m, n) = (a.rows(), a.cols());
        let transforms = track.then(|| Transforms {
            u: IntMatrix::identity(m),
            u_inv: IntMatrix::identity(m),
            v: IntMatrix::identity(n),
            v_inv: IntMatrix::identity(n),
        });
        Worker { a, transforms }
    }

    fn swap_rows(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        self.a.swap_rows(i, j);
        if let Some(t) = &mut self.transforms {
            t.u.swap_rows(i, j);
            t.u_inv.swap_cols(i, j);
        }
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        self.a.swap_cols(i, j);
        if let Some(t) = &mut self.transforms {
            t.v.swap_cols(i, j);
            t.v_inv.swap_rows(i, j);
        }
    }

    /// row[dst] += k * row[src]
    fn add_row(&mut self, dst: usize, src: usize, k: &BigInt) {
        self.a.add_row_multiple(dst, src, k);
        if let Some(t) = &mut self.transforms {
            t.u.add_row_multiple(dst, src, k);
            t.u_inv.add_col_multiple(src, dst, &-k);
        }
    }

    /// col[dst] += k * col[src]
    fn add_col(&mut self, dst: usize, src: usize, k: &BigInt) {
        self.a.add_col_multiple(dst, src, k);
        if let Some(t) = &mut self.transforms {
            t.v.add_col_multiple(dst, src, k);
            t.v_inv.add_row_multiple(src, dst, &-k);
        }
    }

    fn negate_row(&mut self, i: usize) {
        self.a.negate_row(i);
        if let Some(t) = &mut self.transforms {
            t.u.negate_row(i);
            t.u_inv.negate_col(i);
        }
    }

    fn find_pivot(&self, t: usize) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize, BigInt)> = None;
        for i in t..self.a.rows() {
            for j in t..self.a.cols() {
                let e = &self.a[(i, j)];
                if e.is_zero() {
                    continue;
                }
                let abs = e.abs();
                if best.as_ref().is_none_or(|(_, _, b)| abs < *b) {
                    best = Some((i, j, abs));
                }
            }
        }
        best.map(|(i, j, _)| (i, j))
    }

    /// Diagonalises in place and returns the rank.
    fn run(&mut self) -> usize {
        let (m, n) = (self.a.rows(), self.a.cols());
        let mut rank = 0;
        for t in 0..m.min(n) {
            loop {
                let Some((pi, pj)) = self.find_pivot(t) else {
                    return rank;
                };
                self.swap_rows(t, pi);
                self.swap_cols(t, pj);
                let pivot = self.a[(t, t)].clone();

                let mut dirty = false;
                for i in t + 1..m {
                    if self.a[(i, t)].is_zero() {
                        continue;
                    }
                    let (q, r) = self.a[(i, t)].div_rem(&pivot);
                    self.add_row(i, t, &-q);
                    dirty |= !r.is_zero();
                }
                for j in t + 1..n {
                    if self.a[(t, j)].is_zero() {
                        continue;
                    }
                    let (q, r) = self.a[(t, j)].div_rem(&pivot);
                    self.add_col(j, t, &-q);
                    dirty |= !r.is_zero();
                }
                if dirty {
                    continue;
                }

                let offender = (t + 1..m).find(|&i| {
                    (t + 1..n).any(|j| !self.a[(i, j)].is_multiple_of(&pivot))
                });
                match offender {
                    Some(i) => self.add_row(t, i, &BigInt::one()),
                    None => break,
                }
            }
            if self.a[(t, t)].is_negative() {
                self.negate_row(t);
            }
            rank += 1;
        }
        rank
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check(a: &IntMatrix) -> Smith {
        let s = smith(a);
        assert_eq!(&(&s.u * a) * &s.v, s.d);
        assert_eq!(&s.u * &s.u_inv, IntMatrix::identity(a.rows()));
        assert_eq!(&s.v * &s.v_inv, IntMatrix::identity(a.cols()));
        s
    }

    #[test]
    fn diag_two_three() {
        let a = IntMatrix::diagonal(&[2, 3]);
        let s = check(&a);
        assert_eq!(s.d, IntMatrix::diagonal(&[1, 6]));
        assert_eq!(s.rank, 2);
    }

    #[test]
    fn two_by_two_gcd_two() {
        let a = IntMatrix::from_i64(&[&[2, 4], &[6, 8]]);
        assert_eq!(check(&a).d, IntMatrix::diagonal(&[2, 4]));
    }

    #[test]
    fn zero_matrix_has_identity_transforms() {
        let a = IntMatrix::zeros(3, 2);
        let r = smith_normal_form(&a);
        assert_eq!(r.u, IntMatrix::identity(3));
        assert_eq!(r.v, IntMatrix::identity(2));
        assert!(r.d.is_zero());
        assert_eq!(r.rank(), 0);
    }

    #[test]
    fn rectangular_and_rank_deficient() {
        let a = IntMatrix::from_i64(&[&[2, 4, 6], &[4, 8, 12]]);
        let s = check(&a);
        assert_eq!(s.rank, 1);
        assert_eq!(s.d[(0, 0)], BigInt::from(2));
        let b = IntMatrix::from_i64(&[&[0, 0], &[0, -5], &[0, 0]]);
        assert_eq!(check(&b).d[(0, 0)], BigInt::from(5));
    }

    #[test]
    fn deterministic() {
        let a = IntMatrix::from_i64(&[&[3, -7, 2], &[5, 1, -4], &[9, 9, 0]]);
        assert_eq!(smith_normal_form(&a), smith_normal_form(&a));
        assert_eq!(smith_diagonal(&a), smith_normal_form(&a).diagonal());
    }

    #[test]
    fn empty_shapes() {
        for (m, n) in [(0, 0), (0, 3), (3, 0)] {
            let s = check(&IntMatrix::zeros(m, n));
            assert_eq!(s.rank, 0);
        }
    }
}
