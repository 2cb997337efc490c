use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use super::IntMatrix;

/// `U·A·V = S` with `U`, `V` unimodular and `S` diagonal, each nonzero
/// diagonal entry dividing the next.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmithForm {
    pub u: IntMatrix,
    pub s: IntMatrix,
    pub v: IntMatrix,
}

impl SmithForm {
    /// The diagonal of `S`, zeros included.
    pub fn diagonal(&self) -> Vec<BigInt> {
        let m = self.s.rows().min(self.s.cols());
        (0..m).map(|i| self.s[(i, i)].clone()).collect()
    }

    /// Nonzero invariant factors.
    pub fn invariant_factors(&self) -> Vec<BigInt> {
        self.diagonal().into_iter().filter(|d| !d.is_zero()).collect()
    }

    pub fn rank(&self) -> usize {
        self.invariant_factors().len()
    }
}

/// Position of the nonzero entry of least magnitude in the trailing block
/// starting at `(t, t)`, ties broken by lowest `(row, col)`.
fn smallest_entry(s: &IntMatrix, t: usize) -> Option<(usize, usize)> {
    let mut best: Option<((usize, usize), BigInt)> = None;
    for i in t..s.rows() {
        for j in t..s.cols() {
            let v = &s[(i, j)];
            if v.is_zero() {
                continue;
            }
            let a = v.abs();
            if best.as_ref().map_or(true, |(_, b)| a < *b) {
                best = Some(((i, j), a));
            }
        }
    }
    best.map(|(pos, _)| pos)
}

pub fn smith_normal_form(a: &IntMatrix) -> SmithForm {
    let (m, n) = a.shape();
    let mut s = a.clone();
    let mut u = IntMatrix::identity(m);
    let mut v = IntMatrix::identity(n);

    for t in 0..m.min(n) {
        loop {
            let Some((pi, pj)) = smallest_entry(&s, t) else {
                return SmithForm { u, s, v };
            };
            s.swap_rows(t, pi);
            u.swap_rows(t, pi);
            s.swap_cols(t, pj);
            v.swap_cols(t, pj);

            let pivot = s[(t, t)].clone();
            let mut clean = true;
            for i in t + 1..m {
                let q = -(&s[(i, t)] / &pivot);
                s.add_row_multiple(i, t, &q);
                u.add_row_multiple(i, t, &q);
                clean &= s[(i, t)].is_zero();
            }
            for j in t + 1..n {
                let q = -(&s[(t, j)] / &pivot);
                s.add_col_multiple(j, t, &q);
                v.add_col_multiple(j, t, &q);
                clean &= s[(t, j)].is_zero();
            }
            if !clean {
                continue;
            }

            // Force the pivot to divide the rest of the block.
            let offender = (t + 1..m).find(|&i| {
                (t + 1..n).any(|j| !s[(i, j)].is_multiple_of(&pivot))
            });
            if let Some(i) = offender {
                let one = BigInt::from(1);
                s.add_row_multiple(t, i, &one);
                u.add_row_multiple(t, i, &one);
                continue;
            }
            break;
        }
        if s[(t, t)].is_negative() {
            s.negate_row(t);
            u.negate_row(t);
        }
    }
    SmithForm { u, s, v }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_linalg::is_unimodular;

    fn check(a: &IntMatrix) -> SmithForm {
        let f = smith_normal_form(a);
        assert_eq!(f.u.mul(a).mul(&f.v), f.s);
        assert!(is_unimodular(&f.u) && is_unimodular(&f.v));
        let d = f.invariant_factors();
        for w in d.windows(2) {
            assert!(w[1].is_multiple_of(&w[0]));
        }
        f
    }

    #[test]
    fn identity_is_fixed() {
        let f = check(&IntMatrix::identity(3));
        assert!(f.u.is_identity() && f.v.is_identity() && f.s.is_identity());
    }

    #[test]
    fn coprime_diagonal_merges() {
        let f = check(&IntMatrix::diag(&[2, 3]));
        assert_eq!(f.s, IntMatrix::diag(&[1, 6]));
    }

    #[test]
    fn alternating_three_by_three() {
        let f = check(&IntMatrix::from_rows(&[[0, 4, 2], [-4, 0, 6], [-2, -6, 0]]));
        assert_eq!(f.s, IntMatrix::diag(&[2, 2, 0]));
    }

    #[test]
    fn rectangular_and_zero() {
        let f = check(&IntMatrix::from_rows(&[[2, 4, 4], [-6, 6, 12]]));
        assert_eq!(f.diagonal(), vec![BigInt::from(2), BigInt::from(6)]);
        let z = check(&IntMatrix::zeros(2, 3));
        assert_eq!(z.rank(), 0);
    }
}
