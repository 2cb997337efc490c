use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::{IntMatrix, LinalgError};

/// Congruence normal form of an integral alternating matrix:
/// `ᵗP·E·P = [[0, Δ, 0], [−Δ, 0, 0], [0, 0, 0]]` with `Δ = diag(d₁, …, dₙ)`,
/// `dᵢ > 0` and `dᵢ | dᵢ₊₁`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FrobeniusDecomposition {
    pub basis_change: IntMatrix,
    pub divisors: Vec<BigInt>,
    pub rank_half: usize,
    pub kernel_dim: usize,
}

impl FrobeniusDecomposition {
    pub fn size(&self) -> usize {
        2 * self.rank_half + self.kernel_dim
    }

    pub fn canonical_matrix(&self) -> IntMatrix {
        canonical_alternating(&self.divisors, self.kernel_dim)
    }

    /// Recomputes `ᵗP·E·P` and compares it with the canonical pattern.
    pub fn verify(&self, e: &IntMatrix) -> bool {
        e.shape() == self.basis_change.shape()
            && e.congruence(&self.basis_change) == self.canonical_matrix()
    }
}

/// `[[0, Δ, 0], [−Δ, 0, 0], [0, 0, 0]]` for the given divisors and kernel size.
pub fn canonical_alternating(divisors: &[BigInt], kernel_dim: usize) -> IntMatrix {
    let n = divisors.len();
    let size = 2 * n + kernel_dim;
    let mut m = IntMatrix::zeros(size, size);
    for (i, d) in divisors.iter().enumerate() {
        m[(i, n + i)] = d.clone();
        m[(n + i, i)] = -d;
    }
    m
}

/// Working state: `form` is always `ᵗbasis·E·basis`.
struct Congruence {
    form: IntMatrix,
    basis: IntMatrix,
}

impl Congruence {
    fn swap(&mut self, a: usize, b: usize) {
        self.form.swap_rows(a, b);
        self.form.swap_cols(a, b);
        self.basis.swap_cols(a, b);
    }

    /// Basis vector `dst += factor · src`.
    fn add(&mut self, dst: usize, src: usize, factor: &BigInt) {
        self.form.add_col_multiple(dst, src, factor);
        self.form.add_row_multiple(dst, src, factor);
        self.basis.add_col_multiple(dst, src, factor);
    }

    fn negate(&mut self, i: usize) {
        self.form.negate_row(i);
        self.form.negate_col(i);
        self.basis.negate_col(i);
    }

    /// Smallest nonzero `|e_ij|`, `start ≤ i < j`, lowest `(i, j)` on ties.
    fn smallest_pivot(&self, start: usize) -> Option<(usize, usize)> {
        let size = self.form.rows();
        let mut best: Option<((usize, usize), BigInt)> = None;
        for i in start..size {
            for j in i + 1..size {
                let v = &self.form[(i, j)];
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
}

pub fn frobenius_normal_form(e: &IntMatrix) -> Result<FrobeniusDecomposition, LinalgError> {
    if !e.is_square() {
        return Err(LinalgError::NotSquare(e.shape()));
    }
    if !e.is_alternating() {
        return Err(LinalgError::NotAlternating);
    }
    let size = e.rows();
    let mut state = Congruence {
        form: e.clone(),
        basis: IntMatrix::identity(size),
    };
    let mut divisors = Vec::new();
    let mut s = 0;

    while let Some((mut i, mut j)) = state.smallest_pivot(s) {
        // Bring the pivot to (s, s + 1).
        state.swap(i, s);
        if j == s {
            j = i;
        }
        i = s;
        state.swap(j, i + 1);
        if state.form[(s, s + 1)].is_negative() {
            state.negate(s + 1);
        }
        let p = state.form[(s, s + 1)].clone();

        let mut clean = true;
        for m in s + 2..size {
            let q = -(&state.form[(s, m)] / &p);
            state.add(m, s + 1, &q);
            let q = &state.form[(s + 1, m)] / &p;
            state.add(m, s, &q);
            clean &= state.form[(s, m)].is_zero() && state.form[(s + 1, m)].is_zero();
        }
        if !clean {
            continue;
        }

        let offender = (s + 2..size).find(|&a| {
            (a + 1..size).any(|b| !state.form[(a, b)].is_multiple_of(&p))
        });
        if let Some(a) = offender {
            state.add(s, a, &BigInt::one());
            continue;
        }

        divisors.push(p);
        s += 2;
    }

    // Interleaved pairs (0,1), (2,3), … → [[0, Δ], [−Δ, 0]] block order.
    let n = divisors.len();
    let order: Vec<usize> = (0..n)
        .map(|i| 2 * i)
        .chain((0..n).map(|i| 2 * i + 1))
        .chain(2 * n..size)
        .collect();
    let basis = IntMatrix::from_fn(size, size, |r, c| state.basis[(r, order[c])].clone());

    Ok(FrobeniusDecomposition {
        basis_change: basis,
        divisors,
        rank_half: n,
        kernel_dim: size - 2 * n,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_linalg::is_unimodular;

    fn big(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn standard_form_is_fixed() {
        let e = IntMatrix::from_rows(&[
            [0, 0, 1, 0],
            [0, 0, 0, 1],
            [-1, 0, 0, 0],
            [0, -1, 0, 0],
        ]);
        let f = frobenius_normal_form(&e).unwrap();
        assert!(f.basis_change.is_identity());
        assert_eq!(f.divisors, big(&[1, 1]));
        assert_eq!(f.kernel_dim, 0);
    }

    #[test]
    fn single_pair_with_divisor_two() {
        let f = frobenius_normal_form(&IntMatrix::from_rows(&[[0, 2], [-2, 0]])).unwrap();
        assert!(f.basis_change.is_identity());
        assert_eq!(f.divisors, big(&[2]));
    }

    #[test]
    fn three_by_three_with_kernel() {
        let e = IntMatrix::from_rows(&[[0, 4, 2], [-4, 0, 6], [-2, -6, 0]]);
        let f = frobenius_normal_form(&e).unwrap();
        assert_eq!(f.divisors, big(&[2]));
        assert_eq!((f.rank_half, f.kernel_dim), (1, 1));
        assert!(is_unimodular(&f.basis_change));
        assert!(f.verify(&e));
    }

    #[test]
    fn coprime_blocks_are_merged_into_divisor_chain() {
        // Block sum of 2·J and 3·J has divisors (1, 6), not (2, 3).
        let e = IntMatrix::from_rows(&[
            [0, 2, 0, 0],
            [-2, 0, 0, 0],
            [0, 0, 0, 3],
            [0, 0, -3, 0],
        ]);
        let f = frobenius_normal_form(&e).unwrap();
        assert_eq!(f.divisors, big(&[1, 6]));
        assert!(f.verify(&e));
    }

    #[test]
    fn negative_pivot_is_normalized() {
        let e = IntMatrix::from_rows(&[[0, -3], [3, 0]]);
        let f = frobenius_normal_form(&e).unwrap();
        assert_eq!(f.divisors, big(&[3]));
        assert!(f.verify(&e));
    }

    #[test]
    fn zero_form_is_all_kernel() {
        let f = frobenius_normal_form(&IntMatrix::zeros(3, 3)).unwrap();
        assert!(f.divisors.is_empty());
        assert_eq!(f.kernel_dim, 3);
    }

    #[test]
    fn rejects_symmetric_input() {
        let e = IntMatrix::from_rows(&[[0, 1], [1, 0]]);
        assert_eq!(frobenius_normal_form(&e), Err(LinalgError::NotAlternating));
    }
}
