//! Exact integer and rational matrices, Smith and Frobenius normal forms,
//! and the group-membership predicates built on them. Nothing in here
//! rounds.

mod frobenius;
mod int_matrix;
mod rat_matrix;
mod smith;

use num_bigint::BigInt;
use thiserror::Error;

pub use frobenius::{canonical_alternating, frobenius_normal_form, FrobeniusDecomposition};
pub use int_matrix::{is_unimodular, IntMatrix};
pub use rat_matrix::RatMatrix;
pub use smith::{smith_normal_form, SmithForm};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LinalgError {
    #[error("matrix dimensions must be positive")]
    EmptyMatrix,
    #[error("dimension mismatch: expected {expected:?}, found {found:?}")]
    DimensionMismatch {
        expected: (usize, usize),
        found: (usize, usize),
    },
    #[error("matrix of shape {0:?} is not square")]
    NotSquare((usize, usize)),
    #[error("matrix is not alternating")]
    NotAlternating,
}

/// `[[0, I], [−I, 0]]` of size `2n`.
pub fn standard_symplectic_form(n: usize) -> IntMatrix {
    canonical_alternating(&vec![BigInt::from(1); n], 0)
}

/// `[[0, Δ], [−Δ, 0]]` for the divisors `Δ`.
pub fn twisted_symplectic_form(divisors: &[BigInt]) -> IntMatrix {
    canonical_alternating(divisors, 0)
}

/// True iff `ᵗα·form·α = form` exactly.
pub fn is_integral_symplectic(alpha: &IntMatrix, form: &IntMatrix) -> Result<bool, LinalgError> {
    if !alpha.is_square() {
        return Err(LinalgError::NotSquare(alpha.shape()));
    }
    if alpha.shape() != form.shape() {
        return Err(LinalgError::DimensionMismatch {
            expected: alpha.shape(),
            found: form.shape(),
        });
    }
    Ok(&form.congruence(alpha) == form)
}
