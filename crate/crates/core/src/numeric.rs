//! Floating-point helpers shared by the period, polarization and
//! Grassmannian layers.

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;

pub type CMat = DMatrix<Complex64>;
pub type RMat = DMatrix<f64>;

/// Thresholds used by every floating-point decision in the crate.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Tolerances {
    /// Relative singular-value cutoff for numerical rank.
    pub eps_rank: f64,
    /// Relative entrywise residual for matrix identities.
    pub eps_eq: f64,
    /// Relative eigenvalue floor for positive definiteness.
    pub eps_pos: f64,
    /// Absolute distance to the nearest integer for lattice membership.
    pub eps_int: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            eps_rank: 1e-9,
            eps_eq: 1e-9,
            eps_pos: 1e-9,
            eps_int: 1e-6,
        }
    }
}

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn max_abs(m: &RMat) -> f64 {
    m.iter().fold(0.0, |acc, x| acc.max(x.abs()))
}

pub fn max_abs_c(m: &CMat) -> f64 {
    m.iter().fold(0.0, |acc, x| acc.max(x.norm()))
}

pub fn to_complex(m: &RMat) -> CMat {
    m.map(|x| c(x, 0.0))
}

/// `[[0, −I], [I, 0]]`: multiplication by `i` on `ℝ²ⁿ` in (Re, Im) order.
pub fn standard_complex_structure(n: usize) -> RMat {
    let mut j = RMat::zeros(2 * n, 2 * n);
    for i in 0..n {
        j[(i, n + i)] = -1.0;
        j[(n + i, i)] = 1.0;
    }
    j
}

/// Singular values in descending order.
pub fn singular_values(m: &RMat) -> Vec<f64> {
    if m.nrows() == 0 || m.ncols() == 0 {
        return Vec::new();
    }
    let mut s: Vec<f64> = m.clone().svd(false, false).singular_values.iter().copied().collect();
    s.sort_by(|a, b| b.total_cmp(a));
    s
}

pub fn singular_values_c(m: &CMat) -> Vec<f64> {
    if m.nrows() == 0 || m.ncols() == 0 {
        return Vec::new();
    }
    let mut s: Vec<f64> = m.clone().svd(false, false).singular_values.iter().copied().collect();
    s.sort_by(|a, b| b.total_cmp(a));
    s
}

/// Number of singular values above `rel · σ_max`.
pub fn numerical_rank(sv: &[f64], rel: f64) -> usize {
    match sv.first() {
        Some(&top) if top > 0.0 => sv.iter().filter(|&&s| s > rel * top).count(),
        _ => 0,
    }
}

/// Eigenvalues (ascending) and matching orthonormal eigenvectors as columns.
pub fn symmetric_eigen_sorted(m: &RMat) -> (Vec<f64>, RMat) {
    let sym = (m + m.transpose()) * 0.5;
    let eig = SymmetricEigen::new(sym);
    let mut idx: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    idx.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = idx.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = RMat::from_fn(m.nrows(), idx.len(), |r, col| eig.eigenvectors[(r, idx[col])]);
    (values, vectors)
}

/// Positive definite in the relative sense `λ_min > rel · λ_max`, `λ_max > 0`.
pub fn is_relatively_positive(eigenvalues: &[f64], rel: f64) -> bool {
    let min = eigenvalues.iter().copied().fold(f64::INFINITY, f64::min);
    let max = eigenvalues.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    !eigenvalues.is_empty() && max > 0.0 && min > rel * max
}

/// Orthonormal basis (columns) of the row space of `basis`, assumed of full row rank.
fn row_space_frame(basis: &CMat) -> CMat {
    let svd = basis.adjoint().svd(true, false);
    let u = svd.u.expect("requested U");
    u.columns(0, basis.nrows()).into_owned()
}

/// Largest principal angle between the row spaces of two full-rank bases
/// of equal dimension. Computed through the sine so that tiny angles keep
/// their precision.
pub fn subspace_distance(a: &CMat, b: &CMat) -> f64 {
    assert_eq!(a.shape(), b.shape(), "subspaces must share dimension and ambient space");
    let qa = row_space_frame(a);
    let qb = row_space_frame(b);
    let residual = &qb - &qa * (qa.adjoint() * &qb);
    let sin = singular_values_c(&residual).first().copied().unwrap_or(0.0);
    sin.min(1.0).asin()
}
