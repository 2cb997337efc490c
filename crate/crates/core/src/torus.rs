//! Period matrices of complex foliated tori `ℂⁿ×ℝᵏ/Γ`, reduction to adapted
//! form, affine CR-morphisms and unpolarized equivalence certificates
//! `M·Ω = Ω′·P` with `M ∈ L_{n,k}` and `P ∈ GL(2n+k, ℤ)`.

use std::ops::Deref;

use nalgebra::{DVector, LU};
use num_complex::Complex64;
use thiserror::Error;

use crate::exact_linalg::{is_unimodular, IntMatrix};
use crate::numeric::{c, max_abs, max_abs_c, singular_values, CMat, RMat, Tolerances};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum TorusError {
    #[error("torus shape requires n >= 1 (got n = {n}, k = {k})")]
    InvalidShape { n: usize, k: usize },
    #[error("{block} block has shape {found:?}, expected {expected:?}")]
    BlockShape {
        block: &'static str,
        expected: (usize, usize),
        found: (usize, usize),
    },
    #[error("non-finite entry in period matrix")]
    NonFinite,
    #[error("columns do not span a lattice (realization is numerically singular)")]
    NotALattice,
    #[error("no k columns give an invertible real block")]
    NoInvertibleRBlock,
    #[error("period matrix is not adapted: trailing block is not exactly [[0], [I]]")]
    NotAdapted,
    #[error("shape mismatch between {0} and {1}")]
    ShapeMismatch(&'static str, &'static str),
}

/// `(n, k)` for `ℂⁿ×ℝᵏ`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct TorusShape {
    n: usize,
    k: usize,
}

impl TorusShape {
    pub fn new(n: usize, k: usize) -> Result<Self, TorusError> {
        if n == 0 {
            return Err(TorusError::InvalidShape { n, k });
        }
        Ok(Self { n, k })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// `2n + k`, the rank of the lattice.
    pub fn real_dim(&self) -> usize {
        2 * self.n + self.k
    }
}

/// A point `(z, t)` of `ℂⁿ×ℝᵏ`.
#[derive(Clone, Debug, PartialEq)]
pub struct CrPoint {
    pub z: DVector<Complex64>,
    pub t: DVector<f64>,
}

/// The `(n+k)×(2n+k)` matrix whose columns `γⱼ = (zⱼ, tⱼ)` generate `Γ`.
#[derive(Clone, Debug, PartialEq)]
pub struct PeriodMatrix {
    shape: TorusShape,
    c_block: CMat,
    r_block: RMat,
}

impl PeriodMatrix {
    pub fn new(shape: TorusShape, c_block: CMat, r_block: RMat) -> Result<Self, TorusError> {
        let cols = shape.real_dim();
        if c_block.shape() != (shape.n, cols) {
            return Err(TorusError::BlockShape {
                block: "complex",
                expected: (shape.n, cols),
                found: c_block.shape(),
            });
        }
        if r_block.shape() != (shape.k, cols) {
            return Err(TorusError::BlockShape {
                block: "real",
                expected: (shape.k, cols),
                found: r_block.shape(),
            });
        }
        if c_block.iter().any(|z| !z.re.is_finite() || !z.im.is_finite())
            || r_block.iter().any(|x| !x.is_finite())
        {
            return Err(TorusError::NonFinite);
        }
        Ok(Self {
            shape,
            c_block,
            r_block,
        })
    }

    /// Inverse of [`PeriodMatrix::realize`].
    pub fn from_realization(shape: TorusShape, real: &RMat) -> Result<Self, TorusError> {
        let (n, k, cols) = (shape.n, shape.k, shape.real_dim());
        if real.shape() != (cols, cols) {
            return Err(TorusError::BlockShape {
                block: "realization",
                expected: (cols, cols),
                found: real.shape(),
            });
        }
        let c_block = CMat::from_fn(n, cols, |i, j| c(real[(i, j)], real[(n + i, j)]));
        let r_block = RMat::from_fn(k, cols, |i, j| real[(2 * n + i, j)]);
        Self::new(shape, c_block, r_block)
    }

    pub fn shape(&self) -> TorusShape {
        self.shape
    }

    pub fn c_block(&self) -> &CMat {
        &self.c_block
    }

    pub fn r_block(&self) -> &RMat {
        &self.r_block
    }

    /// Columns as real vectors in `ℝ²ⁿ⁺ᵏ`, rows ordered `(Re z, Im z, t)`.
    pub fn realize(&self) -> RMat {
        let (n, k, cols) = (self.shape.n, self.shape.k, self.shape.real_dim());
        RMat::from_fn(cols, cols, |i, j| {
            if i < n {
                self.c_block[(i, j)].re
            } else if i < 2 * n {
                self.c_block[(i - n, j)].im
            } else {
                debug_assert!(i - 2 * n < k);
                self.r_block[(i - 2 * n, j)]
            }
        })
    }

    /// The whole matrix with the real rows promoted to complex.
    pub fn to_complex(&self) -> CMat {
        let (n, k, cols) = (self.shape.n, self.shape.k, self.shape.real_dim());
        CMat::from_fn(n + k, cols, |i, j| {
            if i < n {
                self.c_block[(i, j)]
            } else {
                c(self.r_block[(i - n, j)], 0.0)
            }
        })
    }

    /// `Ω·P` for a real (usually integral) matrix `P`.
    pub fn mul_right(&self, p: &RMat) -> Self {
        Self {
            shape: self.shape,
            c_block: &self.c_block * crate::numeric::to_complex(p),
            r_block: &self.r_block * p,
        }
    }

    pub fn mul_right_int(&self, p: &IntMatrix) -> Self {
        self.mul_right(&p.to_f64())
    }

    pub fn max_abs(&self) -> f64 {
        max_abs_c(&self.c_block).max(max_abs(&self.r_block))
    }

    /// True when the last `k` columns are exactly `[[0], [I_k]]`.
    pub fn is_adapted(&self) -> bool {
        let (n, k) = (self.shape.n, self.shape.k);
        let off = 2 * n;
        (0..k).all(|j| {
            (0..n).all(|i| self.c_block[(i, off + j)] == c(0.0, 0.0))
                && (0..k).all(|i| self.r_block[(i, off + j)] == if i == j { 1.0 } else { 0.0 })
        })
    }
}

/// Lattice condition: the smallest singular value of the realization exceeds
/// `eps_rank` times the largest.
pub fn validate_period(omega: &PeriodMatrix, tol: &Tolerances) -> bool {
    let sv = singular_values(&omega.realize());
    match (sv.first(), sv.last()) {
        (Some(&top), Some(&bottom)) => top > 0.0 && bottom > tol.eps_rank * top,
        _ => false,
    }
}

/// A period matrix of the form `[[Z, 0], [T, I_k]]`.
#[derive(Clone, Debug, PartialEq)]
pub struct AdaptedPeriodMatrix(PeriodMatrix);

impl AdaptedPeriodMatrix {
    pub fn new(omega: PeriodMatrix) -> Result<Self, TorusError> {
        if omega.is_adapted() {
            Ok(Self(omega))
        } else {
            Err(TorusError::NotAdapted)
        }
    }

    /// Builds `[[Z, 0], [T, I]]` from `Z` (`n×2n`) and `T` (`k×2n`).
    pub fn from_blocks(shape: TorusShape, z: &CMat, t: &RMat) -> Result<Self, TorusError> {
        let (n, k) = (shape.n, shape.k);
        if z.shape() != (n, 2 * n) {
            return Err(TorusError::BlockShape {
                block: "Z",
                expected: (n, 2 * n),
                found: z.shape(),
            });
        }
        if t.shape() != (k, 2 * n) {
            return Err(TorusError::BlockShape {
                block: "T",
                expected: (k, 2 * n),
                found: t.shape(),
            });
        }
        let cols = shape.real_dim();
        let c_block = CMat::from_fn(n, cols, |i, j| if j < 2 * n { z[(i, j)] } else { c(0.0, 0.0) });
        let r_block = RMat::from_fn(k, cols, |i, j| {
            if j < 2 * n {
                t[(i, j)]
            } else if j - 2 * n == i {
                1.0
            } else {
                0.0
            }
        });
        Ok(Self(PeriodMatrix::new(shape, c_block, r_block)?))
    }

    pub fn z(&self) -> CMat {
        self.0.c_block.columns(0, 2 * self.0.shape.n).into_owned()
    }

    pub fn t(&self) -> RMat {
        self.0.r_block.columns(0, 2 * self.0.shape.n).into_owned()
    }

    pub fn into_inner(self) -> PeriodMatrix {
        self.0
    }
}

impl Deref for AdaptedPeriodMatrix {
    type Target = PeriodMatrix;

    fn deref(&self) -> &PeriodMatrix {
        &self.0
    }
}

/// Affine CR-map `(z, t) ↦ (A z + B t + β₀, C t + γ₀)`.
#[derive(Clone, Debug, PartialEq)]
pub struct TorusMorphism {
    pub a: CMat,
    pub b: CMat,
    pub c: RMat,
    pub beta0: DVector<Complex64>,
    pub gamma0: DVector<f64>,
}

impl TorusMorphism {
    pub fn linear(a: CMat, b: CMat, c_mat: RMat) -> Result<Self, TorusError> {
        let (n, k) = (a.nrows(), c_mat.nrows());
        if a.shape() != (n, n) || b.shape() != (n, k) || c_mat.shape() != (k, k) {
            return Err(TorusError::ShapeMismatch("A/B", "C"));
        }
        Ok(Self {
            a,
            b,
            c: c_mat,
            beta0: DVector::zeros(n),
            gamma0: DVector::zeros(k),
        })
    }

    pub fn identity(shape: TorusShape) -> Self {
        let (n, k) = (shape.n, shape.k);
        Self {
            a: CMat::identity(n, n),
            b: CMat::zeros(n, k),
            c: RMat::identity(k, k),
            beta0: DVector::zeros(n),
            gamma0: DVector::zeros(k),
        }
    }

    pub fn with_translation(mut self, beta0: DVector<Complex64>, gamma0: DVector<f64>) -> Self {
        assert_eq!(beta0.len(), self.a.nrows());
        assert_eq!(gamma0.len(), self.c.nrows());
        self.beta0 = beta0;
        self.gamma0 = gamma0;
        self
    }

    pub fn n(&self) -> usize {
        self.a.nrows()
    }

    pub fn k(&self) -> usize {
        self.c.nrows()
    }

    pub fn linear_part(&self) -> Self {
        Self {
            beta0: DVector::zeros(self.n()),
            gamma0: DVector::zeros(self.k()),
            ..self.clone()
        }
    }

    /// `[[A, B], [0, C]]` as an `(n+k)×(n+k)` complex matrix.
    pub fn linear_matrix(&self) -> CMat {
        let (n, k) = (self.n(), self.k());
        CMat::from_fn(n + k, n + k, |i, j| match (i < n, j < n) {
            (true, true) => self.a[(i, j)],
            (true, false) => self.b[(i, j - n)],
            (false, true) => c(0.0, 0.0),
            (false, false) => c(self.c[(i - n, j - n)], 0.0),
        })
    }

    /// The linear part as a real `(2n+k)×(2n+k)` matrix in `(Re z, Im z, t)` coordinates.
    pub fn realize(&self) -> RMat {
        let (n, k) = (self.n(), self.k());
        let mut m = RMat::zeros(2 * n + k, 2 * n + k);
        for i in 0..n {
            for j in 0..n {
                let a = self.a[(i, j)];
                m[(i, j)] = a.re;
                m[(i, n + j)] = -a.im;
                m[(n + i, j)] = a.im;
                m[(n + i, n + j)] = a.re;
            }
            for j in 0..k {
                let b = self.b[(i, j)];
                m[(i, 2 * n + j)] = b.re;
                m[(n + i, 2 * n + j)] = b.im;
            }
        }
        for i in 0..k {
            for j in 0..k {
                m[(2 * n + i, 2 * n + j)] = self.c[(i, j)];
            }
        }
        m
    }

    pub fn realize_translation(&self) -> DVector<f64> {
        let (n, k) = (self.n(), self.k());
        DVector::from_fn(2 * n + k, |i, _| {
            if i < n {
                self.beta0[i].re
            } else if i < 2 * n {
                self.beta0[i - n].im
            } else {
                self.gamma0[i - 2 * n]
            }
        })
    }

    /// `A` and `C` invertible, judged by relative singular values.
    pub fn is_invertible(&self, tol: &Tolerances) -> bool {
        let ok = |sv: Vec<f64>| match (sv.first(), sv.last()) {
            (Some(&top), Some(&bottom)) => top > 0.0 && bottom > tol.eps_rank * top,
            _ => true,
        };
        ok(crate::numeric::singular_values_c(&self.a)) && ok(singular_values(&self.c))
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Self) -> Self {
        Self {
            a: &self.a * &other.a,
            b: &self.a * &other.b + &self.b * crate::numeric::to_complex(&other.c),
            c: &self.c * &other.c,
            beta0: &self.a * &other.beta0
                + &self.b * other.gamma0.map(|x| c(x, 0.0))
                + &self.beta0,
            gamma0: &self.c * &other.gamma0 + &self.gamma0,
        }
    }

    pub fn inverse(&self) -> Option<Self> {
        let a_inv = self.a.clone().try_inverse()?;
        let c_inv = self.c.clone().try_inverse()?;
        let b_inv = -(&a_inv * &self.b * crate::numeric::to_complex(&c_inv));
        let gamma0 = -(&c_inv * &self.gamma0);
        let beta0 = -(&a_inv * &self.beta0) - &b_inv * self.gamma0.map(|x| c(x, 0.0));
        Some(Self {
            a: a_inv,
            b: b_inv,
            c: c_inv,
            beta0,
            gamma0,
        })
    }

    /// `M·Ω`.
    pub fn apply_to_period(&self, omega: &PeriodMatrix) -> PeriodMatrix {
        PeriodMatrix {
            shape: omega.shape,
            c_block: &self.a * &omega.c_block
                + &self.b * crate::numeric::to_complex(&omega.r_block),
            r_block: &self.c * &omega.r_block,
        }
    }
}

pub fn apply_morphism(phi: &TorusMorphism, p: &CrPoint) -> CrPoint {
    let t_c = p.t.map(|x| c(x, 0.0));
    CrPoint {
        z: &phi.a * &p.z + &phi.b * t_c + &phi.beta0,
        t: &phi.c * &p.t + &phi.gamma0,
    }
}

/// Certificate `M·Ω = Ω′·P`.
#[derive(Clone, Debug, PartialEq)]
pub struct EquivalenceWitness {
    pub m: TorusMorphism,
    pub p: IntMatrix,
}

impl EquivalenceWitness {
    /// If `self` certifies `Ω ≈ Ω′` and `next` certifies `Ω′ ≈ Ω″`, the result certifies `Ω ≈ Ω″`.
    pub fn then(&self, next: &Self) -> Self {
        Self {
            m: next.m.compose(&self.m).linear_part(),
            p: next.p.mul(&self.p),
        }
    }

    pub fn inverse(&self) -> Option<Self> {
        Some(Self {
            m: self.m.linear_part().inverse()?,
            p: self.p.inverse_unimodular()?,
        })
    }
}

/// Outcome of a witness check, with the reasons for rejection.
#[derive(Clone, Debug, PartialEq)]
pub struct WitnessReport {
    pub accepted: bool,
    pub residual: f64,
    pub scale: f64,
    pub reasons: Vec<String>,
}

/// Entrywise magnitude bound `max_ij (|X|·|Y|)_ij`, used to scale residuals.
fn product_scale(x: &CMat, y: &CMat) -> f64 {
    let ax = x.map(|v| v.norm());
    let ay = y.map(|v| v.norm());
    max_abs(&(ax * ay))
}

/// `‖L·Ω − Ω′·P‖∞` and its scale, for complex `L` and real `P`.
pub(crate) fn witness_residual(m: &CMat, omega: &PeriodMatrix, omega2: &PeriodMatrix, p: &RMat) -> (f64, f64) {
    let lhs_factor = omega.to_complex();
    let rhs_factor = omega2.to_complex();
    let p_c = crate::numeric::to_complex(p);
    let lhs = m * &lhs_factor;
    let rhs = &rhs_factor * &p_c;
    let residual = max_abs_c(&(lhs - rhs));
    let scale = 1f64
        .max(product_scale(m, &lhs_factor))
        .max(product_scale(&rhs_factor, &p_c));
    (residual, scale)
}

pub fn verify_cr_witness(
    w: &EquivalenceWitness,
    omega: &PeriodMatrix,
    omega2: &PeriodMatrix,
    tol: &Tolerances,
) -> WitnessReport {
    let mut reasons = Vec::new();
    let shape = omega.shape();
    if omega2.shape() != shape || w.m.n() != shape.n || w.m.k() != shape.k {
        return WitnessReport {
            accepted: false,
            residual: f64::INFINITY,
            scale: 1.0,
            reasons: vec!["shape mismatch".into()],
        };
    }
    if w.p.shape() != (shape.real_dim(), shape.real_dim()) {
        return WitnessReport {
            accepted: false,
            residual: f64::INFINITY,
            scale: 1.0,
            reasons: vec!["P has the wrong size".into()],
        };
    }
    if !w.m.is_invertible(tol) {
        reasons.push("A or C is not invertible".into());
    }
    if !is_unimodular(&w.p) {
        reasons.push("P is not unimodular".into());
    }
    let (residual, scale) = witness_residual(&w.m.linear_matrix(), omega, omega2, &w.p.to_f64());
    if !(residual < tol.eps_eq * scale) {
        reasons.push(format!("residual {residual:.3e} exceeds {:.3e}", tol.eps_eq * scale));
    }
    WitnessReport {
        accepted: reasons.is_empty(),
        residual,
        scale,
        reasons,
    }
}

/// Result of [`adapt`]: `M·Ω′ = Ω·P` with `P` a permutation.
#[derive(Clone, Debug, PartialEq)]
pub struct Adaptation {
    pub adapted: AdaptedPeriodMatrix,
    pub morphism: TorusMorphism,
    pub permutation: IntMatrix,
}

impl Adaptation {
    pub fn witness(&self) -> EquivalenceWitness {
        EquivalenceWitness {
            m: self.morphism.clone(),
            p: self.permutation.clone(),
        }
    }
}

/// Greedy complete-pivoting choice of `k` columns of the real block.
fn choose_r_columns(r: &RMat, tol: &Tolerances) -> Result<Vec<usize>, TorusError> {
    let (k, cols) = r.shape();
    let mut work = r.clone();
    let scale = max_abs(r);
    let mut rows_left: Vec<usize> = (0..k).collect();
    let mut chosen = Vec::with_capacity(k);
    for _ in 0..k {
        let mut best: Option<(usize, usize, f64)> = None;
        for &i in &rows_left {
            for j in (0..cols).filter(|j| !chosen.contains(j)) {
                let v = work[(i, j)].abs();
                if best.map_or(true, |(_, _, b)| v > b) {
                    best = Some((i, j, v));
                }
            }
        }
        let (pi, pj, pv) = best.ok_or(TorusError::NoInvertibleRBlock)?;
        if !(pv > tol.eps_rank * scale) {
            return Err(TorusError::NoInvertibleRBlock);
        }
        for &i in rows_left.iter().filter(|&&i| i != pi) {
            let f = work[(i, pj)] / work[(pi, pj)];
            for j in 0..cols {
                work[(i, j)] -= f * work[(pi, j)];
            }
        }
        rows_left.retain(|&i| i != pi);
        chosen.push(pj);
    }
    chosen.sort_unstable();
    Ok(chosen)
}

/// Reduces `Ω′` to `[[Z, 0], [T, I]]` by a column permutation and the left
/// action of `[[I, −W′R′⁻¹], [0, R′⁻¹]]`.
pub fn adapt(omega: &PeriodMatrix, tol: &Tolerances) -> Result<Adaptation, TorusError> {
    if !validate_period(omega, tol) {
        return Err(TorusError::NotALattice);
    }
    let shape = omega.shape();
    let (n, k, cols) = (shape.n, shape.k, shape.real_dim());
    if omega.is_adapted() {
        return Ok(Adaptation {
            adapted: AdaptedPeriodMatrix(omega.clone()),
            morphism: TorusMorphism::identity(shape),
            permutation: IntMatrix::identity(cols),
        });
    }

    let chosen = choose_r_columns(omega.r_block(), tol)?;
    // New column j of Ω′·Π is old column order[j].
    let order: Vec<usize> = (0..cols)
        .filter(|j| !chosen.contains(j))
        .chain(chosen.iter().copied())
        .collect();
    let permuted = PeriodMatrix {
        shape,
        c_block: CMat::from_fn(n, cols, |i, j| omega.c_block[(i, order[j])]),
        r_block: RMat::from_fn(k, cols, |i, j| omega.r_block[(i, order[j])]),
    };
    let w = permuted.c_block.columns(2 * n, k).into_owned();
    let r = permuted.r_block.columns(2 * n, k).into_owned();
    let r_inv = LU::new(r).try_inverse().ok_or(TorusError::NoInvertibleRBlock)?;
    let morphism = TorusMorphism::linear(
        CMat::identity(n, n),
        -(w * crate::numeric::to_complex(&r_inv)),
        r_inv,
    )?;
    let reduced = morphism.apply_to_period(&permuted);
    let z = reduced.c_block.columns(0, 2 * n).into_owned();
    let t = reduced.r_block.columns(0, 2 * n).into_owned();
    let adapted = AdaptedPeriodMatrix::from_blocks(shape, &z, &t)?;

    // Column order[j] of M·Ω′ is column j of Ω.
    let mut permutation = IntMatrix::zeros(cols, cols);
    for (new_col, &old_col) in order.iter().enumerate() {
        permutation[(new_col, old_col)] = 1.into();
    }
    Ok(Adaptation {
        adapted,
        morphism,
        permutation,
    })
}

/// Solves `realize(Ω′)·m = v` and tests `m` for integrality.
fn lattice_coordinates_integral(lu: &LU<f64, nalgebra::Dyn, nalgebra::Dyn>, v: &DVector<f64>, tol: &Tolerances) -> bool {
    match lu.solve(v) {
        Some(m) => m.iter().all(|x| (x - x.round()).abs() < tol.eps_int),
        None => false,
    }
}

/// `φ̃(Γ) ⊂ Γ′`: every image of a generator of `Γ`, and the translation,
/// has integral coordinates in the basis of `Γ′`.
pub fn maps_lattice_into(
    phi: &TorusMorphism,
    omega: &PeriodMatrix,
    omega2: &PeriodMatrix,
    tol: &Tolerances,
) -> bool {
    if omega.shape() != omega2.shape() || phi.n() != omega.shape().n || phi.k() != omega.shape().k {
        return false;
    }
    let lu = LU::new(omega2.realize());
    if !lu.is_invertible() {
        return false;
    }
    let images = phi.realize() * omega.realize();
    images
        .column_iter()
        .all(|col| lattice_coordinates_integral(&lu, &col.into_owned(), tol))
        && lattice_coordinates_integral(&lu, &phi.realize_translation(), tol)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn shape(n: usize, k: usize) -> TorusShape {
        TorusShape::new(n, k).unwrap()
    }

    /// Ω = [[1, i, 0], [0, 0, 1]]
    fn standard_11() -> PeriodMatrix {
        PeriodMatrix::new(
            shape(1, 1),
            CMat::from_row_slice(1, 3, &[c(1.0, 0.0), c(0.0, 1.0), c(0.0, 0.0)]),
            RMat::from_row_slice(1, 3, &[0.0, 0.0, 1.0]),
        )
        .unwrap()
    }

    #[test]
    fn realize_identity_fixture() {
        assert_eq!(standard_11().realize(), RMat::identity(3, 3));
    }

    #[test]
    fn realize_swapped_fixture_has_negative_determinant() {
        let om = PeriodMatrix::new(
            shape(1, 1),
            CMat::from_row_slice(1, 3, &[c(0.0, 1.0), c(1.0, 0.0), c(0.0, 0.0)]),
            RMat::from_row_slice(1, 3, &[0.0, 0.0, 1.0]),
        )
        .unwrap();
        let r = om.realize();
        assert_eq!(r, RMat::from_row_slice(3, 3, &[0.0, 1.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0, 1.0]));
        assert!((r.determinant() + 1.0).abs() < 1e-15);
    }

    #[test]
    fn realize_scaling_multiplies_determinant() {
        let om = standard_11();
        let scaled = PeriodMatrix::new(om.shape(), om.c_block() * c(2.0, 0.0), om.r_block() * 2.0).unwrap();
        // every one of the 2n+k = 3 rows doubles
        assert!((scaled.realize().determinant() - 8.0).abs() < 1e-12);
    }

    #[test]
    fn from_realization_inverts_realize() {
        let om = PeriodMatrix::new(
            shape(1, 1),
            CMat::from_row_slice(1, 3, &[c(0.3, -1.0), c(2.0, 0.5), c(0.1, 0.7)]),
            RMat::from_row_slice(1, 3, &[1.5, -0.2, 3.0]),
        )
        .unwrap();
        assert_eq!(PeriodMatrix::from_realization(om.shape(), &om.realize()).unwrap(), om);
    }

    #[test]
    fn block_shape_errors() {
        let err = PeriodMatrix::new(shape(1, 1), CMat::zeros(1, 2), RMat::zeros(1, 3)).unwrap_err();
        assert!(matches!(err, TorusError::BlockShape { block: "complex", .. }));
        assert!(TorusShape::new(0, 2).is_err());
    }

    #[test]
    fn lattice_validation() {
        let tol = Tolerances::default();
        assert!(validate_period(&standard_11(), &tol));
        let repeated = PeriodMatrix::new(
            shape(1, 1),
            CMat::from_row_slice(1, 3, &[c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)]),
            RMat::from_row_slice(1, 3, &[0.0, 0.0, 1.0]),
        )
        .unwrap();
        assert!(!validate_period(&repeated, &tol));
        let nearly = PeriodMatrix::new(
            shape(1, 1),
            CMat::from_row_slice(1, 3, &[c(1.0, 0.0), c(1.0, 1e-12), c(0.0, 0.0)]),
            RMat::from_row_slice(1, 3, &[0.0, 0.0, 1.0]),
        )
        .unwrap();
        assert!(!validate_period(&nearly, &tol));
    }

    #[test]
    fn apply_morphism_examples() {
        let p = CrPoint {
            z: DVector::from_element(1, c(0.0, 1.0)),
            t: DVector::from_element(1, 1.0),
        };
        let id = TorusMorphism::identity(shape(1, 1));
        assert_eq!(apply_morphism(&id, &p), p);
        let phi = TorusMorphism::linear(
            CMat::from_element(1, 1, c(2.0, 0.0)),
            CMat::from_element(1, 1, c(1.0, 0.0)),
            RMat::from_element(1, 1, 3.0),
        )
        .unwrap();
        let q = apply_morphism(&phi, &p);
        assert_eq!(q.z[0], c(1.0, 2.0));
        assert_eq!(q.t[0], 3.0);
    }

    #[test]
    fn morphism_inverse_with_translation() {
        let phi = TorusMorphism::linear(
            CMat::from_element(1, 1, c(2.0, 1.0)),
            CMat::from_element(1, 1, c(0.5, -1.0)),
            RMat::from_element(1, 1, 3.0),
        )
        .unwrap()
        .with_translation(DVector::from_element(1, c(0.25, 4.0)), DVector::from_element(1, -2.0));
        let inv = phi.inverse().unwrap();
        let p = CrPoint {
            z: DVector::from_element(1, c(0.7, -0.3)),
            t: DVector::from_element(1, 1.25),
        };
        let back = apply_morphism(&inv, &apply_morphism(&phi, &p));
        assert!((back.z[0] - p.z[0]).norm() < 1e-14);
        assert!((back.t[0] - p.t[0]).abs() < 1e-14);
    }

    #[test]
    fn cr_witness_rejects_non_unimodular() {
        let om = standard_11();
        let tol = Tolerances::default();
        let good = EquivalenceWitness {
            m: TorusMorphism::identity(om.shape()),
            p: IntMatrix::identity(3),
        };
        assert!(verify_cr_witness(&good, &om, &om, &tol).accepted);
        let bad = EquivalenceWitness {
            m: TorusMorphism::identity(om.shape()),
            p: IntMatrix::diag(&[2, 1, 1]),
        };
        let report = verify_cr_witness(&bad, &om, &om, &tol);
        assert!(!report.accepted);
        assert!(report.reasons.iter().any(|r| r.contains("unimodular")));
    }

    #[test]
    fn maps_lattice_examples() {
        let om = standard_11();
        let tol = Tolerances::default();
        let id = TorusMorphism::identity(om.shape());
        assert!(maps_lattice_into(&id, &om, &om, &tol));
        let scaled = |f: f64| {
            TorusMorphism::linear(
                CMat::from_element(1, 1, c(f, 0.0)),
                CMat::zeros(1, 1),
                RMat::identity(1, 1),
            )
            .unwrap()
        };
        assert!(maps_lattice_into(&scaled(2.0), &om, &om, &tol));
        assert!(!maps_lattice_into(&scaled(0.5), &om, &om, &tol));
        let shifted = id.clone().with_translation(DVector::from_element(1, c(0.5, 0.0)), DVector::zeros(1));
        assert!(!maps_lattice_into(&shifted, &om, &om, &tol));
        let lattice_shift = id.with_translation(DVector::from_element(1, c(1.0, -2.0)), DVector::from_element(1, 3.0));
        assert!(maps_lattice_into(&lattice_shift, &om, &om, &tol));
    }

    #[test]
    fn adapt_rejects_degenerate_input() {
        let om = PeriodMatrix::new(
            shape(1, 1),
            CMat::from_row_slice(1, 3, &[c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)]),
            RMat::from_row_slice(1, 3, &[0.0, 0.0, 1.0]),
        )
        .unwrap();
        assert_eq!(adapt(&om, &Tolerances::default()).unwrap_err(), TorusError::NotALattice);
    }
}
