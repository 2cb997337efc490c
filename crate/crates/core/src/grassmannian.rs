//! The period space as a locus of isotropic `n`-planes in `ℂ²ⁿ⁺ᵏ`.
//!
//! Planes live in lattice coordinates: the torus with realization `R`
//! corresponds to `L = R⁻¹·L₀`, where `L₀` is spanned by `eᵢ − i·eₙ₊ᵢ` in
//! `(Re z, Im z, t)` coordinates. Equivalently, row `i` of the basis is
//! `xᵢ − i·J xᵢ` for `xᵢ = R⁻¹eᵢ` and `J = R⁻¹J₀R` the leaf complex
//! structure seen from the lattice. The ambient form is the canonical
//! integral form `[[0, Δ, 0], [−Δ, 0, 0], [0, 0, 0]]` complexified, so
//! `L` is isotropic exactly when the lattice form is `J`-invariant.

use nalgebra::LU;
use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::exact_linalg::canonical_alternating;
use crate::numeric::{
    c, is_relatively_positive, max_abs, max_abs_c, numerical_rank, singular_values,
    singular_values_c, standard_complex_structure, subspace_distance, symmetric_eigen_sorted,
    to_complex, CMat, RMat, Tolerances,
};
use crate::polarization::Polarization;
use crate::torus::{validate_period, AdaptedPeriodMatrix, PeriodMatrix, TorusError, TorusShape};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GrassmannError {
    #[error("generators are numerically dependent")]
    DegenerateSpan,
    #[error("plane basis has numerical rank {rank}, expected {expected}")]
    RankDeficientPlane { rank: usize, expected: usize },
    #[error("plane does not complete to a lattice basis")]
    RankDeficientCompletion,
    #[error("plane is not isotropic (residual {0:.3e})")]
    NotOnVariety(f64),
    #[error("no admissible chart sample after {0} attempts")]
    SamplingExhausted(usize),
    #[error("expected {expected} divisors, got {found}")]
    DivisorCount { expected: usize, found: usize },
    #[error("divisors must be positive")]
    NonPositiveDivisor,
    #[error("plane lives in ℂ^{found}, expected ℂ^{expected}")]
    AmbientMismatch { expected: usize, found: usize },
    #[error(transparent)]
    Torus(#[from] TorusError),
}

/// `J` defined on `V = span(γ₁, …, γ₂ₙ)` by `Jγᵢ = γₙ₊ᵢ`, `Jγₙ₊ᵢ = −γᵢ`.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexStructureData {
    /// `γ₁, …, γ₂ₙ` as columns in standard coordinates.
    pub v_basis: RMat,
    /// `J` in standard coordinates, zero on the span of the last `k` generators.
    pub j_std: RMat,
    /// `J` in the `γ`-frame: always `[[0, −I], [I, 0]]`.
    pub j_frame: RMat,
    /// `f`: standard coordinates → `γ`-frame, `f(γᵢ) = eᵢ`.
    pub frame: RMat,
}

impl ComplexStructureData {
    /// `max |J²v + v|` over the basis of `V`.
    pub fn j_squared_residual(&self) -> f64 {
        max_abs(&(&self.j_std * &self.j_std * &self.v_basis + &self.v_basis))
    }

    /// `g(u, v) = f*ω(u, Jv)` in the `γ`-frame.
    pub fn g_matrix(&self, e: &Polarization) -> RMat {
        let two_n = self.j_frame.nrows();
        let leaf = e.matrix().to_f64().view((0, 0), (two_n, two_n)).into_owned();
        leaf * &self.j_frame
    }
}

pub fn complex_structure(
    omega: &PeriodMatrix,
    tol: &Tolerances,
) -> Result<ComplexStructureData, GrassmannError> {
    if !validate_period(omega, tol) {
        return Err(GrassmannError::DegenerateSpan);
    }
    let n = omega.shape().n();
    let dim = omega.shape().real_dim();
    let r = omega.realize();
    let r_inv = LU::new(r.clone()).try_inverse().ok_or(GrassmannError::DegenerateSpan)?;
    let j_frame = standard_complex_structure(n);
    let mut block = RMat::zeros(dim, dim);
    block.view_mut((0, 0), (2 * n, 2 * n)).copy_from(&j_frame);
    Ok(ComplexStructureData {
        v_basis: r.columns(0, 2 * n).into_owned(),
        j_std: &r * block * &r_inv,
        j_frame,
        frame: r_inv.rows(0, 2 * n).into_owned(),
    })
}

/// An `n`-plane in `ℂ²ⁿ⁺ᵏ`, spanned by the rows of `basis`.
///
/// The basis is carried as given; operations that only depend on the
/// subspace go through [`IsotropicPlane::canonical_form`] or
/// [`IsotropicPlane::distance`].
#[derive(Clone, Debug, PartialEq)]
pub struct IsotropicPlane {
    basis: CMat,
    shape: TorusShape,
}

impl IsotropicPlane {
    pub fn new(basis: CMat, tol: &Tolerances) -> Result<Self, GrassmannError> {
        let n = basis.nrows();
        if n == 0 || basis.ncols() < 2 * n {
            return Err(GrassmannError::AmbientMismatch {
                expected: 2 * n.max(1),
                found: basis.ncols(),
            });
        }
        let shape = TorusShape::new(n, basis.ncols() - 2 * n)?;
        let rank = numerical_rank(&singular_values_c(&basis), tol.eps_rank);
        if rank != n {
            return Err(GrassmannError::RankDeficientPlane { rank, expected: n });
        }
        Ok(Self { basis, shape })
    }

    pub fn basis(&self) -> &CMat {
        &self.basis
    }

    pub fn shape(&self) -> TorusShape {
        self.shape
    }

    /// Reduced row echelon form, partial pivoting by largest magnitude.
    pub fn canonical_form(&self) -> CMat {
        let mut m = self.basis.clone();
        let (rows, cols) = m.shape();
        let scale = max_abs_c(&m);
        let mut r = 0;
        for col in 0..cols {
            if r == rows {
                break;
            }
            let (best, val) = (r..rows)
                .map(|i| (i, m[(i, col)].norm()))
                .fold((r, -1.0), |acc, x| if x.1 > acc.1 { x } else { acc });
            if val <= 1e-12 * scale {
                continue;
            }
            m.swap_rows(r, best);
            let p = m[(r, col)];
            for j in 0..cols {
                m[(r, j)] /= p;
            }
            for i in (0..rows).filter(|&i| i != r) {
                let f = m[(i, col)];
                if f.norm() == 0.0 {
                    continue;
                }
                for j in 0..cols {
                    let d = f * m[(r, j)];
                    m[(i, j)] -= d;
                }
            }
            r += 1;
        }
        m
    }

    /// Largest principal angle to `other`.
    pub fn distance(&self, other: &Self) -> f64 {
        subspace_distance(&self.basis, &other.basis)
    }

    pub fn conjugate(&self) -> CMat {
        self.basis.map(|z| z.conj())
    }
}

/// Complexified canonical form `[[0, Δ, 0], [−Δ, 0, 0], [0, 0, 0]]` on `ℂ²ⁿ⁺ᵏ`.
#[derive(Clone, Debug, PartialEq)]
pub struct AmbientForm {
    matrix: RMat,
    divisors: Vec<BigInt>,
    shape: TorusShape,
}

impl AmbientForm {
    pub fn canonical(shape: TorusShape, divisors: &[BigInt]) -> Result<Self, GrassmannError> {
        if divisors.len() != shape.n() {
            return Err(GrassmannError::DivisorCount {
                expected: shape.n(),
                found: divisors.len(),
            });
        }
        if divisors.iter().any(|d| d <= &BigInt::zero()) {
            return Err(GrassmannError::NonPositiveDivisor);
        }
        Ok(Self {
            matrix: canonical_alternating(divisors, shape.k()).to_f64(),
            divisors: divisors.to_vec(),
            shape,
        })
    }

    /// `Δ = I`.
    pub fn principal(shape: TorusShape) -> Self {
        Self::canonical(shape, &vec![BigInt::from(1); shape.n()]).expect("unit divisors")
    }

    pub fn matrix(&self) -> &RMat {
        &self.matrix
    }

    pub fn divisors(&self) -> &[BigInt] {
        &self.divisors
    }

    pub fn shape(&self) -> TorusShape {
        self.shape
    }

    /// The `2n×2n` block `[[0, Δ], [−Δ, 0]]`.
    pub fn symplectic_block(&self) -> RMat {
        let two_n = 2 * self.shape.n();
        self.matrix.view((0, 0), (two_n, two_n)).into_owned()
    }
}

/// Inverse realization, computed blockwise for adapted input so that the
/// trailing block stays exactly `[[0], [I]]`.
fn inverse_realization(omega: &PeriodMatrix, tol: &Tolerances) -> Result<RMat, GrassmannError> {
    if !validate_period(omega, tol) {
        return Err(GrassmannError::DegenerateSpan);
    }
    let r = omega.realize();
    if !omega.is_adapted() {
        return LU::new(r).try_inverse().ok_or(GrassmannError::DegenerateSpan);
    }
    let shape = omega.shape();
    let (two_n, k) = (2 * shape.n(), shape.k());
    let q = r.view((0, 0), (two_n, two_n)).into_owned();
    let t = r.view((two_n, 0), (k, two_n)).into_owned();
    let q_inv = LU::new(q).try_inverse().ok_or(GrassmannError::DegenerateSpan)?;
    let mut inv = RMat::identity(two_n + k, two_n + k);
    inv.view_mut((0, 0), (two_n, two_n)).copy_from(&q_inv);
    inv.view_mut((two_n, 0), (k, two_n)).copy_from(&(-(t * &q_inv)));
    Ok(inv)
}

pub fn plane_from_period(
    omega: &PeriodMatrix,
    tol: &Tolerances,
) -> Result<IsotropicPlane, GrassmannError> {
    let shape = omega.shape();
    let n = shape.n();
    let r_inv = inverse_realization(omega, tol)?;
    let basis = CMat::from_fn(n, shape.real_dim(), |i, j| c(r_inv[(j, i)], -r_inv[(j, n + i)]));
    Ok(IsotropicPlane { basis, shape })
}

/// `[Re l₁ … Re lₙ, −Im l₁ … −Im lₙ]` restricted to the first `2n` coordinates
/// (`a`) and to the last `k` (`c`).
fn real_frame(l: &IsotropicPlane) -> (RMat, RMat) {
    let shape = l.shape;
    let (n, k) = (shape.n(), shape.k());
    let b = &l.basis;
    let entry = |row: usize, col: usize| {
        if col < n {
            b[(col, row)].re
        } else {
            -b[(col - n, row)].im
        }
    };
    let a = RMat::from_fn(2 * n, 2 * n, |i, j| entry(i, j));
    let cm = RMat::from_fn(k, 2 * n, |i, j| entry(2 * n + i, j));
    (a, cm)
}

pub fn period_from_plane(
    l: &IsotropicPlane,
    tol: &Tolerances,
) -> Result<AdaptedPeriodMatrix, GrassmannError> {
    let shape = l.shape;
    let n = shape.n();
    let (a, cm) = real_frame(l);
    let sv = singular_values(&a);
    if numerical_rank(&sv, tol.eps_rank) != 2 * n {
        return Err(GrassmannError::RankDeficientCompletion);
    }
    let q = LU::new(a).try_inverse().ok_or(GrassmannError::RankDeficientCompletion)?;
    let t = -(cm * &q);
    let z = CMat::from_fn(n, 2 * n, |i, j| c(q[(i, j)], q[(n + i, j)]));
    Ok(AdaptedPeriodMatrix::from_blocks(shape, &z, &t)?)
}

/// `L ∩ L̄ = {0}`: the stack `[L; L̄]` has numerical rank `2n`.
pub fn check_transversality(l: &IsotropicPlane, tol: &Tolerances) -> bool {
    let n = l.shape.n();
    let conj = l.conjugate();
    let stacked = CMat::from_fn(2 * n, l.basis.ncols(), |i, j| {
        if i < n {
            l.basis[(i, j)]
        } else {
            conj[(i - n, j)]
        }
    });
    numerical_rank(&singular_values_c(&stacked), tol.eps_rank) == 2 * n
}

/// `max_ij |ᵗlᵢ·Ẽ·lⱼ|`.
pub fn check_isotropy(l: &IsotropicPlane, form: &AmbientForm) -> f64 {
    let b = &l.basis;
    max_abs_c(&(b * to_complex(&form.matrix) * b.transpose()))
}

fn isotropy_scale(l: &IsotropicPlane, form: &AmbientForm) -> f64 {
    let row_norm = l
        .basis
        .row_iter()
        .map(|r| r.norm_squared())
        .fold(0.0, f64::max);
    (max_abs(&form.matrix) * row_norm).max(f64::MIN_POSITIVE)
}

pub fn is_isotropic(l: &IsotropicPlane, form: &AmbientForm, tol: &Tolerances) -> bool {
    l.shape == form.shape && check_isotropy(l, form) < tol.eps_eq * isotropy_scale(l, form)
}

/// Membership in the period space: transversal and isotropic.
pub fn is_member(l: &IsotropicPlane, form: &AmbientForm, tol: &Tolerances) -> bool {
    check_transversality(l, tol) && is_isotropic(l, form, tol)
}

/// Positivity of `g(u, v) = E(u, J v)` with `J` the `γ`-frame structure
/// `[[0, −I], [I, 0]]` and `E` the lattice values of the form.
pub fn check_positivity(omega: &AdaptedPeriodMatrix, e: &Polarization, tol: &Tolerances) -> bool {
    let n = omega.shape().n();
    if e.size() != omega.shape().real_dim() {
        return false;
    }
    let leaf = e.matrix().to_f64().view((0, 0), (2 * n, 2 * n)).into_owned();
    symmetric_positive(&(leaf * standard_complex_structure(n)), tol)
}

fn symmetric_positive(g: &RMat, tol: &Tolerances) -> bool {
    let scale = max_abs(g).max(f64::MIN_POSITIVE);
    let asym = max_abs(&(g - g.transpose()));
    let (eig, _) = symmetric_eigen_sorted(g);
    asym < tol.eps_eq * scale && is_relatively_positive(&eig, tol.eps_pos)
}

/// The complex structure `J` on `ℝ²ⁿ` (first `2n` lattice coordinates)
/// whose `+i` eigenspace is the projection of `L`.
pub fn plane_structure(l: &IsotropicPlane, tol: &Tolerances) -> Result<RMat, GrassmannError> {
    let (a, _) = real_frame(l);
    if numerical_rank(&singular_values(&a), tol.eps_rank) != a.nrows() {
        return Err(GrassmannError::RankDeficientCompletion);
    }
    let a_inv = LU::new(a.clone()).try_inverse().ok_or(GrassmannError::RankDeficientCompletion)?;
    Ok(a * standard_complex_structure(l.shape.n()) * a_inv)
}

/// Strict membership: `ω(u, J u) > 0` for the plane's own complex structure.
pub fn plane_positivity(l: &IsotropicPlane, form: &AmbientForm, tol: &Tolerances) -> bool {
    match plane_structure(l, tol) {
        Ok(j) => symmetric_positive(&(form.symplectic_block() * j), tol),
        Err(_) => false,
    }
}

/// `n(n+1)/2 + kn`: free entries of `S` (with `ΔS` symmetric) plus those of `R`.
pub fn chart_parameter_count(shape: TorusShape) -> usize {
    let (n, k) = (shape.n(), shape.k());
    n * (n + 1) / 2 + k * n
}

/// `n(n+1+2k)/2`.
pub fn moduli_dimension(shape: TorusShape) -> usize {
    let (n, k) = (shape.n(), shape.k());
    let twice = n * (n + 1 + 2 * k);
    debug_assert!(twice % 2 == 0);
    twice / 2
}

/// Row space of `[I_n | ᵗS | ᵗR]`.
pub fn chart_plane(
    shape: TorusShape,
    s: &CMat,
    r: &CMat,
    tol: &Tolerances,
) -> Result<IsotropicPlane, GrassmannError> {
    let (n, k) = (shape.n(), shape.k());
    if s.shape() != (n, n) || r.shape() != (k, n) {
        return Err(GrassmannError::AmbientMismatch {
            expected: shape.real_dim(),
            found: n + s.ncols() + r.nrows(),
        });
    }
    let basis = CMat::from_fn(n, shape.real_dim(), |i, j| {
        if j < n {
            if i == j {
                c(1.0, 0.0)
            } else {
                c(0.0, 0.0)
            }
        } else if j < 2 * n {
            s[(j - n, i)]
        } else {
            r[(j - 2 * n, i)]
        }
    });
    IsotropicPlane::new(basis, tol)
}

const CHART_RETRIES: usize = 64;

/// Random chart point with `ΔS = A − iB`, `A` symmetric and `B` positive
/// definite, and `R` free. Such points are isotropic, transversal and
/// positive for the plane's own complex structure.
pub fn sample_chart(
    shape: TorusShape,
    divisors: &[BigInt],
    seed: u64,
    tol: &Tolerances,
) -> Result<IsotropicPlane, GrassmannError> {
    let form = AmbientForm::canonical(shape, divisors)?;
    let (n, k) = (shape.n(), shape.k());
    let d: Vec<f64> = divisors.iter().map(|x| x.to_f64().unwrap_or(f64::NAN)).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..CHART_RETRIES {
        let mut sym = RMat::zeros(n, n);
        for i in 0..n {
            for j in i..n {
                let v = rng.gen_range(-1.0..1.0);
                sym[(i, j)] = v;
                sym[(j, i)] = v;
            }
        }
        let x = RMat::from_fn(n, n, |_, _| rng.gen_range(-1.0..1.0));
        let pos = &x * x.transpose() + RMat::identity(n, n) * 0.5;
        let s = CMat::from_fn(n, n, |i, j| c(sym[(i, j)], -pos[(i, j)]) / d[i]);
        let r = CMat::from_fn(k, n, |_, _| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
        let Ok(l) = chart_plane(shape, &s, &r, tol) else {
            continue;
        };
        if check_transversality(&l, tol)
            && check_isotropy(&l, &form) < 1e-12
            && period_from_plane(&l, tol).is_ok()
        {
            return Ok(l);
        }
    }
    Err(GrassmannError::SamplingExhausted(CHART_RETRIES))
}

/// Complex dimension of the isotropic locus at `L`: `n(n+k)` chart
/// coordinates minus the rank of the linearized constraints `ᵗlᵢẼlⱼ = 0`.
pub fn tangent_dimension(
    l: &IsotropicPlane,
    form: &AmbientForm,
    tol: &Tolerances,
) -> Result<usize, GrassmannError> {
    if l.shape != form.shape {
        return Err(GrassmannError::AmbientMismatch {
            expected: form.shape.real_dim(),
            found: l.shape.real_dim(),
        });
    }
    if !is_isotropic(l, form, tol) {
        return Err(GrassmannError::NotOnVariety(check_isotropy(l, form)));
    }
    let n = l.shape.n();
    let dim = l.shape.real_dim();

    // Chart at L: pivot on the best-conditioned n columns, L = row space of B̂
    // with B̂ = I on the pivot columns.
    let mut work = l.basis.clone();
    let mut pivots = Vec::with_capacity(n);
    for row in 0..n {
        let (pc, _) = (0..dim)
            .filter(|j| !pivots.contains(j))
            .map(|j| (j, work[(row, j)].norm()))
            .fold((usize::MAX, -1.0), |acc, x| if x.1 > acc.1 { x } else { acc });
        for i in row + 1..n {
            let f = work[(i, pc)] / work[(row, pc)];
            for j in 0..dim {
                let v = f * work[(row, j)];
                work[(i, j)] -= v;
            }
        }
        pivots.push(pc);
    }
    let bp = CMat::from_fn(n, n, |i, j| l.basis[(i, pivots[j])]);
    let bp_inv = LU::new(bp).try_inverse().ok_or(GrassmannError::RankDeficientPlane {
        rank: n - 1,
        expected: n,
    })?;
    let normalized = bp_inv * &l.basis;
    let free: Vec<usize> = (0..dim).filter(|j| !pivots.contains(j)).collect();

    let e = to_complex(&form.matrix);
    let eb = &e * normalized.transpose();
    let constraints: Vec<(usize, usize)> = (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).collect();
    let unknowns = n * free.len();
    if constraints.is_empty() {
        return Ok(unknowns);
    }
    let mut jac = CMat::zeros(constraints.len(), unknowns);
    for i in 0..n {
        for (fi, &f) in free.iter().enumerate() {
            // dB = unit at (i, f): dF = dB·Ẽ·ᵗB̂ − ᵗ(dB·Ẽ·ᵗB̂)
            let col = i * free.len() + fi;
            for (ci, &(a, b)) in constraints.iter().enumerate() {
                let mut v = c(0.0, 0.0);
                if a == i {
                    v += eb[(f, b)];
                }
                if b == i {
                    v -= eb[(f, a)];
                }
                jac[(ci, col)] = v;
            }
        }
    }
    let rank = numerical_rank(&singular_values_c(&jac), 1e-7);
    Ok(unknowns - rank)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    fn period(n: usize, k: usize, c_row: &[num_complex::Complex64], r_row: &[f64]) -> PeriodMatrix {
        let shape = TorusShape::new(n, k).unwrap();
        PeriodMatrix::new(
            shape,
            CMat::from_row_slice(n, shape.real_dim(), c_row),
            RMat::from_row_slice(k, shape.real_dim(), r_row),
        )
        .unwrap()
    }

    #[test]
    fn structure_of_standard_fixture_is_rotation() {
        let om = period(1, 1, &[c(1.0, 0.0), c(0.0, 1.0), c(0.0, 0.0)], &[0.0, 0.0, 1.0]);
        let cs = complex_structure(&om, &tol()).unwrap();
        let expected = RMat::from_row_slice(3, 3, &[0.0, -1.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0, 0.0]);
        assert!(max_abs(&(cs.j_std - expected)) < 1e-15);
    }

    #[test]
    fn structure_of_swapped_fixture() {
        let om = period(1, 1, &[c(0.0, 1.0), c(1.0, 0.0), c(0.0, 0.0)], &[0.0, 0.0, 1.0]);
        let cs = complex_structure(&om, &tol()).unwrap();
        let image = &cs.j_std * nalgebra::DVector::from_vec(vec![0.0, 1.0, 0.0]);
        assert!((image - nalgebra::DVector::from_vec(vec![1.0, 0.0, 0.0])).amax() < 1e-15);
        assert!(cs.j_squared_residual() < 1e-12);
    }

    #[test]
    fn degenerate_span_is_rejected() {
        let om = period(1, 1, &[c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)], &[0.0, 0.0, 1.0]);
        assert_eq!(complex_structure(&om, &tol()).unwrap_err(), GrassmannError::DegenerateSpan);
    }

    #[test]
    fn plane_of_fixtures() {
        let om = period(1, 1, &[c(1.0, 0.0), c(0.0, 1.0), c(0.0, 0.0)], &[0.0, 0.0, 1.0]);
        let l = plane_from_period(&om, &tol()).unwrap();
        assert_eq!(l.basis().as_slice(), &[c(1.0, 0.0), c(0.0, -1.0), c(0.0, 0.0)]);
        let om = period(1, 1, &[c(0.0, 1.0), c(1.0, 0.0), c(0.0, 0.0)], &[0.0, 0.0, 1.0]);
        let l = plane_from_period(&om, &tol()).unwrap();
        assert_eq!(l.basis().as_slice(), &[c(0.0, -1.0), c(1.0, 0.0), c(0.0, 0.0)]);
    }

    #[test]
    fn transversality_examples() {
        let t = tol();
        let l = IsotropicPlane::new(CMat::from_row_slice(1, 3, &[c(1.0, 0.0), c(0.0, -1.0), c(0.0, 0.0)]), &t).unwrap();
        assert!(check_transversality(&l, &t));
        let real = IsotropicPlane::new(CMat::from_row_slice(1, 3, &[c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)]), &t).unwrap();
        assert!(!check_transversality(&real, &t));
        let nearly = IsotropicPlane::new(CMat::from_row_slice(1, 3, &[c(1.0, 0.0), c(0.0, -1e-12), c(0.0, 0.0)]), &t).unwrap();
        assert!(!check_transversality(&nearly, &t));
    }

    #[test]
    fn real_plane_has_no_period() {
        let t = tol();
        let real = IsotropicPlane::new(CMat::from_row_slice(1, 3, &[c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)]), &t).unwrap();
        assert_eq!(period_from_plane(&real, &t).unwrap_err(), GrassmannError::RankDeficientCompletion);
    }

    #[test]
    fn rank_deficient_basis_rejected() {
        let b = CMat::from_row_slice(2, 4, &[c(1.0, 0.0), c(0.0, 1.0), c(0.0, 0.0), c(0.0, 0.0), c(2.0, 0.0), c(0.0, 2.0), c(0.0, 0.0), c(0.0, 0.0)]);
        assert!(matches!(
            IsotropicPlane::new(b, &tol()),
            Err(GrassmannError::RankDeficientPlane { rank: 1, expected: 2 })
        ));
    }

    #[test]
    fn canonical_form_is_basis_independent() {
        let t = tol();
        let b = CMat::from_row_slice(2, 4, &[c(1.0, 0.0), c(2.0, 1.0), c(0.0, 0.5), c(3.0, 0.0), c(0.0, 1.0), c(1.0, 0.0), c(1.0, 1.0), c(0.0, -2.0)]);
        let g = CMat::from_row_slice(2, 2, &[c(0.3, 1.0), c(2.0, 0.0), c(-1.0, 0.5), c(0.0, 1.0)]);
        let l1 = IsotropicPlane::new(b.clone(), &t).unwrap();
        let l2 = IsotropicPlane::new(g * b, &t).unwrap();
        assert!(max_abs_c(&(l1.canonical_form() - l2.canonical_form())) < 1e-12);
        assert!(l1.distance(&l2) < 1e-12);
    }

    #[test]
    fn divisor_validation() {
        let shape = TorusShape::new(2, 1).unwrap();
        assert!(matches!(
            AmbientForm::canonical(shape, &[BigInt::from(1)]),
            Err(GrassmannError::DivisorCount { expected: 2, found: 1 })
        ));
        assert_eq!(
            AmbientForm::canonical(shape, &[BigInt::from(1), BigInt::from(0)]).unwrap_err(),
            GrassmannError::NonPositiveDivisor
        );
    }

    #[test]
    fn non_isotropic_plane_has_no_tangent_dimension() {
        let shape = TorusShape::new(2, 0).unwrap();
        let s = CMat::from_row_slice(2, 2, &[c(0.0, -1.0), c(1.0, 0.0), c(0.0, 0.0), c(0.0, -1.0)]);
        let l = chart_plane(shape, &s, &CMat::zeros(0, 2), &tol()).unwrap();
        let form = AmbientForm::principal(shape);
        assert!(matches!(tangent_dimension(&l, &form, &tol()), Err(GrassmannError::NotOnVariety(_))));
    }
}
