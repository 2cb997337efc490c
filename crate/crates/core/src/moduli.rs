//! Polarized equivalence `M·Ω = Ω′·P` with `M ∈ F` and `P ∈ H`, the induced
//! action of `H` on isotropic planes, and experiments probing its proper
//! discontinuity.
//!
//! `F` consists of `[[A, 0], [0, I]]` with `A` unitary; `H` of integral
//! `[[α, 0], [β, I]]` with `α` symplectic for the chosen form.

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};
use rand::Rng;
use thiserror::Error;

use crate::exact_linalg::{
    frobenius_normal_form, is_integral_symplectic, standard_symplectic_form,
    twisted_symplectic_form, IntMatrix, LinalgError,
};
use crate::grassmannian::{
    period_from_plane, plane_from_period, plane_structure, AmbientForm, GrassmannError,
    IsotropicPlane,
};
use crate::numeric::{
    max_abs, max_abs_c, singular_values, symmetric_eigen_sorted, CMat, RMat, Tolerances,
};
use crate::polarization::Polarization;
use crate::torus::{adapt, witness_residual, AdaptedPeriodMatrix, TorusError, TorusShape, WitnessReport};

/// Hard cap on enumerated candidates in [`orbit_distance_sample`].
pub const ORBIT_CANDIDATE_CAP: u128 = 10_000_000;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ModuliError {
    #[error("matrix is not in H for the chosen form")]
    NotLatticeSymmetry,
    #[error("matrix is not in F")]
    NotPolarizedLinearPart,
    #[error("α does not preserve the symplectic form")]
    NotSymplectic,
    #[error("{0} is not symmetric positive definite")]
    NotPositive(&'static str),
    #[error("enumeration needs {needed} candidates, cap is {cap}")]
    BudgetExceeded { needed: u128, cap: u128 },
    #[error("bound must be at least 1")]
    InvalidBound,
    #[error("polarization has {found} divisors, expected {expected}")]
    DivisorCount { expected: usize, found: usize },
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Torus(#[from] TorusError),
    #[error(transparent)]
    Grassmann(#[from] GrassmannError),
}

/// Which alternating form `α` must preserve.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub enum FormConvention {
    /// `[[0, I], [−I, 0]]`.
    #[default]
    Standard,
    /// `[[0, Δ], [−Δ, 0]]`.
    Twisted(Vec<BigInt>),
}

impl FormConvention {
    pub fn form(&self, n: usize) -> IntMatrix {
        match self {
            Self::Standard => standard_symplectic_form(n),
            Self::Twisted(d) => twisted_symplectic_form(d),
        }
    }

    fn divisors(&self, n: usize) -> Vec<BigInt> {
        match self {
            Self::Standard => vec![BigInt::one(); n],
            Self::Twisted(d) => d.clone(),
        }
    }

    fn check(&self, n: usize) -> Result<(), ModuliError> {
        match self {
            Self::Twisted(d) if d.len() != n => Err(ModuliError::DivisorCount {
                expected: n,
                found: d.len(),
            }),
            _ => Ok(()),
        }
    }
}

pub fn is_f_member(m: &CMat, shape: TorusShape, tol: &Tolerances) -> bool {
    let (n, k) = (shape.n(), shape.k());
    if m.shape() != (n + k, n + k) {
        return false;
    }
    let zero = num_complex::Complex64::new(0.0, 0.0);
    let one = num_complex::Complex64::new(1.0, 0.0);
    for i in 0..n + k {
        for j in 0..n + k {
            let v = m[(i, j)];
            let ok = match (i < n, j < n) {
                (true, true) => true,
                (false, false) => v == if i == j { one } else { zero },
                _ => v == zero,
            };
            if !ok {
                return false;
            }
        }
    }
    let a = m.view((0, 0), (n, n)).into_owned();
    let residual = max_abs_c(&(a.adjoint() * &a - CMat::identity(n, n)));
    residual < tol.eps_eq
}

pub fn is_h_member(p: &IntMatrix, shape: TorusShape, convention: &FormConvention) -> bool {
    let (n, dim) = (shape.n(), shape.real_dim());
    if p.shape() != (dim, dim) || convention.check(n).is_err() {
        return false;
    }
    for i in 0..dim {
        for j in 2 * n..dim {
            let expected = if i == j { BigInt::one() } else { BigInt::zero() };
            if p[(i, j)] != expected {
                return false;
            }
        }
    }
    let alpha = p.submatrix(0..2 * n, 0..2 * n);
    is_integral_symplectic(&alpha, &convention.form(n)).unwrap_or(false)
}

/// `[[A, 0], [0, I_k]]` with `A` unitary.
#[derive(Clone, Debug, PartialEq)]
pub struct PolarizedLinearPart {
    matrix: CMat,
    shape: TorusShape,
}

impl PolarizedLinearPart {
    pub fn new(matrix: CMat, shape: TorusShape, tol: &Tolerances) -> Result<Self, ModuliError> {
        if !is_f_member(&matrix, shape, tol) {
            return Err(ModuliError::NotPolarizedLinearPart);
        }
        Ok(Self { matrix, shape })
    }

    pub fn identity(shape: TorusShape) -> Self {
        let size = shape.n() + shape.k();
        Self {
            matrix: CMat::identity(size, size),
            shape,
        }
    }

    pub fn matrix(&self) -> &CMat {
        &self.matrix
    }

    /// `A` is unitary, so the inverse is the adjoint.
    pub fn inverse(&self) -> Self {
        Self {
            matrix: self.matrix.adjoint(),
            shape: self.shape,
        }
    }

    pub fn compose(&self, next: &Self) -> Self {
        Self {
            matrix: &next.matrix * &self.matrix,
            shape: self.shape,
        }
    }
}

/// `[[α, 0], [β, I_k]]` in `H`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatticeSymmetry {
    matrix: IntMatrix,
    shape: TorusShape,
}

impl LatticeSymmetry {
    pub fn new(matrix: IntMatrix, shape: TorusShape, convention: &FormConvention) -> Result<Self, ModuliError> {
        if !is_h_member(&matrix, shape, convention) {
            return Err(ModuliError::NotLatticeSymmetry);
        }
        Ok(Self { matrix, shape })
    }

    pub fn from_blocks(
        alpha: &IntMatrix,
        beta: &IntMatrix,
        shape: TorusShape,
        convention: &FormConvention,
    ) -> Result<Self, ModuliError> {
        let (two_n, k) = (2 * shape.n(), shape.k());
        if alpha.shape() != (two_n, two_n) || beta.shape() != (k, two_n) {
            return Err(ModuliError::NotLatticeSymmetry);
        }
        let matrix = IntMatrix::from_fn(two_n + k, two_n + k, |i, j| match (i < two_n, j < two_n) {
            (true, true) => alpha[(i, j)].clone(),
            (false, true) => beta[(i - two_n, j)].clone(),
            (true, false) => BigInt::zero(),
            (false, false) => BigInt::from((i == j) as i32),
        });
        Self::new(matrix, shape, convention)
    }

    pub fn identity(shape: TorusShape) -> Self {
        Self {
            matrix: IntMatrix::identity(shape.real_dim()),
            shape,
        }
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.matrix
    }

    pub fn shape(&self) -> TorusShape {
        self.shape
    }

    pub fn alpha(&self) -> IntMatrix {
        let two_n = 2 * self.shape.n();
        self.matrix.submatrix(0..two_n, 0..two_n)
    }

    pub fn beta(&self) -> IntMatrix {
        let two_n = 2 * self.shape.n();
        self.matrix.submatrix(two_n..self.shape.real_dim(), 0..two_n)
    }

    /// `self` followed by `next`, i.e. `next·self`.
    pub fn then(&self, next: &Self) -> Self {
        Self {
            matrix: next.matrix.mul(&self.matrix),
            shape: self.shape,
        }
    }

    pub fn inverse(&self) -> Self {
        Self {
            matrix: self.matrix.inverse_unimodular().expect("H is a group"),
            shape: self.shape,
        }
    }
}

/// Exact conversion of a real matrix with integral entries.
pub fn integral_matrix(p: &RMat) -> Option<IntMatrix> {
    let mut out = IntMatrix::zeros(p.nrows(), p.ncols());
    for i in 0..p.nrows() {
        for j in 0..p.ncols() {
            let v = p[(i, j)];
            if !v.is_finite() || v.fract() != 0.0 {
                return None;
            }
            out[(i, j)] = BigInt::from(v as i128);
        }
    }
    Some(out)
}

/// Checks `M ∈ F`, `P ∈ H` and `‖MΩ − Ω′P‖∞ < ε_eq·scale`.
pub fn verify_polarized_witness(
    m: &CMat,
    p: &RMat,
    omega: &AdaptedPeriodMatrix,
    omega2: &AdaptedPeriodMatrix,
    convention: &FormConvention,
    tol: &Tolerances,
) -> WitnessReport {
    let shape = omega.shape();
    let mut reasons = Vec::new();
    let dim = shape.real_dim();
    if omega2.shape() != shape || p.shape() != (dim, dim) || m.shape() != (shape.n() + shape.k(), shape.n() + shape.k()) {
        return WitnessReport {
            accepted: false,
            residual: f64::INFINITY,
            scale: 1.0,
            reasons: vec!["shape mismatch".into()],
        };
    }
    if !is_f_member(m, shape, tol) {
        reasons.push("M is not in F".into());
    }
    match integral_matrix(p) {
        Some(pi) if is_h_member(&pi, shape, convention) => {}
        Some(_) => reasons.push("P is not in H".into()),
        None => reasons.push("P is not integral".into()),
    }
    let (residual, scale) = witness_residual(m, omega, omega2, p);
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

/// A certificate `M·Ω = Ω′·P` with `M ∈ F` and `P ∈ H`.
#[derive(Clone, Debug, PartialEq)]
pub struct PolarizedWitness {
    pub m: PolarizedLinearPart,
    pub p: LatticeSymmetry,
}

impl PolarizedWitness {
    pub fn then(&self, next: &Self) -> Self {
        Self {
            m: self.m.compose(&next.m),
            p: self.p.then(&next.p),
        }
    }

    pub fn inverse(&self) -> Self {
        Self {
            m: self.m.inverse(),
            p: self.p.inverse(),
        }
    }

    pub fn verify(
        &self,
        omega: &AdaptedPeriodMatrix,
        omega2: &AdaptedPeriodMatrix,
        convention: &FormConvention,
        tol: &Tolerances,
    ) -> WitnessReport {
        verify_polarized_witness(self.m.matrix(), &self.p.matrix().to_f64(), omega, omega2, convention, tol)
    }
}

/// `L ↦ plane(adapt(Ω(L)·P⁻¹))`.
pub fn act(p: &LatticeSymmetry, l: &IsotropicPlane, tol: &Tolerances) -> Result<IsotropicPlane, ModuliError> {
    if p.shape != l.shape() {
        return Err(ModuliError::NotLatticeSymmetry);
    }
    let omega = period_from_plane(l, tol)?;
    act_on_period(p, &omega, tol)
}

fn act_on_period(p: &LatticeSymmetry, omega: &AdaptedPeriodMatrix, tol: &Tolerances) -> Result<IsotropicPlane, ModuliError> {
    let moved = omega.mul_right_int(&p.inverse().matrix);
    let adapted = adapt(&moved, tol)?;
    Ok(plane_from_period(&adapted.adapted, tol)?)
}

#[derive(Clone, Debug, PartialEq)]
pub struct OrbitHit {
    pub symmetry: LatticeSymmetry,
    pub distance: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub struct OrbitOptions {
    /// Restrict to `β = 0`.
    pub beta_zero: bool,
}

/// Odometer over all vectors in `[−bound, bound]^len`, first entry slowest.
struct Lattice {
    current: Vec<i64>,
    bound: i64,
    done: bool,
}

impl Lattice {
    fn new(len: usize, bound: i64) -> Self {
        Self {
            current: vec![-bound; len],
            bound,
            done: false,
        }
    }
}

impl Iterator for Lattice {
    type Item = Vec<i64>;

    fn next(&mut self) -> Option<Vec<i64>> {
        if self.done {
            return None;
        }
        let out = self.current.clone();
        let mut i = self.current.len();
        loop {
            if i == 0 {
                self.done = true;
                break;
            }
            i -= 1;
            if self.current[i] < self.bound {
                self.current[i] += 1;
                break;
            }
            self.current[i] = -self.bound;
        }
        Some(out)
    }
}

fn symplectic_i64(alpha: &[i64], form: &[i64], size: usize) -> bool {
    // ᵗα·ω·α = ω
    let mut wa = vec![0i64; size * size];
    for i in 0..size {
        for j in 0..size {
            wa[i * size + j] = (0..size).map(|l| form[i * size + l] * alpha[l * size + j]).sum();
        }
    }
    (0..size).all(|i| {
        (0..size).all(|j| (0..size).map(|l| alpha[l * size + i] * wa[l * size + j]).sum::<i64>() == form[i * size + j])
    })
}

fn count(side: u128, len: usize) -> u128 {
    (0..len).fold(1u128, |acc, _| acc.saturating_mul(side))
}

/// All `P ∈ H` with entries in `[−bound, bound]` moving `L` by less than
/// `radius`, sorted by distance then by entries. The symplectic filter on `α`
/// runs before any plane is computed; at most [`ORBIT_CANDIDATE_CAP`]
/// candidates (`α` candidates plus symplectic `α` times `β` candidates) are
/// examined.
pub fn orbit_distance_sample(
    l: &IsotropicPlane,
    convention: &FormConvention,
    bound: u32,
    radius: f64,
    options: OrbitOptions,
    tol: &Tolerances,
) -> Result<Vec<OrbitHit>, ModuliError> {
    if bound < 1 {
        return Err(ModuliError::InvalidBound);
    }
    let shape = l.shape();
    let (n, k) = (shape.n(), shape.k());
    convention.check(n)?;
    let two_n = 2 * n;
    let side = 2 * bound as u128 + 1;
    let alpha_count = count(side, two_n * two_n);
    if alpha_count > ORBIT_CANDIDATE_CAP {
        return Err(ModuliError::BudgetExceeded {
            needed: alpha_count,
            cap: ORBIT_CANDIDATE_CAP,
        });
    }
    let form = convention.form(n);
    let form_i64: Vec<i64> = form.entries().iter().map(|v| v.to_i64().unwrap_or(i64::MAX)).collect();
    let symplectic: Vec<Vec<i64>> = Lattice::new(two_n * two_n, bound as i64)
        .filter(|a| symplectic_i64(a, &form_i64, two_n))
        .collect();
    let beta_len = if options.beta_zero { 0 } else { k * two_n };
    let beta_count = count(side, beta_len);
    let needed = alpha_count.saturating_add((symplectic.len() as u128).saturating_mul(beta_count));
    if needed > ORBIT_CANDIDATE_CAP {
        return Err(ModuliError::BudgetExceeded {
            needed,
            cap: ORBIT_CANDIDATE_CAP,
        });
    }

    let omega = period_from_plane(l, tol)?;
    let mut hits = Vec::new();
    for a in &symplectic {
        let alpha = IntMatrix::from_fn(two_n, two_n, |i, j| BigInt::from(a[i * two_n + j]));
        for b in Lattice::new(beta_len, bound as i64) {
            let beta = IntMatrix::from_fn(k, two_n, |i, j| {
                if options.beta_zero {
                    BigInt::zero()
                } else {
                    BigInt::from(b[i * two_n + j])
                }
            });
            let p = LatticeSymmetry::from_blocks(&alpha, &beta, shape, convention)?;
            let moved = act_on_period(&p, &omega, tol)?;
            let distance = moved.distance(l);
            if distance < radius {
                hits.push(OrbitHit { symmetry: p, distance });
            }
        }
    }
    hits.sort_by(|x, y| {
        x.distance
            .total_cmp(&y.distance)
            .then_with(|| x.symmetry.matrix.entries().cmp(y.symmetry.matrix.entries()))
    });
    Ok(hits)
}

/// Outcome of [`positivity_transport_check`]. The structure used is
/// `Jₜ = J⁻¹ = −J`, so that `ᵗJₜ·ω = ω·J` is the metric of the plane.
#[derive(Clone, Debug, PartialEq)]
pub struct TransportReport {
    /// `max |ᵗJ·ω·J − ω|`.
    pub invariance_residual: f64,
    /// Ascending eigenvalues of `ᵗJₜω`.
    pub d: Vec<f64>,
    /// Ascending eigenvalues of `ᵗJ′ₜω` with `J′ₜ = α·Jₜ·α⁻¹`.
    pub d_prime: Vec<f64>,
    /// `S = Q·α⁻¹·ᵗQ′`.
    pub s_derived: RMat,
    /// `S = Q·α·Q′`.
    pub s_literal: RMat,
    /// Relative residual of `ᵗS·D·S = D′` for `s_derived`.
    pub derived_residual: f64,
    /// Same for `s_literal`.
    pub literal_residual: f64,
    pub literal_matches: bool,
    /// `‖S‖₂` for `s_derived`.
    pub s_norm: f64,
    /// `√(max D′ / min D)`.
    pub s_bound: f64,
    pub spectra_agree: bool,
    /// `max |J(α·L) − α·J·α⁻¹|`, with `α·L` computed through [`act`].
    pub pipeline_residual: f64,
    /// Principal-angle distance between `α·L` and `L`.
    pub displacement: f64,
}

const TRANSPORT_TOL: f64 = 1e-8;

impl TransportReport {
    pub fn accepted(&self) -> bool {
        self.derived_residual < TRANSPORT_TOL && self.s_norm <= self.s_bound * (1.0 + 1e-9)
    }

    pub fn fixes_plane(&self) -> bool {
        self.displacement < TRANSPORT_TOL
    }
}

fn congruence_residual(s: &RMat, d: &[f64], d_prime: &[f64]) -> f64 {
    let dm = RMat::from_diagonal(&nalgebra::DVector::from_column_slice(d));
    let dpm = RMat::from_diagonal(&nalgebra::DVector::from_column_slice(d_prime));
    let scale = d_prime.iter().fold(0.0f64, |m, v| m.max(v.abs())).max(f64::MIN_POSITIVE);
    max_abs(&(s.transpose() * dm * s - dpm)) / scale
}

fn spd_or(g: &RMat, tol: &Tolerances, what: &'static str) -> Result<(Vec<f64>, RMat), ModuliError> {
    let scale = max_abs(g).max(f64::MIN_POSITIVE);
    if max_abs(&(g - g.transpose())) >= tol.eps_eq * scale {
        return Err(ModuliError::NotPositive(what));
    }
    let (eig, v) = symmetric_eigen_sorted(&(0.5 * (g + g.transpose())));
    let max = eig.last().copied().unwrap_or(0.0);
    if !(eig[0] > tol.eps_pos * max) {
        return Err(ModuliError::NotPositive(what));
    }
    Ok((eig, v))
}

/// Transports the metric `ω(·, J·)` of `L` along `α` and checks the
/// congruence `D′ = ᵗS·D·S` that bounds `α` in terms of the two spectra.
/// `E` is reduced to its Frobenius form to obtain `ω = [[0, Δ], [−Δ, 0]]`;
/// `L` must be given in the matching coordinates.
pub fn positivity_transport_check(
    alpha: &IntMatrix,
    l: &IsotropicPlane,
    e: &Polarization,
    tol: &Tolerances,
) -> Result<TransportReport, ModuliError> {
    let shape = l.shape();
    let n = shape.n();
    let frob = frobenius_normal_form(e.matrix())?;
    if frob.divisors.len() != n || e.size() != shape.real_dim() {
        return Err(ModuliError::DivisorCount {
            expected: n,
            found: frob.divisors.len(),
        });
    }
    let form = AmbientForm::canonical(shape, &frob.divisors)?;
    transport_with_form(alpha, l, &form, tol)
}

/// [`positivity_transport_check`] against an explicit canonical form.
pub fn transport_with_form(
    alpha: &IntMatrix,
    l: &IsotropicPlane,
    form: &AmbientForm,
    tol: &Tolerances,
) -> Result<TransportReport, ModuliError> {
    let shape = l.shape();
    let n = shape.n();
    let two_n = 2 * n;
    let convention = FormConvention::Twisted(form.divisors().to_vec());
    if alpha.shape() != (two_n, two_n) || !is_integral_symplectic(alpha, &convention.form(n))? {
        return Err(ModuliError::NotSymplectic);
    }
    let omega = form.symplectic_block();
    let a = alpha.to_f64();
    let a_inv = alpha.inverse_unimodular().expect("symplectic matrices are unimodular").to_f64();

    let j = plane_structure(l, tol)?;
    let invariance_residual = max_abs(&(j.transpose() * &omega * &j - &omega));
    let j_t = -&j;
    let j_t_prime = &a * &j_t * &a_inv;
    let (d, v) = spd_or(&(j_t.transpose() * &omega), tol, "ᵗJω")?;
    let (d_prime, v_prime) = spd_or(&(j_t_prime.transpose() * &omega), tol, "ᵗJ′ω")?;
    // G = ᵗQ·D·Q with Q = ᵗV.
    let q = v.transpose();
    let q_prime = v_prime.transpose();
    let s_derived = &q * &a_inv * q_prime.transpose();
    let s_literal = &q * &a * &q_prime;
    let derived_residual = congruence_residual(&s_derived, &d, &d_prime);
    let literal_residual = congruence_residual(&s_literal, &d, &d_prime);
    let s_norm = singular_values(&s_derived)[0];
    let s_bound = (d_prime[two_n - 1] / d[0]).sqrt();
    let spectra_agree = d
        .iter()
        .zip(&d_prime)
        .all(|(x, y)| (x - y).abs() <= 1e-6 * x.abs().max(y.abs()));

    let beta = IntMatrix::zeros(shape.k(), two_n);
    let p = LatticeSymmetry::from_blocks(alpha, &beta, shape, &convention)?;
    let moved = act(&p, l, tol)?;
    let pipeline_residual = max_abs(&(plane_structure(&moved, tol)? - (&a * &j * &a_inv)));
    let displacement = moved.distance(l);

    Ok(TransportReport {
        invariance_residual,
        d,
        d_prime,
        s_derived,
        s_literal,
        derived_residual,
        literal_residual,
        literal_matches: literal_residual < TRANSPORT_TOL,
        s_norm,
        s_bound,
        spectra_agree,
        pipeline_residual,
        displacement,
    })
}

/// Random element of `Sp(2n, ℤ)` for the convention, as a product of
/// shears (and, for unit divisors, the rotation `[[0, −I], [I, 0]]`) with
/// every partial product bounded by `bound` entrywise.
pub fn random_symplectic<R: Rng>(n: usize, convention: &FormConvention, bound: i64, rng: &mut R) -> IntMatrix {
    let d: Vec<i64> = convention.divisors(n).iter().map(|v| v.to_i64().unwrap_or(1)).collect();
    let unit = d.iter().all(|&x| x == 1);
    let size = 2 * n;
    let mut alpha = IntMatrix::identity(size);
    let steps = rng.gen_range(1..=8);
    for _ in 0..steps {
        let mut g = IntMatrix::identity(size);
        let sign: i64 = if rng.gen_bool(0.5) { 1 } else { -1 };
        let i = rng.gen_range(0..n);
        let j = rng.gen_range(0..n);
        match rng.gen_range(0..if unit { 4 } else { 3 }) {
            0 if i == j => g[(i, n + i)] = sign.into(),
            0 => {
                g[(i, n + j)] = (sign * d[j]).into();
                g[(j, n + i)] = (sign * d[i]).into();
            }
            1 if i == j => g[(n + i, i)] = sign.into(),
            1 => {
                g[(n + i, j)] = (sign * d[j]).into();
                g[(n + j, i)] = (sign * d[i]).into();
            }
            2 => g = g.neg(),
            _ => {
                for r in 0..n {
                    g[(r, r)] = BigInt::zero();
                    g[(n + r, n + r)] = BigInt::zero();
                    g[(r, n + r)] = BigInt::from(-sign);
                    g[(n + r, r)] = BigInt::from(sign);
                }
            }
        }
        let next = g.mul(&alpha);
        if next.max_abs() <= BigInt::from(bound) {
            alpha = next;
        }
    }
    alpha
}

/// Random element of `H` with `α` from [`random_symplectic`] and `β`
/// uniform in `[−bound, bound]`.
pub fn random_lattice_symmetry<R: Rng>(
    shape: TorusShape,
    convention: &FormConvention,
    bound: i64,
    rng: &mut R,
) -> LatticeSymmetry {
    let n = shape.n();
    let alpha = random_symplectic(n, convention, bound, rng);
    let beta = IntMatrix::from_fn(shape.k(), 2 * n, |_, _| BigInt::from(rng.gen_range(-bound..=bound)));
    LatticeSymmetry::from_blocks(&alpha, &beta, shape, convention).expect("generators preserve the form")
}
