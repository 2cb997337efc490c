//! Integral alternating forms on the lattice, their validation as
//! polarizations, the associated Hermitian form, and symplectic
//! normalization of the lattice basis.

use nalgebra::SymmetricEigen;
use thiserror::Error;

use crate::exact_linalg::{frobenius_normal_form, IntMatrix, LinalgError};
use crate::numeric::{
    c, is_relatively_positive, max_abs, standard_complex_structure, symmetric_eigen_sorted, CMat,
    RMat, Tolerances,
};
use crate::torus::{PeriodMatrix, TorusMorphism, TorusShape};
use num_bigint::BigInt;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PolarizationError {
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error("polarization of size {found} does not match lattice rank {expected}")]
    SizeMismatch { expected: usize, found: usize },
    #[error("period realization is singular")]
    SingularRealization,
    #[error("form is not invariant under the complex structure (residual {0:.3e})")]
    IncompatibleForm(f64),
    #[error("form has rank {found}, expected 2n = {expected}")]
    RankMismatch { expected: usize, found: usize },
}

/// Values `E_ab = ω(γ_a, γ_b)` of the form on a lattice basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Polarization {
    e: IntMatrix,
}

impl Polarization {
    pub fn new(e: IntMatrix) -> Result<Self, PolarizationError> {
        if !e.is_square() {
            return Err(LinalgError::NotSquare(e.shape()).into());
        }
        if !e.is_alternating() {
            return Err(LinalgError::NotAlternating.into());
        }
        Ok(Self { e })
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.e
    }

    pub fn size(&self) -> usize {
        self.e.rows()
    }

    pub fn neg(&self) -> Self {
        Self { e: self.e.neg() }
    }

    /// `ᵗP·E·P`: the same form on the basis given by the columns of `P`.
    pub fn rebase(&self, p: &IntMatrix) -> Self {
        Self {
            e: self.e.congruence(p),
        }
    }

    fn check_size(&self, shape: TorusShape) -> Result<(), PolarizationError> {
        if self.size() != shape.real_dim() {
            return Err(PolarizationError::SizeMismatch {
                expected: shape.real_dim(),
                found: self.size(),
            });
        }
        Ok(())
    }
}

/// `ω` in standard `ℝ²ⁿ⁺ᵏ` coordinates.
#[derive(Clone, Debug, PartialEq)]
pub struct StandardForm {
    pub omega: RMat,
    n: usize,
}

impl StandardForm {
    /// The restriction to `ℂⁿ×{0}`, i.e. the leading `2n×2n` block.
    pub fn leaf_block(&self) -> RMat {
        self.omega.view((0, 0), (2 * self.n, 2 * self.n)).into_owned()
    }
}

/// `ω_std = ᵗR⁻¹·E·R⁻¹` with `R = realize(Ω)`.
pub fn standard_coordinates(
    e: &Polarization,
    omega: &PeriodMatrix,
) -> Result<StandardForm, PolarizationError> {
    e.check_size(omega.shape())?;
    let r_inv = omega
        .realize()
        .try_inverse()
        .ok_or(PolarizationError::SingularRealization)?;
    let form = r_inv.transpose() * e.matrix().to_f64() * &r_inv;
    Ok(StandardForm {
        omega: (&form - form.transpose()) * 0.5,
        n: omega.shape().n(),
    })
}

/// Verdicts of the polarization conditions.
#[derive(Clone, Debug, PartialEq)]
pub struct PolarizationReport {
    /// `E` integral and alternating (exact).
    pub integral_alternating: bool,
    /// `ω₁(J₀u, J₀v) = ω₁(u, v)` on the leaf.
    pub compatible: bool,
    pub compatibility_residual: f64,
    /// `g(u, v) = ω₁(u, J₀v)` positive definite.
    pub positive: bool,
    pub g_eigenvalues: Vec<f64>,
}

impl PolarizationReport {
    pub fn is_valid(&self) -> bool {
        self.integral_alternating && self.compatible && self.positive
    }
}

fn relative_compatibility_residual(leaf: &RMat, n: usize) -> f64 {
    let j0 = standard_complex_structure(n);
    let diff = j0.transpose() * leaf * &j0 - leaf;
    let scale = max_abs(leaf);
    if scale == 0.0 {
        0.0
    } else {
        max_abs(&diff) / scale
    }
}

pub fn validate_polarization(
    e: &Polarization,
    omega: &PeriodMatrix,
    tol: &Tolerances,
) -> Result<PolarizationReport, PolarizationError> {
    let std = standard_coordinates(e, omega)?;
    let n = omega.shape().n();
    let leaf = std.leaf_block();
    let residual = relative_compatibility_residual(&leaf, n);
    let g = &leaf * standard_complex_structure(n);
    let (eigenvalues, _) = symmetric_eigen_sorted(&g);
    let compatible = residual < tol.eps_eq;
    Ok(PolarizationReport {
        integral_alternating: e.matrix().is_alternating(),
        compatible,
        compatibility_residual: residual,
        positive: compatible && is_relatively_positive(&eigenvalues, tol.eps_pos),
        g_eigenvalues: eigenvalues,
    })
}

/// `H = g + i·ω₁` on `ℂⁿ`, conjugate-linear in the first slot.
#[derive(Clone, Debug, PartialEq)]
pub struct HermitianForm {
    pub h: CMat,
}

impl HermitianForm {
    pub fn eigenvalues(&self) -> Vec<f64> {
        let mut v: Vec<f64> = SymmetricEigen::new(self.h.clone())
            .eigenvalues
            .iter()
            .copied()
            .collect();
        v.sort_by(f64::total_cmp);
        v
    }

    pub fn is_positive_definite(&self, tol: &Tolerances) -> bool {
        is_relatively_positive(&self.eigenvalues(), tol.eps_pos)
    }

    pub fn hermitian_residual(&self) -> f64 {
        crate::numeric::max_abs_c(&(&self.h - self.h.adjoint()))
    }
}

pub fn hermitian_form(
    e: &Polarization,
    omega: &PeriodMatrix,
    tol: &Tolerances,
) -> Result<HermitianForm, PolarizationError> {
    let std = standard_coordinates(e, omega)?;
    let n = omega.shape().n();
    let leaf = std.leaf_block();
    let residual = relative_compatibility_residual(&leaf, n);
    if !(residual < tol.eps_eq) {
        return Err(PolarizationError::IncompatibleForm(residual));
    }
    // g(e_a, e_b) = ω₁(e_a, J₀ e_b) = ω₁(e_a, e_{n+b}) on the real axes of ℂⁿ.
    let h = CMat::from_fn(n, n, |a, b| c(leaf[(a, n + b)], leaf[(a, b)]));
    Ok(HermitianForm {
        h: (&h + h.adjoint()) * c(0.5, 0.0),
    })
}

/// Outcome of [`symplectic_normalize`].
#[derive(Clone, Debug, PartialEq)]
pub struct SymplecticNormalization {
    /// `Ω·P`.
    pub period: PeriodMatrix,
    pub basis_change: IntMatrix,
    pub divisors: Vec<BigInt>,
    /// `ᵗP·E·P`, exactly canonical.
    pub polarization: Polarization,
}

pub fn symplectic_normalize(
    e: &Polarization,
    omega: &PeriodMatrix,
) -> Result<SymplecticNormalization, PolarizationError> {
    let shape = omega.shape();
    e.check_size(shape)?;
    let frob = frobenius_normal_form(e.matrix())?;
    if frob.rank_half != shape.n() {
        return Err(PolarizationError::RankMismatch {
            expected: 2 * shape.n(),
            found: 2 * frob.rank_half,
        });
    }
    let p = frob.basis_change.clone();
    Ok(SymplecticNormalization {
        period: omega.mul_right_int(&p),
        polarization: Polarization {
            e: frob.canonical_matrix(),
        },
        basis_change: p,
        divisors: frob.divisors,
    })
}

/// Pullback of `ω′` along `(z, t) ↦ (Az + Bt, Ct)` agrees with `ω` on `ℂⁿ×{0}`.
pub fn restriction_agrees(
    m: &TorusMorphism,
    source: (&Polarization, &PeriodMatrix),
    target: (&Polarization, &PeriodMatrix),
    tol: &Tolerances,
) -> Result<bool, PolarizationError> {
    let (e, omega) = source;
    let (e2, omega2) = target;
    let std = standard_coordinates(e, omega)?;
    let std2 = standard_coordinates(e2, omega2)?;
    let m_real = m.realize();
    let pulled = StandardForm {
        omega: m_real.transpose() * &std2.omega * &m_real,
        n: std.n,
    };
    let a = std.leaf_block();
    let b = pulled.leaf_block();
    let scale = max_abs(&a).max(max_abs(&b)).max(f64::MIN_POSITIVE);
    Ok(max_abs(&(a - b)) < tol.eps_eq * scale)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::torus::TorusShape;

    fn standard_11() -> PeriodMatrix {
        PeriodMatrix::new(
            TorusShape::new(1, 1).unwrap(),
            CMat::from_row_slice(1, 3, &[c(1.0, 0.0), c(0.0, 1.0), c(0.0, 0.0)]),
            RMat::from_row_slice(1, 3, &[0.0, 0.0, 1.0]),
        )
        .unwrap()
    }

    fn e_11() -> Polarization {
        Polarization::new(IntMatrix::from_rows(&[[0, 1, 0], [-1, 0, 0], [0, 0, 0]])).unwrap()
    }

    #[test]
    fn non_alternating_rejected() {
        assert!(matches!(
            Polarization::new(IntMatrix::from_rows(&[[0, 1], [1, 0]])),
            Err(PolarizationError::Linalg(LinalgError::NotAlternating))
        ));
    }

    #[test]
    fn identity_realization_keeps_form() {
        let std = standard_coordinates(&e_11(), &standard_11()).unwrap();
        assert_eq!(std.omega, e_11().matrix().to_f64());
    }

    #[test]
    fn scaled_lattice_quarters_the_form() {
        let om = standard_11();
        let scaled = PeriodMatrix::new(om.shape(), om.c_block() * c(2.0, 0.0), om.r_block() * 2.0).unwrap();
        let std = standard_coordinates(&e_11(), &scaled).unwrap();
        assert!(max_abs(&(std.omega - e_11().matrix().to_f64() / 4.0)) < 1e-15);
    }

    #[test]
    fn standard_pair_is_valid_and_negation_is_not() {
        let tol = Tolerances::default();
        let ok = validate_polarization(&e_11(), &standard_11(), &tol).unwrap();
        assert!(ok.is_valid());
        let bad = validate_polarization(&e_11().neg(), &standard_11(), &tol).unwrap();
        assert!(bad.compatible && !bad.positive && !bad.is_valid());
    }

    #[test]
    fn hermitian_form_of_standard_pair() {
        let tol = Tolerances::default();
        let h = hermitian_form(&e_11(), &standard_11(), &tol).unwrap();
        assert!((h.h[(0, 0)] - c(1.0, 0.0)).norm() < 1e-15);
        assert!(!hermitian_form(&e_11().neg(), &standard_11(), &tol)
            .unwrap()
            .is_positive_definite(&tol));
    }

    #[test]
    fn size_mismatch_is_reported() {
        let e = Polarization::new(IntMatrix::from_rows(&[[0, 1], [-1, 0]])).unwrap();
        assert!(matches!(
            validate_polarization(&e, &standard_11(), &Tolerances::default()),
            Err(PolarizationError::SizeMismatch { expected: 3, found: 2 })
        ));
    }

    #[test]
    fn anisotropic_stretch_breaks_compatibility() {
        let n2 = PeriodMatrix::from_realization(
            TorusShape::new(2, 0).unwrap(),
            // x₁ ↦ x₁ + x₂ without the matching y-shear: not ℂ-linear
            &RMat::from_row_slice(
                4,
                4,
                &[1.0, 1.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0, 1.0],
            ),
        )
        .unwrap();
        let e = Polarization::new(crate::exact_linalg::standard_symplectic_form(2)).unwrap();
        let tol = Tolerances::default();
        let report = validate_polarization(&e, &n2, &tol).unwrap();
        assert!(!report.compatible && !report.is_valid());
        assert!(matches!(
            hermitian_form(&e, &n2, &tol),
            Err(PolarizationError::IncompatibleForm(_))
        ));
    }

    #[test]
    fn rank_mismatch_in_normalization() {
        let e = Polarization::new(IntMatrix::zeros(3, 3)).unwrap();
        assert!(matches!(
            symplectic_normalize(&e, &standard_11()),
            Err(PolarizationError::RankMismatch { expected: 2, found: 0 })
        ));
    }
}
