//! Polarized complex foliated tori `ℂⁿ×ℝᵏ/Γ`: period matrices, integral
//! alternating forms, the isotropic-plane model of the period space and the
//! action of the integral lattice symmetries on it.

pub mod exact_linalg;
pub mod grassmannian;
pub mod moduli;
pub mod numeric;
pub mod polarization;
pub mod torus;

pub use numeric::Tolerances;
