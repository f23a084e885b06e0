//! Spectra of the Laplace, clamped bi-Laplace and buckling problems on minimal
//! hypersurfaces of the unit sphere.
//!
//! Two independent paths are provided:
//!
//! * an exact path ([`analytic`]) computing catalog spectra in rational
//!   arithmetic for great spheres and products of spheres;
//! * a numeric path ([`mesh`], [`operators`], [`eigen`]) discretizing the
//!   Laplace–Beltrami operator with P1 finite elements on meshes embedded in
//!   Rⁿ⁺² and solving the three problems as generalized symmetric
//!   eigenproblems.
//!
//! [`verify`] compares both against the first-eigenvalue identities
//! λ₁ = n, Λ₁ = n², Γ₁ = n and produces structured reports.

pub mod analytic;
pub mod eigen;
pub mod error;
pub mod geometry;
pub mod mesh;
pub mod operators;
pub mod sparse;
pub mod verify;

pub use error::{Error, Result};

/// Exact rational used for squared radii and catalog eigenvalues.
pub type Rational = num_rational::Ratio<i128>;

pub fn rational_to_f64(r: Rational) -> f64 {
    use num_traits::ToPrimitive;
    r.to_f64().unwrap_or(f64::NAN)
}
