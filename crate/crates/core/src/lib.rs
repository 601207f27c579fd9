//! Constructive solutions of the ideal problem `F·Gᵀ = H³` in the multiplier
//! algebra of the Dirichlet space on the unit disk, together with numerical
//! checks of the estimates that bound the solution.
//!
//! The crate is organised bottom-up:
//!
//! * [`disk`] and [`poly`]: quadrature on the disk and circle, Fourier
//!   analysis, Möbius maps and analytic polynomials.
//! * [`dirichlet`]: Dirichlet and harmonic-Dirichlet norms, the reproducing
//!   kernel and its Nevanlinna–Pick coefficients.
//! * [`multiplier`]: truncated multiplication operators and their norms.
//! * [`koszul`]: the `Q` matrix with `QQ* = CC*·I − C*C`.
//! * [`cauchy`]: the Cauchy transform, the singular operator `T`, its radial
//!   decomposition and Schur-test certificates.
//! * [`solver`]: the ∂̄-corrected solution `u_h` and the ideal solver.
//! * [`verify`]: the verification harness producing [`report::VerificationReport`]s.
//! * [`io`]: JSON problem/solution files and deterministic number formatting.

pub mod cauchy;
pub mod dirichlet;
pub mod disk;
pub mod error;
pub mod io;
pub mod koszul;
pub mod multiplier;
pub mod poly;
pub mod report;
pub mod solver;
pub mod verify;

mod par;

pub use error::{Error, Result};
pub use num_complex::Complex64;
pub use poly::AnalyticPoly;

/// Shorthand for building a complex number.
#[inline]
pub fn c64(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}
