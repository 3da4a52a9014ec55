//! Spectral-domain laboratory for the approximation of multivariate periodic
//! functions in the sequence spaces S^p.
//!
//! Functions live purely in coefficient form. The crate provides:
//!
//! * [`spectrum`] — multi-index spectra, triangular blocks `H_ν`, block
//!   profiles `a_ν = ‖H_ν(f)‖_{S^p}`, and interval-valued S^p norms with
//!   certified tail bounds;
//! * [`calculus`] — ψ-derivatives (radial-power and falling-factorial
//!   families) and the Poisson integral with its radial derivatives;
//! * [`summation`] — the four triangular summation methods (partial sum,
//!   Fejér, generalized Abel–Poisson, Abel–Poisson–Taylor) with exact S^p
//!   error functionals;
//! * [`moduli`] — modulus functions ω, admissibility conditions and the
//!   tail condition (𝔅), plus empirical S^pH_ω membership tests;
//! * [`experiments`] — executable embodiments of the equivalence theorems:
//!   both sides of each statement on parameter grids, ratio tests and
//!   log-log rate fits;
//! * [`families`] — the built-in function-family catalog driving the CLI;
//! * [`oracle`] — slow, independent reference implementations used by the
//!   test and verification suites.

pub mod calculus;
pub mod config;
pub mod error;
pub mod experiments;
pub mod families;
pub mod fit;
pub mod moduli;
pub mod numeric;
pub mod oracle;
pub mod output;
pub mod spectrum;
pub mod summation;
pub mod verify;

pub use error::{Error, Result};
pub use num_complex::Complex64;

/// Crate version string embedded in all machine-readable outputs.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
