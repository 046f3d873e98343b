//! Configurable-precision q-series and Jacobi theta machinery with
//! verified scaled asymptotics.
//!
//! The crate evaluates the classical q-functions (Euler's q-exponential,
//! the q-Gamma function, Ramanujan's `A_q`, Jackson's second q-Bessel
//! function, Stieltjes-Wigert and q-Laguerre polynomials) at arbitrary
//! precision, and verifies their exact theta representations, certified
//! remainder bounds and scaled asymptotic main terms by comparison against
//! independent brute-force evaluation.
//!
//! - [`precision`]: the [`PrecisionContext`] governing every evaluation
//! - [`logc`]: log-scaled complex values for astronomically large results
//! - [`qseries`]: q-shifted factorials, certified remainders, base series
//! - [`theta`]: Dedekind eta, the four Jacobi theta functions, modular
//!   transformations and the scaled `(q;q)_inf` asymptotic
//! - [`qfunctions`]: the six target functions, weights and orthonormal forms
//! - [`quadrature`]: tanh-sinh quadrature and the orthogonality integrals
//! - [`asymptotics`]: exact theta representations with certified bounds,
//!   closed-form main terms and rate fits
//! - [`sweep`]: grid sweeps with CSV reports and CI-friendly exit codes

pub mod asymptotics;
pub mod error;
pub mod logc;
pub mod precision;
pub mod qfunctions;
pub mod qseries;
pub mod quadrature;
pub mod sweep;
pub mod theta;

pub use error::{Error, Result};
pub use logc::LogComplex;
pub use precision::PrecisionContext;
pub use qseries::{chi, QPoint, RemainderReport};
