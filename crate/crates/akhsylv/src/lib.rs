//! Inverse-free iterative solvers for Sylvester matrix equations
//! `XA - BX = C` whose coefficient spectra sit on (or near) known real
//! intervals.
//!
//! Two methods are provided, both driven by three-term recurrences of
//! orthonormal polynomials on a cut domain (a union of disjoint real
//! intervals):
//!
//! * **Method 1** approximates the matrix sign function of the block matrix
//!   `[[A, 0], [C, B]]`; the solution is read off the lower-left block.
//! * **Method 2** approximates the inverse of the Sylvester operator
//!   `Y -> YA - BY` directly through a series for `1/x`.
//!
//! Both come in dense and low-rank (factored right-hand side) variants, carry
//! a priori geometric convergence rates computed from the Green's function of
//! the cut domain, and need no residual monitoring.
//!
//! Module map:
//!
//! * [`cutdomain`] - interval unions, Green's function, saddle points, rates
//! * [`akhiezer`] - weights, recurrence coefficients, Cauchy transforms and
//!   series coefficients for `sign`, `1/x` and general analytic functions
//! * [`linalg`] - dense kernels: QR/LQ/SVD, GMRES, Gauss-Legendre nodes,
//!   seeded known-spectrum matrix generation
//! * [`solvers`] - the iterations themselves plus compression and stopping
//! * [`oracles`] - brute-force references used by tests and verification
//! * [`apps`] - Fredholm integral-equation drivers
//! * [`suite`] - the acceptance checks run by tests and `akhsylv verify`

pub mod akhiezer;
pub mod apps;
pub mod cutdomain;
pub mod error;
pub mod linalg;
pub mod oracles;
pub mod solvers;
pub mod suite;

pub use error::{Error, Result};
pub use linalg::Matrix;
