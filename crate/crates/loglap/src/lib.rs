//! Numerical verification toolkit for the logarithmic Laplacian.
//!
//! The library realizes the operator L_Δ (singular-integral kernel
//! c_n|x−y|^{−n} with zero-order constant ρ_n; Fourier symbol 2 ln|ξ|), its
//! explicit bubble solutions, the fractional Laplacian (−Δ)^s it linearizes,
//! and every closed-form constant and identity attached to them. Each
//! identity is checked by two independent evaluation paths — radial
//! singular-integral quadrature and a periodic-grid Fourier-symbol method —
//! and the results are emitted as structured pass/fail reports.

pub mod cli;
pub mod error;
pub mod field;
pub mod grid;
pub mod identities;
pub mod operators;
pub mod quad;
pub mod report;
pub mod specfun;

pub use error::Error;
