//! Asymptotic eigenvalue density for scaled, asymptotically periodic
//! Jacobi matrices.
//!
//! A symmetric tridiagonal matrix whose entries grow like
//! `J[nt+i][nt+i] ~ a_i phi(n)` and `J[nt+i][nt+i+1] ~ b_i phi(n)` has, after
//! rescaling the nt x nt truncation by phi(n), a limiting eigenvalue density
//! rho(z). This crate computes that density as a weighted superposition of
//! rescaled copies of the band density rho0 of the periodic limit matrix,
//! and validates it three independent ways:
//!
//! - closed forms for period 1 and linear scaling (arccosh / flat-plus-arccos);
//! - moment identities `m_M = K_M int omega^M g(omega) d omega`;
//! - brute-force spectra of truncations via Sturm-sequence bisection.
//!
//! Module map:
//!
//! - [`coeffs`]: periodic limit data, truncated matrices, periodic windows
//! - [`bands`]: discriminant polynomial S, band edges, periodic density rho0
//! - [`scaling`]: the scaling function phi via its profile density g
//! - [`density`]: the limiting density rho(z), its CDF, closed forms
//! - [`spectrum`]: tridiagonal eigensolver, KS distance, histograms
//! - [`moments`]: moment oracles along both routes
//! - [`cli`]: JSON config and the subcommand pipeline
//! - [`quad`]: tanh-sinh quadrature used throughout

pub mod bands;
pub mod cli;
pub mod coeffs;
pub mod density;
pub mod error;
pub mod moments;
pub mod quad;
pub mod scaling;
pub mod spectrum;

pub use bands::{band_structure, BandStructure, Polynomial};
pub use coeffs::{build_periodic_window, build_truncated, PeriodicCoefficients, TridiagonalMatrix};
pub use density::{rho, rho_at_zero, rho_closed_form_linear, rho_curve, DensityCurve};
pub use error::{Error, Result};
pub use scaling::ScalingSpec;
pub use spectrum::{eigenvalues, scaled_spectrum, SpectrumResult};
