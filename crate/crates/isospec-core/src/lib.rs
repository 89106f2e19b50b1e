//! Construction and numerical verification of one-parameter isospectral
//! deformations of factorizable second-order operators.
//!
//! Any operator `H = P d²/dx² + Q d/dx + R` that factors into a pair of first
//! order operators plus a constant, `H = L·R + k`, admits a one-parameter
//! family of deformed factorizations: the multiplicative coefficients of the
//! factors pick up functions `η`, `ν` solving a Riccati equation whose general
//! solution carries a free constant `λ`.  Re-multiplying the deformed factors
//! in the opposite order produces a family of operators sharing the spectrum
//! of `H` (up to one added or removed state), with eigenfunctions obtained by
//! applying a deformed factor to the originals.
//!
//! The crate is organised as:
//!
//! * [`grid`], [`quadrature`] — uniform grids, adaptive Gauss–Kronrod
//!   quadrature (proper, cumulative and semi-infinite), finite differences;
//! * [`smooth`] — scalar functions bundled with analytic derivatives;
//! * [`operator`] — first/second order operators, composition, application,
//!   factorization schemes and ladder checks;
//! * [`deform`] — the deformation engine: Riccati solutions, shifts,
//!   singularity scans, deformed operators;
//! * [`special`] — Hermite functions, spherical Bessel functions, associated
//!   Laguerre polynomials and radial oscillator functions;
//! * [`catalog`] — the bundled model families (harmonic oscillator, free
//!   particle in one and three dimensions, isotropic oscillator ladders);
//! * [`eigen`] — an independent finite-difference Sturm–Liouville eigensolver
//!   used to confirm isospectrality without the ladder construction;
//! * [`verify`] — machine-checkable reports: residuals, Gram matrices, norm
//!   relations and spectrum comparisons.
//!
//! The library is `no_std`-compatible (requires `alloc`); the `std` feature
//! (default) only switches float intrinsics and error-trait plumbing.

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

pub mod catalog;
pub mod config;
pub mod deform;
pub mod eigen;
pub mod error;
pub mod grid;
pub(crate) mod math;
pub mod operator;
pub mod quadrature;
pub mod smooth;
pub mod special;
pub mod verify;

pub use config::Tolerances;
pub use error::{Error, Result};
pub use grid::{BoundaryKind, Grid, SampledFunction};
pub use smooth::SmoothFn;
