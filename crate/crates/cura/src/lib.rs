//! Curvature-reconfigurable antenna array (CuRA) toolkit: arc and stacked-arc
//! geometry, spherical-wave beam responses, ERD-guided hierarchical
//! polar-domain codebook generation for 1-D and 2-D apertures, and a
//! deterministic Monte-Carlo beam-training simulator.
//!
//! Module map:
//! - [`geometry`]: element layouts, spherical/polar-domain coordinates.
//! - [`specfun`]: Bessel `J0`, Fresnel integrals, and their inverses.
//! - [`wavefield`]: focusing/steering vectors, channels, beam gains.
//! - [`correlation`]: closed-form angular and range correlation models.
//! - [`erd`]: effective Rayleigh distance, closed-form and numeric.
//! - [`codebook`]: hierarchical codebook generators and baselines.
//! - [`trainsim`]: beam-training sweeps, spectral efficiency, coverage.
//! - [`validation`]: oracle scans checking models against exact evaluation.
//! - [`config`] / [`export`]: experiment configuration and file emission.

pub mod codebook;
pub mod config;
pub mod correlation;
pub mod erd;
pub mod error;
pub mod export;
pub mod geometry;
pub mod specfun;
pub mod trainsim;
pub mod validation;
pub mod wavefield;

pub use error::{Error, Result};
