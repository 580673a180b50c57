//! Exact computations on generalized Raynaud surfaces over finite fields:
//! Artin-Schreier type curves, two-chart vector bundles and their global
//! sections, and certificates that the adjoint system `|K_S + mA|` has a
//! base point over a chosen point of the curve.

pub mod bundle;
pub mod certificate;
pub mod cli;
pub mod cohomology;
pub mod curve;
pub mod error;
pub mod ff;
pub mod series;
pub mod suite;
pub mod surface;

pub use error::{Error, Result};
