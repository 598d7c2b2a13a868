//! Numerical toolkit for set-valued monotone operator analysis on
//! finite-dimensional normed spaces: duality mappings and the `r_L`
//! functional, subdifferential engines, the Ekeland variational principle
//! and the Brøndsted–Rockafellar property as executable searches,
//! `r_L`-density certification and refutation, Minty range checks, and
//! monotone polars.
//!
//! The mdbook under `book/` walks through the concepts chapter by chapter;
//! the `rl-lab` binary exposes the same pipelines on the command line.

pub mod error;
pub mod funcspec;
pub mod geometry;
pub mod operators;
pub mod region;
pub mod sets;
pub mod subdiff;

mod search;

pub use error::{Error, Result};
pub use geometry::{DualPair, DualVector, DualityFace, NormKind, NormedSpace, Vector, DEFAULT_TOL};
pub use region::BoxRegion;
pub use sets::ValueSet;
