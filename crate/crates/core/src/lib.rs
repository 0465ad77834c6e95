//! Computational toolkit for spontaneous parametric down-conversion.
//!
//! - [`crystal`]: Sellmeier dispersion, index ellipsoid, walk-off.
//! - [`phasematch`]: collinear and noncollinear phase-matching solvers and
//!   emission-cone cross-sections.
//! - [`classical`]: SHG intensity law, parametric gain and an RK4 integrator
//!   for the coupled amplitude equations.
//! - [`quantum`]: truncated Fock-space pair generation, heralded g²,
//!   Hong–Ou–Mandel interference and polarization correlations.
//! - [`cli`]: the `spdc` command-line front end.

pub mod classical;
pub mod cli;
pub mod crystal;
pub mod error;
pub mod phasematch;
pub mod quantum;

pub use error::{Error, Result};
