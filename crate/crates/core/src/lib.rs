//! Photon blockade in cavity EIT with N four-level atoms.
//!
//! The crate builds the atom–cavity Hilbert space and Hamiltonians
//! ([`hilbert`], [`model`]), diagonalises the dressed excitation manifolds
//! ([`spectra`]), solves the driven Lindblad master equation ([`dynamics`])
//! and batches experiments over parameter grids ([`sweeps`]). The [`cli`]
//! module backs the `eitsim` binary.
//!
//! Units: every rate and detuning is in units of the cavity decay rate κ,
//! times in units of 1/κ.

// `!(x <= tol)` is deliberate: NaN must land on the failing side.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod checks;
pub mod cli;
pub mod config;
pub mod dynamics;
pub mod error;
pub mod hilbert;
pub mod model;
pub mod output;
pub mod sparse;
pub mod spectra;
pub mod sweeps;

pub use config::{load_config, parse_config, RunConfig};
pub use error::{Error, Result};
pub use hilbert::{build_space, BasisLabel, HilbertSpace, Operator};
pub use model::ModelParams;
