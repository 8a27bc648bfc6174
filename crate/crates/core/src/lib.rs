//! Higher-order neural codes.
//!
//! Spike data is turned into an [`OccurrenceLog`](codes::OccurrenceLog), from
//! which a [`Hyperstructure`](hyperstructure::Hyperstructure) of cofiring
//! patterns, patterns of patterns, and so on is built. The [`topology`]
//! module derives level complexes, gluing graphs and the nerve of the
//! hyperstructure; [`homology`] computes GF(2) Betti numbers and frequency
//! persistence barcodes; [`compare`] matches two hyperstructures levelwise.

pub mod cli;
pub mod codes;
pub mod compare;
pub mod complex;
pub mod error;
pub mod homology;
pub mod hyperstructure;
pub mod synth;
pub mod topology;

pub use codes::{Code, Codeword, OccurrenceLog, Pattern, SpikeMatrix};
pub use complex::{Simplex, SimplicialComplex};
pub use error::{Error, Result};
pub use hyperstructure::{build_hyperstructure, Bond, BuildConfig, Decomposition, Hyperstructure};
