//! Scenario-driven experiment harness: assembles operator pairs (explicit,
//! seeded random, or discretized Schrödinger), sweeps product-formula
//! schemes over subdivision counts and metrics, and persists deterministic
//! CSV/JSON reports.

pub mod emit;
pub mod runner;
pub mod scenario;
pub mod schrodinger;

use std::path::PathBuf;

use thiserror::Error;

use tklab_core::formulas::FormulaError;
use tklab_core::kato::KatoError;
use tklab_core::matrix::MatrixError;
use tklab_core::spectral::SpectralError;

pub use runner::{run, RunRecord};
pub use scenario::{
    GridSpec, HSpec, MetricSpec, OperatorSource, PotentialSpec, Scenario, SchemeSpec,
};

#[derive(Debug, Error)]
pub enum HarnessError {
    /// Malformed or invalid scenario/function configuration.
    #[error("config error: {detail}")]
    ConfigParse { detail: String },

    /// A scheme's Kato function failed the axiom battery.
    #[error("scheme {scheme} rejected: Kato axiom '{axiom}' failed")]
    SchemeRejected { scheme: String, axiom: String },

    /// Output exists and --force was not given.
    #[error("output file {path} exists; pass --force to overwrite")]
    OutputExists { path: PathBuf },

    /// The potential is not finite at a grid node.
    #[error("potential is singular on the grid at x = {x}")]
    PotentialSingularOnGrid { x: f64 },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Formula(#[from] FormulaError),

    #[error(transparent)]
    Kato(#[from] KatoError),

    #[error(transparent)]
    Spectral(#[from] SpectralError),

    #[error(transparent)]
    Matrix(#[from] MatrixError),
}

impl HarnessError {
    /// CLI exit code: 1 for validation failures, 2 for I/O.
    pub fn exit_code(&self) -> u8 {
        match self {
            HarnessError::Io(_) | HarnessError::OutputExists { .. } => 2,
            _ => 1,
        }
    }
}

pub type HarnessResult<T> = Result<T, HarnessError>;
