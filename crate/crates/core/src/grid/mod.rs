//! Network data, file ingestion, incidence matrices and plan types.

pub mod file;
pub mod fixtures;
pub mod incidence;
pub mod network;
pub mod plan;

use thiserror::Error;

pub use file::{load_network, parse_network, to_toml_string};
pub use incidence::{build_incidence, IncidenceSet, IntMatrix};
pub use network::{EssSpec, GeneratorSpec, Line, Load, NetworkModel};
pub use plan::{
    initial_state, phase_at, FrozenBound, GenPhase, RestorationPlan, RestorationState, ALWAYS_ON,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum NetworkError {
    #[error("cannot read network file {0}")]
    Io(String),
    #[error("malformed network file: {0}")]
    Parse(String),
    #[error("invalid {element}: {reason}")]
    Invalid { element: String, reason: String },
}
