//! Mixed-binary linear programs: model builder, feasibility check, MPS export.

mod expr;
mod feasibility;
mod model;
mod mps;

pub use expr::LinExpr;
pub use feasibility::{check_feasible, FeasibilityReport, Violation, ViolationKind};
pub use model::{ConId, Constraint, MilpModel, ObjSense, Sense, VarId, VarKind, Variable};
pub use mps::{export_mps, format_number};

/// Absolute tolerance on bounds and row residuals.
pub const EPS_FEAS: f64 = 1e-6;
/// Distance from {0, 1} accepted for a binary.
pub const EPS_INT: f64 = 1e-6;

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum MilpError {
    #[error("variable `{name}` has invalid bounds [{lo}, {hi}]")]
    BadBounds { name: String, lo: f64, hi: f64 },
    #[error("unknown variable index {index} in {context}")]
    UnknownVariable { index: usize, context: String },
    #[error("non-finite coefficient or right-hand side in {context}")]
    NonFinite { context: String },
    #[error("assignment has {got} entries, model has {expected} variables")]
    MissingAssignment { expected: usize, got: usize },
}
