//! Frequency-secure black-start restoration planning.
// Negated float comparisons deliberately treat NaN as failing the check, and
// the dense numerical kernels read better with explicit indices.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod dynamics;
pub mod grid;
pub mod milp;
pub mod nadir;
pub mod planner;
pub mod report;
pub mod restoration;
pub mod solver;
