//! Embedded LP / mixed-binary solver: bounded dual simplex, bound-tightening
//! presolve and depth-first-then-best branch-and-bound.

mod bnb;
pub mod external;
mod presolve;
mod problem;
mod simplex;

use std::time::Duration;

use crate::milp::{MilpModel, ObjSense, EPS_FEAS, EPS_INT};
pub use external::{ExternalSolution, ExternalSolver};
use problem::LpProblem;
pub use simplex::LpStatus;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branching {
    MostFractional,
    PseudoCost,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NodeOrder {
    BestBound,
    DepthFirstThenBest,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolverConfig {
    pub eps_int: f64,
    pub eps_feas: f64,
    /// Relative gap `(incumbent - bound) / max(1, |incumbent|)` at which the
    /// search stops.
    pub gap: f64,
    pub node_limit: usize,
    /// Wall-clock limit; `None` keeps the solve deterministic.
    pub time_limit: Option<Duration>,
    pub branching: Branching,
    pub node_order: NodeOrder,
    pub max_lp_iterations: usize,
    /// Bound propagation at every node after applying its fixings.
    pub propagate: bool,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            eps_int: EPS_INT,
            eps_feas: EPS_FEAS,
            gap: 1e-6,
            node_limit: 1_000_000,
            time_limit: None,
            branching: Branching::MostFractional,
            node_order: NodeOrder::DepthFirstThenBest,
            max_lp_iterations: 100_000,
            propagate: true,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<(), SolverError> {
        let bad = |what: &str| Err(SolverError::Config(what.to_string()));
        if !(self.gap >= 0.0) {
            return bad("gap target must be >= 0");
        }
        if self.node_limit == 0 || self.max_lp_iterations == 0 {
            return bad("limits must be positive");
        }
        if self.time_limit.is_some_and(|t| t.is_zero()) {
            return bad("time limit must be positive");
        }
        if !(self.eps_int > 0.0 && self.eps_int < 0.5) || !(self.eps_feas > 0.0) {
            return bad("tolerances out of range");
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolveStatus {
    Optimal,
    Infeasible,
    /// Node or time limit hit; the best incumbent (if any) is returned.
    IterationLimit,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct SolverStats {
    pub nodes: usize,
    pub lp_iterations: usize,
    pub elapsed: Duration,
    /// Global dual bound before each node, in minimization form
    /// (non-decreasing).
    pub bound_trace: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MilpSolution {
    pub status: SolveStatus,
    /// One value per model variable; empty when no incumbent exists.
    pub values: Vec<f64>,
    /// Objective of the incumbent in the model's own sense.
    pub objective: f64,
    /// Best proven bound in the model's own sense.
    pub best_bound: f64,
    pub stats: SolverStats,
}

impl MilpSolution {
    pub fn has_incumbent(&self) -> bool {
        !self.values.is_empty()
    }

    /// Dual bound trace in the model's own sense (non-increasing for
    /// maximization).
    pub fn bound_trace(&self, sense: ObjSense) -> Vec<f64> {
        let s = if sense == ObjSense::Maximize {
            -1.0
        } else {
            1.0
        };
        self.stats.bound_trace.iter().map(|b| s * b).collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LpSolution {
    pub status: LpStatus,
    pub values: Vec<f64>,
    pub objective: f64,
    pub iterations: usize,
}

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum SolverError {
    #[error("invalid solver configuration: {0}")]
    Config(String),
    #[error("problem is unbounded")]
    Unbounded,
    #[error("numerical failure: {0}")]
    Numerical(String),
    #[error("external solver: {0}")]
    External(String),
}

/// Solves the LP relaxation of `model` (binaries relaxed to `[lo, hi]`).
pub fn solve_lp(model: &MilpModel) -> LpSolution {
    let p = LpProblem::from_model(model);
    let mut s = simplex::DualSimplex::new(&p);
    let status = s.solve(SolverConfig::default().max_lp_iterations);
    let sign = if model.obj_sense() == ObjSense::Maximize {
        -1.0
    } else {
        1.0
    };
    LpSolution {
        status,
        values: s.values().to_vec(),
        objective: sign * s.objective(),
        iterations: s.iterations,
    }
}

/// Branch-and-bound over the binaries of `model`.
pub fn solve_milp(model: &MilpModel, config: &SolverConfig) -> Result<MilpSolution, SolverError> {
    config.validate()?;
    let p = LpProblem::from_model(model);
    let out = bnb::branch_and_bound(&p, config)?;
    let sign = if model.obj_sense() == ObjSense::Maximize {
        -1.0
    } else {
        1.0
    };
    let values = out.values.unwrap_or_default();
    let objective = if values.is_empty() {
        sign * f64::INFINITY
    } else {
        model.eval_objective(&values)
    };
    Ok(MilpSolution {
        status: out.status,
        values,
        objective,
        best_bound: sign * out.bound,
        stats: out.stats,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::milp::{check_feasible, LinExpr, Sense};

    #[test]
    fn lp_max_x_plus_y() {
        let mut m = MilpModel::new("t");
        let x = m.add_continuous(0.0, 1.0, "x").unwrap();
        let y = m.add_continuous(0.0, 1.0, "y").unwrap();
        m.add_linear_constraint(&[(x, 1.0), (y, 1.0)], Sense::Le, 1.0, "c")
            .unwrap();
        m.set_objective(ObjSense::Maximize, LinExpr::var(x) + y)
            .unwrap();
        let s = solve_lp(&m);
        assert_eq!(s.status, LpStatus::Optimal);
        assert!((s.objective - 1.0).abs() < 1e-9);
    }

    #[test]
    fn lp_infeasible_pair() {
        let mut m = MilpModel::new("t");
        let x = m.add_continuous(-10.0, 10.0, "x").unwrap();
        m.add_linear_constraint(&[(x, 1.0)], Sense::Le, 0.0, "a")
            .unwrap();
        m.add_linear_constraint(&[(x, 1.0)], Sense::Ge, 1.0, "b")
            .unwrap();
        assert_eq!(solve_lp(&m).status, LpStatus::Infeasible);
    }

    #[test]
    fn milp_max_x_plus_y_binaries() {
        let mut m = MilpModel::new("t");
        let x = m.add_binary("x");
        let y = m.add_binary("y");
        m.add_linear_constraint(&[(x, 1.0), (y, 1.0)], Sense::Le, 1.0, "c")
            .unwrap();
        m.set_objective(ObjSense::Maximize, LinExpr::var(x) + y)
            .unwrap();
        let s = solve_milp(&m, &SolverConfig::default()).unwrap();
        assert_eq!(s.status, SolveStatus::Optimal);
        assert!((s.objective - 1.0).abs() < 1e-9);
        assert!(check_feasible(&m, &s.values, 1e-6).unwrap().is_feasible());
    }

    #[test]
    fn knapsack_needs_branching() {
        let w = [5.0, 4.0, 3.0, 2.0, 7.0];
        let v = [10.0, 7.0, 5.0, 3.0, 12.0];
        let mut m = MilpModel::new("knap");
        let xs: Vec<_> = (0..5).map(|i| m.add_binary(format!("x{i}"))).collect();
        let row: Vec<_> = xs.iter().zip(w).map(|(x, w)| (*x, w)).collect();
        m.add_linear_constraint(&row, Sense::Le, 10.0, "cap")
            .unwrap();
        let obj: LinExpr = xs.iter().zip(v).map(|(x, v)| LinExpr::term(*x, v)).sum();
        m.set_objective(ObjSense::Maximize, obj).unwrap();
        let s = solve_milp(&m, &SolverConfig::default()).unwrap();
        // Best: items 0, 2, 3 (w 10, v 18) vs 1,2,... enumerate below.
        let mut best = 0.0f64;
        for mask in 0..32u32 {
            let (mut tw, mut tv) = (0.0, 0.0);
            for i in 0..5 {
                if mask >> i & 1 == 1 {
                    tw += w[i];
                    tv += v[i];
                }
            }
            if tw <= 10.0 {
                best = best.max(tv);
            }
        }
        assert!((s.objective - best).abs() < 1e-9);
        let trace = s.bound_trace(ObjSense::Maximize);
        assert!(trace.windows(2).all(|w| w[1] <= w[0] + 1e-9));
    }

    #[test]
    fn bad_config_rejected() {
        let cfg = SolverConfig {
            gap: -1.0,
            ..SolverConfig::default()
        };
        let m = MilpModel::new("t");
        assert!(matches!(solve_milp(&m, &cfg), Err(SolverError::Config(_))));
    }

    #[test]
    fn node_limit_reports_iteration_limit() {
        let mut m = MilpModel::new("t");
        let xs: Vec<_> = (0..12).map(|i| m.add_binary(format!("x{i}"))).collect();
        let row: Vec<_> = xs.iter().map(|x| (*x, 2.0)).collect();
        m.add_linear_constraint(&row, Sense::Eq, 11.0, "odd")
            .unwrap();
        m.set_objective(ObjSense::Maximize, LinExpr::var(xs[0]))
            .unwrap();
        let cfg = SolverConfig {
            node_limit: 3,
            ..SolverConfig::default()
        };
        let s = solve_milp(&m, &cfg).unwrap();
        assert_eq!(s.status, SolveStatus::IterationLimit);
        assert!(!s.has_incumbent());
    }
}
