//! Rolling-horizon restoration planning: solve a window, commit its first
//! step, refresh the nadir coefficients and repeat.

use std::fmt;
use std::str::FromStr;
use std::time::Duration;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::dynamics::{reference_changes, simulate_plan, DynamicsError, SimConfig};
use crate::grid::{
    initial_state, FrozenBound, GenPhase, NetworkModel, RestorationPlan, RestorationState,
};
use crate::nadir::{NadirCoeffs, NadirError};
use crate::restoration::{HorizonSpec, ObjectiveWeights, RestorationError, RestorationModel};
use crate::solver::{solve_milp, SolveStatus, SolverConfig, SolverError};

#[derive(Debug, Error)]
pub enum PlannerError {
    #[error("invalid planner configuration: {0}")]
    Config(String),
    #[error("no feasible step from step {step}: {detail}")]
    Infeasible { step: usize, detail: String },
    #[error(transparent)]
    Restoration(#[from] RestorationError),
    #[error(transparent)]
    Solver(#[from] SolverError),
    #[error(transparent)]
    Nadir(#[from] NadirError),
    #[error(transparent)]
    Dynamics(#[from] DynamicsError),
}

/// Frequency-security constraint applied to every window step.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ConstraintMode {
    /// No frequency constraint.
    None,
    /// Each pick-up is at most 5 % of the online generating capacity.
    FivePercent,
    /// Each pick-up is bounded by the linearized nadir limit.
    Nadir,
}

impl ConstraintMode {
    pub const ALL: [ConstraintMode; 3] = [
        ConstraintMode::None,
        ConstraintMode::FivePercent,
        ConstraintMode::Nadir,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ConstraintMode::None => "none",
            ConstraintMode::FivePercent => "five-percent",
            ConstraintMode::Nadir => "nadir",
        }
    }
}

impl fmt::Display for ConstraintMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ConstraintMode {
    type Err = PlannerError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        ConstraintMode::ALL
            .into_iter()
            .find(|m| m.as_str() == s)
            .ok_or_else(|| PlannerError::Config(format!("unknown constraint mode '{s}'")))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PlannerConfig {
    /// Window length in steps.
    pub horizon: usize,
    /// Frequency deviation limit, Hz (negative).
    pub limit_hz: f64,
    pub mode: ConstraintMode,
    /// Use the storage units of the network; when false they are removed.
    pub ess: bool,
    pub solver: SolverConfig,
    /// Iteration cap; `None` derives one from the element count and the
    /// longest start-up sequence.
    pub max_iterations: Option<usize>,
    /// Objective weights; `None` uses [`ObjectiveWeights::default_for`].
    pub weights: Option<ObjectiveWeights>,
}

impl Default for PlannerConfig {
    fn default() -> Self {
        PlannerConfig {
            horizon: 4,
            limit_hz: -1.0,
            mode: ConstraintMode::Nadir,
            ess: true,
            solver: SolverConfig {
                time_limit: Some(Duration::from_secs(60)),
                ..SolverConfig::default()
            },
            max_iterations: None,
            weights: None,
        }
    }
}

impl PlannerConfig {
    pub fn with_mode(mode: ConstraintMode) -> Self {
        PlannerConfig {
            mode,
            ..PlannerConfig::default()
        }
    }

    pub fn validate(&self) -> Result<(), PlannerError> {
        if self.horizon == 0 {
            return Err(PlannerError::Config(
                "window length must be at least one step".into(),
            ));
        }
        if !(self.limit_hz < 0.0 && self.limit_hz.is_finite()) {
            return Err(PlannerError::Config(format!(
                "frequency limit must be negative, got {}",
                self.limit_hz
            )));
        }
        self.solver.validate()?;
        Ok(())
    }

    /// Short label such as `nadir+ess`.
    pub fn label(&self) -> String {
        format!("{}{}", self.mode, if self.ess { "+ess" } else { "" })
    }
}

/// One planner iteration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IterationLog {
    pub iteration: usize,
    /// Step committed by this iteration.
    pub step: usize,
    /// Window length that produced the committed step.
    pub window: usize,
    /// The window was infeasible at every length and a hold step was taken.
    pub held: bool,
    pub optimal: bool,
    pub objective: f64,
    pub nodes: usize,
    pub lp_iterations: usize,
    pub solve_ms: f64,
    /// Frozen disturbance bound for the committed step, pu.
    pub g0: Option<f64>,
    pub restored: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PlannerOutput {
    /// Network the plan refers to (storage removed when disabled).
    pub network: NetworkModel,
    pub plan: RestorationPlan,
    pub log: Vec<IterationLog>,
}

fn iteration_cap(net: &NetworkModel) -> usize {
    let longest = net
        .generators
        .iter()
        .map(|g| g.start_up_steps() as usize)
        .max()
        .unwrap_or(0);
    net.element_count() * (longest + 1) + longest + 8
}

/// Phases over the next `n` steps assuming no further generator starts.
pub fn predicted_phases(
    net: &NetworkModel,
    plan: &RestorationPlan,
    n: usize,
) -> Vec<Vec<GenPhase>> {
    let k0 = plan.horizon() as i64;
    let starts: Vec<Option<i64>> = (0..net.generators.len())
        .map(|i| plan.gen_start(net, i))
        .collect();
    (1..=n as i64)
        .map(|d| {
            net.generators
                .iter()
                .zip(&starts)
                .map(|(g, s)| crate::grid::phase_at(g, *s, k0 + d))
                .collect()
        })
        .collect()
}

/// Frozen nadir bounds for the next `n` steps from the committed generator
/// starts.
pub fn predict_coefficients(
    plan: &RestorationPlan,
    net: &NetworkModel,
    n: usize,
    limit_pu: f64,
) -> Result<Vec<FrozenBound>, NadirError> {
    predicted_phases(net, plan, n)
        .iter()
        .map(|phases| NadirCoeffs::at_phases(net, phases, limit_pu)?.frozen_bound())
        .collect()
}

/// Nadir bounds recomputed from the phases actually reached at each step of
/// a finished plan (`result[k-1]` belongs to step `k`).
pub fn realized_coefficients(
    plan: &RestorationPlan,
    net: &NetworkModel,
    limit_pu: f64,
) -> Result<Vec<FrozenBound>, NadirError> {
    plan.steps[1..]
        .iter()
        .map(|s| NadirCoeffs::at_phases(net, &s.phase, limit_pu)?.frozen_bound())
        .collect()
}

fn build_window(
    net: &NetworkModel,
    plan: &RestorationPlan,
    n: usize,
    config: &PlannerConfig,
    weights: &ObjectiveWeights,
) -> Result<(RestorationModel, Option<Vec<FrozenBound>>), PlannerError> {
    let horizon = HorizonSpec::new(net, plan, n, weights.clone())?;
    let mut rm = RestorationModel::build(net, horizon)?;
    let bounds = match config.mode {
        ConstraintMode::None => None,
        ConstraintMode::FivePercent => {
            rm.add_five_percent_rule(net)?;
            None
        }
        ConstraintMode::Nadir => {
            let b = predict_coefficients(plan, net, n, net.hz_to_pu(config.limit_hz))?;
            rm.add_nadir_constraints(net, &b)?;
            Some(b)
        }
    };
    Ok((rm, bounds))
}

/// Window model of the first planner iteration, for export.
pub fn first_window(
    net: &NetworkModel,
    config: &PlannerConfig,
) -> Result<RestorationModel, PlannerError> {
    config.validate()?;
    let net = if config.ess {
        net.clone()
    } else {
        net.without_ess()
    };
    let weights = config
        .weights
        .clone()
        .unwrap_or_else(|| ObjectiveWeights::default_for(&net));
    let plan = RestorationPlan::new(initial_state(&net));
    Ok(build_window(&net, &plan, config.horizon, config, &weights)?.0)
}

/// Holds every status at its committed value for one step and drops the
/// frequency constraint; generators already started keep progressing.
fn hold_step(
    net: &NetworkModel,
    plan: &RestorationPlan,
    config: &PlannerConfig,
    weights: &ObjectiveWeights,
) -> Result<(RestorationModel, crate::solver::MilpSolution), PlannerError> {
    let horizon = HorizonSpec::new(net, plan, 1, weights.clone())?;
    let mut rm = RestorationModel::build(net, horizon)?;
    let last = plan.last();
    let sv = rm.vars.steps[1].clone();
    let pairs = [
        (&sv.bus, &last.bus),
        (&sv.line, &last.line),
        (&sv.load, &last.load),
        (&sv.gen, &last.gen),
        (&sv.ess, &last.ess),
    ];
    for (vars, status) in pairs {
        for (v, &on) in vars.iter().zip(status.iter()) {
            let b = if on { 1.0 } else { 0.0 };
            rm.model
                .set_bounds(*v, b, b)
                .map_err(RestorationError::from)?;
        }
    }
    let sol = solve_milp(&rm.model, &config.solver)?;
    Ok((rm, sol))
}

/// No status change and no generator in a start-up transition: repeating
/// such a step cannot unlock new actions.
fn is_idle(prev: &RestorationState, next: &RestorationState) -> bool {
    let transient = next.phase.iter().any(|p| p.is_cranking() || p.is_ramping());
    !transient
        && prev.bus == next.bus
        && prev.line == next.line
        && prev.load == next.load
        && prev.gen == next.gen
        && prev.ess == next.ess
}

/// Builds a restoration plan by rolling the window forward one step at a
/// time until every element is energized, the iteration cap is reached or
/// the plan stalls (a run of idle steps with nothing left in start-up).
///
/// An infeasible window is retried with shorter lengths; if even one step is
/// infeasible, a hold step (no new energization) is committed instead.
pub fn plan(net: &NetworkModel, config: &PlannerConfig) -> Result<PlannerOutput, PlannerError> {
    config.validate()?;
    let net = if config.ess {
        net.clone()
    } else {
        net.without_ess()
    };
    net.validate()
        .map_err(|e| PlannerError::Config(e.to_string()))?;
    let weights = config
        .weights
        .clone()
        .unwrap_or_else(|| ObjectiveWeights::default_for(&net));
    let cap = config.max_iterations.unwrap_or_else(|| iteration_cap(&net));
    let mut plan = RestorationPlan::new(initial_state(&net));
    let mut log = Vec::new();
    let stall_limit = 2 * config.horizon + 2;
    let mut idle = 0;

    for iteration in 1..=cap {
        if plan.last().is_fully_restored() || idle >= stall_limit {
            break;
        }
        let mut committed = None;
        for n in (1..=config.horizon).rev() {
            let (rm, bounds) = build_window(&net, &plan, n, config, &weights)?;
            let sol = solve_milp(&rm.model, &config.solver)?;
            if sol.has_incumbent() {
                committed = Some((rm, sol, bounds.map(|b| b[0].clone()), n, false));
                break;
            }
        }
        let (rm, sol, frozen, window, held) = match committed {
            Some(c) => c,
            None => {
                let (rm, sol) = hold_step(&net, &plan, config, &weights)?;
                if !sol.has_incumbent() {
                    return Err(PlannerError::Infeasible {
                        step: plan.horizon(),
                        detail: "the committed state cannot be held for one more step".into(),
                    });
                }
                (rm, sol, None, 1, true)
            }
        };
        let mut state = rm.extract(&net, &sol.values).swap_remove(0);
        state.gen_ref_change = reference_changes(&net, &state);
        state.frozen = frozen;
        log.push(IterationLog {
            iteration,
            step: plan.horizon() + 1,
            window,
            held,
            optimal: sol.status == SolveStatus::Optimal,
            objective: sol.objective,
            nodes: sol.stats.nodes,
            lp_iterations: sol.stats.lp_iterations,
            solve_ms: sol.stats.elapsed.as_secs_f64() * 1e3,
            g0: state.frozen.as_ref().map(|f| f.g0),
            restored: state.restored_count(),
        });
        idle = if is_idle(plan.last(), &state) {
            idle + 1
        } else {
            0
        };
        plan.steps.push(state);
    }
    plan.complete = plan.last().is_fully_restored();
    Ok(PlannerOutput {
        network: net,
        plan,
        log,
    })
}

/// Headline figures of one planned and simulated configuration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonRow {
    pub label: String,
    pub mode: ConstraintMode,
    pub ess: bool,
    pub steps: usize,
    pub minutes: f64,
    pub complete: bool,
    /// Deepest simulated nadir, Hz.
    pub worst_nadir_hz: f64,
    /// Steps whose simulated nadir is below the limit.
    pub violations: Vec<usize>,
    pub total_solve_ms: f64,
}

/// Plans and simulates each configuration on the same network.
pub fn compare_plans(
    net: &NetworkModel,
    configs: &[PlannerConfig],
    sim: SimConfig,
) -> Result<Vec<ComparisonRow>, PlannerError> {
    configs
        .iter()
        .map(|c| {
            let out = plan(net, c)?;
            let limit = out.network.hz_to_pu(c.limit_hz);
            let result = simulate_plan(&out.plan, &out.network, limit, sim)?;
            Ok(ComparisonRow {
                label: c.label(),
                mode: c.mode,
                ess: c.ess,
                steps: out.plan.horizon(),
                minutes: out.plan.restoration_minutes(&out.network),
                complete: out.plan.complete,
                worst_nadir_hz: out.network.pu_to_hz(result.worst_nadir()),
                violations: result.violations(),
                total_solve_ms: out.log.iter().map(|l| l.solve_ms).sum(),
            })
        })
        .collect()
}
