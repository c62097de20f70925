use serde::{Deserialize, Serialize};

use super::{
    pfr_steady_share, simulate_step, DynamicsError, FrequencyTrajectory, SimConfig, StepScenario,
};
use crate::grid::{NetworkModel, RestorationPlan, RestorationState};

/// Simulated response to the actions of one plan step.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StepResult {
    pub step: usize,
    pub disturbance: f64,
    pub nadir: f64,
    pub t_nadir: f64,
    pub violated: bool,
    pub trajectory: FrequencyTrajectory,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlanSimulation {
    pub steps: Vec<StepResult>,
    /// Frequency limit used for flagging, pu.
    pub limit: f64,
}

impl PlanSimulation {
    /// Deepest simulated nadir, pu (0 when nothing was simulated).
    pub fn worst_nadir(&self) -> f64 {
        self.steps.iter().map(|s| s.nadir).fold(0.0, f64::min)
    }

    pub fn violations(&self) -> Vec<usize> {
        self.steps
            .iter()
            .filter(|s| s.violated)
            .map(|s| s.step)
            .collect()
    }
}

const QUIET: f64 = 1e-9;

/// Governor reference changes for one step: droop shares of the net
/// disturbance (electrical disturbance minus storage setpoint changes) over
/// the online responding units, zero elsewhere.
pub fn reference_changes(net: &NetworkModel, state: &RestorationState) -> Vec<f64> {
    let mut out = vec![0.0; net.generators.len()];
    let units: Vec<usize> = (0..net.generators.len())
        .filter(|&i| net.generators[i].pfr && state.phase[i].is_online())
        .collect();
    let droop: Vec<f64> = units.iter().map(|&i| net.generators[i].droop).collect();
    let alpha: Vec<f64> = units
        .iter()
        .map(|&i| net.generators[i].alpha(net.s_sys))
        .collect();
    let target = state.imbalance - state.ess_setpoint_change.iter().sum::<f64>();
    if let Ok(shares) = pfr_steady_share(&droop, &alpha, target) {
        for (u, &i) in units.iter().enumerate() {
            out[i] = shares[u];
        }
    }
    out
}

pub fn assign_reference_changes(net: &NetworkModel, plan: &mut RestorationPlan) {
    for state in &mut plan.steps {
        state.gen_ref_change = reference_changes(net, state);
    }
}

/// Simulates every step that changes the power balance and flags nadirs
/// below `limit` (pu, negative).
pub fn simulate_plan(
    plan: &RestorationPlan,
    net: &NetworkModel,
    limit: f64,
    config: SimConfig,
) -> Result<PlanSimulation, DynamicsError> {
    let mut steps = Vec::new();
    for (k, state) in plan.steps.iter().enumerate().skip(1) {
        if state.gen_ref_change.len() != net.generators.len() {
            return Err(DynamicsError::Mismatch(format!(
                "step {k}: reference vector size"
            )));
        }
        let quiet = state.imbalance.abs() <= QUIET
            && state.ess_setpoint_change.iter().all(|p| p.abs() <= QUIET);
        if quiet {
            continue;
        }
        let scenario = StepScenario::from_state(net, state, config)?;
        let trajectory = simulate_step(&scenario, net)?;
        steps.push(StepResult {
            step: k,
            disturbance: state.imbalance,
            nadir: trajectory.nadir,
            t_nadir: trajectory.t_nadir,
            violated: trajectory.nadir < limit,
            trajectory,
        });
    }
    Ok(PlanSimulation { steps, limit })
}
