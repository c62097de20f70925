//! Restoration MILP over a rolling window: element status logic, DC power
//! flow, generator start-up phases, storage and the two frequency-security
//! constraint variants.

mod build;
mod horizon;
mod vars;

use thiserror::Error;

pub use build::{
    add_five_percent_rule, add_nadir_constraints, build_ess, build_nbsu_phases, build_objective,
    build_power_flow, build_status_logic, step_imbalance_expr,
};
pub use horizon::{check_prefix, HorizonSpec, ObjectiveWeights};
pub use vars::{assignment_from_states, declare_variables, flow_bounds, RestorationVars, StepVars};

use crate::grid::{
    initial_state, phase_at, FrozenBound, NetworkModel, RestorationPlan, RestorationState,
};
use crate::milp::{check_feasible, FeasibilityReport, MilpError, MilpModel};

#[derive(Debug, Error, PartialEq)]
pub enum RestorationError {
    #[error("invalid horizon: {0}")]
    Horizon(String),
    #[error("inconsistent committed prefix: {0}")]
    Prefix(String),
    #[error("expected {expected} frozen coefficient entries, got {got}")]
    CoefficientLength { expected: usize, got: usize },
    #[error(transparent)]
    Milp(#[from] MilpError),
}

/// A built window model together with its variable map.
#[derive(Debug, Clone)]
pub struct RestorationModel {
    pub model: MilpModel,
    pub vars: RestorationVars,
    pub horizon: HorizonSpec,
}

impl RestorationModel {
    /// Every structural constraint and the objective, without any frequency
    /// constraint.
    pub fn build(net: &NetworkModel, horizon: HorizonSpec) -> Result<Self, RestorationError> {
        let mut model = MilpModel::new(format!("restoration_k{}_n{}", horizon.k0, horizon.n));
        let vars = declare_variables(&mut model, net, &horizon)?;
        build_status_logic(&mut model, net, &horizon, &vars)?;
        build_power_flow(&mut model, net, &horizon, &vars)?;
        build_nbsu_phases(&mut model, net, &horizon, &vars)?;
        build_ess(&mut model, net, &horizon, &vars)?;
        build_objective(&mut model, &horizon, &vars)?;
        Ok(RestorationModel {
            model,
            vars,
            horizon,
        })
    }

    pub fn add_nadir_constraints(
        &mut self,
        net: &NetworkModel,
        bounds: &[FrozenBound],
    ) -> Result<(), RestorationError> {
        add_nadir_constraints(&mut self.model, net, &self.horizon, &self.vars, bounds)
    }

    pub fn add_five_percent_rule(&mut self, net: &NetworkModel) -> Result<(), RestorationError> {
        add_five_percent_rule(&mut self.model, net, &self.horizon, &self.vars)
    }

    /// States of the window steps `k0+1 ..= k0+n` read from a solution.
    pub fn extract(&self, net: &NetworkModel, x: &[f64]) -> Vec<RestorationState> {
        let on = |v: crate::milp::VarId| x[v.index()] > 0.5;
        let val = |v: &crate::milp::VarId| x[v.index()];
        let h = &self.horizon;
        let mut starts = h.gen_start.clone();
        let mut out = Vec::with_capacity(h.n);
        for sv in &self.vars.steps[1..] {
            for (i, &g) in sv.gen.iter().enumerate() {
                if starts[i].is_none() && on(g) {
                    starts[i] = Some(sv.k as i64);
                }
            }
            let imbalance = step_imbalance_expr(net, &self.vars, sv.k).eval(x);
            out.push(RestorationState {
                bus: sv.bus.iter().map(|v| on(*v)).collect(),
                line: sv.line.iter().map(|v| on(*v)).collect(),
                load: sv.load.iter().map(|v| on(*v)).collect(),
                gen: sv.gen.iter().map(|v| on(*v)).collect(),
                ess: sv.ess.iter().map(|v| on(*v)).collect(),
                ess_charging: sv.charge.iter().map(|v| on(*v)).collect(),
                ess_discharging: sv.discharge.iter().map(|v| on(*v)).collect(),
                phase: net
                    .generators
                    .iter()
                    .zip(&starts)
                    .map(|(g, s)| phase_at(g, *s, sv.k as i64))
                    .collect(),
                p_gen: sv.p_gen.iter().map(val).collect(),
                p_ramp: sv.p_ramp.iter().map(val).collect(),
                p_ess: sv.p_ess.iter().map(val).collect(),
                p_ess_in: sv.p_in.iter().map(val).collect(),
                p_ess_out: sv.p_out.iter().map(val).collect(),
                soc: sv.soc.iter().map(val).collect(),
                theta: sv.theta.iter().map(val).collect(),
                p_line: sv.p_line.iter().map(val).collect(),
                ess_setpoint_change: sv.setpoint_change.iter().map(val).collect(),
                imbalance,
                gen_ref_change: vec![0.0; net.generators.len()],
                frozen: None,
            });
        }
        out
    }
}

/// Checks a finished plan against every structural constraint of the
/// restoration model (frequency constraints excluded).
pub fn check_plan(
    net: &NetworkModel,
    plan: &RestorationPlan,
    eps: f64,
) -> Result<FeasibilityReport, RestorationError> {
    let init = initial_state(net);
    if plan.steps[0].bus != init.bus || plan.steps[0].gen != init.gen {
        return Err(RestorationError::Prefix(
            "plan does not start from the black-start state".into(),
        ));
    }
    if plan.horizon() == 0 {
        return Ok(FeasibilityReport::default());
    }
    let start = RestorationPlan::new(plan.steps[0].clone());
    let horizon = HorizonSpec::new(net, &start, plan.horizon(), ObjectiveWeights::zero(net))?;
    let rm = RestorationModel::build(net, horizon)?;
    let x = assignment_from_states(&rm.model, net, &rm.vars, &plan.steps);
    Ok(check_feasible(&rm.model, &x, eps)?)
}
