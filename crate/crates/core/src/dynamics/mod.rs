//! Average-system-frequency simulation with IEEEG1 governors (valve rate
//! limit included) and first-order storage response.

mod plan;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use plan::{
    assign_reference_changes, reference_changes, simulate_plan, PlanSimulation, StepResult,
};

use crate::grid::{GeneratorSpec, NetworkModel, RestorationState};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DynamicsError {
    #[error("no synchronized machine provides inertia")]
    NoInertia,
    #[error("no unit provides primary frequency response")]
    NoResponse,
    #[error("invalid scenario: {0}")]
    Scenario(String),
    #[error("integration diverged at t = {t} s (step {step})")]
    Diverged { t: f64, step: usize },
    #[error("plan does not match the network: {0}")]
    Mismatch(String),
}

/// Inertia constant on the system base of the listed generators.
pub fn system_inertia(net: &NetworkModel, synchronized: &[usize]) -> Result<f64, DynamicsError> {
    if synchronized.is_empty() {
        return Err(DynamicsError::NoInertia);
    }
    Ok(synchronized
        .iter()
        .map(|&i| net.generators[i].system_inertia(net.s_sys))
        .sum())
}

/// Steady-state mechanical power change of each responding unit (machine
/// base) after a disturbance `dpe`, shared by droop gain.
pub fn pfr_steady_share(droop: &[f64], alpha: &[f64], dpe: f64) -> Result<Vec<f64>, DynamicsError> {
    let weight: f64 = droop.iter().zip(alpha).map(|(k, a)| k * a).sum();
    if droop.is_empty() || !(weight > 0.0) {
        return Err(DynamicsError::NoResponse);
    }
    Ok(droop.iter().map(|k| k * dpe / weight).collect())
}

/// Integration settings.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SimConfig {
    /// Fixed step, s.
    pub dt: f64,
    /// Simulated time after the disturbance, s.
    pub duration: f64,
    /// Keep every n-th sample in the returned trajectory.
    pub record_every: usize,
}

impl Default for SimConfig {
    fn default() -> Self {
        SimConfig {
            dt: 0.005,
            duration: 60.0,
            record_every: 10,
        }
    }
}

/// One step disturbance applied at `t = 0` to a system at rest.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StepScenario {
    pub h_sys: f64,
    /// Responding generators (indices into the network).
    pub units: Vec<usize>,
    /// Machine-to-system base ratio of each responding unit.
    pub alpha: Vec<f64>,
    /// Governor reference change of each responding unit, machine base.
    pub ref_change: Vec<f64>,
    /// Storage units (indices into the network).
    pub ess: Vec<usize>,
    pub ess_setpoint: Vec<f64>,
    /// Electrical disturbance, pu (positive = more load).
    pub disturbance: f64,
    pub config: SimConfig,
}

impl StepScenario {
    /// Scenario for the actions of one plan step: inertia from ramping and
    /// online units, response from online PFR units.
    pub fn from_state(
        net: &NetworkModel,
        state: &RestorationState,
        config: SimConfig,
    ) -> Result<Self, DynamicsError> {
        if state.phase.len() != net.generators.len()
            || state.ess_setpoint_change.len() != net.ess.len()
        {
            return Err(DynamicsError::Mismatch("state vector sizes".into()));
        }
        let synced: Vec<usize> = (0..net.generators.len())
            .filter(|&i| state.phase[i].is_synchronized())
            .collect();
        let h_sys = system_inertia(net, &synced)?;
        let units: Vec<usize> = (0..net.generators.len())
            .filter(|&i| net.generators[i].pfr && state.phase[i].is_online())
            .collect();
        Ok(StepScenario {
            h_sys,
            alpha: units
                .iter()
                .map(|&i| net.generators[i].alpha(net.s_sys))
                .collect(),
            ref_change: units
                .iter()
                .map(|&i| state.gen_ref_change.get(i).copied().unwrap_or(0.0))
                .collect(),
            units,
            ess: (0..net.ess.len()).collect(),
            ess_setpoint: state.ess_setpoint_change.clone(),
            disturbance: state.imbalance,
            config,
        })
    }

    fn validate(&self, net: &NetworkModel) -> Result<(), DynamicsError> {
        let bad = |m: &str| Err(DynamicsError::Scenario(m.to_string()));
        if !(self.h_sys > 0.0) {
            return Err(DynamicsError::NoInertia);
        }
        if self.alpha.len() != self.units.len() || self.ref_change.len() != self.units.len() {
            return bad("per-unit vectors differ in length");
        }
        if self.ess_setpoint.len() != self.ess.len() {
            return bad("per-storage vectors differ in length");
        }
        if self.units.iter().any(|&i| i >= net.generators.len())
            || self.ess.iter().any(|&i| i >= net.ess.len())
        {
            return bad("unit index out of range");
        }
        if !(self.config.dt > 0.0) || !(self.config.duration > 0.0) || self.config.record_every == 0
        {
            return bad("step, duration and recording stride must be positive");
        }
        Ok(())
    }
}

/// Sampled response to one step disturbance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FrequencyTrajectory {
    pub time: Vec<f64>,
    /// Frequency deviation, pu.
    pub omega: Vec<f64>,
    pub unit_names: Vec<String>,
    /// Mechanical power change per unit and sample, machine base.
    pub p_mech: Vec<Vec<f64>>,
    pub ess_names: Vec<String>,
    /// Storage output change per unit and sample, pu.
    pub p_ess: Vec<Vec<f64>>,
    /// Minimum deviation over the full-resolution run, pu.
    pub nadir: f64,
    pub t_nadir: f64,
}

impl FrequencyTrajectory {
    fn empty_like(&self) -> Self {
        FrequencyTrajectory {
            time: Vec::new(),
            omega: Vec::new(),
            unit_names: self.unit_names.clone(),
            p_mech: vec![Vec::new(); self.p_mech.len()],
            ess_names: self.ess_names.clone(),
            p_ess: vec![Vec::new(); self.p_ess.len()],
            nadir: self.nadir,
            t_nadir: self.t_nadir,
        }
    }

    /// Smallest recorded deviation, pu.
    pub fn recorded_min(&self) -> f64 {
        self.omega.iter().copied().fold(0.0, f64::min)
    }

    /// Comma-separated dump with a header row.
    pub fn to_csv(&self, f_base: f64) -> String {
        let mut out = String::from("t_s,domega_pu,df_hz");
        for n in &self.unit_names {
            out.push_str(&format!(",pm_{n}_pu"));
        }
        for n in &self.ess_names {
            out.push_str(&format!(",ps_{n}_pu"));
        }
        out.push('\n');
        for (j, t) in self.time.iter().enumerate() {
            out.push_str(&format!(
                "{t:.3},{:.9},{:.6}",
                self.omega[j],
                self.omega[j] * f_base
            ));
            for p in self.p_mech.iter().chain(&self.p_ess) {
                out.push_str(&format!(",{:.9}", p[j]));
            }
            out.push('\n');
        }
        out
    }
}

/// Per-unit governor and turbine states: lead-lag, valve, four stages.
const UNIT_STATES: usize = 6;

struct Rhs<'a> {
    h2: f64,
    gens: Vec<&'a GeneratorSpec>,
    alpha: &'a [f64],
    refs: &'a [f64],
    tau: Vec<f64>,
    ess_ref: &'a [f64],
    disturbance: f64,
}

/// Outputs of the lead-lag and the four turbine stages; a zero time
/// constant passes its input through.
fn stage_outputs(g: &GeneratorSpec, s: &[f64], u: f64) -> (f64, [f64; 4]) {
    let y = if g.t1 > 0.0 {
        s[0] + g.t2 / g.t1 * (u - s[0])
    } else {
        u
    };
    let mut out = [0.0; 4];
    let mut input = s[1];
    for (j, t) in [g.t4, g.t5, g.t6, g.t7].into_iter().enumerate() {
        out[j] = if t > 0.0 { s[2 + j] } else { input };
        input = out[j];
    }
    (y, out)
}

fn mech_power(g: &GeneratorSpec, stages: &[f64; 4]) -> f64 {
    g.k1 * stages[0] + g.k3 * stages[1] + g.k5 * stages[2] + g.k7 * stages[3]
}

impl Rhs<'_> {
    fn eval(&self, x: &[f64], dx: &mut [f64]) {
        let w = x[0];
        let mut accel = -self.disturbance;
        for (u, g) in self.gens.iter().enumerate() {
            let s = &x[1 + UNIT_STATES * u..1 + UNIT_STATES * (u + 1)];
            let d = &mut dx[1 + UNIT_STATES * u..1 + UNIT_STATES * (u + 1)];
            let err = -g.droop * w;
            let (y, stages) = stage_outputs(g, s, err);
            d[0] = if g.t1 > 0.0 { (err - s[0]) / g.t1 } else { 0.0 };
            d[1] = ((self.refs[u] + y - s[1]) / g.t3).clamp(-g.u_o, g.u_o);
            let mut input = s[1];
            for (j, t) in [g.t4, g.t5, g.t6, g.t7].into_iter().enumerate() {
                d[2 + j] = if t > 0.0 { (input - s[2 + j]) / t } else { 0.0 };
                input = stages[j];
            }
            accel += self.alpha[u] * mech_power(g, &stages);
        }
        let base = 1 + UNIT_STATES * self.gens.len();
        for (e, tau) in self.tau.iter().enumerate() {
            let p = x[base + e];
            dx[base + e] = (self.ess_ref[e] - p) / tau;
            accel += p;
        }
        dx[0] = accel / self.h2;
    }
}

/// Fixed-step RK4 response of the frequency deviation to one step
/// disturbance, starting from rest.
pub fn simulate_step(
    scenario: &StepScenario,
    net: &NetworkModel,
) -> Result<FrequencyTrajectory, DynamicsError> {
    scenario.validate(net)?;
    let gens: Vec<&GeneratorSpec> = scenario.units.iter().map(|&i| &net.generators[i]).collect();
    if let Some(g) = gens.iter().find(|g| !(g.t3 > 0.0)) {
        return Err(DynamicsError::Scenario(format!(
            "unit {} has no governor time constant",
            g.name
        )));
    }
    let rhs = Rhs {
        h2: 2.0 * scenario.h_sys,
        gens: gens.clone(),
        alpha: &scenario.alpha,
        refs: &scenario.ref_change,
        tau: scenario.ess.iter().map(|&i| net.ess[i].tau).collect(),
        ess_ref: &scenario.ess_setpoint,
        disturbance: scenario.disturbance,
    };
    let n = 1 + UNIT_STATES * gens.len() + rhs.tau.len();
    let cfg = scenario.config;
    let steps = (cfg.duration / cfg.dt).round() as usize;
    let h = cfg.dt;

    let mut x = vec![0.0; n];
    let (mut k1, mut k2, mut k3, mut k4, mut tmp) = (
        vec![0.0; n],
        vec![0.0; n],
        vec![0.0; n],
        vec![0.0; n],
        vec![0.0; n],
    );
    let mut traj = FrequencyTrajectory {
        time: Vec::with_capacity(steps / cfg.record_every + 1),
        omega: Vec::new(),
        unit_names: gens.iter().map(|g| g.name.clone()).collect(),
        p_mech: vec![Vec::new(); gens.len()],
        ess_names: scenario
            .ess
            .iter()
            .map(|&i| net.ess[i].name.clone())
            .collect(),
        p_ess: vec![Vec::new(); rhs.tau.len()],
        nadir: 0.0,
        t_nadir: 0.0,
    };
    let record = |traj: &mut FrequencyTrajectory, t: f64, x: &[f64]| {
        traj.time.push(t);
        traj.omega.push(x[0]);
        for (u, g) in gens.iter().enumerate() {
            let s = &x[1 + UNIT_STATES * u..1 + UNIT_STATES * (u + 1)];
            let (_, stages) = stage_outputs(g, s, -g.droop * x[0]);
            traj.p_mech[u].push(mech_power(g, &stages));
        }
        let base = 1 + UNIT_STATES * gens.len();
        for e in 0..traj.p_ess.len() {
            traj.p_ess[e].push(x[base + e]);
        }
    };
    record(&mut traj, 0.0, &x);
    let mut nadir_state: Option<(usize, Vec<f64>)> = None;
    for step in 1..=steps {
        rhs.eval(&x, &mut k1);
        for i in 0..n {
            tmp[i] = x[i] + 0.5 * h * k1[i];
        }
        rhs.eval(&tmp, &mut k2);
        for i in 0..n {
            tmp[i] = x[i] + 0.5 * h * k2[i];
        }
        rhs.eval(&tmp, &mut k3);
        for i in 0..n {
            tmp[i] = x[i] + h * k3[i];
        }
        rhs.eval(&tmp, &mut k4);
        for i in 0..n {
            x[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
        let t = step as f64 * h;
        if x.iter().any(|v| !v.is_finite()) {
            return Err(DynamicsError::Diverged { t, step });
        }
        if x[0] < traj.nadir {
            traj.nadir = x[0];
            traj.t_nadir = t;
            nadir_state = Some((step, x.clone()));
        }
        if step % cfg.record_every == 0 {
            record(&mut traj, t, &x);
        }
    }
    // Splice the nadir sample into the recorded series so that its minimum
    // is the reported nadir.
    if let Some((step, xn)) = nadir_state.filter(|(s, _)| s % cfg.record_every != 0) {
        let mut single = traj.empty_like();
        record(&mut single, traj.t_nadir, &xn);
        let at = step / cfg.record_every + 1;
        traj.time.insert(at, single.time[0]);
        traj.omega.insert(at, single.omega[0]);
        for (dst, src) in traj
            .p_mech
            .iter_mut()
            .chain(traj.p_ess.iter_mut())
            .zip(single.p_mech.iter().chain(&single.p_ess))
        {
            dst.insert(at, src[0]);
        }
    }
    Ok(traj)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::fixtures::{single_bus, two_bus};

    fn scenario(net: &NetworkModel, dpe: f64, refs: f64) -> StepScenario {
        StepScenario {
            h_sys: system_inertia(net, &[0]).unwrap(),
            units: vec![0],
            alpha: vec![1.0],
            ref_change: vec![refs],
            ess: vec![],
            ess_setpoint: vec![],
            disturbance: dpe,
            config: SimConfig::default(),
        }
    }

    #[test]
    fn inertia_sums_over_units() {
        let mut net = two_bus();
        net.generators[0].h = 5.0;
        net.generators[1].h = 5.0;
        assert_eq!(system_inertia(&net, &[0]).unwrap(), 5.0);
        assert_eq!(system_inertia(&net, &[0, 1]).unwrap(), 10.0);
        assert_eq!(system_inertia(&net, &[]), Err(DynamicsError::NoInertia));
    }

    #[test]
    fn steady_shares_follow_droop() {
        let s = pfr_steady_share(&[20.0, 20.0], &[0.5, 0.5], 1.0).unwrap();
        assert_eq!(s, vec![1.0, 1.0]);
        let s = pfr_steady_share(&[30.0, 10.0], &[0.5, 0.5], 1.0).unwrap();
        assert!((s[0] - 1.5).abs() < 1e-15 && (s[1] - 0.5).abs() < 1e-15);
        assert_eq!(
            pfr_steady_share(&[], &[], 1.0),
            Err(DynamicsError::NoResponse)
        );
    }

    #[test]
    fn zero_input_stays_at_rest() {
        let net = single_bus();
        let tr = simulate_step(&scenario(&net, 0.0, 0.0), &net).unwrap();
        assert!(tr.omega.iter().all(|w| *w == 0.0));
        assert_eq!(tr.nadir, 0.0);
    }

    #[test]
    fn no_response_declines_linearly() {
        let net = single_bus();
        let mut sc = scenario(&net, 0.1, 0.0);
        sc.units.clear();
        sc.alpha.clear();
        sc.ref_change.clear();
        sc.config.duration = 2.0;
        let tr = simulate_step(&sc, &net).unwrap();
        let h = sc.h_sys;
        for (t, w) in tr.time.iter().zip(&tr.omega) {
            assert!((w + 0.1 * t / (2.0 * h)).abs() < 1e-12, "t={t}");
        }
    }

    #[test]
    fn frequency_recovers_with_matched_references() {
        let mut net = single_bus();
        net.generators[0].u_o = 10.0;
        let tr = simulate_step(&scenario(&net, 0.05, 0.05), &net).unwrap();
        assert!(tr.nadir < 0.0);
        assert!(tr.omega.last().unwrap().abs() < 1e-3);
    }
}
