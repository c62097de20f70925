use serde::{Deserialize, Serialize};

use super::network::{GeneratorSpec, NetworkModel};

/// Start-up phase of a generator at one step.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GenPhase {
    Offline,
    Cranking,
    Ramping,
    Online,
}

impl GenPhase {
    pub fn as_str(self) -> &'static str {
        match self {
            GenPhase::Offline => "offline",
            GenPhase::Cranking => "cranking",
            GenPhase::Ramping => "ramping",
            GenPhase::Online => "online",
        }
    }

    pub fn is_cranking(self) -> bool {
        self == GenPhase::Cranking
    }

    pub fn is_ramping(self) -> bool {
        self == GenPhase::Ramping
    }

    pub fn is_online(self) -> bool {
        self == GenPhase::Online
    }

    /// Synchronized units (ramping or online) contribute inertia.
    pub fn is_synchronized(self) -> bool {
        matches!(self, GenPhase::Ramping | GenPhase::Online)
    }
}

/// Switch-on step standing in for "always on" (the black-start unit).
pub const ALWAYS_ON: i64 = i64::MIN / 4;

/// Phase at step `k` of a unit switched on at `start`.
///
/// With a monotone status sequence, the phase identities reduce to
/// comparisons against the start step: cranking for `T_c` steps, ramping for
/// `T_r` steps, online afterwards.
pub fn phase_at(gen: &GeneratorSpec, start: Option<i64>, k: i64) -> GenPhase {
    let Some(start) = start else {
        return GenPhase::Offline;
    };
    let crank_end = start + gen.t_crank as i64;
    let ramp_end = crank_end + gen.t_ramp as i64;
    if k < start {
        GenPhase::Offline
    } else if k < crank_end {
        GenPhase::Cranking
    } else if k < ramp_end {
        GenPhase::Ramping
    } else {
        GenPhase::Online
    }
}

/// Frozen nadir-bound coefficients that were active when a step was committed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FrozenBound {
    pub g0: f64,
    pub gs: Vec<f64>,
}

/// Statuses and dispatch of the network at one restoration step.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RestorationState {
    pub bus: Vec<bool>,
    pub line: Vec<bool>,
    pub load: Vec<bool>,
    pub gen: Vec<bool>,
    pub ess: Vec<bool>,
    pub ess_charging: Vec<bool>,
    pub ess_discharging: Vec<bool>,
    pub phase: Vec<GenPhase>,
    pub p_gen: Vec<f64>,
    /// Ramp reference of each generator.
    pub p_ramp: Vec<f64>,
    pub p_ess: Vec<f64>,
    pub p_ess_in: Vec<f64>,
    pub p_ess_out: Vec<f64>,
    pub soc: Vec<f64>,
    pub theta: Vec<f64>,
    pub p_line: Vec<f64>,
    /// ESS setpoint change relative to the previous step.
    pub ess_setpoint_change: Vec<f64>,
    /// Electrical disturbance caused by the actions of this step.
    pub imbalance: f64,
    /// Governor reference change of each generator, machine base.
    pub gen_ref_change: Vec<f64>,
    pub frozen: Option<FrozenBound>,
}

impl RestorationState {
    pub fn restored_count(&self) -> usize {
        [&self.bus, &self.line, &self.load, &self.gen, &self.ess]
            .iter()
            .map(|v| v.iter().filter(|b| **b).count())
            .sum()
    }

    /// True when every element is energized and every unit is online.
    pub fn is_fully_restored(&self) -> bool {
        [&self.bus, &self.line, &self.load, &self.gen, &self.ess]
            .iter()
            .all(|v| v.iter().all(|b| *b))
            && self.phase.iter().all(|p| p.is_online())
    }
}

/// Step 0: only the black-start unit and its bus are energized.
pub fn initial_state(net: &NetworkModel) -> RestorationState {
    let bsu = net.black_start_index();
    let bsu_bus = net
        .bus_index(net.generators[bsu].bus)
        .expect("validated network");
    let ng = net.generators.len();
    let ns = net.ess.len();
    let mut bus = vec![false; net.buses.len()];
    bus[bsu_bus] = true;
    let mut gen = vec![false; ng];
    gen[bsu] = true;
    RestorationState {
        bus,
        line: vec![false; net.lines.len()],
        load: vec![false; net.loads.len()],
        gen,
        ess: vec![false; ns],
        ess_charging: vec![false; ns],
        ess_discharging: vec![false; ns],
        phase: (0..ng)
            .map(|i| {
                if i == bsu {
                    GenPhase::Online
                } else {
                    GenPhase::Offline
                }
            })
            .collect(),
        p_gen: vec![0.0; ng],
        p_ramp: net.generators.iter().map(|g| -0.5 * g.ramp).collect(),
        p_ess: vec![0.0; ns],
        p_ess_in: vec![0.0; ns],
        p_ess_out: vec![0.0; ns],
        soc: net.ess.iter().map(|s| s.e_init).collect(),
        theta: vec![0.0; net.buses.len()],
        p_line: vec![0.0; net.lines.len()],
        ess_setpoint_change: vec![0.0; ns],
        imbalance: 0.0,
        gen_ref_change: vec![0.0; ng],
        frozen: None,
    }
}

/// A restoration sequence: `steps[0]` is the initial state, `steps[k]` the
/// state after the actions of step `k`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RestorationPlan {
    pub steps: Vec<RestorationState>,
    pub complete: bool,
}

impl RestorationPlan {
    pub fn new(initial: RestorationState) -> Self {
        RestorationPlan {
            steps: vec![initial],
            complete: false,
        }
    }

    /// Number of action steps `T` (excludes the initial state).
    pub fn horizon(&self) -> usize {
        self.steps.len() - 1
    }

    pub fn last(&self) -> &RestorationState {
        self.steps.last().expect("plan holds the initial state")
    }

    pub fn restoration_minutes(&self, net: &NetworkModel) -> f64 {
        self.horizon() as f64 * net.t_a
    }

    /// First step at which generator `i` is switched on; [`ALWAYS_ON`] for
    /// the black-start unit.
    pub fn gen_start(&self, net: &NetworkModel, i: usize) -> Option<i64> {
        if net.generators[i].black_start {
            return Some(ALWAYS_ON);
        }
        self.steps.iter().position(|s| s.gen[i]).map(|k| k as i64)
    }

    /// Generator status `b_g` at any integer step, including `k <= 0`.
    pub fn gen_status(&self, net: &NetworkModel, i: usize, k: i64) -> bool {
        match self.gen_start(net, i) {
            Some(start) => k >= start,
            None => false,
        }
    }
}
