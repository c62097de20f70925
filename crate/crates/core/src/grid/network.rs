use serde::{Deserialize, Serialize};

use super::NetworkError;

/// A transmission line between two buses, reactance in per-unit.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Line {
    pub from: u32,
    pub to: u32,
    pub x: f64,
}

/// A load block that is energized as a single packet.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Load {
    pub name: String,
    pub bus: u32,
    /// Demand in per-unit on the system base.
    pub p: f64,
}

/// Start-up and turbine-governor data for one synchronous unit.
///
/// Powers (`p_crank`, `ramp`, `p_min`, `p_max`) are on the system base.
/// Governor quantities (`droop`, `u_o`) are on the machine base `s_base`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeneratorSpec {
    pub name: String,
    pub bus: u32,
    pub black_start: bool,
    pub p_crank: f64,
    /// Cranking duration in restoration steps.
    pub t_crank: u32,
    /// Ramping duration in restoration steps.
    pub t_ramp: u32,
    /// Ramp rate in pu per restoration step.
    pub ramp: f64,
    pub p_min: f64,
    pub p_max: f64,
    /// Inertia constant on the machine base, seconds.
    pub h: f64,
    /// Machine base in MVA.
    pub s_base: f64,
    pub droop: f64,
    pub t1: f64,
    pub t2: f64,
    pub t3: f64,
    pub t4: f64,
    pub t5: f64,
    pub t6: f64,
    pub t7: f64,
    pub k1: f64,
    pub k3: f64,
    pub k5: f64,
    pub k7: f64,
    /// SAT1 valve opening rate limit, pu/s on the machine base.
    pub u_o: f64,
    pub pfr: bool,
}

impl GeneratorSpec {
    /// Machine-to-system base ratio `S_g / S_sys`.
    pub fn alpha(&self, s_sys: f64) -> f64 {
        self.s_base / s_sys
    }

    /// Inertia contribution on the system base, `H S_g / S_sys`.
    pub fn system_inertia(&self, s_sys: f64) -> f64 {
        self.h * self.alpha(s_sys)
    }

    pub fn to_system_base(&self, value: f64, s_sys: f64) -> f64 {
        value * self.s_base / s_sys
    }

    pub fn to_machine_base(&self, value: f64, s_sys: f64) -> f64 {
        value * s_sys / self.s_base
    }

    pub fn start_up_steps(&self) -> u32 {
        self.t_crank + self.t_ramp
    }
}

/// Battery energy storage unit behind a DC-AC converter.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EssSpec {
    pub name: String,
    pub bus: u32,
    /// Rated power, pu.
    pub p_rated: f64,
    /// Energy capacity, pu·h.
    pub e_max: f64,
    /// Initial stored energy, pu·h.
    pub e_init: f64,
    pub eta_con: f64,
    pub eta_s: f64,
    /// Setpoint ramp limit, pu per step.
    pub ramp: f64,
    /// First-order response time constant, seconds.
    pub tau: f64,
}

/// Static description of one restoration island.
///
/// All powers are per-unit on `s_sys`. Use [`NetworkModel::validate`] (or the
/// loaders in [`crate::grid::file`]) before handing a model to the planner.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NetworkModel {
    pub buses: Vec<u32>,
    pub lines: Vec<Line>,
    pub loads: Vec<Load>,
    pub generators: Vec<GeneratorSpec>,
    pub ess: Vec<EssSpec>,
    /// System MVA base.
    pub s_sys: f64,
    /// Nominal frequency, Hz.
    pub f_base: f64,
    /// Minutes per restoration step.
    pub t_a: f64,
}

const TURBINE_FRACTION_TOL: f64 = 1e-9;

impl NetworkModel {
    pub fn bus_index(&self, id: u32) -> Option<usize> {
        self.buses.iter().position(|&b| b == id)
    }

    /// Position of the black-start unit in `generators`.
    pub fn black_start_index(&self) -> usize {
        self.generators
            .iter()
            .position(|g| g.black_start)
            .expect("validated network has a black-start unit")
    }

    pub fn element_count(&self) -> usize {
        self.buses.len()
            + self.lines.len()
            + self.loads.len()
            + self.generators.len()
            + self.ess.len()
    }

    /// Converts a frequency deviation in Hz to per-unit of `f_base`.
    pub fn hz_to_pu(&self, hz: f64) -> f64 {
        hz / self.f_base
    }

    pub fn pu_to_hz(&self, pu: f64) -> f64 {
        pu * self.f_base
    }

    /// Copy of this model with all storage units removed.
    pub fn without_ess(&self) -> NetworkModel {
        NetworkModel {
            ess: Vec::new(),
            ..self.clone()
        }
    }

    pub fn validate(&self) -> Result<(), NetworkError> {
        let invalid = |element: String, reason: &str| NetworkError::Invalid {
            element,
            reason: reason.to_string(),
        };

        if !(self.s_sys > 0.0) {
            return Err(invalid("system".into(), "s_sys must be positive"));
        }
        if !(self.f_base > 0.0) {
            return Err(invalid("system".into(), "f_base must be positive"));
        }
        if !(self.t_a > 0.0) {
            return Err(invalid("system".into(), "t_a must be positive"));
        }
        if self.buses.is_empty() {
            return Err(invalid("system".into(), "at least one bus is required"));
        }
        for (i, b) in self.buses.iter().enumerate() {
            if self.buses[..i].contains(b) {
                return Err(invalid(format!("bus {b}"), "duplicate bus id"));
            }
        }
        let has_bus = |id: u32| self.bus_index(id).is_some();

        for (i, l) in self.lines.iter().enumerate() {
            let el = format!("line {} ({}-{})", i, l.from, l.to);
            if !has_bus(l.from) || !has_bus(l.to) {
                return Err(invalid(el, "references a nonexistent bus"));
            }
            if l.from == l.to {
                return Err(invalid(el, "line terminals must differ"));
            }
            if !(l.x > 0.0) || !l.x.is_finite() {
                return Err(invalid(el, "reactance must be positive"));
            }
        }
        for l in &self.loads {
            let el = format!("load {}", l.name);
            if !has_bus(l.bus) {
                return Err(invalid(el, "references a nonexistent bus"));
            }
            if !(l.p >= 0.0) || !l.p.is_finite() {
                return Err(invalid(el, "demand must be nonnegative"));
            }
        }
        let bsu_count = self.generators.iter().filter(|g| g.black_start).count();
        if bsu_count != 1 {
            return Err(invalid(
                "generators".into(),
                "exactly one generator must be flagged as black-start unit",
            ));
        }
        for g in &self.generators {
            let el = format!("generator {}", g.name);
            if !has_bus(g.bus) {
                return Err(invalid(el, "references a nonexistent bus"));
            }
            if !(g.p_min >= 0.0 && g.p_min <= g.p_max) {
                return Err(invalid(el, "requires 0 <= p_min <= p_max"));
            }
            if g.black_start && (g.t_crank != 0 || g.t_ramp != 0) {
                return Err(invalid(
                    el,
                    "black-start unit must have zero cranking and ramping time",
                ));
            }
            if !(g.p_crank >= 0.0) {
                return Err(invalid(el, "cranking power must be nonnegative"));
            }
            if !(g.ramp > 0.0) {
                return Err(invalid(el, "ramp rate must be positive"));
            }
            if !g.black_start {
                // Output entering the online phase must be reachable from
                // the last ramping (or cranking) output within one ramp step.
                let last = if g.t_ramp > 0 {
                    (g.t_ramp as f64 - 0.5) * g.ramp
                } else if g.t_crank > 0 {
                    -g.p_crank
                } else {
                    0.0
                };
                if g.p_min > last + g.ramp || g.p_max < last - g.ramp {
                    return Err(invalid(
                        el,
                        "minimum output is unreachable at the end of the ramping phase",
                    ));
                }
            }
            if !(g.h > 0.0) {
                return Err(invalid(el, "inertia constant must be positive"));
            }
            if !(g.s_base > 0.0) {
                return Err(invalid(el, "machine base must be positive"));
            }
            let ks = g.k1 + g.k3 + g.k5 + g.k7;
            if (ks - 1.0).abs() > TURBINE_FRACTION_TOL {
                return Err(invalid(el, "turbine fractions k1+k3+k5+k7 must sum to 1"));
            }
            let times = [g.t1, g.t2, g.t3, g.t4, g.t5, g.t6, g.t7];
            if times.iter().any(|t| !(*t >= 0.0)) {
                return Err(invalid(
                    el,
                    "governor and turbine time constants must be nonnegative",
                ));
            }
            if g.pfr {
                if !(g.u_o > 0.0) {
                    return Err(invalid(
                        el,
                        "PFR units need a positive valve rate limit u_o",
                    ));
                }
                if !(g.t3 > 0.0) {
                    return Err(invalid(
                        el,
                        "PFR units need a positive governor time constant t3",
                    ));
                }
            }
        }
        for s in &self.ess {
            let el = format!("ess {}", s.name);
            if !has_bus(s.bus) {
                return Err(invalid(el, "references a nonexistent bus"));
            }
            if !(s.e_init >= 0.0 && s.e_init <= s.e_max) {
                return Err(invalid(el, "requires 0 <= e_init <= e_max"));
            }
            if !(s.tau > 0.0) {
                return Err(invalid(el, "response time constant must be positive"));
            }
            for (eta, label) in [(s.eta_con, "eta_con"), (s.eta_s, "eta_s")] {
                if !(eta > 0.0 && eta <= 1.0) {
                    return Err(NetworkError::Invalid {
                        element: el,
                        reason: format!("{label} must lie in (0, 1]"),
                    });
                }
            }
            if !(s.p_rated >= 0.0) || !(s.ramp > 0.0) {
                return Err(invalid(
                    el,
                    "rated power must be nonnegative and ramp positive",
                ));
            }
        }
        Ok(())
    }
}
