//! TOML network schema.
//!
//! ```toml
//! s_base_mva   = 100.0        # system base
//! f_base_hz    = 60.0
//! step_minutes = 2.0          # t_a
//! power_unit   = "mw"         # "mw" (MW / MWh, converted on load) or "pu"
//! buses        = [1, 2, 3]
//!
//! [[line]]
//! from = 1
//! to   = 2
//! x    = 0.0576               # always per-unit
//!
//! [[load]]
//! name = "D1"                 # optional, defaults to "D<index>"
//! bus  = 2
//! p    = 12.0
//!
//! [[generator]]
//! name = "G1"
//! bus = 1
//! black_start = true
//! p_crank = 0.0               # power_unit
//! t_crank = 0                 # steps
//! t_ramp = 0                  # steps
//! ramp = 30.0                 # power_unit per step
//! p_min = 0.0
//! p_max = 100.0
//! h = 4.0                     # s, machine base
//! s_base_mva = 100.0          # machine base
//! droop = 20.0
//! t1 = 0.2, t2 = 0.0, t3 = 0.1             # governor, s
//! t4 = 0.3, t5 = 0.5, t6 = 0.4, t7 = 0.3   # turbine stages, s
//! k1 = 0.3, k3 = 0.3, k5 = 0.4, k7 = 0.0   # must sum to 1
//! u_o = 0.05                  # pu/s on the machine base
//! pfr = true                  # optional, default true
//!
//! [[ess]]
//! name = "S1"
//! bus = 5
//! p_rated = 10.0              # power_unit
//! e_max = 50.0                # power_unit x hours
//! e_init = 25.0
//! eta_con = 0.95
//! eta_s = 0.95
//! ramp = 10.0                 # power_unit per step
//! tau = 0.2                   # s
//! ```
//!
//! Serialization always writes `power_unit = "pu"`, so a written model loads
//! back bit-identical.

use std::path::Path;

use serde::{Deserialize, Serialize};

use super::network::{EssSpec, GeneratorSpec, Line, Load, NetworkModel};
use super::NetworkError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum PowerUnit {
    #[default]
    Pu,
    Mw,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct NetworkFile {
    s_base_mva: f64,
    #[serde(default = "default_f_base")]
    f_base_hz: f64,
    step_minutes: f64,
    #[serde(default)]
    power_unit: PowerUnit,
    buses: Vec<u32>,
    #[serde(default, rename = "line")]
    lines: Vec<Line>,
    #[serde(default, rename = "load")]
    loads: Vec<LoadEntry>,
    #[serde(default, rename = "generator")]
    generators: Vec<GeneratorEntry>,
    #[serde(default, rename = "ess")]
    ess: Vec<EssEntry>,
}

fn default_f_base() -> f64 {
    60.0
}

fn default_true() -> bool {
    true
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct LoadEntry {
    #[serde(default)]
    name: Option<String>,
    bus: u32,
    p: f64,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GeneratorEntry {
    #[serde(default)]
    name: Option<String>,
    bus: u32,
    #[serde(default)]
    black_start: bool,
    #[serde(default)]
    p_crank: f64,
    #[serde(default)]
    t_crank: u32,
    #[serde(default)]
    t_ramp: u32,
    ramp: f64,
    #[serde(default)]
    p_min: f64,
    p_max: f64,
    h: f64,
    s_base_mva: f64,
    droop: f64,
    t1: f64,
    t2: f64,
    t3: f64,
    t4: f64,
    t5: f64,
    t6: f64,
    t7: f64,
    k1: f64,
    k3: f64,
    k5: f64,
    k7: f64,
    u_o: f64,
    #[serde(default = "default_true")]
    pfr: bool,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct EssEntry {
    #[serde(default)]
    name: Option<String>,
    bus: u32,
    p_rated: f64,
    e_max: f64,
    e_init: f64,
    eta_con: f64,
    eta_s: f64,
    ramp: f64,
    tau: f64,
}

/// Reads and validates a network file.
pub fn load_network(path: impl AsRef<Path>) -> Result<NetworkModel, NetworkError> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path)
        .map_err(|e| NetworkError::Io(format!("{}: {e}", path.display())))?;
    parse_network(&text)
}

pub fn parse_network(text: &str) -> Result<NetworkModel, NetworkError> {
    let file: NetworkFile = toml::from_str(text).map_err(|e| NetworkError::Parse(e.to_string()))?;
    let scale = match file.power_unit {
        PowerUnit::Pu => 1.0,
        PowerUnit::Mw => {
            if !(file.s_base_mva > 0.0) {
                return Err(NetworkError::Invalid {
                    element: "system".into(),
                    reason: "s_base_mva must be positive".into(),
                });
            }
            1.0 / file.s_base_mva
        }
    };
    let net = NetworkModel {
        buses: file.buses,
        lines: file.lines,
        loads: file
            .loads
            .into_iter()
            .enumerate()
            .map(|(i, l)| Load {
                name: l.name.unwrap_or_else(|| format!("D{}", i + 1)),
                bus: l.bus,
                p: l.p * scale,
            })
            .collect(),
        generators: file
            .generators
            .into_iter()
            .enumerate()
            .map(|(i, g)| GeneratorSpec {
                name: g.name.unwrap_or_else(|| format!("G{}", i + 1)),
                bus: g.bus,
                black_start: g.black_start,
                p_crank: g.p_crank * scale,
                t_crank: g.t_crank,
                t_ramp: g.t_ramp,
                ramp: g.ramp * scale,
                p_min: g.p_min * scale,
                p_max: g.p_max * scale,
                h: g.h,
                s_base: g.s_base_mva,
                droop: g.droop,
                t1: g.t1,
                t2: g.t2,
                t3: g.t3,
                t4: g.t4,
                t5: g.t5,
                t6: g.t6,
                t7: g.t7,
                k1: g.k1,
                k3: g.k3,
                k5: g.k5,
                k7: g.k7,
                u_o: g.u_o,
                pfr: g.pfr,
            })
            .collect(),
        ess: file
            .ess
            .into_iter()
            .enumerate()
            .map(|(i, s)| EssSpec {
                name: s.name.unwrap_or_else(|| format!("S{}", i + 1)),
                bus: s.bus,
                p_rated: s.p_rated * scale,
                e_max: s.e_max * scale,
                e_init: s.e_init * scale,
                eta_con: s.eta_con,
                eta_s: s.eta_s,
                ramp: s.ramp * scale,
                tau: s.tau,
            })
            .collect(),
        s_sys: file.s_base_mva,
        f_base: file.f_base_hz,
        t_a: file.step_minutes,
    };
    net.validate()?;
    Ok(net)
}

/// Serializes a model in per-unit form.
pub fn to_toml_string(net: &NetworkModel) -> String {
    let file = NetworkFile {
        s_base_mva: net.s_sys,
        f_base_hz: net.f_base,
        step_minutes: net.t_a,
        power_unit: PowerUnit::Pu,
        buses: net.buses.clone(),
        lines: net.lines.clone(),
        loads: net
            .loads
            .iter()
            .map(|l| LoadEntry {
                name: Some(l.name.clone()),
                bus: l.bus,
                p: l.p,
            })
            .collect(),
        generators: net
            .generators
            .iter()
            .map(|g| GeneratorEntry {
                name: Some(g.name.clone()),
                bus: g.bus,
                black_start: g.black_start,
                p_crank: g.p_crank,
                t_crank: g.t_crank,
                t_ramp: g.t_ramp,
                ramp: g.ramp,
                p_min: g.p_min,
                p_max: g.p_max,
                h: g.h,
                s_base_mva: g.s_base,
                droop: g.droop,
                t1: g.t1,
                t2: g.t2,
                t3: g.t3,
                t4: g.t4,
                t5: g.t5,
                t6: g.t6,
                t7: g.t7,
                k1: g.k1,
                k3: g.k3,
                k5: g.k5,
                k7: g.k7,
                u_o: g.u_o,
                pfr: g.pfr,
            })
            .collect(),
        ess: net
            .ess
            .iter()
            .map(|s| EssEntry {
                name: Some(s.name.clone()),
                bus: s.bus,
                p_rated: s.p_rated,
                e_max: s.e_max,
                e_init: s.e_init,
                eta_con: s.eta_con,
                eta_s: s.eta_s,
                ramp: s.ramp,
                tau: s.tau,
            })
            .collect(),
    };
    toml::to_string(&file).expect("network model serializes")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::fixtures::two_bus;

    #[test]
    fn serialized_model_loads_back_identical() {
        let net = two_bus();
        let text = to_toml_string(&net);
        assert_eq!(parse_network(&text).unwrap(), net);
    }

    #[test]
    fn megawatt_inputs_are_converted_to_per_unit() {
        let text = r#"
            s_base_mva = 100.0
            step_minutes = 2.0
            power_unit = "mw"
            buses = [1]
            [[load]]
            bus = 1
            p = 12.0
            [[generator]]
            bus = 1
            black_start = true
            ramp = 30.0
            p_max = 100.0
            h = 4.0
            s_base_mva = 100.0
            droop = 20.0
            t1 = 0.2
            t2 = 0.0
            t3 = 0.1
            t4 = 0.3
            t5 = 0.5
            t6 = 0.4
            t7 = 0.3
            k1 = 0.3
            k3 = 0.3
            k5 = 0.4
            k7 = 0.0
            u_o = 0.05
        "#;
        let net = parse_network(text).unwrap();
        assert!((net.loads[0].p - 0.12).abs() < 1e-15);
        assert!((net.generators[0].ramp - 0.3).abs() < 1e-15);
        assert_eq!(net.loads[0].name, "D1");
        assert!(net.generators[0].pfr);
    }

    #[test]
    fn malformed_text_is_a_parse_error() {
        let err = parse_network("s_base_mva = [").unwrap_err();
        assert!(matches!(err, NetworkError::Parse(_)));
    }

    #[test]
    fn unknown_fields_are_rejected() {
        let mut text = to_toml_string(&two_bus());
        text.push_str("\nbogus = 1\n");
        assert!(matches!(parse_network(&text), Err(NetworkError::Parse(_))));
    }
}
