//! Bundled networks for tests, examples and the acceptance suite.
//!
//! The 9-bus case follows the IEEE 9-bus topology and reactances. Its load
//! blocks, start-up data and turbine-governor parameters are stand-in values
//! chosen for this project; they are not taken from any published data set.

use super::file::parse_network;
use super::network::{EssSpec, GeneratorSpec, Line, Load, NetworkModel};

/// TOML text of the modified 9-bus restoration case.
pub const IEEE9_TOML: &str = include_str!("../../data/ieee9_restoration.toml");

/// Modified IEEE 9-bus case with one black-start unit, two non-black-start
/// units and a 10 MW / 50 MWh storage unit at bus 5.
pub fn ieee9() -> NetworkModel {
    parse_network(IEEE9_TOML).expect("bundled 9-bus fixture is valid")
}

/// Steam unit template with moderate turbine time constants.
pub fn steam_unit(name: &str, bus: u32, black_start: bool) -> GeneratorSpec {
    GeneratorSpec {
        name: name.to_string(),
        bus,
        black_start,
        p_crank: if black_start { 0.0 } else { 0.05 },
        t_crank: if black_start { 0 } else { 1 },
        t_ramp: if black_start { 0 } else { 1 },
        ramp: 0.3,
        p_min: 0.0,
        p_max: 1.0,
        h: 4.0,
        s_base: 100.0,
        droop: 20.0,
        t1: 0.2,
        t2: 0.0,
        t3: 0.1,
        t4: 0.3,
        t5: 0.5,
        t6: 0.4,
        t7: 0.3,
        k1: 0.3,
        k3: 0.3,
        k5: 0.4,
        k7: 0.0,
        u_o: 0.05,
        pfr: true,
    }
}

pub fn battery(name: &str, bus: u32) -> EssSpec {
    EssSpec {
        name: name.to_string(),
        bus,
        p_rated: 0.1,
        e_max: 0.5,
        e_init: 0.25,
        eta_con: 0.95,
        eta_s: 0.95,
        ramp: 0.1,
        tau: 0.2,
    }
}

/// One bus holding only the black-start unit.
pub fn single_bus() -> NetworkModel {
    NetworkModel {
        buses: vec![1],
        lines: vec![],
        loads: vec![],
        generators: vec![steam_unit("G1", 1, true)],
        ess: vec![],
        s_sys: 100.0,
        f_base: 60.0,
        t_a: 2.0,
    }
}

/// Two buses joined by one line; black-start unit at bus 1, a
/// non-black-start unit and a 0.1 pu load at bus 2.
pub fn two_bus() -> NetworkModel {
    NetworkModel {
        buses: vec![1, 2],
        lines: vec![Line {
            from: 1,
            to: 2,
            x: 0.1,
        }],
        loads: vec![Load {
            name: "D1".into(),
            bus: 2,
            p: 0.1,
        }],
        generators: vec![steam_unit("G1", 1, true), steam_unit("G2", 2, false)],
        ess: vec![],
        s_sys: 100.0,
        f_base: 60.0,
        t_a: 2.0,
    }
}

/// Three-bus radial feeder with two loads and a storage unit at the far end.
pub fn three_bus_with_ess() -> NetworkModel {
    NetworkModel {
        buses: vec![1, 2, 3],
        lines: vec![
            Line {
                from: 1,
                to: 2,
                x: 0.08,
            },
            Line {
                from: 2,
                to: 3,
                x: 0.12,
            },
        ],
        loads: vec![
            Load {
                name: "D1".into(),
                bus: 2,
                p: 0.04,
            },
            Load {
                name: "D2".into(),
                bus: 3,
                p: 0.06,
            },
        ],
        generators: vec![steam_unit("G1", 1, true)],
        ess: vec![battery("S1", 3)],
        s_sys: 100.0,
        f_base: 60.0,
        t_a: 2.0,
    }
}
