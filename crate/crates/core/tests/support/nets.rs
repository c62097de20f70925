//! Random tiny restoration networks for oracle comparisons.

use blackstart::grid::fixtures::{battery, steam_unit};
use blackstart::grid::{initial_state, FrozenBound, Line, Load, NetworkModel, RestorationPlan};
use blackstart::restoration::{HorizonSpec, ObjectiveWeights, RestorationModel};
use rand::Rng;

/// Radial feeder with one to three buses, a black-start unit at the first
/// bus, optionally a second unit, up to two loads and optionally storage.
pub fn random_tiny_net<R: Rng>(rng: &mut R) -> NetworkModel {
    let nb = rng.gen_range(1..=3u32);
    let buses: Vec<u32> = (1..=nb).collect();
    let lines = (1..nb)
        .map(|b| Line {
            from: b,
            to: b + 1,
            x: rng.gen_range(0.05..0.3),
        })
        .collect();
    let loads = (0..rng.gen_range(0..=2))
        .map(|i| Load {
            name: format!("D{}", i + 1),
            bus: rng.gen_range(1..=nb),
            p: rng.gen_range(0.01..0.2),
        })
        .collect();
    let mut bsu = steam_unit("G1", 1, true);
    bsu.p_max = rng.gen_range(0.2..1.0);
    bsu.ramp = rng.gen_range(0.05..0.4);
    let mut generators = vec![bsu];
    if rng.gen_bool(0.4) {
        let mut g = steam_unit("G2", rng.gen_range(1..=nb), false);
        g.t_crank = rng.gen_range(0..=1);
        g.t_ramp = rng.gen_range(0..=1);
        g.p_crank = rng.gen_range(0.0..0.05);
        g.ramp = rng.gen_range(0.1..0.4);
        generators.push(g);
    }
    let ess = if rng.gen_bool(0.3) {
        vec![battery("S1", rng.gen_range(1..=nb))]
    } else {
        vec![]
    };
    NetworkModel {
        buses,
        lines,
        loads,
        generators,
        ess,
        s_sys: 100.0,
        f_base: 60.0,
        t_a: 2.0,
    }
}

/// Frequency constraint attached to a random window.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RandomMode {
    None,
    FivePercent,
    Nadir,
}

/// Window model of length `n` from the black-start state with random
/// objective weights and the given frequency constraint.
pub fn random_window<R: Rng>(
    rng: &mut R,
    net: &NetworkModel,
    n: usize,
    mode: RandomMode,
) -> RestorationModel {
    let mut w = ObjectiveWeights::default_for(net);
    for v in w
        .gen
        .iter_mut()
        .chain(&mut w.load)
        .chain(&mut w.line)
        .chain(&mut w.ess)
    {
        *v *= rng.gen_range(0.5..1.5);
    }
    let prefix = RestorationPlan::new(initial_state(net));
    let horizon = HorizonSpec::new(net, &prefix, n, w).expect("valid window");
    let mut rm = RestorationModel::build(net, horizon).expect("model builds");
    match mode {
        RandomMode::None => {}
        RandomMode::FivePercent => rm.add_five_percent_rule(net).expect("rule builds"),
        RandomMode::Nadir => {
            let bounds: Vec<FrozenBound> = (0..n)
                .map(|_| FrozenBound {
                    g0: rng.gen_range(0.02..0.2),
                    gs: net.ess.iter().map(|_| rng.gen_range(0.5..1.0)).collect(),
                })
                .collect();
            rm.add_nadir_constraints(net, &bounds)
                .expect("bounds build");
        }
    }
    rm
}
