use blackstart::dynamics::{
    pfr_steady_share, simulate_step, system_inertia, SimConfig, StepScenario,
};
use blackstart::grid::fixtures::{battery, two_bus};
use blackstart::grid::{initial_state, GenPhase, NetworkModel};
use blackstart::nadir::{predict_nadir, NadirCoeffs};
use proptest::prelude::*;

/// Two-unit system with a storage unit and a well-damped governor loop.
fn damped_net(h: f64, droop: f64) -> NetworkModel {
    let mut net = two_bus();
    for g in &mut net.generators {
        g.h = h;
        g.droop = droop;
        g.t1 = 0.5;
        g.t2 = 1.0;
        g.u_o = 0.01;
    }
    net.ess.push(battery("S1", 2));
    net
}

fn scenario(net: &NetworkModel, dpe: f64, dps: f64) -> StepScenario {
    let units = vec![0, 1];
    let alpha: Vec<f64> = net.generators.iter().map(|g| g.alpha(net.s_sys)).collect();
    let droop: Vec<f64> = net.generators.iter().map(|g| g.droop).collect();
    StepScenario {
        h_sys: system_inertia(net, &units).unwrap(),
        ref_change: pfr_steady_share(&droop, &alpha, dpe - dps).unwrap(),
        alpha,
        units,
        ess: vec![0],
        ess_setpoint: vec![dps],
        disturbance: dpe,
        config: SimConfig::default(),
    }
}

#[test]
fn inertia_counts_ramping_units_but_response_does_not() {
    let net = two_bus();
    let mut state = initial_state(&net);
    state.phase = vec![GenPhase::Online, GenPhase::Ramping];
    state.imbalance = 0.05;
    let s = StepScenario::from_state(&net, &state, SimConfig::default()).unwrap();
    assert_eq!(s.h_sys, system_inertia(&net, &[0, 1]).unwrap());
    assert_eq!(s.units, vec![0]);
    state.phase[1] = GenPhase::Cranking;
    let s = StepScenario::from_state(&net, &state, SimConfig::default()).unwrap();
    assert_eq!(s.h_sys, system_inertia(&net, &[0]).unwrap());
}

#[test]
fn zero_input_gives_a_flat_trajectory() {
    let net = damped_net(4.0, 15.0);
    let t = simulate_step(&scenario(&net, 0.0, 0.0), &net).unwrap();
    assert!(t.omega.iter().all(|w| *w == 0.0));
    assert_eq!(t.nadir, 0.0);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn recorded_minimum_is_the_nadir(h in 3.0..6.0f64, droop in 10.0..18.0f64, dpe in 0.01..0.2f64) {
        let net = damped_net(h, droop);
        let t = simulate_step(&scenario(&net, dpe, 0.0), &net).unwrap();
        prop_assert_eq!(t.recorded_min(), t.nadir);
        let at = t.omega.iter().position(|w| *w == t.nadir).unwrap();
        prop_assert!((t.time[at] - t.t_nadir).abs() < 1e-12);
        prop_assert!(t.time.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn storage_support_raises_the_nadir(h in 3.0..6.0f64, dpe in 0.05..0.2f64, share in 0.1..0.5f64) {
        let net = damped_net(h, 15.0);
        let bare = simulate_step(&scenario(&net, dpe, 0.0), &net).unwrap();
        let dps = (share * dpe).min(net.ess[0].p_rated);
        let helped = simulate_step(&scenario(&net, dpe, dps), &net).unwrap();
        prop_assert!(helped.nadir > bare.nadir);
    }

    #[test]
    fn prediction_tracks_simulation(h in 3.0..6.0f64, droop in 10.0..18.0f64, dpe in 0.05..0.2f64, share in 0.0..0.3f64) {
        let net = damped_net(h, droop);
        let dps = (share * dpe).min(net.ess[0].p_rated);
        let sim = simulate_step(&scenario(&net, dpe, dps), &net).unwrap();
        let c = NadirCoeffs::at_phases(&net, &[GenPhase::Online, GenPhase::Online], -1.0).unwrap();
        let pred = predict_nadir(&c, dpe, &[dps]).unwrap();
        prop_assert!((pred.nadir - sim.nadir).abs() <= 0.2 * sim.nadir.abs().max(0.025));
    }

    #[test]
    fn halving_the_step_leaves_the_nadir(h in 3.0..6.0f64, dpe in 0.01..0.2f64) {
        let net = damped_net(h, 15.0);
        let coarse = simulate_step(&scenario(&net, dpe, 0.0), &net).unwrap();
        let mut fine = scenario(&net, dpe, 0.0);
        fine.config.dt /= 2.0;
        let fine = simulate_step(&fine, &net).unwrap();
        prop_assert!((coarse.nadir - fine.nadir).abs() < 1e-4);
    }
}
