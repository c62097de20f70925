//! Integrates the frequency response to a single load pick-up and compares
//! the simulated nadir with the closed-form prediction.

use blackstart::dynamics::{
    pfr_steady_share, simulate_step, system_inertia, SimConfig, StepScenario,
};
use blackstart::grid::{fixtures, GenPhase};
use blackstart::nadir::{predict_nadir, NadirCoeffs};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let net = fixtures::ieee9();
    let units: Vec<usize> = (0..net.generators.len()).collect();
    let alpha: Vec<f64> = net.generators.iter().map(|g| g.alpha(net.s_sys)).collect();
    let droop: Vec<f64> = net.generators.iter().map(|g| g.droop).collect();
    let dpe = 20.0 / net.s_sys;
    let scenario = StepScenario {
        h_sys: system_inertia(&net, &units)?,
        ref_change: pfr_steady_share(&droop, &alpha, dpe)?,
        alpha,
        units,
        ess: vec![],
        ess_setpoint: vec![],
        disturbance: dpe,
        config: SimConfig::default(),
    };
    let net = net.without_ess();
    let traj = simulate_step(&scenario, &net)?;
    let coeffs = NadirCoeffs::at_phases(&net, &[GenPhase::Online; 3], net.hz_to_pu(-1.0))?;
    let pred = predict_nadir(&coeffs, dpe, &[])?;
    println!("20 MW pick-up with all units online");
    println!(
        "  simulated nadir {:.4} Hz at {:.2} s",
        net.pu_to_hz(traj.nadir),
        traj.t_nadir
    );
    println!(
        "  predicted nadir {:.4} Hz at {:.2} s",
        net.pu_to_hz(pred.nadir),
        pred.t_nadir
    );
    let last = traj.omega.len() - 1;
    println!(
        "  deviation after {:.0} s: {:.4} Hz",
        traj.time[last],
        net.pu_to_hz(traj.omega[last])
    );
    for (name, p) in traj.unit_names.iter().zip(&traj.p_mech) {
        println!(
            "  {name} mechanical power change {:.4} pu (machine base)",
            p[last]
        );
    }
    Ok(())
}
