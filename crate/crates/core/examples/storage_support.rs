//! Shows how the storage unit shortens the nadir-constrained restoration:
//! plans with and without it, then lists the storage dispatch.

use blackstart::dynamics::{simulate_plan, SimConfig};
use blackstart::grid::fixtures;
use blackstart::planner::{plan, PlannerConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let net = fixtures::ieee9();
    let mut steps = vec![];
    for ess in [false, true] {
        let config = PlannerConfig {
            ess,
            ..PlannerConfig::default()
        };
        let out = plan(&net, &config)?;
        let sim = simulate_plan(
            &out.plan,
            &out.network,
            out.network.hz_to_pu(config.limit_hz),
            SimConfig::default(),
        )?;
        println!(
            "{:<10} {} steps ({} min), worst nadir {:.3} Hz",
            config.label(),
            out.plan.horizon(),
            out.plan.restoration_minutes(&out.network),
            out.network.pu_to_hz(sim.worst_nadir())
        );
        steps.push(out.plan.horizon());
        if ess {
            let mw = net.s_sys;
            for (k, s) in out.plan.steps.iter().enumerate().skip(1) {
                println!(
                    "  step {k:>2}: pick-up {:>5.1} MW, storage output {:>5.1} MW (change {:>5.1}), stored {:>5.2} MWh",
                    s.imbalance * mw,
                    s.p_ess[0] * mw,
                    s.ess_setpoint_change[0] * mw,
                    s.soc[0] * mw
                );
            }
        }
    }
    let saved = 1.0 - steps[1] as f64 / steps[0] as f64;
    println!(
        "storage saves {:.0} % of the restoration time",
        100.0 * saved
    );
    Ok(())
}
