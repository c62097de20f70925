//! Plans the nine-bus restoration under each frequency constraint and
//! simulates every step: no constraint, the 5 % pick-up rule and the nadir
//! bound.

use blackstart::dynamics::SimConfig;
use blackstart::grid::fixtures;
use blackstart::planner::{compare_plans, ConstraintMode, PlannerConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let net = fixtures::ieee9();
    let configs: Vec<PlannerConfig> = ConstraintMode::ALL
        .into_iter()
        .map(|mode| PlannerConfig {
            ess: false,
            ..PlannerConfig::with_mode(mode)
        })
        .collect();
    let rows = compare_plans(&net, &configs, SimConfig::default())?;
    println!(
        "{:<14} {:>5} {:>7} {:>12} {:>10}",
        "mode", "steps", "minutes", "worst (Hz)", "violations"
    );
    for r in rows {
        println!(
            "{:<14} {:>5} {:>7.0} {:>12.3} {:>10}",
            r.label,
            r.steps,
            r.minutes,
            r.worst_nadir_hz,
            r.violations.len()
        );
    }
    Ok(())
}
