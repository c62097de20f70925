//! Plans a frequency-secure restoration of the nine-bus system, checks it
//! against the structural constraints and prints the plan table.

use blackstart::grid::fixtures;
use blackstart::planner::{plan, ConstraintMode, PlannerConfig};
use blackstart::report::plan_table_csv;
use blackstart::restoration::check_plan;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let net = fixtures::ieee9();
    let config = PlannerConfig {
        ess: false,
        ..PlannerConfig::with_mode(ConstraintMode::Nadir)
    };
    let out = plan(&net, &config)?;
    let report = check_plan(&out.network, &out.plan, 1e-6)?;
    println!(
        "{} steps ({} min), complete: {}, structural violations: {}",
        out.plan.horizon(),
        out.plan.restoration_minutes(&out.network),
        out.plan.complete,
        report.violations.len()
    );
    let solve_ms: f64 = out.log.iter().map(|l| l.solve_ms).sum();
    println!("{} windows solved in {solve_ms:.0} ms", out.log.len());
    print!("{}", plan_table_csv(&out.network, &out.plan));
    Ok(())
}
