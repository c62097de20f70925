//! Writes the first window subproblem of the nine-bus plan in MPS format.
//!
//! Run with `cargo run --example export_mps [output.mps]`; prints to stdout
//! when no path is given.

use blackstart::grid::fixtures;
use blackstart::milp::export_mps;
use blackstart::planner::{first_window, PlannerConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let net = fixtures::ieee9();
    let rm = first_window(&net, &PlannerConfig::default())?;
    eprintln!(
        "window of {} steps: {} variables ({} binary), {} constraints",
        rm.horizon.n,
        rm.model.num_vars(),
        rm.model.num_binaries(),
        rm.model.num_constraints()
    );
    let text = export_mps(&rm.model);
    match std::env::args().nth(1) {
        Some(path) => std::fs::write(path, text)?,
        None => print!("{text}"),
    }
    Ok(())
}
