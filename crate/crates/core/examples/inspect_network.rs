//! Loads the bundled nine-bus system and prints its elements and incidence
//! structure.
//!
//! Run with `cargo run --example inspect_network [path/to/network.toml]`.

use blackstart::grid::{build_incidence, fixtures, load_network};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let net = match std::env::args().nth(1) {
        Some(path) => load_network(path)?,
        None => fixtures::ieee9(),
    };
    let mw = net.s_sys;
    println!(
        "{} buses, {} lines, {} loads, {} generators, {} storage units",
        net.buses.len(),
        net.lines.len(),
        net.loads.len(),
        net.generators.len(),
        net.ess.len()
    );
    println!("base {mw} MVA, {} Hz, {} min per step", net.f_base, net.t_a);
    for g in &net.generators {
        println!(
            "  {:<4} bus {} {:<6} H {:>4.1} s on {:>5.0} MVA, crank {:>4.1} MW for {} steps, ramp {} steps",
            g.name,
            g.bus,
            if g.black_start { "BSU" } else { "NBSU" },
            g.h,
            g.s_base,
            g.p_crank * mw,
            g.t_crank,
            g.t_ramp
        );
    }
    let total: f64 = net.loads.iter().map(|l| l.p * mw).sum();
    println!("  total load {total:.0} MW in {} blocks", net.loads.len());
    for s in &net.ess {
        println!(
            "  {} bus {} {:.0} MW / {:.0} MWh",
            s.name,
            s.bus,
            s.p_rated * mw,
            s.e_max * mw
        );
    }
    let inc = build_incidence(&net);
    println!("incidence matrices:");
    for (label, m) in [
        ("bus-line", &inc.a),
        ("line", &inc.a_line),
        ("load", &inc.a_load),
        ("generator", &inc.a_gen),
        ("storage", &inc.a_ess),
    ] {
        println!(
            "  {label:<9} incidence {}x{}, {} nonzeros",
            m.rows(),
            m.cols(),
            m.nonzeros()
        );
    }
    Ok(())
}
