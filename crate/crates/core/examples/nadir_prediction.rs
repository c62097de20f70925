//! Closed-form nadir prediction for the nine-bus system with every unit
//! online: predicted nadir, largest admissible disturbance and its linear
//! storage correction.

use blackstart::grid::{fixtures, GenPhase};
use blackstart::nadir::{
    linear_bound, max_disturbance_nonlinear, predict_nadir, turbine_poly, NadirCoeffs,
};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let net = fixtures::ieee9();
    let limit = net.hz_to_pu(-1.0);
    for g in &net.generators {
        let t = turbine_poly(g);
        println!(
            "{}: turbine c1 {:.3} c2 {:.4} c3 {:.5}",
            g.name, t.c1, t.c2, t.c3
        );
    }
    let phases = vec![GenPhase::Online; net.generators.len()];
    let c = NadirCoeffs::at_phases(&net, &phases, limit)?;
    println!(
        "aggregate C1 {:.5} C2 {:.6} C3 {:.7}, H_sys {:.3} s",
        c.c1, c.c2, c.c3, c.h_sys
    );

    let no_ess = vec![0.0; net.ess.len()];
    for mw in [5.0, 10.0, 20.0, 40.0] {
        let p = predict_nadir(&c, mw / net.s_sys, &no_ess)?;
        println!(
            "  {mw:>4} MW pick-up: nadir {:.3} Hz at {:.2} s",
            net.pu_to_hz(p.nadir),
            p.t_nadir
        );
    }
    let g_max = max_disturbance_nonlinear(&c, &no_ess)?;
    let lin = linear_bound(&c)?;
    println!("largest pick-up for -1 Hz: {:.2} MW", g_max * net.s_sys);
    for (s, gs) in net.ess.iter().zip(&lin.gs) {
        println!(
            "  each MW of extra {} output admits {gs:.3} MW more load",
            s.name
        );
    }
    Ok(())
}
