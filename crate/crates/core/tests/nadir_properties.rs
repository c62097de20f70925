use blackstart::grid::fixtures::steam_unit;
use blackstart::nadir::{
    aggregate, linear_bound, max_disturbance_nonlinear, predict_nadir, ramp_validity_check,
    turbine_poly, turbine_transfer, NadirCoeffs,
};
use proptest::prelude::*;

fn coeffs() -> impl Strategy<Value = NadirCoeffs> {
    (
        0.002..0.1f64,
        0.0..0.1f64,
        0.0..0.05f64,
        1.0..20.0f64,
        -0.05..-0.002f64,
        prop::collection::vec(0.0..0.5f64, 0..3),
    )
        .prop_map(|(c1, c2, c3, h_sys, limit, tau)| NadirCoeffs {
            c1,
            c2,
            c3,
            h_sys,
            limit,
            tau,
        })
}

/// Coefficients with small discharge setpoints that keep the radicand
/// positive.
fn coeffs_and_setpoints() -> impl Strategy<Value = (NadirCoeffs, Vec<f64>)> {
    coeffs().prop_flat_map(|c| {
        let n = c.tau.len();
        (Just(c), prop::collection::vec(0.0..0.02f64, n))
    })
}

fn nonlinear(c: &NadirCoeffs, sp: &[f64]) -> f64 {
    max_disturbance_nonlinear(c, sp).unwrap()
}

proptest! {
    #[test]
    fn bound_inverts_the_nadir((c, sp) in coeffs_and_setpoints()) {
        let Ok(g) = max_disturbance_nonlinear(&c, &sp) else { return Ok(()) };
        let p = predict_nadir(&c, g, &sp).unwrap();
        prop_assume!(!p.degenerate);
        prop_assert!((p.nadir - c.limit).abs() < 1e-10);
    }

    #[test]
    fn nadir_deepens_with_the_disturbance(c in coeffs(), a in 0.0..0.3f64, b in 0.0..0.3f64) {
        let sp = vec![0.0; c.tau.len()];
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        let p_lo = predict_nadir(&c, lo, &sp).unwrap();
        let p_hi = predict_nadir(&c, hi, &sp).unwrap();
        prop_assert!(p_hi.nadir <= p_lo.nadir + 1e-15);
    }

    /// The linear bound is the tangent of a concave function, so it lies on
    /// or above the nonlinear bound and touches it at zero setpoint change.
    #[test]
    fn linear_bound_is_the_tangent((c, sp) in coeffs_and_setpoints()) {
        let lin = linear_bound(&c).unwrap();
        let zero = vec![0.0; sp.len()];
        prop_assert!((lin.g0 - nonlinear(&c, &zero)).abs() < 1e-12);
        let Ok(g) = max_disturbance_nonlinear(&c, &sp) else { return Ok(()) };
        let approx = lin.g0 + lin.gs.iter().zip(&sp).map(|(a, b)| a * b).sum::<f64>();
        prop_assert!(approx >= g - 1e-12);
        for i in 0..sp.len() {
            let h = 1e-7;
            let mut e = zero.clone();
            e[i] = h;
            let mut m = zero.clone();
            m[i] = -h;
            let slope = (nonlinear(&c, &e) - nonlinear(&c, &m)) / (2.0 * h);
            prop_assert!((slope - lin.gs[i]).abs() < 1e-6);
        }
    }

    #[test]
    fn aggregation_is_linear(u in 0.001..0.2f64, alpha in 0.1..3.0f64, copies in 1usize..4) {
        let mut g = steam_unit("G", 1, true);
        g.u_o = u;
        let one = aggregate(&[(&g, alpha)]).unwrap();
        let many: Vec<_> = (0..copies).map(|_| (&g, alpha)).collect();
        let sum = aggregate(&many).unwrap();
        let n = copies as f64;
        prop_assert!((sum.0 - n * one.0).abs() < 1e-14);
        prop_assert!((sum.1 - n * one.1).abs() < 1e-14);
        prop_assert!((sum.2 - n * one.2).abs() < 1e-14);
    }

    #[test]
    fn turbine_expansion_matches_the_transfer_function(
        t in prop::array::uniform4(0.0..1.5f64),
        k in prop::array::uniform3(0.05..0.4f64),
    ) {
        let mut g = steam_unit("G", 1, true);
        (g.t4, g.t5, g.t6, g.t7) = (t[0], t[1], t[2], t[3]);
        (g.k1, g.k3, g.k5) = (k[0], k[1], k[2]);
        g.k7 = 1.0 - k[0] - k[1] - k[2];
        let c = turbine_poly(&g);
        let f = |s: f64| turbine_transfer(&g, s);
        let h = 1e-3;
        let d1 = (f(h) - f(-h)) / (2.0 * h);
        let d2 = (f(h) - 2.0 * f(0.0) + f(-h)) / (h * h);
        prop_assert!((c.c1 - f(0.0)).abs() < 1e-12);
        prop_assert!((c.c2 + d1).abs() < 1e-4 * (1.0 + c.c2));
        prop_assert!((c.c3 - d2 / 2.0).abs() < 1e-4 * (1.0 + c.c3));
    }

    #[test]
    fn ramp_validity_is_monotone(r in 0.0..0.5f64, extra in 0.0..0.5f64) {
        let g = steam_unit("G", 1, true);
        if ramp_validity_check(&[&g], &[r]).all_valid() {
            prop_assert!(ramp_validity_check(&[&g], &[r + extra]).all_valid());
        }
    }
}
