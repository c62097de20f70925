//! Acceptance suite: one pass/fail line per criterion, pinned tolerances.
//!
//! Runs without the libtest harness so the summary lines are always shown.

mod support;

use std::process::ExitCode;
use std::time::{Duration, Instant};

use blackstart::dynamics::{
    pfr_steady_share, simulate_plan, simulate_step, system_inertia, PlanSimulation, SimConfig,
    StepScenario,
};
use blackstart::grid::fixtures::{battery, ieee9, steam_unit};
use blackstart::grid::{GenPhase, NetworkModel, RestorationPlan};
use blackstart::nadir::{
    max_disturbance_nonlinear, predict_nadir, ramp_validity_check, turbine_poly, turbine_transfer,
    NadirCoeffs,
};
use blackstart::planner::{plan, realized_coefficients, ConstraintMode, PlannerConfig};
use blackstart::restoration::check_plan;
use blackstart::solver::{solve_milp, SolveStatus, SolverConfig};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use support::enumerate::{enumerate_milp, free_binaries};
use support::nets::{random_tiny_net, random_window, RandomMode};

const ORACLE_MODELS: usize = 60;
const ORACLE_MAX_BINARIES: usize = 12;
const ORACLE_TOL: f64 = 1e-6;
const FEAS_EPS: f64 = 1e-6;
const NADIR_SCENARIOS: usize = 120;
const NADIR_REL_TOL: f64 = 0.20;
const NADIR_ABS_TOL: f64 = 0.005;
const SHALLOW_NADIR: f64 = 0.01;
const INVERSE_TOL: f64 = 1e-10;
const TURBINE_SETS: usize = 20;
const TURBINE_TOL: f64 = 1e-6;
const CONVERGENCE_TOL: f64 = 1e-4;
const LIMIT_HZ: f64 = -1.0;

struct Outcome {
    id: usize,
    name: &'static str,
    pass: bool,
    detail: String,
    elapsed: Duration,
}

/// Planned and simulated fixture configuration.
struct FixtureRun {
    label: String,
    net: NetworkModel,
    plan: RestorationPlan,
    sim: PlanSimulation,
}

fn fixture_runs() -> Vec<FixtureRun> {
    let base = ieee9();
    let configs = [
        (ConstraintMode::None, false),
        (ConstraintMode::FivePercent, false),
        (ConstraintMode::Nadir, false),
        (ConstraintMode::Nadir, true),
    ];
    configs
        .iter()
        .map(|&(mode, ess)| {
            let cfg = PlannerConfig {
                mode,
                ess,
                limit_hz: LIMIT_HZ,
                ..PlannerConfig::default()
            };
            let out = plan(&base, &cfg).expect("fixture plan");
            let sim = simulate_plan(
                &out.plan,
                &out.network,
                out.network.hz_to_pu(LIMIT_HZ),
                SimConfig::default(),
            )
            .expect("fixture simulation");
            FixtureRun {
                label: cfg.label(),
                net: out.network,
                plan: out.plan,
                sim,
            }
        })
        .collect()
}

fn worst_hz(r: &FixtureRun) -> f64 {
    r.net.pu_to_hz(r.sim.worst_nadir())
}

fn count_below(r: &FixtureRun, hz: f64) -> usize {
    r.sim
        .steps
        .iter()
        .filter(|s| r.net.pu_to_hz(s.nadir) < hz)
        .count()
}

fn criterion_oracle() -> (bool, String) {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0001);
    let modes = [RandomMode::None, RandomMode::FivePercent, RandomMode::Nadir];
    let (mut done, mut worst, mut mismatches) = (0, 0.0f64, 0);
    while done < ORACLE_MODELS {
        let net = random_tiny_net(&mut rng);
        if net.validate().is_err() {
            continue;
        }
        let n = rng.gen_range(1..=3);
        let mode = modes[rng.gen_range(0..modes.len())];
        let rm = random_window(&mut rng, &net, n, mode);
        let free = free_binaries(&rm.model);
        if free == 0 || free > ORACLE_MAX_BINARIES {
            continue;
        }
        done += 1;
        let reference = enumerate_milp(&rm.model);
        let sol = solve_milp(&rm.model, &SolverConfig::default()).expect("solver runs");
        match (reference, sol.status) {
            (Some(r), SolveStatus::Optimal) => {
                let diff = (r - sol.objective).abs() / r.abs().max(1.0);
                worst = worst.max(diff);
                if diff > ORACLE_TOL {
                    mismatches += 1;
                }
            }
            (None, SolveStatus::Infeasible) => {}
            _ => mismatches += 1,
        }
    }
    (
        mismatches == 0,
        format!("{done} models, {mismatches} mismatches, max relative gap {worst:.1e}"),
    )
}

fn criterion_feasibility(runs: &[FixtureRun]) -> (bool, String) {
    let mut parts = Vec::new();
    let mut ok = true;
    for r in runs {
        let report = check_plan(&r.net, &r.plan, FEAS_EPS).expect("plan checks");
        ok &= report.is_feasible();
        parts.push(format!("{} {}", r.label, report.violations.len()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0002);
    let mut random_plans = 0;
    while random_plans < 10 {
        let net = random_tiny_net(&mut rng);
        if net.validate().is_err() {
            continue;
        }
        let mode = ConstraintMode::ALL[rng.gen_range(0..3)];
        let cfg = PlannerConfig {
            mode,
            horizon: rng.gen_range(1..=3),
            ..PlannerConfig::default()
        };
        let Ok(out) = plan(&net, &cfg) else { continue };
        random_plans += 1;
        let report = check_plan(&out.network, &out.plan, FEAS_EPS).expect("plan checks");
        ok &= report.is_feasible();
    }
    (
        ok,
        format!(
            "violations per fixture plan: {}; {random_plans} random plans checked",
            parts.join(", ")
        ),
    )
}

/// A single- or multi-machine step scenario with every unit online.
struct NadirCase {
    net: NetworkModel,
    scenario: StepScenario,
    coeffs: NadirCoeffs,
    setpoints: Vec<f64>,
}

/// Sampling ranges keep the governor loops well damped: lead-lag with
/// `T2 = 2 T1` and a loop gain `K / 2H` of at most 3 per unit. Weaker
/// damping lets the rate-limited loop oscillate and the deepest swing then
/// comes long after the first one, outside the ramp model.
fn sample_nadir_case<R: Rng>(rng: &mut R) -> Option<NadirCase> {
    let units = rng.gen_range(1..=3);
    let mut net = NetworkModel {
        buses: vec![1],
        lines: vec![],
        loads: vec![],
        generators: vec![],
        ess: vec![],
        s_sys: 100.0,
        f_base: 60.0,
        t_a: 2.0,
    };
    for i in 0..units {
        let mut g = steam_unit(&format!("G{}", i + 1), 1, i == 0);
        g.s_base = rng.gen_range(50.0..250.0);
        g.h = rng.gen_range(3.0..6.0);
        g.droop = rng.gen_range(10.0..18.0);
        g.t1 = rng.gen_range(0.4..0.6);
        g.t2 = 2.0 * g.t1;
        g.t3 = rng.gen_range(0.05..0.2);
        g.t4 = rng.gen_range(0.1..0.4);
        g.t5 = rng.gen_range(0.2..0.6);
        g.t6 = rng.gen_range(0.2..0.5);
        g.t7 = rng.gen_range(0.1..0.4);
        g.k1 = rng.gen_range(0.2..0.4);
        g.k3 = rng.gen_range(0.2..0.4);
        g.k5 = 1.0 - g.k1 - g.k3;
        g.k7 = 0.0;
        g.u_o = rng.gen_range(0.005..0.02);
        net.generators.push(g);
    }
    if rng.gen_bool(0.3) {
        let mut s = battery("S1", 1);
        s.tau = rng.gen_range(0.1..0.3);
        net.ess.push(s);
    }
    let total: f64 = net.generators.iter().map(|g| g.s_base).sum::<f64>() / net.s_sys;
    let dpe = rng.gen_range(0.02..0.12) * total;
    let setpoints: Vec<f64> = net
        .ess
        .iter()
        .map(|_| rng.gen_range(0.0..0.5) * dpe.min(0.1))
        .collect();
    let all: Vec<usize> = (0..units).collect();
    let alpha: Vec<f64> = net.generators.iter().map(|g| g.alpha(net.s_sys)).collect();
    let droop: Vec<f64> = net.generators.iter().map(|g| g.droop).collect();
    let refs = pfr_steady_share(&droop, &alpha, dpe - setpoints.iter().sum::<f64>()).ok()?;
    let gens: Vec<_> = net.generators.iter().collect();
    if !ramp_validity_check(&gens, &refs).all_valid() {
        return None;
    }
    let limit = net.hz_to_pu(rng.gen_range(-2.0..-0.3));
    let coeffs = NadirCoeffs::at_phases(&net, &vec![GenPhase::Online; units], limit).ok()?;
    let scenario = StepScenario {
        h_sys: system_inertia(&net, &all).ok()?,
        units: all,
        alpha,
        ref_change: refs,
        ess: (0..net.ess.len()).collect(),
        ess_setpoint: setpoints.clone(),
        disturbance: dpe,
        config: SimConfig::default(),
    };
    Some(NadirCase {
        net,
        scenario,
        coeffs,
        setpoints,
    })
}

fn nadir_cases() -> Vec<NadirCase> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0003);
    let mut cases = Vec::new();
    while cases.len() < NADIR_SCENARIOS {
        if let Some(c) = sample_nadir_case(&mut rng) {
            cases.push(c);
        }
    }
    cases
}

fn criterion_nadir_vs_ode(cases: &[NadirCase]) -> (bool, String) {
    let (mut fails, mut worst_rel, mut multi) = (0, 0.0f64, 0);
    for c in cases {
        let sim = simulate_step(&c.scenario, &c.net)
            .expect("simulation runs")
            .nadir;
        let pred = predict_nadir(&c.coeffs, c.scenario.disturbance, &c.setpoints)
            .expect("prediction")
            .nadir;
        multi += usize::from(c.net.generators.len() > 1);
        let err = (pred - sim).abs();
        let ok = if sim.abs() < SHALLOW_NADIR {
            err <= NADIR_ABS_TOL
        } else {
            let rel = err / sim.abs();
            worst_rel = worst_rel.max(rel);
            rel <= NADIR_REL_TOL
        };
        fails += usize::from(!ok);
    }
    (
        fails == 0,
        format!(
            "{} scenarios ({multi} multi-machine), {fails} outside tolerance, max relative error {:.1} %",
            cases.len(),
            100.0 * worst_rel
        ),
    )
}

fn criterion_inverse(cases: &[NadirCase]) -> (bool, String) {
    let mut worst = 0.0f64;
    for c in cases {
        let g = max_disturbance_nonlinear(&c.coeffs, &c.setpoints).expect("bound exists");
        let p = predict_nadir(&c.coeffs, g, &c.setpoints).expect("prediction");
        worst = worst.max((p.nadir - c.coeffs.limit).abs());
    }
    (
        worst <= INVERSE_TOL,
        format!(
            "{} scenarios, max |nadir - limit| {worst:.1e} pu",
            cases.len()
        ),
    )
}

fn criterion_modes(runs: &[FixtureRun]) -> (bool, String) {
    let (none, five, nadir) = (&runs[0], &runs[1], &runs[2]);
    let a = count_below(none, -2.5);
    let b = count_below(five, -1.0);
    let c = count_below(nadir, -1.05);
    let ok = a >= 1
        && b >= 1
        && c == 0
        && none.plan.complete
        && five.plan.complete
        && nadir.plan.complete;
    (
        ok,
        format!(
            "none worst {:.2} Hz ({a} steps < -2.5), five-percent worst {:.2} Hz ({b} steps < -1), nadir worst {:.3} Hz ({c} steps < -1.05)",
            worst_hz(none),
            worst_hz(five),
            worst_hz(nadir)
        ),
    )
}

fn criterion_ess(runs: &[FixtureRun]) -> (bool, String) {
    let (without, with) = (&runs[2], &runs[3]);
    let (t0, t1) = (without.plan.horizon(), with.plan.horizon());
    let saving = 1.0 - t1 as f64 / t0 as f64;
    let worst = worst_hz(with);
    let ok =
        with.plan.complete && without.plan.complete && t1 < t0 && saving >= 0.2 && worst >= -1.2;
    (
        ok,
        format!(
            "{t0} -> {t1} steps ({:.0} % fewer), worst nadir with storage {worst:.3} Hz",
            100.0 * saving
        ),
    )
}

fn criterion_monotone_bound(runs: &[FixtureRun]) -> (bool, String) {
    let mut events = 0;
    let mut drops = Vec::new();
    for r in runs {
        let bounds =
            realized_coefficients(&r.plan, &r.net, r.net.hz_to_pu(LIMIT_HZ)).expect("bounds");
        for k in 2..=r.plan.horizon() {
            let synced = |s: usize| {
                r.plan.steps[s]
                    .phase
                    .iter()
                    .filter(|p| p.is_synchronized())
                    .count()
            };
            let online = |s: usize| {
                r.plan.steps[s]
                    .phase
                    .iter()
                    .filter(|p| p.is_online())
                    .count()
            };
            if synced(k) > synced(k - 1) || online(k) > online(k - 1) {
                events += 1;
                if bounds[k - 1].g0 < bounds[k - 2].g0 {
                    drops.push(format!("{} step {k}", r.label));
                }
            }
        }
    }
    (
        drops.is_empty(),
        format!(
            "{events} synchronization events, {} decreases {:?}",
            drops.len(),
            drops
        ),
    )
}

/// Richardson-extrapolated central differences at `s = 0`.
fn derivatives(f: impl Fn(f64) -> f64) -> (f64, f64, f64) {
    let d1 = |h: f64| (f(h) - f(-h)) / (2.0 * h);
    let d2 = |h: f64| (f(h) - 2.0 * f(0.0) + f(-h)) / (h * h);
    let h = 1e-2;
    let g1 = (4.0 * d1(h / 2.0) - d1(h)) / 3.0;
    let g2 = (4.0 * d2(h / 2.0) - d2(h)) / 3.0;
    (f(0.0), g1, g2)
}

fn criterion_turbine() -> (bool, String) {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0008);
    let mut worst = 0.0f64;
    for _ in 0..TURBINE_SETS {
        let mut g = steam_unit("G", 1, true);
        g.t4 = rng.gen_range(0.05..1.0);
        g.t5 = rng.gen_range(0.05..1.0);
        g.t6 = rng.gen_range(0.05..1.0);
        g.t7 = rng.gen_range(0.05..1.0);
        g.k1 = rng.gen_range(0.1..0.4);
        g.k3 = rng.gen_range(0.1..0.3);
        g.k5 = rng.gen_range(0.1..0.3);
        g.k7 = 1.0 - g.k1 - g.k3 - g.k5;
        let c = turbine_poly(&g);
        let (g0, g1, g2) = derivatives(|s| turbine_transfer(&g, s));
        for (a, b) in [(c.c1, g0), (c.c2, -g1), (c.c3, g2 / 2.0)] {
            worst = worst.max((a - b).abs() / b.abs());
        }
    }
    (
        worst <= TURBINE_TOL,
        format!("{TURBINE_SETS} parameter sets, max relative error {worst:.1e}"),
    )
}

fn criterion_convergence(runs: &[FixtureRun]) -> (bool, String) {
    let fine = SimConfig {
        dt: SimConfig::default().dt / 2.0,
        ..SimConfig::default()
    };
    let mut worst = 0.0f64;
    let mut steps = 0;
    for r in runs {
        let halved = simulate_plan(&r.plan, &r.net, r.sim.limit, fine).expect("simulation");
        for (a, b) in r.sim.steps.iter().zip(&halved.steps) {
            assert_eq!(a.step, b.step);
            worst = worst.max((a.nadir - b.nadir).abs());
            steps += 1;
        }
    }
    (
        worst < CONVERGENCE_TOL,
        format!("{steps} simulated steps, max nadir change {worst:.1e} pu"),
    )
}

fn timed(
    id: usize,
    name: &'static str,
    budget: Duration,
    f: impl FnOnce() -> (bool, String),
) -> Outcome {
    let start = Instant::now();
    let (pass, detail) = f();
    let elapsed = start.elapsed();
    let within = elapsed <= budget;
    let detail = if within {
        detail
    } else {
        format!("{detail}; exceeded {budget:?}")
    };
    Outcome {
        id,
        name,
        pass: pass && within,
        detail,
        elapsed,
    }
}

fn main() -> ExitCode {
    let minutes = |m: u64| Duration::from_secs(60 * m);
    let mut out = Vec::new();
    out.push(timed(
        1,
        "MILP oracle equivalence",
        minutes(1),
        criterion_oracle,
    ));

    let start = Instant::now();
    let runs = fixture_runs();
    let planning = start.elapsed();
    out.push(timed(2, "plan constraint feasibility", minutes(10), || {
        criterion_feasibility(&runs)
    }));

    let cases = nadir_cases();
    out.push(timed(3, "nadir formula vs ODE", minutes(2), || {
        criterion_nadir_vs_ode(&cases)
    }));
    out.push(timed(4, "inverse consistency", minutes(1), || {
        criterion_inverse(&cases)
    }));
    out.push(timed(
        5,
        "constraint mode ordering",
        minutes(10).saturating_sub(planning),
        || criterion_modes(&runs),
    ));
    out.push(timed(
        6,
        "storage benefit",
        minutes(10).saturating_sub(planning),
        || criterion_ess(&runs),
    ));
    out.push(timed(
        7,
        "monotone bound at synchronization",
        minutes(1),
        || criterion_monotone_bound(&runs),
    ));
    out.push(timed(
        8,
        "turbine coefficient derivatives",
        minutes(1),
        criterion_turbine,
    ));
    out.push(timed(9, "integrator convergence", minutes(5), || {
        criterion_convergence(&runs)
    }));

    println!(
        "fixture planning and simulation took {:.1} s",
        planning.as_secs_f64()
    );
    for o in &out {
        println!(
            "criterion {} {:<36} {} ({:.2} s) {}",
            o.id,
            o.name,
            if o.pass { "PASS" } else { "FAIL" },
            o.elapsed.as_secs_f64(),
            o.detail
        );
    }
    let failed = out.iter().filter(|o| !o.pass).count();
    println!(
        "acceptance: {} of {} criteria passed",
        out.len() - failed,
        out.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
