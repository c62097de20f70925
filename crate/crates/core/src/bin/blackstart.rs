use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use blackstart::dynamics::{simulate_plan, SimConfig};
use blackstart::grid::{fixtures, load_network, NetworkModel};
use blackstart::milp::export_mps;
use blackstart::planner::{self, compare_plans, first_window, ConstraintMode, PlannerConfig};
use blackstart::report::{
    check_plan_matches, comparison_csv, iteration_log_csv, plan_table_csv, read_plan,
    simulation_summary_csv, trajectory_file_name, ArtifactWriter, ManifestConfig,
};

#[derive(Parser)]
#[command(
    name = "blackstart",
    version,
    about = "Frequency-secure black-start restoration planning"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a restoration plan and write the plan table.
    Plan(Common),
    /// Simulate the frequency response of every step of a plan.
    Simulate {
        #[command(flatten)]
        common: Common,
        /// Plan written by `plan`; planned on the fly when omitted.
        #[arg(long)]
        plan: Option<PathBuf>,
    },
    /// Plan and simulate several configurations and tabulate them.
    Compare {
        #[command(flatten)]
        common: CommonBase,
        /// Constraint modes to compare (repeatable; default all).
        #[arg(long, value_enum)]
        mode: Vec<Mode>,
        /// Storage settings to compare (repeatable; default on).
        #[arg(long, value_enum)]
        ess: Vec<Switch>,
    },
    /// Write the first window subproblem in MPS format.
    ExportMps {
        #[command(flatten)]
        common: Common,
        /// Output file; defaults to `window1.mps` in the output directory.
        #[arg(long)]
        mps: Option<PathBuf>,
    },
}

#[derive(Args)]
struct CommonBase {
    /// Network file, or `ieee9` for the bundled nine-bus system.
    #[arg(long)]
    net: String,
    /// Frequency deviation limit in Hz; the sign is ignored.
    #[arg(long, default_value_t = 1.0)]
    limit_hz: f64,
    /// Window length in restoration steps.
    #[arg(long, default_value_t = 4)]
    horizon: usize,
    /// Output directory.
    #[arg(long, default_value = "out")]
    out: PathBuf,
}

#[derive(Args)]
struct Common {
    #[command(flatten)]
    base: CommonBase,
    #[arg(long, value_enum, default_value_t = Mode::Nadir)]
    mode: Mode,
    #[arg(long, value_enum, default_value_t = Switch::On)]
    ess: Switch,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    None,
    FivePercent,
    Nadir,
}

impl From<Mode> for ConstraintMode {
    fn from(m: Mode) -> Self {
        match m {
            Mode::None => ConstraintMode::None,
            Mode::FivePercent => ConstraintMode::FivePercent,
            Mode::Nadir => ConstraintMode::Nadir,
        }
    }
}

#[derive(Clone, Copy, PartialEq, ValueEnum)]
enum Switch {
    On,
    Off,
}

type Result<T> = std::result::Result<T, Box<dyn std::error::Error>>;

fn load(net: &str) -> Result<NetworkModel> {
    if matches!(net, "ieee9" | "9bus") && !Path::new(net).exists() {
        return Ok(fixtures::ieee9());
    }
    Ok(load_network(net)?)
}

fn config(base: &CommonBase, mode: Mode, ess: Switch) -> PlannerConfig {
    PlannerConfig {
        horizon: base.horizon,
        limit_hz: -base.limit_hz.abs(),
        mode: mode.into(),
        ess: ess == Switch::On,
        ..PlannerConfig::default()
    }
}

fn cmd_plan(c: &Common) -> Result<()> {
    let net = load(&c.base.net)?;
    let cfg = config(&c.base, c.mode, c.ess);
    let out = planner::plan(&net, &cfg)?;
    let mut w = ArtifactWriter::create(&c.base.out)?;
    w.write("plan.csv", &plan_table_csv(&out.network, &out.plan))?;
    w.write_json("plan.json", &out.plan)?;
    w.write("iterations.csv", &iteration_log_csv(&out.log))?;
    w.finish(&c.base.net, &out.network, ManifestConfig::new("plan", &cfg))?;
    println!(
        "{}: {} steps ({} min), {}",
        cfg.label(),
        out.plan.horizon(),
        out.plan.restoration_minutes(&out.network),
        if out.plan.complete {
            "complete"
        } else {
            "incomplete"
        }
    );
    Ok(())
}

fn cmd_simulate(c: &Common, plan_path: Option<&Path>) -> Result<()> {
    let net = load(&c.base.net)?;
    let cfg = config(&c.base, c.mode, c.ess);
    let (net, plan) = match plan_path {
        Some(p) => {
            let plan = read_plan(p)?;
            // Plans made without storage carry no storage vectors.
            let net = if plan.steps.first().is_some_and(|s| s.ess.is_empty()) {
                net.without_ess()
            } else {
                net
            };
            check_plan_matches(&net, &plan)?;
            (net, plan)
        }
        None => {
            let out = planner::plan(&net, &cfg)?;
            (out.network, out.plan)
        }
    };
    let sim = simulate_plan(
        &plan,
        &net,
        net.hz_to_pu(cfg.limit_hz),
        SimConfig::default(),
    )?;
    let mut w = ArtifactWriter::create(&c.base.out)?;
    for s in &sim.steps {
        w.write(
            &trajectory_file_name(s.step),
            &s.trajectory.to_csv(net.f_base),
        )?;
    }
    w.write("summary.csv", &simulation_summary_csv(&net, &sim))?;
    w.finish(&c.base.net, &net, ManifestConfig::new("simulate", &cfg))?;
    println!(
        "{} simulated steps, worst nadir {:.4} Hz, violations: {:?}",
        sim.steps.len(),
        net.pu_to_hz(sim.worst_nadir()),
        sim.violations()
    );
    Ok(())
}

fn cmd_compare(base: &CommonBase, modes: &[Mode], ess: &[Switch]) -> Result<()> {
    let net = load(&base.net)?;
    let modes = if modes.is_empty() {
        vec![Mode::None, Mode::FivePercent, Mode::Nadir]
    } else {
        modes.to_vec()
    };
    let ess = if ess.is_empty() {
        vec![Switch::On]
    } else {
        ess.to_vec()
    };
    let configs: Vec<PlannerConfig> = ess
        .iter()
        .flat_map(|&e| modes.iter().map(move |&m| config(base, m, e)))
        .collect();
    let rows = compare_plans(&net, &configs, SimConfig::default())?;
    let table = comparison_csv(&rows);
    let mut w = ArtifactWriter::create(&base.out)?;
    w.write("comparison.csv", &table)?;
    w.finish(&base.net, &net, ManifestConfig::new("compare", &configs[0]))?;
    print!("{table}");
    Ok(())
}

fn cmd_export_mps(c: &Common, mps: Option<&Path>) -> Result<()> {
    let net = load(&c.base.net)?;
    let cfg = config(&c.base, c.mode, c.ess);
    let rm = first_window(&net, &cfg)?;
    let text = export_mps(&rm.model);
    match mps {
        Some(p) => {
            if let Some(dir) = p.parent().filter(|d| !d.as_os_str().is_empty()) {
                std::fs::create_dir_all(dir)?;
            }
            std::fs::write(p, text)?;
            println!("wrote {}", p.display());
        }
        None => {
            let mut w = ArtifactWriter::create(&c.base.out)?;
            let p = w.write("window1.mps", &text)?;
            let net = if cfg.ess { net } else { net.without_ess() };
            w.finish(&c.base.net, &net, ManifestConfig::new("export-mps", &cfg))?;
            println!("wrote {}", p.display());
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Plan(c) => cmd_plan(c),
        Command::Simulate { common, plan } => cmd_simulate(common, plan.as_deref()),
        Command::Compare { common, mode, ess } => cmd_compare(common, mode, ess),
        Command::ExportMps { common, mps } => cmd_export_mps(common, mps.as_deref()),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
