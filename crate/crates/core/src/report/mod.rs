//! Plot-ready tables, JSON artifacts and the run manifest.
//!
//! Every table is comma-separated with a header row and a fixed column
//! order. Numbers use fixed precision so identical inputs give identical
//! files.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::dynamics::PlanSimulation;
use crate::grid::{NetworkModel, RestorationPlan, RestorationState};
use crate::planner::{ComparisonRow, ConstraintMode, IterationLog, PlannerConfig};

#[derive(Debug, Error)]
pub enum ReportError {
    #[error("cannot write {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("cannot read {path}: {source}")]
    Read {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("malformed plan file {path}: {source}")]
    PlanFile {
        path: PathBuf,
        source: serde_json::Error,
    },
    #[error("plan does not match the network: {0}")]
    Mismatch(String),
}

/// Fixed-precision number with negative zero folded to zero.
fn num(v: f64, digits: usize) -> String {
    let s = format!("{v:.digits$}");
    if s.starts_with('-') && s[1..].chars().all(|c| c == '0' || c == '.') {
        s[1..].to_string()
    } else {
        s
    }
}

/// Names of the elements energized by the actions of step `k`.
pub fn step_actions(
    net: &NetworkModel,
    prev: &RestorationState,
    next: &RestorationState,
) -> Vec<String> {
    let turned_on = |a: &[bool], b: &[bool]| -> Vec<usize> {
        (0..a.len()).filter(|&i| !a[i] && b[i]).collect()
    };
    let mut out = Vec::new();
    for i in turned_on(&prev.bus, &next.bus) {
        out.push(format!("bus {}", net.buses[i]));
    }
    for i in turned_on(&prev.line, &next.line) {
        out.push(format!("line {}-{}", net.lines[i].from, net.lines[i].to));
    }
    for i in turned_on(&prev.gen, &next.gen) {
        out.push(format!("gen {}", net.generators[i].name));
    }
    for i in turned_on(&prev.load, &next.load) {
        out.push(format!("load {}", net.loads[i].name));
    }
    for i in turned_on(&prev.ess, &next.ess) {
        out.push(format!("ess {}", net.ess[i].name));
    }
    out
}

/// Generator phase transitions between two consecutive steps.
pub fn phase_events(
    net: &NetworkModel,
    prev: &RestorationState,
    next: &RestorationState,
) -> Vec<String> {
    net.generators
        .iter()
        .zip(prev.phase.iter().zip(&next.phase))
        .filter(|(_, (a, b))| a != b)
        .map(|(g, (_, b))| format!("{} {}", g.name, b.as_str()))
        .collect()
}

/// Checks that a plan was built for `net`: vector sizes and the initial
/// state must agree.
pub fn check_plan_matches(net: &NetworkModel, plan: &RestorationPlan) -> Result<(), ReportError> {
    let mismatch = |what: &str, got: usize, want: usize| {
        Err(ReportError::Mismatch(format!(
            "{what}: plan has {got}, network has {want}"
        )))
    };
    let Some(first) = plan.steps.first() else {
        return Err(ReportError::Mismatch("plan has no initial state".into()));
    };
    for (k, s) in plan.steps.iter().enumerate() {
        let sizes = [
            ("buses", s.bus.len(), net.buses.len()),
            ("lines", s.line.len(), net.lines.len()),
            ("loads", s.load.len(), net.loads.len()),
            ("generators", s.gen.len(), net.generators.len()),
            ("generator phases", s.phase.len(), net.generators.len()),
            ("storage units", s.ess.len(), net.ess.len()),
            (
                "storage setpoints",
                s.ess_setpoint_change.len(),
                net.ess.len(),
            ),
            (
                "reference changes",
                s.gen_ref_change.len(),
                net.generators.len(),
            ),
        ];
        for (what, got, want) in sizes {
            if got != want {
                return mismatch(&format!("step {k} {what}"), got, want);
            }
        }
    }
    let init = crate::grid::initial_state(net);
    if first.bus != init.bus || first.gen != init.gen {
        return Err(ReportError::Mismatch(
            "plan does not start from the black-start state".into(),
        ));
    }
    Ok(())
}

/// One row per action step: energized elements, phase changes, the
/// disturbance, the frozen bound, generator phases and storage dispatch.
pub fn plan_table_csv(net: &NetworkModel, plan: &RestorationPlan) -> String {
    let mw = net.s_sys;
    let mut out = String::from(
        "step,minute,actions,phase_events,disturbance_pu,disturbance_mw,g0_pu,g0_mw,restored",
    );
    for g in &net.generators {
        let _ = write!(out, ",phase_{0},p_{0}_mw", g.name);
    }
    for s in &net.ess {
        let _ = write!(out, ",p_{0}_mw,dps_{0}_mw,soc_{0}_mwh", s.name);
    }
    out.push('\n');
    for (k, pair) in plan.steps.windows(2).enumerate() {
        let (prev, next) = (&pair[0], &pair[1]);
        let step = k + 1;
        let (g0_pu, g0_mw) = match &next.frozen {
            Some(f) => (num(f.g0, 6), num(f.g0 * mw, 3)),
            None => (String::new(), String::new()),
        };
        let _ = write!(
            out,
            "{step},{},{},{},{},{},{g0_pu},{g0_mw},{}",
            num(step as f64 * net.t_a, 1),
            step_actions(net, prev, next).join(";"),
            phase_events(net, prev, next).join(";"),
            num(next.imbalance, 6),
            num(next.imbalance * mw, 3),
            next.restored_count(),
        );
        for i in 0..net.generators.len() {
            let _ = write!(
                out,
                ",{},{}",
                next.phase[i].as_str(),
                num(next.p_gen[i] * mw, 3)
            );
        }
        for i in 0..net.ess.len() {
            let _ = write!(
                out,
                ",{},{},{}",
                num(next.p_ess[i] * mw, 3),
                num(next.ess_setpoint_change[i] * mw, 3),
                num(next.soc[i] * mw, 3)
            );
        }
        out.push('\n');
    }
    out
}

/// File name of the trajectory written for a simulated step.
pub fn trajectory_file_name(step: usize) -> String {
    format!("trajectory_step{step:03}.csv")
}

/// One row per simulated step with the nadir in pu and Hz.
pub fn simulation_summary_csv(net: &NetworkModel, sim: &PlanSimulation) -> String {
    let mut out = String::from(
        "step,minute,disturbance_pu,disturbance_mw,nadir_pu,nadir_hz,t_nadir_s,limit_hz,violated,trajectory\n",
    );
    for s in &sim.steps {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{}",
            s.step,
            num(s.step as f64 * net.t_a, 1),
            num(s.disturbance, 6),
            num(s.disturbance * net.s_sys, 3),
            num(s.nadir, 6),
            num(net.pu_to_hz(s.nadir), 4),
            num(s.t_nadir, 3),
            num(net.pu_to_hz(sim.limit), 4),
            s.violated,
            trajectory_file_name(s.step),
        );
    }
    out
}

/// One row per planned configuration.
pub fn comparison_csv(rows: &[ComparisonRow]) -> String {
    let mut out = String::from("label,mode,ess,steps,minutes,complete,worst_nadir_hz,violations\n");
    for r in rows {
        let v: Vec<String> = r.violations.iter().map(|s| s.to_string()).collect();
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{}",
            r.label,
            r.mode,
            if r.ess { "on" } else { "off" },
            r.steps,
            num(r.minutes, 1),
            r.complete,
            num(r.worst_nadir_hz, 4),
            v.join(";"),
        );
    }
    out
}

/// Solver statistics per planner iteration (timings vary between runs).
pub fn iteration_log_csv(log: &[IterationLog]) -> String {
    let mut out =
        String::from("iteration,step,window,held,optimal,objective,nodes,lp_iterations,solve_ms,g0_pu,restored\n");
    for l in log {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{},{}",
            l.iteration,
            l.step,
            l.window,
            l.held,
            l.optimal,
            num(l.objective, 6),
            l.nodes,
            l.lp_iterations,
            num(l.solve_ms, 1),
            l.g0.map(|g| num(g, 6)).unwrap_or_default(),
            l.restored,
        );
    }
    out
}

/// Planner settings recorded in the manifest.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ManifestConfig {
    pub command: String,
    pub mode: ConstraintMode,
    pub limit_hz: f64,
    pub horizon: usize,
    pub ess: bool,
}

impl ManifestConfig {
    pub fn new(command: &str, config: &PlannerConfig) -> Self {
        ManifestConfig {
            command: command.to_string(),
            mode: config.mode,
            limit_hz: config.limit_hz,
            horizon: config.horizon,
            ess: config.ess,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Artifact {
    pub file: String,
    pub sha256: String,
}

/// Inputs, settings and outputs of one run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub network: String,
    pub config: ManifestConfig,
    /// Hash of the network data and the settings; equal hashes mean equal
    /// tabular outputs.
    pub input_hash: String,
    pub output_dir: String,
    pub artifacts: Vec<Artifact>,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes)
        .iter()
        .fold(String::with_capacity(64), |mut s, b| {
            let _ = write!(s, "{b:02x}");
            s
        })
}

/// Hash over the canonical network text and the settings.
pub fn input_hash(net: &NetworkModel, config: &ManifestConfig) -> String {
    let mut text = crate::grid::to_toml_string(net);
    text.push('\n');
    text.push_str(&serde_json::to_string(config).expect("plain data serializes"));
    sha256_hex(text.as_bytes())
}

/// Collects output files and writes them together with the manifest.
#[derive(Debug)]
pub struct ArtifactWriter {
    dir: PathBuf,
    artifacts: Vec<Artifact>,
}

impl ArtifactWriter {
    pub fn create(dir: impl AsRef<Path>) -> Result<Self, ReportError> {
        let dir = dir.as_ref().to_path_buf();
        fs::create_dir_all(&dir).map_err(|source| ReportError::Io {
            path: dir.clone(),
            source,
        })?;
        Ok(ArtifactWriter {
            dir,
            artifacts: Vec::new(),
        })
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn write(&mut self, file: &str, contents: &str) -> Result<PathBuf, ReportError> {
        let path = self.dir.join(file);
        fs::write(&path, contents).map_err(|source| ReportError::Io {
            path: path.clone(),
            source,
        })?;
        self.artifacts.push(Artifact {
            file: file.to_string(),
            sha256: sha256_hex(contents.as_bytes()),
        });
        Ok(path)
    }

    pub fn write_json<T: Serialize>(
        &mut self,
        file: &str,
        value: &T,
    ) -> Result<PathBuf, ReportError> {
        let mut text = serde_json::to_string_pretty(value).expect("plain data serializes");
        text.push('\n');
        self.write(file, &text)
    }

    /// Writes `manifest.json` listing every artifact written so far.
    pub fn finish(
        self,
        network: &str,
        net: &NetworkModel,
        config: ManifestConfig,
    ) -> Result<RunManifest, ReportError> {
        let manifest = RunManifest {
            network: network.to_string(),
            input_hash: input_hash(net, &config),
            config,
            output_dir: self.dir.display().to_string(),
            artifacts: self.artifacts,
        };
        let path = self.dir.join("manifest.json");
        let mut text = serde_json::to_string_pretty(&manifest).expect("plain data serializes");
        text.push('\n');
        fs::write(&path, text).map_err(|source| ReportError::Io { path, source })?;
        Ok(manifest)
    }
}

/// Reads a plan written by [`ArtifactWriter::write_json`].
pub fn read_plan(path: impl AsRef<Path>) -> Result<RestorationPlan, ReportError> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|source| ReportError::Read {
        path: path.to_path_buf(),
        source,
    })?;
    serde_json::from_str(&text).map_err(|source| ReportError::PlanFile {
        path: path.to_path_buf(),
        source,
    })
}
