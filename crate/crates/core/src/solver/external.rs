//! Cross-validation through an external solver command.
//!
//! The model is written as MPS (see [`crate::milp::export_mps`]) and the
//! configured command is run with `{mps}` and `{sol}` in its arguments
//! replaced by the model and solution paths. The solution file must list one
//! `COLUMN VALUE` pair per line using the exported column names
//! (`C0000001`, ...); other lines are ignored.

use std::path::Path;
use std::process::Command;

use super::SolverError;
use crate::milp::{export_mps, MilpModel};

#[derive(Debug, Clone, PartialEq)]
pub struct ExternalSolver {
    pub program: String,
    pub args: Vec<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExternalSolution {
    pub values: Vec<f64>,
    pub objective: f64,
}

/// Parses `COLUMN VALUE` lines into a dense assignment over `n` columns.
pub fn parse_solution(text: &str, n: usize) -> Result<Vec<f64>, SolverError> {
    let mut values = vec![f64::NAN; n];
    for line in text.lines() {
        let mut it = line.split_whitespace();
        let (Some(name), Some(val)) = (it.next(), it.next()) else {
            continue;
        };
        let Some(idx) = name.strip_prefix('C').and_then(|d| d.parse::<usize>().ok()) else {
            continue;
        };
        let Ok(v) = val.parse::<f64>() else { continue };
        if idx == 0 || idx > n {
            return Err(SolverError::External(format!("unknown column {name}")));
        }
        values[idx - 1] = v;
    }
    if let Some(j) = values.iter().position(|v| v.is_nan()) {
        return Err(SolverError::External(format!(
            "no value for column C{:07}",
            j + 1
        )));
    }
    Ok(values)
}

impl ExternalSolver {
    pub fn solve(
        &self,
        model: &MilpModel,
        workdir: &Path,
    ) -> Result<ExternalSolution, SolverError> {
        let io = |e: std::io::Error| SolverError::External(e.to_string());
        let mps = workdir.join("model.mps");
        let sol = workdir.join("model.sol");
        std::fs::write(&mps, export_mps(model)).map_err(io)?;
        let args: Vec<String> = self
            .args
            .iter()
            .map(|a| {
                a.replace("{mps}", &mps.to_string_lossy())
                    .replace("{sol}", &sol.to_string_lossy())
            })
            .collect();
        let out = Command::new(&self.program)
            .args(&args)
            .output()
            .map_err(io)?;
        if !out.status.success() {
            return Err(SolverError::External(format!(
                "`{}` exited with {}: {}",
                self.program,
                out.status,
                String::from_utf8_lossy(&out.stderr).trim()
            )));
        }
        let text = std::fs::read_to_string(&sol).map_err(io)?;
        let values = parse_solution(&text, model.num_vars())?;
        let objective = model.eval_objective(&values);
        Ok(ExternalSolution { values, objective })
    }
}
