//! Closed-form frequency nadir under the governor ramp approximation, and
//! the maximum disturbance it admits.

mod turbine;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use turbine::{turbine_poly, turbine_transfer, TurbineCoeffs};

use crate::dynamics::system_inertia;
use crate::grid::{FrozenBound, GenPhase, GeneratorSpec, NetworkModel};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum NadirError {
    #[error("no online unit provides primary frequency response")]
    NoResponse,
    #[error("expected {expected} storage setpoints, got {got}")]
    EssLength { expected: usize, got: usize },
    #[error("storage lag contribution exceeds the frequency headroom (radicand {0})")]
    NegativeRadicand(f64),
    #[error("system inertia must be positive")]
    NoInertia,
}

/// Aggregate response data for one restoration step.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NadirCoeffs {
    /// Aggregate valve ramp slope, pu/s.
    pub c1: f64,
    /// Aggregate ramp delay, pu.
    pub c2: f64,
    /// Aggregate curvature term, pu·s.
    pub c3: f64,
    pub h_sys: f64,
    /// Frequency deviation limit, pu (negative).
    pub limit: f64,
    /// Response time constant of each storage unit, s.
    pub tau: Vec<f64>,
}

/// Predicted nadir and its time after the disturbance.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NadirPrediction {
    pub t_nadir: f64,
    pub nadir: f64,
    /// The quadratic minimum lies at or before `t = 0`; frequency does not
    /// fall after the disturbance under the model.
    pub degenerate: bool,
}

/// Sums `alpha U_o (1, c2, c3)` over the responding units; `units` pairs each
/// generator with its machine-to-system base ratio.
pub fn aggregate(units: &[(&GeneratorSpec, f64)]) -> Result<(f64, f64, f64), NadirError> {
    if units.is_empty() {
        return Err(NadirError::NoResponse);
    }
    let (mut c1, mut c2, mut c3) = (0.0, 0.0, 0.0);
    for (g, alpha) in units {
        let t = turbine_poly(g);
        let w = alpha * g.u_o;
        c1 += w;
        c2 += w * t.c2;
        c3 += w * t.c3;
    }
    Ok((c1, c2, c3))
}

impl NadirCoeffs {
    /// Coefficients for a step with the given generator phases: ramping and
    /// online units carry inertia, online PFR units respond.
    pub fn at_phases(
        net: &NetworkModel,
        phases: &[GenPhase],
        limit: f64,
    ) -> Result<Self, NadirError> {
        let synced: Vec<usize> = (0..phases.len())
            .filter(|&i| phases[i].is_synchronized())
            .collect();
        let h_sys = system_inertia(net, &synced).map_err(|_| NadirError::NoInertia)?;
        let units: Vec<(&GeneratorSpec, f64)> = net
            .generators
            .iter()
            .zip(phases)
            .filter(|(g, p)| g.pfr && p.is_online())
            .map(|(g, _)| (g, g.alpha(net.s_sys)))
            .collect();
        let (c1, c2, c3) = if units.is_empty() {
            (0.0, 0.0, 0.0)
        } else {
            aggregate(&units)?
        };
        Ok(NadirCoeffs {
            c1,
            c2,
            c3,
            h_sys,
            limit,
            tau: net.ess.iter().map(|s| s.tau).collect(),
        })
    }

    fn sums(&self, setpoints: &[f64]) -> Result<(f64, f64), NadirError> {
        if setpoints.len() != self.tau.len() {
            return Err(NadirError::EssLength {
                expected: self.tau.len(),
                got: setpoints.len(),
            });
        }
        let total = setpoints.iter().sum();
        let lagged = setpoints.iter().zip(&self.tau).map(|(p, t)| p * t).sum();
        Ok((total, lagged))
    }

    /// Coefficients frozen into the window model. Without responding units
    /// no pick-up is admitted.
    pub fn frozen_bound(&self) -> Result<FrozenBound, NadirError> {
        if self.c1 <= 0.0 {
            return Ok(FrozenBound {
                g0: 0.0,
                gs: vec![0.0; self.tau.len()],
            });
        }
        linear_bound(self)
    }
}

/// Nadir of the quadratic frequency trajectory for disturbance `dpe` and
/// storage setpoint changes `setpoints` (positive = more injection).
pub fn predict_nadir(
    c: &NadirCoeffs,
    dpe: f64,
    setpoints: &[f64],
) -> Result<NadirPrediction, NadirError> {
    if c.c1 <= 0.0 {
        return Err(NadirError::NoResponse);
    }
    if c.h_sys <= 0.0 {
        return Err(NadirError::NoInertia);
    }
    let (total, lagged) = c.sums(setpoints)?;
    let lead = c.c2 + dpe - total;
    let t_nadir = lead / c.c1;
    if t_nadir <= 0.0 {
        return Ok(NadirPrediction {
            t_nadir: 0.0,
            nadir: (c.c3 - lagged) / (2.0 * c.h_sys),
            degenerate: true,
        });
    }
    let nadir = (c.c3 - lagged - lead * lead / (2.0 * c.c1)) / (2.0 * c.h_sys);
    Ok(NadirPrediction {
        t_nadir,
        nadir,
        degenerate: false,
    })
}

/// Largest disturbance whose predicted nadir equals the limit.
pub fn max_disturbance_nonlinear(c: &NadirCoeffs, setpoints: &[f64]) -> Result<f64, NadirError> {
    if c.c1 <= 0.0 {
        return Err(NadirError::NoResponse);
    }
    let (total, lagged) = c.sums(setpoints)?;
    let radicand = 4.0 * c.h_sys * c.c1 * c.limit.abs() + 2.0 * c.c1 * c.c3 - 2.0 * c.c1 * lagged;
    if radicand < 0.0 {
        return Err(NadirError::NegativeRadicand(radicand));
    }
    Ok(radicand.sqrt() - c.c2 + total)
}

/// First-order expansion of the maximum disturbance around zero storage
/// setpoint change: `g0 + gs . dPs_ref`.
pub fn linear_bound(c: &NadirCoeffs) -> Result<FrozenBound, NadirError> {
    if c.c1 <= 0.0 {
        return Err(NadirError::NoResponse);
    }
    let radicand = 4.0 * c.h_sys * c.c1 * c.limit.abs() + 2.0 * c.c1 * c.c3;
    if radicand <= 0.0 {
        return Err(NadirError::NegativeRadicand(radicand));
    }
    let root = radicand.sqrt();
    Ok(FrozenBound {
        g0: root - c.c2,
        gs: c.tau.iter().map(|t| 1.0 - c.c1 * t / root).collect(),
    })
}

/// Outcome of the valve-saturation check for each responding unit.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RampReport {
    pub valid: Vec<bool>,
    /// Names of units whose reference step is too small to saturate the
    /// valve rate limiter.
    pub violations: Vec<String>,
}

impl RampReport {
    pub fn all_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

/// The ramp approximation needs `dP_ref / T3 >= U_o` on every responding
/// unit (reference changes on the machine base).
pub fn ramp_validity_check(units: &[&GeneratorSpec], ref_changes: &[f64]) -> RampReport {
    let valid: Vec<bool> = units
        .iter()
        .zip(ref_changes)
        .map(|(g, r)| r / g.t3 >= g.u_o * (1.0 - 1e-12))
        .collect();
    let violations = units
        .iter()
        .zip(&valid)
        .filter(|(_, v)| !**v)
        .map(|(g, _)| g.name.clone())
        .collect();
    RampReport { valid, violations }
}
