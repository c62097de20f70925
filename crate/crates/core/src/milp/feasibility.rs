use super::{MilpError, MilpModel, VarKind};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ViolationKind {
    Bound,
    Integrality,
    Constraint,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Violation {
    pub kind: ViolationKind,
    /// Variable or constraint name.
    pub name: String,
    pub residual: f64,
}

/// Violations found by [`check_feasible`]; empty iff the point is feasible.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct FeasibilityReport {
    pub violations: Vec<Violation>,
}

impl FeasibilityReport {
    pub fn is_feasible(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn max_residual(&self) -> f64 {
        self.violations
            .iter()
            .map(|v| v.residual)
            .fold(0.0, f64::max)
    }
}

/// Checks bounds, integrality and every row of `model` at `assignment`.
///
/// Bounds and rows use the absolute tolerance `eps_feas`; binaries must lie
/// within `eps_feas` of 0 or 1.
pub fn check_feasible(
    model: &MilpModel,
    assignment: &[f64],
    eps_feas: f64,
) -> Result<FeasibilityReport, MilpError> {
    if assignment.len() != model.num_vars() {
        return Err(MilpError::MissingAssignment {
            expected: model.num_vars(),
            got: assignment.len(),
        });
    }
    let mut violations = Vec::new();
    for (v, &x) in model.variables().iter().zip(assignment) {
        if !x.is_finite() {
            violations.push(Violation {
                kind: ViolationKind::Bound,
                name: v.name.clone(),
                residual: f64::INFINITY,
            });
            continue;
        }
        let out = (v.lo - x).max(x - v.hi).max(0.0);
        if out > eps_feas {
            violations.push(Violation {
                kind: ViolationKind::Bound,
                name: v.name.clone(),
                residual: out,
            });
        }
        if v.kind == VarKind::Binary {
            let frac = (x - x.round()).abs();
            if frac > eps_feas {
                violations.push(Violation {
                    kind: ViolationKind::Integrality,
                    name: v.name.clone(),
                    residual: frac,
                });
            }
        }
    }
    for c in model.constraints() {
        let r = c.violation(assignment);
        if r > eps_feas || r.is_nan() {
            violations.push(Violation {
                kind: ViolationKind::Constraint,
                name: c.name.clone(),
                residual: r,
            });
        }
    }
    Ok(FeasibilityReport { violations })
}
