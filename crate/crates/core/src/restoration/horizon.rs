use serde::{Deserialize, Serialize};

use super::RestorationError;
use crate::grid::{NetworkModel, RestorationPlan, RestorationState};

/// Per-element objective weights.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ObjectiveWeights {
    pub gen: Vec<f64>,
    pub load: Vec<f64>,
    pub line: Vec<f64>,
    pub ess: Vec<f64>,
}

impl ObjectiveWeights {
    /// Generators dominate loads, loads dominate lines and storage; within a
    /// class the weight scales with capacity or demand.
    pub fn default_for(net: &NetworkModel) -> Self {
        let scaled = |vals: Vec<f64>, top: f64| -> Vec<f64> {
            let max = vals.iter().copied().fold(0.0, f64::max);
            vals.iter()
                .map(|v| if max > 0.0 { top * v / max } else { top })
                .collect()
        };
        ObjectiveWeights {
            gen: scaled(net.generators.iter().map(|g| g.p_max).collect(), 1e4),
            load: scaled(net.loads.iter().map(|l| l.p).collect(), 1e2),
            line: vec![1.0; net.lines.len()],
            ess: vec![1.0; net.ess.len()],
        }
    }

    pub fn zero(net: &NetworkModel) -> Self {
        ObjectiveWeights {
            gen: vec![0.0; net.generators.len()],
            load: vec![0.0; net.loads.len()],
            line: vec![0.0; net.lines.len()],
            ess: vec![0.0; net.ess.len()],
        }
    }

    fn validate(&self, net: &NetworkModel) -> Result<(), RestorationError> {
        let sizes = [
            (self.gen.len(), net.generators.len()),
            (self.load.len(), net.loads.len()),
            (self.line.len(), net.lines.len()),
            (self.ess.len(), net.ess.len()),
        ];
        if sizes.iter().any(|(a, b)| a != b) {
            return Err(RestorationError::Horizon(
                "weight vector sizes do not match the network".into(),
            ));
        }
        let all = self
            .gen
            .iter()
            .chain(&self.load)
            .chain(&self.line)
            .chain(&self.ess);
        if all.clone().any(|w| !(*w >= 0.0) || !w.is_finite()) {
            return Err(RestorationError::Horizon(
                "weights must be finite and nonnegative".into(),
            ));
        }
        Ok(())
    }
}

/// Optimization window `k0+1 ..= k0+n` on top of a committed prefix.
///
/// The state at `k0` enters the model as fixed variables; generator statuses
/// before `k0` enter as constants through the recorded start steps.
#[derive(Debug, Clone, PartialEq)]
pub struct HorizonSpec {
    pub k0: usize,
    pub n: usize,
    pub weights: ObjectiveWeights,
    /// State at `k0`.
    pub last: RestorationState,
    /// Bus statuses at step 0.
    pub initial_bus: Vec<bool>,
    /// Switch-on step of each generator in the prefix.
    pub gen_start: Vec<Option<i64>>,
}

impl HorizonSpec {
    pub fn new(
        net: &NetworkModel,
        prefix: &RestorationPlan,
        n: usize,
        weights: ObjectiveWeights,
    ) -> Result<Self, RestorationError> {
        if n == 0 {
            return Err(RestorationError::Horizon(
                "window length must be at least 1".into(),
            ));
        }
        weights.validate(net)?;
        check_prefix(net, prefix)?;
        Ok(HorizonSpec {
            k0: prefix.horizon(),
            n,
            weights,
            last: prefix.last().clone(),
            initial_bus: prefix.steps[0].bus.clone(),
            gen_start: (0..net.generators.len())
                .map(|i| prefix.gen_start(net, i))
                .collect(),
        })
    }

    /// Last step of the window.
    pub fn end(&self) -> usize {
        self.k0 + self.n
    }

    /// Generator status before `k0` (history), using `b_g[k] = 0` for
    /// `k <= 0` on non-black-start units.
    pub fn gen_history(&self, i: usize, k: i64) -> bool {
        self.gen_start[i].is_some_and(|s| k >= s)
    }
}

/// Monotone statuses and matching sizes across the committed prefix.
pub fn check_prefix(net: &NetworkModel, plan: &RestorationPlan) -> Result<(), RestorationError> {
    let bad = |m: String| Err(RestorationError::Prefix(m));
    for (k, s) in plan.steps.iter().enumerate() {
        let sizes = [
            (s.bus.len(), net.buses.len(), "bus"),
            (s.line.len(), net.lines.len(), "line"),
            (s.load.len(), net.loads.len(), "load"),
            (s.gen.len(), net.generators.len(), "generator"),
            (s.ess.len(), net.ess.len(), "ess"),
            (s.p_gen.len(), net.generators.len(), "generator output"),
            (s.soc.len(), net.ess.len(), "state of charge"),
        ];
        if let Some((_, _, what)) = sizes.iter().find(|(a, b, _)| a != b) {
            return bad(format!(
                "step {k}: {what} vector size does not match the network"
            ));
        }
        if k == 0 {
            continue;
        }
        let prev = &plan.steps[k - 1];
        let pairs = [
            (&prev.bus, &s.bus, "bus"),
            (&prev.line, &s.line, "line"),
            (&prev.load, &s.load, "load"),
            (&prev.gen, &s.gen, "generator"),
            (&prev.ess, &s.ess, "ess"),
        ];
        for (a, b, what) in pairs {
            if a.iter().zip(b.iter()).any(|(x, y)| *x && !*y) {
                return bad(format!("step {k}: a {what} was switched off"));
            }
        }
    }
    Ok(())
}
