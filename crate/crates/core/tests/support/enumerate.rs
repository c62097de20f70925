//! Exhaustive MILP oracle: every binary assignment followed by a dense LP
//! over the remaining continuous variables.

use blackstart::milp::{MilpModel, ObjSense, Sense, VarKind};

use super::dense_lp::{DenseLp, DenseOutcome};

/// Number of binaries the oracle enumerates.
pub fn free_binaries(model: &MilpModel) -> usize {
    model
        .variables()
        .iter()
        .filter(|v| v.kind == VarKind::Binary && v.lo < v.hi)
        .count()
}

/// Optimal objective in the model's own sense, `None` if infeasible.
pub fn enumerate_milp(model: &MilpModel) -> Option<f64> {
    let vars = model.variables();
    // Binaries fixed by their bounds are constants, not enumerated.
    let bins: Vec<usize> = (0..vars.len())
        .filter(|&j| vars[j].kind == VarKind::Binary && vars[j].lo < vars[j].hi)
        .collect();
    assert!(
        bins.len() <= 16,
        "enumeration oracle limited to 16 binaries"
    );
    let conts: Vec<usize> = (0..vars.len())
        .filter(|&j| vars[j].kind != VarKind::Binary)
        .collect();
    let fixed_bins: Vec<usize> = (0..vars.len())
        .filter(|&j| vars[j].kind == VarKind::Binary && vars[j].lo == vars[j].hi)
        .collect();
    let mut col_of = vec![usize::MAX; vars.len()];
    for (k, &j) in conts.iter().enumerate() {
        col_of[j] = k;
    }
    let sign = if model.obj_sense() == ObjSense::Maximize {
        -1.0
    } else {
        1.0
    };
    let mut best: Option<f64> = None;
    'mask: for mask in 0u32..(1 << bins.len()) {
        let mut fixed = vec![0.0; vars.len()];
        for &j in &fixed_bins {
            fixed[j] = vars[j].lo;
        }
        for (b, &j) in bins.iter().enumerate() {
            let v = f64::from((mask >> b) & 1);
            if v < vars[j].lo || v > vars[j].hi {
                continue 'mask;
            }
            fixed[j] = v;
        }
        let mut lp = DenseLp {
            a: Vec::new(),
            row_lo: Vec::new(),
            row_hi: Vec::new(),
            lo: conts.iter().map(|&j| vars[j].lo).collect(),
            hi: conts.iter().map(|&j| vars[j].hi).collect(),
            c: vec![0.0; conts.len()],
        };
        let mut const_obj = model.obj_constant();
        for (v, c) in model.objective() {
            if col_of[v.index()] == usize::MAX {
                const_obj += c * fixed[v.index()];
            } else {
                lp.c[col_of[v.index()]] += sign * c;
            }
        }
        for con in model.constraints() {
            let mut row = vec![0.0; conts.len()];
            let mut shift = 0.0;
            for (v, a) in &con.coeffs {
                if col_of[v.index()] == usize::MAX {
                    shift += a * fixed[v.index()];
                } else {
                    row[col_of[v.index()]] += a;
                }
            }
            let rhs = con.rhs - shift;
            let (lo, hi) = match con.sense {
                Sense::Le => (f64::NEG_INFINITY, rhs),
                Sense::Ge => (rhs, f64::INFINITY),
                Sense::Eq => (rhs, rhs),
            };
            if row.iter().all(|a| *a == 0.0) {
                if lo > 1e-9 || hi < -1e-9 {
                    continue 'mask;
                }
                continue;
            }
            lp.a.push(row);
            lp.row_lo.push(lo);
            lp.row_hi.push(hi);
        }
        if let DenseOutcome::Optimal { objective, .. } = lp.solve() {
            let value = const_obj + sign * objective;
            let better = match best {
                None => true,
                Some(b) => {
                    if sign < 0.0 {
                        value > b
                    } else {
                        value < b
                    }
                }
            };
            if better {
                best = Some(value);
            }
        }
    }
    best
}
