//! Bound tightening and the reductions it enables: fixed columns are
//! substituted out, and empty, singleton and redundant rows are dropped.

use super::problem::{LpProblem, Row};

const INT_TOL: f64 = 1e-6;
const INFEAS_TOL: f64 = 1e-7;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) struct Infeasible;

fn activity(row: &Row, lo: &[f64], hi: &[f64]) -> (f64, f64, usize, usize) {
    let (mut amin, mut amax, mut nmin, mut nmax) = (0.0, 0.0, 0, 0);
    for &(j, a) in &row.coeffs {
        let (l, h) = if a > 0.0 {
            (lo[j], hi[j])
        } else {
            (hi[j], lo[j])
        };
        if l.is_finite() {
            amin += a * l;
        } else {
            nmin += 1;
        }
        if h.is_finite() {
            amax += a * h;
        } else {
            nmax += 1;
        }
    }
    (amin, amax, nmin, nmax)
}

fn tighten(
    j: usize,
    new_lo: f64,
    new_hi: f64,
    lo: &mut [f64],
    hi: &mut [f64],
    is_int: &[bool],
) -> Result<bool, Infeasible> {
    let mut changed = false;
    let (mut nl, mut nh) = (new_lo, new_hi);
    if is_int[j] {
        nl = (nl - INT_TOL).ceil();
        nh = (nh + INT_TOL).floor();
    } else {
        // Keep a margin so rounding never cuts off feasible points; only
        // accept tightenings that shrink the domain noticeably.
        let range = if lo[j].is_finite() && hi[j].is_finite() {
            hi[j] - lo[j]
        } else {
            f64::INFINITY
        };
        let min_gain = 1e-3 * range.clamp(1e-9, 1.0);
        nl -= 1e-9 * (1.0 + nl.abs());
        nh += 1e-9 * (1.0 + nh.abs());
        if nl <= lo[j] + min_gain {
            nl = f64::NEG_INFINITY;
        }
        if nh >= hi[j] - min_gain {
            nh = f64::INFINITY;
        }
    }
    if nl > lo[j] {
        lo[j] = nl;
        changed = true;
    }
    if nh < hi[j] {
        hi[j] = nh;
        changed = true;
    }
    if lo[j] > hi[j] {
        if lo[j] - hi[j] <= INFEAS_TOL * (1.0 + lo[j].abs()) && !is_int[j] {
            let mid = 0.5 * (lo[j] + hi[j]);
            lo[j] = mid;
            hi[j] = mid;
        } else {
            return Err(Infeasible);
        }
    }
    Ok(changed)
}

/// Activity-based bound propagation over `rows`; returns the number of
/// passes that changed a bound.
pub(crate) fn propagate(
    rows: &[Row],
    lo: &mut [f64],
    hi: &mut [f64],
    is_int: &[bool],
    max_passes: usize,
) -> Result<usize, Infeasible> {
    let mut passes = 0;
    for _ in 0..max_passes {
        let mut changed = false;
        for row in rows {
            let (amin, amax, nmin, nmax) = activity(row, lo, hi);
            if nmin == 0 && amin > row.hi + INFEAS_TOL * (1.0 + row.hi.abs()) {
                return Err(Infeasible);
            }
            if nmax == 0 && amax < row.lo - INFEAS_TOL * (1.0 + row.lo.abs()) {
                return Err(Infeasible);
            }
            for &(j, a) in &row.coeffs {
                let (l, h) = if a > 0.0 {
                    (lo[j], hi[j])
                } else {
                    (hi[j], lo[j])
                };
                // Activity of the other entries.
                let rest_min = match (nmin, l.is_finite()) {
                    (0, _) => Some(amin - a * l),
                    (1, false) => Some(amin),
                    _ => None,
                };
                let rest_max = match (nmax, h.is_finite()) {
                    (0, _) => Some(amax - a * h),
                    (1, false) => Some(amax),
                    _ => None,
                };
                let (mut new_lo, mut new_hi) = (f64::NEG_INFINITY, f64::INFINITY);
                if let (Some(rm), true) = (rest_min, row.hi.is_finite()) {
                    let b = (row.hi - rm) / a;
                    if a > 0.0 {
                        new_hi = new_hi.min(b);
                    } else {
                        new_lo = new_lo.max(b);
                    }
                }
                if let (Some(rm), true) = (rest_max, row.lo.is_finite()) {
                    let b = (row.lo - rm) / a;
                    if a > 0.0 {
                        new_lo = new_lo.max(b);
                    } else {
                        new_hi = new_hi.min(b);
                    }
                }
                if new_lo.abs() > 1e9 || new_hi.abs() > 1e9 {
                    new_lo = if new_lo.abs() > 1e9 {
                        f64::NEG_INFINITY
                    } else {
                        new_lo
                    };
                    new_hi = if new_hi.abs() > 1e9 {
                        f64::INFINITY
                    } else {
                        new_hi
                    };
                }
                if tighten(j, new_lo, new_hi, lo, hi, is_int)? {
                    changed = true;
                }
            }
        }
        if !changed {
            break;
        }
        passes += 1;
    }
    Ok(passes)
}

/// Reduced problem plus the map back to the original columns.
pub(crate) struct Presolved {
    pub problem: LpProblem,
    /// Original column of each reduced column.
    pub kept: Vec<usize>,
    /// Values of every original column that was fixed and removed.
    pub fixed: Vec<Option<f64>>,
}

impl Presolved {
    pub fn expand(&self, reduced: &[f64]) -> Vec<f64> {
        let mut out: Vec<f64> = self.fixed.iter().map(|f| f.unwrap_or(0.0)).collect();
        for (k, &j) in self.kept.iter().enumerate() {
            out[j] = reduced[k];
        }
        out
    }
}

/// Moves fixed columns into the row bounds and drops rows left empty.
fn substitute_fixed(rows: Vec<Row>, lo: &[f64], hi: &[f64]) -> Result<Vec<Row>, Infeasible> {
    let mut out = Vec::with_capacity(rows.len());
    for mut row in rows {
        let mut shift = 0.0;
        row.coeffs.retain(|&(j, a)| {
            if lo[j] == hi[j] {
                shift += a * lo[j];
                false
            } else {
                true
            }
        });
        row.lo -= shift;
        row.hi -= shift;
        if row.coeffs.is_empty() {
            if row.lo > INFEAS_TOL * (1.0 + row.lo.abs())
                || row.hi < -INFEAS_TOL * (1.0 + row.hi.abs())
            {
                return Err(Infeasible);
            }
            continue;
        }
        out.push(row);
    }
    Ok(out)
}

pub(crate) fn presolve(p: &LpProblem) -> Result<Presolved, Infeasible> {
    let n = p.num_cols();
    let mut lo = p.col_lo.clone();
    let mut hi = p.col_hi.clone();
    let mut rows = p.rows.clone();
    let count_fixed = |lo: &[f64], hi: &[f64]| (0..n).filter(|&j| lo[j] == hi[j]).count();
    for _ in 0..8 {
        propagate(&rows, &mut lo, &mut hi, &p.is_int, 10)?;
        let before = (rows.len(), count_fixed(&lo, &hi));
        let mut next = Vec::with_capacity(rows.len());
        for row in substitute_fixed(rows, &lo, &hi)? {
            let (amin, amax, nmin, nmax) = activity(&row, &lo, &hi);
            let lo_ok = !row.lo.is_finite() || (nmin == 0 && amin >= row.lo - 1e-12);
            let hi_ok = !row.hi.is_finite() || (nmax == 0 && amax <= row.hi + 1e-12);
            if lo_ok && hi_ok {
                continue;
            }
            if row.coeffs.len() == 1 {
                let (j, a) = row.coeffs[0];
                let (mut l, mut h) = (row.lo / a, row.hi / a);
                if a < 0.0 {
                    std::mem::swap(&mut l, &mut h);
                }
                let (l, h) = if p.is_int[j] {
                    ((l - INT_TOL).ceil(), (h + INT_TOL).floor())
                } else {
                    (l, h)
                };
                lo[j] = lo[j].max(l);
                hi[j] = hi[j].min(h);
                if lo[j] > hi[j] {
                    if !p.is_int[j] && lo[j] - hi[j] <= INFEAS_TOL * (1.0 + lo[j].abs()) {
                        hi[j] = lo[j];
                    } else {
                        return Err(Infeasible);
                    }
                }
                continue;
            }
            next.push(row);
        }
        rows = next;
        if (rows.len(), count_fixed(&lo, &hi)) == before {
            break;
        }
    }
    let rows = substitute_fixed(rows, &lo, &hi)?;

    let kept: Vec<usize> = (0..n).filter(|&j| lo[j] != hi[j]).collect();
    let mut new_index = vec![usize::MAX; n];
    for (k, &j) in kept.iter().enumerate() {
        new_index[j] = k;
    }
    let fixed: Vec<Option<f64>> = (0..n).map(|j| (lo[j] == hi[j]).then_some(lo[j])).collect();
    let mut offset = p.obj_offset;
    for j in 0..n {
        if let Some(v) = fixed[j] {
            offset += p.cost[j] * v;
        }
    }
    let rows: Vec<Row> = rows
        .into_iter()
        .map(|r| Row {
            coeffs: r.coeffs.iter().map(|&(j, a)| (new_index[j], a)).collect(),
            lo: r.lo,
            hi: r.hi,
        })
        .collect();
    let problem = LpProblem::new(
        rows,
        kept.iter().map(|&j| lo[j]).collect(),
        kept.iter().map(|&j| hi[j]).collect(),
        kept.iter().map(|&j| p.cost[j]).collect(),
        kept.iter().map(|&j| p.is_int[j]).collect(),
        offset,
    );
    Ok(Presolved {
        problem,
        kept,
        fixed,
    })
}
