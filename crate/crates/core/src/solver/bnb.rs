use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::time::Instant;

use super::presolve::{presolve, propagate, Presolved};
use super::problem::LpProblem;
use super::simplex::{DualSimplex, LpStatus};
use super::{Branching, NodeOrder, SolveStatus, SolverConfig, SolverError, SolverStats};

/// Open node: binary fixings relative to the root, and the parent's LP value
/// (a lower bound in minimization form).
#[derive(Debug, Clone)]
struct Node {
    id: usize,
    bound: f64,
    fixings: Vec<(usize, bool)>,
    /// Fractional part of the last branched variable at the parent.
    frac: f64,
}

impl PartialEq for Node {
    fn eq(&self, o: &Self) -> bool {
        self.cmp(o) == Ordering::Equal
    }
}
impl Eq for Node {}
impl PartialOrd for Node {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}
impl Ord for Node {
    // Max-heap: smallest bound first, then lowest id.
    fn cmp(&self, o: &Self) -> Ordering {
        o.bound
            .total_cmp(&self.bound)
            .then_with(|| o.id.cmp(&self.id))
    }
}

pub(crate) struct BnbOutcome {
    pub status: SolveStatus,
    /// Original-space values of the incumbent, if any.
    pub values: Option<Vec<f64>>,
    /// Minimization-form global lower bound.
    pub bound: f64,
    pub stats: SolverStats,
}

struct PseudoCosts {
    down: Vec<(f64, u32)>,
    up: Vec<(f64, u32)>,
}

impl PseudoCosts {
    fn score(&self, j: usize, f: f64) -> Option<f64> {
        let (d, nd) = self.down[j];
        let (u, nu) = self.up[j];
        if nd == 0 || nu == 0 {
            return None;
        }
        let down = d / nd as f64 * f;
        let up = u / nu as f64 * (1.0 - f);
        Some(down.min(up).max(1e-6) * down.max(up).max(1e-6))
    }
}

fn is_fractional(v: f64, eps: f64) -> bool {
    (v - v.round()).abs() > eps
}

pub(crate) fn branch_and_bound(
    p: &LpProblem,
    cfg: &SolverConfig,
) -> Result<BnbOutcome, SolverError> {
    let start = Instant::now();
    let mut stats = SolverStats::default();
    let pre: Presolved = match presolve(p) {
        Ok(ps) => ps,
        Err(_) => {
            return Ok(BnbOutcome {
                status: SolveStatus::Infeasible,
                values: None,
                bound: f64::INFINITY,
                stats,
            })
        }
    };
    let q = &pre.problem;
    let n = q.num_cols();
    let ints: Vec<usize> = (0..n).filter(|&j| q.is_int[j]).collect();
    let mut lp = DualSimplex::new(q);
    let root_lo = q.col_lo.clone();
    let root_hi = q.col_hi.clone();

    let mut incumbent = f64::INFINITY;
    let mut best_x: Option<Vec<f64>> = None;
    let mut next_id = 1;
    let mut pc = PseudoCosts {
        down: vec![(0.0, 0); n],
        up: vec![(0.0, 0); n],
    };

    let mut dive: Vec<Node> = vec![Node {
        id: 0,
        bound: f64::NEG_INFINITY,
        fixings: Vec::new(),
        frac: 0.5,
    }];
    let mut heap: BinaryHeap<Node> = BinaryHeap::new();
    let mut best_first = cfg.node_order == NodeOrder::BestBound;
    let mut limited = false;
    let mut lo = root_lo.clone();
    let mut hi = root_hi.clone();

    let open_bound = |dive: &Vec<Node>, heap: &BinaryHeap<Node>| -> f64 {
        let a = dive.iter().map(|n| n.bound).fold(f64::INFINITY, f64::min);
        let b = heap.peek().map(|n| n.bound).unwrap_or(f64::INFINITY);
        a.min(b)
    };
    let gap_closed = |inc: f64, bound: f64| -> bool {
        inc.is_finite() && (inc - bound) <= cfg.gap * inc.abs().max(1.0) + 1e-12
    };

    loop {
        let global = open_bound(&dive, &heap).min(incumbent);
        if global.is_finite() {
            stats.bound_trace.push(global);
        }
        if gap_closed(incumbent, global) && best_x.is_some() {
            break;
        }
        let node = if best_first {
            if !dive.is_empty() {
                heap.extend(dive.drain(..));
            }
            heap.pop()
        } else {
            dive.pop()
        };
        let Some(node) = node else { break };
        if node.bound >= incumbent - cfg.gap * incumbent.abs().max(1.0) && best_x.is_some() {
            continue;
        }
        if stats.nodes >= cfg.node_limit || cfg.time_limit.is_some_and(|t| start.elapsed() >= t) {
            limited = true;
            // Put it back so its bound still counts.
            heap.push(node);
            break;
        }
        stats.nodes += 1;

        lo.copy_from_slice(&root_lo);
        hi.copy_from_slice(&root_hi);
        for &(j, up) in &node.fixings {
            let v = if up { 1.0 } else { 0.0 };
            lo[j] = v;
            hi[j] = v;
        }
        if cfg.propagate
            && !node.fixings.is_empty()
            && propagate(&q.rows, &mut lo, &mut hi, &q.is_int, 5).is_err()
        {
            continue;
        }
        for j in 0..n {
            lp.set_col_bounds(j, lo[j], hi[j]);
        }
        let it0 = lp.iterations;
        let status = lp.solve(cfg.max_lp_iterations);
        stats.lp_iterations += lp.iterations - it0;
        match status {
            LpStatus::Infeasible => continue,
            LpStatus::Unbounded => {
                if best_x.is_none() && node.fixings.is_empty() {
                    return Err(SolverError::Unbounded);
                }
                continue;
            }
            LpStatus::IterationLimit => {
                return Err(SolverError::Numerical("LP iteration limit in node".into()))
            }
            LpStatus::Optimal => {}
        }
        // A child can never beat its parent; clip solver noise.
        let obj = lp.objective().max(node.bound);
        if let Some(&(j, up)) = node.fixings.last() {
            if node.bound.is_finite() {
                let gain = (obj - node.bound).max(0.0);
                let dist = if up { 1.0 - node.frac } else { node.frac };
                let e = if up { &mut pc.up[j] } else { &mut pc.down[j] };
                e.0 += gain / dist.max(1e-6);
                e.1 += 1;
            }
        }
        if best_x.is_some() && obj >= incumbent - cfg.gap * incumbent.abs().max(1.0) {
            continue;
        }
        let x = lp.values().to_vec();
        let frac: Vec<usize> = ints
            .iter()
            .copied()
            .filter(|&j| is_fractional(x[j], cfg.eps_int))
            .collect();
        if frac.is_empty() {
            let mut xr = x.clone();
            for &j in &ints {
                xr[j] = xr[j].round();
            }
            incumbent = q.objective(&xr);
            best_x = Some(xr);
            if cfg.node_order == NodeOrder::DepthFirstThenBest {
                best_first = true;
            }
            continue;
        }
        let pick = match cfg.branching {
            Branching::MostFractional => None,
            Branching::PseudoCost => {
                let mut best: Option<(f64, usize)> = None;
                for &j in &frac {
                    if let Some(s) = pc.score(j, x[j] - x[j].floor()) {
                        if best.is_none_or(|(b, _)| s > b) {
                            best = Some((s, j));
                        }
                    }
                }
                best.map(|(_, j)| j)
            }
        };
        let j = pick.unwrap_or_else(|| {
            let mut best = (f64::NEG_INFINITY, usize::MAX);
            for &j in &frac {
                let f = (x[j] - x[j].floor() - 0.5).abs();
                let score = 0.5 - f;
                if score > best.0 {
                    best = (score, j);
                }
            }
            best.1
        });
        let up_first = x[j] >= 0.5;
        let mut children = Vec::with_capacity(2);
        for up in [!up_first, up_first] {
            let mut fixings = node.fixings.clone();
            fixings.push((j, up));
            children.push(Node {
                id: next_id,
                bound: obj,
                fixings,
                frac: x[j] - x[j].floor(),
            });
            next_id += 1;
        }
        if best_first {
            heap.extend(children);
        } else {
            // The preferred child is pushed last and explored next.
            dive.extend(children);
        }
    }

    let remaining = open_bound(&dive, &heap);
    let status = if best_x.is_none() {
        if limited {
            SolveStatus::IterationLimit
        } else {
            SolveStatus::Infeasible
        }
    } else if limited && !gap_closed(incumbent, remaining.min(incumbent)) {
        SolveStatus::IterationLimit
    } else {
        SolveStatus::Optimal
    };
    let bound = if best_x.is_some() {
        remaining.min(incumbent)
    } else {
        remaining
    };
    stats.elapsed = start.elapsed();
    let values = best_x.map(|x| pre.expand(&x));
    Ok(BnbOutcome {
        status,
        values,
        bound,
        stats,
    })
}
