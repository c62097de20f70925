//! Bounded dual simplex on `min c.x, A x - r = 0, lo <= (x, r) <= hi`.
//!
//! Every variable is boxed: infinite structural bounds are replaced by
//! `±BIG` and infinite row bounds by activity bounds, so a nonbasic variable
//! can always sit at the bound matching the sign of its reduced cost. The
//! basis therefore stays dual feasible under arbitrary bound changes, which
//! is what branch-and-bound relies on for warm starts.
//!
//! The basis inverse is kept explicitly (dense, row-major) with product
//! updates and periodic reinversion through the structural kernel.

use super::problem::LpProblem;

pub(crate) const BIG: f64 = 1e7;
const NONE: usize = usize::MAX;
const PIVOT_TOL: f64 = 1e-9;
const PRIMAL_TOL: f64 = 1e-9;
const DUAL_TOL: f64 = 1e-9;
const REINVERT_EVERY: usize = 100;
const STALL_LIMIT: usize = 300;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
    IterationLimit,
}

pub(crate) struct DualSimplex<'a> {
    p: &'a LpProblem,
    n: usize,
    m: usize,
    lo: Vec<f64>,
    hi: Vec<f64>,
    artificial: Vec<bool>,
    head: Vec<usize>,
    pos: Vec<usize>,
    at_upper: Vec<bool>,
    x: Vec<f64>,
    d: Vec<f64>,
    binv: Vec<f64>,
    updates: usize,
    pub iterations: usize,
    rho: Vec<f64>,
    alpha_row: Vec<f64>,
    alpha_col: Vec<f64>,
    /// Cost perturbation used to escape dual degeneracy; empty when off.
    shift: Vec<f64>,
}

impl<'a> DualSimplex<'a> {
    /// Slack basis over `p` with the problem's own column bounds.
    pub fn new(p: &'a LpProblem) -> Self {
        let n = p.num_cols();
        let m = p.num_rows();
        let mut s = DualSimplex {
            p,
            n,
            m,
            lo: vec![0.0; n + m],
            hi: vec![0.0; n + m],
            artificial: vec![false; n],
            head: (n..n + m).collect(),
            pos: vec![NONE; n + m],
            at_upper: vec![false; n + m],
            x: vec![0.0; n + m],
            d: vec![0.0; n + m],
            binv: Vec::new(),
            updates: 0,
            iterations: 0,
            rho: vec![0.0; m],
            alpha_row: vec![0.0; n + m],
            alpha_col: vec![0.0; m],
            shift: Vec::new(),
        };
        for j in 0..n {
            s.set_col_bounds(j, p.col_lo[j], p.col_hi[j]);
        }
        s.reset_basis();
        s
    }

    fn reset_basis(&mut self) {
        let (n, m) = (self.n, self.m);
        self.head = (n..n + m).collect();
        self.pos = vec![NONE; n + m];
        for i in 0..m {
            self.pos[n + i] = i;
        }
        self.binv = vec![0.0; m * m];
        for i in 0..m {
            self.binv[i * m + i] = -1.0;
        }
        self.updates = 0;
    }

    pub fn set_col_bounds(&mut self, j: usize, lo: f64, hi: f64) {
        let (l, h) = (
            if lo.is_finite() { lo } else { -BIG },
            if hi.is_finite() { hi } else { BIG },
        );
        self.artificial[j] = !lo.is_finite() || !hi.is_finite();
        self.lo[j] = l;
        self.hi[j] = h.max(l);
    }

    pub fn values(&self) -> &[f64] {
        &self.x[..self.n]
    }

    pub fn objective(&self) -> f64 {
        self.p.objective(&self.x[..self.n])
    }

    /// Objective under the current (possibly perturbed) costs.
    fn working_objective(&self) -> f64 {
        if self.shift.is_empty() {
            return self.objective();
        }
        (0..self.n + self.m).map(|j| self.cost(j) * self.x[j]).sum()
    }

    fn cost(&self, j: usize) -> f64 {
        let c = if j < self.n { self.p.cost[j] } else { 0.0 };
        c + self.shift.get(j).copied().unwrap_or(0.0)
    }

    /// Moves every nonbasic reduced cost away from zero in its feasible
    /// direction by a small pseudo-random amount.
    fn perturb(&mut self) {
        let total = self.n + self.m;
        let scale = (0..self.n)
            .map(|j| self.p.cost[j].abs())
            .fold(0.0, f64::max)
            .max(1.0);
        self.shift = vec![0.0; total];
        let mut state: u64 = 0x9e37_79b9_7f4a_7c15;
        for j in 0..total {
            state = state
                .wrapping_mul(6364136223846793005)
                .wrapping_add(1442695040888963407);
            if self.pos[j] != NONE || self.is_fixed(j) {
                continue;
            }
            let u = 0.5 + 0.5 * ((state >> 11) as f64 / (1u64 << 53) as f64);
            let mag = 1e-7 * scale * u;
            self.shift[j] = if self.at_upper[j] { -mag } else { mag };
        }
    }

    fn for_column(&self, j: usize, mut f: impl FnMut(usize, f64)) {
        if j < self.n {
            for (r, a) in self.p.column(j) {
                f(r, a);
            }
        } else {
            f(j - self.n, -1.0);
        }
    }

    fn refresh_row_bounds(&mut self) {
        for (i, row) in self.p.rows.iter().enumerate() {
            let (mut amin, mut amax) = (0.0, 0.0);
            for &(j, a) in &row.coeffs {
                if a > 0.0 {
                    amin += a * self.lo[j];
                    amax += a * self.hi[j];
                } else {
                    amin += a * self.hi[j];
                    amax += a * self.lo[j];
                }
            }
            let lo = if row.lo.is_finite() { row.lo } else { amin };
            let hi = if row.hi.is_finite() { row.hi } else { amax };
            self.lo[self.n + i] = lo;
            self.hi[self.n + i] = hi.max(lo);
        }
    }

    fn is_fixed(&self, j: usize) -> bool {
        self.hi[j] - self.lo[j] <= 1e-12
    }

    fn compute_duals(&mut self) {
        let m = self.m;
        let mut y = vec![0.0; m];
        for i in 0..m {
            let cb = self.cost(self.head[i]);
            if cb != 0.0 {
                let row = &self.binv[i * m..(i + 1) * m];
                for (yr, b) in y.iter_mut().zip(row) {
                    *yr += cb * b;
                }
            }
        }
        for j in 0..self.n + self.m {
            if self.pos[j] != NONE {
                self.d[j] = 0.0;
                continue;
            }
            let mut dj = self.cost(j);
            self.for_column(j, |r, a| dj -= a * y[r]);
            self.d[j] = dj;
        }
    }

    /// Puts every nonbasic variable at the bound that keeps it dual feasible.
    fn place_nonbasics(&mut self) {
        for j in 0..self.n + self.m {
            if self.pos[j] != NONE {
                continue;
            }
            if self.is_fixed(j) {
                self.at_upper[j] = false;
            } else if self.d[j] < -DUAL_TOL {
                self.at_upper[j] = true;
            } else if self.d[j] > DUAL_TOL {
                self.at_upper[j] = false;
            }
            self.x[j] = if self.at_upper[j] {
                self.hi[j]
            } else {
                self.lo[j]
            };
        }
    }

    fn compute_primal(&mut self) {
        let m = self.m;
        let mut rhs = vec![0.0; m];
        for j in 0..self.n + m {
            if self.pos[j] == NONE && self.x[j] != 0.0 {
                let xj = self.x[j];
                self.for_column(j, |r, a| rhs[r] -= a * xj);
            }
        }
        for i in 0..m {
            let row = &self.binv[i * m..(i + 1) * m];
            self.x[self.head[i]] = row.iter().zip(&rhs).map(|(b, r)| b * r).sum();
        }
    }

    /// Rebuilds the inverse from the structural kernel; falls back to the
    /// slack basis when the kernel is singular.
    fn reinvert(&mut self) {
        let (n, m) = (self.n, self.m);
        let mut logical_basic = vec![false; m];
        let mut structs = Vec::new();
        for (i, &v) in self.head.iter().enumerate() {
            if v >= n {
                logical_basic[v - n] = true;
            } else {
                structs.push((i, v));
            }
        }
        let r1: Vec<usize> = (0..m).filter(|r| !logical_basic[*r]).collect();
        let k = structs.len();
        debug_assert_eq!(r1.len(), k);
        let mut r1_index = vec![NONE; m];
        for (t, &r) in r1.iter().enumerate() {
            r1_index[r] = t;
        }
        let mut kmat = vec![0.0; k * k];
        for (t, &(_, v)) in structs.iter().enumerate() {
            for (r, a) in self.p.column(v) {
                if r1_index[r] != NONE {
                    kmat[r1_index[r] * k + t] = a;
                }
            }
        }
        let Some(kinv) = invert_dense(&mut kmat, k) else {
            self.reset_basis();
            return;
        };
        self.binv.iter_mut().for_each(|b| *b = 0.0);
        for (t, &(posn, _)) in structs.iter().enumerate() {
            for c in 0..k {
                self.binv[posn * m + r1[c]] = kinv[t * k + c];
            }
        }
        for r in 0..m {
            if logical_basic[r] {
                self.binv[self.pos[n + r] * m + r] = -1.0;
            }
        }
        for (t, &(_, v)) in structs.iter().enumerate() {
            for (r, a) in self.p.column(v) {
                if logical_basic[r] {
                    let posn = self.pos[n + r];
                    for c in 0..k {
                        self.binv[posn * m + r1[c]] += a * kinv[t * k + c];
                    }
                }
            }
        }
        self.updates = 0;
    }

    fn refresh(&mut self) {
        self.compute_duals();
        self.place_nonbasics();
        self.compute_primal();
    }

    fn choose_leaving(&self, bland: bool) -> Option<(usize, bool)> {
        let mut best: Option<(usize, bool)> = None;
        let mut best_score = 0.0;
        let mut best_var = NONE;
        for i in 0..self.m {
            let v = self.head[i];
            let xv = self.x[v];
            let (below, above) = (self.lo[v] - xv, xv - self.hi[v]);
            let (viol, to_upper) = if below > PRIMAL_TOL * (1.0 + self.lo[v].abs()) {
                (below, false)
            } else if above > PRIMAL_TOL * (1.0 + self.hi[v].abs()) {
                (above, true)
            } else {
                continue;
            };
            if bland {
                if v < best_var {
                    best_var = v;
                    best = Some((i, to_upper));
                }
            } else if viol > best_score {
                best_score = viol;
                best = Some((i, to_upper));
            }
        }
        best
    }

    fn compute_alpha_row(&mut self, p: usize) {
        let m = self.m;
        self.rho.copy_from_slice(&self.binv[p * m..(p + 1) * m]);
        for j in 0..self.n + m {
            if self.pos[j] != NONE || self.is_fixed(j) {
                self.alpha_row[j] = 0.0;
                continue;
            }
            self.alpha_row[j] = if j < self.n {
                self.p.column(j).map(|(r, a)| a * self.rho[r]).sum()
            } else {
                -self.rho[j - self.n]
            };
        }
    }

    fn ratio_test(&self, to_upper: bool, bland: bool) -> Option<usize> {
        let eligible = |j: usize| -> Option<(f64, f64)> {
            if self.pos[j] != NONE || self.is_fixed(j) {
                return None;
            }
            let a = self.alpha_row[j];
            if a.abs() < PIVOT_TOL {
                return None;
            }
            let up = self.at_upper[j];
            let ok = if to_upper {
                (!up && a > 0.0) || (up && a < 0.0)
            } else {
                (!up && a < 0.0) || (up && a > 0.0)
            };
            if !ok {
                return None;
            }
            let dj = if up {
                (-self.d[j]).max(0.0)
            } else {
                self.d[j].max(0.0)
            };
            Some((dj, a.abs()))
        };
        let total = self.n + self.m;
        if bland {
            let mut best: Option<(f64, usize)> = None;
            for j in 0..total {
                if let Some((dj, a)) = eligible(j) {
                    let r = dj / a;
                    if best.is_none_or(|(b, _)| r < b - 1e-12) {
                        best = Some((r, j));
                    }
                }
            }
            return best.map(|(_, j)| j);
        }
        let mut theta = f64::INFINITY;
        for j in 0..total {
            if let Some((dj, a)) = eligible(j) {
                theta = theta.min((dj + DUAL_TOL) / a);
            }
        }
        if !theta.is_finite() {
            return None;
        }
        let mut best: Option<(f64, usize)> = None;
        for j in 0..total {
            if let Some((dj, a)) = eligible(j) {
                if dj / a <= theta && best.is_none_or(|(ba, _)| a > ba) {
                    best = Some((a, j));
                }
            }
        }
        best.map(|(_, j)| j)
    }

    fn compute_alpha_col(&mut self, q: usize) {
        let m = self.m;
        self.alpha_col.iter_mut().for_each(|a| *a = 0.0);
        let mut entries = Vec::new();
        self.for_column(q, |r, a| entries.push((r, a)));
        for i in 0..m {
            let row = &self.binv[i * m..(i + 1) * m];
            self.alpha_col[i] = entries.iter().map(|&(r, a)| a * row[r]).sum();
        }
    }

    fn pivot(&mut self, p: usize, q: usize, to_upper: bool) {
        let m = self.m;
        let l = self.head[p];
        let target = if to_upper { self.hi[l] } else { self.lo[l] };
        let ap = self.alpha_col[p];
        let delta = (self.x[l] - target) / ap;
        for i in 0..m {
            let v = self.head[i];
            self.x[v] -= delta * self.alpha_col[i];
        }
        self.x[l] = target;
        self.x[q] += delta;

        let t = self.d[q] / self.alpha_row[q];
        for j in 0..self.n + m {
            if self.pos[j] == NONE && self.alpha_row[j] != 0.0 {
                self.d[j] -= t * self.alpha_row[j];
            }
        }
        self.d[l] = -t;
        self.d[q] = 0.0;

        let (before, rest) = self.binv.split_at_mut(p * m);
        let (prow, after) = rest.split_at_mut(m);
        for b in prow.iter_mut() {
            *b /= ap;
        }
        for (i, row) in before.chunks_exact_mut(m).enumerate() {
            let f = self.alpha_col[i];
            if f != 0.0 {
                row.iter_mut()
                    .zip(prow.iter())
                    .for_each(|(b, pb)| *b -= f * pb);
            }
        }
        for (off, row) in after.chunks_exact_mut(m).enumerate() {
            let f = self.alpha_col[p + 1 + off];
            if f != 0.0 {
                row.iter_mut()
                    .zip(prow.iter())
                    .for_each(|(b, pb)| *b -= f * pb);
            }
        }

        self.head[p] = q;
        self.pos[q] = p;
        self.pos[l] = NONE;
        self.at_upper[l] = to_upper;
        self.updates += 1;
        self.fix_dual_infeasibilities();
    }

    /// Flips nonbasic variables whose reduced cost drifted to the wrong sign.
    fn fix_dual_infeasibilities(&mut self) {
        let m = self.m;
        let mut shift = vec![0.0; m];
        let mut flipped = false;
        for j in 0..self.n + m {
            if self.pos[j] != NONE || self.is_fixed(j) {
                continue;
            }
            let wrong = if self.at_upper[j] {
                self.d[j] > DUAL_TOL
            } else {
                self.d[j] < -DUAL_TOL
            };
            if wrong {
                self.at_upper[j] = !self.at_upper[j];
                let new = if self.at_upper[j] {
                    self.hi[j]
                } else {
                    self.lo[j]
                };
                let dx = new - self.x[j];
                self.x[j] = new;
                self.for_column(j, |r, a| shift[r] += a * dx);
                flipped = true;
            }
        }
        if flipped {
            for i in 0..m {
                let row = &self.binv[i * m..(i + 1) * m];
                let dv: f64 = row.iter().zip(&shift).map(|(b, s)| b * s).sum();
                let v = self.head[i];
                self.x[v] -= dv;
            }
        }
    }

    /// Runs the dual simplex from the current basis under the current bounds.
    pub fn solve(&mut self, max_iter: usize) -> LpStatus {
        self.refresh_row_bounds();
        if self.updates > 0 {
            self.reinvert();
        }
        self.refresh();
        let mut bland = false;
        let mut perturbed_once = false;
        let mut best_obj = f64::NEG_INFINITY;
        let mut stall = 0;
        let mut fresh = self.updates == 0;
        let mut done = 0;
        loop {
            if done >= max_iter {
                self.shift.clear();
                return LpStatus::IterationLimit;
            }
            let Some((p, to_upper)) = self.choose_leaving(bland) else {
                if !fresh {
                    self.reinvert();
                    self.refresh();
                    fresh = true;
                    continue;
                }
                if !self.shift.is_empty() {
                    // Drop the perturbation; bound flips restore dual
                    // feasibility and the loop repairs the primal side.
                    self.shift.clear();
                    self.refresh();
                    best_obj = f64::NEG_INFINITY;
                    stall = 0;
                    continue;
                }
                return self.finish();
            };
            self.compute_alpha_row(p);
            let Some(q) = self.ratio_test(to_upper, bland) else {
                if !fresh {
                    self.reinvert();
                    self.refresh();
                    fresh = true;
                    continue;
                }
                self.shift.clear();
                return LpStatus::Infeasible;
            };
            self.compute_alpha_col(q);
            let (ac, ar) = (self.alpha_col[p], self.alpha_row[q]);
            if (ac - ar).abs() > 1e-7 * (1.0 + ac.abs()) || ac.abs() < PIVOT_TOL {
                if !fresh {
                    self.reinvert();
                    self.refresh();
                    fresh = true;
                    continue;
                }
                // Fresh inverse and still inconsistent: restart from slack.
                self.reset_basis();
                self.refresh();
                bland = true;
                continue;
            }
            self.pivot(p, q, to_upper);
            self.iterations += 1;
            done += 1;
            fresh = false;
            if self.updates >= REINVERT_EVERY {
                self.reinvert();
                self.refresh();
                fresh = true;
            }
            if self.x.iter().any(|v| !v.is_finite()) {
                self.reset_basis();
                self.refresh();
                bland = true;
                continue;
            }
            let obj = self.working_objective();
            if obj > best_obj + 1e-12 * (1.0 + obj.abs()) {
                best_obj = obj;
                stall = 0;
            } else {
                stall += 1;
                if stall > STALL_LIMIT {
                    if !perturbed_once {
                        perturbed_once = true;
                        self.perturb();
                        self.refresh();
                        best_obj = f64::NEG_INFINITY;
                    } else {
                        bland = true;
                    }
                    stall = 0;
                }
            }
        }
    }

    fn finish(&self) -> LpStatus {
        for j in 0..self.n {
            if self.artificial[j] && self.x[j].abs() >= 0.5 * BIG {
                return LpStatus::Unbounded;
            }
        }
        LpStatus::Optimal
    }
}

/// Gauss-Jordan inverse with partial pivoting; `None` if singular.
fn invert_dense(a: &mut [f64], k: usize) -> Option<Vec<f64>> {
    let mut inv = vec![0.0; k * k];
    for i in 0..k {
        inv[i * k + i] = 1.0;
    }
    for c in 0..k {
        let (mut pr, mut pv) = (c, a[c * k + c].abs());
        for r in c + 1..k {
            if a[r * k + c].abs() > pv {
                pr = r;
                pv = a[r * k + c].abs();
            }
        }
        if pv < 1e-11 {
            return None;
        }
        if pr != c {
            for col in 0..k {
                a.swap(pr * k + col, c * k + col);
                inv.swap(pr * k + col, c * k + col);
            }
        }
        let piv = a[c * k + c];
        for col in 0..k {
            a[c * k + col] /= piv;
            inv[c * k + col] /= piv;
        }
        for r in 0..k {
            if r == c {
                continue;
            }
            let f = a[r * k + c];
            if f == 0.0 {
                continue;
            }
            for col in 0..k {
                a[r * k + col] -= f * a[c * k + col];
                inv[r * k + col] -= f * inv[c * k + col];
            }
        }
    }
    Some(inv)
}
