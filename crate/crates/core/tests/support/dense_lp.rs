//! Textbook two-phase tableau simplex with Bland's rule. Dense, slow and
//! deliberately unrelated to the library's revised dual simplex.

#![allow(clippy::needless_range_loop)]

#[derive(Debug, Clone, PartialEq)]
pub enum DenseOutcome {
    Optimal { objective: f64, x: Vec<f64> },
    Infeasible,
    Unbounded,
}

/// `min c.x` s.t. `row_lo <= A x <= row_hi`, `lo <= x <= hi`; all column
/// bounds finite.
pub struct DenseLp {
    pub a: Vec<Vec<f64>>,
    pub row_lo: Vec<f64>,
    pub row_hi: Vec<f64>,
    pub lo: Vec<f64>,
    pub hi: Vec<f64>,
    pub c: Vec<f64>,
}

const EPS: f64 = 1e-10;

fn pivot(t: &mut [Vec<f64>], r: usize, c: usize) {
    let p = t[r][c];
    for v in t[r].iter_mut() {
        *v /= p;
    }
    let prow = t[r].clone();
    for (i, row) in t.iter_mut().enumerate() {
        if i != r && row[c].abs() > 0.0 {
            let f = row[c];
            for (v, pv) in row.iter_mut().zip(&prow) {
                *v -= f * pv;
            }
        }
    }
}

/// Minimizes the last row of the tableau over the columns allowed by
/// `allowed`; returns false if unbounded.
fn run(t: &mut [Vec<f64>], basis: &mut [usize], allowed: &dyn Fn(usize) -> bool) -> bool {
    let m = basis.len();
    let width = t[0].len() - 1;
    loop {
        let obj = &t[m];
        let Some(c) = (0..width).find(|&j| allowed(j) && obj[j] < -EPS) else {
            return true;
        };
        let mut best: Option<(f64, usize)> = None;
        for i in 0..m {
            if t[i][c] > EPS {
                let ratio = t[i][width] / t[i][c];
                match best {
                    None => best = Some((ratio, i)),
                    Some((b, bi)) => {
                        if ratio < b - EPS || (ratio <= b + EPS && basis[i] < basis[bi]) {
                            best = Some((ratio, i));
                        }
                    }
                }
            }
        }
        let Some((_, r)) = best else { return false };
        pivot(t, r, c);
        basis[r] = c;
    }
}

impl DenseLp {
    pub fn solve(&self) -> DenseOutcome {
        let n = self.c.len();
        // Standard-form rows: (coefficients over y = x - lo, kind, rhs),
        // kind: -1 for <=, +1 for >=, 0 for =.
        let mut rows: Vec<(Vec<f64>, i32, f64)> = Vec::new();
        for (i, a) in self.a.iter().enumerate() {
            let shift: f64 = a.iter().zip(&self.lo).map(|(a, l)| a * l).sum();
            let (lo, hi) = (self.row_lo[i], self.row_hi[i]);
            if lo.is_finite() && hi.is_finite() && (hi - lo).abs() < 1e-15 {
                rows.push((a.clone(), 0, lo - shift));
                continue;
            }
            if hi.is_finite() {
                rows.push((a.clone(), -1, hi - shift));
            }
            if lo.is_finite() {
                rows.push((a.clone(), 1, lo - shift));
            }
        }
        for j in 0..n {
            let mut e = vec![0.0; n];
            e[j] = 1.0;
            rows.push((e, -1, self.hi[j] - self.lo[j]));
        }
        let m = rows.len();
        let n_slack = rows.iter().filter(|r| r.1 != 0).count();
        let width = n + n_slack + m;
        let mut t = vec![vec![0.0; width + 1]; m + 1];
        let mut basis = vec![0; m];
        let mut s = n;
        for (i, (a, kind, b)) in rows.iter().enumerate() {
            t[i][..n].copy_from_slice(a);
            if *kind != 0 {
                t[i][s] = if *kind < 0 { 1.0 } else { -1.0 };
                s += 1;
            }
            t[i][width] = *b;
            if *b < 0.0 {
                for v in t[i].iter_mut() {
                    *v = -*v;
                }
            }
            t[i][n + n_slack + i] = 1.0;
            basis[i] = n + n_slack + i;
        }
        // Phase I objective: sum of artificials, expressed in nonbasics.
        for i in 0..m {
            for j in 0..=width {
                if j < n + n_slack || j == width {
                    t[m][j] -= t[i][j];
                }
            }
        }
        run(&mut t, &mut basis, &|_| true);
        if -t[m][width] > 1e-7 {
            return DenseOutcome::Infeasible;
        }
        // Drive remaining artificials out of the basis where possible.
        for i in 0..m {
            if basis[i] >= n + n_slack {
                if let Some(c) = (0..n + n_slack).find(|&j| t[i][j].abs() > 1e-9) {
                    pivot(&mut t, i, c);
                    basis[i] = c;
                }
            }
        }
        // Phase II objective.
        for v in t[m].iter_mut() {
            *v = 0.0;
        }
        t[m][..n].copy_from_slice(&self.c);
        for i in 0..m {
            let b = basis[i];
            let f = t[m][b];
            if f != 0.0 {
                let row = t[i].clone();
                for (v, rv) in t[m].iter_mut().zip(&row) {
                    *v -= f * rv;
                }
            }
        }
        let real = n + n_slack;
        if !run(&mut t, &mut basis, &|j| j < real) {
            return DenseOutcome::Unbounded;
        }
        let mut x = self.lo.clone();
        for i in 0..m {
            if basis[i] < n {
                x[basis[i]] += t[i][width];
            }
        }
        let objective = self.c.iter().zip(&x).map(|(c, x)| c * x).sum();
        DenseOutcome::Optimal { objective, x }
    }
}
