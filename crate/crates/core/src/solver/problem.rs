use crate::milp::{MilpModel, ObjSense, Sense, VarKind};

/// Sparse row of an [`LpProblem`].
#[derive(Debug, Clone, PartialEq)]
pub(crate) struct Row {
    pub coeffs: Vec<(usize, f64)>,
    pub lo: f64,
    pub hi: f64,
}

/// Minimization LP `min c.x` subject to `row_lo <= A x <= row_hi`,
/// `col_lo <= x <= col_hi`, stored both row-wise and column-wise.
#[derive(Debug, Clone)]
pub(crate) struct LpProblem {
    pub rows: Vec<Row>,
    pub col_start: Vec<usize>,
    pub col_rows: Vec<usize>,
    pub col_vals: Vec<f64>,
    pub col_lo: Vec<f64>,
    pub col_hi: Vec<f64>,
    pub cost: Vec<f64>,
    pub is_int: Vec<bool>,
    pub obj_offset: f64,
}

impl LpProblem {
    pub fn new(
        rows: Vec<Row>,
        col_lo: Vec<f64>,
        col_hi: Vec<f64>,
        cost: Vec<f64>,
        is_int: Vec<bool>,
        obj_offset: f64,
    ) -> Self {
        let n = col_lo.len();
        let mut counts = vec![0usize; n + 1];
        for r in &rows {
            for (j, _) in &r.coeffs {
                counts[j + 1] += 1;
            }
        }
        for j in 0..n {
            counts[j + 1] += counts[j];
        }
        let nnz = counts[n];
        let mut fill = counts.clone();
        let mut col_rows = vec![0; nnz];
        let mut col_vals = vec![0.0; nnz];
        for (i, r) in rows.iter().enumerate() {
            for &(j, a) in &r.coeffs {
                col_rows[fill[j]] = i;
                col_vals[fill[j]] = a;
                fill[j] += 1;
            }
        }
        LpProblem {
            rows,
            col_start: counts,
            col_rows,
            col_vals,
            col_lo,
            col_hi,
            cost,
            is_int,
            obj_offset,
        }
    }

    /// Minimization form of `model`; the sign of the objective is flipped
    /// for maximization.
    pub fn from_model(model: &MilpModel) -> Self {
        let sign = match model.obj_sense() {
            ObjSense::Minimize => 1.0,
            ObjSense::Maximize => -1.0,
        };
        let rows = model
            .constraints()
            .iter()
            .map(|c| {
                let (lo, hi) = match c.sense {
                    Sense::Le => (f64::NEG_INFINITY, c.rhs),
                    Sense::Ge => (c.rhs, f64::INFINITY),
                    Sense::Eq => (c.rhs, c.rhs),
                };
                Row {
                    coeffs: c.coeffs.iter().map(|(v, a)| (v.index(), *a)).collect(),
                    lo,
                    hi,
                }
            })
            .collect();
        let mut cost = vec![0.0; model.num_vars()];
        for (v, c) in model.objective() {
            cost[v.index()] += sign * c;
        }
        let vars = model.variables();
        LpProblem::new(
            rows,
            vars.iter().map(|v| v.lo).collect(),
            vars.iter().map(|v| v.hi).collect(),
            cost,
            vars.iter().map(|v| v.kind == VarKind::Binary).collect(),
            sign * model.obj_constant(),
        )
    }

    pub fn num_cols(&self) -> usize {
        self.col_lo.len()
    }

    pub fn num_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn column(&self, j: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let (s, e) = (self.col_start[j], self.col_start[j + 1]);
        self.col_rows[s..e]
            .iter()
            .copied()
            .zip(self.col_vals[s..e].iter().copied())
    }

    pub fn objective(&self, x: &[f64]) -> f64 {
        self.obj_offset + self.cost.iter().zip(x).map(|(c, v)| c * v).sum::<f64>()
    }
}
