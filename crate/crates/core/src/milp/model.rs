use std::fmt;

use super::{LinExpr, MilpError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VarId(pub(crate) usize);

impl VarId {
    pub fn index(self) -> usize {
        self.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ConId(pub(crate) usize);

impl ConId {
    pub fn index(self) -> usize {
        self.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VarKind {
    Continuous,
    Binary,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sense {
    Le,
    Eq,
    Ge,
}

impl Sense {
    fn symbol(self) -> &'static str {
        match self {
            Sense::Le => "<=",
            Sense::Eq => "=",
            Sense::Ge => ">=",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ObjSense {
    Minimize,
    Maximize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Variable {
    pub name: String,
    pub lo: f64,
    pub hi: f64,
    pub kind: VarKind,
}

/// Sparse row `coeffs . x (sense) rhs`.
#[derive(Debug, Clone, PartialEq)]
pub struct Constraint {
    pub name: String,
    pub coeffs: Vec<(VarId, f64)>,
    pub sense: Sense,
    pub rhs: f64,
}

impl Constraint {
    pub fn activity(&self, values: &[f64]) -> f64 {
        self.coeffs.iter().map(|(v, c)| c * values[v.0]).sum()
    }

    /// Amount by which `values` violates this row; zero when satisfied.
    pub fn violation(&self, values: &[f64]) -> f64 {
        let act = self.activity(values);
        match self.sense {
            Sense::Le => (act - self.rhs).max(0.0),
            Sense::Ge => (self.rhs - act).max(0.0),
            Sense::Eq => (act - self.rhs).abs(),
        }
    }
}

/// Mixed-binary linear program with sparse rows.
#[derive(Debug, Clone, PartialEq)]
pub struct MilpModel {
    pub name: String,
    vars: Vec<Variable>,
    cons: Vec<Constraint>,
    obj_sense: ObjSense,
    objective: Vec<(VarId, f64)>,
    obj_constant: f64,
}

impl Default for MilpModel {
    fn default() -> Self {
        MilpModel::new("model")
    }
}

impl MilpModel {
    pub fn new(name: impl Into<String>) -> Self {
        MilpModel {
            name: name.into(),
            vars: Vec::new(),
            cons: Vec::new(),
            obj_sense: ObjSense::Minimize,
            objective: Vec::new(),
            obj_constant: 0.0,
        }
    }

    pub fn add_variable(
        &mut self,
        lo: f64,
        hi: f64,
        kind: VarKind,
        name: impl Into<String>,
    ) -> Result<VarId, MilpError> {
        let name = name.into();
        if lo.is_nan() || hi.is_nan() || lo > hi {
            return Err(MilpError::BadBounds { name, lo, hi });
        }
        if kind == VarKind::Binary
            && (lo < 0.0 || hi > 1.0 || lo.fract() != 0.0 || hi.fract() != 0.0)
        {
            return Err(MilpError::BadBounds { name, lo, hi });
        }
        let id = VarId(self.vars.len());
        self.vars.push(Variable { name, lo, hi, kind });
        Ok(id)
    }

    pub fn add_binary(&mut self, name: impl Into<String>) -> VarId {
        self.add_variable(0.0, 1.0, VarKind::Binary, name)
            .expect("[0, 1] bounds are valid")
    }

    pub fn add_continuous(
        &mut self,
        lo: f64,
        hi: f64,
        name: impl Into<String>,
    ) -> Result<VarId, MilpError> {
        self.add_variable(lo, hi, VarKind::Continuous, name)
    }

    /// Appends `row (sense) rhs`; duplicate entries are merged.
    pub fn add_linear_constraint(
        &mut self,
        row: &[(VarId, f64)],
        sense: Sense,
        rhs: f64,
        name: impl Into<String>,
    ) -> Result<ConId, MilpError> {
        let expr = LinExpr {
            terms: row.to_vec(),
            constant: 0.0,
        };
        self.add_constraint(expr, sense, rhs, name)
    }

    /// Appends `expr (sense) rhs`; the expression constant moves to the right side.
    pub fn add_constraint(
        &mut self,
        expr: LinExpr,
        sense: Sense,
        rhs: f64,
        name: impl Into<String>,
    ) -> Result<ConId, MilpError> {
        let name = name.into();
        if let Some((v, _)) = expr.terms.iter().find(|(v, _)| v.0 >= self.vars.len()) {
            return Err(MilpError::UnknownVariable {
                index: v.0,
                context: name,
            });
        }
        if !rhs.is_finite() || !expr.constant.is_finite() {
            return Err(MilpError::NonFinite { context: name });
        }
        let expr = expr.normalized();
        let id = ConId(self.cons.len());
        self.cons.push(Constraint {
            name,
            coeffs: expr.terms,
            sense,
            rhs: rhs - expr.constant,
        });
        Ok(id)
    }

    /// `lhs (sense) rhs` with expressions on both sides.
    pub fn add_relation(
        &mut self,
        lhs: LinExpr,
        sense: Sense,
        rhs: LinExpr,
        name: impl Into<String>,
    ) -> Result<ConId, MilpError> {
        self.add_constraint(lhs - rhs, sense, 0.0, name)
    }

    pub fn set_objective(&mut self, sense: ObjSense, expr: LinExpr) -> Result<(), MilpError> {
        if let Some((v, _)) = expr.terms.iter().find(|(v, _)| v.0 >= self.vars.len()) {
            return Err(MilpError::UnknownVariable {
                index: v.0,
                context: "objective".into(),
            });
        }
        let expr = expr.normalized();
        self.obj_sense = sense;
        self.objective = expr.terms;
        self.obj_constant = expr.constant;
        Ok(())
    }

    pub fn set_bounds(&mut self, v: VarId, lo: f64, hi: f64) -> Result<(), MilpError> {
        let var = self.vars.get_mut(v.0).ok_or(MilpError::UnknownVariable {
            index: v.0,
            context: "bounds".into(),
        })?;
        if lo.is_nan() || hi.is_nan() || lo > hi {
            return Err(MilpError::BadBounds {
                name: var.name.clone(),
                lo,
                hi,
            });
        }
        var.lo = lo;
        var.hi = hi;
        Ok(())
    }

    pub fn num_vars(&self) -> usize {
        self.vars.len()
    }

    pub fn num_constraints(&self) -> usize {
        self.cons.len()
    }

    pub fn num_binaries(&self) -> usize {
        self.vars
            .iter()
            .filter(|v| v.kind == VarKind::Binary)
            .count()
    }

    pub fn variables(&self) -> &[Variable] {
        &self.vars
    }

    pub fn variable(&self, v: VarId) -> &Variable {
        &self.vars[v.0]
    }

    pub fn constraints(&self) -> &[Constraint] {
        &self.cons
    }

    pub fn constraint(&self, c: ConId) -> &Constraint {
        &self.cons[c.0]
    }

    pub fn obj_sense(&self) -> ObjSense {
        self.obj_sense
    }

    pub fn objective(&self) -> &[(VarId, f64)] {
        &self.objective
    }

    pub fn obj_constant(&self) -> f64 {
        self.obj_constant
    }

    pub fn eval_objective(&self, values: &[f64]) -> f64 {
        self.obj_constant
            + self
                .objective
                .iter()
                .map(|(v, c)| c * values[v.0])
                .sum::<f64>()
    }

    pub fn var_by_name(&self, name: &str) -> Option<VarId> {
        self.vars.iter().position(|v| v.name == name).map(VarId)
    }

    /// Copy with every binary relaxed to a continuous `[lo, hi]` variable.
    pub fn relaxed(&self) -> MilpModel {
        let mut m = self.clone();
        for v in &mut m.vars {
            v.kind = VarKind::Continuous;
        }
        m
    }
}

/// Human-readable LP-style dump.
impl fmt::Display for MilpModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let term_list = |terms: &[(VarId, f64)]| -> String {
            if terms.is_empty() {
                return "0".to_string();
            }
            terms
                .iter()
                .enumerate()
                .map(|(i, (v, c))| {
                    let name = &self.vars[v.0].name;
                    match (i, *c < 0.0) {
                        (0, false) => format!("{c} {name}"),
                        (0, true) => format!("- {} {name}", -c),
                        (_, false) => format!(" + {c} {name}"),
                        (_, true) => format!(" - {} {name}", -c),
                    }
                })
                .collect()
        };
        writeln!(f, "\\ model {}", self.name)?;
        let sense = match self.obj_sense {
            ObjSense::Minimize => "minimize",
            ObjSense::Maximize => "maximize",
        };
        writeln!(
            f,
            "{sense}\n  obj: {} + {}",
            term_list(&self.objective),
            self.obj_constant
        )?;
        writeln!(f, "subject to")?;
        for c in &self.cons {
            writeln!(
                f,
                "  {}: {} {} {}",
                c.name,
                term_list(&c.coeffs),
                c.sense.symbol(),
                c.rhs
            )?;
        }
        writeln!(f, "bounds")?;
        for v in &self.vars {
            writeln!(f, "  {} <= {} <= {}", v.lo, v.name, v.hi)?;
        }
        let bins: Vec<&str> = self
            .vars
            .iter()
            .filter(|v| v.kind == VarKind::Binary)
            .map(|v| v.name.as_str())
            .collect();
        if !bins.is_empty() {
            writeln!(f, "binary\n  {}", bins.join(" "))?;
        }
        writeln!(f, "end")
    }
}
