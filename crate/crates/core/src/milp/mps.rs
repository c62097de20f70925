//! Fixed-format MPS writer.
//!
//! Column and row names are replaced by generated 8-character identifiers
//! (`C0000001`, `R0000001`) so every record fits the fixed field layout;
//! comment lines at the top map them back to model names. Maximization
//! problems are written with the objective negated, since fixed MPS has no
//! objective-sense record. The objective constant is recorded in a comment
//! only.

use std::fmt::Write as _;

use super::{MilpModel, ObjSense, Sense, VarKind};

const OBJ_ROW: &str = "OBJ";

fn col_name(j: usize) -> String {
    format!("C{:07}", j + 1)
}

fn row_name(i: usize) -> String {
    format!("R{:07}", i + 1)
}

/// Formats `v` into at most 12 characters, keeping as many significant
/// digits as fit.
pub fn format_number(v: f64) -> String {
    let plain = format!("{v}");
    if plain.len() <= 12 {
        return plain;
    }
    let mut best: Option<(f64, String)> = None;
    let mut consider = |s: String| {
        if s.len() <= 12 {
            if let Ok(parsed) = s.parse::<f64>() {
                let err = (parsed - v).abs();
                if best.as_ref().is_none_or(|(e, _)| err < *e) {
                    best = Some((err, s));
                }
            }
        }
    };
    for digits in (0..=11).rev() {
        consider(format!("{v:.digits$e}"));
        consider(format!("{v:.digits$}"));
    }
    best.map(|(_, s)| s).unwrap_or(plain)
}

fn field_line(out: &mut String, code: &str, name1: &str, name2: &str, value: Option<f64>) {
    let mut line = format!(" {code:<2} {name1:<8}  {name2:<8}");
    if let Some(v) = value {
        let _ = write!(line, "  {:>12}", format_number(v));
    }
    out.push_str(line.trim_end());
    out.push('\n');
}

/// Serializes `model` as fixed-format MPS.
pub fn export_mps(model: &MilpModel) -> String {
    let mut out = String::new();
    let sign = match model.obj_sense() {
        ObjSense::Minimize => 1.0,
        ObjSense::Maximize => -1.0,
    };
    let _ = writeln!(out, "* model: {}", model.name);
    if model.obj_sense() == ObjSense::Maximize {
        out.push_str("* objective negated: original sense is maximize\n");
    }
    let _ = writeln!(out, "* objective constant: {}", model.obj_constant());
    for (j, v) in model.variables().iter().enumerate() {
        let _ = writeln!(out, "* {} {}", col_name(j), v.name);
    }
    for (i, c) in model.constraints().iter().enumerate() {
        let _ = writeln!(out, "* {} {}", row_name(i), c.name);
    }
    let short: String = model
        .name
        .chars()
        .filter(|c| !c.is_whitespace())
        .take(8)
        .collect();
    let _ = writeln!(
        out,
        "NAME          {}",
        if short.is_empty() { "MODEL" } else { &short }
    );

    out.push_str("ROWS\n");
    field_line(&mut out, "N", OBJ_ROW, "", None);
    for (i, c) in model.constraints().iter().enumerate() {
        let code = match c.sense {
            Sense::Le => "L",
            Sense::Ge => "G",
            Sense::Eq => "E",
        };
        field_line(&mut out, code, &row_name(i), "", None);
    }

    // Column-major view of the rows.
    let n = model.num_vars();
    let mut cols: Vec<Vec<(usize, f64)>> = vec![Vec::new(); n];
    for (i, c) in model.constraints().iter().enumerate() {
        for (v, a) in &c.coeffs {
            cols[v.index()].push((i, *a));
        }
    }
    let mut obj = vec![0.0; n];
    for (v, c) in model.objective() {
        obj[v.index()] += sign * c;
    }

    out.push_str("COLUMNS\n");
    let mut in_int = false;
    let mut marker = 0;
    for (j, var) in model.variables().iter().enumerate() {
        let is_int = var.kind == VarKind::Binary;
        if is_int != in_int {
            let name = if is_int { "'INTORG'" } else { "'INTEND'" };
            let _ = writeln!(out, "    M{marker:07}  'MARKER'                 {name}");
            marker += 1;
            in_int = is_int;
        }
        let name = col_name(j);
        if obj[j] != 0.0 {
            field_line(&mut out, "", &name, OBJ_ROW, Some(obj[j]));
        }
        for (i, a) in &cols[j] {
            field_line(&mut out, "", &name, &row_name(*i), Some(*a));
        }
        if obj[j] == 0.0 && cols[j].is_empty() {
            // Keep the column declared so its bounds remain attached.
            field_line(&mut out, "", &name, OBJ_ROW, Some(0.0));
        }
    }
    if in_int {
        let _ = writeln!(out, "    M{marker:07}  'MARKER'                 'INTEND'");
    }

    out.push_str("RHS\n");
    for (i, c) in model.constraints().iter().enumerate() {
        if c.rhs != 0.0 {
            field_line(&mut out, "", "RHS", &row_name(i), Some(c.rhs));
        }
    }

    out.push_str("BOUNDS\n");
    for (j, v) in model.variables().iter().enumerate() {
        let name = col_name(j);
        let (lo, hi) = (v.lo, v.hi);
        if lo == hi {
            field_line(&mut out, "FX", "BND", &name, Some(lo));
            continue;
        }
        match (lo.is_finite(), hi.is_finite()) {
            (false, false) => field_line(&mut out, "FR", "BND", &name, None),
            (false, true) => {
                field_line(&mut out, "MI", "BND", &name, None);
                field_line(&mut out, "UP", "BND", &name, Some(hi));
            }
            (true, hi_finite) => {
                if lo != 0.0 || v.kind == VarKind::Binary || (hi_finite && hi < 0.0) {
                    field_line(&mut out, "LO", "BND", &name, Some(lo));
                }
                if hi_finite {
                    field_line(&mut out, "UP", "BND", &name, Some(hi));
                }
            }
        }
    }
    out.push_str("ENDATA\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::milp::LinExpr;

    #[test]
    fn single_variable_max_problem() {
        let mut m = MilpModel::new("tiny");
        let x = m.add_continuous(0.0, f64::INFINITY, "x").unwrap();
        m.add_linear_constraint(&[(x, 1.0)], Sense::Le, 1.0, "cap")
            .unwrap();
        m.set_objective(ObjSense::Maximize, LinExpr::var(x))
            .unwrap();
        let text = export_mps(&m);
        let rows: Vec<&str> = text
            .lines()
            .skip_while(|l| *l != "ROWS")
            .skip(1)
            .take_while(|l| l.starts_with(' '))
            .collect();
        assert_eq!(rows, vec![" N  OBJ", " L  R0000001"]);
        assert!(text.contains("    C0000001  OBJ                 -1"));
        assert!(text.contains("    RHS       R0000001             1"));
        assert!(text.trim_end().ends_with("ENDATA"));
    }

    #[test]
    fn binaries_are_wrapped_in_markers() {
        let mut m = MilpModel::new("bin");
        let x = m.add_binary("x");
        let y = m.add_continuous(0.0, 2.0, "y").unwrap();
        m.add_linear_constraint(&[(x, 1.0), (y, 1.0)], Sense::Le, 2.0, "c")
            .unwrap();
        let text = export_mps(&m);
        assert_eq!(text.matches("'INTORG'").count(), 1);
        assert_eq!(text.matches("'INTEND'").count(), 1);
        let org = text.find("'INTORG'").unwrap();
        let end = text.find("'INTEND'").unwrap();
        let col = text.find("    C0000001").unwrap();
        assert!(org < col && col < end);
        assert!(text.contains(" UP BND       C0000001             1"));
    }

    #[test]
    fn numbers_fit_the_value_field() {
        for v in [
            1.0 / 0.0576,
            -1.0 / 3.0,
            1e-9 / 7.0,
            123456789.123,
            -0.000012345678,
        ] {
            let s = format_number(v);
            assert!(s.len() <= 12, "{s}");
            let back: f64 = s.parse().unwrap();
            assert!((back - v).abs() <= 1e-6 * v.abs(), "{v} -> {s}");
        }
    }
}
