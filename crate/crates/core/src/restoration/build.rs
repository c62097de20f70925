use super::vars::{flow_bounds, RestorationVars};
use super::{HorizonSpec, RestorationError};
use crate::grid::{build_incidence, FrozenBound, NetworkModel};
use crate::milp::{LinExpr, MilpModel, ObjSense, Sense, VarId};

type Result<T> = std::result::Result<T, RestorationError>;

fn var(v: VarId) -> LinExpr {
    LinExpr::var(v)
}

/// Range of `e` over the variable box.
fn expr_range(model: &MilpModel, e: &LinExpr) -> (f64, f64) {
    let (mut lo, mut hi) = (e.constant, e.constant);
    for &(v, c) in &e.terms {
        let var = model.variable(v);
        let (a, b) = (c * var.lo, c * var.hi);
        lo += a.min(b);
        hi += a.max(b);
    }
    (lo, hi)
}

/// `on = 1` implies `e <= rhs`, with the tightest big-M the bounds allow.
fn implied_le(
    model: &mut MilpModel,
    on: LinExpr,
    e: LinExpr,
    rhs: f64,
    name: String,
) -> Result<()> {
    let m = expr_range(model, &e).1 - rhs;
    if m > 1e-12 {
        model.add_constraint(e + on * m, Sense::Le, rhs + m, name)?;
    }
    Ok(())
}

/// `on = 1` implies `e >= rhs`.
fn implied_ge(
    model: &mut MilpModel,
    on: LinExpr,
    e: LinExpr,
    rhs: f64,
    name: String,
) -> Result<()> {
    let m = rhs - expr_range(model, &e).0;
    if m > 1e-12 {
        model.add_constraint(e - on * m, Sense::Ge, rhs - m, name)?;
    }
    Ok(())
}

fn implied_eq(
    model: &mut MilpModel,
    on: LinExpr,
    e: LinExpr,
    rhs: f64,
    name: String,
) -> Result<()> {
    implied_le(model, on.clone(), e.clone(), rhs, format!("{name}_le"))?;
    implied_ge(model, on, e, rhs, format!("{name}_ge"))
}

fn window(horizon: &HorizonSpec) -> std::ops::RangeInclusive<usize> {
    horizon.k0 + 1..=horizon.end()
}

/// Generator status at any step: a variable inside the window, a constant
/// from the committed history before it.
fn gen_status(horizon: &HorizonSpec, vars: &RestorationVars, i: usize, k: i64) -> LinExpr {
    if k >= horizon.k0 as i64 {
        var(vars.at(k as usize).gen[i])
    } else {
        LinExpr::constant(horizon.gen_history(i, k) as u8 as f64)
    }
}

/// Persistence, one activation per element type and step, line-bus and
/// element-bus energization logic.
pub fn build_status_logic(
    model: &mut MilpModel,
    net: &NetworkModel,
    horizon: &HorizonSpec,
    vars: &RestorationVars,
) -> Result<()> {
    let pos = |id: u32| net.bus_index(id).expect("validated network");
    for k in window(horizon) {
        let (cur, prev) = (vars.at(k), vars.at(k - 1));
        let groups = [
            ("bus", &cur.bus, &prev.bus),
            ("line", &cur.line, &prev.line),
            ("load", &cur.load, &prev.load),
            ("gen", &cur.gen, &prev.gen),
            ("ess", &cur.ess, &prev.ess),
        ];
        for (kind, now, before) in groups {
            let mut count = LinExpr::new();
            for (i, (a, b)) in now.iter().zip(before.iter()).enumerate() {
                model.add_relation(var(*a), Sense::Ge, var(*b), format!("stay_{kind}_{i}_{k}"))?;
                count += var(*a) - *b;
            }
            if now.len() > 1 {
                model.add_constraint(count, Sense::Le, 1.0, format!("one_{kind}_{k}"))?;
            }
        }
        let mut incident: Vec<LinExpr> = vec![LinExpr::new(); net.buses.len()];
        for (i, l) in net.lines.iter().enumerate() {
            let (f, t) = (pos(l.from), pos(l.to));
            incident[f] += var(cur.line[i]);
            incident[t] += var(cur.line[i]);
            model.add_relation(
                var(cur.line[i]),
                Sense::Le,
                var(cur.bus[f]),
                format!("line_bus_{i}_f_{k}"),
            )?;
            model.add_relation(
                var(cur.line[i]),
                Sense::Le,
                var(cur.bus[t]),
                format!("line_bus_{i}_t_{k}"),
            )?;
            model.add_relation(
                var(cur.line[i]),
                Sense::Le,
                var(prev.bus[f]) + prev.bus[t],
                format!("line_from_live_{i}_{k}"),
            )?;
        }
        for (j, inc) in incident.into_iter().enumerate() {
            if !horizon.initial_bus[j] {
                model.add_relation(inc, Sense::Ge, var(cur.bus[j]), format!("bus_fed_{j}_{k}"))?;
            }
        }
        for (i, d) in net.loads.iter().enumerate() {
            model.add_relation(
                var(cur.load[i]),
                Sense::Le,
                var(cur.bus[pos(d.bus)]),
                format!("load_bus_{i}_{k}"),
            )?;
        }
        for (i, s) in net.ess.iter().enumerate() {
            model.add_relation(
                var(cur.ess[i]),
                Sense::Le,
                var(cur.bus[pos(s.bus)]),
                format!("ess_bus_{i}_{k}"),
            )?;
        }
        for (i, g) in net.generators.iter().enumerate() {
            model.add_relation(
                var(cur.gen[i]),
                Sense::Le,
                var(prev.bus[pos(g.bus)]),
                format!("gen_bus_{i}_{k}"),
            )?;
        }
    }
    Ok(())
}

/// Nodal balance, DC line flows on energized lines and angle gating.
pub fn build_power_flow(
    model: &mut MilpModel,
    net: &NetworkModel,
    horizon: &HorizonSpec,
    vars: &RestorationVars,
) -> Result<()> {
    let inc = build_incidence(net);
    let (p_max, theta_max) = flow_bounds(net);
    let pos = |id: u32| net.bus_index(id).expect("validated network");
    for k in window(horizon) {
        let cur = vars.at(k);
        let mut balance: Vec<LinExpr> = vec![LinExpr::new(); net.buses.len()];
        for (i, g) in net.generators.iter().enumerate() {
            balance[pos(g.bus)] += var(cur.p_gen[i]);
        }
        for (i, d) in net.loads.iter().enumerate() {
            balance[pos(d.bus)] -= LinExpr::term(cur.load[i], d.p);
        }
        for (i, s) in net.ess.iter().enumerate() {
            balance[pos(s.bus)] += var(cur.p_ess[i]);
        }
        for l in 0..net.lines.len() {
            for (b, bal) in balance.iter_mut().enumerate() {
                let a = inc.a.get(b, l);
                if a != 0 {
                    *bal -= LinExpr::term(cur.p_line[l], a as f64);
                }
            }
        }
        for (b, bal) in balance.into_iter().enumerate() {
            model.add_constraint(bal, Sense::Eq, 0.0, format!("balance_{}_{k}", net.buses[b]))?;
        }
        for (i, l) in net.lines.iter().enumerate() {
            let flow = var(cur.p_line[i]) - LinExpr::term(cur.theta[pos(l.from)], 1.0 / l.x)
                + LinExpr::term(cur.theta[pos(l.to)], 1.0 / l.x);
            implied_eq(model, var(cur.line[i]), flow, 0.0, format!("dcpf_{i}_{k}"))?;
            let pl = var(cur.p_line[i]);
            model.add_constraint(
                pl.clone() - LinExpr::term(cur.line[i], p_max),
                Sense::Le,
                0.0,
                format!("flow_off_{i}_{k}_le"),
            )?;
            model.add_constraint(
                pl + LinExpr::term(cur.line[i], p_max),
                Sense::Ge,
                0.0,
                format!("flow_off_{i}_{k}_ge"),
            )?;
        }
        for (b, &th) in cur.theta.iter().enumerate() {
            model.add_constraint(
                var(th) - LinExpr::term(cur.bus[b], theta_max),
                Sense::Le,
                0.0,
                format!("angle_{b}_{k}_le"),
            )?;
            model.add_constraint(
                var(th) + LinExpr::term(cur.bus[b], theta_max),
                Sense::Ge,
                0.0,
                format!("angle_{b}_{k}_ge"),
            )?;
        }
    }
    Ok(())
}

/// Start-up phase identities, phase-dependent output gating and the ramp
/// reference.
pub fn build_nbsu_phases(
    model: &mut MilpModel,
    net: &NetworkModel,
    horizon: &HorizonSpec,
    vars: &RestorationVars,
) -> Result<()> {
    for k in window(horizon) {
        let (cur, prev) = (vars.at(k), vars.at(k - 1));
        let ki = k as i64;
        for (i, g) in net.generators.iter().enumerate() {
            let tc = g.t_crank as i64;
            let tr = g.t_ramp as i64;
            let name = &g.name;
            let bg = |kk: i64| gen_status(horizon, vars, i, kk);
            let (bgc, bgr, bgo) = (var(cur.crank[i]), var(cur.ramp[i]), var(cur.online[i]));
            model.add_relation(
                bgc.clone(),
                Sense::Eq,
                bg(ki) - bg(ki - tc),
                format!("phase_c_{name}_{k}"),
            )?;
            model.add_relation(
                bgr.clone(),
                Sense::Eq,
                bg(ki - tc) - bg(ki - tc - tr),
                format!("phase_r_{name}_{k}"),
            )?;
            model.add_relation(
                bgo.clone(),
                Sense::Eq,
                bg(ki) - bgc.clone() - bgr.clone(),
                format!("phase_o_{name}_{k}"),
            )?;

            let pg = var(cur.p_gen[i]);
            let pr = var(cur.p_ramp[i]);
            implied_eq(
                model,
                bgc.clone(),
                pg.clone(),
                -g.p_crank,
                format!("crank_{name}_{k}"),
            )?;
            implied_eq(
                model,
                bgr.clone(),
                pg.clone() - pr.clone(),
                0.0,
                format!("ramp_out_{name}_{k}"),
            )?;
            let steady = LinExpr::constant(1.0) - bgc.clone() - bgr.clone();
            implied_le(
                model,
                steady.clone(),
                pg.clone() - bgo.clone() * g.p_max,
                0.0,
                format!("pmax_{name}_{k}"),
            )?;
            implied_ge(
                model,
                steady,
                pg.clone() - bgo.clone() * g.p_min,
                0.0,
                format!("pmin_{name}_{k}"),
            )?;
            let dpg = pg - prev.p_gen[i];
            implied_le(
                model,
                bgo.clone(),
                dpg.clone(),
                g.ramp,
                format!("ramp_up_{name}_{k}"),
            )?;
            implied_ge(model, bgo, dpg, -g.ramp, format!("ramp_dn_{name}_{k}"))?;

            let idle = LinExpr::constant(1.0) - bgr.clone();
            implied_eq(
                model,
                idle,
                pr.clone(),
                -0.5 * g.ramp,
                format!("pr_idle_{name}_{k}"),
            )?;
            implied_eq(
                model,
                bgr,
                pr - prev.p_ramp[i],
                g.ramp,
                format!("pr_step_{name}_{k}"),
            )?;
        }
    }
    Ok(())
}

/// Converter losses, rated power, charge/discharge exclusivity, energy
/// balance and the setpoint-change definition (its bounds are the ramp
/// limit).
pub fn build_ess(
    model: &mut MilpModel,
    net: &NetworkModel,
    horizon: &HorizonSpec,
    vars: &RestorationVars,
) -> Result<()> {
    let dt_h = net.t_a / 60.0;
    for k in horizon.k0..=horizon.end() {
        let cur = vars.at(k);
        for (i, s) in net.ess.iter().enumerate() {
            let name = &s.name;
            let next_soc = if k == horizon.end() {
                vars.soc_end[i]
            } else {
                vars.at(k + 1).soc[i]
            };
            model.add_relation(
                var(next_soc),
                Sense::Eq,
                var(cur.soc[i]) + LinExpr::term(cur.p_in[i], dt_h * s.eta_s)
                    - LinExpr::term(cur.p_out[i], dt_h / s.eta_s),
                format!("soc_{name}_{}", k + 1),
            )?;
            if k == horizon.k0 {
                continue;
            }
            let prev = vars.at(k - 1);
            model.add_relation(
                var(cur.p_ess[i]),
                Sense::Eq,
                LinExpr::term(cur.p_out[i], s.eta_con)
                    - LinExpr::term(cur.p_in[i], 1.0 / s.eta_con),
                format!("ess_ac_{name}_{k}"),
            )?;
            model.add_relation(
                var(cur.p_in[i]),
                Sense::Le,
                LinExpr::term(cur.charge[i], s.p_rated),
                format!("ess_in_{name}_{k}"),
            )?;
            model.add_relation(
                var(cur.p_out[i]),
                Sense::Le,
                LinExpr::term(cur.discharge[i], s.p_rated),
                format!("ess_out_{name}_{k}"),
            )?;
            model.add_relation(
                var(cur.charge[i]) + cur.discharge[i],
                Sense::Le,
                var(cur.ess[i]),
                format!("ess_mode_{name}_{k}"),
            )?;
            model.add_relation(
                var(cur.setpoint_change[i]),
                Sense::Eq,
                var(cur.p_ess[i]) - prev.p_ess[i],
                format!("ess_delta_{name}_{k}"),
            )?;
        }
    }
    Ok(())
}

/// Maximize the weighted element statuses over the window.
pub fn build_objective(
    model: &mut MilpModel,
    horizon: &HorizonSpec,
    vars: &RestorationVars,
) -> Result<()> {
    let w = &horizon.weights;
    let mut obj = LinExpr::new();
    for k in window(horizon) {
        let cur = vars.at(k);
        for (vs, ws) in [
            (&cur.gen, &w.gen),
            (&cur.load, &w.load),
            (&cur.line, &w.line),
            (&cur.ess, &w.ess),
        ] {
            for (v, c) in vs.iter().zip(ws) {
                obj.add_term(*v, *c);
            }
        }
    }
    model.set_objective(ObjSense::Maximize, obj)?;
    Ok(())
}

/// Electrical disturbance of step `k`: load pick-ups plus cranking power
/// drawn by units entering or leaving the cranking phase.
pub fn step_imbalance_expr(net: &NetworkModel, vars: &RestorationVars, k: usize) -> LinExpr {
    let (cur, prev) = (vars.at(k), vars.at(k - 1));
    let mut e = LinExpr::new();
    for (i, d) in net.loads.iter().enumerate() {
        e.add_term(cur.load[i], d.p).add_term(prev.load[i], -d.p);
    }
    for (i, g) in net.generators.iter().enumerate() {
        e.add_term(cur.crank[i], g.p_crank)
            .add_term(prev.crank[i], -g.p_crank);
    }
    e
}

/// Frozen nadir bound `dPe[k] <= g0[k] + gs[k] . dPs_ref[k]` on every window
/// step; `bounds[j]` applies to step `k0 + 1 + j`.
pub fn add_nadir_constraints(
    model: &mut MilpModel,
    net: &NetworkModel,
    horizon: &HorizonSpec,
    vars: &RestorationVars,
    bounds: &[FrozenBound],
) -> Result<()> {
    if bounds.len() != horizon.n {
        return Err(RestorationError::CoefficientLength {
            expected: horizon.n,
            got: bounds.len(),
        });
    }
    for (k, b) in window(horizon).zip(bounds) {
        if b.gs.len() != net.ess.len() {
            return Err(RestorationError::CoefficientLength {
                expected: net.ess.len(),
                got: b.gs.len(),
            });
        }
        let mut rhs = LinExpr::constant(b.g0);
        for (v, g) in vars.at(k).setpoint_change.iter().zip(&b.gs) {
            rhs.add_term(*v, *g);
        }
        model.add_relation(
            step_imbalance_expr(net, vars, k),
            Sense::Le,
            rhs,
            format!("nadir_{k}"),
        )?;
    }
    Ok(())
}

/// Pick-ups limited to five percent of the online generation capacity.
pub fn add_five_percent_rule(
    model: &mut MilpModel,
    net: &NetworkModel,
    horizon: &HorizonSpec,
    vars: &RestorationVars,
) -> Result<()> {
    for k in window(horizon) {
        let mut cap = LinExpr::new();
        for (i, g) in net.generators.iter().enumerate() {
            cap.add_term(vars.at(k).online[i], 0.05 * g.p_max);
        }
        model.add_relation(
            step_imbalance_expr(net, vars, k),
            Sense::Le,
            cap,
            format!("five_pct_{k}"),
        )?;
    }
    Ok(())
}
