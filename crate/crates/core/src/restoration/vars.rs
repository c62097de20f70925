use super::{HorizonSpec, RestorationError};
use crate::grid::{GenPhase, NetworkModel, RestorationState};
use crate::milp::{MilpModel, VarId, VarKind};

/// Decision variables of one step of the window.
#[derive(Debug, Clone, PartialEq)]
pub struct StepVars {
    pub k: usize,
    pub bus: Vec<VarId>,
    pub line: Vec<VarId>,
    pub load: Vec<VarId>,
    pub gen: Vec<VarId>,
    pub ess: Vec<VarId>,
    /// Phase indicators, continuous in [0, 1] and pinned by the phase
    /// identities.
    pub crank: Vec<VarId>,
    pub ramp: Vec<VarId>,
    pub online: Vec<VarId>,
    pub p_gen: Vec<VarId>,
    pub p_ramp: Vec<VarId>,
    pub theta: Vec<VarId>,
    pub p_line: Vec<VarId>,
    pub p_ess: Vec<VarId>,
    pub p_in: Vec<VarId>,
    pub p_out: Vec<VarId>,
    pub charge: Vec<VarId>,
    pub discharge: Vec<VarId>,
    pub soc: Vec<VarId>,
    /// ESS setpoint change relative to the previous step.
    pub setpoint_change: Vec<VarId>,
}

/// Variables of the whole window; `steps[0]` is the fixed state at `k0`.
#[derive(Debug, Clone, PartialEq)]
pub struct RestorationVars {
    pub steps: Vec<StepVars>,
    /// Stored energy one step past the window.
    pub soc_end: Vec<VarId>,
}

impl RestorationVars {
    pub fn at(&self, k: usize) -> &StepVars {
        &self.steps[k - self.steps[0].k]
    }
}

/// Flow and angle magnitudes that no feasible dispatch can exceed.
pub fn flow_bounds(net: &NetworkModel) -> (f64, f64) {
    let supply: f64 = net.generators.iter().map(|g| g.p_max).sum::<f64>()
        + net.ess.iter().map(|s| s.eta_con * s.p_rated).sum::<f64>();
    let demand: f64 = net.loads.iter().map(|l| l.p).sum::<f64>()
        + net.generators.iter().map(|g| g.p_crank).sum::<f64>()
        + net.ess.iter().map(|s| s.p_rated / s.eta_con).sum::<f64>();
    let p_max = supply.max(demand).max(1e-3);
    let x_sum: f64 = net.lines.iter().map(|l| l.x).sum();
    (p_max, p_max * x_sum.max(1e-3))
}

fn ramp_bounds(net: &NetworkModel, i: usize) -> (f64, f64) {
    let g = &net.generators[i];
    let lo = -0.5 * g.ramp;
    (lo, ((g.t_ramp as f64 - 0.5) * g.ramp).max(lo))
}

fn phase_flags(p: GenPhase) -> [f64; 3] {
    [
        p.is_cranking() as u8 as f64,
        p.is_ramping() as u8 as f64,
        p.is_online() as u8 as f64,
    ]
}

/// Declares every variable over `k0 ..= k0+n`, fixing the `k0` layer to the
/// committed state.
pub fn declare_variables(
    model: &mut MilpModel,
    net: &NetworkModel,
    horizon: &HorizonSpec,
) -> Result<RestorationVars, RestorationError> {
    let (p_line_max, theta_max) = flow_bounds(net);
    let bsu = net.black_start_index();
    let ref_bus = net
        .bus_index(net.generators[bsu].bus)
        .expect("validated network");
    let last = &horizon.last;
    let mut steps = Vec::with_capacity(horizon.n + 1);

    for k in horizon.k0..=horizon.end() {
        let fixed = k == horizon.k0;
        let bin = |m: &mut MilpModel, name: String, value: bool| -> VarId {
            let v = m.add_binary(name);
            if fixed {
                let b = value as u8 as f64;
                m.set_bounds(v, b, b).expect("0/1 bounds");
            }
            v
        };
        let bus = net
            .buses
            .iter()
            .enumerate()
            .map(|(i, b)| bin(model, format!("bb_{b}_{k}"), last.bus[i]))
            .collect();
        let line = (0..net.lines.len())
            .map(|i| bin(model, format!("bl_{i}_{k}"), last.line[i]))
            .collect();
        let load = net
            .loads
            .iter()
            .enumerate()
            .map(|(i, l)| bin(model, format!("bd_{}_{k}", l.name), last.load[i]))
            .collect();
        let gen: Vec<VarId> = net
            .generators
            .iter()
            .enumerate()
            .map(|(i, g)| {
                let v = bin(model, format!("bg_{}_{k}", g.name), last.gen[i]);
                if g.black_start {
                    model.set_bounds(v, 1.0, 1.0).expect("0/1 bounds");
                }
                v
            })
            .collect();
        let ess = net
            .ess
            .iter()
            .enumerate()
            .map(|(i, s)| bin(model, format!("bs_{}_{k}", s.name), last.ess[i]))
            .collect();
        let charge = net
            .ess
            .iter()
            .enumerate()
            .map(|(i, s)| bin(model, format!("bsin_{}_{k}", s.name), last.ess_charging[i]))
            .collect();
        let discharge = net
            .ess
            .iter()
            .enumerate()
            .map(|(i, s)| {
                bin(
                    model,
                    format!("bsout_{}_{k}", s.name),
                    last.ess_discharging[i],
                )
            })
            .collect();

        // Continuous variable, pinned to `value` on the committed layer.
        let cont = |m: &mut MilpModel,
                    lo: f64,
                    hi: f64,
                    name: String,
                    value: f64|
         -> Result<VarId, RestorationError> {
            if fixed {
                Ok(m.add_variable(value, value, VarKind::Continuous, name)?)
            } else {
                Ok(m.add_continuous(lo, hi, name)?)
            }
        };
        let mut crank = Vec::new();
        let mut ramp = Vec::new();
        let mut online = Vec::new();
        let mut p_gen = Vec::new();
        let mut p_ramp = Vec::new();
        for (i, g) in net.generators.iter().enumerate() {
            let [c, r, o] = phase_flags(last.phase[i]);
            crank.push(cont(model, 0.0, 1.0, format!("bgc_{}_{k}", g.name), c)?);
            ramp.push(cont(model, 0.0, 1.0, format!("bgr_{}_{k}", g.name), r)?);
            online.push(cont(model, 0.0, 1.0, format!("bgo_{}_{k}", g.name), o)?);
            p_gen.push(cont(
                model,
                -g.p_crank,
                g.p_max,
                format!("pg_{}_{k}", g.name),
                last.p_gen[i],
            )?);
            let (lo, hi) = ramp_bounds(net, i);
            p_ramp.push(cont(
                model,
                lo,
                hi,
                format!("pr_{}_{k}", g.name),
                last.p_ramp[i],
            )?);
        }
        let mut theta = Vec::new();
        for (i, b) in net.buses.iter().enumerate() {
            let (lo, hi) = if i == ref_bus {
                (0.0, 0.0)
            } else {
                (-theta_max, theta_max)
            };
            theta.push(cont(model, lo, hi, format!("th_{b}_{k}"), last.theta[i])?);
        }
        let mut p_line = Vec::new();
        for i in 0..net.lines.len() {
            p_line.push(cont(
                model,
                -p_line_max,
                p_line_max,
                format!("pl_{i}_{k}"),
                last.p_line[i],
            )?);
        }
        let (mut p_ess, mut p_in, mut p_out, mut soc, mut setpoint_change) =
            (vec![], vec![], vec![], vec![], vec![]);
        for (i, s) in net.ess.iter().enumerate() {
            p_ess.push(cont(
                model,
                -s.p_rated / s.eta_con,
                s.eta_con * s.p_rated,
                format!("ps_{}_{k}", s.name),
                last.p_ess[i],
            )?);
            p_in.push(cont(
                model,
                0.0,
                s.p_rated,
                format!("psin_{}_{k}", s.name),
                last.p_ess_in[i],
            )?);
            p_out.push(cont(
                model,
                0.0,
                s.p_rated,
                format!("psout_{}_{k}", s.name),
                last.p_ess_out[i],
            )?);
            soc.push(cont(
                model,
                0.0,
                s.e_max,
                format!("es_{}_{k}", s.name),
                last.soc[i],
            )?);
            setpoint_change.push(cont(
                model,
                -s.ramp,
                s.ramp,
                format!("dps_{}_{k}", s.name),
                last.ess_setpoint_change[i],
            )?);
        }
        steps.push(StepVars {
            k,
            bus,
            line,
            load,
            gen,
            ess,
            crank,
            ramp,
            online,
            p_gen,
            p_ramp,
            theta,
            p_line,
            p_ess,
            p_in,
            p_out,
            charge,
            discharge,
            soc,
            setpoint_change,
        });
    }
    let end = horizon.end() + 1;
    let mut soc_end = Vec::new();
    for s in &net.ess {
        soc_end.push(model.add_continuous(0.0, s.e_max, format!("es_{}_{end}", s.name))?);
    }
    Ok(RestorationVars { steps, soc_end })
}

/// Value of every window variable for the given states (`states[0]` at
/// `k0`). Used to check a finished plan against the model.
pub fn assignment_from_states(
    model: &MilpModel,
    net: &NetworkModel,
    vars: &RestorationVars,
    states: &[RestorationState],
) -> Vec<f64> {
    let mut x = vec![0.0; model.num_vars()];
    let mut set = |v: VarId, val: f64| x[v.index()] = val;
    let b = |v: bool| v as u8 as f64;
    for (sv, st) in vars.steps.iter().zip(states) {
        for (v, s) in sv.bus.iter().zip(&st.bus) {
            set(*v, b(*s));
        }
        for (v, s) in sv.line.iter().zip(&st.line) {
            set(*v, b(*s));
        }
        for (v, s) in sv.load.iter().zip(&st.load) {
            set(*v, b(*s));
        }
        for (v, s) in sv.gen.iter().zip(&st.gen) {
            set(*v, b(*s));
        }
        for (v, s) in sv.ess.iter().zip(&st.ess) {
            set(*v, b(*s));
        }
        for (v, s) in sv.charge.iter().zip(&st.ess_charging) {
            set(*v, b(*s));
        }
        for (v, s) in sv.discharge.iter().zip(&st.ess_discharging) {
            set(*v, b(*s));
        }
        for (i, p) in st.phase.iter().enumerate() {
            let [c, r, o] = phase_flags(*p);
            set(sv.crank[i], c);
            set(sv.ramp[i], r);
            set(sv.online[i], o);
        }
        let pairs: [(&Vec<VarId>, &Vec<f64>); 9] = [
            (&sv.p_gen, &st.p_gen),
            (&sv.p_ramp, &st.p_ramp),
            (&sv.theta, &st.theta),
            (&sv.p_line, &st.p_line),
            (&sv.p_ess, &st.p_ess),
            (&sv.p_in, &st.p_ess_in),
            (&sv.p_out, &st.p_ess_out),
            (&sv.soc, &st.soc),
            (&sv.setpoint_change, &st.ess_setpoint_change),
        ];
        for (vs, vals) in pairs {
            for (v, val) in vs.iter().zip(vals) {
                set(*v, *val);
            }
        }
    }
    if let Some(st) = states.get(vars.steps.len() - 1) {
        for (i, s) in net.ess.iter().enumerate() {
            let e =
                st.soc[i] + net.t_a / 60.0 * (s.eta_s * st.p_ess_in[i] - st.p_ess_out[i] / s.eta_s);
            x[vars.soc_end[i].index()] = e;
        }
    }
    x
}
