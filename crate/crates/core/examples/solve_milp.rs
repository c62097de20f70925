//! Builds a small facility-location MILP, solves it with the embedded
//! branch-and-bound solver and compares it with its LP relaxation.

use blackstart::milp::{LinExpr, MilpModel, ObjSense, Sense};
use blackstart::solver::{solve_lp, solve_milp, SolverConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let open_cost = [12.0, 9.0, 14.0];
    let capacity = [8.0, 6.0, 10.0];
    let demand = [3.0, 4.0, 5.0];
    let ship = [[2.0, 4.0, 5.0], [3.0, 1.0, 3.0], [4.0, 3.0, 1.0]];

    let mut m = MilpModel::new("facility");
    let open: Vec<_> = (0..3).map(|f| m.add_binary(format!("open_{f}"))).collect();
    let mut flow = vec![];
    for f in 0..3 {
        let row: Vec<_> = (0..3)
            .map(|c| m.add_continuous(0.0, demand[c], format!("x_{f}_{c}")))
            .collect::<Result<_, _>>()?;
        flow.push(row);
    }
    for c in 0..3 {
        let served: LinExpr = (0..3).map(|f| LinExpr::var(flow[f][c])).sum();
        m.add_constraint(served, Sense::Ge, demand[c], format!("demand_{c}"))?;
    }
    for f in 0..3 {
        let out: LinExpr = (0..3).map(|c| LinExpr::var(flow[f][c])).sum();
        m.add_relation(
            out,
            Sense::Le,
            LinExpr::term(open[f], capacity[f]),
            format!("cap_{f}"),
        )?;
    }
    let mut cost = LinExpr::new();
    for f in 0..3 {
        cost.add_term(open[f], open_cost[f]);
        for c in 0..3 {
            cost.add_term(flow[f][c], ship[f][c]);
        }
    }
    m.set_objective(ObjSense::Minimize, cost)?;

    let lp = solve_lp(&m.relaxed());
    let sol = solve_milp(&m, &SolverConfig::default())?;
    println!("LP relaxation bound {:.4} ({:?})", lp.objective, lp.status);
    println!(
        "MILP optimum        {:.4} ({:?}, {} nodes, {} LP iterations)",
        sol.objective, sol.status, sol.stats.nodes, sol.stats.lp_iterations
    );
    for f in 0..3 {
        if sol.values[open[f].index()] > 0.5 {
            let served: Vec<String> = (0..3)
                .filter(|&c| sol.values[flow[f][c].index()] > 1e-9)
                .map(|c| format!("c{c}:{:.1}", sol.values[flow[f][c].index()]))
                .collect();
            println!("  facility {f} open, serves {}", served.join(" "));
        }
    }
    Ok(())
}
