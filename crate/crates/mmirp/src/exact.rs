//! Ground-truth machinery: exhaustive enumeration of the schedule space on
//! small instances, a direct-delivery baseline, and export of the full mixed
//! integer program in LP file format for external solvers.

use crate::instance::Instance;
use crate::routing::{evaluate_solution, evaluate_solution_with, EvalError, RouteAlgo, Solution};
use crate::schedule::{check_feasibility, CapacityCheckMode, ScheduleMatrix};
use std::collections::HashMap;
use std::fmt;
use std::fs;
use std::io;
use std::path::Path;

/// Bit budget for exhaustive schedule enumeration.
pub const ORACLE_MAX_BITS: usize = 20;

#[derive(Debug)]
pub enum OracleError {
    /// |I|·|T| exceeds the enumeration budget.
    SizeLimit { bits: usize, limit: usize },
    /// No binary schedule satisfies the feasibility conditions.
    NoFeasibleSchedule,
}

impl fmt::Display for OracleError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OracleError::SizeLimit { bits, limit } => {
                write!(f, "schedule space of {bits} bits exceeds the enumeration limit of {limit}")
            }
            OracleError::NoFeasibleSchedule => write!(f, "no feasible schedule exists for this instance"),
        }
    }
}

impl std::error::Error for OracleError {}

/// Enumerates every binary schedule matrix, keeps the feasible ones, and
/// returns the cheapest under exact (Held-Karp) per-vehicle routing. Cost
/// ties break toward the lexicographically smallest bit matrix.
///
/// This minimizes over the schedule-decode solution space, not over the full
/// mixed integer program: split deliveries and quantities other than the
/// decode rule's are outside it.
pub fn oracle_enumerate(instance: &Instance) -> Result<Solution, OracleError> {
    let bits = instance.n_customers() * instance.n_periods;
    if bits > ORACLE_MAX_BITS {
        return Err(OracleError::SizeLimit { bits, limit: ORACLE_MAX_BITS });
    }
    let n_t = instance.n_periods;
    let mut best: Option<Solution> = None;
    for mask in 0u64..(1u64 << bits) {
        let mut m = ScheduleMatrix::zeros(instance.n_customers(), n_t);
        for k in 0..bits {
            if mask & (1 << k) != 0 {
                m.set(k / n_t, k % n_t, true);
            }
        }
        if !check_feasibility(&m, instance, CapacityCheckMode::Packing).feasible {
            continue;
        }
        let Ok(sol) = evaluate_solution_with(&m, instance, RouteAlgo::Exact) else {
            continue;
        };
        let better = match &best {
            None => true,
            Some(b) => {
                sol.cost.total < b.cost.total || (sol.cost.total == b.cost.total && sol.schedule < b.schedule)
            }
        };
        if better {
            best = Some(sol);
        }
    }
    best.ok_or(OracleError::NoFeasibleSchedule)
}

/// The trivial upper-bound heuristic: deliver every period (the all-ones
/// schedule), which carries no inventory at all.
pub fn baseline_direct(instance: &Instance) -> Result<Solution, EvalError> {
    let all = ScheduleMatrix::all_ones(instance.n_customers(), instance.n_periods);
    evaluate_solution(&all, instance)
}

/// Constraint sense in the LP model.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sense {
    Le,
    Ge,
    Eq,
}

impl fmt::Display for Sense {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Sense::Le => write!(f, "<="),
            Sense::Ge => write!(f, ">="),
            Sense::Eq => write!(f, "="),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LpConstraint {
    pub name: String,
    pub terms: Vec<(f64, String)>,
    pub sense: Sense,
    pub rhs: f64,
}

/// A linear model: minimized objective, constraints, and variable domains
/// (binary or nonnegative continuous).
#[derive(Debug, Clone, PartialEq)]
pub struct LpModel {
    pub name: String,
    pub objective: Vec<(f64, String)>,
    pub constraints: Vec<LpConstraint>,
    pub binaries: Vec<String>,
    pub continuous: Vec<String>,
}

impl LpModel {
    pub fn n_variables(&self) -> usize {
        self.binaries.len() + self.continuous.len()
    }

    /// Every variable referenced anywhere must be declared exactly once.
    pub fn check_consistency(&self) -> Result<(), String> {
        let mut domain: HashMap<&str, usize> = HashMap::new();
        for v in self.binaries.iter().chain(self.continuous.iter()) {
            *domain.entry(v.as_str()).or_insert(0) += 1;
        }
        if let Some((v, _)) = domain.iter().find(|(_, &c)| c > 1) {
            return Err(format!("variable {v} declared more than once"));
        }
        let mut names: HashMap<&str, usize> = HashMap::new();
        for c in &self.constraints {
            *names.entry(c.name.as_str()).or_insert(0) += 1;
        }
        if let Some((n, _)) = names.iter().find(|(_, &c)| c > 1) {
            return Err(format!("constraint {n} declared more than once"));
        }
        for (_, v) in self.objective.iter().chain(self.constraints.iter().flat_map(|c| c.terms.iter())) {
            if !domain.contains_key(v.as_str()) {
                return Err(format!("variable {v} referenced but not declared"));
            }
        }
        Ok(())
    }

    /// Objective value under a (sparse) variable assignment; absent variables
    /// count as zero.
    pub fn objective_value(&self, assignment: &HashMap<String, f64>) -> f64 {
        self.objective
            .iter()
            .map(|(c, v)| c * assignment.get(v).copied().unwrap_or(0.0))
            .sum()
    }

    /// Names and violation amounts of constraints the assignment breaks.
    pub fn violated_constraints(&self, assignment: &HashMap<String, f64>, tolerance: f64) -> Vec<(String, f64)> {
        let mut out = Vec::new();
        for c in &self.constraints {
            let lhs: f64 = c
                .terms
                .iter()
                .map(|(coef, v)| coef * assignment.get(v).copied().unwrap_or(0.0))
                .sum();
            let violation = match c.sense {
                Sense::Le => lhs - c.rhs,
                Sense::Ge => c.rhs - lhs,
                Sense::Eq => (lhs - c.rhs).abs(),
            };
            if violation > tolerance {
                out.push((c.name.clone(), violation));
            }
        }
        out
    }
}

fn x_name(v: usize, i: usize, j: usize, t: usize) -> String {
    format!("x_v{}_i{}_j{}_t{}", v + 1, i, j, t + 1)
}

fn y_name(v: usize, p: usize, i: usize, j: usize, t: usize) -> String {
    format!("y_v{}_p{}_i{}_j{}_t{}", v + 1, p + 1, i, j, t + 1)
}

fn r_name(p: usize, i: usize, t: usize) -> String {
    format!("r_p{}_i{}_t{}", p + 1, i, t + 1)
}

fn z_name(v: usize, i: usize, j: usize, t: usize) -> String {
    format!("z_v{}_i{}_j{}_t{}", v + 1, i, j, t + 1)
}

/// Builds the mixed integer program for an instance.
///
/// Node 0 is the supplier and node `i >= 1` is customer `i`. Binary `x`
/// marks traversed edges; continuous `y` carries per-product flow on edges
/// and `r` is end-of-period on-hand inventory. Customers start the horizon
/// empty; the supplier starts with the horizon's total demand of each
/// product, so its balance rows close.
///
/// The per-product vehicle flow inequality (`dropflow_*`) is emitted exactly
/// as formulated even though a depot with outgoing goods cannot satisfy its
/// own row; `include_flow_subtours` adds a sound single-commodity-flow
/// subtour elimination (`sflow_*`) on top.
pub fn build_lp_model(instance: &Instance, include_flow_subtours: bool) -> LpModel {
    let n_i = instance.n_customers();
    let n_nodes = n_i + 1;
    let n_t = instance.n_periods;
    let n_v = instance.n_vehicles();
    let n_p = instance.n_products();

    let mut binaries = Vec::new();
    let mut continuous = Vec::new();
    let mut objective_coef: Vec<(String, f64)> = Vec::new();

    for v in 0..n_v {
        for i in 0..n_nodes {
            for j in 0..n_nodes {
                for t in 0..n_t {
                    binaries.push(x_name(v, i, j, t));
                }
            }
        }
    }
    for v in 0..n_v {
        for p in 0..n_p {
            for i in 0..n_nodes {
                for j in 0..n_nodes {
                    for t in 0..n_t {
                        continuous.push(y_name(v, p, i, j, t));
                    }
                }
            }
        }
    }
    for p in 0..n_p {
        for i in 0..n_nodes {
            for t in 0..n_t {
                continuous.push(r_name(p, i, t));
            }
        }
    }

    // Objective: fleet fixed cost on depot departures, travel cost on every
    // edge, holding cost on customer inventory. Coefficients merge per
    // variable in first-appearance order.
    let mut merged: HashMap<String, usize> = HashMap::new();
    let mut add_objective = |name: String, coef: f64, store: &mut Vec<(String, f64)>| {
        if coef == 0.0 {
            return;
        }
        match merged.get(&name) {
            Some(&k) => store[k].1 += coef,
            None => {
                merged.insert(name.clone(), store.len());
                store.push((name, coef));
            }
        }
    };
    for t in 0..n_t {
        for v in 0..n_v {
            let f = instance.vehicles[v].fixed_cost_at(t);
            for i in 1..n_nodes {
                add_objective(x_name(v, 0, i, t), f, &mut objective_coef);
            }
            for i in 0..n_nodes {
                for j in 0..n_nodes {
                    add_objective(x_name(v, i, j, t), instance.travel_cost[i][j], &mut objective_coef);
                }
            }
        }
        for i in 1..n_nodes {
            for p in 0..n_p {
                add_objective(r_name(p, i, t), instance.customers[i - 1].holding_cost[p], &mut objective_coef);
            }
        }
    }

    let mut constraints = Vec::new();

    // Each node leaves at most once per vehicle and period.
    for i in 0..n_nodes {
        for t in 0..n_t {
            for v in 0..n_v {
                let terms = (0..n_nodes).map(|j| (1.0, x_name(v, i, j, t))).collect();
                constraints.push(LpConstraint {
                    name: format!("visit_v{}_i{}_t{}", v + 1, i, t + 1),
                    terms,
                    sense: Sense::Le,
                    rhs: 1.0,
                });
            }
        }
    }

    // Route connectivity: in-degree equals out-degree.
    for i in 0..n_nodes {
        for t in 0..n_t {
            for v in 0..n_v {
                let mut terms: Vec<(f64, String)> = (0..n_nodes).map(|j| (1.0, x_name(v, i, j, t))).collect();
                terms.extend((0..n_nodes).map(|k| (-1.0, x_name(v, k, i, t))));
                constraints.push(LpConstraint {
                    name: format!("flow_v{}_i{}_t{}", v + 1, i, t + 1),
                    terms,
                    sense: Sense::Eq,
                    rhs: 0.0,
                });
            }
        }
    }

    // Vehicle capacity on every edge.
    for i in 0..n_nodes {
        for j in 0..n_nodes {
            for t in 0..n_t {
                for v in 0..n_v {
                    let mut terms: Vec<(f64, String)> = (0..n_p)
                        .map(|p| (instance.product_weight(p), y_name(v, p, i, j, t)))
                        .collect();
                    terms.push((-instance.vehicles[v].capacity, x_name(v, i, j, t)));
                    constraints.push(LpConstraint {
                        name: format!("cap_v{}_i{}_j{}_t{}", v + 1, i, j, t + 1),
                        terms,
                        sense: Sense::Le,
                        rhs: 0.0,
                    });
                }
            }
        }
    }

    // Per-product, per-vehicle flow may only shrink along a route (goods are
    // dropped off, never collected). Emitted for every node as formulated.
    for i in 0..n_nodes {
        for t in 0..n_t {
            for v in 0..n_v {
                for p in 0..n_p {
                    let w = instance.product_weight(p);
                    let mut terms: Vec<(f64, String)> = (0..n_nodes).map(|j| (w, y_name(v, p, j, i, t))).collect();
                    terms.extend((0..n_nodes).map(|k| (-w, y_name(v, p, i, k, t))));
                    constraints.push(LpConstraint {
                        name: format!("dropflow_v{}_p{}_i{}_t{}", v + 1, p + 1, i, t + 1),
                        terms,
                        sense: Sense::Ge,
                        rhs: 0.0,
                    });
                }
            }
        }
    }

    // Inventory balance at every node. Initial on-hand is zero at customers
    // and the horizon's total demand at the supplier.
    for i in 0..n_nodes {
        for t in 0..n_t {
            for p in 0..n_p {
                let mut terms: Vec<(f64, String)> = Vec::new();
                if t > 0 {
                    terms.push((1.0, r_name(p, i, t - 1)));
                }
                terms.push((-1.0, r_name(p, i, t)));
                for v in 0..n_v {
                    for j in 0..n_nodes {
                        terms.push((1.0, y_name(v, p, j, i, t)));
                    }
                    for k in 0..n_nodes {
                        terms.push((-1.0, y_name(v, p, i, k, t)));
                    }
                }
                let demand = if i == 0 { 0.0 } else { instance.demand.get(p, i - 1, t) };
                let initial = if t == 0 {
                    if i == 0 {
                        (0..n_i).map(|c| (0..n_t).map(|u| instance.demand.get(p, c, u)).sum::<f64>()).sum()
                    } else {
                        0.0
                    }
                } else {
                    0.0
                };
                constraints.push(LpConstraint {
                    name: format!("invbal_p{}_i{}_t{}", p + 1, i, t + 1),
                    terms,
                    sense: Sense::Eq,
                    rhs: demand - initial,
                });
            }
        }
    }

    // Customer storage capacity.
    for i in 1..n_nodes {
        for t in 0..n_t {
            let terms = (0..n_p).map(|p| (instance.product_weight(p), r_name(p, i, t))).collect();
            constraints.push(LpConstraint {
                name: format!("storage_i{i}_t{}", t + 1),
                terms,
                sense: Sense::Le,
                rhs: instance.customers[i - 1].storage_capacity,
            });
        }
    }

    if include_flow_subtours {
        // Single-commodity flow from the depot: every visited customer
        // consumes one unit, and flow moves only on traversed edges.
        for v in 0..n_v {
            for i in 0..n_nodes {
                for j in 0..n_nodes {
                    for t in 0..n_t {
                        continuous.push(z_name(v, i, j, t));
                        constraints.push(LpConstraint {
                            name: format!("sflow_cap_v{}_i{}_j{}_t{}", v + 1, i, j, t + 1),
                            terms: vec![(1.0, z_name(v, i, j, t)), (-(n_i as f64), x_name(v, i, j, t))],
                            sense: Sense::Le,
                            rhs: 0.0,
                        });
                    }
                }
            }
        }
        for v in 0..n_v {
            for i in 1..n_nodes {
                for t in 0..n_t {
                    let mut terms: Vec<(f64, String)> = (0..n_nodes).map(|j| (1.0, z_name(v, j, i, t))).collect();
                    terms.extend((0..n_nodes).map(|k| (-1.0, z_name(v, i, k, t))));
                    terms.extend((0..n_nodes).map(|j| (-1.0, x_name(v, i, j, t))));
                    constraints.push(LpConstraint {
                        name: format!("sflow_bal_v{}_i{}_t{}", v + 1, i, t + 1),
                        terms,
                        sense: Sense::Eq,
                        rhs: 0.0,
                    });
                }
            }
        }
    }

    LpModel {
        name: format!(
            "mmirp {} customers, {} periods, {} vehicles, {} products",
            n_i, n_t, n_v, n_p
        ),
        objective: objective_coef.into_iter().map(|(v, c)| (c, v)).collect(),
        constraints,
        binaries,
        continuous,
    }
}

fn push_term(line: &mut String, out: &mut String, first: bool, coef: f64, var: &str) {
    let piece = if first {
        if coef < 0.0 {
            format!(" - {} {var}", -coef)
        } else {
            format!(" {coef} {var}")
        }
    } else if coef < 0.0 {
        format!(" - {} {var}", -coef)
    } else {
        format!(" + {coef} {var}")
    };
    if line.len() + piece.len() > 240 {
        out.push_str(line);
        out.push('\n');
        line.clear();
        line.push_str("   ");
    }
    line.push_str(&piece);
}

/// Serializes a model in LP file format (Minimize / Subject To / Binaries /
/// End). Continuous variables keep the format's default bounds `0 <= v`.
pub fn write_lp_string(model: &LpModel) -> String {
    let mut out = String::new();
    out.push_str(&format!("\\ {}\n", model.name));
    out.push_str("Minimize\n");
    let mut line = String::from(" obj:");
    let mut first = true;
    for (coef, var) in &model.objective {
        push_term(&mut line, &mut out, first, *coef, var);
        first = false;
    }
    out.push_str(&line);
    out.push('\n');

    out.push_str("Subject To\n");
    for c in &model.constraints {
        let mut line = format!(" {}:", c.name);
        let mut first = true;
        for (coef, var) in &c.terms {
            push_term(&mut line, &mut out, first, *coef, var);
            first = false;
        }
        line.push_str(&format!(" {} {}", c.sense, c.rhs));
        out.push_str(&line);
        out.push('\n');
    }

    out.push_str("Binaries\n");
    let mut line = String::from(" ");
    for b in &model.binaries {
        if line.len() + b.len() + 1 > 240 {
            out.push_str(line.trim_end());
            out.push('\n');
            line = String::from(" ");
        }
        line.push_str(b);
        line.push(' ');
    }
    out.push_str(line.trim_end());
    out.push_str("\nEnd\n");
    out
}

/// Builds and writes the model for an instance to a file.
pub fn export_lp(instance: &Instance, path: &Path, include_flow_subtours: bool) -> Result<LpModel, io::Error> {
    let model = build_lp_model(instance, include_flow_subtours);
    fs::write(path, write_lp_string(&model))?;
    Ok(model)
}

/// Converts an evaluated solution into an LP variable assignment (x from the
/// routes, y from on-board quantities along each route, r from the inventory
/// ledger plus the supplier's draw-down). Zero-valued variables are omitted.
pub fn solution_to_assignment(solution: &Solution, instance: &Instance) -> HashMap<String, f64> {
    let n_p = instance.n_products();
    let n_t = instance.n_periods;
    let mut a: HashMap<String, f64> = HashMap::new();

    for (t, period) in solution.routing.iter().enumerate() {
        for vr in &period.assignments {
            if vr.route.stops.is_empty() {
                continue;
            }
            let v = vr.vehicle;
            let mut nodes = Vec::with_capacity(vr.route.stops.len() + 2);
            nodes.push(0usize);
            nodes.extend_from_slice(&vr.route.stops);
            nodes.push(0usize);
            for w in nodes.windows(2) {
                a.insert(x_name(v, w[0], w[1], t), 1.0);
            }
            for p in 0..n_p {
                let mut on_board: f64 = vr.route.stops.iter().map(|&s| solution.plan.deliveries.get(p, s - 1, t)).sum();
                for w in nodes.windows(2) {
                    if on_board > 0.0 {
                        a.insert(y_name(v, p, w[0], w[1], t), on_board);
                    }
                    if w[1] != 0 {
                        on_board -= solution.plan.deliveries.get(p, w[1] - 1, t);
                    }
                }
            }
        }
    }

    for p in 0..n_p {
        let total: f64 = (0..instance.n_customers())
            .map(|i| (0..n_t).map(|t| instance.demand.get(p, i, t)).sum::<f64>())
            .sum();
        let mut remaining = total;
        for t in 0..n_t {
            for i in 0..instance.n_customers() {
                remaining -= solution.plan.deliveries.get(p, i, t);
                let r = solution.plan.inventory.get(p, i, t);
                if r != 0.0 {
                    a.insert(r_name(p, i + 1, t), r);
                }
            }
            if remaining != 0.0 {
                a.insert(r_name(p, 0, t), remaining);
            }
        }
    }
    a
}
