//! Per-period vehicle assignment and route construction, plus full solution
//! cost evaluation (fleet fixed + transportation + inventory).
//!
//! Customers are assigned to vehicles by first-fit decreasing. Routes are
//! built by nearest-neighbor construction and improved with 2-opt and Or-opt
//! moves to local optimality; a Held-Karp dynamic program provides exact
//! reference tours for small stop sets.

use crate::instance::{Instance, VehicleSpec};
use crate::schedule::{decode, inventory_cost, DecodeError, DeliveryPlan, ScheduleMatrix};
use crate::EPS;
use std::fmt;

/// A single vehicle tour. `stops` are travel-matrix node indices (customer
/// `i` is node `i + 1`); the supplier (node 0) is implicit at both ends.
#[derive(Debug, Clone, PartialEq)]
pub struct Route {
    pub stops: Vec<usize>,
    pub cost: f64,
}

impl Route {
    pub fn empty() -> Self {
        Route { stops: Vec::new(), cost: 0.0 }
    }
}

/// Cost of a closed walk supplier -> stops -> supplier.
pub fn route_cost(stops: &[usize], cost_matrix: &[Vec<f64>]) -> f64 {
    if stops.is_empty() {
        return 0.0;
    }
    let mut total = cost_matrix[0][stops[0]];
    for w in stops.windows(2) {
        total += cost_matrix[w[0]][w[1]];
    }
    total + cost_matrix[*stops.last().unwrap()][0]
}

/// One vehicle's work in a period.
#[derive(Debug, Clone, PartialEq)]
pub struct VehicleRoute {
    /// Index into `instance.vehicles`.
    pub vehicle: usize,
    pub route: Route,
    /// Weighted load carried.
    pub load: f64,
}

/// All vehicle routes of one period.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct PeriodRouting {
    pub assignments: Vec<VehicleRoute>,
}

impl PeriodRouting {
    pub fn fixed_cost(&self, instance: &Instance, period: usize) -> f64 {
        self.assignments
            .iter()
            .map(|a| instance.vehicles[a.vehicle].fixed_cost_at(period))
            .sum()
    }

    pub fn transport_cost(&self) -> f64 {
        self.assignments.iter().map(|a| a.route.cost).sum()
    }
}

/// Cost terms of a full solution.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CostBreakdown {
    pub fleet_fixed: f64,
    pub transport: f64,
    pub inventory: f64,
    pub total: f64,
}

impl fmt::Display for CostBreakdown {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "fleet_fixed {}", self.fleet_fixed)?;
        writeln!(f, "transport {}", self.transport)?;
        writeln!(f, "inventory {}", self.inventory)?;
        write!(f, "total {}", self.total)
    }
}

/// A fully evaluated schedule: delivery plan, per-period routes, and costs.
#[derive(Debug, Clone, PartialEq)]
pub struct Solution {
    pub schedule: ScheduleMatrix,
    pub plan: DeliveryPlan,
    pub routing: Vec<PeriodRouting>,
    pub cost: CostBreakdown,
}

impl Solution {
    /// Text dump: one line per period and vehicle ("t=1: v1: 0 3 1 0"), then
    /// the cost breakdown.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for (t, period) in self.routing.iter().enumerate() {
            for a in &period.assignments {
                s.push_str(&format!("t={}: v{}:", t + 1, a.vehicle + 1));
                s.push_str(" 0");
                for &stop in &a.route.stops {
                    s.push_str(&format!(" {stop}"));
                }
                s.push_str(" 0\n");
            }
        }
        s.push_str(&format!("{}\n", self.cost));
        s
    }
}

/// No single-vehicle assignment fits the period's loads.
#[derive(Debug, Clone, PartialEq)]
pub struct PackingError {
    pub period: usize,
    pub detail: String,
}

impl fmt::Display for PackingError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "period {}: {}", self.period + 1, self.detail)
    }
}

impl std::error::Error for PackingError {}

/// First-fit decreasing packing of `(customer, weighted load)` pairs into
/// vehicles. Loads are placed largest first (ties by customer index) into the
/// open vehicle with the least remaining capacity that fits; when none fits,
/// the unopened vehicle with the smallest fixed cost for the period (ties by
/// vehicle index) is opened.
///
/// Returns, per used vehicle, its index, its customers (in placement order),
/// and its total load.
pub fn ffd_pack(
    loads: &[(usize, f64)],
    vehicles: &[VehicleSpec],
    period: usize,
) -> Result<Vec<(usize, Vec<usize>, f64)>, PackingError> {
    let mut items: Vec<(usize, f64)> = loads.to_vec();
    items.sort_by(|a, b| b.1.partial_cmp(&a.1).unwrap().then(a.0.cmp(&b.0)));

    let mut open: Vec<(usize, Vec<usize>, f64)> = Vec::new(); // (vehicle, customers, load)
    let mut used = vec![false; vehicles.len()];
    for (customer, load) in items {
        let fit = open
            .iter_mut()
            .filter(|(v, _, l)| l + load <= vehicles[*v].capacity + EPS)
            .min_by(|(va, _, la), (vb, _, lb)| {
                let ra = vehicles[*va].capacity - la;
                let rb = vehicles[*vb].capacity - lb;
                ra.partial_cmp(&rb).unwrap().then(va.cmp(vb))
            });
        if let Some((_, customers, l)) = fit {
            customers.push(customer);
            *l += load;
            continue;
        }
        let candidate = (0..vehicles.len())
            .filter(|&v| !used[v] && load <= vehicles[v].capacity + EPS)
            .min_by(|&a, &b| {
                let fa = vehicles[a].fixed_cost_at(period);
                let fb = vehicles[b].fixed_cost_at(period);
                fa.partial_cmp(&fb).unwrap().then(a.cmp(&b))
            });
        match candidate {
            Some(v) => {
                used[v] = true;
                open.push((v, vec![customer], load));
            }
            None => {
                return Err(PackingError {
                    period,
                    detail: format!("customer {} with load {} fits no remaining vehicle", customer + 1, load),
                })
            }
        }
    }
    open.sort_by_key(|(v, _, _)| *v);
    Ok(open)
}

/// Nearest-neighbor tour over the given stops, starting from the supplier.
fn nearest_neighbor(stops: &[usize], cost_matrix: &[Vec<f64>]) -> Vec<usize> {
    let mut remaining: Vec<usize> = stops.to_vec();
    let mut tour = Vec::with_capacity(stops.len());
    let mut at = 0usize;
    while !remaining.is_empty() {
        let (k, _) = remaining
            .iter()
            .enumerate()
            .min_by(|(_, &a), (_, &b)| cost_matrix[at][a].partial_cmp(&cost_matrix[at][b]).unwrap())
            .unwrap();
        at = remaining.remove(k);
        tour.push(at);
    }
    tour
}

/// One 2-opt pass: reverse the first segment found whose reversal shortens
/// the closed tour. Returns true when a move was applied.
fn two_opt_pass(tour: &mut [usize], cost_matrix: &[Vec<f64>]) -> bool {
    let n = tour.len();
    if n < 2 {
        return false;
    }
    // Work on the cycle [0, tour..., 0]; position p holds tour[p-1].
    let node = |p: usize| -> usize {
        if p == 0 || p == n + 1 {
            0
        } else {
            tour[p - 1]
        }
    };
    for i in 1..=n - 1 {
        for j in i + 1..=n {
            let before = cost_matrix[node(i - 1)][node(i)] + cost_matrix[node(j)][node(j + 1)];
            let after = cost_matrix[node(i - 1)][node(j)] + cost_matrix[node(i)][node(j + 1)];
            if after < before - EPS {
                tour[i - 1..j].reverse();
                return true;
            }
        }
    }
    false
}

/// One Or-opt pass: relocate the first segment of length 1..=3 whose move
/// shortens the closed tour. Returns true when a move was applied.
fn or_opt_pass(tour: &mut Vec<usize>, cost_matrix: &[Vec<f64>]) -> bool {
    let n = tour.len();
    if n < 2 {
        return false;
    }
    let node = |t: &[usize], p: isize| -> usize {
        if p < 0 || p as usize >= t.len() {
            0
        } else {
            t[p as usize]
        }
    };
    for start in 0..n {
        for len in 1..=3usize.min(n - start) {
            if len == n {
                continue;
            }
            let seg_first = tour[start];
            let seg_last = tour[start + len - 1];
            let prev = node(tour, start as isize - 1);
            let next = node(tour, (start + len) as isize);
            let removal_gain = cost_matrix[prev][seg_first] + cost_matrix[seg_last][next] - cost_matrix[prev][next];
            // Insertion points in the tour with the segment removed.
            let mut rest: Vec<usize> = Vec::with_capacity(n - len);
            rest.extend_from_slice(&tour[..start]);
            rest.extend_from_slice(&tour[start + len..]);
            for pos in 0..=rest.len() {
                let a = node(&rest, pos as isize - 1);
                let b = node(&rest, pos as isize);
                // Skip reinserting into the original place.
                if a == prev && b == next {
                    continue;
                }
                let insertion_cost = cost_matrix[a][seg_first] + cost_matrix[seg_last][b] - cost_matrix[a][b];
                if insertion_cost < removal_gain - EPS {
                    let mut new_tour = Vec::with_capacity(n);
                    new_tour.extend_from_slice(&rest[..pos]);
                    new_tour.extend_from_slice(&tour[start..start + len]);
                    new_tour.extend_from_slice(&rest[pos..]);
                    *tour = new_tour;
                    return true;
                }
            }
        }
    }
    false
}

/// Builds a route over the stops: nearest-neighbor construction, then 2-opt
/// and Or-opt improvement until neither finds a move. The result never costs
/// more than the construction tour.
pub fn solve_route(stops: &[usize], cost_matrix: &[Vec<f64>]) -> Route {
    if stops.is_empty() {
        return Route::empty();
    }
    let mut tour = nearest_neighbor(stops, cost_matrix);
    loop {
        let mut improved = false;
        while two_opt_pass(&mut tour, cost_matrix) {
            improved = true;
        }
        while or_opt_pass(&mut tour, cost_matrix) {
            improved = true;
        }
        if !improved {
            break;
        }
    }
    let cost = route_cost(&tour, cost_matrix);
    Route { stops: tour, cost }
}

/// True when no single 2-opt move improves the route (exhaustive scan).
pub fn is_two_opt_optimal(route: &Route, cost_matrix: &[Vec<f64>]) -> bool {
    let mut tour = route.stops.clone();
    !two_opt_pass(&mut tour, cost_matrix)
}

/// Stop-count limit for the exact tour solver.
pub const TSP_EXACT_MAX_STOPS: usize = 18;

#[derive(Debug, Clone, PartialEq)]
pub struct SizeLimitError {
    pub size: usize,
    pub limit: usize,
}

impl fmt::Display for SizeLimitError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "problem size {} exceeds the exact-solver limit {}", self.size, self.limit)
    }
}

impl std::error::Error for SizeLimitError {}

/// Minimum-cost tour through the supplier and all stops, by the Held-Karp
/// dynamic program over stop subsets. Limited to 18 stops.
pub fn tsp_exact(stops: &[usize], cost_matrix: &[Vec<f64>]) -> Result<Route, SizeLimitError> {
    let n = stops.len();
    if n > TSP_EXACT_MAX_STOPS {
        return Err(SizeLimitError { size: n, limit: TSP_EXACT_MAX_STOPS });
    }
    if n == 0 {
        return Ok(Route::empty());
    }
    // best[mask][k]: cheapest path supplier -> (stops in mask) ending at stops[k].
    let full = 1usize << n;
    let mut best = vec![f64::INFINITY; full * n];
    let mut parent = vec![usize::MAX; full * n];
    for k in 0..n {
        best[(1 << k) * n + k] = cost_matrix[0][stops[k]];
    }
    for mask in 1..full {
        for k in 0..n {
            if mask & (1 << k) == 0 {
                continue;
            }
            let cur = best[mask * n + k];
            if !cur.is_finite() {
                continue;
            }
            for m in 0..n {
                if mask & (1 << m) != 0 {
                    continue;
                }
                let next_mask = mask | (1 << m);
                let cand = cur + cost_matrix[stops[k]][stops[m]];
                if cand < best[next_mask * n + m] {
                    best[next_mask * n + m] = cand;
                    parent[next_mask * n + m] = k;
                }
            }
        }
    }
    let mut total = f64::INFINITY;
    let mut last = 0usize;
    for k in 0..n {
        let cand = best[(full - 1) * n + k] + cost_matrix[stops[k]][0];
        if cand < total {
            total = cand;
            last = k;
        }
    }
    let mut order = Vec::with_capacity(n);
    let mut mask = full - 1;
    let mut k = last;
    loop {
        order.push(stops[k]);
        let p = parent[mask * n + k];
        mask &= !(1 << k);
        if p == usize::MAX {
            break;
        }
        k = p;
    }
    order.reverse();
    debug_assert_eq!(order.len(), n);
    Ok(Route { stops: order, cost: total })
}

/// Which tour solver evaluation uses for each vehicle's route.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RouteAlgo {
    /// Nearest neighbor + 2-opt/Or-opt (the fitness function's solver).
    LocalSearch,
    /// Held-Karp exact tours; only valid for small per-vehicle stop sets.
    Exact,
}

/// Errors from evaluating a schedule.
#[derive(Debug, Clone, PartialEq)]
pub enum EvalError {
    Decode(DecodeError),
    Packing(PackingError),
    RouteSize(SizeLimitError),
}

impl fmt::Display for EvalError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EvalError::Decode(e) => write!(f, "decode: {e}"),
            EvalError::Packing(e) => write!(f, "packing: {e}"),
            EvalError::RouteSize(e) => write!(f, "routing: {e}"),
        }
    }
}

impl std::error::Error for EvalError {}

impl From<DecodeError> for EvalError {
    fn from(e: DecodeError) -> Self {
        EvalError::Decode(e)
    }
}

impl From<PackingError> for EvalError {
    fn from(e: PackingError) -> Self {
        EvalError::Packing(e)
    }
}

/// Evaluates a schedule end to end: decode, assign scheduled customers to
/// vehicles per period, route every used vehicle, and sum the three cost
/// terms. This is the genetic algorithm's fitness function.
pub fn evaluate_solution(schedule: &ScheduleMatrix, instance: &Instance) -> Result<Solution, EvalError> {
    evaluate_solution_with(schedule, instance, RouteAlgo::LocalSearch)
}

/// [`evaluate_solution`] with an explicit tour solver.
pub fn evaluate_solution_with(
    schedule: &ScheduleMatrix,
    instance: &Instance,
    algo: RouteAlgo,
) -> Result<Solution, EvalError> {
    let plan = decode(schedule, instance)?;
    let mut routing = Vec::with_capacity(instance.n_periods);
    let mut fleet_fixed = 0.0;
    let mut transport = 0.0;

    for t in 0..instance.n_periods {
        let loads: Vec<(usize, f64)> = schedule
            .scheduled_customers(t)
            .into_iter()
            .map(|i| (i, plan.weighted_delivery(instance, i, t)))
            .collect();
        let packed = ffd_pack(&loads, &instance.vehicles, t)?;
        let mut period = PeriodRouting::default();
        for (vehicle, customers, load) in packed {
            let stops: Vec<usize> = customers.iter().map(|&i| i + 1).collect();
            let route = match algo {
                RouteAlgo::LocalSearch => solve_route(&stops, &instance.travel_cost),
                RouteAlgo::Exact => tsp_exact(&stops, &instance.travel_cost).map_err(EvalError::RouteSize)?,
            };
            fleet_fixed += instance.vehicles[vehicle].fixed_cost_at(t);
            transport += route.cost;
            period.assignments.push(VehicleRoute { vehicle, route, load });
        }
        routing.push(period);
    }

    let inventory = inventory_cost(&plan, instance);
    let total = fleet_fixed + transport + inventory;
    Ok(Solution {
        schedule: schedule.clone(),
        plan,
        routing,
        cost: CostBreakdown {
            fleet_fixed,
            transport,
            inventory,
            total,
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::{generate_instance, travel_cost_matrix, GenConfig};
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn vehicle(id: usize, capacity: f64, fixed: f64) -> VehicleSpec {
        VehicleSpec {
            id,
            capacity,
            fixed_cost: vec![fixed],
        }
    }

    #[test]
    fn ffd_places_large_load_then_opens_second_vehicle() {
        // A=250 and B=100 cannot share the 300-vehicle, so B opens the 400.
        let vehicles = [vehicle(1, 300.0, 10.0), vehicle(2, 400.0, 10.0)];
        let packed = ffd_pack(&[(0, 250.0), (1, 100.0)], &vehicles, 0).unwrap();
        assert_eq!(packed.len(), 2);
        assert_eq!(packed[0], (0, vec![0], 250.0));
        assert_eq!(packed[1], (1, vec![1], 100.0));
    }

    #[test]
    fn ffd_empty_loads_open_no_vehicle() {
        let vehicles = [vehicle(1, 300.0, 10.0)];
        assert_eq!(ffd_pack(&[], &vehicles, 0).unwrap(), vec![]);
    }

    #[test]
    fn ffd_rejects_load_larger_than_every_vehicle() {
        let vehicles = [vehicle(1, 300.0, 10.0), vehicle(2, 400.0, 10.0)];
        assert!(ffd_pack(&[(0, 500.0)], &vehicles, 0).is_err());
    }

    #[test]
    fn ffd_prefers_cheapest_fixed_cost_when_opening() {
        let vehicles = [vehicle(1, 300.0, 25.0), vehicle(2, 300.0, 10.0)];
        let packed = ffd_pack(&[(0, 100.0)], &vehicles, 0).unwrap();
        assert_eq!(packed[0].0, 1);
    }

    #[test]
    fn empty_route_costs_nothing() {
        let m = travel_cost_matrix((0.0, 0.0), &[(3.0, 4.0)]);
        assert_eq!(solve_route(&[], &m), Route::empty());
    }

    #[test]
    fn single_stop_is_out_and_back() {
        let m = travel_cost_matrix((0.0, 0.0), &[(0.0, 7.0)]);
        let r = solve_route(&[1], &m);
        assert_eq!(r.stops, vec![1]);
        assert_eq!(r.cost, 14.0);
    }

    #[test]
    fn square_corners_match_exact_tour() {
        let m = travel_cost_matrix((5.0, 5.0), &[(0.0, 0.0), (0.0, 10.0), (10.0, 10.0), (10.0, 0.0)]);
        let ls = solve_route(&[1, 2, 3, 4], &m);
        let exact = tsp_exact(&[1, 2, 3, 4], &m).unwrap();
        assert!((ls.cost - exact.cost).abs() <= 1e-9, "{} vs {}", ls.cost, exact.cost);
    }

    #[test]
    fn exact_two_stop_tour() {
        let m = vec![
            vec![0.0, 3.0, 4.0],
            vec![3.0, 0.0, 5.0],
            vec![4.0, 5.0, 0.0],
        ];
        let r = tsp_exact(&[1, 2], &m).unwrap();
        assert_eq!(r.cost, 12.0);
    }

    #[test]
    fn exact_rejects_more_than_eighteen_stops() {
        let pts: Vec<(f64, f64)> = (0..19).map(|k| (k as f64, 0.0)).collect();
        let m = travel_cost_matrix((0.0, 0.0), &pts);
        let stops: Vec<usize> = (1..=19).collect();
        assert!(matches!(tsp_exact(&stops, &m), Err(SizeLimitError { size: 19, .. })));
    }

    /// Brute-force minimum over every stop permutation.
    fn brute_force_tour(stops: &[usize], m: &[Vec<f64>]) -> f64 {
        fn permute(rest: &mut Vec<usize>, prefix: &mut Vec<usize>, m: &[Vec<f64>], best: &mut f64) {
            if rest.is_empty() {
                *best = best.min(route_cost(prefix, m));
                return;
            }
            for k in 0..rest.len() {
                let v = rest.remove(k);
                prefix.push(v);
                permute(rest, prefix, m, best);
                prefix.pop();
                rest.insert(k, v);
            }
        }
        let mut best = f64::INFINITY;
        permute(&mut stops.to_vec(), &mut Vec::new(), m, &mut best);
        best
    }

    #[test]
    fn exact_matches_permutation_enumeration() {
        let mut rng = StdRng::seed_from_u64(99);
        for n in [4usize, 5, 6] {
            let pts: Vec<(f64, f64)> = (0..n).map(|_| (rng.gen_range(0.0..20.0), rng.gen_range(0.0..20.0))).collect();
            let m = travel_cost_matrix((10.0, 10.0), &pts);
            let stops: Vec<usize> = (1..=n).collect();
            let exact = tsp_exact(&stops, &m).unwrap();
            let brute = brute_force_tour(&stops, &m);
            assert!((exact.cost - brute).abs() <= 1e-9, "n={n}: {} vs {brute}", exact.cost);
        }
    }

    #[test]
    fn local_search_ranks_between_exact_and_construction() {
        let mut rng = StdRng::seed_from_u64(7);
        for _ in 0..25 {
            let pts: Vec<(f64, f64)> = (0..10).map(|_| (rng.gen_range(0.0..20.0), rng.gen_range(0.0..20.0))).collect();
            let m = travel_cost_matrix((10.0, 10.0), &pts);
            let stops: Vec<usize> = (1..=10).collect();
            let nn_cost = route_cost(&nearest_neighbor(&stops, &m), &m);
            let ls = solve_route(&stops, &m);
            let exact = tsp_exact(&stops, &m).unwrap();
            assert!(ls.cost <= nn_cost + 1e-9);
            assert!(ls.cost >= exact.cost - 1e-9);
            assert!(is_two_opt_optimal(&ls, &m));
        }
    }

    #[test]
    fn zero_demand_empty_schedule_costs_nothing() {
        let mut inst = generate_instance(&GenConfig::new(3, 2, 1, 2, 3)).unwrap();
        inst.demand = crate::instance::Tensor3::zeros(2, 3, 2);
        let sol = evaluate_solution(&ScheduleMatrix::zeros(3, 2), &inst).unwrap();
        assert_eq!(sol.cost.total, 0.0);
        assert!(sol.routing.iter().all(|p| p.assignments.is_empty()));
    }

    #[test]
    fn evaluation_is_deterministic() {
        let inst = generate_instance(&GenConfig::new(5, 5, 3, 2, 1)).unwrap();
        let m = ScheduleMatrix::all_ones(5, 5);
        let a = evaluate_solution(&m, &inst).unwrap();
        let b = evaluate_solution(&m, &inst).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn solution_dump_lists_routes_and_costs() {
        let inst = generate_instance(&GenConfig::new(5, 5, 3, 2, 1)).unwrap();
        let sol = evaluate_solution(&ScheduleMatrix::all_ones(5, 5), &inst).unwrap();
        let text = sol.to_text();
        assert!(text.starts_with("t=1: v"));
        assert!(text.contains("total "));
    }

    mod properties {
        use super::*;
        use crate::schedule::{random_schedule, CapacityCheckMode};
        use proptest::prelude::*;

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(32))]

            #[test]
            fn routing_serves_each_scheduled_customer_once_within_capacity(
                seed in 0u64..2000,
            ) {
                let mut cfg = GenConfig::new(5, 4, 3, 2, seed);
                cfg.demand_range = (5.0, 15.0);
                let inst = generate_instance(&cfg).unwrap();
                let mut rng = StdRng::seed_from_u64(seed ^ 0xabcd);
                let m = random_schedule(&inst, &mut rng).unwrap();
                prop_assert!(crate::schedule::check_feasibility(&m, &inst, CapacityCheckMode::Packing).feasible);
                let sol = evaluate_solution(&m, &inst).unwrap();
                for t in 0..inst.n_periods {
                    let mut seen = vec![0usize; inst.n_customers()];
                    for a in &sol.routing[t].assignments {
                        prop_assert!(a.load <= inst.vehicles[a.vehicle].capacity + 1e-9);
                        let mut sorted = a.route.stops.clone();
                        sorted.sort_unstable();
                        sorted.dedup();
                        prop_assert_eq!(sorted.len(), a.route.stops.len(), "repeated stop");
                        for &stop in &a.route.stops {
                            seen[stop - 1] += 1;
                        }
                        let recomputed = route_cost(&a.route.stops, &inst.travel_cost);
                        prop_assert!((a.route.cost - recomputed).abs() <= 1e-9);
                    }
                    for i in 0..inst.n_customers() {
                        prop_assert_eq!(seen[i], usize::from(m.get(i, t)), "customer {} period {}", i, t);
                    }
                }
                let s = sol.cost;
                prop_assert!((s.total - (s.fleet_fixed + s.transport + s.inventory)).abs() <= 1e-9);
            }
        }
    }
}
