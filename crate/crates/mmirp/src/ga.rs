//! The adaptive genetic algorithm over schedule matrices: roulette selection,
//! row/column crossover, row/column swap mutation, feedback-controlled
//! operator rates, and the evolution loop.
//!
//! Fitness is the full solution cost from [`crate::routing::evaluate_solution`]
//! and is minimized; selection probabilities are inverse to cost. Offspring
//! pass through [`crate::schedule::repair`] and dismissed chromosomes are
//! dropped. Survivor selection is elitist truncation of parents and offspring.

use crate::instance::Instance;
use crate::routing::{evaluate_solution, Solution};
use crate::schedule::{random_schedule, repair, InfeasibleInstance, ScheduleMatrix};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use std::fmt;

/// Parameters of the evolution loop.
#[derive(Debug, Clone, PartialEq)]
pub struct GaConfig {
    pub psize: usize,
    /// Initial crossover rate.
    pub cr0: f64,
    /// Initial mutation rate.
    pub mr0: f64,
    pub cr_bounds: (f64, f64),
    pub mr_bounds: (f64, f64),
    /// Stop after this many consecutive non-improving generations.
    pub k_max: usize,
    pub max_generations: usize,
    pub seed: u64,
}

impl Default for GaConfig {
    fn default() -> Self {
        GaConfig {
            psize: 50,
            cr0: 0.8,
            mr0: 0.08,
            cr_bounds: (0.4, 0.95),
            mr_bounds: (0.01, 0.3),
            k_max: 50,
            max_generations: 500,
            seed: 0,
        }
    }
}

impl GaConfig {
    fn validate(&self) -> Result<(), GaError> {
        if self.psize < 2 {
            return Err(GaError::DegeneratePopulation);
        }
        let (clo, chi) = self.cr_bounds;
        let (mlo, mhi) = self.mr_bounds;
        let ok = clo <= chi
            && mlo <= mhi
            && (clo..=chi).contains(&self.cr0)
            && (mlo..=mhi).contains(&self.mr0)
            && self.k_max >= 1;
        if ok {
            Ok(())
        } else {
            Err(GaError::InvalidConfig)
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum GaError {
    /// Selection needs at least two chromosomes.
    DegeneratePopulation,
    /// Roulette selection requires strictly positive fitness values.
    NonPositiveFitness,
    /// Rate adaptation requires strictly positive mean fitness values.
    NonPositiveMean,
    /// Rates or bounds outside their allowed ranges.
    InvalidConfig,
    Infeasible(InfeasibleInstance),
}

impl fmt::Display for GaError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GaError::DegeneratePopulation => write!(f, "population size must be at least 2"),
            GaError::NonPositiveFitness => write!(f, "all fitness values must be positive"),
            GaError::NonPositiveMean => write!(f, "mean fitness values must be positive"),
            GaError::InvalidConfig => write!(f, "rates must lie within their bounds and k_max must be positive"),
            GaError::Infeasible(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for GaError {}

impl From<InfeasibleInstance> for GaError {
    fn from(e: InfeasibleInstance) -> Self {
        GaError::Infeasible(e)
    }
}

/// Selection probability of each chromosome: `(F - f_c) / (F * (n - 1))`
/// with `F` the fitness total, so cheaper (better) chromosomes get larger
/// shares and the probabilities sum to one.
pub fn selection_probabilities(fitnesses: &[f64]) -> Result<Vec<f64>, GaError> {
    if fitnesses.len() < 2 {
        return Err(GaError::DegeneratePopulation);
    }
    if fitnesses.iter().any(|&f| f <= 0.0 || !f.is_finite()) {
        return Err(GaError::NonPositiveFitness);
    }
    let total: f64 = fitnesses.iter().sum();
    let n = fitnesses.len() as f64;
    Ok(fitnesses.iter().map(|&f| (total - f) / (total * (n - 1.0))).collect())
}

/// Roulette-wheel selection: draws r in (0, 1] and returns the first index
/// whose cumulative probability reaches r.
pub fn select<R: Rng>(fitnesses: &[f64], rng: &mut R) -> Result<usize, GaError> {
    let probabilities = selection_probabilities(fitnesses)?;
    let r = 1.0 - rng.gen::<f64>();
    let mut cumulative = 0.0;
    for (c, p) in probabilities.iter().enumerate() {
        cumulative += p;
        if r <= cumulative {
            return Ok(c);
        }
    }
    Ok(fitnesses.len() - 1)
}

/// Matrix axis of the crossover and mutation operators.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    Row,
    Column,
}

fn copy_slice(from: &ScheduleMatrix, to: &mut ScheduleMatrix, axis: Axis, index: usize) {
    match axis {
        Axis::Row => {
            for t in 0..from.n_periods() {
                to.set(index, t, from.get(index, t));
            }
        }
        Axis::Column => {
            for i in 0..from.n_customers() {
                to.set(i, index, from.get(i, index));
            }
        }
    }
}

/// Exchanges slice `index` of the chosen axis between the parents. Children
/// are returned unrepaired; callers pass them through `schedule::repair`.
pub fn crossover_at(a: &ScheduleMatrix, b: &ScheduleMatrix, axis: Axis, index: usize) -> (ScheduleMatrix, ScheduleMatrix) {
    assert_eq!(a.n_customers(), b.n_customers(), "parent shape mismatch");
    assert_eq!(a.n_periods(), b.n_periods(), "parent shape mismatch");
    let mut child_a = a.clone();
    let mut child_b = b.clone();
    copy_slice(b, &mut child_a, axis, index);
    copy_slice(a, &mut child_b, axis, index);
    (child_a, child_b)
}

/// Crossover with a uniformly chosen axis and slice index.
pub fn crossover<R: Rng>(a: &ScheduleMatrix, b: &ScheduleMatrix, rng: &mut R) -> (ScheduleMatrix, ScheduleMatrix) {
    let axis = if rng.gen_bool(0.5) { Axis::Row } else { Axis::Column };
    let n = match axis {
        Axis::Row => a.n_customers(),
        Axis::Column => a.n_periods(),
    };
    let index = rng.gen_range(0..n);
    crossover_at(a, b, axis, index)
}

/// Swaps slices `i` and `j` of the chosen axis.
pub fn mutate_at(parent: &ScheduleMatrix, axis: Axis, i: usize, j: usize) -> ScheduleMatrix {
    let mut child = parent.clone();
    match axis {
        Axis::Row => {
            for t in 0..parent.n_periods() {
                child.set(i, t, parent.get(j, t));
                child.set(j, t, parent.get(i, t));
            }
        }
        Axis::Column => {
            for c in 0..parent.n_customers() {
                child.set(c, i, parent.get(c, j));
                child.set(c, j, parent.get(c, i));
            }
        }
    }
    child
}

/// Mutation: swaps two distinct rows or columns, axis chosen uniformly. When
/// the chosen axis has fewer than two slices the other axis is used; a 1×1
/// matrix is returned unchanged. The child is unrepaired.
pub fn mutate<R: Rng>(parent: &ScheduleMatrix, rng: &mut R) -> ScheduleMatrix {
    let mut axis = if rng.gen_bool(0.5) { Axis::Row } else { Axis::Column };
    let slices = |axis: Axis| match axis {
        Axis::Row => parent.n_customers(),
        Axis::Column => parent.n_periods(),
    };
    if slices(axis) < 2 {
        axis = match axis {
            Axis::Row => Axis::Column,
            Axis::Column => Axis::Row,
        };
    }
    let n = slices(axis);
    if n < 2 {
        return parent.clone();
    }
    let i = rng.gen_range(0..n);
    let mut j = rng.gen_range(0..n - 1);
    if j >= i {
        j += 1;
    }
    mutate_at(parent, axis, i, j)
}

/// Crossover and mutation rates plus the per-generation mean-fitness history
/// that drives their adaptation.
#[derive(Debug, Clone, PartialEq)]
pub struct AdaptiveRates {
    pub cr: f64,
    pub mr: f64,
    /// (mean parent fitness, mean offspring fitness) per generation.
    pub history: Vec<(f64, f64)>,
}

impl AdaptiveRates {
    pub fn initial(config: &GaConfig) -> Self {
        AdaptiveRates {
            cr: config.cr0,
            mr: config.mr0,
            history: Vec::new(),
        }
    }
}

/// Feedback step for the operator rates. With minimization, offspring beating
/// their parents means `mean_parent / mean_offspring - 1 >= 0.1`: both rates
/// rise (by 0.05 and 0.005) to generate more offspring; the opposite signal
/// lowers them; anything in between leaves them unchanged. Results are
/// clamped to the configured bounds.
pub fn adapt_rates(
    rates: &AdaptiveRates,
    config: &GaConfig,
    mean_parent: f64,
    mean_offspring: f64,
) -> Result<AdaptiveRates, GaError> {
    if mean_parent <= 0.0 || mean_offspring <= 0.0 {
        return Err(GaError::NonPositiveMean);
    }
    // Difference-over-mean form keeps exact threshold hits exact.
    let improvement = (mean_parent - mean_offspring) / mean_offspring;
    let (mut cr, mut mr) = (rates.cr, rates.mr);
    if improvement >= 0.1 {
        cr += 0.05;
        mr += 0.005;
    } else if improvement <= -0.1 {
        cr -= 0.05;
        mr -= 0.005;
    }
    cr = cr.clamp(config.cr_bounds.0, config.cr_bounds.1);
    mr = mr.clamp(config.mr_bounds.0, config.mr_bounds.1);
    let mut history = rates.history.clone();
    history.push((mean_parent, mean_offspring));
    Ok(AdaptiveRates { cr, mr, history })
}

/// One population member.
#[derive(Debug, Clone, PartialEq)]
pub struct PopulationMember {
    pub schedule: ScheduleMatrix,
    pub fitness: f64,
}

/// The evolving population.
#[derive(Debug, Clone, PartialEq)]
pub struct Population {
    pub members: Vec<PopulationMember>,
    pub generation: usize,
}

impl Population {
    pub fn fitnesses(&self) -> Vec<f64> {
        self.members.iter().map(|m| m.fitness).collect()
    }

    pub fn mean_fitness(&self) -> f64 {
        self.fitnesses().iter().sum::<f64>() / self.members.len() as f64
    }
}

/// One generation-log record.
#[derive(Debug, Clone, PartialEq)]
pub struct GenerationRecord {
    pub generation: usize,
    pub best: f64,
    pub mean: f64,
    pub cr: f64,
    pub mr: f64,
}

/// Result of an evolution run: the best solution found and the per-generation
/// convergence log.
#[derive(Debug, Clone, PartialEq)]
pub struct GaRun {
    pub best: Solution,
    pub log: Vec<GenerationRecord>,
}

impl GaRun {
    /// Tab-separated generation log with a header line.
    pub fn log_text(&self) -> String {
        let mut s = String::from("gen\tbest\tmean\tcr\tmr\n");
        for r in &self.log {
            s.push_str(&format!("{}\t{}\t{}\t{}\t{}\n", r.generation, r.best, r.mean, r.cr, r.mr));
        }
        s
    }
}

/// Runs the adaptive genetic algorithm on an instance. Deterministic for a
/// fixed config (including the seed).
///
/// Each generation draws `round(cr * psize)` crossover children (in pairs)
/// and `min(round(mr * psize * |I| * |T|), psize)` mutation children from
/// roulette-selected parents, repairs or dismisses them, and keeps the best
/// `psize` of parents and offspring. The run stops after `k_max` consecutive
/// generations without improvement of the best cost, or at `max_generations`.
pub fn evolve(instance: &Instance, config: &GaConfig) -> Result<GaRun, GaError> {
    config.validate()?;
    let mut rng = StdRng::seed_from_u64(config.seed);
    let n_bits = instance.n_customers() * instance.n_periods;

    if instance.demand.total() == 0.0 {
        // Nothing to deliver: the empty schedule is optimal at zero cost.
        let empty = ScheduleMatrix::zeros(instance.n_customers(), instance.n_periods);
        let best = evaluate_solution(&empty, instance).expect("empty schedule evaluates on zero-demand instance");
        return Ok(GaRun { best, log: Vec::new() });
    }

    let evaluate = |m: &ScheduleMatrix| evaluate_solution(m, instance).ok();

    // Initial population: a repaired full-delivery chromosome (when feasible)
    // seeds the pool, the rest is random.
    let mut members: Vec<PopulationMember> = Vec::with_capacity(config.psize);
    let mut best: Option<Solution> = None;
    let consider = |sol: Solution, members: &mut Vec<PopulationMember>, best: &mut Option<Solution>| {
        if best.as_ref().is_none_or(|b| sol.cost.total < b.cost.total) {
            *best = Some(sol.clone());
        }
        members.push(PopulationMember {
            schedule: sol.schedule,
            fitness: sol.cost.total,
        });
    };
    if let Some(full) = repair(&ScheduleMatrix::all_ones(instance.n_customers(), instance.n_periods), instance) {
        if let Some(sol) = evaluate(&full) {
            consider(sol, &mut members, &mut best);
        }
    }
    while members.len() < config.psize {
        let m = random_schedule(instance, &mut rng)?;
        let Some(sol) = evaluate(&m) else { continue };
        consider(sol, &mut members, &mut best);
    }
    let mut best = best.expect("population is nonempty");

    let mut rates = AdaptiveRates::initial(config);
    let mut log = Vec::new();
    let mut non_improving = 0usize;

    for generation in 1..=config.max_generations {
        let fitnesses: Vec<f64> = members.iter().map(|m| m.fitness).collect();
        let mean_parent = fitnesses.iter().sum::<f64>() / fitnesses.len() as f64;

        let mut offspring: Vec<PopulationMember> = Vec::new();
        let mut offspring_fitness_sum = 0.0;
        let admit = |child: ScheduleMatrix, offspring: &mut Vec<PopulationMember>, sum: &mut f64| {
            if let Some(repaired) = repair(&child, instance) {
                if let Some(sol) = evaluate(&repaired) {
                    *sum += sol.cost.total;
                    offspring.push(PopulationMember {
                        schedule: sol.schedule,
                        fitness: sol.cost.total,
                    });
                }
            }
        };

        let n_cross = (rates.cr * config.psize as f64).round() as usize;
        let mut produced = 0;
        while produced < n_cross {
            let pa = select(&fitnesses, &mut rng)?;
            let pb = select(&fitnesses, &mut rng)?;
            let (ca, cb) = crossover(&members[pa].schedule, &members[pb].schedule, &mut rng);
            admit(ca, &mut offspring, &mut offspring_fitness_sum);
            produced += 1;
            if produced < n_cross {
                admit(cb, &mut offspring, &mut offspring_fitness_sum);
                produced += 1;
            }
        }

        let n_mut = ((rates.mr * config.psize as f64 * n_bits as f64).round() as usize).min(config.psize);
        for _ in 0..n_mut {
            let p = select(&fitnesses, &mut rng)?;
            let child = mutate(&members[p].schedule, &mut rng);
            admit(child, &mut offspring, &mut offspring_fitness_sum);
        }

        let n_offspring = offspring.len();
        let mean_offspring = if n_offspring > 0 {
            offspring_fitness_sum / n_offspring as f64
        } else {
            0.0
        };

        // Elitist truncation of parents and offspring.
        members.extend(offspring);
        members.sort_by(|a, b| a.fitness.partial_cmp(&b.fitness).unwrap());
        members.truncate(config.psize);

        let gen_best = members[0].fitness;
        if gen_best < best.cost.total {
            best = evaluate(&members[0].schedule).expect("population members evaluate");
            non_improving = 0;
        } else {
            non_improving += 1;
        }

        if n_offspring > 0 {
            rates = adapt_rates(&rates, config, mean_parent, mean_offspring)?;
        }

        let mean = members.iter().map(|m| m.fitness).sum::<f64>() / members.len() as f64;
        log.push(GenerationRecord {
            generation,
            best: best.cost.total,
            mean,
            cr: rates.cr,
            mr: rates.mr,
        });

        if non_improving >= config.k_max {
            break;
        }
    }

    Ok(GaRun { best, log })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::{generate_instance, GenConfig};

    #[test]
    fn selection_probabilities_match_hand_computation() {
        let p = selection_probabilities(&[10.0, 30.0]).unwrap();
        assert_eq!(p, vec![0.75, 0.25]);
    }

    #[test]
    fn equal_fitness_means_uniform_selection() {
        let p = selection_probabilities(&[7.0; 5]).unwrap();
        for &x in &p {
            assert!((x - 0.2).abs() <= 1e-12);
        }
    }

    #[test]
    fn selection_probabilities_sum_to_one() {
        let fitnesses = [3.0, 17.5, 42.0, 9.25, 100.0, 55.5];
        let p = selection_probabilities(&fitnesses).unwrap();
        assert!((p.iter().sum::<f64>() - 1.0).abs() <= 1e-12);
        // Better (lower) fitness gets the larger share.
        assert!(p[0] > p[2]);
    }

    #[test]
    fn selection_rejects_degenerate_inputs() {
        assert_eq!(selection_probabilities(&[5.0]), Err(GaError::DegeneratePopulation));
        assert_eq!(selection_probabilities(&[5.0, 0.0]), Err(GaError::NonPositiveFitness));
        assert_eq!(selection_probabilities(&[5.0, -1.0]), Err(GaError::NonPositiveFitness));
    }

    #[test]
    fn empirical_selection_tracks_probabilities() {
        let fitnesses = [10.0, 20.0, 30.0, 40.0];
        let p = selection_probabilities(&fitnesses).unwrap();
        let mut rng = StdRng::seed_from_u64(5);
        let mut counts = [0usize; 4];
        let draws = 20_000;
        for _ in 0..draws {
            counts[select(&fitnesses, &mut rng).unwrap()] += 1;
        }
        for c in 0..4 {
            let freq = counts[c] as f64 / draws as f64;
            assert!((freq - p[c]).abs() <= 0.02, "index {c}: {freq} vs {}", p[c]);
        }
    }

    #[test]
    fn crossover_of_identical_parents_is_identity() {
        let a = ScheduleMatrix::from_rows(&[&[1, 0, 1], &[0, 1, 1]]);
        let mut rng = StdRng::seed_from_u64(1);
        let (ca, cb) = crossover(&a, &a, &mut rng);
        assert_eq!(ca, a);
        assert_eq!(cb, a);
    }

    #[test]
    fn row_crossover_on_single_differing_row_swaps_parents() {
        let a = ScheduleMatrix::from_rows(&[&[1, 0], &[1, 1], &[0, 0]]);
        let b = ScheduleMatrix::from_rows(&[&[1, 0], &[0, 0], &[0, 0]]);
        let (ca, cb) = crossover_at(&a, &b, Axis::Row, 1);
        assert_eq!(ca, b);
        assert_eq!(cb, a);
    }

    #[test]
    fn crossover_children_agree_with_parents_outside_the_slice() {
        let a = ScheduleMatrix::from_rows(&[&[1, 0, 1], &[0, 1, 0]]);
        let b = ScheduleMatrix::from_rows(&[&[0, 1, 1], &[1, 0, 0]]);
        let (ca, cb) = crossover_at(&a, &b, Axis::Column, 2);
        for i in 0..2 {
            for t in 0..3 {
                if t == 2 {
                    assert_eq!(ca.get(i, t), b.get(i, t));
                    assert_eq!(cb.get(i, t), a.get(i, t));
                } else {
                    assert_eq!(ca.get(i, t), a.get(i, t));
                    assert_eq!(cb.get(i, t), b.get(i, t));
                }
            }
        }
    }

    #[test]
    fn column_swap_mutation_hand_trace() {
        let parent = ScheduleMatrix::from_rows(&[&[1, 0], &[1, 1]]);
        let child = mutate_at(&parent, Axis::Column, 0, 1);
        assert_eq!(child, ScheduleMatrix::from_rows(&[&[0, 1], &[1, 1]]));
    }

    #[test]
    fn mutation_is_an_involution_and_preserves_bit_count() {
        let parent = ScheduleMatrix::from_rows(&[&[1, 0, 1], &[0, 1, 1], &[1, 1, 0]]);
        let child = mutate_at(&parent, Axis::Row, 0, 2);
        assert_eq!(child.count_ones(), parent.count_ones());
        assert_eq!(mutate_at(&child, Axis::Row, 0, 2), parent);
    }

    #[test]
    fn mutation_on_single_row_matrix_uses_columns() {
        let parent = ScheduleMatrix::from_rows(&[&[1, 0, 0]]);
        let mut rng = StdRng::seed_from_u64(3);
        for _ in 0..10 {
            let child = mutate(&parent, &mut rng);
            assert_eq!(child.count_ones(), 1);
        }
        let tiny = ScheduleMatrix::from_rows(&[&[1]]);
        assert_eq!(mutate(&tiny, &mut rng), tiny);
    }

    fn rates(cr: f64, mr: f64) -> AdaptiveRates {
        AdaptiveRates {
            cr,
            mr,
            history: Vec::new(),
        }
    }

    #[test]
    fn rate_adaptation_follows_the_feedback_rule() {
        let cfg = GaConfig::default();
        // improvement = mean_parent / mean_offspring - 1
        let cases = [
            (115.0, 100.0, 0.85, 0.085), // +0.15: reinforce
            (110.0, 100.0, 0.85, 0.085), // +0.10: reinforce (boundary)
            (100.0, 100.0, 0.8, 0.08),   // 0: dead zone
            (90.0, 100.0, 0.75, 0.075),  // -0.10: weaken (boundary)
            (85.0, 100.0, 0.75, 0.075),  // -0.15: weaken
        ];
        for (mp, mo, want_cr, want_mr) in cases {
            let next = adapt_rates(&rates(0.8, 0.08), &cfg, mp, mo).unwrap();
            assert!((next.cr - want_cr).abs() <= 1e-12, "mp={mp}: cr {}", next.cr);
            assert!((next.mr - want_mr).abs() <= 1e-12, "mp={mp}: mr {}", next.mr);
            assert_eq!(next.history, vec![(mp, mo)]);
        }
    }

    #[test]
    fn rates_clamp_at_their_bounds() {
        let cfg = GaConfig::default();
        let up = adapt_rates(&rates(0.95, 0.08), &cfg, 120.0, 100.0).unwrap();
        assert_eq!(up.cr, 0.95);
        assert!((up.mr - 0.085).abs() <= 1e-12);
        let down = adapt_rates(&rates(0.4, 0.01), &cfg, 80.0, 100.0).unwrap();
        assert_eq!(down.cr, 0.4);
        assert_eq!(down.mr, 0.01);
    }

    #[test]
    fn rate_adaptation_rejects_nonpositive_means() {
        let cfg = GaConfig::default();
        assert_eq!(adapt_rates(&rates(0.8, 0.08), &cfg, 0.0, 10.0), Err(GaError::NonPositiveMean));
        assert_eq!(adapt_rates(&rates(0.8, 0.08), &cfg, 10.0, 0.0), Err(GaError::NonPositiveMean));
    }

    fn small_ga() -> GaConfig {
        GaConfig {
            psize: 12,
            max_generations: 40,
            k_max: 15,
            seed: 3,
            ..GaConfig::default()
        }
    }

    #[test]
    fn best_fitness_log_is_non_increasing() {
        let inst = generate_instance(&GenConfig::new(4, 4, 3, 2, 21)).unwrap();
        let run = evolve(&inst, &small_ga()).unwrap();
        for w in run.log.windows(2) {
            assert!(w[1].best <= w[0].best);
        }
        assert_eq!(run.best.cost.total, run.log.last().unwrap().best);
    }

    #[test]
    fn evolution_is_deterministic() {
        let inst = generate_instance(&GenConfig::new(4, 4, 3, 2, 21)).unwrap();
        let a = evolve(&inst, &small_ga()).unwrap();
        let b = evolve(&inst, &small_ga()).unwrap();
        assert_eq!(a.best.cost, b.best.cost);
        assert_eq!(a.best.schedule, b.best.schedule);
        assert_eq!(a.log, b.log);
    }

    #[test]
    fn rates_stay_within_bounds_throughout_a_run() {
        let inst = generate_instance(&GenConfig::new(4, 4, 3, 2, 21)).unwrap();
        let run = evolve(&inst, &small_ga()).unwrap();
        for r in &run.log {
            assert!((0.4..=0.95).contains(&r.cr));
            assert!((0.01..=0.3).contains(&r.mr));
        }
    }

    #[test]
    fn log_text_has_header_and_rows() {
        let inst = generate_instance(&GenConfig::new(3, 3, 3, 2, 9)).unwrap();
        let run = evolve(&inst, &small_ga()).unwrap();
        let text = run.log_text();
        assert!(text.starts_with("gen\tbest\tmean\tcr\tmr\n"));
        assert_eq!(text.lines().count(), run.log.len() + 1);
    }

    use rand::rngs::StdRng;
    use rand::SeedableRng;

    mod properties {
        use super::*;
        use crate::schedule::{check_feasibility, CapacityCheckMode};
        use proptest::prelude::*;

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(24))]

            #[test]
            fn operator_outputs_repair_to_feasible_same_shape(seed in 0u64..2000) {
                let mut cfg = GenConfig::new(4, 3, 3, 2, seed);
                cfg.demand_range = (5.0, 15.0);
                let inst = generate_instance(&cfg).unwrap();
                let mut rng = StdRng::seed_from_u64(seed);
                let a = random_schedule(&inst, &mut rng).unwrap();
                let b = random_schedule(&inst, &mut rng).unwrap();
                let (ca, cb) = crossover(&a, &b, &mut rng);
                let m = mutate(&a, &mut rng);
                for child in [ca, cb, m] {
                    prop_assert_eq!(child.n_customers(), 4);
                    prop_assert_eq!(child.n_periods(), 3);
                    if let Some(fixed) = repair(&child, &inst) {
                        prop_assert!(check_feasibility(&fixed, &inst, CapacityCheckMode::Packing).feasible);
                    }
                }
            }
        }
    }
}
