//! Evaluation metrics (difficulty / closeness / saving), the paired t-test,
//! and the benchmark suite runner with its CSV report.

use crate::exact::baseline_direct;
use crate::ga::{evolve, GaConfig, GaError};
use crate::instance::{generate_instance, GenConfig, GenError};
use crate::stats::{student_t_quantile, student_t_two_sided_p};
use std::collections::HashMap;
use std::fmt;
use std::time::Instant;

/// Gap metrics relating an external lower bound, an external upper bound,
/// and a heuristic's best value. Absent inputs yield absent metrics.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Metrics {
    /// (UB - LB) / UB: how loose the external solver's bounds are.
    pub difficulty: Option<f64>,
    /// (HBV - LB) / HBV: heuristic distance to the lower bound.
    pub closeness: Option<f64>,
    /// (UB - HBV) / UB: heuristic improvement over the upper bound.
    pub saving: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum MetricsError {
    NonPositiveUpperBound(f64),
    NonPositiveHeuristicValue(f64),
}

impl fmt::Display for MetricsError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MetricsError::NonPositiveUpperBound(u) => write!(f, "upper bound {u} must be positive"),
            MetricsError::NonPositiveHeuristicValue(h) => write!(f, "heuristic value {h} must be positive"),
        }
    }
}

impl std::error::Error for MetricsError {}

/// Computes whichever of the three metrics its inputs allow. Denominators
/// (the upper bound and the heuristic value) must be positive where used.
pub fn compute_metrics(lb: Option<f64>, ub: Option<f64>, hbv: Option<f64>) -> Result<Metrics, MetricsError> {
    if let Some(u) = ub {
        if u <= 0.0 {
            return Err(MetricsError::NonPositiveUpperBound(u));
        }
    }
    if let Some(h) = hbv {
        if h <= 0.0 {
            return Err(MetricsError::NonPositiveHeuristicValue(h));
        }
    }
    Ok(Metrics {
        difficulty: lb.zip(ub).map(|(l, u)| (u - l) / u),
        closeness: lb.zip(hbv).map(|(l, h)| (h - l) / h),
        saving: ub.zip(hbv).map(|(u, h)| (u - h) / u),
    })
}

/// Classical paired t-test result.
#[derive(Debug, Clone, PartialEq)]
pub struct TTestResult {
    pub t_statistic: f64,
    pub p_value: f64,
    pub mean_difference: f64,
    pub confidence_interval_95: (f64, f64),
    pub n: usize,
}

impl fmt::Display for TTestResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "t = {:.4}, p = {:.4e}, mean difference = {:.4} (95% CI: {:.4}, {:.4}), n = {}",
            self.t_statistic,
            self.p_value,
            self.mean_difference,
            self.confidence_interval_95.0,
            self.confidence_interval_95.1,
            self.n
        )
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum StatsError {
    LengthMismatch { a: usize, b: usize },
    TooFewSamples(usize),
    /// All pairwise differences are identical; the t statistic is undefined.
    ZeroVariance,
}

impl fmt::Display for StatsError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StatsError::LengthMismatch { a, b } => write!(f, "series lengths differ: {a} vs {b}"),
            StatsError::TooFewSamples(n) => write!(f, "need at least 2 paired samples, got {n}"),
            StatsError::ZeroVariance => write!(f, "paired differences have zero variance"),
        }
    }
}

impl std::error::Error for StatsError {}

/// Paired t-test on the differences `a - b`, with two-sided p-value from the
/// Student-t distribution and a 95% confidence interval for the mean
/// difference.
pub fn paired_t_test(a: &[f64], b: &[f64]) -> Result<TTestResult, StatsError> {
    if a.len() != b.len() {
        return Err(StatsError::LengthMismatch { a: a.len(), b: b.len() });
    }
    let n = a.len();
    if n < 2 {
        return Err(StatsError::TooFewSamples(n));
    }
    let diffs: Vec<f64> = a.iter().zip(b).map(|(x, y)| x - y).collect();
    let mean = diffs.iter().sum::<f64>() / n as f64;
    let ss: f64 = diffs.iter().map(|d| (d - mean) * (d - mean)).sum();
    if ss == 0.0 {
        return Err(StatsError::ZeroVariance);
    }
    let sd = (ss / (n - 1) as f64).sqrt();
    let se = sd / (n as f64).sqrt();
    let t = mean / se;
    let dof = n - 1;
    let p = student_t_two_sided_p(t, dof);
    let margin = student_t_quantile(0.975, dof) * se;
    Ok(TTestResult {
        t_statistic: t,
        p_value: p,
        mean_difference: mean,
        confidence_interval_95: (mean - margin, mean + margin),
        n,
    })
}

/// The benchmark grid: the cross product of the size lists, replicated over
/// the instance seeds. The default grid is the 32-configuration benchmark
/// (|I| in {5,10,20,30}, |T| in {5,7}, |V| in {3,5}, |P| in {2,5}) with three
/// seeds, i.e. 96 instances.
#[derive(Debug, Clone, PartialEq)]
pub struct SuiteConfig {
    pub customers: Vec<usize>,
    pub periods: Vec<usize>,
    pub vehicles: Vec<usize>,
    pub products: Vec<usize>,
    pub seeds: Vec<u64>,
    /// Solver repetitions per instance; reported values are per-instance means.
    pub repeats: usize,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            customers: vec![5, 10, 20, 30],
            periods: vec![5, 7],
            vehicles: vec![3, 5],
            products: vec![2, 5],
            seeds: vec![1, 2, 3],
            repeats: 1,
        }
    }
}

/// One CSV row of the benchmark report.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricsRecord {
    pub instance_id: String,
    pub n_customers: usize,
    pub n_periods: usize,
    pub n_vehicles: usize,
    pub n_products: usize,
    pub seed: u64,
    pub lb: Option<f64>,
    pub ub: Option<f64>,
    pub hbv_maga: f64,
    pub hbv_baseline: Option<f64>,
    pub difficulty: Option<f64>,
    pub closeness_maga: Option<f64>,
    pub saving_maga: Option<f64>,
    pub runtime_maga_s: f64,
    pub runtime_baseline_s: Option<f64>,
}

/// External LB/UB bounds keyed by instance id.
pub type BoundsTable = HashMap<String, (Option<f64>, Option<f64>)>;

#[derive(Debug)]
pub enum BenchError {
    Gen(GenError),
    Ga(GaError),
    Metrics(MetricsError),
    UnknownInstanceInBounds(String),
    MalformedBounds(String),
    MalformedCsv(String),
}

impl fmt::Display for BenchError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BenchError::Gen(e) => write!(f, "instance generation: {e}"),
            BenchError::Ga(e) => write!(f, "solver: {e}"),
            BenchError::Metrics(e) => write!(f, "metrics: {e}"),
            BenchError::UnknownInstanceInBounds(id) => write!(f, "bounds file references unknown instance id {id}"),
            BenchError::MalformedBounds(msg) => write!(f, "bounds file: {msg}"),
            BenchError::MalformedCsv(msg) => write!(f, "csv: {msg}"),
        }
    }
}

impl std::error::Error for BenchError {}

impl From<GenError> for BenchError {
    fn from(e: GenError) -> Self {
        BenchError::Gen(e)
    }
}

impl From<GaError> for BenchError {
    fn from(e: GaError) -> Self {
        BenchError::Ga(e)
    }
}

impl From<MetricsError> for BenchError {
    fn from(e: MetricsError) -> Self {
        BenchError::Metrics(e)
    }
}

pub fn instance_id(n_i: usize, n_t: usize, n_v: usize, n_p: usize, seed: u64) -> String {
    format!("I{n_i}_T{n_t}_V{n_v}_P{n_p}_s{seed}")
}

/// Parses a bounds CSV with header `instance_id,LB,UB`; empty cells mean the
/// external solver produced no bound.
pub fn parse_bounds_csv(text: &str) -> Result<BoundsTable, BenchError> {
    let mut lines = text.lines();
    let header = lines.next().ok_or_else(|| BenchError::MalformedBounds("empty file".into()))?;
    let cols: Vec<&str> = header.split(',').map(str::trim).collect();
    if cols != ["instance_id", "LB", "UB"] {
        return Err(BenchError::MalformedBounds(format!("expected header instance_id,LB,UB, found '{header}'")));
    }
    let mut table = BoundsTable::new();
    for (k, line) in lines.enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let cells: Vec<&str> = line.split(',').map(str::trim).collect();
        if cells.len() != 3 {
            return Err(BenchError::MalformedBounds(format!("row {} needs 3 cells", k + 2)));
        }
        let parse = |cell: &str| -> Result<Option<f64>, BenchError> {
            if cell.is_empty() {
                Ok(None)
            } else {
                cell.parse()
                    .map(Some)
                    .map_err(|_| BenchError::MalformedBounds(format!("cannot parse '{cell}' in row {}", k + 2)))
            }
        };
        table.insert(cells[0].to_string(), (parse(cells[1])?, parse(cells[2])?));
    }
    Ok(table)
}

fn ga_seed_for(base: u64, ordinal: usize, repeat: usize) -> u64 {
    base.wrapping_add((ordinal as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15))
        .wrapping_add(repeat as u64)
}

/// Runs the suite: generates each instance of the grid, solves it with the
/// adaptive GA (averaging over `repeats` runs) and the direct-delivery
/// baseline, joins external bounds when given, and returns one record per
/// instance sorted by difficulty descending (records without bounds follow,
/// by instance id).
pub fn run_benchmark(
    suite: &SuiteConfig,
    ga: &GaConfig,
    bounds: Option<&BoundsTable>,
) -> Result<Vec<MetricsRecord>, BenchError> {
    let mut records = Vec::new();
    let mut ordinal = 0usize;
    for &n_i in &suite.customers {
        for &n_t in &suite.periods {
            for &n_v in &suite.vehicles {
                for &n_p in &suite.products {
                    for &seed in &suite.seeds {
                        let id = instance_id(n_i, n_t, n_v, n_p, seed);
                        let instance = generate_instance(&GenConfig::new(n_i, n_t, n_v, n_p, seed))?;

                        let repeats = suite.repeats.max(1);
                        let mut hbv_sum = 0.0;
                        let mut time_sum = 0.0;
                        let mut best_total = f64::INFINITY;
                        for repeat in 0..repeats {
                            let cfg = GaConfig {
                                seed: ga_seed_for(ga.seed, ordinal, repeat),
                                ..ga.clone()
                            };
                            let started = Instant::now();
                            let run = evolve(&instance, &cfg)?;
                            time_sum += started.elapsed().as_secs_f64();
                            hbv_sum += run.best.cost.total;
                            best_total = best_total.min(run.best.cost.total);
                        }
                        let hbv_maga = hbv_sum / repeats as f64;
                        let runtime_maga_s = time_sum / repeats as f64;

                        let started = Instant::now();
                        let baseline = baseline_direct(&instance).ok();
                        let runtime_baseline_s = baseline.as_ref().map(|_| started.elapsed().as_secs_f64());
                        let hbv_baseline = baseline.map(|s| s.cost.total);

                        let (lb, ub) = bounds
                            .and_then(|table| table.get(&id).copied())
                            .unwrap_or((None, None));
                        let metrics = compute_metrics(lb, ub, Some(hbv_maga))?;

                        records.push(MetricsRecord {
                            instance_id: id,
                            n_customers: n_i,
                            n_periods: n_t,
                            n_vehicles: n_v,
                            n_products: n_p,
                            seed,
                            lb,
                            ub,
                            hbv_maga,
                            hbv_baseline,
                            difficulty: metrics.difficulty,
                            closeness_maga: metrics.closeness,
                            saving_maga: metrics.saving,
                            runtime_maga_s,
                            runtime_baseline_s,
                        });
                        ordinal += 1;
                    }
                }
            }
        }
    }

    if let Some(table) = bounds {
        for id in table.keys() {
            if !records.iter().any(|r| &r.instance_id == id) {
                return Err(BenchError::UnknownInstanceInBounds(id.clone()));
            }
        }
    }

    // Rank hardest first, unbounded rows after, deterministic within ties.
    records.sort_by(|a, b| {
        match (a.difficulty, b.difficulty) {
            (Some(x), Some(y)) => y.partial_cmp(&x).unwrap(),
            (Some(_), None) => std::cmp::Ordering::Less,
            (None, Some(_)) => std::cmp::Ordering::Greater,
            (None, None) => std::cmp::Ordering::Equal,
        }
        .then_with(|| a.instance_id.cmp(&b.instance_id))
    });
    Ok(records)
}

pub const CSV_HEADER: &str = "instance_id,I,T,V,P,seed,LB,UB,HBV_maga,HBV_baseline,difficulty,closeness_maga,saving_maga,runtime_maga_s,runtime_baseline_s";

fn cell(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

/// Renders records as the benchmark report CSV.
pub fn render_csv(records: &[MetricsRecord]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in records {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}\n",
            r.instance_id,
            r.n_customers,
            r.n_periods,
            r.n_vehicles,
            r.n_products,
            r.seed,
            cell(r.lb),
            cell(r.ub),
            r.hbv_maga,
            cell(r.hbv_baseline),
            cell(r.difficulty),
            cell(r.closeness_maga),
            cell(r.saving_maga),
            r.runtime_maga_s,
            cell(r.runtime_baseline_s),
        ));
    }
    out
}

/// Reads two numeric columns from a CSV by header name, skipping rows where
/// either cell is empty. Used to feed [`paired_t_test`] from report files.
pub fn read_csv_columns(text: &str, col_a: &str, col_b: &str) -> Result<(Vec<f64>, Vec<f64>), BenchError> {
    let mut lines = text.lines();
    let header = lines.next().ok_or_else(|| BenchError::MalformedCsv("empty file".into()))?;
    let cols: Vec<&str> = header.split(',').map(str::trim).collect();
    let ix_a = cols
        .iter()
        .position(|&c| c == col_a)
        .ok_or_else(|| BenchError::MalformedCsv(format!("no column named '{col_a}'")))?;
    let ix_b = cols
        .iter()
        .position(|&c| c == col_b)
        .ok_or_else(|| BenchError::MalformedCsv(format!("no column named '{col_b}'")))?;
    let mut a = Vec::new();
    let mut b = Vec::new();
    for (k, line) in lines.enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let cells: Vec<&str> = line.split(',').map(str::trim).collect();
        let get = |ix: usize| -> Result<Option<f64>, BenchError> {
            match cells.get(ix) {
                None | Some(&"") => Ok(None),
                Some(cell) => cell
                    .parse()
                    .map(Some)
                    .map_err(|_| BenchError::MalformedCsv(format!("cannot parse '{cell}' in row {}", k + 2))),
            }
        };
        if let (Some(x), Some(y)) = (get(ix_a)?, get(ix_b)?) {
            a.push(x);
            b.push(y);
        }
    }
    Ok((a, b))
}
