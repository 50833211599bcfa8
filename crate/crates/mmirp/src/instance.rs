//! Problem-instance data model, seeded random generation, travel-cost
//! matrices, validation, and the plain-text instance file format.
//!
//! Indexing conventions used throughout the crate: customers are `0..n_customers`,
//! periods `0..n_periods`, products `0..n_products`, vehicles `0..n_vehicles`.
//! In the travel-cost matrix node `0` is the supplier and node `i + 1` is
//! customer `i`.

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use std::fmt;
use std::fs;
use std::io;
use std::path::Path;

/// A product type and its weight (capacity units consumed per product unit).
#[derive(Debug, Clone, PartialEq)]
pub struct ProductSpec {
    pub id: usize,
    pub weight: f64,
}

/// A vehicle with a loading capacity (weight units) and a fixed cost charged
/// once per period in which the vehicle leaves the depot.
#[derive(Debug, Clone, PartialEq)]
pub struct VehicleSpec {
    pub id: usize,
    pub capacity: f64,
    /// Fixed cost per period, `fixed_cost[t]` for period `t`.
    pub fixed_cost: Vec<f64>,
}

impl VehicleSpec {
    pub fn fixed_cost_at(&self, period: usize) -> f64 {
        self.fixed_cost[period]
    }
}

/// A customer: grid location, storage capacity (weight units), and per-product
/// holding cost per unit per period.
#[derive(Debug, Clone, PartialEq)]
pub struct CustomerSpec {
    pub id: usize,
    pub x: f64,
    pub y: f64,
    pub storage_capacity: f64,
    /// Holding cost per product, `holding_cost[p]`.
    pub holding_cost: Vec<f64>,
}

/// Nonnegative quantities indexed (product, customer, period). Used for
/// demands, delivered amounts, and inventory ledgers.
#[derive(Debug, Clone, PartialEq)]
pub struct Tensor3 {
    values: Vec<f64>,
    n_products: usize,
    n_customers: usize,
    n_periods: usize,
}

impl Tensor3 {
    pub fn zeros(n_products: usize, n_customers: usize, n_periods: usize) -> Self {
        Tensor3 {
            values: vec![0.0; n_products * n_customers * n_periods],
            n_products,
            n_customers,
            n_periods,
        }
    }

    #[inline]
    fn offset(&self, product: usize, customer: usize, period: usize) -> usize {
        debug_assert!(product < self.n_products && customer < self.n_customers && period < self.n_periods);
        (product * self.n_customers + customer) * self.n_periods + period
    }

    #[inline]
    pub fn get(&self, product: usize, customer: usize, period: usize) -> f64 {
        self.values[self.offset(product, customer, period)]
    }

    #[inline]
    pub fn set(&mut self, product: usize, customer: usize, period: usize, value: f64) {
        let k = self.offset(product, customer, period);
        self.values[k] = value;
    }

    pub fn n_products(&self) -> usize {
        self.n_products
    }

    pub fn n_customers(&self) -> usize {
        self.n_customers
    }

    pub fn n_periods(&self) -> usize {
        self.n_periods
    }

    pub fn iter(&self) -> impl Iterator<Item = f64> + '_ {
        self.values.iter().copied()
    }

    pub fn total(&self) -> f64 {
        self.values.iter().sum()
    }
}

/// Demand tensor: `get(p, i, t)` is the demand of customer `i` for product
/// `p` in period `t`.
pub type DemandTensor = Tensor3;

/// An immutable problem instance.
#[derive(Debug, Clone, PartialEq)]
pub struct Instance {
    pub customers: Vec<CustomerSpec>,
    pub vehicles: Vec<VehicleSpec>,
    pub products: Vec<ProductSpec>,
    pub n_periods: usize,
    pub supplier: (f64, f64),
    pub grid_size: f64,
    pub seed: u64,
    pub demand: DemandTensor,
    /// Symmetric (n+1)×(n+1) matrix, node 0 = supplier, node i+1 = customer i.
    pub travel_cost: Vec<Vec<f64>>,
}

impl Instance {
    /// Assembles an instance, deriving the travel-cost matrix from the
    /// supplier and customer coordinates.
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        customers: Vec<CustomerSpec>,
        vehicles: Vec<VehicleSpec>,
        products: Vec<ProductSpec>,
        n_periods: usize,
        supplier: (f64, f64),
        grid_size: f64,
        seed: u64,
        demand: DemandTensor,
    ) -> Self {
        let points: Vec<(f64, f64)> = customers.iter().map(|c| (c.x, c.y)).collect();
        let travel_cost = travel_cost_matrix(supplier, &points);
        Instance {
            customers,
            vehicles,
            products,
            n_periods,
            supplier,
            grid_size,
            seed,
            demand,
            travel_cost,
        }
    }

    pub fn n_customers(&self) -> usize {
        self.customers.len()
    }

    pub fn n_vehicles(&self) -> usize {
        self.vehicles.len()
    }

    pub fn n_products(&self) -> usize {
        self.products.len()
    }

    /// Total fleet capacity in weight units.
    pub fn fleet_capacity(&self) -> f64 {
        self.vehicles.iter().map(|v| v.capacity).sum()
    }

    /// Largest single-vehicle capacity.
    pub fn max_vehicle_capacity(&self) -> f64 {
        self.vehicles.iter().fold(0.0, |m, v| m.max(v.capacity))
    }

    /// Weight of one unit of product `p`.
    pub fn product_weight(&self, p: usize) -> f64 {
        self.products[p].weight
    }
}

/// Configuration for the seeded random instance generator.
#[derive(Debug, Clone, PartialEq)]
pub struct GenConfig {
    pub n_customers: usize,
    pub n_periods: usize,
    pub n_vehicles: usize,
    pub n_products: usize,
    pub seed: u64,
    pub grid_size: f64,
    /// Demands are drawn as integers uniform on this closed interval.
    pub demand_range: (f64, f64),
    /// Holding costs are drawn uniformly (continuous) on this interval.
    pub holding_cost_range: (f64, f64),
    /// Vehicle fixed costs are drawn as integers uniform on this interval,
    /// constant over periods.
    pub fixed_cost_range: (f64, f64),
}

impl GenConfig {
    pub fn new(n_customers: usize, n_periods: usize, n_vehicles: usize, n_products: usize, seed: u64) -> Self {
        GenConfig {
            n_customers,
            n_periods,
            n_vehicles,
            n_products,
            seed,
            grid_size: 20.0,
            demand_range: (10.0, 50.0),
            holding_cost_range: (1.0, 5.0),
            fixed_cost_range: (10.0, 30.0),
        }
    }

    fn validate(&self) -> Result<(), GenError> {
        if self.n_customers == 0 || self.n_periods == 0 || self.n_vehicles == 0 || self.n_products == 0 {
            return Err(GenError::InvalidDimensions);
        }
        if self.grid_size.is_nan() || self.grid_size <= 0.0 {
            return Err(GenError::InvalidRange("grid_size"));
        }
        for (name, (lo, hi)) in [
            ("demand_range", self.demand_range),
            ("holding_cost_range", self.holding_cost_range),
            ("fixed_cost_range", self.fixed_cost_range),
        ] {
            if !(lo.is_finite() && hi.is_finite()) || lo < 0.0 || hi < lo {
                return Err(GenError::InvalidRange(name));
            }
        }
        Ok(())
    }
}

#[derive(Debug)]
pub enum GenError {
    InvalidDimensions,
    InvalidRange(&'static str),
}

impl fmt::Display for GenError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GenError::InvalidDimensions => write!(f, "all instance dimensions must be positive"),
            GenError::InvalidRange(name) => write!(f, "invalid range for {name}"),
        }
    }
}

impl std::error::Error for GenError {}

/// Product weights for a given product count. Counts 2 and 5 use the fixed
/// benchmark values; other counts spread weights evenly over [0.25, 2.5].
fn product_weights(n_products: usize) -> Vec<f64> {
    match n_products {
        1 => vec![1.0],
        2 => vec![1.0, 2.0],
        5 => vec![0.25, 0.75, 1.0, 1.5, 2.5],
        n => (0..n)
            .map(|k| 0.25 + (2.5 - 0.25) * k as f64 / (n - 1) as f64)
            .collect(),
    }
}

/// Per-customer capacity unit: 50 for two products, 100 for five, linear in
/// the product count between and clamped outside.
fn capacity_unit(n_products: usize) -> f64 {
    (50.0 + 50.0 * (n_products as f64 - 2.0) / 3.0).clamp(50.0, 100.0)
}

/// Customer storage capacity: 300 for two products, 500 for five.
fn storage_capacity(n_products: usize) -> f64 {
    (300.0 + 200.0 * (n_products as f64 - 2.0) / 3.0).clamp(300.0, 500.0)
}

/// Capacity spread across a heterogeneous fleet: factors evenly spaced on
/// [0.8, 1.2]; a single vehicle gets factor 1. Scaled by 10 so the common
/// fleet sizes produce exact capacities.
fn fleet_factors_x10(n_vehicles: usize) -> Vec<f64> {
    if n_vehicles == 1 {
        return vec![10.0];
    }
    (0..n_vehicles)
        .map(|k| 8.0 + 4.0 * k as f64 / (n_vehicles - 1) as f64)
        .collect()
}

/// Generates a random instance. Deterministic in `config` (including the
/// seed): the supplier sits at the grid center, customer locations are
/// uniform on the grid square, and capacities/storages/weights follow the
/// benchmark parameter table for the configured product count.
pub fn generate_instance(config: &GenConfig) -> Result<Instance, GenError> {
    config.validate()?;
    let mut rng = StdRng::seed_from_u64(config.seed);
    let (n_i, n_t, n_v, n_p) = (config.n_customers, config.n_periods, config.n_vehicles, config.n_products);

    let weights = product_weights(n_p);
    let products: Vec<ProductSpec> = weights
        .iter()
        .enumerate()
        .map(|(k, &w)| ProductSpec { id: k + 1, weight: w })
        .collect();

    let base_capacity = n_i as f64 * capacity_unit(n_p);
    let storage = storage_capacity(n_p);

    // Draw order is fixed: locations, holding costs, vehicle fixed costs, demands.
    let mut customers = Vec::with_capacity(n_i);
    let mut locations = Vec::with_capacity(n_i);
    for id in 1..=n_i {
        let x = rng.gen_range(0.0..config.grid_size);
        let y = rng.gen_range(0.0..config.grid_size);
        locations.push((id, x, y));
    }
    for &(id, x, y) in &locations {
        let holding: Vec<f64> = (0..n_p)
            .map(|_| rng.gen_range(config.holding_cost_range.0..=config.holding_cost_range.1))
            .collect();
        customers.push(CustomerSpec {
            id,
            x,
            y,
            storage_capacity: storage,
            holding_cost: holding,
        });
    }

    let (flo, fhi) = (config.fixed_cost_range.0.ceil() as i64, config.fixed_cost_range.1.floor() as i64);
    let vehicles: Vec<VehicleSpec> = fleet_factors_x10(n_v)
        .iter()
        .enumerate()
        .map(|(k, &factor_x10)| {
            let f = rng.gen_range(flo..=fhi) as f64;
            VehicleSpec {
                id: k + 1,
                capacity: base_capacity * factor_x10 / 10.0,
                fixed_cost: vec![f; n_t],
            }
        })
        .collect();

    let (dlo, dhi) = (config.demand_range.0.ceil() as i64, config.demand_range.1.floor() as i64);
    if dhi < dlo {
        return Err(GenError::InvalidRange("demand_range"));
    }
    let mut demand = Tensor3::zeros(n_p, n_i, n_t);
    for p in 0..n_p {
        for i in 0..n_i {
            for t in 0..n_t {
                demand.set(p, i, t, rng.gen_range(dlo..=dhi) as f64);
            }
        }
    }

    let supplier = (config.grid_size / 2.0, config.grid_size / 2.0);
    Ok(Instance::new(
        customers,
        vehicles,
        products,
        n_t,
        supplier,
        config.grid_size,
        config.seed,
        demand,
    ))
}

/// Euclidean travel-cost matrix over the supplier (node 0) and the given
/// customer points, at full double precision.
pub fn travel_cost_matrix(supplier: (f64, f64), customers: &[(f64, f64)]) -> Vec<Vec<f64>> {
    let mut points = Vec::with_capacity(customers.len() + 1);
    points.push(supplier);
    points.extend_from_slice(customers);
    let n = points.len();
    let mut matrix = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in (i + 1)..n {
            let dx = points[i].0 - points[j].0;
            let dy = points[i].1 - points[j].1;
            let d = (dx * dx + dy * dy).sqrt();
            matrix[i][j] = d;
            matrix[j][i] = d;
        }
    }
    matrix
}

/// One invariant violation found by [`validate_instance`]. Violations are
/// data, not errors: an empty list means the instance is well formed.
#[derive(Debug, Clone, PartialEq)]
pub struct Violation {
    pub field: String,
    pub index: String,
    pub condition: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}[{}]: {}", self.field, self.index, self.condition)
    }
}

fn violation(field: &str, index: String, condition: &str) -> Violation {
    Violation {
        field: field.to_string(),
        index,
        condition: condition.to_string(),
    }
}

/// Checks every type invariant of the instance and returns the violations
/// found. Also emits a "fleet capacity infeasible" warning when some period's
/// total weighted demand exceeds the whole fleet.
pub fn validate_instance(instance: &Instance) -> Vec<Violation> {
    let mut out = Vec::new();
    let n_i = instance.n_customers();
    let n_p = instance.n_products();
    let n_t = instance.n_periods;

    for (k, p) in instance.products.iter().enumerate() {
        if p.weight.is_nan() || p.weight <= 0.0 {
            out.push(violation("products.weight", format!("{}", k + 1), "weight must be > 0"));
        }
    }
    for (k, v) in instance.vehicles.iter().enumerate() {
        if v.capacity.is_nan() || v.capacity <= 0.0 {
            out.push(violation("vehicles.capacity", format!("{}", k + 1), "capacity must be > 0"));
        }
        if v.fixed_cost.len() != n_t {
            out.push(violation("vehicles.fixed_cost", format!("{}", k + 1), "one fixed cost per period required"));
        }
        if v.fixed_cost.iter().any(|&f| f < 0.0) {
            out.push(violation("vehicles.fixed_cost", format!("{}", k + 1), "fixed costs must be >= 0"));
        }
    }
    for (k, c) in instance.customers.iter().enumerate() {
        if c.storage_capacity < 0.0 {
            out.push(violation("customers.storage", format!("{}", k + 1), "storage capacity must be >= 0"));
        }
        if c.holding_cost.len() != n_p {
            out.push(violation("customers.holding", format!("{}", k + 1), "one holding cost per product required"));
        }
        if c.holding_cost.iter().any(|&h| h < 0.0) {
            out.push(violation("customers.holding", format!("{}", k + 1), "holding costs must be >= 0"));
        }
        let g = instance.grid_size;
        if !(0.0..=g).contains(&c.x) || !(0.0..=g).contains(&c.y) {
            out.push(violation("customers.location", format!("{}", k + 1), "location outside grid bounds"));
        }
    }
    if instance.demand.n_products() != n_p || instance.demand.n_customers() != n_i || instance.demand.n_periods() != n_t {
        out.push(violation("demand", "shape".into(), "dimensions must match |P|x|I|x|T|"));
    } else {
        for p in 0..n_p {
            for i in 0..n_i {
                for t in 0..n_t {
                    if instance.demand.get(p, i, t) < 0.0 {
                        out.push(violation("demand", format!("p{} i{} t{}", p + 1, i + 1, t + 1), "negative demand"));
                    }
                }
            }
        }
    }

    let n_nodes = n_i + 1;
    if instance.travel_cost.len() != n_nodes || instance.travel_cost.iter().any(|row| row.len() != n_nodes) {
        out.push(violation("travel_cost", "shape".into(), "matrix must be (|I|+1)x(|I|+1)"));
        return out;
    }
    for i in 0..n_nodes {
        if instance.travel_cost[i][i] != 0.0 {
            out.push(violation("travel_cost", format!("{i},{i}"), "diagonal must be zero"));
        }
        for j in (i + 1)..n_nodes {
            if instance.travel_cost[i][j] < 0.0 {
                out.push(violation("travel_cost", format!("{i},{j}"), "costs must be >= 0"));
            }
            if instance.travel_cost[i][j] != instance.travel_cost[j][i] {
                out.push(violation("travel_cost", format!("{i},{j}"), "asymmetric cost"));
            }
        }
    }
    // Triangle inequality (holds automatically for Euclidean construction).
    let c = &instance.travel_cost;
    'tri: for i in 0..n_nodes {
        for j in 0..n_nodes {
            for k in 0..n_nodes {
                if c[i][j] > c[i][k] + c[k][j] + 1e-9 {
                    out.push(violation("travel_cost", format!("{i},{j},{k}"), "triangle inequality violated"));
                    break 'tri;
                }
            }
        }
    }

    if instance.demand.n_customers() == n_i && instance.demand.n_products() == n_p {
        let fleet = instance.fleet_capacity();
        for t in 0..n_t {
            let mut load = 0.0;
            for p in 0..n_p {
                let w = instance.products.get(p).map_or(1.0, |s| s.weight);
                for i in 0..n_i {
                    load += w * instance.demand.get(p, i, t);
                }
            }
            if load > fleet + 1e-9 {
                out.push(violation("fleet", format!("t{}", t + 1), "fleet capacity infeasible: period weighted demand exceeds total fleet capacity"));
            }
        }
    }
    out
}

/// Errors from reading or writing instance files.
#[derive(Debug)]
pub enum ParseError {
    Io(io::Error),
    Syntax { line: usize, message: String },
    MissingSection(&'static str),
    UnknownSection { line: usize, name: String },
    Validation(Vec<Violation>),
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParseError::Io(e) => write!(f, "io error: {e}"),
            ParseError::Syntax { line, message } => write!(f, "line {line}: {message}"),
            ParseError::MissingSection(name) => write!(f, "missing section: {name}"),
            ParseError::UnknownSection { line, name } => write!(f, "line {line}: unknown section {name}"),
            ParseError::Validation(violations) => {
                write!(f, "invalid instance:")?;
                for v in violations {
                    write!(f, " {v};")?;
                }
                Ok(())
            }
        }
    }
}

impl std::error::Error for ParseError {}

impl From<io::Error> for ParseError {
    fn from(e: io::Error) -> Self {
        ParseError::Io(e)
    }
}

/// Serializes an instance to the plain-text format (see `write_instance_string`).
pub fn write_instance(instance: &Instance, path: &Path) -> Result<(), ParseError> {
    fs::write(path, write_instance_string(instance))?;
    Ok(())
}

/// Instance file layout: a key-value header followed by the four sections.
///
/// ```text
/// customers N / periods T / vehicles V / products P / grid G / seed S / supplier X Y
/// PRODUCTS:  id weight
/// VEHICLES:  id capacity f_1 .. f_T
/// CUSTOMERS: id x y storage h_1 .. h_P
/// DEMAND:    customer period d_1 .. d_P
/// ```
pub fn write_instance_string(instance: &Instance) -> String {
    let mut s = String::new();
    s.push_str(&format!("customers {}\n", instance.n_customers()));
    s.push_str(&format!("periods {}\n", instance.n_periods));
    s.push_str(&format!("vehicles {}\n", instance.n_vehicles()));
    s.push_str(&format!("products {}\n", instance.n_products()));
    s.push_str(&format!("grid {}\n", instance.grid_size));
    s.push_str(&format!("seed {}\n", instance.seed));
    s.push_str(&format!("supplier {} {}\n", instance.supplier.0, instance.supplier.1));
    s.push_str("\nPRODUCTS\n");
    for p in &instance.products {
        s.push_str(&format!("{} {}\n", p.id, p.weight));
    }
    s.push_str("\nVEHICLES\n");
    for v in &instance.vehicles {
        s.push_str(&format!("{} {}", v.id, v.capacity));
        for f in &v.fixed_cost {
            s.push_str(&format!(" {f}"));
        }
        s.push('\n');
    }
    s.push_str("\nCUSTOMERS\n");
    for c in &instance.customers {
        s.push_str(&format!("{} {} {} {}", c.id, c.x, c.y, c.storage_capacity));
        for h in &c.holding_cost {
            s.push_str(&format!(" {h}"));
        }
        s.push('\n');
    }
    s.push_str("\nDEMAND\n");
    for i in 0..instance.n_customers() {
        for t in 0..instance.n_periods {
            s.push_str(&format!("{} {}", i + 1, t + 1));
            for p in 0..instance.n_products() {
                s.push_str(&format!(" {}", instance.demand.get(p, i, t)));
            }
            s.push('\n');
        }
    }
    s
}

/// Reads and validates an instance file.
pub fn read_instance(path: &Path) -> Result<Instance, ParseError> {
    let text = fs::read_to_string(path)?;
    parse_instance(&text)
}

struct HeaderFields {
    customers: Option<usize>,
    periods: Option<usize>,
    vehicles: Option<usize>,
    products: Option<usize>,
    grid: Option<f64>,
    seed: Option<u64>,
    supplier: Option<(f64, f64)>,
}

fn parse_num<T: std::str::FromStr>(tok: &str, line: usize, what: &str) -> Result<T, ParseError> {
    tok.parse().map_err(|_| ParseError::Syntax {
        line,
        message: format!("cannot parse {what} from '{tok}'"),
    })
}

/// Parses the plain-text instance format. Unknown sections are rejected and
/// the parsed instance is validated before being returned.
pub fn parse_instance(text: &str) -> Result<Instance, ParseError> {
    const SECTIONS: [&str; 4] = ["PRODUCTS", "VEHICLES", "CUSTOMERS", "DEMAND"];
    let mut header = HeaderFields {
        customers: None,
        periods: None,
        vehicles: None,
        products: None,
        grid: None,
        seed: None,
        supplier: None,
    };
    let mut products: Vec<ProductSpec> = Vec::new();
    let mut vehicles: Vec<VehicleSpec> = Vec::new();
    let mut customers: Vec<CustomerSpec> = Vec::new();
    let mut demand_rows: Vec<(usize, usize, Vec<f64>)> = Vec::new();
    let mut seen: Vec<&str> = Vec::new();
    let mut section: Option<&str> = None;

    for (lineno, raw) in text.lines().enumerate() {
        let lineno = lineno + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if line.chars().all(|ch| ch.is_ascii_uppercase()) {
            let name = SECTIONS
                .iter()
                .find(|&&s| s == line)
                .copied()
                .ok_or(ParseError::UnknownSection {
                    line: lineno,
                    name: line.to_string(),
                })?;
            seen.push(name);
            section = Some(name);
            continue;
        }
        let toks: Vec<&str> = line.split_whitespace().collect();
        match section {
            None => {
                let key = toks[0];
                match key {
                    "customers" => header.customers = Some(parse_num(toks.get(1).unwrap_or(&""), lineno, "customers")?),
                    "periods" => header.periods = Some(parse_num(toks.get(1).unwrap_or(&""), lineno, "periods")?),
                    "vehicles" => header.vehicles = Some(parse_num(toks.get(1).unwrap_or(&""), lineno, "vehicles")?),
                    "products" => header.products = Some(parse_num(toks.get(1).unwrap_or(&""), lineno, "products")?),
                    "grid" => header.grid = Some(parse_num(toks.get(1).unwrap_or(&""), lineno, "grid")?),
                    "seed" => header.seed = Some(parse_num(toks.get(1).unwrap_or(&""), lineno, "seed")?),
                    "supplier" => {
                        if toks.len() != 3 {
                            return Err(ParseError::Syntax {
                                line: lineno,
                                message: "supplier needs two coordinates".into(),
                            });
                        }
                        header.supplier = Some((
                            parse_num(toks[1], lineno, "supplier x")?,
                            parse_num(toks[2], lineno, "supplier y")?,
                        ));
                    }
                    other => {
                        return Err(ParseError::Syntax {
                            line: lineno,
                            message: format!("unknown header key '{other}'"),
                        })
                    }
                }
            }
            Some("PRODUCTS") => {
                if toks.len() != 2 {
                    return Err(ParseError::Syntax {
                        line: lineno,
                        message: "product row needs: id weight".into(),
                    });
                }
                products.push(ProductSpec {
                    id: parse_num(toks[0], lineno, "product id")?,
                    weight: parse_num(toks[1], lineno, "product weight")?,
                });
            }
            Some("VEHICLES") => {
                let n_t = header.periods.ok_or(ParseError::Syntax {
                    line: lineno,
                    message: "'periods' header must precede VEHICLES".into(),
                })?;
                if toks.len() != 2 + n_t {
                    return Err(ParseError::Syntax {
                        line: lineno,
                        message: format!("vehicle row needs: id capacity f_1..f_{n_t}"),
                    });
                }
                let mut fixed = Vec::with_capacity(n_t);
                for tok in &toks[2..] {
                    fixed.push(parse_num(tok, lineno, "vehicle fixed cost")?);
                }
                vehicles.push(VehicleSpec {
                    id: parse_num(toks[0], lineno, "vehicle id")?,
                    capacity: parse_num(toks[1], lineno, "vehicle capacity")?,
                    fixed_cost: fixed,
                });
            }
            Some("CUSTOMERS") => {
                let n_p = header.products.ok_or(ParseError::Syntax {
                    line: lineno,
                    message: "'products' header must precede CUSTOMERS".into(),
                })?;
                if toks.len() != 4 + n_p {
                    return Err(ParseError::Syntax {
                        line: lineno,
                        message: format!("customer row needs: id x y storage h_1..h_{n_p}"),
                    });
                }
                let mut holding = Vec::with_capacity(n_p);
                for tok in &toks[4..] {
                    holding.push(parse_num(tok, lineno, "holding cost")?);
                }
                customers.push(CustomerSpec {
                    id: parse_num(toks[0], lineno, "customer id")?,
                    x: parse_num(toks[1], lineno, "customer x")?,
                    y: parse_num(toks[2], lineno, "customer y")?,
                    storage_capacity: parse_num(toks[3], lineno, "storage capacity")?,
                    holding_cost: holding,
                });
            }
            Some("DEMAND") => {
                let n_p = header.products.unwrap_or(0);
                if toks.len() != 2 + n_p {
                    return Err(ParseError::Syntax {
                        line: lineno,
                        message: format!("demand row needs: customer period d_1..d_{n_p}"),
                    });
                }
                let customer: usize = parse_num(toks[0], lineno, "demand customer")?;
                let period: usize = parse_num(toks[1], lineno, "demand period")?;
                let mut values = Vec::with_capacity(n_p);
                for tok in &toks[2..] {
                    values.push(parse_num(tok, lineno, "demand value")?);
                }
                demand_rows.push((customer, period, values));
            }
            Some(_) => unreachable!(),
        }
    }

    for name in SECTIONS {
        if !seen.contains(&name) {
            return Err(ParseError::MissingSection(match name {
                "PRODUCTS" => "products",
                "VEHICLES" => "vehicles",
                "CUSTOMERS" => "customers",
                _ => "demand",
            }));
        }
    }
    let n_i = header.customers.ok_or(ParseError::Syntax { line: 0, message: "missing 'customers' header".into() })?;
    let n_t = header.periods.ok_or(ParseError::Syntax { line: 0, message: "missing 'periods' header".into() })?;
    let n_v = header.vehicles.ok_or(ParseError::Syntax { line: 0, message: "missing 'vehicles' header".into() })?;
    let n_p = header.products.ok_or(ParseError::Syntax { line: 0, message: "missing 'products' header".into() })?;
    let supplier = header.supplier.ok_or(ParseError::Syntax { line: 0, message: "missing 'supplier' header".into() })?;

    if products.len() != n_p {
        return Err(ParseError::Syntax { line: 0, message: format!("expected {n_p} product rows, found {}", products.len()) });
    }
    if vehicles.len() != n_v {
        return Err(ParseError::Syntax { line: 0, message: format!("expected {n_v} vehicle rows, found {}", vehicles.len()) });
    }
    if customers.len() != n_i {
        return Err(ParseError::Syntax { line: 0, message: format!("expected {n_i} customer rows, found {}", customers.len()) });
    }
    let mut demand = Tensor3::zeros(n_p, n_i, n_t);
    let mut filled = vec![false; n_i * n_t];
    for (customer, period, values) in demand_rows {
        if customer == 0 || customer > n_i || period == 0 || period > n_t {
            return Err(ParseError::Syntax {
                line: 0,
                message: format!("demand row references customer {customer}, period {period} out of range"),
            });
        }
        filled[(customer - 1) * n_t + (period - 1)] = true;
        for (p, &v) in values.iter().enumerate() {
            demand.set(p, customer - 1, period - 1, v);
        }
    }
    if let Some(k) = filled.iter().position(|&f| !f) {
        return Err(ParseError::Syntax {
            line: 0,
            message: format!("missing demand row for customer {}, period {}", k / n_t + 1, k % n_t + 1),
        });
    }

    let instance = Instance::new(
        customers,
        vehicles,
        products,
        n_t,
        supplier,
        header.grid.unwrap_or(20.0),
        header.seed.unwrap_or(0),
        demand,
    );
    let violations = validate_instance(&instance);
    if !violations.is_empty() {
        return Err(ParseError::Validation(violations));
    }
    Ok(instance)
}
