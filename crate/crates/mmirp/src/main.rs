//! Command-line front end: instance generation, solving, baselines, the
//! exact oracle, LP export, benchmark suites, and paired t-tests.

use mmirp::bench::{self, SuiteConfig};
use mmirp::exact;
use mmirp::ga::{evolve, GaConfig};
use mmirp::instance::{generate_instance, read_instance, write_instance, GenConfig, Instance};
use std::env;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

const USAGE: &str = "\
mmirp — multi-product multi-period inventory routing toolkit

USAGE:
  mmirp gen --customers N --periods N --vehicles N --products N --seed N --out FILE
            [--grid G] [--demand-range LO:HI] [--holding-range LO:HI] [--fixed-range LO:HI]
  mmirp solve INSTANCE [--seed N] [--psize N] [--cr F] [--mr F] [--kmax N] [--max-gens N] [--out PREFIX]
  mmirp baseline INSTANCE
  mmirp oracle INSTANCE
  mmirp export-lp INSTANCE --out FILE [--flow-subtours]
  mmirp bench [--customers LIST] [--periods LIST] [--vehicles LIST] [--products LIST]
              [--seeds LIST] [--repeats N] [--bounds FILE] [--out FILE]
              [--seed N] [--psize N] [--cr F] [--mr F] [--kmax N] [--max-gens N]
  mmirp ttest FILE COL_A COL_B

`solve` prints the cost breakdown and writes PREFIX.solution.txt and
PREFIX.genlog.tsv (PREFIX defaults to the instance path without extension).
`bench` runs the configured grid (default: the full 96-instance benchmark)
and writes a CSV report; LISTs are comma separated, e.g. --customers 5,10.
`ttest` runs a paired t-test on two numeric CSV columns.";

struct Args {
    positional: Vec<String>,
    flags: Vec<(String, Option<String>)>,
}

impl Args {
    fn parse(argv: &[String]) -> Args {
        let mut positional = Vec::new();
        let mut flags = Vec::new();
        let mut it = argv.iter().peekable();
        while let Some(arg) = it.next() {
            if let Some(name) = arg.strip_prefix("--") {
                let value = match it.peek() {
                    Some(next) if !next.starts_with("--") => Some(it.next().unwrap().clone()),
                    _ => None,
                };
                flags.push((name.to_string(), value));
            } else {
                positional.push(arg.clone());
            }
        }
        Args { positional, flags }
    }

    fn flag(&self, name: &str) -> Option<&str> {
        self.flags
            .iter()
            .find(|(n, _)| n == name)
            .and_then(|(_, v)| v.as_deref())
    }

    fn has(&self, name: &str) -> bool {
        self.flags.iter().any(|(n, _)| n == name)
    }

    fn parsed<T: std::str::FromStr>(&self, name: &str) -> Result<Option<T>, String> {
        match self.flag(name) {
            None => Ok(None),
            Some(raw) => raw
                .parse()
                .map(Some)
                .map_err(|_| format!("cannot parse --{name} value '{raw}'")),
        }
    }

    fn required<T: std::str::FromStr>(&self, name: &str) -> Result<T, String> {
        self.parsed(name)?.ok_or_else(|| format!("missing required flag --{name}"))
    }

    fn list(&self, name: &str) -> Result<Option<Vec<usize>>, String> {
        match self.flag(name) {
            None => Ok(None),
            Some(raw) => raw
                .split(',')
                .map(|tok| tok.trim().parse().map_err(|_| format!("cannot parse --{name} value '{raw}'")))
                .collect::<Result<Vec<usize>, String>>()
                .map(Some),
        }
    }

    fn range(&self, name: &str) -> Result<Option<(f64, f64)>, String> {
        match self.flag(name) {
            None => Ok(None),
            Some(raw) => {
                let parts: Vec<&str> = raw.split(':').collect();
                if parts.len() != 2 {
                    return Err(format!("--{name} expects LO:HI, got '{raw}'"));
                }
                let lo = parts[0].parse().map_err(|_| format!("cannot parse --{name} value '{raw}'"))?;
                let hi = parts[1].parse().map_err(|_| format!("cannot parse --{name} value '{raw}'"))?;
                Ok(Some((lo, hi)))
            }
        }
    }
}

fn ga_config_from(args: &Args) -> Result<GaConfig, String> {
    let mut cfg = GaConfig::default();
    if let Some(v) = args.parsed("seed")? {
        cfg.seed = v;
    }
    if let Some(v) = args.parsed("psize")? {
        cfg.psize = v;
    }
    if let Some(v) = args.parsed("cr")? {
        cfg.cr0 = v;
    }
    if let Some(v) = args.parsed("mr")? {
        cfg.mr0 = v;
    }
    if let Some(v) = args.parsed("kmax")? {
        cfg.k_max = v;
    }
    if let Some(v) = args.parsed("max-gens")? {
        cfg.max_generations = v;
    }
    Ok(cfg)
}

fn load_instance(args: &Args) -> Result<(Instance, PathBuf), String> {
    let path = args
        .positional
        .first()
        .ok_or_else(|| "missing INSTANCE argument".to_string())?;
    let path = PathBuf::from(path);
    let instance = read_instance(&path).map_err(|e| format!("{}: {e}", path.display()))?;
    Ok((instance, path))
}

fn cmd_gen(args: &Args) -> Result<(), String> {
    let mut cfg = GenConfig::new(
        args.required("customers")?,
        args.required("periods")?,
        args.required("vehicles")?,
        args.required("products")?,
        args.required("seed")?,
    );
    if let Some(g) = args.parsed("grid")? {
        cfg.grid_size = g;
    }
    if let Some(r) = args.range("demand-range")? {
        cfg.demand_range = r;
    }
    if let Some(r) = args.range("holding-range")? {
        cfg.holding_cost_range = r;
    }
    if let Some(r) = args.range("fixed-range")? {
        cfg.fixed_cost_range = r;
    }
    let out: String = args.required("out")?;
    let instance = generate_instance(&cfg).map_err(|e| e.to_string())?;
    write_instance(&instance, Path::new(&out)).map_err(|e| e.to_string())?;
    println!(
        "wrote {} ({} customers, {} periods, {} vehicles, {} products, seed {})",
        out,
        instance.n_customers(),
        instance.n_periods,
        instance.n_vehicles(),
        instance.n_products(),
        instance.seed
    );
    Ok(())
}

fn cmd_solve(args: &Args) -> Result<(), String> {
    let (instance, path) = load_instance(args)?;
    let cfg = ga_config_from(args)?;
    let run = evolve(&instance, &cfg).map_err(|e| e.to_string())?;

    let prefix = match args.flag("out") {
        Some(p) => PathBuf::from(p),
        None => path.with_extension(""),
    };
    let solution_path = prefix.with_extension("solution.txt");
    let log_path = prefix.with_extension("genlog.tsv");
    fs::write(&solution_path, run.best.to_text()).map_err(|e| e.to_string())?;
    fs::write(&log_path, run.log_text()).map_err(|e| e.to_string())?;

    println!("{}", run.best.cost);
    println!("generations {}", run.log.len());
    println!("solution {}", solution_path.display());
    println!("genlog {}", log_path.display());
    Ok(())
}

fn cmd_baseline(args: &Args) -> Result<(), String> {
    let (instance, _) = load_instance(args)?;
    let sol = exact::baseline_direct(&instance).map_err(|e| e.to_string())?;
    println!("{}", sol.cost);
    Ok(())
}

fn cmd_oracle(args: &Args) -> Result<(), String> {
    let (instance, _) = load_instance(args)?;
    let sol = exact::oracle_enumerate(&instance).map_err(|e| e.to_string())?;
    println!("{}", sol.cost);
    print!("{}", sol.schedule.to_text());
    Ok(())
}

fn cmd_export_lp(args: &Args) -> Result<(), String> {
    let (instance, _) = load_instance(args)?;
    let out: String = args.required("out")?;
    let model = exact::export_lp(&instance, Path::new(&out), args.has("flow-subtours")).map_err(|e| e.to_string())?;
    println!(
        "wrote {} ({} variables, {} constraints)",
        out,
        model.n_variables(),
        model.constraints.len()
    );
    Ok(())
}

fn cmd_bench(args: &Args) -> Result<(), String> {
    let mut suite = SuiteConfig::default();
    if let Some(v) = args.list("customers")? {
        suite.customers = v;
    }
    if let Some(v) = args.list("periods")? {
        suite.periods = v;
    }
    if let Some(v) = args.list("vehicles")? {
        suite.vehicles = v;
    }
    if let Some(v) = args.list("products")? {
        suite.products = v;
    }
    if let Some(v) = args.list("seeds")? {
        suite.seeds = v.into_iter().map(|s| s as u64).collect();
    }
    if let Some(v) = args.parsed("repeats")? {
        suite.repeats = v;
    }
    let ga = ga_config_from(args)?;
    let bounds = match args.flag("bounds") {
        Some(p) => {
            let text = fs::read_to_string(p).map_err(|e| format!("{p}: {e}"))?;
            Some(bench::parse_bounds_csv(&text).map_err(|e| e.to_string())?)
        }
        None => None,
    };
    let records = bench::run_benchmark(&suite, &ga, bounds.as_ref()).map_err(|e| e.to_string())?;
    let csv = bench::render_csv(&records);
    match args.flag("out") {
        Some(p) => {
            fs::write(p, &csv).map_err(|e| format!("{p}: {e}"))?;
            println!("wrote {p} ({} rows)", records.len());
        }
        None => print!("{csv}"),
    }
    Ok(())
}

fn cmd_ttest(args: &Args) -> Result<(), String> {
    if args.positional.len() != 3 {
        return Err("ttest needs: FILE COL_A COL_B".to_string());
    }
    let text = fs::read_to_string(&args.positional[0]).map_err(|e| format!("{}: {e}", args.positional[0]))?;
    let (a, b) = bench::read_csv_columns(&text, &args.positional[1], &args.positional[2]).map_err(|e| e.to_string())?;
    let result = bench::paired_t_test(&a, &b).map_err(|e| e.to_string())?;
    println!("{result}");
    Ok(())
}

fn main() -> ExitCode {
    let argv: Vec<String> = env::args().skip(1).collect();
    let Some(command) = argv.first().map(String::as_str) else {
        eprintln!("{USAGE}");
        return ExitCode::FAILURE;
    };
    let args = Args::parse(&argv[1..]);
    let result = match command {
        "gen" => cmd_gen(&args),
        "solve" => cmd_solve(&args),
        "baseline" => cmd_baseline(&args),
        "oracle" => cmd_oracle(&args),
        "export-lp" => cmd_export_lp(&args),
        "bench" => cmd_bench(&args),
        "ttest" => cmd_ttest(&args),
        "help" | "--help" | "-h" => {
            println!("{USAGE}");
            Ok(())
        }
        other => Err(format!("unknown command '{other}'\n\n{USAGE}")),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
