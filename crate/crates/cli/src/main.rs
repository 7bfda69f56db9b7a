use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand};
use gencluster::catalog::{catalog, lookup, CatalogEntry};
use gencluster::dilog::{rogers_dilog_higher, rogers_dilog_higher_euler, rogers_dilog_infinity, PolyP};
use gencluster::exchange::seeds_along;
use gencluster::fpoly::FPattern;
use gencluster::identities::{PeriodicityInstance, VerificationReport};
use gencluster::io::{parse_seed_file, SeedFile};
use gencluster::search::{find_period, SearchOptions};
use gencluster::suite::{verify_all, verify_all_random, VerifyOptions};
use gencluster::tropical::CPattern;
use gencluster::{DegreeTable, Error, ExchangeData, MutationSequence, Permutation, Seed};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "gencluster", version, about = "Generalized cluster mutations and higher-degree dilogarithm identities")]
struct Cli {
    /// Tolerance of identity checks.
    #[arg(long, global = true, default_value_t = 1e-8)]
    tol: f64,
    /// Absolute tolerance of every quadrature.
    #[arg(long, global = true, default_value_t = 1e-11)]
    quad_tol: f64,
    /// Initial seed (JSON); for groupoid checks it may carry q and a.
    #[arg(long, global = true)]
    seed_file: Option<PathBuf>,
    /// Write the result as JSON to this file.
    #[arg(long, global = true)]
    json_out: Option<PathBuf>,
    /// Re-verify every catalog entry before running.
    #[arg(long, global = true)]
    strict: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Apply a mutation sequence with tropical signs.
    Mutate {
        #[arg(long)]
        catalog: Option<String>,
        /// Directions, 1-based and comma separated.
        #[arg(long, value_delimiter = ',')]
        seq: Vec<usize>,
        /// Print every intermediate seed with its B- and C-matrix.
        #[arg(long)]
        trace: bool,
    },
    /// F-polynomials along a mutation sequence.
    Fpoly {
        #[arg(long)]
        catalog: Option<String>,
        #[arg(long, value_delimiter = ',')]
        seq: Vec<usize>,
        /// Print the F-polynomials at every vertex, not just the last.
        #[arg(long)]
        all: bool,
    },
    /// Higher-degree Rogers dilogarithm of P = p_0 + p_1 x + ... + p_d x^d.
    Dilog {
        /// Coefficients p_0, ..., p_d (p_0 = p_d = 1).
        #[arg(long, value_delimiter = ',', required = true, allow_negative_numbers = true)]
        poly: Vec<f64>,
        #[arg(long, allow_negative_numbers = true, required_unless_present = "infinity")]
        x: Option<f64>,
        /// Evaluate at infinity.
        #[arg(long, conflicts_with = "x")]
        infinity: bool,
        /// Use the Euler form instead of the direct integral.
        #[arg(long)]
        euler: bool,
    },
    /// Search for periodicities among words without immediate repetitions.
    FindPeriod {
        #[arg(long)]
        catalog: Option<String>,
        #[arg(long, default_value_t = 12)]
        max_len: usize,
        #[arg(long, default_value_t = 1_000_000)]
        budget: usize,
    },
    /// Run identity checks on a periodicity.
    Verify {
        /// Catalog entry; without it and without --seed-file every entry is checked.
        #[arg(long)]
        catalog: Option<String>,
        /// Run the full suite.
        #[arg(long)]
        all: bool,
        /// Run only checks whose name starts with this (repeatable).
        #[arg(long = "check")]
        checks: Vec<String>,
        /// Periodicity for --seed-file, 1-based directions.
        #[arg(long, value_delimiter = ',')]
        seq: Vec<usize>,
        /// Its permutation σ as 1-based images; identity by default.
        #[arg(long, value_delimiter = ',')]
        sigma: Vec<usize>,
        /// Extra random initial seeds.
        #[arg(long, default_value_t = 0)]
        draws: usize,
        #[arg(long, default_value_t = 2024)]
        rng_seed: u64,
    },
    /// List or emit catalog entries.
    Catalog {
        #[command(subcommand)]
        action: CatalogAction,
    },
}

#[derive(Subcommand)]
enum CatalogAction {
    List,
    /// Print an entry with a default initial seed as JSON.
    Emit {
        name: String,
        /// Print only the seed, in --seed-file format.
        #[arg(long)]
        seed_only: bool,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn entry(name: &str) -> Result<CatalogEntry> {
    lookup(name).ok_or_else(|| anyhow!("no catalog entry named {name:?} (see `gencluster catalog list`)"))
}

/// `y_i = i + 2`, `z_{i,s} = 1`.
fn default_seed(ex: &ExchangeData) -> Result<Seed> {
    let y = (0..ex.rank()).map(|i| i as f64 + 2.0).collect();
    Ok(Seed::new(ex.clone(), y, DegreeTable::from_fn(ex.d(), |_, _| 1.0))?)
}

fn read_seed_file(path: &Path) -> Result<SeedFile> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    parse_seed_file(&text).with_context(|| format!("parsing {}", path.display()))
}

fn zero_based(seq: &[usize], n: usize) -> Result<Vec<usize>> {
    seq.iter()
        .map(|&k| match k {
            0 => bail!("direction 0 is out of range for rank {n}; directions are 1-based"),
            k if k > n => Err(Error::DirectionOutOfRange { k: k - 1, n }.into()),
            k => Ok(k - 1),
        })
        .collect()
}

/// Start seed and directions from --catalog, --seed-file and --seq.
fn source(cli: &Cli, catalog: Option<&str>, seq: &[usize]) -> Result<(Seed, Vec<usize>)> {
    let file_seed = cli.seed_file.as_deref().map(read_seed_file).transpose()?.map(|f| f.to_seed()).transpose()?;
    match catalog {
        Some(name) => {
            let e = entry(name)?;
            let start = match file_seed {
                Some(s) if s.exchange() != &e.exchange => bail!("seed file does not carry the exchange data of {}", e.name),
                Some(s) => s,
                None => default_seed(&e.exchange)?,
            };
            let dirs = if seq.is_empty() { e.sequence.directions().to_vec() } else { zero_based(seq, start.rank())? };
            Ok((start, dirs))
        }
        None => {
            let start = file_seed.ok_or_else(|| anyhow!("give --catalog NAME or --seed-file PATH"))?;
            let dirs = zero_based(seq, start.rank())?;
            Ok((start, dirs))
        }
    }
}

fn seed_json(s: &Seed) -> Value {
    serde_json::to_value(SeedFile::from_seed(s)).expect("seed serializes")
}

fn one_based(v: &[usize]) -> Vec<usize> {
    v.iter().map(|k| k + 1).collect()
}

fn fmt_vec(v: &[f64]) -> String {
    let parts: Vec<String> = v.iter().map(|x| format!("{x:.12}")).collect();
    format!("[{}]", parts.join(", "))
}

fn write_json(cli: &Cli, value: &Value) -> Result<()> {
    if let Some(path) = &cli.json_out {
        let text = serde_json::to_string_pretty(value)?;
        fs::write(path, text + "\n").with_context(|| format!("writing {}", path.display()))?;
    }
    Ok(())
}

fn strict_self_test() -> Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    for e in catalog() {
        if !e.admit(3, 1e-9, &mut rng)? {
            bail!("catalog entry {} failed its self-test", e.name);
        }
    }
    Ok(())
}

fn run(cli: &Cli) -> Result<bool> {
    if cli.strict {
        strict_self_test()?;
    }
    match &cli.command {
        Command::Mutate { catalog, seq, trace } => mutate(cli, catalog.as_deref(), seq, *trace),
        Command::Fpoly { catalog, seq, all } => fpoly(cli, catalog.as_deref(), seq, *all),
        Command::Dilog { poly, x, infinity, euler } => dilog(cli, poly, *x, *infinity, *euler),
        Command::FindPeriod { catalog, max_len, budget } => period(cli, catalog.as_deref(), *max_len, *budget),
        Command::Verify { catalog, all, checks, seq, sigma, draws, rng_seed } => {
            verify(cli, catalog.as_deref(), *all, checks, seq, sigma, *draws, *rng_seed)
        }
        Command::Catalog { action } => catalog_cmd(cli, action),
    }
}

fn mutate(cli: &Cli, catalog: Option<&str>, seq: &[usize], trace: bool) -> Result<bool> {
    let (start, dirs) = source(cli, catalog, seq)?;
    let pattern = CPattern::along(start.exchange(), &dirs)?;
    let seeds = seeds_along(&start, &dirs, pattern.signs())?;
    let mut steps = Vec::new();
    for (t, seed) in seeds.iter().enumerate() {
        let head = if t == 0 {
            "start".to_string()
        } else {
            format!("step {t}: mutate at {} with sign {}", dirs[t - 1] + 1, pattern.signs()[t - 1])
        };
        if trace || t == 0 || t == dirs.len() {
            println!("{head}");
            println!("  B = {}", seed.b());
            println!("  C = {}", pattern.c(t));
            println!("  y = {}", fmt_vec(seed.y()));
            if seed.z().iter().next().is_some() {
                let z: Vec<String> = seed.z().iter().map(|(i, s, v)| format!("z[{},{s}]={v:.12}", i + 1)).collect();
                println!("  {}", z.join(" "));
            }
        }
        steps.push(json!({
            "step": t,
            "direction": if t == 0 { None } else { Some(dirs[t - 1] + 1) },
            "sign": if t == 0 { None } else { Some(pattern.signs()[t - 1].to_string()) },
            "C": pattern.c(t).rows(),
            "seed": seed_json(seed),
        }));
    }
    let signs: Vec<String> = pattern.signs().iter().map(|s| s.to_string()).collect();
    println!("tropical signs: {}", signs.join(" "));
    write_json(cli, &json!({ "directions": one_based(&dirs), "signs": signs, "steps": steps }))?;
    Ok(true)
}

fn fpoly(cli: &Cli, catalog: Option<&str>, seq: &[usize], all: bool) -> Result<bool> {
    let (start, dirs) = source(cli, catalog, seq)?;
    let f = FPattern::along(start.exchange(), &dirs)?;
    let names = f.layout().names();
    let mut out = Vec::new();
    let first = if all { 0 } else { f.vertices() - 1 };
    for t in first..f.vertices() {
        let polys: Vec<String> = f.at(t).iter().map(|p| p.display_with(&names).to_string()).collect();
        for (j, p) in f.at(t).iter().enumerate() {
            if !p.has_nonnegative_coefficients() {
                eprintln!("warning: F{} at vertex {} has a negative coefficient", j + 1, t + 1);
            }
        }
        println!("vertex {}:", t + 1);
        for (j, p) in polys.iter().enumerate() {
            println!("  F{} = {p}", j + 1);
        }
        out.push(json!({ "vertex": t + 1, "F": polys }));
    }
    write_json(cli, &json!({ "directions": one_based(&dirs), "vertices": out }))?;
    Ok(true)
}

fn dilog(cli: &Cli, poly: &[f64], x: Option<f64>, infinity: bool, euler: bool) -> Result<bool> {
    let p = PolyP::new(poly.to_vec())?;
    let cfg = VerifyOptions { quad_tol: cli.quad_tol, ..VerifyOptions::default() }.dilog();
    let value = match (infinity, x) {
        (true, _) => rogers_dilog_infinity(&p, &cfg)?,
        (false, Some(x)) if euler => rogers_dilog_higher_euler(&p, x, &cfg)?,
        (false, Some(x)) => rogers_dilog_higher(&p, x, &cfg)?,
        (false, None) => bail!("give --x or --infinity"),
    };
    println!("{value}");
    let at = if infinity { json!("infinity") } else { json!(x) };
    write_json(cli, &json!({ "poly": poly, "x": at, "value": value }))?;
    Ok(true)
}

fn period(cli: &Cli, catalog: Option<&str>, max_len: usize, budget: usize) -> Result<bool> {
    let ex = match (catalog, &cli.seed_file) {
        (Some(name), _) => entry(name)?.exchange,
        (None, Some(path)) => read_seed_file(path)?.to_seed()?.exchange().clone(),
        (None, None) => bail!("give --catalog NAME or --seed-file PATH"),
    };
    let opts = SearchOptions { budget, tol: cli.tol.max(1e-12), ..SearchOptions::default() };
    let found = find_period(&ex, max_len, &opts)?;
    if found.is_empty() {
        println!("no periodicity of length at most {max_len}");
    }
    for s in &found {
        println!("{s}");
    }
    let list: Vec<Value> = found
        .iter()
        .map(|s| json!({ "directions": one_based(s.directions()), "sigma": one_based(s.sigma().images()) }))
        .collect();
    write_json(cli, &json!({ "max_len": max_len, "found": list }))?;
    Ok(!found.is_empty())
}

fn check_matches(name: &str, checks: &[String]) -> bool {
    checks.is_empty() || checks.iter().any(|c| name.starts_with(c.as_str()))
}

#[allow(clippy::too_many_arguments)]
fn verify(
    cli: &Cli,
    catalog_name: Option<&str>,
    all: bool,
    checks: &[String],
    seq: &[usize],
    sigma: &[usize],
    draws: usize,
    rng_seed: u64,
) -> Result<bool> {
    if !all && checks.is_empty() {
        bail!("give --all or at least one --check NAME");
    }
    let checks = if all { Vec::new() } else { checks.to_vec() };
    let instances: Vec<(String, PeriodicityInstance)> = match (catalog_name, &cli.seed_file) {
        (None, None) => catalog()
            .into_iter()
            .map(|e| Ok((e.name.to_string(), PeriodicityInstance::new(default_seed(&e.exchange)?, e.sequence.clone())?)))
            .collect::<Result<_>>()?,
        (Some(name), _) => {
            let e = entry(name)?;
            let (start, _) = source(cli, Some(name), &[])?;
            vec![(e.name.to_string(), PeriodicityInstance::new(start, e.sequence.clone())?)]
        }
        (None, Some(_)) => {
            let (start, dirs) = source(cli, None, seq)?;
            if dirs.is_empty() {
                bail!("--seed-file needs --seq");
            }
            let n = start.rank();
            let images = if sigma.is_empty() { (0..n).collect() } else { zero_based(sigma, n)? };
            let seq = MutationSequence::new(dirs, Permutation::new(images)?)?;
            vec![("seed-file".to_string(), PeriodicityInstance::new(start, seq)?)]
        }
    };
    let base = VerifyOptions { tol: cli.tol, quad_tol: cli.quad_tol, rng_seed, ..VerifyOptions::default() };
    let mut all_pass = true;
    let mut out = Vec::new();
    for (label, inst) in &instances {
        let mut reports: Vec<VerificationReport> = verify_all(inst, &base)?;
        for i in 0..draws {
            let opts = VerifyOptions { rng_seed: rng_seed.wrapping_add(i as u64 + 1), ..base.clone() };
            reports.extend(verify_all_random(inst, &opts)?);
        }
        reports.retain(|r| check_matches(&r.name, &checks));
        if reports.is_empty() {
            bail!("no check matches {checks:?}");
        }
        for r in &reports {
            let status = if r.pass { "PASS" } else { "FAIL" };
            let note = r.note.as_deref().map(|n| format!(" ({n})")).unwrap_or_default();
            println!("{status} {label} {}: deviation {:.3e}, tolerance {:.0e}{note}", r.name, r.deviation, r.tolerance);
            all_pass &= r.pass;
        }
        out.push(json!({ "instance": label, "reports": reports }));
    }
    write_json(cli, &Value::Array(out))?;
    Ok(all_pass)
}

fn catalog_cmd(cli: &Cli, action: &CatalogAction) -> Result<bool> {
    match action {
        CatalogAction::List => {
            for e in catalog() {
                println!("{:<6} length {:<2} {}  {}", e.name, e.sequence.len(), e.sequence, e.description);
            }
            let list: Vec<Value> = catalog().iter().map(|e| json!({ "name": e.name, "length": e.sequence.len() })).collect();
            write_json(cli, &Value::Array(list))?;
        }
        CatalogAction::Emit { name, seed_only } => {
            let e = entry(name)?;
            let seed = seed_json(&default_seed(&e.exchange)?);
            let value = if *seed_only {
                seed
            } else {
                json!({
                    "name": e.name,
                    "description": e.description,
                    "directions": one_based(e.sequence.directions()),
                    "sigma": one_based(e.sequence.sigma().images()),
                    "seed": seed,
                })
            };
            println!("{}", serde_json::to_string_pretty(&value)?);
            write_json(cli, &value)?;
        }
    }
    Ok(true)
}
