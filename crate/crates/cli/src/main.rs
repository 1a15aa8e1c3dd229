//! Command-line surface for the lattice-count library: compute parity-class polynomials,
//! evaluate counts, run verification suites, query the brute-force cover oracle, and
//! persist polynomials to a JSON cache.  All numbers cross the wire as exact rational
//! strings; exit codes are 0 (success), 1 (verification counterexample), 2 (usage error),
//! and 3 (internal consistency error).

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use lattice_count::cover::{oracle_compare, CoverOracle, DEFAULT_DEGREE_BOUND};
use lattice_count::error::Error;
use lattice_count::identities::{
    check_dilaton, check_string1, check_string2, check_vanishing, euler_characteristic,
    genus0_from_string, product_formula_check,
};
use lattice_count::poly::SquaredPoly;
use lattice_count::quasipoly::PolyStore;
use lattice_count::rational::display;
use lattice_count::report::IdentityReport;
use lattice_count::series::{coefficient_check, inversion_check, FixtureForm, FIXTURE_CASES};
use lattice_count::tau::{tau_bracket, top_degree_independence, Sign, TauIndex};
use lattice_count::{Rational, Result};

#[derive(Parser)]
#[command(name = "latcount", version, about = "Exact lattice-point counts on moduli spaces")]
struct Cli {
    /// JSON polynomial cache to read and update.
    #[arg(long, global = true, value_name = "PATH")]
    cache: Option<PathBuf>,
    /// Worker threads for parallel sweeps (default: all cores).
    #[arg(long, global = true, value_name = "N")]
    jobs: Option<usize>,
    /// Force JSON output.
    #[arg(long, global = true, conflicts_with = "plain")]
    json: bool,
    /// Force plain-text output.
    #[arg(long, global = true)]
    plain: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the parity-class polynomials of one (g, n).
    Poly {
        #[arg(long)]
        g: u32,
        #[arg(long)]
        n: u32,
        /// Restrict to a single even parity class.
        #[arg(long)]
        k: Option<u32>,
    },
    /// Evaluate the count at one tuple of boundary lengths.
    Eval {
        #[arg(long)]
        g: u32,
        /// Comma-separated nonnegative integers.
        #[arg(long, value_delimiter = ',', required = true)]
        b: Vec<u32>,
    },
    /// Run a verification suite over all (g, n) with 2g-2+n up to the bound.
    Verify {
        #[arg(value_enum)]
        suite: Suite,
        #[arg(long, default_value_t = 3)]
        max_complexity: u32,
    },
    /// Count covers by brute-force permutation enumeration, or compare against the recursion.
    Oracle {
        #[command(subcommand)]
        action: Option<OracleAction>,
        /// Ramification profile, comma-separated.
        #[arg(long, value_delimiter = ',')]
        b: Option<Vec<u32>>,
        #[arg(long)]
        genus: Option<u32>,
    },
    /// Orbifold Euler characteristic of the moduli space.
    Euler {
        #[arg(long)]
        g: u32,
        #[arg(long)]
        n: u32,
    },
    /// Tau bracket from polynomial coefficients.
    Tau {
        #[arg(long)]
        g: u32,
        /// Comma-separated descendant exponents.
        #[arg(long, value_delimiter = ',', required = true)]
        m: Vec<u32>,
        /// One + or - per exponent (commas optional), minus signs first.
        #[arg(long)]
        signs: String,
    },
    /// Check a closed-form expansion against the recursion up to a total order.
    Series {
        /// Fixture "g,n": one of 0,3 / 1,1 / 0,4 / 1,2 / 2,1.
        #[arg(long)]
        fixture: String,
        #[arg(long)]
        order: u32,
    },
}

#[derive(Subcommand)]
enum OracleAction {
    /// Compare the oracle with the recursion on every profile up to a total degree.
    Compare {
        #[arg(long, default_value_t = DEFAULT_DEGREE_BOUND)]
        max_total: u32,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Suite {
    String,
    Dilaton,
    Vanishing,
    Product,
    Genus0,
    TauTop,
    Inversion,
    All,
}

/// On-disk polynomial cache: exact rationals only, keys sorted, stable across runs.
#[derive(Serialize, Deserialize)]
struct PolyCacheFile {
    version: String,
    entries: BTreeMap<String, CacheEntry>,
}

#[derive(Serialize, Deserialize)]
struct CacheEntry {
    g: u32,
    n: u32,
    k: u32,
    degree: u32,
    variable_order: String,
    terms: Vec<CacheTerm>,
}

#[derive(Serialize, Deserialize)]
struct CacheTerm {
    exponents: Vec<u32>,
    coefficient: String,
}

/// Usage-level error (exit code 2).
fn usage(msg: impl Into<String>) -> Error {
    Error::Argument(msg.into())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(jobs) = cli.jobs {
        // Ignore failure: the global pool can only be configured once per process.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(jobs).build_global();
    }
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::Argument(_) => ExitCode::from(2),
                Error::Internal(_) => ExitCode::from(3),
            }
        }
    }
}

fn run(cli: &Cli) -> Result<u8> {
    let mode = Mode::select(cli);
    let mut store = PolyStore::new();
    if let Some(path) = &cli.cache {
        load_cache(path, &mut store)?;
    }
    let code = dispatch(cli, mode, &mut store)?;
    if let Some(path) = &cli.cache {
        save_cache(path, &store)?;
    }
    Ok(code)
}

#[derive(Clone, Copy, PartialEq)]
enum Mode {
    Json,
    Plain,
    Default,
}

impl Mode {
    fn select(cli: &Cli) -> Mode {
        if cli.json {
            Mode::Json
        } else if cli.plain {
            Mode::Plain
        } else {
            Mode::Default
        }
    }

    fn json(self, default_json: bool) -> bool {
        match self {
            Mode::Json => true,
            Mode::Plain => false,
            Mode::Default => default_json,
        }
    }
}

fn dispatch(cli: &Cli, mode: Mode, store: &mut PolyStore) -> Result<u8> {
    match &cli.command {
        Command::Poly { g, n, k } => cmd_poly(*g, *n, *k, mode, store),
        Command::Eval { g, b } => cmd_eval(*g, b, mode, store),
        Command::Verify { suite, max_complexity } => {
            cmd_verify(*suite, *max_complexity, mode, store)
        }
        Command::Oracle { action, b, genus } => cmd_oracle(action, b, *genus, mode),
        Command::Euler { g, n } => cmd_euler(*g, *n, mode, store),
        Command::Tau { g, m, signs } => cmd_tau(*g, m, signs, mode, store),
        Command::Series { fixture, order } => cmd_series(fixture, *order, mode),
    }
}

fn cmd_poly(g: u32, n: u32, k: Option<u32>, mode: Mode, store: &mut PolyStore) -> Result<u8> {
    let classes: Vec<u32> = match k {
        Some(k) => vec![k],
        None => (0..=n).step_by(2).collect(),
    };
    let mut entries = BTreeMap::new();
    for &k in &classes {
        let poly = store.class_poly(g, n, k)?;
        entries.insert(cache_key(g, n, k), entry_of(g, n, k, poly));
    }
    if mode.json(true) {
        let doc = PolyCacheFile { version: "1".to_string(), entries };
        println!("{}", serde_json::to_string_pretty(&doc).expect("serializable"));
    } else {
        for (key, entry) in &entries {
            println!("{key}: degree {}", entry.degree);
            for term in &entry.terms {
                println!("  {:?} -> {}", term.exponents, term.coefficient);
            }
        }
    }
    Ok(0)
}

fn cmd_eval(g: u32, b: &[u32], mode: Mode, store: &mut PolyStore) -> Result<u8> {
    let value = store.eval(g, b)?;
    if mode.json(false) {
        println!(
            "{}",
            serde_json::json!({ "g": g, "b": b, "value": display(&value) })
        );
    } else {
        println!("{}", display(&value));
    }
    Ok(0)
}

fn cmd_verify(suite: Suite, max_complexity: u32, mode: Mode, store: &mut PolyStore) -> Result<u8> {
    let pairs = stable_pairs(max_complexity);
    let mut reports: Vec<IdentityReport> = Vec::new();
    let want = |which: Suite| {
        matches!(suite, Suite::All)
            || std::mem::discriminant(&suite) == std::mem::discriminant(&which)
    };
    if want(Suite::String) {
        for &(g, n) in &pairs {
            reports.push(check_string1(g, n, store)?);
            reports.push(check_string2(g, n, store)?);
        }
    }
    if want(Suite::Dilaton) {
        for &(g, n) in &pairs {
            reports.push(check_dilaton(g, n, store)?);
        }
    }
    if want(Suite::Vanishing) {
        for &(g, n) in &pairs {
            reports.push(check_vanishing(g, n, store)?);
        }
    }
    if want(Suite::Product) {
        for n in 4..=7u32 {
            if n as i64 - 2 <= max_complexity as i64 {
                reports.push(product_formula_check(n, 20, store)?);
            }
        }
    }
    if want(Suite::Genus0) {
        for n in 4..=u32::MAX {
            if n as i64 - 2 > max_complexity as i64 {
                break;
            }
            let mut report = IdentityReport::new(
                format!("genus0-reconstruction (n={n})"),
                "string equations against recursion-built polynomials",
            );
            report.samples_checked = 1;
            if let Err(e) = genus0_from_string(n, store) {
                if matches!(e, Error::Argument(_)) {
                    return Err(e);
                }
                report.counterexamples.push(format!("{e}"));
            }
            reports.push(report);
        }
    }
    if want(Suite::TauTop) {
        reports.push(top_degree_independence(max_complexity, store)?);
    }
    if want(Suite::Inversion) {
        for (g, n) in FIXTURE_CASES {
            if 2 * g as i64 - 2 + n as i64 <= max_complexity as i64 {
                let f = FixtureForm::for_case(g, n)?;
                reports.push(inversion_check(&f, 20, 0xa11ce)?);
            }
        }
    }
    let all_ok = reports.iter().all(|r| r.is_success());
    if mode.json(true) {
        println!("{}", serde_json::to_string_pretty(&reports).expect("serializable"));
    } else {
        for r in &reports {
            println!("{}", r.summary());
        }
    }
    Ok(if all_ok { 0 } else { 1 })
}

fn cmd_oracle(
    action: &Option<OracleAction>,
    b: &Option<Vec<u32>>,
    genus: Option<u32>,
    mode: Mode,
) -> Result<u8> {
    match action {
        Some(OracleAction::Compare { max_total }) => {
            let report = oracle_compare(*max_total)?;
            let ok = report.is_success();
            if mode.json(true) {
                println!("{}", serde_json::to_string_pretty(&report).expect("serializable"));
            } else {
                println!("{}", report.summary());
            }
            Ok(if ok { 0 } else { 1 })
        }
        None => {
            let (Some(b), Some(genus)) = (b, genus) else {
                return Err(usage(
                    "oracle needs --b and --genus, or the `compare` subcommand",
                ));
            };
            let mut oracle = CoverOracle::new(DEFAULT_DEGREE_BOUND);
            let value = oracle.count(b, genus)?;
            if mode.json(false) {
                println!(
                    "{}",
                    serde_json::json!({ "b": b, "count": display(&value), "genus": genus })
                );
            } else {
                println!("{}", display(&value));
            }
            Ok(0)
        }
    }
}

fn cmd_euler(g: u32, n: u32, mode: Mode, store: &mut PolyStore) -> Result<u8> {
    let chi = euler_characteristic(g, n, store)?;
    if mode.json(false) {
        println!(
            "{}",
            serde_json::json!({ "chi": display(&chi), "g": g, "n": n })
        );
    } else {
        println!("{}", display(&chi));
    }
    Ok(0)
}

fn cmd_tau(g: u32, m: &[u32], signs: &str, mode: Mode, store: &mut PolyStore) -> Result<u8> {
    let parsed: Vec<Sign> = signs
        .chars()
        .filter(|c| !c.is_whitespace() && *c != ',')
        .map(|c| match c {
            '+' => Ok(Sign::Plus),
            '-' => Ok(Sign::Minus),
            other => Err(usage(format!("unexpected sign character {other:?}"))),
        })
        .collect::<Result<_>>()?;
    let idx = TauIndex::new(g, m.to_vec(), parsed)?;
    let value = tau_bracket(&idx, store)?;
    if mode.json(false) {
        println!(
            "{}",
            serde_json::json!({ "g": g, "m": m, "signs": signs, "value": display(&value) })
        );
    } else {
        println!("{}", display(&value));
    }
    Ok(0)
}

fn cmd_series(fixture: &str, order: u32, mode: Mode) -> Result<u8> {
    let parts: Vec<&str> = fixture.split(',').collect();
    let [g, n] = parts.as_slice() else {
        return Err(usage("fixture must be \"g,n\""));
    };
    let g: u32 = g.trim().parse().map_err(|_| usage("fixture genus must be an integer"))?;
    let n: u32 = n.trim().parse().map_err(|_| usage("fixture n must be an integer"))?;
    let f = FixtureForm::for_case(g, n)?;
    let report = coefficient_check(&f, order)?;
    let ok = report.is_success();
    if mode.json(true) {
        println!("{}", serde_json::to_string_pretty(&report).expect("serializable"));
    } else {
        println!("{}", report.summary());
    }
    Ok(if ok { 0 } else { 1 })
}

/// Stable `(g, n)` with `2g - 2 + n` at most the bound, genus-major order.
fn stable_pairs(max_complexity: u32) -> Vec<(u32, u32)> {
    let cap = max_complexity as i64;
    let mut out = Vec::new();
    for g in 0..=((cap + 2) / 2) as u32 {
        for n in 1..=(cap + 2 - 2 * g as i64).max(0) as u32 {
            if 2 * g as i64 - 2 + n as i64 > 0 {
                out.push((g, n));
            }
        }
    }
    out
}

fn cache_key(g: u32, n: u32, k: u32) -> String {
    format!("{g},{n},{k}")
}

fn entry_of(g: u32, n: u32, k: u32, poly: &SquaredPoly) -> CacheEntry {
    CacheEntry {
        g,
        n,
        k,
        degree: poly.total_degree(),
        variable_order: "odd-first".to_string(),
        terms: poly
            .terms()
            .map(|(exps, c)| CacheTerm {
                exponents: exps.clone(),
                coefficient: display(c),
            })
            .collect(),
    }
}

fn load_cache(path: &Path, store: &mut PolyStore) -> Result<()> {
    if !path.exists() {
        return Ok(());
    }
    let text = std::fs::read_to_string(path)
        .map_err(|e| usage(format!("cannot read cache {}: {e}", path.display())))?;
    let file: PolyCacheFile = serde_json::from_str(&text)
        .map_err(|e| usage(format!("malformed cache {}: {e}", path.display())))?;
    if file.version != "1" {
        return Err(usage(format!(
            "unsupported cache version {:?} in {}",
            file.version,
            path.display()
        )));
    }
    for (key, entry) in file.entries {
        if entry.variable_order != "odd-first" {
            return Err(usage(format!(
                "cache entry {key}: unknown variable order {:?}",
                entry.variable_order
            )));
        }
        let mut terms = BTreeMap::new();
        for term in entry.terms {
            let c: Rational = term
                .coefficient
                .parse()
                .map_err(|_| usage(format!("cache entry {key}: bad coefficient")))?;
            terms.insert(term.exponents, c);
        }
        let poly = SquaredPoly::from_terms(entry.n as usize, terms);
        store.insert_class(entry.g, entry.n, entry.k, poly)?;
    }
    Ok(())
}

fn save_cache(path: &Path, store: &PolyStore) -> Result<()> {
    let mut entries = BTreeMap::new();
    for (&(g, n, k), poly) in store.iter() {
        entries.insert(cache_key(g, n, k), entry_of(g, n, k, poly));
    }
    let doc = PolyCacheFile { version: "1".to_string(), entries };
    let text = serde_json::to_string_pretty(&doc).expect("serializable");
    std::fs::write(path, text)
        .map_err(|e| usage(format!("cannot write cache {}: {e}", path.display())))?;
    Ok(())
}
