//! `tcores`: compute and verify t-core partition k-tuple counts.
//!
//! Exit codes: 0 success / all verified, 1 verification mismatch,
//! 2 usage or parse error.

mod cache;
mod config;
mod output;

use std::io::Write as _;
use std::num::NonZeroU32;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};

use tcores::cores::{CoresError, Oracle};
use tcores::eta;
use tcores::formulas::{self, CuspCache, FormulaSpec};
use tcores::num_bigint::BigInt;

use cache::ExpansionCache;
use config::Settings;
use output::TableRow;

#[derive(Parser)]
#[command(
    name = "tcores",
    about = "Count t-core partition k-tuples by closed form, series, and enumeration",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Method {
    /// Registered closed-form divisor-sum identity.
    Formula,
    /// Coefficient extraction from the generating eta quotient.
    Series,
    /// Exhaustive partition enumeration (capped).
    Oracle,
    /// Every method available at this (t, k, n), cross-checked.
    All,
}

#[derive(Subcommand)]
enum Command {
    /// Print A_{t,k}(n).
    Compute {
        /// Core size t >= 2.
        #[arg(long, value_parser = clap::value_parser!(u32).range(2..))]
        t: u32,
        /// Tuple length k >= 1.
        #[arg(long)]
        k: NonZeroU32,
        /// Weight n.
        #[arg(long)]
        n: u64,
        #[arg(long, value_enum, default_value = "series")]
        method: Method,
    },
    /// Check theorems along all three routes; prints one JSON report line
    /// per theorem and exits nonzero on any mismatch.
    Verify {
        /// Theorem id like "3,4", or "all".
        #[arg(default_value = "all")]
        target: String,
        /// Check n = 0 ..= TERMS.
        #[arg(long)]
        terms: Option<u64>,
        /// Compare against the enumeration oracle for n up to this cap.
        #[arg(long)]
        oracle_cap: Option<u64>,
        /// Load the theorem registry from a manifest file instead of the
        /// built-in one.
        #[arg(long)]
        registry: Option<PathBuf>,
        /// Print the registry manifest and exit.
        #[arg(long)]
        list: bool,
        /// Verify theorems one at a time instead of in parallel.
        #[arg(long)]
        sequential: bool,
    },
    /// Expand an eta quotient like "eta(1)^6*eta(3)^6" and print its
    /// nonzero coefficients as n:c pairs.
    Expand {
        /// Eta-quotient expression: eta(m)^r factors joined by * and /.
        spec: String,
        /// Expand through q^TERMS.
        #[arg(long)]
        terms: Option<u64>,
        /// Print zero coefficients too.
        #[arg(long)]
        dense: bool,
        /// Consult and update the expansion cache.
        #[arg(long)]
        cache: bool,
        /// Override the cache file location.
        #[arg(long)]
        cache_file: Option<PathBuf>,
    },
    /// Tabulate A_{t,k}(n) over a range of n.
    Table {
        #[arg(long, value_parser = clap::value_parser!(u32).range(2..))]
        t: u32,
        #[arg(long)]
        k: NonZeroU32,
        /// Inclusive range of n, written START..END.
        #[arg(long)]
        range: String,
        #[arg(long, value_enum, default_value = "series")]
        method: Method,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
        /// Write to a file instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print the Sturm bound ceil(weight * [SL2(Z):Gamma_0(level)] / 12).
    Sturm {
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        level: u64,
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
        weight: u32,
    },
    /// Inspect or clear the expansion cache.
    Cache {
        #[command(subcommand)]
        action: CacheAction,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Subcommand)]
enum CacheAction {
    /// Show cache location, validity, and entry count.
    Stats {
        #[arg(long)]
        cache_file: Option<PathBuf>,
    },
    /// Delete the cache file (results never depend on it).
    Clear {
        #[arg(long)]
        cache_file: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn run(command: Command) -> Result<u8> {
    let settings = Settings::load()?;
    match command {
        Command::Compute { t, k, n, method } => cmd_compute(&settings, t, k, n, method),
        Command::Verify {
            target,
            terms,
            oracle_cap,
            registry,
            list,
            sequential,
        } => cmd_verify(
            &settings, &target, terms, oracle_cap, registry, list, sequential,
        ),
        Command::Expand {
            spec,
            terms,
            dense,
            cache,
            cache_file,
        } => cmd_expand(&settings, &spec, terms, dense, cache, cache_file),
        Command::Table {
            t,
            k,
            range,
            method,
            format,
            out,
        } => {
            let (n_start, n_end) = parse_range(&range)?;
            let request = TableRequest {
                t,
                k,
                n_start,
                n_end,
                method,
                format,
            };
            cmd_table(&settings, &request, out)
        }
        Command::Sturm { level, weight } => {
            println!("{}", formulas::sturm_bound(level, weight));
            Ok(0)
        }
        Command::Cache { action } => cmd_cache(&settings, action),
    }
}

fn registered(t: u32, k: NonZeroU32) -> Option<FormulaSpec> {
    formulas::find(t, k.get())
}

/// The series route powers the generating function to the k-th power; its
/// eta-quotient exponents must fit the factor representation.
fn check_series_bounds(t: u32, k: NonZeroU32) -> Result<()> {
    if u64::from(t) * u64::from(k.get()) > i32::MAX as u64 {
        bail!(
            "t * k = {} exceeds the supported exponent range",
            u64::from(t) * u64::from(k.get())
        );
    }
    Ok(())
}

/// The closed-form value, or exit-code 1 worthy trouble (non-exact
/// division means the registry entry is wrong, which is a verification
/// failure, not a usage error).
enum FormulaOutcome {
    Value(BigInt),
    Corrupt(String),
}

fn eval_formula(spec: &FormulaSpec, n: u64, cache: &mut CuspCache) -> FormulaOutcome {
    match formulas::closed_form(spec, n, cache) {
        Ok(v) => FormulaOutcome::Value(v),
        Err(e) => FormulaOutcome::Corrupt(e.to_string()),
    }
}

fn cmd_compute(settings: &Settings, t: u32, k: NonZeroU32, n: u64, method: Method) -> Result<u8> {
    let oracle = Oracle::new(settings.oracle_max);
    match method {
        Method::Formula => {
            let spec = registered(t, k).ok_or_else(|| {
                anyhow!("no registered closed form for (t, k) = ({t}, {k}); try --method series")
            })?;
            match eval_formula(&spec, n, &mut CuspCache::new()) {
                FormulaOutcome::Value(v) => {
                    println!("{v}");
                    Ok(0)
                }
                FormulaOutcome::Corrupt(msg) => {
                    eprintln!("{msg}");
                    Ok(1)
                }
            }
        }
        Method::Series => {
            check_series_bounds(t, k)?;
            let series = eta::phi_power(t, k, n as usize);
            println!("{}", series.coeff(n as usize));
            Ok(0)
        }
        Method::Oracle => match oracle.count_tuples(n, t, k) {
            Ok(v) => {
                println!("{v}");
                Ok(0)
            }
            Err(e @ CoresError::BudgetExceeded { .. }) => {
                bail!("{e}; raise oracle_max in the config to enumerate further")
            }
        },
        Method::All => {
            let mut routes: Vec<(&str, BigInt)> = Vec::new();
            if let Some(spec) = registered(t, k) {
                match eval_formula(&spec, n, &mut CuspCache::new()) {
                    FormulaOutcome::Value(v) => routes.push(("formula", v)),
                    FormulaOutcome::Corrupt(msg) => {
                        eprintln!("{msg}");
                        return Ok(1);
                    }
                }
            }
            check_series_bounds(t, k)?;
            let series = eta::phi_power(t, k, n as usize);
            routes.push(("series", series.coeff(n as usize).clone()));
            if n <= settings.oracle_max {
                routes.push(("oracle", oracle.count_tuples(n, t, k).expect("within cap")));
            }
            let value = routes[0].1.clone();
            if routes.iter().any(|(_, v)| *v != value) {
                let detail: Vec<String> = routes
                    .iter()
                    .map(|(name, v)| format!("{name}={v}"))
                    .collect();
                eprintln!(
                    "mismatch between methods for A_{{{t},{k}}}({n}): {}",
                    detail.join(" ")
                );
                return Ok(1);
            }
            println!("{value}");
            Ok(0)
        }
    }
}

fn load_registry(path: Option<PathBuf>) -> Result<Vec<FormulaSpec>> {
    match path {
        None => Ok(formulas::registry()),
        Some(path) => {
            let text = std::fs::read_to_string(&path)
                .with_context(|| format!("cannot read registry {}", path.display()))?;
            formulas::parse_manifest(&text).map_err(|e| anyhow!("{}: {e}", path.display()))
        }
    }
}

fn cmd_verify(
    settings: &Settings,
    target: &str,
    terms: Option<u64>,
    oracle_cap: Option<u64>,
    registry: Option<PathBuf>,
    list: bool,
    sequential: bool,
) -> Result<u8> {
    let mut specs = load_registry(registry)?;
    if target != "all" {
        let (t, k) = parse_theorem_id(target)?;
        specs.retain(|s| s.t == t && s.k == k);
        if specs.is_empty() {
            bail!("unknown theorem id '{target}'; try `tcores verify --list`");
        }
    }
    if list {
        print!("{}", formulas::manifest(&specs));
        return Ok(0);
    }
    let terms = terms.unwrap_or(settings.terms);
    let cap = oracle_cap.unwrap_or(settings.oracle_cap);

    // Reports are buffered and emitted in registry order either way.
    let reports: Vec<_> = if sequential || specs.len() == 1 {
        specs
            .iter()
            .map(|s| formulas::verify(s, terms, cap))
            .collect()
    } else {
        std::thread::scope(|scope| {
            let handles: Vec<_> = specs
                .iter()
                .map(|s| scope.spawn(move || formulas::verify(s, terms, cap)))
                .collect();
            handles
                .into_iter()
                .map(|h| h.join().expect("verify panicked"))
                .collect()
        })
    };

    let stdout = std::io::stdout();
    let mut lock = stdout.lock();
    let mut all_ok = true;
    for report in &reports {
        writeln!(lock, "{}", output::report_json(report))?;
        all_ok &= report.is_ok();
    }
    Ok(u8::from(!all_ok))
}

fn parse_theorem_id(s: &str) -> Result<(u32, u32)> {
    let parse = || -> Option<(u32, u32)> {
        let (t, k) = s.split_once(',')?;
        Some((t.trim().parse().ok()?, k.trim().parse().ok()?))
    };
    parse().ok_or_else(|| anyhow!("theorem id must look like '3,4', got '{s}'"))
}

fn cmd_expand(
    settings: &Settings,
    spec: &str,
    terms: Option<u64>,
    dense: bool,
    use_cache: bool,
    cache_file: Option<PathBuf>,
) -> Result<u8> {
    let quotient = eta::parse_eta_quotient(spec).map_err(|e| anyhow!("{e}"))?;
    let order = terms.unwrap_or(settings.terms) as usize;
    let key = quotient.canonical_string();

    let cache = use_cache
        .then(|| ExpansionCache::new(cache_file.unwrap_or_else(|| settings.cache_file.clone())));
    let coeffs: Vec<BigInt> = match cache.as_ref().and_then(|c| c.lookup(&key, order)) {
        Some(cached) => cached,
        None => {
            let series = quotient.expand(order).map_err(|e| anyhow!("{e}"))?;
            let coeffs = series.coeffs().to_vec();
            if let Some(c) = &cache {
                c.store(&key, order, &coeffs)?;
            }
            coeffs
        }
    };

    let pairs: Vec<String> = coeffs
        .iter()
        .enumerate()
        .filter(|(_, c)| dense || !tcores::num_traits::Zero::is_zero(*c))
        .map(|(n, c)| format!("{n}:{c}"))
        .collect();
    println!("{}", pairs.join(" "));
    Ok(0)
}

fn parse_range(range: &str) -> Result<(u64, u64)> {
    let parse = || -> Option<(u64, u64)> {
        let (a, b) = range.split_once("..")?;
        Some((a.trim().parse().ok()?, b.trim().parse().ok()?))
    };
    let (start, end) =
        parse().ok_or_else(|| anyhow!("range must look like START..END, got '{range}'"))?;
    if start > end {
        bail!("empty range: {start} > {end}");
    }
    Ok((start, end))
}

/// A validated table query: inclusive range of n plus the methods and
/// output format requested.
struct TableRequest {
    t: u32,
    k: NonZeroU32,
    n_start: u64,
    n_end: u64,
    method: Method,
    format: Format,
}

fn cmd_table(settings: &Settings, request: &TableRequest, out: Option<PathBuf>) -> Result<u8> {
    let TableRequest {
        t,
        k,
        n_start,
        n_end,
        method,
        format,
    } = *request;
    let want_formula = matches!(method, Method::Formula | Method::All);
    let want_series = matches!(method, Method::Series | Method::All);
    let want_oracle = matches!(method, Method::Oracle | Method::All);

    let spec = registered(t, k);
    if method == Method::Formula && spec.is_none() {
        bail!("no registered closed form for (t, k) = ({t}, {k}); try --method series");
    }
    if method == Method::Oracle && n_end > settings.oracle_max {
        bail!(
            "oracle enumeration capped at n <= {} (raise oracle_max in the config)",
            settings.oracle_max
        );
    }
    if want_series {
        check_series_bounds(t, k)?;
    }

    let series = want_series.then(|| eta::phi_power(t, k, n_end as usize));
    let oracle = Oracle::new(settings.oracle_max);
    let mut cusp_cache = CuspCache::new();

    let mut rows = Vec::with_capacity((n_end - n_start + 1) as usize);
    for n in n_start..=n_end {
        let formula = match (want_formula, &spec) {
            (true, Some(spec)) => match eval_formula(spec, n, &mut cusp_cache) {
                FormulaOutcome::Value(v) => Some(v),
                FormulaOutcome::Corrupt(msg) => {
                    eprintln!("{msg}");
                    return Ok(1);
                }
            },
            _ => None,
        };
        let series_value = series.as_ref().map(|s| s.coeff(n as usize).clone());
        let oracle_value = (want_oracle && n <= settings.oracle_max)
            .then(|| oracle.count_tuples(n, t, k).expect("within cap"));
        rows.push(TableRow {
            n,
            formula,
            series: series_value,
            oracle: oracle_value,
        });
    }

    let rendered = match format {
        Format::Csv => output::table_csv(&rows),
        Format::Json => output::table_json(&rows),
    };
    match out {
        None => print!("{rendered}"),
        Some(path) => std::fs::write(&path, rendered)
            .with_context(|| format!("cannot write {}", path.display()))?,
    }
    Ok(0)
}

fn cmd_cache(settings: &Settings, action: CacheAction) -> Result<u8> {
    match action {
        CacheAction::Stats { cache_file } => {
            let cache =
                ExpansionCache::new(cache_file.unwrap_or_else(|| settings.cache_file.clone()));
            let (exists, valid, entries) = cache.stats();
            println!("path: {}", cache.path().display());
            println!(
                "state: {}",
                match (exists, valid) {
                    (false, _) => "absent",
                    (true, false) => "unrecognized version (will be rebuilt on next store)",
                    (true, true) => "valid",
                }
            );
            println!("entries: {entries}");
            Ok(0)
        }
        CacheAction::Clear { cache_file } => {
            let cache =
                ExpansionCache::new(cache_file.unwrap_or_else(|| settings.cache_file.clone()));
            let removed = cache.clear()?;
            println!(
                "{}",
                if removed {
                    "cache removed"
                } else {
                    "no cache file"
                }
            );
            Ok(0)
        }
    }
}
