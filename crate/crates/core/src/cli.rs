//! Command-line front end. [`run`] takes the argument vector and output
//! streams so it can be driven from tests.
//!
//! Exit codes: 0 on success, 1 on a usage or input error, 2 when a grid
//! row conflicts with the reference or an internal check fails.

use std::io::Write;
use std::ops::RangeInclusive;
use std::path::PathBuf;
use std::time::Duration;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::bounds::{best_bounds, BoundRecord};
use crate::document::Document;
use crate::error::{invalid, Error, Result};
use crate::graph::{DistanceFamily, FamilyKind};
use crate::pattern::{build_pattern, verify_periodic};
use crate::report::{self, ProofCache};
use crate::search::{default_periods, exact_value_with, find_pattern, prove_lower, ProofStore, SearchConfig};

#[derive(Parser)]
#[command(name = "radiolab", version, about = "Radio k-labelings of integer distance graphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Graph distance between vertices i and j
    #[command(allow_negative_numbers = true)]
    Dist {
        family: FamilyKind,
        /// t, or a comma-separated distance set for `general`
        t: String,
        i: i64,
        j: i64,
    },
    /// Analytic lower and upper bounds on rl_k
    Bounds {
        family: FamilyKind,
        t: String,
        k: u64,
        /// Tighten with prefix proofs and pattern searches
        #[arg(long)]
        exact: bool,
        #[command(flatten)]
        search: SearchArgs,
    },
    /// Build or verify periodic labelings
    Pattern {
        #[command(subcommand)]
        action: PatternAction,
    },
    /// Try to prove rl_k > l by exhausting labelings of a prefix
    ProveLower {
        family: FamilyKind,
        t: String,
        k: u64,
        l: u64,
        #[command(flatten)]
        search: SearchArgs,
    },
    /// Search for a periodic labeling with labels in 0..=span
    FindPattern {
        family: FamilyKind,
        t: String,
        k: u64,
        span: u64,
        #[arg(long, value_delimiter = ',')]
        periods: Vec<usize>,
        #[command(flatten)]
        search: SearchArgs,
    },
    /// Compute a grid of cells and compare with the reference tables
    Table {
        #[arg(long, value_delimiter = ',', default_values = ["consecutive", "one-and-t", "two-consecutive"])]
        families: Vec<FamilyKind>,
        #[arg(long, default_value = "2..9", value_parser = parse_range)]
        t: RangeInclusive<u64>,
        #[arg(long, default_value = "2..9", value_parser = parse_range)]
        k: RangeInclusive<u64>,
        #[arg(long, value_enum, default_value = "csv")]
        out: OutputFormat,
        /// Reference CSV to compare against instead of the built-in tables
        #[arg(long = "ref")]
        reference: Option<PathBuf>,
        #[arg(long)]
        no_cache: bool,
        #[command(flatten)]
        search: SearchArgs,
    },
}

#[derive(Subcommand)]
enum PatternAction {
    /// Emit the built-in construction for (family, t, k)
    Build {
        family: FamilyKind,
        t: String,
        k: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Verify a pattern file and print it with the verdict
    Verify { file: PathBuf },
}

#[derive(Args)]
struct SearchArgs {
    /// Vertices labeled by a prefix proof
    #[arg(long, default_value_t = 64)]
    prefix: usize,
    /// Node budget per root branch or pattern search
    #[arg(long, default_value_t = 10_000_000)]
    nodes: u64,
    /// Time budget in seconds (per cell for `table`)
    #[arg(long, alias = "time", default_value_t = 30.0)]
    budget: f64,
    #[arg(long, default_value_t = 1)]
    workers: usize,
}

#[derive(Clone, Copy, ValueEnum)]
enum OutputFormat {
    Csv,
    Json,
}

impl SearchArgs {
    fn config(&self) -> Result<SearchConfig> {
        if !(self.budget.is_finite() && self.budget > 0.0) {
            return Err(invalid("budget must be a positive number of seconds"));
        }
        let config = SearchConfig {
            max_prefix: self.prefix,
            node_budget: self.nodes,
            time_budget: Duration::from_secs_f64(self.budget),
            workers: self.workers,
            ..SearchConfig::default()
        };
        config.validate()?;
        Ok(config)
    }
}

/// Accepts `A..B` and `A..=B` (both inclusive) or a single value.
fn parse_range(s: &str) -> std::result::Result<RangeInclusive<u64>, String> {
    let num = |v: &str| v.trim().parse::<u64>().map_err(|e| format!("'{v}': {e}"));
    match s.split_once("..") {
        Some((a, b)) => Ok(num(a)?..=num(b.strip_prefix('=').unwrap_or(b))?),
        None => num(s).map(|v| v..=v),
    }
}

fn family(kind: FamilyKind, t: &str) -> Result<DistanceFamily> {
    match kind {
        FamilyKind::General => {
            let dset = t
                .split(',')
                .map(|d| d.trim().parse::<u64>().map_err(|_| invalid(format!("bad distance '{d}'"))))
                .collect::<Result<Vec<_>>>()?;
            DistanceFamily::general(dset)
        }
        kind => {
            let t = t.parse::<u64>().map_err(|_| invalid(format!("bad t '{t}'")))?;
            DistanceFamily::named(kind, t)
        }
    }
}

fn print_bounds(out: &mut dyn Write, r: &BoundRecord) -> Result<()> {
    writeln!(out, "family {}", r.family)?;
    writeln!(out, "k {}", r.k)?;
    writeln!(out, "lower {} {}", r.lower, r.lower_provenance.name())?;
    match (r.upper, r.upper_provenance) {
        (Some(u), Some(p)) => writeln!(out, "upper {u} {}", p.name())?,
        _ => writeln!(out, "upper none")?,
    }
    writeln!(out, "exact {}", r.is_exact())?;
    Ok(())
}

fn execute(cli: Cli, out: &mut dyn Write) -> Result<i32> {
    match cli.command {
        Command::Dist { family: kind, t, i, j } => {
            writeln!(out, "{}", family(kind, &t)?.distance(i, j)?)?;
        }
        Command::Bounds { family: kind, t, k, exact, search } => {
            let f = family(kind, &t)?;
            let record = if exact {
                exact_value_with(&f, k, &search.config()?, None)?
            } else {
                best_bounds(&f, k)?
            };
            print_bounds(out, &record)?;
        }
        Command::Pattern { action: PatternAction::Build { family: kind, t, k, out: path } } => {
            let p = build_pattern(&family(kind, &t)?, k)?;
            let json = Document::from_pattern(&p).to_json()?;
            match path {
                Some(path) => std::fs::write(path, json + "\n")?,
                None => writeln!(out, "{json}")?,
            }
        }
        Command::Pattern { action: PatternAction::Verify { file } } => {
            let doc = Document::from_json(&std::fs::read_to_string(file)?)?;
            let verdict = verify_periodic(&doc.to_pattern()?)?;
            writeln!(out, "{}", doc.with_verdict(&verdict).to_json()?)?;
        }
        Command::ProveLower { family: kind, t, k, l, search } => {
            let c = prove_lower(&family(kind, &t)?, k, l, &search.config()?)?;
            writeln!(out, "{}", Document::from_certificate(&c).to_json()?)?;
        }
        Command::FindPattern { family: kind, t, k, span, periods, search } => {
            let f = family(kind, &t)?;
            let periods = if periods.is_empty() { default_periods(&f, k) } else { periods };
            match find_pattern(&f, k, span, &periods, &search.config()?)? {
                Some(p) => writeln!(out, "{}", Document::from_pattern(&p).to_json()?)?,
                None => writeln!(out, "none")?,
            }
        }
        Command::Table { families, t, k, out: format, reference, no_cache, search } => {
            let table = match reference {
                Some(path) => report::load_reference(&path)?,
                None => report::reference_table(),
            };
            let cache = if no_cache { None } else { Some(ProofCache::open(&ProofCache::default_dir())?) };
            let store = cache.as_ref().map(|c| c as &dyn ProofStore);
            let report = report::run_grid(&families, t, k, &search.config()?, &table, store)?;
            let text = match format {
                OutputFormat::Csv => report.to_csv()?,
                OutputFormat::Json => report.to_json()? + "\n",
            };
            out.write_all(text.as_bytes())?;
            if report.conflicts() > 0 {
                return Ok(2);
            }
        }
    }
    Ok(0)
}

/// Runs the command line `args` (including the program name).
pub fn run<I, S>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { err.write_all(text.as_bytes()) } else { out.write_all(text.as_bytes()) };
            return code;
        }
    };
    match execute(cli, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            match e {
                Error::Conflict(_) | Error::PatternRejected(_) => 2,
                _ => 1,
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call(args: &[&str]) -> (i32, String, String) {
        let (mut out, mut err) = (Vec::new(), Vec::new());
        let code = run(std::iter::once("radiolab").chain(args.iter().copied()), &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn ranges() {
        assert_eq!(parse_range("2..9").unwrap(), 2..=9);
        assert_eq!(parse_range("2..=9").unwrap(), 2..=9);
        assert_eq!(parse_range("4").unwrap(), 4..=4);
        assert!(parse_range("a..3").is_err());
    }

    #[test]
    fn dist_general_and_negative() {
        assert_eq!(call(&["dist", "one-and-t", "5", "0", "12"]).1.trim(), "4");
        assert_eq!(call(&["dist", "general", "3,4", "0", "-1"]).1.trim(), "2");
    }

    #[test]
    fn usage_errors() {
        assert_eq!(call(&["dist", "nope", "5", "0", "1"]).0, 1);
        assert_eq!(call(&["dist", "one-and-t", "2", "0", "1"]).0, 1);
        assert_eq!(call(&["bounds", "general", "3,4", "2"]).0, 1);
        assert_eq!(call(&["prove-lower", "consecutive", "2", "2", "5", "--budget", "0"]).0, 1);
        assert_eq!(call(&[]).0, 1);
        assert_eq!(call(&["--help"]).0, 0);
        assert_eq!(call(&["--version"]).0, 0);
    }

    #[test]
    fn bounds_exact() {
        let (code, out, _) = call(&["bounds", "two-consecutive", "4", "2", "--exact", "--budget", "10"]);
        assert_eq!(code, 0);
        assert!(out.contains("lower 7 ") && out.contains("upper 7 ") && out.contains("exact true"));
    }
}
