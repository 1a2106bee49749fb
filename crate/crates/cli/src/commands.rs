use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use ppm_core::bounds::{scan, AlphaBound};
use ppm_core::generators::{gen_grid, gen_jordan, gen_random, GridParams};
use ppm_core::{is_witness, Limits, Permutation, Strategy};
use serde::Serialize;

use crate::algo::{self, Algo, DEFAULT_AUTO_BUDGET};
use crate::bench::{self, BenchConfig, Family, Matcher, Reproducer};
use crate::record::{format_permutation, read_permutation, RunRecord, Timing, SCHEMA};
use crate::{EXIT_ERROR, EXIT_NO, EXIT_OK};

#[derive(Debug, Parser)]
#[command(name = "ppm", version, about = "Permutation pattern matching")]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Decide whether the text contains the pattern.
    Match(MatchArgs),
    /// Check a witness: exit 0 if valid, 1 if not, 2 if malformed.
    Verify(VerifyArgs),
    /// Print an embedding order for a pattern.
    Order(OrderArgs),
    /// Generate a permutation in the one-line format.
    #[command(subcommand)]
    Gen(GenCommand),
    /// Evaluate the exponential bound of the even-odd matcher.
    Bounds(BoundsArgs),
    /// Run algorithms over a seeded instance family.
    Bench(BenchArgs),
    /// Rerun the algorithms of a reproducer dump.
    Replay(ReplayArgs),
}

#[derive(Debug, Args)]
struct MatchArgs {
    #[arg(long)]
    text: PathBuf,
    #[arg(long)]
    pattern: PathBuf,
    #[arg(long, default_value = "auto")]
    algo: Algo,
    /// Include an occurrence in the output.
    #[arg(long)]
    witness: bool,
    /// Exit 0 on containment and 1 on avoidance.
    #[arg(long)]
    exit_status: bool,
    #[arg(long)]
    timeout_ms: Option<u64>,
    /// Even-odd is chosen by `auto` while ⌊k/2⌋·log₂ n stays within this many bits.
    #[arg(long, default_value_t = DEFAULT_AUTO_BUDGET)]
    auto_budget: f64,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    #[arg(long)]
    text: PathBuf,
    #[arg(long)]
    pattern: PathBuf,
    /// Increasing 1-based text indices, space separated.
    #[arg(long, allow_hyphen_values = true)]
    witness: String,
}

#[derive(Debug, Args)]
struct OrderArgs {
    #[arg(long)]
    pattern: PathBuf,
    #[arg(long, value_parser = parse_strategy)]
    strategy: Strategy,
    /// Include the boundary size after every step.
    #[arg(long)]
    profile: bool,
}

fn parse_strategy(s: &str) -> Result<Strategy, String> {
    s.parse().map_err(|e: ppm_core::Error| e.to_string())
}

#[derive(Debug, Subcommand)]
enum GenCommand {
    /// Uniform permutation of length n.
    Random {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Grid-like permutation of length a·b (a even).
    Grid {
        #[arg(long)]
        a: usize,
        #[arg(long)]
        b: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Permutation with a planar incidence graph, from two crossing curves.
    Jordan {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Args)]
#[command(group(clap::ArgGroup::new("what").required(true).args(["alpha", "scan"])))]
struct BoundsArgs {
    #[arg(long)]
    alpha: Option<f64>,
    /// Grid search for the maximum over [lo, hi].
    #[arg(long)]
    scan: bool,
    #[arg(long, default_value_t = 0.001)]
    lo: f64,
    #[arg(long, default_value_t = 0.499)]
    hi: f64,
    #[arg(long, default_value_t = 1e-5)]
    step: f64,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Debug, Args)]
struct BenchArgs {
    #[arg(long)]
    family: Family,
    /// Comma-separated `N:K` (or `N:AxB` for grid); may be empty.
    #[arg(long, allow_hyphen_values = true)]
    sizes: String,
    /// Comma-separated algorithm ids, or `all`.
    #[arg(long)]
    algos: String,
    #[arg(long)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
    /// Instances per size.
    #[arg(long, default_value_t = 1)]
    count: usize,
    #[arg(long)]
    timeout_ms: Option<u64>,
    /// Worker threads; 0 uses all cores.
    #[arg(long, default_value_t = 0)]
    jobs: usize,
    /// Defaults to the extension of `--out`, else JSON.
    #[arg(long)]
    format: Option<Format>,
    /// Where a failing instance is dumped; defaults to `<out>.repro.json`.
    #[arg(long)]
    repro: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct ReplayArgs {
    file: PathBuf,
    /// Defaults to the algorithms recorded in the dump.
    #[arg(long)]
    algos: Option<String>,
}

pub(crate) fn dispatch(cli: Cli, out: &mut dyn Write) -> Result<u8> {
    match cli.command {
        Command::Match(a) => cmd_match(a, out),
        Command::Verify(a) => cmd_verify(a, out),
        Command::Order(a) => cmd_order(a, out),
        Command::Gen(g) => cmd_gen(g, out),
        Command::Bounds(a) => cmd_bounds(a, out),
        Command::Bench(a) => cmd_bench(a, out),
        Command::Replay(a) => cmd_replay(a, out),
    }
}

fn emit_json<T: Serialize>(out: &mut dyn Write, value: &T) -> Result<()> {
    serde_json::to_writer_pretty(&mut *out, value)?;
    writeln!(out)?;
    Ok(())
}

#[derive(Serialize)]
struct MatchOutput {
    schema: u32,
    record: RunRecord,
    timing: Timing,
}

fn cmd_match(a: MatchArgs, out: &mut dyn Write) -> Result<u8> {
    let text = read_permutation(&a.text)?;
    let pattern = read_permutation(&a.pattern)?;
    let (n, k) = (text.len(), pattern.len());
    let concrete = a.algo.resolve(n, k, a.auto_budget);
    let limits = a
        .timeout_ms
        .map_or(Limits::none(), |ms| Limits::with_timeout(Duration::from_millis(ms)));
    let start = Instant::now();
    let outcome = algo::run(concrete, &text, &pattern, a.witness, limits)?;
    let time_ns = start.elapsed().as_nanos().min(u64::MAX as u128) as u64;

    let mut record = RunRecord::from_outcome(&outcome, n, k, true);
    if a.algo == Algo::Auto {
        record.algo = Algo::Auto.to_string();
        record.resolved_algo = Some(concrete.to_string());
    }
    let contains = record.contains;
    emit_json(
        out,
        &MatchOutput {
            schema: SCHEMA,
            record,
            timing: Timing { time_ns },
        },
    )?;
    Ok(match (a.exit_status, contains) {
        (false, _) => EXIT_OK,
        (true, Some(true)) => EXIT_OK,
        (true, Some(false)) => EXIT_NO,
        (true, None) => EXIT_ERROR,
    })
}

/// Parses a witness against the instance sizes; `None` means malformed.
pub(crate) fn parse_witness(s: &str, n: usize, k: usize) -> Result<Vec<usize>> {
    let idx: Vec<usize> = s
        .split(|c: char| c.is_whitespace() || c == ',')
        .filter(|t| !t.is_empty())
        .map(|t| t.parse().with_context(|| format!("witness entry `{t}` is not a positive integer")))
        .collect::<Result<_>>()?;
    if idx.len() != k {
        bail!("witness has {} entries, pattern has length {k}", idx.len());
    }
    if let Some(&bad) = idx.iter().find(|&&i| i == 0 || i > n) {
        bail!("witness index {bad} is outside 1..={n}");
    }
    Ok(idx)
}

fn cmd_verify(a: VerifyArgs, out: &mut dyn Write) -> Result<u8> {
    let text = read_permutation(&a.text)?;
    let pattern = read_permutation(&a.pattern)?;
    let w = parse_witness(&a.witness, text.len(), pattern.len())?;
    let valid = is_witness(&text, &pattern, &w);
    emit_json(out, &serde_json::json!({ "schema": SCHEMA, "valid": valid }))?;
    Ok(if valid { EXIT_OK } else { EXIT_NO })
}

#[derive(Serialize)]
struct OrderOutput {
    schema: u32,
    strategy: &'static str,
    k: usize,
    tau: Vec<usize>,
    bd_tau: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    profile: Option<Vec<usize>>,
}

fn cmd_order(a: OrderArgs, out: &mut dyn Write) -> Result<u8> {
    let pattern = read_permutation(&a.pattern)?;
    let order = a.strategy.build(&pattern)?;
    emit_json(
        out,
        &OrderOutput {
            schema: SCHEMA,
            strategy: a.strategy.name(),
            k: pattern.len(),
            tau: order.tau().to_vec(),
            bd_tau: order.bd_tau(),
            profile: a.profile.then(|| order.profile().to_vec()),
        },
    )?;
    Ok(EXIT_OK)
}

fn cmd_gen(g: GenCommand, out: &mut dyn Write) -> Result<u8> {
    let (p, path): (Permutation, Option<PathBuf>) = match g {
        GenCommand::Random { n, seed, out } => (gen_random(n, seed), out),
        GenCommand::Grid { a, b, out } => (gen_grid(GridParams::new(a, b)?), out),
        GenCommand::Jordan { k, seed, out } => (gen_jordan(k, seed)?, out),
    };
    let line = format_permutation(&p);
    match path {
        Some(path) => std::fs::write(&path, line).with_context(|| format!("writing {}", path.display()))?,
        None => out.write_all(line.as_bytes())?,
    }
    Ok(EXIT_OK)
}

fn cmd_bounds(a: BoundsArgs, out: &mut dyn Write) -> Result<u8> {
    if let Some(alpha) = a.alpha {
        emit_json(out, &AlphaBound::new(alpha)?)?;
    }
    if a.scan {
        emit_json(out, &scan(a.lo, a.hi, a.step)?)?;
    }
    Ok(EXIT_OK)
}

fn cmd_bench(a: BenchArgs, out: &mut dyn Write) -> Result<u8> {
    let sizes = bench::parse_sizes(a.family, &a.sizes)?;
    let algos = Algo::parse_list(&a.algos)?;
    let instances = bench::instances(a.family, &sizes, a.count, a.seed)?;
    let matchers: Vec<&dyn Matcher> = algos.iter().map(|m| m as &dyn Matcher).collect();
    let cfg = BenchConfig {
        timeout: a.timeout_ms.map(Duration::from_millis),
        jobs: a.jobs,
    };
    let report = match bench::run_bench(&instances, &matchers, cfg)? {
        Ok(r) => r,
        Err(repro) => {
            let path = a.repro.unwrap_or_else(|| default_repro_path(&a.out));
            write_file(&path, |w| Ok(serde_json::to_writer_pretty(w, &repro)?))?;
            bail!("{}; reproducer written to {}", repro.detail, path.display());
        }
    };
    let format = a.format.unwrap_or_else(|| match a.out.extension() {
        Some(e) if e.eq_ignore_ascii_case("csv") => Format::Csv,
        _ => Format::Json,
    });
    write_file(&a.out, |w| match format {
        Format::Json => {
            serde_json::to_writer_pretty(&mut *w, &report)?;
            Ok(writeln!(w)?)
        }
        Format::Csv => bench::write_csv(&report, w),
    })?;
    writeln!(out, "{} records written to {}", report.records.len(), a.out.display())?;
    Ok(EXIT_OK)
}

fn default_repro_path(out: &Path) -> PathBuf {
    let mut s = out.as_os_str().to_owned();
    s.push(".repro.json");
    PathBuf::from(s)
}

fn write_file(path: &Path, body: impl FnOnce(&mut dyn Write) -> Result<()>) -> Result<()> {
    let file = File::create(path).with_context(|| format!("creating {}", path.display()))?;
    let mut w = BufWriter::new(file);
    body(&mut w)?;
    w.flush()?;
    Ok(())
}

fn cmd_replay(a: ReplayArgs, out: &mut dyn Write) -> Result<u8> {
    let body = std::fs::read_to_string(&a.file).with_context(|| format!("reading {}", a.file.display()))?;
    let repro: Reproducer = serde_json::from_str(&body).context("parsing reproducer")?;
    let algos = match &a.algos {
        Some(list) => Algo::parse_list(list)?,
        None => repro.answers.keys().map(|s| s.parse()).collect::<Result<_>>()?,
    };
    let matchers: Vec<&dyn Matcher> = algos.iter().map(|m| m as &dyn Matcher).collect();
    let answers = bench::replay(&repro, &matchers)?;
    let agree = answers.values().all(|&c| c) || answers.values().all(|&c| !c);
    emit_json(out, &serde_json::json!({ "schema": SCHEMA, "answers": answers, "agree": agree }))?;
    Ok(if agree { EXIT_OK } else { EXIT_NO })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn witness_parsing() {
        assert_eq!(parse_witness("2 4 5", 8, 3).unwrap(), vec![2, 4, 5]);
        assert_eq!(parse_witness("2,4,5", 8, 3).unwrap(), vec![2, 4, 5]);
        assert!(parse_witness("", 8, 0).unwrap().is_empty());
        assert!(parse_witness("2 4", 8, 3).is_err());
        assert!(parse_witness("0 4 5", 8, 3).is_err());
        assert!(parse_witness("2 4 9", 8, 3).is_err());
        assert!(parse_witness("2 x 5", 8, 3).is_err());
    }

    #[test]
    fn repro_path_appends_suffix() {
        assert_eq!(default_repro_path(Path::new("out/r.csv")), PathBuf::from("out/r.csv.repro.json"));
    }
}
