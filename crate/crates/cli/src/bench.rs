//! Benchmark harness: seeded instance families, every algorithm per
//! instance, in-run agreement and width checks.

use std::collections::BTreeMap;
use std::io::Write;
use std::str::FromStr;
use std::time::{Duration, Instant};

use anyhow::{anyhow, bail, Context, Result};
use ppm_core::generators::{gen_grid, gen_jordan, gen_random, GridParams};
use ppm_core::{is_witness, Limits, Permutation};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::algo::{self, Algo, Outcome};
use crate::record::{RunRecord, Status, Timing, SCHEMA};

/// Mixed into the instance seed before drawing a random pattern, so text
/// and pattern come from unrelated streams.
const PATTERN_SALT: u64 = 0x9e37_79b9_7f4a_7c15;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    Random,
    Grid,
    Jordan,
}

impl Family {
    pub fn name(self) -> &'static str {
        match self {
            Family::Random => "random",
            Family::Grid => "grid",
            Family::Jordan => "jordan",
        }
    }
}

impl FromStr for Family {
    type Err = anyhow::Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "random" => Ok(Family::Random),
            "grid" => Ok(Family::Grid),
            "jordan" => Ok(Family::Jordan),
            _ => bail!("unknown family `{s}` (expected random, grid or jordan)"),
        }
    }
}

/// Text length plus pattern shape: `N:K`, or `N:AxB` for grid patterns.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SizeSpec {
    pub n: usize,
    pub pattern: PatternShape,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PatternShape {
    Len(usize),
    Grid(usize, usize),
}

/// Parses a comma-separated size list; an empty list is allowed.
pub fn parse_sizes(family: Family, s: &str) -> Result<Vec<SizeSpec>> {
    let mut out = Vec::new();
    for tok in s.split(',').map(str::trim).filter(|t| !t.is_empty()) {
        let (n, pat) = tok
            .split_once(':')
            .ok_or_else(|| anyhow!("size `{tok}` is not of the form N:K"))?;
        let n: usize = n.parse().with_context(|| format!("text length in `{tok}`"))?;
        let pattern = match (family, pat.split_once('x')) {
            (Family::Grid, Some((a, b))) => PatternShape::Grid(
                a.parse().with_context(|| format!("grid width in `{tok}`"))?,
                b.parse().with_context(|| format!("grid height in `{tok}`"))?,
            ),
            (Family::Grid, None) => bail!("grid size `{tok}` needs the form N:AxB"),
            (_, _) => PatternShape::Len(pat.parse().with_context(|| format!("pattern length in `{tok}`"))?),
        };
        out.push(SizeSpec { n, pattern });
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    pub family: Family,
    pub seed: u64,
    pub text: Permutation,
    pub pattern: Permutation,
}

/// Instance `i` of the whole sweep uses seed `base + i`; the text is
/// `gen_random(n, seed)` in every family.
pub fn instances(family: Family, sizes: &[SizeSpec], count: usize, base: u64) -> Result<Vec<Instance>> {
    let mut out = Vec::with_capacity(sizes.len() * count);
    for size in sizes {
        for _ in 0..count {
            let seed = base.wrapping_add(out.len() as u64);
            out.push(make_instance(family, *size, seed)?);
        }
    }
    Ok(out)
}

pub fn make_instance(family: Family, size: SizeSpec, seed: u64) -> Result<Instance> {
    let pattern = match (family, size.pattern) {
        (Family::Random, PatternShape::Len(k)) => gen_random(k, seed ^ PATTERN_SALT),
        (Family::Jordan, PatternShape::Len(k)) => gen_jordan(k, seed)?,
        (Family::Grid, PatternShape::Grid(a, b)) => gen_grid(GridParams::new(a, b)?),
        _ => bail!("pattern shape does not fit family {}", family.name()),
    };
    Ok(Instance {
        family,
        seed,
        text: gen_random(size.n, seed),
        pattern,
    })
}

/// Anything the harness can run. Implemented by [`Algo`]; tests plug in
/// deliberately wrong matchers to exercise the abort path.
pub trait Matcher: Sync {
    fn id(&self) -> String;
    fn run(&self, text: &Permutation, pattern: &Permutation, limits: Limits) -> ppm_core::Result<Outcome>;
}

impl Matcher for Algo {
    fn id(&self) -> String {
        self.to_string()
    }

    fn run(&self, text: &Permutation, pattern: &Permutation, limits: Limits) -> ppm_core::Result<Outcome> {
        algo::run(*self, text, pattern, true, limits)
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct BenchConfig {
    pub timeout: Option<Duration>,
    /// Worker threads; 0 lets the pool decide.
    pub jobs: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct TimingTable {
    pub time_ns: Vec<u64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub schema: u32,
    pub family: Family,
    pub seed: u64,
    pub records: Vec<RunRecord>,
    /// Parallel to `records`.
    pub timing: TimingTable,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Failure {
    Disagreement,
    InvalidWitness,
    WidthBound,
}

/// Everything needed to rerun a failing instance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Reproducer {
    pub schema: u32,
    pub failure: Failure,
    pub family: Family,
    pub seed: u64,
    pub text: String,
    pub pattern: String,
    /// Decided answers per algorithm id; undecided runs are left out.
    pub answers: BTreeMap<String, bool>,
    pub detail: String,
}

impl Reproducer {
    pub fn text(&self) -> Result<Permutation> {
        Ok(Permutation::parse(&self.text)?)
    }

    pub fn pattern(&self) -> Result<Permutation> {
        Ok(Permutation::parse(&self.pattern)?)
    }
}

/// Runs every matcher on every instance. Records come back in instance
/// order, matchers in the given order, whatever the thread count.
///
/// The first failing instance in that order aborts the run.
pub fn run_bench(
    instances: &[Instance],
    matchers: &[&dyn Matcher],
    cfg: BenchConfig,
) -> Result<Result<Report, Box<Reproducer>>> {
    let pool = rayon::ThreadPoolBuilder::new().num_threads(cfg.jobs).build()?;
    let per_instance: Vec<Vec<(RunRecord, Timing)>> =
        pool.install(|| instances.par_iter().map(|inst| run_instance(inst, matchers, cfg)).collect());

    let mut records = Vec::new();
    let mut times = Vec::new();
    for (inst, rows) in instances.iter().zip(per_instance) {
        let recs: Vec<RunRecord> = rows.iter().map(|(r, _)| r.clone()).collect();
        if let Some(repro) = check_instance(inst, &recs) {
            return Ok(Err(Box::new(repro)));
        }
        for (r, t) in rows {
            records.push(r);
            times.push(t.time_ns);
        }
    }
    Ok(Ok(Report {
        schema: SCHEMA,
        family: instances.first().map_or(Family::Random, |i| i.family),
        seed: instances.first().map_or(0, |i| i.seed),
        records,
        timing: TimingTable { time_ns: times },
    }))
}

fn run_instance(inst: &Instance, matchers: &[&dyn Matcher], cfg: BenchConfig) -> Vec<(RunRecord, Timing)> {
    let (n, k) = (inst.text.len(), inst.pattern.len());
    matchers
        .iter()
        .map(|m| {
            let limits = cfg.timeout.map_or(Limits::none(), Limits::with_timeout);
            let start = Instant::now();
            let out = m.run(&inst.text, &inst.pattern, limits);
            let time_ns = start.elapsed().as_nanos().min(u64::MAX as u128) as u64;
            let mut rec = match out {
                Ok(out) => RunRecord::from_outcome(&out, n, k, false),
                Err(e) => RunRecord::unsupported(String::new(), n, k, e.to_string()),
            };
            rec.algo = m.id();
            rec.family = Some(inst.family.name().to_string());
            rec.seed = Some(inst.seed);
            (rec, Timing { time_ns })
        })
        .collect()
}

fn check_instance(inst: &Instance, recs: &[RunRecord]) -> Option<Reproducer> {
    let answers: BTreeMap<String, bool> = recs
        .iter()
        .filter_map(|r| r.contains.map(|c| (r.algo.clone(), c)))
        .collect();
    let repro = |failure, detail: String| Reproducer {
        schema: SCHEMA,
        failure,
        family: inst.family,
        seed: inst.seed,
        text: inst.text.to_string(),
        pattern: inst.pattern.to_string(),
        answers: answers.clone(),
        detail,
    };
    if answers.values().any(|&c| c) && answers.values().any(|&c| !c) {
        return Some(repro(Failure::Disagreement, "algorithms disagree on containment".into()));
    }
    for r in recs {
        if let Some(w) = &r.witness {
            if !is_witness(&inst.text, &inst.pattern, w) {
                return Some(repro(Failure::InvalidWitness, format!("{} reported witness {w:?}", r.algo)));
            }
        }
        if r.status == Status::Ok && !r.width_within_bound() {
            let o = r.order.as_ref().expect("width bound implies an order");
            return Some(repro(
                Failure::WidthBound,
                format!(
                    "{}: peak width {} exceeds C({}, {})",
                    r.algo, r.peak_width, r.n, o.bd_tau
                ),
            ));
        }
    }
    None
}

/// Reruns the matchers on a dumped instance and returns their decided answers.
pub fn replay(repro: &Reproducer, matchers: &[&dyn Matcher]) -> Result<BTreeMap<String, bool>> {
    let (text, pattern) = (repro.text()?, repro.pattern()?);
    let mut out = BTreeMap::new();
    for m in matchers {
        let r = m.run(&text, &pattern, Limits::none())?.result;
        if r.contains || !r.timed_out {
            out.insert(m.id(), r.contains);
        }
    }
    Ok(out)
}

#[derive(Serialize)]
struct CsvRow<'a> {
    family: &'a str,
    n: usize,
    k: usize,
    algo: &'a str,
    contains: Option<bool>,
    time_ns: u64,
    peak_width: u64,
    seed: Option<u64>,
}

pub fn write_csv<W: Write>(report: &Report, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    if report.records.is_empty() {
        // serde only emits a header with the first row
        w.write_record(["family", "n", "k", "algo", "contains", "time_ns", "peak_width", "seed"])?;
    }
    for (r, &time_ns) in report.records.iter().zip(&report.timing.time_ns) {
        w.serialize(CsvRow {
            family: r.family.as_deref().unwrap_or(""),
            n: r.n,
            k: r.k,
            algo: &r.algo,
            contains: r.contains,
            time_ns,
            peak_width: r.peak_width,
            seed: r.seed,
        })?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sizes_parse() {
        assert_eq!(
            parse_sizes(Family::Random, "10:4, 12:5").unwrap(),
            vec![
                SizeSpec { n: 10, pattern: PatternShape::Len(4) },
                SizeSpec { n: 12, pattern: PatternShape::Len(5) },
            ]
        );
        assert_eq!(
            parse_sizes(Family::Grid, "64:4x4").unwrap()[0].pattern,
            PatternShape::Grid(4, 4)
        );
        assert!(parse_sizes(Family::Grid, "64:16").is_err());
        assert!(parse_sizes(Family::Random, "10").is_err());
        assert!(parse_sizes(Family::Random, "").unwrap().is_empty());
    }

    #[test]
    fn instances_are_seeded() {
        let sizes = parse_sizes(Family::Random, "10:4,12:5").unwrap();
        let a = instances(Family::Random, &sizes, 3, 7).unwrap();
        assert_eq!(a.len(), 6);
        assert_eq!(a, instances(Family::Random, &sizes, 3, 7).unwrap());
        assert_eq!(a.iter().map(|i| i.seed).collect::<Vec<_>>(), (7..13).collect::<Vec<_>>());
        assert_eq!(a[4].text.len(), 12);
        assert_eq!(a[4].pattern.len(), 5);
    }
}
