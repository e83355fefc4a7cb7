//! MIP vs brute force on random incomplete weak tournaments.

use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::incomplete::{query_action, QueryMode, QueryOptions, QueryStats};
use crate::matrix::Action;
use crate::mip::{mip_possible_es, MipQueryOptions};
use crate::reductions::random_incomplete_weak_tournament;

/// How many pairs are left unspecified for a given `n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UnspecifiedRule {
    /// `⌈n/2⌉`
    Half,
    /// `n`
    Full,
}

impl UnspecifiedRule {
    pub fn count(self, n: usize) -> usize {
        match self {
            UnspecifiedRule::Half => n.div_ceil(2),
            UnspecifiedRule::Full => n,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Brute,
    Mip,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::Brute => "brute",
            Method::Mip => "mip",
        }
    }
}

#[derive(Debug, Clone)]
pub struct BenchConfig {
    pub sizes: Vec<usize>,
    pub rule: UnspecifiedRule,
    pub trials: usize,
    pub timeout: Duration,
    /// A method stops escalating after a size whose mean wall time exceeds this.
    /// Defaults to `timeout`.
    pub cutoff: Option<Duration>,
    pub base_seed: u64,
    pub methods: Vec<Method>,
    /// Run the trials of one size on the rayon pool.
    pub parallel: bool,
}

impl Default for BenchConfig {
    fn default() -> Self {
        BenchConfig {
            sizes: (4..=16).collect(),
            rule: UnspecifiedRule::Full,
            trials: 100,
            timeout: Duration::from_secs(10),
            cutoff: None,
            base_seed: 0,
            methods: vec![Method::Brute, Method::Mip],
            parallel: false,
        }
    }
}

impl BenchConfig {
    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::input("trials must be at least 1"));
        }
        if self.timeout.is_zero() {
            return Err(Error::input("timeout must be positive"));
        }
        if self.methods.is_empty() {
            return Err(Error::input("at least one method is required"));
        }
        if let Some(&n) = self.sizes.iter().find(|&&n| n < 2) {
            return Err(Error::input(format!("size {n} is too small; need n >= 2")));
        }
        Ok(())
    }
}

/// One timed run; a CSV row.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrialRecord {
    pub n: usize,
    pub unspecified: usize,
    pub method: Method,
    pub trial: usize,
    pub seed: u64,
    /// Empty when the run timed out.
    pub answer: Option<bool>,
    pub wall_ms: f64,
    pub completions: Option<u64>,
    pub lp_solves: Option<u64>,
    pub bnb_nodes: Option<u64>,
    pub timed_out: bool,
}

/// Aggregate over the trials of one `(n, method)` cell.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SummaryRow {
    pub n: usize,
    pub unspecified: usize,
    pub method: Method,
    pub trials: usize,
    pub solved: usize,
    pub timeouts: usize,
    /// Timed-out runs count at their measured wall time, which is at least the timeout.
    pub mean_ms: f64,
    pub median_ms: f64,
    /// Means over the solved runs.
    pub mean_completions: f64,
    pub mean_lp_solves: f64,
    pub mean_bnb_nodes: f64,
}

#[derive(Debug, Clone, Default)]
pub struct BenchReport {
    pub records: Vec<TrialRecord>,
    pub summary: Vec<SummaryRow>,
    /// `(method, n)`: the size after which the method was dropped.
    pub cut_off: Vec<(Method, usize)>,
}

impl BenchReport {
    pub fn records_csv(&self) -> Result<String> {
        to_csv(&self.records)
    }

    pub fn summary_csv(&self) -> Result<String> {
        to_csv(&self.summary)
    }
}

fn to_csv<T: Serialize>(rows: &[T]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r).map_err(|e| Error::input(format!("csv: {e}")))?;
    }
    let bytes = w.into_inner().map_err(|e| Error::input(format!("csv: {e}")))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

/// The queried vertex for `seed`, drawn from a stream separate from the instance's.
pub fn query_vertex(n: usize, seed: u64) -> usize {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(1);
    rng.gen_range(0..n)
}

fn run_method(method: Method, n: usize, u: usize, trial: usize, seed: u64, timeout: Duration) -> Result<TrialRecord> {
    let w = random_incomplete_weak_tournament(n, u, seed)?;
    let k = query_vertex(n, seed);
    let start = Instant::now();
    let outcome: Result<(bool, QueryStats)> = match method {
        Method::Brute => {
            let opts = QueryOptions {
                force: true,
                ..QueryOptions::with_timeout(timeout)
            };
            query_action(&w.to_incomplete_game(), Action::Row(k), QueryMode::Possible, &opts).map(|r| (r.answer, r.stats))
        }
        Method::Mip => mip_possible_es(&w, k, &MipQueryOptions::with_timeout(timeout)).map(|r| (r.query.answer, r.query.stats)),
    };
    let wall_ms = start.elapsed().as_secs_f64() * 1e3;
    let mut rec = TrialRecord {
        n,
        unspecified: u,
        method,
        trial,
        seed,
        answer: None,
        wall_ms,
        completions: None,
        lp_solves: None,
        bnb_nodes: None,
        timed_out: false,
    };
    match outcome {
        Ok((answer, stats)) => {
            rec.answer = Some(answer);
            rec.completions = Some(stats.completions);
            rec.lp_solves = Some(stats.lp_solves);
            rec.bnb_nodes = Some(stats.bnb_nodes);
        }
        Err(Error::Timeout) => rec.timed_out = true,
        Err(e) => return Err(e),
    }
    Ok(rec)
}

/// Brute force examines at most `3^u` completions, and all of them on a "no" answer.
fn check_ceiling(rec: &TrialRecord) -> Result<()> {
    let (Some(answer), Some(seen)) = (rec.answer, rec.completions) else {
        return Ok(());
    };
    let ceiling = 3u64.pow(rec.unspecified as u32);
    if seen > ceiling || (!answer && seen != ceiling) {
        return Err(Error::Invariant(format!(
            "brute force examined {seen} completions on n = {}, seed {} (u = {}, 3^u = {ceiling}, answer {answer})",
            rec.n, rec.seed, rec.unspecified
        )));
    }
    Ok(())
}

fn check_agreement(records: &[TrialRecord]) -> Result<()> {
    for a in records {
        for b in records {
            if a.trial == b.trial && a.method < b.method {
                if let (Some(x), Some(y)) = (a.answer, b.answer) {
                    if x != y {
                        return Err(Error::Invariant(format!(
                            "methods disagree on n = {}, seed {}: {} says {x}, {} says {y}",
                            a.n,
                            a.seed,
                            a.method.name(),
                            b.method.name()
                        )));
                    }
                }
            }
        }
    }
    Ok(())
}

fn median(xs: &mut [f64]) -> f64 {
    xs.sort_by(f64::total_cmp);
    let m = xs.len();
    if m == 0 {
        0.0
    } else if m % 2 == 1 {
        xs[m / 2]
    } else {
        (xs[m / 2 - 1] + xs[m / 2]) / 2.0
    }
}

fn mean(xs: impl Iterator<Item = f64>) -> f64 {
    let (s, c) = xs.fold((0.0, 0usize), |(s, c), x| (s + x, c + 1));
    if c == 0 {
        0.0
    } else {
        s / c as f64
    }
}

fn summarize(n: usize, u: usize, method: Method, recs: &[&TrialRecord]) -> SummaryRow {
    let solved: Vec<&&TrialRecord> = recs.iter().filter(|r| !r.timed_out).collect();
    let mut walls: Vec<f64> = recs.iter().map(|r| r.wall_ms).collect();
    let field = |f: fn(&TrialRecord) -> Option<u64>| mean(solved.iter().filter_map(|r| f(r)).map(|x| x as f64));
    SummaryRow {
        n,
        unspecified: u,
        method,
        trials: recs.len(),
        solved: solved.len(),
        timeouts: recs.len() - solved.len(),
        mean_ms: mean(walls.iter().copied()),
        median_ms: median(&mut walls),
        mean_completions: field(|r| r.completions),
        mean_lp_solves: field(|r| r.lp_solves),
        mean_bnb_nodes: field(|r| r.bnb_nodes),
    }
}

/// Runs every active method on `trials` instances per size, seeds `base_seed + trial`.
///
/// Fails when the methods disagree on an instance or a brute-force completion count
/// breaks the `3^u` ceiling.
pub fn run_benchmark(cfg: &BenchConfig) -> Result<BenchReport> {
    cfg.validate()?;
    let cutoff_ms = cfg.cutoff.unwrap_or(cfg.timeout).as_secs_f64() * 1e3;
    let mut active: Vec<Method> = cfg.methods.clone();
    active.sort();
    active.dedup();
    let mut report = BenchReport::default();
    for &n in &cfg.sizes {
        if active.is_empty() {
            break;
        }
        let u = cfg.rule.count(n);
        let jobs: Vec<(usize, Method)> = (0..cfg.trials).flat_map(|t| active.iter().map(move |&m| (t, m))).collect();
        let run = |&(t, m): &(usize, Method)| run_method(m, n, u, t, cfg.base_seed + t as u64, cfg.timeout);
        let records: Vec<TrialRecord> = if cfg.parallel {
            jobs.par_iter().map(run).collect::<Result<_>>()?
        } else {
            jobs.iter().map(run).collect::<Result<_>>()?
        };
        for r in records.iter().filter(|r| r.method == Method::Brute) {
            check_ceiling(r)?;
        }
        check_agreement(&records)?;
        let mut still = Vec::new();
        for &m in &active {
            let recs: Vec<&TrialRecord> = records.iter().filter(|r| r.method == m).collect();
            let row = summarize(n, u, m, &recs);
            if row.mean_ms > cutoff_ms {
                report.cut_off.push((m, n));
            } else {
                still.push(m);
            }
            report.summary.push(row);
        }
        active = still;
        report.records.extend(records);
    }
    Ok(report)
}
