//! Seeded comparison of the reduction against the sign-enumeration oracle.
//! The CSV holds only deterministic fields; timings go to the summary.

use std::fmt::Write;
use std::time::Instant;

use alpfeas_core::gen::{random_batch, GenConfig};
use alpfeas_core::oracle::oracle_feasible;
use alpfeas_core::reduce::{decide_bundle, reduce};
use alpfeas_core::{LinearSystem, Status};
use rayon::prelude::*;
use serde::Serialize;

use crate::commands::RunOptions;
use crate::report::error_kind;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BenchConfig {
    pub seed: u64,
    pub count: usize,
    pub max_vars: usize,
    pub max_ne: usize,
}

impl Default for BenchConfig {
    fn default() -> Self {
        BenchConfig {
            seed: 42,
            count: 100,
            max_vars: 4,
            max_ne: 3,
        }
    }
}

#[derive(Clone, Debug)]
pub struct InstanceResult {
    pub index: usize,
    pub counts: alpfeas_core::Counts,
    pub alp_count: usize,
    pub oracle_cases: u64,
    pub reduction: Result<Status, &'static str>,
    pub oracle: Result<Status, &'static str>,
    pub reduction_ms: f64,
    pub oracle_ms: f64,
}

impl InstanceResult {
    pub fn agrees(&self) -> bool {
        matches!((&self.reduction, &self.oracle), (Ok(a), Ok(b)) if a == b)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct BenchSummary {
    pub seed: u64,
    pub count: usize,
    pub max_vars: usize,
    pub max_ne: usize,
    pub jobs: usize,
    pub agreement: String,
    pub agreed: usize,
    pub reduction_errors: usize,
    pub oracle_errors: usize,
    pub total_alps: usize,
    pub total_oracle_cases: u64,
    pub reduction_ms: f64,
    pub oracle_ms: f64,
    pub wall_ms: f64,
}

pub fn gen_config(cfg: &BenchConfig) -> GenConfig {
    GenConfig {
        max_vars: cfg.max_vars,
        max_ne: cfg.max_ne,
        ..GenConfig::default()
    }
}

fn run_instance(index: usize, system: &LinearSystem, opts: &RunOptions) -> InstanceResult {
    let counts = system.counts();
    let start = Instant::now();
    let (alp_count, reduction) = match reduce(system) {
        Ok(bundle) => (
            bundle.alps.len(),
            decide_bundle(
                &bundle,
                &alpfeas_core::DecideOptions {
                    solver: opts.solver.clone(),
                    jobs: 1,
                },
            )
            .map(|v| v.status)
            .map_err(|e| error_kind(&e)),
        ),
        Err(e) => (0, Err(error_kind(&e))),
    };
    let reduction_ms = start.elapsed().as_secs_f64() * 1e3;
    let start = Instant::now();
    let oracle = oracle_feasible(
        system,
        &alpfeas_core::OracleOptions {
            cap: opts.oracle_cap,
            jobs: 1,
            solver: opts.solver.clone(),
        },
    )
    .map(|v| v.status)
    .map_err(|e| error_kind(&e));
    let oracle_ms = start.elapsed().as_secs_f64() * 1e3;
    InstanceResult {
        index,
        counts,
        alp_count,
        oracle_cases: 1u64.checked_shl(counts.r as u32).unwrap_or(u64::MAX),
        reduction,
        oracle,
        reduction_ms,
        oracle_ms,
    }
}

/// Runs every instance; `opts.jobs > 1` spreads instances over threads.
/// Results come back in instance order either way.
pub fn run(cfg: &BenchConfig, opts: &RunOptions) -> Vec<InstanceResult> {
    let systems = random_batch(cfg.seed, cfg.count, &gen_config(cfg));
    if opts.jobs <= 1 {
        return systems
            .iter()
            .enumerate()
            .map(|(i, s)| run_instance(i + 1, s, opts))
            .collect();
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(opts.jobs)
        .build()
        .expect("thread pool");
    pool.install(|| {
        systems
            .par_iter()
            .enumerate()
            .map(|(i, s)| run_instance(i + 1, s, opts))
            .collect()
    })
}

fn outcome(r: &Result<Status, &'static str>) -> (&'static str, &'static str) {
    match r {
        Ok(s) => (s.as_str(), ""),
        Err(e) => ("error", e),
    }
}

pub const CSV_HEADER: &str =
    "instance,n,p,q,r,eq,alp_count,oracle_cases,reduction,oracle,agree,reduction_error,oracle_error";

pub fn to_csv(results: &[InstanceResult]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in results {
        let (red, red_err) = outcome(&r.reduction);
        let (orc, orc_err) = outcome(&r.oracle);
        let c = r.counts;
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{},{},{},{}",
            r.index,
            c.n,
            c.p,
            c.q,
            c.r,
            c.eq,
            r.alp_count,
            r.oracle_cases,
            red,
            orc,
            r.agrees(),
            red_err,
            orc_err
        );
    }
    out
}

pub fn summarize(
    cfg: &BenchConfig,
    jobs: usize,
    results: &[InstanceResult],
    wall_ms: f64,
) -> BenchSummary {
    let agreed = results.iter().filter(|r| r.agrees()).count();
    BenchSummary {
        seed: cfg.seed,
        count: cfg.count,
        max_vars: cfg.max_vars,
        max_ne: cfg.max_ne,
        jobs,
        agreement: format!("{agreed}/{}", results.len()),
        agreed,
        reduction_errors: results.iter().filter(|r| r.reduction.is_err()).count(),
        oracle_errors: results.iter().filter(|r| r.oracle.is_err()).count(),
        total_alps: results.iter().map(|r| r.alp_count).sum(),
        total_oracle_cases: results.iter().map(|r| r.oracle_cases).sum(),
        reduction_ms: results.iter().map(|r| r.reduction_ms).sum(),
        oracle_ms: results.iter().map(|r| r.oracle_ms).sum(),
        wall_ms,
    }
}
