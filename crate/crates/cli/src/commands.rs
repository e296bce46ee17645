use std::fs;
use std::path::Path;
use std::time::Instant;

use alpfeas_core::oracle::{oracle_feasible, OracleOptions};
use alpfeas_core::parser::{parse_system, render_alp};
use alpfeas_core::reduce::{
    augment_nontrivial, decide_bundle, reduce, DecideOptions, ReductionBundle,
};
use alpfeas_core::{Error, LinearSystem, SolverOptions, Status};
use thiserror::Error as ThisError;

use crate::report::{
    error_kind, point_json, CaseJson, CheckReport, Manifest, ManifestCase, OracleCheck,
    OracleReport,
};

pub const EXIT_FEASIBLE: i32 = 0;
pub const EXIT_INFEASIBLE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_LIMIT: i32 = 3;

#[derive(Debug, ThisError)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("{0}")]
    Core(#[from] Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Io { .. } => EXIT_USAGE,
            CliError::Core(e) => match e {
                Error::Parse(_)
                | Error::Model(_)
                | Error::UnknownVariable(_)
                | Error::DuplicateVariable(_)
                | Error::ParametricSystem
                | Error::Misuse(_) => EXIT_USAGE,
                Error::Numeric(_)
                | Error::PivotLimit { .. }
                | Error::Unbounded
                | Error::WitnessExhausted { .. }
                | Error::UnverifiedReduction { .. }
                | Error::OracleCap { .. } => EXIT_LIMIT,
            },
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Usage(_) => "usage",
            CliError::Io { .. } => "io",
            CliError::Core(e) => error_kind(e),
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;

#[derive(Clone, Debug)]
pub struct RunOptions {
    pub jobs: usize,
    pub oracle_cap: usize,
    pub solver: SolverOptions,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions {
            jobs: 1,
            oracle_cap: alpfeas_core::oracle::DEFAULT_ORACLE_CAP,
            solver: SolverOptions::from_env(),
        }
    }
}

impl RunOptions {
    fn decide(&self) -> DecideOptions {
        DecideOptions {
            solver: self.solver.clone(),
            jobs: self.jobs,
        }
    }

    fn oracle(&self) -> OracleOptions {
        OracleOptions {
            cap: self.oracle_cap,
            jobs: self.jobs,
            solver: self.solver.clone(),
        }
    }
}

pub fn load_system(path: &Path) -> CliResult<LinearSystem> {
    let text = fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse_system(&text)
        .map_err(|e| CliError::Usage(format!("{}:{}: {}", path.display(), e.span, e.kind)))
}

pub fn status_exit(status: Status) -> i32 {
    match status {
        Status::Feasible => EXIT_FEASIBLE,
        Status::Infeasible => EXIT_INFEASIBLE,
    }
}

pub fn case_file_name(index: usize) -> String {
    format!("case_{index:04}.alp")
}

/// Writes `case_0001.alp`, ... and `manifest.json` into `dir`.
pub fn emit_bundle(bundle: &ReductionBundle, dir: &Path) -> CliResult<Manifest> {
    let io = |source| CliError::Io {
        path: dir.display().to_string(),
        source,
    };
    fs::create_dir_all(dir).map_err(io)?;
    let mut cases = Vec::with_capacity(bundle.alps.len());
    for (i, alp) in bundle.alps.iter().enumerate() {
        let file = case_file_name(i + 1);
        fs::write(dir.join(&file), render_alp(alp)).map_err(io)?;
        cases.push(ManifestCase {
            index: i + 1,
            file,
            case: CaseJson::from(&alp.case),
            rows: alp.rows.len(),
            variables: alp.variables.clone(),
        });
    }
    let manifest = Manifest {
        counts: bundle.original.counts().into(),
        original_variables: bundle.original.variables().to_vec(),
        alp_count: bundle.alps.len(),
        cases,
    };
    let json = serde_json::to_string_pretty(&manifest).expect("manifest serializes");
    fs::write(dir.join("manifest.json"), json + "\n").map_err(io)?;
    Ok(manifest)
}

fn cross_check(system: &LinearSystem, status: Status, opts: &RunOptions) -> OracleCheck {
    match oracle_feasible(system, &opts.oracle()) {
        Ok(v) => OracleCheck {
            verdict: Some(v.status.as_str().into()),
            agrees: Some(v.status == status),
            error: None,
        },
        Err(e) => OracleCheck {
            verdict: None,
            agrees: None,
            error: Some(e.to_string()),
        },
    }
}

/// Reduces, optionally emits the bundle, and decides.
pub fn check(
    system: &LinearSystem,
    opts: &RunOptions,
    with_oracle: bool,
    emit: Option<&Path>,
) -> CliResult<CheckReport> {
    let start = Instant::now();
    let bundle = reduce(system)?;
    if let Some(dir) = emit {
        emit_bundle(&bundle, dir)?;
    }
    let verdict = decide_bundle(&bundle, &opts.decide())?;
    let elapsed = start.elapsed().as_secs_f64() * 1e3;
    let mut report =
        CheckReport::from_verdict(&verdict, system.counts(), bundle.alps.len(), elapsed);
    if with_oracle {
        report.oracle = Some(cross_check(system, verdict.status, opts));
    }
    Ok(report)
}

pub fn nontrivial(
    system: &LinearSystem,
    vars: &[String],
    opts: &RunOptions,
    with_oracle: bool,
) -> CliResult<CheckReport> {
    let augmented = augment_nontrivial(system, vars)?;
    let mut report = check(&augmented, opts, false, None)?;
    report.augmented_constraints = Some(augmented.constraints().len());
    if with_oracle {
        // The augmented rows depend on K; the oracle needs the plain form,
        // so it checks the system with each listed variable required nonzero
        // in turn.
        report.oracle = Some(nontrivial_oracle(
            system,
            vars,
            report.verdict == "feasible",
            opts,
        ));
    }
    Ok(report)
}

fn nontrivial_oracle(
    system: &LinearSystem,
    vars: &[String],
    feasible: bool,
    opts: &RunOptions,
) -> OracleCheck {
    let mut any = false;
    for v in vars {
        let mut rows = system.constraints().to_vec();
        rows.push(alpfeas_core::Constraint::linear(
            [(v.as_str(), alpfeas_core::numeric::int(1))],
            alpfeas_core::Relop::Ne,
            alpfeas_core::numeric::int(0),
        ));
        let s = match LinearSystem::new(system.variables().to_vec(), rows) {
            Ok(s) => s,
            Err(e) => {
                return OracleCheck {
                    verdict: None,
                    agrees: None,
                    error: Some(e.to_string()),
                }
            }
        };
        match oracle_feasible(&s, &opts.oracle()) {
            Ok(o) if o.is_feasible() => {
                any = true;
                break;
            }
            Ok(_) => {}
            Err(e) => {
                return OracleCheck {
                    verdict: None,
                    agrees: None,
                    error: Some(e.to_string()),
                }
            }
        }
    }
    let status = if any {
        Status::Feasible
    } else {
        Status::Infeasible
    };
    OracleCheck {
        verdict: Some(status.as_str().into()),
        agrees: Some(any == feasible),
        error: None,
    }
}

pub fn oracle(system: &LinearSystem, opts: &RunOptions) -> CliResult<OracleReport> {
    let start = Instant::now();
    let v = oracle_feasible(system, &opts.oracle())?;
    let counts = system.counts();
    Ok(OracleReport {
        verdict: v.status.as_str().into(),
        witness: v.witness.as_ref().map(|w| point_json(&w.point)),
        oracle_cases: 1u64 << counts.r,
        counts: counts.into(),
        timing_ms: start.elapsed().as_secs_f64() * 1e3,
    })
}

pub fn human_check(report: &CheckReport) -> String {
    let mut out = report.verdict.clone();
    if let Some(k0) = &report.k0 {
        out += &format!(" (K = {k0})");
    }
    out.push('\n');
    if let Some(w) = &report.witness {
        for (v, x) in w {
            out += &format!("  {v} = {x}\n");
        }
    }
    if let Some(o) = &report.oracle {
        match (&o.verdict, o.agrees) {
            (Some(v), Some(a)) => {
                out += &format!("oracle: {v} ({})\n", if a { "agrees" } else { "DISAGREES" })
            }
            _ => out += &format!("oracle: {}\n", o.error.as_deref().unwrap_or("unavailable")),
        }
    }
    out
}
