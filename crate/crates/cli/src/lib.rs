//! Command-line front end for `alpfeas`.
//!
//! Exit codes: 0 feasible, 1 infeasible, 2 usage or parse error, 3 internal
//! limit (pivot bound, inconclusive reduction, oracle cap).

pub mod bench;
pub mod commands;
pub mod report;
pub mod selftest;

use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use crate::commands::{CliError, CliResult, RunOptions, EXIT_USAGE};
use crate::report::ErrorReport;

#[derive(Debug, Parser)]
#[command(
    name = "alpfeas",
    version,
    about = "Exact feasibility of linear systems with <, <=, = and != rows"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args, Clone)]
pub struct Common {
    /// Worker threads for evaluating cases.
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
    pub jobs: u64,
    /// Largest number of `!=` rows the oracle will split (it solves 2^R LPs).
    #[arg(long = "max-cases", default_value_t = alpfeas_core::oracle::DEFAULT_ORACLE_CAP)]
    pub max_cases: usize,
    /// Print a JSON report instead of text.
    #[arg(long)]
    pub json: bool,
}

impl Common {
    fn options(&self) -> RunOptions {
        RunOptions {
            jobs: self.jobs as usize,
            oracle_cap: self.max_cases,
            ..RunOptions::default()
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Decide feasibility through the asymptotic-LP reduction.
    Check {
        path: PathBuf,
        /// Also run the sign-enumeration oracle and report agreement.
        #[arg(long)]
        oracle: bool,
        /// Write the generated ALPs and a manifest into this directory.
        #[arg(long = "emit-alps", value_name = "DIR")]
        emit_alps: Option<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
    /// Write one `.alp` file per case plus `manifest.json`.
    Reduce { path: PathBuf, out_dir: PathBuf },
    /// Decide feasibility by enumerating the signs of every `!=` row.
    Oracle {
        path: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Decide whether some listed variable can be nonzero.
    Nontrivial {
        path: PathBuf,
        /// Comma-separated variable names.
        #[arg(long, value_delimiter = ',', required = true)]
        vars: Vec<String>,
        #[arg(long)]
        oracle: bool,
        #[command(flatten)]
        common: Common,
    },
    /// Compare the reduction with the oracle on seeded random systems.
    Bench {
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        count: usize,
        #[arg(long = "max-vars", default_value_t = 4, value_parser = clap::value_parser!(u64).range(1..))]
        max_vars: u64,
        #[arg(long = "max-ne", default_value_t = 3)]
        max_ne: usize,
        /// Write `bench.csv` and `summary.json` here instead of printing
        /// the CSV on stdout and the summary on stderr.
        #[arg(long = "out", value_name = "DIR")]
        out: Option<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
    /// Run the built-in invariant checks.
    Selftest,
}

fn print_json<T: Serialize>(out: &mut dyn Write, value: &T) {
    let _ = writeln!(
        out,
        "{}",
        serde_json::to_string_pretty(value).expect("report serializes")
    );
}

fn report_error(out: &mut dyn Write, err: &mut dyn Write, e: &CliError, json: bool) -> i32 {
    if json {
        print_json(
            out,
            &ErrorReport {
                error: e.kind().into(),
                message: e.to_string(),
            },
        );
    }
    let _ = writeln!(err, "alpfeas: {e}");
    e.exit_code()
}

fn io_err(path: &Path) -> impl Fn(std::io::Error) -> CliError + '_ {
    move |source| CliError::Io {
        path: path.display().to_string(),
        source,
    }
}

/// Runs one command, writing reports to `out` and diagnostics to `err`, and
/// returns the process exit code.
pub fn run(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    match cli.command {
        Command::Check {
            path,
            oracle,
            emit_alps,
            common,
        } => {
            let result = commands::load_system(&path)
                .and_then(|s| commands::check(&s, &common.options(), oracle, emit_alps.as_deref()));
            finish_check(result, &common, out, err)
        }
        Command::Nontrivial {
            path,
            vars,
            oracle,
            common,
        } => {
            let result = commands::load_system(&path)
                .and_then(|s| commands::nontrivial(&s, &vars, &common.options(), oracle));
            finish_check(result, &common, out, err)
        }
        Command::Oracle { path, common } => {
            match commands::load_system(&path).and_then(|s| commands::oracle(&s, &common.options()))
            {
                Ok(report) => {
                    if common.json {
                        print_json(out, &report);
                    } else {
                        let _ = writeln!(out, "{}", report.verdict);
                        for (v, x) in report.witness.iter().flatten() {
                            let _ = writeln!(out, "  {v} = {x}");
                        }
                    }
                    if report.verdict == "feasible" {
                        commands::EXIT_FEASIBLE
                    } else {
                        commands::EXIT_INFEASIBLE
                    }
                }
                Err(e) => report_error(out, err, &e, common.json),
            }
        }
        Command::Reduce { path, out_dir } => {
            let result = commands::load_system(&path).and_then(|s| {
                let bundle = alpfeas_core::reduce(&s)?;
                commands::emit_bundle(&bundle, &out_dir)
            });
            match result {
                Ok(manifest) => {
                    let _ = writeln!(
                        out,
                        "wrote {} ALPs to {}",
                        manifest.alp_count,
                        out_dir.display()
                    );
                    0
                }
                Err(e) => report_error(out, err, &e, false),
            }
        }
        Command::Bench {
            seed,
            count,
            max_vars,
            max_ne,
            out: dir,
            common,
        } => {
            let cfg = bench::BenchConfig {
                seed,
                count,
                max_vars: max_vars as usize,
                max_ne,
            };
            let start = Instant::now();
            let results = bench::run(&cfg, &common.options());
            let summary = bench::summarize(
                &cfg,
                common.jobs as usize,
                &results,
                start.elapsed().as_secs_f64() * 1e3,
            );
            let csv = bench::to_csv(&results);
            let summary_json =
                serde_json::to_string_pretty(&summary).expect("summary serializes") + "\n";
            match dir {
                Some(dir) => {
                    let written = std::fs::create_dir_all(&dir)
                        .and_then(|_| std::fs::write(dir.join("bench.csv"), &csv))
                        .and_then(|_| std::fs::write(dir.join("summary.json"), &summary_json))
                        .map_err(io_err(&dir));
                    if let Err(e) = written {
                        return report_error(out, err, &e, false);
                    }
                    let _ = writeln!(out, "agreement {}", summary.agreement);
                }
                None => {
                    let _ = out.write_all(csv.as_bytes());
                    let _ = err.write_all(summary_json.as_bytes());
                }
            }
            0
        }
        Command::Selftest => {
            let rows = selftest::run_all();
            let _ = out.write_all(selftest::render_table(&rows).as_bytes());
            if rows.iter().all(|r| r.passed) {
                0
            } else {
                1
            }
        }
    }
}

fn finish_check(
    result: CliResult<report::CheckReport>,
    common: &Common,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> i32 {
    match result {
        Ok(report) => {
            if common.json {
                print_json(out, &report);
            } else {
                let _ = out.write_all(commands::human_check(&report).as_bytes());
            }
            if report.verdict == "feasible" {
                commands::EXIT_FEASIBLE
            } else {
                commands::EXIT_INFEASIBLE
            }
        }
        Err(e) => report_error(out, err, &e, common.json),
    }
}

/// Parses `args` and runs; clap's own errors exit with code 2.
pub fn main_with<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => run(cli, out, err),
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 {
                out.write_all(text.as_bytes())
            } else {
                err.write_all(text.as_bytes())
            };
            code
        }
    }
}
