//! Acceptance suite: one PASS/FAIL line per criterion. Exits nonzero if
//! any criterion fails.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;
use std::time::{Duration, Instant};

use alpfeas_cli::selftest::{cofactor_det, tally_rows, worked_example_case, WORKED_EXAMPLE};
use alpfeas_core::gen::{random_batch, GenConfig};
use alpfeas_core::numeric::{frac, int};
use alpfeas_core::reduce::{decide_bundle, gadget_matrix_det, offset_sums, reduce};
use alpfeas_core::{
    alp_feasible, fixed_k_feasible, oracle_feasible, parse_alp, parse_system,
    steady_state_threshold, AlpProblem, DecideOptions, Error, LinearSystem, OracleOptions,
    Rational, SolverOptions, Verdict,
};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const SEED: u64 = 42;
const INSTANCES: usize = 500;
const STEADY_SAMPLES: usize = 50;

struct Outcome {
    passed: bool,
    detail: String,
}

fn cli(args: &[&str]) -> (i32, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let mut argv = vec!["alpfeas"];
    argv.extend_from_slice(args);
    let code = alpfeas_cli::main_with(argv, &mut out, &mut err);
    (code, String::from_utf8(out).expect("utf-8 output"))
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    fs::write(&path, text).expect("write input");
    path.display().to_string()
}

/// Feasible verdicts collected for the witness criterion.
#[derive(Default)]
struct Witnesses {
    checked: usize,
    violations: Vec<String>,
}

impl Witnesses {
    fn record(&mut self, label: &str, system: &LinearSystem, verdict: &Verdict) {
        if let Some(w) = &verdict.witness {
            self.checked += 1;
            if let Err(v) = system.check_point(&w.point, &w.k0) {
                self.violations.push(format!("{label}: {v:?}"));
            }
        }
    }
}

fn worked_example_shape(witnesses: &mut Witnesses) -> Outcome {
    let start = Instant::now();
    let dir = tempfile::tempdir().expect("temp dir");
    let input = write(dir.path(), "worked.lsys", WORKED_EXAMPLE);
    let out_dir = dir.path().join("alps");
    let (code, _) = cli(&["reduce", &input, out_dir.to_str().unwrap()]);
    let files: Vec<String> = fs::read_dir(&out_dir)
        .map(|rd| {
            rd.filter_map(|e| e.ok())
                .map(|e| e.file_name().to_string_lossy().into_owned())
                .filter(|n| n.ends_with(".alp"))
                .collect()
        })
        .unwrap_or_default();
    let target = worked_example_case();
    let alps: Vec<AlpProblem> = files
        .iter()
        .filter_map(|f| fs::read_to_string(out_dir.join(f)).ok())
        .filter_map(|t| parse_alp(&t).ok())
        .collect();
    let tally = alps.iter().find(|a| a.case == target).map(tally_rows);
    let system = parse_system(WORKED_EXAMPLE).unwrap();
    if let Ok(v) = decide_bundle(&reduce(&system).unwrap(), &DecideOptions::default()) {
        witnesses.record("worked example", &system, &v);
    }
    let elapsed = start.elapsed();
    let shape_ok = tally.as_ref().is_some_and(|t| t.matches_worked_example());
    Outcome {
        passed: code == 0
            && files.len() == 12
            && alps.len() == 12
            && shape_ok
            && elapsed < Duration::from_secs(1),
        detail: format!(
            "{} ALP files, case {target}: {} rows ({:?}), {:.0} ms",
            files.len(),
            tally.as_ref().map_or(0, |t| t.total()),
            tally,
            elapsed.as_secs_f64() * 1e3
        ),
    }
}

struct RandomRun {
    systems: Vec<LinearSystem>,
    outcome: Outcome,
}

fn oracle_equivalence(witnesses: &mut Witnesses) -> RandomRun {
    let start = Instant::now();
    let systems = random_batch(SEED, INSTANCES, &GenConfig::default());
    let mut agreed = 0;
    let mut failures = Vec::new();
    for (i, s) in systems.iter().enumerate() {
        let oracle = oracle_feasible(s, &OracleOptions::default());
        let decided = reduce(s).and_then(|b| decide_bundle(&b, &DecideOptions::default()));
        match (&decided, &oracle) {
            (Ok(d), Ok(o)) if d.status == o.status => agreed += 1,
            (Ok(d), Ok(o)) => failures.push(format!(
                "#{} reduction {} vs oracle {}",
                i + 1,
                d.status.as_str(),
                o.status.as_str()
            )),
            (Err(Error::UnverifiedReduction { cases }), Ok(o)) => failures.push(format!(
                "#{} (R={}, oracle {}): {} case ALP(s) feasible with no witness satisfying the input, first {}",
                i + 1,
                s.counts().r,
                o.status.as_str(),
                cases.len(),
                cases[0]
            )),
            (d, o) => failures.push(format!("#{}: {:?} / {:?}", i + 1, d.as_ref().err(), o.as_ref().err())),
        }
        if let Ok(d) = &decided {
            witnesses.record(&format!("instance {}", i + 1), s, d);
        }
    }
    let elapsed = start.elapsed();
    let mut detail = format!("{agreed}/{INSTANCES} agree, {:.1} s", elapsed.as_secs_f64());
    for f in &failures {
        detail += &format!("\n      {f}");
    }
    RandomRun {
        systems,
        outcome: Outcome {
            passed: agreed == INSTANCES && elapsed <= Duration::from_secs(120),
            detail,
        },
    }
}

/// Plain Gaussian elimination over rationals with row swaps.
fn gauss_det(n: usize) -> Rational {
    let mut m: Vec<Vec<Rational>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { int(0) } else { int(1) })
                .collect()
        })
        .collect();
    let mut det = int(1);
    for k in 0..n {
        let Some(p) = (k..n).find(|&i| m[i][k] != int(0)) else {
            return int(0);
        };
        if p != k {
            m.swap(p, k);
            det = -det;
        }
        det *= &m[k][k];
        let (top, rest) = m.split_at_mut(k + 1);
        let pivot = &top[k];
        for row in rest {
            let f = &row[k] / &pivot[k];
            for (v, p) in row.iter_mut().zip(pivot).skip(k) {
                *v -= &f * p;
            }
        }
    }
    det
}

fn determinant_values() -> Outcome {
    let mut ok = true;
    let mut values = Vec::new();
    for n in 2..=8usize {
        let closed = (n as i64 - 1) * if n % 2 == 0 { -1 } else { 1 };
        let matrix: Vec<Vec<i64>> = (0..n)
            .map(|i| (0..n).map(|j| i64::from(i != j)).collect())
            .collect();
        let got = gadget_matrix_det(n);
        let good = matches!(&got, Ok(d) if *d != int(0)
            && *d == int(closed)
            && *d == gauss_det(n)
            && *d == int(cofactor_det(&matrix)));
        ok &= good;
        values.push(format!(
            "N={n}:{}",
            got.map_or_else(|e| e.to_string(), |d| d.to_string())
        ));
    }
    Outcome {
        passed: ok,
        detail: values.join(" "),
    }
}

fn offset_sum_suite() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut trials = 0;
    let mut failures = 0;
    let mut single = 0;
    for n in 2..=6usize {
        for _ in 0..200 {
            let z: Vec<Rational> = (0..n)
                .map(|_| {
                    if rng.gen_bool(0.5) {
                        int(0)
                    } else {
                        let num = loop {
                            let v = rng.gen_range(-9..=9);
                            if v != 0 {
                                break v;
                            }
                        };
                        frac(num, rng.gen_range(1..=7))
                    }
                })
                .collect();
            let nonzero_z = z.iter().filter(|v| **v != int(0)).count();
            let y = offset_sums(&z);
            let nonzero_y = y.iter().filter(|f| !f.is_zero()).count();
            let mut ok = (nonzero_z >= 2) == (nonzero_y == n);
            if nonzero_z == 1 {
                single += 1;
                let m = z.iter().position(|v| *v != int(0)).unwrap();
                ok &= nonzero_y == n - 1 && y[m].is_zero();
            }
            trials += 1;
            if !ok {
                failures += 1;
            }
        }
    }
    let elapsed = start.elapsed();
    Outcome {
        passed: failures == 0 && elapsed <= Duration::from_secs(10),
        detail: format!(
            "{}/{trials} hold ({single} with one nonzero entry), {:.0} ms",
            trials - failures,
            elapsed.as_secs_f64() * 1e3
        ),
    }
}

fn witness_soundness(w: &Witnesses) -> Outcome {
    let mut detail = format!(
        "{} feasible verdicts checked, {} violations",
        w.checked,
        w.violations.len()
    );
    for v in &w.violations {
        detail += &format!("\n      {v}");
    }
    Outcome {
        passed: w.violations.is_empty() && w.checked > 0,
        detail,
    }
}

fn steady_state(systems: &[LinearSystem]) -> Outcome {
    let mut pool: Vec<AlpProblem> = Vec::new();
    for s in systems {
        pool.extend(reduce(s).expect("reduction").alps);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let sample: Vec<&AlpProblem> = pool.choose_multiple(&mut rng, STEADY_SAMPLES).collect();
    let opts = SolverOptions::default();
    let mut matched = 0;
    let mut by_status: BTreeMap<&str, usize> = BTreeMap::new();
    let mut failures = Vec::new();
    for (i, alp) in sample.iter().enumerate() {
        let symbolic = alp_feasible(alp, &opts).map(|o| o.status);
        let threshold = steady_state_threshold(alp, &opts);
        let ok = match (&symbolic, &threshold) {
            (Ok(s), Ok((_, k0))) => {
                *by_status.entry(s.as_str()).or_default() += 1;
                [k0.clone(), k0 * int(2), k0 * int(4)]
                    .iter()
                    .all(|k| fixed_k_feasible(alp, k, &opts).ok() == Some(*s))
            }
            _ => false,
        };
        if ok {
            matched += 1;
        } else {
            failures.push(format!("sample {i} ({})", alp.case));
        }
    }
    Outcome {
        passed: matched == STEADY_SAMPLES && sample.len() == STEADY_SAMPLES,
        detail: format!(
            "{matched}/{} match at k0, 2k0, 4k0 ({by_status:?}){}",
            sample.len(),
            if failures.is_empty() {
                String::new()
            } else {
                format!("; mismatches: {}", failures.join(", "))
            }
        ),
    }
}

fn non_triviality() -> Outcome {
    let dir = tempfile::tempdir().expect("temp dir");
    let forced = write(dir.path(), "forced.lsys", "x1 <= 0\n-x1 <= 0\n");
    let free = write(dir.path(), "free.lsys", "vars x1 x2\nx1 <= 0\n-x1 <= 0\n");
    let wide = write(
        dir.path(),
        "wide.lsys",
        "vars x1 x2 x5 x13 xN\nx1 + x2 + x5 + x13 + xN <= 7\n",
    );
    let (forced_code, _) = cli(&["nontrivial", &forced, "--vars", "x1"]);
    let (free_code, _) = cli(&["nontrivial", &free, "--vars", "x2"]);
    let (wide_code, json) = cli(&["nontrivial", &wide, "--vars", "x2,x5,x13,xN", "--json"]);
    let added = serde_json::from_str::<serde_json::Value>(&json)
        .ok()
        .and_then(|v| v["augmented_constraints"].as_u64())
        .map(|n| n as i64 - 1);
    Outcome {
        passed: forced_code == 1 && free_code == 0 && wide_code == 0 && added == Some(5),
        detail: format!(
            "forced-zero exit {forced_code}, free exit {free_code}, 4-variable subset adds {}",
            added.map_or("?".into(), |a| a.to_string())
        ),
    }
}

fn bench_determinism() -> Outcome {
    let dir = tempfile::tempdir().expect("temp dir");
    let mut csvs = Vec::new();
    for (run, jobs) in [("a", "1"), ("b", "1"), ("c", "4")] {
        let out = dir.path().join(run);
        let (code, _) = cli(&[
            "bench",
            "--seed",
            "42",
            "--count",
            "100",
            "--jobs",
            jobs,
            "--out",
            out.to_str().unwrap(),
        ]);
        csvs.push((code, fs::read(out.join("bench.csv")).unwrap_or_default()));
    }
    let identical = csvs
        .iter()
        .all(|(code, csv)| *code == 0 && !csv.is_empty() && *csv == csvs[0].1);
    Outcome {
        passed: identical,
        detail: format!(
            "{} CSV bytes; runs with --jobs 1, 1, 4 {}",
            csvs[0].1.len(),
            if identical { "identical" } else { "differ" }
        ),
    }
}

fn main() {
    let mut witnesses = Witnesses::default();
    let c1 = worked_example_shape(&mut witnesses);
    let random = oracle_equivalence(&mut witnesses);
    let results = [
        ("1 worked-example shape", c1),
        ("3 gadget determinant", determinant_values()),
        ("4 offset-sum property", offset_sum_suite()),
        ("5 witness soundness", witness_soundness(&witnesses)),
        ("6 steady-state cross-check", steady_state(&random.systems)),
        ("7 non-triviality", non_triviality()),
        ("8 bench determinism", bench_determinism()),
        ("2 oracle equivalence", random.outcome),
    ];
    let mut sorted: Vec<_> = results.into_iter().collect();
    sorted.sort_by(|a, b| a.0.cmp(b.0));
    let mut failed = 0;
    for (name, o) in &sorted {
        if !o.passed {
            failed += 1;
        }
        println!(
            "{} criterion {name}: {}",
            if o.passed { "PASS" } else { "FAIL" },
            o.detail
        );
    }
    println!(
        "{} of {} criteria passed",
        sorted.len() - failed,
        sorted.len()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
