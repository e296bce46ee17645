//! Built-in checks run by `alpfeas selftest`.

use alpfeas_core::numeric::{frac, int};
use alpfeas_core::reduce::{enumerate_cases, gadget_matrix_det, offset_sums, reduce};
use alpfeas_core::{AlpProblem, CaseDescriptor, KPoly, KRatFun, Rational, Sign};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// A system with two `<=`, two `<` and three `!=` rows over three
/// variables.
pub const WORKED_EXAMPLE: &str = "\
# two <=, two <, three != rows
vars x1 x2 x3
x1 + 2 x2 - x3 <= 4
-x1 + x3 <= 2
2 x1 - x2 < 3
x2 + x3 < 5
x1 - x2 != 0
x2 + 2 x3 != 1
3 x1 - x3 != -2
";

pub fn worked_example_case() -> CaseDescriptor {
    CaseDescriptor::Pair {
        a: 1,
        b: 3,
        signs: (Sign::Pos, Sign::Pos),
    }
}

/// Rows of an ALP from a three-disequality reduction, grouped by the
/// variables they touch.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RowTally {
    pub le: usize,
    pub strict: usize,
    pub defining: usize,
    pub sums: usize,
    pub coupling: usize,
    pub case: Vec<String>,
    pub shared: usize,
    pub other: usize,
}

impl RowTally {
    pub fn total(&self) -> usize {
        self.le
            + self.strict
            + self.defining
            + self.sums
            + self.coupling
            + self.case.len()
            + self.shared
            + self.other
    }

    pub fn matches_worked_example(&self) -> bool {
        let mut case = self.case.clone();
        case.sort();
        *self
            == RowTally {
                le: 2,
                strict: 2,
                defining: 6,
                sums: 6,
                coupling: 6,
                case: self.case.clone(),
                shared: 1,
                other: 0,
            }
            && case == ["e - z1 <= 0", "e - z3 <= 0"]
    }
}

pub fn tally_rows(alp: &AlpProblem) -> RowTally {
    let original = alp.original_variables();
    let mut t = RowTally::default();
    for row in &alp.rows {
        let has = |prefix: &str| {
            row.coeffs
                .keys()
                .any(|v| !original.contains(v) && v.starts_with(prefix))
        };
        let orig = row.coeffs.keys().any(|v| original.contains(v));
        let (e, f, y, z) = (has("e"), has("f"), has("y"), has("z"));
        match (orig, e, f, y, z) {
            (true, false, false, false, false) => t.le += 1,
            (true, true, false, false, false) => t.strict += 1,
            (true, false, true, false, false) => t.defining += 1,
            (false, false, true, true, false) => t.sums += 1,
            (false, false, false, true, true) => {
                let offset_ok = row
                    .coeffs
                    .iter()
                    .filter(|(v, _)| v.starts_with('y'))
                    .all(|(_, c)| c.degree() == Some(1));
                if offset_ok {
                    t.coupling += 1
                } else {
                    t.other += 1
                }
            }
            (false, true, false, false, true) => {
                t.case.push(alpfeas_core::parser::render_alp_row(row, alp))
            }
            (false, true, false, false, false)
                if row.coeffs.values().all(|c| c.degree() == Some(1)) =>
            {
                t.shared += 1
            }
            _ => t.other += 1,
        }
    }
    t
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckRow {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

fn row(name: impl Into<String>, passed: bool, detail: impl Into<String>) -> CheckRow {
    CheckRow {
        name: name.into(),
        passed,
        detail: detail.into(),
    }
}

/// Cofactor expansion along the first row.
pub fn cofactor_det(m: &[Vec<i64>]) -> i64 {
    if m.len() == 1 {
        return m[0][0];
    }
    (0..m.len())
        .filter(|&j| m[0][j] != 0)
        .map(|j| {
            let minor: Vec<Vec<i64>> = m[1..]
                .iter()
                .map(|r| {
                    r.iter()
                        .enumerate()
                        .filter(|&(k, _)| k != j)
                        .map(|(_, &v)| v)
                        .collect()
                })
                .collect();
            let sign = if j % 2 == 0 { 1 } else { -1 };
            sign * m[0][j] * cofactor_det(&minor)
        })
        .sum()
}

fn gadget_matrix(n: usize) -> Vec<Vec<i64>> {
    (0..n)
        .map(|i| (0..n).map(|j| i64::from(i != j)).collect())
        .collect()
}

pub fn determinant_checks() -> Vec<CheckRow> {
    (2..=8usize)
        .map(|n| match gadget_matrix_det(n) {
            Ok(d) => {
                let oracle = cofactor_det(&gadget_matrix(n));
                row(
                    format!("determinant N={n}"),
                    d == int(oracle) && oracle != 0,
                    d.to_string(),
                )
            }
            Err(e) => row(format!("determinant N={n}"), false, e.to_string()),
        })
        .collect()
}

pub fn case_count_checks() -> Vec<CheckRow> {
    (0..=8usize)
        .map(|r| {
            let got = enumerate_cases(r).len();
            let want = match r {
                0 => 1,
                1 => 2,
                _ => 2 * r * (r - 1),
            };
            row(format!("cases R={r}"), got == want, got.to_string())
        })
        .collect()
}

fn random_z(rng: &mut ChaCha8Rng, n: usize, shape: usize) -> Vec<Rational> {
    let mut z = vec![int(0); n];
    let pick = |rng: &mut ChaCha8Rng| loop {
        let v = frac(rng.gen_range(-9..=9), rng.gen_range(1..=6));
        if v != int(0) {
            return v;
        }
    };
    match shape {
        // exactly one nonzero entry
        0 => z[rng.gen_range(0..n)] = pick(rng),
        // at least two nonzero entries
        _ => {
            for v in z.iter_mut() {
                if rng.gen_bool(0.6) {
                    *v = pick(rng);
                }
            }
            let a = rng.gen_range(0..n);
            let b = (a + rng.gen_range(1..n)) % n;
            z[a] = pick(rng);
            z[b] = pick(rng);
        }
    }
    z
}

/// `trials` seeded vectors per `N`: with two or more nonzero `z_j` no
/// offset sum vanishes identically; with exactly one, exactly `N - 1` are
/// nonzero.
pub fn offset_sum_checks(seed: u64, trials: usize) -> Vec<CheckRow> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (2..=6usize)
        .map(|n| {
            let mut failures = 0;
            for t in 0..trials {
                let z = random_z(&mut rng, n, t % 2);
                let nonzero_z = z.iter().filter(|v| **v != int(0)).count();
                let nonzero_y = offset_sums(&z).iter().filter(|f| !f.is_zero()).count();
                let ok = if nonzero_z >= 2 {
                    nonzero_y == n
                } else {
                    nonzero_y == n - 1
                };
                if !ok {
                    failures += 1;
                }
            }
            row(
                format!("offset sums N={n}"),
                failures == 0,
                format!("{}/{trials}", trials - failures),
            )
        })
        .collect()
}

fn random_ratfun(rng: &mut ChaCha8Rng) -> KRatFun {
    let poly = |rng: &mut ChaCha8Rng| {
        KPoly::from_coeffs(
            (0..rng.gen_range(1..=3))
                .map(|_| frac(rng.gen_range(-5..=5), rng.gen_range(1..=3)))
                .collect(),
        )
    };
    loop {
        let den = poly(rng);
        if !den.is_zero() {
            return KRatFun::new(poly(rng), den).expect("nonzero denominator");
        }
    }
}

pub fn field_axiom_check(seed: u64, trials: usize) -> CheckRow {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut failures = 0;
    for _ in 0..trials {
        let (a, b, c) = (
            random_ratfun(&mut rng),
            random_ratfun(&mut rng),
            random_ratfun(&mut rng),
        );
        let mut ok = &a + &b == &b + &a
            && &(&a * &b) * &c == &a * &(&b * &c)
            && &a * &(&b + &c) == &(&a * &b) + &(&a * &c)
            && &(&a + &b) - &b == a;
        if !a.is_zero() {
            ok &= &a * &a.recip().expect("nonzero") == KRatFun::one();
        }
        if a < b {
            ok &= &a + &c < &b + &c;
        }
        if !ok {
            failures += 1;
        }
    }
    row(
        "field axioms",
        failures == 0,
        format!("{}/{trials}", trials - failures),
    )
}

pub fn worked_example_check() -> CheckRow {
    let system = alpfeas_core::parse_system(WORKED_EXAMPLE).expect("built-in example parses");
    match reduce(&system) {
        Ok(bundle) => {
            let case = worked_example_case();
            let tally = bundle.alps.iter().find(|a| a.case == case).map(tally_rows);
            let ok = bundle.alps.len() == 12
                && tally.as_ref().is_some_and(RowTally::matches_worked_example);
            let rows = tally.map_or(0, |t| t.total());
            row(
                "worked example",
                ok,
                format!("{} ALPs, {rows} rows in case {case}", bundle.alps.len()),
            )
        }
        Err(e) => row("worked example", false, e.to_string()),
    }
}

pub fn run_all() -> Vec<CheckRow> {
    let mut rows = determinant_checks();
    rows.extend(case_count_checks());
    rows.extend(offset_sum_checks(7, 200));
    rows.push(field_axiom_check(11, 200));
    rows.push(worked_example_check());
    rows
}

pub fn render_table(rows: &[CheckRow]) -> String {
    let width = rows.iter().map(|r| r.name.len()).max().unwrap_or(0);
    let mut out = String::new();
    for r in rows {
        out += &format!(
            "{:<width$}  {}  {}\n",
            r.name,
            if r.passed { "PASS" } else { "FAIL" },
            r.detail
        );
    }
    out
}
