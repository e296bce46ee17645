//! Brute-force feasibility: every disequality `c.x != r` is replaced by one
//! of `c.x < r` or `c.x > r`, and each of the `2^R` resulting strict LPs is
//! solved exactly. Exponential in `R`, but it shares nothing with the
//! reduction and serves as ground truth for it.

use std::collections::BTreeMap;

use num_traits::{One, Signed, Zero};
use rayon::prelude::*;

use crate::alp_solver::SolverOptions;
use crate::error::{Error, Result};
use crate::model::{LinearSystem, Relop, Status, Verdict, Witness};
use crate::numeric::{KRatFun, Rational};

/// Default bound on `R`; the oracle solves up to `2^12` LPs.
pub const DEFAULT_ORACLE_CAP: usize = 12;

/// `coeffs . x <= rhs` (or `<`, depending on the list it sits in).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatRow {
    pub coeffs: Vec<Rational>,
    pub rhs: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StrictOutcome {
    pub status: Status,
    pub point: Option<Vec<Rational>>,
}

enum LpResult {
    Infeasible,
    Optimal(Vec<Rational>),
}

/// Dense two-phase simplex for `max c.y` subject to `A y <= b`, `y >= 0`,
/// with Bland's rule in both phases.
struct Tableau {
    rows: Vec<Vec<Rational>>,
    basis: Vec<usize>,
    n_struct: usize,
    first_art: usize,
    width: usize,
    pivots: usize,
    limit: usize,
}

impl Tableau {
    fn new(a: &[Vec<Rational>], b: &[Rational], n: usize, limit: Option<usize>) -> Self {
        let m = a.len();
        let n_art = b.iter().filter(|v| v.is_negative()).count();
        let first_art = n + m;
        let width = first_art + n_art;
        let mut rows = Vec::with_capacity(m);
        let mut basis = Vec::with_capacity(m);
        let mut next_art = first_art;
        for (i, (ai, bi)) in a.iter().zip(b).enumerate() {
            let mut row = vec![Rational::zero(); width + 1];
            let flip = bi.is_negative();
            for (j, v) in ai.iter().enumerate() {
                row[j] = if flip { -v } else { v.clone() };
            }
            row[n + i] = if flip {
                -Rational::one()
            } else {
                Rational::one()
            };
            row[width] = if flip { -bi } else { bi.clone() };
            if flip {
                row[next_art] = Rational::one();
                basis.push(next_art);
                next_art += 1;
            } else {
                basis.push(n + i);
            }
            rows.push(row);
        }
        Tableau {
            rows,
            basis,
            n_struct: n,
            first_art,
            width,
            pivots: 0,
            limit: limit.unwrap_or(10 * (m + 1) * (width + 1)),
        }
    }

    fn pivot(&mut self, r: usize, c: usize, obj: &mut [Rational]) -> Result<()> {
        self.pivots += 1;
        if self.pivots > self.limit {
            return Err(Error::PivotLimit { limit: self.limit });
        }
        let inv = self.rows[r][c].recip();
        for v in self.rows[r].iter_mut() {
            *v *= &inv;
        }
        let prow = self.rows[r].clone();
        let eliminate = |row: &mut [Rational]| {
            let f = row[c].clone();
            if !f.is_zero() {
                for (v, p) in row.iter_mut().zip(&prow) {
                    if !p.is_zero() {
                        *v -= &f * p;
                    }
                }
            }
        };
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i != r {
                eliminate(row);
            }
        }
        eliminate(obj);
        self.basis[r] = c;
        Ok(())
    }

    /// Minimizes with reduced costs held in `obj` (last entry is minus the
    /// objective value). Columns `>= allowed` never enter.
    fn minimize(&mut self, obj: &mut [Rational], allowed: usize) -> Result<bool> {
        loop {
            let Some(c) = (0..allowed).find(|&j| obj[j].is_negative()) else {
                return Ok(true);
            };
            let mut best: Option<(usize, Rational)> = None;
            for (i, row) in self.rows.iter().enumerate() {
                if row[c].is_positive() {
                    let ratio = &row[self.width] / &row[c];
                    let better = match &best {
                        None => true,
                        Some((bi, br)) => {
                            ratio < *br || (ratio == *br && self.basis[i] < self.basis[*bi])
                        }
                    };
                    if better {
                        best = Some((i, ratio));
                    }
                }
            }
            match best {
                Some((r, _)) => self.pivot(r, c, obj)?,
                None => return Ok(false),
            }
        }
    }

    fn reduced_costs(&self, cost: &[Rational]) -> Vec<Rational> {
        let mut obj: Vec<Rational> = cost.to_vec();
        obj.resize(self.width + 1, Rational::zero());
        for (row, &b) in self.rows.iter().zip(&self.basis) {
            let cb = cost.get(b).cloned().unwrap_or_else(Rational::zero);
            if !cb.is_zero() {
                for (o, v) in obj.iter_mut().zip(row) {
                    *o -= &cb * v;
                }
            }
        }
        obj
    }

    fn solve(mut self, objective: &[Rational]) -> Result<LpResult> {
        if self.first_art < self.width {
            let mut cost = vec![Rational::zero(); self.width];
            for c in &mut cost[self.first_art..] {
                *c = Rational::one();
            }
            let mut obj = self.reduced_costs(&cost);
            self.minimize(&mut obj, self.width)?;
            if !obj[self.width].is_zero() {
                return Ok(LpResult::Infeasible);
            }
            for r in 0..self.rows.len() {
                if self.basis[r] >= self.first_art {
                    if let Some(c) = (0..self.first_art).find(|&j| !self.rows[r][j].is_zero()) {
                        self.pivot(r, c, &mut obj)?;
                    }
                }
            }
        }
        // Maximizing c.y is minimizing -c.y.
        let cost: Vec<Rational> = objective.iter().map(|c| -c).collect();
        let mut obj = self.reduced_costs(&cost);
        if !self.minimize(&mut obj, self.first_art)? {
            return Err(Error::Unbounded);
        }
        let mut y = vec![Rational::zero(); self.n_struct];
        for (row, &b) in self.rows.iter().zip(&self.basis) {
            if b < self.n_struct {
                y[b] = row[self.width].clone();
            }
        }
        Ok(LpResult::Optimal(y))
    }
}

/// Feasibility of `le_rows` (non-strict) together with `lt_rows` (strict)
/// over free variables. A slack `t` with `t <= 1` is added to every strict
/// row and maximized; the rows are jointly satisfiable iff the optimum is
/// positive. The returned point satisfies every row exactly.
pub fn strict_lp_feasible(
    n_vars: usize,
    le_rows: &[RatRow],
    lt_rows: &[RatRow],
    options: &SolverOptions,
) -> Result<StrictOutcome> {
    // Columns: x+ (n), x- (n), t.
    let n = n_vars;
    let t = 2 * n;
    let mut a = Vec::new();
    let mut b = Vec::new();
    for (row, strict) in le_rows
        .iter()
        .map(|r| (r, false))
        .chain(lt_rows.iter().map(|r| (r, true)))
    {
        if row.coeffs.len() != n {
            return Err(Error::Misuse("row width differs from the variable count"));
        }
        let mut ai = vec![Rational::zero(); t + 1];
        for (j, c) in row.coeffs.iter().enumerate() {
            ai[j] = c.clone();
            ai[n + j] = -c;
        }
        if strict {
            ai[t] = Rational::one();
        }
        a.push(ai);
        b.push(row.rhs.clone());
    }
    let mut bound = vec![Rational::zero(); t + 1];
    bound[t] = Rational::one();
    a.push(bound);
    b.push(Rational::one());

    let mut objective = vec![Rational::zero(); t + 1];
    objective[t] = Rational::one();
    let result = Tableau::new(&a, &b, t + 1, options.pivot_limit).solve(&objective)?;
    let y = match result {
        LpResult::Infeasible => {
            return Ok(StrictOutcome {
                status: Status::Infeasible,
                point: None,
            })
        }
        LpResult::Optimal(y) => y,
    };
    if !lt_rows.is_empty() && !y[t].is_positive() {
        return Ok(StrictOutcome {
            status: Status::Infeasible,
            point: None,
        });
    }
    let point = (0..n).map(|j| &y[j] - &y[n + j]).collect();
    Ok(StrictOutcome {
        status: Status::Feasible,
        point: Some(point),
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OracleOptions {
    pub cap: usize,
    pub jobs: usize,
    pub solver: SolverOptions,
}

impl Default for OracleOptions {
    fn default() -> Self {
        OracleOptions {
            cap: DEFAULT_ORACLE_CAP,
            jobs: 1,
            solver: SolverOptions::from_env(),
        }
    }
}

/// Tries each sign assignment in order; bit `i` of the assignment index
/// selects `c_i.x > r_i` (set) or `c_i.x < r_i` (clear). The witness comes
/// from the lowest feasible assignment, with `k0 = 1` since the system has
/// no parameter.
pub fn oracle_feasible(system: &LinearSystem, options: &OracleOptions) -> Result<Verdict> {
    if !system.is_constant() {
        return Err(Error::ParametricSystem);
    }
    let r = system.counts().r;
    if r > options.cap {
        return Err(Error::OracleCap {
            r,
            cap: options.cap,
        });
    }
    let vars = system.variables();
    let index: BTreeMap<&str, usize> = vars
        .iter()
        .enumerate()
        .map(|(i, v)| (v.as_str(), i))
        .collect();
    let dense = |coeffs: &BTreeMap<String, crate::numeric::KPoly>, rhs: &Rational, negate: bool| {
        let mut row = vec![Rational::zero(); vars.len()];
        for (v, c) in coeffs {
            let c = c.constant_term();
            row[index[v.as_str()]] = if negate { -c } else { c };
        }
        RatRow {
            coeffs: row,
            rhs: if negate { -rhs } else { rhs.clone() },
        }
    };

    let mut le = Vec::new();
    let mut lt = Vec::new();
    let mut ne = Vec::new();
    for c in system.constraints() {
        match c.relop {
            Relop::Le => le.push(dense(&c.coeffs, &c.rhs, false)),
            Relop::Lt => lt.push(dense(&c.coeffs, &c.rhs, false)),
            Relop::Eq => {
                le.push(dense(&c.coeffs, &c.rhs, false));
                le.push(dense(&c.coeffs, &c.rhs, true));
            }
            Relop::Ne => ne.push((
                dense(&c.coeffs, &c.rhs, false),
                dense(&c.coeffs, &c.rhs, true),
            )),
        }
    }

    let attempt = |mask: u64| -> Result<Option<Vec<Rational>>> {
        let mut strict = lt.clone();
        for (i, (below, above)) in ne.iter().enumerate() {
            strict.push(if mask >> i & 1 == 1 {
                above.clone()
            } else {
                below.clone()
            });
        }
        let out = strict_lp_feasible(vars.len(), &le, &strict, &options.solver)?;
        Ok(out.point)
    };

    let total = 1u64 << r;
    let found = if options.jobs <= 1 {
        let mut found = None;
        for mask in 0..total {
            if let Some(p) = attempt(mask)? {
                found = Some(p);
                break;
            }
        }
        found
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(options.jobs)
            .build()
            .map_err(|_| Error::Misuse("could not start worker threads"))?;
        let results: Vec<Result<Option<Vec<Rational>>>> =
            pool.install(|| (0..total).into_par_iter().map(attempt).collect());
        let mut found = None;
        for res in results {
            if let Some(p) = res? {
                found = Some(p);
                break;
            }
        }
        found
    };

    Ok(match found {
        None => Verdict::infeasible(),
        Some(values) => {
            let point: BTreeMap<String, Rational> = vars.iter().cloned().zip(values).collect();
            let symbolic = point
                .iter()
                .map(|(v, x)| (v.clone(), KRatFun::constant(x.clone())))
                .collect();
            Verdict {
                status: Status::Feasible,
                feasible_case: None,
                witness: Some(Witness {
                    symbolic,
                    k0: Rational::one(),
                    point,
                }),
            }
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::{frac, int};
    use crate::parser::parse_system;
    use proptest::prelude::*;

    fn row(coeffs: &[i64], rhs: i64) -> RatRow {
        RatRow {
            coeffs: coeffs.iter().map(|&c| int(c)).collect(),
            rhs: int(rhs),
        }
    }

    fn opts() -> SolverOptions {
        SolverOptions::default()
    }

    #[test]
    fn strict_examples() {
        let out = strict_lp_feasible(1, &[], &[row(&[1], 1), row(&[-1], 0)], &opts()).unwrap();
        assert_eq!(out.status, Status::Feasible);
        let x = &out.point.unwrap()[0];
        assert!(*x > int(0) && *x < int(1));

        let out = strict_lp_feasible(1, &[], &[row(&[1], 0), row(&[-1], 0)], &opts()).unwrap();
        assert_eq!(out.status, Status::Infeasible);

        let out = strict_lp_feasible(1, &[row(&[1], 0), row(&[-1], 0)], &[], &opts()).unwrap();
        assert_eq!(out.point, Some(vec![int(0)]));
    }

    #[test]
    fn negative_rhs_needs_phase_one() {
        // x >= 2, x <= 3, y > x
        let le = [row(&[-1, 0], -2), row(&[1, 0], 3)];
        let lt = [row(&[1, -1], 0)];
        let out = strict_lp_feasible(2, &le, &lt, &opts()).unwrap();
        let p = out.point.unwrap();
        assert!(p[0] >= int(2) && p[0] <= int(3) && p[1] > p[0]);
    }

    fn sys(text: &str) -> LinearSystem {
        parse_system(text).unwrap()
    }

    #[test]
    fn oracle_examples() {
        let o = OracleOptions::default();
        assert!(oracle_feasible(&sys("x != 0"), &o).unwrap().is_feasible());
        assert_eq!(
            oracle_feasible(&sys("x <= 0\n-x <= 0\nx != 0"), &o).unwrap(),
            Verdict::infeasible()
        );
        let s = sys("x1 + x2 != 0\nx1 - x2 != 0\nx1 <= 0\n-x1 <= 0");
        let v = oracle_feasible(&s, &o).unwrap();
        let w = v.witness.unwrap();
        assert_eq!(w.point["x1"], int(0));
        assert!(s.check_point(&w.point, &w.k0).is_ok());
    }

    #[test]
    fn oracle_rejects_parametric_and_large_systems() {
        let o = OracleOptions::default();
        assert_eq!(
            oracle_feasible(&sys("vars x w\nx - (K+1) w = 0"), &o).unwrap_err(),
            Error::ParametricSystem
        );
        let many: String = (1..=13).map(|i| format!("x{i} != 0\n")).collect();
        assert_eq!(
            oracle_feasible(&sys(&many), &o).unwrap_err(),
            Error::OracleCap { r: 13, cap: 12 }
        );
    }

    #[test]
    fn parallel_matches_sequential() {
        let s = sys("x + y != 1\nx - y != 0\n2 x + y < 3\nx >= 1\ny != 5");
        let seq = oracle_feasible(&s, &OracleOptions::default()).unwrap();
        let par = oracle_feasible(
            &s,
            &OracleOptions {
                jobs: 3,
                ..OracleOptions::default()
            },
        )
        .unwrap();
        assert_eq!(seq, par);
    }

    /// Fourier-Motzkin elimination with strictness tracking.
    fn fm_feasible(n: usize, rows: Vec<(Vec<Rational>, Rational, bool)>) -> bool {
        let mut rows = rows;
        for j in 0..n {
            let (mut pos, mut neg, mut rest) = (Vec::new(), Vec::new(), Vec::new());
            for r in rows {
                if r.0[j].is_positive() {
                    pos.push(r);
                } else if r.0[j].is_negative() {
                    neg.push(r);
                } else {
                    rest.push(r);
                }
            }
            for p in &pos {
                for q in &neg {
                    let (sp, sq) = (-&q.0[j], p.0[j].clone());
                    let coeffs =
                        p.0.iter()
                            .zip(&q.0)
                            .map(|(a, b)| a * &sp + b * &sq)
                            .collect();
                    rest.push((coeffs, &p.1 * &sp + &q.1 * &sq, p.2 || q.2));
                }
            }
            rows = rest;
        }
        rows.iter().all(|(_, b, strict)| {
            if *strict {
                b.is_positive()
            } else {
                !b.is_negative()
            }
        })
    }

    fn arb_row(n: usize) -> impl Strategy<Value = (Vec<i64>, i64, bool)> {
        (
            prop::collection::vec(-3i64..=3, n),
            -3i64..=3,
            any::<bool>(),
        )
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(200))]

        #[test]
        fn strict_lp_agrees_with_elimination(
            rows in (1usize..=3).prop_flat_map(|n| (Just(n), prop::collection::vec(arb_row(n), 0..6)))
        ) {
            let (n, rows) = rows;
            let mut le = Vec::new();
            let mut lt = Vec::new();
            let mut fm = Vec::new();
            for (c, b, strict) in &rows {
                let r = row(c, *b);
                fm.push((r.coeffs.clone(), r.rhs.clone(), *strict));
                if *strict { lt.push(r) } else { le.push(r) }
            }
            let out = strict_lp_feasible(n, &le, &lt, &opts()).unwrap();
            prop_assert_eq!(out.status == Status::Feasible, fm_feasible(n, fm));
            if let Some(p) = out.point {
                let dot = |r: &RatRow| r.coeffs.iter().zip(&p).map(|(a, x)| a * x).sum::<Rational>();
                prop_assert!(le.iter().all(|r| dot(r) <= r.rhs));
                prop_assert!(lt.iter().all(|r| dot(r) < r.rhs));
            }
        }
    }

    #[test]
    fn fractional_point() {
        // 3x > 1, 3x < 2
        let out = strict_lp_feasible(1, &[], &[row(&[-3], -1), row(&[3], 2)], &opts()).unwrap();
        let x = &out.point.unwrap()[0];
        assert!(*x > frac(1, 3) && *x < frac(2, 3));
    }
}
