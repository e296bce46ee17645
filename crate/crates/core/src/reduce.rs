//! Reduction of a linear system with `<=`, `<`, `=` and `!=` rows to a
//! family of asymptotic LPs, one of which is feasible when the system is.
//!
//! * A strict row `b.x < q` becomes `b.x + e <= q` plus the shared row
//!   `1 - K e <= 0`, with `e` one slack per ALP.
//! * The `R` disequalities `c_i.x != r_i` are rewritten through gadget
//!   variables: `c_i.x - r_i = f_i`, `f_i = sum_{j != i} y_j`,
//!   `(K+i) y_i = z_i`.
//! * Each ALP then commits to strict signs for two of the `z_i`, giving
//!   `2R(R-1)` cases. `R = 1` skips the gadget and splits on the sign of
//!   `f_1`; `R = 0` yields a single ALP.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;

use crate::alp_solver::{alp_feasible, concretize_witness, SolverOptions};
use crate::error::{Error, Result};
use crate::model::{
    AlpConstraint, AlpProblem, CaseDescriptor, Constraint, LinearSystem, Relop, Sign, Status,
    Verdict, Witness,
};
use crate::numeric::{int, KPoly, KRatFun, Rational};

/// Fresh names for the gadget variables. Lists are indexed from zero but
/// named from one, matching the `K + i` offsets.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct GadgetVars {
    /// Shared strictness slack; present when the system has `<` or `!=`
    /// rows.
    pub e: Option<String>,
    pub f: Vec<String>,
    /// Empty when `R < 2`.
    pub y: Vec<String>,
    /// Empty when `R < 2`.
    pub z: Vec<String>,
    /// `offsets[i] = K + (i + 1)`.
    pub offsets: Vec<KPoly>,
}

#[derive(Clone, Debug)]
pub struct ReductionBundle {
    pub original: LinearSystem,
    pub alps: Vec<AlpProblem>,
    pub gadget: GadgetVars,
}

struct NameAllocator {
    taken: BTreeSet<String>,
}

impl NameAllocator {
    fn new(existing: &[String]) -> Self {
        NameAllocator {
            taken: existing.iter().cloned().collect(),
        }
    }

    /// `base1 .. base{count}`, with `_` appended to `base` until none of
    /// the names collides.
    fn group(&mut self, base: &str, count: usize) -> Vec<String> {
        let mut base = base.to_string();
        loop {
            let names: Vec<String> = (1..=count).map(|i| format!("{base}{i}")).collect();
            if names.iter().all(|n| !self.taken.contains(n)) {
                self.taken.extend(names.iter().cloned());
                return names;
            }
            base.push('_');
        }
    }

    fn single(&mut self, base: &str) -> String {
        let mut name = base.to_string();
        while self.taken.contains(&name) {
            name.push('_');
        }
        self.taken.insert(name.clone());
        name
    }
}

fn var_row(terms: Vec<(&str, KPoly)>, rhs: KPoly) -> AlpConstraint {
    AlpConstraint::new(terms.into_iter().map(|(v, c)| (v.to_string(), c)), rhs)
}

/// `1 - K e <= 0`, i.e. `e >= 1/K`.
pub fn strictness_row(e: &str) -> AlpConstraint {
    var_row(vec![(e, -KPoly::k())], KPoly::constant(int(-1)))
}

/// `b.x < q` becomes `b.x + e <= q` together with `1 - K e <= 0`.
pub fn strictify(c: &Constraint, e: &str) -> Result<[AlpConstraint; 2]> {
    if c.relop != Relop::Lt {
        return Err(Error::Misuse("strictify expects a `<` row"));
    }
    let mut coeffs = c.coeffs.clone();
    let entry = coeffs.entry(e.to_string()).or_default();
    *entry = &*entry + &KPoly::one();
    Ok([
        AlpConstraint::new(coeffs, KPoly::constant(c.rhs.clone())),
        strictness_row(e),
    ])
}

/// `a.x = b` becomes `a.x <= b` and `-a.x <= -b`.
pub fn split_equality(c: &Constraint) -> Result<[Constraint; 2]> {
    if c.relop != Relop::Eq {
        return Err(Error::Misuse("split_equality expects an `=` row"));
    }
    let (neg_coeffs, neg_rhs) = c.negated_sides();
    Ok([
        Constraint::new(c.coeffs.clone(), Relop::Le, c.rhs.clone()),
        Constraint::new(neg_coeffs, Relop::Le, neg_rhs),
    ])
}

/// `c_i.x - r_i = f_i` for each disequality, as `c_i.x - f_i = r_i`.
fn defining_rows(ne_rows: &[Constraint], f: &[String]) -> Vec<Constraint> {
    ne_rows
        .iter()
        .zip(f)
        .map(|(c, fi)| {
            let mut coeffs = c.coeffs.clone();
            coeffs.insert(fi.clone(), -KPoly::one());
            Constraint::new(coeffs, Relop::Eq, c.rhs.clone())
        })
        .collect()
}

/// Builds the gadget for `R >= 2` disequalities. The returned equalities
/// come in three groups of `R`: `c_i.x - r_i = f_i`, then
/// `f_i = sum_{j != i} y_j`, then `(K+i) y_i = z_i`. `taken` lists names the
/// gadget must avoid.
pub fn build_inequation_gadget(
    ne_rows: &[Constraint],
    taken: &[String],
) -> Result<(GadgetVars, Vec<Constraint>)> {
    let r = ne_rows.len();
    if r < 2 {
        return Err(Error::Misuse(
            "the inequation gadget needs at least two rows",
        ));
    }
    let mut names = NameAllocator::new(taken);
    let e = names.single("e");
    let f = names.group("f", r);
    let y = names.group("y", r);
    let z = names.group("z", r);
    let offsets: Vec<KPoly> = (1..=r as i64).map(KPoly::k_plus).collect();

    let mut eqs = defining_rows(ne_rows, &f);
    for (i, fi) in f.iter().enumerate() {
        let mut coeffs: Vec<(String, KPoly)> = (0..r)
            .filter(|&j| j != i)
            .map(|j| (y[j].clone(), KPoly::one()))
            .collect();
        coeffs.push((fi.clone(), -KPoly::one()));
        eqs.push(Constraint::new(coeffs, Relop::Eq, Rational::zero()));
    }
    for i in 0..r {
        eqs.push(Constraint::new(
            [
                (y[i].clone(), offsets[i].clone()),
                (z[i].clone(), -KPoly::one()),
            ],
            Relop::Eq,
            Rational::zero(),
        ));
    }
    Ok((
        GadgetVars {
            e: Some(e),
            f,
            y,
            z,
            offsets,
        },
        eqs,
    ))
}

/// Cases in a fixed order: pairs `(a, b)` lexicographically, and for each
/// pair the signs `(-,-), (-,+), (+,-), (+,+)`.
pub fn enumerate_cases(r: usize) -> Vec<CaseDescriptor> {
    match r {
        0 => vec![CaseDescriptor::Empty],
        1 => vec![
            CaseDescriptor::Single(Sign::Neg),
            CaseDescriptor::Single(Sign::Pos),
        ],
        _ => {
            let signs = [
                (Sign::Neg, Sign::Neg),
                (Sign::Neg, Sign::Pos),
                (Sign::Pos, Sign::Neg),
                (Sign::Pos, Sign::Pos),
            ];
            let mut out = Vec::with_capacity(2 * r * (r - 1));
            for a in 1..=r {
                for b in a + 1..=r {
                    out.extend(
                        signs
                            .iter()
                            .map(|&signs| CaseDescriptor::Pair { a, b, signs }),
                    );
                }
            }
            out
        }
    }
}

/// `v > 0` as `e - v <= 0`; `v < 0` as `v + e <= 0`.
fn sign_row(var: &str, sign: Sign, e: &str) -> AlpConstraint {
    let v = match sign {
        Sign::Pos => -KPoly::one(),
        Sign::Neg => KPoly::one(),
    };
    var_row(vec![(e, KPoly::one()), (var, v)], KPoly::zero())
}

pub fn case_rows(case: &CaseDescriptor, gadget: &GadgetVars) -> Result<Vec<AlpConstraint>> {
    let e = || {
        gadget
            .e
            .as_deref()
            .ok_or(Error::Misuse("sign cases need the strictness slack"))
    };
    Ok(match *case {
        CaseDescriptor::Empty => Vec::new(),
        CaseDescriptor::Single(sign) => {
            let f1 = gadget
                .f
                .first()
                .ok_or(Error::Misuse("single case needs f1"))?;
            vec![sign_row(f1, sign, e()?), strictness_row(e()?)]
        }
        CaseDescriptor::Pair { a, b, signs } => {
            let r = gadget.z.len();
            if !(1 <= a && a < b && b <= r) {
                return Err(Error::Misuse("case pair does not match the gadget"));
            }
            vec![
                sign_row(&gadget.z[a - 1], signs.0, e()?),
                sign_row(&gadget.z[b - 1], signs.1, e()?),
                strictness_row(e()?),
            ]
        }
    })
}

fn push_split_group(rows: &mut Vec<AlpConstraint>, eqs: &[Constraint]) -> Result<()> {
    let halves: Vec<[Constraint; 2]> = eqs.iter().map(split_equality).collect::<Result<_>>()?;
    rows.extend(halves.iter().map(|h| AlpConstraint::from_le(&h[0])));
    rows.extend(halves.iter().map(|h| AlpConstraint::from_le(&h[1])));
    Ok(())
}

pub fn reduce(system: &LinearSystem) -> Result<ReductionBundle> {
    if system
        .constraints()
        .iter()
        .flat_map(|c| c.coeffs.values())
        .any(|p| p.degree().unwrap_or(0) > 1)
    {
        return Err(Error::Misuse(
            "coefficients must have degree at most one in K",
        ));
    }
    let counts = system.counts();
    let ne_rows: Vec<Constraint> = system.rows_with(Relop::Ne).cloned().collect();
    let r = ne_rows.len();

    let (gadget, gadget_eqs) = match r {
        0 | 1 => {
            let mut names = NameAllocator::new(system.variables());
            let e = (counts.q > 0 || r == 1).then(|| names.single("e"));
            let f = if r == 1 {
                names.group("f", 1)
            } else {
                Vec::new()
            };
            let eqs = defining_rows(&ne_rows, &f);
            (
                GadgetVars {
                    e,
                    f,
                    ..GadgetVars::default()
                },
                eqs,
            )
        }
        _ => build_inequation_gadget(&ne_rows, system.variables())?,
    };

    let mut variables: Vec<String> = system.variables().to_vec();
    variables.extend(gadget.e.iter().cloned());
    variables.extend(gadget.f.iter().cloned());
    variables.extend(gadget.y.iter().cloned());
    variables.extend(gadget.z.iter().cloned());

    let mut base: Vec<AlpConstraint> = system
        .rows_with(Relop::Le)
        .map(AlpConstraint::from_le)
        .collect();
    if counts.q > 0 {
        let e = gadget.e.as_deref().expect("allocated when Q > 0");
        let mut shared = None;
        for c in system.rows_with(Relop::Lt) {
            let [row, strict] = strictify(c, e)?;
            base.push(row);
            shared = Some(strict);
        }
        base.extend(shared);
    }
    for c in system.rows_with(Relop::Eq) {
        let [lo, hi] = split_equality(c)?;
        base.push(AlpConstraint::from_le(&lo));
        base.push(AlpConstraint::from_le(&hi));
    }
    for group in gadget_eqs.chunks(r.max(1)) {
        push_split_group(&mut base, group)?;
    }

    let alps = enumerate_cases(r)
        .into_iter()
        .map(|case| {
            let extra = case_rows(&case, &gadget)?;
            Ok(AlpProblem::assemble(
                variables.clone(),
                system.variables().len(),
                base.iter().cloned().chain(extra),
                case,
            ))
        })
        .collect::<Result<Vec<_>>>()?;

    Ok(ReductionBundle {
        original: system.clone(),
        alps,
        gadget,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecideOptions {
    pub solver: SolverOptions,
    /// Worker threads for evaluating ALPs; `1` runs them in order and stops
    /// at the first verified case.
    pub jobs: usize,
}

impl Default for DecideOptions {
    fn default() -> Self {
        DecideOptions {
            solver: SolverOptions::from_env(),
            jobs: 1,
        }
    }
}

enum CaseResult {
    Infeasible,
    Verified(Witness),
    Unverified,
}

fn evaluate_case(
    alp: &AlpProblem,
    system: &LinearSystem,
    solver: &SolverOptions,
) -> Result<CaseResult> {
    let out = alp_feasible(alp, solver)?;
    match (out.status, out.symbolic) {
        (Status::Feasible, Some(symbolic)) => match concretize_witness(&symbolic, system) {
            Ok(w) => Ok(CaseResult::Verified(w)),
            Err(Error::WitnessExhausted { .. }) => Ok(CaseResult::Unverified),
            Err(e) => Err(e),
        },
        _ => Ok(CaseResult::Infeasible),
    }
}

/// Decides the bundle's ALPs in case order.
///
/// The verdict is FEASIBLE at the first case whose ALP is feasible and whose
/// witness, concretized at some `K = 2^t`, satisfies the input system
/// exactly. It is INFEASIBLE when no ALP is feasible. Feasible ALPs whose
/// witnesses never satisfy the input make the reduction inconclusive, which
/// is reported as [`Error::UnverifiedReduction`] rather than as a verdict.
pub fn decide_bundle(bundle: &ReductionBundle, options: &DecideOptions) -> Result<Verdict> {
    let system = &bundle.original;
    let mut unverified = Vec::new();
    let mut finish = |idx: usize, result: CaseResult| -> Option<Verdict> {
        match result {
            CaseResult::Infeasible => None,
            CaseResult::Unverified => {
                unverified.push(bundle.alps[idx].case);
                None
            }
            CaseResult::Verified(w) => Some(Verdict {
                status: Status::Feasible,
                feasible_case: Some(bundle.alps[idx].case),
                witness: Some(w),
            }),
        }
    };
    if options.jobs <= 1 {
        for (idx, alp) in bundle.alps.iter().enumerate() {
            if let Some(v) = finish(idx, evaluate_case(alp, system, &options.solver)?) {
                return Ok(v);
            }
        }
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(options.jobs)
            .build()
            .map_err(|_| Error::Misuse("could not start worker threads"))?;
        let results: Vec<Result<CaseResult>> = pool.install(|| {
            bundle
                .alps
                .par_iter()
                .map(|alp| evaluate_case(alp, system, &options.solver))
                .collect()
        });
        for (idx, result) in results.into_iter().enumerate() {
            if let Some(v) = finish(idx, result?) {
                return Ok(v);
            }
        }
    }
    if unverified.is_empty() {
        Ok(Verdict::infeasible())
    } else {
        Err(Error::UnverifiedReduction { cases: unverified })
    }
}

pub fn decide_feasibility(system: &LinearSystem, options: &DecideOptions) -> Result<Verdict> {
    decide_bundle(&reduce(system)?, options)
}

/// Adds fresh `w_1 .. w_m` with `sum w_j != 0` and `x_{s_j} = (K + j) w_j`,
/// so the result is feasible iff `system` has a solution in which some
/// listed variable is nonzero.
pub fn augment_nontrivial(system: &LinearSystem, subset: &[String]) -> Result<LinearSystem> {
    if subset.is_empty() {
        return Err(Error::Misuse("the variable subset must not be empty"));
    }
    let mut seen = BTreeSet::new();
    for v in subset {
        if !system.variables().contains(v) {
            return Err(Error::UnknownVariable(v.clone()));
        }
        if !seen.insert(v) {
            return Err(Error::DuplicateVariable(v.clone()));
        }
    }
    let w = NameAllocator::new(system.variables()).group("w", subset.len());
    let mut constraints = system.constraints().to_vec();
    constraints.push(Constraint::new(
        w.iter().map(|wj| (wj.clone(), KPoly::one())),
        Relop::Ne,
        Rational::zero(),
    ));
    for (j, (x, wj)) in subset.iter().zip(&w).enumerate() {
        constraints.push(Constraint::new(
            [
                (x.clone(), KPoly::one()),
                (wj.clone(), -KPoly::k_plus(j as i64 + 1)),
            ],
            Relop::Eq,
            Rational::zero(),
        ));
    }
    let mut variables = system.variables().to_vec();
    variables.extend(w);
    Ok(LinearSystem::new(variables, constraints)?)
}

/// For constants `z_1 .. z_N`, the rational functions
/// `sum_{j != i} z_j / (K + j)` for `i = 1 .. N`.
pub fn offset_sums(z: &[Rational]) -> Vec<KRatFun> {
    let terms: Vec<KRatFun> = z
        .iter()
        .enumerate()
        .map(|(j, zj)| {
            KRatFun::new(KPoly::constant(zj.clone()), KPoly::k_plus(j as i64 + 1))
                .expect("K + j is not zero")
        })
        .collect();
    (0..z.len())
        .map(|i| {
            terms
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .fold(KRatFun::zero(), |acc, (_, t)| &acc + t)
        })
        .collect()
}

/// Determinant of the `n x n` matrix with zero diagonal and ones elsewhere,
/// by fraction-free (Bareiss) elimination with row pivoting.
pub fn gadget_matrix_det(n: usize) -> Result<Rational> {
    if n < 2 {
        return Err(Error::Misuse("the gadget matrix needs N >= 2"));
    }
    let mut m: Vec<Vec<BigInt>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    if i == j {
                        BigInt::zero()
                    } else {
                        BigInt::one()
                    }
                })
                .collect()
        })
        .collect();
    let det = bareiss_det(&mut m);
    debug_assert!(!det.is_zero());
    Ok(Rational::from_integer(det))
}

pub(crate) fn bareiss_det(m: &mut [Vec<BigInt>]) -> BigInt {
    let n = m.len();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&i| !m[i][k].is_zero()) {
                Some(i) => {
                    m.swap(k, i);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&m[i][j] * &m[k][k] - &m[i][k] * &m[k][j]) / &prev;
                m[i][j] = v;
            }
            m[i][k] = BigInt::zero();
        }
        prev = m[k][k].clone();
    }
    let det = &m[n - 1][n - 1] * sign;
    debug_assert!(n == 0 || det.abs() >= BigInt::zero());
    det
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Counts;
    use crate::parser::{parse_system, render_alp_row};

    fn sys(text: &str) -> LinearSystem {
        parse_system(text).unwrap()
    }

    fn same_equality(a: &Constraint, b: &Constraint) -> bool {
        let (nc, nr) = b.negated_sides();
        a == b || *a == Constraint::new(nc, b.relop, nr)
    }

    #[test]
    fn strictify_rows() {
        let c = sys("x + 2 y < 4").constraints()[0].clone();
        let [row, shared] = strictify(&c, "e").unwrap();
        assert_eq!(row.coeffs["e"], KPoly::one());
        assert_eq!(row.rhs, KPoly::constant(int(4)));
        assert_eq!(shared, strictness_row("e"));
        assert!(strictify(&sys("x <= 1").constraints()[0], "e").is_err());
    }

    #[test]
    fn shared_strictness_row_appears_once() {
        let b = reduce(&sys("x < 0\ny < 1")).unwrap();
        assert_eq!(b.alps.len(), 1);
        let alp = &b.alps[0];
        let strict = strictness_row("e").canonical();
        assert_eq!(alp.rows.iter().filter(|r| **r == strict).count(), 1);
        assert_eq!(alp.rows.len(), 3);
    }

    #[test]
    fn split_equality_rows() {
        let [lo, hi] = split_equality(&sys("x = 3").constraints()[0]).unwrap();
        assert_eq!(lo, sys("x <= 3").constraints()[0]);
        assert_eq!(hi, sys("-x <= -3").constraints()[0]);
        assert!(split_equality(&sys("x <= 3").constraints()[0]).is_err());
    }

    #[test]
    fn gadget_shapes() {
        let s = sys("x1 != 0\nx2 != 0\nx3 != 1");
        let ne: Vec<Constraint> = s.constraints().to_vec();
        let (g, eqs) = build_inequation_gadget(&ne, s.variables()).unwrap();
        assert_eq!(g.f, ["f1", "f2", "f3"]);
        assert_eq!(g.offsets[1], KPoly::k_plus(2));
        assert_eq!(eqs.len(), 9);
        // f1 = y2 + y3
        assert!(same_equality(
            &eqs[3],
            &sys("y2 + y3 - f1 = 0").constraints()[0]
        ));
        assert!(same_equality(
            &eqs[8],
            &sys("vars y3 z3\n(K+3) y3 - z3 = 0").constraints()[0]
        ));
        assert!(build_inequation_gadget(&ne[..1], s.variables()).is_err());
    }

    #[test]
    fn gadget_for_two_and_five() {
        let s = sys("a != 0\nb != 0");
        let (_, eqs) = build_inequation_gadget(s.constraints(), s.variables()).unwrap();
        assert!(same_equality(&eqs[2], &sys("y2 - f1 = 0").constraints()[0]));
        assert!(same_equality(&eqs[3], &sys("y1 - f2 = 0").constraints()[0]));

        let s = sys("a != 0\nb != 0\nc != 0\nd != 0\ng != 0");
        let (_, eqs) = build_inequation_gadget(s.constraints(), s.variables()).unwrap();
        assert!(same_equality(
            &eqs[5],
            &sys("y2 + y3 + y4 + y5 - f1 = 0").constraints()[0]
        ));
        assert!(same_equality(
            &eqs[9],
            &sys("y1 + y2 + y3 + y4 - f5 = 0").constraints()[0]
        ));
    }

    #[test]
    fn names_avoid_user_variables() {
        let s = sys("e + f1 + y2 != 0\nz1 != 1");
        let (g, _) = build_inequation_gadget(s.constraints(), s.variables()).unwrap();
        assert_eq!(g.e.as_deref(), Some("e_"));
        assert_eq!(g.f, ["f_1", "f_2"]);
        assert_eq!(g.y, ["y_1", "y_2"]);
        assert_eq!(g.z, ["z_1", "z_2"]);
    }

    #[test]
    fn case_enumeration() {
        assert_eq!(enumerate_cases(0), vec![CaseDescriptor::Empty]);
        assert_eq!(enumerate_cases(1).len(), 2);
        assert_eq!(enumerate_cases(2).len(), 4);
        let three = enumerate_cases(3);
        assert_eq!(three.len(), 12);
        assert_eq!(
            three[0],
            CaseDescriptor::Pair {
                a: 1,
                b: 2,
                signs: (Sign::Neg, Sign::Neg)
            }
        );
        assert_eq!(
            three[7],
            CaseDescriptor::Pair {
                a: 1,
                b: 3,
                signs: (Sign::Pos, Sign::Pos)
            }
        );
    }

    fn render_case(case: CaseDescriptor) -> Vec<String> {
        let b = reduce(&sys("x1 != 0\nx2 != 0\nx3 != 0")).unwrap();
        let alp = b.alps.iter().find(|a| a.case == case).unwrap();
        case_rows(&case, &b.gadget)
            .unwrap()
            .iter()
            .map(|r| render_alp_row(r, alp))
            .collect()
    }

    #[test]
    fn case_rows_for_signs() {
        let pos = CaseDescriptor::Pair {
            a: 1,
            b: 3,
            signs: (Sign::Pos, Sign::Pos),
        };
        assert_eq!(
            render_case(pos),
            ["e - z1 <= 0", "e - z3 <= 0", "1 - K e <= 0"]
        );
        let neg = CaseDescriptor::Pair {
            a: 1,
            b: 2,
            signs: (Sign::Neg, Sign::Neg),
        };
        assert_eq!(
            render_case(neg),
            ["e + z1 <= 0", "e + z2 <= 0", "1 - K e <= 0"]
        );
    }

    #[test]
    fn single_case_rows() {
        let b = reduce(&sys("x != 2")).unwrap();
        assert_eq!(b.alps.len(), 2);
        let alp = &b.alps[1];
        assert_eq!(alp.case, CaseDescriptor::Single(Sign::Pos));
        let rows = case_rows(&alp.case, &b.gadget).unwrap();
        assert_eq!(render_alp_row(&rows[0], alp), "e - f1 <= 0");
        assert_eq!(render_alp_row(&rows[1], alp), "1 - K e <= 0");
        assert!(case_rows(&CaseDescriptor::Empty, &b.gadget)
            .unwrap()
            .is_empty());
    }

    #[test]
    fn plain_system_has_one_alp_without_slack() {
        let b = reduce(&sys("x <= 1")).unwrap();
        assert_eq!(b.alps.len(), 1);
        assert_eq!(b.alps[0].variables, ["x"]);
        assert_eq!(
            b.alps[0].rows,
            vec![AlpConstraint::from_le(&sys("x <= 1").constraints()[0])]
        );
        let b = reduce(&sys("x + y <= 1\nx = 2")).unwrap();
        assert!(b.gadget.e.is_none());
        assert!(b.alps[0].rows.iter().all(|r| r.max_degree() == 0));
    }

    #[test]
    fn decide_examples() {
        let opts = DecideOptions::default();
        let v = decide_feasibility(&sys("x <= 0\n-x <= 0\nx != 0"), &opts).unwrap();
        assert_eq!(v, Verdict::infeasible());

        let s = sys("x < 1\nx != 0");
        let v = decide_feasibility(&s, &opts).unwrap();
        assert_eq!(v.status, Status::Feasible);
        let w = v.witness.unwrap();
        assert!(s.check_point(&w.point, &w.k0).is_ok());
    }

    #[test]
    fn decide_is_independent_of_jobs() {
        let s = sys("x + y < 2\nx != 0\ny != 0\nx - y != 1\n-x <= 3");
        let seq = decide_feasibility(&s, &DecideOptions::default()).unwrap();
        let par = decide_feasibility(
            &s,
            &DecideOptions {
                jobs: 4,
                ..DecideOptions::default()
            },
        )
        .unwrap();
        assert_eq!(seq, par);
    }

    /// Three disequalities where the first is forced to zero: the system is
    /// infeasible, yet the (2,3) sign cases are feasible ALPs because
    /// `y2 + y3 = 0` is compatible with `z2 > 0 > z3`. No witness from them
    /// can satisfy the input, so the result is an error, not a verdict.
    #[test]
    fn forced_zero_disequality_is_inconclusive() {
        let s = sys("x <= 0\n-x <= 0\nx != 0\nu != 0\nv != 0");
        let b = reduce(&s).unwrap();
        let case = CaseDescriptor::Pair {
            a: 2,
            b: 3,
            signs: (Sign::Pos, Sign::Neg),
        };
        let alp = b.alps.iter().find(|a| a.case == case).unwrap();
        let out = alp_feasible(alp, &SolverOptions::default()).unwrap();
        assert_eq!(out.status, Status::Feasible);
        match decide_feasibility(&s, &DecideOptions::default()) {
            Err(Error::UnverifiedReduction { cases }) => assert!(cases.contains(&case)),
            other => panic!("expected an inconclusive reduction, got {other:?}"),
        }
    }

    #[test]
    fn augment_adds_rows() {
        let s = sys("vars x1 x2 x5 x13 xN\nx1 + x2 + x5 + x13 + xN <= 7");
        let subset: Vec<String> = ["x2", "x5", "x13", "xN"].map(String::from).to_vec();
        let a = augment_nontrivial(&s, &subset).unwrap();
        assert_eq!(a.constraints().len(), s.constraints().len() + 5);
        assert_eq!(
            a.constraints()[1],
            sys("w1 + w2 + w3 + w4 != 0").constraints()[0]
        );
        assert!(same_equality(
            &a.constraints()[5],
            &sys("vars xN w4\nxN - (K+4) w4 = 0").constraints()[0]
        ));
        assert_eq!(
            a.counts(),
            Counts {
                n: 9,
                p: 1,
                q: 0,
                r: 1,
                eq: 4
            }
        );
        assert_eq!(
            augment_nontrivial(&s, &["q".to_string()]).unwrap_err(),
            Error::UnknownVariable("q".into())
        );
        assert_eq!(
            augment_nontrivial(&s, &["x2".to_string(), "x2".to_string()]).unwrap_err(),
            Error::DuplicateVariable("x2".into())
        );
        assert!(augment_nontrivial(&s, &[]).is_err());
    }

    #[test]
    fn nontrivial_examples() {
        let opts = DecideOptions::default();
        let forced = sys("x1 <= 0\n-x1 <= 0");
        let a = augment_nontrivial(&forced, &["x1".to_string()]).unwrap();
        assert_eq!(
            decide_feasibility(&a, &opts).unwrap().status,
            Status::Infeasible
        );

        let free = sys("vars x1 x2\nx1 <= 0\n-x1 <= 0");
        let a = augment_nontrivial(&free, &["x2".to_string()]).unwrap();
        let v = decide_feasibility(&a, &opts).unwrap();
        assert_eq!(v.status, Status::Feasible);
        let w = v.witness.unwrap();
        assert!(!w.point["x2"].is_zero());
    }

    #[test]
    fn offset_sums_examples() {
        let y = offset_sums(&[int(1), int(0), int(0)]);
        assert!(y[0].is_zero());
        assert_eq!(y[1], KRatFun::new(KPoly::one(), KPoly::k_plus(1)).unwrap());
        let y = offset_sums(&[int(2), int(-3)]);
        assert!(y.iter().all(|f| !f.is_zero()));
    }

    #[test]
    fn determinant_small_cases() {
        assert_eq!(gadget_matrix_det(2).unwrap(), int(-1));
        assert!(gadget_matrix_det(1).is_err());
    }
}
