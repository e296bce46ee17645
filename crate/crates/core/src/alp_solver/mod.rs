//! Feasibility of one asymptotic LP for all sufficiently large `K`.
//!
//! The LP is solved once over the ordered field of rational functions in
//! `K` (compared at `+inf`), so a feasible basis yields a rational-function
//! solution valid for every large enough real `K`. The same engine over
//! plain rationals gives the fixed-`K` cross-check.

mod simplex;

use std::collections::BTreeMap;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::model::{AlpProblem, LinearSystem, Status, Witness};
use crate::numeric::{pow2, KPoly, KRatFun, NumericError, OrderedField, Rational};

pub use simplex::{phase1, LeRow, Phase1Outcome, SolverOptions, PIVOT_LIMIT_ENV};

/// Largest exponent tried when searching for a concrete `K = 2^t`.
pub const MAX_K_EXPONENT: u32 = 128;

#[derive(Clone, Debug)]
pub struct AlpOutcome {
    pub status: Status,
    /// Value of every ALP variable; present iff feasible.
    pub symbolic: Option<BTreeMap<String, KRatFun>>,
    pub pivots: usize,
    pub objective_trace: Vec<KRatFun>,
}

fn rows_over<T: OrderedField>(alp: &AlpProblem, coeff: impl Fn(&KPoly) -> T) -> Vec<LeRow<T>> {
    let index: BTreeMap<&str, usize> = alp
        .variables
        .iter()
        .enumerate()
        .map(|(i, v)| (v.as_str(), i))
        .collect();
    alp.rows
        .iter()
        .map(|row| {
            let mut coeffs = vec![T::zero(); alp.variables.len()];
            for (v, c) in &row.coeffs {
                let j = *index
                    .get(v.as_str())
                    .unwrap_or_else(|| panic!("row mentions undeclared ALP variable `{v}`"));
                coeffs[j] = coeff(c);
            }
            LeRow {
                coeffs,
                rhs: coeff(&row.rhs),
            }
        })
        .collect()
}

pub fn alp_feasible(alp: &AlpProblem, options: &SolverOptions) -> Result<AlpOutcome> {
    let rows = rows_over(alp, |p| KRatFun::from_poly(p.clone()));
    let out = phase1(alp.variables.len(), &rows, options)?;
    let symbolic = out
        .values
        .map(|vals| alp.variables.iter().cloned().zip(vals).collect());
    Ok(AlpOutcome {
        status: if out.feasible {
            Status::Feasible
        } else {
            Status::Infeasible
        },
        symbolic,
        pivots: out.pivots,
        objective_trace: out.objective_trace,
    })
}

/// Substitutes `K = k` and solves the resulting ordinary LP exactly.
pub fn fixed_k_feasible(alp: &AlpProblem, k: &Rational, options: &SolverOptions) -> Result<Status> {
    let rows = rows_over(alp, |p| p.eval(k));
    let out = phase1(alp.variables.len(), &rows, options)?;
    Ok(if out.feasible {
        Status::Feasible
    } else {
        Status::Infeasible
    })
}

/// Evaluates the input variables of a symbolic witness at `K = 2^t`,
/// `t = 0, 1, ...`, until the exact point satisfies every constraint of
/// `system` (strict rows strictly). Poles are skipped.
pub fn concretize_witness(
    symbolic: &BTreeMap<String, KRatFun>,
    system: &LinearSystem,
) -> Result<Witness> {
    let funcs: Vec<(&String, &KRatFun)> = system
        .variables()
        .iter()
        .map(|v| {
            symbolic
                .get(v)
                .map(|f| (v, f))
                .ok_or_else(|| Error::UnknownVariable(v.clone()))
        })
        .collect::<Result<_>>()?;
    'trial: for t in 0..=MAX_K_EXPONENT {
        let k = pow2(t);
        let mut point = BTreeMap::new();
        for (v, f) in &funcs {
            match f.eval_at(&k) {
                Ok(x) => {
                    point.insert((*v).clone(), x);
                }
                Err(NumericError::Pole(_)) => continue 'trial,
                Err(e) => return Err(e.into()),
            }
        }
        if system.check_point(&point, &k).is_ok() {
            return Ok(Witness {
                symbolic: symbolic.clone(),
                k0: k,
                point,
            });
        }
    }
    Err(Error::WitnessExhausted {
        max_exponent: MAX_K_EXPONENT,
    })
}

/// Checks every ALP row under the order at infinity.
pub fn satisfies_symbolically(alp: &AlpProblem, values: &BTreeMap<String, KRatFun>) -> bool {
    alp.rows.iter().all(|r| r.holds_symbolic(values))
}

/// Decides `alp` and returns a power of two `k0` beyond which the status
/// provably holds at every concrete `K`: past the real roots of all entries
/// of the final symbolic tableau, that basis is still feasible and optimal
/// for the phase-1 problem at `K`, so the objective there has the same sign.
pub fn steady_state_threshold(
    alp: &AlpProblem,
    options: &SolverOptions,
) -> Result<(Status, Rational)> {
    let rows = rows_over(alp, |p| KRatFun::from_poly(p.clone()));
    let out = phase1(alp.variables.len(), &rows, options)?;
    let mut bound = <Rational as Zero>::zero();
    for f in &out.final_entries {
        bound = bound.max(root_bound(f.numer())).max(root_bound(f.denom()));
    }
    let mut k = <Rational as One>::one();
    while k <= bound {
        k *= Rational::from_integer(2.into());
    }
    let status = if out.feasible {
        Status::Feasible
    } else {
        Status::Infeasible
    };
    Ok((status, k))
}

/// Cauchy bound: every real root of `p` lies below `1 + max |a_i / a_n|`.
fn root_bound(p: &KPoly) -> Rational {
    let Some(lc) = p.leading_coeff() else {
        return <Rational as Zero>::zero();
    };
    let max = p
        .coeffs()
        .iter()
        .map(|c| (c / lc).abs())
        .max()
        .unwrap_or_else(<Rational as Zero>::zero);
    max + <Rational as One>::one()
}
