//! Dense phase-1 simplex over any [`OrderedField`], with Bland's rule.

use std::cmp::Ordering;

use crate::error::{Error, Result};
use crate::numeric::OrderedField;

/// Environment variable overriding the default pivot bound.
pub const PIVOT_LIMIT_ENV: &str = "ALPFEAS_PIVOT_LIMIT";

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SolverOptions {
    /// Maximum pivots; `None` means `10 * rows * columns`.
    pub pivot_limit: Option<usize>,
    /// Verify the basis and the objective trace after every pivot.
    pub check_invariants: bool,
}

impl SolverOptions {
    /// Default options, with the pivot bound taken from
    /// [`PIVOT_LIMIT_ENV`] when set to a positive integer.
    pub fn from_env() -> Self {
        let pivot_limit = std::env::var(PIVOT_LIMIT_ENV)
            .ok()
            .and_then(|v| v.trim().parse::<usize>().ok())
            .filter(|&v| v > 0);
        SolverOptions {
            pivot_limit,
            check_invariants: false,
        }
    }
}

/// Row `sum(coeffs[j] * x_j) <= rhs` over free variables `x`.
#[derive(Clone, Debug)]
pub struct LeRow<T> {
    pub coeffs: Vec<T>,
    pub rhs: T,
}

#[derive(Clone, Debug)]
pub struct Phase1Outcome<T> {
    pub feasible: bool,
    /// Values of the free variables at the final basis; present iff feasible.
    pub values: Option<Vec<T>>,
    pub pivots: usize,
    /// Phase-1 objective after setup and after each pivot. Recorded only
    /// with `check_invariants`.
    pub objective_trace: Vec<T>,
    /// Every nonzero entry of the final tableau: coefficients, rhs, reduced
    /// costs and the objective. Wherever all of them keep their sign, the
    /// final basis is still optimal.
    pub final_entries: Vec<T>,
}

struct Tableau<T> {
    rows: Vec<Vec<T>>,
    rhs: Vec<T>,
    basis: Vec<usize>,
    reduced: Vec<T>,
    objective: T,
    n_cols: usize,
}

impl<T: OrderedField> Tableau<T> {
    fn pivot(&mut self, r: usize, c: usize) {
        let inv = T::one().div(&self.rows[r][c]);
        for v in self.rows[r].iter_mut() {
            if !v.is_zero() {
                *v = v.mul(&inv);
            }
        }
        self.rhs[r] = self.rhs[r].mul(&inv);
        let support: Vec<usize> = (0..self.n_cols)
            .filter(|&k| !self.rows[r][k].is_zero())
            .collect();
        let (pivot_row, pivot_rhs) = (self.rows[r].clone(), self.rhs[r].clone());
        for i in 0..self.rows.len() {
            if i == r || self.rows[i][c].is_zero() {
                continue;
            }
            let factor = self.rows[i][c].clone();
            for &k in &support {
                let d = factor.mul(&pivot_row[k]);
                self.rows[i][k] = self.rows[i][k].sub(&d);
            }
            self.rhs[i] = self.rhs[i].sub(&factor.mul(&pivot_rhs));
        }
        let dc = self.reduced[c].clone();
        if !dc.is_zero() {
            for &k in &support {
                let d = dc.mul(&pivot_row[k]);
                self.reduced[k] = self.reduced[k].sub(&d);
            }
            self.objective = self.objective.add(&dc.mul(&pivot_rhs));
        }
        self.basis[r] = c;
    }

    fn entering(&self) -> Option<usize> {
        // Bland: lowest-index column with negative reduced cost.
        (0..self.n_cols).find(|&j| self.reduced[j].signum() == Ordering::Less)
    }

    fn leaving(&self, c: usize) -> Option<usize> {
        let mut best: Option<(usize, T)> = None;
        for i in 0..self.rows.len() {
            let a = &self.rows[i][c];
            if a.signum() != Ordering::Greater {
                continue;
            }
            let ratio = self.rhs[i].div(a);
            best = match best {
                None => Some((i, ratio)),
                Some((bi, br)) => match ratio.cmp_field(&br) {
                    Ordering::Less => Some((i, ratio)),
                    Ordering::Equal if self.basis[i] < self.basis[bi] => Some((i, ratio)),
                    _ => Some((bi, br)),
                },
            };
        }
        best.map(|(i, _)| i)
    }

    fn check(&self) {
        for (i, &b) in self.basis.iter().enumerate() {
            for (k, row) in self.rows.iter().enumerate() {
                let expect_one = k == i;
                let v = &row[b];
                assert!(
                    if expect_one {
                        *v == T::one()
                    } else {
                        v.is_zero()
                    },
                    "basis column {b} is not a unit column"
                );
            }
            assert!(self.reduced[b].is_zero(), "basic column has a reduced cost");
            assert_ne!(self.rhs[i].signum(), Ordering::Less, "negative rhs");
        }
    }
}

/// Decides whether `rows` (all `<=`, over free variables) has a solution.
///
/// Each free variable is split into a nonnegative pair, every row gets a
/// slack, and rows with negative rhs get an artificial. The artificial sum
/// is minimized with Bland's rule; the system is feasible iff the minimum
/// is zero.
pub fn phase1<T: OrderedField>(
    n_vars: usize,
    rows: &[LeRow<T>],
    options: &SolverOptions,
) -> Result<Phase1Outcome<T>> {
    let m = rows.len();
    let n_art = rows
        .iter()
        .filter(|r| r.rhs.signum() == Ordering::Less)
        .count();
    let n_cols = 2 * n_vars + m + n_art;
    let mut tab = Tableau {
        rows: Vec::with_capacity(m),
        rhs: Vec::with_capacity(m),
        basis: Vec::with_capacity(m),
        reduced: vec![T::zero(); n_cols],
        objective: T::zero(),
        n_cols,
    };
    let mut next_art = 2 * n_vars + m;
    for (i, row) in rows.iter().enumerate() {
        assert_eq!(row.coeffs.len(), n_vars, "row width mismatch");
        let negative = row.rhs.signum() == Ordering::Less;
        let flip = |v: &T| if negative { v.neg() } else { v.clone() };
        let mut dense = vec![T::zero(); n_cols];
        for (j, a) in row.coeffs.iter().enumerate() {
            if !a.is_zero() {
                dense[2 * j] = flip(a);
                dense[2 * j + 1] = flip(a).neg();
            }
        }
        dense[2 * n_vars + i] = flip(&T::one());
        let rhs = flip(&row.rhs);
        if negative {
            dense[next_art] = T::one();
            tab.basis.push(next_art);
            next_art += 1;
            for (d, v) in tab.reduced.iter_mut().zip(&dense) {
                if !v.is_zero() {
                    *d = d.sub(v);
                }
            }
            tab.reduced[tab.basis[i]] = T::zero();
            tab.objective = tab.objective.add(&rhs);
        } else {
            tab.basis.push(2 * n_vars + i);
        }
        tab.rows.push(dense);
        tab.rhs.push(rhs);
    }

    let limit = options
        .pivot_limit
        .unwrap_or_else(|| 10 * m.max(1) * n_cols.max(1));
    let mut trace = Vec::new();
    if options.check_invariants {
        tab.check();
        trace.push(tab.objective.clone());
    }
    let mut pivots = 0;
    while let Some(c) = tab.entering() {
        if pivots >= limit {
            return Err(Error::PivotLimit { limit });
        }
        let r = tab.leaving(c).ok_or(Error::Unbounded)?;
        tab.pivot(r, c);
        pivots += 1;
        if options.check_invariants {
            tab.check();
            let last = trace.last().expect("initial objective recorded");
            assert_ne!(
                tab.objective.cmp_field(last),
                Ordering::Greater,
                "phase-1 objective increased"
            );
            trace.push(tab.objective.clone());
        }
    }

    let feasible = tab.objective.is_zero();
    let values = feasible.then(|| {
        let mut col_value = vec![T::zero(); n_cols];
        for (i, &b) in tab.basis.iter().enumerate() {
            col_value[b] = tab.rhs[i].clone();
        }
        (0..n_vars)
            .map(|j| col_value[2 * j].sub(&col_value[2 * j + 1]))
            .collect()
    });
    let final_entries = tab
        .rows
        .iter()
        .flatten()
        .chain(&tab.rhs)
        .chain(&tab.reduced)
        .chain(std::iter::once(&tab.objective))
        .filter(|v| !v.is_zero())
        .cloned()
        .collect();
    Ok(Phase1Outcome {
        feasible,
        values,
        pivots,
        objective_trace: trace,
        final_entries,
    })
}
