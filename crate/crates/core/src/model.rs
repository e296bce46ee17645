//! Input systems, generated asymptotic LPs, sign cases and verdicts.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::numeric::{denominator_lcm, numerator_gcd, KPoly, KRatFun, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("variable `{0}` is used but not declared")]
    UndeclaredVariable(String),
    #[error("variable `{0}` is declared twice")]
    DuplicateVariable(String),
    #[error("`{0}` is not a valid variable name")]
    InvalidName(String),
}

/// Relational operator of a validated constraint. `>=` and `>` are
/// normalized away before a [`Constraint`] is built.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Relop {
    Le,
    Lt,
    Eq,
    Ne,
}

impl Relop {
    pub fn symbol(self) -> &'static str {
        match self {
            Relop::Le => "<=",
            Relop::Lt => "<",
            Relop::Eq => "=",
            Relop::Ne => "!=",
        }
    }
}

/// Operators as written in source text, before normalization.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RawRelop {
    Le,
    Lt,
    Eq,
    Ne,
    Ge,
    Gt,
}

/// Linear expression `sum(coeff * var) + constant`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LinExpr {
    pub terms: BTreeMap<String, KPoly>,
    pub constant: Rational,
}

impl LinExpr {
    pub fn add_term(&mut self, var: &str, coeff: KPoly) {
        let entry = self.terms.entry(var.to_string()).or_default();
        *entry = &*entry + &coeff;
        if entry.is_zero() {
            self.terms.remove(var);
        }
    }
}

pub fn is_valid_name(name: &str) -> bool {
    let mut chars = name.chars();
    let head_ok = chars
        .next()
        .is_some_and(|c| c.is_ascii_alphabetic() || c == '_');
    head_ok && chars.all(|c| c.is_ascii_alphanumeric() || c == '_') && name != "K"
}

/// One row `sum(coeff * var) relop rhs`. Coefficients may be polynomials in
/// `K` (the non-triviality augmentation produces `x = (K+j) w` rows); parsed
/// input rows are constant.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Constraint {
    pub coeffs: BTreeMap<String, KPoly>,
    pub relop: Relop,
    pub rhs: Rational,
}

impl Constraint {
    pub fn new(
        coeffs: impl IntoIterator<Item = (String, KPoly)>,
        relop: Relop,
        rhs: Rational,
    ) -> Self {
        let coeffs = coeffs.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        Constraint { coeffs, relop, rhs }
    }

    /// Scales `=` and `!=` rows by `-1` when every coefficient is negative,
    /// so `3 = x` and `x = 3` coincide.
    pub fn oriented(self) -> Self {
        let flip = matches!(self.relop, Relop::Eq | Relop::Ne)
            && !self.coeffs.is_empty()
            && self.coeffs.values().all(|p| p.sign_at_infinity() < 0);
        if flip {
            let (coeffs, rhs) = self.negated_sides();
            Constraint::new(coeffs, self.relop, rhs)
        } else {
            self
        }
    }

    /// Builds a row from `(name, rational coefficient)` pairs.
    pub fn linear<'a>(
        coeffs: impl IntoIterator<Item = (&'a str, Rational)>,
        relop: Relop,
        rhs: Rational,
    ) -> Self {
        Self::new(
            coeffs
                .into_iter()
                .map(|(v, c)| (v.to_string(), KPoly::constant(c))),
            relop,
            rhs,
        )
    }

    pub fn has_constant_coeffs(&self) -> bool {
        self.coeffs.values().all(KPoly::is_constant)
    }

    /// Constant coefficients, or `None` if some coefficient depends on `K`.
    pub fn rational_coeffs(&self) -> Option<BTreeMap<String, Rational>> {
        self.coeffs
            .iter()
            .map(|(v, c)| c.is_constant().then(|| (v.clone(), c.constant_term())))
            .collect()
    }

    /// Multiplies both sides by a positive rational.
    pub fn scaled(&self, factor: &Rational) -> Self {
        assert!(factor.is_positive(), "scaling factor must be positive");
        Constraint {
            coeffs: self
                .coeffs
                .iter()
                .map(|(v, c)| (v.clone(), c.scale(factor)))
                .collect(),
            relop: self.relop,
            rhs: &self.rhs * factor,
        }
    }

    pub fn negated_sides(&self) -> (BTreeMap<String, KPoly>, Rational) {
        (
            self.coeffs.iter().map(|(v, c)| (v.clone(), -c)).collect(),
            -&self.rhs,
        )
    }

    /// Left-hand side value at `point`, with `K = k`. Missing variables are
    /// reported as `Err(name)`.
    pub fn lhs_at(
        &self,
        point: &BTreeMap<String, Rational>,
        k: &Rational,
    ) -> Result<Rational, String> {
        let mut acc = Rational::zero();
        for (v, c) in &self.coeffs {
            let x = point.get(v).ok_or_else(|| v.clone())?;
            acc += c.eval(k) * x;
        }
        Ok(acc)
    }

    pub fn holds_at(
        &self,
        point: &BTreeMap<String, Rational>,
        k: &Rational,
    ) -> Result<bool, String> {
        let lhs = self.lhs_at(point, k)?;
        Ok(match self.relop {
            Relop::Le => lhs <= self.rhs,
            Relop::Lt => lhs < self.rhs,
            Relop::Eq => lhs == self.rhs,
            Relop::Ne => lhs != self.rhs,
        })
    }
}

/// Moves every variable term to the left and the constant to the right, and
/// rewrites `>=`/`>` as `<=`/`<`. See [`Constraint::oriented`] for `=` and
/// `!=` rows.
pub fn normalize(lhs: LinExpr, op: RawRelop, rhs: LinExpr) -> Constraint {
    let mut expr = lhs;
    for (v, c) in rhs.terms {
        expr.add_term(&v, -c);
    }
    let mut coeffs = expr.terms;
    let mut constant = &rhs.constant - &expr.constant;
    let relop = match op {
        RawRelop::Le => Relop::Le,
        RawRelop::Lt => Relop::Lt,
        RawRelop::Eq => Relop::Eq,
        RawRelop::Ne => Relop::Ne,
        RawRelop::Ge | RawRelop::Gt => {
            for c in coeffs.values_mut() {
                *c = -&*c;
            }
            constant = -constant;
            if op == RawRelop::Ge {
                Relop::Le
            } else {
                Relop::Lt
            }
        }
    };
    Constraint::new(coeffs, relop, constant).oriented()
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Counts {
    /// Number of variables.
    pub n: usize,
    /// `<=` rows.
    pub p: usize,
    /// `<` rows.
    pub q: usize,
    /// `!=` rows.
    pub r: usize,
    /// `=` rows.
    pub eq: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearSystem {
    variables: Vec<String>,
    constraints: Vec<Constraint>,
}

impl LinearSystem {
    /// Validates against an explicit declaration list and orients `=` and
    /// `!=` rows.
    pub fn new(variables: Vec<String>, constraints: Vec<Constraint>) -> Result<Self, ModelError> {
        let constraints: Vec<Constraint> =
            constraints.into_iter().map(Constraint::oriented).collect();
        let mut seen = BTreeSet::new();
        for v in &variables {
            if !is_valid_name(v) {
                return Err(ModelError::InvalidName(v.clone()));
            }
            if !seen.insert(v.as_str()) {
                return Err(ModelError::DuplicateVariable(v.clone()));
            }
        }
        for c in &constraints {
            if let Some(v) = c.coeffs.keys().find(|v| !seen.contains(v.as_str())) {
                return Err(ModelError::UndeclaredVariable(v.clone()));
            }
        }
        Ok(LinearSystem {
            variables,
            constraints,
        })
    }

    /// Declares variables in order of first appearance.
    pub fn from_constraints(constraints: Vec<Constraint>) -> Result<Self, ModelError> {
        let mut variables: Vec<String> = Vec::new();
        let mut seen = BTreeSet::new();
        for c in &constraints {
            for v in c.coeffs.keys() {
                if seen.insert(v.clone()) {
                    variables.push(v.clone());
                }
            }
        }
        Self::new(variables, constraints)
    }

    pub fn empty() -> Self {
        LinearSystem {
            variables: Vec::new(),
            constraints: Vec::new(),
        }
    }

    pub fn variables(&self) -> &[String] {
        &self.variables
    }

    pub fn constraints(&self) -> &[Constraint] {
        &self.constraints
    }

    pub fn counts(&self) -> Counts {
        let mut counts = Counts {
            n: self.variables.len(),
            ..Counts::default()
        };
        for c in &self.constraints {
            match c.relop {
                Relop::Le => counts.p += 1,
                Relop::Lt => counts.q += 1,
                Relop::Ne => counts.r += 1,
                Relop::Eq => counts.eq += 1,
            }
        }
        counts
    }

    pub fn rows_with(&self, relop: Relop) -> impl Iterator<Item = &Constraint> {
        self.constraints.iter().filter(move |c| c.relop == relop)
    }

    pub fn is_constant(&self) -> bool {
        self.constraints.iter().all(Constraint::has_constant_coeffs)
    }

    /// Returns a copy with constraint `index` multiplied by `factor > 0`.
    pub fn with_scaled_row(&self, index: usize, factor: &Rational) -> Self {
        let mut out = self.clone();
        out.constraints[index] = out.constraints[index].scaled(factor);
        out
    }

    /// Checks every constraint exactly at `point` with `K = k`: `<` and `!=`
    /// strictly, `=` exactly.
    pub fn check_point(
        &self,
        point: &BTreeMap<String, Rational>,
        k: &Rational,
    ) -> Result<(), PointViolation> {
        for (index, c) in self.constraints.iter().enumerate() {
            match c.holds_at(point, k) {
                Ok(true) => {}
                Ok(false) => return Err(PointViolation::Violated { index }),
                Err(var) => return Err(PointViolation::Missing(var)),
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum PointViolation {
    #[error("constraint #{index} is violated")]
    Violated { index: usize },
    #[error("no value for variable `{0}`")]
    Missing(String),
}

/// One ALP row `sum(coeff * var) <= rhs` with coefficients in `K`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AlpConstraint {
    pub coeffs: BTreeMap<String, KPoly>,
    pub rhs: KPoly,
}

impl AlpConstraint {
    pub fn new(coeffs: impl IntoIterator<Item = (String, KPoly)>, rhs: KPoly) -> Self {
        AlpConstraint {
            coeffs: coeffs.into_iter().filter(|(_, c)| !c.is_zero()).collect(),
            rhs,
        }
    }

    /// Lifts a `<=` row of the input system.
    pub fn from_le(c: &Constraint) -> Self {
        debug_assert_eq!(c.relop, Relop::Le);
        Self::new(c.coeffs.clone(), KPoly::constant(c.rhs.clone()))
    }

    /// Positive rescaling that makes every coefficient (including the rhs)
    /// an integer with overall gcd one. Rows equal up to positive scaling
    /// share one canonical form.
    pub fn canonical(&self) -> Self {
        let all: Vec<&Rational> = self
            .coeffs
            .values()
            .chain(std::iter::once(&self.rhs))
            .flat_map(|p| p.coeffs().iter())
            .collect();
        let lcm = denominator_lcm(all.iter().copied());
        let scaled_gcd = numerator_gcd(
            all.iter()
                .map(|c| *c * Rational::from_integer(lcm.clone()))
                .collect::<Vec<_>>()
                .iter(),
        );
        if scaled_gcd.is_zero() {
            return self.clone();
        }
        let factor = Rational::new(lcm, BigInt::one()) / Rational::from_integer(scaled_gcd);
        if factor.is_one() {
            return self.clone();
        }
        AlpConstraint {
            coeffs: self
                .coeffs
                .iter()
                .map(|(v, c)| (v.clone(), c.scale(&factor)))
                .collect(),
            rhs: self.rhs.scale(&factor),
        }
    }

    pub fn max_degree(&self) -> usize {
        self.coeffs
            .values()
            .chain(std::iter::once(&self.rhs))
            .filter_map(KPoly::degree)
            .max()
            .unwrap_or(0)
    }

    /// Checks the row in the ordered field: `sum(coeff * value) <= rhs` at
    /// `K -> +inf`. Missing variables count as zero.
    pub fn holds_symbolic(&self, values: &BTreeMap<String, KRatFun>) -> bool {
        let mut lhs = KRatFun::zero();
        for (v, c) in &self.coeffs {
            if let Some(x) = values.get(v) {
                lhs = &lhs + &(&KRatFun::from_poly(c.clone()) * x);
            }
        }
        lhs <= KRatFun::from_poly(self.rhs.clone())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Neg,
    Pos,
}

impl Sign {
    pub fn as_str(self) -> &'static str {
        match self {
            Sign::Neg => "neg",
            Sign::Pos => "pos",
        }
    }
}

/// The sign case one generated ALP commits to. Indices are 1-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CaseDescriptor {
    /// No disequalities.
    Empty,
    /// Exactly one disequality, with the sign chosen for its `f1`.
    Single(Sign),
    /// Two of the `z` gadget variables, each with a strict sign.
    Pair {
        a: usize,
        b: usize,
        signs: (Sign, Sign),
    },
}

impl fmt::Display for CaseDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CaseDescriptor::Empty => f.write_str("empty"),
            CaseDescriptor::Single(s) => write!(f, "single f1 {}", s.as_str()),
            CaseDescriptor::Pair { a, b, signs } => write!(
                f,
                "pair z{a} {} z{b} {}",
                signs.0.as_str(),
                signs.1.as_str()
            ),
        }
    }
}

/// A generated ALP: every row is `<=`, coefficients have degree at most one
/// in `K`, and no row appears twice.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlpProblem {
    pub variables: Vec<String>,
    /// The first `n_original` entries of `variables` come from the input.
    pub n_original: usize,
    pub rows: Vec<AlpConstraint>,
    pub case: CaseDescriptor,
}

impl AlpProblem {
    /// Canonicalizes every row and drops later duplicates, keeping first
    /// occurrences in order.
    pub fn assemble(
        variables: Vec<String>,
        n_original: usize,
        rows: impl IntoIterator<Item = AlpConstraint>,
        case: CaseDescriptor,
    ) -> Self {
        let mut seen = BTreeSet::new();
        let rows = rows
            .into_iter()
            .map(|r| r.canonical())
            .filter(|r| seen.insert(r.clone()))
            .collect();
        AlpProblem {
            variables,
            n_original,
            rows,
            case,
        }
    }

    pub fn original_variables(&self) -> &[String] {
        &self.variables[..self.n_original]
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Status {
    Feasible,
    Infeasible,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Feasible => "feasible",
            Status::Infeasible => "infeasible",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    /// Rational-function value of every ALP variable.
    pub symbolic: BTreeMap<String, KRatFun>,
    /// Concrete `K` at which `point` was checked.
    pub k0: Rational,
    /// Exact values of the input system's variables at `K = k0`.
    pub point: BTreeMap<String, Rational>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verdict {
    pub status: Status,
    pub feasible_case: Option<CaseDescriptor>,
    pub witness: Option<Witness>,
}

impl Verdict {
    pub fn infeasible() -> Self {
        Verdict {
            status: Status::Infeasible,
            feasible_case: None,
            witness: None,
        }
    }

    pub fn is_feasible(&self) -> bool {
        self.status == Status::Feasible
    }
}
