//! Exact arithmetic: rationals, polynomials in the time parameter `K`, and
//! the ordered field of rational functions in `K` compared at `+inf`.

mod poly;
mod ratfun;
mod rational;

use std::cmp::Ordering;
use std::fmt::Debug;

use num_traits::{Signed, Zero};
use thiserror::Error;

pub use poly::KPoly;
pub use ratfun::{eval_at, ratfun_arith, ratfun_compare, sign_at_infinity, KRatFun, RatFunOp};
pub use rational::{
    denominator_lcm, frac, int, numerator_gcd, parse_rational, pow2, rat_arith, sign, RatOp,
    Rational,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NumericError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("evaluation at a pole (K = {0})")]
    Pole(Rational),
    #[error("malformed number `{0}`")]
    Parse(String),
}

/// The operations the simplex engine needs from its scalar type.
///
/// Implemented by [`Rational`] (ordinary LPs at a fixed `K`) and by
/// [`KRatFun`] (the asymptotic LP, ordered at `K -> +inf`).
pub trait OrderedField: Clone + PartialEq + Debug + Send + Sync {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn signum(&self) -> Ordering;
    fn add(&self, rhs: &Self) -> Self;
    fn sub(&self, rhs: &Self) -> Self;
    fn mul(&self, rhs: &Self) -> Self;
    /// Callers guarantee `rhs != 0`.
    fn div(&self, rhs: &Self) -> Self;
    fn neg(&self) -> Self;
    fn cmp_field(&self, rhs: &Self) -> Ordering {
        self.sub(rhs).signum()
    }
}

impl OrderedField for Rational {
    fn zero() -> Self {
        <Rational as Zero>::zero()
    }
    fn one() -> Self {
        <Rational as num_traits::One>::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn signum(&self) -> Ordering {
        if self.is_positive() {
            Ordering::Greater
        } else if self.is_negative() {
            Ordering::Less
        } else {
            Ordering::Equal
        }
    }
    fn add(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn sub(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn mul(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn div(&self, rhs: &Self) -> Self {
        self / rhs
    }
    fn neg(&self) -> Self {
        -self
    }
    fn cmp_field(&self, rhs: &Self) -> Ordering {
        Ord::cmp(self, rhs)
    }
}

impl OrderedField for KRatFun {
    fn zero() -> Self {
        KRatFun::zero()
    }
    fn one() -> Self {
        KRatFun::one()
    }
    fn is_zero(&self) -> bool {
        KRatFun::is_zero(self)
    }
    fn signum(&self) -> Ordering {
        self.sign_at_infinity().cmp(&0)
    }
    fn add(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn sub(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn mul(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn div(&self, rhs: &Self) -> Self {
        self.checked_div(rhs)
            .expect("simplex divides by nonzero pivots")
    }
    fn neg(&self) -> Self {
        -self
    }
    fn cmp_field(&self, rhs: &Self) -> Ordering {
        self.compare(rhs)
    }
}
