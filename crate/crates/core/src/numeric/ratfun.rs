use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use super::poly::KPoly;
use super::rational::Rational;
use super::NumericError;

/// Quotient of two polynomials in `K`, ordered by eventual sign as
/// `K -> +inf`.
///
/// Canonical form: the denominator is monic and shares no nonconstant
/// factor with the numerator, so structural equality is field equality.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct KRatFun {
    num: KPoly,
    den: KPoly,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RatFunOp {
    Add,
    Sub,
    Mul,
    Div,
}

impl KRatFun {
    pub fn zero() -> Self {
        KRatFun {
            num: KPoly::zero(),
            den: KPoly::one(),
        }
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        KRatFun {
            num: KPoly::constant(c),
            den: KPoly::one(),
        }
    }

    pub fn from_poly(p: KPoly) -> Self {
        KRatFun {
            num: p,
            den: KPoly::one(),
        }
    }

    pub fn new(num: KPoly, den: KPoly) -> Result<Self, NumericError> {
        if den.is_zero() {
            return Err(NumericError::DivisionByZero);
        }
        Ok(Self::reduced(num, den))
    }

    fn reduced(num: KPoly, den: KPoly) -> Self {
        debug_assert!(!den.is_zero());
        if num.is_zero() {
            return Self::zero();
        }
        if den.is_constant() {
            let inv = den.constant_term().recip();
            return KRatFun {
                num: num.scale(&inv),
                den: KPoly::one(),
            };
        }
        let (num, den) = if num.is_constant() {
            (num, den)
        } else {
            let g = num.gcd(&den);
            if g.is_constant() {
                (num, den)
            } else {
                (
                    num.div_rem(&g).expect("gcd is nonzero").0,
                    den.div_rem(&g).expect("gcd is nonzero").0,
                )
            }
        };
        let lc_inv = den.leading_coeff().expect("nonzero").recip();
        KRatFun {
            num: num.scale(&lc_inv),
            den: den.scale(&lc_inv),
        }
    }

    pub fn numer(&self) -> &KPoly {
        &self.num
    }

    pub fn denom(&self) -> &KPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// Constant sign of `f(K)` for all sufficiently large real `K`.
    pub fn sign_at_infinity(&self) -> i8 {
        // denominator is monic
        self.num.sign_at_infinity()
    }

    pub fn compare(&self, other: &KRatFun) -> Ordering {
        let lhs = &self.num * &other.den;
        let rhs = &other.num * &self.den;
        (&lhs - &rhs).sign_at_infinity().cmp(&0)
    }

    pub fn recip(&self) -> Result<Self, NumericError> {
        Self::new(self.den.clone(), self.num.clone())
    }

    pub fn checked_div(&self, other: &KRatFun) -> Result<Self, NumericError> {
        if other.is_zero() {
            return Err(NumericError::DivisionByZero);
        }
        Ok(Self::reduced(
            &self.num * &other.den,
            &self.den * &other.num,
        ))
    }

    pub fn eval_at(&self, k: &Rational) -> Result<Rational, NumericError> {
        let d = self.den.eval(k);
        if d.is_zero() {
            return Err(NumericError::Pole(k.clone()));
        }
        Ok(self.num.eval(k) / d)
    }

    /// `Some(c)` when the function is the constant `c`.
    pub fn as_constant(&self) -> Option<Rational> {
        (self.num.is_constant() && self.den.is_constant()).then(|| self.num.constant_term())
    }
}

pub fn ratfun_arith(a: &KRatFun, b: &KRatFun, op: RatFunOp) -> Result<KRatFun, NumericError> {
    Ok(match op {
        RatFunOp::Add => a + b,
        RatFunOp::Sub => a - b,
        RatFunOp::Mul => a * b,
        RatFunOp::Div => a.checked_div(b)?,
    })
}

pub fn sign_at_infinity(f: &KRatFun) -> i8 {
    f.sign_at_infinity()
}

pub fn ratfun_compare(a: &KRatFun, b: &KRatFun) -> Ordering {
    a.compare(b)
}

pub fn eval_at(f: &KRatFun, k: &Rational) -> Result<Rational, NumericError> {
    f.eval_at(k)
}

impl PartialOrd for KRatFun {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for KRatFun {
    fn cmp(&self, other: &Self) -> Ordering {
        self.compare(other)
    }
}

impl From<KPoly> for KRatFun {
    fn from(p: KPoly) -> Self {
        Self::from_poly(p)
    }
}

impl From<Rational> for KRatFun {
    fn from(c: Rational) -> Self {
        Self::constant(c)
    }
}

impl fmt::Display for KRatFun {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one_poly() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

impl fmt::Debug for KRatFun {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "KRatFun({self})")
    }
}

impl KPoly {
    fn is_one_poly(&self) -> bool {
        self.coeffs().len() == 1 && self.coeffs()[0].is_one()
    }
}

impl Add for &KRatFun {
    type Output = KRatFun;

    fn add(self, rhs: &KRatFun) -> KRatFun {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        if self.den == rhs.den {
            return KRatFun::reduced(&self.num + &rhs.num, self.den.clone());
        }
        KRatFun::reduced(
            &(&self.num * &rhs.den) + &(&rhs.num * &self.den),
            &self.den * &rhs.den,
        )
    }
}

impl Sub for &KRatFun {
    type Output = KRatFun;

    fn sub(self, rhs: &KRatFun) -> KRatFun {
        self + &(-rhs)
    }
}

impl Mul for &KRatFun {
    type Output = KRatFun;

    fn mul(self, rhs: &KRatFun) -> KRatFun {
        if self.is_zero() || rhs.is_zero() {
            return KRatFun::zero();
        }
        KRatFun::reduced(&self.num * &rhs.num, &self.den * &rhs.den)
    }
}

impl Neg for &KRatFun {
    type Output = KRatFun;

    fn neg(self) -> KRatFun {
        KRatFun {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

impl Neg for KRatFun {
    type Output = KRatFun;

    fn neg(self) -> KRatFun {
        KRatFun {
            num: -self.num,
            den: self.den,
        }
    }
}
