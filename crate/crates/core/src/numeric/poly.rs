use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_traits::{One, Signed, Zero};

use super::rational::{int, parse_rational, sign, Rational};
use super::NumericError;

/// Univariate polynomial in the time parameter `K` with exact rational
/// coefficients. `coeffs[d]` is the coefficient of `K^d`; trailing zeros are
/// never stored, so the zero polynomial has no coefficients.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct KPoly {
    coeffs: Vec<Rational>,
}

impl KPoly {
    pub fn zero() -> Self {
        KPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Self::from_coeffs(vec![c])
    }

    /// The polynomial `K`.
    pub fn k() -> Self {
        Self::from_coeffs(vec![Rational::zero(), Rational::one()])
    }

    /// `K + c`.
    pub fn k_plus(c: i64) -> Self {
        Self::from_coeffs(vec![int(c), Rational::one()])
    }

    /// Coefficients are listed lowest degree first.
    pub fn from_coeffs(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        KPoly { coeffs }
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    /// The constant term; zero for the zero polynomial.
    pub fn constant_term(&self) -> Rational {
        self.coeffs.first().cloned().unwrap_or_else(Rational::zero)
    }

    pub fn leading_coeff(&self) -> Option<&Rational> {
        self.coeffs.last()
    }

    /// Sign of the polynomial for all sufficiently large `K`.
    pub fn sign_at_infinity(&self) -> i8 {
        self.leading_coeff().map_or(0, sign)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        KPoly {
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    pub fn eval(&self, k: &Rational) -> Rational {
        self.coeffs
            .iter()
            .rev()
            .fold(Rational::zero(), |acc, c| acc * k + c)
    }

    /// Scales so the leading coefficient is one. Zero stays zero.
    pub fn monic(&self) -> Self {
        match self.leading_coeff() {
            Some(lc) if !lc.is_one() => self.scale(&lc.recip()),
            _ => self.clone(),
        }
    }

    /// Euclidean division; errors on a zero divisor.
    pub fn div_rem(&self, divisor: &KPoly) -> Result<(KPoly, KPoly), NumericError> {
        let dd = divisor.degree().ok_or(NumericError::DivisionByZero)?;
        let lc_inv = divisor.coeffs[dd].recip();
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return Ok((KPoly::zero(), self.clone()));
        }
        let mut quot = vec![Rational::zero(); rem.len() - dd];
        for i in (0..quot.len()).rev() {
            let c = &rem[i + dd] * &lc_inv;
            if c.is_zero() {
                continue;
            }
            for (j, d) in divisor.coeffs.iter().enumerate() {
                rem[i + j] -= &c * d;
            }
            quot[i] = c;
        }
        rem.truncate(dd);
        Ok((KPoly::from_coeffs(quot), KPoly::from_coeffs(rem)))
    }

    /// Monic greatest common divisor; `gcd(0, 0) = 0`.
    pub fn gcd(&self, other: &KPoly) -> KPoly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            if b.is_constant() {
                return KPoly::one();
            }
            let (_, r) = a.div_rem(&b).expect("nonzero divisor");
            a = b;
            b = r;
        }
        a.monic()
    }
}

impl fmt::Debug for KPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "KPoly({self})")
    }
}

/// Terms `c*K^d` in decreasing degree with no spaces, unit coefficients
/// elided: `K+2`, `-K`, `3*K^2-1/2`.
impl fmt::Display for KPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (d, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            if c.is_negative() {
                f.write_str("-")?;
            } else if !first {
                f.write_str("+")?;
            }
            first = false;
            match d {
                0 => write!(f, "{mag}")?,
                _ => {
                    if !mag.is_one() {
                        write!(f, "{mag}*")?;
                    }
                    f.write_str("K")?;
                    if d > 1 {
                        write!(f, "^{d}")?;
                    }
                }
            }
        }
        Ok(())
    }
}

/// Accepts the `Display` form, with optional spaces and `*`.
impl FromStr for KPoly {
    type Err = NumericError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || NumericError::Parse(s.to_string());
        let text: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if text.is_empty() {
            return Err(bad());
        }
        let mut coeffs: Vec<Rational> = Vec::new();
        let mut rest = text.as_str();
        let mut first = true;
        while !rest.is_empty() {
            let negative = match rest.as_bytes()[0] {
                b'+' => {
                    rest = &rest[1..];
                    false
                }
                b'-' => {
                    rest = &rest[1..];
                    true
                }
                _ if first => false,
                _ => return Err(bad()),
            };
            first = false;
            let end = rest[1.min(rest.len())..]
                .find(['+', '-'])
                .map_or(rest.len(), |i| i + 1);
            let term = &rest[..end];
            rest = &rest[end..];
            let (coef, degree) = match term.find('K') {
                None => (parse_rational(term)?, 0usize),
                Some(kpos) => {
                    let coef_text = term[..kpos].trim_end_matches('*');
                    let coef = if coef_text.is_empty() {
                        Rational::one()
                    } else {
                        parse_rational(coef_text)?
                    };
                    let tail = &term[kpos + 1..];
                    let degree = if tail.is_empty() {
                        1
                    } else {
                        tail.strip_prefix('^')
                            .and_then(|d| d.parse().ok())
                            .ok_or_else(bad)?
                    };
                    (coef, degree)
                }
            };
            if coeffs.len() <= degree {
                coeffs.resize(degree + 1, Rational::zero());
            }
            coeffs[degree] += if negative { -coef } else { coef };
        }
        Ok(KPoly::from_coeffs(coeffs))
    }
}

impl PartialOrd for KPoly {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// Structural order on coefficient lists; used only for deterministic
/// sorting, not the field order at infinity.
impl Ord for KPoly {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.coeffs.cmp(&other.coeffs)
    }
}

impl From<Rational> for KPoly {
    fn from(c: Rational) -> Self {
        KPoly::constant(c)
    }
}

impl Add for &KPoly {
    type Output = KPoly;

    fn add(self, rhs: &KPoly) -> KPoly {
        let (long, short) = if self.coeffs.len() >= rhs.coeffs.len() {
            (self, rhs)
        } else {
            (rhs, self)
        };
        let mut coeffs = long.coeffs.clone();
        for (c, s) in coeffs.iter_mut().zip(&short.coeffs) {
            *c += s;
        }
        KPoly::from_coeffs(coeffs)
    }
}

impl Sub for &KPoly {
    type Output = KPoly;

    fn sub(self, rhs: &KPoly) -> KPoly {
        let mut coeffs = self.coeffs.clone();
        if coeffs.len() < rhs.coeffs.len() {
            coeffs.resize(rhs.coeffs.len(), Rational::zero());
        }
        for (c, s) in coeffs.iter_mut().zip(&rhs.coeffs) {
            *c -= s;
        }
        KPoly::from_coeffs(coeffs)
    }
}

impl Mul for &KPoly {
    type Output = KPoly;

    fn mul(self, rhs: &KPoly) -> KPoly {
        if self.is_zero() || rhs.is_zero() {
            return KPoly::zero();
        }
        let mut coeffs = vec![Rational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        KPoly::from_coeffs(coeffs)
    }
}

impl Neg for &KPoly {
    type Output = KPoly;

    fn neg(self) -> KPoly {
        KPoly {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

macro_rules! forward_owned {
    ($($tr:ident :: $m:ident),*) => {$(
        impl $tr for KPoly {
            type Output = KPoly;
            fn $m(self, rhs: KPoly) -> KPoly {
                (&self).$m(&rhs)
            }
        }
    )*};
}
forward_owned!(Add::add, Sub::sub, Mul::mul);

impl Neg for KPoly {
    type Output = KPoly;

    fn neg(self) -> KPoly {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::rational::frac;

    fn p(s: &str) -> KPoly {
        s.parse().unwrap()
    }

    #[test]
    fn display_forms() {
        assert_eq!(KPoly::k_plus(2).to_string(), "K+2");
        assert_eq!((-KPoly::k()).to_string(), "-K");
        assert_eq!(KPoly::zero().to_string(), "0");
        assert_eq!(
            KPoly::from_coeffs(vec![frac(-1, 2), int(0), int(3)]).to_string(),
            "3*K^2-1/2"
        );
    }

    #[test]
    fn parse_display_agree() {
        for s in ["K+2", "-K", "3*K^2-1/2", "0", "7", "-2*K+1/3", "K^3"] {
            assert_eq!(p(s).to_string(), s);
        }
        assert_eq!(p("2 K + 1"), p("2*K+1"));
        assert!("K^".parse::<KPoly>().is_err());
        assert!("K**2".parse::<KPoly>().is_err());
    }

    #[test]
    fn product_of_linear_factors() {
        assert_eq!(&KPoly::k_plus(1) * &KPoly::k_plus(2), p("K^2+3*K+2"));
    }

    #[test]
    fn division_and_gcd() {
        let a = p("K^2+3*K+2");
        let (q, r) = a.div_rem(&KPoly::k_plus(1)).unwrap();
        assert_eq!(q, KPoly::k_plus(2));
        assert!(r.is_zero());
        let b = p("2*K^2+2*K");
        assert_eq!(a.gcd(&b), KPoly::k_plus(1));
        assert_eq!(KPoly::k_plus(1).gcd(&KPoly::k_plus(2)), KPoly::one());
        assert!(a.div_rem(&KPoly::zero()).is_err());
    }

    #[test]
    fn evaluation() {
        assert_eq!(p("K^2").eval(&frac(3, 2)), frac(9, 4));
        assert_eq!(p("K-5").sign_at_infinity(), 1);
        assert_eq!(p("3-K").sign_at_infinity(), -1);
    }
}
