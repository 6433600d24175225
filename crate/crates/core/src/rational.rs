//! Exact rational numbers.
//!
//! [`Rational`] wraps an arbitrary-precision `BigRational` and keeps it in
//! lowest terms with a positive denominator after every operation, so two
//! values are equal exactly when their numerators and denominators are.

use alloc::string::String;
use core::cmp::Ordering;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};
use core::str::FromStr;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ArithError {
    #[error("division by zero")]
    DivisionByZero,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ParseRationalError {
    #[error("empty rational literal")]
    Empty,
    #[error("invalid rational literal `{0}`")]
    Invalid(String),
    #[error("zero denominator in `{0}`")]
    ZeroDenominator(String),
}

/// The four field operations accepted by [`arith`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

/// An exact rational number in canonical form.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Rational(BigRational);

/// Applies `op` to `a` and `b`, rejecting division by zero.
pub fn arith(a: &Rational, b: &Rational, op: ArithOp) -> Result<Rational, ArithError> {
    Ok(match op {
        ArithOp::Add => a + b,
        ArithOp::Sub => a - b,
        ArithOp::Mul => a * b,
        ArithOp::Div => a.checked_div(b)?,
    })
}

impl Rational {
    pub fn new(num: impl Into<BigInt>, den: impl Into<BigInt>) -> Result<Self, ArithError> {
        let den = den.into();
        if den.is_zero() {
            return Err(ArithError::DivisionByZero);
        }
        Ok(Rational(BigRational::new(num.into(), den)))
    }

    /// Builds `num/den` for a denominator known to be nonzero.
    ///
    /// Panics if `den` is zero.
    pub fn ratio(num: impl Into<BigInt>, den: impl Into<BigInt>) -> Self {
        Self::new(num, den).expect("nonzero denominator")
    }

    pub fn from_integer(n: impl Into<BigInt>) -> Self {
        Rational(BigRational::from_integer(n.into()))
    }

    pub fn zero() -> Self {
        Rational(BigRational::zero())
    }

    pub fn one() -> Self {
        Rational(BigRational::one())
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_positive(&self) -> bool {
        self.0.is_positive()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    /// Sign as -1, 0 or 1.
    pub fn signum(&self) -> i32 {
        match self.numer().sign() {
            Sign::Minus => -1,
            Sign::NoSign => 0,
            Sign::Plus => 1,
        }
    }

    pub fn abs(&self) -> Self {
        Rational(self.0.abs())
    }

    pub fn checked_div(&self, rhs: &Rational) -> Result<Rational, ArithError> {
        if rhs.is_zero() {
            return Err(ArithError::DivisionByZero);
        }
        Ok(Rational(&self.0 / &rhs.0))
    }

    pub fn recip(&self) -> Result<Rational, ArithError> {
        Rational::one().checked_div(self)
    }

    pub fn pow(&self, exp: u32) -> Rational {
        Rational(num_traits::Pow::pow(&self.0, exp))
    }

    pub fn floor(&self) -> BigInt {
        self.0.floor().to_integer()
    }

    pub fn ceil(&self) -> BigInt {
        self.0.ceil().to_integer()
    }

    /// `floor(self / rhs)` without reducing the intermediate quotient.
    ///
    /// Panics if `rhs` is zero.
    pub fn floor_div(&self, rhs: &Rational) -> BigInt {
        assert!(!rhs.is_zero(), "floor_div by zero");
        let num = self.numer() * rhs.denom();
        let den = self.denom() * rhs.numer();
        num.div_floor(&den)
    }

    /// Nearest `f64`; very large or very small magnitudes saturate.
    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }

    /// Natural logarithm of a positive value, accurate for numerators and
    /// denominators far outside the `f64` range.
    ///
    /// Returns `NaN` for nonpositive inputs.
    pub fn ln(&self) -> f64 {
        if !self.is_positive() {
            return f64::NAN;
        }
        ln_bigint(self.numer()) - ln_bigint(self.denom())
    }

    /// Decimal rendering with exactly `digits` fractional digits, rounding
    /// half to even.
    pub fn to_decimal(&self, digits: usize) -> String {
        let scale = num_traits::pow(BigInt::from(10u8), digits);
        let scaled = self.numer().abs() * &scale;
        let (mut q, r) = scaled.div_rem(self.denom());
        let twice = r * 2u8;
        match twice.cmp(self.denom()) {
            Ordering::Greater => q += 1u8,
            Ordering::Equal if q.is_odd() => q += 1u8,
            _ => {}
        }
        let negative = self.is_negative() && !q.is_zero();
        let (int_part, frac_part) = q.div_rem(&scale);
        let mut out = String::new();
        if negative {
            out.push('-');
        }
        out.push_str(&int_part.to_str_radix(10));
        if digits > 0 {
            let frac = frac_part.to_str_radix(10);
            out.push('.');
            for _ in frac.len()..digits {
                out.push('0');
            }
            out.push_str(&frac);
        }
        out
    }

    /// Parses a decimal literal such as `-1.25` exactly.
    fn parse_decimal(s: &str) -> Option<Rational> {
        let (negative, body) = match s.as_bytes().first()? {
            b'-' => (true, &s[1..]),
            b'+' => (false, &s[1..]),
            _ => (false, s),
        };
        let (int_part, frac_part) = match body.split_once('.') {
            Some((i, f)) => (i, f),
            None => (body, ""),
        };
        if int_part.is_empty() && frac_part.is_empty() {
            return None;
        }
        let all_digits = |t: &str| t.bytes().all(|b| b.is_ascii_digit());
        if !all_digits(int_part) || !all_digits(frac_part) {
            return None;
        }
        let mut digits = String::with_capacity(int_part.len() + frac_part.len());
        digits.push_str(int_part);
        digits.push_str(frac_part);
        let mut num = BigInt::parse_bytes(digits.as_bytes(), 10)?;
        if negative {
            num = -num;
        }
        let den = num_traits::pow(BigInt::from(10u8), frac_part.len());
        Some(Rational::ratio(num, den))
    }
}

fn ln_bigint(n: &BigInt) -> f64 {
    const KEEP: u64 = 60;
    let bits = n.bits();
    if bits <= KEEP {
        return libm::log(n.abs().to_f64().unwrap_or(f64::NAN));
    }
    let shift = bits - KEEP;
    let top = (n.abs() >> shift).to_f64().unwrap_or(f64::NAN);
    libm::log(top) + (shift as f64) * core::f64::consts::LN_2
}

impl fmt::Display for Rational {
    /// Always `num/den`, including integers (`2/1`).
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.numer(), self.denom())
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Rational {
    type Err = ParseRationalError;

    /// Accepts `num/den`, integers and decimal literals; decimals are
    /// converted exactly, so `1.5` is `3/2`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s.is_empty() {
            return Err(ParseRationalError::Empty);
        }
        let invalid = || ParseRationalError::Invalid(s.into());
        if let Some((n, d)) = s.split_once('/') {
            let num: BigInt = n.trim().parse().map_err(|_| invalid())?;
            let den: BigInt = d.trim().parse().map_err(|_| invalid())?;
            return Rational::new(num, den)
                .map_err(|_| ParseRationalError::ZeroDenominator(s.into()));
        }
        Rational::parse_decimal(s).ok_or_else(invalid)
    }
}

impl From<i64> for Rational {
    fn from(n: i64) -> Self {
        Rational::from_integer(n)
    }
}

impl From<BigInt> for Rational {
    fn from(n: BigInt) -> Self {
        Rational::from_integer(n)
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident) => {
        impl $trait<&Rational> for &Rational {
            type Output = Rational;
            fn $method(self, rhs: &Rational) -> Rational {
                Rational($trait::$method(&self.0, &rhs.0))
            }
        }
        impl $trait<Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational($trait::$method(self.0, rhs.0))
            }
        }
        impl $trait<&Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: &Rational) -> Rational {
                Rational($trait::$method(self.0, &rhs.0))
            }
        }
        impl $trait<Rational> for &Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational($trait::$method(&self.0, rhs.0))
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-self.0)
    }
}

impl Neg for &Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-&self.0)
    }
}

impl core::iter::Sum for Rational {
    fn sum<I: Iterator<Item = Rational>>(iter: I) -> Self {
        iter.fold(Rational::zero(), |acc, r| acc + r)
    }
}

impl<'a> core::iter::Sum<&'a Rational> for Rational {
    fn sum<I: Iterator<Item = &'a Rational>>(iter: I) -> Self {
        iter.fold(Rational::zero(), |acc, r| acc + r)
    }
}

/// `num / den` as `f64` without reducing the fraction first.
///
/// Both parts are shifted down to at most about 1000 bits, well inside the
/// `f64` exponent range and far beyond its mantissa.
pub(crate) fn fraction_to_f64(num: &BigInt, den: &BigInt) -> f64 {
    let shift = num.bits().max(den.bits()).saturating_sub(1000);
    let n = (num >> shift).to_f64().unwrap_or(f64::NAN);
    let d = (den >> shift).to_f64().unwrap_or(f64::NAN);
    n / d
}
