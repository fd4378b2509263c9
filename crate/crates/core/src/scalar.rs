//! Arithmetic used by the closed-form modules.
//!
//! Every formula is written once against [`Scalar`] and then runs either in
//! binary64 or in exact rational arithmetic. The exact path refuses square
//! roots of non-squares instead of approximating them.

use std::fmt::{self, Debug, Display};
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num::{BigInt, BigRational, One, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

pub type Rational = BigRational;

pub trait Scalar:
    Clone
    + Debug
    + PartialEq
    + PartialOrd
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + Send
    + Sync
    + 'static
{
    const EXACT: bool;

    fn int(n: i64) -> Self;

    fn to_f64(&self) -> f64;

    /// Square root, or `None` for negative input. The exact implementation
    /// also returns `None` when the root is irrational.
    fn sqrt_checked(&self) -> Option<Self>;

    /// Exact comparison with zero for rationals, `|x| <= tol` for floats.
    fn is_zero_within(&self, tol: f64) -> bool;

    fn exact(&self) -> Option<Rational>;

    fn ratio(p: i64, q: i64) -> Self {
        Self::int(p) / Self::int(q)
    }

    fn zero() -> Self {
        Self::int(0)
    }

    fn one() -> Self {
        Self::int(1)
    }

    fn abs_value(&self) -> Self {
        if *self < Self::zero() {
            -self.clone()
        } else {
            self.clone()
        }
    }

    fn sq(&self) -> Self {
        self.clone() * self.clone()
    }

    fn inv(&self) -> Self {
        Self::one() / self.clone()
    }

    fn is_pos(&self) -> bool {
        *self > Self::zero()
    }

    fn is_neg(&self) -> bool {
        *self < Self::zero()
    }

    /// Square root that reports an irrational root as an error.
    fn try_sqrt(&self, what: &str) -> Result<Self> {
        if self.is_neg() {
            return Err(Error::domain(format!("negative radicand in {what}: {}", self.to_f64())));
        }
        self.sqrt_checked().ok_or_else(|| Error::Irrational(what.to_string()))
    }
}

impl Scalar for f64 {
    const EXACT: bool = false;

    fn int(n: i64) -> Self {
        n as f64
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn sqrt_checked(&self) -> Option<Self> {
        if *self < 0.0 {
            None
        } else {
            Some(f64::sqrt(*self))
        }
    }

    fn is_zero_within(&self, tol: f64) -> bool {
        f64::abs(*self) <= tol
    }

    fn exact(&self) -> Option<Rational> {
        None
    }
}

impl Scalar for Rational {
    const EXACT: bool = true;

    fn int(n: i64) -> Self {
        Rational::from_integer(BigInt::from(n))
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }

    fn sqrt_checked(&self) -> Option<Self> {
        if self.is_neg() {
            return None;
        }
        let n = exact_isqrt(self.numer())?;
        let d = exact_isqrt(self.denom())?;
        Some(Rational::new(n, d))
    }

    fn is_zero_within(&self, _tol: f64) -> bool {
        Zero::is_zero(self)
    }

    fn exact(&self) -> Option<Rational> {
        Some(self.clone())
    }
}

fn exact_isqrt(n: &BigInt) -> Option<BigInt> {
    let s = n.sqrt();
    if &s * &s == *n {
        Some(s)
    } else {
        None
    }
}

/// Formats a rational as `p/q`, or `p` when the denominator is one.
pub fn rational_string(q: &Rational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// A number read from user input: a rational when the text denotes one
/// exactly, a float otherwise.
#[derive(Clone, Debug, PartialEq)]
pub enum Number {
    Exact(Rational),
    Float(f64),
}

impl Number {
    pub fn to_f64(&self) -> f64 {
        match self {
            Number::Exact(q) => Scalar::to_f64(q),
            Number::Float(x) => *x,
        }
    }

    pub fn exact(&self) -> Option<&Rational> {
        match self {
            Number::Exact(q) => Some(q),
            Number::Float(_) => None,
        }
    }

    pub fn from_f64(x: f64) -> Self {
        Number::Float(x)
    }

    pub fn from_json(v: &serde_json::Value) -> Result<Self> {
        match v {
            serde_json::Value::Number(n) => {
                if let Some(i) = n.as_i64() {
                    Ok(Number::Exact(Rational::int(i)))
                } else {
                    n.as_f64()
                        .map(Number::Float)
                        .ok_or_else(|| Error::Parse(format!("unrepresentable number {n}")))
                }
            }
            serde_json::Value::String(s) => s.parse(),
            other => Err(Error::Parse(format!("expected number or rational string, got {other}"))),
        }
    }

    pub fn squared(&self) -> Number {
        match self {
            Number::Exact(q) => Number::Exact(q * q),
            Number::Float(x) => Number::Float(x * x),
        }
    }
}

impl FromStr for Number {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        if let Some((p, q)) = t.split_once('/') {
            let p: BigInt = p.trim().parse().map_err(|_| bad_number(s))?;
            let q: BigInt = q.trim().parse().map_err(|_| bad_number(s))?;
            if q.is_zero() {
                return Err(Error::Parse(format!("zero denominator in {s:?}")));
            }
            return Ok(Number::Exact(Rational::new(p, q)));
        }
        if let Ok(i) = t.parse::<BigInt>() {
            return Ok(Number::Exact(Rational::from_integer(i)));
        }
        if let Some(q) = parse_plain_decimal(t) {
            return Ok(Number::Exact(q));
        }
        t.parse::<f64>()
            .ok()
            .filter(|x| x.is_finite())
            .map(Number::Float)
            .ok_or_else(|| bad_number(s))
    }
}

fn bad_number(s: &str) -> Error {
    Error::Parse(format!("cannot parse {s:?} as a number"))
}

fn parse_plain_decimal(t: &str) -> Option<Rational> {
    let (neg, body) = match t.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, t.strip_prefix('+').unwrap_or(t)),
    };
    let (int_part, frac_part) = body.split_once('.')?;
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return None;
    }
    let digits: BigInt = format!("{int_part}{frac_part}0").parse().ok()?;
    let scale = num::pow(BigInt::from(10), frac_part.len() + 1);
    let q = Rational::new(digits, scale);
    Some(if neg { -q } else { q })
}

impl Display for Number {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Number::Exact(q) => f.write_str(&rational_string(q)),
            Number::Float(x) => write!(f, "{x}"),
        }
    }
}

/// Output form of a computed number: its decimal value, plus the exact
/// rational when the computation was exact.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Quantity {
    pub decimal: f64,
    #[serde(skip_serializing_if = "Option::is_none", serialize_with = "ser_rational")]
    pub rational: Option<Rational>,
}

fn ser_rational<S: Serializer>(q: &Option<Rational>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match q {
        Some(q) => s.serialize_str(&rational_string(q)),
        None => s.serialize_none(),
    }
}

impl Quantity {
    pub fn of<S: Scalar>(x: &S) -> Self {
        Quantity { decimal: x.to_f64(), rational: x.exact() }
    }

    pub fn float(x: f64) -> Self {
        Quantity { decimal: x, rational: None }
    }
}

impl<S: Scalar> From<&S> for Quantity {
    fn from(x: &S) -> Self {
        Quantity::of(x)
    }
}

/// Relative-or-absolute closeness used by the float paths.
pub fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs()).max(1.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(p: i64, d: i64) -> Rational {
        Rational::ratio(p, d)
    }

    #[test]
    fn rational_sqrt_only_for_squares() {
        assert_eq!(Scalar::sqrt_checked(&q(9, 4)), Some(q(3, 2)));
        assert_eq!(Scalar::sqrt_checked(&q(1, 2)), None);
        assert_eq!(Scalar::sqrt_checked(&q(-1, 4)), None);
        assert_eq!(Scalar::sqrt_checked(&q(0, 1)), Some(q(0, 1)));
    }

    #[test]
    fn parses_rationals_integers_and_decimals_exactly() {
        assert_eq!("3/12".parse::<Number>().unwrap(), Number::Exact(q(1, 4)));
        assert_eq!("-2".parse::<Number>().unwrap(), Number::Exact(q(-2, 1)));
        assert_eq!("0.25".parse::<Number>().unwrap(), Number::Exact(q(1, 4)));
        assert_eq!("-.5".parse::<Number>().unwrap(), Number::Exact(q(-1, 2)));
        assert_eq!("1e-3".parse::<Number>().unwrap(), Number::Float(1e-3));
        assert!("1/0".parse::<Number>().is_err());
        assert!("abc".parse::<Number>().is_err());
    }

    #[test]
    fn quantity_serializes_both_forms() {
        let s = serde_json::to_string(&Quantity::of(&q(1, 9))).unwrap();
        assert_eq!(s, r#"{"decimal":0.1111111111111111,"rational":"1/9"}"#);
        let s = serde_json::to_string(&Quantity::of(&0.5f64)).unwrap();
        assert_eq!(s, r#"{"decimal":0.5}"#);
    }
}
