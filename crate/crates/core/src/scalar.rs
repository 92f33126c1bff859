//! Number types shared by every distribution: the [`Scalar`] abstraction over
//! exact rationals and doubles, and the extended real line used for quantiles.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num::{BigInt, BigRational, One, Signed, ToPrimitive, Zero};

/// Exact rational number used by the piecewise class.
pub type Rational = BigRational;

/// Absolute tolerance on probability levels in floating point.
pub const LEVEL_TOL: f64 = 1e-12;
/// Absolute tolerance on quantile values in floating point.
pub const VALUE_TOL: f64 = 1e-9;

/// Field operations and comparisons needed by the quantile machinery.
///
/// `Rational` compares exactly. `f64` compares with [`LEVEL_TOL`] on levels and
/// [`VALUE_TOL`] on locations.
pub trait Scalar:
    Clone
    + PartialOrd
    + fmt::Debug
    + fmt::Display
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    /// `true` when equalities are decided without tolerance.
    const EXACT: bool;

    fn zero() -> Self;
    fn one() -> Self;
    fn from_i64(v: i64) -> Self;
    /// Exact conversion of a finite double.
    fn from_f64(v: f64) -> Self;
    fn to_f64(&self) -> f64;

    /// Equality of two probability levels.
    fn level_eq(&self, other: &Self) -> bool;
    /// Equality of two locations on the real line.
    fn value_eq(&self, other: &Self) -> bool;

    fn half() -> Self {
        Self::one() / Self::from_i64(2)
    }

    fn midpoint(a: &Self, b: &Self) -> Self {
        (a.clone() + b.clone()) * Self::half()
    }

    fn min_of(a: Self, b: Self) -> Self {
        if b < a {
            b
        } else {
            a
        }
    }

    fn max_of(a: Self, b: Self) -> Self {
        if b > a {
            b
        } else {
            a
        }
    }

    /// `self > other` by more than the tolerance on locations.
    fn value_gt(&self, other: &Self) -> bool {
        self > other && !self.value_eq(other)
    }

    /// `self <= other` up to the tolerance on levels.
    fn level_le(&self, other: &Self) -> bool {
        self <= other || self.level_eq(other)
    }

    fn value_le(&self, other: &Self) -> bool {
        self <= other || self.value_eq(other)
    }

    /// Text form used in reports: exact decimals (or `n/d`) for rationals,
    /// shortest round-trip form for doubles.
    fn render(&self) -> String;
}

impl Scalar for Rational {
    const EXACT: bool = true;

    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn from_i64(v: i64) -> Self {
        BigRational::from_integer(BigInt::from(v))
    }
    fn from_f64(v: f64) -> Self {
        BigRational::from_float(v).expect("finite double")
    }
    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }
    fn level_eq(&self, other: &Self) -> bool {
        self == other
    }
    fn value_eq(&self, other: &Self) -> bool {
        self == other
    }
    fn render(&self) -> String {
        format_rational(self)
    }
}

impl Scalar for f64 {
    const EXACT: bool = false;

    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn from_i64(v: i64) -> Self {
        v as f64
    }
    fn from_f64(v: f64) -> Self {
        v
    }
    fn to_f64(&self) -> f64 {
        *self
    }
    fn level_eq(&self, other: &Self) -> bool {
        (self - other).abs() <= LEVEL_TOL
    }
    fn value_eq(&self, other: &Self) -> bool {
        (self - other).abs() <= VALUE_TOL
    }
    fn render(&self) -> String {
        format!("{self}")
    }
}

/// A point of the extended real line: a finite value or one of the two infinities.
///
/// Variant order gives the total order `-inf < finite < +inf`.
#[derive(Clone, Debug, PartialEq, PartialOrd)]
pub enum ExtendedReal<S> {
    NegInf,
    Finite(S),
    PosInf,
}

impl<S: Scalar> ExtendedReal<S> {
    pub fn finite(&self) -> Option<&S> {
        match self {
            ExtendedReal::Finite(v) => Some(v),
            _ => None,
        }
    }

    pub fn into_finite(self) -> Option<S> {
        match self {
            ExtendedReal::Finite(v) => Some(v),
            _ => None,
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, ExtendedReal::Finite(_))
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            ExtendedReal::NegInf => f64::NEG_INFINITY,
            ExtendedReal::Finite(v) => v.to_f64(),
            ExtendedReal::PosInf => f64::INFINITY,
        }
    }

    /// Order comparison. `None` only if a finite comparison is undefined (NaN).
    pub fn compare(&self, other: &Self) -> Option<Ordering> {
        self.partial_cmp(other)
    }

    pub fn max(self, other: Self) -> Self {
        if other > self {
            other
        } else {
            self
        }
    }

    /// Equality using [`Scalar::value_eq`] on finite values.
    pub fn value_eq(&self, other: &Self) -> bool {
        match (self, other) {
            (ExtendedReal::Finite(a), ExtendedReal::Finite(b)) => a.value_eq(b),
            (ExtendedReal::NegInf, ExtendedReal::NegInf) => true,
            (ExtendedReal::PosInf, ExtendedReal::PosInf) => true,
            _ => false,
        }
    }

    /// Strict dominance beyond the value tolerance.
    pub fn value_gt(&self, other: &Self) -> bool {
        match (self, other) {
            (ExtendedReal::Finite(a), ExtendedReal::Finite(b)) => a.value_gt(b),
            _ => self > other,
        }
    }

    pub fn render(&self) -> String {
        match self {
            ExtendedReal::NegInf => "-inf".into(),
            ExtendedReal::Finite(v) => v.render(),
            ExtendedReal::PosInf => "+inf".into(),
        }
    }

    /// `self >= other`, with tolerance on finite values.
    pub fn value_ge(&self, other: &Self) -> bool {
        self.value_gt(other) || self.value_eq(other)
    }
}

impl<S: fmt::Display> fmt::Display for ExtendedReal<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtendedReal::NegInf => f.write_str("-inf"),
            ExtendedReal::Finite(v) => v.fmt(f),
            ExtendedReal::PosInf => f.write_str("+inf"),
        }
    }
}

impl<S> From<S> for ExtendedReal<S> {
    fn from(v: S) -> Self {
        ExtendedReal::Finite(v)
    }
}

/// Builds a rational `num/den`. Panics if `den == 0`.
pub fn ratio(num: i64, den: i64) -> Rational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// Renders a rational as an exact decimal when the denominator has only the
/// prime factors 2 and 5, and as `n/d` otherwise.
pub fn format_rational(r: &Rational) -> String {
    let mut den = r.denom().clone();
    let two = BigInt::from(2);
    let five = BigInt::from(5);
    let ten = BigInt::from(10);
    let (mut twos, mut fives) = (0u32, 0u32);
    while (&den % &two).is_zero() {
        den /= &two;
        twos += 1;
    }
    while (&den % &five).is_zero() {
        den /= &five;
        fives += 1;
    }
    if !den.is_one() {
        return format!("{}/{}", r.numer(), r.denom());
    }
    let digits = twos.max(fives);
    if digits == 0 {
        return r.numer().to_string();
    }
    let scaled = r * BigRational::from_integer(num::pow(ten.clone(), digits as usize));
    let int = scaled.to_integer();
    let negative = int.is_negative();
    let mag = int.abs().to_string();
    let mag = format!("{:0>width$}", mag, width = digits as usize + 1);
    let split = mag.len() - digits as usize;
    let body = format!("{}.{}", &mag[..split], &mag[split..]);
    let body = body.trim_end_matches('0').trim_end_matches('.').to_string();
    if negative {
        format!("-{body}")
    } else {
        body
    }
}

/// Parses a plain decimal string (`-12.5`, `0.125`, `3`) or a fraction
/// (`1/3`) into an exact rational. Exponent notation is rejected.
pub fn parse_rational(text: &str) -> Result<Rational, String> {
    let s = text.trim();
    if s.is_empty() {
        return Err("empty number".into());
    }
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n
            .trim()
            .parse()
            .map_err(|_| format!("bad numerator in {text:?}"))?;
        let d: BigInt = d
            .trim()
            .parse()
            .map_err(|_| format!("bad denominator in {text:?}"))?;
        if d.is_zero() {
            return Err(format!("zero denominator in {text:?}"));
        }
        return Ok(BigRational::new(n, d));
    }
    let (negative, body) = match s.as_bytes()[0] {
        b'-' => (true, &s[1..]),
        b'+' => (false, &s[1..]),
        _ => (false, s),
    };
    let (int_part, frac_part) = body.split_once('.').unwrap_or((body, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(format!("not a decimal: {text:?}"));
    }
    if !int_part
        .bytes()
        .chain(frac_part.bytes())
        .all(|b| b.is_ascii_digit())
    {
        return Err(format!("not a plain decimal: {text:?}"));
    }
    let digits = format!("{int_part}{frac_part}");
    let numer: BigInt = if digits.is_empty() {
        BigInt::zero()
    } else {
        digits
            .parse()
            .map_err(|_| format!("not a decimal: {text:?}"))?
    };
    let denom = num::pow(BigInt::from(10), frac_part.len());
    let value = BigRational::new(numer, denom);
    Ok(if negative { -value } else { value })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn extended_order_is_total() {
        let lo: ExtendedReal<f64> = ExtendedReal::NegInf;
        let mid = ExtendedReal::Finite(-1e300);
        let hi = ExtendedReal::PosInf;
        assert!(lo < mid && mid < hi && lo < hi);
        assert_eq!(lo.clone().max(mid.clone()), mid);
        assert!(ExtendedReal::Finite(0.0).value_gt(&ExtendedReal::NegInf));
        assert!(!ExtendedReal::<f64>::NegInf.value_gt(&ExtendedReal::NegInf));
    }

    #[test]
    fn decimal_parsing_is_exact() {
        assert_eq!(parse_rational("0.1").unwrap(), ratio(1, 10));
        assert_eq!(parse_rational("-2.50").unwrap(), ratio(-5, 2));
        assert_eq!(parse_rational(".5").unwrap(), ratio(1, 2));
        assert_eq!(parse_rational("7").unwrap(), ratio(7, 1));
        assert_eq!(parse_rational("1/3").unwrap(), ratio(1, 3));
        assert!(parse_rational("1e3").is_err());
        assert!(parse_rational("abc").is_err());
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("-").is_err());
    }

    #[test]
    fn rational_formatting() {
        assert_eq!(format_rational(&ratio(1, 2)), "0.5");
        assert_eq!(format_rational(&ratio(-1, 8)), "-0.125");
        assert_eq!(format_rational(&ratio(3, 1)), "3");
        assert_eq!(format_rational(&ratio(1, 3)), "1/3");
        assert_eq!(format_rational(&ratio(-201, 100)), "-2.01");
        assert_eq!(format_rational(&ratio(0, 1)), "0");
    }

    #[test]
    fn float_tolerances() {
        assert!(0.5f64.level_eq(&(0.5 + 1e-13)));
        assert!(!0.5f64.level_eq(&(0.5 + 1e-11)));
        assert!(1.0f64.value_eq(&(1.0 + 1e-10)));
        assert!(!1.0f64.value_gt(&(1.0 - 1e-10)));
    }
}
