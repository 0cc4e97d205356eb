//! Numeric modes.
//!
//! Every schedule computation is generic over [`Time`], implemented for `f64`
//! (sweeps, large `n`) and for [`Rational`] (exact equality on small
//! instances). Rationals built from decimal input are exact: `1.7453` becomes
//! `17453/10000`, not the nearest binary fraction.

use std::cmp::Ordering;
use std::fmt::{Debug, Display};
use std::iter::Sum;
use std::ops::{Add, AddAssign, Div, Mul, Sub};

use num_rational::Ratio;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

/// Exact rational time.
pub type Rational = Ratio<i128>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NumericMode {
    Float,
    Rational,
}

impl std::str::FromStr for NumericMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "float" | "f64" => Ok(NumericMode::Float),
            "rational" | "exact" => Ok(NumericMode::Rational),
            other => Err(format!("unknown numeric mode `{other}` (expected float|rational)")),
        }
    }
}

pub trait Time:
    Clone
    + Debug
    + Display
    + PartialOrd
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + AddAssign
    + Sum
    + Send
    + Sync
    + 'static
{
    const MODE: NumericMode;

    fn from_f64(x: f64) -> Self;
    fn to_f64(&self) -> f64;

    fn from_usize(k: usize) -> Self;

    /// Parses a decimal literal (`"2.5"`, `"1e-6"`) or, in rational mode, a
    /// fraction `"a/b"`.
    fn parse(s: &str) -> Option<Self>;

    fn is_negative(&self) -> bool {
        *self < Self::zero()
    }
}

impl Time for f64 {
    const MODE: NumericMode = NumericMode::Float;

    fn from_f64(x: f64) -> Self {
        x
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn from_usize(k: usize) -> Self {
        k as f64
    }

    fn parse(s: &str) -> Option<Self> {
        if let Some((a, b)) = s.split_once('/') {
            let a: f64 = a.trim().parse().ok()?;
            let b: f64 = b.trim().parse().ok()?;
            return Some(a / b);
        }
        s.trim().parse().ok()
    }
}

impl Time for Rational {
    const MODE: NumericMode = NumericMode::Rational;

    fn from_f64(x: f64) -> Self {
        // `{}` prints the shortest string that round-trips, so decimal input
        // such as 0.1 is recovered exactly.
        parse_decimal(&format!("{x}"))
            .or_else(|| Ratio::approximate_float(x))
            .unwrap_or_else(|| panic!("{x} is not representable as a rational"))
    }

    fn to_f64(&self) -> f64 {
        *self.numer() as f64 / *self.denom() as f64
    }

    fn from_usize(k: usize) -> Self {
        Ratio::from_integer(k as i128)
    }

    fn parse(s: &str) -> Option<Self> {
        let s = s.trim();
        if let Some((a, b)) = s.split_once('/') {
            let a: i128 = a.trim().parse().ok()?;
            let b: i128 = b.trim().parse().ok()?;
            if b == 0 {
                return None;
            }
            return Some(Ratio::new(a, b));
        }
        parse_decimal(s).or_else(|| s.parse::<f64>().ok().and_then(Ratio::approximate_float))
    }

    fn is_negative(&self) -> bool {
        Signed::is_negative(self)
    }
}

/// Exact value of a decimal literal with optional exponent.
fn parse_decimal(s: &str) -> Option<Rational> {
    let s = s.trim();
    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(pos) => (&s[..pos], s[pos + 1..].parse::<i32>().ok()?),
        None => (s, 0),
    };
    let (negative, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return None;
    }
    let all_digits = format!("{int_part}{frac_part}");
    let all_digits = all_digits.trim_start_matches('0');
    if all_digits.len() > 30 {
        return None;
    }
    let mut value: i128 = if all_digits.is_empty() { 0 } else { all_digits.parse().ok()? };
    let scale = exponent - frac_part.len() as i32;
    if negative {
        value = -value;
    }
    let ten = 10i128;
    if scale >= 0 {
        let factor = ten.checked_pow(scale as u32)?;
        Some(Ratio::from_integer(value.checked_mul(factor)?))
    } else {
        let denom = ten.checked_pow((-scale) as u32)?;
        Some(Ratio::new(value, denom))
    }
}

/// Total order for sorting times; incomparable values (NaN) compare equal.
pub fn cmp_time<T: Time>(a: &T, b: &T) -> Ordering {
    a.partial_cmp(b).unwrap_or(Ordering::Equal)
}

pub fn min_time<T: Time>(a: T, b: T) -> T {
    if b < a {
        b
    } else {
        a
    }
}

pub fn max_time<T: Time>(a: T, b: T) -> T {
    if b > a {
        b
    } else {
        a
    }
}

/// Converts between numeric modes through `f64`.
pub fn convert<A: Time, B: Time>(x: &A) -> B {
    B::from_f64(x.to_f64())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn decimals_are_exact() {
        assert_eq!(Rational::from_f64(1.7453), Ratio::new(17453, 10000));
        assert_eq!(Rational::from_f64(0.1), Ratio::new(1, 10));
        assert_eq!(Rational::from_f64(1e-6), Ratio::new(1, 1_000_000));
        assert_eq!(Rational::from_f64(-2.5), Ratio::new(-5, 2));
        assert_eq!(Rational::from_f64(3.0), Ratio::from_integer(3));
    }

    #[test]
    fn parse_forms() {
        assert_eq!(Rational::parse("2/3"), Some(Ratio::new(2, 3)));
        assert_eq!(Rational::parse("1e-6"), Some(Ratio::new(1, 1_000_000)));
        assert_eq!(Rational::parse("2.5E1"), Some(Ratio::from_integer(25)));
        assert_eq!(Rational::parse("x"), None);
        assert_eq!(Rational::parse("1/0"), None);
        assert_eq!(<f64 as Time>::parse("1/4"), Some(0.25));
    }

    #[test]
    fn mode_from_str() {
        assert_eq!("exact".parse::<NumericMode>().unwrap(), NumericMode::Rational);
        assert!("double".parse::<NumericMode>().is_err());
    }
}
