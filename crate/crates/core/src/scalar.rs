//! Scalar abstraction shared by the finite-frame modules.
//!
//! Belief functions, credal models, IM tables and the auditors are generic
//! over [`Scalar`]. `f64` is the production type; [`Rational`] gives an exact
//! mode in which conjugacy and Dempster's rule hold with equality.

use std::fmt::{Debug, Display};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{FromPrimitive, Num, One, Signed, ToPrimitive, Zero};

/// Arbitrary-precision rational used for exact-arithmetic mode.
pub type Rational = BigRational;

pub trait Scalar:
    Clone + Debug + Display + PartialOrd + Num + Signed + FromPrimitive + ToPrimitive + Send + Sync + 'static
{
    /// Absolute tolerance used when checking that masses or probabilities sum to one.
    fn mass_tolerance() -> Self;

    /// Parses a decimal string (`0.25`, `-1e-3`) or, for exact types, a ratio (`3/7`).
    fn parse_decimal(text: &str) -> Option<Self>;

    /// Formats the value so that [`Scalar::parse_decimal`] recovers it exactly.
    fn to_decimal(&self) -> String;

    /// Converts a configuration constant; panics only for non-finite input.
    fn from_f64_lossy(value: f64) -> Self {
        Self::from_f64(value).expect("finite constant")
    }

    fn to_f64_lossy(&self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    fn half() -> Self {
        Self::one() / (Self::one() + Self::one())
    }

    fn is_finite_value(&self) -> bool {
        true
    }
}

impl Scalar for f64 {
    fn mass_tolerance() -> Self {
        1e-12
    }

    fn parse_decimal(text: &str) -> Option<Self> {
        let value = f64::from_str(text.trim()).ok()?;
        value.is_finite().then_some(value)
    }

    fn to_decimal(&self) -> String {
        // `Display` for f64 prints the shortest string that round-trips.
        format!("{self}")
    }

    fn is_finite_value(&self) -> bool {
        self.is_finite()
    }
}

impl Scalar for f32 {
    fn mass_tolerance() -> Self {
        1e-6
    }

    fn parse_decimal(text: &str) -> Option<Self> {
        let value = f32::from_str(text.trim()).ok()?;
        value.is_finite().then_some(value)
    }

    fn to_decimal(&self) -> String {
        format!("{self}")
    }

    fn is_finite_value(&self) -> bool {
        self.is_finite()
    }
}

impl Scalar for Rational {
    fn mass_tolerance() -> Self {
        Self::zero()
    }

    fn parse_decimal(text: &str) -> Option<Self> {
        parse_exact(text.trim())
    }

    fn to_decimal(&self) -> String {
        format_exact(self)
    }
}

fn parse_exact(text: &str) -> Option<Rational> {
    if let Some((num, den)) = text.split_once('/') {
        let num = BigInt::from_str(num.trim()).ok()?;
        let den = BigInt::from_str(den.trim()).ok()?;
        if den.is_zero() {
            return None;
        }
        return Some(Rational::new(num, den));
    }
    let (mantissa, exponent) = match text.find(['e', 'E']) {
        Some(pos) => (&text[..pos], i64::from_str(&text[pos + 1..]).ok()?),
        None => (text, 0),
    };
    let (negative, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.bytes().chain(frac_part.bytes()).all(|b| b.is_ascii_digit()) {
        return None;
    }
    let all_digits = format!("{int_part}{frac_part}");
    let mut numer = BigInt::from_str(&all_digits).ok()?;
    let scale = exponent - frac_part.len() as i64;
    let ten = BigInt::from(10u8);
    let mut denom = BigInt::one();
    if scale >= 0 {
        numer *= num_traits::pow(ten, usize::try_from(scale).ok()?);
    } else {
        denom = num_traits::pow(ten, usize::try_from(-scale).ok()?);
    }
    if negative {
        numer = -numer;
    }
    Some(Rational::new(numer, denom))
}

/// Finite decimal expansion when the reduced denominator has only factors 2 and 5,
/// otherwise `p/q`.
fn format_exact(value: &Rational) -> String {
    let denom = value.denom().clone();
    let mut rest = denom.clone();
    let two = BigInt::from(2u8);
    let five = BigInt::from(5u8);
    let (mut twos, mut fives) = (0usize, 0usize);
    while (&rest % &two).is_zero() {
        rest /= &two;
        twos += 1;
    }
    while (&rest % &five).is_zero() {
        rest /= &five;
        fives += 1;
    }
    if !rest.is_one() {
        return format!("{}/{}", value.numer(), denom);
    }
    let places = twos.max(fives);
    if places == 0 {
        return value.numer().to_string();
    }
    let scale = num_traits::pow(BigInt::from(10u8), places);
    let scaled = value.numer() * (&scale / &denom);
    let negative = scaled.is_negative();
    let digits = scaled.abs().to_string();
    let padded = format!("{digits:0>width$}", width = places + 1);
    let (int_part, frac_part) = padded.split_at(padded.len() - places);
    let frac_part = frac_part.trim_end_matches('0');
    let sign = if negative { "-" } else { "" };
    if frac_part.is_empty() {
        format!("{sign}{int_part}")
    } else {
        format!("{sign}{int_part}.{frac_part}")
    }
}

pub(crate) fn min_of<S: Scalar>(a: S, b: S) -> S {
    if b < a {
        b
    } else {
        a
    }
}

pub(crate) fn max_of<S: Scalar>(a: S, b: S) -> S {
    if b > a {
        b
    } else {
        a
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn exact_decimal_parsing() {
        assert_eq!(Rational::parse_decimal("0.9"), Some(q(9, 10)));
        assert_eq!(Rational::parse_decimal("-1.25e-1"), Some(q(-1, 8)));
        assert_eq!(Rational::parse_decimal("3/7"), Some(q(3, 7)));
        assert_eq!(Rational::parse_decimal("7"), Some(q(7, 1)));
        assert_eq!(Rational::parse_decimal(".5"), Some(q(1, 2)));
        assert_eq!(Rational::parse_decimal("1/0"), None);
        assert_eq!(Rational::parse_decimal("abc"), None);
        assert_eq!(Rational::parse_decimal(""), None);
    }

    #[test]
    fn exact_formatting() {
        assert_eq!(q(9, 10).to_decimal(), "0.9");
        assert_eq!(q(-1, 8).to_decimal(), "-0.125");
        assert_eq!(q(3, 7).to_decimal(), "3/7");
        assert_eq!(q(4, 1).to_decimal(), "4");
        assert_eq!(q(1, 1000).to_decimal(), "0.001");
    }

    #[test]
    fn float_rejects_non_finite() {
        assert_eq!(f64::parse_decimal("inf"), None);
        assert_eq!(f64::parse_decimal("NaN"), None);
        assert_eq!(f64::parse_decimal("0.1"), Some(0.1));
    }

    proptest! {
        #[test]
        fn rational_text_round_trip(n in -10_000i64..10_000, d in 1i64..2_000) {
            let value = q(n, d);
            prop_assert_eq!(Rational::parse_decimal(&value.to_decimal()), Some(value));
        }

        #[test]
        fn float_text_round_trip(x in -1e6f64..1e6) {
            prop_assert_eq!(f64::parse_decimal(&x.to_decimal()), Some(x));
        }
    }
}
