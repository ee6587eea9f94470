//! Exact decimal notation for nonnegative rationals.
//!
//! The surface grammar only admits decimal literals (`1.9`, `0.5`), so every
//! rational reaching the printer has a denominator of the form 2^a·5^b.
//! Sums and products of such rationals stay in that set, which keeps the
//! printer exact end to end.

use num::bigint::BigInt;
use num::{BigRational, One, Signed, Zero};

/// Parse a decimal literal (`"12.75"`) into an exact rational.
pub fn parse_decimal(text: &str) -> Option<BigRational> {
    let (int_part, frac_part) = text.split_once('.')?;
    if int_part.is_empty() || frac_part.is_empty() {
        return None;
    }
    if !int_part.bytes().all(|b| b.is_ascii_digit()) || !frac_part.bytes().all(|b| b.is_ascii_digit())
    {
        return None;
    }
    let digits: BigInt = format!("{int_part}{frac_part}").parse().ok()?;
    let scale = BigInt::from(10u32).pow(frac_part.len() as u32);
    Some(BigRational::new(digits, scale))
}

/// Render a nonnegative rational in exact decimal notation, always with a
/// fractional part (`2 ↦ "2.0"`), so rational and natural literals stay
/// distinct in printed syntax.
///
/// Panics if the reduced denominator has a prime factor other than 2 or 5;
/// such values cannot be written in the surface syntax and never arise from
/// parsed programs.
pub fn format_decimal(value: &BigRational) -> String {
    assert!(!value.is_negative(), "decimal literals are nonnegative");
    let denom = value.denom();
    let mut rest = denom.clone();
    let mut twos = 0u32;
    let mut fives = 0u32;
    let two = BigInt::from(2u32);
    let five = BigInt::from(5u32);
    while (&rest % &two).is_zero() {
        rest /= &two;
        twos += 1;
    }
    while (&rest % &five).is_zero() {
        rest /= &five;
        fives += 1;
    }
    assert!(
        rest.is_one(),
        "rational {value} has no finite decimal expansion"
    );
    let digits = twos.max(fives);
    let scale = BigInt::from(10u32).pow(digits);
    let scaled = value.numer() * &scale / denom;
    let text = scaled.to_string();
    if digits == 0 {
        return format!("{text}.0");
    }
    let digits = digits as usize;
    let padded = format!("{text:0>width$}", width = digits + 1);
    let split = padded.len() - digits;
    let (int_part, frac_part) = padded.split_at(split);
    let frac_trimmed = frac_part.trim_end_matches('0');
    let frac_part = if frac_trimmed.is_empty() { "0" } else { frac_trimmed };
    format!("{int_part}.{frac_part}")
}

/// Render a rational as a natural if it is one, otherwise as a decimal.
pub fn format_integer_or_decimal(value: &BigRational) -> String {
    if value.is_integer() {
        value.numer().to_string()
    } else {
        format_decimal(value)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_and_prints_exactly() {
        let q = parse_decimal("1.9").unwrap();
        assert_eq!(q, BigRational::new(19.into(), 10.into()));
        assert_eq!(format_decimal(&q), "1.9");
        assert_eq!(format_decimal(&parse_decimal("0.500").unwrap()), "0.5");
        assert_eq!(format_decimal(&BigRational::from_integer(8.into())), "8.0");
        assert_eq!(format_decimal(&parse_decimal("12.75").unwrap()), "12.75");
        assert_eq!(format_decimal(&parse_decimal("0.0").unwrap()), "0.0");
    }

    #[test]
    fn rejects_malformed() {
        assert!(parse_decimal("12").is_none());
        assert!(parse_decimal(".5").is_none());
        assert!(parse_decimal("1.").is_none());
    }
}
