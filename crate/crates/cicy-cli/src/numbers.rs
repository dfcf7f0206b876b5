//! Exact parsing of user-supplied numbers.
//!
//! Step sizes and tolerances arrive as command-line text and must become
//! exact rationals — the continuation layer perturbs forms with exact
//! coefficients, so `1e-3` has to mean 1/1000, not the nearest double.
//! Accepted shapes: integers (`-3`), fractions (`1/1000`), decimals
//! (`0.001`), and scientific notation (`1e-3`, `2.5E+4`).

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::CliError;

pub fn parse_rational(text: &str) -> Result<BigRational, CliError> {
    let trimmed = text.trim();
    let bad = || CliError::Hypothesis(format!("unreadable number {trimmed:?}"));
    if trimmed.is_empty() {
        return Err(bad());
    }
    // Plain fraction: both sides are integers.
    if let Some((n, d)) = trimmed.split_once('/') {
        let numer: BigInt = n.trim().parse().map_err(|_| bad())?;
        let denom: BigInt = d.trim().parse().map_err(|_| bad())?;
        if denom.is_zero() {
            return Err(bad());
        }
        return Ok(BigRational::new(numer, denom));
    }
    // Decimal with optional exponent: split off e/E first.
    let (mantissa, exponent) = match trimmed.split_once(['e', 'E']) {
        Some((m, e)) => {
            let exp: i64 = e.parse().map_err(|_| bad())?;
            (m, exp)
        }
        None => (trimmed, 0),
    };
    let (sign, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (-1, rest),
        None => (1, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = match digits.split_once('.') {
        Some((i, f)) => (i, f),
        None => (digits, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(bad());
    }
    if !int_part.chars().all(|c| c.is_ascii_digit())
        || !frac_part.chars().all(|c| c.is_ascii_digit())
    {
        return Err(bad());
    }
    let joined = format!("{int_part}{frac_part}");
    let numer: BigInt = if joined.is_empty() {
        BigInt::zero()
    } else {
        joined.parse().map_err(|_| bad())?
    };
    let shift = exponent - frac_part.len() as i64;
    let ten = BigInt::from(10);
    let scale = pow_bigint(&ten, shift.unsigned_abs());
    let value = if shift >= 0 {
        BigRational::from_integer(numer * scale)
    } else {
        BigRational::new(numer, scale)
    };
    Ok(if sign < 0 { -value } else { value })
}

fn pow_bigint(base: &BigInt, exp: u64) -> BigInt {
    let mut acc = BigInt::one();
    for _ in 0..exp {
        acc *= base;
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn accepted_shapes() {
        assert_eq!(parse_rational("0").unwrap(), r(0, 1));
        assert_eq!(parse_rational("-3").unwrap(), r(-3, 1));
        assert_eq!(parse_rational("1/1000").unwrap(), r(1, 1000));
        assert_eq!(parse_rational("0.001").unwrap(), r(1, 1000));
        assert_eq!(parse_rational("1e-3").unwrap(), r(1, 1000));
        assert_eq!(parse_rational("1e-12").unwrap(), r(1, 1_000_000_000_000));
        assert_eq!(parse_rational("2.5E+4").unwrap(), r(25000, 1));
        assert_eq!(parse_rational("-0.25").unwrap(), r(-1, 4));
        assert_eq!(parse_rational(".5").unwrap(), r(1, 2));
    }

    #[test]
    fn rejected_shapes() {
        for bad in ["", "abc", "1/0", "1.2.3", "--2", "1e", "0x10"] {
            assert!(parse_rational(bad).is_err(), "{bad:?} should not parse");
        }
    }
}
