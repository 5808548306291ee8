//! Exact rational arithmetic.
//!
//! Probability estimates, risks, objectives and bound values are all ratios
//! of integer counts, but objective sums mix denominators (dataset size,
//! capture counts, decimal costs), so comparisons must not go through
//! floating point. `Rat` is an arbitrary-precision rational; its `Ord` is
//! exact cross-multiplication.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{FromPrimitive, Integer, One, Signed, ToPrimitive, Zero};
use std::fmt;

/// Exact rational number used for every pruning comparison.
pub type Rat = BigRational;

/// `v` as a rational.
pub fn rat_int(v: i64) -> Rat {
    Rat::from_integer(BigInt::from(v))
}

/// `num/den`. Panics if `den == 0`.
pub fn rat(num: i64, den: i64) -> Rat {
    Rat::new(BigInt::from(num), BigInt::from(den))
}

/// `num/den` from non-negative counts. Panics if `den == 0`.
pub fn rat_counts(num: usize, den: usize) -> Rat {
    Rat::new(BigInt::from(num), BigInt::from(den))
}

/// Positive part `max(x, 0)`, written ⌊x⌋₊ in the objective definitions.
pub fn pos_part(x: &Rat) -> Rat {
    if x.is_negative() {
        Rat::zero()
    } else {
        x.clone()
    }
}

/// Nearest `f64`; only for display, trace output and the square-root branch
/// of the soft bound.
pub fn to_f64(x: &Rat) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

/// The exact rational value of a finite `f64` (every finite `f64` is a
/// dyadic rational).
pub fn from_f64_exact(v: f64) -> Rat {
    Rat::from_f64(v).expect("finite f64")
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("not a rational number: {0:?}")]
pub struct ParseRatError(pub String);

/// Parses `"p/q"`, integers, and decimal/scientific notation (`0.5`,
/// `1e-6`, `-2.5e3`) into the exact rational they denote.
pub fn parse_rat(s: &str) -> Result<Rat, ParseRatError> {
    let s = s.trim();
    if let Some((p, q)) = s.split_once('/') {
        let num: BigInt = p.trim().parse().map_err(|_| ParseRatError(s.into()))?;
        let den: BigInt = q.trim().parse().map_err(|_| ParseRatError(s.into()))?;
        if den.is_zero() {
            return Err(ParseRatError(s.into()));
        }
        return Ok(Rat::new(num, den));
    }
    parse_decimal(s)
}

fn parse_decimal(s: &str) -> Result<Rat, ParseRatError> {
    let err = || ParseRatError(s.into());
    let (mantissa, exp10) = match s.split_once(['e', 'E']) {
        Some((m, e)) => (m, e.parse::<i32>().map_err(|_| err())?),
        None => (s, 0),
    };
    let (int_part, frac_part) = match mantissa.split_once('.') {
        Some((i, f)) => (i, f),
        None => (mantissa, ""),
    };
    let (negative, int_digits) = match int_part.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, int_part.strip_prefix('+').unwrap_or(int_part)),
    };
    if (int_digits.is_empty() && frac_part.is_empty())
        || !int_digits.chars().all(|c| c.is_ascii_digit())
        || !frac_part.chars().all(|c| c.is_ascii_digit())
    {
        return Err(err());
    }
    let digits: BigInt = format!(
        "{}{}",
        if int_digits.is_empty() {
            "0"
        } else {
            int_digits
        },
        frac_part
    )
    .parse()
    .map_err(|_| err())?;
    let digits = if negative { -digits } else { digits };
    let scale = exp10 - frac_part.len() as i32;
    let pow = BigInt::from(10u32).pow(scale.unsigned_abs());
    Ok(if scale >= 0 {
        Rat::from_integer(digits * pow)
    } else {
        Rat::new(digits, pow)
    })
}

/// Rounds to two decimals with ties-to-even and formats, e.g. `0.65`.
pub fn round2(x: &Rat) -> String {
    let scaled = x * rat_int(100);
    let num = scaled.numer();
    let den = scaled.denom(); // > 0 after normalization
    let (mut q, r) = num.div_mod_floor(den); // 0 <= r < den
    let twice = &r * BigInt::from(2);
    if twice > *den || (twice == *den && q.is_odd()) {
        q += 1;
    }
    let negative = q.is_negative();
    let abs = q.abs();
    let (whole, cents) = abs.div_rem(&BigInt::from(100));
    format!(
        "{}{}.{:02}",
        if negative { "-" } else { "" },
        whole,
        cents.to_u32().expect("two decimal digits")
    )
}

/// Wrapper that `Display`s a rational as `p/q` (or `p` when integral).
pub struct Frac<'a>(pub &'a Rat);

impl fmt::Display for Frac<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.denom().is_one() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

/// Serde adapter storing a `Rat` as its exact `p/q` string.
pub mod rat_string {
    use super::*;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(value: &Rat, ser: S) -> Result<S::Ok, S::Error> {
        ser.serialize_str(&Frac(value).to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(de: D) -> Result<Rat, D::Error> {
        let s = String::deserialize(de)?;
        parse_rat(&s).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_decimals_exactly() {
        assert_eq!(parse_rat("1e-6").unwrap(), rat(1, 1_000_000));
        assert_eq!(parse_rat("0.5").unwrap(), rat(1, 2));
        assert_eq!(parse_rat("0.10").unwrap(), rat(1, 10));
        assert_eq!(parse_rat("-2.5e3").unwrap(), rat_int(-2500));
        assert_eq!(parse_rat("7").unwrap(), rat_int(7));
        assert_eq!(parse_rat("978/1509").unwrap(), rat(978, 1509));
        assert_eq!(parse_rat(".25").unwrap(), rat(1, 4));
    }

    #[test]
    fn rejects_garbage() {
        for s in ["", "x", "1.2.3", "1/0", "1e", "--3"] {
            assert!(parse_rat(s).is_err(), "accepted {s:?}");
        }
    }

    #[test]
    fn rounds_half_even_to_two_decimals() {
        assert_eq!(round2(&rat(978, 1509)), "0.65");
        assert_eq!(round2(&rat(2365, 33511)), "0.07");
        assert_eq!(round2(&rat(1, 8)), "0.12"); // 12.5 -> even
        assert_eq!(round2(&rat(3, 8)), "0.38"); // 37.5 -> even
        assert_eq!(round2(&rat_int(1)), "1.00");
        assert_eq!(round2(&rat(-1, 8)), "-0.12");
        assert_eq!(round2(&rat(1234, 100)), "12.34");
    }

    #[test]
    fn positive_part() {
        assert_eq!(pos_part(&rat(-3, 4)), Rat::zero());
        assert_eq!(pos_part(&rat(3, 4)), rat(3, 4));
        assert_eq!(pos_part(&Rat::zero()), Rat::zero());
    }

    #[test]
    fn comparisons_are_exact() {
        // 8/11 < 6/8 drives the toy infeasibility example; make sure the
        // ordering is the exact one.
        assert!(rat(8, 11) < rat(6, 8));
        assert!(rat(1, 3) * rat_int(3) == rat_int(1));
    }
}
