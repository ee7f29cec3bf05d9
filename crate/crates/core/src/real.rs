//! Extended-precision reals backed by MPFR, plus the decimal text forms used
//! on the wire.

use rug::float::Round;
use rug::ops::{CompleteRound, Pow};
use rug::{Float, Integer, Rational};

use crate::error::{ModeqError, Result};

/// An extended-precision real. The significand width travels with the value.
pub type RealX = Float;

pub const MIN_PRECISION_BITS: u32 = 53;

/// Guard bits added to the working precision inside series evaluations.
pub(crate) const GUARD_BITS: u32 = 32;

pub fn real(prec: u32, value: f64) -> RealX {
    Float::with_val(prec, value)
}

pub fn real_from_rational(prec: u32, value: &Rational) -> RealX {
    Float::with_val(prec, value)
}

/// Parses `"0.25"`, `"1e-3"`, `"1/3"` or `"-7"` into an exact rational.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let s = text.trim();
    if s.is_empty() {
        return Err(ModeqError::Parse("empty number".into()));
    }
    if s.contains('/') {
        return Rational::from_str_radix(s, 10)
            .map_err(|e| ModeqError::Parse(format!("{s:?}: {e}")))
            .and_then(|r| {
                if r.denom() == &0 {
                    Err(ModeqError::Parse(format!("{s:?}: zero denominator")))
                } else {
                    Ok(r)
                }
            });
    }
    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(i) => {
            let e: i64 = s[i + 1..]
                .parse()
                .map_err(|e| ModeqError::Parse(format!("{s:?}: {e}")))?;
            (&s[..i], e)
        }
        None => (s, 0),
    };
    let (int_part, frac_part) = match mantissa.split_once('.') {
        Some((a, b)) => (a, b),
        None => (mantissa, ""),
    };
    let digits = format!("{int_part}{frac_part}");
    let digits_ok = digits
        .trim_start_matches(['+', '-'])
        .chars()
        .all(|c| c.is_ascii_digit());
    if !digits_ok || digits.trim_start_matches(['+', '-']).is_empty() {
        return Err(ModeqError::Parse(format!("{s:?}: not a decimal number")));
    }
    let numer = Integer::from_str_radix(&digits, 10)
        .map_err(|e| ModeqError::Parse(format!("{s:?}: {e}")))?;
    let scale = exponent - frac_part.len() as i64;
    if scale.unsigned_abs() > 100_000 {
        return Err(ModeqError::Parse(format!("{s:?}: exponent out of range")));
    }
    let pow = Integer::from(10).pow(scale.unsigned_abs() as u32);
    Ok(if scale >= 0 {
        Rational::from(numer * pow)
    } else {
        Rational::from((numer, pow))
    })
}

/// Parses a decimal or `a/b` literal, correctly rounded to `prec` bits.
pub fn parse_real(text: &str, prec: u32) -> Result<RealX> {
    Ok(real_from_rational(prec, &parse_rational(text)?))
}

/// Shortest decimal string that reads back to exactly `x` at its own precision.
pub fn to_decimal_string(x: &Float) -> String {
    if !x.is_finite() {
        return x.to_string();
    }
    if x.is_zero() {
        return "0".into();
    }
    let prec = x.prec();
    let reads_back = |digits: usize| {
        let s = x.to_string_radix(10, Some(digits));
        let parsed = Float::parse(&s).expect("mpfr output parses");
        (parsed.complete_round(prec, Round::Nearest).0 == *x).then_some(s)
    };
    // Correctly rounded n-digit strings approach x monotonically, so the
    // round-trip property is monotone in n.
    let mut hi = (prec as f64 * std::f64::consts::LOG10_2).ceil() as usize + 2;
    let mut best = reads_back(hi).expect("enough digits always round-trip");
    let mut lo = 1usize;
    while lo < hi {
        let mid = (lo + hi) / 2;
        match reads_back(mid) {
            Some(s) => {
                best = s;
                hi = mid;
            }
            None => lo = mid + 1,
        }
    }
    tidy_mpfr_string(&best)
}

/// Turns MPFR's `d.ddddde±x` output into a plain decimal where that is short.
fn tidy_mpfr_string(s: &str) -> String {
    let (mant, exp) = match s.split_once('e') {
        Some((m, e)) => (m, e.parse::<i64>().unwrap_or(0)),
        None => (s, 0),
    };
    let (sign, mant) = match mant.strip_prefix('-') {
        Some(rest) => ("-", rest),
        None => ("", mant),
    };
    let (int_part, frac_part) = mant.split_once('.').unwrap_or((mant, ""));
    let digits = format!("{int_part}{frac_part}");
    let digits = digits.trim_end_matches('0');
    let digits = if digits.is_empty() { "0" } else { digits };
    // Position of the decimal point relative to the start of `digits`.
    let point = int_part.len() as i64 + exp;
    if (-6..=21).contains(&point) {
        let body = if point <= 0 {
            format!("0.{}{}", "0".repeat((-point) as usize), digits)
        } else if point as usize >= digits.len() {
            format!("{}{}", digits, "0".repeat(point as usize - digits.len()))
        } else {
            let (a, b) = digits.split_at(point as usize);
            format!("{a}.{b}")
        };
        format!("{sign}{body}")
    } else {
        let (a, b) = digits.split_at(1);
        let b = if b.is_empty() {
            String::new()
        } else {
            format!(".{b}")
        };
        format!("{sign}{a}{b}e{}", point - 1)
    }
}

/// Reads a decimal string produced by [`to_decimal_string`] back at `prec` bits.
pub fn from_decimal_string(text: &str, prec: u32) -> Result<RealX> {
    let parsed =
        Float::parse(text.trim()).map_err(|e| ModeqError::Parse(format!("{text:?}: {e}")))?;
    Ok(Float::with_val(prec, parsed))
}

/// `1 − x` for `0 ≤ x ≤ 1`, computed exactly. The result carries at least the
/// precision of `x`, widened by the leading zero bits of `x` when `x < 1/2`.
pub fn exact_one_minus(x: &Float) -> Float {
    let extra = match x.get_exp() {
        Some(e) if e < 0 => (-e) as u32,
        _ => 0,
    };
    let prec = x.prec() + extra + 1;
    let mut out = Float::with_val(prec, 1);
    out -= x;
    out
}

/// `2^exp` as a real at `prec` bits.
pub fn pow2(prec: u32, exp: i32) -> RealX {
    Float::with_val(prec, 1) << exp
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_decimals_and_fractions() {
        assert_eq!(parse_rational("0.25").unwrap(), Rational::from((1, 4)));
        assert_eq!(parse_rational("1/3").unwrap(), Rational::from((1, 3)));
        assert_eq!(parse_rational("-2.5e1").unwrap(), Rational::from(-25));
        assert_eq!(parse_rational("1e-3").unwrap(), Rational::from((1, 1000)));
        assert!(parse_rational("abc").is_err());
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("").is_err());
    }

    #[test]
    fn shortest_decimal_is_short_and_exact() {
        assert_eq!(to_decimal_string(&real(128, 0.5)), "0.5");
        assert_eq!(to_decimal_string(&real(64, 2.0)), "2");
        assert_eq!(to_decimal_string(&real(53, -0.125)), "-0.125");
        let x = Float::with_val(200, 1) / 3u32;
        let s = to_decimal_string(&x);
        assert_eq!(from_decimal_string(&s, 200).unwrap(), x);
        let tiny = Float::with_val(128, 1) >> 200u32;
        let s = to_decimal_string(&tiny);
        assert!(s.contains('e'), "{s}");
        assert_eq!(from_decimal_string(&s, 128).unwrap(), tiny);
    }

    #[test]
    fn complement_is_exact() {
        let x = (Float::with_val(64, 1) / 3u32) >> 40u32;
        let c = exact_one_minus(&x);
        let back = exact_one_minus(&c);
        assert_eq!(back, x);
        let half = real(64, 0.75);
        assert_eq!(exact_one_minus(&half), 0.25);
    }
}
