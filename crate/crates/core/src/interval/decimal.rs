use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Pow, Zero};

use super::Interval;
use crate::error::{Error, Result};

struct Decimal {
    negative: bool,
    digits: BigInt,
    exp10: i64,
}

fn parse_literal(s: &str) -> Option<Decimal> {
    let bytes = s.as_bytes();
    let mut i = 0;
    let mut negative = false;
    if i < bytes.len() && (bytes[i] == b'+' || bytes[i] == b'-') {
        negative = bytes[i] == b'-';
        i += 1;
    }
    let mut digits = String::new();
    let mut frac_len: i64 = 0;
    let mut seen_digit = false;
    let mut seen_dot = false;
    while i < bytes.len() {
        match bytes[i] {
            b'0'..=b'9' => {
                digits.push(bytes[i] as char);
                seen_digit = true;
                if seen_dot {
                    frac_len += 1;
                }
            }
            b'.' if !seen_dot => seen_dot = true,
            _ => break,
        }
        i += 1;
    }
    if !seen_digit {
        return None;
    }
    let mut exp: i64 = 0;
    if i < bytes.len() && (bytes[i] == b'e' || bytes[i] == b'E') {
        let rest = &s[i + 1..];
        if rest.is_empty() || rest == "+" || rest == "-" {
            return None;
        }
        let body = rest.strip_prefix('+').unwrap_or(rest);
        if !body.trim_start_matches('-').bytes().all(|b| b.is_ascii_digit()) {
            return None;
        }
        // Saturate absurd exponents; the value then over/underflows anyway.
        exp = body.parse::<i64>().unwrap_or(if body.starts_with('-') { -1_000_000 } else { 1_000_000 });
        i = bytes.len();
    }
    if i != bytes.len() {
        return None;
    }
    Some(Decimal {
        negative,
        digits: digits.parse().ok()?,
        exp10: exp.clamp(-1_000_000, 1_000_000) - frac_len,
    })
}

fn exact_value(d: &Decimal) -> BigRational {
    let ten = BigInt::from(10);
    let mag = if d.exp10 >= 0 {
        BigRational::from_integer(&d.digits * Pow::pow(&ten, d.exp10 as u64))
    } else {
        BigRational::new(d.digits.clone(), Pow::pow(&ten, (-d.exp10) as u64))
    };
    if d.negative {
        -mag
    } else {
        mag
    }
}

/// Tightest binary64 enclosure of a decimal literal.
pub(super) fn enclose(s: &str) -> Result<Interval> {
    let trimmed = s.trim();
    let lit = parse_literal(trimmed).ok_or_else(|| Error::Decimal(s.to_string()))?;
    // std's parser rounds to nearest, so the exact value is within one ulp of it.
    let nearest: f64 = trimmed.parse().map_err(|_| Error::Decimal(s.to_string()))?;

    if lit.digits.is_zero() {
        return Ok(Interval::ZERO);
    }
    if nearest.is_infinite() {
        return Ok(if nearest > 0.0 {
            Interval { lo: f64::MAX, hi: f64::INFINITY }
        } else {
            Interval { lo: f64::NEG_INFINITY, hi: -f64::MAX }
        });
    }
    if nearest == 0.0 {
        let tiny = f64::from_bits(1);
        return Ok(if lit.negative {
            Interval { lo: -tiny, hi: 0.0 }
        } else {
            Interval { lo: 0.0, hi: tiny }
        });
    }
    let exact = exact_value(&lit);
    let approx = BigRational::from_float(nearest).expect("finite float converts exactly");
    Ok(match exact.cmp(&approx) {
        std::cmp::Ordering::Equal => Interval::point(nearest),
        std::cmp::Ordering::Greater => Interval { lo: nearest, hi: nearest.next_up() },
        std::cmp::Ordering::Less => Interval { lo: nearest.next_down(), hi: nearest },
    })
}
