//! Line/token scanning and numeric encodings shared by the file formats.

use crate::error::{Error, Result};
use crate::interval::Interval;

#[derive(Clone, Copy, Debug)]
pub struct Token<'a> {
    pub text: &'a str,
    pub line: usize,
    pub col: usize,
}

pub struct Line<'a> {
    pub number: usize,
    pub tokens: Vec<Token<'a>>,
}

/// Splits `src` into non-empty lines of whitespace-separated tokens, dropping
/// `#` comments.
pub fn lines(src: &str) -> Vec<Line<'_>> {
    let mut out = Vec::new();
    for (k, raw) in src.lines().enumerate() {
        let body = raw.split('#').next().unwrap_or("");
        let tokens = tokenize(body, k + 1);
        if !tokens.is_empty() {
            out.push(Line { number: k + 1, tokens });
        }
    }
    out
}

pub fn tokenize(body: &str, line: usize) -> Vec<Token<'_>> {
    let mut tokens = Vec::new();
    let mut start = None;
    for (i, ch) in body.char_indices() {
        if ch.is_whitespace() {
            if let Some(s) = start.take() {
                tokens.push(Token { text: &body[s..i], line, col: s + 1 });
            }
        } else if start.is_none() {
            start = Some(i);
        }
    }
    if let Some(s) = start {
        tokens.push(Token { text: &body[s..], line, col: s + 1 });
    }
    tokens
}

/// Error anchored at a token.
pub struct Ctx<'p> {
    pub path: &'p str,
}

impl Ctx<'_> {
    pub fn err(&self, line: usize, col: usize, msg: impl Into<String>) -> Error {
        Error::Parse {
            path: self.path.to_string(),
            line,
            col,
            msg: msg.into(),
        }
    }

    pub fn at(&self, t: &Token<'_>, msg: impl Into<String>) -> Error {
        self.err(t.line, t.col, msg)
    }

    pub fn usize(&self, t: &Token<'_>) -> Result<usize> {
        t.text.parse().map_err(|_| self.at(t, format!("expected a nonnegative integer, found {:?}", t.text)))
    }

    pub fn index(&self, t: &Token<'_>, max: usize, what: &str) -> Result<usize> {
        let v = self.usize(t)?;
        if v == 0 || v > max {
            return Err(self.at(t, format!("{what} index {v} out of range 1..={max}")));
        }
        Ok(v - 1)
    }

    /// Enclosure of a value: decimal, hexadecimal float, or `[lo,hi]`.
    pub fn interval(&self, t: &Token<'_>) -> Result<Interval> {
        parse_interval(t.text).map_err(|m| self.at(t, m))
    }

    /// A binary64 approximation: nearest for decimals, exact for hex.
    pub fn approx(&self, t: &Token<'_>) -> Result<f64> {
        parse_approx(t.text).map_err(|m| self.at(t, m))
    }

    /// A rigorous upper bound (`inf` allowed): decimals are rounded up.
    pub fn cap(&self, t: &Token<'_>) -> Result<f64> {
        if t.text == "inf" || t.text == "+inf" {
            return Ok(f64::INFINITY);
        }
        let v = parse_interval(t.text).map_err(|m| self.at(t, m))?.hi();
        if v < 0.0 {
            return Err(self.at(t, "caps must be nonnegative"));
        }
        Ok(v)
    }
}

fn is_hex(s: &str) -> bool {
    let s = s.strip_prefix(['-', '+']).unwrap_or(s);
    s.starts_with("0x") || s.starts_with("0X")
}

pub fn parse_hex(s: &str) -> std::result::Result<f64, String> {
    let (neg, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s.strip_prefix('+').unwrap_or(s)),
    };
    let v = hexf_parse::parse_hexf64(body, false).map_err(|_| format!("malformed hexadecimal float {s:?}"))?;
    Ok(if neg { -v } else { v })
}

pub fn parse_interval(s: &str) -> std::result::Result<Interval, String> {
    if let Some(inner) = s.strip_prefix('[') {
        let inner = inner.strip_suffix(']').ok_or_else(|| format!("unterminated interval {s:?}"))?;
        let (a, b) = inner.split_once(',').ok_or_else(|| format!("interval {s:?} needs two endpoints"))?;
        let lo = parse_interval(a.trim())?.lo();
        let hi = parse_interval(b.trim())?.hi();
        return Interval::new(lo, hi).map_err(|e| e.to_string());
    }
    if is_hex(s) {
        let v = parse_hex(s)?;
        if !v.is_finite() {
            return Err(format!("non-finite value {s:?}"));
        }
        return Ok(Interval::point(v));
    }
    Interval::from_decimal(s).map_err(|e| e.to_string())
}

pub fn parse_approx(s: &str) -> std::result::Result<f64, String> {
    let v = if is_hex(s) {
        parse_hex(s)?
    } else {
        // Validate with the strict decimal grammar, then round to nearest.
        Interval::from_decimal(s).map_err(|e| e.to_string())?;
        s.parse::<f64>().map_err(|_| format!("malformed number {s:?}"))?
    };
    if !v.is_finite() {
        return Err(format!("non-finite value {s:?}"));
    }
    Ok(v)
}

/// Exact hexadecimal rendering, e.g. `0x1.8p+1`, `-0x1p-1074`, `inf`.
pub fn format_hex(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let sign = if x.is_sign_negative() && x != 0.0 { "-" } else { "" };
    if x == 0.0 {
        return "0x0p+0".into();
    }
    let bits = x.abs().to_bits();
    let exp_bits = (bits >> 52) as i64;
    let frac = bits & ((1u64 << 52) - 1);
    let (lead, exp) = if exp_bits == 0 { (0, -1022) } else { (1, exp_bits - 1023) };
    let mut digits = format!("{frac:013x}");
    while digits.ends_with('0') {
        digits.pop();
    }
    let mant = if digits.is_empty() { format!("{lead}") } else { format!("{lead}.{digits}") };
    format!("{sign}0x{mant}p{exp:+}")
}

/// Hex for point intervals, `[lo,hi]` otherwise.
pub fn format_interval(v: Interval) -> String {
    if v.is_point() {
        format_hex(v.lo())
    } else {
        format!("[{},{}]", format_hex(v.lo()), format_hex(v.hi()))
    }
}
