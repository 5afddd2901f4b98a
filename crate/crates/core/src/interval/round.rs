//! Directed rounding without touching the FPU control word.
//!
//! Every function computes the round-to-nearest result and then recovers the
//! sign of the exact rounding error with an error-free transformation
//! (TwoSum for addition, an FMA residual for multiplication, division and
//! square root). When the error term is itself exact, the returned value is
//! precisely the IEEE 754 directed-rounding result. Below `2^-968` the FMA
//! residual can lose bits to underflow, so there the result is stepped one
//! ulp outward unconditionally. The overestimation is therefore at most one
//! ulp per endpoint per primitive.
//!
//! Products with a zero factor are zero even when the other factor is
//! infinite; this is the convention interval endpoints need, because an
//! infinite endpoint stands for an unbounded set, not for the value itself.

/// Magnitude below which FMA residuals are not trusted.
const TINY: f64 = f64::from_bits(0x0370_0000_0000_0000); // 2^-968

#[inline]
fn two_sum_err(a: f64, b: f64, s: f64) -> f64 {
    let bb = s - a;
    (a - (s - bb)) + (b - bb)
}

#[inline]
fn overflowed(r: f64, a: f64, b: f64) -> bool {
    r.is_infinite() && a.is_finite() && b.is_finite()
}

pub fn add_up(a: f64, b: f64) -> f64 {
    let s = a + b;
    if !s.is_finite() {
        if overflowed(s, a, b) && s < 0.0 {
            return -f64::MAX;
        }
        return s;
    }
    if two_sum_err(a, b, s) > 0.0 {
        s.next_up()
    } else {
        s
    }
}

pub fn add_down(a: f64, b: f64) -> f64 {
    let s = a + b;
    if !s.is_finite() {
        if overflowed(s, a, b) && s > 0.0 {
            return f64::MAX;
        }
        return s;
    }
    if two_sum_err(a, b, s) < 0.0 {
        s.next_down()
    } else {
        s
    }
}

#[inline]
pub fn sub_up(a: f64, b: f64) -> f64 {
    add_up(a, -b)
}

#[inline]
pub fn sub_down(a: f64, b: f64) -> f64 {
    add_down(a, -b)
}

/// Sign of `exact(a*b) - fl(a*b)`: `Some(ordering)` when it could be decided.
#[inline]
fn mul_err_sign(a: f64, b: f64, p: f64) -> Option<f64> {
    if p.abs() < TINY {
        return None;
    }
    Some(a.mul_add(b, -p))
}

pub fn mul_up(a: f64, b: f64) -> f64 {
    if a == 0.0 || b == 0.0 {
        return 0.0;
    }
    let p = a * b;
    if !p.is_finite() {
        if overflowed(p, a, b) && p < 0.0 {
            return -f64::MAX;
        }
        return p;
    }
    match mul_err_sign(a, b, p) {
        Some(e) if e > 0.0 => p.next_up(),
        Some(_) => p,
        None => p.next_up(),
    }
}

pub fn mul_down(a: f64, b: f64) -> f64 {
    if a == 0.0 || b == 0.0 {
        return 0.0;
    }
    let p = a * b;
    if !p.is_finite() {
        if overflowed(p, a, b) && p > 0.0 {
            return f64::MAX;
        }
        return p;
    }
    match mul_err_sign(a, b, p) {
        Some(e) if e < 0.0 => p.next_down(),
        Some(_) => p,
        None => p.next_down(),
    }
}

/// Sign of `exact(a/b) - fl(a/b)` as a float (only the sign matters).
#[inline]
fn div_err_sign(a: f64, b: f64, q: f64) -> Option<f64> {
    if q == 0.0 || q.abs() < TINY || a.abs() < TINY {
        return None;
    }
    // a - q*b is exact here; the quotient error has the sign of r/b.
    let r = (-q).mul_add(b, a);
    Some(if b > 0.0 { r } else { -r })
}

/// Caller guarantees `b != 0`.
pub fn div_up(a: f64, b: f64) -> f64 {
    let q = a / b;
    if !q.is_finite() {
        if overflowed(q, a, b) && q < 0.0 {
            return -f64::MAX;
        }
        return q;
    }
    if a.is_infinite() || b.is_infinite() || a == 0.0 {
        return q;
    }
    match div_err_sign(a, b, q) {
        Some(e) if e > 0.0 => q.next_up(),
        Some(_) => q,
        None => q.next_up(),
    }
}

/// Caller guarantees `b != 0`.
pub fn div_down(a: f64, b: f64) -> f64 {
    let q = a / b;
    if !q.is_finite() {
        if overflowed(q, a, b) && q > 0.0 {
            return f64::MAX;
        }
        return q;
    }
    if a.is_infinite() || b.is_infinite() || a == 0.0 {
        return q;
    }
    match div_err_sign(a, b, q) {
        Some(e) if e < 0.0 => q.next_down(),
        Some(_) => q,
        None => q.next_down(),
    }
}

/// Square root rounded up; `x` must be nonnegative.
pub fn sqrt_up(x: f64) -> f64 {
    let s = x.sqrt();
    if x == 0.0 || !s.is_finite() {
        return s;
    }
    if x < TINY {
        return s.next_up();
    }
    if (-s).mul_add(s, x) > 0.0 {
        s.next_up()
    } else {
        s
    }
}

/// Square root rounded down; `x` must be nonnegative.
pub fn sqrt_down(x: f64) -> f64 {
    let s = x.sqrt();
    if x == 0.0 || !s.is_finite() {
        return s;
    }
    if x < TINY {
        return s.next_down().max(0.0);
    }
    if (-s).mul_add(s, x) < 0.0 {
        s.next_down()
    } else {
        s
    }
}
