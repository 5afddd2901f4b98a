//! Outward-rounded interval arithmetic over binary64.
//!
//! An [`Interval`] `[lo, hi]` stands for the set of reals between its
//! endpoints. Every operation returns a superset of the exact image of its
//! operands, so any real computation carried out on member points stays
//! inside the result. Endpoints may be infinite; a NaN produced anywhere in
//! an operation collapses the result to the whole real line.

mod decimal;
pub mod round;
mod vector;

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

pub use vector::{dot, mag_upper, IMatrix, IVector};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Interval {
    lo: f64,
    hi: f64,
}

impl Interval {
    pub const ZERO: Interval = Interval { lo: 0.0, hi: 0.0 };
    pub const ONE: Interval = Interval { lo: 1.0, hi: 1.0 };
    pub const ENTIRE: Interval = Interval {
        lo: f64::NEG_INFINITY,
        hi: f64::INFINITY,
    };

    /// Builds `[lo, hi]`; rejects NaN and inverted endpoints.
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if lo.is_nan() || hi.is_nan() || lo > hi || lo == f64::INFINITY || hi == f64::NEG_INFINITY {
            return Err(Error::InvalidInterval { lo, hi });
        }
        Ok(Interval { lo, hi })
    }

    /// Zero-width interval around a finite value.
    ///
    /// # Panics
    /// If `x` is NaN or infinite.
    #[inline]
    pub fn point(x: f64) -> Self {
        assert!(x.is_finite(), "point interval from non-finite value {x}");
        Interval { lo: x, hi: x }
    }

    /// Result constructor used by the arithmetic: NaN anywhere means "unknown".
    #[inline]
    fn checked(lo: f64, hi: f64) -> Self {
        if lo.is_nan() || hi.is_nan() {
            Self::ENTIRE
        } else {
            Interval { lo, hi }
        }
    }

    /// Tight enclosure of a decimal literal such as `-12.5e-3`.
    pub fn from_decimal(s: &str) -> Result<Self> {
        decimal::enclose(s)
    }

    #[inline]
    pub fn lo(self) -> f64 {
        self.lo
    }

    #[inline]
    pub fn hi(self) -> f64 {
        self.hi
    }

    #[inline]
    pub fn is_point(self) -> bool {
        self.lo == self.hi
    }

    /// Smallest interval containing both.
    pub fn hull(self, other: Interval) -> Interval {
        Interval {
            lo: self.lo.min(other.lo),
            hi: self.hi.max(other.hi),
        }
    }

    #[inline]
    pub fn contains(self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    #[inline]
    pub fn contains_zero(self) -> bool {
        self.contains(0.0)
    }

    #[inline]
    pub fn subset_of(self, other: Interval) -> bool {
        other.lo <= self.lo && self.hi <= other.hi
    }

    /// `self` lies in the topological interior of `other`.
    #[inline]
    pub fn interior_of(self, other: Interval) -> bool {
        other.lo < self.lo && self.hi < other.hi
    }

    /// Approximate midpoint (not rigorous).
    pub fn mid(self) -> f64 {
        if self.lo == f64::NEG_INFINITY && self.hi == f64::INFINITY {
            return 0.0;
        }
        if self.lo.is_infinite() || self.hi.is_infinite() {
            return if self.lo.is_infinite() { self.hi } else { self.lo };
        }
        let m = 0.5 * self.lo + 0.5 * self.hi;
        m.clamp(self.lo, self.hi)
    }

    /// Upper bound on the radius about [`Interval::mid`].
    pub fn rad(self) -> f64 {
        let m = self.mid();
        round::sub_up(self.hi, m).max(round::sub_up(m, self.lo))
    }

    /// Upper bound on `hi - lo`.
    pub fn width(self) -> f64 {
        round::sub_up(self.hi, self.lo)
    }

    /// Largest magnitude of any member, `max |x|`.
    #[inline]
    pub fn mag(self) -> f64 {
        self.lo.abs().max(self.hi.abs())
    }

    /// Smallest magnitude of any member, `min |x|`.
    pub fn mig(self) -> f64 {
        if self.contains_zero() {
            0.0
        } else {
            self.lo.abs().min(self.hi.abs())
        }
    }

    pub fn abs(self) -> Interval {
        Interval {
            lo: self.mig(),
            hi: self.mag(),
        }
    }

    /// Image of `x -> x^2`, tighter than `self * self` when `0` is inside.
    pub fn sqr(self) -> Interval {
        let lo = if self.contains_zero() {
            0.0
        } else {
            round::mul_down(self.mig(), self.mig())
        };
        Self::checked(lo, round::mul_up(self.mag(), self.mag()))
    }

    /// Square root of the nonnegative part; negative members are discarded.
    pub fn sqrt(self) -> Interval {
        let lo = self.lo.max(0.0);
        let hi = self.hi.max(0.0);
        Self::checked(round::sqrt_down(lo), round::sqrt_up(hi))
    }

    /// Division; fails when the divisor contains zero.
    pub fn div(self, rhs: Interval) -> Result<Interval> {
        if rhs.contains_zero() {
            return Err(Error::DivisionByZero);
        }
        let q = [
            (self.lo, rhs.lo),
            (self.lo, rhs.hi),
            (self.hi, rhs.lo),
            (self.hi, rhs.hi),
        ];
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for (a, b) in q {
            let (d, u) = if a.is_infinite() && b.is_infinite() {
                // inf/inf only arises for an unbounded numerator and denominator;
                // the quotient of members is then unbounded in that sign.
                let s = a.signum() * b.signum();
                (if s > 0.0 { 0.0 } else { f64::NEG_INFINITY }, if s > 0.0 { f64::INFINITY } else { 0.0 })
            } else {
                (round::div_down(a, b), round::div_up(a, b))
            };
            lo = lo.min(d);
            hi = hi.max(u);
        }
        Ok(Self::checked(lo, hi))
    }

    /// Scales by a power of two exactly (up to overflow/underflow).
    pub fn scale(self, factor: f64) -> Interval {
        self * Interval::point(factor)
    }

    /// Directed-rounding sum of a sequence, in iteration order.
    pub fn sum<I: IntoIterator<Item = Interval>>(items: I) -> Interval {
        let mut lo = 0.0;
        let mut hi = 0.0;
        for x in items {
            lo = round::add_down(lo, x.lo);
            hi = round::add_up(hi, x.hi);
        }
        Self::checked(lo, hi)
    }
}

/// Scalars usable where an interval is expected.
pub trait Scalar: Copy + Send + Sync + 'static {
    fn to_interval(self) -> Interval;
}

impl Scalar for f64 {
    #[inline]
    fn to_interval(self) -> Interval {
        Interval::point(self)
    }
}

impl Scalar for Interval {
    #[inline]
    fn to_interval(self) -> Interval {
        self
    }
}

impl From<f64> for Interval {
    fn from(x: f64) -> Self {
        Interval::point(x)
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo, self.hi)
    }
}

impl Neg for Interval {
    type Output = Interval;
    fn neg(self) -> Interval {
        Interval {
            lo: -self.hi,
            hi: -self.lo,
        }
    }
}

impl Add for Interval {
    type Output = Interval;
    fn add(self, rhs: Interval) -> Interval {
        Self::checked(round::add_down(self.lo, rhs.lo), round::add_up(self.hi, rhs.hi))
    }
}

impl Sub for Interval {
    type Output = Interval;
    fn sub(self, rhs: Interval) -> Interval {
        Self::checked(round::sub_down(self.lo, rhs.hi), round::sub_up(self.hi, rhs.lo))
    }
}

impl Mul for Interval {
    type Output = Interval;
    fn mul(self, rhs: Interval) -> Interval {
        if self.is_point() && rhs.is_point() {
            return Self::checked(round::mul_down(self.lo, rhs.lo), round::mul_up(self.lo, rhs.lo));
        }
        let pairs = [
            (self.lo, rhs.lo),
            (self.lo, rhs.hi),
            (self.hi, rhs.lo),
            (self.hi, rhs.hi),
        ];
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for (a, b) in pairs {
            lo = lo.min(round::mul_down(a, b));
            hi = hi.max(round::mul_up(a, b));
        }
        Self::checked(lo, hi)
    }
}

impl Add<f64> for Interval {
    type Output = Interval;
    fn add(self, rhs: f64) -> Interval {
        self + Interval::point(rhs)
    }
}

impl Sub<f64> for Interval {
    type Output = Interval;
    fn sub(self, rhs: f64) -> Interval {
        self - Interval::point(rhs)
    }
}

impl Mul<f64> for Interval {
    type Output = Interval;
    fn mul(self, rhs: f64) -> Interval {
        self * Interval::point(rhs)
    }
}
