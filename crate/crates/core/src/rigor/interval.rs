use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::round::*;

/// A closed interval `[lo, hi]` of reals with float endpoints.
///
/// Arithmetic rounds outward, so a result always encloses every exact
/// result obtainable from members of the operands. An operation that
/// overflows produces an infinite endpoint; such an interval is "overflowed"
/// and every later operation on it yields [`Interval::ENTIRE`].
#[derive(Clone, Copy, PartialEq)]
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

    /// Panics if either endpoint is NaN or `lo > hi`.
    #[inline]
    pub fn new(lo: f64, hi: f64) -> Self {
        assert!(lo <= hi, "invalid interval [{lo}, {hi}]");
        Interval { lo, hi }
    }

    /// The degenerate interval `[x, x]`.
    #[inline]
    pub fn point(x: f64) -> Self {
        Interval::new(x, x)
    }

    /// Smallest interval containing both endpoints, in either order.
    #[inline]
    pub fn spanning(a: f64, b: f64) -> Self {
        Interval::new(a.min(b), a.max(b))
    }

    #[inline]
    pub fn lo(&self) -> f64 {
        self.lo
    }

    #[inline]
    pub fn hi(&self) -> f64 {
        self.hi
    }

    #[inline]
    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    /// True when some operation on the way here overflowed.
    #[inline]
    pub fn is_overflow(&self) -> bool {
        !(self.lo.is_finite() && self.hi.is_finite())
    }

    #[inline]
    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    #[inline]
    pub fn contains_zero(&self) -> bool {
        self.lo <= 0.0 && 0.0 <= self.hi
    }

    #[inline]
    pub fn is_subset_of(&self, other: &Interval) -> bool {
        other.lo <= self.lo && self.hi <= other.hi
    }

    #[inline]
    pub fn intersects(&self, other: &Interval) -> bool {
        self.lo <= other.hi && other.lo <= self.hi
    }

    #[inline]
    pub fn hull(&self, other: &Interval) -> Interval {
        Interval {
            lo: self.lo.min(other.lo),
            hi: self.hi.max(other.hi),
        }
    }

    /// Upper bound on the width.
    #[inline]
    pub fn width(&self) -> f64 {
        sub_up(self.hi, self.lo)
    }

    /// Midpoint in round-to-nearest; only for heuristics, never for bounds.
    #[inline]
    pub fn mid(&self) -> f64 {
        0.5 * self.lo + 0.5 * self.hi
    }

    /// Largest absolute value of a member.
    #[inline]
    pub fn mag(&self) -> f64 {
        self.lo.abs().max(self.hi.abs())
    }

    /// Smallest absolute value of a member.
    #[inline]
    pub fn mig(&self) -> f64 {
        if self.contains_zero() {
            0.0
        } else {
            self.lo.abs().min(self.hi.abs())
        }
    }

    /// Grow both ends outward by `delta >= 0`.
    #[inline]
    pub fn inflate(&self, delta: f64) -> Interval {
        debug_assert!(delta >= 0.0);
        if delta == 0.0 {
            return *self;
        }
        Interval {
            lo: sub_down(self.lo, delta),
            hi: add_up(self.hi, delta),
        }
    }

    /// `{x² : x ∈ self}`, tighter than `self * self` when the interval
    /// straddles zero.
    #[inline]
    pub fn sqr(&self) -> Interval {
        if self.is_overflow() {
            return Interval::ENTIRE;
        }
        let (a, b) = (self.mig(), self.mag());
        Interval {
            lo: mul_down(a, a).max(0.0),
            hi: mul_up(b, b),
        }
    }

    /// Square root of the nonnegative part. Returns `None` if the interval
    /// lies entirely below zero.
    pub fn sqrt(&self) -> Option<Interval> {
        if self.hi < 0.0 {
            return None;
        }
        let lo = self.lo.max(0.0);
        Some(Interval {
            lo: sqrt_down(lo),
            hi: sqrt_up(self.hi),
        })
    }

    /// Multiply by a power of two or any scalar, rounding outward.
    #[inline]
    pub fn scale(&self, k: f64) -> Interval {
        *self * Interval::point(k)
    }

    /// Divide by a positive, finite point value.
    pub fn div_positive(&self, d: f64) -> Interval {
        assert!(d > 0.0 && d.is_finite());
        if self.is_overflow() {
            return Interval::ENTIRE;
        }
        Interval {
            lo: div_down(self.lo, d),
            hi: div_up(self.hi, d),
        }
    }
}

impl Add for Interval {
    type Output = Interval;
    #[inline]
    fn add(self, rhs: Interval) -> Interval {
        if self.is_overflow() || rhs.is_overflow() {
            return Interval::ENTIRE;
        }
        Interval {
            lo: add_down(self.lo, rhs.lo),
            hi: add_up(self.hi, rhs.hi),
        }
    }
}

impl Sub for Interval {
    type Output = Interval;
    #[inline]
    fn sub(self, rhs: Interval) -> Interval {
        if self.is_overflow() || rhs.is_overflow() {
            return Interval::ENTIRE;
        }
        Interval {
            lo: sub_down(self.lo, rhs.hi),
            hi: sub_up(self.hi, rhs.lo),
        }
    }
}

impl Mul for Interval {
    type Output = Interval;
    #[inline]
    fn mul(self, rhs: Interval) -> Interval {
        if self.is_overflow() || rhs.is_overflow() {
            return Interval::ENTIRE;
        }
        let (a, b, c, d) = (self.lo, self.hi, rhs.lo, rhs.hi);
        let lo = mul_down(a, c)
            .min(mul_down(a, d))
            .min(mul_down(b, c))
            .min(mul_down(b, d));
        let hi = mul_up(a, c)
            .max(mul_up(a, d))
            .max(mul_up(b, c))
            .max(mul_up(b, d));
        Interval { lo, hi }
    }
}

impl Neg for Interval {
    type Output = Interval;
    #[inline]
    fn neg(self) -> Interval {
        Interval {
            lo: -self.hi,
            hi: -self.lo,
        }
    }
}

impl From<f64> for Interval {
    fn from(x: f64) -> Self {
        Interval::point(x)
    }
}

impl fmt::Debug for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{:e}, {:e}]", self.lo, self.hi)
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo, self.hi)
    }
}

/// Which arithmetic operation to apply in [`interval_arith`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
}

/// Apply `op` to two intervals with outward rounding.
pub fn interval_arith(a: Interval, b: Interval, op: ArithOp) -> Interval {
    match op {
        ArithOp::Add => a + b,
        ArithOp::Sub => a - b,
        ArithOp::Mul => a * b,
    }
}
