//! Correctly directed rounding of the basic float operations.
//!
//! Every operation is computed in round-to-nearest and the exact rounding
//! error is recovered with an error-free transformation (TwoSum for sums,
//! a fused multiply-add for products and square roots). The sign of the
//! error tells which neighbour is the directed result, so exact results are
//! never widened.

/// Below this magnitude the FMA residual of a product may itself underflow,
/// so the result is widened by one ulp unconditionally.
const TINY: f64 = 1.0e-290;

#[inline]
fn down_if(x: f64, err_negative: bool) -> f64 {
    if err_negative {
        x.next_down()
    } else {
        x
    }
}

#[inline]
fn up_if(x: f64, err_positive: bool) -> f64 {
    if err_positive {
        x.next_up()
    } else {
        x
    }
}

/// Exact rounding error of `a + b` (TwoSum); valid when the sum is finite.
#[inline]
fn sum_err(a: f64, b: f64, s: f64) -> f64 {
    let bb = s - a;
    (a - (s - bb)) + (b - bb)
}

#[inline]
pub fn add_down(a: f64, b: f64) -> f64 {
    let s = a + b;
    if s.is_finite() {
        down_if(s, sum_err(a, b, s) < 0.0)
    } else if s == f64::INFINITY && a.is_finite() && b.is_finite() {
        f64::MAX
    } else {
        s
    }
}

#[inline]
pub fn add_up(a: f64, b: f64) -> f64 {
    let s = a + b;
    if s.is_finite() {
        up_if(s, sum_err(a, b, s) > 0.0)
    } else if s == f64::NEG_INFINITY && a.is_finite() && b.is_finite() {
        f64::MIN
    } else {
        s
    }
}

#[inline]
pub fn sub_down(a: f64, b: f64) -> f64 {
    add_down(a, -b)
}

#[inline]
pub fn sub_up(a: f64, b: f64) -> f64 {
    add_up(a, -b)
}

#[inline]
pub fn mul_down(a: f64, b: f64) -> f64 {
    let p = a * b;
    if a == 0.0 || b == 0.0 {
        return 0.0;
    }
    if !p.is_finite() {
        return if p == f64::INFINITY && a.is_finite() && b.is_finite() {
            f64::MAX
        } else {
            p
        };
    }
    if p.abs() < TINY {
        return p.next_down();
    }
    down_if(p, a.mul_add(b, -p) < 0.0)
}

#[inline]
pub fn mul_up(a: f64, b: f64) -> f64 {
    let p = a * b;
    if a == 0.0 || b == 0.0 {
        return 0.0;
    }
    if !p.is_finite() {
        return if p == f64::NEG_INFINITY && a.is_finite() && b.is_finite() {
            f64::MIN
        } else {
            p
        };
    }
    if p.abs() < TINY {
        return p.next_up();
    }
    up_if(p, a.mul_add(b, -p) > 0.0)
}

/// Square root rounded down; `x` must be nonnegative.
#[inline]
pub fn sqrt_down(x: f64) -> f64 {
    debug_assert!(x >= 0.0);
    if x == 0.0 || x == f64::INFINITY {
        return x;
    }
    let r = x.sqrt();
    if x < TINY {
        return r.next_down().max(0.0);
    }
    down_if(r, r.mul_add(r, -x) > 0.0)
}

/// Square root rounded up; `x` must be nonnegative.
#[inline]
pub fn sqrt_up(x: f64) -> f64 {
    debug_assert!(x >= 0.0);
    if x == 0.0 || x == f64::INFINITY {
        return x;
    }
    let r = x.sqrt();
    if x < TINY {
        return r.next_up();
    }
    up_if(r, r.mul_add(r, -x) < 0.0)
}

/// Quotient rounded up; `b` must be positive and finite.
#[inline]
pub fn div_up(a: f64, b: f64) -> f64 {
    if a == 0.0 {
        return 0.0;
    }
    let q = a / b;
    // the remainder a - q*b is exact only away from the subnormal range
    if !q.is_finite() || q.abs() < TINY || a.abs() < TINY || b < TINY {
        return q.next_up();
    }
    // a - q*b > 0 means q*b < a, i.e. the true quotient exceeds q
    up_if(q, (-q).mul_add(b, a) > 0.0)
}

/// Quotient rounded down; `b` must be positive and finite.
#[inline]
pub fn div_down(a: f64, b: f64) -> f64 {
    if a == 0.0 {
        return 0.0;
    }
    let q = a / b;
    // the remainder a - q*b is exact only away from the subnormal range
    if !q.is_finite() || q.abs() < TINY || a.abs() < TINY || b < TINY {
        return q.next_down();
    }
    down_if(q, (-q).mul_add(b, a) < 0.0)
}
