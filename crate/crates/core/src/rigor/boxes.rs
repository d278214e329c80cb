use std::fmt;
use std::ops::{Add, Mul, Sub};

use super::interval::Interval;
use super::round::{add_down, add_up, mul_down, mul_up, sqrt_down, sqrt_up};

/// A complex number with exact float components.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Complex {
    pub re: f64,
    pub im: f64,
}

impl Complex {
    pub const ZERO: Complex = Complex { re: 0.0, im: 0.0 };

    pub const fn new(re: f64, im: f64) -> Self {
        Complex { re, im }
    }

    pub const fn real(re: f64) -> Self {
        Complex { re, im: 0.0 }
    }

    /// Modulus in round-to-nearest. Heuristic use only.
    pub fn norm(&self) -> f64 {
        self.re.hypot(self.im)
    }

    pub fn is_real(&self) -> bool {
        self.im == 0.0
    }
}

impl fmt::Display for Complex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im == 0.0 {
            write!(f, "{}", self.re)
        } else if self.im < 0.0 {
            write!(f, "{}-{}i", self.re, -self.im)
        } else {
            write!(f, "{}+{}i", self.re, self.im)
        }
    }
}

/// Parses `x`, `x+yi`, `x-yi`, `yi`, `i` and `-i` with decimal components.
impl std::str::FromStr for Complex {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let bad = || format!("cannot parse complex number {s:?}");
        let num = |x: &str| -> Result<f64, String> {
            match x {
                "" | "+" => Ok(1.0),
                "-" => Ok(-1.0),
                _ => x.parse::<f64>().map_err(|_| bad()).and_then(|v| {
                    if v.is_finite() {
                        Ok(v)
                    } else {
                        Err(bad())
                    }
                }),
            }
        };
        let Some(body) = t.strip_suffix('i') else {
            return match t.parse::<f64>() {
                Ok(v) if v.is_finite() => Ok(Complex::real(v)),
                _ => Err(bad()),
            };
        };
        let bytes = body.as_bytes();
        let split = (1..bytes.len())
            .rev()
            .find(|&k| matches!(bytes[k], b'+' | b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
        match split {
            Some(k) => {
                let re = body[..k].parse::<f64>().map_err(|_| bad())?;
                Ok(Complex::new(re, num(&body[k..])?))
            }
            None => Ok(Complex::new(0.0, num(body)?)),
        }
    }
}

/// An axis-aligned box `re × im` in the complex plane.
#[derive(Clone, Copy, PartialEq)]
pub struct ComplexBox {
    pub re: Interval,
    pub im: Interval,
}

impl ComplexBox {
    pub fn new(re: Interval, im: Interval) -> Self {
        ComplexBox { re, im }
    }

    /// The degenerate box holding exactly `c`.
    pub fn point(c: Complex) -> Self {
        ComplexBox {
            re: Interval::point(c.re),
            im: Interval::point(c.im),
        }
    }

    pub fn is_overflow(&self) -> bool {
        self.re.is_overflow() || self.im.is_overflow()
    }

    pub fn contains(&self, c: Complex) -> bool {
        self.re.contains(c.re) && self.im.contains(c.im)
    }

    pub fn is_subset_of(&self, other: &ComplexBox) -> bool {
        self.re.is_subset_of(&other.re) && self.im.is_subset_of(&other.im)
    }

    pub fn intersects(&self, other: &ComplexBox) -> bool {
        self.re.intersects(&other.re) && self.im.intersects(&other.im)
    }

    pub fn hull(&self, other: &ComplexBox) -> ComplexBox {
        ComplexBox {
            re: self.re.hull(&other.re),
            im: self.im.hull(&other.im),
        }
    }

    pub fn inflate(&self, delta: f64) -> ComplexBox {
        ComplexBox {
            re: self.re.inflate(delta),
            im: self.im.inflate(delta),
        }
    }

    pub fn center(&self) -> Complex {
        Complex::new(self.re.mid(), self.im.mid())
    }

    /// Closed-box intersection after growing `self` by `delta` on every face.
    pub fn intersects_inflated(&self, other: &ComplexBox, delta: f64) -> bool {
        self.inflate(delta).intersects(other)
    }

    /// Enclosure of `{v² : v ∈ self}` as `(re² − im², 2·re·im)`.
    pub fn sqr(&self) -> ComplexBox {
        let re = self.re.sqr() - self.im.sqr();
        let im = (self.re * self.im).scale(2.0);
        ComplexBox { re, im }
    }

    /// Multiply every member by a real interval.
    pub fn scale(&self, k: Interval) -> ComplexBox {
        ComplexBox {
            re: self.re * k,
            im: self.im * k,
        }
    }

    /// Rigorous bounds `lo ≤ |v| ≤ hi` over the box. `lo` is zero exactly
    /// when the box contains or touches the origin.
    pub fn abs_bounds(&self) -> (f64, f64) {
        if self.is_overflow() {
            return (self.re.mig().max(self.im.mig()), f64::INFINITY);
        }
        let (dx, dy) = (self.re.mig(), self.im.mig());
        let lo = if dx == 0.0 || dy == 0.0 {
            dx.max(dy)
        } else {
            // squares that underflow may round below zero
            sqrt_down(add_down(mul_down(dx, dx), mul_down(dy, dy)).max(0.0))
        };
        let (mx, my) = (self.re.mag(), self.im.mag());
        let hi = if mx == 0.0 || my == 0.0 {
            mx.max(my)
        } else {
            sqrt_up(add_up(mul_up(mx, mx), mul_up(my, my)))
        };
        (lo, hi)
    }
}

impl Add for ComplexBox {
    type Output = ComplexBox;
    fn add(self, rhs: ComplexBox) -> ComplexBox {
        ComplexBox {
            re: self.re + rhs.re,
            im: self.im + rhs.im,
        }
    }
}

impl Sub for ComplexBox {
    type Output = ComplexBox;
    fn sub(self, rhs: ComplexBox) -> ComplexBox {
        ComplexBox {
            re: self.re - rhs.re,
            im: self.im - rhs.im,
        }
    }
}

impl Mul for ComplexBox {
    type Output = ComplexBox;
    fn mul(self, rhs: ComplexBox) -> ComplexBox {
        ComplexBox {
            re: self.re * rhs.re - self.im * rhs.im,
            im: self.re * rhs.im + self.im * rhs.re,
        }
    }
}

impl From<Complex> for ComplexBox {
    fn from(c: Complex) -> Self {
        ComplexBox::point(c)
    }
}

impl fmt::Debug for ComplexBox {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?} x {:?}i", self.re, self.im)
    }
}

/// Enclosure of `{v² : v ∈ b}`.
pub fn complex_sqr(b: &ComplexBox) -> ComplexBox {
    b.sqr()
}

/// Rigorous modulus bounds of a complex box.
pub fn abs_bounds(b: &ComplexBox) -> (f64, f64) {
    b.abs_bounds()
}

/// A box `z × w` in C².
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ProductBox {
    pub z: ComplexBox,
    pub w: ComplexBox,
}

impl ProductBox {
    pub fn new(z: ComplexBox, w: ComplexBox) -> Self {
        ProductBox { z, w }
    }

    pub fn is_overflow(&self) -> bool {
        self.z.is_overflow() || self.w.is_overflow()
    }

    pub fn contains(&self, z: Complex, w: Complex) -> bool {
        self.z.contains(z) && self.w.contains(w)
    }

    pub fn intersects_inflated(&self, other: &ProductBox, delta: f64) -> bool {
        self.z.intersects_inflated(&other.z, delta) && self.w.intersects_inflated(&other.w, delta)
    }
}

/// Boxes that can be tested for intersection after inflation.
pub trait Inflatable {
    fn intersects_inflated(&self, other: &Self, delta: f64) -> bool;
}

impl Inflatable for ComplexBox {
    fn intersects_inflated(&self, other: &Self, delta: f64) -> bool {
        ComplexBox::intersects_inflated(self, other, delta)
    }
}

impl Inflatable for ProductBox {
    fn intersects_inflated(&self, other: &Self, delta: f64) -> bool {
        ProductBox::intersects_inflated(self, other, delta)
    }
}

/// True iff the closed boxes meet after growing `a` by `delta` on every face.
pub fn intersects_inflated<B: Inflatable>(a: &B, b: &B, delta: f64) -> bool {
    a.intersects_inflated(b, delta)
}
