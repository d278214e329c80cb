use std::fmt;

use crate::rigor::{round, Complex, ComplexBox, Interval, ProductBox};

/// The quadratic skew product `f(z, w) = (z² + a, w² + b·w + c·z + e)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SkewMap {
    pub a: Complex,
    pub b: Complex,
    pub c: Complex,
    pub e: Complex,
}

/// Which derivative modulus a lower bound is taken of.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum DerivativeKind {
    /// `|p'(z)| = |2z|`
    Base,
    /// `|∂q/∂w| = |2w + b|`
    Fiber,
}

/// Escape radii of the base and the fiber dynamics.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EscapeRadii {
    pub r1: f64,
    pub r2: f64,
}

/// Enclosures of the two fixed points of the base polynomial.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FixedPoints {
    pub alpha: ComplexBox,
    /// The fixed point of larger modulus.
    pub beta: ComplexBox,
}

impl SkewMap {
    pub const fn new(a: Complex, b: Complex, c: Complex, e: Complex) -> Self {
        SkewMap { a, b, c, e }
    }

    /// A map with all-real coefficients.
    pub const fn real(a: f64, b: f64, c: f64, e: f64) -> Self {
        SkewMap {
            a: Complex::real(a),
            b: Complex::real(b),
            c: Complex::real(c),
            e: Complex::real(e),
        }
    }

    /// Enclosure of `p(Z) = Z² + a`.
    #[inline]
    pub fn eval_p(&self, z: &ComplexBox) -> ComplexBox {
        z.sqr() + ComplexBox::point(self.a)
    }

    /// Enclosure of `q(Z, W) = W² + b·W + c·Z + e`.
    #[inline]
    pub fn eval_q(&self, z: &ComplexBox, w: &ComplexBox) -> ComplexBox {
        let mut q = w.sqr() + ComplexBox::point(self.e);
        if self.b != Complex::ZERO {
            q = q + ComplexBox::point(self.b) * *w;
        }
        if self.c != Complex::ZERO {
            q = q + ComplexBox::point(self.c) * *z;
        }
        q
    }

    /// Interval extension of `f` on a product box.
    #[inline]
    pub fn eval_f(&self, bx: &ProductBox) -> ProductBox {
        ProductBox::new(self.eval_p(&bx.z), self.eval_q(&bx.z, &bx.w))
    }

    /// Rounded-down lower bound of `|2z|` over `z`.
    #[inline]
    pub fn base_derivative_lower(&self, z: &ComplexBox) -> f64 {
        z.scale(Interval::point(2.0)).abs_bounds().0
    }

    /// Rounded-down lower bound of `|2w + b|` over `w`.
    #[inline]
    pub fn fiber_derivative_lower(&self, w: &ComplexBox) -> f64 {
        (w.scale(Interval::point(2.0)) + ComplexBox::point(self.b))
            .abs_bounds()
            .0
    }

    /// Lower bound of the requested derivative modulus over a product box.
    /// The base derivative only looks at `bx.z`, the fiber one only at `bx.w`.
    pub fn derivative_lower(&self, bx: &ProductBox, kind: DerivativeKind) -> f64 {
        match kind {
            DerivativeKind::Base => self.base_derivative_lower(&bx.z),
            DerivativeKind::Fiber => self.fiber_derivative_lower(&bx.w),
        }
    }

    /// Escape radii padded by `margin`.
    ///
    /// Every `z` with `|z| > r1 - margin` escapes under `p`; every `w` with
    /// `|w| > r2 - margin` escapes in its fiber as long as `|z| <= r1`.
    pub fn escape_radii(&self, margin: f64) -> EscapeRadii {
        assert!(margin > 0.0, "escape margin must be positive");
        let abs_hi = |c: Complex| ComplexBox::point(c).abs_bounds().1;
        let one = Interval::ONE;
        let four = Interval::point(4.0);
        let half = Interval::point(0.5);
        let margin = Interval::point(margin);

        let a = Interval::point(abs_hi(self.a));
        let disc = (one + four * a).sqrt().expect("nonnegative");
        let r1 = (one + disc) * half + margin;

        let b1 = one + Interval::point(abs_hi(self.b));
        let tail = Interval::point(abs_hi(self.c)) * Interval::point(r1.hi())
            + Interval::point(abs_hi(self.e));
        let disc2 = (b1.sqr() + four * tail).sqrt().expect("nonnegative");
        let r2 = (b1 + disc2) * half + margin;
        EscapeRadii {
            r1: r1.hi(),
            r2: r2.hi(),
        }
    }

    /// Enclosures of the roots of `z² + a = z`, that is `(1 ± √(1 − 4a)) / 2`.
    ///
    /// `beta` takes the principal square root, which always gives the root of
    /// larger (or equal) modulus.
    pub fn base_fixed_points(&self) -> FixedPoints {
        let d = ComplexBox::point(Complex::real(1.0))
            - ComplexBox::point(self.a).scale(Interval::point(4.0));
        let s = complex_sqrt(&d);
        let one = ComplexBox::point(Complex::real(1.0));
        let half = Interval::point(0.5);
        FixedPoints {
            alpha: (one - s).scale(half),
            beta: (one + s).scale(half),
        }
    }
}

/// Enclosure of the principal square root over a complex box.
pub fn complex_sqrt(d: &ComplexBox) -> ComplexBox {
    let (abs_lo, abs_hi) = d.abs_bounds();
    let x = d.re;
    // Re √d = √((|d| + x)/2) increases in |d| and x;
    // |Im √d| = √((|d| − x)/2) increases in |d| and decreases in x.
    let re_lo = round::sqrt_down(round::add_down(abs_lo, x.lo()).max(0.0) * 0.5);
    let re_hi = round::sqrt_up(round::add_up(abs_hi, x.hi()).max(0.0) * 0.5);
    let im_lo = round::sqrt_down(round::sub_down(abs_lo, x.hi()).max(0.0) * 0.5);
    let im_hi = round::sqrt_up(round::sub_up(abs_hi, x.lo()).max(0.0) * 0.5);
    let im = if d.im.lo() >= 0.0 {
        Interval::new(im_lo, im_hi)
    } else if d.im.hi() < 0.0 {
        Interval::new(-im_hi, -im_lo)
    } else {
        Interval::new(-im_hi, im_hi)
    };
    ComplexBox::new(Interval::new(re_lo, re_hi), im)
}

impl fmt::Display for SkewMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "(z^2 + ({}), w^2 + ({})w + ({})z + ({}))",
            self.a, self.b, self.c, self.e
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(re: f64, im: f64) -> ComplexBox {
        ComplexBox::point(Complex::new(re, im))
    }

    #[test]
    fn eval_circle_cross_circle_at_one() {
        let m = SkewMap::real(0.0, 0.1, 0.01, 0.0);
        let img = m.eval_f(&ProductBox::new(pt(1.0, 0.0), pt(0.0, 0.0)));
        assert_eq!(img.z, pt(1.0, 0.0));
        assert!(img.w.re.contains(0.01) && img.w.re.width() < 1e-17);
        assert_eq!(img.w.im, Interval::ZERO);
    }

    #[test]
    fn beta_is_fixed_for_minus_ninety() {
        let m = SkewMap::real(-90.0, 0.0, 0.25, 2.25);
        let img = m.eval_f(&ProductBox::new(pt(10.0, 0.0), pt(0.3, -0.2)));
        assert_eq!(img.z, pt(10.0, 0.0));
    }

    #[test]
    fn derivative_bounds() {
        let m = SkewMap::real(0.0, 0.1, 0.0, 0.0);
        let zbox = ComplexBox::new(Interval::new(1.0, 2.0), Interval::ZERO);
        assert_eq!(m.base_derivative_lower(&zbox), 2.0);
        let w0 = pt(0.0, 0.0);
        assert_eq!(m.fiber_derivative_lower(&w0), 0.1);
        let m0 = SkewMap::real(0.0, 0.0, 0.0, 0.0);
        let around = ComplexBox::new(Interval::new(-0.1, 0.1), Interval::new(0.0, 0.2));
        assert_eq!(m0.fiber_derivative_lower(&around), 0.0);
    }

    #[test]
    fn escape_radii_match_known_domains() {
        for (a, want) in [(0.0, 1.1), (2.0, 2.1), (-90.0, 10.1)] {
            let r = SkewMap::real(a, 0.0, 0.0, 0.0).escape_radii(0.1);
            assert!(
                r.r1 >= want - 1e-15 && r.r1 - want < 1e-12,
                "a={a}: {}",
                r.r1
            );
        }
        // fiber radius of the Jonsson example is just below the 2.842 used there
        let r = SkewMap::real(-90.0, 0.0, 0.25, 2.25).escape_radii(0.1);
        assert!((r.r2 - 2.8417).abs() < 1e-3, "{}", r.r2);
    }

    #[test]
    fn fixed_points() {
        for (a, alpha, beta) in [
            (-90.0, -9.0, 10.0),
            (0.0, 0.0, 1.0),
            (-9900.0, -99.0, 100.0),
        ] {
            let fp = SkewMap::real(a, 0.0, 0.0, 0.0).base_fixed_points();
            assert!(fp.alpha.contains(Complex::real(alpha)), "{:?}", fp.alpha);
            assert!(fp.beta.contains(Complex::real(beta)), "{:?}", fp.beta);
            assert!(fp.beta.re.width() < 1e-12);
        }
    }

    #[test]
    fn complex_fixed_points_of_z2_plus_2() {
        let fp = SkewMap::real(2.0, 0.0, 0.0, 0.0).base_fixed_points();
        let c = fp.beta.center();
        assert!((c.re - 0.5).abs() < 1e-12 && (c.im - 7f64.sqrt() / 2.0).abs() < 1e-12);
        assert!(fp.alpha.center().im < 0.0);
    }

    #[test]
    fn complex_sqrt_encloses_negative_real() {
        let s = complex_sqrt(&pt(-4.0, 0.0));
        assert!(s.contains(Complex::new(0.0, 2.0)));
        let s = complex_sqrt(&pt(3.0, 4.0));
        assert!(s.contains(Complex::new(2.0, 1.0)));
        let s = complex_sqrt(&pt(3.0, -4.0));
        assert!(s.contains(Complex::new(2.0, -1.0)));
    }
}
