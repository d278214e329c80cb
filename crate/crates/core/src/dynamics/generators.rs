//! Constructions of skew products `(z² − R, w² + l(z))` whose fibers over
//! the two halves of the real Cantor set `J_p` follow prescribed quadratic
//! polynomials.
//!
//! For `p(z) = z² − R` with `R > 2` the fixed points are
//! `α = (1 − √(1+4R))/2 < 0 < β = (1 + √(1+4R))/2`, and with
//! `η = √(R − β)` the Julia set of `p` lies in `D₁ ∪ D₂` where
//! `D₁ = [−β, −η]` and `D₂ = −D₁`. Its center `(η + β)/2` is the shift used
//! by both constructions.

use thiserror::Error;

use super::skew::SkewMap;
use crate::rigor::{Complex, ComplexBox, Interval};

#[derive(Debug, Error, PartialEq)]
pub enum GeneratorError {
    #[error("no (R, S) with R <= {r_max} and S <= {s_max} satisfies all conditions")]
    NoParameters { r_max: f64, s_max: f64 },
    #[error("R must exceed 6, got {0}")]
    RadiusTooSmall(f64),
    #[error("sigma must be positive, got {0}")]
    BadSigma(f64),
    #[error("map is not of the form (z^2 - R, w^2 + c + (z + a)/S): {0}")]
    WrongShape(&'static str),
}

/// Rigorous enclosures of `β`, `α` and `η` for `p(z) = z² − R`.
#[derive(Clone, Copy, Debug)]
pub struct CantorGeometry {
    pub r: f64,
    pub alpha: Interval,
    pub beta: Interval,
    pub eta: Interval,
}

impl CantorGeometry {
    pub fn new(r: f64) -> Self {
        let ri = Interval::point(r);
        let root = (Interval::ONE + Interval::point(4.0) * ri)
            .sqrt()
            .expect("1 + 4R > 0");
        let half = Interval::point(0.5);
        let beta = (Interval::ONE + root) * half;
        let alpha = (Interval::ONE - root) * half;
        let eta = (ri - beta).sqrt().expect("R > beta for R > 2");
        CantorGeometry {
            r,
            alpha,
            beta,
            eta,
        }
    }

    /// Float center of `D₂`, `(η + β)/2`.
    pub fn center(&self) -> f64 {
        0.5 * (self.eta.mid() + self.beta.mid())
    }
}

/// Parameters of a map `(z² − R, w² + c + (z + a)/S)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Prop31Params {
    pub c: Complex,
    pub sigma: f64,
    pub r: f64,
    pub s: f64,
    pub a_shift: f64,
    pub alpha: f64,
    pub beta: f64,
    pub eta: f64,
}

/// Outcome of rigorously checking the three conditions on a map.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Prop31Check {
    pub params: Prop31Params,
    /// `R > 6`, which places `J_p` inside `D₁ ∪ D₂`.
    pub cond1: bool,
    /// Over `D₁` the fiber constant stays within `sigma` of `c`.
    pub cond2: bool,
    /// Over `D₂` the fiber constant has real part at least 2.
    pub cond3: bool,
    /// Upper bound on the largest deviation of the fiber constant from `c`
    /// over `D₁`; condition 2 holds for every `sigma` above it.
    pub deviation: f64,
    /// Lower bound on the smallest real part of the fiber constant over `D₂`.
    pub d2_real_min: f64,
}

impl Prop31Check {
    pub fn holds(&self) -> bool {
        self.cond1 && self.cond2 && self.cond3
    }
}

/// Search limits for [`gen_prop31`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Prop31Caps {
    pub r_max: f64,
    pub s_max: f64,
}

impl Default for Prop31Caps {
    fn default() -> Self {
        Prop31Caps {
            r_max: 1.0e6,
            s_max: 1.0e3,
        }
    }
}

/// Check the three conditions for a map already written as
/// `(z² − R, w² + (1/S)·z + e)`, with `c = e − a/S` recovered from the
/// coefficients. `sigma` is the trusted distance from `c` to the boundary of
/// its hyperbolic component.
///
/// The deviation over `D₁` is checked directly as `(β − η)/(2S) < sigma`.
pub fn verify_prop31(m: &SkewMap, sigma: f64) -> Result<Prop31Check, GeneratorError> {
    if !(sigma > 0.0) {
        return Err(GeneratorError::BadSigma(sigma));
    }
    if !m.a.is_real() || m.a.re >= -2.0 {
        return Err(GeneratorError::WrongShape(
            "base must be z^2 - R with R > 2",
        ));
    }
    if m.b != Complex::ZERO {
        return Err(GeneratorError::WrongShape("fiber must have no w term"));
    }
    if !m.c.is_real() || m.c.re <= 0.0 {
        return Err(GeneratorError::WrongShape("z coefficient must be 1/S > 0"));
    }
    let r = -m.a.re;
    let geo = CantorGeometry::new(r);
    let a_shift = geo.center();
    let inv_s = Interval::point(m.c.re);
    let half = Interval::point(0.5);

    let deviation = ((geo.beta - geo.eta) * half * inv_s).hi();
    // smallest fiber constant over D₂ = [η, β] sits at z = η
    let d2_real_min = (Interval::point(m.e.re) + inv_s * geo.eta).lo();
    let c = ComplexBox::point(m.e) - ComplexBox::point(Complex::real(a_shift)).scale(inv_s);

    let params = Prop31Params {
        c: c.center(),
        sigma,
        r,
        s: 1.0 / m.c.re,
        a_shift,
        alpha: geo.alpha.mid(),
        beta: geo.beta.mid(),
        eta: geo.eta.mid(),
    };
    Ok(Prop31Check {
        params,
        cond1: r > 6.0,
        cond2: deviation < sigma,
        cond3: d2_real_min >= 2.0,
        deviation,
        d2_real_min,
    })
}

/// Choose `R` (a multiple of 10 above 6) and `S` (a multiple of 1/2) so that
/// `(z² − R, w² + c + (z + a)/S)` with `a = (η + β)/2` satisfies all three
/// conditions, then re-verify them with interval arithmetic.
///
/// For each candidate `R` the smallest admissible `S` is the smallest
/// half-integer with `(β − η)/(2S) < sigma`; the first `R` for which
/// `Re(c) + (3η + β)/(2S) >= 2` is returned.
pub fn gen_prop31(
    c: Complex,
    sigma: f64,
    caps: Prop31Caps,
) -> Result<(SkewMap, Prop31Params), GeneratorError> {
    if !(sigma > 0.0) {
        return Err(GeneratorError::BadSigma(sigma));
    }
    let mut r = 10.0;
    while r <= caps.r_max {
        let geo = CantorGeometry::new(r);
        let (beta, eta) = (geo.beta.mid(), geo.eta.mid());
        let k = ((beta - eta) / sigma).floor() + 1.0;
        let s = k / 2.0;
        if s <= caps.s_max && c.re + (3.0 * eta + beta) / (2.0 * s) >= 2.0 {
            let a_shift = geo.center();
            let m = SkewMap::new(
                Complex::real(-r),
                Complex::ZERO,
                Complex::real(1.0 / s),
                Complex::new(c.re + a_shift / s, c.im),
            );
            let check = verify_prop31(&m, sigma)?;
            if check.holds() {
                let mut params = check.params;
                params.c = c;
                params.s = s;
                return Ok((m, params));
            }
        }
        r += 10.0;
    }
    Err(GeneratorError::NoParameters {
        r_max: caps.r_max,
        s_max: caps.s_max,
    })
}

/// A map `(z² − R, w² + l(z))` where `l` is the affine map with
/// `l(−a) = c1` and `l(a) = c2`, `a` the center of `D₂`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct InterpolatingMap {
    pub c1: Complex,
    pub c2: Complex,
    pub r: f64,
    pub a_shift: f64,
    pub map: SkewMap,
}

impl InterpolatingMap {
    /// Enclosure of `l(z) = c1/2·(1 − z/a) + c2/2·(1 + z/a)` evaluated from
    /// the defining formula rather than the rounded map coefficients.
    pub fn fiber_constant(&self, z: &ComplexBox) -> ComplexBox {
        let t = ComplexBox::new(
            z.re.div_positive(self.a_shift),
            z.im.div_positive(self.a_shift),
        );
        let one = ComplexBox::point(Complex::real(1.0));
        let half = Interval::point(0.5);
        ComplexBox::point(self.c1).scale(half) * (one - t)
            + ComplexBox::point(self.c2).scale(half) * (one + t)
    }
}

/// Build the interpolating map for `c1`, `c2` and `R > 6`.
pub fn gen_interpolating(
    c1: Complex,
    c2: Complex,
    r: f64,
) -> Result<InterpolatingMap, GeneratorError> {
    if !(r > 6.0) {
        return Err(GeneratorError::RadiusTooSmall(r));
    }
    let a_shift = CantorGeometry::new(r).center();
    let two_a = 2.0 * a_shift;
    let map = SkewMap::new(
        Complex::real(-r),
        Complex::ZERO,
        Complex::new((c2.re - c1.re) / two_a, (c2.im - c1.im) / two_a),
        Complex::new((c1.re + c2.re) / 2.0, (c1.im + c2.im) / 2.0),
    );
    Ok(InterpolatingMap {
        c1,
        c2,
        r,
        a_shift,
        map,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn geometry_of_minus_ninety() {
        let g = CantorGeometry::new(90.0);
        assert!(g.beta.contains(10.0) && g.alpha.contains(-9.0));
        assert!((g.eta.mid() - 80f64.sqrt()).abs() < 1e-14);
    }

    #[test]
    fn circles_and_basilicas() {
        let im = gen_interpolating(Complex::ZERO, Complex::real(-1.0), 90.0).unwrap();
        assert_eq!(im.map.e, Complex::real(-0.5));
        let expect = -1.0 / (80f64.sqrt() + 10.0);
        assert!((im.map.c.re - expect).abs() < 1e-15);
        assert!((im.map.c.re - -0.0528).abs() < 1e-4);
        // the rounded coefficient printed for this example
        assert!((im.map.c.re - -0.05).abs() < 0.005);
        assert_eq!(im.map.a, Complex::real(-90.0));
    }

    #[test]
    fn basilicas_and_rabbits() {
        let im = gen_interpolating(Complex::real(-1.0), Complex::new(-0.12, 0.75), 90.0).unwrap();
        assert!((im.map.e.re - -0.56).abs() < 1e-15);
        assert!((im.map.e.im - 0.375).abs() < 1e-15);
        assert!((im.map.c.re - 0.0465).abs() < 1e-4);
        assert!((im.map.c.im - 0.0396).abs() < 1e-4);
    }

    #[test]
    fn equal_endpoints_give_constant_fiber() {
        let c = Complex::new(-0.3, 0.2);
        let im = gen_interpolating(c, c, 50.0).unwrap();
        assert_eq!(im.map.c, Complex::ZERO);
        assert_eq!(im.map.e, c);
    }

    #[test]
    fn interpolation_hits_endpoints() {
        let (c1, c2) = (Complex::real(-1.0), Complex::new(-0.12, 0.75));
        let im = gen_interpolating(c1, c2, 90.0).unwrap();
        let at = |z: f64| im.fiber_constant(&ComplexBox::point(Complex::real(z)));
        assert!(at(-im.a_shift).contains(c1));
        assert!(at(im.a_shift).contains(c2));
    }

    #[test]
    fn small_radius_rejected() {
        assert_eq!(
            gen_interpolating(Complex::ZERO, Complex::ZERO, 6.0),
            Err(GeneratorError::RadiusTooSmall(6.0))
        );
    }

    #[test]
    fn prop31_for_the_origin() {
        let (m, p) = gen_prop31(Complex::ZERO, 0.25, Prop31Caps::default()).unwrap();
        assert_eq!(p.r, 10.0);
        assert_eq!(p.s, 2.5);
        assert_eq!(m.a, Complex::real(-10.0));
        assert!(verify_prop31(&m, 0.25).unwrap().holds());
    }

    #[test]
    fn prop31_tiny_sigma_fails() {
        let err = gen_prop31(Complex::ZERO, 1e-9, Prop31Caps::default()).unwrap_err();
        assert!(matches!(err, GeneratorError::NoParameters { .. }));
    }

    #[test]
    fn rabbit_generalization_satisfies_conditions() {
        let m = SkewMap::new(
            Complex::real(-90.0),
            Complex::ZERO,
            Complex::real(1.0 / 6.0),
            Complex::new(1.4, 0.75),
        );
        let chk = verify_prop31(&m, 0.1).unwrap();
        assert!(chk.cond1 && chk.cond2 && chk.cond3, "{chk:?}");
        assert!((chk.deviation - 0.08798).abs() < 1e-4);
        assert!((chk.params.s - 6.0).abs() < 1e-12);
    }
}
