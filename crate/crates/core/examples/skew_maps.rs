//! Evaluating a skew product on boxes, escape radii, base fixed points,
//! and the two generated map families.
//!
//! cargo run --example skew_maps

use skewaxiom::dynamics::{gen_interpolating, gen_prop31, verify_prop31, Prop31Caps, SkewMap};
use skewaxiom::rigor::{Complex, ComplexBox, Interval, ProductBox};

fn main() {
    // (z, w) -> (z^2 + 2, w^2 + z/10)
    let m = SkewMap::real(2.0, 0.0, 0.1, 0.0);
    let r = m.escape_radii(0.1);
    println!("escape radii R1 = {:.4}, R2 = {:.4}", r.r1, r.r2);

    let fp = m.base_fixed_points();
    println!("alpha in {:?}", fp.alpha);
    println!("beta  in {:?}", fp.beta);

    let z = ComplexBox::new(Interval::new(0.49, 0.51), Interval::new(1.32, 1.33));
    let w = ComplexBox::new(Interval::new(0.9, 1.0), Interval::new(-0.1, 0.0));
    let image = m.eval_f(&ProductBox::new(z, w));
    println!("f(box) = {image:?}");

    // rabbit-like fibers over a Cantor base
    let rabbit = Complex::new(-0.1226, 0.7449);
    let (g, p) = gen_prop31(rabbit, 0.02, Prop31Caps::default()).expect("parameters exist");
    println!("generated map: a={} c={} e={}", g.a, g.c, g.e);
    println!("R={} S={}", p.r, p.s);
    let check = verify_prop31(&g, 0.02).expect("valid map");
    println!(
        "conditions hold: {} (deviation {:.4})",
        check.holds(),
        check.deviation
    );

    let i = gen_interpolating(Complex::ZERO, Complex::real(-1.0), 90.0).expect("R > 6");
    println!(
        "interpolating map: c={} e={} (shift {:.6})",
        i.map.c, i.map.e, i.a_shift
    );
}
