//! Directed rounding and interval enclosures.
//!
//! cargo run --example interval_arithmetic

use skewaxiom::rigor::round::{add_down, add_up, mul_down, mul_up};
use skewaxiom::rigor::{Complex, ComplexBox, Interval};

fn main() {
    // 0.1 is not a binary float; directed sums bracket the real sum
    let (lo, hi) = (add_down(0.1, 0.2), add_up(0.1, 0.2));
    println!("0.1 + 0.2 in [{lo:e}, {hi:e}], width {:e}", hi - lo);
    println!(
        "0.1 * 3 in [{:e}, {:e}]",
        mul_down(0.1, 3.0),
        mul_up(0.1, 3.0)
    );

    let x = Interval::new(-1.0, 2.0);
    println!("x = {x}");
    println!("x*x = {}   (naive product)", x * x);
    println!("x^2 = {}   (tight square)", x.sqr());
    println!("sqrt([2, 2]) = {:?}", Interval::point(2.0).sqrt());

    let z = ComplexBox::new(Interval::new(0.5, 0.6), Interval::new(1.3, 1.4));
    let (mig, mag) = z.abs_bounds();
    println!("|z| in [{mig}, {mag}] on {z:?}");
    println!("z^2 = {:?}", z.sqr());
    println!(
        "contains 0.55+1.35i: {}",
        z.contains(Complex::new(0.55, 1.35))
    );

    // overflow is sticky: the enclosure becomes the whole line
    let big = Interval::point(1e300);
    println!(
        "1e300^2 = {}, overflow {}",
        big.sqr(),
        big.sqr().is_overflow()
    );
}
