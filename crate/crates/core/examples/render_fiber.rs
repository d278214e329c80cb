//! Fiber slice of (z^2 + 2, w^2 + z/10) over its repelling fixed point,
//! written as a PPM image.
//!
//! cargo run --release --example render_fiber -- fiber.ppm

use skewaxiom::render::{render_fiber, FiberSelector, RenderSpec};
use skewaxiom::rigor::Complex;
use skewaxiom::verifier::{verify_axiom_a, LChoice, VerifyConfig};

fn main() {
    let out = std::env::args()
        .nth(1)
        .unwrap_or_else(|| "fiber.ppm".into());
    let m = skewaxiom::dynamics::SkewMap::real(2.0, 0.0, 0.1, 0.0);
    let cfg = VerifyConfig {
        n_start: 7,
        m_start: 5,
        bounds: Some((2.1, 1.28)),
        l_fiber: LChoice::Fixed(1.125),
        ..Default::default()
    };
    let report = verify_axiom_a(&m, &cfg);
    let stage = report.condition2.expect("base certified");
    let spec = RenderSpec {
        selector: FiberSelector::Point(Complex::new(0.5, 1.32288)),
        size: 512,
        window: None,
    };
    let slice = render_fiber(&stage.model, &spec, &out).expect("point lies in the cover");
    println!(
        "{out}: {} components over {} z-cells",
        slice.component_count(),
        slice.zcells.len()
    );
    for (id, gray) in &slice.palette {
        println!(
            "component {id}: gray {gray}, {} w-cells",
            slice.cells_of(*id).count()
        );
    }
}
