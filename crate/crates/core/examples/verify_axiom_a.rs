//! The full three-condition test.
//!
//! cargo run --release --example verify_axiom_a
//! cargo run --release --example verify_axiom_a -- -90,0,0.25,2.25 10.1,2.842 7 7 1.25

use skewaxiom::dynamics::SkewMap;
use skewaxiom::rigor::Complex;
use skewaxiom::verifier::{verify_axiom_a, LChoice, VerifyConfig};

fn main() {
    env_logger::init();
    let args: Vec<String> = std::env::args().skip(1).collect();
    let arg = |i: usize, default: &str| args.get(i).cloned().unwrap_or_else(|| default.into());

    let coef: Vec<Complex> = arg(0, "2,0,0.1,0")
        .split(',')
        .map(|s| s.parse().expect("complex coefficient"))
        .collect();
    let m = SkewMap::new(coef[0], coef[1], coef[2], coef[3]);
    let bounds: Vec<f64> = arg(1, "2.1,1.28")
        .split(',')
        .map(|s| s.parse().expect("radius"))
        .collect();
    let l: f64 = arg(4, "1.125").parse().expect("L");
    let cfg = VerifyConfig {
        n_start: arg(2, "7").parse().expect("z level"),
        m_start: arg(3, "5").parse().expect("w level"),
        bounds: Some((bounds[0], bounds[1])),
        l_base: LChoice::Auto,
        l_fiber: LChoice::Fixed(l),
        ..Default::default()
    };
    let cfg = VerifyConfig {
        n_max: cfg.n_max.max(cfg.n_start),
        m_max: cfg.m_max.max(cfg.m_start),
        ..cfg
    };

    let report = verify_axiom_a(&m, &cfg);
    print!("{}", report.to_text());
    eprintln!("{:.2}s", report.seconds);
}
