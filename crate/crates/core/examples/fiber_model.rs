//! Fiber model over J_p for (z^2, w^2 + w/10 + z/100), and the selection of
//! the component that carries the fiber Julia sets.
//!
//! cargo run --release --example fiber_model

use skewaxiom::boxgraph::{select_fiber, Tier};
use skewaxiom::dynamics::SkewMap;
use skewaxiom::verifier::{build_models, VerifyConfig};

fn main() {
    let m = SkewMap::real(0.0, 0.1, 0.01, 0.0);
    let cfg = VerifyConfig {
        n_start: 5,
        m_start: 4,
        bounds: Some((1.1, 1.21)),
        ..Default::default()
    };
    let built = build_models(&m, &cfg).expect("within caps");
    println!("base components {:?}", built.base.sizes());
    for (tier, c, model) in &built.fibers {
        let label = match tier {
            Tier::FiberOverJp => "J_p".to_string(),
            _ => format!("A_p candidate {c}"),
        };
        match select_fiber(model) {
            Ok(sel) => println!(
                "over {label}: {} components, chosen {} with (V;E) = {:?}{}",
                model.components.len(),
                sel.chosen,
                model.sizes()[sel.chosen],
                if sel.ambiguous { " (ambiguous)" } else { "" }
            ),
            Err(e) => println!("over {label}: {e}"),
        }
    }
    println!("peak boxes {}", built.peak_boxes);
}
