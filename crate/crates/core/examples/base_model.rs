//! The base box chain recurrent model of z^2 + 2 and its J_p component.
//!
//! cargo run --release --example base_model

use skewaxiom::boxgraph::{
    build_transition_graph, cyclic_core, model_from_str, model_to_string, refine, select_base,
    BoxSystem, Grid, Split,
};
use skewaxiom::dynamics::SkewMap;

fn main() {
    let m = SkewMap::real(2.0, 0.0, 0.1, 0.0);
    let mut sys = BoxSystem::full_base(Grid::new(2.1, 3));
    let mut model = cyclic_core(&build_transition_graph(&m, &sys, 0.0));
    for _ in 3..7 {
        println!(
            "level {}: {} boxes kept, sizes {:?}",
            model.layout.zgrid.level(),
            model.box_count(),
            model.sizes()
        );
        sys = refine(&model, Split::BaseOnly, 1 << 20).expect("within cap");
        model = cyclic_core(&build_transition_graph(&m, &sys, 0.0));
    }
    let sel = select_base(&model, &m).expect("beta singles out one component");
    println!(
        "level {}: J_p is component {} with (V;E) = {:?}, A_p candidates {:?}",
        model.layout.zgrid.level(),
        sel.jp,
        model.sizes()[sel.jp],
        sel.ap_candidates
    );

    let text = model_to_string(&model);
    let back = model_from_str(&text).expect("round trip");
    assert_eq!(back, model);
    println!("serialized to {} bytes and read back", text.len());
}
