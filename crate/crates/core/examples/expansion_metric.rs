//! Adapted metrics on small graphs: the supremum of feasible L, a
//! certificate below it, and the failure witness above it.
//!
//! cargo run --example expansion_metric

use skewaxiom::boxgraph::Csr;
use skewaxiom::dynamics::DerivativeKind;
use skewaxiom::expansion::{certify, max_feasible_l, solve_metric, WeightedComponent};

fn main() {
    // 0 -> 1 -> 2 -> 0 with a chord 1 -> 0
    let g = Csr::from_edges(3, &[(0, 1), (1, 0), (1, 2), (2, 0)]);
    let wc = WeightedComponent::new(0, DerivativeKind::Fiber, &g, vec![3.0, 0.5, 4.0]);

    let sup = max_feasible_l(&wc).expect("no zero weights");
    println!("feasible L < {sup:.6} (minimum geometric cycle mean)");

    let cert = certify(&wc, 1.15).expect("below the supremum");
    println!(
        "L = {}: phi = {:?}, validated {}",
        cert.l, cert.phi, cert.validated
    );

    match solve_metric(&wc, sup * 1.01) {
        Ok(_) => println!("unexpected success"),
        Err(e) => println!("L = {:.6}: {e}", sup * 1.01),
    }

    let critical = WeightedComponent::new(0, DerivativeKind::Fiber, &g, vec![3.0, 0.0, 4.0]);
    println!("{}", solve_metric(&critical, 1.1).unwrap_err());
}
