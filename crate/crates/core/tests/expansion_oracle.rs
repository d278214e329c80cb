mod common;

use skewaxiom::dynamics::DerivativeKind;
use skewaxiom::expansion::{
    certificate_from_str, certificate_to_string, certify, max_feasible_l, solve_metric,
    validate_certificate, MetricFailure, WeightedComponent,
};

use common::{csr, geometric_mean, metric_oracle, simple_cycles};

#[test]
fn solver_agrees_with_cycle_enumeration() {
    let stats = metric_oracle(1000, 42).unwrap();
    assert!(stats.feasible > 0 && stats.feasible < stats.checks);
}

#[test]
fn feasibility_flips_around_the_supremum() {
    // ring of 8 with chords, weights around 1.3
    let edges: Vec<(usize, usize)> = (0..8)
        .map(|i| (i, (i + 1) % 8))
        .chain([(2, 0), (7, 4), (5, 5)])
        .collect();
    let w: Vec<f64> = (0..8).map(|i| 1.1 + 0.07 * i as f64).collect();
    let g = csr(8, &edges);
    let wc = WeightedComponent::new(0, DerivativeKind::Base, &g, w.clone());
    let sup = max_feasible_l(&wc).unwrap();
    let brute = simple_cycles(8, &edges)
        .iter()
        .map(|c| geometric_mean(c, &w))
        .fold(f64::INFINITY, f64::min);
    assert!((sup - brute).abs() < 1e-12);
    assert!(solve_metric(&wc, 0.99 * sup).is_ok());
    match solve_metric(&wc, 1.01 * sup) {
        Err(MetricFailure::PositiveCycle {
            cycle,
            geometric_mean: gm,
        }) => {
            assert!(gm <= 1.01 * sup);
            for (i, &k) in cycle.iter().enumerate() {
                assert!(g.has_edge(k, cycle[(i + 1) % cycle.len()]));
            }
        }
        other => panic!("expected a positive cycle, got {other:?}"),
    }
}

#[test]
fn certificates_round_trip_and_revalidate() {
    let edges = [(0, 1), (1, 2), (2, 0), (1, 0)];
    let g = csr(3, &edges);
    let wc = WeightedComponent::new(4, DerivativeKind::Fiber, &g, vec![3.0, 0.7, 2.5]);
    let cert = certify(&wc, 1.1).unwrap();
    assert!(cert.validated);
    let back = certificate_from_str(&certificate_to_string(&cert)).unwrap();
    assert_eq!(back, cert);

    let mut bad = back.clone();
    let top = bad.phi.iter().position(|&p| p == 1.0).unwrap();
    bad.phi[top] *= 0.5;
    assert!(!validate_certificate(&wc, bad.l, &bad.phi));
    assert!(!bad.revalidate(&wc));
    assert!(!bad.validated);
}
