//! Piecewise-constant expansion metrics on box chain transitive components.
//!
//! A component is box-expansive with constant `L > 1` if there are `phi_k > 0`
//! with `phi_j * m_k >= L * phi_k` for every edge `(k, j)`, where `m_k` bounds
//! the relevant derivative modulus from below on box `k`.

mod certificate;
mod cycle_mean;
mod metric;

pub use certificate::{
    certificate_from_str, certificate_to_string, certify, load_certificate, save_certificate,
    ExpansionCertificate, PhiStats, CERT_HEADER,
};
pub use cycle_mean::{max_feasible_l, min_cycle_mean, ZeroWeight};
pub use metric::{
    first_violation, solve_metric, validate_certificate, vertex_weights, MetricFailure,
    WeightedComponent, LOG_SLACK,
};
