use std::collections::VecDeque;

use rayon::prelude::*;
use thiserror::Error;

use crate::boxgraph::{ChainModel, Csr};
use crate::dynamics::{DerivativeKind, SkewMap};
use crate::rigor::round::{mul_down, mul_up};

/// Per-edge slack in the log domain. A cycle whose geometric-mean weight is
/// exactly `L` is rejected, and tight edges keep a margin that survives the
/// rounding of `ln`/`exp`.
pub const LOG_SLACK: f64 = 1e-12;

/// A component graph with a rounded-down derivative bound `m_k` per vertex.
#[derive(Clone, Debug)]
pub struct WeightedComponent<'a> {
    pub id: usize,
    pub kind: DerivativeKind,
    pub graph: &'a Csr,
    pub weights: Vec<f64>,
}

impl<'a> WeightedComponent<'a> {
    pub fn new(id: usize, kind: DerivativeKind, graph: &'a Csr, weights: Vec<f64>) -> Self {
        assert_eq!(graph.vertex_count(), weights.len());
        assert!(
            weights.iter().all(|&m| m >= 0.0),
            "weights must be nonnegative"
        );
        WeightedComponent {
            id,
            kind,
            graph,
            weights,
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.weights.len()
    }

    /// Vertices whose box meets the critical locus.
    pub fn zeros(&self) -> Vec<usize> {
        (0..self.weights.len())
            .filter(|&k| self.weights[k] == 0.0)
            .collect()
    }
}

/// Fill `m_k` for every vertex of component `id` with the lower bound of
/// `|p'|` (base) or `|dq/dw|` (fiber) over its box.
pub fn vertex_weights<'a>(
    model: &'a ChainModel,
    id: usize,
    m: &SkewMap,
    kind: DerivativeKind,
) -> WeightedComponent<'a> {
    let comp = &model.components[id];
    let layout = &model.layout;
    let weights = comp
        .boxes
        .par_iter()
        .map(|key| m.derivative_lower(&layout.product_box(key), kind))
        .collect();
    WeightedComponent::new(id, kind, &comp.graph, weights)
}

#[derive(Clone, Debug, Error, PartialEq)]
pub enum MetricFailure {
    #[error("expansion constant must exceed 1, got {0}")]
    InvalidL(f64),
    /// Box `vertex` meets the critical locus; `cycle` passes through it
    /// (or is the offending edge when no cycle does).
    #[error("box {vertex} meets the critical locus (cycle of length {})", cycle.len())]
    CriticalPoint { vertex: usize, cycle: Vec<usize> },
    /// A cycle whose geometric-mean weight does not exceed `L`.
    #[error("cycle of length {} has geometric-mean derivative {geometric_mean} <= L", cycle.len())]
    PositiveCycle {
        cycle: Vec<usize>,
        geometric_mean: f64,
    },
}

/// Find `phi` with `phi_j * m_k >= L * phi_k` on every edge `(k, j)`.
///
/// Writing `y = -ln phi` turns this into the difference constraints
/// `y_j <= y_k + ln m_k - ln L`, solved by FIFO label-correcting shortest
/// paths from a virtual source. The parent graph is scanned for a cycle
/// every `n` relaxations; such a cycle is the failure witness.
///
/// The result is normalized so that `max phi = 1`. It is computed in plain
/// floating point; use [`validate_certificate`] for the rigorous check.
pub fn solve_metric(wc: &WeightedComponent<'_>, l: f64) -> Result<Vec<f64>, MetricFailure> {
    if !(l > 1.0) || !l.is_finite() {
        return Err(MetricFailure::InvalidL(l));
    }
    let g = wc.graph;
    let n = wc.vertex_count();
    if n == 0 {
        return Ok(Vec::new());
    }
    if let Some(k) = (0..n).find(|&k| wc.weights[k] == 0.0 && !g.successors(k).is_empty()) {
        let cycle =
            shortest_cycle_through(g, k).unwrap_or_else(|| vec![k, g.successors(k)[0] as usize]);
        return Err(MetricFailure::CriticalPoint { vertex: k, cycle });
    }

    let ln_l = l.ln();
    let cost: Vec<f64> = wc
        .weights
        .iter()
        .map(|&m| m.ln() - ln_l - LOG_SLACK)
        .collect();
    let mut y = vec![0.0f64; n];
    let mut parent = vec![u32::MAX; n];
    let mut queued = vec![true; n];
    let mut queue: VecDeque<u32> = (0..n as u32).collect();
    let mut relaxations = 0usize;

    while let Some(k) = queue.pop_front() {
        let k = k as usize;
        queued[k] = false;
        let through = y[k] + cost[k];
        for &j in g.successors(k) {
            let j = j as usize;
            if through < y[j] {
                y[j] = through;
                parent[j] = k as u32;
                if !queued[j] {
                    queued[j] = true;
                    queue.push_back(j as u32);
                }
                relaxations += 1;
                if relaxations.is_multiple_of(n) {
                    if let Some(cycle) = parent_cycle(&parent) {
                        let geometric_mean = geometric_mean(&wc.weights, &cycle);
                        return Err(MetricFailure::PositiveCycle {
                            cycle,
                            geometric_mean,
                        });
                    }
                }
            }
        }
    }

    let ymin = y.iter().copied().fold(f64::INFINITY, f64::min);
    Ok(y.iter().map(|&v| (ymin - v).exp()).collect())
}

pub(crate) fn geometric_mean(weights: &[f64], cycle: &[usize]) -> f64 {
    let s: f64 = cycle.iter().map(|&k| weights[k].ln()).sum();
    (s / cycle.len() as f64).exp()
}

/// A cycle in the functional graph `parent`, listed in edge direction
/// (`cycle[i] -> cycle[i+1] -> ... -> cycle[0]`).
fn parent_cycle(parent: &[u32]) -> Option<Vec<usize>> {
    let n = parent.len();
    // 0 = unvisited, otherwise the walk that first reached the vertex
    let mut mark = vec![0u32; n];
    for start in 0..n {
        if mark[start] != 0 {
            continue;
        }
        let walk = start as u32 + 1;
        let mut v = start;
        loop {
            mark[v] = walk;
            let p = parent[v];
            if p == u32::MAX {
                break;
            }
            let p = p as usize;
            if mark[p] == walk {
                // p is on a cycle; collect it backwards along parent links
                let mut cycle = vec![p];
                let mut u = parent[p] as usize;
                while u != p {
                    cycle.push(u);
                    u = parent[u] as usize;
                }
                cycle.reverse();
                return Some(cycle);
            }
            if mark[p] != 0 {
                break;
            }
            v = p;
        }
    }
    None
}

/// Breadth-first search for the shortest cycle through `k`.
fn shortest_cycle_through(g: &Csr, k: usize) -> Option<Vec<usize>> {
    let n = g.vertex_count();
    let mut prev = vec![u32::MAX; n];
    let mut queue = VecDeque::from([k]);
    while let Some(u) = queue.pop_front() {
        for &v in g.successors(u) {
            let v = v as usize;
            if v == k {
                let mut cycle = vec![u];
                let mut x = u;
                while x != k {
                    x = prev[x] as usize;
                    cycle.push(x);
                }
                cycle.reverse();
                return Some(cycle);
            }
            if prev[v] == u32::MAX {
                prev[v] = u as u32;
                queue.push_back(v);
            }
        }
    }
    None
}

/// First edge `(k, j)` (in sorted order) where `phi_j * m_k`, rounded
/// down, falls below `L * phi_k`, rounded up.
pub fn first_violation(wc: &WeightedComponent<'_>, l: f64, phi: &[f64]) -> Option<(usize, usize)> {
    let n = wc.vertex_count();
    if phi.len() != n {
        return Some((0, 0));
    }
    if let Some(k) = phi.iter().position(|&p| !(p > 0.0 && p <= 1.0)) {
        return Some((k, k));
    }
    (0..n).into_par_iter().find_map_first(|k| {
        let need = mul_up(l, phi[k]);
        let mk = wc.weights[k];
        wc.graph
            .successors(k)
            .iter()
            .find(|&&j| mul_down(phi[j as usize], mk) < need)
            .map(|&j| (k, j as usize))
    })
}

/// The rigorous gate: every edge inequality holds under directed rounding.
pub fn validate_certificate(wc: &WeightedComponent<'_>, l: f64, phi: &[f64]) -> bool {
    l > 1.0 && first_violation(wc, l, phi).is_none()
}
