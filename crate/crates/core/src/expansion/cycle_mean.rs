use thiserror::Error;

use super::metric::WeightedComponent;
use crate::boxgraph::{strongly_connected, Csr};

#[derive(Clone, Debug, Error, PartialEq, Eq)]
#[error("box {0} has zero derivative bound; no expansion constant is feasible")]
pub struct ZeroWeight(pub usize);

const MAX_ROUNDS: usize = 10_000;

/// `exp` of the minimum over cycles of the mean of `ln m_k`: the supremum
/// of the `L` accepted by [`super::solve_metric`] in exact arithmetic.
///
/// Returns infinity for an acyclic graph. Every value produced along the
/// way is the mean of an actual cycle, so an early stop still gives an
/// upper estimate.
pub fn max_feasible_l(wc: &WeightedComponent<'_>) -> Result<f64, ZeroWeight> {
    if let Some(k) = wc.zeros().first() {
        return Err(ZeroWeight(*k));
    }
    let logs: Vec<f64> = wc.weights.iter().map(|m| m.ln()).collect();
    Ok(min_cycle_mean(wc.graph, &logs).map_or(f64::INFINITY, f64::exp))
}

/// Minimum mean vertex weight over the directed cycles of `g`, where a cycle
/// is weighted by the vertices it leaves. `None` if `g` is acyclic.
pub fn min_cycle_mean(g: &Csr, weight: &[f64]) -> Option<f64> {
    let (comp, ncomp) = strongly_connected(g);
    let mut members: Vec<Vec<usize>> = vec![Vec::new(); ncomp];
    for (v, &c) in comp.iter().enumerate() {
        members[c as usize].push(v);
    }
    let mut local = vec![0u32; g.vertex_count()];
    let mut best: Option<f64> = None;
    for (c, verts) in members.iter().enumerate() {
        for (i, &v) in verts.iter().enumerate() {
            local[v] = i as u32;
        }
        let mut edges = Vec::new();
        for (i, &v) in verts.iter().enumerate() {
            for &j in g.successors(v) {
                if comp[j as usize] as usize == c {
                    edges.push((i as u32, local[j as usize]));
                }
            }
        }
        if edges.is_empty() {
            continue;
        }
        let sub = Csr::from_edges(verts.len(), &edges);
        let w: Vec<f64> = verts.iter().map(|&v| weight[v]).collect();
        let lambda = howard(&sub, &w);
        best = Some(best.map_or(lambda, |b: f64| b.min(lambda)));
    }
    best
}

/// Policy iteration on a strongly connected graph with at least one edge.
fn howard(g: &Csr, w: &[f64]) -> f64 {
    let n = g.vertex_count();
    let scale = w.iter().fold(1.0f64, |a, x| a.max(x.abs()));
    let tol = 1e-13 * scale;
    let mut policy: Vec<u32> = (0..n).map(|v| g.successors(v)[0]).collect();
    let mut eta = vec![0.0f64; n];
    let mut dist = vec![0.0f64; n];
    let mut mark = vec![0u32; n];
    let mut rev_off = vec![0u32; n + 1];
    let mut rev = vec![0u32; n];
    let mut queue: Vec<u32> = Vec::with_capacity(n);

    for _ in 0..MAX_ROUNDS {
        // reverse adjacency of the policy graph
        rev_off.iter_mut().for_each(|x| *x = 0);
        for &p in &policy {
            rev_off[p as usize + 1] += 1;
        }
        for i in 0..n {
            rev_off[i + 1] += rev_off[i];
        }
        let mut fill = rev_off.clone();
        for (v, &p) in policy.iter().enumerate() {
            rev[fill[p as usize] as usize] = v as u32;
            fill[p as usize] += 1;
        }

        // value determination: one cycle per basin, handle distance kept
        mark.iter_mut().for_each(|x| *x = 0);
        queue.clear();
        for start in 0..n {
            if mark[start] != 0 {
                continue;
            }
            let walk = start as u32 + 1;
            let mut v = start;
            while mark[v] == 0 {
                mark[v] = walk;
                v = policy[v] as usize;
            }
            if mark[v] != walk {
                continue;
            }
            let (mut sum, mut len, mut u) = (0.0, 0usize, v);
            loop {
                sum += w[u];
                len += 1;
                u = policy[u] as usize;
                if u == v {
                    break;
                }
            }
            eta[v] = sum / len as f64;
            mark[v] = u32::MAX;
            queue.push(v as u32);
        }
        let mut head = 0;
        while head < queue.len() {
            let u = queue[head] as usize;
            head += 1;
            for &v in &rev[rev_off[u] as usize..rev_off[u + 1] as usize] {
                let v = v as usize;
                if mark[v] == u32::MAX {
                    continue;
                }
                mark[v] = u32::MAX;
                eta[v] = eta[u];
                dist[v] = w[v] - eta[v] + dist[u];
                queue.push(v as u32);
            }
        }

        // improvement: first on eta, then on dist among eta-ties
        let mut changed = false;
        for u in 0..n {
            let succ = g.successors(u);
            let &best = succ
                .iter()
                .min_by(|&&a, &&b| eta[a as usize].total_cmp(&eta[b as usize]))
                .unwrap();
            if eta[best as usize] < eta[u] - tol {
                policy[u] = best;
                changed = true;
            }
        }
        if !changed {
            for u in 0..n {
                let mut target = dist[u] - tol;
                let mut pick = None;
                for &v in g.successors(u) {
                    let vi = v as usize;
                    if (eta[vi] - eta[u]).abs() <= tol {
                        let d = w[u] - eta[u] + dist[vi];
                        if d < target {
                            target = d;
                            pick = Some(v);
                        }
                    }
                }
                if let Some(v) = pick {
                    policy[u] = v;
                    changed = true;
                }
            }
        }
        if !changed {
            break;
        }
    }
    eta.iter().copied().fold(f64::INFINITY, f64::min)
}
