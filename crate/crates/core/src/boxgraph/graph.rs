use rayon::prelude::*;

use super::grid::Cell;
use super::system::{BoxKey, BoxSystem, Layout};
use crate::dynamics::SkewMap;
use crate::rigor::ComplexBox;

/// Compressed sparse row digraph on vertices `0..n`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Csr {
    offsets: Vec<u32>,
    targets: Vec<u32>,
}

impl Csr {
    /// Build from raw arrays; `offsets` has `n + 1` nondecreasing entries.
    pub fn from_parts(offsets: Vec<u32>, targets: Vec<u32>) -> Self {
        assert!(!offsets.is_empty() && offsets[0] == 0);
        assert_eq!(*offsets.last().unwrap() as usize, targets.len());
        debug_assert!(offsets.windows(2).all(|w| w[0] <= w[1]));
        let n = offsets.len() - 1;
        assert!(
            targets.iter().all(|&t| (t as usize) < n),
            "edge target out of range"
        );
        Csr { offsets, targets }
    }

    /// Build from an edge list; edges are sorted and deduplicated.
    pub fn from_edges(n: usize, edges: &[(u32, u32)]) -> Self {
        let mut e = edges.to_vec();
        e.sort_unstable();
        e.dedup();
        let mut offsets = vec![0u32; n + 1];
        for &(k, _) in &e {
            offsets[k as usize + 1] += 1;
        }
        for i in 0..n {
            offsets[i + 1] += offsets[i];
        }
        Csr::from_parts(offsets, e.into_iter().map(|(_, j)| j).collect())
    }

    pub fn vertex_count(&self) -> usize {
        self.offsets.len() - 1
    }

    pub fn edge_count(&self) -> usize {
        self.targets.len()
    }

    #[inline]
    pub fn successors(&self, v: usize) -> &[u32] {
        &self.targets[self.offsets[v] as usize..self.offsets[v + 1] as usize]
    }

    pub fn has_edge(&self, k: usize, j: usize) -> bool {
        self.successors(k).binary_search(&(j as u32)).is_ok()
    }

    /// All edges `(k, j)` in sorted order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.vertex_count())
            .flat_map(move |k| self.successors(k).iter().map(move |&j| (k, j as usize)))
    }

    pub fn offsets(&self) -> &[u32] {
        &self.offsets
    }

    pub fn targets(&self) -> &[u32] {
        &self.targets
    }

    /// Edge-reversed graph.
    pub fn transpose(&self) -> Csr {
        let n = self.vertex_count();
        let mut offsets = vec![0u32; n + 1];
        for &t in &self.targets {
            offsets[t as usize + 1] += 1;
        }
        for i in 0..n {
            offsets[i + 1] += offsets[i];
        }
        let mut fill = offsets.clone();
        let mut targets = vec![0u32; self.targets.len()];
        for (k, j) in self.edges() {
            targets[fill[j] as usize] = k as u32;
            fill[j] += 1;
        }
        Csr { offsets, targets }
    }
}

/// The graph Υ over a box system: an edge `k → j` whenever the interval
/// image of box `k`, grown by `delta`, meets box `j`.
#[derive(Clone, Debug)]
pub struct TransitionGraph {
    pub layout: Layout,
    pub map: SkewMap,
    pub keys: Vec<BoxKey>,
    pub delta: f64,
    pub graph: Csr,
    /// Sources whose image overflowed; they escape and get no edges.
    pub dropped: Vec<u32>,
}

impl TransitionGraph {
    pub fn vertex_count(&self) -> usize {
        self.keys.len()
    }

    pub fn edge_count(&self) -> usize {
        self.graph.edge_count()
    }
}

const CHUNK: usize = 512;

/// Build Υ for `sys` under `m`. Targets outside the active set (or outside
/// the domain) are simply absent. Edge order is sorted by `(k, j)` and does
/// not depend on the number of worker threads.
pub fn build_transition_graph(m: &SkewMap, sys: &BoxSystem, delta: f64) -> TransitionGraph {
    assert!(delta >= 0.0, "delta must be nonnegative");
    let layout = *sys.layout();
    let keys = sys.boxes();
    let parts: Vec<(Vec<u32>, Vec<u32>, Vec<u32>)> = keys
        .par_chunks(CHUNK)
        .enumerate()
        .map(|(ci, chunk)| {
            let mut counts = Vec::with_capacity(chunk.len());
            let mut targets = Vec::new();
            let mut dropped = Vec::new();
            for (i, key) in chunk.iter().enumerate() {
                let before = targets.len();
                if !image_targets(m, &layout, keys, key, delta, &mut targets) {
                    dropped.push((ci * CHUNK + i) as u32);
                }
                counts.push((targets.len() - before) as u32);
            }
            (counts, targets, dropped)
        })
        .collect();

    let total: usize = parts.iter().map(|p| p.1.len()).sum();
    assert!(total < u32::MAX as usize, "edge count exceeds u32 range");
    let mut offsets = Vec::with_capacity(keys.len() + 1);
    offsets.push(0u32);
    let mut targets = Vec::with_capacity(total);
    let mut dropped = Vec::new();
    for (counts, t, d) in parts {
        for c in counts {
            let last = *offsets.last().unwrap();
            offsets.push(last + c);
        }
        targets.extend(t);
        dropped.extend(d);
    }
    TransitionGraph {
        layout,
        map: *m,
        keys: keys.to_vec(),
        delta,
        graph: Csr::from_parts(offsets, targets),
        dropped,
    }
}

/// Push the indices of all active boxes met by the inflated image of `key`.
/// Returns false if the image overflowed.
fn image_targets(
    m: &SkewMap,
    layout: &Layout,
    keys: &[BoxKey],
    key: &BoxKey,
    delta: f64,
    out: &mut Vec<u32>,
) -> bool {
    let src = layout.product_box(key);
    let (zimg, wimg) = if layout.is_fibered() {
        let img = m.eval_f(&src);
        (img.z, Some(img.w))
    } else {
        (m.eval_p(&src.z), None)
    };
    if zimg.is_overflow() || wimg.is_some_and(|w| w.is_overflow()) {
        return false;
    }
    let zimg = zimg.inflate(delta);
    let Some(((zr0, zr1), (zc0, zc1))) = layout.zgrid.cells_meeting(&zimg) else {
        return true;
    };
    let wrange = match (wimg, layout.wgrid) {
        (Some(w), Some(g)) => match g.cells_meeting(&w.inflate(delta)) {
            Some(r) => Some(r),
            None => return true,
        },
        _ => None,
    };

    for zr in zr0..=zr1 {
        let lo = keys.partition_point(|k| k.z < Cell::new(zr, zc0));
        let hi = lo + keys[lo..].partition_point(|k| k.z <= Cell::new(zr, zc1));
        match wrange {
            None => out.extend((lo..hi).map(|i| i as u32)),
            Some(((wr0, wr1), (wc0, wc1))) => {
                let mut start = lo;
                while start < hi {
                    let z = keys[start].z;
                    let end = start + keys[start..hi].partition_point(|k| k.z == z);
                    let group = &keys[start..end];
                    for wr in wr0..=wr1 {
                        let a = group.partition_point(|k| k.w < Some(Cell::new(wr, wc0)));
                        let b = a + group[a..].partition_point(|k| k.w <= Some(Cell::new(wr, wc1)));
                        out.extend((start + a..start + b).map(|i| i as u32));
                    }
                    start = end;
                }
            }
        }
    }
    true
}

/// The inflated image of one box, for diagnostics and tests.
pub fn image_box(m: &SkewMap, layout: &Layout, key: &BoxKey) -> (ComplexBox, Option<ComplexBox>) {
    let src = layout.product_box(key);
    if layout.is_fibered() {
        let img = m.eval_f(&src);
        (img.z, Some(img.w))
    } else {
        (m.eval_p(&src.z), None)
    }
}
