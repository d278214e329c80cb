use thiserror::Error;

use super::graph::{Csr, TransitionGraph};
use super::grid::{Cell, Grid};
use super::scc::strongly_connected;
use super::system::{BoxKey, BoxSystem, Layout};
use crate::dynamics::SkewMap;

/// One box chain transitive component: a strongly connected subgraph whose
/// boxes are sorted by key and whose edges use local indices.
#[derive(Clone, Debug, PartialEq)]
pub struct Component {
    pub id: usize,
    pub boxes: Vec<BoxKey>,
    pub graph: Csr,
}

impl Component {
    pub fn vertex_count(&self) -> usize {
        self.boxes.len()
    }

    pub fn edge_count(&self) -> usize {
        self.graph.edge_count()
    }

    pub fn local_index(&self, key: &BoxKey) -> Option<usize> {
        self.boxes.binary_search(key).ok()
    }

    /// Sorted distinct z-cells.
    pub fn z_cells(&self) -> Vec<Cell> {
        let mut z: Vec<Cell> = self.boxes.iter().map(|k| k.z).collect();
        z.dedup();
        z
    }
}

/// Where a model came from.
#[derive(Clone, Debug, PartialEq)]
pub struct Provenance {
    pub map: SkewMap,
    pub delta: f64,
    /// Number of source boxes whose interval image overflowed.
    pub dropped: usize,
    /// Seconds since the Unix epoch, if the caller chose to stamp the model.
    pub created: Option<u64>,
}

/// A box chain recurrent model: the cycle-carrying part of a transition
/// graph, split into vertex-disjoint strongly connected components.
#[derive(Clone, Debug, PartialEq)]
pub struct ChainModel {
    pub layout: Layout,
    pub provenance: Provenance,
    pub components: Vec<Component>,
}

impl ChainModel {
    pub fn empty(layout: Layout, map: SkewMap, delta: f64) -> Self {
        ChainModel {
            layout,
            provenance: Provenance {
                map,
                delta,
                dropped: 0,
                created: None,
            },
            components: Vec::new(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    pub fn box_count(&self) -> usize {
        self.components.iter().map(|c| c.vertex_count()).sum()
    }

    pub fn edge_count(&self) -> usize {
        self.components.iter().map(|c| c.edge_count()).sum()
    }

    pub fn component(&self, id: usize) -> Option<&Component> {
        self.components.get(id)
    }

    /// The component holding `key`, if any.
    pub fn component_of(&self, key: &BoxKey) -> Option<usize> {
        self.components
            .iter()
            .position(|c| c.local_index(key).is_some())
    }

    /// `(V, E)` for every component.
    pub fn sizes(&self) -> Vec<(usize, usize)> {
        self.components
            .iter()
            .map(|c| (c.vertex_count(), c.edge_count()))
            .collect()
    }

    /// The active system consisting of every component box.
    pub fn to_system(&self) -> BoxSystem {
        let keys = self
            .components
            .iter()
            .flat_map(|c| c.boxes.iter().copied())
            .collect();
        BoxSystem::from_keys(self.layout, keys)
    }
}

/// Keep the nontrivial strongly connected components of `g` (two or more
/// vertices, or one vertex with a self-loop) together with their internal
/// edges. Cross-component edges lie on no cycle and are dropped.
///
/// Components are numbered by their smallest box key.
pub fn cyclic_core(g: &TransitionGraph) -> ChainModel {
    let (comp, ncomp) = strongly_connected(&g.graph);
    let mut size = vec![0usize; ncomp];
    for &c in &comp {
        size[c as usize] += 1;
    }
    let mut keep = vec![false; ncomp];
    for v in 0..g.vertex_count() {
        let c = comp[v] as usize;
        if size[c] > 1 || g.graph.has_edge(v, v) {
            keep[c] = true;
        }
    }

    // vertices come in sorted key order, so the first vertex seen of each
    // component is its smallest key
    let mut order: Vec<Option<usize>> = vec![None; ncomp];
    let mut members: Vec<Vec<usize>> = Vec::new();
    for v in 0..g.vertex_count() {
        let c = comp[v] as usize;
        if !keep[c] {
            continue;
        }
        let slot = *order[c].get_or_insert_with(|| {
            members.push(Vec::new());
            members.len() - 1
        });
        members[slot].push(v);
    }

    let mut local = vec![u32::MAX; g.vertex_count()];
    let components = members
        .into_iter()
        .enumerate()
        .map(|(id, verts)| {
            for (i, &v) in verts.iter().enumerate() {
                local[v] = i as u32;
            }
            let cid = comp[verts[0]];
            let mut offsets = Vec::with_capacity(verts.len() + 1);
            offsets.push(0u32);
            let mut targets = Vec::new();
            for &v in &verts {
                targets.extend(
                    g.graph
                        .successors(v)
                        .iter()
                        .filter(|&&j| comp[j as usize] == cid)
                        .map(|&j| local[j as usize]),
                );
                offsets.push(targets.len() as u32);
            }
            Component {
                id,
                boxes: verts.iter().map(|&v| g.keys[v]).collect(),
                graph: Csr::from_parts(offsets, targets),
            }
        })
        .collect();

    ChainModel {
        layout: g.layout,
        provenance: Provenance {
            map: g.map,
            delta: g.delta,
            dropped: g.dropped.len(),
            created: None,
        },
        components,
    }
}

#[derive(Clone, Debug, Error, PartialEq)]
pub enum SelectError {
    #[error("model has no components")]
    Empty,
    #[error("base selection needs a base model")]
    NotBase,
    #[error("the fixed point beta lies in no component")]
    BetaUncovered,
    #[error("the enclosure of beta meets components {0:?}; refine")]
    BetaStraddles(Vec<usize>),
}

/// Base tier: the component of the repelling fixed point and the rest.
#[derive(Clone, Debug, PartialEq)]
pub struct BaseSelection {
    pub jp: usize,
    pub ap_candidates: Vec<usize>,
}

/// Fiber tier: the component with the most edges.
#[derive(Clone, Debug, PartialEq)]
pub struct FiberSelection {
    pub chosen: usize,
    /// Second-largest component by edge count, if any.
    pub runner_up: Option<usize>,
    /// Runner-up has at least 90% of the chosen component's edges.
    pub ambiguous: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Tier {
    Base,
    FiberOverJp,
    FiberOverAp,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Selection {
    Base(BaseSelection),
    Fiber(FiberSelection),
}

/// Γ⁰ for the Julia set of `p` is the component holding the cells met by
/// the enclosure of `beta`; every other base component is an A_p candidate.
pub fn select_base(model: &ChainModel, m: &SkewMap) -> Result<BaseSelection, SelectError> {
    if model.layout.is_fibered() {
        return Err(SelectError::NotBase);
    }
    if model.is_empty() {
        return Err(SelectError::Empty);
    }
    let beta = m.base_fixed_points().beta;
    let mut hit: Vec<usize> = model
        .layout
        .zgrid
        .cells_meeting_box(&beta)
        .into_iter()
        .filter_map(|c| model.component_of(&BoxKey::base(c)))
        .collect();
    hit.sort_unstable();
    hit.dedup();
    match hit.as_slice() {
        [] => Err(SelectError::BetaUncovered),
        [jp] => Ok(BaseSelection {
            jp: *jp,
            ap_candidates: (0..model.components.len()).filter(|c| c != jp).collect(),
        }),
        _ => Err(SelectError::BetaStraddles(hit)),
    }
}

/// The component with the most edges; ties go to more vertices, then to the
/// smaller minimum key (i.e. the lower id).
pub fn select_fiber(model: &ChainModel) -> Result<FiberSelection, SelectError> {
    if model.is_empty() {
        return Err(SelectError::Empty);
    }
    let mut order: Vec<usize> = (0..model.components.len()).collect();
    order.sort_by(|&a, &b| {
        let (ca, cb) = (&model.components[a], &model.components[b]);
        cb.edge_count()
            .cmp(&ca.edge_count())
            .then(cb.vertex_count().cmp(&ca.vertex_count()))
            .then(a.cmp(&b))
    });
    let chosen = order[0];
    let runner_up = order.get(1).copied();
    let ambiguous = runner_up.is_some_and(|r| {
        10 * model.components[r].edge_count() >= 9 * model.components[chosen].edge_count()
    });
    Ok(FiberSelection {
        chosen,
        runner_up,
        ambiguous,
    })
}

pub fn select_components(
    model: &ChainModel,
    m: &SkewMap,
    tier: Tier,
) -> Result<Selection, SelectError> {
    match tier {
        Tier::Base => select_base(model, m).map(Selection::Base),
        Tier::FiberOverJp | Tier::FiberOverAp => select_fiber(model).map(Selection::Fiber),
    }
}

/// Which coordinate planes to subdivide.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Split {
    BaseOnly,
    FiberOnly,
    Both,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum RefineError {
    #[error("refinement would create {would_be} boxes, above the cap of {cap}")]
    TooManyBoxes { would_be: u64, cap: u64 },
    #[error("cannot split the fiber of a base-only model")]
    NoFiber,
    #[error("grid level limit reached")]
    LevelLimit,
}

/// Replace every component box by its children.
pub fn refine(model: &ChainModel, split: Split, max_boxes: u64) -> Result<BoxSystem, RefineError> {
    let fibered = model.layout.wgrid;
    let factor: u64 = match (split, fibered) {
        (Split::FiberOnly | Split::Both, None) => return Err(RefineError::NoFiber),
        (Split::Both, Some(_)) => 16,
        _ => 4,
    };
    let would_be = model.box_count() as u64 * factor;
    if would_be > max_boxes {
        return Err(RefineError::TooManyBoxes {
            would_be,
            cap: max_boxes,
        });
    }
    let split_z = matches!(split, Split::BaseOnly | Split::Both);
    let split_w = matches!(split, Split::FiberOnly | Split::Both);
    let deeper = |g: Grid, yes: bool| -> Result<Grid, RefineError> {
        if !yes {
            Ok(g)
        } else if g.level() >= super::grid::MAX_LEVEL {
            Err(RefineError::LevelLimit)
        } else {
            Ok(g.child())
        }
    };
    let zgrid = deeper(model.layout.zgrid, split_z)?;
    let wgrid = fibered.map(|g| deeper(g, split_w)).transpose()?;
    let layout = Layout { zgrid, wgrid };

    let mut keys = Vec::with_capacity(would_be as usize);
    for key in model.components.iter().flat_map(|c| c.boxes.iter()) {
        let zs = if split_z {
            key.z.children().to_vec()
        } else {
            vec![key.z]
        };
        match key.w {
            None => keys.extend(zs.iter().map(|&z| BoxKey::base(z))),
            Some(w) => {
                let ws = if split_w {
                    w.children().to_vec()
                } else {
                    vec![w]
                };
                for &z in &zs {
                    keys.extend(ws.iter().map(|&wc| BoxKey::product(z, wc)));
                }
            }
        }
    }
    Ok(BoxSystem::from_keys(layout, keys))
}
