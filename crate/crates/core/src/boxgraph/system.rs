use std::fmt;

use super::grid::{Cell, Grid};
use crate::rigor::{ComplexBox, ProductBox};

/// Identifies one box of a [`BoxSystem`]: a z-cell, plus a w-cell when the
/// system is fibered.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BoxKey {
    pub z: Cell,
    pub w: Option<Cell>,
}

impl BoxKey {
    pub const fn base(z: Cell) -> Self {
        BoxKey { z, w: None }
    }

    pub const fn product(z: Cell, w: Cell) -> Self {
        BoxKey { z, w: Some(w) }
    }

    pub fn parse(s: &str) -> Option<BoxKey> {
        match s.split_once(';') {
            Some((z, w)) => Some(BoxKey::product(z.parse().ok()?, w.parse().ok()?)),
            None => Some(BoxKey::base(s.parse().ok()?)),
        }
    }
}

impl fmt::Debug for BoxKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for BoxKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.w {
            Some(w) => write!(f, "{};{}", self.z, w),
            None => write!(f, "{}", self.z),
        }
    }
}

/// The grids a system lives on: a z-grid alone for the base map, or a
/// z-grid and a w-grid for the skew product.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Layout {
    pub zgrid: Grid,
    pub wgrid: Option<Grid>,
}

impl Layout {
    pub fn base(zgrid: Grid) -> Self {
        Layout { zgrid, wgrid: None }
    }

    pub fn fibered(zgrid: Grid, wgrid: Grid) -> Self {
        Layout {
            zgrid,
            wgrid: Some(wgrid),
        }
    }

    pub fn is_fibered(&self) -> bool {
        self.wgrid.is_some()
    }

    /// The z-box of a key.
    pub fn z_box(&self, key: &BoxKey) -> ComplexBox {
        self.zgrid.cell_box(key.z)
    }

    /// The full product box of a key; base keys get a zero w-box.
    pub fn product_box(&self, key: &BoxKey) -> ProductBox {
        let z = self.zgrid.cell_box(key.z);
        let w = match (key.w, self.wgrid) {
            (Some(w), Some(g)) => g.cell_box(w),
            _ => ComplexBox::point(Default::default()),
        };
        ProductBox::new(z, w)
    }
}

/// A set of active boxes on a [`Layout`], kept sorted by key.
#[derive(Clone, Debug, PartialEq)]
pub struct BoxSystem {
    layout: Layout,
    boxes: Vec<BoxKey>,
}

impl BoxSystem {
    /// Every cell of the z-grid.
    pub fn full_base(zgrid: Grid) -> Self {
        BoxSystem {
            layout: Layout::base(zgrid),
            boxes: zgrid.all_cells().map(BoxKey::base).collect(),
        }
    }

    /// The given z-cells (deduplicated and sorted).
    pub fn base(zgrid: Grid, cells: impl IntoIterator<Item = Cell>) -> Self {
        Self::from_keys(
            Layout::base(zgrid),
            cells.into_iter().map(BoxKey::base).collect(),
        )
    }

    /// Every w-cell of `wgrid` over each of the given z-cells.
    pub fn fibered_over(zgrid: Grid, zcells: &[Cell], wgrid: Grid) -> Self {
        let mut z: Vec<Cell> = zcells.to_vec();
        z.sort_unstable();
        z.dedup();
        let boxes = z
            .iter()
            .flat_map(|&zc| wgrid.all_cells().map(move |wc| BoxKey::product(zc, wc)))
            .collect();
        BoxSystem {
            layout: Layout::fibered(zgrid, wgrid),
            boxes,
        }
    }

    /// Build from arbitrary keys; panics if the keys disagree with the layout.
    pub fn from_keys(layout: Layout, mut boxes: Vec<BoxKey>) -> Self {
        assert!(
            boxes.iter().all(|k| k.w.is_some() == layout.is_fibered()),
            "box keys do not match the layout"
        );
        boxes.sort_unstable();
        boxes.dedup();
        BoxSystem { layout, boxes }
    }

    pub fn layout(&self) -> &Layout {
        &self.layout
    }

    pub fn boxes(&self) -> &[BoxKey] {
        &self.boxes
    }

    pub fn len(&self) -> usize {
        self.boxes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.boxes.is_empty()
    }

    pub fn index_of(&self, key: &BoxKey) -> Option<usize> {
        self.boxes.binary_search(key).ok()
    }

    /// Sorted, distinct z-cells of the active boxes.
    pub fn z_cells(&self) -> Vec<Cell> {
        let mut z: Vec<Cell> = self.boxes.iter().map(|k| k.z).collect();
        z.dedup();
        z
    }
}
