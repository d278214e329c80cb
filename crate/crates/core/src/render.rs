//! Fiber-slice figures: the w-boxes of a fibered model above one z-column,
//! shaded by component, written as binary portable pixmaps (P6).

use std::collections::BTreeMap;
use std::path::Path;

use thiserror::Error;

use crate::boxgraph::{Cell, ChainModel, Grid};
use crate::rigor::Complex;

/// Background level for w-cells outside every component.
pub const BACKGROUND: u8 = 255;
/// Lightest level handed to a component.
const LIGHTEST: u8 = 200;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum FiberSelector {
    /// Every z-cell whose closed box contains the point.
    Point(Complex),
    Cell(Cell),
}

/// `[re_min, re_max] × [im_min, im_max]` in the w-plane.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Window {
    pub re: (f64, f64),
    pub im: (f64, f64),
}

impl Window {
    pub fn full(grid: &Grid) -> Self {
        let r = grid.half_width();
        Window {
            re: (-r, r),
            im: (-r, r),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RenderSpec {
    pub selector: FiberSelector,
    /// Width and height in pixels.
    pub size: u32,
    /// Defaults to the full w-domain.
    pub window: Option<Window>,
}

#[derive(Debug, Error, PartialEq)]
pub enum RenderError {
    #[error("model has no w-grid; only fibered models can be rendered")]
    NotFibered,
    #[error("selector is outside the base cover of the model")]
    OutsideCover,
    #[error("image size must be positive")]
    BadSize,
    #[error("window must have positive width and height")]
    BadWindow,
}

/// The part of a model above one z-column.
#[derive(Clone, Debug, PartialEq)]
pub struct FiberSlice {
    pub zcells: Vec<Cell>,
    /// Each w-cell and its component. Where columns overlap, the smallest
    /// component id wins.
    pub cells: BTreeMap<Cell, usize>,
    /// Gray level of every component present, in id order.
    pub palette: BTreeMap<usize, u8>,
    pub wgrid: Grid,
}

impl FiberSlice {
    pub fn component_count(&self) -> usize {
        self.palette.len()
    }

    /// The w-cells of one component.
    pub fn cells_of(&self, id: usize) -> impl Iterator<Item = Cell> + '_ {
        self.cells
            .iter()
            .filter(move |(_, &c)| c == id)
            .map(|(&w, _)| w)
    }
}

/// Distinct gray levels from black to [`LIGHTEST`] for `n` components.
/// Levels repeat only beyond 201 components.
pub fn palette(n: usize) -> Vec<u8> {
    if n <= 1 {
        return vec![0; n];
    }
    (0..n)
        .map(|i| (i * LIGHTEST as usize / (n - 1)) as u8)
        .collect()
}

pub fn fiber_slice(model: &ChainModel, selector: FiberSelector) -> Result<FiberSlice, RenderError> {
    let wgrid = model.layout.wgrid.ok_or(RenderError::NotFibered)?;
    let zgrid = model.layout.zgrid;
    let zcells = match selector {
        FiberSelector::Point(z) => zgrid.cells_containing(z),
        FiberSelector::Cell(c) => {
            if c.row >= zgrid.side() || c.col >= zgrid.side() {
                Vec::new()
            } else {
                vec![c]
            }
        }
    };
    let mut cells = BTreeMap::new();
    for comp in &model.components {
        for key in &comp.boxes {
            if let Some(w) = key.w {
                if zcells.binary_search(&key.z).is_ok() {
                    cells.entry(w).or_insert(comp.id);
                }
            }
        }
    }
    if cells.is_empty() {
        return Err(RenderError::OutsideCover);
    }
    let mut ids: Vec<usize> = cells.values().copied().collect();
    ids.sort_unstable();
    ids.dedup();
    let palette = ids.iter().copied().zip(palette(ids.len())).collect();
    Ok(FiberSlice {
        zcells,
        cells,
        palette,
        wgrid,
    })
}

/// Gray levels, row-major from the top-left (largest imaginary part).
pub fn rasterize(slice: &FiberSlice, size: u32, window: Window) -> Result<Vec<u8>, RenderError> {
    if size == 0 {
        return Err(RenderError::BadSize);
    }
    let (x0, x1) = window.re;
    let (y0, y1) = window.im;
    if !(x1 > x0 && y1 > y0) {
        return Err(RenderError::BadWindow);
    }
    let g = slice.wgrid;
    let (r, h, n) = (g.half_width(), g.step(), g.side() as f64);
    let index = |x: f64| {
        let i = ((x + r) / h).floor();
        (i >= 0.0 && i < n).then_some(i as u32)
    };
    let s = size as f64;
    let mut px = Vec::with_capacity((size * size) as usize);
    for row in 0..size {
        let y = y1 - (row as f64 + 0.5) * (y1 - y0) / s;
        for col in 0..size {
            let x = x0 + (col as f64 + 0.5) * (x1 - x0) / s;
            let level = match (index(y), index(x)) {
                (Some(r), Some(c)) => slice
                    .cells
                    .get(&Cell::new(r, c))
                    .map_or(BACKGROUND, |id| slice.palette[id]),
                _ => BACKGROUND,
            };
            px.push(level);
        }
    }
    Ok(px)
}

/// Binary P6 image of the slice.
pub fn render_ppm(
    model: &ChainModel,
    spec: &RenderSpec,
) -> Result<(Vec<u8>, FiberSlice), RenderError> {
    let slice = fiber_slice(model, spec.selector)?;
    let window = spec.window.unwrap_or_else(|| Window::full(&slice.wgrid));
    let gray = rasterize(&slice, spec.size, window)?;
    let mut out = format!("P6\n{} {}\n255\n", spec.size, spec.size).into_bytes();
    out.reserve(gray.len() * 3);
    for g in gray {
        out.extend_from_slice(&[g, g, g]);
    }
    Ok((out, slice))
}

/// Render to `path`. Nothing is written on error.
pub fn render_fiber(
    model: &ChainModel,
    spec: &RenderSpec,
    path: impl AsRef<Path>,
) -> Result<FiberSlice, crate::Error> {
    let (bytes, slice) =
        render_ppm(model, spec).map_err(|e| crate::Error::Invalid(e.to_string()))?;
    std::fs::write(path, bytes)?;
    Ok(slice)
}
