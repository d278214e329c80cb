use std::fmt;
use std::str::FromStr;

use crate::rigor::{Complex, ComplexBox, Interval};

/// Deepest supported subdivision level.
pub const MAX_LEVEL: u32 = 30;

/// A `2ⁿ × 2ⁿ` grid of closed congruent cells tiling `[−R, R]²`.
///
/// Column indices run along the real axis, row indices along the imaginary
/// axis. Cell edges are computed the same way for both neighbours, so
/// adjacent cells share their float boundary exactly.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Grid {
    half_width: f64,
    level: u32,
}

/// Index pair of a grid cell.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Cell {
    pub row: u32,
    pub col: u32,
}

impl Cell {
    pub const fn new(row: u32, col: u32) -> Self {
        Cell { row, col }
    }

    /// The four cells one level down.
    pub fn children(self) -> [Cell; 4] {
        let (r, c) = (2 * self.row, 2 * self.col);
        [
            Cell::new(r, c),
            Cell::new(r, c + 1),
            Cell::new(r + 1, c),
            Cell::new(r + 1, c + 1),
        ]
    }

    pub fn parent(self) -> Cell {
        Cell::new(self.row / 2, self.col / 2)
    }
}

impl fmt::Debug for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{}", self.row, self.col)
    }
}

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{}", self.row, self.col)
    }
}

impl FromStr for Cell {
    type Err = ();
    fn from_str(s: &str) -> Result<Self, ()> {
        let (r, c) = s.split_once(',').ok_or(())?;
        Ok(Cell::new(
            r.parse().map_err(|_| ())?,
            c.parse().map_err(|_| ())?,
        ))
    }
}

impl Grid {
    pub fn new(half_width: f64, level: u32) -> Self {
        assert!(
            half_width > 0.0 && half_width.is_finite(),
            "grid half width must be positive"
        );
        assert!(level <= MAX_LEVEL, "grid level {level} exceeds {MAX_LEVEL}");
        Grid { half_width, level }
    }

    pub fn half_width(&self) -> f64 {
        self.half_width
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    /// Cells per side.
    pub fn side(&self) -> u32 {
        1 << self.level
    }

    pub fn cell_count(&self) -> u64 {
        1u64 << (2 * self.level)
    }

    /// The same square one level deeper.
    pub fn child(&self) -> Grid {
        Grid::new(self.half_width, self.level + 1)
    }

    /// Nominal cell side `2R / 2ⁿ` (exact).
    pub fn step(&self) -> f64 {
        2.0 * self.half_width / self.side() as f64
    }

    /// Boundary coordinate `i ∈ [0, 2ⁿ]`.
    #[inline]
    pub fn coord(&self, i: u32) -> f64 {
        if i == self.side() {
            self.half_width
        } else {
            i as f64 * self.step() - self.half_width
        }
    }

    #[inline]
    pub fn interval(&self, i: u32) -> Interval {
        Interval::new(self.coord(i), self.coord(i + 1))
    }

    pub fn domain(&self) -> ComplexBox {
        let d = Interval::new(-self.half_width, self.half_width);
        ComplexBox::new(d, d)
    }

    #[inline]
    pub fn cell_box(&self, c: Cell) -> ComplexBox {
        ComplexBox::new(self.interval(c.col), self.interval(c.row))
    }

    /// Inclusive index range of the cells whose closed interval meets `iv`.
    pub fn index_range(&self, iv: &Interval) -> Option<(u32, u32)> {
        let n = self.side();
        if iv.hi() < -self.half_width || iv.lo() > self.half_width {
            return None;
        }
        let h = self.step();
        let guess = |x: f64| {
            let g = ((x + self.half_width) / h).floor();
            if g.is_nan() || g < 0.0 {
                0
            } else if g >= n as f64 {
                n - 1
            } else {
                g as u32
            }
        };
        // smallest i with coord(i + 1) >= lo
        let mut first = guess(iv.lo());
        while first > 0 && self.coord(first) >= iv.lo() {
            first -= 1;
        }
        while first + 1 < n && self.coord(first + 1) < iv.lo() {
            first += 1;
        }
        // largest i with coord(i) <= hi
        let mut last = guess(iv.hi());
        while last + 1 < n && self.coord(last + 1) <= iv.hi() {
            last += 1;
        }
        while last > 0 && self.coord(last) > iv.hi() {
            last -= 1;
        }
        (first <= last).then_some((first, last))
    }

    /// Row and column ranges of the cells meeting `b`.
    pub fn cells_meeting(&self, b: &ComplexBox) -> Option<((u32, u32), (u32, u32))> {
        let rows = self.index_range(&b.im)?;
        let cols = self.index_range(&b.re)?;
        Some((rows, cols))
    }

    /// All cells whose closed box contains `z`.
    pub fn cells_containing(&self, z: Complex) -> Vec<Cell> {
        self.cells_meeting_box(&ComplexBox::point(z))
    }

    /// All cells whose closed box meets `b`, in row-major order.
    pub fn cells_meeting_box(&self, b: &ComplexBox) -> Vec<Cell> {
        let Some(((r0, r1), (c0, c1))) = self.cells_meeting(b) else {
            return Vec::new();
        };
        (r0..=r1)
            .flat_map(|r| (c0..=c1).map(move |c| Cell::new(r, c)))
            .collect()
    }

    /// Every cell of the grid in row-major order.
    pub fn all_cells(&self) -> impl Iterator<Item = Cell> {
        let n = self.side();
        (0..n).flat_map(move |r| (0..n).map(move |c| Cell::new(r, c)))
    }
}
