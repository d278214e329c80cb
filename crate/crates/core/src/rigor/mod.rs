//! Validated interval arithmetic over `f64` and box geometry in C and C².

mod boxes;
mod interval;
pub mod round;

pub use boxes::{
    abs_bounds, complex_sqr, intersects_inflated, Complex, ComplexBox, Inflatable, ProductBox,
};
pub use interval::{interval_arith, ArithOp, Interval};
