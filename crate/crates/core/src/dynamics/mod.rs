//! The quadratic skew-product family and the two map generators.

mod generators;
mod mapfile;
mod skew;

pub use generators::{
    gen_interpolating, gen_prop31, verify_prop31, CantorGeometry, GeneratorError, InterpolatingMap,
    Prop31Caps, Prop31Check, Prop31Params,
};
pub use mapfile::{map_from_str, map_to_string, MAP_HEADER};
pub use skew::{complex_sqrt, DerivativeKind, EscapeRadii, FixedPoints, SkewMap};
