pub mod boxgraph;
pub mod cli;
pub mod dynamics;
mod error;
pub mod expansion;
pub mod render;
pub mod rigor;
pub mod textfmt;
pub mod verifier;

pub use error::Error;
