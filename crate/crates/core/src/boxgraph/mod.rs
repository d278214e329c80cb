//! Box grids, transition graphs, box chain recurrent models and their
//! components, refinement, and the model file format.

mod format;
mod graph;
mod grid;
mod model;
mod scc;
mod system;

pub use format::{load, model_from_str, model_to_string, serialize, MODEL_HEADER};
pub use graph::{build_transition_graph, image_box, Csr, TransitionGraph};
pub use grid::{Cell, Grid, MAX_LEVEL};
pub use model::{
    cyclic_core, refine, select_base, select_components, select_fiber, BaseSelection, ChainModel,
    Component, FiberSelection, Provenance, RefineError, SelectError, Selection, Split, Tier,
};
pub use scc::strongly_connected;
pub use system::{BoxKey, BoxSystem, Layout};
