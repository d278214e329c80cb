//! The three-condition Axiom A test: expansion of the base on J_p, then
//! vertical expansion over J_p and over every A_p candidate, with automatic
//! refinement between attempts.

mod config;
mod pipeline;
mod report;

pub use config::{LChoice, VerifyConfig, CONFIG_KEYS};
pub use pipeline::{
    auto_l, build_models, build_models_from, verify_axiom_a, verify_axiom_a_from_model,
    verify_base, verify_fibers, BaseOutcome, Blocker, BuiltModels, Cap, FiberOutcome, Outcome,
    StageResult, AUTO_FACTOR, BASE_SEED_LEVEL, FIBER_SEED_LEVEL, POOR_BASE_L,
};
pub use report::{stage_stem, AxiomAReport, Verdict, REPORT_HEADER};
