use std::fmt;
use std::time::Instant;

use log::info;

use super::config::{LChoice, VerifyConfig};
use super::report::{AxiomAReport, Verdict};
use crate::boxgraph::{
    build_transition_graph, cyclic_core, refine, select_base, select_fiber, BaseSelection,
    BoxSystem, ChainModel, Grid, Layout, RefineError, SelectError, Split, Tier,
};
use crate::dynamics::{DerivativeKind, SkewMap};
use crate::expansion::{
    certify, first_violation, max_feasible_l, solve_metric, vertex_weights, ExpansionCertificate,
    MetricFailure, WeightedComponent,
};

/// Base models are seeded on a full grid at this level (or `n_start`, if
/// smaller) and refined up to `n_start` without certification attempts.
pub const BASE_SEED_LEVEL: u32 = 3;
/// Same for the fiber grid.
pub const FIBER_SEED_LEVEL: u32 = 2;
/// `L = AUTO_FACTOR * max_feasible_L` when `L` is automatic.
pub const AUTO_FACTOR: f64 = 0.95;
/// Fiber refinement also splits the base when the base `L` is below this.
pub const POOR_BASE_L: f64 = 1.05;

/// Which cap ended a stage.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Cap {
    Level,
    Boxes { would_be: u64 },
    Time,
}

impl fmt::Display for Cap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Cap::Level => f.write_str("maximum grid level reached"),
            Cap::Boxes { would_be } => write!(f, "box cap (next level needs {would_be} boxes)"),
            Cap::Time => f.write_str("wall-clock cap"),
        }
    }
}

/// Why the last attempt of a stage did not produce a validated certificate.
#[derive(Clone, Debug, PartialEq)]
pub enum Blocker {
    Selection(SelectError),
    Ambiguous {
        chosen: usize,
        runner_up: usize,
    },
    Metric(MetricFailure),
    /// The minimum cycle mean does not exceed 1.
    NoExpansion {
        max_l: f64,
    },
    /// The solver produced constants that failed the directed-rounding check.
    GateRejected {
        edge: (usize, usize),
    },
    /// A fiber stage whose base stage was not certified.
    NotAttempted,
}

impl fmt::Display for Blocker {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Blocker::Selection(e) => write!(f, "selection: {e}"),
            Blocker::Ambiguous { chosen, runner_up } => write!(
                f,
                "ambiguous selection: components {chosen} and {runner_up} are within 10% in edge count"
            ),
            Blocker::Metric(e) => write!(f, "metric: {e}"),
            Blocker::NoExpansion { max_l } => {
                write!(f, "no expansion: minimum cycle mean gives L <= {max_l}")
            }
            Blocker::GateRejected { edge } => {
                write!(f, "validation rejected edge {} -> {}", edge.0, edge.1)
            }
            Blocker::NotAttempted => f.write_str("not attempted"),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Outcome {
    Certified(ExpansionCertificate),
    /// Nothing to certify, with the reason.
    Vacuous(String),
    Failed {
        blocker: Blocker,
        cap: Option<Cap>,
    },
}

/// The final state of one stage.
#[derive(Clone, Debug)]
pub struct StageResult {
    pub tier: Tier,
    /// For fiber stages, the base component the fibers sit over.
    pub base_component: Option<usize>,
    /// Model at the last level tried.
    pub model: ChainModel,
    pub selected: Option<usize>,
    pub ambiguous: bool,
    /// Every `L` tried at the last level, in order.
    pub tried_l: Vec<f64>,
    pub max_feasible_l: Option<f64>,
    pub outcome: Outcome,
    pub peak_boxes: usize,
    pub seconds: f64,
}

impl StageResult {
    pub fn certificate(&self) -> Option<&ExpansionCertificate> {
        match &self.outcome {
            Outcome::Certified(c) => Some(c),
            _ => None,
        }
    }

    /// A validated certificate, or nothing to certify.
    pub fn passed(&self) -> bool {
        match &self.outcome {
            Outcome::Certified(c) => c.validated,
            Outcome::Vacuous(_) => true,
            Outcome::Failed { .. } => false,
        }
    }

    pub fn kind(&self) -> DerivativeKind {
        match self.tier {
            Tier::Base => DerivativeKind::Base,
            _ => DerivativeKind::Fiber,
        }
    }

    /// Re-run the directed-rounding gate on the stored certificate.
    pub fn revalidate(&mut self, m: &SkewMap) -> bool {
        let kind = self.kind();
        if let Outcome::Certified(cert) = &mut self.outcome {
            let wc = vertex_weights(&self.model, cert.component, m, kind);
            return cert.revalidate(&wc);
        }
        self.passed()
    }
}

pub(crate) struct Budget {
    start: Instant,
    max_seconds: f64,
}

impl Budget {
    pub(crate) fn new(max_seconds: f64) -> Self {
        Budget {
            start: Instant::now(),
            max_seconds,
        }
    }

    fn expired(&self) -> bool {
        self.elapsed() > self.max_seconds
    }

    pub(crate) fn elapsed(&self) -> f64 {
        self.start.elapsed().as_secs_f64()
    }
}

fn build(m: &SkewMap, sys: &BoxSystem, delta: f64, peak: &mut usize) -> ChainModel {
    *peak = (*peak).max(sys.len());
    let tg = build_transition_graph(m, sys, delta);
    let model = cyclic_core(&tg);
    info!(
        "grid {}/{}: {} boxes -> {} components, {} boxes, {} edges",
        sys.layout().zgrid.level(),
        sys.layout().wgrid.map_or(-1, |g| g.level() as i64),
        sys.len(),
        model.components.len(),
        model.box_count(),
        model.edge_count()
    );
    model
}

fn cap_of(e: RefineError) -> Cap {
    match e {
        RefineError::TooManyBoxes { would_be, .. } => Cap::Boxes { would_be },
        RefineError::NoFiber | RefineError::LevelLimit => Cap::Level,
    }
}

/// Base model at level `n_start`: a full grid at the seed level, refined
/// through the intermediate levels. On a cap, returns the last model.
pub(crate) fn seed_base(
    m: &SkewMap,
    cfg: &VerifyConfig,
    peak: &mut usize,
) -> Result<ChainModel, (ChainModel, Cap)> {
    let (r1, _) = cfg.domain(m);
    let seed = Grid::new(r1, cfg.n_start.min(BASE_SEED_LEVEL));
    let sys = BoxSystem::full_base(seed);
    if sys.len() as u64 > cfg.max_boxes {
        let empty = ChainModel::empty(Layout::base(seed), *m, cfg.delta);
        let would_be = sys.len() as u64;
        return Err((empty, Cap::Boxes { would_be }));
    }
    let mut model = build(m, &sys, cfg.delta, peak);
    while model.layout.zgrid.level() < cfg.n_start {
        match refine(&model, Split::BaseOnly, cfg.max_boxes) {
            Ok(sys) => model = build(m, &sys, cfg.delta, peak),
            Err(e) => return Err((model, cap_of(e))),
        }
    }
    Ok(model)
}

/// Fiber model over one base component at w level `m_start`, seeded on
/// full fibers at the seed level.
pub(crate) fn seed_fiber(
    m: &SkewMap,
    base_model: &ChainModel,
    base_component: usize,
    cfg: &VerifyConfig,
    peak: &mut usize,
) -> Result<ChainModel, (ChainModel, Cap)> {
    let (_, r2) = cfg.domain(m);
    let zgrid = base_model.layout.zgrid;
    let wgrid = Grid::new(r2, cfg.m_start.min(FIBER_SEED_LEVEL));
    let zcells = base_model.components[base_component].z_cells();
    let would_be = zcells.len() as u64 * wgrid.cell_count();
    if would_be > cfg.max_boxes {
        let empty = ChainModel::empty(Layout::fibered(zgrid, wgrid), *m, cfg.delta);
        return Err((empty, Cap::Boxes { would_be }));
    }
    let sys = BoxSystem::fibered_over(zgrid, &zcells, wgrid);
    let mut model = build(m, &sys, cfg.delta, peak);
    while model.layout.wgrid.map_or(0, |g| g.level()) < cfg.m_start {
        match refine(&model, Split::FiberOnly, cfg.max_boxes) {
            Ok(sys) => model = build(m, &sys, cfg.delta, peak),
            Err(e) => return Err((model, cap_of(e))),
        }
    }
    Ok(model)
}

/// Models at the starting levels, without certification.
#[derive(Clone, Debug)]
pub struct BuiltModels {
    pub base: ChainModel,
    pub selection: Result<BaseSelection, SelectError>,
    /// Fiber models over J_p and each A_p candidate, keyed by base component.
    pub fibers: Vec<(Tier, usize, ChainModel)>,
    pub peak_boxes: usize,
}

/// Build the base model at `n_start` and, if `beta` singles out a J_p
/// component, fiber models at `m_start` over every base component.
pub fn build_models(m: &SkewMap, cfg: &VerifyConfig) -> Result<BuiltModels, Cap> {
    build_models_from(m, cfg, None)
}

pub fn build_models_from(
    m: &SkewMap,
    cfg: &VerifyConfig,
    base: Option<ChainModel>,
) -> Result<BuiltModels, Cap> {
    let mut peak = 0;
    let base = match base {
        Some(b) => b,
        None => seed_base(m, cfg, &mut peak).map_err(|e| e.1)?,
    };
    let selection = select_base(&base, m);
    let mut fibers = Vec::new();
    if let Ok(sel) = &selection {
        let ids = std::iter::once((Tier::FiberOverJp, sel.jp))
            .chain(sel.ap_candidates.iter().map(|&c| (Tier::FiberOverAp, c)));
        for (tier, c) in ids {
            let model = seed_fiber(m, &base, c, cfg, &mut peak).map_err(|e| e.1)?;
            fibers.push((tier, c, model));
        }
    }
    Ok(BuiltModels {
        base,
        selection,
        fibers,
        peak_boxes: peak,
    })
}

/// The `L` used when the choice is automatic.
pub fn auto_l(max_l: f64) -> f64 {
    if !max_l.is_finite() {
        return 2.0;
    }
    let l = AUTO_FACTOR * max_l;
    if l > 1.0 {
        l
    } else {
        1.0 + AUTO_FACTOR * (max_l - 1.0)
    }
}

struct Attempt {
    result: Result<ExpansionCertificate, Blocker>,
    tried: Vec<f64>,
    max_l: Option<f64>,
}

fn try_l(
    wc: &WeightedComponent<'_>,
    l: f64,
    tried: &mut Vec<f64>,
) -> Result<ExpansionCertificate, Blocker> {
    tried.push(l);
    match certify(wc, l) {
        Ok(c) if c.validated => Ok(c),
        Ok(c) => Err(Blocker::GateRejected {
            edge: first_violation(wc, l, &c.phi).unwrap_or((0, 0)),
        }),
        Err(e) => Err(Blocker::Metric(e)),
    }
}

fn certify_component(wc: &WeightedComponent<'_>, choice: LChoice, retry: bool) -> Attempt {
    let mut tried = Vec::new();
    let max_l = match max_feasible_l(wc) {
        Ok(v) => v,
        Err(_) => {
            // solve at any L to obtain the critical-point witness
            let blocker = match solve_metric(wc, 2.0) {
                Err(e) => Blocker::Metric(e),
                Ok(_) => Blocker::NoExpansion { max_l: 0.0 },
            };
            return Attempt {
                result: Err(blocker),
                tried,
                max_l: Some(0.0),
            };
        }
    };
    let result = match choice {
        LChoice::Fixed(l) => match try_l(wc, l, &mut tried) {
            Ok(c) => Ok(c),
            Err(first) => {
                let l2 = auto_l(max_l);
                if retry && l2 > 1.0 && l2 < l {
                    try_l(wc, l2, &mut tried).map_err(|_| first)
                } else {
                    Err(first)
                }
            }
        },
        LChoice::Auto => {
            let l = auto_l(max_l);
            if l > 1.0 {
                try_l(wc, l, &mut tried)
            } else {
                Err(Blocker::NoExpansion { max_l })
            }
        }
    };
    Attempt {
        result,
        tried,
        max_l: Some(max_l),
    }
}

/// Result of the base stage together with its component labels.
#[derive(Clone, Debug)]
pub struct BaseOutcome {
    pub stage: StageResult,
    pub selection: Option<BaseSelection>,
}

/// Condition (1): build base models at increasing levels until the
/// component of `beta` is isolated and certified expanding.
pub fn verify_base(m: &SkewMap, cfg: &VerifyConfig) -> BaseOutcome {
    base_stage(m, cfg, None, &Budget::new(cfg.max_seconds))
}

pub(crate) fn base_stage(
    m: &SkewMap,
    cfg: &VerifyConfig,
    start: Option<ChainModel>,
    budget: &Budget,
) -> BaseOutcome {
    let t0 = Instant::now();
    let mut peak = 0usize;
    let failed = |model: ChainModel, blocker, cap, peak| BaseOutcome {
        stage: StageResult {
            tier: Tier::Base,
            base_component: None,
            model,
            selected: None,
            ambiguous: false,
            tried_l: Vec::new(),
            max_feasible_l: None,
            outcome: Outcome::Failed {
                blocker,
                cap: Some(cap),
            },
            peak_boxes: peak,
            seconds: t0.elapsed().as_secs_f64(),
        },
        selection: None,
    };

    let mut model = match start {
        Some(model) => model,
        None => match seed_base(m, cfg, &mut peak) {
            Ok(model) => model,
            Err((model, cap)) => {
                return failed(model, Blocker::Selection(SelectError::Empty), cap, peak)
            }
        },
    };

    loop {
        let level = model.layout.zgrid.level();
        let (selection, attempt) = match select_base(&model, m) {
            Err(e) => (
                None,
                Attempt {
                    result: Err(Blocker::Selection(e)),
                    tried: vec![],
                    max_l: None,
                },
            ),
            Ok(sel) => {
                let wc = vertex_weights(&model, sel.jp, m, DerivativeKind::Base);
                let a = certify_component(&wc, cfg.l_base, cfg.retry_smaller_l);
                (Some(sel), a)
            }
        };
        info!(
            "base level {level}: {}",
            match &attempt.result {
                Ok(c) => format!("certified with L = {}", c.l),
                Err(b) => b.to_string(),
            }
        );
        let blocker = match attempt.result {
            Ok(cert) => {
                return BaseOutcome {
                    stage: StageResult {
                        tier: Tier::Base,
                        base_component: None,
                        selected: selection.as_ref().map(|s| s.jp),
                        ambiguous: false,
                        tried_l: attempt.tried,
                        max_feasible_l: attempt.max_l,
                        outcome: Outcome::Certified(cert),
                        model,
                        peak_boxes: peak,
                        seconds: t0.elapsed().as_secs_f64(),
                    },
                    selection,
                }
            }
            Err(b) => b,
        };
        let cap = if level >= cfg.n_max {
            Some(Cap::Level)
        } else if budget.expired() {
            Some(Cap::Time)
        } else {
            None
        };
        let next = match cap {
            Some(_) => None,
            None => match refine(&model, Split::BaseOnly, cfg.max_boxes) {
                Ok(sys) => Some(sys),
                Err(e) => {
                    let mut out = failed(model, blocker, cap_of(e), peak);
                    out.stage.tried_l = attempt.tried;
                    out.stage.max_feasible_l = attempt.max_l;
                    out.stage.selected = selection.as_ref().map(|s| s.jp);
                    out.selection = selection;
                    return out;
                }
            },
        };
        match next {
            Some(sys) => model = build(m, &sys, cfg.delta, &mut peak),
            None => {
                let mut out = failed(model, blocker, cap.unwrap(), peak);
                out.stage.tried_l = attempt.tried;
                out.stage.max_feasible_l = attempt.max_l;
                out.stage.selected = selection.as_ref().map(|s| s.jp);
                out.selection = selection;
                return out;
            }
        }
    }
}

/// Fiber stages for the J_p component and every A_p candidate.
#[derive(Clone, Debug)]
pub struct FiberOutcome {
    pub jp: StageResult,
    /// `None` when the J_p stage failed and the A_p stages were skipped.
    pub ap: Option<Vec<StageResult>>,
}

/// Conditions (2) and (3): vertical expansion over every designated base
/// component. Requires a certified base outcome.
pub fn verify_fibers(m: &SkewMap, base: &BaseOutcome, cfg: &VerifyConfig) -> FiberOutcome {
    fibers(m, base, cfg, &Budget::new(cfg.max_seconds))
}

fn not_attempted(tier: Tier, base: &BaseOutcome, base_component: Option<usize>) -> StageResult {
    StageResult {
        tier,
        base_component,
        model: ChainModel::empty(
            base.stage.model.layout,
            base.stage.model.provenance.map,
            0.0,
        ),
        selected: None,
        ambiguous: false,
        tried_l: Vec::new(),
        max_feasible_l: None,
        outcome: Outcome::Failed {
            blocker: Blocker::NotAttempted,
            cap: None,
        },
        peak_boxes: 0,
        seconds: 0.0,
    }
}

pub(crate) fn fibers(
    m: &SkewMap,
    base: &BaseOutcome,
    cfg: &VerifyConfig,
    budget: &Budget,
) -> FiberOutcome {
    let sel = match (&base.selection, base.stage.passed()) {
        (Some(sel), true) => sel,
        _ => {
            return FiberOutcome {
                jp: not_attempted(Tier::FiberOverJp, base, None),
                ap: None,
            }
        }
    };
    let split = match base.stage.certificate() {
        Some(c) if c.l < POOR_BASE_L => Split::Both,
        _ => Split::FiberOnly,
    };
    let jp = fiber_stage(
        m,
        &base.stage.model,
        sel.jp,
        Tier::FiberOverJp,
        cfg,
        split,
        budget,
    );
    if !jp.passed() {
        return FiberOutcome { jp, ap: None };
    }
    let mut ap = Vec::with_capacity(sel.ap_candidates.len());
    for &c in &sel.ap_candidates {
        let stage = fiber_stage(
            m,
            &base.stage.model,
            c,
            Tier::FiberOverAp,
            cfg,
            split,
            budget,
        );
        let stop = !stage.passed();
        ap.push(stage);
        if stop {
            break;
        }
    }
    FiberOutcome { jp, ap: Some(ap) }
}

fn fiber_stage(
    m: &SkewMap,
    base_model: &ChainModel,
    base_component: usize,
    tier: Tier,
    cfg: &VerifyConfig,
    split: Split,
    budget: &Budget,
) -> StageResult {
    let t0 = Instant::now();
    let mut peak = 0usize;
    let (_, r2) = cfg.domain(m);
    let zgrid = base_model.layout.zgrid;
    let wgrid = Grid::new(r2, cfg.m_start.min(FIBER_SEED_LEVEL));
    let mut stage = StageResult {
        tier,
        base_component: Some(base_component),
        model: ChainModel::empty(Layout::fibered(zgrid, wgrid), *m, cfg.delta),
        selected: None,
        ambiguous: false,
        tried_l: Vec::new(),
        max_feasible_l: None,
        outcome: Outcome::Failed {
            blocker: Blocker::Selection(SelectError::Empty),
            cap: Some(Cap::Level),
        },
        peak_boxes: 0,
        seconds: 0.0,
    };
    let mut model = match seed_fiber(m, base_model, base_component, cfg, &mut peak) {
        Ok(model) => model,
        Err((model, cap)) => {
            stage.outcome = Outcome::Failed {
                blocker: Blocker::Selection(SelectError::Empty),
                cap: Some(cap),
            };
            stage.model = model;
            stage.peak_boxes = peak;
            return stage;
        }
    };
    loop {
        let wlevel = model.layout.wgrid.map_or(0, |g| g.level());
        let (done, blocker) = fiber_attempt(m, &model, tier, cfg, &mut stage);
        info!(
            "{tier:?} over base component {base_component}, w level {wlevel}: {}",
            blocker.as_ref().map_or("done".into(), |b| b.to_string())
        );
        if done {
            stage.model = model;
            stage.peak_boxes = peak;
            stage.seconds = t0.elapsed().as_secs_f64();
            return stage;
        }
        let blocker = blocker.expect("failed attempt has a blocker");
        let cap = if wlevel >= cfg.m_max {
            Some(Cap::Level)
        } else if budget.expired() {
            Some(Cap::Time)
        } else {
            None
        };
        if let Some(cap) = cap {
            stage.outcome = Outcome::Failed {
                blocker,
                cap: Some(cap),
            };
            stage.model = model;
            stage.peak_boxes = peak;
            stage.seconds = t0.elapsed().as_secs_f64();
            return stage;
        }
        stage.outcome = Outcome::Failed { blocker, cap: None };
        match refine(&model, split, cfg.max_boxes) {
            Ok(sys) => model = build(m, &sys, cfg.delta, &mut peak),
            Err(e) => {
                let blocker =
                    match std::mem::replace(&mut stage.outcome, Outcome::Vacuous(String::new())) {
                        Outcome::Failed { blocker, .. } => blocker,
                        _ => Blocker::Selection(SelectError::Empty),
                    };
                stage.outcome = Outcome::Failed {
                    blocker,
                    cap: Some(cap_of(e)),
                };
                stage.model = model;
                stage.peak_boxes = peak;
                stage.seconds = t0.elapsed().as_secs_f64();
                return stage;
            }
        }
    }
}

/// One certification attempt on a fiber model. Returns `(true, None)` when
/// the stage is finished (certified or vacuous).
fn fiber_attempt(
    m: &SkewMap,
    model: &ChainModel,
    tier: Tier,
    cfg: &VerifyConfig,
    stage: &mut StageResult,
) -> (bool, Option<Blocker>) {
    stage.tried_l.clear();
    stage.max_feasible_l = None;
    stage.selected = None;
    stage.ambiguous = false;
    if model.is_empty() {
        if tier == Tier::FiberOverAp {
            stage.outcome = Outcome::Vacuous(
                "fiber model is empty: this base component carries no chain recurrence".into(),
            );
            return (true, None);
        }
        return (false, Some(Blocker::Selection(SelectError::Empty)));
    }
    let sel = match select_fiber(model) {
        Ok(s) => s,
        Err(e) => return (false, Some(Blocker::Selection(e))),
    };
    stage.selected = Some(sel.chosen);
    stage.ambiguous = sel.ambiguous;
    if sel.ambiguous {
        return (
            false,
            Some(Blocker::Ambiguous {
                chosen: sel.chosen,
                runner_up: sel.runner_up.unwrap_or(sel.chosen),
            }),
        );
    }
    let wc = vertex_weights(model, sel.chosen, m, DerivativeKind::Fiber);
    let attempt = certify_component(&wc, cfg.l_fiber, cfg.retry_smaller_l);
    stage.tried_l = attempt.tried;
    stage.max_feasible_l = attempt.max_l;
    match attempt.result {
        Ok(cert) => {
            stage.outcome = Outcome::Certified(cert);
            (true, None)
        }
        Err(b) => (false, Some(b)),
    }
}

/// The full test: conditions (1)-(3) in order, stopping at the first
/// stage that cannot be certified.
pub fn verify_axiom_a(m: &SkewMap, cfg: &VerifyConfig) -> AxiomAReport {
    run(m, cfg, None)
}

/// As [`verify_axiom_a`], starting the base stage from a prebuilt base
/// model instead of a fresh grid.
pub fn verify_axiom_a_from_model(base_model: ChainModel, cfg: &VerifyConfig) -> AxiomAReport {
    let m = base_model.provenance.map;
    run(&m, cfg, Some(base_model))
}

fn run(m: &SkewMap, cfg: &VerifyConfig, start: Option<ChainModel>) -> AxiomAReport {
    let budget = Budget::new(cfg.max_seconds);
    let base = base_stage(m, cfg, start, &budget);
    let (condition2, condition3) = if base.stage.passed() {
        let f = fibers(m, &base, cfg, &budget);
        (Some(f.jp), f.ap)
    } else {
        (None, None)
    };
    let mut report = AxiomAReport {
        map: *m,
        config: cfg.clone(),
        bounds: cfg.domain(m),
        condition1: base.stage,
        condition2,
        condition3,
        verdict: Verdict::NotVerifiedAtResolution,
        seconds: budget.elapsed(),
    };
    report.verdict = report.compute_verdict();
    report
}
