//! Acceptance criteria 1 to 9, one PASS/FAIL line each.
//!
//! cargo test --release --test acceptance

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use skewaxiom::boxgraph::{BoxKey, ChainModel};
use skewaxiom::dynamics::SkewMap;
use skewaxiom::expansion::vertex_weights;
use skewaxiom::render::{render_ppm, FiberSelector, RenderSpec};
use skewaxiom::rigor::{Complex, ComplexBox};
use skewaxiom::verifier::{
    verify_axiom_a, AxiomAReport, LChoice, Outcome, StageResult, Verdict, VerifyConfig,
};

use common::{exact_recheck, fuzz_op, metric_oracle, FUZZ_OPS};

type Check = Result<String, String>;

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn config(bounds: (f64, f64), n: u32, m: u32, l: f64) -> VerifyConfig {
    VerifyConfig {
        n_start: n,
        n_max: n.max(8),
        m_start: m,
        m_max: m.max(7),
        l_base: LChoice::Fixed(l),
        l_fiber: LChoice::Fixed(l),
        bounds: Some(bounds),
        ..Default::default()
    }
}

fn size_of(stage: &StageResult) -> (usize, usize) {
    let id = match &stage.outcome {
        Outcome::Certified(c) => c.component,
        _ => stage.selected.unwrap_or(0),
    };
    stage.model.sizes().get(id).copied().unwrap_or((0, 0))
}

/// "(V;E) vs paper (V;E), ratios x/y" for information only.
fn compare(stage: &StageResult, paper: (usize, usize)) -> String {
    let (v, e) = size_of(stage);
    format!(
        "(V;E)=({v};{e}) vs ({};{}), ratios {:.2}/{:.2}",
        paper.0,
        paper.1,
        v as f64 / paper.0 as f64,
        e as f64 / paper.1 as f64
    )
}

fn cert_l(stage: &StageResult) -> Option<f64> {
    stage.certificate().filter(|c| c.validated).map(|c| c.l)
}

fn levels(stage: &StageResult) -> String {
    let l = stage.model.layout;
    match l.wgrid {
        Some(w) => format!("{}x{}", l.zgrid.level(), w.level()),
        None => l.zgrid.level().to_string(),
    }
}

struct Runs {
    quadratic: (AxiomAReport, f64),
    cantor: (AxiomAReport, f64),
    shifted: (AxiomAReport, f64),
    rabbit: (AxiomAReport, f64),
}

fn timed(m: SkewMap, cfg: VerifyConfig) -> (AxiomAReport, f64) {
    let t = Instant::now();
    let r = verify_axiom_a(&m, &cfg);
    (r, t.elapsed().as_secs_f64())
}

fn rabbit_map() -> SkewMap {
    SkewMap::new(
        Complex::real(-90.0),
        Complex::ZERO,
        Complex::real(1.0 / 6.0),
        Complex::new(1.4, 0.75),
    )
}

impl Runs {
    fn new() -> Self {
        Runs {
            quadratic: timed(
                SkewMap::real(0.0, 0.1, 0.01, 0.0),
                config((1.1, 1.21), 5, 4, 1.29105),
            ),
            cantor: timed(
                SkewMap::real(2.0, 0.0, 0.1, 0.0),
                config((2.1, 1.28), 7, 5, 1.125),
            ),
            shifted: timed(
                SkewMap::real(-90.0, 0.0, 0.25, 2.25),
                config((10.1, 2.842), 7, 7, 1.25),
            ),
            rabbit: timed(
                rabbit_map(),
                VerifyConfig {
                    n_max: 10,
                    m_max: 9,
                    max_boxes: 1 << 26,
                    ..config((10.1, 2.426), 10, 9, 1.0625)
                },
            ),
        }
    }
}

fn criterion_1(runs: &Runs) -> Check {
    let (r, secs) = &runs.quadratic;
    ensure(
        r.verdict == Verdict::AxiomAVerified,
        format!("verdict {}", r.verdict),
    )?;
    let jp = r.condition2.as_ref().unwrap();
    let ap = r.condition3.as_ref().unwrap();
    ensure(
        cert_l(jp) == Some(1.29105),
        "J_p fiber certificate not at L=1.29105",
    )?;
    ensure(
        levels(jp) == "5x4",
        format!("J_p fiber refined to {}", levels(jp)),
    )?;
    // the A_p candidate holding the attracting fixed point z = 0
    let origin = r
        .condition1
        .model
        .components
        .iter()
        .position(|c| {
            c.boxes
                .iter()
                .any(|k| r.condition1.model.layout.z_box(k).contains(Complex::ZERO))
        })
        .ok_or("no base component at the origin")?;
    let at_origin = ap
        .iter()
        .find(|s| s.base_component == Some(origin))
        .ok_or("origin component is not an A_p candidate")?;
    ensure(
        cert_l(at_origin) == Some(1.29105),
        "A_p fiber certificate not at L=1.29105",
    )?;
    ensure(
        ap.iter().all(|s| cert_l(s) == Some(1.29105)),
        "an A_p certificate is missing",
    )?;
    Ok(format!(
        "verified in {secs:.1}s; J_p fiber {}; fiber over origin {}; {} fiber certificates ({} over spurious base components)",
        compare(jp, (39_200, 1_953_900)),
        compare(at_origin, (608, 4_416)),
        1 + ap.len(),
        ap.len() - 1
    ))
}

fn criterion_2(runs: &Runs) -> Check {
    let (r, secs) = &runs.cantor;
    ensure(
        r.verdict == Verdict::AxiomAVerified,
        format!("verdict {}", r.verdict),
    )?;
    ensure(r.condition3_vacuous(), "condition 3 is not vacuous")?;
    let jp = r.condition2.as_ref().unwrap();
    ensure(
        cert_l(jp) == Some(1.125),
        "fiber certificate not at L=1.125",
    )?;
    ensure(levels(jp) == "7x5", format!("refined to {}", levels(jp)))?;
    Ok(format!(
        "verified in {secs:.1}s; single fiber certificate, condition 3 vacuous; {}",
        compare(jp, (39_880, 1_447_640))
    ))
}

fn criterion_3(runs: &Runs) -> Check {
    let (r, secs) = &runs.shifted;
    ensure(
        r.verdict == Verdict::AxiomAVerified,
        format!("verdict {}", r.verdict),
    )?;
    let jp = r.condition2.as_ref().unwrap();
    ensure(cert_l(jp) == Some(1.25), "fiber certificate not at L=1.25")?;
    ensure(levels(jp) == "7x7", format!("refined to {}", levels(jp)))?;
    Ok(format!(
        "verified in {secs:.1}s; {}",
        compare(jp, (5_640, 209_572))
    ))
}

/// Attracting 3-cycle of `w² + c`, by iterating the critical point.
fn attracting_three_cycle(c: Complex) -> [Complex; 3] {
    let step =
        |w: Complex| Complex::new(w.re * w.re - w.im * w.im + c.re, 2.0 * w.re * w.im + c.im);
    let mut w = Complex::ZERO;
    for _ in 0..3000 {
        w = step(w);
    }
    let (a, b) = (step(w), step(step(w)));
    [w, a, b]
}

fn criterion_4(runs: &Runs) -> Check {
    let (r, secs) = &runs.rabbit;
    ensure(
        r.verdict == Verdict::AxiomAVerified,
        format!("verdict {}", r.verdict),
    )?;
    let jp = r.condition2.as_ref().unwrap();
    let cert = jp.certificate().ok_or("no fiber certificate")?;
    ensure(cert.validated, "fiber certificate not validated")?;
    let model: &ChainModel = &jp.model;
    // over z = alpha = -9 the fiber map is w² - 0.1 + 0.75i
    let alpha = Complex::real(-9.0);
    let fiber_c = Complex::new(-1.5 + 1.4, 0.75);
    let cycle = attracting_three_cycle(fiber_c);
    let wgrid = model.layout.wgrid.unwrap();
    let zcells = model.layout.zgrid.cells_containing(alpha);
    ensure(!zcells.is_empty(), "alpha is outside the z-grid")?;
    let mut homes = Vec::new();
    for w in cycle {
        for &z in &zcells {
            for wc in wgrid.cells_containing(w) {
                let key = BoxKey::product(z, wc);
                if let Some(id) = model.component_of(&key) {
                    ensure(
                        id != cert.component,
                        format!("saddle cycle point {w} shares component {id} with J"),
                    )?;
                    homes.push(id);
                }
            }
        }
    }
    homes.sort_unstable();
    homes.dedup();
    let over_alpha_in_j = model.components[cert.component]
        .boxes
        .iter()
        .any(|k| zcells.contains(&k.z));
    ensure(over_alpha_in_j, "J component has no boxes over alpha")?;
    Ok(format!(
        "verified at {} in {secs:.1}s, L={}; J component (V;E)=({};{}); saddle 3-cycle {} lies in component(s) {homes:?}, disjoint from J",
        levels(jp),
        cert.l,
        size_of(jp).0,
        size_of(jp).1,
        cycle.iter().map(|c| format!("{:.4}{:+.4}i", c.re, c.im)).collect::<Vec<_>>().join(", ")
    ))
}

fn criterion_5() -> Check {
    let mut runs = 0;
    let mut biggest = 0usize;
    let cap = 1u64 << 20;
    for l in [LChoice::Auto, LChoice::Fixed(1.01), LChoice::Fixed(1.2)] {
        // parabolic base: z² + 1/4
        let m = SkewMap::real(0.25, 0.0, 0.0, 0.0);
        for n in 3..=10 {
            let cfg = VerifyConfig {
                n_start: n,
                n_max: n,
                m_start: 2,
                m_max: 2,
                l_base: l,
                l_fiber: l,
                max_boxes: cap,
                ..Default::default()
            };
            let r = verify_axiom_a(&m, &cfg);
            ensure(
                r.verdict == Verdict::NotVerifiedAtResolution,
                format!("parabolic base verified at level {n} with L {l}"),
            )?;
            biggest = biggest.max(r.peak_boxes());
            runs += 1;
        }
        // parabolic fiber: w² - 3/4 over the Cantor base of z² + 2
        let m = SkewMap::real(2.0, 0.0, 0.0, -0.75);
        for w in 2..=7 {
            let cfg = VerifyConfig {
                n_start: 7,
                n_max: 7,
                m_start: w,
                m_max: w,
                l_base: LChoice::Auto,
                l_fiber: l,
                max_boxes: cap,
                ..Default::default()
            };
            let r = verify_axiom_a(&m, &cfg);
            ensure(
                r.verdict == Verdict::NotVerifiedAtResolution,
                format!("parabolic fiber verified at w level {w} with L {l}"),
            )?;
            ensure(r.condition1.passed(), "Cantor base not certified")?;
            biggest = biggest.max(r.peak_boxes());
            runs += 1;
        }
    }
    Ok(format!(
        "{runs} runs, all NOT_VERIFIED_AT_RESOLUTION (peak {biggest} boxes, cap {cap})"
    ))
}

fn criterion_6(runs: &Runs) -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut certs = 0;
    let mut edges = 0;
    for (r, _) in [&runs.quadratic, &runs.cantor, &runs.shifted, &runs.rabbit] {
        for s in r.stages() {
            let Some(cert) = s.certificate().filter(|c| c.validated) else {
                continue;
            };
            let wc = vertex_weights(&s.model, cert.component, &r.map, s.kind());
            let bad = exact_recheck(&s.model, cert, &wc.weights, 1000, &mut rng);
            ensure(
                bad == 0,
                format!("{bad} exact violations in a {:?} certificate", s.tier),
            )?;
            certs += 1;
            edges += 1000;
        }
    }
    Ok(format!(
        "{certs} certificates, {edges} sampled edges, 0 violations"
    ))
}

fn criterion_7() -> Check {
    let s = metric_oracle(200, 7)?;
    Ok(format!(
        "{} graphs, {} verdicts ({} feasible), 0 disagreements, {} inside the 1e-12 margin",
        s.graphs, s.checks, s.feasible, s.within_margin
    ))
}

fn criterion_8() -> Check {
    for (i, op) in FUZZ_OPS.iter().enumerate() {
        fuzz_op(op, 100_000, 800 + i as u64)?;
    }
    Ok(format!("{} operations x 100000 samples", FUZZ_OPS.len()))
}

fn criterion_9(runs: &Runs) -> Check {
    let (r, _) = &runs.cantor;
    let beta = Complex::new(0.5, 1.32288);
    // fixed points of z² + 2 are (1 ± i√7) / 2
    ensure(
        (7f64.sqrt() / 2.0 - beta.im).abs() < 1e-5,
        "0.5+1.32288i is not a fixed point to 5 decimals",
    )?;
    let base = &r.condition1;
    let jp = base.selected.ok_or("no J_p")?;
    let in_jp = base.model.components[jp]
        .boxes
        .iter()
        .any(|k| base.model.layout.z_box(k).contains(beta));
    ensure(in_jp, "the fixed point's cell is not in J_p")?;

    let stage = r.condition2.as_ref().unwrap();
    let spec = RenderSpec {
        selector: FiberSelector::Point(beta),
        size: 512,
        window: None,
    };
    let (ppm, slice) = render_ppm(&stage.model, &spec).map_err(|e| e.to_string())?;
    ensure(
        slice.component_count() == 2,
        format!("{} components in the column", slice.component_count()),
    )?;
    let g = slice.wgrid;
    let center = |c: skewaxiom::boxgraph::Cell| g.cell_box(c).center();
    let ids: Vec<usize> = slice.palette.keys().copied().collect();
    let count = |id: usize| slice.cells_of(id).count();
    let (ring, cluster) = if count(ids[0]) >= count(ids[1]) {
        (ids[0], ids[1])
    } else {
        (ids[1], ids[0])
    };
    let radius = |id: usize| -> Vec<f64> { slice.cells_of(id).map(|c| center(c).norm()).collect() };
    let ring_min = radius(ring).into_iter().fold(f64::INFINITY, f64::min);
    let cluster_max = radius(cluster).into_iter().fold(0.0, f64::max);
    let mut octants = [false; 8];
    for c in slice.cells_of(ring) {
        let p = center(c);
        let a = p.im.atan2(p.re) + std::f64::consts::PI;
        octants[((a / std::f64::consts::FRAC_PI_4) as usize).min(7)] = true;
    }
    let origin_cells = g.cells_meeting_box(&ComplexBox::point(Complex::ZERO));
    let hole = origin_cells
        .iter()
        .all(|c| slice.cells.get(c) != Some(&ring));
    ensure(
        octants.iter().all(|&o| o),
        "ring does not surround the origin",
    )?;
    ensure(hole, "ring covers the origin")?;
    ensure(cluster_max < ring_min, "cluster is not inside the ring")?;
    Ok(format!(
        "2 components: ring of {} cells (|w| >= {ring_min:.3}) around a cluster of {} cells (|w| <= {cluster_max:.3}); {} byte image",
        count(ring),
        count(cluster),
        ppm.len()
    ))
}

fn peak_rss_mb() -> Option<f64> {
    let s = std::fs::read_to_string("/proc/self/status").ok()?;
    let line = s.lines().find(|l| l.starts_with("VmHWM:"))?;
    let kb: f64 = line.split_whitespace().nth(1)?.parse().ok()?;
    Some(kb / 1024.0)
}

fn main() {
    let t0 = Instant::now();
    let runs = Runs::new();
    let criteria: Vec<(u32, Box<dyn Fn() -> Check + '_>)> = vec![
        (1, Box::new(|| criterion_1(&runs))),
        (2, Box::new(|| criterion_2(&runs))),
        (3, Box::new(|| criterion_3(&runs))),
        (4, Box::new(|| criterion_4(&runs))),
        (5, Box::new(criterion_5)),
        (6, Box::new(|| criterion_6(&runs))),
        (7, Box::new(criterion_7)),
        (8, Box::new(criterion_8)),
        (9, Box::new(|| criterion_9(&runs))),
    ];
    let mut failed = 0;
    for (n, check) in &criteria {
        let result =
            catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|_| Err("panicked".into()));
        match result {
            Ok(detail) => println!("criterion {n}: PASS  {detail}"),
            Err(why) => {
                failed += 1;
                println!("criterion {n}: FAIL  {why}");
            }
        }
    }
    println!(
        "acceptance: {} of {} criteria pass in {:.1}s, peak memory {}",
        criteria.len() - failed,
        criteria.len(),
        t0.elapsed().as_secs_f64(),
        peak_rss_mb().map_or("unknown".into(), |m| format!("{m:.0} MB"))
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
