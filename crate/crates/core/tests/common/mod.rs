//! Independent oracles shared by the integration tests: exact rational
//! arithmetic, brute-force cycle enumeration and a small cyclic core.
#![allow(dead_code)]

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use skewaxiom::boxgraph::{ChainModel, Csr};
use skewaxiom::dynamics::{DerivativeKind, SkewMap};
use skewaxiom::expansion::ExpansionCertificate;
use skewaxiom::rigor::{Complex, ComplexBox, Interval};

pub fn rat(x: f64) -> BigRational {
    BigRational::from_float(x).expect("finite float")
}

/// `lo <= x <= hi`, with infinite ends accepted.
pub fn encloses(lo: f64, hi: f64, x: &BigRational) -> bool {
    let lo_ok = lo == f64::NEG_INFINITY || (lo.is_finite() && rat(lo) <= *x);
    let hi_ok = hi == f64::INFINITY || (hi.is_finite() && *x <= rat(hi));
    lo_ok && hi_ok
}

pub fn encloses_iv(iv: &Interval, x: &BigRational) -> bool {
    encloses(iv.lo(), iv.hi(), x)
}

/// Floats spread over many binades, with occasional special values and
/// extreme exponents.
pub fn sample_f64(rng: &mut ChaCha8Rng) -> f64 {
    let sign = if rng.gen_bool(0.5) { -1.0 } else { 1.0 };
    match rng.gen_range(0..100) {
        0..=3 => 0.0,
        4..=7 => sign,
        8..=10 => sign * f64::from_bits(rng.gen_range(1..(1u64 << 52))),
        11..=13 => sign * rng.gen_range(1.0..2.0) * 2f64.powi(rng.gen_range(500..1020)),
        _ => sign * rng.gen_range(1.0..2.0) * 2f64.powi(rng.gen_range(-40..40)),
    }
}

/// A finite interval, sometimes a point, sometimes straddling zero.
pub fn sample_interval(rng: &mut ChaCha8Rng) -> Interval {
    let a = sample_f64(rng);
    match rng.gen_range(0..4) {
        0 => Interval::point(a),
        1 => Interval::spanning(-a.abs(), rng.gen_range(0.0..2.0) * a.abs()),
        _ => Interval::spanning(a, sample_f64(rng)),
    }
}

/// A float inside `iv`: an endpoint or an interior point.
pub fn point_in(rng: &mut ChaCha8Rng, iv: &Interval) -> f64 {
    match rng.gen_range(0..4) {
        0 => iv.lo(),
        1 => iv.hi(),
        _ => {
            let t: f64 = rng.gen();
            let x = iv.lo() + t * (iv.hi() - iv.lo());
            if x.is_finite() {
                x.clamp(iv.lo(), iv.hi())
            } else {
                iv.lo()
            }
        }
    }
}

pub fn sample_box(rng: &mut ChaCha8Rng) -> ComplexBox {
    ComplexBox::new(sample_interval(rng), sample_interval(rng))
}

pub fn point_in_box(rng: &mut ChaCha8Rng, b: &ComplexBox) -> Complex {
    Complex::new(point_in(rng, &b.re), point_in(rng, &b.im))
}

/// Exact squared distance from the closed rectangle to the origin.
pub fn exact_dist_sq(re: (f64, f64), im: (f64, f64)) -> BigRational {
    let axis = |lo: f64, hi: f64| {
        if lo > 0.0 {
            rat(lo)
        } else if hi < 0.0 {
            -rat(hi)
        } else {
            BigRational::zero()
        }
    };
    let (x, y) = (axis(re.0, re.1), axis(im.0, im.1));
    &x * &x + &y * &y
}

/// Exact lower bound of the derivative modulus squared over one model box:
/// `|2z|²` for the base, `|2w + b|² = 4·|w + b/2|²` for the fiber.
pub fn exact_derivative_sq(
    model: &ChainModel,
    comp: usize,
    v: usize,
    kind: DerivativeKind,
) -> BigRational {
    let key = model.components[comp].boxes[v];
    let pb = model.layout.product_box(&key);
    let four = BigRational::from_integer(BigInt::from(4));
    match kind {
        DerivativeKind::Base => {
            four * exact_dist_sq((pb.z.re.lo(), pb.z.re.hi()), (pb.z.im.lo(), pb.z.im.hi()))
        }
        DerivativeKind::Fiber => {
            let b = model.provenance.map.b;
            let half = BigRational::new(BigInt::from(1), BigInt::from(2));
            let shift =
                |lo: f64, hi: f64, c: f64| (rat(lo) + &half * rat(c), rat(hi) + &half * rat(c));
            let (x0, x1) = shift(pb.w.re.lo(), pb.w.re.hi(), b.re);
            let (y0, y1) = shift(pb.w.im.lo(), pb.w.im.hi(), b.im);
            let axis = |lo: &BigRational, hi: &BigRational| {
                if lo.is_positive() {
                    lo.clone()
                } else if hi.is_negative() {
                    -hi.clone()
                } else {
                    BigRational::zero()
                }
            };
            let (x, y) = (axis(&x0, &x1), axis(&y0, &y1));
            four * (&x * &x + &y * &y)
        }
    }
}

/// Re-check a certificate on `samples` random edges `(k, j)` in exact
/// rationals: `phi_j · m_k >= L · phi_k` with the weights the gate used, and
/// `m_k` itself below the exact infimum of the derivative modulus on box `k`.
/// Returns the number of violating edges.
pub fn exact_recheck(
    model: &ChainModel,
    cert: &ExpansionCertificate,
    weights: &[f64],
    samples: usize,
    rng: &mut ChaCha8Rng,
) -> usize {
    let g = &model.components[cert.component].graph;
    let edges: Vec<(usize, usize)> = g.edges().collect();
    if edges.is_empty() {
        return 0;
    }
    let l = rat(cert.l);
    let mut bad = 0;
    for _ in 0..samples {
        let (k, j) = edges[rng.gen_range(0..edges.len())];
        let m = rat(weights[k]);
        let bound_ok = &m * &m <= exact_derivative_sq(model, cert.component, k, cert.kind);
        let step_ok = rat(cert.phi[j]) * &m >= &l * rat(cert.phi[k]);
        if !(bound_ok && step_ok && cert.phi[k] > 0.0) {
            bad += 1;
        }
    }
    bad
}

/// All simple cycles of a small digraph, each listed from its smallest vertex.
pub fn simple_cycles(n: usize, edges: &[(usize, usize)]) -> Vec<Vec<usize>> {
    let mut adj = vec![Vec::new(); n];
    for &(a, b) in edges {
        adj[a].push(b);
    }
    fn dfs(
        s: usize,
        v: usize,
        adj: &[Vec<usize>],
        path: &mut Vec<usize>,
        on: &mut [bool],
        out: &mut Vec<Vec<usize>>,
    ) {
        for &u in &adj[v] {
            if u == s {
                out.push(path.clone());
            } else if u > s && !on[u] {
                on[u] = true;
                path.push(u);
                dfs(s, u, adj, path, on, out);
                path.pop();
                on[u] = false;
            }
        }
    }
    let mut out = Vec::new();
    for s in 0..n {
        let mut on = vec![false; n];
        on[s] = true;
        dfs(s, s, &adj, &mut vec![s], &mut on, &mut out);
    }
    out
}

/// Geometric mean of the vertex weights around a cycle.
pub fn geometric_mean(cycle: &[usize], w: &[f64]) -> f64 {
    let s: f64 = cycle.iter().map(|&v| w[v].ln()).sum();
    (s / cycle.len() as f64).exp()
}

/// Vertices on some cycle and the edges inside their strongly connected
/// components, by transitive closure. Vertices are renumbered densely.
pub fn small_cyclic_core(n: usize, edges: &[(usize, usize)]) -> (Vec<usize>, Vec<(usize, usize)>) {
    let mut reach = vec![vec![false; n]; n];
    for &(a, b) in edges {
        reach[a][b] = true;
    }
    for k in 0..n {
        for i in 0..n {
            if reach[i][k] {
                for j in 0..n {
                    if reach[k][j] {
                        reach[i][j] = true;
                    }
                }
            }
        }
    }
    let keep: Vec<usize> = (0..n).filter(|&v| reach[v][v]).collect();
    let index = |v: usize| keep.iter().position(|&u| u == v);
    let inner = edges
        .iter()
        .filter(|&&(a, b)| reach[a][a] && reach[b][a] && reach[a][b])
        .map(|&(a, b)| (index(a).unwrap(), index(b).unwrap()))
        .collect();
    (keep, inner)
}

pub fn csr(n: usize, edges: &[(usize, usize)]) -> Csr {
    let e: Vec<(u32, u32)> = edges.iter().map(|&(a, b)| (a as u32, b as u32)).collect();
    Csr::from_edges(n, &e)
}

/// Sample maps used across tests.
pub fn map_z2_small_coupling() -> SkewMap {
    SkewMap::real(0.0, 0.1, 0.01, 0.0)
}

pub fn map_cantor_base() -> SkewMap {
    SkewMap::real(2.0, 0.0, 0.1, 0.0)
}

/// Operations covered by [`fuzz_op`].
pub const FUZZ_OPS: &[&str] = &[
    "add_down_up",
    "mul_down_up",
    "div_down_up",
    "sqrt_down_up",
    "interval_add",
    "interval_sub",
    "interval_mul",
    "interval_sqr",
    "interval_sqrt",
    "interval_div_positive",
    "interval_inflate",
    "box_add",
    "box_mul",
    "box_sqr",
    "box_abs_bounds",
    "map_eval_f",
];

/// Directed pair: brackets the exact value, and is either exact or one ulp wide.
fn bracket(lo: f64, hi: f64, exact: &BigRational) -> bool {
    if !encloses(lo, hi, exact) {
        return false;
    }
    if lo.is_finite() && hi.is_finite() && lo.abs() > 1e-290 && hi.abs() > 1e-290 {
        return lo == hi || lo.next_up() == hi;
    }
    true
}

fn exact_sq(z: Complex) -> (BigRational, BigRational) {
    let (x, y) = (rat(z.re), rat(z.im));
    (
        &x * &x - &y * &y,
        BigRational::from_integer(BigInt::from(2)) * &x * &y,
    )
}

fn exact_mul(a: Complex, b: Complex) -> (BigRational, BigRational) {
    let (x, y, u, v) = (rat(a.re), rat(a.im), rat(b.re), rat(b.im));
    (&x * &u - &y * &v, &x * &v + &y * &u)
}

fn encloses_c(b: &ComplexBox, re: &BigRational, im: &BigRational) -> bool {
    encloses_iv(&b.re, re) && encloses_iv(&b.im, im)
}

/// Run `samples` random containment checks of one operation against exact
/// rational arithmetic. Returns the first counterexample.
pub fn fuzz_op(op: &str, samples: usize, seed: u64) -> Result<(), String> {
    use rand::SeedableRng;
    use skewaxiom::rigor::round::*;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for i in 0..samples {
        let ok = match op {
            "add_down_up" => {
                let (a, b) = (sample_f64(&mut rng), sample_f64(&mut rng));
                bracket(add_down(a, b), add_up(a, b), &(rat(a) + rat(b)))
            }
            "mul_down_up" => {
                let (a, b) = (sample_f64(&mut rng), sample_f64(&mut rng));
                bracket(mul_down(a, b), mul_up(a, b), &(rat(a) * rat(b)))
            }
            "div_down_up" => {
                let a = sample_f64(&mut rng);
                let d = sample_f64(&mut rng).abs();
                if d == 0.0 || !(a / d).is_finite() {
                    true
                } else {
                    let (lo, hi) = (div_down(a, d), div_up(a, d));
                    let ex = rat(a) / rat(d);
                    // tiny operands are widened unconditionally
                    if a.abs() < 1e-290 || d < 1e-290 {
                        encloses(lo, hi, &ex) && lo.next_up().next_up() >= hi
                    } else {
                        bracket(lo, hi, &ex)
                    }
                }
            }
            "sqrt_down_up" => {
                let x = sample_f64(&mut rng).abs();
                let (lo, hi) = (sqrt_down(x), sqrt_up(x));
                let ex = rat(x);
                lo >= 0.0
                    && rat(lo) * rat(lo) <= ex
                    && ex <= rat(hi) * rat(hi)
                    && (x < 1e-290 || lo == hi || lo.next_up() == hi)
            }
            "interval_add" | "interval_sub" | "interval_mul" => {
                let (a, b) = (sample_interval(&mut rng), sample_interval(&mut rng));
                let (x, y) = (rat(point_in(&mut rng, &a)), rat(point_in(&mut rng, &b)));
                match op {
                    "interval_add" => encloses_iv(&(a + b), &(x + y)),
                    "interval_sub" => encloses_iv(&(a - b), &(x - y)),
                    _ => encloses_iv(&(a * b), &(x * y)),
                }
            }
            "interval_sqr" => {
                let a = sample_interval(&mut rng);
                let x = rat(point_in(&mut rng, &a));
                encloses_iv(&a.sqr(), &(&x * &x))
            }
            "interval_sqrt" => {
                let a = sample_interval(&mut rng);
                let x = point_in(&mut rng, &a);
                match a.sqrt() {
                    None => a.hi() < 0.0,
                    Some(r) if x >= 0.0 => {
                        let ex = rat(x);
                        r.lo() >= 0.0
                            && rat(r.lo()) * rat(r.lo()) <= ex
                            && (r.hi() == f64::INFINITY || ex <= rat(r.hi()) * rat(r.hi()))
                    }
                    Some(r) => r.lo() >= 0.0,
                }
            }
            "interval_div_positive" => {
                let a = sample_interval(&mut rng);
                let d = sample_f64(&mut rng).abs();
                if d == 0.0 {
                    true
                } else {
                    let x = rat(point_in(&mut rng, &a));
                    encloses_iv(&a.div_positive(d), &(x / rat(d)))
                }
            }
            "interval_inflate" => {
                let a = sample_interval(&mut rng);
                let d = sample_f64(&mut rng).abs();
                let r = a.inflate(d);
                let (lo, hi) = (rat(a.lo()) - rat(d), rat(a.hi()) + rat(d));
                encloses_iv(&r, &lo) && encloses_iv(&r, &hi)
            }
            "box_add" | "box_mul" => {
                let (a, b) = (sample_box(&mut rng), sample_box(&mut rng));
                let (z, w) = (point_in_box(&mut rng, &a), point_in_box(&mut rng, &b));
                if op == "box_add" {
                    let s = a + b;
                    encloses_c(&s, &(rat(z.re) + rat(w.re)), &(rat(z.im) + rat(w.im)))
                } else {
                    let (re, im) = exact_mul(z, w);
                    encloses_c(&(a * b), &re, &im)
                }
            }
            "box_sqr" => {
                let a = sample_box(&mut rng);
                let z = point_in_box(&mut rng, &a);
                let (re, im) = exact_sq(z);
                encloses_c(&a.sqr(), &re, &im)
            }
            "box_abs_bounds" => {
                let a = sample_box(&mut rng);
                let z = point_in_box(&mut rng, &a);
                let (mig, mag) = a.abs_bounds();
                let n = rat(z.re) * rat(z.re) + rat(z.im) * rat(z.im);
                mig >= 0.0
                    && rat(mig) * rat(mig) <= n
                    && (mag == f64::INFINITY || n <= rat(mag) * rat(mag))
            }
            "map_eval_f" => {
                let c = |rng: &mut ChaCha8Rng| {
                    Complex::new(rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0))
                };
                let m = SkewMap::new(c(&mut rng), c(&mut rng), c(&mut rng), c(&mut rng));
                let side = |rng: &mut ChaCha8Rng| {
                    let a = rng.gen_range(-4.0..4.0);
                    Interval::spanning(a, a + rng.gen_range(0.0..0.5))
                };
                let zb = ComplexBox::new(side(&mut rng), side(&mut rng));
                let wb = ComplexBox::new(side(&mut rng), side(&mut rng));
                let (z, w) = (point_in_box(&mut rng, &zb), point_in_box(&mut rng, &wb));
                let img = m.eval_f(&skewaxiom::rigor::ProductBox::new(zb, wb));
                let (z2r, z2i) = exact_sq(z);
                let (w2r, w2i) = exact_sq(w);
                let (bwr, bwi) = exact_mul(m.b, w);
                let (czr, czi) = exact_mul(m.c, z);
                let pr = z2r + rat(m.a.re);
                let pi = z2i + rat(m.a.im);
                let qr = w2r + bwr + czr + rat(m.e.re);
                let qi = w2i + bwi + czi + rat(m.e.im);
                encloses_c(&img.z, &pr, &pi) && encloses_c(&img.w, &qr, &qi)
            }
            other => return Err(format!("unknown operation {other}")),
        };
        if !ok {
            return Err(format!("{op}: violation at sample {i} (seed {seed})"));
        }
    }
    Ok(())
}

/// Agreement counts from [`metric_oracle`].
#[derive(Debug, Default)]
pub struct OracleStats {
    pub graphs: usize,
    pub checks: usize,
    pub feasible: usize,
    pub within_margin: usize,
}

/// Compare `solve_metric` with brute-force cycle enumeration on `graphs`
/// random digraphs with at most 8 vertices. Each graph is reduced to its
/// cyclic core first, as the pipeline does. Feasible means every cycle has
/// geometric-mean weight above `L`; disagreements with `|ln gm - ln L|`
/// below 1e-12 are tolerated and counted.
pub fn metric_oracle(graphs: usize, seed: u64) -> Result<OracleStats, String> {
    use rand::SeedableRng;
    use skewaxiom::expansion::{
        max_feasible_l, solve_metric, validate_certificate, WeightedComponent,
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut stats = OracleStats::default();
    while stats.graphs < graphs {
        let n = rng.gen_range(1..=8);
        let p = rng.gen_range(0.15..0.6);
        let edges: Vec<(usize, usize)> = (0..n)
            .flat_map(|a| (0..n).map(move |b| (a, b)))
            .filter(|_| rng.gen_bool(p))
            .collect();
        let (keep, inner) = small_cyclic_core(n, &edges);
        if keep.is_empty() {
            continue;
        }
        stats.graphs += 1;
        let k = keep.len();
        let weights: Vec<f64> = (0..k)
            .map(|_| {
                if rng.gen_bool(0.05) {
                    0.0
                } else {
                    rng.gen_range(-1.5f64..1.5).exp()
                }
            })
            .collect();
        let cycles = simple_cycles(k, &inner);
        let gm_min = cycles
            .iter()
            .map(|c| {
                if c.iter().any(|&v| weights[v] == 0.0) {
                    0.0
                } else {
                    geometric_mean(c, &weights)
                }
            })
            .fold(f64::INFINITY, f64::min);
        let g = csr(k, &inner);
        let wc = WeightedComponent::new(0, DerivativeKind::Fiber, &g, weights.clone());

        match max_feasible_l(&wc) {
            Ok(sup) => {
                if (sup - gm_min).abs() > 1e-9 * gm_min.max(1.0) {
                    return Err(format!("max_feasible_l {sup} vs brute force {gm_min}"));
                }
            }
            Err(_) => {
                if gm_min != 0.0 {
                    return Err("zero weight reported off every cycle".into());
                }
            }
        }

        let mut ls: Vec<f64> = (0..4).map(|_| rng.gen_range(1.0001..3.0)).collect();
        if gm_min > 1.0 && gm_min.is_finite() {
            ls.extend([0.99 * gm_min, 1.01 * gm_min, gm_min]);
        }
        for l in ls.into_iter().filter(|&l| l > 1.0) {
            stats.checks += 1;
            let oracle = gm_min > l;
            let got = solve_metric(&wc, l);
            if let Ok(phi) = &got {
                stats.feasible += 1;
                if !validate_certificate(&wc, l, phi) {
                    return Err(format!("phi for L = {l} fails validation"));
                }
            }
            if got.is_ok() != oracle {
                if gm_min > 0.0 && (gm_min.ln() - l.ln()).abs() < 1e-12 {
                    stats.within_margin += 1;
                } else {
                    return Err(format!(
                        "n = {k}, edges {inner:?}, weights {weights:?}, L = {l}: solver {:?}, oracle feasible {oracle}",
                        got.map(|_| ())
                    ));
                }
            }
        }
    }
    Ok(stats)
}
