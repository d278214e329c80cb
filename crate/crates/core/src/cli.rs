//! The `skewaxiom` command line.
//!
//! Exit codes: 0 when the action completed (and, for `verify`, the map was
//! certified), 2 when a map was not verified at the resolution reached, 1 on
//! usage or I/O errors.

use std::ffi::OsString;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand};

use crate::boxgraph::{load, model_from_str, model_to_string, Cell, ChainModel, MODEL_HEADER};
use crate::dynamics::{
    gen_interpolating, gen_prop31, map_from_str, map_to_string, Prop31Caps, SkewMap, MAP_HEADER,
};
use crate::expansion::{certificate_from_str, CERT_HEADER};
use crate::render::{render_fiber, FiberSelector, RenderSpec, Window};
use crate::rigor::Complex;
use crate::verifier::{
    build_models_from, verify_axiom_a, verify_axiom_a_from_model, Verdict, VerifyConfig,
    REPORT_HEADER,
};
use crate::Error;

pub const EXIT_OK: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_NOT_VERIFIED: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "skewaxiom",
    version,
    about = "Axiom A certificates for quadratic skew products"
)]
struct Cli {
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run the full three-condition test and write report, models and certificates.
    Verify(RunArgs),
    /// Build the base and fiber models at the starting levels only.
    Build(RunArgs),
    /// Render the fiber slice of a fibered model as a PPM image.
    Render(RenderArgs),
    /// Write a coefficient file for one of the map families.
    Generate {
        #[command(subcommand)]
        family: Family,
    },
    /// Summarize a model, certificate, map or report file.
    Inspect { path: PathBuf },
}

#[derive(Debug, Args)]
struct RunArgs {
    /// Coefficients, e.g. `a=0,b=0.1,c=0.01,e=1.4+0.75i`; missing ones are 0.
    #[arg(long, allow_hyphen_values = true)]
    map: Option<String>,
    /// A SKEWMAP coefficient file.
    #[arg(long)]
    map_file: Option<PathBuf>,
    /// Start from a saved base model; the map is taken from the model.
    #[arg(long)]
    from_model: Option<PathBuf>,
    /// `key=value` lines with the same keys as the flags; flags win.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Starting z-grid level n (2^n cells per side); raises the max if needed.
    #[arg(long)]
    zgrid: Option<String>,
    /// Deepest z-grid level refinement may reach.
    #[arg(long)]
    zgrid_max: Option<String>,
    /// Starting w-grid level m; raises the max if needed.
    #[arg(long)]
    wgrid: Option<String>,
    /// Deepest w-grid level refinement may reach.
    #[arg(long)]
    wgrid_max: Option<String>,
    /// Expansion constant for every stage: a number > 1 or `auto`.
    #[arg(long = "L")]
    l: Option<String>,
    /// Expansion constant for the base stage only.
    #[arg(long = "L-base")]
    l_base: Option<String>,
    /// Expansion constant for the fiber stages only.
    #[arg(long = "L-fiber")]
    l_fiber: Option<String>,
    /// `R1,R2` or `auto`.
    #[arg(long)]
    bounds: Option<String>,
    /// Extra enlargement of every image box before intersecting (default 0).
    #[arg(long)]
    delta: Option<String>,
    /// Padding added to the computed escape radii (default 0.1).
    #[arg(long)]
    margin: Option<String>,
    /// Box cap for any one model (default 2^24).
    #[arg(long)]
    max_boxes: Option<String>,
    /// Wall-clock cap in seconds (default 3600).
    #[arg(long)]
    max_seconds: Option<String>,
    /// `true` or `false`: retry a failed fixed L just below the feasible supremum.
    #[arg(long = "retry-smaller-L")]
    retry_smaller_l: Option<String>,
    /// Output directory (default `out`).
    #[arg(long)]
    out_dir: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct RenderArgs {
    /// A fibered model file.
    #[arg(long)]
    model: PathBuf,
    /// Render the column of z-cells containing this point.
    #[arg(long, allow_hyphen_values = true, conflicts_with = "zcell")]
    z: Option<String>,
    /// Render one z-cell, given as `row,col`.
    #[arg(long)]
    zcell: Option<String>,
    /// Image width and height in pixels.
    #[arg(long, default_value_t = 512)]
    size: u32,
    /// `re_min,re_max,im_min,im_max`; defaults to the full w-domain.
    #[arg(long, allow_hyphen_values = true)]
    window: Option<String>,
    /// Output PPM path.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Debug, Subcommand)]
enum Family {
    /// `(z² − R, w² + (z + a)/S + c)` with a Cantor base and fibers near `w² + c`.
    Prop31 {
        #[arg(long, allow_hyphen_values = true)]
        c: String,
        /// Distance from `c` to the boundary of its hyperbolic component.
        #[arg(long)]
        sigma: f64,
        #[arg(long, default_value_t = Prop31Caps::default().r_max)]
        r_max: f64,
        #[arg(long, default_value_t = Prop31Caps::default().s_max)]
        s_max: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// `(z² − R, w² + l(z))` with `l` affine, `l(−a) = c1`, `l(a) = c2`.
    Interp {
        #[arg(long, allow_hyphen_values = true)]
        c1: String,
        #[arg(long, allow_hyphen_values = true)]
        c2: String,
        #[arg(long = "R")]
        r: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// Parse `args` (including the program name) and run. Returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_ERROR } else { EXIT_OK };
        }
    };
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
        {
            eprintln!("warning: {e}");
        }
    }
    let result = match cli.command {
        Command::Verify(a) => verify(a),
        Command::Build(a) => build(a),
        Command::Render(a) => render(a),
        Command::Generate { family } => generate(family),
        Command::Inspect { path } => inspect(&path),
    };
    result.unwrap_or_else(|e| {
        eprintln!("error: {e}");
        EXIT_ERROR
    })
}

fn invalid(msg: impl Into<String>) -> Error {
    Error::Invalid(msg.into())
}

/// `a=..,b=..,c=..,e=..`, any subset and order.
pub fn parse_map(s: &str) -> Result<SkewMap, Error> {
    let mut coef = [Complex::ZERO; 4];
    for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let (k, v) = part
            .split_once('=')
            .ok_or_else(|| invalid(format!("expected name=value in map, got {part:?}")))?;
        let slot = match k.trim() {
            "a" => 0,
            "b" => 1,
            "c" => 2,
            "e" => 3,
            other => return Err(invalid(format!("unknown coefficient {other:?}"))),
        };
        coef[slot] = parse_complex(v)?;
    }
    Ok(SkewMap::new(coef[0], coef[1], coef[2], coef[3]))
}

fn parse_complex(s: &str) -> Result<Complex, Error> {
    s.trim()
        .parse()
        .map_err(|_| invalid(format!("invalid complex number {s:?}")))
}

fn parse_floats<const N: usize>(s: &str, what: &str) -> Result<[f64; N], Error> {
    let v: Vec<f64> = s
        .split(',')
        .map(|p| p.trim().parse::<f64>())
        .collect::<Result<_, _>>()
        .map_err(|_| invalid(format!("invalid {what} {s:?}")))?;
    v.try_into()
        .map_err(|_| invalid(format!("{what} needs {N} comma-separated numbers")))
}

/// Options resolved from defaults, the config file and the flags, in that order.
struct Resolved {
    cfg: VerifyConfig,
    map: Option<SkewMap>,
    from_model: Option<ChainModel>,
    out_dir: PathBuf,
}

/// `key=value` lines; `#` starts a comment.
pub fn parse_config_file(text: &str) -> Result<Vec<(String, String)>, Error> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| invalid(format!("config line {}: expected key=value", i + 1)))?;
        out.push((k.trim().to_string(), v.trim().to_string()));
    }
    Ok(out)
}

fn resolve(a: RunArgs) -> Result<Resolved, Error> {
    let mut pairs = match &a.config {
        Some(p) => parse_config_file(&std::fs::read_to_string(p)?)?,
        None => Vec::new(),
    };
    let flags = [
        ("map", a.map),
        ("map-file", a.map_file.map(|p| p.display().to_string())),
        ("from-model", a.from_model.map(|p| p.display().to_string())),
        ("out-dir", a.out_dir.map(|p| p.display().to_string())),
        ("zgrid", a.zgrid),
        ("zgrid-max", a.zgrid_max),
        ("wgrid", a.wgrid),
        ("wgrid-max", a.wgrid_max),
        ("L", a.l),
        ("L-base", a.l_base),
        ("L-fiber", a.l_fiber),
        ("bounds", a.bounds),
        ("delta", a.delta),
        ("margin", a.margin),
        ("max-boxes", a.max_boxes),
        ("max-seconds", a.max_seconds),
        ("retry-smaller-L", a.retry_smaller_l),
    ];
    pairs.extend(
        flags
            .into_iter()
            .filter_map(|(k, v)| v.map(|v| (k.to_string(), v))),
    );

    let mut cfg = VerifyConfig::default();
    let mut map_text = None;
    let mut map_file = None;
    let mut model_file = None;
    let mut out_dir = PathBuf::from("out");
    for (k, v) in pairs {
        match k.as_str() {
            "map" => map_text = Some(v),
            "map-file" => map_file = Some(PathBuf::from(v)),
            "from-model" => model_file = Some(PathBuf::from(v)),
            "out-dir" => out_dir = PathBuf::from(v),
            _ => cfg.set(&k, &v).map_err(Error::Invalid)?,
        }
    }
    cfg.validate().map_err(Error::Invalid)?;

    let mut map = match (map_text, map_file) {
        (Some(_), Some(_)) => return Err(invalid("give either --map or --map-file, not both")),
        (Some(t), None) => Some(parse_map(&t)?),
        (None, Some(p)) => Some(map_from_str(&std::fs::read_to_string(p)?)?.0),
        (None, None) => None,
    };
    let from_model = match model_file {
        Some(p) => {
            let model = load(p)?;
            if model.layout.is_fibered() {
                return Err(invalid(
                    "--from-model needs a base model, not a fiber model",
                ));
            }
            let mm = model.provenance.map;
            if map.is_some_and(|m| m != mm) {
                return Err(invalid("the model was built for a different map"));
            }
            map = Some(mm);
            Some(model)
        }
        None => None,
    };
    Ok(Resolved {
        cfg,
        map,
        from_model,
        out_dir,
    })
}

fn verify(a: RunArgs) -> Result<i32, Error> {
    let r = resolve(a)?;
    let t0 = Instant::now();
    let report = match (r.from_model, r.map) {
        (Some(model), _) => verify_axiom_a_from_model(model, &r.cfg),
        (None, Some(m)) => verify_axiom_a(&m, &r.cfg),
        (None, None) => {
            return Err(invalid(
                "one of --map, --map-file or --from-model is required",
            ))
        }
    };
    let files = report.write_artifacts(&r.out_dir)?;
    print!("{}", report.to_text());
    eprintln!(
        "{} files written to {} in {:.1}s",
        files.len(),
        r.out_dir.display(),
        t0.elapsed().as_secs_f64()
    );
    Ok(match report.verdict {
        Verdict::AxiomAVerified => EXIT_OK,
        Verdict::NotVerifiedAtResolution => {
            if let Some(stage) = report.blocking_stage() {
                eprintln!("not verified: blocked at {stage}");
            }
            EXIT_NOT_VERIFIED
        }
    })
}

fn write_model(dir: &Path, stem: &str, model: &ChainModel) -> Result<(), Error> {
    let path = dir.join(format!("{stem}.bcrm"));
    std::fs::write(&path, model_to_string(model))?;
    let sizes: Vec<String> = model
        .sizes()
        .iter()
        .map(|(v, e)| format!("({v};{e})"))
        .collect();
    println!(
        "{}: {} components {}",
        path.display(),
        sizes.len(),
        sizes.join(" ")
    );
    Ok(())
}

fn build(a: RunArgs) -> Result<i32, Error> {
    let r = resolve(a)?;
    let Some(m) = r.map else {
        return Err(invalid(
            "one of --map, --map-file or --from-model is required",
        ));
    };
    let built = match build_models_from(&m, &r.cfg, r.from_model) {
        Ok(b) => b,
        Err(cap) => {
            eprintln!("not built: {cap}");
            return Ok(EXIT_NOT_VERIFIED);
        }
    };
    std::fs::create_dir_all(&r.out_dir)?;
    write_model(&r.out_dir, "base", &built.base)?;
    for (tier, c, model) in &built.fibers {
        let stem = match tier {
            crate::boxgraph::Tier::FiberOverJp => "fiber_jp".to_string(),
            _ => format!("fiber_ap{c}"),
        };
        write_model(&r.out_dir, &stem, model)?;
    }
    match built.selection {
        Ok(sel) => {
            println!(
                "J_p component {}, A_p candidates {:?}",
                sel.jp, sel.ap_candidates
            );
            Ok(EXIT_OK)
        }
        Err(e) => {
            eprintln!("no fiber models: {e}");
            Ok(EXIT_NOT_VERIFIED)
        }
    }
}

fn render(a: RenderArgs) -> Result<i32, Error> {
    let selector = match (a.z, a.zcell) {
        (Some(z), None) => FiberSelector::Point(parse_complex(&z)?),
        (None, Some(c)) => FiberSelector::Cell(
            c.parse::<Cell>()
                .map_err(|_| invalid(format!("invalid z-cell {c:?}, expected row,col")))?,
        ),
        _ => return Err(invalid("give exactly one of --z or --zcell")),
    };
    let window = match a.window {
        Some(w) => {
            let [x0, x1, y0, y1] = parse_floats::<4>(&w, "window")?;
            Some(Window {
                re: (x0, x1),
                im: (y0, y1),
            })
        }
        None => None,
    };
    let model = load(&a.model)?;
    let spec = RenderSpec {
        selector,
        size: a.size,
        window,
    };
    let slice = render_fiber(&model, &spec, &a.out)?;
    println!(
        "{}: {} z-cells, {} w-cells, {} components",
        a.out.display(),
        slice.zcells.len(),
        slice.cells.len(),
        slice.component_count()
    );
    for (id, level) in &slice.palette {
        println!(
            "component {id} gray {level} cells {}",
            slice.cells_of(*id).count()
        );
    }
    Ok(EXIT_OK)
}

fn emit(text: String, out: Option<PathBuf>) -> Result<i32, Error> {
    match out {
        Some(p) => {
            std::fs::write(&p, text)?;
            eprintln!("wrote {}", p.display());
        }
        None => print!("{text}"),
    }
    Ok(EXIT_OK)
}

fn generate(f: Family) -> Result<i32, Error> {
    match f {
        Family::Prop31 {
            c,
            sigma,
            r_max,
            s_max,
            out,
        } => {
            let c = parse_complex(&c)?;
            let (m, p) = gen_prop31(c, sigma, Prop31Caps { r_max, s_max })?;
            let notes = vec![
                format!("family prop31 c={c} sigma={sigma}"),
                format!("R={} S={} a={}", p.r, p.s, p.a_shift),
                format!("alpha={} beta={} eta={}", p.alpha, p.beta, p.eta),
            ];
            emit(map_to_string(&m, &notes), out)
        }
        Family::Interp { c1, c2, r, out } => {
            let (c1, c2) = (parse_complex(&c1)?, parse_complex(&c2)?);
            let g = gen_interpolating(c1, c2, r)?;
            let m = g.map;
            let notes = vec![
                format!("family interp c1={c1} c2={c2} R={r} a={}", g.a_shift),
                format!("a={} b={} c={} e={}", m.a, m.b, m.c, m.e),
            ];
            emit(map_to_string(&m, &notes), out)
        }
    }
}

fn inspect(path: &Path) -> Result<i32, Error> {
    let text = std::fs::read_to_string(path)?;
    let header = text.lines().next().unwrap_or("");
    if header == MODEL_HEADER {
        let model = model_from_str(&text)?;
        let l = model.layout;
        let m = model.provenance.map;
        println!("model for a={} b={} c={} e={}", m.a, m.b, m.c, m.e);
        print!(
            "z-grid level {} R={}",
            l.zgrid.level(),
            l.zgrid.half_width()
        );
        match l.wgrid {
            Some(w) => println!(", w-grid level {} R={}", w.level(), w.half_width()),
            None => println!(),
        }
        println!(
            "delta {} dropped-sources {}",
            model.provenance.delta, model.provenance.dropped
        );
        println!(
            "{} components, {} boxes, {} edges",
            model.components.len(),
            model.box_count(),
            model.edge_count()
        );
        for c in &model.components {
            println!(
                "component {} (V;E)=({};{})",
                c.id,
                c.vertex_count(),
                c.edge_count()
            );
        }
    } else if header == CERT_HEADER {
        let c = certificate_from_str(&text)?;
        println!(
            "certificate component {} kind {:?} L={} validated={}",
            c.component, c.kind, c.l, c.validated
        );
        println!(
            "{} constants, phi range [{}, {}] average {}",
            c.phi.len(),
            c.stats.min,
            c.stats.max,
            c.stats.avg
        );
    } else if header == MAP_HEADER {
        let (m, notes) = map_from_str(&text)?;
        println!("map a={} b={} c={} e={}", m.a, m.b, m.c, m.e);
        for n in notes {
            println!("note {n}");
        }
    } else if header == REPORT_HEADER {
        for line in text.lines().filter(|l| {
            l.starts_with("map ") || l.starts_with("blocking-stage") || l.starts_with("VERDICT")
        }) {
            println!("{line}");
        }
    } else {
        return Err(invalid(format!(
            "{}: unrecognized file type",
            path.display()
        )));
    }
    Ok(EXIT_OK)
}
