//! `CERT v1`: text encoding of an [`ExpansionCertificate`].
//!
//! ```text
//! CERT v1
//! component <id> base|fiber
//! L <hex>
//! vertices <n>
//! phi <k> <hex>
//! validated true|false
//! stats <phi_min> <phi_max> <phi_avg>
//! crc32 <hex>
//! ```

use std::fmt::Write as _;
use std::path::Path;

use super::metric::{solve_metric, validate_certificate, MetricFailure, WeightedComponent};
use crate::dynamics::DerivativeKind;
use crate::textfmt::{format_hex, seal, unseal, FormatError, Lines};
use crate::Error;

pub const CERT_HEADER: &str = "CERT v1";

/// Range and arithmetic mean of the metric constants.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PhiStats {
    pub min: f64,
    pub max: f64,
    pub avg: f64,
}

impl PhiStats {
    pub fn of(phi: &[f64]) -> PhiStats {
        if phi.is_empty() {
            return PhiStats {
                min: 1.0,
                max: 1.0,
                avg: 1.0,
            };
        }
        PhiStats {
            min: phi.iter().copied().fold(f64::INFINITY, f64::min),
            max: phi.iter().copied().fold(f64::NEG_INFINITY, f64::max),
            avg: phi.iter().sum::<f64>() / phi.len() as f64,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExpansionCertificate {
    pub component: usize,
    pub kind: DerivativeKind,
    pub l: f64,
    /// One constant per component vertex, in the component's box order.
    pub phi: Vec<f64>,
    pub validated: bool,
    pub stats: PhiStats,
}

impl ExpansionCertificate {
    /// Recheck against `wc` and update the flag.
    pub fn revalidate(&mut self, wc: &WeightedComponent<'_>) -> bool {
        self.validated = validate_certificate(wc, self.l, &self.phi);
        self.validated
    }
}

/// Solve for a metric at `l` and pass it through the rigorous gate.
pub fn certify(wc: &WeightedComponent<'_>, l: f64) -> Result<ExpansionCertificate, MetricFailure> {
    let phi = solve_metric(wc, l)?;
    let validated = validate_certificate(wc, l, &phi);
    Ok(ExpansionCertificate {
        component: wc.id,
        kind: wc.kind,
        l,
        stats: PhiStats::of(&phi),
        phi,
        validated,
    })
}

fn kind_name(kind: DerivativeKind) -> &'static str {
    match kind {
        DerivativeKind::Base => "base",
        DerivativeKind::Fiber => "fiber",
    }
}

pub fn certificate_to_string(cert: &ExpansionCertificate) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{CERT_HEADER}");
    let _ = writeln!(out, "component {} {}", cert.component, kind_name(cert.kind));
    let _ = writeln!(out, "L {}", format_hex(cert.l));
    let _ = writeln!(out, "vertices {}", cert.phi.len());
    for (k, p) in cert.phi.iter().enumerate() {
        let _ = writeln!(out, "phi {k} {}", format_hex(*p));
    }
    let _ = writeln!(out, "validated {}", cert.validated);
    let s = cert.stats;
    let _ = writeln!(
        out,
        "stats {} {} {}",
        format_hex(s.min),
        format_hex(s.max),
        format_hex(s.avg)
    );
    seal(out)
}

fn single<'a>(lines: &Lines<'_>, w: &[&'a str]) -> Result<&'a str, FormatError> {
    match w {
        [x] => Ok(x),
        _ => Err(lines.err("expected one field")),
    }
}

pub fn certificate_from_str(text: &str) -> Result<ExpansionCertificate, FormatError> {
    let mut lines = Lines::new(unseal(text)?);
    let header = lines.next_line()?;
    if header != CERT_HEADER {
        return Err(FormatError::Version {
            expected: CERT_HEADER.into(),
            found: header.into(),
        });
    }
    let w = lines.expect("component")?;
    let (component, kind) = match w.as_slice() {
        [id, kind] => {
            let kind = match *kind {
                "base" => DerivativeKind::Base,
                "fiber" => DerivativeKind::Fiber,
                _ => return Err(lines.err("kind must be base or fiber")),
            };
            (lines.int(id)?, kind)
        }
        _ => return Err(lines.err("component line needs id and kind")),
    };
    let w = lines.expect("L")?;
    let l = lines.float(single(&lines, &w)?)?;
    let w = lines.expect("vertices")?;
    let n: usize = lines.int(single(&lines, &w)?)?;
    let mut phi = Vec::with_capacity(n);
    for k in 0..n {
        let w = lines.expect("phi")?;
        let [idx, v] = w.as_slice() else {
            return Err(lines.err("phi line needs index and value"));
        };
        if lines.int::<usize>(idx)? != k {
            return Err(lines.err("phi indices must be consecutive"));
        }
        phi.push(lines.float(v)?);
    }
    let w = lines.expect("validated")?;
    let validated = match single(&lines, &w)? {
        "true" => true,
        "false" => false,
        _ => return Err(lines.err("validated must be true or false")),
    };
    let w = lines.expect("stats")?;
    let [a, b, c] = w.as_slice() else {
        return Err(lines.err("stats line needs three values"));
    };
    let stats = PhiStats {
        min: lines.float(a)?,
        max: lines.float(b)?,
        avg: lines.float(c)?,
    };
    if !lines.is_done() {
        let _ = lines.next_line();
        return Err(lines.err("trailing content"));
    }
    Ok(ExpansionCertificate {
        component,
        kind,
        l,
        phi,
        validated,
        stats,
    })
}

pub fn save_certificate(cert: &ExpansionCertificate, path: impl AsRef<Path>) -> Result<(), Error> {
    std::fs::write(path, certificate_to_string(cert))?;
    Ok(())
}

pub fn load_certificate(path: impl AsRef<Path>) -> Result<ExpansionCertificate, Error> {
    Ok(certificate_from_str(&std::fs::read_to_string(path)?)?)
}
