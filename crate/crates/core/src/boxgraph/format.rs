//! `BCRM v1`: line-oriented text encoding of a [`ChainModel`].
//!
//! ```text
//! BCRM v1
//! map <a.re> <a.im> <b.re> <b.im> <c.re> <c.im> <e.re> <e.im>
//! zgrid <half-width> <level>
//! wgrid <half-width> <level>        (or `wgrid none`)
//! delta <delta>
//! dropped <count>
//! created <unix-seconds>            (or `created none`)
//! components <count>
//! component <id> <V> <E>
//! v <row>,<col>                     (fibered: v <zrow>,<zcol>;<wrow>,<wcol>)
//! e <k> <j>                         (local vertex indices)
//! crc32 <hex>
//! ```
//!
//! All floats are hex literals, so a load reproduces the model bit for bit.

use std::fmt::Write as _;
use std::path::Path;

use super::graph::Csr;
use super::grid::Grid;
use super::model::{ChainModel, Component, Provenance};
use super::system::{BoxKey, Layout};
use crate::dynamics::SkewMap;
use crate::rigor::Complex;
use crate::textfmt::{format_hex, seal, unseal, FormatError, Lines};
use crate::Error;

pub const MODEL_HEADER: &str = "BCRM v1";

fn write_map(out: &mut String, m: &SkewMap) {
    let _ = write!(out, "map");
    for c in [m.a, m.b, m.c, m.e] {
        let _ = write!(out, " {} {}", format_hex(c.re), format_hex(c.im));
    }
    out.push('\n');
}

fn read_map(lines: &mut Lines<'_>) -> Result<SkewMap, FormatError> {
    let w = lines.expect("map")?;
    if w.len() != 8 {
        return Err(lines.err("map line needs 8 floats"));
    }
    let mut v = [0.0; 8];
    for (slot, s) in v.iter_mut().zip(&w) {
        *slot = lines.float(s)?;
    }
    Ok(SkewMap::new(
        Complex::new(v[0], v[1]),
        Complex::new(v[2], v[3]),
        Complex::new(v[4], v[5]),
        Complex::new(v[6], v[7]),
    ))
}

fn write_grid(out: &mut String, tag: &str, g: Option<Grid>) {
    match g {
        Some(g) => {
            let _ = writeln!(out, "{tag} {} {}", format_hex(g.half_width()), g.level());
        }
        None => {
            let _ = writeln!(out, "{tag} none");
        }
    }
}

fn read_grid(lines: &mut Lines<'_>, tag: &str) -> Result<Option<Grid>, FormatError> {
    let w = lines.expect(tag)?;
    match w.as_slice() {
        ["none"] => Ok(None),
        [r, n] => {
            let r = lines.float(r)?;
            let n: u32 = lines.int(n)?;
            if !(r > 0.0 && r.is_finite()) || n > super::grid::MAX_LEVEL {
                return Err(lines.err("invalid grid"));
            }
            Ok(Some(Grid::new(r, n)))
        }
        _ => Err(lines.err("grid line needs half-width and level")),
    }
}

/// Encode a model as text.
pub fn model_to_string(model: &ChainModel) -> String {
    let mut out = String::new();
    out.push_str(MODEL_HEADER);
    out.push('\n');
    write_map(&mut out, &model.provenance.map);
    write_grid(&mut out, "zgrid", Some(model.layout.zgrid));
    write_grid(&mut out, "wgrid", model.layout.wgrid);
    let _ = writeln!(out, "delta {}", format_hex(model.provenance.delta));
    let _ = writeln!(out, "dropped {}", model.provenance.dropped);
    match model.provenance.created {
        Some(t) => {
            let _ = writeln!(out, "created {t}");
        }
        None => out.push_str("created none\n"),
    }
    let _ = writeln!(out, "components {}", model.components.len());
    for c in &model.components {
        let _ = writeln!(
            out,
            "component {} {} {}",
            c.id,
            c.vertex_count(),
            c.edge_count()
        );
        for k in &c.boxes {
            let _ = writeln!(out, "v {k}");
        }
        for (k, j) in c.graph.edges() {
            let _ = writeln!(out, "e {k} {j}");
        }
    }
    seal(out)
}

/// Decode a model; checks header, structure and checksum.
pub fn model_from_str(text: &str) -> Result<ChainModel, FormatError> {
    let body = unseal(text)?;
    let mut lines = Lines::new(body);
    let header = lines.next_line()?;
    if header != MODEL_HEADER {
        return Err(FormatError::Version {
            expected: MODEL_HEADER.into(),
            found: header.into(),
        });
    }
    let map = read_map(&mut lines)?;
    let zgrid = read_grid(&mut lines, "zgrid")?.ok_or_else(|| lines.err("zgrid is required"))?;
    let wgrid = read_grid(&mut lines, "wgrid")?;
    let layout = Layout { zgrid, wgrid };
    let delta = match lines.expect("delta")?.as_slice() {
        [d] => lines.float(d)?,
        _ => return Err(lines.err("delta line")),
    };
    let dropped = match lines.expect("dropped")?.as_slice() {
        [d] => lines.int(d)?,
        _ => return Err(lines.err("dropped line")),
    };
    let created = match lines.expect("created")?.as_slice() {
        ["none"] => None,
        [t] => Some(lines.int(t)?),
        _ => return Err(lines.err("created line")),
    };
    let ncomp: usize = match lines.expect("components")?.as_slice() {
        [n] => lines.int(n)?,
        _ => return Err(lines.err("components line")),
    };
    let mut components = Vec::with_capacity(ncomp);
    for expect_id in 0..ncomp {
        let w = lines.expect("component")?;
        let [id, nv, ne] = w.as_slice() else {
            return Err(lines.err("component line needs id, V, E"));
        };
        let id: usize = lines.int(id)?;
        if id != expect_id {
            return Err(lines.err("component ids must be consecutive"));
        }
        let nv: usize = lines.int(nv)?;
        let ne: usize = lines.int(ne)?;
        let mut boxes = Vec::with_capacity(nv);
        for _ in 0..nv {
            let w = lines.expect("v")?;
            let key = match w.as_slice() {
                [k] => BoxKey::parse(k).ok_or_else(|| lines.err("bad cell id"))?,
                _ => return Err(lines.err("vertex line")),
            };
            if key.w.is_some() != layout.is_fibered() {
                return Err(lines.err("cell id does not match the grids"));
            }
            boxes.push(key);
        }
        if boxes.windows(2).any(|p| p[0] >= p[1]) {
            return Err(lines.err("vertices must be strictly sorted"));
        }
        let mut edges = Vec::with_capacity(ne);
        for _ in 0..ne {
            let w = lines.expect("e")?;
            let [k, j] = w.as_slice() else {
                return Err(lines.err("edge line"));
            };
            let (k, j): (u32, u32) = (lines.int(k)?, lines.int(j)?);
            if k as usize >= nv || j as usize >= nv {
                return Err(lines.err("edge endpoint out of range"));
            }
            edges.push((k, j));
        }
        let graph = Csr::from_edges(nv, &edges);
        if graph.edge_count() != ne {
            return Err(lines.err("duplicate edges"));
        }
        components.push(Component { id, boxes, graph });
    }
    if !lines.is_done() {
        let _ = lines.next_line();
        return Err(lines.err("trailing content"));
    }
    Ok(ChainModel {
        layout,
        provenance: Provenance {
            map,
            delta,
            dropped,
            created,
        },
        components,
    })
}

pub fn serialize(model: &ChainModel, path: impl AsRef<Path>) -> Result<(), Error> {
    std::fs::write(path, model_to_string(model))?;
    Ok(())
}

pub fn load(path: impl AsRef<Path>) -> Result<ChainModel, Error> {
    let text = std::fs::read_to_string(path)?;
    Ok(model_from_str(&text)?)
}
