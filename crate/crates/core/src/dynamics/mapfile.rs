//! `SKEWMAP v1`: exact coefficient files.
//!
//! ```text
//! SKEWMAP v1
//! a <re> <im>
//! b <re> <im>
//! c <re> <im>
//! e <re> <im>
//! note <free text>          (any number)
//! crc32 <hex>
//! ```

use std::fmt::Write as _;

use super::skew::SkewMap;
use crate::rigor::Complex;
use crate::textfmt::{format_hex, seal, unseal, FormatError, Lines};

pub const MAP_HEADER: &str = "SKEWMAP v1";

pub fn map_to_string(m: &SkewMap, notes: &[String]) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{MAP_HEADER}");
    for (tag, c) in [("a", m.a), ("b", m.b), ("c", m.c), ("e", m.e)] {
        let _ = writeln!(out, "{tag} {} {}", format_hex(c.re), format_hex(c.im));
    }
    for n in notes {
        for line in n.lines() {
            let _ = writeln!(out, "note {line}");
        }
    }
    seal(out)
}

/// The map and its note lines.
pub fn map_from_str(text: &str) -> Result<(SkewMap, Vec<String>), FormatError> {
    let mut lines = Lines::new(unseal(text)?);
    let header = lines.next_line()?;
    if header != MAP_HEADER {
        return Err(FormatError::Version {
            expected: MAP_HEADER.into(),
            found: header.into(),
        });
    }
    let mut coef = [Complex::ZERO; 4];
    for (slot, tag) in coef.iter_mut().zip(["a", "b", "c", "e"]) {
        let w = lines.expect(tag)?;
        let [re, im] = w.as_slice() else {
            return Err(lines.err(format!("`{tag}` needs real and imaginary parts")));
        };
        *slot = Complex::new(lines.float(re)?, lines.float(im)?);
        if !(slot.re.is_finite() && slot.im.is_finite()) {
            return Err(lines.err("coefficients must be finite"));
        }
    }
    let mut notes = Vec::new();
    while !lines.is_done() {
        let l = lines.next_line()?;
        match l.strip_prefix("note") {
            Some(rest) if rest.is_empty() || rest.starts_with(' ') => {
                notes.push(rest.strip_prefix(' ').unwrap_or(rest).to_string())
            }
            _ => return Err(lines.err("expected `note` line")),
        }
    }
    Ok((SkewMap::new(coef[0], coef[1], coef[2], coef[3]), notes))
}
