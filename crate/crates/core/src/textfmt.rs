//! Helpers shared by the line-oriented file formats: exact hexadecimal
//! float encoding and CRC32 trailers.

use std::fmt::Write as _;

use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FormatError {
    #[error("unsupported header {found:?}, expected {expected:?}")]
    Version { expected: String, found: String },
    #[error("line {line}: {msg}")]
    Malformed { line: usize, msg: String },
    #[error("checksum mismatch: file says {stored:08x}, content hashes to {computed:08x}")]
    Checksum { stored: u32, computed: u32 },
    #[error("missing crc32 trailer")]
    MissingChecksum,
}

/// Format a float as a C99-style hex literal (`0x1.8p+1`), exactly.
pub fn format_hex(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let bits = x.to_bits();
    let sign = if bits >> 63 == 1 { "-" } else { "" };
    let exp = ((bits >> 52) & 0x7ff) as i64;
    let mant = bits & ((1u64 << 52) - 1);
    if exp == 0 && mant == 0 {
        return format!("{sign}0x0p+0");
    }
    let (lead, e) = if exp == 0 {
        (0, -1022)
    } else {
        (1, exp - 1023)
    };
    let mut digits = format!("{mant:013x}");
    while digits.ends_with('0') {
        digits.pop();
    }
    let mut s = String::with_capacity(24);
    let _ = write!(s, "{sign}0x{lead}");
    if !digits.is_empty() {
        s.push('.');
        s.push_str(&digits);
    }
    let _ = write!(s, "p{e:+}");
    s
}

/// Parse the output of [`format_hex`]. Decimal literals are accepted too.
pub fn parse_hex(s: &str) -> Option<f64> {
    let t = s.trim();
    match t {
        "nan" => return Some(f64::NAN),
        "inf" => return Some(f64::INFINITY),
        "-inf" => return Some(f64::NEG_INFINITY),
        _ => {}
    }
    let (neg, body) = match t.strip_prefix('-') {
        Some(r) => (true, r),
        None => (false, t.strip_prefix('+').unwrap_or(t)),
    };
    let Some(body) = body.strip_prefix("0x").or_else(|| body.strip_prefix("0X")) else {
        return t.parse().ok();
    };
    let (mantissa, exp) = body.split_once(['p', 'P'])?;
    let exp: i64 = exp.parse().ok()?;
    let (int_part, frac_part) = mantissa.split_once('.').unwrap_or((mantissa, ""));
    if int_part.is_empty() || frac_part.len() > 13 {
        return None;
    }
    let lead = u64::from_str_radix(int_part, 16).ok()?;
    if lead > 1 {
        return None;
    }
    let frac = if frac_part.is_empty() {
        0
    } else {
        u64::from_str_radix(frac_part, 16).ok()? << (4 * (13 - frac_part.len()))
    };
    let bits = if lead == 0 {
        if frac == 0 {
            0
        } else if exp == -1022 {
            frac
        } else {
            return None;
        }
    } else {
        let biased = exp + 1023;
        if !(1..=2046).contains(&biased) {
            return None;
        }
        ((biased as u64) << 52) | frac
    };
    let v = f64::from_bits(bits);
    Some(if neg { -v } else { v })
}

/// Append the `crc32 <hex>` trailer covering everything written so far.
pub fn seal(mut body: String) -> String {
    let crc = crc32fast::hash(body.as_bytes());
    let _ = writeln!(body, "crc32 {crc:08x}");
    body
}

/// Verify and strip the trailer; returns the covered body.
pub fn unseal(text: &str) -> Result<&str, FormatError> {
    let trimmed = text.strip_suffix('\n').unwrap_or(text);
    let cut = trimmed.rfind('\n').map(|i| i + 1).unwrap_or(0);
    let last = &trimmed[cut..];
    let stored = last
        .strip_prefix("crc32 ")
        .ok_or(FormatError::MissingChecksum)?;
    let stored =
        u32::from_str_radix(stored.trim(), 16).map_err(|_| FormatError::MissingChecksum)?;
    let body = &text[..cut];
    let computed = crc32fast::hash(body.as_bytes());
    if stored != computed {
        return Err(FormatError::Checksum { stored, computed });
    }
    Ok(body)
}

/// Line cursor with 1-based line numbers for error messages.
pub struct Lines<'a> {
    inner: std::iter::Enumerate<std::str::Lines<'a>>,
    pub line: usize,
}

impl<'a> Lines<'a> {
    pub fn new(body: &'a str) -> Self {
        Lines {
            inner: body.lines().enumerate(),
            line: 0,
        }
    }

    pub fn next_line(&mut self) -> Result<&'a str, FormatError> {
        match self.inner.next() {
            Some((i, l)) => {
                self.line = i + 1;
                Ok(l)
            }
            None => Err(self.err("unexpected end of file")),
        }
    }

    /// Next line, split into words, with the first word required to be `tag`.
    pub fn expect(&mut self, tag: &str) -> Result<Vec<&'a str>, FormatError> {
        let l = self.next_line()?;
        let mut words = l.split_whitespace();
        match words.next() {
            Some(t) if t == tag => Ok(words.collect()),
            _ => Err(self.err(format!("expected `{tag}` line, found {l:?}"))),
        }
    }

    pub fn is_done(&mut self) -> bool {
        self.inner.clone().next().is_none()
    }

    pub fn err(&self, msg: impl Into<String>) -> FormatError {
        FormatError::Malformed {
            line: self.line,
            msg: msg.into(),
        }
    }

    pub fn float(&self, s: &str) -> Result<f64, FormatError> {
        parse_hex(s).ok_or_else(|| self.err(format!("bad float {s:?}")))
    }

    pub fn int<T: std::str::FromStr>(&self, s: &str) -> Result<T, FormatError> {
        s.parse()
            .map_err(|_| self.err(format!("bad integer {s:?}")))
    }
}
