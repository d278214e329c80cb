use std::fmt;
use std::str::FromStr;

use crate::dynamics::SkewMap;

/// How to pick an expansion constant.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum LChoice {
    /// Derived from the minimum cycle mean of the component.
    Auto,
    Fixed(f64),
}

impl fmt::Display for LChoice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LChoice::Auto => f.write_str("auto"),
            LChoice::Fixed(l) => write!(f, "{l}"),
        }
    }
}

impl FromStr for LChoice {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        if s.eq_ignore_ascii_case("auto") {
            return Ok(LChoice::Auto);
        }
        match s.parse::<f64>() {
            Ok(l) if l > 1.0 && l.is_finite() => Ok(LChoice::Fixed(l)),
            _ => Err(format!(
                "expansion constant must be `auto` or a number > 1, got {s:?}"
            )),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct VerifyConfig {
    pub n_start: u32,
    pub n_max: u32,
    pub m_start: u32,
    pub m_max: u32,
    pub l_base: LChoice,
    pub l_fiber: LChoice,
    pub delta: f64,
    pub margin: f64,
    /// Explicit `(R1, R2)` in place of the computed escape radii.
    pub bounds: Option<(f64, f64)>,
    pub max_boxes: u64,
    pub max_seconds: f64,
    /// After a failed fixed `L`, try again just below the feasible supremum.
    pub retry_smaller_l: bool,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            n_start: 5,
            n_max: 8,
            m_start: 4,
            m_max: 7,
            l_base: LChoice::Auto,
            l_fiber: LChoice::Auto,
            delta: 0.0,
            margin: 0.1,
            bounds: None,
            max_boxes: 1 << 24,
            max_seconds: 3600.0,
            retry_smaller_l: true,
        }
    }
}

/// Keys accepted by [`VerifyConfig::set`], in the order they are written.
pub const CONFIG_KEYS: &[&str] = &[
    "zgrid",
    "zgrid-max",
    "wgrid",
    "wgrid-max",
    "L-base",
    "L-fiber",
    "delta",
    "margin",
    "bounds",
    "max-boxes",
    "max-seconds",
    "retry-smaller-L",
];

fn parse<T: FromStr>(key: &str, v: &str) -> Result<T, String> {
    v.trim()
        .parse()
        .map_err(|_| format!("invalid value {v:?} for {key}"))
}

impl VerifyConfig {
    pub fn validate(&self) -> Result<(), String> {
        use crate::boxgraph::MAX_LEVEL;
        if self.n_start > self.n_max || self.m_start > self.m_max {
            return Err("start levels must not exceed max levels".into());
        }
        if self.n_max > MAX_LEVEL || self.m_max > MAX_LEVEL {
            return Err(format!("grid levels are limited to {MAX_LEVEL}"));
        }
        if !(self.delta >= 0.0 && self.delta.is_finite()) {
            return Err("delta must be a nonnegative number".into());
        }
        if !(self.margin > 0.0 && self.margin.is_finite()) {
            return Err("margin must be positive".into());
        }
        if let Some((r1, r2)) = self.bounds {
            if !(r1 > 0.0 && r2 > 0.0 && r1.is_finite() && r2.is_finite()) {
                return Err("bounds must be positive".into());
            }
        }
        if self.max_boxes == 0 || !(self.max_seconds > 0.0) {
            return Err("caps must be positive".into());
        }
        Ok(())
    }

    /// Half-widths of the z and w domains.
    pub fn domain(&self, m: &SkewMap) -> (f64, f64) {
        self.bounds.unwrap_or_else(|| {
            let r = m.escape_radii(self.margin);
            (r.r1, r.r2)
        })
    }

    /// Set one option from its config-file key. `zgrid` and `wgrid` also
    /// raise the matching maximum when it would fall below the start.
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), String> {
        match key {
            "zgrid" => {
                self.n_start = parse(key, value)?;
                self.n_max = self.n_max.max(self.n_start);
            }
            "zgrid-max" => self.n_max = parse(key, value)?,
            "wgrid" => {
                self.m_start = parse(key, value)?;
                self.m_max = self.m_max.max(self.m_start);
            }
            "wgrid-max" => self.m_max = parse(key, value)?,
            "L" => {
                self.l_base = parse(key, value)?;
                self.l_fiber = self.l_base;
            }
            "L-base" => self.l_base = parse(key, value)?,
            "L-fiber" => self.l_fiber = parse(key, value)?,
            "delta" => self.delta = parse(key, value)?,
            "margin" => self.margin = parse(key, value)?,
            "bounds" => {
                self.bounds = if value.trim() == "auto" {
                    None
                } else {
                    let (a, b) = value
                        .split_once(',')
                        .ok_or_else(|| format!("bounds must be R1,R2, got {value:?}"))?;
                    Some((parse(key, a)?, parse(key, b)?))
                }
            }
            "max-boxes" => self.max_boxes = parse(key, value)?,
            "max-seconds" => self.max_seconds = parse(key, value)?,
            "retry-smaller-L" => self.retry_smaller_l = parse(key, value)?,
            _ => return Err(format!("unknown option {key:?}")),
        }
        Ok(())
    }

    /// `key=value` pairs for every option, in [`CONFIG_KEYS`] order.
    pub fn to_pairs(&self) -> Vec<(&'static str, String)> {
        let bounds = match self.bounds {
            Some((a, b)) => format!("{a},{b}"),
            None => "auto".into(),
        };
        vec![
            ("zgrid", self.n_start.to_string()),
            ("zgrid-max", self.n_max.to_string()),
            ("wgrid", self.m_start.to_string()),
            ("wgrid-max", self.m_max.to_string()),
            ("L-base", self.l_base.to_string()),
            ("L-fiber", self.l_fiber.to_string()),
            ("delta", self.delta.to_string()),
            ("margin", self.margin.to_string()),
            ("bounds", bounds),
            ("max-boxes", self.max_boxes.to_string()),
            ("max-seconds", self.max_seconds.to_string()),
            ("retry-smaller-L", self.retry_smaller_l.to_string()),
        ]
    }
}
