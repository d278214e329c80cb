use std::fmt::{self, Write as _};
use std::path::{Path, PathBuf};

use super::config::VerifyConfig;
use super::pipeline::{Outcome, StageResult};
use crate::boxgraph::{model_to_string, Tier};
use crate::dynamics::SkewMap;
use crate::expansion::certificate_to_string;
use crate::textfmt::format_hex;

pub const REPORT_HEADER: &str = "AXIOMA-REPORT v1";

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    AxiomAVerified,
    /// The method certifies; it never refutes. Failure only means that no
    /// certificate was found within the caps.
    NotVerifiedAtResolution,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::AxiomAVerified => "AXIOM_A_VERIFIED",
            Verdict::NotVerifiedAtResolution => "NOT_VERIFIED_AT_RESOLUTION",
        })
    }
}

#[derive(Clone, Debug)]
pub struct AxiomAReport {
    pub map: SkewMap,
    pub config: VerifyConfig,
    /// `(R1, R2)` actually used.
    pub bounds: (f64, f64),
    /// Expansion of `p` on the component of J_p.
    pub condition1: StageResult,
    /// Vertical expansion over J_p; `None` if condition 1 failed.
    pub condition2: Option<StageResult>,
    /// Vertical expansion over each A_p candidate. `Some(empty)` means A_p
    /// is empty; `None` means the stage was not reached.
    pub condition3: Option<Vec<StageResult>>,
    pub verdict: Verdict,
    /// Wall-clock time; printed on the console only, never in the report file.
    pub seconds: f64,
}

/// File stem for a stage's model and certificate.
pub fn stage_stem(stage: &StageResult) -> String {
    match stage.tier {
        Tier::Base => "base".into(),
        Tier::FiberOverJp => "fiber_jp".into(),
        Tier::FiberOverAp => format!("fiber_ap{}", stage.base_component.unwrap_or(0)),
    }
}

impl AxiomAReport {
    pub fn stages(&self) -> Vec<&StageResult> {
        let mut v = vec![&self.condition1];
        v.extend(self.condition2.iter());
        v.extend(self.condition3.iter().flatten());
        v
    }

    pub fn compute_verdict(&self) -> Verdict {
        if self.blocking_stage().is_none() {
            Verdict::AxiomAVerified
        } else {
            Verdict::NotVerifiedAtResolution
        }
    }

    /// `"condition 1"`, `"condition 2"` or `"condition 3"` for the first
    /// stage without a validated certificate.
    pub fn blocking_stage(&self) -> Option<&'static str> {
        if !self.condition1.passed() {
            return Some("condition 1");
        }
        match &self.condition2 {
            Some(s) if s.passed() => {}
            _ => return Some("condition 2"),
        }
        match &self.condition3 {
            Some(v) if v.iter().all(|s| s.passed()) => None,
            _ => Some("condition 3"),
        }
    }

    /// Whether condition 3 holds because no A_p candidates exist.
    pub fn condition3_vacuous(&self) -> bool {
        matches!(&self.condition3, Some(v) if v.is_empty())
    }

    /// Re-run the rigorous gate on every certificate and recompute the verdict.
    pub fn revalidate(&mut self) -> Verdict {
        let m = self.map;
        self.condition1.revalidate(&m);
        if let Some(s) = &mut self.condition2 {
            s.revalidate(&m);
        }
        for s in self.condition3.iter_mut().flatten() {
            s.revalidate(&m);
        }
        self.verdict = self.compute_verdict();
        self.verdict
    }

    pub fn peak_boxes(&self) -> usize {
        self.stages()
            .iter()
            .map(|s| s.peak_boxes)
            .max()
            .unwrap_or(0)
    }

    /// Deterministic report text; excludes timings.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let m = &self.map;
        let _ = writeln!(out, "{REPORT_HEADER}");
        let _ = writeln!(out, "map a={} b={} c={} e={}", m.a, m.b, m.c, m.e);
        let hex: Vec<String> = [m.a, m.b, m.c, m.e]
            .iter()
            .flat_map(|c| [format_hex(c.re), format_hex(c.im)])
            .collect();
        let _ = writeln!(out, "map-hex {}", hex.join(" "));
        let _ = writeln!(
            out,
            "bounds R1={} R2={} ({} {})",
            self.bounds.0,
            self.bounds.1,
            format_hex(self.bounds.0),
            format_hex(self.bounds.1)
        );
        for (k, v) in self.config.to_pairs() {
            let _ = writeln!(out, "config {k}={v}");
        }
        let _ = writeln!(out, "peak-boxes {}", self.peak_boxes());
        out.push('\n');

        write_stage(
            &mut out,
            "condition 1: p expanding on J_p",
            Some(&self.condition1),
        );
        write_stage(
            &mut out,
            "condition 2: f vertically expanding over J_p",
            self.condition2.as_ref(),
        );
        match &self.condition3 {
            None => write_stage(
                &mut out,
                "condition 3: f vertically expanding over A_p",
                None,
            ),
            Some(v) if v.is_empty() => {
                let _ = writeln!(out, "[condition 3: f vertically expanding over A_p]");
                let _ = writeln!(
                    out,
                    "status vacuous (A_p empty: no base component besides J_p)\n"
                );
            }
            Some(v) => {
                for s in v {
                    let title = format!(
                        "condition 3: f vertically expanding over A_p candidate {}",
                        s.base_component.unwrap_or(0)
                    );
                    write_stage(&mut out, &title, Some(s));
                }
            }
        }
        let _ = writeln!(
            out,
            "blocking-stage {}",
            self.blocking_stage().unwrap_or("none")
        );
        let _ = writeln!(out, "VERDICT: {}", self.verdict);
        out
    }

    /// Write `report.txt`, every stage model and every certificate into `dir`.
    pub fn write_artifacts(&self, dir: impl AsRef<Path>) -> std::io::Result<Vec<PathBuf>> {
        let dir = dir.as_ref();
        std::fs::create_dir_all(dir)?;
        let mut written = Vec::new();
        for s in self.stages() {
            if matches!(s.outcome, Outcome::Failed { cap: None, .. }) {
                continue;
            }
            let stem = stage_stem(s);
            let p = dir.join(format!("{stem}.bcrm"));
            std::fs::write(&p, model_to_string(&s.model))?;
            written.push(p);
            if let Some(c) = s.certificate() {
                let p = dir.join(format!("{stem}.cert"));
                std::fs::write(&p, certificate_to_string(c))?;
                written.push(p);
            }
        }
        let p = dir.join("report.txt");
        std::fs::write(&p, self.to_text())?;
        written.push(p);
        Ok(written)
    }
}

fn write_stage(out: &mut String, title: &str, stage: Option<&StageResult>) {
    let _ = writeln!(out, "[{title}]");
    let Some(s) = stage else {
        let _ = writeln!(out, "status not reached\n");
        return;
    };
    let status = match &s.outcome {
        Outcome::Certified(c) if c.validated => "certified",
        Outcome::Certified(_) => "rejected",
        Outcome::Vacuous(_) => "vacuous",
        Outcome::Failed { .. } => "failed",
    };
    let _ = writeln!(out, "status {status}");
    let layout = s.model.layout;
    match layout.wgrid {
        Some(w) => {
            let _ = writeln!(
                out,
                "grid z-level={} w-level={}",
                layout.zgrid.level(),
                w.level()
            );
        }
        None => {
            let _ = writeln!(out, "grid z-level={}", layout.zgrid.level());
        }
    }
    if let Some(b) = s.base_component {
        let _ = writeln!(out, "over-base-component {b}");
    }
    let sizes: Vec<String> = s
        .model
        .sizes()
        .iter()
        .map(|(v, e)| format!("({v};{e})"))
        .collect();
    let _ = writeln!(out, "components {} {}", sizes.len(), sizes.join(" "));
    let _ = writeln!(out, "dropped-sources {}", s.model.provenance.dropped);
    if let Some(id) = s.selected {
        let c = &s.model.components[id];
        let _ = writeln!(
            out,
            "selected {id} (V;E)=({};{}){}",
            c.vertex_count(),
            c.edge_count(),
            if s.ambiguous { " ambiguous" } else { "" }
        );
    }
    if let Some(l) = s.max_feasible_l {
        let _ = writeln!(out, "max-feasible-L {l}");
    }
    if !s.tried_l.is_empty() {
        let t: Vec<String> = s.tried_l.iter().map(|l| l.to_string()).collect();
        let _ = writeln!(out, "tried-L {}", t.join(" "));
    }
    match &s.outcome {
        Outcome::Certified(c) => {
            let _ = writeln!(out, "L {} ({})", c.l, format_hex(c.l));
            let _ = writeln!(
                out,
                "phi range=[{}, {}] average={}",
                c.stats.min, c.stats.max, c.stats.avg
            );
            let _ = writeln!(out, "validated {}", c.validated);
            let stem = stage_stem(s);
            let _ = writeln!(out, "files {stem}.bcrm {stem}.cert");
        }
        Outcome::Vacuous(why) => {
            let _ = writeln!(out, "note {why}");
            let _ = writeln!(out, "files {}.bcrm", stage_stem(s));
        }
        Outcome::Failed { blocker, cap } => {
            let _ = writeln!(out, "blocker {blocker}");
            if let Some(cap) = cap {
                let _ = writeln!(out, "stopped-by {cap}");
                let _ = writeln!(out, "files {}.bcrm", stage_stem(s));
            }
        }
    }
    out.push('\n');
}
