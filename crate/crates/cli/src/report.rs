//! Text and JSON renderings of a [`Document`].

use std::fmt::Write as _;

use crate::run::{Document, RunStatus};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Text,
    Json,
}

pub fn emit(doc: &Document, format: Format) -> String {
    match format {
        Format::Text => to_text(doc),
        Format::Json => to_json(doc),
    }
}

pub fn to_json(doc: &Document) -> String {
    let mut s = serde_json::to_string_pretty(doc).expect("report values are finite");
    s.push('\n');
    s
}

pub fn from_json(text: &str) -> Result<Document, serde_json::Error> {
    serde_json::from_str(text)
}

fn sci(x: f64) -> String {
    format!("{x:.1e}")
}

/// Fixed-width table, then one block per refuted or failed scenario.
pub fn to_text(doc: &Document) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "{} {} (schema {}), moment scale {}",
        doc.toolkit, doc.version, doc.schema, doc.moment_scale
    );
    let _ = writeln!(out, "tolerances: {}", doc.tolerances);
    let name_w = doc.reports.iter().map(|r| r.name.len()).max().unwrap_or(4).max(4);
    let _ = writeln!(
        out,
        "{:<name_w$}  {:<11}  {:<24}  {:>7}  {:>6}  {:>8}  {:>8}  {:>9}  RESULT",
        "NAME", "PIPELINE", "VERDICT", "ORBIT", "MODULI", "OMEGA", "DEFECT", "WALL_MS"
    );
    for r in &doc.reports {
        let orbit = r.outcome.orbit();
        let dims = orbit
            .map(|o| format!("{}/{}", o.orbit_dim, o.half_dim))
            .unwrap_or_else(|| "-".into());
        let moduli = orbit
            .and_then(|o| o.moduli_dim)
            .map(|m| m.to_string())
            .unwrap_or_else(|| "-".into());
        let omega = orbit.map(|o| sci(o.omega_residual)).unwrap_or_else(|| "-".into());
        let defect = orbit.map(|o| sci(o.mu.central_defect)).unwrap_or_else(|| "-".into());
        let wall = r.wall_ms.map(|w| format!("{w:.1}")).unwrap_or_else(|| "-".into());
        let failed = r.failed_checks().count();
        let result = match r.status {
            RunStatus::Refuted => format!("REFUTED ({failed} diff)"),
            s => s.label().to_string(),
        };
        let _ = writeln!(
            out,
            "{:<name_w$}  {:<11}  {:<24}  {:>7}  {:>6}  {:>8}  {:>8}  {:>9}  {}",
            r.name,
            r.pipeline.as_str(),
            r.verdict,
            dims,
            moduli,
            omega,
            defect,
            wall,
            result
        );
    }
    for r in &doc.reports {
        match r.status {
            RunStatus::Refuted => {
                let _ = writeln!(out, "\n{}: refuted", r.name);
                for c in r.failed_checks() {
                    let _ = writeln!(out, "  {}: expected {}, actual {}", c.field, c.expected, c.actual);
                }
            }
            RunStatus::Error => {
                let _ = writeln!(out, "\n{}: error", r.name);
                let _ = writeln!(out, "  {}", r.error.as_deref().unwrap_or("unknown"));
            }
            _ => {}
        }
    }
    let count = |s: RunStatus| doc.reports.iter().filter(|r| r.status == s).count();
    let _ = writeln!(
        out,
        "\n{} scenarios: {} ok, {} refuted, {} errors, {} unsupported",
        doc.reports.len(),
        count(RunStatus::Match),
        count(RunStatus::Refuted),
        count(RunStatus::Error),
        count(RunStatus::Unsupported)
    );
    out
}
