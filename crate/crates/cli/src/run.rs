//! Executes scenarios and compares every expected annotation.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::Instant;

use momentkit_core::catalog::{certify_table_row, table_entry, RowCertificate, Support};
use momentkit_core::kirwan::{search_lagrangian, SearchOutcome, SearchParams, SearchStatus};
use momentkit_core::linalg::CVec;
use momentkit_core::reduction::{
    cut_lift, cut_line_for_level, reduction_lift, slice_lift_report, weighted_projective_scenario, CircleData,
    LiftReport, SliceFinding, SliceStatus,
};
use momentkit_core::symcheck::{lagrangian_verdict, Context, OrbitReport, PhaseSpace, PointState, SpaceKind};
use momentkit_core::{eval_rep_expr, Error, MatrixRep, Tolerances};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::scenario::{slice_status_str, Expected, Pipeline, Scenario};

pub const SCHEMA: u32 = 1;
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RunStatus {
    Match,
    Refuted,
    Error,
    Unsupported,
}

impl RunStatus {
    pub fn label(self) -> &'static str {
        match self {
            RunStatus::Match => "OK",
            RunStatus::Refuted => "REFUTED",
            RunStatus::Error => "ERROR",
            RunStatus::Unsupported => "UNSUPPORTED",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Outcome {
    None,
    Orbit { report: OrbitReport },
    Lift { report: LiftReport },
    Search { outcome: SearchOutcome },
    Slice { finding: SliceFinding, search: Option<SearchOutcome> },
    Table { certificate: RowCertificate },
}

impl Outcome {
    /// The orbit report the summary columns are drawn from.
    pub fn orbit(&self) -> Option<&OrbitReport> {
        match self {
            Outcome::None => None,
            Outcome::Orbit { report } => Some(report),
            Outcome::Lift { report } => Some(&report.upstairs),
            Outcome::Search { outcome } => outcome.report.as_ref(),
            Outcome::Slice { finding, .. } => Some(&finding.slice),
            Outcome::Table { certificate } => certificate.outcome.report.as_ref(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub field: String,
    pub expected: String,
    pub actual: String,
    pub ok: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub name: String,
    pub pipeline: Pipeline,
    pub citation: Option<String>,
    pub status: RunStatus,
    pub verdict: String,
    pub outcome: Outcome,
    pub checks: Vec<Check>,
    pub error: Option<String>,
    pub notes: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub wall_ms: Option<f64>,
}

impl RunReport {
    pub fn failed_checks(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.ok)
    }
}

/// Machine report: a versioned document carrying the tolerance snapshot.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Document {
    pub schema: u32,
    pub toolkit: String,
    pub version: String,
    pub tolerances: Tolerances,
    pub moment_scale: f64,
    pub reports: Vec<RunReport>,
}

impl Document {
    pub fn new(ctx: &Context, reports: Vec<RunReport>) -> Self {
        Self {
            schema: SCHEMA,
            toolkit: "momentkit".into(),
            version: VERSION.into(),
            tolerances: ctx.tol,
            moment_scale: ctx.moment_scale,
            reports,
        }
    }

    pub fn exit_code(&self) -> i32 {
        exit_code(&self.reports)
    }
}

/// 2 if any scenario errored, else 1 if any was refuted, else 0.
pub fn exit_code(reports: &[RunReport]) -> i32 {
    if reports.iter().any(|r| r.status == RunStatus::Error) {
        2
    } else if reports.iter().any(|r| r.status == RunStatus::Refuted) {
        1
    } else {
        0
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct RunOptions {
    /// Record wall time per scenario (off for deterministic output).
    pub timings: bool,
    /// Replaces the scenario's own search parameters when set.
    pub search: Option<SearchParams>,
}

/// Run scenarios on the rayon pool; reports come back sorted by name.
pub fn run_all(ctx: &Context, scenarios: &[Scenario], opts: RunOptions) -> Vec<RunReport> {
    let mut out: Vec<RunReport> = scenarios.par_iter().map(|s| run_scenario(ctx, s, opts)).collect();
    out.sort_by(|a, b| a.name.cmp(&b.name));
    out
}

/// Run one scenario; errors and panics are confined to its report.
pub fn run_scenario(ctx: &Context, sc: &Scenario, opts: RunOptions) -> RunReport {
    let start = Instant::now();
    let result = catch_unwind(AssertUnwindSafe(|| execute(ctx, sc, opts)));
    let mut report = RunReport {
        name: sc.name.clone(),
        pipeline: sc.pipeline,
        citation: sc.citation.clone(),
        status: RunStatus::Match,
        verdict: String::new(),
        outcome: Outcome::None,
        checks: Vec::new(),
        error: None,
        notes: sc.notes.clone(),
        wall_ms: None,
    };
    match result {
        Ok(Ok(Executed::Unsupported(reason))) => {
            report.status = RunStatus::Unsupported;
            report.verdict = "unsupported".into();
            report.notes.push(reason);
        }
        Ok(Ok(Executed::Done { outcome, notes })) => {
            report.verdict = verdict_of(&outcome);
            report.checks = compare(&sc.expected, &outcome);
            report.notes.extend(notes);
            report.outcome = outcome;
            report.status = if report.checks.iter().all(|c| c.ok) {
                RunStatus::Match
            } else {
                RunStatus::Refuted
            };
        }
        Ok(Err(e)) => {
            report.status = RunStatus::Error;
            report.verdict = "error".into();
            report.error = Some(e);
        }
        Err(panic) => {
            let msg = panic
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| panic.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panic".into());
            report.status = RunStatus::Error;
            report.verdict = "error".into();
            report.error = Some(format!("internal failure: {msg}"));
        }
    }
    if opts.timings {
        report.wall_ms = Some(start.elapsed().as_secs_f64() * 1e3);
    }
    report
}

enum Executed {
    Done { outcome: Outcome, notes: Vec<String> },
    Unsupported(String),
}

fn done(outcome: Outcome) -> Result<Executed, String> {
    Ok(Executed::Done {
        outcome,
        notes: Vec::new(),
    })
}

fn rep_of(sc: &Scenario) -> Result<MatrixRep, String> {
    let (Some(g), Some(r)) = (&sc.group, &sc.rep) else {
        return Err("scenario has no group or representation".into());
    };
    eval_rep_expr(g, r).map_err(|e| e.to_string())
}

fn space_of(sc: &Scenario, dim: usize) -> Result<PhaseSpace, String> {
    Ok(match sc.space.ok_or("scenario has no space")? {
        SpaceKind::Linear => PhaseSpace::linear(dim),
        SpaceKind::Projective => PhaseSpace::projective(dim),
        SpaceKind::ProductWithLine => PhaseSpace::product_with_line(dim),
    })
}

fn point_of(sc: &Scenario) -> Result<CVec, String> {
    sc.point
        .as_ref()
        .map(|p| CVec::from_vec(p.clone()))
        .ok_or_else(|| "scenario has no point".into())
}

fn params_of(sc: &Scenario, opts: RunOptions) -> SearchParams {
    opts.search.or(sc.search).unwrap_or_default()
}

fn err(e: Error) -> String {
    e.to_string()
}

fn execute(ctx: &Context, sc: &Scenario, opts: RunOptions) -> Result<Executed, String> {
    match sc.pipeline {
        Pipeline::Unsupported => Ok(Executed::Unsupported(
            sc.reason.clone().unwrap_or_else(|| "not supported".into()),
        )),
        Pipeline::Table => {
            let id = sc.table_row.as_deref().ok_or("table scenario has no row")?;
            let entry = table_entry(id).map_err(err)?;
            if let Support::Unsupported(reason) = entry.support {
                return Ok(Executed::Unsupported(reason));
            }
            let cert = certify_table_row(ctx, id, &params_of(sc, opts)).map_err(err)?;
            done(Outcome::Table { certificate: cert })
        }
        Pipeline::Verdict => {
            let r = rep_of(sc)?;
            let s = space_of(sc, r.dim_v())?;
            let p = PointState::new(&s, point_of(sc)?).map_err(err)?;
            let report = lagrangian_verdict(ctx, &r, &s, &p).map_err(err)?;
            done(Outcome::Orbit { report })
        }
        Pipeline::Search => {
            let r = rep_of(sc)?;
            let s = space_of(sc, r.dim_v())?;
            let params = params_of(sc, opts);
            params.validate()?;
            done(Outcome::Search {
                outcome: search_lagrangian(ctx, &r, &s, &params),
            })
        }
        Pipeline::Reduction => {
            let r = rep_of(sc)?;
            let c = sc.circle.as_ref().ok_or("reduction scenario has no circle")?;
            let circle = CircleData::new(c.weights.clone(), c.level);
            let p = point_of(sc)?;
            let psi = circle.moment(ctx, &p);
            if psi <= 0.0 {
                return Err(format!("circle moment {psi:e} at the point is not positive; no rescaling reaches level {}", c.level));
            }
            let p = &p * Complex64::new((c.level / psi).sqrt(), 0.0);
            let report = reduction_lift(ctx, &r, &circle, &p).map_err(err)?;
            Ok(Executed::Done {
                outcome: Outcome::Lift { report },
                notes: vec!["point rescaled onto the circle level set".into()],
            })
        }
        Pipeline::Cut => {
            let r = rep_of(sc)?;
            let c = sc.circle.as_ref().ok_or("cut scenario has no circle")?;
            let base = c.base.ok_or("cut scenario has no base")?;
            let circle = CircleData::new(c.weights.clone(), c.level);
            let m = point_of(sc)?;
            let mut notes = Vec::new();
            let z = match c.line {
                Some(z) => z,
                None => {
                    let z = cut_line_for_level(ctx, base, &circle, &m).map_err(err)?;
                    notes.push(format!("line coordinate derived from the level: z = {z}"));
                    Complex64::new(z, 0.0)
                }
            };
            let target = c.target.as_deref().unwrap_or("the cut");
            let report = cut_lift(ctx, &r, base, &circle, &m, z, target).map_err(err)?;
            Ok(Executed::Done {
                outcome: Outcome::Lift { report },
                notes,
            })
        }
        Pipeline::Weighted => {
            let r = rep_of(sc)?;
            let w = sc.weighted.ok_or("weighted scenario has no [weighted] section")?;
            let report = weighted_projective_scenario(ctx, &r, w.split, (w.k, w.s), &point_of(sc)?).map_err(err)?;
            done(Outcome::Lift { report })
        }
        Pipeline::Slice => {
            let r = rep_of(sc)?;
            let s = space_of(sc, r.dim_v())?;
            let ambient = sc.ambient.as_deref().ok_or("slice scenario has no ambient")?;
            match &sc.point {
                Some(p) => {
                    let p = PointState::new(&s, CVec::from_vec(p.clone())).map_err(err)?;
                    let finding = slice_lift_report(ctx, &r, &s, &p, ambient).map_err(err)?;
                    done(Outcome::Slice { finding, search: None })
                }
                None => {
                    let params = params_of(sc, opts);
                    params.validate()?;
                    let outcome = search_lagrangian(ctx, &r, &s, &params);
                    let Some(z) = outcome.point.clone() else {
                        return Err("slice search produced no point".into());
                    };
                    let p = PointState::new(&s, CVec::from_vec(z)).map_err(err)?;
                    let finding = slice_lift_report(&ctx.relaxed(), &r, &s, &p, ambient).map_err(err)?;
                    Ok(Executed::Done {
                        outcome: Outcome::Slice {
                            finding,
                            search: Some(outcome),
                        },
                        notes: vec!["slice point found by search; checked at the search tolerance".into()],
                    })
                }
            }
        }
    }
}

fn verdict_of(o: &Outcome) -> String {
    match o {
        Outcome::None => "none".into(),
        Outcome::Orbit { report } => lagrangian_word(report.is_lagrangian).into(),
        Outcome::Lift { report } => {
            if report.downstairs_claim.is_some() {
                "lagrangian".into()
            } else {
                "no claim".into()
            }
        }
        Outcome::Search { outcome } => status_word(outcome.status).into(),
        Outcome::Slice { finding, .. } => slice_status_str(finding.status).into(),
        Outcome::Table { certificate } => status_word(certificate.outcome.status).into(),
    }
}

fn lagrangian_word(b: bool) -> &'static str {
    if b {
        "lagrangian"
    } else {
        "not lagrangian"
    }
}

pub fn status_word(s: SearchStatus) -> &'static str {
    match s {
        SearchStatus::Found => "found",
        SearchStatus::ConvergedNonLagrangian => "converged_non_lagrangian",
        SearchStatus::Exhausted => "exhausted",
    }
}

fn show<T: ToString>(v: Option<T>) -> String {
    v.map(|x| x.to_string()).unwrap_or_else(|| "none".into())
}

/// Every present annotation yields one check; a missing actual value is a
/// failed check, never a pass.
fn compare(e: &Expected, o: &Outcome) -> Vec<Check> {
    let orbit = o.orbit();
    let lift = match o {
        Outcome::Lift { report } => Some(report),
        _ => None,
    };
    let found = match o {
        Outcome::Search { outcome } => Some(outcome.status == SearchStatus::Found),
        Outcome::Table { certificate } => Some(certificate.outcome.status == SearchStatus::Found),
        _ => None,
    };
    let isotropy = lift.and_then(|l| l.base_isotropy_dim).or(orbit.map(|r| r.isotropy_dim));
    let mut checks = Vec::new();
    let mut add = |field: &str, expected: Option<String>, actual: Option<String>| {
        if let Some(exp) = expected {
            let act = actual.unwrap_or_else(|| "unavailable".into());
            checks.push(Check {
                field: field.into(),
                ok: exp == act,
                expected: exp,
                actual: act,
            });
        }
    };
    add("lagrangian", e.lagrangian.map(|b| b.to_string()), orbit.map(|r| r.is_lagrangian.to_string()));
    add("orbit_dim", e.orbit_dim.map(|v| v.to_string()), orbit.map(|r| r.orbit_dim.to_string()));
    add("isotropy_dim", e.isotropy_dim.map(|v| v.to_string()), isotropy.map(|v| v.to_string()));
    add("moduli_dim", e.moduli_dim.map(|v| v.to_string()), orbit.map(|r| show(r.moduli_dim)));
    add(
        "dim_p",
        e.dim_p.map(|v| v.to_string()),
        orbit.filter(|r| r.is_lagrangian).map(|r| r.orbit_dim.to_string()),
    );
    add(
        "reduced_orbit_dim",
        e.reduced_orbit_dim.map(|v| v.to_string()),
        lift.map(|l| l.reduced_orbit_dim.to_string()),
    );
    add(
        "claim",
        e.claim.map(|b| b.to_string()),
        lift.map(|l| l.downstairs_claim.is_some().to_string()),
    );
    add("isolated", e.isolated.map(|b| b.to_string()), orbit.map(|r| show(r.isolated_by_thm1)));
    add("ss_transitive", e.ss_transitive.map(|b| b.to_string()), orbit.map(|r| show(r.ss_transitive)));
    add("found", e.found.map(|b| b.to_string()), found.map(|b| b.to_string()));
    add(
        "slice_status",
        e.slice_status.map(|s| slice_status_str(s).to_string()),
        match o {
            Outcome::Slice { finding, .. } => Some(slice_status_str(finding.status).to_string()),
            _ => None,
        },
    );
    // the two isolation criteria must agree wherever both are computed
    if let Some(r) = orbit {
        if let (Some(a), Some(b)) = (r.isolated_by_thm1, r.ss_transitive) {
            checks.push(Check {
                field: "isolation_equivalence".into(),
                expected: "agree".into(),
                actual: if a == b { "agree".into() } else { format!("isolated={a} ss_transitive={b}") },
                ok: a == b,
            });
        }
    }
    checks
}

/// Whether a slice finding counts as supported.
pub fn is_supported(r: &RunReport) -> bool {
    matches!(
        &r.outcome,
        Outcome::Slice { finding, .. } if finding.status == SliceStatus::Supported
    )
}
