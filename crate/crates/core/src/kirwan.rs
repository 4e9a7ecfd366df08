//! Multi-start search for Lagrangian orbits: projected gradient descent of
//! `f(z) = sum_j mu^{Y_j}(z)^2` over a B-orthonormal basis `Y_j` of
//! `[g, g]`, on the unit sphere.

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::liealg::MatrixRep;
use crate::linalg::{CMat, CVec, SparseOp, I};
use crate::symcheck::{lagrangian_verdict, Context, OrbitReport, PhaseSpace, PointState};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SearchParams {
    pub starts: usize,
    pub max_iters: usize,
    pub armijo_c: f64,
    pub shrink: f64,
    pub grad_tol: f64,
    pub f_tol: f64,
    pub rng_seed: u64,
}

impl Default for SearchParams {
    fn default() -> Self {
        Self {
            starts: 32,
            max_iters: 10_000,
            armijo_c: 1e-4,
            shrink: 0.5,
            grad_tol: 1e-10,
            f_tol: 1e-14,
            rng_seed: 1,
        }
    }
}

impl SearchParams {
    pub fn validate(&self) -> std::result::Result<(), String> {
        if self.starts == 0 || self.max_iters == 0 {
            return Err("starts and max_iters must be positive".into());
        }
        if !(self.shrink > 0.0 && self.shrink < 1.0) {
            return Err(format!("shrink must lie in (0, 1), got {}", self.shrink));
        }
        if !(self.armijo_c > 0.0 && self.armijo_c < 1.0) {
            return Err(format!("armijo_c must lie in (0, 1), got {}", self.armijo_c));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SearchStatus {
    Found,
    ConvergedNonLagrangian,
    Exhausted,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StopReason {
    GradTol,
    ExactZero,
    Stalled,
    MaxIters,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StartTrace {
    pub start: usize,
    pub iterations: usize,
    pub f_final: f64,
    pub grad_norm: f64,
    pub stop: StopReason,
    /// `None` when `f` stayed above `f_tol` and no certification was tried.
    pub certified: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchOutcome {
    pub status: SearchStatus,
    /// Unit representative of the reported point.
    pub point: Option<Vec<Complex64>>,
    pub f_final: f64,
    pub report: Option<OrbitReport>,
    pub trace: Vec<StartTrace>,
}

/// The squared semisimple moment component and its Riemannian gradient.
#[derive(Debug, Clone)]
pub struct KirwanObjective {
    ys: Vec<SparseOp>,
    scale: f64,
}

impl KirwanObjective {
    pub fn new(ctx: &Context, r: &MatrixRep) -> Self {
        let d = r.derived();
        let ys = (0..d.ncols())
            .map(|j| {
                let mut y = CMat::zeros(r.dim_v(), r.dim_v());
                for (a, x) in r.basis().iter().enumerate() {
                    let c = d[(a, j)];
                    if c != 0.0 {
                        y += x * Complex64::new(c, 0.0);
                    }
                }
                SparseOp::from_dense(&y, 1e-15)
            })
            .collect();
        Self {
            ys,
            scale: ctx.moment_scale,
        }
    }

    pub fn value(&self, z: &CVec) -> f64 {
        self.ys
            .iter()
            .map(|y| {
                let m = -self.scale * crate::linalg::herm(&y.apply(z), z).im;
                m * m
            })
            .sum()
    }

    /// `(f, grad)` with `grad` tangent to the sphere at unit `z`. The ambient
    /// gradient of `mu^Y` in the metric `Re<.,.>` is `2 s i Y z`.
    pub fn value_and_grad(&self, z: &CVec) -> (f64, CVec) {
        let mut f = 0.0;
        let mut g = CVec::zeros(z.len());
        for y in &self.ys {
            let yz = y.apply(z);
            let m = -self.scale * crate::linalg::herm(&yz, z).im;
            f += m * m;
            g += yz * (I * (4.0 * self.scale * m));
        }
        let radial = crate::linalg::herm(&g, z).re;
        g -= z * Complex64::new(radial, 0.0);
        (f, g)
    }
}

/// `(f, grad)` at a unit vector.
pub fn kirwan_objective(ctx: &Context, r: &MatrixRep, z: &CVec) -> (f64, CVec) {
    KirwanObjective::new(ctx, r).value_and_grad(z)
}

pub fn retract(z: &CVec) -> CVec {
    z / Complex64::new(z.norm(), 0.0)
}

/// Uniform point on the unit sphere from the start's own stream.
pub fn start_point(seed: u64, start: usize, dim: usize) -> CVec {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(start as u64);
    let v = CVec::from_iterator(
        dim,
        (0..dim).map(|_| {
            let re: f64 = StandardNormal.sample(&mut rng);
            let im: f64 = StandardNormal.sample(&mut rng);
            Complex64::new(re, im)
        }),
    );
    retract(&v)
}

/// Outcome of one descent run.
#[derive(Debug, Clone)]
pub struct Descent {
    pub z: CVec,
    pub f: f64,
    pub grad_norm: f64,
    pub iterations: usize,
    pub stop: StopReason,
    /// `f` after each accepted step, starting with the initial value.
    pub history: Vec<f64>,
}

/// Projected gradient with Armijo backtracking; accepted steps never
/// increase `f`.
pub fn descend(obj: &KirwanObjective, z0: CVec, params: &SearchParams, max_iters: usize) -> Descent {
    let mut z = z0;
    let (mut f, mut g) = obj.value_and_grad(&z);
    let mut step = 1.0;
    let mut it = 0;
    let mut history = vec![f];
    let stop = loop {
        let gn2 = g.norm_squared();
        if f == 0.0 {
            break StopReason::ExactZero;
        }
        if gn2.sqrt() <= params.grad_tol {
            break StopReason::GradTol;
        }
        if it >= max_iters {
            break StopReason::MaxIters;
        }
        let mut accepted = None;
        while step > 1e-20 {
            let cand = retract(&(&z - &g * Complex64::new(step, 0.0)));
            let fc = obj.value(&cand);
            if fc <= f - params.armijo_c * step * gn2 {
                accepted = Some((cand, fc));
                break;
            }
            step *= params.shrink;
        }
        let Some((cand, fc)) = accepted else {
            break StopReason::Stalled;
        };
        assert!(fc <= f, "accepted step increased f");
        z = cand;
        (f, g) = obj.value_and_grad(&z);
        history.push(f);
        step = (step / params.shrink).min(1e6);
        it += 1;
    };
    Descent {
        grad_norm: g.norm(),
        z,
        f,
        iterations: it,
        stop,
        history,
    }
}

const POLISH_ITERS: usize = 5;
const CHUNK: usize = 8;

struct StartResult {
    trace: StartTrace,
    z: CVec,
    report: Option<OrbitReport>,
}

fn run_start(
    ctx: &Context,
    obj: &KirwanObjective,
    r: &MatrixRep,
    s: &PhaseSpace,
    params: &SearchParams,
    start: usize,
) -> StartResult {
    let z0 = start_point(params.rng_seed, start, r.dim_v());
    let mut d = descend(obj, z0, params, params.max_iters);
    let mut certified = None;
    let mut report = None;
    if d.f <= params.f_tol {
        let tight = SearchParams {
            grad_tol: params.grad_tol * 1e-3,
            ..*params
        };
        let polished = descend(obj, d.z.clone(), &tight, POLISH_ITERS);
        d.z = polished.z;
        d.f = polished.f;
        d.grad_norm = polished.grad_norm;
        d.iterations += polished.iterations;
        let verdict = PointState::new(s, d.z.clone()).and_then(|p| lagrangian_verdict(&ctx.relaxed(), r, s, &p));
        let ok = matches!(&verdict, Ok(rep) if rep.is_lagrangian);
        certified = Some(ok);
        report = verdict.ok();
    }
    StartResult {
        trace: StartTrace {
            start,
            iterations: d.iterations,
            f_final: d.f,
            grad_norm: d.grad_norm,
            stop: d.stop,
            certified,
        },
        z: d.z,
        report,
    }
}

/// Run starts in order (parallel within fixed-size chunks) until one is
/// certified Lagrangian under the relaxed tolerance.
pub fn search_lagrangian(ctx: &Context, r: &MatrixRep, s: &PhaseSpace, params: &SearchParams) -> SearchOutcome {
    let obj = KirwanObjective::new(ctx, r);
    let mut results: Vec<StartResult> = Vec::new();
    let mut next = 0;
    while next < params.starts {
        let end = (next + CHUNK).min(params.starts);
        let chunk: Vec<StartResult> = (next..end)
            .into_par_iter()
            .map(|i| run_start(ctx, &obj, r, s, params, i))
            .collect();
        results.extend(chunk);
        if results.iter().any(|x| x.trace.certified == Some(true)) {
            break;
        }
        next = end;
    }
    let found = results.iter().position(|x| x.trace.certified == Some(true));
    if let Some(i) = found {
        results.truncate(i + 1);
    }
    let trace: Vec<StartTrace> = results.iter().map(|x| x.trace.clone()).collect();
    let pick = |x: &StartResult| Some(x.z.iter().copied().collect::<Vec<_>>());
    if let Some(i) = found {
        let x = &results[i];
        return SearchOutcome {
            status: SearchStatus::Found,
            point: pick(x),
            f_final: x.trace.f_final,
            report: x.report.clone(),
            trace,
        };
    }
    if let Some(x) = results.iter().find(|x| x.trace.certified == Some(false)) {
        return SearchOutcome {
            status: SearchStatus::ConvergedNonLagrangian,
            point: pick(x),
            f_final: x.trace.f_final,
            report: x.report.clone(),
            trace,
        };
    }
    let best = results
        .iter()
        .min_by(|a, b| a.trace.f_final.total_cmp(&b.trace.f_final).then(a.trace.start.cmp(&b.trace.start)));
    SearchOutcome {
        status: SearchStatus::Exhausted,
        point: best.and_then(pick),
        f_final: best.map(|x| x.trace.f_final).unwrap_or(f64::INFINITY),
        report: None,
        trace,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::liealg::{circle, eval_rep_expr, so, su, FactorSpec, GroupSpec, RepExpr};

    #[test]
    fn real_points_are_zeros_for_so_n() {
        let ctx = Context::default();
        let r = so(4).unwrap();
        let z = retract(&CVec::from_iterator(4, [1.0, 2.0, -0.5, 0.3].map(|x| Complex64::new(x, 0.0))));
        let (f, g) = kirwan_objective(&ctx, &r, &z);
        assert!(f <= 1e-20);
        assert!(g.norm() <= 1e-10);
    }

    #[test]
    fn torus_objective_vanishes() {
        let ctx = Context::default();
        let r = circle(&[1, -2, 3]).unwrap();
        let z = start_point(3, 0, 3);
        let (f, g) = kirwan_objective(&ctx, &r, &z);
        assert_eq!(f, 0.0);
        assert_eq!(g.norm(), 0.0);
    }

    #[test]
    fn gradient_matches_finite_differences() {
        let ctx = Context::default();
        let r = su(3).unwrap();
        let obj = KirwanObjective::new(&ctx, &r);
        for k in 0..10 {
            let z = start_point(7, k, 3);
            let v = start_point(8, k, 3);
            let (f, g) = obj.value_and_grad(&z);
            let h = 1e-5;
            let fp = obj.value(&retract(&(&z + &v * Complex64::new(h, 0.0))));
            let fm = obj.value(&retract(&(&z - &v * Complex64::new(h, 0.0))));
            let fd = (fp - fm) / (2.0 * h);
            let an = crate::linalg::herm(&g, &v).re;
            assert!((fd - an).abs() <= 1e-6 * f.abs().max(1.0), "fd {fd} analytic {an}");
        }
    }

    #[test]
    fn su2_sym3_is_found() {
        let g = GroupSpec::new(vec![FactorSpec::Su(2)]);
        let r = eval_rep_expr(&g, &RepExpr::sym(RepExpr::def(0), 3)).unwrap();
        let out = search_lagrangian(&Context::default(), &r, &PhaseSpace::projective(4), &SearchParams::default());
        assert_eq!(out.status, SearchStatus::Found);
        assert_eq!(out.report.unwrap().orbit_dim, 3);
    }

    #[test]
    fn cp1_has_no_lagrangian_orbit() {
        let r = su(2).unwrap();
        let params = SearchParams {
            starts: 8,
            ..SearchParams::default()
        };
        let out = search_lagrangian(&Context::default(), &r, &PhaseSpace::projective(2), &params);
        assert_ne!(out.status, SearchStatus::Found);
        assert!(out.f_final > 1e-3);
    }

    #[test]
    fn search_is_deterministic() {
        let r = so(4).unwrap();
        let s = PhaseSpace::projective(4);
        let a = search_lagrangian(&Context::default(), &r, &s, &SearchParams::default());
        let b = search_lagrangian(&Context::default(), &r, &s, &SearchParams::default());
        assert_eq!(a, b);
        assert_eq!(a.status, SearchStatus::Found);
    }

    #[test]
    fn bad_params_are_reported() {
        let p = SearchParams {
            shrink: 1.5,
            ..SearchParams::default()
        };
        assert!(p.validate().is_err());
        assert!(SearchParams::default().validate().is_ok());
    }
}
