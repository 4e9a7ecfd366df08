//! Acceptance criteria, one PASS/FAIL line each.
//!
//! A criterion may fail only in the exact way recorded in `explained`; the
//! process exits non-zero on any other failure.

use std::collections::BTreeMap;
use std::process::ExitCode;

use momentkit_cli::run::Outcome;
use momentkit_cli::{registry, run_all, Pipeline, RunOptions, RunReport};
use momentkit_core::catalog::{certify_table_row, table_entries, Support};
use momentkit_core::kirwan::{retract, search_lagrangian, KirwanObjective, SearchParams, SearchStatus};
use momentkit_core::linalg::{CMat, CVec};
use momentkit_core::reduction::{weighted_projective_scenario, SliceStatus};
use momentkit_core::symcheck::{lagrangian_verdict, moment_component, Context, PhaseSpace, PointState};
use momentkit_core::{eval_rep_expr, FactorSpec, GroupSpec, MatrixRep, RepExpr};
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

const QUI_RESIDUAL: f64 = 1e-10;
const WEIGHTED_RESIDUAL: f64 = 1e-9;
const CP1_STARTS: usize = 64;
const CP1_GRID: usize = 100;
const CP1_FLOOR: f64 = 1e-3;
const BLOWUP_EPSILON: f64 = 0.05;
const EQUIVARIANCE_TOL: f64 = 1e-8;
const HAMILTONIAN_TOL: f64 = 1e-6;
const CLOSURE_TOL: f64 = 1e-10;
const GRADIENT_TOL: f64 = 1e-6;
const DRAWS: usize = 100;
const PROPERTY_SEED: u64 = 20_240_601;
const SLICE_ITEMS: usize = 9;

struct Verdict {
    ok: bool,
    /// The failure matches the recorded analysis exactly.
    explained: bool,
    detail: String,
}

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

fn qui() -> Verdict {
    let g = GroupSpec::new(vec![FactorSpec::CircleSlots(vec![-1, -1, 0, 0]), FactorSpec::Su(2)]);
    let r = eval_rep_expr(&g, &RepExpr::Sum(vec![RepExpr::def(1), RepExpr::def(1)])).unwrap();
    let s = PhaseSpace::linear(4);
    let p = PointState::new(&s, CVec::from_vec(vec![c(1.0), c(1.0), c(1.0), c(-1.0)])).unwrap();
    let rep = lagrangian_verdict(&Context::default(), &r, &s, &p).unwrap();
    let ok = rep.is_lagrangian
        && rep.omega_residual <= QUI_RESIDUAL
        && rep.mu.central_defect <= QUI_RESIDUAL
        && rep.orbit_dim == 4
        && rep.moduli_dim == Some(1)
        && rep.isolated_by_thm1 == Some(false)
        && rep.ss_transitive == Some(false);
    let detail = format!(
        "T1 x SU(2) on C^4: lagrangian {}, orbit {}, moduli {:?}, isolated {:?}, ss_transitive {:?}, omega {:.1e}, defect {:.1e}",
        rep.is_lagrangian,
        rep.orbit_dim,
        rep.moduli_dim,
        rep.isolated_by_thm1,
        rep.ss_transitive,
        rep.omega_residual,
        rep.mu.central_defect
    );
    Verdict {
        ok,
        explained: ok,
        detail,
    }
}

fn weighted() -> Verdict {
    let ctx = Context::default();
    let mut rows: Vec<(String, GroupSpec, RepExpr, usize, Vec<Complex64>, usize)> = Vec::new();
    for n in 2..=3usize {
        rows.push((
            format!("SU({n}) L1+L1*"),
            GroupSpec::new(vec![FactorSpec::Su(n)]),
            RepExpr::Sum(vec![RepExpr::def(0), RepExpr::dual(RepExpr::def(0))]),
            n,
            momentkit_core::catalog::su_lambda1_dual_point(n),
            2 * n,
        ));
    }
    for n in 2..=3usize {
        let m = 2 * n + 1;
        rows.push((
            format!("SU({m}) L2+L1"),
            GroupSpec::new(vec![FactorSpec::Su(m)]),
            RepExpr::Sum(vec![RepExpr::ext(RepExpr::def(0), 2), RepExpr::def(0)]),
            m * (m - 1) / 2,
            momentkit_core::catalog::su_lambda2_lambda1_point(n),
            2 * n * n + 3 * n + 2,
        ));
    }
    for n in 2..=3usize {
        rows.push((
            format!("Sp({n}) L1+L1"),
            GroupSpec::new(vec![FactorSpec::Sp(n)]),
            RepExpr::Sum(vec![RepExpr::def(0), RepExpr::def(0)]),
            2 * n,
            momentkit_core::catalog::sp_pair_point(n),
            4 * n,
        ));
    }
    rows.push((
        "Spin(10) Le+Le".into(),
        GroupSpec::new(vec![FactorSpec::Spin(10, momentkit_core::Chirality::Even)]),
        RepExpr::Sum(vec![RepExpr::def(0), RepExpr::def(0)]),
        16,
        momentkit_core::catalog::spin10_pair_point(),
        32,
    ));
    let mut bad = Vec::new();
    let mut only_su_odd = true;
    let mut checked = 0;
    for (label, g, e, split, point, stated) in rows {
        let r = eval_rep_expr(&g, &e).unwrap();
        for ks in [(1u32, 2u32), (2, 3)] {
            checked += 1;
            let lift = weighted_projective_scenario(&ctx, &r, split, ks, &CVec::from_vec(point.clone())).unwrap();
            let up = &lift.upstairs;
            let residual_ok = up.omega_residual <= WEIGHTED_RESIDUAL
                && up.mu.central_defect <= WEIGHTED_RESIDUAL
                && lift.level_residual <= WEIGHTED_RESIDUAL;
            if up.orbit_dim != stated || !residual_ok || !up.is_lagrangian {
                bad.push(format!(
                    "{label} {ks:?}: orbit {} vs stated {stated} (dim_C V = {}), lagrangian {}, omega {:.1e}",
                    up.orbit_dim,
                    r.dim_v(),
                    up.is_lagrangian,
                    up.omega_residual
                ));
                // a Lagrangian orbit of V has real dimension dim_C V
                only_su_odd &= label.contains("L2+L1")
                    && up.is_lagrangian
                    && residual_ok
                    && up.orbit_dim == r.dim_v()
                    && stated == r.dim_v() + 1;
            }
        }
    }
    let ok = bad.is_empty();
    let detail = if ok {
        format!("{checked} weighted lifts: dims 2n, 2n^2+3n+2, 4n, 32 reproduced")
    } else {
        format!(
            "{} of {checked} weighted lifts off; stated SU(2n+1) dimension exceeds dim_C V, no isotropic orbit can reach it: {}",
            bad.len(),
            bad.join("; ")
        )
    };
    Verdict {
        ok,
        explained: ok || only_su_odd,
        detail,
    }
}

fn table() -> Verdict {
    let ctx = Context::default();
    let params = SearchParams::default();
    let mut mismatched = Vec::new();
    let mut n = 0;
    for e in table_entries() {
        if !matches!(e.support, Support::Constructible { .. }) {
            continue;
        }
        let cert = certify_table_row(&ctx, &e.id, &params).unwrap();
        n += 1;
        if !cert.dim_matches {
            let got = cert.outcome.report.as_ref().map(|r| r.orbit_dim);
            mismatched.push((e.id.clone(), cert.outcome.status, got, e.table_dim_p));
        }
    }
    let ok = mismatched.is_empty();
    let explained = mismatched.iter().all(|(id, status, got, want)| {
        id.ends_with("-lambda2-lambda1") && *status == SearchStatus::Found && *got == Some(want - 1)
    });
    let detail = if ok {
        format!("{n} constructible rows certified with the printed dim P(V)")
    } else {
        let list: Vec<String> = mismatched
            .iter()
            .map(|(id, s, got, want)| format!("{id}: {s:?} orbit {got:?} vs printed {want}"))
            .collect();
        format!(
            "{} of {n} rows off; the printed 2n^2+3n+1 equals dim_C V, one more than dim_C P(V): {}",
            list.len(),
            list.join("; ")
        )
    };
    Verdict { ok, explained, detail }
}

fn isolation(reports: &[RunReport]) -> Verdict {
    let mut certified = 0;
    let mut disagreements = Vec::new();
    let mut nonzero_moduli = Vec::new();
    for r in reports {
        let Some(o) = r.outcome.orbit() else { continue };
        if !o.is_lagrangian {
            continue;
        }
        certified += 1;
        if o.isolated_by_thm1 != o.ss_transitive {
            disagreements.push(r.name.clone());
        }
        if r.pipeline == Pipeline::Table && o.moduli_dim != Some(0) {
            nonzero_moduli.push(r.name.clone());
        }
    }
    let ok = disagreements.is_empty() && nonzero_moduli.is_empty() && certified > 0;
    Verdict {
        ok,
        explained: ok,
        detail: format!(
            "{certified} certified Lagrangian points, {} disagreements, {} semisimple rows with moduli != 0",
            disagreements.len(),
            nonzero_moduli.len()
        ),
    }
}

/// `f` on CP^1 straight from the Pauli matrices: `X_a = i sigma_a / sqrt 2`
/// is B-orthonormal, `mu^X(z) = -1/2 Im <Xz, z>`.
fn cp1_oracle(z: [Complex64; 2]) -> f64 {
    let i = Complex64::new(0.0, 1.0);
    let pauli = [
        [[c(0.0), c(1.0)], [c(1.0), c(0.0)]],
        [[c(0.0), -i], [i, c(0.0)]],
        [[c(1.0), c(0.0)], [c(0.0), c(-1.0)]],
    ];
    let mut f = 0.0;
    for s in pauli {
        let xz = [
            i * (s[0][0] * z[0] + s[0][1] * z[1]) / 2f64.sqrt(),
            i * (s[1][0] * z[0] + s[1][1] * z[1]) / 2f64.sqrt(),
        ];
        let pair = xz[0] * z[0].conj() + xz[1] * z[1].conj();
        let mu = -0.5 * pair.im;
        f += mu * mu;
    }
    f
}

fn negative_control() -> Verdict {
    let ctx = Context::default();
    let r = momentkit_core::liealg::su(2).unwrap();
    let params = SearchParams {
        starts: CP1_STARTS,
        ..SearchParams::default()
    };
    let out = search_lagrangian(&ctx, &r, &PhaseSpace::projective(2), &params);
    let mut min_f = f64::INFINITY;
    let mut worst_gap: f64 = 0.0;
    let obj = KirwanObjective::new(&ctx, &r);
    for a in 0..CP1_GRID {
        for b in 0..CP1_GRID {
            let theta = std::f64::consts::PI * a as f64 / (CP1_GRID - 1) as f64;
            let phi = 2.0 * std::f64::consts::PI * b as f64 / CP1_GRID as f64;
            let z = [c((theta / 2.0).cos()), Complex64::from_polar((theta / 2.0).sin(), phi)];
            let f = cp1_oracle(z);
            min_f = min_f.min(f);
            worst_gap = worst_gap.max((obj.value(&CVec::from_vec(z.to_vec())) - f).abs());
        }
    }
    let ok = out.status != SearchStatus::Found && min_f > CP1_FLOOR && worst_gap <= 1e-12;
    Verdict {
        ok,
        explained: ok,
        detail: format!(
            "SU(2) on CP^1: search {:?} after {} starts, grid min f {:.4} over {} points, library vs oracle gap {:.1e}",
            out.status,
            out.trace.len(),
            min_f,
            CP1_GRID * CP1_GRID,
            worst_gap
        ),
    }
}

fn lifts(reports: &[RunReport]) -> Verdict {
    let by_name: BTreeMap<&str, &RunReport> = reports.iter().map(|r| (r.name.as_str(), r)).collect();
    let lift = |name: &str| match by_name.get(name).map(|r| &r.outcome) {
        Some(Outcome::Lift { report }) => Some(report.clone()),
        _ => None,
    };
    let mut ok = true;
    let mut parts = Vec::new();
    match (lift("example-exlag-cp4-blowup"), by_name.get("example-exlag-cp4").and_then(|r| r.outcome.orbit())) {
        (Some(l), Some(base)) => {
            let good = l.upstairs.is_lagrangian && l.reduced_orbit_dim == 4 && base.orbit_dim == 4 && l.downstairs_claim.is_some();
            ok &= good;
            parts.push(format!(
                "CP^4 example: K[p] dim {} (base orbit {}), claim {:?}",
                l.reduced_orbit_dim, base.orbit_dim, l.downstairs_claim
            ));
        }
        _ => {
            ok = false;
            parts.push("CP^4 example missing".into());
        }
    }
    for name in ["su3-blowup", "su5-blowup", "sp2-blowup", "spin10-blowup"] {
        match lift(name) {
            Some(l) => {
                let level_ok = by_name[name]
                    .notes
                    .iter()
                    .any(|n| n.starts_with("line coordinate derived"));
                let good = l.upstairs.is_lagrangian && l.downstairs_claim.is_some() && level_ok;
                ok &= good;
                parts.push(format!(
                    "{name}: claim {}, K[m,z] dim {}",
                    l.downstairs_claim.is_some(),
                    l.reduced_orbit_dim
                ));
            }
            None => {
                ok = false;
                parts.push(format!("{name}: {}", by_name.get(name).and_then(|r| r.error.clone()).unwrap_or_default()));
            }
        }
    }
    Verdict {
        ok,
        explained: ok,
        detail: format!("epsilon {BLOWUP_EPSILON}; {}", parts.join("; ")),
    }
}

/// Every distinct `(group, rep)` in the registry.
fn registry_algebras() -> Vec<(String, MatrixRep)> {
    let mut seen = BTreeMap::new();
    for s in registry() {
        if let (Some(g), Some(r)) = (&s.group, &s.rep) {
            seen.entry(format!("{g} | {r}")).or_insert((g.clone(), r.clone()));
        }
    }
    for e in table_entries() {
        if let Support::Constructible { group, rep, .. } = e.support {
            seen.entry(format!("{group} | {rep}")).or_insert((group, rep));
        }
    }
    seen.into_iter()
        .map(|(k, (g, r))| (k, eval_rep_expr(&g, &r).unwrap()))
        .collect()
}

fn normal(rng: &mut ChaCha8Rng) -> f64 {
    StandardNormal.sample(rng)
}

fn random_vec(rng: &mut ChaCha8Rng, n: usize) -> CVec {
    CVec::from_iterator(n, (0..n).map(|_| Complex64::new(normal(rng), normal(rng))))
}

fn random_coeffs(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    (0..n).map(|_| normal(rng)).collect()
}

/// `-2s Im <u, v>` with `<u, v> = sum u_i conj(v_i)`.
fn omega(s: f64, u: &CVec, v: &CVec) -> f64 {
    let pair: Complex64 = u.iter().zip(v.iter()).map(|(a, b)| a * b.conj()).sum();
    -2.0 * s * pair.im
}

fn properties() -> Verdict {
    let ctx = Context::default();
    let mut rng = ChaCha8Rng::seed_from_u64(PROPERTY_SEED);
    let algebras = registry_algebras();
    let (mut eq_worst, mut ham_worst, mut cl_worst, mut gr_worst) = (0f64, 0f64, 0f64, 0f64);
    let mut worst_at = BTreeMap::new();
    for (key, r) in &algebras {
        let n = r.dim_v();
        let dg = r.dim_g();
        let obj = KirwanObjective::new(&ctx, r);
        for _ in 0..DRAWS {
            // equivariance: mu^Y(g z) = mu^{g^-1 Y g}(z)
            let x = r.element(&random_coeffs(&mut rng, dg));
            let g: CMat = x.exp();
            let ginv = g.adjoint();
            let y = r.element(&random_coeffs(&mut rng, dg));
            let z = retract(&random_vec(&mut rng, n));
            let lhs = moment_component(&ctx, &y, &(&g * &z));
            let rhs = moment_component(&ctx, &(&ginv * &y * &g), &z);
            let e = (lhs - rhs).abs();
            if e > eq_worst {
                eq_worst = e;
                worst_at.insert("equivariance", key.clone());
            }

            // Hamiltonian identity: d mu^X (v) = omega(X z, v)
            let v = retract(&random_vec(&mut rng, n));
            let h = 1e-6;
            let fd = (moment_component(&ctx, &y, &(&z + &v * c(h))) - moment_component(&ctx, &y, &(&z - &v * c(h)))) / (2.0 * h);
            let an = omega(ctx.moment_scale, &(&y * &z), &v);
            let e = (fd - an).abs() / an.abs().max(1.0);
            if e > ham_worst {
                ham_worst = e;
                worst_at.insert("hamiltonian", key.clone());
            }

            // closure: [rho X, rho Y] = rho [X, Y]
            let a = random_coeffs(&mut rng, dg);
            let b = random_coeffs(&mut rng, dg);
            let (ra, rb) = (r.element(&a), r.element(&b));
            let lhs = &ra * &rb - &rb * &ra;
            let rhs = r.element(&r.structure().bracket(&a, &b));
            let e = (lhs - rhs).norm() / (ra.norm() * rb.norm()).max(1e-300);
            if e > cl_worst {
                cl_worst = e;
                worst_at.insert("closure", key.clone());
            }

            // Riemannian gradient against central differences on the sphere
            let (f, grad) = obj.value_and_grad(&z);
            let hh = 1e-5;
            let fp = obj.value(&retract(&(&z + &v * c(hh))));
            let fm = obj.value(&retract(&(&z - &v * c(hh))));
            let fd = (fp - fm) / (2.0 * hh);
            let an: f64 = grad.iter().zip(v.iter()).map(|(a, b)| (a * b.conj()).re).sum();
            let e = (fd - an).abs() / an.abs().max(f).max(1.0);
            if e > gr_worst {
                gr_worst = e;
                worst_at.insert("gradient", key.clone());
            }
        }
    }
    let ok = eq_worst <= EQUIVARIANCE_TOL && ham_worst <= HAMILTONIAN_TOL && cl_worst <= CLOSURE_TOL && gr_worst <= GRADIENT_TOL;
    let mut detail = format!(
        "{} algebras x {DRAWS} draws: equivariance {eq_worst:.1e}, hamiltonian {ham_worst:.1e}, closure {cl_worst:.1e}, gradient {gr_worst:.1e}",
        algebras.len()
    );
    if !ok {
        detail.push_str(&format!("; worst at {worst_at:?}"));
    }
    Verdict {
        ok,
        explained: ok,
        detail,
    }
}

fn slices(reports: &[RunReport]) -> Verdict {
    let mut supported = Vec::new();
    let mut other = Vec::new();
    for r in reports.iter().filter(|r| r.name.starts_with("slice-item") && r.pipeline == Pipeline::Slice) {
        match &r.outcome {
            Outcome::Slice { finding, .. } if finding.status == SliceStatus::Supported => supported.push(r.name.clone()),
            Outcome::Slice { finding, .. } => other.push(format!("{}: {}", r.name, finding.finding)),
            _ => other.push(format!("{}: {}", r.name, r.error.clone().unwrap_or_default())),
        }
    }
    let constructible = supported.len() + other.len();
    let ok = other.is_empty() && constructible == SLICE_ITEMS;
    // item 3: the unit sphere of C^n is one U(n)-orbit, of dimension 2n-1 > n
    let explained = ok || (constructible == 7 && other.len() == 1 && other[0].starts_with("slice-item3-"));
    let detail = format!(
        "{} constructible of {SLICE_ITEMS} stated, {} supported{}",
        constructible,
        supported.len(),
        if other.is_empty() {
            String::new()
        } else {
            format!("; {}", other.join("; "))
        }
    );
    Verdict { ok, explained, detail }
}

fn main() -> ExitCode {
    let ctx = Context::default();
    let reports = run_all(&ctx, &registry(), RunOptions::default());
    let criteria: Vec<(u32, &str, Verdict)> = vec![
        (1, "example qui", qui()),
        (2, "weighted projective lifts", weighted()),
        (3, "final-table certification", table()),
        (4, "isolation equivalence", isolation(&reports)),
        (5, "CP^1 negative control", negative_control()),
        (6, "cut lifts", lifts(&reports)),
        (7, "property suites", properties()),
        (8, "slice findings", slices(&reports)),
    ];
    let mut unexplained = 0;
    for (id, title, v) in &criteria {
        let tag = if v.ok { "PASS" } else { "FAIL" };
        println!("{tag} {id} {title}: {}", v.detail);
        if !v.explained {
            unexplained += 1;
        }
    }
    let failed = criteria.iter().filter(|(_, _, v)| !v.ok).count();
    println!(
        "acceptance: {} passed, {failed} failed ({} matching the recorded analysis, {unexplained} unexplained)",
        criteria.len() - failed,
        failed - unexplained
    );
    if unexplained == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
