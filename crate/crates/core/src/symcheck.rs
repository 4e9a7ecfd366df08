//! Moment maps, orbit geometry and the Lagrangian / moduli / isolation
//! verdicts for a representation acting on a linear or projective space.
//!
//! Convention: `<u, v> = sum u_i conj(v_i)`, `mu^X(z) = -s Im<Xz, z>` with
//! moment scale `s` (default 1/2) and `omega(u, v) = -2s Im<u, v>`, so that
//! `d mu^X = omega(Xz, .)`. Projective values are taken on unit
//! representatives.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::fmt;

use crate::error::{Error, Result};
use crate::liealg::MatrixRep;
use crate::linalg::{self, herm, CMat, CVec, RMat, RVec, I};
use crate::tol::Tolerances;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SpaceKind {
    Linear,
    Projective,
    /// `V x C`: the representation acts on `dim_v + 1` coordinates, the
    /// last one being the line.
    ProductWithLine,
}

impl fmt::Display for SpaceKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SpaceKind::Linear => "linear",
            SpaceKind::Projective => "projective",
            SpaceKind::ProductWithLine => "product_with_line",
        })
    }
}

impl std::str::FromStr for SpaceKind {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "linear" => Ok(SpaceKind::Linear),
            "projective" => Ok(SpaceKind::Projective),
            "product_with_line" => Ok(SpaceKind::ProductWithLine),
            other => Err(format!("unknown space `{other}` (linear, projective, product_with_line)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PhaseSpace {
    pub kind: SpaceKind,
    pub dim_v: usize,
}

impl PhaseSpace {
    pub fn linear(dim_v: usize) -> Self {
        Self { kind: SpaceKind::Linear, dim_v }
    }

    pub fn projective(dim_v: usize) -> Self {
        Self {
            kind: SpaceKind::Projective,
            dim_v,
        }
    }

    pub fn product_with_line(dim_v: usize) -> Self {
        Self {
            kind: SpaceKind::ProductWithLine,
            dim_v,
        }
    }

    /// Number of complex coordinates a point carries.
    pub fn coords(&self) -> usize {
        match self.kind {
            SpaceKind::ProductWithLine => self.dim_v + 1,
            _ => self.dim_v,
        }
    }

    /// Half the real dimension.
    pub fn half_dim(&self) -> usize {
        match self.kind {
            SpaceKind::Linear => self.dim_v,
            SpaceKind::Projective => self.dim_v.saturating_sub(1),
            SpaceKind::ProductWithLine => self.dim_v + 1,
        }
    }

    pub fn real_dim(&self) -> usize {
        2 * self.half_dim()
    }
}

/// A point of a [`PhaseSpace`]; projective points are stored as unit vectors.
#[derive(Debug, Clone, PartialEq)]
pub struct PointState {
    coords: CVec,
}

impl PointState {
    pub fn new(space: &PhaseSpace, coords: CVec) -> Result<Self> {
        if coords.len() != space.coords() {
            return Err(Error::DimensionMismatch {
                expected: space.coords(),
                got: coords.len(),
            });
        }
        if space.kind == SpaceKind::Projective {
            let n = coords.norm();
            if n == 0.0 || !n.is_finite() {
                return Err(Error::ZeroProjectivePoint);
            }
            return Ok(Self { coords: coords / Complex64::new(n, 0.0) });
        }
        Ok(Self { coords })
    }

    pub fn coords(&self) -> &CVec {
        &self.coords
    }
}

/// Tolerances and the moment-map scale in effect for one evaluation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Context {
    pub tol: Tolerances,
    pub moment_scale: f64,
    /// Use the search-point Lagrangian tolerance instead of the exact one.
    pub relaxed: bool,
}

impl Default for Context {
    fn default() -> Self {
        Self {
            tol: Tolerances::default(),
            moment_scale: 0.5,
            relaxed: false,
        }
    }
}

impl Context {
    pub fn with_tol(tol: Tolerances) -> Self {
        Self { tol, ..Self::default() }
    }

    pub fn relaxed(self) -> Self {
        Self { relaxed: true, ..self }
    }

    pub fn scaled(self, moment_scale: f64) -> Self {
        Self { moment_scale, ..self }
    }

    pub fn lagrangian_tol(&self) -> f64 {
        if self.relaxed {
            self.tol.lagrangian_search
        } else {
            self.tol.lagrangian
        }
    }

    pub fn omega_scale(&self) -> f64 {
        2.0 * self.moment_scale
    }
}

/// `mu` split along `g = z(g) + [g, g]` (B-orthogonal).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoalgValue {
    pub full: Vec<f64>,
    pub central_part: Vec<f64>,
    pub ss_part: Vec<f64>,
    pub central_defect: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OrbitReport {
    pub orbit_dim: usize,
    pub half_dim: usize,
    pub isotropy_dim: usize,
    pub isotropy_basis: Vec<Vec<f64>>,
    pub mu: CoalgValue,
    pub omega_residual: f64,
    pub is_lagrangian: bool,
    pub moduli_dim: Option<usize>,
    pub isolated_by_thm1: Option<bool>,
    pub ss_transitive: Option<bool>,
    pub notes: Vec<String>,
}

/// `mu^X(z)` for an arbitrary skew-hermitian matrix `X`.
pub fn moment_component(ctx: &Context, x: &CMat, z: &CVec) -> f64 {
    -ctx.moment_scale * herm(&(x * z), z).im
}

pub fn moment_map(ctx: &Context, r: &MatrixRep, s: &PhaseSpace, p: &PointState) -> Result<CoalgValue> {
    check_dims(r, s)?;
    let z = p.coords();
    let full: Vec<f64> = r.basis().iter().map(|x| moment_component(ctx, x, z)).collect();
    Ok(split_coalg(r, full))
}

fn split_coalg(r: &MatrixRep, full: Vec<f64>) -> CoalgValue {
    let f = RVec::from_vec(full.clone());
    let d = r.derived();
    // coordinates mu(Y_j) on the B-orthonormal derived basis
    let ss_coords = d.transpose() * &f;
    let ss = r.gram() * d * &ss_coords;
    let central = &f - &ss;
    CoalgValue {
        full,
        central_part: central.iter().copied().collect(),
        ss_part: ss.iter().copied().collect(),
        central_defect: ss_coords.norm(),
    }
}

fn check_dims(r: &MatrixRep, s: &PhaseSpace) -> Result<()> {
    if r.dim_v() != s.coords() {
        return Err(Error::DimensionMismatch {
            expected: s.coords(),
            got: r.dim_v(),
        });
    }
    Ok(())
}

/// Fundamental vector fields at a point, realified.
#[derive(Debug, Clone, PartialEq)]
pub struct Frame {
    /// Column `a` is `X_a z` in interleaved real coordinates.
    pub vectors: RMat,
    /// `i z` for projective spaces (the direction quotiented out).
    pub vertical: Option<RVec>,
}

impl Frame {
    /// The frame with the vertical component removed.
    pub fn horizontal(&self) -> RMat {
        let mut m = self.vectors.clone();
        if let Some(v) = &self.vertical {
            let vv = v.norm_squared();
            if vv > 0.0 {
                for mut c in m.column_iter_mut() {
                    let k = c.dot(v) / vv;
                    c.axpy(-k, v, 1.0);
                }
            }
        }
        m
    }
}

pub fn generating_frame(r: &MatrixRep, s: &PhaseSpace, p: &PointState) -> Result<Frame> {
    check_dims(r, s)?;
    let z = p.coords();
    let n = z.len();
    let mut vectors = RMat::zeros(2 * n, r.dim_g());
    for (a, x) in r.basis().iter().enumerate() {
        vectors.set_column(a, &linalg::realify(&(x * z)));
    }
    let vertical = (s.kind == SpaceKind::Projective).then(|| linalg::realify(&(z * I)));
    Ok(Frame { vectors, vertical })
}

/// Orbit dimension and isotropy basis from a single decomposition, so that
/// `orbit_dim + isotropy_dim = dim g` holds exactly.
fn orbit_and_isotropy(ctx: &Context, frame: &Frame) -> (usize, RMat) {
    let h = frame.horizontal();
    let iso = linalg::null_space(&h, ctx.tol.rank);
    (h.ncols() - iso.ncols(), iso)
}

pub fn orbit_dimension(ctx: &Context, r: &MatrixRep, s: &PhaseSpace, p: &PointState) -> Result<usize> {
    let f = generating_frame(r, s, p)?;
    Ok(orbit_and_isotropy(ctx, &f).0)
}

/// Coefficient vectors (columns) spanning the isotropy algebra.
pub fn isotropy_algebra(ctx: &Context, r: &MatrixRep, s: &PhaseSpace, p: &PointState) -> Result<RMat> {
    let f = generating_frame(r, s, p)?;
    Ok(orbit_and_isotropy(ctx, &f).1)
}

/// Largest `|omega(xi_a, xi_b)|` over pairs of generators.
pub fn omega_on_orbit(ctx: &Context, r: &MatrixRep, s: &PhaseSpace, p: &PointState) -> Result<f64> {
    check_dims(r, s)?;
    let z = p.coords();
    let xi: Vec<CVec> = r.basis().iter().map(|x| x * z).collect();
    let proj = s.kind == SpaceKind::Projective;
    let along: Vec<Complex64> = if proj { xi.iter().map(|v| herm(v, z)).collect() } else { Vec::new() };
    let mut worst: f64 = 0.0;
    for a in 0..xi.len() {
        for b in (a + 1)..xi.len() {
            let mut w = herm(&xi[a], &xi[b]);
            if proj {
                w -= along[a] * along[b].conj();
            }
            worst = worst.max((ctx.omega_scale() * w.im).abs());
        }
    }
    Ok(worst)
}

/// `dim(z(g) ∩ s)` where `g = g_x + m` B-orthogonally and
/// `s = {v in m : [v, g_x] = 0}`.
pub fn moduli_dimension(ctx: &Context, r: &MatrixRep, s: &PhaseSpace, p: &PointState) -> Result<usize> {
    let report = orbit_report(ctx, r, s, p)?;
    if !report.is_lagrangian {
        return Err(Error::NotLagrangian);
    }
    let iso = isotropy_algebra(ctx, r, s, p)?;
    moduli_from_isotropy(ctx, r, &iso)
}

fn moduli_from_isotropy(ctx: &Context, r: &MatrixRep, iso: &RMat) -> Result<usize> {
    if !r.gram_definite() {
        return Err(Error::IndefiniteGram);
    }
    let n = r.dim_g();
    let m = if iso.ncols() == 0 {
        RMat::identity(n, n)
    } else {
        linalg::null_space(&(iso.transpose() * r.gram()), ctx.tol.rank)
    };
    let s_basis = if iso.ncols() == 0 || m.ncols() == 0 {
        m
    } else {
        let sc = r.structure();
        let mut rows = RMat::zeros(n * iso.ncols(), m.ncols());
        for (j, h) in iso.column_iter().enumerate() {
            let h: Vec<f64> = h.iter().copied().collect();
            let block = sc.right_ad(&h) * &m;
            rows.view_mut((j * n, 0), (n, m.ncols())).copy_from(&block);
        }
        let c = linalg::null_space(&rows, ctx.tol.rank);
        &m * c
    };
    let z = r.center();
    let joint = linalg::joint_rank(z, &s_basis, ctx.tol.rank);
    Ok(z.ncols() + s_basis.ncols() - joint)
}

/// Whether the derived subalgebra alone already spans the orbit tangent.
fn ss_transitive(ctx: &Context, r: &MatrixRep, frame: &Frame, orbit_dim: usize) -> bool {
    let h = frame.horizontal();
    let restricted = h * r.derived();
    linalg::numerical_rank(&restricted, ctx.tol.rank) == orbit_dim
}

/// Orbit data without the moduli and isolation analysis.
fn orbit_report(ctx: &Context, r: &MatrixRep, s: &PhaseSpace, p: &PointState) -> Result<OrbitReport> {
    let frame = generating_frame(r, s, p)?;
    let (orbit_dim, iso) = orbit_and_isotropy(ctx, &frame);
    let mu = moment_map(ctx, r, s, p)?;
    let omega = omega_on_orbit(ctx, r, s, p)?;
    let half = s.half_dim();
    let tol = ctx.lagrangian_tol();
    let by_omega = orbit_dim == half && omega <= tol;
    let by_defect = orbit_dim == half && mu.central_defect <= tol;
    if by_omega != by_defect {
        return Err(Error::InconsistentCriteria {
            omega,
            defect: mu.central_defect,
        });
    }
    let mut notes = Vec::new();
    if orbit_dim == 0 {
        notes.push("point is fixed by the whole group".into());
    }
    notes.extend(r.warnings().iter().cloned());
    Ok(OrbitReport {
        orbit_dim,
        half_dim: half,
        isotropy_dim: iso.ncols(),
        isotropy_basis: iso.column_iter().map(|c| c.iter().copied().collect()).collect(),
        mu,
        omega_residual: omega,
        is_lagrangian: by_omega,
        moduli_dim: None,
        isolated_by_thm1: None,
        ss_transitive: None,
        notes,
    })
}

/// Full verdict. Moduli and isolation fields are filled for Lagrangian
/// orbits; a disagreement between the two isolation criteria is kept as a
/// note with both values reported.
pub fn lagrangian_verdict(ctx: &Context, r: &MatrixRep, s: &PhaseSpace, p: &PointState) -> Result<OrbitReport> {
    let mut report = orbit_report(ctx, r, s, p)?;
    if !report.is_lagrangian {
        return Ok(report);
    }
    let frame = generating_frame(r, s, p)?;
    let (orbit_dim, iso) = orbit_and_isotropy(ctx, &frame);
    let transitive = ss_transitive(ctx, r, &frame, orbit_dim);
    report.ss_transitive = Some(transitive);
    match moduli_from_isotropy(ctx, r, &iso) {
        Ok(m) => {
            report.moduli_dim = Some(m);
            report.isolated_by_thm1 = Some(m == 0);
            if (m == 0) != transitive {
                report.notes.push(format!(
                    "isolation criteria disagree: moduli dimension {m}, semisimple part transitive = {transitive}"
                ));
            }
        }
        Err(e) => report.notes.push(format!("moduli dimension unavailable: {e}")),
    }
    Ok(report)
}

/// `(isolated by the moduli count, semisimple part transitive)`; the two
/// must agree on a Lagrangian orbit.
pub fn isolation_equivalence(ctx: &Context, r: &MatrixRep, s: &PhaseSpace, p: &PointState) -> Result<(bool, bool)> {
    let report = orbit_report(ctx, r, s, p)?;
    if !report.is_lagrangian {
        return Err(Error::NotLagrangian);
    }
    let frame = generating_frame(r, s, p)?;
    let (orbit_dim, iso) = orbit_and_isotropy(ctx, &frame);
    let moduli = moduli_from_isotropy(ctx, r, &iso)?;
    let transitive = ss_transitive(ctx, r, &frame, orbit_dim);
    if (moduli == 0) != transitive {
        return Err(Error::IsolationDisagreement {
            moduli,
            ss_transitive: transitive,
        });
    }
    Ok((moduli == 0, transitive))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::liealg::{circle, eval_rep_expr, so, su, FactorSpec, GroupSpec, RepExpr};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn point(s: &PhaseSpace, v: &[Complex64]) -> PointState {
        PointState::new(s, CVec::from_column_slice(v)).unwrap()
    }

    fn example_qui() -> MatrixRep {
        let g = GroupSpec::new(vec![FactorSpec::Circle(vec![-1, 0]), FactorSpec::Su(2)]);
        eval_rep_expr(&g, &RepExpr::Sum(vec![RepExpr::def(1), RepExpr::def(1)])).unwrap()
    }

    fn qui_point(s: &PhaseSpace) -> PointState {
        point(s, &[c(1., 0.), c(1., 0.), c(1., 0.), c(-1., 0.)])
    }

    fn torus(n: usize) -> MatrixRep {
        let basis = (0..n)
            .map(|j| {
                let mut m = CMat::zeros(n, n);
                m[(j, j)] = I;
                m
            })
            .collect();
        MatrixRep::from_matrices(basis, (0..n).map(|j| format!("t{j}")).collect()).unwrap()
    }

    #[test]
    fn cp4_fixed_point_moment_is_one_half() {
        let r = circle(&[-1, 0, 0, 0, 0]).unwrap();
        let s = PhaseSpace::projective(5);
        let p = point(&s, &[c(1., 0.), c(0., 0.), c(0., 0.), c(0., 0.), c(0., 0.)]);
        let mu = moment_map(&Context::default(), &r, &s, &p).unwrap();
        assert!((mu.full[0] - 0.5).abs() < 1e-15);
    }

    #[test]
    fn moment_vanishes_at_origin() {
        let r = su(3).unwrap();
        let s = PhaseSpace::linear(3);
        let p = point(&s, &[c(0., 0.); 3]);
        let mu = moment_map(&Context::default(), &r, &s, &p).unwrap();
        assert!(mu.full.iter().all(|&v| v == 0.0));
        let rep = lagrangian_verdict(&Context::default(), &r, &s, &p).unwrap();
        assert_eq!(rep.orbit_dim, 0);
        assert_eq!(rep.isotropy_dim, 8);
        assert!(!rep.is_lagrangian);
    }

    #[test]
    fn example_qui_is_lagrangian_with_one_modulus() {
        let r = example_qui();
        let s = PhaseSpace::linear(4);
        let p = qui_point(&s);
        let ctx = Context::default();
        let mu = moment_map(&ctx, &r, &s, &p).unwrap();
        assert!(mu.central_defect < 1e-12);
        assert!(mu.ss_part.iter().all(|v| v.abs() < 1e-12));
        let rep = lagrangian_verdict(&ctx, &r, &s, &p).unwrap();
        assert!(rep.is_lagrangian);
        assert_eq!(rep.orbit_dim, 4);
        assert_eq!(rep.moduli_dim, Some(1));
        assert_eq!(rep.isolated_by_thm1, Some(false));
        assert_eq!(rep.ss_transitive, Some(false));
        assert_eq!(isolation_equivalence(&ctx, &r, &s, &p).unwrap(), (false, false));
    }

    #[test]
    fn torus_orbit_through_ones() {
        let n = 3;
        let r = torus(n);
        let s = PhaseSpace::linear(n);
        let p = point(&s, &vec![c(1., 0.); n]);
        let ctx = Context::default();
        assert_eq!(orbit_dimension(&ctx, &r, &s, &p).unwrap(), n);
        assert!(omega_on_orbit(&ctx, &r, &s, &p).unwrap() < 1e-12);
        assert_eq!(moduli_dimension(&ctx, &r, &s, &p).unwrap(), n);
    }

    #[test]
    fn frame_of_circle_at_basis_vector() {
        let r = circle(&[1, 0]).unwrap();
        let s = PhaseSpace::linear(2);
        let p = point(&s, &[c(1., 0.), c(0., 0.)]);
        let f = generating_frame(&r, &s, &p).unwrap();
        let v = linalg::complexify(&f.vectors.column(0).into_owned());
        assert_eq!(v[0], I);
        assert_eq!(v[1], c(0., 0.));
    }

    #[test]
    fn su2_on_c2_is_not_isotropic() {
        let r = su(2).unwrap();
        let s = PhaseSpace::linear(2);
        let p = point(&s, &[c(1., 0.), c(0., 0.)]);
        let ctx = Context::default();
        let f = generating_frame(&r, &s, &p).unwrap();
        assert_eq!(linalg::numerical_rank(&f.vectors, 1e-8), 3);
        assert!(omega_on_orbit(&ctx, &r, &s, &p).unwrap() > 0.1);
    }

    #[test]
    fn so3_on_cp2_real_point() {
        let r = so(3).unwrap();
        let s = PhaseSpace::projective(3);
        let p = point(&s, &[c(1., 0.), c(0., 0.), c(0., 0.)]);
        let ctx = Context::default();
        let rep = lagrangian_verdict(&ctx, &r, &s, &p).unwrap();
        assert_eq!(rep.orbit_dim, 2);
        assert!(rep.is_lagrangian);
        assert_eq!(rep.moduli_dim, Some(0));
        assert_eq!(isolation_equivalence(&ctx, &r, &s, &p).unwrap(), (true, true));
    }

    #[test]
    fn su_n_defining_plus_dual() {
        for n in 3..=5 {
            let g = GroupSpec::new(vec![FactorSpec::Su(n)]);
            let r = eval_rep_expr(&g, &RepExpr::Sum(vec![RepExpr::def(0), RepExpr::dual(RepExpr::def(0))])).unwrap();
            let s = PhaseSpace::projective(2 * n);
            let mut v = vec![c(0., 0.); 2 * n];
            v[0] = c(1., 0.);
            v[n] = c(1., 0.);
            let p = point(&s, &v);
            let ctx = Context::default();
            assert!(omega_on_orbit(&ctx, &r, &s, &p).unwrap() < 1e-10);
            let rep = lagrangian_verdict(&ctx, &r, &s, &p).unwrap();
            assert!(rep.is_lagrangian);
            assert_eq!(rep.orbit_dim, 2 * n - 1);
            assert_eq!(rep.isotropy_dim, n * n - 1 - (2 * n - 1));
        }
    }

    #[test]
    fn zero_projective_point_and_length_mismatch() {
        let s = PhaseSpace::projective(2);
        assert_eq!(
            PointState::new(&s, CVec::zeros(2)).unwrap_err(),
            Error::ZeroProjectivePoint
        );
        assert!(matches!(
            PointState::new(&s, CVec::zeros(3)),
            Err(Error::DimensionMismatch { expected: 2, got: 3 })
        ));
    }

    #[test]
    fn half_dimensions() {
        assert_eq!(PhaseSpace::linear(4).real_dim(), 8);
        assert_eq!(PhaseSpace::projective(4).real_dim(), 6);
        assert_eq!(PhaseSpace::product_with_line(4).real_dim(), 10);
    }

    #[test]
    fn non_lagrangian_input_to_moduli_is_rejected() {
        let r = su(2).unwrap();
        let s = PhaseSpace::projective(2);
        let p = point(&s, &[c(1., 0.), c(0., 0.)]);
        assert_eq!(
            moduli_dimension(&Context::default(), &r, &s, &p).unwrap_err(),
            Error::NotLagrangian
        );
    }
}
