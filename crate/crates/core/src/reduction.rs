//! Reduction, cut, weighted-projective and slice checks, all evaluated
//! upstairs on a linear space with the reducing circles added to the group.
//!
//! A circle with integer weights `w` acts by `i diag(w)`; its moment is
//! `psi(z) = -s sum w_j |z_j|^2`, so negative weights give positive levels.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::liealg::MatrixRep;
use crate::linalg::{self, CMat, CVec, I};
use crate::symcheck::{self, lagrangian_verdict, Context, OrbitReport, PhaseSpace, PointState, SpaceKind};

/// A circle acting diagonally on the module, with a moment level.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CircleData {
    /// One weight per coordinate slot.
    pub weights: Vec<i64>,
    pub level: f64,
}

impl CircleData {
    pub fn new(weights: Vec<i64>, level: f64) -> Self {
        Self { weights, level }
    }

    /// Weights `w1` on the first `split` slots and `w2` on the remaining ones.
    pub fn two_blocks(split: usize, dim: usize, w1: i64, w2: i64, level: f64) -> Self {
        let weights = (0..dim).map(|j| if j < split { w1 } else { w2 }).collect();
        Self { weights, level }
    }

    pub fn generator(&self) -> CMat {
        let d = nalgebra::DVector::from_iterator(self.weights.len(), self.weights.iter().map(|&w| I * w as f64));
        CMat::from_diagonal(&d)
    }

    /// `psi(z)` under the context's moment scale.
    pub fn moment(&self, ctx: &Context, z: &CVec) -> f64 {
        symcheck::moment_component(ctx, &self.generator(), z)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LiftReport {
    pub upstairs_space: PhaseSpace,
    pub upstairs: OrbitReport,
    /// Indices of the reducing circles in the upstairs algebra basis
    /// (circles already spanned by the group are not added twice).
    pub circle_generators: Vec<usize>,
    /// Number of circles the downstairs space is reduced by.
    pub reducing_circles: usize,
    pub level_residual: f64,
    pub circle_isotropy_finite: bool,
    pub reduced_orbit_dim: usize,
    pub reduced_half_dim: usize,
    /// Isotropy dimension of the group alone at the base point (cuts only).
    pub base_isotropy_dim: Option<usize>,
    pub downstairs_claim: Option<String>,
}

fn check_central(k: &MatrixRep, c: &CMat, tol: f64) -> Result<()> {
    let worst = k
        .basis()
        .iter()
        .map(|x| linalg::frobenius(&linalg::commutator(c, x)))
        .fold(0.0, f64::max);
    if worst > tol {
        return Err(Error::CircleNotCentral(worst));
    }
    Ok(())
}

/// Append the circles that are not already in the span of `k`'s
/// generators; returns the new representation and their basis indices.
fn extend_with_circles(ctx: &Context, k: &MatrixRep, circles: Vec<(String, CMat)>) -> Result<(MatrixRep, Vec<usize>)> {
    let mut current = k.clone();
    let mut added = Vec::new();
    for (label, c) in circles {
        let n = current.dim_g();
        let dim = current.dim_v();
        let mut cols = linalg::RMat::zeros(2 * dim * dim, n + 1);
        let flat = |m: &CMat| linalg::realify(&CVec::from_iterator(dim * dim, m.iter().copied()));
        for (a, x) in current.basis().iter().enumerate() {
            cols.set_column(a, &flat(x));
        }
        cols.set_column(n, &flat(&c));
        if linalg::numerical_rank(&cols, ctx.tol.rank) == n {
            continue;
        }
        current = current.with_central_generators(vec![(label, c)], ctx.tol.centralizer)?;
        added.push(n);
    }
    Ok((current, added))
}

#[allow(clippy::too_many_arguments)]
fn finish(
    ctx: &Context,
    rep: &MatrixRep,
    space: PhaseSpace,
    point: &CVec,
    circle_generators: Vec<usize>,
    reducing: usize,
    level_residual: f64,
    moving: &[CMat],
    claim: String,
) -> Result<LiftReport> {
    let p = PointState::new(&space, point.clone())?;
    let up = lagrangian_verdict(ctx, rep, &space, &p)?;
    // each reducing circle must move the point, jointly with the others
    let mut cols = linalg::RMat::zeros(2 * point.len(), moving.len());
    for (j, c) in moving.iter().enumerate() {
        cols.set_column(j, &linalg::realify(&(c * point)));
    }
    let finite = linalg::numerical_rank(&cols, ctx.tol.rank) == moving.len();
    if !finite {
        return Err(Error::CircleInIsotropy);
    }
    let reduced_orbit_dim = up.orbit_dim.saturating_sub(reducing);
    let reduced_half_dim = up.half_dim.saturating_sub(reducing);
    let downstairs_claim = (up.is_lagrangian && level_residual <= ctx.tol.level && finite).then_some(claim);
    Ok(LiftReport {
        upstairs_space: space,
        upstairs: up,
        circle_generators,
        reducing_circles: reducing,
        level_residual,
        circle_isotropy_finite: finite,
        reduced_orbit_dim,
        reduced_half_dim,
        base_isotropy_dim: None,
        downstairs_claim,
    })
}

/// Reduction of `V` by one circle centralizing `k`: the orbit of
/// `T^1 . K` through `p` on `V` against `K[p]` in the reduced space.
pub fn reduction_lift(ctx: &Context, k: &MatrixRep, circle: &CircleData, p: &CVec) -> Result<LiftReport> {
    reduction_lift_named(ctx, k, circle, p, "M_lambda")
}

fn reduction_lift_named(ctx: &Context, k: &MatrixRep, circle: &CircleData, p: &CVec, reduced: &str) -> Result<LiftReport> {
    if circle.weights.len() != k.dim_v() {
        return Err(Error::DimensionMismatch {
            expected: k.dim_v(),
            got: circle.weights.len(),
        });
    }
    if p.len() != k.dim_v() {
        return Err(Error::DimensionMismatch {
            expected: k.dim_v(),
            got: p.len(),
        });
    }
    let c = circle.generator();
    check_central(k, &c, ctx.tol.centralizer)?;
    let residual = (circle.moment(ctx, p) - circle.level).abs();
    if residual > ctx.tol.level {
        return Err(Error::OffLevel(residual));
    }
    let (rep, added) = extend_with_circles(ctx, k, vec![("psi".into(), c.clone())])?;
    finish(
        ctx,
        &rep,
        PhaseSpace::linear(k.dim_v()),
        p,
        added,
        1,
        residual,
        &[c],
        format!("K[p] Lagrangian in {reduced}"),
    )
}

/// Whether the cut is taken on a linear space or on `P(V)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CutBase {
    Linear,
    Projective,
}

/// Moment coefficient of the cut line: the line carries weight `-1`, so its
/// moment is `c |z|^2` with `c` the moment scale.
pub fn line_coefficient(ctx: &Context) -> f64 {
    ctx.moment_scale
}

/// The positive real line coordinate putting `(m, z)` on the cut level.
/// `m` is normalized first for a projective base.
pub fn cut_line_for_level(ctx: &Context, base: CutBase, circle: &CircleData, m: &CVec) -> Result<f64> {
    let m = normalize_base(base, m)?;
    let gap = circle.level - circle.moment(ctx, &m);
    if gap <= 0.0 {
        return Err(Error::OffLevel(-gap));
    }
    Ok((gap / line_coefficient(ctx)).sqrt())
}

fn normalize_base(base: CutBase, m: &CVec) -> Result<CVec> {
    match base {
        CutBase::Linear => Ok(m.clone()),
        CutBase::Projective => {
            let n = m.norm();
            if n == 0.0 {
                return Err(Error::ZeroProjectivePoint);
            }
            Ok(m / Complex64::new(n, 0.0))
        }
    }
}

/// Cut of `M` (linear `V` or `P(V)`) by a circle centralizing `k`: the
/// `K`-orbit of `[m, z]` in the cut, checked upstairs on `V x C`.
pub fn cut_lift(
    ctx: &Context,
    k: &MatrixRep,
    base: CutBase,
    circle: &CircleData,
    m: &CVec,
    z_line: Complex64,
    cut_name: &str,
) -> Result<LiftReport> {
    let d = k.dim_v();
    if circle.weights.len() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            got: circle.weights.len(),
        });
    }
    if m.len() != d {
        return Err(Error::DimensionMismatch { expected: d, got: m.len() });
    }
    if z_line.norm() == 0.0 {
        return Err(Error::ExceptionalDivisor);
    }
    check_central(k, &circle.generator(), ctx.tol.centralizer)?;
    let m = normalize_base(base, m)?;
    let level = circle.moment(ctx, &m) + line_coefficient(ctx) * z_line.norm_sqr();
    let residual = (level - circle.level).abs();
    if residual > ctx.tol.level {
        return Err(Error::OffLevel(residual));
    }
    let padded = k.pad_trivial(1)?;
    let mut cut = CMat::zeros(d + 1, d + 1);
    for (j, &w) in circle.weights.iter().enumerate() {
        cut[(j, j)] = I * w as f64;
    }
    cut[(d, d)] = -I;
    let mut circles = vec![("cut".to_string(), cut)];
    if base == CutBase::Projective {
        let mut scalar = CMat::zeros(d + 1, d + 1);
        for j in 0..d {
            scalar[(j, j)] = -I;
        }
        circles.push(("scalar".to_string(), scalar));
    }
    let moving: Vec<CMat> = circles.iter().map(|(_, c)| c.clone()).collect();
    let reducing = circles.len();
    let (rep, added) = extend_with_circles(ctx, &padded, circles)?;
    let mut point = CVec::zeros(d + 1);
    point.rows_mut(0, d).copy_from(&m);
    point[d] = z_line;
    let mut report = finish(
        ctx,
        &rep,
        PhaseSpace::product_with_line(d),
        &point,
        added,
        reducing,
        residual,
        &moving,
        format!("K[m,z] Lagrangian in {cut_name}"),
    )?;
    let base_space = match base {
        CutBase::Linear => PhaseSpace::linear(d),
        CutBase::Projective => PhaseSpace::projective(d),
    };
    let bp = PointState::new(&base_space, m)?;
    report.base_isotropy_dim = Some(symcheck::isotropy_algebra(ctx, k, &base_space, &bp)?.ncols());
    Ok(report)
}

/// Weighted projective space `P(V1 + V2)_[k,s]` as the reduction of `V` by
/// the circle with weights `-k` on `V1` and `-s` on `V2` at level equal to
/// the moment scale; `p` is rescaled by `1/sqrt(k|v|^2 + s|w|^2)`.
pub fn weighted_projective_scenario(
    ctx: &Context,
    k: &MatrixRep,
    split: usize,
    weights: (u32, u32),
    p: &CVec,
) -> Result<LiftReport> {
    let (wk, ws) = weights;
    if wk == ws {
        return Err(Error::EqualWeights(wk));
    }
    if wk == 0 || ws == 0 {
        return Err(Error::InvalidRep("weights must be positive".into()));
    }
    let d = k.dim_v();
    if p.len() != d {
        return Err(Error::DimensionMismatch { expected: d, got: p.len() });
    }
    let pbar = weighted_normalize(p, split, weights)?;
    let circle = CircleData::two_blocks(split, d, -(wk as i64), -(ws as i64), ctx.moment_scale);
    reduction_lift_named(ctx, k, &circle, &pbar, &format!("P(V)_[{wk},{ws}]"))
}

/// `p / sqrt(k |v|^2 + s |w|^2)` with `v` the first `split` coordinates.
pub fn weighted_normalize(p: &CVec, split: usize, weights: (u32, u32)) -> Result<CVec> {
    let v = p.rows(0, split.min(p.len())).norm_squared();
    let w = p.rows(split.min(p.len()), p.len() - split.min(p.len())).norm_squared();
    let n = (weights.0 as f64 * v + weights.1 as f64 * w).sqrt();
    if n == 0.0 {
        return Err(Error::ZeroProjectivePoint);
    }
    Ok(p / Complex64::new(n, 0.0))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SliceStatus {
    Supported,
    NoConclusion,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SliceFinding {
    pub ambient: String,
    pub status: SliceStatus,
    pub slice: OrbitReport,
    pub finding: String,
}

/// Lagrangian check on the slice module at a fixed point. A negative result
/// is "no conclusion": the slice argument only runs one way.
pub fn slice_lift_report(
    ctx: &Context,
    slice_rep: &MatrixRep,
    space: &PhaseSpace,
    p: &PointState,
    ambient: &str,
) -> Result<SliceFinding> {
    let slice = lagrangian_verdict(ctx, slice_rep, space, p)?;
    let (status, finding) = if slice.is_lagrangian {
        (
            SliceStatus::Supported,
            format!("G admits a Lagrangian orbit on {ambient} (supported by the slice reduction)"),
        )
    } else {
        (
            SliceStatus::NoConclusion,
            format!(
                "no conclusion for {ambient}: slice orbit has dimension {}, half dimension is {}",
                slice.orbit_dim, slice.half_dim
            ),
        )
    };
    Ok(SliceFinding {
        ambient: ambient.to_string(),
        status,
        slice,
        finding,
    })
}

/// Convenience: the space kind of a lift's upstairs computation.
pub fn upstairs_kind(r: &LiftReport) -> SpaceKind {
    r.upstairs_space.kind
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::liealg::{eval_rep_expr, sp, su, FactorSpec, GroupSpec, RepExpr};

    fn c(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    fn basis_vec(d: usize, idx: &[usize]) -> CVec {
        let mut v = CVec::zeros(d);
        for &i in idx {
            v[i] = c(1.0);
        }
        v
    }

    #[test]
    fn su_n_scalar_circle_reduction_gives_projective_orbit() {
        // su(3) on C^3 is transitive on CP^2, so no Lagrangian orbit; use so(3)
        let k = crate::liealg::so(3).unwrap();
        let circle = CircleData::new(vec![-1, -1, -1], 0.5);
        let p = basis_vec(3, &[0]);
        let r = reduction_lift(&Context::default(), &k, &circle, &p).unwrap();
        assert!(r.upstairs.is_lagrangian);
        assert_eq!(r.reduced_orbit_dim, 2);
        assert_eq!(r.reduced_half_dim, 2);
        assert!(r.downstairs_claim.is_some());
        let su3 = su(3).unwrap();
        let r = reduction_lift(&Context::default(), &su3, &circle, &p).unwrap();
        assert!(!r.upstairs.is_lagrangian);
        assert!(r.downstairs_claim.is_none());
    }

    #[test]
    fn sp_weighted_lift_has_dimension_4n() {
        for n in 2..=3 {
            let g = GroupSpec::new(vec![FactorSpec::Sp(n)]);
            let k = eval_rep_expr(&g, &RepExpr::Sum(vec![RepExpr::def(0), RepExpr::def(0)])).unwrap();
            let p = basis_vec(4 * n, &[0, 2 * n + 1]);
            for ks in [(1, 2), (2, 3), (4, 1)] {
                let r = weighted_projective_scenario(&Context::default(), &k, 2 * n, ks, &p).unwrap();
                assert_eq!(r.upstairs.orbit_dim, 4 * n);
                assert!(r.upstairs.is_lagrangian);
                assert!(r.level_residual < 1e-12);
            }
        }
    }

    #[test]
    fn off_level_point_is_rejected() {
        let k = su(2).unwrap();
        let circle = CircleData::new(vec![-1, -1], 0.5);
        let err = reduction_lift(&Context::default(), &k, &circle, &basis_vec(2, &[0, 1])).unwrap_err();
        assert!(matches!(err, Error::OffLevel(_)));
    }

    #[test]
    fn non_central_circle_is_rejected() {
        let k = su(2).unwrap();
        let circle = CircleData::new(vec![-1, 0], 0.5);
        let err = reduction_lift(&Context::default(), &k, &circle, &basis_vec(2, &[0])).unwrap_err();
        assert!(matches!(err, Error::CircleNotCentral(_)));
    }

    #[test]
    fn equal_weights_are_rejected() {
        let k = sp(1).unwrap();
        let err = weighted_projective_scenario(&Context::default(), &k, 1, (2, 2), &basis_vec(2, &[0])).unwrap_err();
        assert_eq!(err, Error::EqualWeights(2));
    }

    #[test]
    fn cut_on_exceptional_divisor_is_rejected() {
        let k = su(2).unwrap();
        let circle = CircleData::new(vec![-1, -1], 0.45);
        let err = cut_lift(
            &Context::default(),
            &k,
            CutBase::Projective,
            &circle,
            &basis_vec(2, &[0]),
            c(0.0),
            "cut",
        )
        .unwrap_err();
        assert_eq!(err, Error::ExceptionalDivisor);
    }

    #[test]
    fn torus_blow_up_of_cp2() {
        // T^2 acting on CP^2 by [z0, t1^-1 z1, t2^-1 z2], cut by [t^-1 z0, z1, z2]
        let n = 2;
        let basis: Vec<CMat> = (1..=n)
            .map(|j| {
                let mut m = CMat::zeros(n + 1, n + 1);
                m[(j, j)] = -I;
                m
            })
            .collect();
        let k = MatrixRep::from_matrices(basis, vec!["t1".into(), "t2".into()]).unwrap();
        let ctx = Context::default();
        let circle = CircleData::new(vec![-1, 0, 0], 0.5 - 0.05);
        let m = basis_vec(3, &[0, 1, 2]);
        let z = cut_line_for_level(&ctx, CutBase::Projective, &circle, &m).unwrap();
        let r = cut_lift(&ctx, &k, CutBase::Projective, &circle, &m, c(z), "CP^2 blown up").unwrap();
        assert!(r.upstairs.is_lagrangian);
        assert_eq!(r.reduced_orbit_dim, 2);
        assert_eq!(r.upstairs.isotropy_dim, r.base_isotropy_dim.unwrap());
        assert!(r.downstairs_claim.is_some());
    }
}
