//! Matrix representations of compact Lie algebras.
//!
//! A [`MatrixRep`] is a list of skew-hermitian matrices closing under the
//! commutator. On construction it records structure constants, the center,
//! the derived subalgebra and the invariant form `B(X, Y) = -Re tr(XY)`.

mod classical;
mod expr;
mod g2;
mod spin;

pub use classical::{build_classical, circle, so, sp, su, symplectic_form, Family};
pub use expr::{eval_rep_expr, ExprError, ExteriorBasis, FactorSpec, GroupSpec, RepExpr, SymmetricBasis};
pub use g2::{build_g2, octonion_product, octonion_three_form};
pub use spin::{build_spin, Chirality, SpinModule};

use crate::error::{Error, Result};
use crate::linalg::{self, frob_pair, CMat, RMat, SparseOp};
use crate::tol::Tolerances;

/// Dense structure constants `c[a][b][k]`, `[X_a, X_b] = sum_k c[a][b][k] X_k`.
#[derive(Debug, Clone, PartialEq)]
pub struct StructureConstants {
    n: usize,
    data: Vec<f64>,
}

impl StructureConstants {
    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            data: vec![0.0; n * n * n],
        }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, a: usize, b: usize, k: usize) -> f64 {
        self.data[(a * self.n + b) * self.n + k]
    }

    pub fn set(&mut self, a: usize, b: usize, k: usize, v: f64) {
        let n = self.n;
        self.data[(a * n + b) * n + k] = v;
    }

    /// Coefficients of `[x, y]` for coefficient vectors `x`, `y`.
    pub fn bracket(&self, x: &[f64], y: &[f64]) -> Vec<f64> {
        let n = self.n;
        let mut out = vec![0.0; n];
        for a in 0..n {
            if x[a] == 0.0 {
                continue;
            }
            for b in 0..n {
                let w = x[a] * y[b];
                if w == 0.0 {
                    continue;
                }
                let row = &self.data[(a * n + b) * n..(a * n + b + 1) * n];
                for (o, c) in out.iter_mut().zip(row) {
                    *o += w * c;
                }
            }
        }
        out
    }

    /// Matrix of `ad(h) restricted`: column `a` holds the coefficients of `[X_a, h]`.
    pub fn right_ad(&self, h: &[f64]) -> RMat {
        let n = self.n;
        let mut m = RMat::zeros(n, n);
        for a in 0..n {
            for (b, &hb) in h.iter().enumerate() {
                if hb == 0.0 {
                    continue;
                }
                for k in 0..n {
                    m[(k, a)] += hb * self.get(a, b, k);
                }
            }
        }
        m
    }

    /// Block-diagonal sum: the algebra `self ⊕ other`.
    pub fn direct_sum(&self, other: &StructureConstants) -> Self {
        let n = self.n + other.n;
        let mut out = Self::zeros(n);
        for a in 0..self.n {
            for b in 0..self.n {
                for k in 0..self.n {
                    out.set(a, b, k, self.get(a, b, k));
                }
            }
        }
        let o = self.n;
        for a in 0..other.n {
            for b in 0..other.n {
                for k in 0..other.n {
                    out.set(o + a, o + b, o + k, other.get(a, b, k));
                }
            }
        }
        out
    }
}

/// A validated skew-hermitian representation of a compact Lie algebra.
#[derive(Debug, Clone)]
pub struct MatrixRep {
    dim_v: usize,
    basis: Vec<CMat>,
    labels: Vec<String>,
    structure: StructureConstants,
    center: RMat,
    derived: RMat,
    gram: RMat,
    gram_definite: bool,
    warnings: Vec<String>,
}

impl MatrixRep {
    /// Build from matrices alone, solving for structure constants. The
    /// matrices must be linearly independent (faithful representation).
    pub fn from_matrices(basis: Vec<CMat>, labels: Vec<String>) -> Result<Self> {
        let sc = structure_from_matrices(&basis)?;
        Self::from_parts(basis, labels, sc)
    }

    /// Build from matrices and known abstract structure constants; the
    /// bracket closure is verified against the matrices.
    pub fn from_parts(basis: Vec<CMat>, labels: Vec<String>, structure: StructureConstants) -> Result<Self> {
        let tol = Tolerances::default();
        let n = basis.len();
        if n == 0 {
            return Err(Error::InvalidRep("empty basis".into()));
        }
        if labels.len() != n || structure.dim() != n {
            return Err(Error::InvalidRep("basis, labels and structure constants disagree in length".into()));
        }
        let dim_v = basis[0].nrows();
        if dim_v == 0 {
            return Err(Error::InvalidRep("zero-dimensional module".into()));
        }
        for (m, label) in basis.iter().zip(&labels) {
            if m.nrows() != dim_v || m.ncols() != dim_v {
                return Err(Error::InvalidRep(format!("basis matrix {label} has the wrong shape")));
            }
            let r = linalg::frobenius(&(m + m.adjoint()));
            if r > tol.skew.max(tol.skew * linalg::frobenius(m)) {
                return Err(Error::InvalidRep(format!("basis matrix {label} is not skew-hermitian (residual {r:e})")));
            }
        }
        for a in 0..n {
            for b in a..n {
                for k in 0..n {
                    if (structure.get(a, b, k) + structure.get(b, a, k)).abs() > 1e-12 {
                        return Err(Error::InvalidRep("structure constants are not antisymmetric".into()));
                    }
                }
            }
        }
        check_closure(&basis, &structure, tol.closure)?;

        let gram = RMat::from_fn(n, n, |a, b| -frob_pair(&basis[a].adjoint(), &basis[b]));
        let gram_eigs = gram.clone().symmetric_eigen().eigenvalues;
        let top = gram_eigs.iter().copied().fold(0.0, f64::max);
        let gram_definite = gram_eigs.iter().all(|&e| e > tol.rank * top.max(1.0));
        let mut warnings = Vec::new();
        if !gram_definite {
            warnings.push("invariant form is degenerate: representation is not faithful; center computed in the abstract algebra".into());
        }
        let (center, derived) = center_and_derived_bases(&structure, &gram, gram_definite, tol.rank);
        Ok(Self {
            dim_v,
            basis,
            labels,
            structure,
            center,
            derived,
            gram,
            gram_definite,
            warnings,
        })
    }

    pub fn dim_v(&self) -> usize {
        self.dim_v
    }

    pub fn dim_g(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[CMat] {
        &self.basis
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn structure(&self) -> &StructureConstants {
        &self.structure
    }

    /// Center basis as coefficient columns, B-orthonormal when B is definite.
    pub fn center(&self) -> &RMat {
        &self.center
    }

    /// Derived-subalgebra basis as coefficient columns, B-orthonormal when B is definite.
    pub fn derived(&self) -> &RMat {
        &self.derived
    }

    pub fn gram(&self) -> &RMat {
        &self.gram
    }

    pub fn gram_definite(&self) -> bool {
        self.gram_definite
    }

    pub fn warnings(&self) -> &[String] {
        &self.warnings
    }

    pub fn is_semisimple(&self) -> bool {
        self.center.ncols() == 0
    }

    /// The matrix `sum_a c_a X_a`.
    pub fn element(&self, coeffs: &[f64]) -> CMat {
        let mut m = CMat::zeros(self.dim_v, self.dim_v);
        for (c, x) in coeffs.iter().zip(&self.basis) {
            if *c != 0.0 {
                m += x * num_complex::Complex64::new(*c, 0.0);
            }
        }
        m
    }

    /// `B(x, y)` for coefficient vectors.
    pub fn killing(&self, x: &[f64], y: &[f64]) -> f64 {
        let n = self.dim_g();
        let mut s = 0.0;
        for a in 0..n {
            for b in 0..n {
                s += x[a] * self.gram[(a, b)] * y[b];
            }
        }
        s
    }

    /// Largest closure residual `||[X_a, X_b] - sum_k c_abk X_k||_F`, scaled by
    /// `max(1, ||X_a|| ||X_b||)`.
    pub fn closure_residual(&self) -> f64 {
        closure_residual(&self.basis, &self.structure)
    }

    /// Direct sum of algebras acting on the direct sum of modules.
    pub fn direct_sum(&self, other: &MatrixRep) -> Result<MatrixRep> {
        let d = self.dim_v + other.dim_v;
        let mut basis = Vec::with_capacity(self.dim_g() + other.dim_g());
        for x in &self.basis {
            let mut m = CMat::zeros(d, d);
            m.view_mut((0, 0), (self.dim_v, self.dim_v)).copy_from(x);
            basis.push(m);
        }
        for x in &other.basis {
            let mut m = CMat::zeros(d, d);
            m.view_mut((self.dim_v, self.dim_v), (other.dim_v, other.dim_v)).copy_from(x);
            basis.push(m);
        }
        let labels = self.labels.iter().chain(&other.labels).cloned().collect();
        MatrixRep::from_parts(basis, labels, self.structure.direct_sum(&other.structure))
    }

    /// Same algebra acting on `V ⊕ C^extra` (trivially on the new slots).
    pub fn pad_trivial(&self, extra: usize) -> Result<MatrixRep> {
        let d = self.dim_v + extra;
        let basis = self
            .basis
            .iter()
            .map(|x| {
                let mut m = CMat::zeros(d, d);
                m.view_mut((0, 0), (self.dim_v, self.dim_v)).copy_from(x);
                m
            })
            .collect();
        MatrixRep::from_parts(basis, self.labels.clone(), self.structure.clone())
    }

    /// Append commuting abelian generators (e.g. circles) acting by the
    /// given matrices. Fails unless each new matrix commutes with every
    /// existing generator and with each other.
    pub fn with_central_generators(&self, extra: Vec<(String, CMat)>, tol: f64) -> Result<MatrixRep> {
        let mut worst: f64 = 0.0;
        for (_, c) in &extra {
            for x in self.basis.iter().chain(extra.iter().map(|(_, m)| m)) {
                worst = worst.max(linalg::frobenius(&linalg::commutator(c, x)));
            }
        }
        if worst > tol {
            return Err(Error::CircleNotCentral(worst));
        }
        let n = self.dim_g();
        let m = n + extra.len();
        let mut sc = StructureConstants::zeros(m);
        for a in 0..n {
            for b in 0..n {
                for k in 0..n {
                    sc.set(a, b, k, self.structure.get(a, b, k));
                }
            }
        }
        let mut basis = self.basis.clone();
        let mut labels = self.labels.clone();
        for (l, c) in extra {
            basis.push(c);
            labels.push(l);
        }
        MatrixRep::from_parts(basis, labels, sc)
    }
}

fn sparse_basis(basis: &[CMat]) -> Vec<SparseOp> {
    basis.iter().map(|m| SparseOp::from_dense(m, 0.0)).collect()
}

fn frob_gram(basis: &[CMat]) -> RMat {
    let n = basis.len();
    RMat::from_fn(n, n, |a, b| frob_pair(&basis[a], &basis[b]))
}

fn structure_from_matrices(basis: &[CMat]) -> Result<StructureConstants> {
    let n = basis.len();
    if n == 0 {
        return Err(Error::InvalidRep("empty basis".into()));
    }
    let d = basis[0].nrows();
    let gram = frob_gram(basis);
    let eig = gram.clone().symmetric_eigenvalues();
    let top = eig.iter().cloned().fold(0.0, f64::max);
    if eig.iter().any(|&e| e <= 1e-10 * top.max(1.0)) {
        return Err(Error::InvalidRep("basis matrices are linearly dependent".into()));
    }
    let chol = gram
        .clone()
        .cholesky()
        .ok_or_else(|| Error::InvalidRep("basis matrices are linearly dependent".into()))?;
    let sparse = sparse_basis(basis);
    let mut sc = StructureConstants::zeros(n);
    let mut buf = CMat::zeros(d, d);
    for a in 0..n {
        for b in (a + 1)..n {
            sparse[a].mul_into(&sparse[b], &mut buf, 1.0, false);
            sparse[b].mul_into(&sparse[a], &mut buf, -1.0, true);
            let rhs = nalgebra::DVector::from_iterator(n, sparse.iter().map(|x| x.pair_dense(&buf)));
            let c = chol.solve(&rhs);
            for k in 0..n {
                let v = if c[k].abs() < 1e-14 { 0.0 } else { c[k] };
                sc.set(a, b, k, v);
                sc.set(b, a, k, -v);
            }
        }
    }
    Ok(sc)
}

fn closure_residual(basis: &[CMat], sc: &StructureConstants) -> f64 {
    let n = basis.len();
    let d = basis[0].nrows();
    let sparse = sparse_basis(basis);
    let norms: Vec<f64> = basis.iter().map(linalg::frobenius).collect();
    let mut buf = CMat::zeros(d, d);
    let mut worst: f64 = 0.0;
    for a in 0..n {
        for b in (a + 1)..n {
            sparse[a].mul_into(&sparse[b], &mut buf, 1.0, false);
            sparse[b].mul_into(&sparse[a], &mut buf, -1.0, true);
            for k in 0..n {
                let c = sc.get(a, b, k);
                if c != 0.0 {
                    sparse[k].sub_scaled_from(&mut buf, c);
                }
            }
            let r = linalg::frobenius(&buf) / (norms[a] * norms[b]).max(1.0);
            worst = worst.max(r);
        }
    }
    worst
}

fn check_closure(basis: &[CMat], sc: &StructureConstants, tol: f64) -> Result<()> {
    let r = closure_residual(basis, sc);
    if r > tol {
        return Err(Error::InvalidRep(format!("bracket closure residual {r:e} exceeds {tol:e}")));
    }
    Ok(())
}

/// Center and derived subalgebra of the abstract algebra given by `sc`,
/// returned as coefficient bases. When `gram` is definite both bases are
/// B-orthonormal; otherwise they are Euclidean-orthonormal.
pub fn center_and_derived_bases(sc: &StructureConstants, gram: &RMat, definite: bool, rel: f64) -> (RMat, RMat) {
    let n = sc.dim();
    // center: x with [x, X_a] = 0 for all a; rows indexed by (a, k)
    let mut ad = RMat::zeros(n * n, n);
    for a in 0..n {
        for b in 0..n {
            for k in 0..n {
                ad[(a * n + k, b)] = sc.get(b, a, k);
            }
        }
    }
    let center = linalg::null_space(&ad, rel);
    let mut brackets = RMat::zeros(n, n * (n.saturating_sub(1)) / 2);
    let mut col = 0;
    for a in 0..n {
        for b in (a + 1)..n {
            for k in 0..n {
                brackets[(k, col)] = sc.get(a, b, k);
            }
            col += 1;
        }
    }
    let derived = linalg::column_space(&brackets, rel);
    let metric = if definite { gram.clone() } else { RMat::identity(n, n) };
    (
        adapted_orthonormal(&center, &metric, rel),
        adapted_orthonormal(&derived, &metric, rel),
    )
}

/// Orthonormalize (in `metric`) the projections of the coordinate vectors
/// onto span(q). Coordinate-aligned subspaces come back with sparse columns.
pub fn adapted_orthonormal(q: &RMat, metric: &RMat, rel: f64) -> RMat {
    let n = q.nrows();
    let r = q.ncols();
    if r == 0 {
        return RMat::zeros(n, 0);
    }
    let proj = q * q.transpose();
    let mut out: Vec<nalgebra::DVector<f64>> = Vec::with_capacity(r);
    for a in 0..n {
        if out.len() == r {
            break;
        }
        let mut v = proj.column(a).into_owned();
        let top = v.amax();
        if top == 0.0 {
            continue;
        }
        v.iter_mut().for_each(|x| {
            if x.abs() < 1e-12 * top {
                *x = 0.0
            }
        });
        for _ in 0..2 {
            for u in &out {
                let c = (u.transpose() * metric * &v)[0];
                v -= u * c;
            }
        }
        let nrm2 = (v.transpose() * metric * &v)[0];
        if nrm2 > (rel * 1e2).powi(2) {
            v /= nrm2.sqrt();
            v.iter_mut().for_each(|x| {
                if x.abs() < 1e-14 {
                    *x = 0.0
                }
            });
            out.push(v);
        }
    }
    RMat::from_columns(&out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn structure_of_su2_is_cross_product_like() {
        let r = su(2).unwrap();
        assert_eq!(r.dim_g(), 3);
        // every bracket of two distinct generators lands on the third
        for a in 0..3 {
            for b in 0..3 {
                if a != b {
                    let k = 3 - a - b;
                    assert!(r.structure().get(a, b, k).abs() > 0.5);
                }
            }
        }
        assert!(r.closure_residual() < 1e-12);
    }

    #[test]
    fn center_and_derived_of_u1_times_su2() {
        let rep = circle(&[1, 1]).unwrap().direct_sum(&su(2).unwrap()).unwrap();
        assert_eq!(rep.center().ncols(), 1);
        assert_eq!(rep.derived().ncols(), 3);
        assert!(!rep.is_semisimple());
    }

    #[test]
    fn adapted_basis_is_b_orthonormal() {
        let rep = su(3).unwrap();
        let d = rep.derived();
        let g = d.transpose() * rep.gram() * d;
        assert!((g - RMat::identity(8, 8)).norm() < 1e-12);
    }

    #[test]
    fn linearly_dependent_basis_is_rejected() {
        let x = su(2).unwrap().basis()[0].clone();
        let err = MatrixRep::from_matrices(vec![x.clone(), x], vec!["a".into(), "b".into()]).unwrap_err();
        assert!(matches!(err, Error::InvalidRep(_)));
    }

    #[test]
    fn non_skew_matrix_is_rejected() {
        let m = CMat::identity(2, 2);
        assert!(MatrixRep::from_matrices(vec![m], vec!["x".into()]).is_err());
    }

    #[test]
    fn central_generator_must_commute() {
        let rep = su(2).unwrap();
        let bad = crate::linalg::CMat::from_diagonal(&nalgebra::DVector::from_vec(vec![
            crate::linalg::I,
            crate::linalg::I * 2.0,
        ]));
        assert!(matches!(
            rep.with_central_generators(vec![("t".into(), bad)], 1e-12),
            Err(Error::CircleNotCentral(_))
        ));
    }
}
