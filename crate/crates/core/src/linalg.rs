//! Dense linear algebra helpers: SVD-based rank and subspace extraction,
//! realification of complex vectors, and a small sparse operator used for
//! repeated matrix-vector products.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

pub type CMat = DMatrix<Complex64>;
pub type CVec = DVector<Complex64>;
pub type RMat = DMatrix<f64>;
pub type RVec = DVector<f64>;

pub const I: Complex64 = Complex64::new(0.0, 1.0);

/// Rank cutoff for a spectrum whose largest value is `sigma_max`.
pub fn rank_cutoff(sigma_max: f64, rel: f64) -> f64 {
    rel * sigma_max.max(1.0)
}

/// Singular values in descending order.
pub fn singular_values(a: &RMat) -> Vec<f64> {
    if a.nrows() == 0 || a.ncols() == 0 {
        return Vec::new();
    }
    let mut s: Vec<f64> = a.clone().svd(false, false).singular_values.iter().copied().collect();
    s.sort_by(|x, y| y.total_cmp(x));
    s
}

pub fn numerical_rank(a: &RMat, rel: f64) -> usize {
    let s = singular_values(a);
    let Some(&top) = s.first() else { return 0 };
    let cut = rank_cutoff(top, rel);
    s.iter().filter(|&&v| v >= cut).count()
}

/// Full right-singular basis of `a` (columns of V, descending singular
/// values) together with the rank. Rows are zero-padded so V is square.
fn right_basis(a: &RMat, rel: f64) -> (RMat, usize) {
    let n = a.ncols();
    let padded = if a.nrows() < n {
        let mut p = RMat::zeros(n, n);
        p.view_mut((0, 0), (a.nrows(), n)).copy_from(a);
        p
    } else {
        a.clone()
    };
    let svd = padded.svd(false, true);
    let vt = svd.v_t.expect("requested V");
    let mut order: Vec<usize> = (0..svd.singular_values.len()).collect();
    order.sort_by(|&x, &y| svd.singular_values[y].total_cmp(&svd.singular_values[x]));
    let top = order.first().map(|&i| svd.singular_values[i]).unwrap_or(0.0);
    let cut = rank_cutoff(top, rel);
    let rank = order
        .iter()
        .filter(|&&i| svd.singular_values[i] >= cut && top > 0.0)
        .count();
    let mut v = RMat::zeros(n, n);
    for (col, &i) in order.iter().enumerate() {
        v.set_column(col, &vt.row(i).transpose());
    }
    (v, rank)
}

/// Orthonormal basis (columns) of the null space of `a`.
pub fn null_space(a: &RMat, rel: f64) -> RMat {
    let n = a.ncols();
    if a.nrows() == 0 {
        return RMat::identity(n, n);
    }
    let (v, rank) = right_basis(a, rel);
    v.columns(rank, n - rank).into_owned()
}

/// Orthonormal basis (columns) of the column space of `a`.
pub fn column_space(a: &RMat, rel: f64) -> RMat {
    if a.ncols() == 0 || a.nrows() == 0 {
        return RMat::zeros(a.nrows(), 0);
    }
    let (v, rank) = right_basis(&a.transpose(), rel);
    v.columns(0, rank).into_owned()
}

/// Rank of the horizontal concatenation of two column sets.
pub fn joint_rank(a: &RMat, b: &RMat, rel: f64) -> usize {
    let mut m = RMat::zeros(a.nrows(), a.ncols() + b.ncols());
    m.view_mut((0, 0), (a.nrows(), a.ncols())).copy_from(a);
    m.view_mut((0, a.ncols()), (b.nrows(), b.ncols())).copy_from(b);
    numerical_rank(&m, rel)
}

/// Complex null space of `a`, orthonormal columns.
pub fn complex_null_space(a: &CMat, rel: f64) -> CMat {
    let n = a.ncols();
    if a.nrows() == 0 {
        return CMat::identity(n, n);
    }
    let padded = if a.nrows() < n {
        let mut p = CMat::zeros(n, n);
        p.view_mut((0, 0), (a.nrows(), n)).copy_from(a);
        p
    } else {
        a.clone()
    };
    let svd = padded.svd(false, true);
    let vt = svd.v_t.expect("requested V");
    let top = svd.singular_values.iter().copied().fold(0.0, f64::max);
    let cut = rank_cutoff(top, rel);
    let keep: Vec<usize> = (0..svd.singular_values.len())
        .filter(|&i| top == 0.0 || svd.singular_values[i] < cut)
        .collect();
    let mut out = CMat::zeros(n, keep.len());
    for (col, &i) in keep.iter().enumerate() {
        out.set_column(col, &vt.row(i).adjoint());
    }
    out
}

/// Interleaved real coordinates `(re_0, im_0, re_1, im_1, ...)`. The
/// Euclidean product of two realified vectors is `Re<u, v>`.
pub fn realify(v: &CVec) -> RVec {
    let mut out = RVec::zeros(2 * v.len());
    for (i, z) in v.iter().enumerate() {
        out[2 * i] = z.re;
        out[2 * i + 1] = z.im;
    }
    out
}

pub fn complexify(v: &RVec) -> CVec {
    CVec::from_iterator(v.len() / 2, (0..v.len() / 2).map(|i| Complex64::new(v[2 * i], v[2 * i + 1])))
}

/// Hermitian product, linear in the first slot.
pub fn herm(u: &CVec, v: &CVec) -> Complex64 {
    u.iter().zip(v.iter()).map(|(a, b)| a * b.conj()).sum()
}

pub fn frobenius(m: &CMat) -> f64 {
    m.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

pub fn commutator(a: &CMat, b: &CMat) -> CMat {
    a * b - b * a
}

/// `Re tr(a^H b)`, the real Frobenius pairing.
pub fn frob_pair(a: &CMat, b: &CMat) -> f64 {
    a.iter().zip(b.iter()).map(|(x, y)| (x.conj() * y).re).sum()
}

/// Sparse complex matrix stored as per-row entry lists.
#[derive(Debug, Clone)]
pub struct SparseOp {
    n: usize,
    rows: Vec<Vec<(usize, Complex64)>>,
}

impl SparseOp {
    /// Entries with modulus at most `drop * max|entry|` are discarded.
    pub fn from_dense(m: &CMat, drop: f64) -> Self {
        let top = m.iter().map(|z| z.norm()).fold(0.0, f64::max);
        let cut = drop * top;
        let rows = (0..m.nrows())
            .map(|i| {
                (0..m.ncols())
                    .filter_map(|j| {
                        let z = m[(i, j)];
                        (z.norm() > cut).then_some((j, z))
                    })
                    .collect()
            })
            .collect();
        Self { n: m.ncols(), rows }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn nnz(&self) -> usize {
        self.rows.iter().map(Vec::len).sum()
    }

    pub fn apply(&self, v: &CVec) -> CVec {
        CVec::from_iterator(
            self.rows.len(),
            self.rows.iter().map(|row| row.iter().map(|&(j, z)| z * v[j]).sum()),
        )
    }

    /// Dense product `self * other`, accumulated into `out` (which is overwritten).
    pub fn mul_into(&self, other: &SparseOp, out: &mut CMat, sign: f64, accumulate: bool) {
        if !accumulate {
            out.fill(Complex64::new(0.0, 0.0));
        }
        for (i, row) in self.rows.iter().enumerate() {
            for &(k, a) in row {
                for &(j, b) in &other.rows[k] {
                    out[(i, j)] += a * b * sign;
                }
            }
        }
    }

    /// `Re tr(self^H m)`.
    pub fn pair_dense(&self, m: &CMat) -> f64 {
        self.rows
            .iter()
            .enumerate()
            .map(|(i, row)| row.iter().map(|&(j, z)| (z.conj() * m[(i, j)]).re).sum::<f64>())
            .sum()
    }

    pub fn sub_scaled_from(&self, m: &mut CMat, c: f64) {
        for (i, row) in self.rows.iter().enumerate() {
            for &(j, z) in row {
                m[(i, j)] -= z * c;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_of_rank_two_matrix() {
        let a = RMat::from_row_slice(3, 3, &[1.0, 2.0, 3.0, 2.0, 4.0, 6.0, 0.0, 1.0, 1.0]);
        assert_eq!(numerical_rank(&a, 1e-8), 2);
        let ns = null_space(&a, 1e-8);
        assert_eq!(ns.ncols(), 1);
        assert!((&a * &ns).norm() < 1e-12);
    }

    #[test]
    fn null_space_of_wide_matrix_is_complete() {
        let a = RMat::from_row_slice(1, 4, &[1.0, 1.0, 0.0, 0.0]);
        let ns = null_space(&a, 1e-8);
        assert_eq!(ns.ncols(), 3);
        assert!((ns.transpose() * &ns - RMat::identity(3, 3)).norm() < 1e-12);
    }

    #[test]
    fn column_space_spans_input() {
        let a = RMat::from_row_slice(3, 2, &[1.0, 2.0, 0.0, 0.0, 1.0, 2.0]);
        let q = column_space(&a, 1e-8);
        assert_eq!(q.ncols(), 1);
    }

    #[test]
    fn tiny_matrices_have_rank_zero() {
        let a = RMat::from_element(2, 2, 1e-12);
        assert_eq!(numerical_rank(&a, 1e-8), 0);
    }

    #[test]
    fn complex_null_space_finds_kernel() {
        let a = CMat::from_row_slice(1, 2, &[Complex64::new(1.0, 0.0), I]);
        let ns = complex_null_space(&a, 1e-8);
        assert_eq!(ns.ncols(), 1);
        assert!((&a * &ns).norm() < 1e-12);
    }

    #[test]
    fn realified_pairing_is_real_part_of_hermitian_product() {
        let u = CVec::from_vec(vec![Complex64::new(1.0, 2.0), Complex64::new(-0.5, 0.3)]);
        let v = CVec::from_vec(vec![Complex64::new(0.2, -1.0), Complex64::new(2.0, 1.0)]);
        assert!((realify(&u).dot(&realify(&v)) - herm(&u, &v).re).abs() < 1e-14);
        assert_eq!(complexify(&realify(&u)), u);
    }

    #[test]
    fn sparse_products_match_dense() {
        let a = CMat::from_fn(3, 3, |i, j| Complex64::new((i + 2 * j) as f64 % 3.0, (i * j) as f64));
        let b = CMat::from_fn(3, 3, |i, j| Complex64::new(i as f64 - j as f64, 1.0));
        let (sa, sb) = (SparseOp::from_dense(&a, 0.0), SparseOp::from_dense(&b, 0.0));
        let mut out = CMat::zeros(3, 3);
        sa.mul_into(&sb, &mut out, 1.0, false);
        sb.mul_into(&sa, &mut out, -1.0, true);
        assert!((out - commutator(&a, &b)).norm() < 1e-12);
        assert!((sa.pair_dense(&b) - frob_pair(&a, &b)).abs() < 1e-12);
        let v = CVec::from_element(3, Complex64::new(1.0, -1.0));
        assert!((sa.apply(&v) - &a * &v).norm() < 1e-12);
    }
}
