use nalgebra::DVector;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

use super::MatrixRep;
use crate::error::{Error, Result};
use crate::linalg::{CMat, I};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Su,
    So,
    Sp,
    U1,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Family::Su => "su",
            Family::So => "so",
            Family::Sp => "sp",
            Family::U1 => "u1",
        })
    }
}

impl FromStr for Family {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "su" => Ok(Family::Su),
            "so" => Ok(Family::So),
            "sp" => Ok(Family::Sp),
            "u1" => Ok(Family::U1),
            other => Err(Error::UnsupportedFamily(other.to_string())),
        }
    }
}

/// Defining representation of a classical family. For `u1` the single
/// generator is `i diag(weights)`.
pub fn build_classical(family: Family, n: usize, weights: Option<&[i64]>) -> Result<MatrixRep> {
    match family {
        Family::Su => su(n),
        Family::So => so(n),
        Family::Sp => sp(n),
        Family::U1 => match weights {
            Some(w) if !w.is_empty() => circle(w),
            _ => Err(Error::BadParameter {
                family: "u1".into(),
                n,
                reason: "a circle needs a nonempty weight list".into(),
            }),
        },
    }
}

fn unit(n: usize, j: usize, k: usize, z: Complex64) -> CMat {
    let mut m = CMat::zeros(n, n);
    m[(j, k)] = z;
    m
}

fn one() -> Complex64 {
    Complex64::new(1.0, 0.0)
}

/// `su(n)`: `i(E_jj - E_{j+1,j+1})`, then `E_jk - E_kj` and `i(E_jk + E_kj)` per pair.
pub fn su(n: usize) -> Result<MatrixRep> {
    if n < 2 {
        return Err(Error::BadParameter {
            family: "su".into(),
            n,
            reason: "need n >= 2".into(),
        });
    }
    let mut basis = Vec::with_capacity(n * n - 1);
    let mut labels = Vec::with_capacity(n * n - 1);
    for j in 0..n - 1 {
        basis.push(unit(n, j, j, I) - unit(n, j + 1, j + 1, I));
        labels.push(format!("h{}", j + 1));
    }
    for j in 0..n {
        for k in (j + 1)..n {
            basis.push(unit(n, j, k, one()) - unit(n, k, j, one()));
            labels.push(format!("a{}_{}", j + 1, k + 1));
            basis.push(unit(n, j, k, I) + unit(n, k, j, I));
            labels.push(format!("s{}_{}", j + 1, k + 1));
        }
    }
    MatrixRep::from_matrices(basis, labels)
}

/// `so(n)`: `E_jk - E_kj` for `j < k`.
pub fn so(n: usize) -> Result<MatrixRep> {
    if n < 2 {
        return Err(Error::BadParameter {
            family: "so".into(),
            n,
            reason: "need n >= 2".into(),
        });
    }
    let mut basis = Vec::new();
    let mut labels = Vec::new();
    for j in 0..n {
        for k in (j + 1)..n {
            basis.push(unit(n, j, k, one()) - unit(n, k, j, one()));
            labels.push(format!("r{}_{}", j + 1, k + 1));
        }
    }
    MatrixRep::from_matrices(basis, labels)
}

/// Position of the quaternionic coordinate: block index `j < n` maps to
/// `2j`, its partner `n + j` to `2j + 1`.
fn interleave(n: usize, idx: usize) -> usize {
    if idx < n {
        2 * idx
    } else {
        2 * (idx - n) + 1
    }
}

/// `sp(n)` inside `u(2n)`: block matrices `[[A, B], [-conj(B), conj(A)]]`
/// with `A` in `u(n)` and `B` complex symmetric, written in coordinates where
/// each quaternionic pair `(e_j, j e_j)` is adjacent.
pub fn sp(n: usize) -> Result<MatrixRep> {
    if n < 1 {
        return Err(Error::BadParameter {
            family: "sp".into(),
            n,
            reason: "need n >= 1".into(),
        });
    }
    let d = 2 * n;
    let mut blocks: Vec<(String, CMat, CMat)> = Vec::new();
    for j in 0..n {
        blocks.push((format!("u{}", j + 1), unit(n, j, j, I), CMat::zeros(n, n)));
    }
    for j in 0..n {
        for k in (j + 1)..n {
            blocks.push((format!("a{}_{}", j + 1, k + 1), unit(n, j, k, one()) - unit(n, k, j, one()), CMat::zeros(n, n)));
            blocks.push((format!("s{}_{}", j + 1, k + 1), unit(n, j, k, I) + unit(n, k, j, I), CMat::zeros(n, n)));
        }
    }
    for j in 0..n {
        for k in j..n {
            let sym = |z: Complex64| {
                if j == k {
                    unit(n, j, j, z)
                } else {
                    unit(n, j, k, z) + unit(n, k, j, z)
                }
            };
            blocks.push((format!("br{}_{}", j + 1, k + 1), CMat::zeros(n, n), sym(one())));
            blocks.push((format!("bi{}_{}", j + 1, k + 1), CMat::zeros(n, n), sym(I)));
        }
    }
    let mut basis = Vec::with_capacity(blocks.len());
    let mut labels = Vec::with_capacity(blocks.len());
    for (label, a, b) in blocks {
        let mut m = CMat::zeros(d, d);
        for r in 0..n {
            for c in 0..n {
                m[(interleave(n, r), interleave(n, c))] = a[(r, c)];
                m[(interleave(n, r), interleave(n, n + c))] = b[(r, c)];
                m[(interleave(n, n + r), interleave(n, c))] = -b[(r, c)].conj();
                m[(interleave(n, n + r), interleave(n, n + c))] = a[(r, c)].conj();
            }
        }
        basis.push(m);
        labels.push(label);
    }
    MatrixRep::from_matrices(basis, labels)
}

/// The invariant skew form of `sp(n)` in the interleaved coordinates:
/// `J = diag([[0, 1], [-1, 0]], ...)`, so `X^T J + J X = 0` for `X` in `sp(n)`.
pub fn symplectic_form(n: usize) -> CMat {
    let mut j = CMat::zeros(2 * n, 2 * n);
    for k in 0..n {
        j[(2 * k, 2 * k + 1)] = one();
        j[(2 * k + 1, 2 * k)] = -one();
    }
    j
}

/// `u(1)` acting on `C^{|weights|}` by `i diag(weights)`.
pub fn circle(weights: &[i64]) -> Result<MatrixRep> {
    if weights.is_empty() || weights.iter().all(|&w| w == 0) {
        return Err(Error::BadParameter {
            family: "u1".into(),
            n: weights.len(),
            reason: "weights must be nonempty and not all zero".into(),
        });
    }
    let diag = DVector::from_iterator(weights.len(), weights.iter().map(|&w| I * w as f64));
    MatrixRep::from_matrices(vec![CMat::from_diagonal(&diag)], vec!["t".into()])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{frobenius, RMat};

    #[test]
    fn su2_has_three_generators() {
        let r = build_classical(Family::Su, 2, None).unwrap();
        assert_eq!(r.dim_g(), 3);
        assert_eq!(r.dim_v(), 2);
    }

    #[test]
    fn dimensions_of_families() {
        for n in 2..6 {
            assert_eq!(su(n).unwrap().dim_g(), n * n - 1);
            assert_eq!(so(n).unwrap().dim_g(), n * (n - 1) / 2);
        }
        for n in 1..4 {
            assert_eq!(sp(n).unwrap().dim_g(), n * (2 * n + 1));
        }
    }

    #[test]
    fn sp_preserves_symplectic_form() {
        for n in 1..4 {
            let j = symplectic_form(n);
            for x in sp(n).unwrap().basis() {
                assert!(frobenius(&(x.transpose() * &j + &j * x)) < 1e-14);
            }
        }
    }

    #[test]
    fn cp4_circle_generator() {
        let r = build_classical(Family::U1, 1, Some(&[-1, 0, 0, 0, 0])).unwrap();
        assert_eq!(r.dim_g(), 1);
        assert_eq!(r.dim_v(), 5);
        assert_eq!(r.basis()[0][(0, 0)], -I);
        assert_eq!(r.basis()[0][(1, 1)], Complex64::new(0.0, 0.0));
        assert_eq!(r.center().ncols(), 1);
    }

    #[test]
    fn so3_gram_is_positive_definite_rank_three() {
        // -Re tr(X_a X_b) on E_jk - E_kj gives 2 on the diagonal, 0 off it
        let r = build_classical(Family::So, 3, None).unwrap();
        assert!((r.gram() - RMat::identity(3, 3) * 2.0).norm() < 1e-14);
        assert!(r.gram_definite());
    }

    #[test]
    fn parameter_errors() {
        assert!(so(1).is_err());
        assert!(su(1).is_err());
        assert!(build_classical(Family::U1, 1, None).is_err());
        assert!(circle(&[0, 0]).is_err());
        assert!(matches!("e8".parse::<Family>(), Err(Error::UnsupportedFamily(_))));
    }

    #[test]
    fn simple_algebras_have_no_center() {
        for r in [su(2), su(3), so(3), so(5), sp(2)] {
            let r = r.unwrap();
            assert_eq!(r.center().ncols(), 0);
            assert_eq!(r.derived().ncols(), r.dim_g());
        }
    }
}
