//! `g2` as the derivation algebra of the octonions, acting on the imaginary
//! octonions `R^7` and complexified to `C^7`.

use num_complex::Complex64;

use super::MatrixRep;
use crate::error::{Error, Result};
use crate::linalg::{self, CMat, RMat};

/// Quaternionic triples `(i, j, k)` with `e_i e_j = e_k` (1-based); the
/// rule `e_i e_{i+1} = e_{i+3}` taken cyclically mod 7.
const TRIPLES: [(usize, usize, usize); 7] = [(1, 2, 4), (2, 3, 5), (3, 4, 6), (4, 5, 7), (5, 6, 1), (6, 7, 2), (7, 1, 3)];

/// Product of basis octonions `e_a e_b` (0 is the unit) as `(sign, index)`.
fn basis_product(a: usize, b: usize) -> (f64, usize) {
    if a == 0 {
        return (1.0, b);
    }
    if b == 0 {
        return (1.0, a);
    }
    if a == b {
        return (-1.0, 0);
    }
    for &(i, j, k) in &TRIPLES {
        let cyc = [(i, j, k), (j, k, i), (k, i, j)];
        for &(x, y, z) in &cyc {
            if (a, b) == (x, y) {
                return (1.0, z);
            }
            if (a, b) == (y, x) {
                return (-1.0, z);
            }
        }
    }
    unreachable!("every pair of distinct imaginary units lies on one line")
}

/// Octonion product of two real 8-vectors (component 0 is the real part).
pub fn octonion_product(x: &[f64; 8], y: &[f64; 8]) -> [f64; 8] {
    let mut out = [0.0; 8];
    for a in 0..8 {
        for b in 0..8 {
            let (s, k) = basis_product(a, b);
            out[k] += s * x[a] * y[b];
        }
    }
    out
}

/// The invariant 3-form `phi(x, y, z) = <x y, z>` on imaginary octonions.
pub fn octonion_three_form(x: &[f64; 7], y: &[f64; 7], z: &[f64; 7]) -> f64 {
    let lift = |v: &[f64; 7]| {
        let mut o = [0.0; 8];
        o[1..].copy_from_slice(v);
        o
    };
    let p = octonion_product(&lift(x), &lift(y));
    (0..7).map(|i| p[i + 1] * z[i]).sum()
}

/// Solve `D(e_a e_b) = D(e_a) e_b + e_a D(e_b)` for `D` acting on the
/// imaginary units; the solution space is `g2`.
pub fn derivation_space() -> RMat {
    // unknown D[r][c] (7x7, imaginary coordinates), flattened r*7+c
    let mut rows: Vec<Vec<f64>> = Vec::new();
    for a in 1..8 {
        for b in 1..8 {
            // component k of: D(e_a e_b) - D(e_a) e_b - e_a D(e_b)
            let mut eq = vec![vec![0.0; 49]; 8];
            let (s, ab) = basis_product(a, b);
            if ab != 0 {
                for (k, e) in eq.iter_mut().enumerate().skip(1) {
                    e[(k - 1) * 7 + (ab - 1)] += s;
                }
            }
            // D(e_a) = sum_r D[r][a] e_r; (e_r e_b)
            for r in 1..8 {
                let (s1, k1) = basis_product(r, b);
                eq[k1][(r - 1) * 7 + (a - 1)] -= s1;
                let (s2, k2) = basis_product(a, r);
                eq[k2][(r - 1) * 7 + (b - 1)] -= s2;
            }
            rows.extend(eq);
        }
    }
    let m = RMat::from_fn(rows.len(), 49, |i, j| rows[i][j]);
    linalg::null_space(&m, 1e-10)
}

/// The 14-dimensional `g2` on `C^7`, basis orthonormal in the Frobenius product.
pub fn build_g2() -> Result<MatrixRep> {
    let ns = derivation_space();
    if ns.ncols() != 14 {
        return Err(Error::InvalidRep(format!("derivation space has dimension {}", ns.ncols())));
    }
    let mut basis = Vec::with_capacity(14);
    let mut labels = Vec::with_capacity(14);
    for c in 0..14 {
        let col = ns.column(c);
        let m = CMat::from_fn(7, 7, |r, k| {
            let v = col[r * 7 + k];
            Complex64::new(if v.abs() < 1e-14 { 0.0 } else { v }, 0.0)
        });
        // symmetrize away rounding so the matrix is exactly antisymmetric
        let m = (&m - m.transpose()) * Complex64::new(0.5, 0.0);
        basis.push(m);
        labels.push(format!("d{}", c + 1));
    }
    MatrixRep::from_matrices(basis, labels)
}
