//! Spin representations of `so(m)` on the exterior algebra of a maximal
//! isotropic subspace `W`, `dim W = floor(m/2)`.
//!
//! Creation `a_j^+` wedges `w_j` on the left, annihilation `a_j` contracts.
//! The hermitian Clifford generators are `a_j + a_j^+` and `i(a_j - a_j^+)`,
//! plus the parity operator when `m` is odd. `so(m)` acts through
//! `gamma_a gamma_b / 2`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

use super::MatrixRep;
use crate::error::{Error, Result};
use crate::linalg::{CMat, I};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Chirality {
    Full,
    Even,
    Odd,
}

impl fmt::Display for Chirality {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Chirality::Full => "full",
            Chirality::Even => "even",
            Chirality::Odd => "odd",
        })
    }
}

impl FromStr for Chirality {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "full" => Ok(Chirality::Full),
            "even" => Ok(Chirality::Even),
            "odd" => Ok(Chirality::Odd),
            other => Err(Error::InvalidRep(format!("unknown chirality `{other}`"))),
        }
    }
}

/// Monomial bookkeeping for the spin module: basis vectors are
/// `w_{i1} ∧ ... ∧ w_{ir}` (1-based indices), ordered by degree and then
/// lexicographically, restricted to the requested parity.
#[derive(Debug, Clone)]
pub struct SpinModule {
    rank: usize,
    chirality: Chirality,
    monomials: Vec<u32>,
}

impl SpinModule {
    pub fn new(rank: usize, chirality: Chirality) -> Self {
        let mut all: Vec<u32> = (0..(1u32 << rank)).collect();
        all.sort_by_key(|&m| (m.count_ones(), index_tuple(m)));
        let monomials = all
            .into_iter()
            .filter(|m| match chirality {
                Chirality::Full => true,
                Chirality::Even => m.count_ones() % 2 == 0,
                Chirality::Odd => m.count_ones() % 2 == 1,
            })
            .collect();
        Self {
            rank,
            chirality,
            monomials,
        }
    }

    pub fn dim(&self) -> usize {
        self.monomials.len()
    }

    pub fn chirality(&self) -> Chirality {
        self.chirality
    }

    /// Basis position of the monomial with the given 1-based indices
    /// (any order; the sign of the reordering is returned too).
    pub fn index_of(&self, indices: &[usize]) -> Option<(usize, f64)> {
        let mut mask = 0u32;
        let mut sign = 1.0;
        // build by successive left-wedging from the right end
        for &i in indices.iter().rev() {
            if i == 0 || i > self.rank {
                return None;
            }
            let bit = 1u32 << (i - 1);
            if mask & bit != 0 {
                return None;
            }
            if (mask & (bit - 1)).count_ones() % 2 == 1 {
                sign = -sign;
            }
            mask |= bit;
        }
        self.monomials.iter().position(|&m| m == mask).map(|p| (p, sign))
    }

    fn full_operators(&self) -> (Vec<CMat>, Vec<CMat>) {
        let dim = 1usize << self.rank;
        let order: Vec<u32> = {
            let mut all: Vec<u32> = (0..dim as u32).collect();
            all.sort_by_key(|&m| (m.count_ones(), index_tuple(m)));
            all
        };
        let mut pos = vec![0usize; dim];
        for (p, &m) in order.iter().enumerate() {
            pos[m as usize] = p;
        }
        let mut creators = Vec::with_capacity(self.rank);
        let mut annihilators = Vec::with_capacity(self.rank);
        for j in 0..self.rank {
            let bit = 1u32 << j;
            let mut c = CMat::zeros(dim, dim);
            for &m in &order {
                if m & bit == 0 {
                    let sign = if (m & (bit - 1)).count_ones() % 2 == 1 { -1.0 } else { 1.0 };
                    c[(pos[(m | bit) as usize], pos[m as usize])] = Complex64::new(sign, 0.0);
                }
            }
            annihilators.push(c.adjoint());
            creators.push(c);
        }
        (creators, annihilators)
    }

    /// Hermitian Clifford generators on the full exterior algebra, in the
    /// degree-lexicographic monomial order.
    pub fn gammas(&self, m: usize) -> Vec<CMat> {
        let (cr, an) = self.full_operators();
        let mut g = Vec::with_capacity(m);
        for j in 0..self.rank {
            g.push(&an[j] + &cr[j]);
            g.push((&an[j] - &cr[j]) * I);
        }
        if m % 2 == 1 {
            let dim = 1usize << self.rank;
            let mut parity = CMat::zeros(dim, dim);
            let mut all: Vec<u32> = (0..dim as u32).collect();
            all.sort_by_key(|&x| (x.count_ones(), index_tuple(x)));
            for (p, x) in all.iter().enumerate() {
                parity[(p, p)] = Complex64::new(if x.count_ones() % 2 == 0 { 1.0 } else { -1.0 }, 0.0);
            }
            g.push(parity);
        }
        g
    }

    fn restriction_positions(&self) -> Vec<usize> {
        let dim = 1usize << self.rank;
        let mut all: Vec<u32> = (0..dim as u32).collect();
        all.sort_by_key(|&x| (x.count_ones(), index_tuple(x)));
        all.iter()
            .enumerate()
            .filter(|(_, x)| self.monomials.contains(x))
            .map(|(p, _)| p)
            .collect()
    }
}

fn index_tuple(mask: u32) -> Vec<u32> {
    (0..32).filter(|i| mask & (1 << i) != 0).collect()
}

/// `spin(m)`, `7 <= m <= 14`, acting on the full or half spin module.
pub fn build_spin(m: usize, chirality: Chirality) -> Result<MatrixRep> {
    if !(7..=14).contains(&m) {
        return Err(Error::BadParameter {
            family: "spin".into(),
            n: m,
            reason: "supported range is 7..=14".into(),
        });
    }
    build_spin_unchecked(m, chirality)
}

/// Same construction without the registry range guard; used for small
/// sanity checks (`spin(3) = su(2)`, `spin(4)`, ...).
pub(crate) fn build_spin_unchecked(m: usize, chirality: Chirality) -> Result<MatrixRep> {
    if m < 3 {
        return Err(Error::BadParameter {
            family: "spin".into(),
            n: m,
            reason: "need m >= 3".into(),
        });
    }
    if m % 2 == 1 && chirality != Chirality::Full {
        return Err(Error::BadParameter {
            family: "spin".into(),
            n: m,
            reason: "half-spin modules exist only for even m".into(),
        });
    }
    let module = SpinModule::new(m / 2, chirality);
    let gammas = module.gammas(m);
    let keep = module.restriction_positions();
    let d = keep.len();
    let mut basis = Vec::with_capacity(m * (m - 1) / 2);
    let mut labels = Vec::with_capacity(m * (m - 1) / 2);
    for a in 0..m {
        for b in (a + 1)..m {
            let full = &gammas[a] * &gammas[b] * Complex64::new(0.5, 0.0);
            let sub = CMat::from_fn(d, d, |r, c| full[(keep[r], keep[c])]);
            basis.push(sub);
            labels.push(format!("e{}_{}", a + 1, b + 1));
        }
    }
    MatrixRep::from_matrices(basis, labels)
}
