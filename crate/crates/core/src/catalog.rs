//! The table of simple groups with Lagrangian orbits in projective space,
//! instantiated at small parameters, together with the explicit points used
//! for certification.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kirwan::{search_lagrangian, SearchOutcome, SearchParams, SearchStatus};
use crate::liealg::{eval_rep_expr, Chirality, ExteriorBasis, FactorSpec, GroupSpec, RepExpr, SpinModule, SymmetricBasis};
use crate::linalg::CVec;
use crate::symcheck::{lagrangian_verdict, Context, PhaseSpace, PointState};

/// One row of the table as printed: group, representation, `dim_C P(V)`
/// formula and condition.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableRow {
    pub group: String,
    pub rho: String,
    pub dim_p: String,
    pub cond: String,
}

fn row(group: &str, rho: &str, dim_p: &str, cond: &str) -> TableRow {
    TableRow {
        group: group.into(),
        rho: rho.into(),
        dim_p: dim_p.into(),
        cond: cond.into(),
    }
}

/// The 21 rows in printed order.
pub fn table_rows() -> Vec<TableRow> {
    vec![
        row("SU(n)", "2L1", "n(n+1)/2-1", ""),
        row("SU(n)", "L1+L1*", "2n-1", ""),
        row("SU(n)", "L1+...+L1 (n copies)", "n^2-1", ""),
        row("SU(2n)", "L2", "n(2n-1)-1", "n>=3"),
        row("SU(2n+1)", "L2+L1", "2n^2+3n+1", "n>=2"),
        row("SU(2)", "3L1", "3", ""),
        row("SU(6)", "L3", "19", ""),
        row("SU(7)", "L3", "34", ""),
        row("SU(8)", "L3", "55", ""),
        row("Sp(n)", "L1+L1", "4n-1", ""),
        row("Sp(3)", "L3", "13", ""),
        row("SO(n)", "L1", "n-1", "n>=3"),
        row("Spin(7)", "spin", "7", ""),
        row("Spin(9)", "spin", "15", ""),
        row("Spin(10)", "Le+Le", "31", ""),
        row("Spin(11)", "spin", "31", ""),
        row("Spin(12)", "Le", "31", ""),
        row("Spin(14)", "Le", "63", ""),
        row("E6", "L1", "26", ""),
        row("E7", "L1", "55", ""),
        row("G2", "7-dim", "6", ""),
    ]
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Support {
    Constructible {
        group: GroupSpec,
        rep: RepExpr,
        /// Point given in the text, if any (unnormalized).
        point: Option<Vec<Complex64>>,
    },
    Unsupported(String),
}

/// A table row at one parameter value.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TableEntry {
    pub id: String,
    /// Index into [`table_rows`].
    pub row: usize,
    pub param: Option<usize>,
    /// `dim_C P(V)` as printed in the table.
    pub table_dim_p: usize,
    pub support: Support,
}

impl TableEntry {
    pub fn is_supported(&self) -> bool {
        matches!(self.support, Support::Constructible { .. })
    }
}

fn d0() -> RepExpr {
    RepExpr::def(0)
}

fn group1(f: FactorSpec) -> GroupSpec {
    GroupSpec::new(vec![f])
}

fn entry(id: String, row: usize, param: Option<usize>, dim_p: usize, group: GroupSpec, rep: RepExpr, point: Option<Vec<Complex64>>) -> TableEntry {
    TableEntry {
        id,
        row,
        param,
        table_dim_p: dim_p,
        support: Support::Constructible { group, rep, point },
    }
}

/// Every instantiated table entry; each row maps to at least one entry.
pub fn table_entries() -> Vec<TableEntry> {
    let mut out = Vec::new();
    for n in 3..=5 {
        out.push(entry(format!("su{n}-sym2"), 0, Some(n), n * (n + 1) / 2 - 1, group1(FactorSpec::Su(n)), RepExpr::sym(d0(), 2), None));
    }
    for n in 3..=5 {
        out.push(entry(
            format!("su{n}-lambda1-dual"),
            1,
            Some(n),
            2 * n - 1,
            group1(FactorSpec::Su(n)),
            RepExpr::Sum(vec![d0(), RepExpr::dual(d0())]),
            Some(su_lambda1_dual_point(n)),
        ));
    }
    for n in 2..=3 {
        out.push(entry(
            format!("su{n}-n-copies"),
            2,
            Some(n),
            n * n - 1,
            group1(FactorSpec::Su(n)),
            RepExpr::Sum(vec![d0(); n]),
            None,
        ));
    }
    out.push(entry("su6-lambda2".into(), 3, Some(3), 14, group1(FactorSpec::Su(6)), RepExpr::ext(d0(), 2), None));
    for n in 2..=3 {
        let m = 2 * n + 1;
        out.push(entry(
            format!("su{m}-lambda2-lambda1"),
            4,
            Some(n),
            2 * n * n + 3 * n + 1,
            group1(FactorSpec::Su(m)),
            RepExpr::Sum(vec![RepExpr::ext(d0(), 2), d0()]),
            Some(su_lambda2_lambda1_point(n)),
        ));
    }
    out.push(entry("su2-sym3".into(), 5, None, 3, group1(FactorSpec::Su(2)), RepExpr::sym(d0(), 3), None));
    for (i, (n, dim)) in [(6usize, 19usize), (7, 34), (8, 55)].into_iter().enumerate() {
        out.push(entry(format!("su{n}-lambda3"), 6 + i, None, dim, group1(FactorSpec::Su(n)), RepExpr::ext(d0(), 3), None));
    }
    for n in 2..=3 {
        out.push(entry(
            format!("sp{n}-lambda1-pair"),
            9,
            Some(n),
            4 * n - 1,
            group1(FactorSpec::Sp(n)),
            RepExpr::Sum(vec![d0(), d0()]),
            Some(sp_pair_point(n)),
        ));
    }
    out.push(entry("sp3-lambda3".into(), 10, None, 13, group1(FactorSpec::Sp(3)), RepExpr::prim(d0(), 3), None));
    for n in 3..=6 {
        out.push(entry(format!("so{n}-lambda1"), 11, Some(n), n - 1, group1(FactorSpec::So(n)), d0(), None));
    }
    out.push(entry("spin7-spin".into(), 12, None, 7, group1(FactorSpec::Spin(7, Chirality::Full)), d0(), None));
    out.push(entry("spin9-spin".into(), 13, None, 15, group1(FactorSpec::Spin(9, Chirality::Full)), d0(), None));
    out.push(entry(
        "spin10-lambda-e-pair".into(),
        14,
        None,
        31,
        group1(FactorSpec::Spin(10, Chirality::Even)),
        RepExpr::Sum(vec![d0(), d0()]),
        Some(spin10_pair_point()),
    ));
    out.push(entry("spin11-spin".into(), 15, None, 31, group1(FactorSpec::Spin(11, Chirality::Full)), d0(), None));
    out.push(entry("spin12-lambda-e".into(), 16, None, 31, group1(FactorSpec::Spin(12, Chirality::Even)), d0(), None));
    out.push(entry("spin14-lambda-e".into(), 17, None, 63, group1(FactorSpec::Spin(14, Chirality::Even)), d0(), None));
    for (i, (id, dim, why)) in [
        ("e6-lambda1", 26usize, "27-dimensional E6 module is not constructed"),
        ("e7-lambda1", 55, "56-dimensional E7 module is not constructed"),
    ]
    .into_iter()
    .enumerate()
    {
        out.push(TableEntry {
            id: id.into(),
            row: 18 + i,
            param: None,
            table_dim_p: dim,
            support: Support::Unsupported(why.into()),
        });
    }
    out.push(entry("g2-7dim".into(), 20, None, 6, group1(FactorSpec::G2), d0(), None));
    out
}

pub fn table_entry(id: &str) -> Result<TableEntry> {
    table_entries()
        .into_iter()
        .find(|e| e.id == id)
        .ok_or_else(|| Error::UnknownRow(id.to_string()))
}

fn one() -> Complex64 {
    Complex64::new(1.0, 0.0)
}

/// `(e_1, e_1^*)` in `C^n + (C^n)^*`.
pub fn su_lambda1_dual_point(n: usize) -> Vec<Complex64> {
    let mut v = vec![Complex64::new(0.0, 0.0); 2 * n];
    v[0] = one();
    v[n] = one();
    v
}

/// Coefficients of the bivector of `J_n = [[0, -I_n], [I_n, 0]]` placed on
/// coordinates `offset .. offset + 2n` of `C^dim`, in the lexicographic
/// basis of `Λ^2 C^dim`.
pub fn j_bivector(dim: usize, offset: usize, n: usize) -> Vec<Complex64> {
    let b = ExteriorBasis::new(dim, 2);
    let mut v = vec![Complex64::new(0.0, 0.0); b.len()];
    for i in 0..n {
        let (pos, sign) = b.position(&[offset + i, offset + n + i]).expect("distinct indices");
        v[pos] = Complex64::new(-sign, 0.0);
    }
    v
}

/// `(J_n, e_1)` in `Λ^2 C^{2n+1} + C^{2n+1}`, with `J_n` on the last `2n`
/// coordinates.
pub fn su_lambda2_lambda1_point(n: usize) -> Vec<Complex64> {
    let m = 2 * n + 1;
    let mut v = j_bivector(m, 1, n);
    let mut e1 = vec![Complex64::new(0.0, 0.0); m];
    e1[0] = one();
    v.extend(e1);
    v
}

/// `(e_1, e_2)` in `C^{2n} + C^{2n}`; `e_2` is the quaternionic partner of
/// `e_1`, which sits next to it in the interleaved coordinates.
pub fn sp_pair_point(n: usize) -> Vec<Complex64> {
    let mut v = vec![Complex64::new(0.0, 0.0); 4 * n];
    v[0] = one();
    v[2 * n + 1] = one();
    v
}

/// `(1 + e_1234, e_15 + e_2345)` in two copies of the even half-spin module
/// of `spin(10)`.
pub fn spin10_pair_point() -> Vec<Complex64> {
    let m = SpinModule::new(5, Chirality::Even);
    let mut v = vec![Complex64::new(0.0, 0.0); 2 * m.dim()];
    let mut put = |offset: usize, idx: &[usize]| {
        let (p, s) = m.index_of(idx).expect("even monomial");
        v[offset + p] += Complex64::new(s, 0.0);
    };
    put(0, &[]);
    put(0, &[1, 2, 3, 4]);
    put(16, &[1, 5]);
    put(16, &[2, 3, 4, 5]);
    v
}

/// `sum_i x_i^2` in the orthonormal monomial basis of `S^2 C^n`.
pub fn sym2_identity_point(n: usize) -> Vec<Complex64> {
    let b = SymmetricBasis::new(n, 2);
    let mut v = vec![Complex64::new(0.0, 0.0); b.len()];
    for i in 0..n {
        v[b.position(&[i, i]).expect("diagonal monomial")] = one();
    }
    v
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RowCertificate {
    pub id: String,
    pub expected_dim_p: usize,
    pub used_explicit_point: bool,
    pub outcome: SearchOutcome,
    /// Orbit dimension of the certified point equals the table's `dim P(V)`.
    pub dim_matches: bool,
}

/// Certify one table entry: the text's point when there is one, otherwise
/// a Kirwan search on `P(V)`.
pub fn certify_table_row(ctx: &Context, id: &str, params: &SearchParams) -> Result<RowCertificate> {
    let e = table_entry(id)?;
    let (group, rep, point) = match e.support {
        Support::Constructible { group, rep, point } => (group, rep, point),
        Support::Unsupported(_) => return Err(Error::UnsupportedRow(id.to_string())),
    };
    let r = eval_rep_expr(&group, &rep)?;
    let s = PhaseSpace::projective(r.dim_v());
    let (outcome, used) = match point {
        Some(pt) => {
            let p = PointState::new(&s, CVec::from_vec(pt))?;
            let rep = lagrangian_verdict(ctx, &r, &s, &p)?;
            let status = if rep.is_lagrangian {
                SearchStatus::Found
            } else {
                SearchStatus::ConvergedNonLagrangian
            };
            (
                SearchOutcome {
                    status,
                    point: Some(p.coords().iter().copied().collect()),
                    f_final: rep.mu.central_defect.powi(2),
                    report: Some(rep),
                    trace: Vec::new(),
                },
                true,
            )
        }
        None => (search_lagrangian(ctx, &r, &s, params), false),
    };
    let dim_matches = outcome.status == SearchStatus::Found
        && outcome.report.as_ref().map(|r| r.orbit_dim) == Some(e.table_dim_p);
    Ok(RowCertificate {
        id: e.id,
        expected_dim_p: e.table_dim_p,
        used_explicit_point: used,
        outcome,
        dim_matches,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_row_is_mapped() {
        let entries = table_entries();
        for i in 0..table_rows().len() {
            assert!(entries.iter().any(|e| e.row == i), "row {i} unmapped");
        }
        let mut ids: Vec<&str> = entries.iter().map(|e| e.id.as_str()).collect();
        ids.sort();
        ids.dedup();
        assert_eq!(ids.len(), entries.len());
    }

    #[test]
    fn exceptional_rows_are_unsupported() {
        let err = certify_table_row(&Context::default(), "e7-lambda1", &SearchParams::default()).unwrap_err();
        assert_eq!(err, Error::UnsupportedRow("e7-lambda1".into()));
        assert!(matches!(table_entry("nope"), Err(Error::UnknownRow(_))));
    }

    #[test]
    fn module_dimensions_match_points() {
        for e in table_entries() {
            if let Support::Constructible { group, rep, point } = &e.support {
                let r = eval_rep_expr(group, rep).unwrap();
                if let Some(p) = point {
                    assert_eq!(p.len(), r.dim_v(), "{}", e.id);
                }
            }
        }
    }

    #[test]
    fn j_bivector_signs() {
        // n = 1 on C^3: J lives on coordinates 1, 2 with -1 on e_2 ∧ e_3
        let v = j_bivector(3, 1, 1);
        assert_eq!(v, vec![Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0), Complex64::new(-1.0, 0.0)]);
    }
}
