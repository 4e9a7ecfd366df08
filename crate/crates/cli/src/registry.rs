//! Built-in scenarios: every final-table row, the explicit-point
//! constructions, the blow-ups, the worked examples and the slice items.

use momentkit_core::catalog::{self, table_entries, Support};
use momentkit_core::kirwan::SearchParams;
use momentkit_core::reduction::{CutBase, SliceStatus};
use momentkit_core::symcheck::SpaceKind;
use momentkit_core::{Chirality, FactorSpec, GroupSpec, RepExpr};
use num_complex::Complex64;

use crate::scenario::{CircleSpec, Expected, Pipeline, Scenario, WeightedSpec};

/// Cut level offset below the maximum of the circle moment.
pub const BLOWUP_EPSILON: f64 = 0.05;

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

fn d(i: usize) -> RepExpr {
    RepExpr::def(i)
}

fn group(f: Vec<FactorSpec>) -> Option<GroupSpec> {
    Some(GroupSpec::new(f))
}

fn explicit_search() -> Option<SearchParams> {
    Some(SearchParams::default())
}

/// Isotropy dimensions printed next to the explicit points.
fn printed_isotropy(id: &str) -> Option<usize> {
    match id {
        "su3-lambda1-dual" => Some(3),
        "su4-lambda1-dual" => Some(6),
        "su5-lambda1-dual" => Some(10),
        "su5-lambda2-lambda1" => Some(10),
        "su7-lambda2-lambda1" => Some(21),
        "sp2-lambda1-pair" => Some(3),
        "sp3-lambda1-pair" => Some(10),
        "spin10-lambda-e-pair" => Some(24),
        _ => None,
    }
}

fn table_scenarios() -> Vec<Scenario> {
    let rows = catalog::table_rows();
    table_entries()
        .into_iter()
        .map(|e| {
            let row = &rows[e.row];
            let mut s = Scenario::new(e.id.clone(), Pipeline::Table);
            s.table_row = Some(e.id.clone());
            s.citation = Some(format!(
                "final table: {} {}, dim P(V) = {}",
                row.group, row.rho, row.dim_p
            ));
            if let Support::Constructible { point, .. } = &e.support {
                s.search = explicit_search();
                s.expected = Expected {
                    found: Some(true),
                    lagrangian: Some(true),
                    dim_p: Some(e.table_dim_p),
                    moduli_dim: Some(0),
                    isotropy_dim: printed_isotropy(&e.id),
                    ..Expected::default()
                };
                if point.is_some() {
                    s.notes.push("certified at the point given in the text".into());
                }
            }
            s
        })
        .collect()
}

struct PointRow {
    key: String,
    group: GroupSpec,
    rep: RepExpr,
    split: usize,
    point: Vec<Complex64>,
    /// Upstairs orbit dimension stated for the weighted construction.
    weighted_dim: usize,
    /// Summand the blow-up circle acts on.
    cut_on_first: bool,
    /// `dim_C P(V)` as printed for the blow-up.
    dim_p: usize,
    /// Isotropy printed for the blow-up.
    isotropy: usize,
    citation: &'static str,
}

fn point_rows() -> Vec<PointRow> {
    let mut out = Vec::new();
    for n in 2..=3usize {
        out.push(PointRow {
            key: format!("su{n}"),
            group: GroupSpec::new(vec![FactorSpec::Su(n)]),
            rep: RepExpr::Sum(vec![d(0), RepExpr::dual(d(0))]),
            split: n,
            point: catalog::su_lambda1_dual_point(n),
            weighted_dim: 2 * n,
            cut_on_first: true,
            dim_p: 2 * n - 1,
            isotropy: n * (n - 1) / 2,
            citation: "SU(n) on C^n + (C^n)* at (e1, e1*)",
        });
    }
    for n in 2..=3usize {
        let m = 2 * n + 1;
        out.push(PointRow {
            key: format!("su{m}"),
            group: GroupSpec::new(vec![FactorSpec::Su(m)]),
            rep: RepExpr::Sum(vec![RepExpr::ext(d(0), 2), d(0)]),
            split: m * (m - 1) / 2,
            point: catalog::su_lambda2_lambda1_point(n),
            weighted_dim: 2 * n * n + 3 * n + 2,
            cut_on_first: false,
            dim_p: 2 * n * n + 3 * n + 1,
            isotropy: n * (2 * n + 1),
            citation: "SU(2n+1) on Λ2 + C^(2n+1) at (J_n, e1)",
        });
    }
    for n in 2..=3usize {
        out.push(PointRow {
            key: format!("sp{n}"),
            group: GroupSpec::new(vec![FactorSpec::Sp(n)]),
            rep: RepExpr::Sum(vec![d(0), d(0)]),
            split: 2 * n,
            point: catalog::sp_pair_point(n),
            weighted_dim: 4 * n,
            cut_on_first: true,
            dim_p: 4 * n - 1,
            isotropy: (n - 1) * (2 * n - 1),
            citation: "Sp(n) on C^2n + C^2n at (e1, e2)",
        });
    }
    out.push(PointRow {
        key: "spin10".into(),
        group: GroupSpec::new(vec![FactorSpec::Spin(10, Chirality::Even)]),
        rep: RepExpr::Sum(vec![d(0), d(0)]),
        split: 16,
        point: catalog::spin10_pair_point(),
        weighted_dim: 32,
        cut_on_first: true,
        dim_p: 31,
        isotropy: 24,
        citation: "Spin(10) on Λe + Λe at (1 + e1234, e15 + e2345), dim L p = 32",
    });
    out
}

fn weighted_scenarios() -> Vec<Scenario> {
    let mut out = Vec::new();
    for row in point_rows() {
        for (k, s) in [(1u32, 2u32), (2, 3)] {
            let name = if (k, s) == (1, 2) {
                format!("{}-weighted", row.key)
            } else {
                format!("{}-weighted-k{k}-s{s}", row.key)
            };
            let mut sc = Scenario::new(name, Pipeline::Weighted);
            sc.citation = Some(format!("weighted projective space P(V)_[k,s]: {}", row.citation));
            sc.group = Some(row.group.clone());
            sc.rep = Some(row.rep.clone());
            sc.point = Some(row.point.clone());
            sc.weighted = Some(WeightedSpec { split: row.split, k, s });
            sc.expected = Expected {
                lagrangian: Some(true),
                orbit_dim: Some(row.weighted_dim),
                claim: Some(true),
                ..Expected::default()
            };
            out.push(sc);
        }
    }
    out
}

fn blowup_scenarios() -> Vec<Scenario> {
    point_rows()
        .into_iter()
        .filter(|r| matches!(r.key.as_str(), "su3" | "su5" | "sp2" | "spin10"))
        .map(|row| {
            let dim = row.point.len();
            let (w1, w2) = if row.cut_on_first { (-1, 0) } else { (0, -1) };
            let weights = (0..dim).map(|j| if j < row.split { w1 } else { w2 }).collect();
            let mut sc = Scenario::new(format!("{}-blowup", row.key), Pipeline::Cut);
            sc.citation = Some(format!("blow-up of P(V) at the circle maximum: {}", row.citation));
            sc.notes.push(
                "interpretation: the blow-up is paired with the explicit Lagrangian point of P(V); the line coordinate is derived from the level".into(),
            );
            sc.group = Some(row.group);
            sc.rep = Some(row.rep);
            sc.point = Some(row.point);
            sc.circle = Some(CircleSpec {
                weights,
                level: 0.5 - BLOWUP_EPSILON,
                base: Some(CutBase::Projective),
                line: None,
                target: Some("the blow-up of P(V) at one point".into()),
            });
            sc.expected = Expected {
                lagrangian: Some(true),
                reduced_orbit_dim: Some(row.dim_p),
                isotropy_dim: Some(row.isotropy),
                claim: Some(true),
                ..Expected::default()
            };
            sc
        })
        .collect()
}

fn example_scenarios() -> Vec<Scenario> {
    let mut out = Vec::new();

    let mut qui = Scenario::new("example-qui", Pipeline::Verdict);
    qui.citation = Some("Example: (t,A)(v,w) = (At^-1 v, Aw), induces a curve in the moduli space".into());
    qui.space = Some(SpaceKind::Linear);
    qui.group = group(vec![FactorSpec::CircleSlots(vec![-1, -1, 0, 0]), FactorSpec::Su(2)]);
    qui.rep = Some(RepExpr::Sum(vec![d(1), d(1)]));
    qui.point = Some(vec![c(1.0), c(1.0), c(1.0), c(-1.0)]);
    qui.expected = Expected {
        lagrangian: Some(true),
        orbit_dim: Some(4),
        isotropy_dim: Some(0),
        moduli_dim: Some(1),
        isolated: Some(false),
        ss_transitive: Some(false),
        ..Expected::default()
    };
    out.push(qui);

    // T^3 on CP^3 and its blow-up at [1, 0, 0, 0]
    let torus = || {
        group(
            (1..4)
                .map(|j| FactorSpec::CircleSlots((0..4).map(|i| if i == j { -1 } else { 0 }).collect()))
                .collect(),
        )
    };
    let mut t = Scenario::new("example-exlag-torus", Pipeline::Verdict);
    t.citation = Some("Example: T^n on CP^n, principal orbits are Lagrangian".into());
    t.space = Some(SpaceKind::Projective);
    t.group = torus();
    t.rep = Some(RepExpr::Trivial(4));
    t.point = Some(vec![c(1.0); 4]);
    t.expected = Expected {
        lagrangian: Some(true),
        orbit_dim: Some(3),
        moduli_dim: Some(3),
        ..Expected::default()
    };
    out.push(t);

    let mut tb = Scenario::new("example-exlag-torus-blowup", Pipeline::Cut);
    tb.citation = Some("Example: T^n acts on the blow-up of CP^n at [1, 0, ..., 0] with a Lagrangian orbit".into());
    tb.group = torus();
    tb.rep = Some(RepExpr::Trivial(4));
    tb.point = Some(vec![c(1.0); 4]);
    tb.circle = Some(CircleSpec {
        weights: vec![-1, 0, 0, 0],
        level: 0.5 - BLOWUP_EPSILON,
        base: Some(CutBase::Projective),
        line: None,
        target: Some("CP^3 blown up at [1, 0, 0, 0]".into()),
    });
    tb.expected = Expected {
        lagrangian: Some(true),
        reduced_orbit_dim: Some(3),
        claim: Some(true),
        ..Expected::default()
    };
    out.push(tb);

    // K = T^1 x U(2) on CP^4: [t z0, A t^-4 z, A t^-4 w]
    let k_group = || {
        group(vec![
            FactorSpec::CircleSlots(vec![1, -4, -4, -4, -4]),
            FactorSpec::CircleSlots(vec![0, 1, 1, 1, 1]),
            FactorSpec::Su(2),
        ])
    };
    let k_rep = || Some(RepExpr::Sum(vec![RepExpr::Trivial(1), d(2), d(2)]));
    let cp4_point = vec![c(1.0), c(1.0), c(1.0), c(1.0), c(-1.0)];
    let mut k = Scenario::new("example-exlag-cp4", Pipeline::Verdict);
    k.citation = Some("Example: K = T^1 x U(2) on CP^4, p = [z0, 1, 1, 1, -1], dim Kp = 4".into());
    k.notes.push("z0 = 1".into());
    k.space = Some(SpaceKind::Projective);
    k.group = k_group();
    k.rep = k_rep();
    k.point = Some(cp4_point.clone());
    k.expected = Expected {
        lagrangian: Some(true),
        orbit_dim: Some(4),
        ..Expected::default()
    };
    out.push(k);

    let mut kb = Scenario::new("example-exlag-cp4-blowup", Pipeline::Cut);
    kb.citation = Some("Example: K[p] is a Lagrangian orbit of K on CP^4 blown up at [1, 0, ..., 0]".into());
    kb.notes.push("z0 = 1; cut circle t^-1 on z0".into());
    kb.group = k_group();
    kb.rep = k_rep();
    kb.point = Some(cp4_point);
    kb.circle = Some(CircleSpec {
        weights: vec![-1, 0, 0, 0, 0],
        level: 0.5 - BLOWUP_EPSILON,
        base: Some(CutBase::Projective),
        line: None,
        target: Some("CP^4 blown up at [1, 0, 0, 0, 0]".into()),
    });
    kb.expected = Expected {
        lagrangian: Some(true),
        reduced_orbit_dim: Some(4),
        claim: Some(true),
        ..Expected::default()
    };
    out.push(kb);

    // circle reduction C^3 // T^1 = CP^2
    let mut r = Scenario::new("reduction-so3-cp2", Pipeline::Reduction);
    r.citation = Some("reduction: T^1.K[p] Lagrangian in V iff K[p] Lagrangian in M_lambda".into());
    r.group = group(vec![FactorSpec::So(3)]);
    r.rep = Some(d(0));
    r.point = Some(vec![c(1.0), c(0.0), c(0.0)]);
    r.circle = Some(CircleSpec {
        weights: vec![-1, -1, -1],
        level: 0.5,
        base: None,
        line: None,
        target: None,
    });
    r.expected = Expected {
        lagrangian: Some(true),
        orbit_dim: Some(3),
        reduced_orbit_dim: Some(2),
        claim: Some(true),
        ..Expected::default()
    };
    out.push(r);

    let mut rn = Scenario::new("reduction-su3-cp2", Pipeline::Reduction);
    rn.citation = Some("reduction: SU(3) is transitive on CP^2, so no Lagrangian orbit".into());
    rn.group = group(vec![FactorSpec::Su(3)]);
    rn.rep = Some(d(0));
    rn.point = Some(vec![c(1.0), c(0.0), c(0.0)]);
    rn.circle = Some(CircleSpec {
        weights: vec![-1, -1, -1],
        level: 0.5,
        base: None,
        line: None,
        target: None,
    });
    rn.expected = Expected {
        lagrangian: Some(false),
        orbit_dim: Some(5),
        claim: Some(false),
        ..Expected::default()
    };
    out.push(rn);

    let mut neg = Scenario::new("cp1-negative-control", Pipeline::Search);
    neg.citation = Some("SU(2) is transitive on CP^1: no Lagrangian orbit".into());
    neg.space = Some(SpaceKind::Projective);
    neg.group = group(vec![FactorSpec::Su(2)]);
    neg.rep = Some(d(0));
    neg.search = Some(SearchParams {
        starts: 64,
        ..SearchParams::default()
    });
    neg.expected = Expected {
        found: Some(false),
        ..Expected::default()
    };
    out.push(neg);
    out
}

fn slice(
    name: &str,
    factors: Vec<FactorSpec>,
    rep: RepExpr,
    point: Option<Vec<Complex64>>,
    ambient: &str,
    citation: &str,
) -> Scenario {
    let mut s = Scenario::new(name, Pipeline::Slice);
    s.citation = Some(citation.into());
    s.space = Some(SpaceKind::Linear);
    s.group = group(factors);
    s.rep = Some(rep);
    s.point = point;
    s.ambient = Some(ambient.into());
    s.expected = Expected {
        slice_status: Some(SliceStatus::Supported),
        lagrangian: Some(true),
        ..Expected::default()
    };
    s
}

fn unsupported(name: &str, reason: &str, citation: &str) -> Scenario {
    let mut s = Scenario::new(name, Pipeline::Unsupported);
    s.reason = Some(reason.into());
    s.citation = Some(citation.into());
    s
}

fn slice_scenarios() -> Vec<Scenario> {
    let mut e1 = vec![c(0.0); 3];
    e1[0] = c(1.0);
    let mut e1_2 = vec![c(0.0); 2];
    e1_2[0] = c(1.0);
    let mut out = vec![
        unsupported(
            "slice-item1-g2",
            "argued through the isotropy SU(3) of G2 at [U(4)], not through a slice module",
            "Lagrangian orbits on Hermitian symmetric spaces: G2 on SO(8)/U(4)",
        ),
        slice(
            "slice-item2-so2-so3",
            vec![FactorSpec::Circle(vec![-1]), FactorSpec::So(3)],
            d(1),
            Some(e1),
            "SO(5)/SO(2)xSO(3)",
            "Lagrangian orbits on Hermitian symmetric spaces: SO(2) x SO(n) on SO(n+2)/SO(2)xSO(n), slice C^n",
        ),
        slice(
            "slice-item3-s-u1-u2",
            vec![FactorSpec::Circle(vec![-1]), FactorSpec::Su(2)],
            d(1),
            Some(e1_2),
            "CP^2",
            "Lagrangian orbits on Hermitian symmetric spaces: S(U(1) x U(n)) on CP^n, slice C^n",
        ),
        slice(
            "slice-item4-sp2",
            vec![FactorSpec::Circle(vec![-1, -1]), FactorSpec::Sp(2)],
            RepExpr::Sum(vec![d(1), d(1)]),
            Some(catalog::sp_pair_point(2)),
            "SU(6)/S(U(2)xU(4))",
            "Lagrangian orbits on Hermitian symmetric spaces: Z(S(U(2) x U(2n))) x Sp(n), slice C^2n + C^2n",
        ),
        slice(
            "slice-item5-u4",
            vec![FactorSpec::Circle(vec![-2]), FactorSpec::Su(4)],
            RepExpr::ext(d(1), 2),
            Some(catalog::j_bivector(4, 0, 2)),
            "SU(8)/U(4)",
            "Lagrangian orbits on Hermitian symmetric spaces: U(2n) on SU(4n)/U(2n), slice Λ2(C^2n)",
        ),
        slice(
            "slice-item6-u5",
            vec![FactorSpec::Circle(vec![-2, -1]), FactorSpec::Su(5)],
            RepExpr::Sum(vec![RepExpr::ext(d(1), 2), d(1)]),
            Some(catalog::su_lambda2_lambda1_point(2)),
            "SU(12)/U(6)",
            "Lagrangian orbits on Hermitian symmetric spaces: U(2n+1) on SU(4n+4)/U(2n+2), center t(X,v) = (t^2 X, t v)",
        ),
        slice(
            "slice-item7-u2",
            vec![FactorSpec::Circle(vec![-2]), FactorSpec::Su(2)],
            RepExpr::sym(d(1), 2),
            Some(catalog::sym2_identity_point(2)),
            "Sp(2)/U(2)",
            "Lagrangian orbits on Hermitian symmetric spaces: U(n) on Sp(n)/U(n), slice S^2(C^n)",
        ),
        unsupported(
            "slice-item8-e6",
            "the 27-dimensional E6 module is not constructed",
            "Lagrangian orbits on Hermitian symmetric spaces: T^1.E6 on E7/T^1.E6, slice C^27",
        ),
        slice(
            "slice-item9-spin9",
            vec![FactorSpec::Circle(vec![-1]), FactorSpec::Spin(9, Chirality::Full)],
            d(1),
            None,
            "E6/T^1.Spin(10)",
            "Lagrangian orbits on Hermitian symmetric spaces: T^1.Spin(9) on E6/T^1.Spin(10), slice C^16",
        ),
        unsupported(
            "slice-item10-spin7",
            "proved by reference for Spin(7) on SU(8)/S(U(2)xU(6)), not through a slice module",
            "Lagrangian orbits on Hermitian symmetric spaces: Spin(7) in SO(8) in SU(8)",
        ),
    ];
    for s in &mut out {
        match s.name.as_str() {
            "slice-item4-sp2" => s.notes.push(
                "the torus weight (1-n)/n is the same on both summands, so it generates the scalar circle; weight -1 is used".into(),
            ),
            "slice-item9-spin9" => {
                s.notes.push("no point is given; the slice point comes from a Kirwan search".into());
                s.search = explicit_search();
            }
            _ => {}
        }
    }
    out
}

/// All built-in scenarios, sorted by name.
pub fn registry() -> Vec<Scenario> {
    let mut out = table_scenarios();
    out.extend(weighted_scenarios());
    out.extend(blowup_scenarios());
    out.extend(example_scenarios());
    out.extend(slice_scenarios());
    out.sort_by(|a, b| a.name.cmp(&b.name));
    out
}

/// Scenarios whose name matches the glob; `None` selects all.
pub fn select(filter: Option<&str>) -> Result<Vec<Scenario>, glob::PatternError> {
    let all = registry();
    match filter {
        None => Ok(all),
        Some(f) => {
            let pat = glob::Pattern::new(f)?;
            Ok(all.into_iter().filter(|s| pat.matches(&s.name)).collect())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    #[test]
    fn names_are_unique() {
        let r = registry();
        let names: HashSet<_> = r.iter().map(|s| s.name.clone()).collect();
        assert_eq!(names.len(), r.len());
    }

    #[test]
    fn every_table_row_has_exactly_one_scenario_or_gap() {
        let entries = table_entries();
        let reg = registry();
        for (i, _) in catalog::table_rows().iter().enumerate() {
            let ids: Vec<_> = entries.iter().filter(|e| e.row == i).map(|e| e.id.clone()).collect();
            assert!(!ids.is_empty(), "row {i} unmapped");
            for id in ids {
                let n = reg.iter().filter(|s| s.table_row.as_deref() == Some(id.as_str())).count();
                assert_eq!(n, 1, "{id}");
            }
        }
    }

    #[test]
    fn every_scenario_round_trips_through_text() {
        for s in registry() {
            let back = crate::scenario::parse_scenario(&s.to_text()).unwrap_or_else(|e| panic!("{}: {e}", s.name));
            assert_eq!(back, s, "{}", s.name);
        }
    }

    #[test]
    fn glob_selection() {
        assert_eq!(select(Some("e6*")).unwrap().len(), 1);
        assert_eq!(select(Some("spin10-weighted")).unwrap().len(), 1);
        let su = select(Some("su*")).unwrap();
        for n in 3..=5 {
            let name = format!("su{n}-lambda1-dual");
            let s = su.iter().find(|s| s.name == name).expect("instance present");
            assert_eq!(s.expected.isotropy_dim, Some(n * (n - 1) / 2));
        }
        assert!(select(Some("[")).is_err());
    }
}
