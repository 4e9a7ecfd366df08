//! Benchmark fixtures shared by the criterion targets.

use momentkit_core::catalog::{table_entry, Support};
use momentkit_core::symcheck::{PhaseSpace, PointState};
use momentkit_core::{eval_rep_expr, MatrixRep};

/// Representation, projective space and (unit) point of a table row that
/// carries an explicit point.
pub fn fixture(id: &str) -> (MatrixRep, PhaseSpace, PointState) {
    let e = table_entry(id).expect("known row");
    let Support::Constructible { group, rep, point } = e.support else {
        panic!("{id} is not constructible");
    };
    let r = eval_rep_expr(&group, &rep).expect("row builds");
    let s = PhaseSpace::projective(r.dim_v());
    let p = point.expect("row has an explicit point");
    let p = PointState::new(&s, momentkit_core::linalg::CVec::from_vec(p)).expect("valid point");
    (r, s, p)
}
