pub mod catalog;
pub mod error;
pub mod kirwan;
pub mod linalg;
pub mod liealg;
pub mod reduction;
pub mod symcheck;
pub mod tol;

pub use error::{Error, Result};
pub use liealg::{eval_rep_expr, Chirality, FactorSpec, GroupSpec, MatrixRep, RepExpr};
pub use tol::Tolerances;
