//! Exact arithmetic for differential operators with Laurent-polynomial
//! coefficients.

pub mod coeff;
pub mod decompose;
pub mod diffop;
pub mod param;
pub mod scalar;
pub mod series;

pub use coeff::{CoeffExpr, Mono, Var, VarKind};
pub use decompose::{op_decompose, Decomposition, RatFn};
pub use diffop::{DIdx, DiffOp, DivisionOrder, LATTICE_PARAM};
pub use param::{Param, ParamPoly};
pub use scalar::Scalar;
pub use series::series_truncate;

use crate::error::Result;

pub fn op_mul(a: &DiffOp, b: &DiffOp) -> Result<DiffOp> {
    a.try_compose(b)
}

pub fn op_commutator(a: &DiffOp, b: &DiffOp) -> Result<DiffOp> {
    a.try_commutator(b)
}

pub fn op_apply(a: &DiffOp, f: &CoeffExpr) -> CoeffExpr {
    a.apply(f)
}
