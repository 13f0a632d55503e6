//! Closed-form two-point functions, exact differentiation and
//! randomized high-precision Ward-identity checks.

mod fit;
mod form;
mod forms;
mod mp;
mod ward;

pub use fit::{fit_exponents_form, fit_exponents_table, recognize_rational, ExponentRecord, Identification};
pub use form::{expr_diff, expr_diff_multi, ClosedForm, Derivative, Env};
pub use forms::{make_form, ward_generators, ward_setup, FormId, FormParams, PointParams, WardSetup};
pub use mp::{MpComplex, MpCtx};
pub use ward::{ward_residual, Domain, GeneratorResidual, WardConfig, WardReport};
