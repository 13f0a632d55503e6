use serde::Serialize;

use crate::opalg::{CoeffExpr, DiffOp, ParamPoly, Scalar, Var};

/// `coeff · z^power (dz)^weight`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DensityElement {
    pub coeff: String,
    pub power: i32,
    pub weight: String,
    #[serde(skip)]
    pub coeff_poly: ParamPoly,
}

/// Action of `f = z^{n+1} ∂_z` on `u = z^{m+1} (dz)^α`: `(f u' + α f' u)(dz)^α`.
pub fn density_bracket(n: i32, m: i32, alpha: &ParamPoly) -> DensityElement {
    let c = ParamPoly::int(m as i64 + 1).add(&alpha.scale(&Scalar::int(n as i64 + 1)));
    DensityElement { coeff: c.to_string(), power: n + m + 1, weight: alpha.to_string(), coeff_poly: c }
}

/// The same action computed by applying `z^{n+1}∂_z + α(n+1)z^n` to `z^{m+1}`.
pub fn density_bracket_via_operator(n: i32, m: i32, alpha: &ParamPoly) -> DensityElement {
    let z = Var::z();
    let op = DiffOp::coeff(CoeffExpr::var_pow(z, n + 1))
        .compose(&DiffOp::d(z))
        .add(&DiffOp::coeff(CoeffExpr::var_pow(z, n).scale(&Scalar::int(n as i64 + 1)).scale_param(alpha)));
    let out = op.apply(&CoeffExpr::var_pow(z, m + 1));
    let power = n + m + 1;
    let c = out.get(&vec![(z, power)].into_iter().filter(|(_, e)| *e != 0).collect());
    DensityElement { coeff: c.to_string(), power, weight: alpha.to_string(), coeff_poly: c }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn agrees_with_operator_action() {
        let a = ParamPoly::symbol("alpha");
        for n in -2..=2 {
            for m in -2..=2 {
                assert_eq!(density_bracket(n, m, &a), density_bracket_via_operator(n, m, &a));
            }
        }
        let e = density_bracket(0, 0, &ParamPoly::int(-1));
        assert!(e.coeff_poly.is_zero());
    }
}
