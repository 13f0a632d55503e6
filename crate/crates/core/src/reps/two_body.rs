use super::{make_rep, GenKey, RepId, RepParams};
use crate::error::Result;
use crate::opalg::DiffOp;

/// Moves every variable of `op` to point `k`.
pub fn point_vars(op: &DiffOp, k: u8) -> DiffOp {
    op.map_vars(&|v| v.with_point(k))
}

/// `g1` acting on point 1 plus `g2` acting on point 2.
pub fn two_body_op(g1: &DiffOp, g2: &DiffOp) -> DiffOp {
    point_vars(g1, 1).add(&point_vars(g2, 2))
}

/// The two-point form of generator `key`, with each point carrying its own
/// parameters (usually `p.for_point(1)` and `p.for_point(2)`).
pub fn two_body(id: RepId, key: GenKey, p1: &RepParams, p2: &RepParams) -> Result<DiffOp> {
    let f1 = make_rep(id, p1)?;
    let f2 = make_rep(id, p2)?;
    Ok(two_body_op(f1.gen(&key)?, f2.gen(&key)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::opalg::{CoeffExpr, ParamPoly, Scalar, Var};

    #[test]
    fn translations_and_mass() {
        let p = RepParams::default();
        let (p1, p2) = (p.for_point(1), p.for_point(2));
        let x = two_body(RepId::Sch, GenKey::X(-1), &p1, &p2).unwrap();
        let t1 = Var::t().with_point(1);
        let t2 = Var::t().with_point(2);
        assert_eq!(x, DiffOp::d(t1).add(&DiffOp::d(t2)).neg());
        let m = two_body(RepId::Sch, GenKey::M(0), &p1, &p2).unwrap();
        let expect = ParamPoly::symbol("M1").add(&ParamPoly::symbol("M2")).neg();
        assert_eq!(m, DiffOp::param(expect));
    }

    #[test]
    fn dilatation() {
        let p = RepParams::default();
        let x0 = two_body(RepId::Sch, GenKey::X(0), &p.for_point(1), &p.for_point(2)).unwrap();
        let mut expect = DiffOp::zero();
        for k in [1u8, 2] {
            let t = Var::t().with_point(k);
            let r = Var::r(1).with_point(k);
            expect = expect
                .sub(&DiffOp::coeff(CoeffExpr::var(t)).compose(&DiffOp::d(t)))
                .sub(&DiffOp::coeff(CoeffExpr::var(r).scale(&Scalar::frac(1, 2))).compose(&DiffOp::d(r)));
        }
        let xs = ParamPoly::symbol("x1").add(&ParamPoly::symbol("x2")).scale(&Scalar::frac(1, 2));
        expect = expect.sub(&DiffOp::param(xs));
        assert_eq!(x0, expect);
    }
}
