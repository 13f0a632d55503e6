use dynsym::opalg::{op_apply, op_commutator, op_mul, CoeffExpr, DiffOp, ParamPoly, Scalar, Var};
use proptest::prelude::*;

fn term() -> impl Strategy<Value = DiffOp> {
    (-3i64..=3, 0u32..=1, -1i32..=2, 0i32..=2, 0u32..=1, 0u32..=2).prop_map(|(c, px, a, b, i, j)| {
        let (t, r) = (Var::t(), Var::r(1));
        let mut coeff = CoeffExpr::var_pow(t, a).mul(&CoeffExpr::var_pow(r, b)).scale(&Scalar::int(c));
        if px == 1 {
            coeff = coeff.scale_param(&ParamPoly::symbol("x"));
        }
        DiffOp::coeff(coeff).compose(&DiffOp::d_pow(t, i)).compose(&DiffOp::d_pow(r, j))
    })
}

fn op() -> impl Strategy<Value = DiffOp> {
    prop::collection::vec(term(), 1..4).prop_map(|ts| ts.iter().fold(DiffOp::zero(), |acc, t| acc.add(t)))
}

fn monomial() -> impl Strategy<Value = CoeffExpr> {
    (-2i32..=3, 0i32..=4).prop_map(|(a, b)| CoeffExpr::var_pow(Var::t(), a).mul(&CoeffExpr::var_pow(Var::r(1), b)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn composition_is_associative(a in op(), b in op(), c in op()) {
        let left = op_mul(&op_mul(&a, &b).unwrap(), &c).unwrap();
        let right = op_mul(&a, &op_mul(&b, &c).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn commutator_is_antisymmetric(a in op(), b in op()) {
        let ab = op_commutator(&a, &b).unwrap();
        let ba = op_commutator(&b, &a).unwrap();
        prop_assert!(ab.add(&ba).is_zero());
    }

    #[test]
    fn jacobi_identity(a in op(), b in op(), c in op()) {
        let j = a.commutator(&b.commutator(&c))
            .add(&b.commutator(&c.commutator(&a)))
            .add(&c.commutator(&a.commutator(&b)));
        prop_assert!(j.is_zero());
    }

    #[test]
    fn apply_respects_composition(a in op(), b in op(), m in monomial()) {
        let ab = op_mul(&a, &b).unwrap();
        prop_assert_eq!(op_apply(&ab, &m), op_apply(&a, &op_apply(&b, &m)));
    }

    #[test]
    fn difference_with_itself_is_empty(a in op()) {
        let z = a.sub(&a);
        prop_assert!(z.is_zero());
        prop_assert_eq!(z.terms().count(), 0);
    }
}

#[test]
fn leibniz_examples() {
    let (t, r) = (Var::t(), Var::r(1));
    let dr_r = DiffOp::d(r).compose(&DiffOp::var(r));
    assert_eq!(dr_r, DiffOp::var(r).compose(&DiffOp::d(r)).add(&DiffOp::identity()));
    let tdt = DiffOp::var(t).compose(&DiffOp::d(t));
    let sq = tdt.compose(&tdt);
    let expect = DiffOp::coeff(CoeffExpr::var_pow(t, 2)).compose(&DiffOp::d_pow(t, 2)).add(&tdt);
    assert_eq!(sq, expect);
}
