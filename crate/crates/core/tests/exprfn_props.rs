use std::collections::BTreeMap;

use dynsym::exprfn::{
    expr_diff, fit_exponents_form, fit_exponents_table, make_form, ClosedForm, Env, FormId, FormParams, Identification,
    MpCtx,
};
use dynsym::opalg::{ParamPoly, Scalar, Var};
use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn eval(f: &ClosedForm, vals: &[(Var, BigRational)], params: &[(&str, Scalar)]) -> (f64, f64) {
    let mut ctx = MpCtx::with_digits(50);
    let mut env = Env::default();
    for (v, x) in vals {
        env.vars.insert(*v, ctx.real(x));
    }
    for (p, s) in params {
        env.params.insert(dynsym::opalg::Param::new(p), s.clone());
    }
    let z = f.eval(&mut ctx, &env).unwrap();
    ctx.to_f64_pair(&z)
}

fn t1() -> Var {
    Var::t().with_point(1)
}
fn t2() -> Var {
    Var::t().with_point(2)
}
fn r1() -> Var {
    Var::r(1).with_point(1)
}
fn r2() -> Var {
    Var::r(1).with_point(2)
}

#[test]
fn power_rule() {
    let t = Var::t();
    let f = ClosedForm::var(t).pow(ParamPoly::symbol("x").neg());
    let d = expr_diff(&f, t);
    assert!(!d.domain_restricted);
    let expect = ClosedForm::var(t)
        .pow(ParamPoly::symbol("x").neg().sub(&ParamPoly::one()))
        .scale(&ParamPoly::symbol("x").neg());
    let pt = [(t, q(7, 3))];
    let ps = [("x", Scalar::frac(5, 7))];
    let (a, _) = eval(&d.form, &pt, &ps);
    let (b, _) = eval(&expect, &pt, &ps);
    assert!((a - b).abs() < 1e-14 * b.abs());
}

#[test]
fn gaussian_chain_rule() {
    let (t, r) = (Var::t(), Var::r(1));
    let m = ParamPoly::symbol("M");
    let g = ClosedForm::var(r).powi(2).mul(&ClosedForm::var(t).powi(-1)).scale(&m.scale(&Scalar::frac(-1, 2))).exp();
    let d = expr_diff(&g, r).form;
    let expect = ClosedForm::var(r).mul(&ClosedForm::var(t).powi(-1)).scale(&m.neg()).mul(&g);
    let pt = [(t, q(3, 2)), (r, q(-4, 5))];
    let ps = [("M", Scalar::frac(2, 3))];
    let (a, _) = eval(&d, &pt, &ps);
    let (b, _) = eval(&expect, &pt, &ps);
    assert!((a - b).abs() < 1e-14 * b.abs());
}

#[test]
fn dual_base_derivative() {
    let (z, t, r) = (Var::zeta(1), Var::t(), Var::r(1));
    let p = ParamPoly::symbol("p");
    let u = ClosedForm::var(z)
        .mul(&ClosedForm::var(t))
        .scale(&ParamPoly::int(2))
        .add(&ClosedForm::var(r).powi(2).scale(&ParamPoly::i()));
    let f = u.pow(p.neg());
    let d = expr_diff(&f, z).form;
    let expect = u.pow(p.neg().sub(&ParamPoly::one())).mul(&ClosedForm::var(t)).scale(&p.scale(&Scalar::int(-2)));
    let pt = [(z, q(-3, 4)), (t, q(5, 4)), (r, q(2, 3))];
    let ps = [("p", Scalar::frac(7, 5))];
    let (a, ai) = eval(&d, &pt, &ps);
    let (b, bi) = eval(&expect, &pt, &ps);
    assert!((a - b).abs() + (ai - bi).abs() < 1e-14 * (b.abs() + bi.abs()));
}

#[test]
fn form_normalizations() {
    let p = FormParams::generic(FormId::Sch2pt, 1, 1);
    let f = make_form(FormId::Sch2pt, &p).unwrap();
    let (v, _) = eval(&f, &[(t1(), q(5, 2)), (t2(), q(3, 2)), (r1(), q(1, 3)), (r2(), q(1, 3))], &[]);
    assert!((v - 1.0).abs() < 1e-15);

    let p = FormParams::generic(FormId::CausalCga, 1, 1);
    let f = make_form(FormId::CausalCga, &p).unwrap();
    let g = [(Var::gamma(1).with_point(1), q(3, 4)), (Var::gamma(1).with_point(2), q(3, 4))];
    let mut pt = vec![(t1(), q(1, 1)), (t2(), q(3, 1)), (r1(), q(1, 2)), (r2(), q(1, 2))];
    pt.extend(g);
    let (v, _) = eval(&f, &pt, &[]);
    let x = 2.0 * dynsym::opalg::scalar::ratio_to_f64(&p.p1.x.as_constant().unwrap().re);
    assert!((v - 2f64.powf(-x)).abs() < 1e-14);
}

#[test]
fn ageing_response_with_the_example_identification() {
    let id = Identification { x: q(1, 2), x_tilde: q(0, 1), xi: q(0, 1), xi_tilde: q(1, 4) };
    let mut p = FormParams::symbolic(1);
    p.p1.x = ParamPoly::frac(1, 2);
    p.p2.x = ParamPoly::zero();
    p.p1.xi = ParamPoly::zero();
    p.p2.xi = ParamPoly::frac(1, 4);
    p.p1.mass = ParamPoly::frac(1, 2);
    p.p2.mass = ParamPoly::frac(-1, 2);
    let f = make_form(FormId::AgeResp, &p).unwrap();
    let fixed = BTreeMap::from([(r1(), q(0, 1)), (r2(), q(0, 1))]);
    let rec = fit_exponents_form(&f, t1(), t2(), &fixed).unwrap().with_identification(id.clone());
    let e = rec.exact.clone().unwrap();
    assert_eq!(e, [q(-1, 4), q(0, 1), q(-1, 2)]);
    assert_eq!(e, id.exponents());
    assert_eq!(rec.digamma().unwrap(), q(0, 1));
    assert_eq!(rec.constraint_residue().unwrap(), q(0, 1));
}

#[test]
fn exact_glauber_response_exponents() {
    let mut samples = Vec::new();
    for s in [5.0f64, 10.0, 25.0, 60.0] {
        for y in [1.5, 2.0, 3.0, 7.0] {
            let t = y * s;
            let r = 1.0 / (2f64.sqrt() * std::f64::consts::PI * (s * (t - s)).sqrt());
            samples.push((s, y, r));
        }
    }
    let rec = fit_exponents_table(&samples).unwrap();
    let e = rec.exact.unwrap();
    assert_eq!(e, [q(-1, 1), q(0, 1), q(-1, 2)]);
    let alt = Identification::from_exponents(&e, q(1, 2), q(0, 1));
    assert_eq!(alt.x_tilde, q(3, 2));
    assert_eq!(alt.xi_tilde, q(-1, 2));
    assert_eq!(alt.constraint_residue(), q(0, 1));
}

#[test]
fn pure_power_in_time_difference() {
    let p = FormParams::generic(FormId::Sch2pt, 1, 4);
    let f = make_form(FormId::Sch2pt, &p).unwrap();
    let fixed = BTreeMap::from([(r1(), q(0, 1)), (r2(), q(0, 1))]);
    let rec = fit_exponents_form(&f, t1(), t2(), &fixed).unwrap();
    let x = p.p1.x.as_constant().unwrap().re;
    let e = rec.exact.unwrap();
    assert_eq!(e, [-x.clone(), q(0, 1), -x]);
}

#[test]
fn fit_rejects_non_power_law() {
    let samples: Vec<(f64, f64, f64)> =
        [(1.0f64, 2.0f64), (2.0, 3.0), (3.0, 1.5), (4.0, 5.0), (5.0, 2.5)].iter().map(|&(s, y)| (s, y, (s * y).exp())).collect();
    assert!(fit_exponents_table(&samples).is_err());
}

fn five_point(f: &ClosedForm, v: Var, pt: &[(Var, BigRational)]) -> f64 {
    let h = q(1, 10_000_000_000);
    let mut ctx = MpCtx::with_digits(50);
    let vals: Vec<_> = [-2i64, -1, 1, 2]
        .iter()
        .map(|&k| {
            let pts: Vec<(Var, BigRational)> =
                pt.iter().map(|(w, x)| (*w, if *w == v { x + &h * BigInt::from(k) } else { x.clone() })).collect();
            let mut env = Env::default();
            for (w, x) in &pts {
                env.vars.insert(*w, ctx.real(x));
            }
            f.eval(&mut ctx, &env).unwrap()
        })
        .collect();
    // (f(−2h) − 8f(−h) + 8f(h) − f(2h)) / 12h
    let w: Vec<_> = [1i64, -8, 8, -1].iter().map(|&k| ctx.scalar(&Scalar::int(k))).collect();
    let mut acc = ctx.zero();
    for (v, c) in vals.iter().zip(&w) {
        acc = ctx.add(&acc, &ctx.mul(v, c));
    }
    let den = ctx.real(&(h * BigInt::from(12)));
    let d = ctx.div(&acc, &den).unwrap();
    ctx.to_f64(&d.re)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn derivative_matches_finite_differences(a in 1i64..40, b in 1i64..40, c in -30i64..30, k in 0usize..3) {
        let p = FormParams::generic(FormId::AgeResp, 1, a as u64);
        let f = make_form(FormId::AgeResp, &p).unwrap();
        let pt = vec![(t1(), q(40 + a, 10)), (t2(), q(b, 10)), (r1(), q(c, 10)), (r2(), q(-c, 7))];
        let v = [t1(), t2(), r1()][k];
        let d = expr_diff(&f, v).form;
        let exact = eval(&d, &pt, &[]).0;
        let fd = five_point(&f, v, &pt);
        prop_assert!((exact - fd).abs() <= 1e-20 * exact.abs().max(1e-300) + 1e-300, "{} vs {}", exact, fd);
    }

    #[test]
    fn causal_cga_is_reflection_symmetric(r in -40i64..40, g in 1i64..30, t in 1i64..50, x in 1i64..30) {
        let mut p = FormParams::generic(FormId::CausalCga, 1, 0);
        p.p1.x = ParamPoly::frac(x, 7);
        p.p2.x = ParamPoly::frac(x, 7);
        let f = make_form(FormId::CausalCga, &p).unwrap();
        let pt = |s: i64| vec![
            (t1(), q(t, 5)), (t2(), q(0, 1)),
            (r1(), q(s * r, 9)), (r2(), q(0, 1)),
            (Var::gamma(1).with_point(1), q(s * g, 11)), (Var::gamma(1).with_point(2), q(s * g, 11)),
        ];
        let a = eval(&f, &pt(1), &[]).0;
        let b = eval(&f, &pt(-1), &[]).0;
        prop_assert!((a - b).abs() <= 1e-15 * a.abs());
    }
}
