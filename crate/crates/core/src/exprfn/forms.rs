use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::form::ClosedForm;
use super::ward::Domain;
use crate::error::{Error, Result};
use crate::opalg::{DiffOp, ParamPoly, Scalar, Var};
use crate::reps::{make_parabolic_n, make_rep, two_body_op, GenKey, RepId, RepParams};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FormId {
    Conformal2pt,
    Sch2pt,
    AgeResp,
    Cga2pt,
    DualSch2pt,
    DualCga2pt,
    CausalSch,
    CausalCga,
}

impl FormId {
    pub const ALL: [FormId; 8] = [
        FormId::Conformal2pt,
        FormId::Sch2pt,
        FormId::AgeResp,
        FormId::Cga2pt,
        FormId::DualSch2pt,
        FormId::DualCga2pt,
        FormId::CausalSch,
        FormId::CausalCga,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            FormId::Conformal2pt => "conformal_2pt",
            FormId::Sch2pt => "sch_2pt",
            FormId::AgeResp => "age_resp",
            FormId::Cga2pt => "cga_2pt",
            FormId::DualSch2pt => "dual_sch_2pt",
            FormId::DualCga2pt => "dual_cga_2pt",
            FormId::CausalSch => "causal_sch",
            FormId::CausalCga => "causal_cga",
        }
    }
}

impl fmt::Display for FormId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for FormId {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        FormId::ALL
            .iter()
            .find(|f| f.name() == s)
            .copied()
            .ok_or_else(|| Error::Usage(format!("unknown form '{}'", s)))
    }
}

/// Scaling data carried by one of the two points.
#[derive(Clone, Debug)]
pub struct PointParams {
    pub x: ParamPoly,
    pub xi: ParamPoly,
    pub xi_prime: ParamPoly,
    pub mass: ParamPoly,
    /// Constant `γ` of the generalized conformal generators.
    pub gamma: ParamPoly,
}

impl PointParams {
    fn symbolic(k: u8) -> Self {
        let s = |n: &str| ParamPoly::symbol(&format!("{}{}", n, k));
        PointParams { x: s("x"), xi: s("xi"), xi_prime: s("xip"), mass: s("M"), gamma: s("gamma") }
    }
}

/// Parameters of a two-point form.
#[derive(Clone, Debug)]
pub struct FormParams {
    pub d: u8,
    pub p1: PointParams,
    pub p2: PointParams,
    /// `g(z) = Σ c_k z^k` of the generalized conformal generators.
    pub g: Vec<(i32, ParamPoly)>,
}

impl FormParams {
    pub fn symbolic(d: u8) -> Self {
        FormParams { d, p1: PointParams::symbolic(1), p2: PointParams::symbolic(2), g: Vec::new() }
    }

    /// Random rational parameters satisfying the constraints of `id`.
    pub fn generic(id: FormId, d: u8, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed_f0f0);
        let mut q = |lo: i64, hi: i64| ParamPoly::frac(rng.gen_range(lo..=hi), 17);
        let x = q(9, 60);
        let mut p1 = PointParams { x: x.clone(), xi: q(-20, 20), xi_prime: q(10, 40), mass: q(9, 40), gamma: q(3, 30) };
        let mut p2 = PointParams {
            x: x.clone(),
            xi: q(-20, 20),
            xi_prime: q(10, 40),
            mass: p1.mass.neg(),
            gamma: p1.gamma.clone(),
        };
        let g = vec![(-1, q(-10, 10)), (0, q(-10, 10)), (1, q(-10, 10)), (2, q(-10, 10))];
        if id == FormId::AgeResp {
            p2.x = q(1, 50);
            // x + 2ξ = x̃ + 2ξ̃
            p2.xi = p1.x.add(&p1.xi.scale(&Scalar::int(2))).sub(&p2.x).scale(&Scalar::frac(1, 2));
        }
        if matches!(id, FormId::DualSch2pt) {
            p1.xi = ParamPoly::zero();
            p2.xi = ParamPoly::zero();
        }
        if matches!(id, FormId::DualCga2pt) {
            p1.xi = q(5, 30);
            p2.xi = q(5, 30);
        }
        FormParams { d, p1, p2, g }
    }

    /// The single-point representation parameters of point `k`.
    pub fn rep_params(&self, k: u8) -> RepParams {
        let pp = if k == 1 { &self.p1 } else { &self.p2 };
        let mut p = RepParams::default().with_d(self.d);
        p.x = pp.x.clone();
        p.xi = pp.xi.clone();
        p.xi_prime = pp.xi_prime.clone();
        p.mass = pp.mass.clone();
        p.gamma = pp.gamma.clone();
        p.g = self.g.clone();
        p.window = 1;
        p
    }
}

fn tv(k: u8) -> ClosedForm {
    ClosedForm::var(Var::t().with_point(k))
}

fn rv(j: u8, k: u8) -> ClosedForm {
    ClosedForm::var(Var::r(j).with_point(k))
}

fn tau() -> ClosedForm {
    tv(1).sub(&tv(2))
}

fn rho(j: u8) -> ClosedForm {
    rv(j, 1).sub(&rv(j, 2))
}

fn rho_squared(d: u8) -> ClosedForm {
    ClosedForm::sum((1..=d).map(|j| rho(j).powi(2)).collect())
}

/// `exp(−(M/2) r²/τ)`.
fn heat_gaussian(d: u8, mass: &ParamPoly) -> ClosedForm {
    rho_squared(d).mul(&tau().powi(-1)).scale(&mass.scale(&Scalar::frac(-1, 2))).exp()
}

/// `Σ_j (γ_j¹ + γ_j²)(r_j¹ − r_j²)/τ`.
fn rapidity_phase(d: u8) -> ClosedForm {
    let terms = (1..=d)
        .map(|j| {
            let g = ClosedForm::var(Var::gamma(j).with_point(1)).add(&ClosedForm::var(Var::gamma(j).with_point(2)));
            g.mul(&rho(j))
        })
        .collect();
    ClosedForm::sum(terms).mul(&tau().powi(-1))
}

fn check_delta(what: &str, a: &ParamPoly, b: &ParamPoly) -> Result<()> {
    if a == b {
        Ok(())
    } else {
        Err(Error::Config(format!("{} violated: {} ≠ {}", what, a, b)))
    }
}

fn check_bargman(p: &FormParams) -> Result<()> {
    check_delta("mass superselection M1 + M2 = 0", &p.p1.mass, &p.p2.mass.neg())
}

/// `Γ(z) = z^{γ − c_0} exp(−Σ_{k≠0} c_k (z^k − 1)/k)`.
fn conformal_gamma(z: ClosedForm, gamma: &ParamPoly, g: &[(i32, ParamPoly)]) -> ClosedForm {
    let c0 = g.iter().filter(|(k, _)| *k == 0).fold(ParamPoly::zero(), |a, (_, c)| a.add(c));
    let arg = ClosedForm::sum(
        g.iter()
            .filter(|(k, _)| *k != 0)
            .map(|(k, c)| {
                z.powi(*k as i64)
                    .sub(&ClosedForm::one())
                    .scale(&c.scale(&Scalar::frac(-1, *k as i64)))
            })
            .collect(),
    );
    z.pow(gamma.sub(&c0)).mul(&arg.exp())
}

/// Builds the covariant two-point function of `id` with normalization 1.
pub fn make_form(id: FormId, p: &FormParams) -> Result<ClosedForm> {
    let d = p.d;
    let (a, b) = (&p.p1, &p.p2);
    Ok(match id {
        FormId::Conformal2pt => {
            check_delta("δ(γ1, γ2)", &a.gamma, &b.gamma)?;
            let (z1, z2) = (ClosedForm::var(Var::z().with_point(1)), ClosedForm::var(Var::z().with_point(2)));
            z1.sub(&z2)
                .pow(a.gamma.add(&b.gamma).neg())
                .mul(&conformal_gamma(z1, &a.gamma, &p.g))
                .mul(&conformal_gamma(z2, &b.gamma, &p.g))
        }
        FormId::Sch2pt => {
            check_delta("δ(x1, x2)", &a.x, &b.x)?;
            check_bargman(p)?;
            tau().pow(a.x.neg()).mul(&heat_gaussian(d, &a.mass))
        }
        FormId::CausalSch => {
            check_delta("δ(x1, x2)", &a.x, &b.x)?;
            check_bargman(p)?;
            tau().step().mul(&tau().pow(a.x.neg())).mul(&heat_gaussian(d, &a.mass))
        }
        FormId::AgeResp => {
            check_bargman(p)?;
            let two = Scalar::int(2);
            check_delta("x + 2ξ = x̃ + 2ξ̃", &a.x.add(&a.xi.scale(&two)), &b.x.add(&b.xi.scale(&two)))?;
            let (t, s) = (tv(1), tv(2));
            let e_s = a.x.add(&b.x).scale(&Scalar::frac(-1, 2));
            let e_y = a.xi.add(&digamma(a, b));
            let e_y1 = a.x.add(&a.xi.scale(&two)).neg();
            s.pow(e_s)
                .mul(&t.mul(&s.powi(-1)).pow(e_y))
                .mul(&tau().mul(&s.powi(-1)).pow(e_y1))
                .mul(&heat_gaussian(d, &a.mass))
        }
        FormId::Cga2pt => {
            check_delta("δ(x1, x2)", &a.x, &b.x)?;
            tau().pow(a.x.scale(&Scalar::int(-2))).mul(&rapidity_phase(d).neg().exp())
        }
        FormId::CausalCga => {
            check_delta("δ(x1, x2)", &a.x, &b.x)?;
            tau().abs().pow(a.x.scale(&Scalar::int(-2))).mul(&rapidity_phase(d).abs().neg().exp())
        }
        FormId::DualSch2pt => {
            check_delta("δ(x1, x2)", &a.x, &b.x)?;
            let zeta = ClosedForm::var(Var::zeta(1).with_point(1)).sub(&ClosedForm::var(Var::zeta(1).with_point(2)));
            let u = zeta
                .mul(&tau())
                .scale(&ParamPoly::int(2))
                .add(&rho_squared(d).scale(&ParamPoly::i()));
            let abs_t = tau().abs();
            let e = a.x.add(&a.xi_prime).add(&b.xi_prime).neg();
            abs_t.pow(a.x.neg()).mul(&u.mul(&abs_t.powi(-1)).pow(e))
        }
        FormId::DualCga2pt => {
            check_delta("δ(x1, x2)", &a.x, &b.x)?;
            if d != 1 {
                return Err(Error::Config("the dual cga two-point form is defined for d = 1".into()));
            }
            let zp = ClosedForm::var(Var::zeta(1).with_point(1))
                .add(&ClosedForm::var(Var::zeta(1).with_point(2)))
                .scale(&ParamPoly::frac(1, 2));
            let u = zp.add(&rho(1).mul(&tau().powi(-1)).scale(&ParamPoly::i()));
            tau().abs().pow(a.x.scale(&Scalar::int(-2))).mul(&u.pow(a.xi.add(&b.xi).neg()))
        }
    })
}

/// `ϝ = (x̃ − x)/2 + ξ̃ − ξ`.
fn digamma(a: &PointParams, b: &PointParams) -> ParamPoly {
    b.x.sub(&a.x).scale(&Scalar::frac(1, 2)).add(&b.xi).sub(&a.xi)
}

/// The Ward problem of a form: its two-body generators and sampling cell.
pub struct WardSetup {
    pub form: ClosedForm,
    pub generators: Vec<(String, DiffOp)>,
    pub domain: Domain,
}

fn family_ops(id: RepId, p: &FormParams, keep: &dyn Fn(&GenKey) -> bool) -> Result<Vec<(String, DiffOp)>> {
    let (p1, p2) = (p.rep_params(1), p.rep_params(2));
    let f1 = make_rep(id, &p1)?;
    let f2 = make_rep(id, &p2)?;
    let mut out = Vec::new();
    for k in f1.keys() {
        if !keep(&k) {
            continue;
        }
        out.push((f1.label(&k), two_body_op(f1.gen(&k)?, f2.gen(&k)?)));
    }
    Ok(out)
}

fn with_n(id: RepId, p: &FormParams, mut ops: Vec<(String, DiffOp)>) -> Result<Vec<(String, DiffOp)>> {
    let n1 = make_parabolic_n(id, &p.rep_params(1))?;
    let n2 = make_parabolic_n(id, &p.rep_params(2))?;
    ops.push(("N".into(), two_body_op(&n1, &n2)));
    Ok(ops)
}

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn time_domain(d: u8) -> Domain {
    let mut dom = Domain::new();
    dom.range(Var::t().with_point(1), q(1, 2), q(4, 1));
    dom.range(Var::t().with_point(2), q(1, 8), q(3, 1));
    dom.require_positive(tau());
    for j in 1..=d {
        for k in [1, 2] {
            dom.range(Var::r(j).with_point(k), q(-2, 1), q(2, 1));
        }
    }
    dom
}

/// Form, two-body generators and sampling cell for the Ward check of `id`.
pub fn ward_setup(id: FormId, p: &FormParams) -> Result<WardSetup> {
    let form = make_form(id, p)?;
    let (generators, domain) = ward_generators(id, p)?;
    Ok(WardSetup { form, generators, domain })
}

/// Two-body generators and sampling cell of `id`, without checking the
/// parameter constraints of the form.
pub fn ward_generators(id: FormId, p: &FormParams) -> Result<(Vec<(String, DiffOp)>, Domain)> {
    let all = |_: &GenKey| true;
    let d = p.d;
    Ok(match id {
        FormId::Conformal2pt => {
            let ops = family_ops(RepId::ConformalGen, p, &all)?;
            let mut dom = Domain::new();
            dom.range(Var::z().with_point(1), q(1, 4), q(3, 1));
            dom.range(Var::z().with_point(2), q(1, 4), q(3, 1));
            dom.require_positive(ClosedForm::var(Var::z().with_point(1)).sub(&ClosedForm::var(Var::z().with_point(2))));
            (ops, dom)
        }
        FormId::Sch2pt | FormId::CausalSch => (family_ops(RepId::Sch, p, &all)?, time_domain(d)),
        FormId::AgeResp => (family_ops(RepId::Age, p, &all)?, time_domain(d)),
        FormId::Cga2pt | FormId::CausalCga => {
            let ops = family_ops(RepId::Cga, p, &all)?;
            let mut dom = time_domain(d);
            for j in 1..=d {
                let g1 = Var::gamma(j).with_point(1);
                dom.range(g1, q(-2, 1), q(2, 1));
                dom.tie(Var::gamma(j).with_point(2), g1);
            }
            if id == FormId::CausalCga {
                // Theorem form: the rapidity has the sign of r/t.
                dom.require_positive(rapidity_phase(d));
            }
            (ops, dom)
        }
        FormId::DualSch2pt => {
            let ops = family_ops(RepId::DualSch, p, &|k| !matches!(k, GenKey::M(n) if *n != 0))?;
            let mut dom = time_domain(d);
            for k in [1, 2] {
                dom.range(Var::zeta(1).with_point(k), q(-2, 1), q(2, 1));
            }
            (with_n(RepId::DualSch, p, ops)?, dom)
        }
        FormId::DualCga2pt => {
            let ops = family_ops(RepId::DualCga, p, &all)?;
            let mut dom = time_domain(d);
            for k in [1, 2] {
                dom.range(Var::zeta(1).with_point(k), q(-2, 1), q(2, 1));
            }
            (with_n(RepId::DualCga, p, ops)?, dom)
        }
    })
}
