use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_traits::Signed;

use super::mp::{MpComplex, MpCtx};
use crate::error::{Error, Result};
use crate::opalg::{Param, ParamPoly, Scalar, Var};

/// Expression tree for closed-form two-point functions.
#[derive(Clone, Debug, PartialEq)]
pub enum ClosedForm {
    Const(ParamPoly),
    Var(Var),
    Sum(Vec<ClosedForm>),
    Product(Vec<ClosedForm>),
    /// `base^exponent` on the principal branch.
    Power(Box<ClosedForm>, ParamPoly),
    Exp(Box<ClosedForm>),
    Abs(Box<ClosedForm>),
    /// Heaviside step of a real argument.
    Step(Box<ClosedForm>),
}

use ClosedForm as C;

impl ClosedForm {
    pub fn zero() -> Self {
        C::Const(ParamPoly::zero())
    }

    pub fn one() -> Self {
        C::Const(ParamPoly::one())
    }

    pub fn constant(p: ParamPoly) -> Self {
        C::Const(p)
    }

    pub fn scalar(s: Scalar) -> Self {
        C::Const(ParamPoly::constant(s))
    }

    pub fn var(v: Var) -> Self {
        C::Var(v)
    }

    fn as_const(&self) -> Option<&ParamPoly> {
        match self {
            C::Const(p) => Some(p),
            _ => None,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.as_const().is_some_and(|p| p.is_zero())
    }

    fn is_one(&self) -> bool {
        self.as_const().is_some_and(|p| p.as_constant().is_some_and(|c| c.is_one()))
    }

    pub fn sum(items: Vec<ClosedForm>) -> Self {
        let mut c = ParamPoly::zero();
        let mut rest = Vec::new();
        for it in items {
            match it {
                C::Const(p) => c = c.add(&p),
                C::Sum(inner) => {
                    for x in inner {
                        match x {
                            C::Const(p) => c = c.add(&p),
                            other => rest.push(other),
                        }
                    }
                }
                other => rest.push(other),
            }
        }
        if !c.is_zero() {
            rest.push(C::Const(c));
        }
        match rest.len() {
            0 => C::zero(),
            1 => rest.pop().unwrap(),
            _ => C::Sum(rest),
        }
    }

    pub fn product(items: Vec<ClosedForm>) -> Self {
        let mut c = ParamPoly::one();
        let mut rest = Vec::new();
        let mut push = |x: ClosedForm, c: &mut ParamPoly| match x {
            C::Const(p) => *c = c.mul(&p),
            other => rest.push(other),
        };
        for it in items {
            match it {
                C::Product(inner) => inner.into_iter().for_each(|x| push(x, &mut c)),
                other => push(other, &mut c),
            }
        }
        if c.is_zero() {
            return C::zero();
        }
        if !c.as_constant().is_some_and(|s| s.is_one()) {
            rest.insert(0, C::Const(c));
        }
        match rest.len() {
            0 => C::one(),
            1 => rest.pop().unwrap(),
            _ => C::Product(rest),
        }
    }

    pub fn add(&self, o: &ClosedForm) -> Self {
        C::sum(vec![self.clone(), o.clone()])
    }

    pub fn sub(&self, o: &ClosedForm) -> Self {
        C::sum(vec![self.clone(), o.neg()])
    }

    pub fn neg(&self) -> Self {
        C::product(vec![C::Const(ParamPoly::int(-1)), self.clone()])
    }

    pub fn mul(&self, o: &ClosedForm) -> Self {
        C::product(vec![self.clone(), o.clone()])
    }

    pub fn scale(&self, p: &ParamPoly) -> Self {
        C::product(vec![C::Const(p.clone()), self.clone()])
    }

    pub fn pow(&self, e: ParamPoly) -> Self {
        if e.is_zero() {
            return C::one();
        }
        if e.as_constant().is_some_and(|c| c.is_one()) {
            return self.clone();
        }
        if self.is_one() {
            return C::one();
        }
        C::Power(Box::new(self.clone()), e)
    }

    pub fn powi(&self, k: i64) -> Self {
        self.pow(ParamPoly::int(k))
    }

    pub fn exp(&self) -> Self {
        if self.is_zero() {
            return C::one();
        }
        C::Exp(Box::new(self.clone()))
    }

    pub fn abs(&self) -> Self {
        C::Abs(Box::new(self.clone()))
    }

    pub fn step(&self) -> Self {
        C::Step(Box::new(self.clone()))
    }

    pub fn vars(&self) -> BTreeSet<Var> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out);
        out
    }

    fn collect_vars(&self, out: &mut BTreeSet<Var>) {
        match self {
            C::Const(_) => {}
            C::Var(v) => {
                out.insert(*v);
            }
            C::Sum(xs) | C::Product(xs) => xs.iter().for_each(|x| x.collect_vars(out)),
            C::Power(b, _) | C::Exp(b) | C::Abs(b) | C::Step(b) => b.collect_vars(out),
        }
    }

    pub fn params(&self) -> BTreeSet<Param> {
        let mut out = BTreeSet::new();
        self.collect_params(&mut out);
        out
    }

    fn collect_params(&self, out: &mut BTreeSet<Param>) {
        match self {
            C::Const(p) => out.extend(p.params()),
            C::Var(_) => {}
            C::Sum(xs) | C::Product(xs) => xs.iter().for_each(|x| x.collect_params(out)),
            C::Power(b, e) => {
                out.extend(e.params());
                b.collect_params(out)
            }
            C::Exp(b) | C::Abs(b) | C::Step(b) => b.collect_params(out),
        }
    }

    /// Substitutes `var → value` everywhere.
    pub fn substitute(&self, v: Var, value: &ClosedForm) -> ClosedForm {
        match self {
            C::Const(_) => self.clone(),
            C::Var(w) => {
                if *w == v {
                    value.clone()
                } else {
                    self.clone()
                }
            }
            C::Sum(xs) => C::sum(xs.iter().map(|x| x.substitute(v, value)).collect()),
            C::Product(xs) => C::product(xs.iter().map(|x| x.substitute(v, value)).collect()),
            C::Power(b, e) => b.substitute(v, value).pow(e.clone()),
            C::Exp(b) => b.substitute(v, value).exp(),
            C::Abs(b) => b.substitute(v, value).abs(),
            C::Step(b) => b.substitute(v, value).step(),
        }
    }

    /// Replaces parameters by exact values where given.
    pub fn bind(&self, values: &BTreeMap<Param, ParamPoly>) -> ClosedForm {
        let sub = |p: &ParamPoly| {
            let pairs: Vec<(Param, ParamPoly)> = values.iter().map(|(k, v)| (k.clone(), v.clone())).collect();
            p.substitute_all(&pairs).unwrap_or_else(|| p.clone())
        };
        match self {
            C::Const(p) => C::Const(sub(p)),
            C::Var(_) => self.clone(),
            C::Sum(xs) => C::sum(xs.iter().map(|x| x.bind(values)).collect()),
            C::Product(xs) => C::product(xs.iter().map(|x| x.bind(values)).collect()),
            C::Power(b, e) => b.bind(values).pow(sub(e)),
            C::Exp(b) => b.bind(values).exp(),
            C::Abs(b) => b.bind(values).abs(),
            C::Step(b) => b.bind(values).step(),
        }
    }

    pub fn eval(&self, ctx: &mut MpCtx, env: &Env) -> Result<MpComplex> {
        match self {
            C::Const(p) => Ok(ctx.scalar(&env.param_value(p)?)),
            C::Var(v) => env
                .vars
                .get(v)
                .cloned()
                .ok_or_else(|| Error::Config(format!("no value for variable {}", v))),
            C::Sum(xs) => {
                let mut acc = ctx.zero();
                for x in xs {
                    let y = x.eval(ctx, env)?;
                    acc = ctx.add(&acc, &y);
                }
                Ok(acc)
            }
            C::Product(xs) => {
                let mut acc = ctx.one();
                for x in xs {
                    let y = x.eval(ctx, env)?;
                    acc = ctx.mul(&acc, &y);
                }
                Ok(acc)
            }
            C::Power(b, e) => {
                let base = b.eval(ctx, env)?;
                let e = env.param_value(e)?;
                let natural = e.is_real() && e.re.is_integer() && !e.re.is_negative();
                if base.re.is_zero() && base.im.is_zero() && !natural {
                    return Err(Error::Singular("power of zero".into()));
                }
                ctx.pow(&base, &e)
            }
            C::Exp(b) => {
                let a = b.eval(ctx, env)?;
                Ok(ctx.exp(&a))
            }
            C::Abs(b) => {
                let a = b.eval(ctx, env)?;
                let m = ctx.abs(&a);
                Ok(MpComplex { re: m, im: ctx.zero().im })
            }
            C::Step(b) => {
                let a = b.eval(ctx, env)?;
                if !a.is_real() {
                    return Err(Error::Domain("step function of a complex argument".into()));
                }
                if a.re.is_zero() {
                    return Err(Error::Singular("step function at its jump".into()));
                }
                Ok(if a.re.is_positive() { ctx.one() } else { ctx.zero() })
            }
        }
    }
}

/// Variable values and parameter bindings for evaluation.
#[derive(Clone, Default)]
pub struct Env {
    pub vars: BTreeMap<Var, MpComplex>,
    pub params: BTreeMap<Param, Scalar>,
}

impl Env {
    pub fn param_value(&self, p: &ParamPoly) -> Result<Scalar> {
        p.eval(&|q: &Param| self.params.get(q).cloned())
            .ok_or_else(|| Error::Config(format!("unbound parameter in {}", p)))
    }
}

/// Result of [`expr_diff`]. `domain_restricted` is set when a step or an
/// absolute value was differentiated: the derivative is valid only away from
/// its kink.
#[derive(Clone, Debug)]
pub struct Derivative {
    pub form: ClosedForm,
    pub domain_restricted: bool,
}

/// Exact partial derivative.
pub fn expr_diff(f: &ClosedForm, v: Var) -> Derivative {
    let mut flag = false;
    let form = diff(f, v, &mut flag);
    Derivative { form, domain_restricted: flag }
}

fn diff(f: &ClosedForm, v: Var, flag: &mut bool) -> ClosedForm {
    match f {
        C::Const(_) => C::zero(),
        C::Var(w) => {
            if *w == v {
                C::one()
            } else {
                C::zero()
            }
        }
        C::Sum(xs) => C::sum(xs.iter().map(|x| diff(x, v, flag)).collect()),
        C::Product(xs) => {
            let mut terms = Vec::new();
            for i in 0..xs.len() {
                let di = diff(&xs[i], v, flag);
                if di.is_zero() {
                    continue;
                }
                let mut fs: Vec<ClosedForm> = xs.clone();
                fs[i] = di;
                terms.push(C::product(fs));
            }
            C::sum(terms)
        }
        C::Power(b, e) => {
            let db = diff(b, v, flag);
            if db.is_zero() {
                return C::zero();
            }
            C::product(vec![C::Const(e.clone()), b.pow(e.sub(&ParamPoly::one())), db])
        }
        C::Exp(b) => {
            let db = diff(b, v, flag);
            if db.is_zero() {
                return C::zero();
            }
            C::product(vec![f.clone(), db])
        }
        C::Abs(b) => {
            let db = diff(b, v, flag);
            if db.is_zero() {
                return C::zero();
            }
            *flag = true;
            let sign = C::sum(vec![b.step().scale(&ParamPoly::int(2)), C::Const(ParamPoly::int(-1))]);
            C::product(vec![sign, db])
        }
        C::Step(b) => {
            if !diff(b, v, flag).is_zero() {
                *flag = true;
            }
            C::zero()
        }
    }
}

/// Derivative along a multi-index `[(v, k), …]`.
pub fn expr_diff_multi(f: &ClosedForm, idx: &[(Var, u32)]) -> Derivative {
    let mut out = Derivative { form: f.clone(), domain_restricted: false };
    for (v, k) in idx {
        for _ in 0..*k {
            let d = expr_diff(&out.form, *v);
            out.form = d.form;
            out.domain_restricted |= d.domain_restricted;
        }
    }
    out
}

fn paren(p: &ParamPoly) -> String {
    let s = p.to_string();
    if s.contains(['+', ' ']) || s.starts_with('-') {
        format!("({})", s)
    } else {
        s
    }
}

impl fmt::Display for ClosedForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            C::Const(p) => write!(f, "{}", paren(p)),
            C::Var(v) => write!(f, "{}", v),
            C::Sum(xs) => {
                let parts: Vec<String> = xs.iter().map(|x| x.to_string()).collect();
                write!(f, "({})", parts.join(" + "))
            }
            C::Product(xs) => {
                let parts: Vec<String> = xs.iter().map(|x| x.to_string()).collect();
                write!(f, "{}", parts.join("*"))
            }
            C::Power(b, e) => write!(f, "{}^{}", b, paren(e)),
            C::Exp(b) => write!(f, "exp({})", b),
            C::Abs(b) => write!(f, "|{}|", b),
            C::Step(b) => write!(f, "Theta({})", b),
        }
    }
}
