use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::opalg::{CoeffExpr, DiffOp, Param, ParamPoly, Scalar, Var};
use crate::reps::{make_rep, GenKey, GeneratorFamily, RepId, RepParams};

#[derive(Clone, Debug, Serialize)]
pub struct Casimir {
    /// Normal form of the quartic operator.
    pub operator: String,
    /// Whether `∂_ζ` was replaced by `iM` before reading off the scalar.
    pub mass_reduced: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub scalar: Option<String>,
    #[serde(skip)]
    pub op: DiffOp,
    #[serde(skip)]
    pub value: Option<CoeffExpr>,
}

/// `(4M_0X_0 − {Y_{-1/2}, Y_{1/2}})² − 2{2M_0X_{-1} − Y_{-1/2}², 2M_0X_1 − Y_{1/2}²}`.
pub fn casimir_c4(fam: &GeneratorFamily) -> Result<Casimir> {
    let g = |k: GenKey| fam.gen(&k).cloned();
    let (xm, x0, xp) = (g(GenKey::X(-1))?, g(GenKey::X(0))?, g(GenKey::X(1))?);
    let (ym, yp, m0) = (g(GenKey::y(1, -1))?, g(GenKey::y(1, 1))?, g(GenKey::M(0))?);
    let a = m0.compose(&x0).scale(&Scalar::int(4)).sub(&ym.anticommutator(&yp));
    let b = m0.compose(&xm).scale(&Scalar::int(2)).sub(&ym.compose(&ym));
    let c = m0.compose(&xp).scale(&Scalar::int(2)).sub(&yp.compose(&yp));
    let op = a.compose(&a).sub(&b.anticommutator(&c).scale(&Scalar::int(2)));
    let zeta = Var::zeta(1);
    let has_zeta = op.terms().any(|(idx, _)| idx.iter().any(|(v, _)| *v == zeta));
    let (reduced, mass_reduced) = if has_zeta {
        let m = match fam.params.mass.params().as_slice() {
            [m] => m.clone(),
            _ => Param::new("M"),
        };
        let im = ParamPoly::symbol(m.name()).mul(&ParamPoly::i());
        let r = op
            .substitute_derivative(zeta, &im)
            .ok_or_else(|| Error::Config("Casimir coefficients depend on ζ".into()))?;
        (r, true)
    } else {
        (op.clone(), false)
    };
    let value = reduced.as_coeff();
    Ok(Casimir {
        operator: reduced.to_string(),
        mass_reduced,
        scalar: value.as_ref().map(|v| v.to_string()),
        op: reduced,
        value,
    })
}

/// Bulk Casimir split as `λ∘S + E` with `S = 2M∂_t − ∇²`, so that on
/// `Z^α φ` with `Sφ = 0` it acts through the `Z`-operator `E` alone.
#[derive(Clone, Debug, Serialize)]
pub struct OnShell {
    pub lambda: String,
    pub remainder: String,
    /// Eigenvalue of the remainder on `Z^α`, if it is an Euler operator in `Z`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub indicial: Option<String>,
    #[serde(skip)]
    pub indicial_poly: Option<ParamPoly>,
}

pub fn casimir_on_shell(c: &Casimir, s: &DiffOp, alpha: &Param) -> Result<OnShell> {
    let (q, rem) = c.op.left_divide(s)?;
    let ind = if is_euler(&rem, Var::bulk()) { indicial_polynomial(&rem, Var::bulk(), alpha).ok() } else { None };
    Ok(OnShell {
        lambda: q.to_string(),
        remainder: rem.to_string(),
        indicial: ind.as_ref().map(|p| p.to_string()),
        indicial_poly: ind,
    })
}

/// Every term is `c·v^k ∂_v^k`.
fn is_euler(op: &DiffOp, v: Var) -> bool {
    op.terms().all(|(idx, coeff)| {
        let k = match idx.as_slice() {
            [] => 0,
            [(w, k)] if *w == v => *k as i32,
            _ => return false,
        };
        coeff.terms().all(|(m, _)| match m.as_slice() {
            [] => k == 0,
            [(w, e)] => *w == v && *e == k,
            _ => false,
        })
    })
}

/// `4u²(1−u)∂_u² − 8u∂_u + 5`: the Casimir in the invariant variable of the
/// bulk Green's function.
pub fn holographic_casimir_u() -> DiffOp {
    let u = Var::u();
    let cu = |k: i32| CoeffExpr::var_pow(u, k);
    let c2 = cu(2).sub(&cu(3)).scale(&Scalar::int(4));
    DiffOp::coeff(c2)
        .compose(&DiffOp::d_pow(u, 2))
        .sub(&DiffOp::coeff(cu(1).scale(&Scalar::int(8))).compose(&DiffOp::d(u)))
        .add(&DiffOp::scalar(Scalar::int(5)))
}

/// Indicial polynomial of `op` at `v = 0`, in the exponent `α` of `v^α`.
pub fn indicial_polynomial(op: &DiffOp, v: Var, alpha: &Param) -> Result<ParamPoly> {
    let a = ParamPoly::symbol(alpha.name());
    let mut contrib: Vec<(i32, ParamPoly)> = Vec::new();
    for (idx, coeff) in op.terms() {
        let k = idx.iter().find(|(w, _)| *w == v).map(|(_, k)| *k).unwrap_or(0);
        if idx.iter().any(|(w, _)| *w != v) {
            return Err(Error::Config("operator must only differentiate in the indicial variable".into()));
        }
        let falling = (0..k).fold(ParamPoly::one(), |acc, i| acc.mul(&a.sub(&ParamPoly::int(i as i64))));
        for (mono, p) in coeff.terms() {
            let j = mono.iter().find(|(w, _)| *w == v).map(|(_, e)| *e).unwrap_or(0);
            if mono.iter().any(|(w, _)| *w != v) {
                return Err(Error::Config("coefficients must only depend on the indicial variable".into()));
            }
            contrib.push((j - k as i32, p.mul(&falling)));
        }
    }
    let lowest = contrib.iter().map(|(s, _)| *s).min().unwrap_or(0);
    Ok(contrib
        .into_iter()
        .filter(|(s, _)| *s == lowest)
        .fold(ParamPoly::zero(), |acc, (_, p)| acc.add(&p)))
}

fn rat_sqrt(r: &BigRational) -> Option<BigRational> {
    if r.is_negative() {
        return None;
    }
    let (n, d) = (r.numer().sqrt(), r.denom().sqrt());
    (&n * &n == *r.numer() && &d * &d == *r.denom()).then(|| BigRational::new(n, d))
}

/// Exponents `α` of the boundary behaviour `Z^α`: roots of the indicial
/// equation of the bulk Casimir against the boundary eigenvalue `c_4(x)/M²`.
pub fn indicial_exponents(x: &BigRational) -> Result<[BigRational; 2]> {
    let p = RepParams::default().with("x", ParamPoly::rational(x.clone())).with("M", ParamPoly::one());
    let c4 = casimir_c4(&make_rep(RepId::Sch, &p)?)?
        .value
        .and_then(|v| v.as_param())
        .and_then(|v| v.as_constant())
        .ok_or_else(|| Error::Domain("boundary Casimir is not a scalar".into()))?;
    let alpha = Param::new("alpha");
    let ind = indicial_polynomial(&holographic_casimir_u(), Var::u(), &alpha)?.sub(&ParamPoly::constant(c4));
    let coeff = |k: i32| -> Result<BigRational> {
        let c = ind.coefficient_of(&alpha, k).as_constant().unwrap_or_default();
        if !c.im.is_zero() {
            return Err(Error::Domain("complex indicial coefficient".into()));
        }
        Ok(c.re)
    };
    let (a2, a1, a0) = (coeff(2)?, coeff(1)?, coeff(0)?);
    if a2.is_zero() {
        return Err(Error::Domain("indicial equation is not quadratic".into()));
    }
    let disc = &a1 * &a1 - BigRational::from_integer(BigInt::from(4)) * &a2 * &a0;
    let s = rat_sqrt(&disc).ok_or_else(|| Error::Domain(format!("discriminant {} is not a rational square", disc)))?;
    let two_a = BigRational::from_integer(BigInt::from(2)) * &a2;
    let mut r = [(-&a1 - &s) / &two_a, (-&a1 + &s) / &two_a];
    r.sort();
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::opalg::scalar::rat;

    #[test]
    fn indicial_of_bulk_operator() {
        let a = Param::new("alpha");
        let p = indicial_polynomial(&holographic_casimir_u(), Var::u(), &a).unwrap();
        let s = ParamPoly::symbol("alpha");
        let expect = s.mul(&s).scale(&Scalar::int(4)).sub(&s.scale(&Scalar::int(12))).add(&ParamPoly::int(5));
        assert_eq!(p, expect);
    }

    #[test]
    fn exponent_pairs() {
        assert_eq!(indicial_exponents(&rat(1, 1)).unwrap(), [rat(1, 1), rat(2, 1)]);
        assert_eq!(indicial_exponents(&rat(3, 2)).unwrap(), [rat(3, 2), rat(3, 2)]);
        assert_eq!(indicial_exponents(&rat(0, 1)).unwrap(), [rat(0, 1), rat(3, 1)]);
    }
}
