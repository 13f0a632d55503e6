use std::collections::BTreeMap;

use nalgebra::{DMatrix, DVector};
use num_bigint::BigInt;
use num_rational::BigRational;
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use super::form::{ClosedForm, Env};
use super::mp::MpCtx;
use crate::error::{Error, Result};
use crate::opalg::Var;

/// Scaling dimensions of the two points of an ageing response.
#[derive(Clone, Debug, PartialEq)]
pub struct Identification {
    pub x: BigRational,
    pub x_tilde: BigRational,
    pub xi: BigRational,
    pub xi_tilde: BigRational,
}

impl Identification {
    /// `ϝ = (x̃ − x)/2 + ξ̃ − ξ`.
    pub fn digamma(&self) -> BigRational {
        (&self.x_tilde - &self.x) / BigInt::from(2) + &self.xi_tilde - &self.xi
    }

    /// `x + 2ξ − x̃ − 2ξ̃`; zero when the response is covariant.
    pub fn constraint_residue(&self) -> BigRational {
        let two = BigInt::from(2);
        &self.x + &self.xi * &two - &self.x_tilde - &self.xi_tilde * &two
    }

    /// Exponents `(s, y, y − 1)` of the covariant response.
    pub fn exponents(&self) -> [BigRational; 3] {
        let two = BigInt::from(2);
        [
            -(&self.x + &self.x_tilde) / &two,
            &self.xi + self.digamma(),
            -(&self.x + &self.xi * &two),
        ]
    }

    /// Solves for `x̃, ξ̃` given measured exponents and the first point's `x, ξ`.
    pub fn from_exponents(e: &[BigRational; 3], x: BigRational, xi: BigRational) -> Self {
        let two = BigInt::from(2);
        let x_tilde = -(&e[0] * &two) - &x;
        let digamma = &e[1] - &xi;
        let xi_tilde = digamma - (&x_tilde - &x) / &two + &xi;
        Identification { x, x_tilde, xi, xi_tilde }
    }
}

/// Exponents of `C · s^{a_s} y^{a_y} (y − 1)^{a_{y−1}}`.
#[derive(Clone, Debug)]
pub struct ExponentRecord {
    pub s_exponent: f64,
    pub y_exponent: f64,
    pub y1_exponent: f64,
    /// Exact values when every exponent is recognized as a small rational.
    pub exact: Option<[BigRational; 3]>,
    pub log_prefactor: f64,
    /// Largest misfit of `log F` at the verification points.
    pub fit_residual: f64,
    pub identification: Option<Identification>,
}

impl ExponentRecord {
    pub fn digamma(&self) -> Option<BigRational> {
        self.identification.as_ref().map(|i| i.digamma())
    }

    pub fn constraint_residue(&self) -> Option<BigRational> {
        self.identification.as_ref().map(|i| i.constraint_residue())
    }

    pub fn with_identification(mut self, id: Identification) -> Self {
        self.identification = Some(id);
        self
    }
}

impl Serialize for ExponentRecord {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("ExponentRecord", 9)?;
        st.serialize_field("s_exponent", &self.s_exponent)?;
        st.serialize_field("y_exponent", &self.y_exponent)?;
        st.serialize_field("y1_exponent", &self.y1_exponent)?;
        st.serialize_field("exact", &self.exact.as_ref().map(|e| e.iter().map(|r| r.to_string()).collect::<Vec<_>>()))?;
        st.serialize_field("log_prefactor", &self.log_prefactor)?;
        st.serialize_field("fit_residual", &self.fit_residual)?;
        let id = self.identification.as_ref().map(|i| {
            BTreeMap::from([
                ("x", i.x.to_string()),
                ("x_tilde", i.x_tilde.to_string()),
                ("xi", i.xi.to_string()),
                ("xi_tilde", i.xi_tilde.to_string()),
            ])
        });
        st.serialize_field("identification", &id)?;
        st.serialize_field("digamma", &self.digamma().map(|r| r.to_string()))?;
        st.serialize_field("constraint_residue", &self.constraint_residue().map(|r| r.to_string()))?;
        st.end()
    }
}

/// Best rational approximation with denominator at most `max_den`, accepted
/// only if within `tol`.
pub fn recognize_rational(x: f64, max_den: i64, tol: f64) -> Option<BigRational> {
    if !x.is_finite() {
        return None;
    }
    let (mut h0, mut h1, mut k0, mut k1) = (0i64, 1i64, 1i64, 0i64);
    let mut v = x;
    for _ in 0..40 {
        let a = v.floor();
        let ai = a as i64;
        let h2 = ai.checked_mul(h1)?.checked_add(h0)?;
        let k2 = ai.checked_mul(k1)?.checked_add(k0)?;
        if k2 > max_den {
            break;
        }
        (h0, h1, k0, k1) = (h1, h2, k1, k2);
        if ((h1 as f64) / (k1 as f64) - x).abs() <= tol {
            return Some(BigRational::new(h1.into(), k1.into()));
        }
        let frac = v - a;
        if frac.abs() < 1e-300 {
            break;
        }
        v = 1.0 / frac;
    }
    None
}

fn rational(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

/// Exact log-linear matching of a closed form at `r = 0`: `t = y·s` and the
/// second time `s` are substituted, every other variable is fixed by `fixed`.
pub fn fit_exponents_form(
    f: &ClosedForm,
    t: Var,
    s: Var,
    fixed: &BTreeMap<Var, BigRational>,
) -> Result<ExponentRecord> {
    let mut ctx = MpCtx::with_digits(60);
    let mut log_f = |sv: BigRational, yv: BigRational| -> Result<_> {
        let mut env = Env::default();
        for (v, x) in fixed {
            env.vars.insert(*v, ctx.real(x));
        }
        env.vars.insert(t, ctx.real(&(&yv * &sv)));
        env.vars.insert(s, ctx.real(&sv));
        let val = f.eval(&mut ctx, &env)?;
        ctx.ln(&val)
    };
    let p0 = log_f(rational(1, 1), rational(2, 1))?;
    let p1 = log_f(rational(2, 1), rational(2, 1))?;
    let p2 = log_f(rational(1, 1), rational(3, 1))?;
    let p3 = log_f(rational(1, 1), rational(5, 1))?;
    let checks = [
        (rational(3, 2), rational(7, 4)),
        (rational(5, 1), rational(11, 1)),
        (rational(1, 3), rational(3, 2)),
    ]
    .into_iter()
    .map(|(a, b)| Ok(((a.clone(), b.clone()), log_f(a, b)?)))
    .collect::<Result<Vec<_>>>()?;

    let mut c = MpCtx::with_digits(60);
    let ln2 = c.ln_rational(&rational(2, 1))?;
    let ln32 = c.ln_rational(&rational(3, 2))?;
    let ln109 = c.ln_rational(&rational(10, 9))?;
    let prec = c.prec;
    let rm = astro_float::RoundingMode::ToEven;
    let a_s = p1.re.sub(&p0.re, prec, rm).div(&ln2, prec, rm);
    let d32 = p3.re.sub(&p2.re, prec, rm);
    let d20 = p2.re.sub(&p0.re, prec, rm);
    let a_y = d32.sub(&d20, prec, rm).div(&ln109, prec, rm);
    let a_y1 = d20.sub(&a_y.mul(&ln32, prec, rm), prec, rm).div(&ln2, prec, rm);
    let konst = p0.re.sub(&a_y.mul(&ln2, prec, rm), prec, rm);

    let mut worst = 0.0f64;
    for ((sv, yv), lf) in checks {
        let (ls, ly) = (c.ln_rational(&sv)?, c.ln_rational(&yv)?);
        let ly1 = c.ln_rational(&(yv - BigRational::from_integer(1.into())))?;
        let model = konst
            .add(&a_s.mul(&ls, prec, rm), prec, rm)
            .add(&a_y.mul(&ly, prec, rm), prec, rm)
            .add(&a_y1.mul(&ly1, prec, rm), prec, rm);
        let diff = lf.re.sub(&model, prec, rm);
        worst = worst.max(c.to_f64(&diff).abs());
    }
    if worst > 1e-30 {
        return Err(Error::Accuracy(format!("not a power law in s, y, y − 1 (misfit {:e})", worst)));
    }
    let vals = [c.to_f64(&a_s), c.to_f64(&a_y), c.to_f64(&a_y1)];
    Ok(record(vals, c.to_f64(&konst), worst, 1e-12))
}

fn record(vals: [f64; 3], log_prefactor: f64, fit_residual: f64, tol: f64) -> ExponentRecord {
    let exact = match (
        recognize_rational(vals[0], 1000, tol),
        recognize_rational(vals[1], 1000, tol),
        recognize_rational(vals[2], 1000, tol),
    ) {
        (Some(a), Some(b), Some(c)) => Some([a, b, c]),
        _ => None,
    };
    ExponentRecord {
        s_exponent: vals[0],
        y_exponent: vals[1],
        y1_exponent: vals[2],
        exact,
        log_prefactor,
        fit_residual,
        identification: None,
    }
}

/// Least-squares power-law fit of tabulated `(s, y, value)` samples.
pub fn fit_exponents_table(samples: &[(f64, f64, f64)]) -> Result<ExponentRecord> {
    if samples.len() < 4 {
        return Err(Error::Usage("at least four samples are needed".into()));
    }
    let n = samples.len();
    let mut a = DMatrix::<f64>::zeros(n, 4);
    let mut b = DVector::<f64>::zeros(n);
    for (i, &(s, y, v)) in samples.iter().enumerate() {
        if s <= 0.0 || y <= 1.0 || v <= 0.0 {
            return Err(Error::Domain("samples need s > 0, y > 1 and positive values".into()));
        }
        a[(i, 0)] = 1.0;
        a[(i, 1)] = s.ln();
        a[(i, 2)] = y.ln();
        a[(i, 3)] = (y - 1.0).ln();
        b[i] = v.ln();
    }
    let svd = a.clone().svd(true, true);
    let x = svd.solve(&b, 1e-12).map_err(|e| Error::Accuracy(e.to_string()))?;
    let misfit = (&a * &x - &b).amax();
    let scale = b.amax().max(1.0);
    if misfit > 1e-6 * scale {
        return Err(Error::Accuracy(format!("not a power law in s, y, y − 1 (misfit {:e})", misfit)));
    }
    Ok(record([x[1], x[2], x[3]], x[0], misfit, 1e-8))
}
