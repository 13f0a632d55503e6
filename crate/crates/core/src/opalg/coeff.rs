//! Coefficients of differential operators: Laurent monomials in the base
//! variables with [`ParamPoly`] coefficients.
//!
//! Only time-like variables (`t`, and the complex coordinates `z`, `z̄` of the
//! two-dimensional conformal case) may carry negative powers.

use std::collections::BTreeMap;
use std::fmt;

use super::param::{Param, ParamPoly};
use super::scalar::Scalar;

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum VarKind {
    T,
    /// Spatial component `r_j`, `j >= 1`.
    R(u8),
    Z,
    Zbar,
    /// Dual coordinate; `ζ_1` doubles as the scalar `ζ`.
    Zeta(u8),
    /// Holographic bulk coordinate.
    Bulk,
    /// Auxiliary Heisenberg variable carrying `h_1, h_2`.
    Eta,
    /// Rapidity component `γ_j`.
    Gamma(u8),
    /// Invariant variable of the bulk Green's function.
    U,
}

/// A base variable; `point` is 0 for single-point operators and 1, 2 for the
/// two copies used by Ward identities.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Var {
    pub kind: VarKind,
    pub point: u8,
}

impl Var {
    pub const fn new(kind: VarKind) -> Self {
        Var { kind, point: 0 }
    }

    pub const fn at(kind: VarKind, point: u8) -> Self {
        Var { kind, point }
    }

    pub const fn t() -> Self {
        Var::new(VarKind::T)
    }

    pub const fn r(j: u8) -> Self {
        Var::new(VarKind::R(j))
    }

    pub const fn z() -> Self {
        Var::new(VarKind::Z)
    }

    pub const fn zbar() -> Self {
        Var::new(VarKind::Zbar)
    }

    pub const fn zeta(j: u8) -> Self {
        Var::new(VarKind::Zeta(j))
    }

    pub const fn bulk() -> Self {
        Var::new(VarKind::Bulk)
    }

    pub const fn eta() -> Self {
        Var::new(VarKind::Eta)
    }

    pub const fn gamma(j: u8) -> Self {
        Var::new(VarKind::Gamma(j))
    }

    pub const fn u() -> Self {
        Var::new(VarKind::U)
    }

    pub fn with_point(self, point: u8) -> Self {
        Var { kind: self.kind, point }
    }

    /// Whether negative powers of this variable are admissible.
    pub fn is_laurent(&self) -> bool {
        matches!(self.kind, VarKind::T | VarKind::Z | VarKind::Zbar)
    }

    pub fn name(&self) -> String {
        let base = match self.kind {
            VarKind::T => "t".to_string(),
            VarKind::R(j) => format!("r{}", j),
            VarKind::Z => "z".to_string(),
            VarKind::Zbar => "zbar".to_string(),
            VarKind::Zeta(j) => format!("zeta{}", j),
            VarKind::Bulk => "Z".to_string(),
            VarKind::Eta => "eta".to_string(),
            VarKind::Gamma(j) => format!("gamma{}", j),
            VarKind::U => "u".to_string(),
        };
        if self.point == 0 {
            base
        } else {
            format!("{}_{}", base, self.point)
        }
    }

    /// Inverse of [`Var::name`].
    pub fn parse(s: &str) -> Option<Var> {
        let (base, point) = match s.rsplit_once('_') {
            Some((b, p)) => (b, p.parse::<u8>().ok()?),
            None => (s, 0),
        };
        let idx = |prefix: &str| -> Option<u8> { base.strip_prefix(prefix)?.parse().ok() };
        let kind = match base {
            "t" => VarKind::T,
            "z" => VarKind::Z,
            "zbar" => VarKind::Zbar,
            "Z" => VarKind::Bulk,
            "eta" => VarKind::Eta,
            "u" => VarKind::U,
            "r" => VarKind::R(1),
            "zeta" => VarKind::Zeta(1),
            _ => {
                if let Some(j) = idx("zeta") {
                    VarKind::Zeta(j)
                } else if let Some(j) = idx("gamma") {
                    VarKind::Gamma(j)
                } else if let Some(j) = idx("r") {
                    VarKind::R(j)
                } else {
                    return None;
                }
            }
        };
        Some(Var { kind, point })
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

/// Sorted `(variable, exponent)` list with non-zero exponents.
pub type Mono = Vec<(Var, i32)>;

pub(crate) fn mono_mul(a: &Mono, b: &Mono) -> Mono {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].0.cmp(&b[j].0) {
            std::cmp::Ordering::Less => {
                out.push(a[i]);
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                out.push(b[j]);
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                let e = a[i].1 + b[j].1;
                if e != 0 {
                    out.push((a[i].0, e));
                }
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    out
}

pub(crate) fn mono_degree(m: &Mono, v: Var) -> i32 {
    m.iter().find(|(w, _)| *w == v).map(|(_, e)| *e).unwrap_or(0)
}

#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct CoeffExpr {
    terms: BTreeMap<Mono, ParamPoly>,
}

impl CoeffExpr {
    pub fn zero() -> Self {
        CoeffExpr { terms: BTreeMap::new() }
    }

    pub fn one() -> Self {
        CoeffExpr::param(ParamPoly::one())
    }

    pub fn param(p: ParamPoly) -> Self {
        CoeffExpr::term(Vec::new(), p)
    }

    pub fn scalar(c: Scalar) -> Self {
        CoeffExpr::param(ParamPoly::constant(c))
    }

    pub fn int(n: i64) -> Self {
        CoeffExpr::scalar(Scalar::int(n))
    }

    pub fn frac(n: i64, d: i64) -> Self {
        CoeffExpr::scalar(Scalar::frac(n, d))
    }

    pub fn var(v: Var) -> Self {
        CoeffExpr::var_pow(v, 1)
    }

    /// `v^k`; negative `k` is only valid for Laurent variables.
    pub fn try_var_pow(v: Var, k: i32) -> Option<Self> {
        if k < 0 && !v.is_laurent() {
            return None;
        }
        let m = if k == 0 { Vec::new() } else { vec![(v, k)] };
        Some(CoeffExpr::term(m, ParamPoly::one()))
    }

    /// Panics when asked for a negative power of a polynomial variable, which
    /// indicates a bug in a generator definition.
    pub fn var_pow(v: Var, k: i32) -> Self {
        CoeffExpr::try_var_pow(v, k)
            .unwrap_or_else(|| panic!("negative power of polynomial variable {}", v))
    }

    pub fn term(m: Mono, p: ParamPoly) -> Self {
        let mut terms = BTreeMap::new();
        if !p.is_zero() {
            terms.insert(m, p);
        }
        CoeffExpr { terms }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Mono, &ParamPoly)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// The parameter polynomial if no base variable occurs.
    pub fn as_param(&self) -> Option<ParamPoly> {
        match self.terms.len() {
            0 => Some(ParamPoly::zero()),
            1 => self.terms.get(&Vec::new()).cloned(),
            _ => None,
        }
    }

    pub fn get(&self, m: &Mono) -> ParamPoly {
        self.terms.get(m).cloned().unwrap_or_default()
    }

    fn add_term(&mut self, m: Mono, p: ParamPoly) {
        if p.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(e) => {
                e.insert(p);
            }
            Entry::Occupied(mut e) => {
                let s = e.get().add(&p);
                if s.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = s;
                }
            }
        }
    }

    pub fn add(&self, o: &CoeffExpr) -> CoeffExpr {
        let mut out = self.clone();
        for (m, p) in &o.terms {
            out.add_term(m.clone(), p.clone());
        }
        out
    }

    pub fn sub(&self, o: &CoeffExpr) -> CoeffExpr {
        let mut out = self.clone();
        for (m, p) in &o.terms {
            out.add_term(m.clone(), p.neg());
        }
        out
    }

    pub fn neg(&self) -> CoeffExpr {
        self.scale(&Scalar::int(-1))
    }

    pub fn mul(&self, o: &CoeffExpr) -> CoeffExpr {
        let mut out = CoeffExpr::zero();
        for (ma, pa) in &self.terms {
            for (mb, pb) in &o.terms {
                out.add_term(mono_mul(ma, mb), pa.mul(pb));
            }
        }
        out
    }

    pub fn pow(&self, k: u32) -> CoeffExpr {
        let mut out = CoeffExpr::one();
        for _ in 0..k {
            out = out.mul(self);
        }
        out
    }

    pub fn scale(&self, c: &Scalar) -> CoeffExpr {
        self.scale_param(&ParamPoly::constant(c.clone()))
    }

    pub fn scale_param(&self, p: &ParamPoly) -> CoeffExpr {
        let mut out = CoeffExpr::zero();
        for (m, q) in &self.terms {
            out.add_term(m.clone(), q.mul(p));
        }
        out
    }

    /// Partial derivative with respect to `v`.
    pub fn diff(&self, v: Var) -> CoeffExpr {
        let mut out = CoeffExpr::zero();
        for (m, p) in &self.terms {
            let e = mono_degree(m, v);
            if e == 0 {
                continue;
            }
            let dm = mono_mul(m, &vec![(v, -1)]);
            out.add_term(dm, p.scale(&Scalar::int(e as i64)));
        }
        out
    }

    pub fn diff_n(&self, v: Var, k: u32) -> CoeffExpr {
        let mut out = self.clone();
        for _ in 0..k {
            if out.is_zero() {
                break;
            }
            out = out.diff(v);
        }
        out
    }

    /// Multiplicative inverse of a single-term expression whose monomial only
    /// involves Laurent variables and whose coefficient is a parameter unit.
    pub fn inv_unit(&self) -> Option<CoeffExpr> {
        if self.terms.len() != 1 {
            return None;
        }
        let (m, p) = self.terms.iter().next().unwrap();
        if m.iter().any(|(v, _)| !v.is_laurent()) {
            return None;
        }
        let inv_m: Mono = m.iter().map(|(v, e)| (*v, -e)).collect();
        Some(CoeffExpr::term(inv_m, p.inv_unit()?))
    }

    pub fn vars(&self) -> Vec<Var> {
        let mut v: Vec<Var> = self.terms.keys().flat_map(|m| m.iter().map(|(w, _)| *w)).collect();
        v.sort();
        v.dedup();
        v
    }

    pub fn params(&self) -> Vec<Param> {
        let mut v: Vec<Param> = self.terms.values().flat_map(|p| p.params()).collect();
        v.sort();
        v.dedup();
        v
    }

    pub fn map_params(&self, f: &dyn Fn(&ParamPoly) -> ParamPoly) -> CoeffExpr {
        let mut out = CoeffExpr::zero();
        for (m, p) in &self.terms {
            out.add_term(m.clone(), f(p));
        }
        out
    }

    pub fn substitute_param(&self, p: &Param, value: &ParamPoly) -> Option<CoeffExpr> {
        let mut out = CoeffExpr::zero();
        for (m, q) in &self.terms {
            out.add_term(m.clone(), q.substitute(p, value)?);
        }
        Some(out)
    }

    pub fn truncate(&self, p: &Param, order: i32) -> CoeffExpr {
        self.map_params(&|q| q.truncate(p, order))
    }

    /// Renames variables; the map must be injective on the variables present.
    pub fn map_vars(&self, f: &dyn Fn(Var) -> Var) -> CoeffExpr {
        let mut out = CoeffExpr::zero();
        for (m, p) in &self.terms {
            let mut nm: Mono = m.iter().map(|(v, e)| (f(*v), *e)).collect();
            nm.sort();
            out.add_term(nm, p.clone());
        }
        out
    }

    /// Substitutes a base variable by a parameter polynomial (e.g. `ζ → 0`).
    /// Negative powers require a unit value.
    pub fn substitute_var(&self, v: Var, value: &ParamPoly) -> Option<CoeffExpr> {
        let inv = value.inv_unit();
        let mut out = CoeffExpr::zero();
        for (m, p) in &self.terms {
            let e = mono_degree(m, v);
            let rest: Mono = m.iter().filter(|(w, _)| *w != v).cloned().collect();
            let f = if e >= 0 { value.pow(e as u32) } else { inv.as_ref()?.pow((-e) as u32) };
            out.add_term(rest, p.mul(&f));
        }
        Some(out)
    }

    /// Evaluates to an exact scalar given values for every variable and parameter.
    pub fn eval(
        &self,
        vars: &dyn Fn(Var) -> Option<Scalar>,
        params: &dyn Fn(&Param) -> Option<Scalar>,
    ) -> Option<Scalar> {
        let mut acc = Scalar::zero();
        for (m, p) in &self.terms {
            let mut t = p.eval(params)?;
            for (v, e) in m {
                let x = vars(*v)?;
                let f = if *e >= 0 { x.pow(*e as u32) } else { x.inv()?.pow((-e) as u32) };
                t = &t * &f;
            }
            acc += &t;
        }
        Some(acc)
    }
}

fn fmt_mono(m: &Mono) -> String {
    m.iter()
        .map(|(v, e)| if *e == 1 { v.to_string() } else { format!("{}^{}", v, e) })
        .collect::<Vec<_>>()
        .join("*")
}

impl fmt::Display for CoeffExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(m, p)| {
                let ps = p.to_string();
                if m.is_empty() {
                    ps
                } else if ps == "1" {
                    fmt_mono(m)
                } else if p.len() == 1 {
                    format!("{}*{}", ps, fmt_mono(m))
                } else {
                    format!("({})*{}", ps, fmt_mono(m))
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn derivative_of_laurent_monomial() {
        let t = Var::t();
        let e = CoeffExpr::var_pow(t, -2).scale_param(&ParamPoly::symbol("M"));
        let d = e.diff(t);
        assert_eq!(d, CoeffExpr::var_pow(t, -3).scale_param(&ParamPoly::symbol("M").scale(&Scalar::int(-2))));
    }

    #[test]
    fn polynomial_variables_reject_negative_powers() {
        assert!(CoeffExpr::try_var_pow(Var::r(1), -1).is_none());
        assert!(CoeffExpr::var(Var::r(1)).inv_unit().is_none());
        let inv = CoeffExpr::var_pow(Var::t(), 3).scale(&Scalar::int(2)).inv_unit().unwrap();
        assert_eq!(inv, CoeffExpr::var_pow(Var::t(), -3).scale(&Scalar::frac(1, 2)));
    }

    #[test]
    fn names_round_trip() {
        for v in [
            Var::t(),
            Var::r(2),
            Var::zeta(1).with_point(2),
            Var::gamma(3),
            Var::bulk(),
            Var::eta(),
            Var::zbar().with_point(1),
        ] {
            assert_eq!(Var::parse(&v.name()), Some(v));
        }
    }
}
