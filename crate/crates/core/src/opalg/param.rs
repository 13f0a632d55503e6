//! Laurent polynomials in formal parameters (scaling dimensions, masses,
//! lattice constant, ...) with Gaussian-rational coefficients.
//!
//! Parameters commute with everything. Negative exponents are permitted so
//! that single-term coefficients such as `2M` or `θ` are units; general
//! division is only available through [`ParamPoly::div_exact`].

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_rational::BigRational;

use super::scalar::Scalar;

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Param(Arc<str>);

impl Param {
    pub fn new(name: &str) -> Self {
        Param(Arc::from(name))
    }

    pub fn name(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Param {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// Sorted list of `(parameter, exponent)` with non-zero exponents.
pub type PMono = Vec<(Param, i32)>;

fn pmono_mul(a: &PMono, b: &PMono) -> PMono {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].0.cmp(&b[j].0) {
            std::cmp::Ordering::Less => {
                out.push(a[i].clone());
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                out.push(b[j].clone());
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                let e = a[i].1 + b[j].1;
                if e != 0 {
                    out.push((a[i].0.clone(), e));
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

fn pmono_inv(a: &PMono) -> PMono {
    a.iter().map(|(p, e)| (p.clone(), -e)).collect()
}

fn pmono_degree(a: &PMono, p: &Param) -> i32 {
    a.iter().find(|(q, _)| q == p).map(|(_, e)| *e).unwrap_or(0)
}

#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct ParamPoly {
    terms: BTreeMap<PMono, Scalar>,
}

impl ParamPoly {
    pub fn zero() -> Self {
        ParamPoly { terms: BTreeMap::new() }
    }

    pub fn one() -> Self {
        ParamPoly::constant(Scalar::one())
    }

    pub fn constant(c: Scalar) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Vec::new(), c);
        }
        ParamPoly { terms }
    }

    pub fn int(n: i64) -> Self {
        ParamPoly::constant(Scalar::int(n))
    }

    pub fn frac(n: i64, d: i64) -> Self {
        ParamPoly::constant(Scalar::frac(n, d))
    }

    pub fn rational(r: BigRational) -> Self {
        ParamPoly::constant(Scalar::real(r))
    }

    pub fn i() -> Self {
        ParamPoly::constant(Scalar::i())
    }

    pub fn symbol(name: &str) -> Self {
        ParamPoly::monomial(vec![(Param::new(name), 1)], Scalar::one())
    }

    pub fn monomial(mono: PMono, c: Scalar) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(mono, c);
        }
        ParamPoly { terms }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&PMono, &Scalar)> {
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

    /// The value if the polynomial is a pure constant.
    pub fn as_constant(&self) -> Option<Scalar> {
        match self.terms.len() {
            0 => Some(Scalar::zero()),
            1 => self.terms.get(&Vec::new()).cloned(),
            _ => None,
        }
    }

    /// A single non-zero term is a unit of the Laurent ring.
    pub fn is_unit(&self) -> bool {
        self.terms.len() == 1
    }

    pub fn inv_unit(&self) -> Option<ParamPoly> {
        if self.terms.len() != 1 {
            return None;
        }
        let (m, c) = self.terms.iter().next().unwrap();
        Some(ParamPoly::monomial(pmono_inv(m), c.inv()?))
    }

    pub fn scale(&self, c: &Scalar) -> ParamPoly {
        if c.is_zero() {
            return ParamPoly::zero();
        }
        ParamPoly {
            terms: self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect(),
        }
    }

    fn add_term(&mut self, m: PMono, c: Scalar) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += &c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn add(&self, o: &ParamPoly) -> ParamPoly {
        let mut out = self.clone();
        for (m, c) in &o.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, o: &ParamPoly) -> ParamPoly {
        let mut out = self.clone();
        for (m, c) in &o.terms {
            out.add_term(m.clone(), -c);
        }
        out
    }

    pub fn neg(&self) -> ParamPoly {
        self.scale(&Scalar::int(-1))
    }

    pub fn mul(&self, o: &ParamPoly) -> ParamPoly {
        let mut out = ParamPoly::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &o.terms {
                out.add_term(pmono_mul(ma, mb), ca * cb);
            }
        }
        out
    }

    pub fn pow(&self, k: u32) -> ParamPoly {
        let mut out = ParamPoly::one();
        for _ in 0..k {
            out = out.mul(self);
        }
        out
    }

    pub fn max_degree(&self, p: &Param) -> Option<i32> {
        self.terms.keys().map(|m| pmono_degree(m, p)).max()
    }

    pub fn min_degree(&self, p: &Param) -> Option<i32> {
        self.terms.keys().map(|m| pmono_degree(m, p)).min()
    }

    /// Drops every term whose degree in `p` exceeds `order`.
    pub fn truncate(&self, p: &Param, order: i32) -> ParamPoly {
        ParamPoly {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| pmono_degree(m, p) <= order)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// Part of the polynomial homogeneous of degree `k` in `p`, with `p` removed.
    pub fn coefficient_of(&self, p: &Param, k: i32) -> ParamPoly {
        let mut out = ParamPoly::zero();
        for (m, c) in &self.terms {
            if pmono_degree(m, p) == k {
                let rest: PMono = m.iter().filter(|(q, _)| q != p).cloned().collect();
                out.add_term(rest, c.clone());
            }
        }
        out
    }

    pub fn params(&self) -> Vec<Param> {
        let mut v: Vec<Param> =
            self.terms.keys().flat_map(|m| m.iter().map(|(p, _)| p.clone())).collect();
        v.sort();
        v.dedup();
        v
    }

    /// Substitutes `p := value`. Negative powers of `p` require `value` to be a unit.
    pub fn substitute(&self, p: &Param, value: &ParamPoly) -> Option<ParamPoly> {
        let inv = value.inv_unit();
        let mut out = ParamPoly::zero();
        for (m, c) in &self.terms {
            let e = pmono_degree(m, p);
            let rest: PMono = m.iter().filter(|(q, _)| q != p).cloned().collect();
            let factor = if e >= 0 {
                value.pow(e as u32)
            } else {
                inv.as_ref()?.pow((-e) as u32)
            };
            out = out.add(&ParamPoly::monomial(rest, c.clone()).mul(&factor));
        }
        Some(out)
    }

    pub fn substitute_all(&self, values: &[(Param, ParamPoly)]) -> Option<ParamPoly> {
        let mut out = self.clone();
        for (p, v) in values {
            out = out.substitute(p, v)?;
        }
        Some(out)
    }

    /// Renames parameters through `f` (used when building two-point copies).
    pub fn rename(&self, f: &dyn Fn(&Param) -> Param) -> ParamPoly {
        let mut out = ParamPoly::zero();
        for (m, c) in &self.terms {
            let mut nm: PMono = m.iter().map(|(p, e)| (f(p), *e)).collect();
            nm.sort();
            // merge duplicates produced by renaming
            let mut merged: PMono = Vec::with_capacity(nm.len());
            for (p, e) in nm {
                match merged.last_mut() {
                    Some((q, f)) if *q == p => *f += e,
                    _ => merged.push((p, e)),
                }
            }
            merged.retain(|(_, e)| *e != 0);
            out.add_term(merged, c.clone());
        }
        out
    }

    /// Multiplies by the monomial making every exponent non-negative; returns
    /// the shifted polynomial and the shift.
    fn clear_negative(&self) -> (ParamPoly, PMono) {
        let mut shift: BTreeMap<Param, i32> = BTreeMap::new();
        for m in self.terms.keys() {
            for (p, e) in m {
                if *e < 0 {
                    let s = shift.entry(p.clone()).or_insert(0);
                    *s = (*s).max(-e);
                }
            }
        }
        let shift: PMono = shift.into_iter().collect();
        (self.mul(&ParamPoly::monomial(shift.clone(), Scalar::one())), shift)
    }

    fn leading(&self) -> Option<(&PMono, &Scalar)> {
        self.terms.iter().next_back()
    }

    /// Exact quotient `self / d` in the Laurent ring, or `None` if `d` does
    /// not divide `self`.
    pub fn div_exact(&self, d: &ParamPoly) -> Option<ParamPoly> {
        if d.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(ParamPoly::zero());
        }
        if let Some(inv) = d.inv_unit() {
            return Some(self.mul(&inv));
        }
        let (num, sn) = self.clear_negative();
        let (den, sd) = d.clear_negative();
        // Polynomial long division under the (lex) order of the BTreeMap keys,
        // which is a monomial order on exponent vectors once all exponents are >= 0.
        let mut rem = num;
        let mut quot = ParamPoly::zero();
        let (lm_d, lc_d) = den.leading().map(|(m, c)| (m.clone(), c.clone()))?;
        let lc_inv = lc_d.inv()?;
        let mut guard = 0usize;
        while let Some((lm_r, lc_r)) = rem.leading().map(|(m, c)| (m.clone(), c.clone())) {
            let q_m = pmono_mul(&lm_r, &pmono_inv(&lm_d));
            if q_m.iter().any(|(_, e)| *e < 0) {
                return None;
            }
            let q_t = ParamPoly::monomial(q_m, &lc_r * &lc_inv);
            rem = rem.sub(&q_t.mul(&den));
            quot = quot.add(&q_t);
            guard += 1;
            if guard > 100_000 {
                return None;
            }
        }
        // self = quot * d * x^{sd - sn}
        let adj = pmono_mul(&sd, &pmono_inv(&sn));
        Some(quot.mul(&ParamPoly::monomial(adj, Scalar::one())))
    }

    /// Evaluates with every parameter bound to an exact scalar.
    pub fn eval(&self, values: &dyn Fn(&Param) -> Option<Scalar>) -> Option<Scalar> {
        let mut acc = Scalar::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (p, e) in m {
                let v = values(p)?;
                let f = if *e >= 0 { v.pow(*e as u32) } else { v.inv()?.pow((-e) as u32) };
                t = &t * &f;
            }
            acc += &t;
        }
        Some(acc)
    }
}

impl fmt::Display for ParamPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in &self.terms {
            let mut coef = c.to_string();
            let neg = coef.starts_with('-');
            if neg {
                coef.remove(0);
            }
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            first = false;
            let mono: Vec<String> = m
                .iter()
                .map(|(p, e)| if *e == 1 { p.to_string() } else { format!("{}^{}", p, e) })
                .collect();
            if mono.is_empty() {
                write!(f, "{}", coef)?;
            } else if coef == "1" {
                write!(f, "{}", mono.join("*"))?;
            } else {
                write!(f, "{}*{}", coef, mono.join("*"))?;
            }
        }
        Ok(())
    }
}

/// Parses sums and products of rationals, `i`, and identifiers with integer
/// powers, e.g. `d/2 - 2*xi`, `(x+1)^2`, `-1/4`.
impl std::str::FromStr for ParamPoly {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let toks = tokenize(s)?;
        let mut p = Parser { toks, pos: 0 };
        let v = p.expr()?;
        if p.pos != p.toks.len() {
            return Err(format!("unexpected trailing input in '{}'", s));
        }
        Ok(v)
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(BigRational),
    Ident(String),
    Op(char),
}

fn tokenize(s: &str) -> Result<Vec<Tok>, String> {
    let cs: Vec<char> = s.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < cs.len() {
        let c = cs[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() || c == '.' {
            let st = i;
            while i < cs.len() && (cs[i].is_ascii_digit() || cs[i] == '.') {
                i += 1;
            }
            let txt: String = cs[st..i].iter().collect();
            out.push(Tok::Num(
                super::scalar::parse_rational(&txt).ok_or_else(|| format!("bad number '{}'", txt))?,
            ));
        } else if c.is_alphabetic() || c == '_' {
            let st = i;
            while i < cs.len() && (cs[i].is_alphanumeric() || cs[i] == '_' || cs[i] == '\'') {
                i += 1;
            }
            out.push(Tok::Ident(cs[st..i].iter().collect()));
        } else if "+-*/^()".contains(c) {
            out.push(Tok::Op(c));
            i += 1;
        } else {
            return Err(format!("unexpected character '{}'", c));
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<Tok>,
    pos: usize,
}

impl Parser {
    fn peek_op(&self) -> Option<char> {
        match self.toks.get(self.pos) {
            Some(Tok::Op(c)) => Some(*c),
            _ => None,
        }
    }

    fn expr(&mut self) -> Result<ParamPoly, String> {
        let mut acc = self.term()?;
        while let Some(c @ ('+' | '-')) = self.peek_op() {
            self.pos += 1;
            let t = self.term()?;
            acc = if c == '+' { acc.add(&t) } else { acc.sub(&t) };
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<ParamPoly, String> {
        let mut acc = self.unary()?;
        while let Some(c @ ('*' | '/')) = self.peek_op() {
            self.pos += 1;
            let f = self.unary()?;
            acc = if c == '*' {
                acc.mul(&f)
            } else {
                let inv = f.inv_unit().ok_or("division by a non-monomial")?;
                acc.mul(&inv)
            };
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<ParamPoly, String> {
        if self.peek_op() == Some('-') {
            self.pos += 1;
            return Ok(self.unary()?.neg());
        }
        if self.peek_op() == Some('+') {
            self.pos += 1;
        }
        self.power()
    }

    fn power(&mut self) -> Result<ParamPoly, String> {
        let base = self.atom()?;
        if self.peek_op() == Some('^') {
            self.pos += 1;
            let neg = if self.peek_op() == Some('-') {
                self.pos += 1;
                true
            } else {
                false
            };
            let e = match self.toks.get(self.pos) {
                Some(Tok::Num(n)) if n.is_integer() => n.to_integer(),
                _ => return Err("exponent must be an integer".into()),
            };
            self.pos += 1;
            let e: u32 = e.try_into().map_err(|_| "exponent too large".to_string())?;
            let b = if neg { base.inv_unit().ok_or("negative power of a non-monomial")? } else { base };
            return Ok(b.pow(e));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<ParamPoly, String> {
        let tok = self.toks.get(self.pos).cloned().ok_or("unexpected end of input")?;
        self.pos += 1;
        match tok {
            Tok::Num(n) => Ok(ParamPoly::rational(n)),
            Tok::Ident(s) if s == "i" => Ok(ParamPoly::i()),
            Tok::Ident(s) => Ok(ParamPoly::symbol(&s)),
            Tok::Op('(') => {
                let v = self.expr()?;
                if self.peek_op() != Some(')') {
                    return Err("missing ')'".into());
                }
                self.pos += 1;
                Ok(v)
            }
            Tok::Op(c) => Err(format!("unexpected '{}'", c)),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x() -> ParamPoly {
        ParamPoly::symbol("x")
    }

    #[test]
    fn ring_basics() {
        let p = x().add(&ParamPoly::int(1));
        let q = p.mul(&p);
        assert_eq!(q, x().mul(&x()).add(&x().scale(&Scalar::int(2))).add(&ParamPoly::one()));
        assert!(p.sub(&p).is_zero());
    }

    #[test]
    fn exact_division() {
        let m = ParamPoly::symbol("M");
        let a = x().scale(&Scalar::int(2)).sub(&ParamPoly::int(1));
        let b = x().scale(&Scalar::int(2)).sub(&ParamPoly::int(5));
        let prod = m.mul(&m).mul(&a).mul(&b);
        assert_eq!(prod.div_exact(&a).unwrap(), m.mul(&m).mul(&b));
        assert!(prod.div_exact(&x()).unwrap().mul(&x()) == prod);
        assert!(a.div_exact(&b).is_none());
    }

    #[test]
    fn laurent_units_and_substitution() {
        let theta = ParamPoly::symbol("theta");
        let inv = theta.inv_unit().unwrap();
        assert_eq!(inv.mul(&theta), ParamPoly::one());
        let v = inv.substitute(&Param::new("theta"), &ParamPoly::int(2)).unwrap();
        assert_eq!(v, ParamPoly::frac(1, 2));
        assert!(inv.substitute(&Param::new("theta"), &ParamPoly::zero()).is_none());
    }

    #[test]
    fn truncation_and_display() {
        let a = ParamPoly::symbol("a");
        let s = ParamPoly::one().add(&a.pow(2)).add(&a.pow(4).scale(&Scalar::frac(1, 3)));
        assert_eq!(s.truncate(&Param::new("a"), 2), ParamPoly::one().add(&a.pow(2)));
        assert_eq!(x().sub(&ParamPoly::frac(1, 2)).to_string(), "-1/2 + x");
    }

    #[test]
    fn parses_expressions() {
        let p: ParamPoly = "d/2 - 2*xi".parse().unwrap();
        let expect = ParamPoly::symbol("d").scale(&Scalar::frac(1, 2)).sub(&ParamPoly::symbol("xi").scale(&Scalar::int(2)));
        assert_eq!(p, expect);
        let q: ParamPoly = "(x+1)^2".parse().unwrap();
        assert_eq!(q, x().add(&ParamPoly::one()).pow(2));
        assert_eq!("-0.25".parse::<ParamPoly>().unwrap(), ParamPoly::frac(-1, 4));
        assert_eq!("M^-1".parse::<ParamPoly>().unwrap(), ParamPoly::symbol("M").inv_unit().unwrap());
        assert!("x +".parse::<ParamPoly>().is_err());
    }
}
