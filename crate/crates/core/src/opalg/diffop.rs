//! Differential operators in normal form: `Σ c_α(vars, params) ∂^α`, with
//! every derivative ordered to the right of its coefficient.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::BigInt;

use super::coeff::{CoeffExpr, Mono, Var, VarKind};
use super::param::{Param, ParamPoly};
use super::scalar::Scalar;
use crate::error::{Error, Result};

/// Name of the lattice constant, the only parameter operators are ever
/// truncated in.
pub const LATTICE_PARAM: &str = "a";

/// Derivative multi-index: sorted `(variable, order)` pairs, orders > 0.
pub type DIdx = Vec<(Var, u32)>;

fn didx_add(a: &DIdx, b: &DIdx) -> DIdx {
    let mut m: BTreeMap<Var, u32> = a.iter().cloned().collect();
    for (v, k) in b {
        *m.entry(*v).or_insert(0) += k;
    }
    m.into_iter().filter(|(_, k)| *k > 0).collect()
}

/// `a - b` if `b <= a` componentwise.
fn didx_sub(a: &DIdx, b: &DIdx) -> Option<DIdx> {
    let mut m: BTreeMap<Var, u32> = a.iter().cloned().collect();
    for (v, k) in b {
        let e = m.get_mut(v)?;
        if *e < *k {
            return None;
        }
        *e -= k;
    }
    Some(m.into_iter().filter(|(_, k)| *k > 0).collect())
}

fn didx_order(a: &DIdx) -> u32 {
    a.iter().map(|(_, k)| k).sum()
}

fn binomial(n: u32, k: u32) -> BigInt {
    let mut r = BigInt::from(1);
    for i in 0..k {
        r = r * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    r
}

/// Every sub-multi-index `γ <= α` with the product of binomials `C(α, γ)`.
fn sub_indices(alpha: &DIdx) -> Vec<(DIdx, BigInt)> {
    let mut out: Vec<(DIdx, BigInt)> = vec![(Vec::new(), BigInt::from(1))];
    for (v, k) in alpha {
        let mut next = Vec::with_capacity(out.len() * (*k as usize + 1));
        for (g, c) in &out {
            for j in 0..=*k {
                let mut g2 = g.clone();
                if j > 0 {
                    g2.push((*v, j));
                }
                next.push((g2, c * binomial(*k, j)));
            }
        }
        out = next;
    }
    out
}

/// Graded-lexicographic comparison of derivative multi-indices.
pub fn grlex_cmp(a: &DIdx, b: &DIdx) -> Ordering {
    didx_order(a).cmp(&didx_order(b)).then_with(|| {
        let vars: BTreeSet<Var> = a.iter().chain(b.iter()).map(|(v, _)| *v).collect();
        for v in vars {
            let ea = a.iter().find(|(w, _)| *w == v).map(|(_, k)| *k).unwrap_or(0);
            let eb = b.iter().find(|(w, _)| *w == v).map(|(_, k)| *k).unwrap_or(0);
            match ea.cmp(&eb) {
                Ordering::Equal => continue,
                o => return o,
            }
        }
        Ordering::Equal
    })
}

/// Monomial order used to pick the pivot of a left division.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DivisionOrder {
    /// Total order first, then lexicographic.
    Graded,
    /// Order in `∂_t` first; suits series in the lattice constant, whose
    /// spatial order is unbounded.
    TimeFirst,
}

impl DivisionOrder {
    pub fn cmp(&self, a: &DIdx, b: &DIdx) -> Ordering {
        match self {
            DivisionOrder::Graded => grlex_cmp(a, b),
            DivisionOrder::TimeFirst => {
                let tdeg = |x: &DIdx| x.iter().filter(|(v, _)| v.kind == VarKind::T).map(|(_, k)| *k).sum::<u32>();
                tdeg(a).cmp(&tdeg(b)).then_with(|| grlex_cmp(a, b))
            }
        }
    }
}

#[derive(Clone, Debug, Default)]
pub struct DiffOp {
    terms: BTreeMap<DIdx, CoeffExpr>,
    /// Coefficients are reduced mod `a^{order+1}` when set.
    trunc: Option<u32>,
}

impl PartialEq for DiffOp {
    fn eq(&self, o: &Self) -> bool {
        self.terms == o.terms
    }
}

impl Eq for DiffOp {}

impl DiffOp {
    pub fn zero() -> Self {
        DiffOp { terms: BTreeMap::new(), trunc: None }
    }

    pub fn identity() -> Self {
        DiffOp::coeff(CoeffExpr::one())
    }

    /// Multiplication operator by `c`.
    pub fn coeff(c: CoeffExpr) -> Self {
        DiffOp::term(c, Vec::new())
    }

    pub fn param(p: ParamPoly) -> Self {
        DiffOp::coeff(CoeffExpr::param(p))
    }

    pub fn scalar(c: Scalar) -> Self {
        DiffOp::param(ParamPoly::constant(c))
    }

    pub fn term(c: CoeffExpr, idx: DIdx) -> Self {
        let mut terms = BTreeMap::new();
        let idx: DIdx = idx.into_iter().filter(|(_, k)| *k > 0).collect();
        let mut idx = idx;
        idx.sort();
        if !c.is_zero() {
            terms.insert(idx, c);
        }
        DiffOp { terms, trunc: None }
    }

    /// `∂_v`.
    pub fn d(v: Var) -> Self {
        DiffOp::d_pow(v, 1)
    }

    pub fn d_pow(v: Var, k: u32) -> Self {
        DiffOp::term(CoeffExpr::one(), if k == 0 { Vec::new() } else { vec![(v, k)] })
    }

    /// Multiplication by the variable `v`.
    pub fn var(v: Var) -> Self {
        DiffOp::coeff(CoeffExpr::var(v))
    }

    pub fn terms(&self) -> impl Iterator<Item = (&DIdx, &CoeffExpr)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, idx: &DIdx) -> CoeffExpr {
        self.terms.get(idx).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn truncation(&self) -> Option<u32> {
        self.trunc
    }

    /// Highest total derivative order, `None` for the zero operator.
    pub fn order(&self) -> Option<u32> {
        self.terms.keys().map(didx_order).max()
    }

    /// The multiplication function if the operator has order zero.
    pub fn as_coeff(&self) -> Option<CoeffExpr> {
        match self.terms.len() {
            0 => Some(CoeffExpr::zero()),
            1 => self.terms.get(&Vec::new()).cloned(),
            _ => None,
        }
    }

    pub fn as_param(&self) -> Option<ParamPoly> {
        self.as_coeff()?.as_param()
    }

    fn reduce(mut self) -> Self {
        if let Some(n) = self.trunc {
            let a = Param::new(LATTICE_PARAM);
            self.terms = std::mem::take(&mut self.terms)
                .into_iter()
                .map(|(k, c)| (k, c.truncate(&a, n as i32)))
                .filter(|(_, c)| !c.is_zero())
                .collect();
        }
        self
    }

    fn join_trunc(a: Option<u32>, b: Option<u32>) -> Option<u32> {
        match (a, b) {
            (Some(x), Some(y)) => Some(x.min(y)),
            (x, None) => x,
            (None, y) => y,
        }
    }

    fn add_term(&mut self, idx: DIdx, c: CoeffExpr) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(idx) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                let s = e.get().add(&c);
                if s.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = s;
                }
            }
        }
    }

    pub fn add(&self, o: &DiffOp) -> DiffOp {
        let mut out = self.clone();
        out.trunc = DiffOp::join_trunc(self.trunc, o.trunc);
        for (k, c) in &o.terms {
            out.add_term(k.clone(), c.clone());
        }
        out.reduce()
    }

    pub fn sub(&self, o: &DiffOp) -> DiffOp {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> DiffOp {
        self.scale(&Scalar::int(-1))
    }

    pub fn scale(&self, c: &Scalar) -> DiffOp {
        self.scale_param(&ParamPoly::constant(c.clone()))
    }

    pub fn scale_param(&self, p: &ParamPoly) -> DiffOp {
        self.mul_coeff(&CoeffExpr::param(p.clone()))
    }

    /// `c · A` (left multiplication by a function).
    pub fn mul_coeff(&self, c: &CoeffExpr) -> DiffOp {
        let mut out = DiffOp { terms: BTreeMap::new(), trunc: self.trunc };
        for (k, a) in &self.terms {
            out.add_term(k.clone(), c.mul(a));
        }
        out.reduce()
    }

    /// Composition `A ∘ B` via the Leibniz rule. Operands truncated at
    /// different orders are combined at the lower order; see [`DiffOp::try_compose`]
    /// for the strict variant.
    pub fn compose(&self, o: &DiffOp) -> DiffOp {
        let mut out = DiffOp { terms: BTreeMap::new(), trunc: DiffOp::join_trunc(self.trunc, o.trunc) };
        for (alpha, a) in &self.terms {
            let subs = sub_indices(alpha);
            for (beta, b) in &o.terms {
                for (gamma, binom) in &subs {
                    let mut db = b.clone();
                    for (v, k) in gamma {
                        db = db.diff_n(*v, *k);
                        if db.is_zero() {
                            break;
                        }
                    }
                    if db.is_zero() {
                        continue;
                    }
                    let rest = didx_sub(alpha, gamma).expect("sub-index");
                    let idx = didx_add(&rest, beta);
                    let c = a.mul(&db).scale(&Scalar::real(num_rational::BigRational::from_integer(binom.clone())));
                    out.add_term(idx, c);
                }
            }
        }
        out.reduce()
    }

    pub fn try_compose(&self, o: &DiffOp) -> Result<DiffOp> {
        self.check_trunc(o)?;
        Ok(self.compose(o))
    }

    fn check_trunc(&self, o: &DiffOp) -> Result<()> {
        match (self.trunc, o.trunc) {
            (Some(x), Some(y)) if x != y => Err(Error::Config(format!(
                "truncation order mismatch: {} vs {}",
                x, y
            ))),
            _ => Ok(()),
        }
    }

    pub fn pow(&self, k: u32) -> DiffOp {
        let mut out = DiffOp::identity();
        out.trunc = self.trunc;
        for _ in 0..k {
            out = out.compose(self);
        }
        out
    }

    /// `[A, B] = A∘B − B∘A`.
    pub fn commutator(&self, o: &DiffOp) -> DiffOp {
        self.compose(o).sub(&o.compose(self))
    }

    pub fn try_commutator(&self, o: &DiffOp) -> Result<DiffOp> {
        self.check_trunc(o)?;
        Ok(self.commutator(o))
    }

    /// `{A, B} = A∘B + B∘A`.
    pub fn anticommutator(&self, o: &DiffOp) -> DiffOp {
        self.compose(o).add(&o.compose(self))
    }

    /// Action on a function.
    pub fn apply(&self, f: &CoeffExpr) -> CoeffExpr {
        let mut out = CoeffExpr::zero();
        for (alpha, a) in &self.terms {
            let mut g = f.clone();
            for (v, k) in alpha {
                g = g.diff_n(*v, *k);
            }
            out = out.add(&a.mul(&g));
        }
        if let Some(n) = self.trunc {
            out = out.truncate(&Param::new(LATTICE_PARAM), n as i32);
        }
        out
    }

    /// Reduces every coefficient mod `a^{order+1}`.
    pub fn truncate(&self, order: u32) -> DiffOp {
        let mut out = self.clone();
        out.trunc = Some(order);
        out.reduce()
    }

    pub fn with_truncation(mut self, order: Option<u32>) -> DiffOp {
        self.trunc = order;
        self.reduce()
    }

    pub fn vars(&self) -> Vec<Var> {
        let mut v: Vec<Var> = self
            .terms
            .iter()
            .flat_map(|(k, c)| k.iter().map(|(w, _)| *w).chain(c.vars()))
            .collect();
        v.sort();
        v.dedup();
        v
    }

    pub fn params(&self) -> Vec<Param> {
        let mut v: Vec<Param> = self.terms.values().flat_map(|c| c.params()).collect();
        v.sort();
        v.dedup();
        v
    }

    pub fn map_vars(&self, f: &dyn Fn(Var) -> Var) -> DiffOp {
        let mut out = DiffOp { terms: BTreeMap::new(), trunc: self.trunc };
        for (k, c) in &self.terms {
            let mut nk: DIdx = k.iter().map(|(v, e)| (f(*v), *e)).collect();
            nk.sort();
            out.add_term(nk, c.map_vars(f));
        }
        out
    }

    pub fn map_params(&self, f: &dyn Fn(&ParamPoly) -> ParamPoly) -> DiffOp {
        let mut out = DiffOp { terms: BTreeMap::new(), trunc: self.trunc };
        for (k, c) in &self.terms {
            out.add_term(k.clone(), c.map_params(f));
        }
        out.reduce()
    }

    pub fn substitute_param(&self, p: &Param, value: &ParamPoly) -> Option<DiffOp> {
        let mut out = DiffOp { terms: BTreeMap::new(), trunc: self.trunc };
        for (k, c) in &self.terms {
            out.add_term(k.clone(), c.substitute_param(p, value)?);
        }
        Some(out.reduce())
    }

    /// Replaces `∂_v` by the constant `value` (a formal Fourier transform in `v`).
    /// Valid when no coefficient depends on `v`; returns `None` otherwise.
    pub fn substitute_derivative(&self, v: Var, value: &ParamPoly) -> Option<DiffOp> {
        let mut out = DiffOp { terms: BTreeMap::new(), trunc: self.trunc };
        for (k, c) in &self.terms {
            if c.vars().contains(&v) {
                return None;
            }
            let e = k.iter().find(|(w, _)| *w == v).map(|(_, e)| *e).unwrap_or(0);
            let rest: DIdx = k.iter().filter(|(w, _)| *w != v).cloned().collect();
            out.add_term(rest, c.scale_param(&value.pow(e)));
        }
        Some(out.reduce())
    }

    /// Substitutes a base variable by a parameter value in every coefficient.
    pub fn substitute_var(&self, v: Var, value: &ParamPoly) -> Option<DiffOp> {
        let mut out = DiffOp { terms: BTreeMap::new(), trunc: self.trunc };
        for (k, c) in &self.terms {
            out.add_term(k.clone(), c.substitute_var(v, value)?);
        }
        Some(out.reduce())
    }

    /// Leading term under graded-lex order on derivative multi-indices.
    pub fn leading(&self) -> Option<(&DIdx, &CoeffExpr)> {
        self.leading_by(DivisionOrder::Graded)
    }

    pub fn leading_by(&self, order: DivisionOrder) -> Option<(&DIdx, &CoeffExpr)> {
        self.terms.iter().max_by(|a, b| order.cmp(a.0, b.0))
    }

    /// Left division `self = Q ∘ s + rem`, where no derivative multi-index of
    /// `rem` is divisible by the leading multi-index of `s`. The leading
    /// coefficient of `s` must be invertible.
    pub fn left_divide(&self, s: &DiffOp) -> Result<(DiffOp, DiffOp)> {
        self.left_divide_by(s, DivisionOrder::Graded)
    }

    pub fn left_divide_by(&self, s: &DiffOp, order: DivisionOrder) -> Result<(DiffOp, DiffOp)> {
        let (lp, lc) = s
            .leading_by(order)
            .map(|(k, c)| (k.clone(), c.clone()))
            .ok_or_else(|| Error::Config("division by the zero operator".into()))?;
        let lc_inv = lc
            .inv_unit()
            .ok_or_else(|| Error::Config(format!("leading coefficient {} is not invertible", lc)))?;
        let trunc = DiffOp::join_trunc(self.trunc, s.trunc);
        let mut rem = self.clone().with_truncation(trunc);
        let mut q = DiffOp::zero().with_truncation(trunc);
        let mut out = DiffOp::zero().with_truncation(trunc);
        let mut guard = 0usize;
        while let Some((k, c)) = rem.leading_by(order).map(|(k, c)| (k.clone(), c.clone())) {
            guard += 1;
            if guard > 100_000 {
                return Err(Error::Config("left division did not terminate".into()));
            }
            match didx_sub(&k, &lp) {
                Some(shift) => {
                    let qt = DiffOp::term(c.mul(&lc_inv), shift).with_truncation(trunc);
                    rem = rem.sub(&qt.compose(s));
                    q = q.add(&qt);
                }
                None => {
                    let t = DiffOp::term(c, k).with_truncation(trunc);
                    rem = rem.sub(&t);
                    out = out.add(&t);
                }
            }
        }
        Ok((q, out))
    }

    /// All `(derivative index, coefficient monomial) → parameter polynomial`
    /// entries; the coordinates used by span decompositions.
    pub fn entries(&self) -> BTreeMap<(DIdx, Mono), ParamPoly> {
        let mut out = BTreeMap::new();
        for (k, c) in &self.terms {
            for (m, p) in c.terms() {
                out.insert((k.clone(), m.clone()), p.clone());
            }
        }
        out
    }
}

fn fmt_didx(k: &DIdx) -> String {
    k.iter()
        .map(|(v, e)| if *e == 1 { format!("d_{}", v) } else { format!("d_{}^{}", v, e) })
        .collect::<Vec<_>>()
        .join("*")
}

impl fmt::Display for DiffOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut keys: Vec<&DIdx> = self.terms.keys().collect();
        keys.sort_by(|a, b| grlex_cmp(b, a));
        let parts: Vec<String> = keys
            .into_iter()
            .map(|k| {
                let c = &self.terms[k];
                let cs = c.to_string();
                if k.is_empty() {
                    cs
                } else if cs == "1" {
                    fmt_didx(k)
                } else {
                    format!("({})*{}", cs, fmt_didx(k))
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
    fn leibniz_basics() {
        let r = Var::r(1);
        let t = Var::t();
        let lhs = DiffOp::d(r).compose(&DiffOp::var(r));
        assert_eq!(lhs, DiffOp::var(r).compose(&DiffOp::d(r)).add(&DiffOp::identity()));
        let tdt = DiffOp::var(t).compose(&DiffOp::d(t));
        let sq = tdt.compose(&tdt);
        let expect = DiffOp::term(CoeffExpr::var_pow(t, 2), vec![(t, 2)]).add(&tdt);
        assert_eq!(sq, expect);
    }

    #[test]
    fn left_division_recovers_quotient() {
        let t = Var::t();
        let r = Var::r(1);
        let m = ParamPoly::symbol("M");
        let s = DiffOp::d(t).scale_param(&m.scale(&Scalar::int(2))).sub(&DiffOp::d_pow(r, 2));
        let q = DiffOp::term(CoeffExpr::var(t), vec![(r, 1)]).add(&DiffOp::var(r));
        let extra = DiffOp::scalar(Scalar::int(3));
        let (q2, rem) = q.compose(&s).add(&extra).left_divide(&s).unwrap();
        assert_eq!(q2, q);
        assert_eq!(rem, extra);
    }

    #[test]
    fn truncation_mismatch_is_an_error() {
        let a = DiffOp::d(Var::r(1)).truncate(2);
        let b = DiffOp::d(Var::r(1)).truncate(4);
        assert!(a.try_compose(&b).is_err());
        assert!(a.try_compose(&a).is_ok());
    }
}
