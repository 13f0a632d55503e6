//! Span membership: solve `A = Σ c_i B_i` for coefficients that are rational
//! functions of the parameters, by exact matching of normal-form entries.

use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;

use super::coeff::Mono;
use super::diffop::{DIdx, DiffOp};
use super::param::ParamPoly;

/// A quotient of parameter polynomials.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatFn {
    pub num: ParamPoly,
    pub den: ParamPoly,
}

impl RatFn {
    pub fn new(num: ParamPoly, den: ParamPoly) -> Self {
        RatFn { num, den }.normalize()
    }

    pub fn poly(p: ParamPoly) -> Self {
        RatFn { num: p, den: ParamPoly::one() }
    }

    pub fn zero() -> Self {
        RatFn::poly(ParamPoly::zero())
    }

    fn normalize(self) -> Self {
        if self.num.is_zero() {
            return RatFn::zero();
        }
        if let Some(inv) = self.den.inv_unit() {
            return RatFn::poly(self.num.mul(&inv));
        }
        if let Some(q) = self.num.div_exact(&self.den) {
            return RatFn::poly(q);
        }
        self
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// The polynomial value when the denominator cancels.
    pub fn as_poly(&self) -> Option<&ParamPoly> {
        if self.den == ParamPoly::one() {
            Some(&self.num)
        } else {
            None
        }
    }
}

impl fmt::Display for RatFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == ParamPoly::one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

impl Serialize for RatFn {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

#[derive(Clone, Debug)]
pub enum Decomposition {
    /// `A = Σ coeffs[i] · basis[i]`.
    InSpan(Vec<RatFn>),
    /// `D·A − Σ c_i B_i` for the best partial solution, with `D` a common
    /// denominator; never zero.
    NotInSpan { remainder: DiffOp },
}

impl Decomposition {
    pub fn coefficients(&self) -> Option<&[RatFn]> {
        match self {
            Decomposition::InSpan(c) => Some(c),
            Decomposition::NotInSpan { .. } => None,
        }
    }
}

/// Finds parameter-rational `c_i` with `a = Σ c_i basis[i]`. When the basis
/// is linearly dependent the free coefficients are set to zero.
pub fn op_decompose(a: &DiffOp, basis: &[DiffOp]) -> Decomposition {
    let ea = a.entries();
    let eb: Vec<_> = basis.iter().map(|b| b.entries()).collect();
    let mut keys: BTreeSet<(DIdx, Mono)> = ea.keys().cloned().collect();
    for e in &eb {
        keys.extend(e.keys().cloned());
    }
    let n = basis.len();
    // Augmented matrix rows: [B_0 .. B_{n-1} | A]
    let mut rows: Vec<Vec<ParamPoly>> = keys
        .iter()
        .map(|k| {
            let mut row: Vec<ParamPoly> =
                eb.iter().map(|e| e.get(k).cloned().unwrap_or_default()).collect();
            row.push(ea.get(k).cloned().unwrap_or_default());
            row
        })
        .collect();

    let mut pivots: Vec<(usize, usize)> = Vec::new(); // (row, col)
    let mut next_row = 0;
    for col in 0..n {
        // prefer a unit pivot
        let cand: Vec<usize> = (next_row..rows.len()).filter(|&r| !rows[r][col].is_zero()).collect();
        let Some(&pr) = cand.iter().find(|&&r| rows[r][col].is_unit()).or(cand.first()) else {
            continue;
        };
        rows.swap(next_row, pr);
        if let Some(inv) = rows[next_row][col].inv_unit() {
            rows[next_row] = rows[next_row].iter().map(|x| x.mul(&inv)).collect();
        }
        let piv_row = rows[next_row].clone();
        let piv = piv_row[col].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r == next_row || row[col].is_zero() {
                continue;
            }
            let f = row[col].clone();
            let unit_pivot = piv == ParamPoly::one();
            for c in 0..=n {
                let lhs = if unit_pivot { row[c].clone() } else { row[c].mul(&piv) };
                row[c] = lhs.sub(&f.mul(&piv_row[c]));
            }
        }
        pivots.push((next_row, col));
        next_row += 1;
    }

    let mut coeffs = vec![RatFn::zero(); n];
    for &(r, c) in &pivots {
        coeffs[c] = RatFn::new(rows[r][n].clone(), rows[r][c].clone());
    }
    let consistent = rows[next_row..].iter().all(|row| row[n].is_zero());
    if consistent {
        return Decomposition::InSpan(coeffs);
    }
    // common denominator of the partial solution
    let mut den = ParamPoly::one();
    for c in &coeffs {
        if c.den != ParamPoly::one() && den.div_exact(&c.den).is_none() {
            den = den.mul(&c.den);
        }
    }
    let mut rem = a.scale_param(&den);
    for (c, b) in coeffs.iter().zip(basis) {
        if c.is_zero() {
            continue;
        }
        let scaled = den.mul(&c.num).div_exact(&c.den).unwrap_or_else(|| den.mul(&c.num));
        rem = rem.sub(&b.scale_param(&scaled));
    }
    Decomposition::NotInSpan { remainder: rem }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::opalg::coeff::{CoeffExpr, Var};
    use crate::opalg::scalar::Scalar;

    #[test]
    fn decomposes_with_parameter_coefficients() {
        let t = Var::t();
        let x = ParamPoly::symbol("x");
        let b0 = DiffOp::d(t);
        let b1 = DiffOp::term(CoeffExpr::var(t), vec![(t, 1)]);
        let a = b0.scale_param(&x).add(&b1.scale(&Scalar::frac(-1, 2)));
        let d = op_decompose(&a, &[b0, b1]);
        let c = d.coefficients().unwrap();
        assert_eq!(c[0], RatFn::poly(x));
        assert_eq!(c[1], RatFn::poly(ParamPoly::frac(-1, 2)));
    }

    #[test]
    fn rational_coefficients() {
        let t = Var::t();
        let x = ParamPoly::symbol("x");
        let b = DiffOp::d(t).scale_param(&x.sub(&ParamPoly::int(1)));
        let d = op_decompose(&DiffOp::d(t), &[b]);
        let c = d.coefficients().unwrap();
        assert_eq!(c[0].num, ParamPoly::one());
        assert_eq!(c[0].den, x.sub(&ParamPoly::int(1)));
    }

    #[test]
    fn reports_not_in_span() {
        let t = Var::t();
        let d = op_decompose(&DiffOp::d(Var::r(1)), &[DiffOp::d(t)]);
        match d {
            Decomposition::NotInSpan { remainder } => assert_eq!(remainder, DiffOp::d(Var::r(1))),
            _ => panic!("expected NotInSpan"),
        }
    }
}
