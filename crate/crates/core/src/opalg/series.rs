//! Formal power series in `∂_v` with coefficients in the lattice constant
//! `a`, truncated at a fixed order in `a`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::coeff::{CoeffExpr, Var};
use super::diffop::{DiffOp, LATTICE_PARAM};
use super::param::ParamPoly;
use super::scalar::Scalar;

fn factorial(n: u32) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

fn a_pow(k: u32) -> ParamPoly {
    ParamPoly::symbol(LATTICE_PARAM).pow(k)
}

/// `Σ_k c_k a^{2k} ∂_v^{2k+shift}` for `2k <= order`.
fn even_series(v: Var, order: u32, shift: u32, coeff: impl Fn(u32) -> BigRational) -> DiffOp {
    let mut out = DiffOp::zero().with_truncation(Some(order));
    let mut k = 0;
    while 2 * k <= order {
        let c = coeff(k);
        if !c.is_zero() {
            let p = a_pow(2 * k).scale(&Scalar::real(c));
            out = out.add(&DiffOp::term(CoeffExpr::param(p), vec![(v, 2 * k + shift)]));
        }
        k += 1;
    }
    out.with_truncation(Some(order))
}

/// `(2/a) sinh(a ∂_v / 2) = Σ a^{2k} ∂^{2k+1} / (4^k (2k+1)!)`.
pub fn sinh_half(v: Var, order: u32) -> DiffOp {
    even_series(v, order, 1, |k| {
        BigRational::new(BigInt::one(), BigInt::from(4).pow(k) * factorial(2 * k + 1))
    })
}

/// `cosh(a ∂_v / 2)`.
pub fn cosh_half(v: Var, order: u32) -> DiffOp {
    even_series(v, order, 0, |k| BigRational::new(BigInt::one(), BigInt::from(4).pow(k) * factorial(2 * k)))
}

/// Coefficients `s_k` of `1/cosh(y) = Σ s_k y^{2k}`, by inverting the cosh series.
pub fn sech_coefficients(n: usize) -> Vec<BigRational> {
    let c: Vec<BigRational> =
        (0..=n as u32).map(|k| BigRational::new(BigInt::one(), factorial(2 * k))).collect();
    let mut s: Vec<BigRational> = vec![BigRational::one()];
    for k in 1..=n {
        let mut acc = BigRational::zero();
        for j in 1..=k {
            acc += &c[j] * &s[k - j];
        }
        s.push(-acc);
    }
    s
}

/// `1/cosh(a ∂_v / 2)`.
pub fn sech_half(v: Var, order: u32) -> DiffOp {
    let s = sech_coefficients(order as usize / 2 + 1);
    even_series(v, order, 0, |k| &s[k as usize] / BigRational::from_integer(BigInt::from(4).pow(k)))
}

/// `a^{-2}(e^{a∂_v} + e^{-a∂_v} − 2) = Σ_{k>=1} 2 a^{2k−2} ∂^{2k} / (2k)!`.
pub fn second_difference(v: Var, order: u32) -> DiffOp {
    even_series(v, order, 2, |k| {
        BigRational::new(BigInt::from(2), factorial(2 * k + 2))
    })
}

/// Applies `series_truncate` semantics: reduce mod `a^{order+1}`.
pub fn series_truncate(op: &DiffOp, order: u32) -> DiffOp {
    op.truncate(order)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sech_is_inverse_of_cosh() {
        let r = Var::r(1);
        let p = sech_half(r, 8).compose(&cosh_half(r, 8));
        assert_eq!(p, DiffOp::identity().truncate(8));
    }

    #[test]
    fn euler_numbers() {
        let s = sech_coefficients(3);
        // 1 - y^2/2 + 5y^4/24 - 61y^6/720
        assert_eq!(s[1], BigRational::new((-1).into(), 2.into()));
        assert_eq!(s[2], BigRational::new(5.into(), 24.into()));
        assert_eq!(s[3], BigRational::new((-61).into(), 720.into()));
    }

    #[test]
    fn sinh_low_orders() {
        let r = Var::r(1);
        let y = sinh_half(r, 2).neg();
        let expect = DiffOp::d(r)
            .neg()
            .sub(&DiffOp::term(CoeffExpr::param(a_pow(2).scale(&Scalar::frac(1, 24))), vec![(r, 3)]));
        assert_eq!(y, expect);
        assert_eq!(series_truncate(&y, 0), DiffOp::d(r).neg());
    }
}
