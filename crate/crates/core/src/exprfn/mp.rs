//! Complex numbers over `astro-float` big floats.

use astro_float::{BigFloat, Consts, Radix, RoundingMode};
use num_bigint::BigInt;
use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::opalg::Scalar;

const RM: RoundingMode = RoundingMode::ToEven;

/// Evaluation context: working precision in bits and the constants cache.
pub struct MpCtx {
    pub prec: usize,
    cc: Consts,
}

impl MpCtx {
    /// Precision given in decimal digits; a guard of 64 bits is added.
    pub fn with_digits(digits: u32) -> Self {
        let bits = (digits as f64 * std::f64::consts::LOG2_10).ceil() as usize + 64;
        MpCtx { prec: bits, cc: Consts::new().expect("constants cache") }
    }

    fn int(&mut self, n: &BigInt) -> BigFloat {
        BigFloat::parse(&n.to_string(), Radix::Dec, self.prec, RM, &mut self.cc)
    }

    pub fn rational(&mut self, r: &BigRational) -> BigFloat {
        let n = self.int(r.numer());
        let d = self.int(r.denom());
        n.div(&d, self.prec, RM)
    }

    pub fn scalar(&mut self, s: &Scalar) -> MpComplex {
        MpComplex { re: self.rational(&s.re), im: self.rational(&s.im) }
    }

    pub fn real(&mut self, r: &BigRational) -> MpComplex {
        MpComplex { re: self.rational(r), im: self.zero_f() }
    }

    fn zero_f(&self) -> BigFloat {
        BigFloat::from_i64(0, self.prec)
    }

    pub fn zero(&self) -> MpComplex {
        MpComplex { re: self.zero_f(), im: self.zero_f() }
    }

    pub fn one(&self) -> MpComplex {
        MpComplex { re: BigFloat::from_i64(1, self.prec), im: self.zero_f() }
    }

    pub fn add(&self, a: &MpComplex, b: &MpComplex) -> MpComplex {
        MpComplex { re: a.re.add(&b.re, self.prec, RM), im: a.im.add(&b.im, self.prec, RM) }
    }

    pub fn sub(&self, a: &MpComplex, b: &MpComplex) -> MpComplex {
        MpComplex { re: a.re.sub(&b.re, self.prec, RM), im: a.im.sub(&b.im, self.prec, RM) }
    }

    pub fn mul(&self, a: &MpComplex, b: &MpComplex) -> MpComplex {
        let p = self.prec;
        let re = a.re.mul(&b.re, p, RM).sub(&a.im.mul(&b.im, p, RM), p, RM);
        let im = a.re.mul(&b.im, p, RM).add(&a.im.mul(&b.re, p, RM), p, RM);
        MpComplex { re, im }
    }

    pub fn div(&self, a: &MpComplex, b: &MpComplex) -> Result<MpComplex> {
        let p = self.prec;
        let den = b.re.mul(&b.re, p, RM).add(&b.im.mul(&b.im, p, RM), p, RM);
        if den.is_zero() {
            return Err(Error::Singular("division by zero".into()));
        }
        let re = a.re.mul(&b.re, p, RM).add(&a.im.mul(&b.im, p, RM), p, RM).div(&den, p, RM);
        let im = a.im.mul(&b.re, p, RM).sub(&a.re.mul(&b.im, p, RM), p, RM).div(&den, p, RM);
        Ok(MpComplex { re, im })
    }

    pub fn abs(&mut self, a: &MpComplex) -> BigFloat {
        let p = self.prec;
        a.re.mul(&a.re, p, RM).add(&a.im.mul(&a.im, p, RM), p, RM).sqrt(p, RM)
    }

    pub fn exp(&mut self, a: &MpComplex) -> MpComplex {
        let p = self.prec;
        let m = a.re.exp(p, RM, &mut self.cc);
        if a.im.is_zero() {
            return MpComplex { re: m, im: self.zero_f() };
        }
        let c = a.im.cos(p, RM, &mut self.cc);
        let s = a.im.sin(p, RM, &mut self.cc);
        MpComplex { re: m.mul(&c, p, RM), im: m.mul(&s, p, RM) }
    }

    fn atan2(&mut self, y: &BigFloat, x: &BigFloat) -> BigFloat {
        let p = self.prec;
        let pi = self.cc.pi(p, RM);
        if x.is_zero() {
            let h = pi.div(&BigFloat::from_i64(2, p), p, RM);
            return if y.is_negative() { h.neg() } else { h };
        }
        let a = y.div(x, p, RM).atan(p, RM, &mut self.cc);
        if x.is_positive() {
            a
        } else if y.is_negative() {
            a.sub(&pi, p, RM)
        } else {
            a.add(&pi, p, RM)
        }
    }

    /// Principal logarithm.
    pub fn ln(&mut self, a: &MpComplex) -> Result<MpComplex> {
        if a.re.is_zero() && a.im.is_zero() {
            return Err(Error::Singular("logarithm of zero".into()));
        }
        let r = self.abs(a);
        let re = r.ln(self.prec, RM, &mut self.cc);
        let im = if a.im.is_zero() && a.re.is_positive() { self.zero_f() } else { self.atan2(&a.im, &a.re) };
        Ok(MpComplex { re, im })
    }

    /// Principal branch `a^w`; integer exponents are exact powers.
    pub fn pow(&mut self, a: &MpComplex, w: &Scalar) -> Result<MpComplex> {
        if w.is_zero() {
            return Ok(self.one());
        }
        if w.is_real() && w.re.is_integer() {
            let k: i64 = w.re.to_integer().try_into().map_err(|_| Error::Domain("exponent too large".into()))?;
            let mut acc = self.one();
            for _ in 0..k.unsigned_abs() {
                acc = self.mul(&acc, a);
            }
            return if k < 0 { self.div(&self.one(), &acc) } else { Ok(acc) };
        }
        let l = self.ln(a)?;
        let w = self.scalar(w);
        Ok(self.exp(&self.mul(&w, &l)))
    }

    /// Real logarithm of a positive rational.
    pub fn ln_rational(&mut self, r: &BigRational) -> Result<BigFloat> {
        let v = self.real(r);
        Ok(self.ln(&v)?.re)
    }

    /// Nearest `f64`, through the decimal representation.
    pub fn to_f64(&mut self, x: &BigFloat) -> f64 {
        if x.is_zero() {
            return 0.0;
        }
        x.format(Radix::Dec, RM, &mut self.cc).ok().and_then(|s| s.parse::<f64>().ok()).unwrap_or(f64::NAN)
    }

    pub fn modulus_f64(&mut self, a: &MpComplex) -> f64 {
        let r = self.abs(a);
        self.to_f64(&r)
    }

    pub fn to_f64_pair(&mut self, a: &MpComplex) -> (f64, f64) {
        (self.to_f64(&a.re), self.to_f64(&a.im))
    }
}

#[derive(Clone, Debug)]
pub struct MpComplex {
    pub re: BigFloat,
    pub im: BigFloat,
}

impl MpComplex {
    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn elementary_values() {
        let mut c = MpCtx::with_digits(50);
        let one = c.one();
        let e = c.exp(&one);
        assert!((c.to_f64(&e.re) - std::f64::consts::E).abs() < 1e-15);
        let m1 = c.scalar(&Scalar::int(-1));
        let l = c.ln(&m1).unwrap();
        assert!((c.to_f64(&l.im) - std::f64::consts::PI).abs() < 1e-15);
        let i = c.scalar(&Scalar::i());
        let sq = c.pow(&i, &Scalar::frac(1, 2)).unwrap();
        let (re, im) = c.to_f64_pair(&sq);
        assert!((re - 0.5f64.sqrt()).abs() < 1e-15 && (im - 0.5f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn fifty_digits_survive_cancellation() {
        let mut c = MpCtx::with_digits(50);
        let third = c.real(&BigRational::new(1.into(), 3.into()));
        let three = c.scalar(&Scalar::int(3));
        let back = c.sub(&c.mul(&third, &three), &c.one());
        assert!(c.modulus_f64(&back) < 1e-50);
    }
}
