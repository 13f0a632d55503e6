use nalgebra::{DMatrix, DVector};
use quadrature::double_exponential;
use serde::Serialize;

use super::glauber::glauber_exact;
use crate::error::{Error, Result};

/// `∫_0^1 dv [v(y − v)(1 − v)(y + 1 − 2v)]^{2μ}` to relative accuracy `tol`.
///
/// The halves `[0, 1/2]` and `[1/2, 1]` are mapped by `v = w²` and
/// `v = 1 − w²`, which removes the endpoint singularity for `μ = −1/4`.
pub fn autocorr_integral(y: f64, mu: f64, tol: f64) -> Result<f64> {
    if !(y > 1.0) {
        return Err(Error::Usage(format!("need y > 1, got {}", y)));
    }
    let e = 2.0 * mu;
    if !(e > -1.0) {
        return Err(Error::Divergence(format!("endpoint exponent 2μ = {} ≤ −1", e)));
    }
    let w_max = std::f64::consts::FRAC_1_SQRT_2;
    let left = |w: f64| {
        let v = w * w;
        2.0 * w.powf(1.0 + 2.0 * e) * ((y - v) * (1.0 - v) * (y + 1.0 - 2.0 * v)).powf(e)
    };
    let right = |w: f64| {
        let v = 1.0 - w * w;
        2.0 * w.powf(1.0 + 2.0 * e) * (v * (y - v) * (y + 1.0 - 2.0 * v)).powf(e)
    };
    let rough = double_exponential::integrate(left, 0.0, w_max, 1e-6).integral
        + double_exponential::integrate(right, 0.0, w_max, 1e-6).integral;
    let target = 0.1 * tol * rough.abs();
    let a = double_exponential::integrate(left, 0.0, w_max, target);
    let b = double_exponential::integrate(right, 0.0, w_max, target);
    let total = a.integral + b.integral;
    let err = a.error_estimate + b.error_estimate;
    if !total.is_finite() || err > tol * total.abs() {
        return Err(Error::Accuracy(format!("quadrature error {:e} at y = {}", err, y)));
    }
    Ok(total)
}

/// `C0 · y^{a_y} (y − 1)^{a_{y−1}} · ∫_0^1 dv [v(y − v)(1 − v)(y + 1 − 2v)]^{2μ}`.
pub fn autocorr_c(y: f64, mu: f64, c0: f64, a_y: f64, a_y1: f64) -> Result<f64> {
    Ok(c0 * y.powf(a_y) * (y - 1.0).powf(a_y1) * autocorr_integral(y, mu, 1e-8)?)
}

/// Prefactor exponents and normalization that make the autocorrelator
/// proportional to the exact arctan form over the sample of `y` values.
#[derive(Clone, Debug, Serialize)]
pub struct ShapeMatch {
    pub mu: f64,
    pub c0: f64,
    pub a_y: f64,
    pub a_y1: f64,
    /// `max |ratio − 1|` of the matched form to the exact one.
    pub max_deviation: f64,
    /// Same for the literal `C0 = 2/√π` without prefactors.
    pub literal_max_deviation: f64,
    pub literal_ratio_range: (f64, f64),
}

pub fn shape_match(mu: f64, ys: &[f64]) -> Result<ShapeMatch> {
    if ys.len() < 4 {
        return Err(Error::Usage("at least four y values are needed".into()));
    }
    let n = ys.len();
    let mut a = DMatrix::<f64>::zeros(n, 3);
    let mut b = DVector::<f64>::zeros(n);
    let mut integrals = Vec::with_capacity(n);
    for (i, &y) in ys.iter().enumerate() {
        let v = autocorr_integral(y, mu, 1e-10)?;
        integrals.push(v);
        a[(i, 0)] = 1.0;
        a[(i, 1)] = y.ln();
        a[(i, 2)] = (y - 1.0).ln();
        b[i] = (glauber_exact(y)? / v).ln();
    }
    let x = a.clone().svd(true, true).solve(&b, 1e-12).map_err(|e| Error::Accuracy(e.to_string()))?;
    let resid = &a * &x - &b;
    let max_deviation = resid.iter().map(|r| (r.exp() - 1.0).abs()).fold(0.0, f64::max);
    let lit = 2.0 / std::f64::consts::PI.sqrt();
    let ratios: Vec<f64> = ys.iter().zip(&integrals).map(|(&y, &v)| lit * v / glauber_exact(y).unwrap()).collect();
    let (lo, hi) = ratios.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(l, h), &r| (l.min(r), h.max(r)));
    Ok(ShapeMatch {
        mu,
        c0: x[0].exp(),
        a_y: x[1],
        a_y1: x[2],
        max_deviation,
        literal_max_deviation: ratios.iter().map(|r| (r - 1.0).abs()).fold(0.0, f64::max),
        literal_ratio_range: (lo, hi),
    })
}
