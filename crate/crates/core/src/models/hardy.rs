use num_complex::Complex64;
use quadrature::double_exponential;
use serde::Serialize;
use statrs::function::gamma::gamma;

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, Serialize)]
pub struct HardyBound {
    pub xi: f64,
    pub quadrature: f64,
    pub closed_form: f64,
}

/// `∫_ℝ du (u² + (v + λ)²)^{−2ξ}` by quadrature, next to
/// `√π Γ(2ξ − 1/2)/Γ(2ξ) · |v + λ|^{1 − 4ξ}`.
pub fn hardy_bound(xi: f64, lambda: f64, v: f64) -> Result<HardyBound> {
    if !(xi > 0.25) {
        return Err(Error::Divergence(format!("the line integral diverges for ξ = {} ≤ 1/4", xi)));
    }
    if lambda == 0.0 || !(v > 0.0) {
        return Err(Error::Usage("need λ ≠ 0 and v > 0".into()));
    }
    let a = (v + lambda).abs();
    if a == 0.0 {
        return Err(Error::Singular("v + λ = 0".into()));
    }
    // u = a tan θ
    let p = 4.0 * xi - 2.0;
    let closed_form = std::f64::consts::PI.sqrt() * gamma(2.0 * xi - 0.5) / gamma(2.0 * xi) * a.powf(1.0 - 4.0 * xi);
    let half = std::f64::consts::FRAC_PI_2;
    let out = double_exponential::integrate(|th: f64| th.cos().powf(p), -half, half, 1e-12);
    Ok(HardyBound { xi, quadrature: out.integral * a.powf(1.0 - 4.0 * xi), closed_form })
}

/// `[4Z / (−2ζt + r²)]^α` on the principal branch.
pub fn holography_kernel(z: f64, zeta: f64, t: f64, r: f64, alpha: f64) -> Result<Complex64> {
    let den = -2.0 * zeta * t + r * r;
    if den == 0.0 {
        return Err(Error::Singular("−2ζt + r² = 0".into()));
    }
    if alpha == 0.0 {
        return Ok(Complex64::new(1.0, 0.0));
    }
    Ok(Complex64::new(4.0 * z / den, 0.0).powf(alpha))
}
