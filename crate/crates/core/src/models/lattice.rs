use super::bessel::bessel_i_scaled;
use crate::error::{Error, Result};

/// `Φ(t, n) = t^{1/2 − x1} e^{−t} I_n(t)`.
pub fn lattice_2pt(t: f64, n: i32, x1: f64) -> Result<f64> {
    if !(t > 0.0) {
        return Err(Error::Usage(format!("need t > 0, got {}", t)));
    }
    Ok(t.powf(0.5 - x1) * bessel_i_scaled(n, t))
}

/// `∂_t Φ` through `I_n′ = (I_{n−1} + I_{n+1})/2`.
pub fn lattice_2pt_dt(t: f64, n: i32, x1: f64) -> Result<f64> {
    let phi = lattice_2pt(t, n, x1)?;
    let pre = t.powf(0.5 - x1);
    let di = 0.5 * (bessel_i_scaled(n - 1, t) + bessel_i_scaled(n + 1, t));
    Ok((0.5 - x1) / t * phi - phi + pre * di)
}

/// `2∂_tΦ − (Φ_{n+1} + Φ_{n−1} − 2Φ_n)`; zero at `x1 = 1/2`.
pub fn lattice_residual(t: f64, n: i32, x1: f64) -> Result<f64> {
    let lap = lattice_2pt(t, n + 1, x1)? + lattice_2pt(t, n - 1, x1)? - 2.0 * lattice_2pt(t, n, x1)?;
    Ok(2.0 * lattice_2pt_dt(t, n, x1)? - lap)
}

/// Continuum profile `t^{−x1} e^{−n²/(2t)} / √(2π)` at unit mass.
pub fn heat_kernel(t: f64, n: f64, x1: f64) -> f64 {
    t.powf(-x1) * (-n * n / (2.0 * t)).exp() / (2.0 * std::f64::consts::PI).sqrt()
}
