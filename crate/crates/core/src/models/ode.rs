use ode_solvers::{DVector, Dopri5, System};
use serde::Serialize;

use crate::error::{Error, Result};

/// `f^{(n−1)}(y) + M y f(y) = 0` as a first-order system.
struct Reduced {
    order: usize,
    mass: f64,
}

impl System<f64, DVector<f64>> for Reduced {
    fn system(&self, y: f64, s: &DVector<f64>, ds: &mut DVector<f64>) {
        for k in 0..self.order - 1 {
            ds[k] = s[k + 1];
        }
        ds[self.order - 1] = -self.mass * y * s[0];
    }

    fn solout(&mut self, _y: f64, s: &DVector<f64>, _ds: &DVector<f64>) -> bool {
        !(s[0].abs() < 1e100)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct OdeSolution {
    pub n: u32,
    pub mass: f64,
    pub y: Vec<f64>,
    pub f: Vec<f64>,
    /// Max over interior grid points of `|f^{(n−1)} + M y f|`, with the
    /// derivative taken by an eighth-order central difference of the samples,
    /// relative to `max |f|`.
    pub residual: f64,
    pub decays: bool,
    /// Where the solution left `|f| < 10^{100}`, if it did.
    pub blow_up: Option<f64>,
}

/// Integrates from `y = 0` with initial data `(f, f′, …, f^{(n−2)})` and
/// samples on the uniform grid `0, dy, …, y_end`.
pub fn ode_f(n: u32, mass: f64, init: &[f64], y_end: f64, dy: f64) -> Result<OdeSolution> {
    if n < 2 {
        return Err(Error::Usage("order n must be at least 2".into()));
    }
    let order = (n - 1) as usize;
    if init.len() != order {
        return Err(Error::Usage(format!("need {} initial values, got {}", order, init.len())));
    }
    if !(dy > 0.0 && y_end > dy) {
        return Err(Error::Usage("grid must have positive spacing and extent".into()));
    }
    let sys = Reduced { order, mass };
    let mut solver = Dopri5::new(sys, 0.0, y_end, dy, DVector::from_row_slice(init), 1e-13, 1e-15);
    let blown = solver.integrate().is_err();
    let (ys, states) = solver.results().get();
    let y: Vec<f64> = ys.clone();
    let f: Vec<f64> = states.iter().map(|s| s[0]).collect();
    let blow_up = if blown || f.iter().any(|v| !(v.abs() < 1e100)) || (y.last().copied().unwrap_or(0.0) < y_end - dy / 2.0) {
        y.iter().zip(&f).find(|(_, v)| !(v.abs() < 1e100)).map(|(y, _)| *y).or(y.last().copied())
    } else {
        None
    };
    let scale = f.iter().fold(0.0f64, |m, v| m.max(v.abs())).max(f64::MIN_POSITIVE);
    let residual = if blow_up.is_none() { fd_residual(&y, &f, order, mass, dy) / scale } else { f64::NAN };
    let cut = f.len() - (f.len() / 10).max(1);
    let peak = |xs: &[f64]| xs.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let decays = blow_up.is_none() && peak(&f[cut..]) < 0.999 * peak(&f[..cut]);
    Ok(OdeSolution { n, mass, y, f, residual, decays, blow_up })
}

fn fd_residual(y: &[f64], f: &[f64], order: usize, mass: f64, dy: f64) -> f64 {
    let mut w = first_derivative_weights();
    for _ in 1..order {
        w = convolve(&w, &first_derivative_weights());
    }
    let half = (w.len() - 1) / 2;
    let hk = dy.powi(order as i32);
    let mut worst = 0.0f64;
    for i in half..f.len().saturating_sub(half) {
        let d: f64 = w.iter().enumerate().map(|(j, c)| c * f[i + j - half]).sum::<f64>() / hk;
        worst = worst.max((d + mass * y[i] * f[i]).abs());
    }
    worst
}

/// Eighth-order central first-derivative stencil.
fn first_derivative_weights() -> Vec<f64> {
    let c = [1.0 / 280.0, -4.0 / 105.0, 1.0 / 5.0, -4.0 / 5.0, 0.0, 4.0 / 5.0, -1.0 / 5.0, 4.0 / 105.0, -1.0 / 280.0];
    c.to_vec()
}

fn convolve(a: &[f64], b: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}
