use std::collections::HashMap;
use std::sync::Arc;

use rustfft::num_complex::Complex64;
use rustfft::{Fft, FftPlanner};
use serde::Serialize;

use super::bessel::bessel_i_scaled;
use crate::error::{Error, Result};

/// Memory kernel `f(t) = d · e^{−4t}I_1(4t)/(4t) · (e^{−4t}I_0(4t))^{d−1}`.
pub fn arcetri_kernel(d: u32, t: f64) -> f64 {
    let u = 4.0 * t;
    let s1 = if u < 1e-8 { 0.5 - 0.5 * u } else { bessel_i_scaled(1, u) / u };
    d as f64 * s1 * bessel_i_scaled(0, u).powi(d as i32 - 1)
}

/// Solution of `d·g(t) = 2f(t) + 2T ∫_0^t f(t − τ) g(τ) dτ` on a uniform grid.
#[derive(Clone, Debug, Serialize)]
pub struct VolterraGrid {
    pub d: u32,
    pub temperature: f64,
    pub h: f64,
    pub t_max: f64,
    #[serde(skip)]
    pub f: Vec<f64>,
    #[serde(skip)]
    pub g: Vec<f64>,
}

impl VolterraGrid {
    pub fn t(&self, i: usize) -> f64 {
        i as f64 * self.h
    }

    pub fn g_end(&self) -> f64 {
        *self.g.last().unwrap()
    }

    fn index(&self, t: f64) -> usize {
        ((t / self.h).round() as usize).min(self.g.len() - 1)
    }

    /// `d ln g / dt` from the last tenth of the grid.
    pub fn late_log_derivative(&self) -> f64 {
        let (a, b) = (self.index(0.9 * self.t_max), self.g.len() - 1);
        let (ga, gb) = (self.g[a], self.g[b]);
        if !gb.is_finite() || !ga.is_finite() {
            return f64::INFINITY;
        }
        if ga <= 0.0 || gb <= 0.0 {
            return f64::NAN;
        }
        (gb.ln() - ga.ln()) / (self.t(b) - self.t(a))
    }

    /// Local power-law exponent `d ln g / d ln t` between `t` and `2t`.
    pub fn local_exponent(&self, t: f64) -> f64 {
        let (a, b) = (self.index(t), self.index(2.0 * t));
        (self.g[b].ln() - self.g[a].ln()) / (self.t(b) / self.t(a)).ln()
    }

    /// Least-squares slope and coefficient of determination of `ln g` against
    /// `t` over `[t0, t_max]`.
    pub fn log_linear_fit(&self, t0: f64) -> (f64, f64) {
        let pts: Vec<(f64, f64)> = (self.index(t0)..self.g.len()).map(|i| (self.t(i), self.g[i].ln())).collect();
        let n = pts.len() as f64;
        let (mx, my) = (pts.iter().map(|p| p.0).sum::<f64>() / n, pts.iter().map(|p| p.1).sum::<f64>() / n);
        let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
        let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
        let syy: f64 = pts.iter().map(|p| (p.1 - my).powi(2)).sum();
        let slope = sxy / sxx;
        (slope, sxy * sxy / (sxx * syy))
    }
}

fn steps(h: f64, t_max: f64) -> Result<usize> {
    if !(h > 0.0 && t_max > 0.0) {
        return Err(Error::Usage("step and horizon must be positive".into()));
    }
    let n = (t_max / h).round();
    if (n * h - t_max).abs() > 1e-9 * t_max {
        return Err(Error::Usage(format!("t_max = {} is not a multiple of h = {}", t_max, h)));
    }
    Ok(n as usize)
}

/// Trapezoidal discretization without the step-halving check.
pub fn arcetri_grid(d: u32, temperature: f64, h: f64, t_max: f64) -> Result<VolterraGrid> {
    let n = steps(h, t_max)?;
    if d == 0 {
        return Err(Error::Usage("dimension must be positive".into()));
    }
    let f: Vec<f64> = (0..=n).map(|i| arcetri_kernel(d, i as f64 * h)).collect();
    let g = Solver::new(&f, d as f64, temperature, h).run();
    Ok(VolterraGrid { d, temperature, h, t_max, f, g })
}

/// Solves on `h` and `h/2` and requires `g(t_max)` to agree to `10^{-6}`.
pub fn arcetri_solve(d: u32, temperature: f64, h: f64, t_max: f64) -> Result<VolterraGrid> {
    let coarse = arcetri_grid(d, temperature, h, t_max)?;
    let fine = arcetri_grid(d, temperature, h / 2.0, t_max)?;
    let diff = (coarse.g_end() - fine.g_end()).abs();
    if !(diff < 1e-6) {
        return Err(Error::Accuracy(format!("halving h = {} changes g(t_max) by {:e}", h, diff)));
    }
    Ok(coarse)
}

/// Observed order `log2(|g_h − g_{h/2}| / |g_{h/2} − g_{h/4}|)` at `t_max`.
pub fn step_halving_order(d: u32, temperature: f64, h: f64, t_max: f64) -> Result<f64> {
    let a = arcetri_grid(d, temperature, h, t_max)?.g_end();
    let b = arcetri_grid(d, temperature, h / 2.0, t_max)?.g_end();
    let c = arcetri_grid(d, temperature, h / 4.0, t_max)?.g_end();
    Ok(((a - b).abs() / (b - c).abs()).log2())
}

const BLOCK: usize = 64;
const OVERFLOW: f64 = 1e250;

/// Online convolution by divide and conquer: the history sum
/// `S_m = Σ_{k=1}^{m−1} f_{m−k} g_k` is split into FFT-sized blocks.
struct Solver<'a> {
    f: &'a [f64],
    g: Vec<f64>,
    acc: Vec<f64>,
    d: f64,
    temp: f64,
    h: f64,
    planner: FftPlanner<f64>,
    plans: HashMap<usize, (Arc<dyn Fft<f64>>, Arc<dyn Fft<f64>>)>,
    stop: Option<usize>,
}

impl<'a> Solver<'a> {
    fn new(f: &'a [f64], d: f64, temp: f64, h: f64) -> Self {
        let n = f.len();
        Solver {
            f,
            g: vec![0.0; n],
            acc: vec![0.0; n],
            d,
            temp,
            h,
            planner: FftPlanner::new(),
            plans: HashMap::new(),
            stop: None,
        }
    }

    fn run(mut self) -> Vec<f64> {
        let n = self.f.len();
        self.g[0] = 2.0 * self.f[0] / self.d;
        if n > 1 {
            self.solve(1, n);
        }
        if let Some(m) = self.stop {
            for v in &mut self.g[m..] {
                *v = f64::INFINITY;
            }
        }
        self.g
    }

    fn step(&mut self, m: usize) {
        let (f, th) = (self.f, self.temp * self.h);
        let num = 2.0 * f[m] + 2.0 * th * (0.5 * f[m] * self.g[0] + self.acc[m]);
        self.g[m] = num / (self.d - th * f[0]);
        if !(self.g[m].abs() < OVERFLOW) && self.stop.is_none() {
            self.stop = Some(m);
        }
    }

    fn solve(&mut self, l: usize, r: usize) {
        if self.stop.is_some() {
            return;
        }
        if r - l <= BLOCK {
            for m in l..r {
                let mut s = 0.0;
                for k in l..m {
                    s += self.f[m - k] * self.g[k];
                }
                self.acc[m] += s;
                self.step(m);
            }
            return;
        }
        let mid = (l + r) / 2;
        self.solve(l, mid);
        if self.stop.is_some() {
            return;
        }
        // contribution of g[l..mid) to acc[mid..r)
        let la = mid - l;
        let lf = r - l;
        let size = (la + lf).next_power_of_two();
        let (fwd, inv) = self.plan(size);
        let mut a: Vec<Complex64> = (0..size).map(|i| Complex64::new(if i < la { self.g[l + i] } else { 0.0 }, 0.0)).collect();
        let mut b: Vec<Complex64> = (0..size).map(|i| Complex64::new(if i < lf { self.f[i] } else { 0.0 }, 0.0)).collect();
        fwd.process(&mut a);
        fwd.process(&mut b);
        for (x, y) in a.iter_mut().zip(&b) {
            *x *= y;
        }
        inv.process(&mut a);
        let scale = 1.0 / size as f64;
        for m in mid..r {
            self.acc[m] += a[m - l].re * scale;
        }
        self.solve(mid, r);
    }

    fn plan(&mut self, size: usize) -> (Arc<dyn Fft<f64>>, Arc<dyn Fft<f64>>) {
        let planner = &mut self.planner;
        self.plans
            .entry(size)
            .or_insert_with(|| (planner.plan_fft_forward(size), planner.plan_fft_inverse(size)))
            .clone()
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct TcEstimate {
    pub d: u32,
    /// Extrapolation `(4T_{h/2} − T_h)/3` of the bisected values.
    pub estimate: f64,
    /// Bisected values on steps `h` and `h/2`.
    pub coarse: f64,
    pub fine: f64,
    /// Final bracket on the fine grid.
    pub lo: f64,
    pub hi: f64,
    pub h: f64,
    pub t_max: f64,
    /// `d ln g / d ln t` at the fine value over `[t_max/4, t_max/2]`.
    pub local_exponent: f64,
}

/// Grid used by the critical-temperature search.
pub fn tc_grid(d: u32) -> (f64, f64) {
    match d {
        1 => (1.0 / 16.0, 20_000.0),
        _ => (1.0 / 16.0, 2_000.0),
    }
}

fn bisect(d: u32, h: f64, t_max: f64, tol: f64) -> Result<(f64, f64)> {
    let grows = |temp: f64| -> Result<bool> {
        let s = arcetri_grid(d, temp, h, t_max)?.late_log_derivative();
        if s.is_nan() {
            return Err(Error::Accuracy(format!("g changes sign at T = {}", temp)));
        }
        Ok(s > 0.0)
    };
    let (mut lo, mut hi) = (0.0, 20.0);
    if grows(lo)? || !grows(hi)? {
        return Err(Error::Config(format!("no growth/decay bracket in [{}, {}]", lo, hi)));
    }
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if grows(mid)? {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok((lo, hi))
}

/// Bisection on the sign of the late-time logarithmic derivative of `g` on
/// steps `h` and `h/2`, followed by Richardson extrapolation in `h²`.
pub fn arcetri_tc(d: u32, tol: f64) -> Result<TcEstimate> {
    if !(1..=3).contains(&d) {
        return Err(Error::Usage(format!("dimension {} not in 1..=3", d)));
    }
    if !(tol > 0.0) {
        return Err(Error::Usage("tolerance must be positive".into()));
    }
    let (h, t_max) = tc_grid(d);
    let (a_lo, a_hi) = bisect(d, h, t_max, tol / 4.0)?;
    let (lo, hi) = bisect(d, h / 2.0, t_max, tol / 4.0)?;
    let (coarse, fine) = (0.5 * (a_lo + a_hi), 0.5 * (lo + hi));
    let grid = arcetri_grid(d, fine, h / 2.0, t_max)?;
    Ok(TcEstimate {
        d,
        estimate: (4.0 * fine - coarse) / 3.0,
        coarse,
        fine,
        lo,
        hi,
        h,
        t_max,
        local_exponent: grid.local_exponent(t_max / 4.0),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn direct(f: &[f64], d: f64, temp: f64, h: f64) -> Vec<f64> {
        let mut g = vec![2.0 * f[0] / d];
        for m in 1..f.len() {
            let s: f64 = (1..m).map(|k| f[m - k] * g[k]).sum();
            let num = 2.0 * f[m] + 2.0 * temp * h * (0.5 * f[m] * g[0] + s);
            g.push(num / (d - temp * h * f[0]));
        }
        g
    }

    #[test]
    fn blocked_convolution_matches_direct_sums() {
        for (d, temp) in [(1, 1.5), (2, 6.0), (3, 0.7)] {
            let f: Vec<f64> = (0..1500).map(|i| arcetri_kernel(d, i as f64 * 0.05)).collect();
            let a = Solver::new(&f, d as f64, temp, 0.05).run();
            let b = direct(&f, d as f64, temp, 0.05);
            for (x, y) in a.iter().zip(&b) {
                assert!((x - y).abs() <= 1e-11 * y.abs().max(1e-3), "{} vs {}", x, y);
            }
        }
    }
}
