use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};

/// Periodic Ising chain under zero-temperature Glauber dynamics.
pub struct SpinChainState {
    pub spins: Vec<i8>,
    /// Sweeps elapsed; one sweep is `N` attempted single-site updates.
    pub time: u64,
    rng: ChaCha8Rng,
    pub snapshots: Vec<(u64, Vec<i8>)>,
}

impl SpinChainState {
    /// Random ±1 initial condition drawn from `(seed, stream)`.
    pub fn new(n: usize, seed: u64, stream: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream);
        let spins = (0..n).map(|_| if rng.gen::<bool>() { 1 } else { -1 }).collect();
        SpinChainState { spins, time: 0, rng, snapshots: Vec::new() }
    }

    /// Heat-bath update at `T = 0`: align with the neighbour majority, flip a
    /// fair coin on a tie.
    pub fn sweep(&mut self) {
        let n = self.spins.len();
        for _ in 0..n {
            let i = self.rng.gen_range(0..n);
            let h = self.spins[(i + n - 1) % n] + self.spins[(i + 1) % n];
            self.spins[i] = match h {
                0 => {
                    if self.rng.gen::<bool>() {
                        1
                    } else {
                        -1
                    }
                }
                h => h.signum(),
            };
        }
        self.time += 1;
    }

    pub fn snapshot(&mut self) {
        if self.snapshots.last().map_or(true, |(t, _)| *t < self.time) {
            self.snapshots.push((self.time, self.spins.clone()));
        }
    }

    /// `(1/N) Σ σ_i(now) σ_i(s)` against the stored configuration at `s`.
    pub fn overlap(&self, s: u64) -> Option<f64> {
        let (_, old) = self.snapshots.iter().find(|(t, _)| *t == s)?;
        let sum: i64 = self.spins.iter().zip(old).map(|(a, b)| (*a as i64) * (*b as i64)).sum();
        Some(sum as f64 / self.spins.len() as f64)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct GlauberPoint {
    pub s: u64,
    pub t: u64,
    pub y: f64,
    pub c: f64,
    pub stderr: f64,
    pub c_exact: f64,
}

/// Autocorrelation `C(t, s)` averaged over independent replicas.
///
/// `t = round(y·s)` in sweeps; the reported `y` is `t/s`.
pub fn glauber_run(n: usize, s_list: &[u64], y_list: &[f64], seed: u64, replicas: usize) -> Result<Vec<GlauberPoint>> {
    if n < 10_000 {
        return Err(Error::Usage(format!("chain length {} is below 10^4", n)));
    }
    if replicas == 0 || s_list.is_empty() || y_list.is_empty() {
        return Err(Error::Usage("need at least one replica, waiting time and ratio".into()));
    }
    let mut pairs = Vec::new();
    for &s in s_list {
        if s == 0 {
            return Err(Error::Usage("waiting time must be positive".into()));
        }
        for &y in y_list {
            if !(y >= 1.0) {
                return Err(Error::Usage(format!("t < s for y = {}", y)));
            }
            pairs.push((s, (y * s as f64).round() as u64));
        }
    }
    let mut waits: Vec<u64> = s_list.to_vec();
    waits.sort_unstable();
    waits.dedup();
    let t_end = pairs.iter().map(|p| p.1).max().unwrap_or(0);

    let per_replica: Vec<Vec<f64>> = (0..replicas as u64)
        .into_par_iter()
        .map(|r| {
            let mut st = SpinChainState::new(n, seed, r);
            let mut out = vec![0.0; pairs.len()];
            loop {
                if waits.binary_search(&st.time).is_ok() {
                    st.snapshot();
                }
                for (k, &(s, t)) in pairs.iter().enumerate() {
                    if t == st.time {
                        out[k] = st.overlap(s).expect("snapshot taken before t");
                    }
                }
                if st.time >= t_end {
                    break;
                }
                st.sweep();
            }
            out
        })
        .collect();

    let rf = replicas as f64;
    Ok(pairs
        .iter()
        .enumerate()
        .map(|(k, &(s, t))| {
            let mean = per_replica.iter().map(|v| v[k]).sum::<f64>() / rf;
            let stderr = if replicas > 1 {
                let var = per_replica.iter().map(|v| (v[k] - mean).powi(2)).sum::<f64>() / (rf - 1.0);
                (var / rf).sqrt()
            } else {
                0.0
            };
            let y = t as f64 / s as f64;
            let c_exact = if y > 1.0 { glauber_exact(y).unwrap_or(f64::NAN) } else { 1.0 };
            GlauberPoint { s, t, y, c: mean, stderr, c_exact }
        })
        .collect())
}

/// Scaling form `C = (2/π) arctan √(2/(y − 1))` of the zero-temperature chain.
pub fn glauber_exact(y: f64) -> Result<f64> {
    if !(y > 1.0) {
        return Err(Error::Usage(format!("need y > 1, got {}", y)));
    }
    Ok(std::f64::consts::FRAC_2_PI * (2.0 / (y - 1.0)).sqrt().atan())
}

/// Response `R(t, s) = 1/(√2 π √(s(t − s)))`.
pub fn glauber_exact_r(t: f64, s: f64) -> Result<f64> {
    if !(s > 0.0 && t > s) {
        return Err(Error::Usage(format!("need t > s > 0, got t = {}, s = {}", t, s)));
    }
    Ok(1.0 / (std::f64::consts::SQRT_2 * std::f64::consts::PI * (s * (t - s)).sqrt()))
}
