//! Numerical reproductions: zero-temperature Glauber chain, the Volterra
//! equation of the spherical model, the autocorrelator integral, lattice
//! propagators, causality by Fourier reconstruction, and assorted bounds.

mod arcetri;
mod autocorr;
mod bessel;
mod causality;
mod glauber;
mod hardy;
mod lattice;
mod ode;

pub use arcetri::{arcetri_grid, arcetri_kernel, arcetri_solve, arcetri_tc, step_halving_order, tc_grid, TcEstimate, VolterraGrid};
pub use autocorr::{autocorr_c, autocorr_integral, shape_match, ShapeMatch};
pub use bessel::bessel_i_scaled;
pub use causality::{causal_reconstruct, CausalParams, CausalityGrid, CausalityReport, ProfilePoint};
pub use glauber::{glauber_exact, glauber_exact_r, glauber_run, GlauberPoint, SpinChainState};
pub use hardy::{hardy_bound, holography_kernel, HardyBound};
pub use lattice::{heat_kernel, lattice_2pt, lattice_2pt_dt, lattice_residual};
pub use ode::{ode_f, OdeSolution};
