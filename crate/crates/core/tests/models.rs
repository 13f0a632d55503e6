use dynsym::exprfn::FormId;
use dynsym::models::*;
use dynsym::Error;
use proptest::prelude::*;

#[test]
fn bessel_special_values() {
    assert_eq!(bessel_i_scaled(0, 0.0), 1.0);
    assert_eq!(bessel_i_scaled(1, 0.0), 0.0);
    let s: f64 = (-40..=40).map(|n| bessel_i_scaled(n, 4.0)).sum();
    assert!((s - 1.0).abs() < 1e-12, "{}", s);
    assert!((bessel_i_scaled(-3, 2.5) - bessel_i_scaled(3, 2.5)).abs() == 0.0);
}

proptest! {
    #[test]
    fn bessel_recurrence(n in 1i32..=20, x in 0.01f64..100.0) {
        let lhs = bessel_i_scaled(n - 1, x) - bessel_i_scaled(n + 1, x);
        let rhs = 2.0 * n as f64 / x * bessel_i_scaled(n, x);
        prop_assert!((lhs - rhs).abs() <= 1e-10 * bessel_i_scaled(n - 1, x), "{} vs {}", lhs, rhs);
    }

    #[test]
    fn lattice_satisfies_discrete_diffusion(t in 0.05f64..200.0, n in -30i32..30) {
        let r = lattice_residual(t, n, 0.5).unwrap();
        prop_assert!(r.abs() < 1e-10, "{:e}", r);
    }

    #[test]
    fn holography_kernel_is_homogeneous(z in 0.1f64..5.0, zeta in -3.0f64..3.0, t in 0.1f64..4.0,
                                         r in -3.0f64..3.0, alpha in -2.0f64..2.0, b in 0.2f64..5.0) {
        prop_assume!((-2.0 * zeta * t + r * r).abs() > 1e-3);
        let a = holography_kernel(b * z, zeta, b * b * t, b * r, alpha).unwrap();
        let c = holography_kernel(z, zeta, t, r, alpha).unwrap() * b.powf(-alpha);
        prop_assert!((a - c).norm() <= 1e-12 * c.norm());
    }
}

#[test]
fn glauber_closed_forms() {
    assert!((glauber_exact(3.0).unwrap() - 0.5).abs() < 1e-15);
    let y2 = std::f64::consts::FRAC_2_PI * 2f64.sqrt().atan();
    assert!((glauber_exact(2.0).unwrap() - y2).abs() < 1e-15);
    assert!((y2 - 0.6082).abs() < 1e-4);
    let y = 1e4f64;
    let asym = std::f64::consts::FRAC_2_PI * (2.0 / y).sqrt();
    assert!((glauber_exact(y).unwrap() / asym - 1.0).abs() < 1e-3);
    let r = glauber_exact_r(50.0, 25.0).unwrap();
    assert!((r - 1.0 / (2f64.sqrt() * std::f64::consts::PI * 25.0)).abs() < 1e-17);
    assert!((r - 9.0032e-3).abs() < 1e-7);
    assert!(matches!(glauber_exact(1.0), Err(Error::Usage(_))));
    assert!(matches!(glauber_exact_r(1.0, 2.0), Err(Error::Usage(_))));
}

#[test]
fn glauber_equal_times_and_ordering() {
    let pts = glauber_run(10_000, &[10], &[1.0, 1.5, 2.0, 4.0], 7, 4).unwrap();
    assert_eq!(pts[0].c, 1.0);
    assert_eq!(pts[0].stderr, 0.0);
    for w in pts.windows(2) {
        let sigma = (w[0].stderr.powi(2) + w[1].stderr.powi(2)).sqrt();
        assert!(w[1].c <= w[0].c + 3.0 * sigma, "{:?}", w);
    }
    let again = glauber_run(10_000, &[10], &[1.0, 1.5, 2.0, 4.0], 7, 4).unwrap();
    assert_eq!(pts.iter().map(|p| p.c).collect::<Vec<_>>(), again.iter().map(|p| p.c).collect::<Vec<_>>());
    assert!(matches!(glauber_run(10_000, &[10], &[0.5], 1, 1), Err(Error::Usage(_))));
    assert!(matches!(glauber_run(100, &[10], &[2.0], 1, 1), Err(Error::Usage(_))));
}

#[test]
fn spin_chain_stays_binary() {
    let mut st = SpinChainState::new(10_000, 3, 0);
    for _ in 0..5 {
        st.sweep();
        st.snapshot();
    }
    assert!(st.spins.iter().all(|s| *s == 1 || *s == -1));
    assert!(st.snapshots.windows(2).all(|w| w[0].0 < w[1].0));
    assert_eq!(st.overlap(5), Some(1.0));
}

#[test]
fn volterra_initial_value_and_zero_temperature() {
    for d in 1..=3 {
        for temp in [0.0, 1.0, 5.0] {
            let g = arcetri_grid(d, temp, 0.05, 5.0).unwrap();
            assert!((g.g[0] - 1.0).abs() < 1e-12);
            if temp == 0.0 {
                for (gi, fi) in g.g.iter().zip(&g.f) {
                    assert_eq!(*gi, 2.0 * fi / d as f64);
                }
            }
        }
    }
}

#[test]
fn volterra_growth_above_criticality() {
    // 2T f̂(p) = 1 with f̂(p) = (1/4)(S − √(S² − 1)), S = 1 + p/4, gives p = 1/3 at T = 3
    let g = arcetri_grid(1, 3.0, 1.0 / 32.0, 60.0).unwrap();
    let (slope, r2) = g.log_linear_fit(20.0);
    assert!((slope - 1.0 / 3.0).abs() < 0.01 / 3.0, "{}", slope);
    assert!(r2 > 0.9999, "{}", r2);
}

#[test]
fn volterra_is_second_order() {
    let order = step_halving_order(1, 1.0, 0.1, 5.0).unwrap();
    assert!(order >= 1.9, "{}", order);
    let order = step_halving_order(2, 4.0, 0.1, 5.0).unwrap();
    assert!(order >= 1.9, "{}", order);
    assert!(arcetri_solve(1, 1.0, 1.0 / 256.0, 4.0).is_ok());
    assert!(matches!(arcetri_solve(1, 1.0, 0.5, 4.0), Err(Error::Accuracy(_))));
}

#[test]
fn autocorrelator_quadrature() {
    let a = autocorr_integral(3.0, -0.25, 1e-8).unwrap();
    let b = autocorr_integral(3.0, -0.25, 5e-9).unwrap();
    assert!((a - b).abs() < 1e-6 * a);
    assert!(matches!(autocorr_integral(3.0, -0.5, 1e-8), Err(Error::Divergence(_))));
    // at μ = 0 the integrand is 1
    assert!((autocorr_integral(4.0, 0.0, 1e-10).unwrap() - 1.0).abs() < 1e-10);
}

#[test]
fn autocorrelator_matched_slope() {
    let ys: Vec<f64> = (0..40).map(|i| 1.5 + 8.5 * i as f64 / 39.0).collect();
    let m = shape_match(-0.25, &ys).unwrap();
    let c = |y: f64| autocorr_c(y, -0.25, m.c0, m.a_y, m.a_y1).unwrap();
    let slope = (c(1.1e4).ln() - c(1e4).ln()) / 1.1f64.ln();
    assert!((slope + 0.5).abs() < 0.01, "{}", slope);
}

#[test]
fn lattice_sum_rule_and_continuum_limit() {
    let x1 = 0.3;
    let s: f64 = (-40..=40).map(|n| lattice_2pt(4.0, n, x1).unwrap()).sum();
    assert!((s - 4f64.powf(0.5 - x1)).abs() < 1e-10);
    let t = 1000.0f64;
    for ratio in [0.0, 0.5, 1.0, 2.0, 4.0] {
        let n = (ratio * t).sqrt().round();
        let a = lattice_2pt(t, n as i32, x1).unwrap();
        let b = heat_kernel(t, n, x1);
        assert!((a / b - 1.0).abs() < 0.01, "n = {}: {} vs {}", n, a, b);
    }
}

#[test]
fn hardy_bound_values() {
    let h = hardy_bound(0.5, 0.5, 0.5).unwrap();
    assert!((h.closed_form - std::f64::consts::PI).abs() < 1e-12);
    assert!((h.quadrature - std::f64::consts::PI).abs() < 1e-8);
    let h = hardy_bound(1.0, 1.0, 1.0).unwrap();
    assert!((h.closed_form - std::f64::consts::PI / 16.0).abs() < 1e-12);
    assert!((h.quadrature - h.closed_form).abs() < 1e-8);
    for xi in [0.5, 0.75, 1.0, 2.0] {
        let vals: Vec<f64> = [0.01, 0.1, 1.0, 10.0].iter().map(|&v| hardy_bound(xi, 0.3, v).unwrap().closed_form).collect();
        assert!(vals.windows(2).all(|w| w[1] <= w[0]));
    }
    assert!(matches!(hardy_bound(0.25, 1.0, 1.0), Err(Error::Divergence(_))));
}

#[test]
fn holography_kernel_values() {
    assert_eq!(holography_kernel(1.0, 0.3, 2.0, 1.0, 0.0).unwrap().re, 1.0);
    let v = holography_kernel(1.0, 1.0, 1.0, 1.0, 0.5).unwrap();
    // 4/(−1) on the principal branch
    assert!((v.re).abs() < 1e-15 && (v.im - 2.0).abs() < 1e-15);
    assert!(matches!(holography_kernel(1.0, 0.5, 1.0, 1.0, 1.0), Err(Error::Singular(_))));
    use dynsym::structure::indicial_exponents;
    use num_rational::BigRational;
    for (n, d) in [(3, 2), (1, 3), (-2, 5), (7, 1)] {
        let x = BigRational::new(n.into(), d.into());
        let [a, b] = indicial_exponents(&x).unwrap();
        assert_eq!(a + b, BigRational::from_integer(3.into()));
    }
}

/// Taylor-series stepping of `f^{(k)} = −M y f`, `k = n − 1`.
fn taylor_oracle(order: usize, mass: f64, init: &[f64], y_end: f64, dy: f64) -> Vec<f64> {
    let mut state = init.to_vec();
    let mut out = vec![state[0]];
    let steps = (y_end / dy).round() as usize;
    for i in 0..steps {
        let y0 = i as f64 * dy;
        // c_j = f^{(j)}(y0)/j!
        let mut c = vec![0.0; 60];
        let mut fact = 1.0;
        for (j, s) in state.iter().enumerate() {
            if j > 0 {
                fact *= j as f64;
            }
            c[j] = s / fact;
        }
        for j in 0..60 - order {
            // (j+k)!/j! c_{j+k} = −M (y0 c_j + c_{j−1})
            let rising: f64 = (j + 1..=j + order).map(|v| v as f64).product();
            let prev = if j > 0 { c[j - 1] } else { 0.0 };
            c[j + order] = -mass * (y0 * c[j] + prev) / rising;
        }
        let mut next = vec![0.0; order];
        for (k, nk) in next.iter_mut().enumerate() {
            let mut s = 0.0;
            for j in (k..60).rev() {
                let falling: f64 = (j - k + 1..=j).map(|v| v as f64).product();
                s += c[j] * falling * dy.powi((j - k) as i32);
            }
            *nk = s;
        }
        state = next;
        out.push(state[0]);
    }
    out
}

#[test]
fn reduced_ode_solutions() {
    let s = ode_f(2, 1.0, &[1.0], 5.0, 0.01).unwrap();
    for (y, f) in s.y.iter().zip(&s.f) {
        assert!((f - (-y * y / 2.0).exp()).abs() < 1e-10);
    }
    assert!(s.residual < 1e-10, "{:e}", s.residual);
    assert!(s.decays);

    let s = ode_f(3, 1.0, &[1.0, 0.0], 12.0, 0.02).unwrap();
    let oracle = taylor_oracle(2, 1.0, &[1.0, 0.0], 12.0, 0.02);
    assert_eq!(s.f.len(), oracle.len());
    for (a, b) in s.f.iter().zip(&oracle) {
        assert!((a - b).abs() < 1e-8, "{} vs {}", a, b);
    }
    assert!(s.residual < 1e-8, "{:e}", s.residual);

    let s = ode_f(2, 0.0, &[2.5], 3.0, 0.1).unwrap();
    assert!(s.f.iter().all(|v| (*v - 2.5).abs() < 1e-14));
    assert!(!s.decays);

    let s = ode_f(3, -1.0, &[1.0, 1.0], 60.0, 0.05).unwrap();
    assert!(s.blow_up.is_some());
}

#[test]
fn mass_dual_reconstruction_is_causal() {
    let p = CausalParams::default_for(FormId::DualSch2pt);
    let rep = causal_reconstruct(FormId::DualSch2pt, &p, &CausalityGrid::default_for(FormId::DualSch2pt)).unwrap();
    assert!(rep.leakage < 1e-3, "{:e}", rep.leakage);
    assert!(rep.profile_error < 1e-3, "{:e}", rep.profile_error);
    let mut bad = p.clone();
    bad.x = -0.5;
    assert!(causal_reconstruct(FormId::DualSch2pt, &bad, &CausalityGrid::default_for(FormId::DualSch2pt)).is_err());
    let mut bad = CausalParams::default_for(FormId::DualCga2pt);
    bad.xi = 0.25;
    assert!(matches!(
        causal_reconstruct(FormId::DualCga2pt, &bad, &CausalityGrid::default_for(FormId::DualCga2pt)),
        Err(Error::Divergence(_))
    ));
    assert!(matches!(causal_reconstruct(FormId::Sch2pt, &p, &CausalityGrid::default_for(FormId::Sch2pt)), Err(Error::Usage(_))));
}
