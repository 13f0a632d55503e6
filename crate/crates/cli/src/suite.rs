//! Named check collections. Every check has a stable id; suites run their
//! checks concurrently and report them sorted by id.

use dynsym::exprfn::{ward_generators, ward_residual, ward_setup, ClosedForm, FormId, FormParams, WardConfig};
use dynsym::models::{
    arcetri_grid, arcetri_tc, causal_reconstruct, glauber_exact, glauber_run, hardy_bound, heat_kernel, lattice_2pt,
    lattice_residual, ode_f, shape_match, step_halving_order, CausalParams, CausalityGrid,
};
use dynsym::opalg::{Param, ParamPoly, Var};
use dynsym::reps::{make_parabolic_n, make_rep, make_schrodinger_op, GenKey, RepId, RepParams};
use dynsym::structure::{
    casimir_c4, casimir_on_shell, check_dynamical_symmetry, check_lie_closure, check_parabolic, check_structure_constants,
    density_bracket, density_bracket_via_operator, indicial_exponents, CheckReport, ItemStatus,
};
use num_rational::BigRational;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

use crate::commands::tc_reference;
use crate::outcome::{to_value, CliError, Outcome, Table};

pub const SUITES: [&str; 5] = ["all", "algebra", "ward", "models", "causality"];

#[derive(Clone, Debug, Serialize)]
pub struct SuiteRow {
    pub id: String,
    pub relation: String,
    pub pass: bool,
    pub value: String,
    /// Informational rows document a finding and do not enter the verdict.
    pub informational: bool,
}

type Probe = fn() -> Result<(bool, String), CliError>;

struct Check {
    id: &'static str,
    suite: &'static str,
    relation: &'static str,
    informational: bool,
    probe: Probe,
}

const fn check(id: &'static str, suite: &'static str, relation: &'static str, probe: Probe) -> Check {
    Check { id, suite, relation, informational: false, probe }
}

const fn info(id: &'static str, suite: &'static str, relation: &'static str, probe: Probe) -> Check {
    Check { id, suite, relation, informational: true, probe }
}

const CHECKS: &[Check] = &[
    check("algebra.structure.sch", "algebra", "commutators of sch(d), d = 1..3", || structure_all(RepId::Sch, &[1, 2, 3])),
    check("algebra.structure.sv", "algebra", "commutators of sv on an index window", || structure_all(RepId::Sv, &[1, 2, 3])),
    check("algebra.structure.age", "algebra", "commutators of age(d), d = 1..3", || structure_all(RepId::Age, &[1, 2, 3])),
    check("algebra.structure.cga", "algebra", "commutators of cga(d), d = 1..3", || structure_all(RepId::Cga, &[1, 2, 3])),
    check("algebra.structure.ecga", "algebra", "commutators of the exotic cga(2)", || structure_all(RepId::Ecga, &[2])),
    check("algebra.structure.av", "algebra", "commutators of the infinite cga", || structure_all(RepId::Av, &[1])),
    check("algebra.structure.sv_gen", "algebra", "commutators of sv with two scaling dimensions", || {
        structure_all(RepId::SvGen, &[1])
    }),
    check("algebra.structure.dual_sch", "algebra", "commutators of the mass-dual representation", || {
        structure_all(RepId::DualSch, &[1, 2])
    }),
    check("algebra.structure.dual_cga", "algebra", "commutators of the rapidity-dual representation", || {
        structure_all(RepId::DualCga, &[1, 2])
    }),
    check("algebra.structure.bulk_sch", "algebra", "commutators of the bulk representation", || {
        structure_all(RepId::BulkSch, &[1])
    }),
    check("algebra.structure.lattice_sch", "algebra", "lattice sch(1) through order a^8", || {
        let mut p = RepParams::default();
        p.trunc = 8;
        structure_one(RepId::LatticeSch, &p)
    }),
    check("algebra.structure.conformal2d", "algebra", "Virasoro commutators of l_n, lbar_n", || {
        structure_all(RepId::Conformal2d, &[1])
    }),
    check("algebra.structure.nonlocal_age", "algebra", "z = n ageing commutators with the stated deviation", nonlocal_exceptions),
    check("algebra.structure.dual_nonlocal_age", "algebra", "commutators of the dual z = n representation", || {
        let mut all = (true, Vec::new());
        for n in 2..=4 {
            let mut p = RepParams::default();
            p.nonlocal_order = n;
            let (ok, v) = structure_one(RepId::DualNonlocalAge, &p)?;
            all.0 &= ok;
            all.1.push(format!("n={}: {}", n, v));
        }
        Ok((all.0, all.1.join("; ")))
    }),
    check("algebra.symmetry.sch_anomaly", "algebra", "[S, X_1] = -2t S + (2x-d) M_0, vanishing at x = d/2", sch_anomaly),
    check("algebra.symmetry.age", "algebra", "age is a dynamical symmetry for any x, xi and Xi(t)", || {
        let p = RepParams::default().with_big_xi(vec![(1, ParamPoly::symbol("c1")), (2, ParamPoly::symbol("c2"))]);
        let r = symmetry(RepId::Age, &p, false)?;
        Ok((r.pass && r.constraints.is_empty(), summary(&r)))
    }),
    check("algebra.symmetry.sch_extension", "algebra", "sch inside sv_gen needs x = d/2 - 2xi", sch_extension),
    check("algebra.symmetry.nonlocal_age", "algebra", "z = n symmetry with [S, X_0] = -(n/2) S", || {
        let mut parts = Vec::new();
        let mut ok = true;
        for n in 2..=4u32 {
            let mut p = RepParams::default();
            p.nonlocal_order = n;
            let r = symmetry(RepId::NonlocalAge, &p, false)?;
            let lambda = r.item("[S, X_0]").and_then(|i| i.lambda.clone()).unwrap_or_default();
            let want = ParamPoly::frac(-(n as i64), 2).to_string();
            ok &= r.pass && lambda == want;
            parts.push(format!("n={}: lambda_X0={}", n, lambda));
        }
        Ok((ok, parts.join("; ")))
    }),
    check("algebra.symmetry.conformal2d", "algebra", "l_n, lbar_n are symmetries of d_z d_zbar at x = xt = 0", || {
        let p = RepParams::default().with("x", ParamPoly::int(0)).with("xt", ParamPoly::int(0));
        let r = symmetry(RepId::Conformal2d, &p, false)?;
        Ok((r.pass, summary(&r)))
    }),
    check("algebra.casimir.sch", "algebra", "C4 = M^2 (2x-1)(2x-5), symmetric under x -> 3-x", casimir_scalar),
    check("algebra.casimir.bulk_on_shell", "algebra", "bulk Casimir on shell has exponents summing to 3", || {
        let p = RepParams::default();
        let c = casimir_c4(&make_rep(RepId::BulkSch, &p)?)?;
        let s = make_schrodinger_op(RepId::Sch, &p)?;
        let on = casimir_on_shell(&c, &s, &Param::new("alpha"))?;
        let ind = on.indicial.clone().unwrap_or_default();
        Ok((on.indicial.is_some(), ind))
    }),
    check("algebra.indicial", "algebra", "indicial exponents alpha + alpha' = 3", || {
        let mut ok = true;
        let mut parts = Vec::new();
        for x in ["0", "1", "3/2", "5/2", "7/3"] {
            let x: BigRational = dynsym::opalg::scalar::parse_rational(x).expect("literal rational");
            let [a, b] = indicial_exponents(&x)?;
            ok &= &a + &b == BigRational::from_integer(3.into());
            parts.push(format!("x={}: {}, {}", x, a, b));
        }
        Ok((ok, parts.join("; ")))
    }),
    check("algebra.parabolic.dual_sch", "algebra", "N extends the dual representation and commutes with S", || {
        let p = RepParams::default();
        let fam = make_rep(RepId::DualSch, &p)?.sch_subalgebra();
        let n = make_parabolic_n(RepId::DualSch, &p)?;
        let s = make_schrodinger_op(RepId::DualSch, &p)?;
        let r = check_parabolic(&n, &fam, Some(&s))?;
        Ok((r.pass, summary(&r)))
    }),
    check("algebra.closure.dual_cga_z2", "algebra", "z = 2 dual cga closes with X_0 -> N - 2X_0 or with N adjoined", || {
        let (d, n) = dual_z2_closure()?;
        Ok((d.pass && n.pass, format!("replaced: {}; extended: {}", summary(&d), summary(&n))))
    }),
    check("algebra.density", "algebra", "vector fields on alpha-densities against the operator action", || {
        let alpha = ParamPoly::symbol("alpha");
        let mut ok = true;
        for n in -2..=2 {
            for m in -2..=2 {
                let a = density_bracket(n, m, &alpha);
                let b = density_bracket_via_operator(n, m, &alpha);
                ok &= a.power == b.power && a.coeff_poly == b.coeff_poly;
            }
        }
        Ok((ok, "n, m in -2..2".into()))
    }),
    info("algebra.info.rotation_current", "algebra", "sv window with R_n for all n", || {
        let mut p = RepParams::default().with_d(2);
        p.rotation_current = true;
        let r = check_structure_constants(&make_rep(RepId::Sv, &p)?)?;
        Ok((r.pass, format!("{} failing pairs", r.count(ItemStatus::Fail))))
    }),
    info("algebra.info.dual_cga_z2_literal", "algebra", "z = 2 dual cga closes as printed", || {
        let r = check_lie_closure(&make_rep(RepId::DualCgaZ2, &RepParams::default())?)?;
        Ok((r.pass, failing(&r)))
    }),
    check("ward.conformal_2pt", "ward", "conformal two-point function", || ward(FormId::Conformal2pt)),
    check("ward.sch_2pt", "ward", "Schroedinger two-point function", || ward(FormId::Sch2pt)),
    check("ward.age_resp", "ward", "ageing response function", || ward(FormId::AgeResp)),
    check("ward.cga_2pt", "ward", "cga two-point function", || ward(FormId::Cga2pt)),
    check("ward.dual_sch_2pt", "ward", "mass-dual two-point function", || ward(FormId::DualSch2pt)),
    check("ward.dual_cga_2pt", "ward", "rapidity-dual two-point function", || ward(FormId::DualCga2pt)),
    check("ward.causal_sch", "ward", "causal Schroedinger two-point function", || ward(FormId::CausalSch)),
    check("ward.causal_cga", "ward", "causal cga two-point function", || ward(FormId::CausalCga)),
    info("ward.info.cga_single_rapidity", "ward", "cga form with exponent gamma r / tau", cga_single_rapidity),
    check("models.glauber", "models", "C(t,s) = (2/pi) arctan sqrt(2/(y-1)), N = 1e5, s = 25", || {
        let pts = glauber_run(100_000, &[25], &[2.0, 3.0, 5.0], 1, 16)?;
        let mut ok = true;
        let mut parts = Vec::new();
        for p in &pts {
            ok &= (p.c - p.c_exact).abs() <= (3.0 * p.stderr).max(0.01);
            parts.push(format!("y={}: {:.4}+-{:.4} vs {:.4}", p.y, p.c, p.stderr, p.c_exact));
        }
        Ok((ok, parts.join("; ")))
    }),
    check("models.glauber_exact", "models", "exact autocorrelator equals 1/2 at y = 3", || {
        let v = glauber_exact(3.0)?;
        Ok(((v - 0.5).abs() < 1e-14, format!("{:.15}", v)))
    }),
    check("models.arcetri_tc1", "models", "T_c(1) = 2 within 1%", || tc(1)),
    check("models.arcetri_tc2", "models", "T_c(2) = 2 pi/(pi-2) within 2%", || tc(2)),
    check("models.arcetri_order", "models", "Volterra step-halving order >= 2", || {
        let q = step_halving_order(1, 1.0, 1.0 / 16.0, 4.0)?;
        Ok((q >= 1.9, format!("{:.3}", q)))
    }),
    check("models.arcetri_g0", "models", "g(0) = 1", || {
        let g = arcetri_grid(1, 1.0, 1.0 / 64.0, 1.0)?;
        Ok(((g.g[0] - 1.0).abs() < 1e-12, format!("{:e}", (g.g[0] - 1.0).abs())))
    }),
    check("models.autocorr_shape", "models", "autocorrelator integral proportional to the exact form", || {
        let m = shape_match(-0.25, &AUTOCORR_Y)?;
        Ok((
            m.max_deviation < 0.02,
            format!("a_y={:.4} a_y1={:.4} C0={:.4} dev={:.2e}", m.a_y, m.a_y1, m.c0, m.max_deviation),
        ))
    }),
    info("models.info.autocorr_literal", "models", "autocorrelator with C0 = 2/sqrt(pi) and no prefactor", || {
        let m = shape_match(-0.25, &AUTOCORR_Y)?;
        let (lo, hi) = m.literal_ratio_range;
        Ok((m.literal_max_deviation < 0.02, format!("ratio to exact in [{:.3}, {:.3}]", lo, hi)))
    }),
    check("models.lattice", "models", "lattice two-point residual and continuum limit", || {
        let mut res = 0.0f64;
        for t in [0.5, 1.0, 4.0, 10.0, 100.0] {
            for n in 0..=10 {
                res = res.max(lattice_residual(t, n, 0.5)?.abs());
            }
        }
        let mut cont = 0.0f64;
        for n in [0, 5, 10, 20, 30] {
            let v = lattice_2pt(1000.0, n, 0.5)?;
            cont = cont.max((v / heat_kernel(1000.0, n as f64, 0.5) - 1.0).abs());
        }
        Ok((res < 1e-10 && cont < 0.01, format!("residual={:.2e} continuum={:.2e}", res, cont)))
    }),
    check("models.odef", "models", "f^(n-1) + M y f = 0 for n = 2, 3", || {
        let a = ode_f(2, 1.0, &[1.0], 5.0, 0.01)?;
        let b = ode_f(3, 1.0, &[1.0, 0.0], 10.0, 0.01)?;
        let ok = a.residual < 1e-10 && b.residual < 1e-8 && a.blow_up.is_none() && b.blow_up.is_none();
        Ok((ok, format!("n=2: {:.2e}; n=3: {:.2e}", a.residual, b.residual)))
    }),
    check("causality.dual_sch", "causality", "mass-dual form supported on t > 0", || causality(FormId::DualSch2pt)),
    check("causality.dual_cga", "causality", "rapidity-dual form supported on gamma_+ > 0", || causality(FormId::DualCga2pt)),
    check("causality.hardy", "causality", "line integral against sqrt(pi) Gamma(2xi-1/2)/Gamma(2xi)", || {
        let mut worst = 0.0f64;
        for xi in [0.5, 0.75, 1.0, 2.0] {
            let b = hardy_bound(xi, 0.5, 1.0)?;
            worst = worst.max((b.quadrature - b.closed_form).abs() / b.closed_form.abs());
        }
        Ok((worst < 1e-8, format!("{:.2e}", worst)))
    }),
];

const AUTOCORR_Y: [f64; 11] = [1.5, 2.0, 2.5, 3.0, 4.0, 5.0, 6.0, 7.0, 8.0, 9.0, 10.0];

fn summary(r: &CheckReport) -> String {
    let clipped = r.count(ItemStatus::WindowClipped);
    let mut s = format!("{} pairs", r.items.len() - clipped);
    if !r.constraints.is_empty() {
        s.push_str(&format!(", constraints [{}]", r.constraints.join(", ")));
    }
    if !r.pass {
        s.push_str(&format!(", failing {}", failing(r)));
    }
    s
}

fn failing(r: &CheckReport) -> String {
    let f: Vec<_> = r.items.iter().filter(|i| i.status == ItemStatus::Fail).map(|i| i.pair.clone()).collect();
    f.join(" ")
}

/// Passes only when every checked pair has an identically zero residual.
fn exact_zero(r: &CheckReport) -> bool {
    r.pass && r.items.iter().filter(|i| i.status == ItemStatus::Pass).all(|i| i.residual == "0")
}

fn structure_one(id: RepId, p: &RepParams) -> Result<(bool, String), CliError> {
    let r = check_structure_constants(&make_rep(id, p)?)?;
    Ok((exact_zero(&r), summary(&r)))
}

fn structure_all(id: RepId, ds: &[u8]) -> Result<(bool, String), CliError> {
    let mut ok = true;
    let mut parts = Vec::new();
    for &d in ds {
        let (pass, s) = structure_one(id, &RepParams::default().with_d(d))?;
        ok &= pass;
        parts.push(format!("d={}: {}", d, s));
    }
    Ok((ok, parts.join("; ")))
}

fn symmetry(id: RepId, p: &RepParams, sch_subalgebra: bool) -> Result<CheckReport, CliError> {
    let fam = make_rep(id, p)?;
    let fam = if sch_subalgebra { fam.sch_subalgebra() } else { fam };
    Ok(check_dynamical_symmetry(&make_schrodinger_op(id, p)?, &fam)?)
}

fn sch_anomaly() -> Result<(bool, String), CliError> {
    let mut ok = true;
    let mut parts = Vec::new();
    for d in 1..=3u8 {
        let p = RepParams::default().with_d(d);
        let r = symmetry(RepId::Sch, &p, false)?;
        let half_d = ParamPoly::frac(d as i64, 2);
        let want = ParamPoly::int(2).mul(&ParamPoly::symbol("x")).sub(&ParamPoly::int(d as i64)).to_string();
        let x1 = r.item("[S, X_1]");
        let lambda_ok = x1.and_then(|i| i.lambda.as_deref()) == Some("-2*t");
        let anomaly_ok = x1.is_some_and(|i| i.anomaly == vec![("M_0".to_string(), want.clone())]);
        let others_ok = r.items.iter().filter(|i| i.pair != "[S, X_1]").all(|i| i.pass);
        let constraint_ok = r.constraints == vec![format!("x = {}", half_d)];
        let at_half = symmetry(RepId::Sch, &p.clone().with("x", half_d), false)?;
        ok &= lambda_ok && anomaly_ok && others_ok && constraint_ok && at_half.pass;
        parts.push(format!("d={}: M_0 coefficient {}, vanishes at x = {}", d, want, ParamPoly::frac(d as i64, 2)));
    }
    Ok((ok, parts.join("; ")))
}

fn sch_extension() -> Result<(bool, String), CliError> {
    let mut ok = true;
    let mut parts = Vec::new();
    for d in 1..=2u8 {
        let p = RepParams::default().with_d(d);
        let r = symmetry(RepId::SvGen, &p, true)?;
        let on = ParamPoly::frac(d as i64, 2).sub(&ParamPoly::int(2).mul(&ParamPoly::symbol("xi")));
        let want = format!("x = {}", on);
        let fixed = symmetry(RepId::SvGen, &p.clone().with("x", on), true)?;
        ok &= !r.pass && r.constraints == vec![want.clone()] && fixed.pass;
        parts.push(format!("d={}: {}", d, r.constraints.join(", ")));
    }
    Ok((ok, parts.join("; ")))
}

fn nonlocal_exceptions() -> Result<(bool, String), CliError> {
    let mut ok = true;
    let mut parts = Vec::new();
    for n in 2..=4u32 {
        let mut p = RepParams::default();
        p.nonlocal_order = n;
        let r = check_structure_constants(&make_rep(RepId::NonlocalAge, &p)?)?;
        let exc: Vec<_> = r.items.iter().filter(|i| i.status == ItemStatus::Exception).map(|i| i.pair.as_str()).collect();
        let want: &[&str] = if n == 2 { &[] } else { &["[X_1, Y_1/2]"] };
        ok &= exact_zero(&r) && exc == want;
        parts.push(format!("n={}: exceptions [{}]", n, exc.join(" ")));
    }
    Ok((ok, parts.join("; ")))
}

fn casimir_scalar() -> Result<(bool, String), CliError> {
    let fam = make_rep(RepId::Sch, &RepParams::default())?;
    let c = casimir_c4(&fam)?;
    let v = c.value.as_ref().and_then(|v| v.as_param());
    let x = ParamPoly::symbol("x");
    let m2 = ParamPoly::symbol("M").mul(&ParamPoly::symbol("M"));
    let two_x = ParamPoly::int(2).mul(&x);
    let want = m2.mul(&two_x.sub(&ParamPoly::int(1))).mul(&two_x.sub(&ParamPoly::int(5)));
    let Some(v) = v else {
        return Ok((false, format!("not a scalar: {}", c.operator)));
    };
    let reflected = v.substitute(&Param::new("x"), &ParamPoly::int(3).sub(&x));
    let symmetric = reflected.is_some_and(|r| r == v);
    Ok((v == want && symmetric, format!("{}; reflection symmetric: {}", v, symmetric)))
}

/// The two closing sets of the z = 2 dual cga: X_0 replaced by N − 2X_0,
/// and N adjoined.
pub fn dual_z2_closure() -> Result<(CheckReport, CheckReport), CliError> {
    let p = RepParams::default();
    let base = make_rep(RepId::DualCgaZ2, &p)?;
    let n = make_parabolic_n(RepId::DualCgaZ2, &p)?;
    let mut replaced = base.clone();
    let x0 = base.gen(&GenKey::X(0))?.clone();
    replaced.insert(GenKey::X(0), n.sub(&x0.scale(&dynsym::opalg::Scalar::int(2))));
    let mut extended = base;
    extended.insert(GenKey::N, n);
    Ok((check_lie_closure(&replaced)?, check_lie_closure(&extended)?))
}

fn ward(id: FormId) -> Result<(bool, String), CliError> {
    let setup = ward_setup(id, &FormParams::generic(id, 1, 7))?;
    let cfg = WardConfig { points: 100, seed: 7, digits: 50, ..WardConfig::default() };
    let rep = ward_residual(&setup.generators, &setup.form, &setup.domain, &cfg)?;
    Ok((rep.max_residual < 1e-30, format!("{:.2e} over {} generators", rep.max_residual, rep.generators.len())))
}

/// The cga two-point form with the single-rapidity exponent γ·r/τ. The Y_1
/// Ward identity only holds with (γ1 + γ2)·r/τ.
fn cga_single_rapidity() -> Result<(bool, String), CliError> {
    let p = FormParams::generic(FormId::Cga2pt, 1, 7);
    let pt = |v: Var, k: u8| ClosedForm::var(v.with_point(k));
    let tau = pt(Var::t(), 1).sub(&pt(Var::t(), 2));
    let rho = pt(Var::r(1), 1).sub(&pt(Var::r(1), 2));
    let phase = pt(Var::gamma(1), 1).mul(&rho).mul(&tau.powi(-1));
    let form = tau.pow(p.p1.x.scale(&dynsym::opalg::Scalar::int(-2))).mul(&phase.neg().exp());
    let (gens, domain) = ward_generators(FormId::Cga2pt, &p)?;
    let cfg = WardConfig { points: 100, seed: 7, digits: 50, ..WardConfig::default() };
    let rep = ward_residual(&gens, &form, &domain, &cfg)?;
    let bad: Vec<_> = rep.generators.iter().filter(|g| g.max_residual >= 1e-30).map(|g| g.generator.clone()).collect();
    Ok((bad.is_empty(), format!("generators with nonzero residual: [{}]", bad.join(" "))))
}

fn tc(d: u32) -> Result<(bool, String), CliError> {
    let (r, rel) = tc_reference(d).expect("reference for d = 1, 2");
    let e = arcetri_tc(d, 0.01)?;
    let dev = (e.estimate - r).abs() / r;
    Ok((dev < rel, format!("{:.4} vs {:.4} ({:.2}%)", e.estimate, r, 100.0 * dev)))
}

fn causality(id: FormId) -> Result<(bool, String), CliError> {
    let r = causal_reconstruct(id, &CausalParams::default_for(id), &CausalityGrid::default_for(id))?;
    Ok((
        r.leakage < 1e-3 && r.profile_error < 1e-3,
        format!("leakage={:.2e} profile={:.2e}", r.leakage, r.profile_error),
    ))
}

/// Ids of the checks in `suite`, or `None` for an unknown suite name.
pub fn check_ids(suite: &str) -> Option<Vec<&'static str>> {
    if !SUITES.contains(&suite) {
        return None;
    }
    Some(CHECKS.iter().filter(|c| suite == "all" || c.suite == suite).map(|c| c.id).collect())
}

/// Runs one named check. Errors become failing rows.
pub fn run_check(id: &str) -> Option<SuiteRow> {
    let c = CHECKS.iter().find(|c| c.id == id)?;
    let (pass, value) = match (c.probe)() {
        Ok(v) => v,
        Err(e) => (false, format!("error: {}", e)),
    };
    Some(SuiteRow { id: c.id.into(), relation: c.relation.into(), pass, value, informational: c.informational })
}

pub fn run_suite(name: &str) -> Result<Outcome, CliError> {
    let ids = check_ids(name)
        .ok_or_else(|| CliError::Usage(format!("unknown suite '{}' (expected one of {})", name, SUITES.join(", "))))?;
    let mut rows: Vec<SuiteRow> = ids.par_iter().map(|id| run_check(id).expect("id from the registry")).collect();
    rows.sort_by(|a, b| a.id.cmp(&b.id));
    let pass = rows.iter().filter(|r| !r.informational).all(|r| r.pass);
    let mut table = Table::new(&["id", "relation", "pass", "value", "informational"]);
    for r in &rows {
        table.push([r.id.clone(), r.relation.clone(), r.pass.to_string(), r.value.clone(), r.informational.to_string()]);
    }
    Ok(Outcome {
        check: "suite".into(),
        relation: format!("{} suite", name),
        pass,
        result: json!({ "suite": name, "checks": to_value(&rows) }),
        table,
    })
}

/// Fixed-width summary for standard output.
pub fn summary_table(o: &Outcome) -> String {
    let mut out = String::new();
    for r in &o.table.rows {
        let verdict = match (r[2].as_str(), r[4].as_str()) {
            (_, "true") => "info",
            ("true", _) => "pass",
            _ => "FAIL",
        };
        out.push_str(&format!("{:<4}  {:<36}  {}\n", verdict, r[0], r[3]));
    }
    out.push_str(&format!("{}\n", if o.pass { "suite passed" } else { "suite failed" }));
    out
}
