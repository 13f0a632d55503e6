use dynsym::exprfn::{make_form, ward_generators, ward_residual, ward_setup, FormId, FormParams, WardConfig};
use dynsym::opalg::ParamPoly;

fn run(id: FormId, d: u8, seed: u64) -> f64 {
    let p = FormParams::generic(id, d, seed);
    let setup = ward_setup(id, &p).unwrap();
    let cfg = WardConfig { seed, ..WardConfig::default() };
    let rep = ward_residual(&setup.generators, &setup.form, &setup.domain, &cfg).unwrap();
    for g in &rep.generators {
        println!("{} d={} {}: {:e}", id, d, g.generator, g.max_residual);
    }
    rep.max_residual
}

#[test]
fn every_form_is_covariant() {
    for id in FormId::ALL {
        let r = run(id, 1, 7);
        assert!(r < 1e-30, "{}: {:e}", id, r);
    }
}

#[test]
fn vector_forms_in_two_dimensions() {
    for id in [FormId::Sch2pt, FormId::AgeResp, FormId::Cga2pt, FormId::DualSch2pt, FormId::CausalCga] {
        let r = run(id, 2, 11);
        assert!(r < 1e-30, "{}: {:e}", id, r);
    }
}

#[test]
fn unequal_scaling_dimensions_are_detected() {
    let p = FormParams::generic(FormId::Sch2pt, 1, 3);
    let mut bad = p.clone();
    bad.p2.x = bad.p2.x.add(&ParamPoly::frac(1, 3));
    assert!(make_form(FormId::Sch2pt, &bad).is_err());
    let form = make_form(FormId::Sch2pt, &p).unwrap();
    let (gens, dom) = ward_generators(FormId::Sch2pt, &bad).unwrap();
    let rep = ward_residual(&gens, &form, &dom, &WardConfig::default()).unwrap();
    let x0 = rep.generators.iter().find(|g| g.generator == "X_0").unwrap();
    assert!(x0.max_residual > 1e-3, "{:e}", x0.max_residual);
}

#[test]
fn sampling_is_seed_deterministic() {
    let p = FormParams::generic(FormId::AgeResp, 1, 5);
    let s = ward_setup(FormId::AgeResp, &p).unwrap();
    let cfg = WardConfig { points: 20, ..WardConfig::default() };
    let a = ward_residual(&s.generators, &s.form, &s.domain, &cfg).unwrap();
    let b = ward_residual(&s.generators, &s.form, &s.domain, &cfg).unwrap();
    let ra: Vec<f64> = a.generators.iter().map(|g| g.max_residual).collect();
    let rb: Vec<f64> = b.generators.iter().map(|g| g.max_residual).collect();
    assert_eq!(ra, rb);
    assert_eq!(s.domain.sample(5, 9).unwrap(), s.domain.sample(5, 9).unwrap());
}
