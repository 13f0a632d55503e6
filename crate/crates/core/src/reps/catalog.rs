use super::{Exception, GenKey, GeneratorFamily, RepId, RepParams, Table, XiTerm};
use crate::error::{config, Result};
use crate::opalg::series::{sech_half, second_difference, sinh_half};
use crate::opalg::{CoeffExpr, DiffOp, Param, ParamPoly, Scalar, Var};

fn tp(k: i32) -> CoeffExpr {
    CoeffExpr::var_pow(Var::t(), k)
}

fn c(p: &ParamPoly) -> CoeffExpr {
    CoeffExpr::param(p.clone())
}

fn q(n: i64, d: i64) -> CoeffExpr {
    CoeffExpr::frac(n, d)
}

fn mul(c: CoeffExpr, op: &DiffOp) -> DiffOp {
    DiffOp::coeff(c).compose(op)
}

fn dv(v: Var) -> DiffOp {
    DiffOp::d(v)
}

fn cv(v: Var) -> CoeffExpr {
    CoeffExpr::var(v)
}

/// `Σ_j u_j ∂_{w_j}`.
fn dot_grad(d: u8, u: impl Fn(u8) -> Var, w: impl Fn(u8) -> Var) -> DiffOp {
    (1..=d).fold(DiffOp::zero(), |acc, j| acc.add(&mul(cv(u(j)), &dv(w(j)))))
}

fn r_dot_grad(d: u8) -> DiffOp {
    dot_grad(d, Var::r, Var::r)
}

fn r_squared(d: u8) -> CoeffExpr {
    (1..=d).fold(CoeffExpr::zero(), |acc, j| acc.add(&cv(Var::r(j)).pow(2)))
}

fn laurent(terms: &[(i32, ParamPoly)], v: Var, shift: i32) -> CoeffExpr {
    terms.iter().fold(CoeffExpr::zero(), |acc, (e, p)| {
        acc.add(&CoeffExpr::var_pow(v, e + shift).scale_param(p))
    })
}

/// `u_j ∂_{u_k} − u_k ∂_{u_j}`.
fn rotation(u: fn(u8) -> Var, j: u8, k: u8) -> DiffOp {
    mul(cv(u(j)), &dv(u(k))).sub(&mul(cv(u(k)), &dv(u(j))))
}

fn int_range(w: i32) -> Vec<i32> {
    (-w..=w).collect()
}

fn half_range(w: i32) -> Vec<i32> {
    (-(2 * w - 1)..=(2 * w - 1)).step_by(2).collect()
}

fn rotation_range(p: &RepParams) -> Vec<i32> {
    if p.rotation_current {
        int_range(p.window)
    } else {
        vec![0]
    }
}

fn pairs(d: u8) -> Vec<(u8, u8)> {
    let mut out = Vec::new();
    for j in 1..=d {
        for k in (j + 1)..=d {
            out.push((j, k));
        }
    }
    out
}

struct Ranges {
    x: Vec<i32>,
    y2: Vec<i32>,
    m: Vec<i32>,
    r: Vec<i32>,
}

impl Ranges {
    fn window(p: &RepParams) -> Self {
        let w = p.window;
        Ranges { x: int_range(w), y2: half_range(w), m: int_range(w), r: rotation_range(p) }
    }

    fn sch() -> Self {
        Ranges { x: vec![-1, 0, 1], y2: vec![-1, 1], m: vec![0], r: vec![0] }
    }

    fn age() -> Self {
        Ranges { x: vec![0, 1], y2: vec![-1, 1], m: vec![0], r: vec![0] }
    }
}

/// How the scaling part of the Schrödinger–Virasoro `X_n` is built.
#[derive(Clone, Copy, PartialEq)]
enum Scaling {
    Plain,
    General,
}

/// `X_n` of the Schrödinger–Virasoro representation without the mass term,
/// shared by the direct and the mass-dual forms.
fn sv_x_kinematic(p: &RepParams, n: i32, scaling: Scaling) -> DiffOp {
    let d = p.d;
    let nn = n as i64;
    let mut op = mul(tp(n + 1), &dv(Var::t())).neg();
    op = op.sub(&mul(tp(n).mul(&q(nn + 1, 2)), &r_dot_grad(d)));
    let mut scal = tp(n).mul(&q(nn + 1, 2)).scale_param(&p.x);
    if scaling == Scaling::General {
        scal = scal.add(&tp(n).scale(&Scalar::int(p.xi_term.coefficient(nn))).scale_param(&p.xi));
        scal = scal.add(&laurent(&p.big_xi, Var::t(), n));
    }
    op.sub(&DiffOp::coeff(scal))
}

fn sv_family(id: RepId, p: &RepParams, ranges: &Ranges, scaling: Scaling) -> GeneratorFamily {
    let d = p.d;
    let m = &p.mass;
    let mut fam = family(id, p, Some(Table::SchrodingerVirasoro));
    for &n in &ranges.x {
        let nn = n as i64;
        let mut op = sv_x_kinematic(p, n, scaling);
        if n != 0 && n != -1 {
            let mass = tp(n - 1).mul(&r_squared(d)).scale(&Scalar::frac(nn * (nn + 1), 4)).scale_param(m);
            op = op.sub(&DiffOp::coeff(mass));
        }
        fam.insert(GenKey::X(n), op);
    }
    for &m2 in &ranges.y2 {
        let e = (m2 + 1) / 2; // m + 1/2
        for j in 1..=d {
            let mut op = mul(tp(e), &dv(Var::r(j))).neg();
            if e != 0 {
                let mass = tp(e - 1).mul(&cv(Var::r(j))).scale(&Scalar::int(e as i64)).scale_param(m);
                op = op.sub(&DiffOp::coeff(mass));
            }
            fam.insert(GenKey::y(j, m2), op);
        }
    }
    for &n in &ranges.m {
        fam.insert(GenKey::M(n), DiffOp::coeff(tp(n).scale_param(m)).neg());
    }
    add_rotations(&mut fam, d, &ranges.r, &[Var::r]);
    if ranges.m.contains(&0) {
        fam.anomalies.push(("M_0".into(), fam.gens[&GenKey::M(0)].clone()));
    }
    fam
}

fn add_rotations(fam: &mut GeneratorFamily, d: u8, ns: &[i32], vars: &[fn(u8) -> Var]) {
    for &n in ns {
        for (j, k) in pairs(d) {
            let rot = vars.iter().fold(DiffOp::zero(), |acc, u| acc.add(&rotation(*u, j, k)));
            fam.insert(GenKey::R { j, k, n }, mul(tp(n), &rot).neg());
        }
    }
}

fn family(id: RepId, p: &RepParams, table: Option<Table>) -> GeneratorFamily {
    GeneratorFamily {
        rep: id,
        params: p.clone(),
        gens: Default::default(),
        table,
        exceptions: Vec::new(),
        anomalies: Vec::new(),
    }
}

/// Replaces the mass by `−i∂_ζ`: every `M^k` in a coefficient becomes
/// `(−i∂_ζ)^k`. The inverse of setting `∂_ζ = iM`.
pub fn dualize_mass(op: &DiffOp, mass: &Param) -> DiffOp {
    let zeta = Var::zeta(1);
    let mut out = DiffOp::zero().with_truncation(op.truncation());
    for (idx, coeff) in op.terms() {
        let mut k_min = i32::MAX;
        let mut k_max = i32::MIN;
        for (_, p) in coeff.terms() {
            if let (Some(lo), Some(hi)) = (p.min_degree(mass), p.max_degree(mass)) {
                k_min = k_min.min(lo);
                k_max = k_max.max(hi);
            }
        }
        for k in k_min.max(0)..=k_max {
            let part = coeff.map_params(&|p| p.coefficient_of(mass, k));
            if part.is_zero() {
                continue;
            }
            let dz = DiffOp::d_pow(zeta, k as u32).scale(&(-Scalar::i()).pow(k as u32));
            out = out.add(&DiffOp::term(part, idx.clone()).compose(&dz));
        }
    }
    out
}

fn mass_param(p: &RepParams) -> Result<Param> {
    match p.mass.params().as_slice() {
        [m] if p.mass == ParamPoly::symbol(m.name()) => Ok(m.clone()),
        _ => config("the mass must be a single symbol for dual representations"),
    }
}

fn dual_sv_family(p: &RepParams) -> GeneratorFamily {
    let d = p.d;
    let zeta = Var::zeta(1);
    let i = Scalar::i();
    let mut fam = family(RepId::DualSch, p, Some(Table::SchrodingerVirasoro));
    let ranges = Ranges::window(p);
    for &n in &ranges.x {
        let nn = n as i64;
        let mut op = sv_x_kinematic(p, n, Scaling::General);
        if n != 0 && n != -1 {
            let cf = tp(n - 1).mul(&r_squared(d)).scale(&Scalar::frac(nn * (nn + 1), 4)).scale(&i);
            op = op.add(&mul(cf, &dv(zeta)));
        }
        fam.insert(GenKey::X(n), op);
    }
    for &m2 in &ranges.y2 {
        let e = (m2 + 1) / 2;
        for j in 1..=d {
            let mut op = mul(tp(e), &dv(Var::r(j))).neg();
            if e != 0 {
                let cf = tp(e - 1).mul(&cv(Var::r(j))).scale(&Scalar::int(e as i64)).scale(&i);
                op = op.add(&mul(cf, &dv(zeta)));
            }
            fam.insert(GenKey::y(j, m2), op);
        }
    }
    for &n in &ranges.m {
        fam.insert(GenKey::M(n), mul(tp(n).scale(&i), &dv(zeta)));
    }
    add_rotations(&mut fam, d, &ranges.r, &[Var::r]);
    fam
}

fn bulk_family(p: &RepParams) -> GeneratorFamily {
    let d = p.d;
    let zeta = Var::zeta(1);
    let bulk = Var::bulk();
    let i = Scalar::i();
    let mut fam = family(RepId::BulkSch, p, Some(Table::SchrodingerVirasoro));
    let ranges = Ranges::window(p);
    let euler = r_dot_grad(d).add(&mul(cv(bulk), &dv(bulk)));
    let rho2 = r_squared(d).add(&cv(bulk).pow(2));
    for &n in &ranges.x {
        let nn = n as i64;
        let mut op = mul(tp(n + 1), &dv(Var::t())).neg();
        op = op.sub(&mul(tp(n).mul(&q(nn + 1, 2)), &euler));
        if n != 0 && n != -1 {
            let cf = tp(n - 1).mul(&rho2).scale(&Scalar::frac(nn * (nn + 1), 4)).scale(&i);
            op = op.add(&mul(cf, &dv(zeta)));
        }
        fam.insert(GenKey::X(n), op);
    }
    for &m2 in &ranges.y2 {
        let e = (m2 + 1) / 2;
        for j in 1..=d {
            let mut op = mul(tp(e), &dv(Var::r(j))).neg();
            if e != 0 {
                let cf = tp(e - 1).mul(&cv(Var::r(j))).scale(&Scalar::int(e as i64)).scale(&i);
                op = op.add(&mul(cf, &dv(zeta)));
            }
            fam.insert(GenKey::y(j, m2), op);
        }
    }
    for &n in &ranges.m {
        fam.insert(GenKey::M(n), mul(tp(n).scale(&i), &dv(zeta)));
    }
    add_rotations(&mut fam, d, &ranges.r, &[Var::r]);
    fam
}

fn gamma_dot_r(d: u8) -> CoeffExpr {
    (1..=d).fold(CoeffExpr::zero(), |acc, j| acc.add(&cv(Var::gamma(j)).mul(&cv(Var::r(j)))))
}

fn cga_family(id: RepId, p: &RepParams, ns: &[i32], rs: &[i32]) -> GeneratorFamily {
    let d = p.d;
    let mut fam = family(id, p, Some(Table::ConformalGalilean));
    for &n in ns {
        let nn = n as i64;
        let mut op = mul(tp(n + 1), &dv(Var::t())).neg();
        op = op.sub(&mul(tp(n).scale(&Scalar::int(nn + 1)), &r_dot_grad(d)));
        if n != 0 && n != -1 {
            op = op.sub(&DiffOp::coeff(tp(n - 1).mul(&gamma_dot_r(d)).scale(&Scalar::int(nn * (nn + 1)))));
        }
        op = op.sub(&DiffOp::coeff(tp(n).scale(&Scalar::int(nn + 1)).scale_param(&p.x)));
        fam.insert(GenKey::X(n), op);
        for j in 1..=d {
            let mut y = mul(tp(n + 1), &dv(Var::r(j))).neg();
            y = y.sub(&DiffOp::coeff(tp(n).mul(&cv(Var::gamma(j))).scale(&Scalar::int(nn + 1))));
            fam.insert(GenKey::y(j, 2 * n), y);
        }
    }
    add_rotations(&mut fam, d, rs, &[Var::r, Var::gamma]);
    fam
}

/// `h_1 = θ∂_η`, `h_2 = η`, so that `[h_1, h_2] = θ`.
pub(crate) fn ecga_h(theta: &ParamPoly) -> [DiffOp; 2] {
    [DiffOp::d(Var::eta()).scale_param(theta), DiffOp::var(Var::eta())]
}

fn ecga_family(p: &RepParams) -> Result<GeneratorFamily> {
    let mut p = p.clone();
    p.d = 2;
    let theta = &p.theta;
    let theta_inv = theta
        .inv_unit()
        .ok_or_else(|| crate::Error::Config("θ must be an invertible monomial".into()))?;
    let h = ecga_h(theta);
    let mut fam = cga_family(RepId::Ecga, &p, &[-1, 0, 1], &[0]);
    fam.table = Some(Table::Exotic);
    for n in [-1i32, 0, 1] {
        let nn = n as i64;
        let hr = mul(cv(Var::r(1)), &h[0]).add(&mul(cv(Var::r(2)), &h[1]));
        let x = fam.gens[&GenKey::X(n)].sub(&hr.scale(&Scalar::int(nn * (nn + 1))));
        fam.insert(GenKey::X(n), x);
        for j in 1..=2u8 {
            let mut y = fam.gens[&GenKey::y(j, 2 * n)].sub(&mul(tp(n).scale(&Scalar::int(nn + 1)), &h[j as usize - 1]));
            // −n(n+1) θ ε_{jk} r_k
            let (k, sign) = if j == 1 { (2, 1) } else { (1, -1) };
            let eps = cv(Var::r(k)).scale(&Scalar::int(sign * nn * (nn + 1))).scale_param(theta);
            y = y.sub(&DiffOp::coeff(eps));
            fam.insert(GenKey::y(j, 2 * n), y);
        }
    }
    let hh = h[0].compose(&h[0]).add(&h[1].compose(&h[1]));
    let key = GenKey::R { j: 1, k: 2, n: 0 };
    let r = fam.gens[&key].sub(&hh.scale_param(&theta_inv).scale(&Scalar::frac(1, 2)));
    fam.insert(key, r);
    Ok(fam)
}

fn dual_cga_family(p: &RepParams) -> GeneratorFamily {
    let d = p.d;
    let i = Scalar::i();
    let mut fam = family(RepId::DualCga, p, Some(Table::ConformalGalilean));
    let ns = int_range(p.window);
    for &n in &ns {
        let nn = n as i64;
        let mut op = mul(tp(n + 1), &dv(Var::t())).neg();
        op = op.sub(&mul(tp(n).scale(&Scalar::int(nn + 1)), &r_dot_grad(d)));
        op = op.sub(&DiffOp::coeff(tp(n).scale(&Scalar::int(nn + 1)).scale_param(&p.x)));
        if n != 0 && n != -1 {
            let rz = dot_grad(d, Var::r, Var::zeta);
            op = op.add(&mul(tp(n - 1).scale(&Scalar::int(nn * (nn + 1))).scale(&i), &rz));
        }
        fam.insert(GenKey::X(n), op);
        for j in 1..=d {
            let mut y = mul(tp(n + 1), &dv(Var::r(j))).neg();
            y = y.add(&mul(tp(n).scale(&Scalar::int(nn + 1)).scale(&i), &dv(Var::zeta(j))));
            fam.insert(GenKey::y(j, 2 * n), y);
        }
    }
    add_rotations(&mut fam, d, &rotation_range(p), &[Var::r, Var::zeta]);
    fam
}

fn dual_cga_z2_family(p: &RepParams) -> GeneratorFamily {
    let mut p1 = p.clone();
    p1.d = 1;
    p1.window = 1;
    p1.big_xi.clear();
    p1.xi_term = XiTerm::Linear;
    let base = dual_sv_family(&p1);
    let mut fam = family(RepId::DualCgaZ2, &p1, None);
    // X_1 is the dual Schrödinger one, (i/2) r²∂_ζ − t²∂_t − tr∂_r − (x + ξ)t
    for k in [GenKey::X(0), GenKey::X(1), GenKey::y(1, -1), GenKey::y(1, 1), GenKey::M(0)] {
        fam.insert(k, base.gens[&k].clone());
    }
    let (t, r, zeta) = (Var::t(), Var::r(1), Var::zeta(1));
    let i = Scalar::i();
    let xx = p.x.add(&p.xi);
    let v = mul(cv(zeta).mul(&cv(r)), &dv(zeta))
        .neg()
        .sub(&mul(cv(t).mul(&cv(r)), &dv(t)))
        .sub(&mul(cv(zeta).mul(&cv(t)).scale(&i).add(&cv(r).pow(2).mul(&q(1, 2))), &dv(r)))
        .sub(&DiffOp::coeff(cv(r).scale_param(&xx)));
    fam.insert(GenKey::V, v);
    fam
}

/// Order-`n` non-local ageing generators; `∂_r^{n−2}` acts on the right of
/// the bracket in `X_1`.
fn nonlocal_family(p: &RepParams) -> Result<GeneratorFamily> {
    let n = p.nonlocal_order;
    if n < 2 {
        return config("non-local order must be at least 2");
    }
    let mut p = p.clone();
    p.d = 1;
    let (t, r) = (Var::t(), Var::r(1));
    let nn = n as i64;
    let m = &p.mass;
    let mut fam = family(RepId::NonlocalAge, &p, Some(Table::SchrodingerVirasoro));
    let x0 = mul(cv(t).mul(&q(nn, 2)), &dv(t))
        .neg()
        .sub(&mul(cv(r).mul(&q(1, 2)), &dv(r)))
        .sub(&DiffOp::param(p.x.scale(&Scalar::frac(1, 2))));
    fam.insert(GenKey::X(0), x0);
    let inner = mul(tp(2).mul(&q(nn, 2)), &dv(t))
        .neg()
        .sub(&mul(cv(t).mul(&cv(r)), &dv(r)))
        .sub(&DiffOp::coeff(cv(t).scale_param(&p.x.add(&p.xi))));
    let x1 = inner
        .compose(&DiffOp::d_pow(r, n - 2))
        .sub(&DiffOp::coeff(cv(r).pow(2).mul(&q(1, 2)).scale_param(m)));
    fam.insert(GenKey::X(1), x1);
    fam.insert(GenKey::y(1, -1), dv(r).neg());
    let y = mul(cv(t), &DiffOp::d_pow(r, n - 1)).neg().sub(&DiffOp::coeff(cv(r).scale_param(m)));
    fam.insert(GenKey::y(1, 1), y);
    fam.insert(GenKey::M(0), DiffOp::param(m.neg()));
    let s = nonlocal_schrodinger(&p);
    if n >= 3 {
        let expected = mul(tp(2).mul(&q(nn - 2, 2)), &DiffOp::d_pow(r, n - 3)).compose(&s);
        fam.exceptions.push(Exception {
            pair: (GenKey::X(1), GenKey::y(1, 1)),
            expected,
            description: format!("((n-2)/2) t^2 d_r^(n-3) S at n = {}", n),
        });
    }
    Ok(fam)
}

/// Constant in the non-local Schrödinger operator: `S = nM∂_t − ∂_r^n +
/// 2M κ/t` with `κ = x + ξ − (n − 1)/2`. At `n = 2` this is the ageing
/// operator.
pub fn nonlocal_kappa(p: &RepParams) -> ParamPoly {
    let n = p.nonlocal_order as i64;
    p.x.add(&p.xi).sub(&ParamPoly::frac(n - 1, 2))
}

fn nonlocal_schrodinger(p: &RepParams) -> DiffOp {
    nonlocal_schrodinger_with(p, &nonlocal_kappa(p))
}

/// `nM∂_t − ∂_r^n + 2Mκ t^{-1}` for an arbitrary constant `κ`.
pub fn nonlocal_schrodinger_with(p: &RepParams, kappa: &ParamPoly) -> DiffOp {
    let n = p.nonlocal_order;
    let m = &p.mass;
    mul(c(&m.scale(&Scalar::int(n as i64))), &dv(Var::t()))
        .sub(&DiffOp::d_pow(Var::r(1), n))
        .add(&DiffOp::coeff(tp(-1).scale_param(&m.mul(kappa).scale(&Scalar::int(2)))))
}

fn lattice_family(p: &RepParams) -> GeneratorFamily {
    let mut p = p.clone();
    p.d = 1;
    let order = p.trunc;
    let (t, r) = (Var::t(), Var::r(1));
    let m = &p.mass;
    let mut fam = family(RepId::LatticeSch, &p, Some(Table::SchrodingerVirasoro));
    let tr = Some(order);
    let s2 = sinh_half(r, order);
    let sech = sech_half(r, order);
    let sech_r = sech.compose(&DiffOp::var(r)).truncate(order);
    let dt = DiffOp::d(t).with_truncation(tr);
    fam.insert(GenKey::X(-1), dt.neg());
    let x0 = mul(cv(t), &dt).neg().sub(&sech_r.compose(&s2).scale(&Scalar::frac(1, 2)));
    fam.insert(GenKey::X(0), x0.truncate(order));
    let x1 = mul(tp(2), &dt)
        .neg()
        .sub(&mul(cv(t), &sech_r.compose(&s2)))
        .sub(&sech_r.compose(&sech_r).scale_param(&m.scale(&Scalar::frac(1, 2))));
    fam.insert(GenKey::X(1), x1.truncate(order));
    fam.insert(GenKey::y(1, -1), s2.neg());
    let y = mul(cv(t), &s2).neg().sub(&sech_r.scale_param(m));
    fam.insert(GenKey::y(1, 1), y.truncate(order));
    fam.insert(GenKey::M(0), DiffOp::param(m.neg()).with_truncation(tr));
    fam.anomalies.push(("M_0".into(), fam.gens[&GenKey::M(0)].clone()));
    fam
}

fn conformal2d_family(p: &RepParams) -> GeneratorFamily {
    let mut fam = family(RepId::Conformal2d, p, Some(Table::WittPair));
    let (z, zb) = (Var::z(), Var::zbar());
    for n in int_range(p.window) {
        let nn = n as i64;
        let zp = |k: i32| CoeffExpr::var_pow(z, k);
        let zbp = |k: i32| CoeffExpr::var_pow(zb, k);
        let l = mul(zp(n + 1), &dv(z)).add(&DiffOp::coeff(zp(n).scale(&Scalar::int(nn + 1)).scale_param(&p.x)));
        fam.insert(GenKey::L(n), l.neg());
        let lb = mul(zbp(n + 1), &dv(zb))
            .add(&DiffOp::coeff(zbp(n).scale(&Scalar::int(nn + 1)).scale_param(&p.x_tilde)));
        fam.insert(GenKey::Lbar(n), lb.neg());
    }
    fam
}

fn conformal_gen_family(p: &RepParams) -> GeneratorFamily {
    let mut fam = family(RepId::ConformalGen, p, Some(Table::Witt));
    let z = Var::z();
    for n in int_range(p.window) {
        let zp = |k: i32| CoeffExpr::var_pow(z, k);
        let l = mul(zp(n + 1), &dv(z))
            .add(&DiffOp::coeff(zp(n).scale(&Scalar::int(n as i64)).scale_param(&p.gamma)))
            .add(&DiffOp::coeff(laurent(&p.g, z, n)));
        fam.insert(GenKey::L(n), l.neg());
    }
    fam
}

/// `−z^{n+1}∂_z − α(n+1)z^n`: vector fields acting on α-densities, with the
/// overall sign chosen so the Witt table holds as `(n − m)`.
fn density_family(p: &RepParams) -> GeneratorFamily {
    let mut fam = family(RepId::Density, p, Some(Table::Witt));
    let z = Var::z();
    for n in int_range(p.window) {
        let zp = |k: i32| CoeffExpr::var_pow(z, k);
        let l = mul(zp(n + 1), &dv(z))
            .add(&DiffOp::coeff(zp(n).scale(&Scalar::int(n as i64 + 1)).scale_param(&p.alpha)));
        fam.insert(GenKey::L(n), l.neg());
    }
    fam
}

pub fn make_rep(id: RepId, p: &RepParams) -> Result<GeneratorFamily> {
    p.validate()?;
    Ok(match id {
        RepId::Conformal2d => conformal2d_family(p),
        RepId::ConformalGen => conformal_gen_family(p),
        RepId::Sch => sv_family(id, p, &Ranges::sch(), Scaling::Plain),
        RepId::Sv => sv_family(id, p, &Ranges::window(p), Scaling::Plain),
        RepId::SvGen => sv_family(id, p, &Ranges::window(p), Scaling::General),
        RepId::Age => sv_family(id, p, &Ranges::age(), Scaling::General),
        RepId::Cga => cga_family(id, p, &[-1, 0, 1], &[0]),
        RepId::Av => cga_family(id, p, &int_range(p.window), &rotation_range(p)),
        RepId::Ecga => ecga_family(p)?,
        RepId::DualSch => dual_sv_family(p),
        RepId::BulkSch => bulk_family(p),
        RepId::DualCgaZ2 => dual_cga_z2_family(p),
        RepId::DualCga => dual_cga_family(p),
        RepId::NonlocalAge => nonlocal_family(p)?,
        RepId::DualNonlocalAge => {
            let base = nonlocal_family(p)?;
            let m = mass_param(p)?;
            let mut fam = base.clone();
            fam.rep = RepId::DualNonlocalAge;
            fam.gens = base.gens.iter().map(|(k, g)| (*k, dualize_mass(g, &m))).collect();
            for e in &mut fam.exceptions {
                e.expected = dualize_mass(&e.expected, &m);
            }
            fam
        }
        RepId::LatticeSch => lattice_family(p),
        RepId::Density => density_family(p),
    })
}

/// The invariant Schrödinger operator of a representation.
pub fn make_schrodinger_op(id: RepId, p: &RepParams) -> Result<DiffOp> {
    p.validate()?;
    let d = p.d;
    let m = &p.mass;
    let laplacian = (1..=d).fold(DiffOp::zero(), |acc, j| acc.add(&DiffOp::d_pow(Var::r(j), 2)));
    let kinetic = mul(c(&m.scale(&Scalar::int(2))), &dv(Var::t())).sub(&laplacian);
    // 2M v(t), v = (x + ξ − d/2)/t + Ξ(t)/t
    let potential = || {
        let v0 = p.x.add(&p.xi).sub(&ParamPoly::frac(d as i64, 2));
        let v = tp(-1).scale_param(&v0).add(&laurent(&p.big_xi, Var::t(), -1));
        DiffOp::coeff(v.scale_param(&m.scale(&Scalar::int(2))))
    };
    Ok(match id {
        RepId::Sch | RepId::Sv => kinetic,
        RepId::Age | RepId::SvGen => kinetic.add(&potential()),
        RepId::DualSch => dualize_mass(&kinetic.add(&potential()), &mass_param(p)?),
        RepId::NonlocalAge => {
            let mut p1 = p.clone();
            p1.d = 1;
            nonlocal_schrodinger(&p1)
        }
        RepId::DualNonlocalAge => {
            let mut p1 = p.clone();
            p1.d = 1;
            dualize_mass(&nonlocal_schrodinger(&p1), &mass_param(p)?)
        }
        RepId::Ecga => {
            let h = ecga_h(&p.theta);
            let g = |j: u8| DiffOp::var(Var::gamma(j)).add(&h[j as usize - 1]);
            // θ∂_t − ε_{ij}(γ_i + h_i)∂_j; the opposite sign of the ε-term
            // is not invariant once [h_1, h_2] = θ
            mul(c(&p.theta), &dv(Var::t()))
                .sub(&g(1).compose(&dv(Var::r(2))))
                .add(&g(2).compose(&dv(Var::r(1))))
        }
        RepId::LatticeSch => {
            let order = p.trunc;
            mul(c(&m.scale(&Scalar::int(2))), &dv(Var::t()).with_truncation(Some(order)))
                .sub(&second_difference(Var::r(1), order))
        }
        RepId::Conformal2d => DiffOp::d(Var::z()).compose(&DiffOp::d(Var::zbar())).scale(&Scalar::int(4)),
        RepId::DualCgaZ2 => {
            let mut p1 = p.clone();
            p1.d = 1;
            p1.big_xi.clear();
            make_schrodinger_op(RepId::DualSch, &p1)?
        }
        _ => return config(format!("no Schrödinger operator is defined for {}", id)),
    })
}

/// The grading generator extending a dual representation to its maximal
/// parabolic subalgebra.
pub fn make_parabolic_n(id: RepId, p: &RepParams) -> Result<DiffOp> {
    let t = Var::t();
    let zeta = Var::zeta(1);
    let zdz_tdt = mul(cv(zeta), &dv(zeta)).sub(&mul(cv(t), &dv(t)));
    Ok(match id {
        RepId::DualSch | RepId::DualNonlocalAge => zdz_tdt.add(&DiffOp::param(p.xi_prime.clone())),
        RepId::DualCgaZ2 => zdz_tdt.add(&DiffOp::param(p.xi.clone())),
        RepId::DualCga => dot_grad(p.d, Var::zeta, Var::zeta)
            .add(&r_dot_grad(p.d))
            .add(&DiffOp::param(p.xi.clone()))
            .neg(),
        _ => return config(format!("no parabolic generator is defined for {}", id)),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sch_generators_match_closed_forms() {
        let p = RepParams::default();
        let fam = make_rep(RepId::Sch, &p).unwrap();
        let (t, r) = (Var::t(), Var::r(1));
        let x = ParamPoly::symbol("x");
        let mm = ParamPoly::symbol("M");
        let x1 = mul(tp(2), &dv(t))
            .neg()
            .sub(&mul(cv(t).mul(&cv(r)), &dv(r)))
            .sub(&DiffOp::coeff(cv(r).pow(2).mul(&q(1, 2)).scale_param(&mm)))
            .sub(&DiffOp::coeff(cv(t).scale_param(&x)));
        assert_eq!(fam.gens[&GenKey::X(1)], x1);
        let y = mul(cv(t), &dv(r)).neg().sub(&DiffOp::coeff(cv(r).scale_param(&mm)));
        assert_eq!(fam.gens[&GenKey::y(1, 1)], y);
    }

    #[test]
    fn dual_sch_is_mass_dualization() {
        let p = RepParams::default();
        let direct = make_rep(RepId::SvGen, &p).unwrap();
        let dual = make_rep(RepId::DualSch, &p).unwrap();
        let m = Param::new("M");
        for (k, g) in &direct.gens {
            assert_eq!(dualize_mass(g, &m), dual.gens[k], "{:?}", k);
        }
    }

    #[test]
    fn lattice_reduces_to_continuum() {
        let p = RepParams::default().with("x", ParamPoly::zero());
        let lat = make_rep(RepId::LatticeSch, &p).unwrap();
        let cont = make_rep(RepId::Sch, &p).unwrap();
        for (k, g) in &lat.gens {
            let g0 = g.truncate(0).with_truncation(None);
            assert_eq!(g0, cont.gens[k], "{:?}", k);
        }
    }
}
