//! Catalog of generator families: every representation is built as a set of
//! exact [`DiffOp`]s together with its abstract commutator table.

mod catalog;
mod table;
mod two_body;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::opalg::{DiffOp, Param, ParamPoly};

pub use catalog::{dualize_mass, make_parabolic_n, make_rep, make_schrodinger_op, nonlocal_kappa, nonlocal_schrodinger_with};
pub use table::{bracket, Bracket, Table};
pub use two_body::{point_vars, two_body, two_body_op};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RepId {
    /// `ℓ_n, ℓ̄_n` acting on `z, z̄`.
    Conformal2d,
    /// `ℓ_n = −z^{n+1}∂_z − nγz^n − g(z)z^n`.
    ConformalGen,
    /// Finite Schrödinger algebra `X_{0,±1}, Y_{±1/2}, M_0, R_0`.
    Sch,
    /// Schrödinger–Virasoro generators on an index window.
    Sv,
    /// Schrödinger–Virasoro with second scaling dimension and `Ξ(t)`.
    SvGen,
    /// Ageing algebra `X_{0,1}, Y_{±1/2}, M_0, R_0`.
    Age,
    /// Conformal Galilean algebra with rapidities.
    Cga,
    /// Infinite conformal Galilean algebra on an index window.
    Av,
    /// Exotic CGA(2).
    Ecga,
    /// Mass-dual Schrödinger–Virasoro on `(ζ, t, r)`.
    DualSch,
    /// Bulk representation on `(Z, ζ, t, r)`.
    BulkSch,
    /// `z = 2` dual representation of CGA(1): `X_0, X_1, Y_{±1/2}, M_0, V_+`.
    DualCgaZ2,
    /// Rapidity-dual CGA(d) on `(ζ⃗, t, r⃗)`.
    DualCga,
    /// Non-local `z = n` ageing representation.
    NonlocalAge,
    /// Mass-dual of [`RepId::NonlocalAge`].
    DualNonlocalAge,
    /// Lattice Schrödinger algebra, series in the lattice constant.
    LatticeSch,
    /// Vector fields acting on α-densities.
    Density,
}

impl RepId {
    pub const ALL: [RepId; 17] = [
        RepId::Conformal2d,
        RepId::ConformalGen,
        RepId::Sch,
        RepId::Sv,
        RepId::SvGen,
        RepId::Age,
        RepId::Cga,
        RepId::Av,
        RepId::Ecga,
        RepId::DualSch,
        RepId::BulkSch,
        RepId::DualCgaZ2,
        RepId::DualCga,
        RepId::NonlocalAge,
        RepId::DualNonlocalAge,
        RepId::LatticeSch,
        RepId::Density,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            RepId::Conformal2d => "conformal2d",
            RepId::ConformalGen => "conformal_gen",
            RepId::Sch => "sch",
            RepId::Sv => "sv",
            RepId::SvGen => "sv_gen",
            RepId::Age => "age",
            RepId::Cga => "cga",
            RepId::Av => "av",
            RepId::Ecga => "ecga",
            RepId::DualSch => "dual_sch",
            RepId::BulkSch => "bulk_sch",
            RepId::DualCgaZ2 => "dual_cga_z2",
            RepId::DualCga => "dual_cga",
            RepId::NonlocalAge => "nonlocal_age",
            RepId::DualNonlocalAge => "dual_nonlocal_age",
            RepId::LatticeSch => "lattice_sch",
            RepId::Density => "density",
        }
    }
}

impl fmt::Display for RepId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for RepId {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        RepId::ALL
            .iter()
            .find(|r| r.name() == s)
            .copied()
            .ok_or_else(|| Error::Usage(format!("unknown representation '{}'", s)))
    }
}

/// Shape of the `ξ`-term `−a(n) ξ t^n` in the generalized `X_n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum XiTerm {
    /// `a(n) = n(n+1)`. Closes on `age` only.
    Printed,
    /// `a(n) = n`. Closes on every window; equal to `n(n+1)/2` on `age`.
    #[default]
    Linear,
}

impl XiTerm {
    pub fn coefficient(&self, n: i64) -> i64 {
        match self {
            XiTerm::Printed => n * (n + 1),
            XiTerm::Linear => n,
        }
    }
}

impl FromStr for XiTerm {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "printed" => Ok(XiTerm::Printed),
            "linear" => Ok(XiTerm::Linear),
            _ => Err(Error::Usage(format!("unknown xi-term convention '{}'", s))),
        }
    }
}

/// Parameters of a representation. Symbolic by default; any slot may be set
/// to an exact rational or a parameter polynomial.
#[derive(Clone, Debug)]
pub struct RepParams {
    pub d: u8,
    pub x: ParamPoly,
    pub x_tilde: ParamPoly,
    pub xi: ParamPoly,
    pub xi_tilde: ParamPoly,
    pub xi_prime: ParamPoly,
    pub mass: ParamPoly,
    pub theta: ParamPoly,
    /// Constant `γ` of the generalized conformal generators.
    pub gamma: ParamPoly,
    /// `Ξ(t) = Σ c_k t^k`.
    pub big_xi: Vec<(i32, ParamPoly)>,
    /// `g(z) = Σ c_k z^k`.
    pub g: Vec<(i32, ParamPoly)>,
    pub nonlocal_order: u32,
    pub alpha: ParamPoly,
    /// Integer indices run over `[-window, window]`, half-integers over
    /// `±1/2, …, ±(window − 1/2)`.
    pub window: i32,
    pub trunc: u32,
    pub xi_term: XiTerm,
    /// Include `R_n` for every window index instead of `R_0` only. With a
    /// nonzero mass or rapidity the realized `[R_n, Y_m]` then misses the
    /// table for `n ≠ 0`.
    pub rotation_current: bool,
}

impl Default for RepParams {
    fn default() -> Self {
        RepParams {
            d: 1,
            x: ParamPoly::symbol("x"),
            x_tilde: ParamPoly::symbol("xt"),
            xi: ParamPoly::symbol("xi"),
            xi_tilde: ParamPoly::symbol("xit"),
            xi_prime: ParamPoly::symbol("xip"),
            mass: ParamPoly::symbol("M"),
            theta: ParamPoly::symbol("theta"),
            gamma: ParamPoly::symbol("gamma"),
            big_xi: Vec::new(),
            g: Vec::new(),
            nonlocal_order: 2,
            alpha: ParamPoly::symbol("alpha"),
            window: 2,
            trunc: 8,
            xi_term: XiTerm::Linear,
            rotation_current: false,
        }
    }
}

impl RepParams {
    pub fn with_d(mut self, d: u8) -> Self {
        self.d = d;
        self
    }

    /// Sets a named slot from a parsed polynomial. Names: `x, xt, xi, xit,
    /// xip, M, theta, gamma, alpha`.
    pub fn set(&mut self, name: &str, value: ParamPoly) -> Result<()> {
        let slot = match name {
            "x" | "delta" => &mut self.x,
            "xt" | "x_tilde" | "delta_bar" => &mut self.x_tilde,
            "xi" => &mut self.xi,
            "xit" | "xi_tilde" => &mut self.xi_tilde,
            "xip" | "xi_prime" => &mut self.xi_prime,
            "M" | "mass" => &mut self.mass,
            "theta" => &mut self.theta,
            "gamma" => &mut self.gamma,
            "alpha" => &mut self.alpha,
            _ => return Err(Error::Usage(format!("unknown parameter '{}'", name))),
        };
        *slot = value;
        Ok(())
    }

    pub fn with(mut self, name: &str, value: ParamPoly) -> Self {
        self.set(name, value).expect("known parameter name");
        self
    }

    /// `Ξ(t)` as `Σ c_k t^k`.
    pub fn with_big_xi(mut self, terms: Vec<(i32, ParamPoly)>) -> Self {
        self.big_xi = terms;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.d == 0 {
            return Err(Error::Config("spatial dimension must be at least 1".into()));
        }
        if self.window < 1 {
            return Err(Error::Config("index window must be at least 1".into()));
        }
        Ok(())
    }

    /// Copy with every symbol renamed `p → p<k>`, for point `k` of a Ward
    /// identity. The lattice constant and `θ` are shared.
    pub fn for_point(&self, k: u8) -> RepParams {
        let shared = |p: &Param| p.name() == "a" || p.name() == "theta";
        let rn = |q: &ParamPoly| {
            q.rename(&|p: &Param| {
                if shared(p) {
                    p.clone()
                } else {
                    Param::new(&format!("{}{}", p.name(), k))
                }
            })
        };
        let mut out = self.clone();
        out.x = rn(&self.x);
        out.x_tilde = rn(&self.x_tilde);
        out.xi = rn(&self.xi);
        out.xi_tilde = rn(&self.xi_tilde);
        out.xi_prime = rn(&self.xi_prime);
        out.mass = rn(&self.mass);
        out.gamma = rn(&self.gamma);
        out.alpha = rn(&self.alpha);
        out.big_xi = self.big_xi.iter().map(|(e, c)| (*e, rn(c))).collect();
        out.g = self.g.iter().map(|(e, c)| (*e, rn(c))).collect();
        out
    }

    pub fn record(&self) -> BTreeMap<String, String> {
        let mut m = BTreeMap::new();
        m.insert("d".into(), self.d.to_string());
        m.insert("x".into(), self.x.to_string());
        m.insert("xt".into(), self.x_tilde.to_string());
        m.insert("xi".into(), self.xi.to_string());
        m.insert("xit".into(), self.xi_tilde.to_string());
        m.insert("xip".into(), self.xi_prime.to_string());
        m.insert("M".into(), self.mass.to_string());
        m.insert("theta".into(), self.theta.to_string());
        m.insert("gamma".into(), self.gamma.to_string());
        m.insert("alpha".into(), self.alpha.to_string());
        m.insert("Xi(t)".into(), laurent_string(&self.big_xi, "t"));
        m.insert("g(z)".into(), laurent_string(&self.g, "z"));
        m.insert("nonlocal_order".into(), self.nonlocal_order.to_string());
        m.insert("window".into(), self.window.to_string());
        m.insert("trunc".into(), self.trunc.to_string());
        m.insert("rotation_current".into(), self.rotation_current.to_string());
        m.insert(
            "xi_term".into(),
            format!("{:?}", self.xi_term).to_lowercase(),
        );
        m
    }
}

fn laurent_string(terms: &[(i32, ParamPoly)], var: &str) -> String {
    if terms.is_empty() {
        return "0".into();
    }
    terms
        .iter()
        .map(|(e, c)| format!("({})*{}^{}", c, var, e))
        .collect::<Vec<_>>()
        .join(" + ")
}

/// Generator label. Half-integer `Y` indices are stored doubled.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum GenKey {
    X(i32),
    Y { j: u8, m2: i32 },
    M(i32),
    R { j: u8, k: u8, n: i32 },
    L(i32),
    Lbar(i32),
    V,
    N,
}

impl GenKey {
    /// `Y^{(j)}_m` with `m = m2 / 2`.
    pub fn y(j: u8, m2: i32) -> GenKey {
        GenKey::Y { j, m2 }
    }

    pub fn label(&self, d: u8) -> String {
        let half = |m2: i32| {
            if m2 % 2 == 0 {
                format!("{}", m2 / 2)
            } else {
                format!("{}/2", m2)
            }
        };
        match *self {
            GenKey::X(n) => format!("X_{}", n),
            GenKey::Y { j, m2 } => {
                if d == 1 {
                    format!("Y_{}", half(m2))
                } else {
                    format!("Y{}_{}", j, half(m2))
                }
            }
            GenKey::M(n) => format!("M_{}", n),
            GenKey::R { j, k, n } => format!("R{}{}_{}", j, k, n),
            GenKey::L(n) => format!("l_{}", n),
            GenKey::Lbar(n) => format!("lbar_{}", n),
            GenKey::V => "V+".into(),
            GenKey::N => "N".into(),
        }
    }
}

/// A single commutator deviation the paper states explicitly, e.g. the one
/// non-vanishing correction of the non-local ageing representation.
#[derive(Clone, Debug)]
pub struct Exception {
    pub pair: (GenKey, GenKey),
    pub expected: DiffOp,
    pub description: String,
}

#[derive(Clone, Debug)]
pub struct GeneratorFamily {
    pub rep: RepId,
    pub params: RepParams,
    pub gens: BTreeMap<GenKey, DiffOp>,
    pub table: Option<Table>,
    pub exceptions: Vec<Exception>,
    /// Named operators a dynamical-symmetry remainder may be explained by.
    pub anomalies: Vec<(String, DiffOp)>,
}

impl GeneratorFamily {
    pub fn get(&self, k: &GenKey) -> Option<&DiffOp> {
        self.gens.get(k)
    }

    pub fn label(&self, k: &GenKey) -> String {
        k.label(self.params.d)
    }

    pub fn keys(&self) -> Vec<GenKey> {
        self.gens.keys().copied().collect()
    }

    /// Generator lookup that errors instead of returning `None`.
    pub fn gen(&self, k: &GenKey) -> Result<&DiffOp> {
        self.gens
            .get(k)
            .ok_or_else(|| Error::Config(format!("{} has no generator {}", self.rep, self.label(k))))
    }

    /// Restricts the family to the given keys (missing keys are ignored).
    pub fn restrict(&self, keys: &[GenKey]) -> GeneratorFamily {
        let mut out = self.clone();
        out.gens.retain(|k, _| keys.contains(k));
        out
    }

    pub fn insert(&mut self, k: GenKey, op: DiffOp) {
        self.gens.insert(k, op);
    }

    /// The finite Schrödinger subalgebra `X_{0,±1}, Y_{±1/2}, M_0, R_0`.
    pub fn sch_subalgebra(&self) -> GeneratorFamily {
        let keys: Vec<GenKey> = self
            .gens
            .keys()
            .copied()
            .filter(|k| match *k {
                GenKey::X(n) => (-1..=1).contains(&n),
                GenKey::Y { m2, .. } => m2 == 1 || m2 == -1,
                GenKey::M(n) | GenKey::R { n, .. } => n == 0,
                _ => false,
            })
            .collect();
        self.restrict(&keys)
    }
}
