//! Run configuration: every command line is captured in a [`RunConfig`],
//! which is embedded in the report so a run can be repeated from it alone.

use std::path::PathBuf;

use clap::{Args, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, ValueEnum, Default)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Json,
    Csv,
}

/// Representation and its parameters. Values are exact: integers, `p/q`
/// rationals, decimals, or polynomial expressions in free symbols.
#[derive(Clone, Debug, Serialize, Deserialize, Args)]
pub struct RepArgs {
    #[arg(long, default_value = "sch")]
    pub rep: String,
    #[arg(long, default_value_t = 1)]
    pub d: u8,
    #[arg(long, default_value_t = 2)]
    pub window: i32,
    /// Truncation order in the lattice constant.
    #[arg(long, default_value_t = 8)]
    pub trunc: u32,
    /// Dynamical exponent of the non-local representations.
    #[arg(long, default_value_t = 2)]
    pub nonlocal_order: u32,
    /// `linear` or `printed` shape of the second-dimension term in `X_n`.
    #[arg(long, default_value = "linear")]
    pub xi_term: String,
    /// Include `R_n` for every window index.
    #[arg(long)]
    pub rotation_current: bool,
    #[arg(long)]
    pub x: Option<String>,
    #[arg(long)]
    pub xi: Option<String>,
    #[arg(long)]
    pub mass: Option<String>,
    /// Further overrides `name=value` (names: x, xt, xi, xit, xip, M, theta, gamma, alpha).
    #[arg(long = "set", value_name = "NAME=VALUE")]
    pub set: Vec<String>,
    /// Terms `k:c` of `Ξ(t) = Σ c t^k`.
    #[arg(long, value_delimiter = ',')]
    pub big_xi: Vec<String>,
    /// Restrict to `X_{0,±1}, Y_{±1/2}, M_0, R_0`.
    #[arg(long)]
    pub sch_subalgebra: bool,
}

#[derive(Clone, Debug, Serialize, Deserialize, Subcommand)]
#[serde(tag = "command", rename_all = "kebab-case")]
pub enum Command {
    /// Structure constants against the abstract commutator table.
    #[command(after_help = "CSV columns: check,pair,residual,status")]
    Verify {
        #[command(flatten)]
        #[serde(flatten)]
        rep: RepArgs,
        /// Also decompose `[S, G]` against the invariant Schrödinger operator.
        #[arg(long)]
        symmetry: bool,
    },
    /// Closure of the family under commutators.
    #[command(after_help = "CSV columns: check,pair,residual,status")]
    Closure {
        #[command(flatten)]
        #[serde(flatten)]
        rep: RepArgs,
        /// Append the grading generator `N`.
        #[arg(long)]
        extend_n: bool,
        /// Replace `X_0` by `D = N − 2X_0`.
        #[arg(long)]
        replace_x0: bool,
    },
    /// Quartic Casimir; on-shell reduction for the bulk representation.
    #[command(after_help = "CSV columns: quantity,value")]
    Casimir {
        #[command(flatten)]
        #[serde(flatten)]
        rep: RepArgs,
    },
    /// Parabolic extension by the grading generator `N`.
    #[command(after_help = "CSV columns: check,pair,residual,status")]
    Parabolic {
        #[command(flatten)]
        #[serde(flatten)]
        rep: RepArgs,
    },
    /// Ward identities of a covariant two-point form at random points.
    #[command(after_help = "CSV columns: generator,max_residual")]
    Ward {
        #[arg(long)]
        form: String,
        #[arg(long, default_value_t = 1)]
        d: u8,
        /// Seed for the form parameters and the sample points.
        #[arg(long, default_value_t = 7)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        points: usize,
        #[arg(long, default_value_t = 50)]
        digits: u32,
        #[arg(long, default_value_t = 1e-30)]
        tol: f64,
    },
    /// Power-law exponents in `s`, `y = t/s` and `y − 1`.
    #[command(after_help = "CSV columns: quantity,value")]
    Fit {
        /// `form` (ageing response), `glauber-response`, or `table`.
        #[arg(long, default_value = "form")]
        source: String,
        #[arg(long, default_value = "1/2")]
        x1: String,
        #[arg(long, default_value = "0")]
        x2: String,
        #[arg(long, default_value = "0")]
        xi1: String,
        #[arg(long, default_value = "1/4")]
        xi2: String,
        /// CSV file with columns `s,y,value` for `--source table`.
        #[arg(long)]
        table: Option<PathBuf>,
        /// Identify the first point's `x` and solve for `x̃, ξ̃`.
        #[arg(long)]
        x: Option<String>,
        #[arg(long)]
        xi: Option<String>,
    },
    /// Zero-temperature Glauber chain autocorrelation.
    #[command(after_help = "CSV columns: s,t,y,c,stderr,c_exact,within")]
    Glauber {
        #[arg(long, default_value_t = 100_000)]
        n: usize,
        #[arg(long, value_delimiter = ',', default_value = "25")]
        s: Vec<u64>,
        #[arg(long, value_delimiter = ',', default_value = "2,3,5")]
        y: Vec<f64>,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 16)]
        replicas: usize,
    },
    /// Volterra equation of the spherical model on a uniform grid.
    #[command(after_help = "CSV columns: t,g")]
    Arcetri {
        #[arg(long, default_value_t = 1)]
        d: u32,
        #[arg(long, default_value_t = 1.0)]
        temp: f64,
        #[arg(long, default_value_t = 1.0 / 64.0)]
        h: f64,
        #[arg(long, default_value_t = 100.0)]
        t_max: f64,
        /// Output every k-th grid point.
        #[arg(long, default_value_t = 64)]
        stride: usize,
    },
    /// Critical temperature by bisection on the late-time growth of `g`.
    #[command(after_help = "CSV columns: quantity,value")]
    ArcetriTc {
        #[arg(long, default_value_t = 1)]
        d: u32,
        #[arg(long, default_value_t = 0.01)]
        tol: f64,
    },
    /// Autocorrelator integral and its match to the exact chain result.
    #[command(after_help = "CSV columns: y,integral,matched,exact,matched_ratio,literal_ratio")]
    Autocorr {
        #[arg(long, default_value_t = -0.25, allow_hyphen_values = true)]
        mu: f64,
        #[arg(long, value_delimiter = ',', default_value = "1.5,2,2.5,3,4,5,6,7,8,9,10")]
        y: Vec<f64>,
        #[arg(long, default_value_t = 0.02)]
        tol: f64,
    },
    /// Lattice two-point function, its equation residual and continuum limit.
    #[command(after_help = "CSV columns: t,n,value,residual,heat_kernel,ratio")]
    Lattice2pt {
        #[arg(long, default_value_t = 0.5)]
        x1: f64,
        #[arg(long, value_delimiter = ',', default_value = "0.5,1,10,100,1000")]
        t: Vec<f64>,
        #[arg(long, value_delimiter = ',', default_value = "0,1,2,5,10", allow_hyphen_values = true)]
        n: Vec<i32>,
    },
    /// Causal support of a dual two-point form by discrete Fourier transform.
    #[command(after_help = "CSV columns: t,r,re,im,model,forbidden")]
    Causality {
        #[arg(long, default_value = "dual_sch_2pt")]
        form: String,
        #[arg(long, default_value_t = 1.0)]
        x: f64,
        #[arg(long, default_value_t = 1.0)]
        xi: f64,
        #[arg(long, default_value_t = 0.0)]
        xi_prime: f64,
        #[arg(long, default_value_t = 1.0)]
        mass: f64,
        #[arg(long, default_value_t = 0.5)]
        gamma: f64,
        #[arg(long)]
        dz: Option<f64>,
        #[arg(long)]
        half_width: Option<f64>,
        #[arg(long, default_value_t = 4)]
        pad: usize,
        #[arg(long, default_value_t = 1e-3)]
        tol: f64,
    },
    /// Line integral bound of the Hardy-class representation.
    #[command(after_help = "CSV columns: xi,quadrature,closed_form,rel_diff")]
    Hardy {
        #[arg(long, value_delimiter = ',', default_value = "0.5,0.75,1,2")]
        xi: Vec<f64>,
        #[arg(long, default_value_t = 0.5)]
        lambda: f64,
        #[arg(long, default_value_t = 1.0)]
        v: f64,
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
    },
    /// Holographic kernel `[4Z/(−2ζt + r²)]^α` and the boundary exponents.
    #[command(after_help = "CSV columns: quantity,value")]
    Holokernel {
        #[arg(long, default_value_t = 1.0)]
        z: f64,
        #[arg(long, default_value_t = -1.0, allow_hyphen_values = true)]
        zeta: f64,
        #[arg(long, default_value_t = 1.0)]
        t: f64,
        #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
        r: f64,
        #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
        alpha: f64,
        /// Exact boundary dimension for the indicial exponents.
        #[arg(long)]
        x: Option<String>,
    },
    /// Reduced ODE `f^{(n−1)} + M y f = 0`.
    #[command(after_help = "CSV columns: y,f")]
    Odef {
        #[arg(long, default_value_t = 3)]
        n: u32,
        #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
        mass: f64,
        /// `f(0), f′(0), …, f^{(n−2)}(0)`.
        #[arg(long, value_delimiter = ',', default_value = "1,0", allow_hyphen_values = true)]
        init: Vec<f64>,
        #[arg(long, default_value_t = 10.0)]
        y_end: f64,
        #[arg(long, default_value_t = 0.01)]
        dy: f64,
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
    },
    /// Named collection of checks: all, algebra, ward, models, causality.
    #[command(after_help = "CSV columns: id,relation,pass,value,informational")]
    Suite { name: String },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Verify { .. } => "verify",
            Command::Closure { .. } => "closure",
            Command::Casimir { .. } => "casimir",
            Command::Parabolic { .. } => "parabolic",
            Command::Ward { .. } => "ward",
            Command::Fit { .. } => "fit",
            Command::Glauber { .. } => "glauber",
            Command::Arcetri { .. } => "arcetri",
            Command::ArcetriTc { .. } => "arcetri-tc",
            Command::Autocorr { .. } => "autocorr",
            Command::Lattice2pt { .. } => "lattice2pt",
            Command::Causality { .. } => "causality",
            Command::Hardy { .. } => "hardy",
            Command::Holokernel { .. } => "holokernel",
            Command::Odef { .. } => "odef",
            Command::Suite { .. } => "suite",
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RunConfig {
    #[serde(flatten)]
    pub command: Command,
    pub format: Format,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
}

pub const COMMANDS: [&str; 16] = [
    "verify",
    "closure",
    "casimir",
    "parabolic",
    "ward",
    "fit",
    "glauber",
    "arcetri",
    "arcetri-tc",
    "autocorr",
    "lattice2pt",
    "causality",
    "hardy",
    "holokernel",
    "odef",
    "suite",
];

/// Turns a flat `key = value` file into long options. Arrays become
/// comma-separated lists and `true` booleans become bare flags. A `command`
/// key names the subcommand and is returned separately.
pub fn config_file_args(text: &str) -> Result<(Option<String>, Vec<String>), String> {
    let mut table: toml::Table = text.parse().map_err(|e| format!("config file: {}", e))?;
    let command = match table.remove("command") {
        None => None,
        Some(toml::Value::String(c)) => Some(c),
        Some(other) => return Err(format!("config key 'command': expected a string, got {}", other)),
    };
    let mut out = Vec::new();
    for (k, v) in table {
        let flag = format!("--{}", k.replace('_', "-"));
        let scalar = |v: &toml::Value| -> Result<String, String> {
            match v {
                toml::Value::String(s) => Ok(s.clone()),
                toml::Value::Integer(i) => Ok(i.to_string()),
                toml::Value::Float(f) => Ok(f.to_string()),
                toml::Value::Boolean(b) => Ok(b.to_string()),
                other => Err(format!("config key '{}': unsupported value {}", k, other)),
            }
        };
        match &v {
            toml::Value::Boolean(true) => out.push(flag),
            toml::Value::Boolean(false) => {}
            toml::Value::Array(items) if k == "set" => {
                for it in items {
                    out.push(format!("{}={}", flag, scalar(it)?));
                }
            }
            toml::Value::Array(items) => {
                let parts = items.iter().map(scalar).collect::<Result<Vec<_>, _>>()?;
                out.push(format!("{}={}", flag, parts.join(",")));
            }
            other => out.push(format!("{}={}", flag, scalar(other)?)),
        }
    }
    Ok((command, out))
}
