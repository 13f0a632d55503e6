use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::form::{expr_diff_multi, ClosedForm, Env};
use super::mp::{MpComplex, MpCtx};
use crate::error::{Error, Result};
use crate::opalg::{CoeffExpr, DIdx, DiffOp, Param, Scalar, Var};

/// Sampling cell: independent ranges, tied variables and positivity
/// conditions (rejection sampling).
#[derive(Clone, Debug, Default)]
pub struct Domain {
    ranges: Vec<(Var, BigRational, BigRational)>,
    ties: Vec<(Var, Var)>,
    positive: Vec<ClosedForm>,
}

impl Domain {
    pub fn new() -> Self {
        Domain::default()
    }

    pub fn range(&mut self, v: Var, lo: BigRational, hi: BigRational) {
        self.ranges.push((v, lo, hi));
    }

    /// `v` takes the value of `source`.
    pub fn tie(&mut self, v: Var, source: Var) {
        self.ties.push((v, source));
    }

    /// Restricts to points where `f` is real and positive.
    pub fn require_positive(&mut self, f: ClosedForm) {
        self.positive.push(f);
    }

    fn draw(&self, rng: &mut ChaCha8Rng) -> BTreeMap<Var, BigRational> {
        let den = BigInt::from(1u64 << 20);
        let mut out = BTreeMap::new();
        for (v, lo, hi) in &self.ranges {
            let k = BigInt::from(rng.gen_range(1u64..(1u64 << 20)));
            let x = lo + (hi - lo) * BigRational::new(k, den.clone());
            out.insert(*v, x);
        }
        for (v, s) in &self.ties {
            if let Some(x) = out.get(s).cloned() {
                out.insert(*v, x);
            }
        }
        out
    }

    fn accepts(&self, ctx: &mut MpCtx, env: &Env) -> bool {
        self.positive.iter().all(|f| match f.eval(ctx, env) {
            Ok(v) => v.is_real() && v.re.is_positive(),
            Err(_) => false,
        })
    }

    /// `n` accepted points, deterministic in `seed`.
    pub fn sample(&self, n: usize, seed: u64) -> Result<Vec<BTreeMap<Var, BigRational>>> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut ctx = MpCtx::with_digits(20);
        let mut out = Vec::with_capacity(n);
        let mut tries = 0usize;
        while out.len() < n {
            tries += 1;
            if tries > 1000 * n.max(1) {
                return Err(Error::Config("sampling cell is empty or too thin".into()));
            }
            let pt = self.draw(&mut rng);
            let env = env_for(&mut ctx, &pt, &BTreeMap::new());
            if self.accepts(&mut ctx, &env) {
                out.push(pt);
            }
        }
        Ok(out)
    }
}

fn env_for(ctx: &mut MpCtx, pt: &BTreeMap<Var, BigRational>, params: &BTreeMap<Param, Scalar>) -> Env {
    let vars = pt.iter().map(|(v, x)| (*v, ctx.real(x))).collect();
    Env { vars, params: params.clone() }
}

#[derive(Clone, Debug)]
pub struct WardConfig {
    pub points: usize,
    pub seed: u64,
    pub digits: u32,
    pub params: BTreeMap<Param, Scalar>,
}

impl Default for WardConfig {
    fn default() -> Self {
        WardConfig { points: 100, seed: 2024, digits: 50, params: BTreeMap::new() }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct GeneratorResidual {
    pub generator: String,
    pub max_residual: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct WardReport {
    pub points: usize,
    pub seed: u64,
    pub digits: u32,
    pub generators: Vec<GeneratorResidual>,
    pub max_residual: f64,
    /// Sample points rejected because evaluation hit a singularity.
    pub resampled: usize,
    pub domain_restricted: bool,
}

fn eval_coeff(ctx: &mut MpCtx, env: &Env, c: &CoeffExpr) -> Result<MpComplex> {
    let mut acc = ctx.zero();
    for (m, p) in c.terms() {
        let mut t = ctx.scalar(&env.param_value(p)?);
        for (v, e) in m {
            let x = env.vars.get(v).ok_or_else(|| Error::Config(format!("no value for variable {}", v)))?;
            let f = ctx.pow(x, &Scalar::int(*e as i64))?;
            t = ctx.mul(&t, &f);
        }
        acc = ctx.add(&acc, &t);
    }
    Ok(acc)
}

struct Prepared {
    name: String,
    terms: Vec<(CoeffExpr, usize)>,
}

/// `max |G F| / (1 + |F|)` over sampled points and the given two-body
/// generators, evaluated at `cfg.digits` significant digits.
pub fn ward_residual(
    generators: &[(String, DiffOp)],
    f: &ClosedForm,
    domain: &Domain,
    cfg: &WardConfig,
) -> Result<WardReport> {
    let mut derivs: Vec<ClosedForm> = Vec::new();
    let mut index: BTreeMap<DIdx, usize> = BTreeMap::new();
    let mut restricted = false;
    let mut prepared = Vec::new();
    for (name, op) in generators {
        let mut terms = Vec::new();
        for (idx, c) in op.terms() {
            let slot = match index.get(idx) {
                Some(&s) => s,
                None => {
                    let d = expr_diff_multi(f, idx);
                    restricted |= d.domain_restricted;
                    derivs.push(d.form);
                    index.insert(idx.clone(), derivs.len() - 1);
                    derivs.len() - 1
                }
            };
            terms.push((c.clone(), slot));
        }
        prepared.push(Prepared { name: name.clone(), terms });
    }

    // Draw extra points so singular ones can be replaced deterministically.
    let spare = cfg.points / 4 + 8;
    let pts = domain.sample(cfg.points + spare, cfg.seed)?;
    let per_point: Vec<Option<Vec<f64>>> = pts
        .par_iter()
        .map(|pt| {
            let mut ctx = MpCtx::with_digits(cfg.digits);
            let env = env_for(&mut ctx, pt, &cfg.params);
            evaluate_point(&mut ctx, &env, f, &derivs, &prepared).ok()
        })
        .collect();

    let mut resampled = 0;
    let mut used = 0;
    let mut maxima = vec![0.0f64; prepared.len()];
    for r in per_point {
        if used == cfg.points {
            break;
        }
        match r {
            Some(vals) => {
                used += 1;
                for (m, v) in maxima.iter_mut().zip(vals) {
                    *m = m.max(v);
                }
            }
            None => resampled += 1,
        }
    }
    if used < cfg.points {
        return Err(Error::Singular(format!("only {} regular points out of {}", used, cfg.points)));
    }
    let generators: Vec<GeneratorResidual> = prepared
        .iter()
        .zip(&maxima)
        .map(|(p, m)| GeneratorResidual { generator: p.name.clone(), max_residual: *m })
        .collect();
    let max_residual = maxima.iter().cloned().fold(0.0, f64::max);
    Ok(WardReport {
        points: used,
        seed: cfg.seed,
        digits: cfg.digits,
        generators,
        max_residual,
        resampled,
        domain_restricted: restricted,
    })
}

fn evaluate_point(
    ctx: &mut MpCtx,
    env: &Env,
    f: &ClosedForm,
    derivs: &[ClosedForm],
    ops: &[Prepared],
) -> Result<Vec<f64>> {
    let fv = f.eval(ctx, env)?;
    let scale = 1.0 + ctx.modulus_f64(&fv);
    let values: Vec<MpComplex> = derivs.iter().map(|d| d.eval(ctx, env)).collect::<Result<_>>()?;
    let mut out = Vec::with_capacity(ops.len());
    for op in ops {
        let mut acc = ctx.zero();
        for (c, slot) in &op.terms {
            let cv = eval_coeff(ctx, env, c)?;
            acc = ctx.add(&acc, &ctx.mul(&cv, &values[*slot]));
        }
        out.push(ctx.modulus_f64(&acc) / scale);
    }
    Ok(out)
}
