use std::collections::BTreeMap;

use rayon::prelude::*;

use super::{common_factor, describe_constraint, CheckItem, CheckReport, ItemStatus};
use crate::error::{Error, Result};
use crate::opalg::{op_decompose, Decomposition, DiffOp, DivisionOrder, Param, ParamPoly};
use crate::reps::{bracket, GenKey, GeneratorFamily, Table};

fn ordered_pairs(keys: &[GenKey]) -> Vec<(GenKey, GenKey)> {
    let mut out = Vec::new();
    for (i, a) in keys.iter().enumerate() {
        for b in &keys[i + 1..] {
            out.push((*a, *b));
        }
    }
    out
}

fn x_param(fam: &GeneratorFamily) -> Option<Param> {
    match fam.params.x.params().as_slice() {
        [x] if fam.params.x == ParamPoly::symbol(x.name()) => Some(x.clone()),
        _ => None,
    }
}

fn theta_substitution(table: Table, fam: &GeneratorFamily, central: &ParamPoly) -> ParamPoly {
    if table == Table::Exotic {
        central.substitute(&Param::new("Theta"), &fam.params.theta).unwrap_or_else(|| central.clone())
    } else {
        central.clone()
    }
}

fn commute(a: &DiffOp, b: &DiffOp) -> DiffOp {
    let c = a.commutator(b);
    match (a.truncation(), b.truncation()) {
        (Some(x), Some(y)) => c.truncate(x.min(y)),
        (Some(x), None) | (None, Some(x)) => c.truncate(x),
        (None, None) => c,
    }
}

fn record_for(fam: &GeneratorFamily) -> BTreeMap<String, String> {
    let mut m = fam.params.record();
    m.insert("rep".into(), fam.rep.to_string());
    m.insert("generators".into(), fam.gens.len().to_string());
    m
}

/// Compares every commutator with its table value.
pub fn check_structure_constants(fam: &GeneratorFamily) -> Result<CheckReport> {
    let table = fam
        .table
        .ok_or_else(|| Error::Config(format!("{} has no commutator table", fam.rep)))?;
    let keys = fam.keys();
    let items: Vec<CheckItem> = ordered_pairs(&keys)
        .par_iter()
        .map(|(a, b)| {
            let label = format!("[{}, {}]", fam.label(a), fam.label(b));
            let Some(br) = bracket(table, a, b) else {
                let mut it = CheckItem::new(label, commute(&fam.gens[a], &fam.gens[b]));
                it.pass = false;
                it.status = ItemStatus::Fail;
                it.note = Some("pair not covered by the table".into());
                return it;
            };
            if let Some((k, _)) = br.terms.iter().find(|(k, _)| !fam.gens.contains_key(k)) {
                let mut it = CheckItem::new(label, DiffOp::zero());
                it.pass = false;
                it.status = ItemStatus::WindowClipped;
                it.residual = "-".into();
                it.note = Some(format!("target {} outside the window", fam.label(k)));
                return it;
            }
            let mut expected = DiffOp::param(theta_substitution(table, fam, &br.central));
            for (k, c) in &br.terms {
                expected = expected.add(&fam.gens[k].scale(c));
            }
            let residual = commute(&fam.gens[a], &fam.gens[b]).sub(&expected);
            let exception = fam.exceptions.iter().find_map(|e| {
                if e.pair == (*a, *b) {
                    Some((e, false))
                } else if e.pair == (*b, *a) {
                    Some((e, true))
                } else {
                    None
                }
            });
            match exception {
                Some((e, flip)) => {
                    let dev = if flip { e.expected.neg() } else { e.expected.clone() };
                    let rest = residual.sub(&dev);
                    let mut it = CheckItem::new(label, rest.clone());
                    it.note = Some(format!("deviation {}: {}", e.description, residual));
                    if rest.is_zero() && !residual.is_zero() {
                        it.status = ItemStatus::Exception;
                    }
                    it
                }
                None => CheckItem::new(label, residual),
            }
        })
        .collect();
    Ok(CheckReport::new("structure_constants", record_for(fam), items))
}

fn division_order(s: &DiffOp) -> DivisionOrder {
    if s.truncation().is_some() {
        DivisionOrder::TimeFirst
    } else {
        DivisionOrder::Graded
    }
}

/// Writes `[S, G] = λ_G ∘ S + remainder` for every generator and explains
/// remainders by the family's anomaly operators.
pub fn check_dynamical_symmetry(s: &DiffOp, fam: &GeneratorFamily) -> Result<CheckReport> {
    let xp = x_param(fam);
    let order = division_order(s);
    let items: Vec<Result<CheckItem>> = fam
        .gens
        .par_iter()
        .map(|(k, g)| {
            let c = s.commutator(g);
            let (q, rem) = c.left_divide_by(s, order)?;
            let mut it = CheckItem::new(format!("[S, {}]", fam.label(k)), rem.clone());
            it.lambda = Some(q.to_string());
            it.lambda_op = Some(q);
            if rem.is_zero() {
                return Ok(it);
            }
            let basis: Vec<DiffOp> = fam.anomalies.iter().map(|(_, a)| a.clone()).collect();
            if !basis.is_empty() {
                if let Decomposition::InSpan(cs) = op_decompose(&rem, &basis) {
                    it.anomaly = fam
                        .anomalies
                        .iter()
                        .zip(cs)
                        .filter(|(_, c)| !c.is_zero())
                        .map(|((n, _), c)| (n.clone(), c.to_string()))
                        .collect();
                }
            }
            if let Some(p) = common_factor(&rem, xp.as_ref()) {
                it.constraint = Some(describe_constraint(&p, xp.as_ref()));
            }
            Ok(it)
        })
        .collect();
    let items = items.into_iter().collect::<Result<Vec<_>>>()?;
    let mut params = record_for(fam);
    params.insert("S".into(), s.to_string());
    Ok(CheckReport::new("dynamical_symmetry", params, items))
}

/// Span membership of `[N, G]` in the family extended by `N`, and `[S, N] = λS`.
pub fn check_parabolic(n: &DiffOp, fam: &GeneratorFamily, s: Option<&DiffOp>) -> Result<CheckReport> {
    let mut keys = fam.keys();
    keys.push(GenKey::N);
    let mut basis: Vec<DiffOp> = fam.gens.values().cloned().collect();
    basis.push(n.clone());
    let mut items: Vec<CheckItem> = keys
        .par_iter()
        .zip(basis.par_iter())
        .map(|(k, g)| span_item(format!("[N, {}]", fam.label(k)), &n.commutator(g), &keys, &basis, fam))
        .collect();
    if let Some(s) = s {
        let (q, rem) = s.commutator(n).left_divide_by(s, division_order(s))?;
        let mut it = CheckItem::new("[S, N]".into(), rem);
        it.lambda = Some(q.to_string());
        it.lambda_op = Some(q);
        items.push(it);
    }
    let mut params = record_for(fam);
    params.insert("N".into(), n.to_string());
    Ok(CheckReport::new("parabolic", params, items))
}

fn span_item(label: String, c: &DiffOp, keys: &[GenKey], basis: &[DiffOp], fam: &GeneratorFamily) -> CheckItem {
    match op_decompose(c, basis) {
        Decomposition::InSpan(cs) => {
            let mut it = CheckItem::new(label, DiffOp::zero());
            it.decomposition = keys
                .iter()
                .zip(cs)
                .filter(|(_, c)| !c.is_zero())
                .map(|(k, c)| (fam.label(k), c.to_string()))
                .collect();
            it
        }
        Decomposition::NotInSpan { remainder } => {
            let mut it = CheckItem::new(label, remainder);
            it.note = Some("not in the span of the family".into());
            it
        }
    }
}

/// Every pairwise commutator must lie in the span of the family.
pub fn check_lie_closure(fam: &GeneratorFamily) -> Result<CheckReport> {
    let keys = fam.keys();
    let basis: Vec<DiffOp> = fam.gens.values().cloned().collect();
    let items: Vec<CheckItem> = ordered_pairs(&keys)
        .par_iter()
        .map(|(a, b)| {
            let label = format!("[{}, {}]", fam.label(a), fam.label(b));
            span_item(label, &fam.gens[a].commutator(&fam.gens[b]), &keys, &basis, fam)
        })
        .collect();
    Ok(CheckReport::new("lie_closure", record_for(fam), items))
}
