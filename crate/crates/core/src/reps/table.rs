//! Abstract commutator tables.

use serde::Serialize;

use super::GenKey;
use crate::opalg::{ParamPoly, Scalar};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Table {
    /// Schrödinger–Virasoro: `X, Y, M, R`.
    SchrodingerVirasoro,
    /// Infinite conformal Galilean algebra: `X, Y, R`, abelian `Y`.
    ConformalGalilean,
    /// Conformal Galilean algebra in two dimensions with the central `Θ`
    /// in `[Y^1, Y^2]`.
    Exotic,
    /// `[ℓ_n, ℓ_m] = (n − m)ℓ_{n+m}`.
    Witt,
    /// Two commuting Witt algebras `ℓ, ℓ̄`.
    WittPair,
}

/// `Σ c_k G_k + central·1`.
#[derive(Clone, Debug, PartialEq)]
pub struct Bracket {
    pub terms: Vec<(GenKey, Scalar)>,
    pub central: ParamPoly,
}

impl Bracket {
    fn zero() -> Self {
        Bracket { terms: Vec::new(), central: ParamPoly::zero() }
    }

    fn single(k: GenKey, c: Scalar) -> Self {
        let mut b = Bracket::zero();
        b.push(k, c);
        b
    }

    fn push(&mut self, k: GenKey, c: Scalar) {
        if c.is_zero() {
            return;
        }
        let (k, c) = match k {
            GenKey::R { j, k: kk, .. } if j == kk => return,
            GenKey::R { j, k: kk, n } if j > kk => (GenKey::R { j: kk, k: j, n }, -c),
            _ => (k, c),
        };
        if let Some(e) = self.terms.iter_mut().find(|(q, _)| *q == k) {
            e.1 = &e.1 + &c;
        } else {
            self.terms.push((k, c));
        }
        self.terms.retain(|(_, c)| !c.is_zero());
    }

    fn neg(mut self) -> Self {
        for (_, c) in &mut self.terms {
            *c = -c.clone();
        }
        self.central = self.central.neg();
        self
    }
}

fn int(n: i32) -> Scalar {
    Scalar::int(n as i64)
}

fn delta(a: u8, b: u8) -> bool {
    a == b
}

/// `[R^{jk}_n, R^{li}_m]`.
fn rot_rot(j: u8, k: u8, l: u8, i: u8, n: i32) -> Bracket {
    let mut b = Bracket::zero();
    let r = |a: u8, c: u8| GenKey::R { j: a, k: c, n };
    if delta(j, i) {
        b.push(r(l, k), Scalar::one());
    }
    if delta(k, l) {
        b.push(r(j, i), Scalar::int(-1));
    }
    if delta(k, i) {
        b.push(r(j, l), Scalar::one());
    }
    if delta(j, l) {
        b.push(r(i, k), Scalar::int(-1));
    }
    b
}

/// `[R^{jk}_n, Y^l_m]` with `Y` index doubled.
fn rot_y(j: u8, k: u8, l: u8, m2: i32) -> Bracket {
    let mut b = Bracket::zero();
    if delta(j, l) {
        b.push(GenKey::Y { j: k, m2 }, Scalar::one());
    }
    if delta(k, l) {
        b.push(GenKey::Y { j, m2 }, Scalar::int(-1));
    }
    b
}

/// Table value of `[a, b]`, or `None` when the pair does not belong to the
/// table. Integer `Y` indices of the Galilean tables are stored doubled too.
pub fn bracket(table: Table, a: &GenKey, b: &GenKey) -> Option<Bracket> {
    if let Some(v) = bracket_ordered(table, a, b) {
        return Some(v);
    }
    bracket_ordered(table, b, a).map(Bracket::neg)
}

fn bracket_ordered(table: Table, a: &GenKey, b: &GenKey) -> Option<Bracket> {
    use GenKey::*;
    match table {
        Table::Witt => match (*a, *b) {
            (L(n), L(m)) => Some(Bracket::single(L(n + m), int(n - m))),
            _ => None,
        },
        Table::WittPair => match (*a, *b) {
            (L(n), L(m)) => Some(Bracket::single(L(n + m), int(n - m))),
            (Lbar(n), Lbar(m)) => Some(Bracket::single(Lbar(n + m), int(n - m))),
            (L(_), Lbar(_)) => Some(Bracket::zero()),
            _ => None,
        },
        Table::SchrodingerVirasoro => match (*a, *b) {
            (X(n), X(m)) => Some(Bracket::single(X(n + m), int(n - m))),
            // (n/2 − m) Y_{n+m}, indices doubled
            (X(n), Y { j, m2 }) => {
                Some(Bracket::single(Y { j, m2: 2 * n + m2 }, Scalar::frac((n - m2) as i64, 2)))
            }
            (X(n), M(m)) => Some(Bracket::single(M(n + m), int(-m))),
            (X(n), R { j, k, n: m }) => Some(Bracket::single(R { j, k, n: n + m }, int(-m))),
            (Y { j, m2 }, Y { j: k, m2: p2 }) => {
                if j == k {
                    if (m2 + p2) % 2 != 0 {
                        return None;
                    }
                    Some(Bracket::single(M((m2 + p2) / 2), Scalar::frac((m2 - p2) as i64, 2)))
                } else {
                    Some(Bracket::zero())
                }
            }
            (Y { .. }, M(_)) | (M(_), M(_)) | (M(_), R { .. }) => Some(Bracket::zero()),
            (R { j, k, n }, Y { j: l, m2 }) => Some(rot_y(j, k, l, m2 + 2 * n)),
            (R { j, k, n }, R { j: l, k: i, n: m }) => Some(rot_rot(j, k, l, i, n + m)),
            _ => None,
        },
        Table::ConformalGalilean | Table::Exotic => match (*a, *b) {
            (X(n), X(m)) => Some(Bracket::single(X(n + m), int(n - m))),
            (X(n), Y { j, m2 }) => {
                let m = m2 / 2;
                Some(Bracket::single(Y { j, m2: 2 * (n + m) }, int(n - m)))
            }
            (X(n), R { j, k, n: m }) => Some(Bracket::single(R { j, k, n: n + m }, int(-m))),
            (Y { j, m2 }, Y { j: k, m2: p2 }) => {
                let mut b = Bracket::zero();
                if table == Table::Exotic && j == 1 && k == 2 && m2 + p2 == 0 {
                    let c = if m2 == 0 { 1 } else { -2 };
                    b.central = ParamPoly::symbol("Theta").scale(&Scalar::int(c));
                }
                if table == Table::Exotic && j == 2 && k == 1 {
                    return None;
                }
                Some(b)
            }
            (R { j, k, n }, Y { j: l, m2 }) => Some(rot_y(j, k, l, m2 + 2 * n)),
            (R { j, k, n }, R { j: l, k: i, n: m }) => Some(rot_rot(j, k, l, i, n + m)),
            _ => None,
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn antisymmetry_and_scaling() {
        let t = Table::SchrodingerVirasoro;
        let b = bracket(t, &GenKey::X(1), &GenKey::y(1, -1)).unwrap();
        assert_eq!(b.terms, vec![(GenKey::y(1, 1), Scalar::one())]);
        let b = bracket(t, &GenKey::y(1, -1), &GenKey::X(1)).unwrap();
        assert_eq!(b.terms, vec![(GenKey::y(1, 1), Scalar::int(-1))]);
        let b = bracket(t, &GenKey::y(1, 1), &GenKey::y(1, -1)).unwrap();
        assert_eq!(b.terms, vec![(GenKey::M(0), Scalar::one())]);
    }

    #[test]
    fn exotic_centre() {
        let b = bracket(Table::Exotic, &GenKey::y(2, 0), &GenKey::y(1, 0)).unwrap();
        assert_eq!(b.central, ParamPoly::symbol("Theta").neg());
        let b = bracket(Table::Exotic, &GenKey::y(1, 2), &GenKey::y(2, -2)).unwrap();
        assert_eq!(b.central, ParamPoly::symbol("Theta").scale(&Scalar::int(-2)));
    }
}
