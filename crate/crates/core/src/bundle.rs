//! Vector bundles on the curve described by two frames: one over the affine
//! chart and one near infinity, related by a triangular matrix of monomials
//! `c * y^k`, plus a twisting divisor kept separate from the matrix.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use crate::curve::{CurveCtx, DivisorRec};
use crate::error::{Error, Result};
use crate::ff::{binomial_mod, FieldDesc, FieldElem};

/// `coef * y^exp` with `coef` in the prime field.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Monomial {
    pub coef: FieldElem,
    pub exp: i64,
}

/// Frame element `(q-th root of z)^root (x) eta^eta`; `dual` marks dual frames.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct FrameLabel {
    pub root: i64,
    pub eta: i64,
    pub dual: bool,
}

impl fmt::Display for FrameLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let star = if self.dual { "*" } else { "" };
        write!(f, "w^{}.eta^{}{}", self.root, self.eta, star)
    }
}

/// A bundle `V (x) O(twist)`. Coordinates follow
/// `infinity_coords[b] = sum_j transition[b][j] * affine_coords[j]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BundleRec {
    pub name: String,
    pub rank: usize,
    pub frame_labels: Vec<FrameLabel>,
    pub transition: Vec<Vec<Option<Monomial>>>,
    pub twist: DivisorRec,
}

pub fn make_line_bundle(ctx: &CurveCtx, d: DivisorRec) -> Result<BundleRec> {
    d.validate(ctx)?;
    Ok(BundleRec {
        name: format!("O({})", describe_divisor(&d)),
        rank: 1,
        frame_labels: vec![FrameLabel {
            root: 0,
            eta: 0,
            dual: false,
        }],
        transition: vec![vec![Some(Monomial {
            coef: FieldElem::ONE,
            exp: 0,
        })]],
        twist: d,
    })
}

pub(crate) fn describe_divisor(d: &DivisorRec) -> String {
    let mut s = format!("{}inf", d.inf_mult);
    for (_, m) in &d.affine {
        s.push_str(if *m > 0 { "+Q" } else { "-Q" });
    }
    s
}

/// Frames `w^j (x) eta^shift` for `lo <= j <= hi` with `w = alpha w_inf + beta`
/// and `eta = alpha eta_inf`, taken modulo `w^{<lo}`:
/// `T[b][j] = C(j, b) alpha^{b + shift} beta^{j - b}`.
pub fn sym_block(
    ctx: &CurveCtx,
    lo: i64,
    hi: i64,
    shift: i64,
    twist: DivisorRec,
    name: impl Into<String>,
) -> Result<BundleRec> {
    twist.validate(ctx)?;
    let p = ctx.params.p;
    let big_e = ctx.params.alpha_exponent();
    let e = ctx.params.e as i64;
    let rank = if hi >= lo { (hi - lo + 1) as usize } else { 0 };
    let mut transition = vec![vec![None; rank]; rank];
    for (bi, row) in transition.iter_mut().enumerate() {
        let b = lo + bi as i64;
        for (ji, entry) in row.iter_mut().enumerate() {
            let j = lo + ji as i64;
            if b > j {
                continue;
            }
            let c = binomial_mod(j as u64, b as u64, p);
            if c != 0 {
                *entry = Some(Monomial {
                    coef: FieldElem(c as u32),
                    exp: (b + shift) * big_e - e * (j - b),
                });
            }
        }
    }
    Ok(BundleRec {
        name: name.into(),
        rank,
        frame_labels: (0..rank)
            .map(|i| FrameLabel {
                root: lo + i as i64,
                eta: shift,
                dual: false,
            })
            .collect(),
        transition,
        twist,
    })
}

/// `L^s (x) O(twist)` from the eta-frames.
pub fn line_power(ctx: &CurveCtx, s: i64, twist: DivisorRec) -> Result<BundleRec> {
    let name = format!("L^{s}({})", describe_divisor(&twist));
    sym_block(ctx, 0, 0, s, twist, name)
}

/// The rank two bundle spanned by `1` and the q-th root of `z`.
pub fn make_e(ctx: &CurveCtx) -> Result<BundleRec> {
    sym_block(ctx, 0, 1, 0, DivisorRec::at_infinity(0), "E")
}

/// `S^k(E) (x) L^shift (x) O(twist)`; the zero bundle when `k < 0`.
pub fn sym_power(ctx: &CurveCtx, k: i64, shift: i64, twist: DivisorRec) -> Result<BundleRec> {
    let name = format!("S^{k}E.L^{shift}({})", describe_divisor(&twist));
    sym_block(ctx, 0, k, shift, twist, name)
}

/// `(S^{q-2}E / S^{r-1}E) (x) L^2 (x) O(twist)`; `r = q-1` gives the zero bundle.
pub fn make_sym_quotient(ctx: &CurveCtx, r: i64, twist: DivisorRec) -> Result<BundleRec> {
    let q = ctx.q() as i64;
    if r < 0 || r > q - 1 {
        return Err(Error::RankOutOfRange { r, max: q - 1 });
    }
    let name = format!("Sq^{r}({})", describe_divisor(&twist));
    sym_block(ctx, r, q - 2, 2, twist, name)
}

#[derive(Clone, Debug)]
pub struct BundleInvariants {
    pub degree: i64,
    pub det_valuation: i64,
    pub dual: BundleRec,
    /// Degrees of the diagonal line subquotients, twist included.
    pub graded_degrees: Vec<i64>,
}

pub fn bundle_invariants(ctx: &CurveCtx, b: &BundleRec) -> Result<BundleInvariants> {
    let twist_deg = b.twist.degree();
    let diag = b.diagonal()?;
    let det_valuation = diag.iter().map(|m| m.exp).sum();
    Ok(BundleInvariants {
        degree: b.degree()?,
        det_valuation,
        dual: b.dual(ctx.field())?,
        graded_degrees: diag.iter().map(|m| m.exp + twist_deg).collect(),
    })
}

/// Laurent polynomial in `y`.
type Laurent = BTreeMap<i64, FieldElem>;

fn laurent_add_term(p: &mut Laurent, exp: i64, c: FieldElem, f: &FieldDesc) {
    let v = f.add(p.get(&exp).copied().unwrap_or(FieldElem::ZERO), c);
    if v.is_zero() {
        p.remove(&exp);
    } else {
        p.insert(exp, v);
    }
}

impl BundleRec {
    pub fn zero(name: impl Into<String>) -> BundleRec {
        BundleRec {
            name: name.into(),
            rank: 0,
            frame_labels: Vec::new(),
            transition: Vec::new(),
            twist: DivisorRec::at_infinity(0),
        }
    }

    pub fn is_upper_triangular(&self) -> bool {
        (0..self.rank).all(|i| (0..i).all(|j| self.transition[i][j].is_none()))
    }

    pub fn is_lower_triangular(&self) -> bool {
        (0..self.rank).all(|i| (i + 1..self.rank).all(|j| self.transition[i][j].is_none()))
    }

    fn diagonal(&self) -> Result<Vec<Monomial>> {
        if !(self.is_upper_triangular() || self.is_lower_triangular()) {
            return Err(Error::UnsupportedDivisor(format!(
                "transition of {} is not triangular",
                self.name
            )));
        }
        (0..self.rank)
            .map(|i| {
                self.transition[i][i].ok_or_else(|| {
                    Error::UnsupportedDivisor(format!("singular transition in {}", self.name))
                })
            })
            .collect()
    }

    /// `v(det T) + rank * deg(twist)`.
    pub fn degree(&self) -> Result<i64> {
        let det: i64 = self.diagonal()?.iter().map(|m| m.exp).sum();
        Ok(det + self.rank as i64 * self.twist.degree())
    }

    /// Inverse of the transition; every entry must again be a monomial.
    #[allow(clippy::needless_range_loop)]
    pub fn inverse_transition(&self, f: &FieldDesc) -> Result<Vec<Vec<Option<Monomial>>>> {
        let n = self.rank;
        let lower = !self.is_upper_triangular();
        if lower && !self.is_lower_triangular() {
            return Err(Error::UnsupportedDivisor(format!(
                "transition of {} is not triangular",
                self.name
            )));
        }
        // Work with an upper triangular matrix; transpose in and out if needed.
        let get = |i: usize, j: usize| {
            if lower {
                self.transition[j][i]
            } else {
                self.transition[i][j]
            }
        };
        let diag = self.diagonal()?;
        let mut inv: Vec<Vec<Laurent>> = vec![vec![Laurent::new(); n]; n];
        for j in 0..n {
            for i in (0..=j).rev() {
                let d = diag[i];
                let dinv = f.inv(d.coef);
                if i == j {
                    inv[i][j].insert(-d.exp, dinv);
                    continue;
                }
                let mut acc = Laurent::new();
                for k in i + 1..=j {
                    if let Some(m) = get(i, k) {
                        for (&e, &c) in &inv[k][j] {
                            laurent_add_term(&mut acc, e + m.exp, f.mul(c, m.coef), f);
                        }
                    }
                }
                let scale = f.neg(dinv);
                inv[i][j] = acc
                    .into_iter()
                    .map(|(e, c)| (e - d.exp, f.mul(c, scale)))
                    .collect();
            }
        }
        let mut out = vec![vec![None; n]; n];
        for i in 0..n {
            for j in 0..n {
                let entry = &inv[i][j];
                let (ri, rj) = if lower { (j, i) } else { (i, j) };
                out[ri][rj] = match entry.len() {
                    0 => None,
                    1 => {
                        let (&exp, &coef) = entry.iter().next().unwrap();
                        Some(Monomial { coef, exp })
                    }
                    _ => return Err(Error::NonMonomialInverse { row: ri, col: rj }),
                };
            }
        }
        Ok(out)
    }

    /// Inverse-transpose transition with negated twist.
    pub fn dual(&self, f: &FieldDesc) -> Result<BundleRec> {
        let inv = self.inverse_transition(f)?;
        let n = self.rank;
        let transition = (0..n)
            .map(|b| (0..n).map(|j| inv[j][b]).collect())
            .collect();
        Ok(BundleRec {
            name: match self.name.strip_prefix("dual ") {
                Some(inner) => inner.to_string(),
                None => format!("dual {}", self.name),
            },
            rank: n,
            frame_labels: self
                .frame_labels
                .iter()
                .map(|l| FrameLabel {
                    dual: !l.dual,
                    ..*l
                })
                .collect(),
            transition,
            twist: self.twist.negate(),
        })
    }

    /// `self (x) O(k * inf)`.
    pub fn twist_infinity(&self, k: i64) -> BundleRec {
        BundleRec {
            name: format!("{}({:+}inf)", self.name, k),
            twist: self.twist.plus_infinity(k),
            ..self.clone()
        }
    }

    /// `omega (x) self^dual`, whose sections compute `h^1(self)`.
    pub fn serre_dual(&self, ctx: &CurveCtx) -> Result<BundleRec> {
        let d = self.dual(ctx.field())?;
        Ok(BundleRec {
            name: format!("K.dual {}", self.name),
            twist: d.twist.plus_infinity(ctx.params.canonical_degree()),
            ..d
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::curve_init;

    #[test]
    fn e_transition_for_two_one_three() {
        let c = curve_init(2, 1, 3).unwrap();
        let e = make_e(&c).unwrap();
        let exps: Vec<Vec<Option<i64>>> = e
            .transition
            .iter()
            .map(|r| r.iter().map(|m| m.map(|m| m.exp)).collect())
            .collect();
        assert_eq!(exps, vec![vec![Some(0), Some(-3)], vec![None, Some(9)]]);
        assert_eq!(e.degree().unwrap(), 9);
    }

    #[test]
    fn pascal_row_mod_two() {
        let c = curve_init(2, 2, 5).unwrap();
        let s = make_sym_quotient(&c, 0, DivisorRec::at_infinity(0)).unwrap();
        assert_eq!(s.rank, 3);
        // C(2,1) = 2 vanishes mod 2.
        assert!(s.transition[1][2].is_none());
        assert!(s.transition[0][2].is_some());
        assert!(s.transition[0][1].is_some());
    }

    #[test]
    fn sym_quotient_range() {
        let c = curve_init(3, 1, 4).unwrap();
        assert!(matches!(
            make_sym_quotient(&c, 3, DivisorRec::at_infinity(0)),
            Err(Error::RankOutOfRange { r: 3, max: 2 })
        ));
        assert_eq!(
            make_sym_quotient(&c, 2, DivisorRec::at_infinity(0))
                .unwrap()
                .rank,
            0
        );
        let top = make_sym_quotient(&c, 1, DivisorRec::at_infinity(0)).unwrap();
        assert_eq!(top.rank, 1);
        assert_eq!(top.degree().unwrap(), 3 * c.params.alpha_exponent());
    }

    #[test]
    fn degree_of_twisted_quotient() {
        let c = curve_init(3, 1, 4).unwrap();
        let s = make_sym_quotient(&c, 0, DivisorRec::at_infinity(-9)).unwrap();
        let inv = bundle_invariants(&c, &s).unwrap();
        assert_eq!(inv.degree, 162);
        assert_eq!(inv.graded_degrees.iter().sum::<i64>(), 162);
        assert_eq!(inv.dual.degree().unwrap(), -162);
    }

    #[test]
    fn double_dual_is_identity() {
        let c = curve_init(2, 2, 5).unwrap();
        let s = make_sym_quotient(&c, 0, DivisorRec::at_infinity(-7)).unwrap();
        let dd = s.dual(c.field()).unwrap().dual(c.field()).unwrap();
        assert_eq!(dd, s);
    }
}
