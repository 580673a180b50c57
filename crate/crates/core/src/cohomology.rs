//! Global sections of two-chart bundles by valuation linear algebra, Serre
//! duality for `h^1`, and the connecting-map bookkeeping of the filtration
//! `0 -> L^{r+2} -> Sq^r -> Sq^{r+1} -> 0`.
//!
//! A section is a tuple of affine-chart coordinates `u_j`. With a twist
//! `d * inf + sum(+-P)` supported on one fiber `z = c`, each `u_j` is written
//! `P_j / (z - c)` when the twist has positive points and `P_j` otherwise,
//! with `P_j` a polynomial in `z, y1`. The conditions are:
//!
//! * at infinity: every coordinate of `T * (P_j)` has valuation at least
//!   `-d` (shifted by `qe` when a denominator is present, since
//!   `v(1/(z - c)) = qe`);
//! * on the fiber: reducing `P_j(c, T)` modulo the fiber polynomial, the
//!   result must be divisible by the product of `T - y1(P)` over the fiber
//!   points that carry no pole allowance (or over the `-1` points).
//!
//! The first set has coefficients in the prime field and is solved there;
//! the fiber conditions are then imposed on that kernel over the point's field.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::bundle::{line_power, make_sym_quotient, BundleRec};
use crate::curve::{fiber_poly, monomial_basis, CurveCtx, DivisorRec, Mono};
use crate::error::{Error, Result};
use crate::ff::{binomial_mod, Field, FieldDesc, FieldElem, Matrix, Poly};
use crate::series::Series;

/// Regular function on the affine chart (or one with a simple denominator
/// `z - c`), as a combination of monomials `z^a y1^b`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FuncElem {
    pub terms: Vec<(Mono, FieldElem)>,
    pub denom: Option<FieldElem>,
}

impl FuncElem {
    pub fn is_zero(&self) -> bool {
        self.terms.iter().all(|(_, c)| c.is_zero())
    }

    /// Value of the numerator at `(z, y1)`.
    pub fn eval_numerator(&self, f: &FieldDesc, z: FieldElem, y1: FieldElem) -> FieldElem {
        self.terms.iter().fold(FieldElem::ZERO, |acc, (m, c)| {
            let v = f.mul(f.pow(z, m.a as u64), f.pow(y1, m.b as u64));
            f.add(acc, f.mul(*c, v))
        })
    }

    /// Numerator as a series at infinity.
    pub fn numerator_series(&self, ctx: &CurveCtx, f: &FieldDesc) -> Series {
        let mut acc: Option<Series> = None;
        for (m, c) in &self.terms {
            let s = ctx.mono_series(*m).scale(*c, f);
            acc = Some(match acc {
                None => s,
                Some(a) => a.add(&s, f),
            });
        }
        acc.unwrap_or_else(|| Series::zero(ctx.series.precision as i64))
    }

    /// Multiplies every coefficient by `z^k` (used by mutation tests).
    pub fn times_z_power(&self, k: u32) -> FuncElem {
        FuncElem {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (Mono { a: m.a + k, b: m.b }, *c))
                .collect(),
            denom: self.denom,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SectionRec {
    pub field: Field,
    pub coords: Vec<FuncElem>,
}

impl SectionRec {
    pub fn zero(field: Field, rank: usize) -> SectionRec {
        SectionRec {
            field,
            coords: vec![
                FuncElem {
                    terms: Vec::new(),
                    denom: None,
                };
                rank
            ],
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(FuncElem::is_zero)
    }
}

#[derive(Clone, Debug)]
pub struct BasisRec {
    pub bundle: BundleRec,
    pub field: Field,
    pub sections: Vec<SectionRec>,
    pub dim: usize,
    /// Pole-order bounds used for the numerators, per coordinate.
    pub pole_bounds: Vec<i64>,
}

impl BasisRec {
    /// SHA-256 over the coefficient data, for certificates.
    pub fn fingerprint(&self) -> String {
        let mut h = Sha256::new();
        h.update(self.bundle.name.as_bytes());
        for s in &self.sections {
            for c in &s.coords {
                for (m, v) in &c.terms {
                    h.update(m.a.to_le_bytes());
                    h.update(m.b.to_le_bytes());
                    h.update(v.raw().to_le_bytes());
                }
                h.update([0xff]);
            }
            h.update([0xfe]);
        }
        h.finalize().iter().map(|b| format!("{b:02x}")).collect()
    }
}

/// Kernel of the conditions at infinity, over the prime field.
struct InfinityKernel {
    columns: Vec<(usize, Mono)>,
    vectors: Vec<Vec<FieldElem>>,
    pole_bounds: Vec<i64>,
}

type KernelCache = Mutex<HashMap<String, Arc<InfinityKernel>>>;

fn kernel_cache() -> &'static KernelCache {
    static CACHE: std::sync::OnceLock<KernelCache> = std::sync::OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

fn cache_key(ctx: &CurveCtx, b: &BundleRec, d_eff: i64, slack: i64) -> String {
    let mut key = format!(
        "{:?}|{}|{}|{}|{}",
        ctx.params, ctx.series.precision, d_eff, slack, b.rank
    );
    for row in &b.transition {
        for m in row {
            match m {
                Some(m) => key.push_str(&format!("|{}:{}", m.coef.raw(), m.exp)),
                None => key.push_str("|-"),
            }
        }
    }
    key
}

fn infinity_kernel(
    ctx: &CurveCtx,
    b: &BundleRec,
    d_eff: i64,
    slack: i64,
) -> Result<Arc<InfinityKernel>> {
    let key = cache_key(ctx, b, d_eff, slack);
    if let Some(k) = kernel_cache()
        .lock()
        .expect("kernel cache poisoned")
        .get(&key)
    {
        return Ok(k.clone());
    }
    let kernel = Arc::new(compute_infinity_kernel(ctx, b, d_eff, slack)?);
    kernel_cache()
        .lock()
        .expect("kernel cache poisoned")
        .insert(key, kernel.clone());
    Ok(kernel)
}

fn compute_infinity_kernel(
    ctx: &CurveCtx,
    b: &BundleRec,
    d_eff: i64,
    slack: i64,
) -> Result<InfinityKernel> {
    let f = &**ctx.field();
    let qe = ctx.qe();
    let n = b.rank;
    let tinv = b.inverse_transition(f)?;
    let pole_bounds: Vec<i64> = (0..n)
        .map(|j| {
            tinv[j]
                .iter()
                .flatten()
                .map(|m| d_eff - m.exp)
                .max()
                .expect("invertible transition has a nonzero entry in every row")
                + slack
        })
        .collect();
    let mut columns: Vec<(i64, usize, usize, Mono)> = Vec::new();
    for (j, &bound) in pole_bounds.iter().enumerate() {
        for (idx, m) in monomial_basis(ctx, bound).into_iter().enumerate() {
            columns.push((m.pole(qe), j, idx, m));
        }
    }
    columns.sort_by_key(|c| (c.0, c.1, c.2));

    // Row (b, k): coefficient of y^k in infinity coordinate b, for k < -d_eff.
    let limit = -d_eff;
    let mut rows: BTreeMap<(usize, i64), Vec<(usize, FieldElem)>> = BTreeMap::new();
    for (col, &(_, j, _, mono)) in columns.iter().enumerate() {
        let zp = ctx.z_power((mono.a + mono.b) as usize);
        let shift = mono.b as i64;
        for (bi, row) in b.transition.iter().enumerate() {
            let Some(t) = row[j] else { continue };
            let offset = shift + t.exp;
            if zp.cutoff() + offset < limit {
                return Err(Error::PrecisionTooLow {
                    needed: limit - 1 - offset,
                    available: zp.cutoff(),
                    context: format!("conditions at infinity for {}", b.name),
                });
            }
            for (e, c) in zp.terms() {
                let k = e + offset;
                if k >= limit {
                    break;
                }
                rows.entry((bi, k))
                    .or_default()
                    .push((col, f.mul(c, t.coef)));
            }
        }
    }
    let mut m = Matrix::zeros(rows.len(), columns.len());
    for (ri, entries) in rows.values().enumerate() {
        for &(col, v) in entries {
            m.set(ri, col, f.add(m.get(ri, col), v));
        }
    }
    let vectors = m.kernel(f);
    Ok(InfinityKernel {
        columns: columns.into_iter().map(|c| (c.1, c.3)).collect(),
        vectors,
        pole_bounds,
    })
}

/// The polynomial whose roots are the fiber points where numerators must vanish.
fn fiber_condition_poly(ctx: &CurveCtx, twist: &DivisorRec, f: &FieldDesc) -> Poly {
    let c = twist.affine[0].0.z;
    let positive = twist.affine[0].1 > 0;
    let prod = twist.affine.iter().fold(Poly::one(), |acc, (pt, _)| {
        acc.mul(&Poly::linear(f, pt.y1), f)
    });
    if positive {
        let (quot, rem) = fiber_poly(ctx, f, c).divrem(&prod, f);
        debug_assert!(rem.is_zero());
        quot
    } else {
        prod
    }
}

fn solve(ctx: &CurveCtx, b: &BundleRec, slack: i64) -> Result<BasisRec> {
    b.twist.validate(ctx)?;
    let n = b.rank;
    let positive = b.twist.affine.first().is_some_and(|(_, m)| *m > 0);
    let field = b
        .twist
        .field()
        .cloned()
        .unwrap_or_else(|| ctx.field().clone());
    if field.characteristic() != ctx.params.p {
        return Err(Error::FieldMismatch(
            "twist points have the wrong characteristic".into(),
        ));
    }
    if n == 0 {
        return Ok(BasisRec {
            bundle: b.clone(),
            field,
            sections: Vec::new(),
            dim: 0,
            pole_bounds: Vec::new(),
        });
    }
    let d_eff = b.twist.inf_mult + if positive { ctx.qe() as i64 } else { 0 };
    let kernel = infinity_kernel(ctx, b, d_eff, slack)?;
    let f = &*field;

    let combos: Vec<Vec<FieldElem>> = if b.twist.affine.is_empty() {
        kernel.vectors.clone()
    } else {
        let c = b.twist.affine[0].0.z;
        let h = fiber_condition_poly(ctx, &b.twist, f);
        let hdeg = h.degree().unwrap_or(0);
        let qe = ctx.qe() as usize;
        let t_pows: Vec<Poly> = (0..qe)
            .map(|e| Poly::monomial(FieldElem::ONE, e).rem(&h, f))
            .collect();
        let max_a = kernel.columns.iter().map(|(_, m)| m.a).max().unwrap_or(0);
        let c_pows: Vec<FieldElem> = (0..=max_a).map(|a| f.pow(c, a as u64)).collect();
        // Column i of the fiber matrix: residues of kernel vector i.
        let mut m = Matrix::zeros(n * hdeg, kernel.vectors.len());
        for (vi, v) in kernel.vectors.iter().enumerate() {
            for (col, &x) in v.iter().enumerate() {
                if x.is_zero() {
                    continue;
                }
                let (j, mono) = kernel.columns[col];
                let w = f.mul(x, c_pows[mono.a as usize]);
                for (d, &tc) in t_pows[mono.b as usize].coeffs().iter().enumerate() {
                    let r = j * hdeg + d;
                    m.set(r, vi, f.add(m.get(r, vi), f.mul(w, tc)));
                }
            }
        }
        m.kernel(f)
            .into_iter()
            .map(|w| {
                let mut out = vec![FieldElem::ZERO; kernel.columns.len()];
                for (vi, &coef) in w.iter().enumerate() {
                    if coef.is_zero() {
                        continue;
                    }
                    for (o, &x) in out.iter_mut().zip(&kernel.vectors[vi]) {
                        if !x.is_zero() {
                            *o = f.add(*o, f.mul(coef, x));
                        }
                    }
                }
                out
            })
            .collect()
    };

    let denom = positive.then(|| b.twist.affine[0].0.z);
    let sections = combos
        .iter()
        .map(|v| {
            let mut coords = vec![
                FuncElem {
                    terms: Vec::new(),
                    denom,
                };
                n
            ];
            for (col, &x) in v.iter().enumerate() {
                if !x.is_zero() {
                    let (j, mono) = kernel.columns[col];
                    coords[j].terms.push((mono, x));
                }
            }
            SectionRec {
                field: field.clone(),
                coords,
            }
        })
        .collect::<Vec<_>>();
    Ok(BasisRec {
        bundle: b.clone(),
        field,
        dim: sections.len(),
        sections,
        pole_bounds: kernel.pole_bounds.clone(),
    })
}

/// Basis of `H^0(C, b)`; recomputed with pole bounds enlarged by `qe` as a
/// consistency check.
pub fn h0_basis(ctx: &CurveCtx, b: &BundleRec) -> Result<BasisRec> {
    let base = solve(ctx, b, 0)?;
    let enlarged = solve(ctx, b, ctx.qe() as i64)?;
    if enlarged.dim != base.dim {
        return Err(Error::BoundInstability {
            base: base.dim,
            enlarged: enlarged.dim,
            bundle: b.name.clone(),
        });
    }
    Ok(base)
}

pub fn h0_dim(ctx: &CurveCtx, b: &BundleRec) -> Result<usize> {
    Ok(h0_basis(ctx, b)?.dim)
}

/// `h^1(b) = h^0(omega (x) b^dual)`.
pub fn h1_dim(ctx: &CurveCtx, b: &BundleRec) -> Result<usize> {
    h0_dim(ctx, &b.serre_dual(ctx)?)
}

/// `deg b + rank b * (1 - g)`.
pub fn chi(ctx: &CurveCtx, b: &BundleRec) -> Result<i64> {
    Ok(b.degree()? + b.rank as i64 * (1 - ctx.genus))
}

/// Infinity coordinates of a section as series (denominators expanded).
pub fn infinity_coordinates(ctx: &CurveCtx, b: &BundleRec, s: &SectionRec) -> Result<Vec<Series>> {
    let f = &*s.field;
    if s.coords.len() != b.rank {
        return Err(Error::NotAGlobalSection(format!(
            "{} coordinates for a rank {} bundle",
            s.coords.len(),
            b.rank
        )));
    }
    let affine: Vec<Series> = s
        .coords
        .iter()
        .map(|u| -> Result<Series> {
            let num = u.numerator_series(ctx, f);
            Ok(match u.denom {
                None => num,
                Some(c) => num.mul(&inverse_z_minus(ctx, f, c)?, f),
            })
        })
        .collect::<Result<_>>()?;
    Ok(b.transition
        .iter()
        .map(|row| {
            row.iter()
                .zip(&affine)
                .filter_map(|(t, u)| t.map(|t| u.shift(t.exp).scale(t.coef, f)))
                .reduce(|a, x| a.add(&x, f))
                .unwrap_or_else(|| Series::zero(ctx.series.precision as i64))
        })
        .collect())
}

/// `1 / (z - c) = sum_i c^i x^{i+1}` at infinity.
fn inverse_z_minus(ctx: &CurveCtx, f: &FieldDesc, c: FieldElem) -> Result<Series> {
    let z = &ctx.series.z;
    let shifted = z.sub(&Series::monomial(c, 0, z.cutoff()), f);
    shifted.inv(f)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PhiDims {
    pub h0_sq_r: usize,
    pub h0_sq_r1: usize,
    pub h0_l: usize,
    pub h1_l: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PhiReport {
    pub r: i64,
    pub m: i64,
    pub big_n: i64,
    pub dims: PhiDims,
    pub phi_rank: i64,
    pub surjective: bool,
    pub w_codim: i64,
}

/// `N = l + 1 - m`, the multiplicity of infinity in the twist.
pub fn delta_multiplicity(ctx: &CurveCtx, m: i64) -> Result<i64> {
    let l = ctx.l().ok_or_else(|| {
        Error::GateFailure(format!("q + 1 does not divide e(qe-3) for {}", ctx.params))
    })?;
    Ok(l + 1 - m)
}

/// Dimension bookkeeping for `phi: H^0(Sq^{r+1}(-D)) -> H^1(L^{r+2}(-D))`.
pub fn phi_report(ctx: &CurveCtx, r: i64, m: i64) -> Result<PhiReport> {
    let q = ctx.q() as i64;
    if r < 0 || r > q - 2 {
        return Err(Error::RankOutOfRange { r, max: q - 2 });
    }
    let big_n = delta_multiplicity(ctx, m)?;
    let delta = DivisorRec::at_infinity(-big_n);
    let sq_r = make_sym_quotient(ctx, r, delta.clone())?;
    let sq_r1 = make_sym_quotient(ctx, r + 1, delta.clone())?;
    let l = line_power(ctx, r + 2, delta)?;
    let dims = PhiDims {
        h0_sq_r: h0_dim(ctx, &sq_r)?,
        h0_sq_r1: h0_dim(ctx, &sq_r1)?,
        h0_l: h0_dim(ctx, &l)?,
        h1_l: h1_dim(ctx, &l)?,
    };
    let phi_rank = dims.h0_sq_r1 as i64 - dims.h0_sq_r as i64 + dims.h0_l as i64;
    Ok(PhiReport {
        r,
        m,
        big_n,
        surjective: phi_rank == dims.h1_l as i64,
        w_codim: dims.h1_l as i64 - phi_rank,
        phi_rank,
        dims,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", content = "value")]
pub enum Valuation {
    Finite(i64),
    /// Every known coefficient below the bound vanishes.
    AtLeast(i64),
    Infinite,
}

impl Valuation {
    pub fn lower_bound(&self) -> Option<i64> {
        match self {
            Valuation::Finite(v) | Valuation::AtLeast(v) => Some(*v),
            Valuation::Infinite => None,
        }
    }

    pub fn at_least(&self, bound: i64) -> bool {
        self.lower_bound().is_none_or(|v| v >= bound)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CocycleCheck {
    pub min_valuation: Valuation,
    /// `v >= 0`: the paired cocycle extends over infinity.
    pub pass: bool,
    /// `v >= N - e(q-r-2)`.
    pub sharp_pass: bool,
    pub sharp_bound: i64,
}

/// Valuation at infinity of `sum_j C(j,r) v_j alpha^{q-2-j} (-beta)^{j-r} y^N`,
/// the pairing of `phi(s)` with `dz (x) eta^{-r-2}`.
pub fn cocycle_regularity(ctx: &CurveCtx, r: i64, m: i64, s: &SectionRec) -> Result<CocycleCheck> {
    let q = ctx.q() as i64;
    if r < 0 || r > q - 2 {
        return Err(Error::RankOutOfRange { r, max: q - 2 });
    }
    let big_n = delta_multiplicity(ctx, m)?;
    let e = ctx.params.e as i64;
    let big_e = ctx.params.alpha_exponent();
    let bundle = make_sym_quotient(ctx, r + 1, DivisorRec::at_infinity(-big_n))?;
    if s.coords.iter().any(|u| u.denom.is_some()) {
        return Err(Error::NotAGlobalSection(
            "coordinates must be regular on the affine chart".into(),
        ));
    }
    let sharp_bound = big_n - e * (q - r - 2);
    let coords = infinity_coordinates(ctx, &bundle, s)?;
    for (bi, c) in coords.iter().enumerate() {
        if c.cutoff() < big_n {
            return Err(Error::PrecisionTooLow {
                needed: big_n - 1,
                available: c.cutoff(),
                context: "cocycle section check".into(),
            });
        }
        if let Some(v) = c.valuation().filter(|&v| v < big_n) {
            return Err(Error::NotAGlobalSection(format!(
                "infinity coordinate {bi} has valuation {v} < N = {big_n}"
            )));
        }
    }
    if s.is_zero() {
        return Ok(CocycleCheck {
            min_valuation: Valuation::Infinite,
            pass: true,
            sharp_pass: true,
            sharp_bound,
        });
    }
    let f = &*s.field;
    let p = ctx.params.p;
    let mut total: Option<Series> = None;
    for (idx, c) in coords.iter().enumerate() {
        let j = r + 1 + idx as i64;
        let binom = binomial_mod(j as u64, r as u64, p);
        if binom == 0 {
            continue;
        }
        let sign = if (j - r) % 2 == 1 {
            f.neg(FieldElem::ONE)
        } else {
            FieldElem::ONE
        };
        let coef = f.mul(f.from_int(binom as i64), sign);
        let term = c.shift((q - 2 - j) * big_e - e * (j - r)).scale(coef, f);
        total = Some(match total {
            None => term,
            Some(t) => t.add(&term, f),
        });
    }
    let min_valuation = match total {
        None => Valuation::Infinite,
        Some(t) => match t.valuation() {
            Some(v) => Valuation::Finite(v),
            None => Valuation::AtLeast(t.cutoff()),
        },
    };
    Ok(CocycleCheck {
        pass: min_valuation.at_least(0),
        sharp_pass: min_valuation.at_least(sharp_bound),
        min_valuation,
        sharp_bound,
    })
}
