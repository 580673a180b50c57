//! The plane curve `Y^{qe} - X^{qe-1} Y = X Z^{qe-1}` and its affine chart
//! `y1^{qe} - y1 = z^{qe-1}` away from the point at infinity.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::{Arc, Mutex};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::ff::{
    make_field, roots_in_field_seeded, Field, FieldDesc, FieldElem, Poly, DEFAULT_SPLIT_SEED,
};
use crate::series::{expand_basics, required_precision, CurveSeries, Series};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct CurveParams {
    pub p: u64,
    pub n: u32,
    pub e: u64,
}

impl CurveParams {
    pub fn new(p: u64, n: u32, e: u64) -> CurveParams {
        CurveParams { p, n, e }
    }

    pub fn q(&self) -> u64 {
        self.p.pow(self.n)
    }

    pub fn qe(&self) -> u64 {
        self.q() * self.e
    }

    /// `e(qe-3)`: the exponent of `y` in the unit `alpha`, and `deg L`.
    pub fn alpha_exponent(&self) -> i64 {
        self.e as i64 * (self.qe() as i64 - 3)
    }

    /// `2g - 2 = qe(qe-3)`.
    pub fn canonical_degree(&self) -> i64 {
        let qe = self.qe() as i64;
        qe * (qe - 3)
    }

    pub fn genus(&self) -> i64 {
        self.canonical_degree() / 2 + 1
    }
}

impl fmt::Display for CurveParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(p={}, n={}, e={})", self.p, self.n, self.e)
    }
}

/// `z^a y1^b` on the affine chart, `0 <= b < qe`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Mono {
    pub a: u32,
    pub b: u32,
}

impl Mono {
    /// Pole order at infinity.
    pub fn pole(&self, qe: u64) -> i64 {
        self.a as i64 * qe as i64 + self.b as i64 * (qe as i64 - 1)
    }
}

pub struct CurveCtx {
    pub params: CurveParams,
    pub genus: i64,
    pub semigroup_generators: (u64, u64),
    pub series: CurveSeries,
    z_powers: Mutex<Vec<Arc<Series>>>,
}

impl fmt::Debug for CurveCtx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CurveCtx")
            .field("params", &self.params)
            .field("genus", &self.genus)
            .field("precision", &self.series.precision)
            .finish()
    }
}

pub fn curve_init(p: u64, n: u32, e: u64) -> Result<CurveCtx> {
    let params = CurveParams::new(p, n, e);
    curve_init_with_precision(params, None)
}

pub fn curve_init_with_precision(
    params: CurveParams,
    precision: Option<usize>,
) -> Result<CurveCtx> {
    if !crate::ff::is_prime(params.p) {
        return Err(Error::NotPrime(params.p));
    }
    if params.n == 0 || params.e == 0 {
        return Err(Error::DegenerateParams("n and e must be positive".into()));
    }
    let qe = params.qe();
    if qe < 4 {
        return Err(Error::DegenerateParams(format!("qe = {qe} < 4")));
    }
    check_smoothness(params)?;
    let genus = params.genus();
    let gaps = semigroup_gap_count(qe - 1, qe);
    if gaps as i64 != genus {
        return Err(Error::SmoothnessCheckFailed(format!(
            "genus {genus} disagrees with {gaps} Weierstrass gaps"
        )));
    }
    let precision = precision.unwrap_or_else(|| required_precision(qe));
    let series = expand_basics(params, precision)?;
    Ok(CurveCtx {
        params,
        genus,
        semigroup_generators: (qe - 1, qe),
        series,
        z_powers: Mutex::new(Vec::new()),
    })
}

/// Number of gaps of the numerical semigroup generated by coprime `a`, `b`.
pub fn semigroup_gap_count(a: u64, b: u64) -> u64 {
    let conductor = (a - 1) * (b - 1);
    let mut member = vec![false; conductor as usize + 1];
    member[0] = true;
    for v in 1..=conductor as usize {
        member[v] = (v >= a as usize && member[v - a as usize])
            || (v >= b as usize && member[v - b as usize]);
    }
    member.iter().filter(|m| !**m).count() as u64
}

/// Homogeneous polynomial in X, Y, Z with coefficients mod p.
#[derive(Clone, Debug, PartialEq, Eq)]
struct Ternary {
    p: u64,
    terms: BTreeMap<[u64; 3], u64>,
}

impl Ternary {
    fn new(p: u64, terms: &[(i64, [u64; 3])]) -> Ternary {
        let mut t = Ternary {
            p,
            terms: BTreeMap::new(),
        };
        for &(c, e) in terms {
            t.add_term(c.rem_euclid(p as i64) as u64, e);
        }
        t
    }

    fn add_term(&mut self, c: u64, e: [u64; 3]) {
        let v = (self.terms.get(&e).copied().unwrap_or(0) + c) % self.p;
        if v == 0 {
            self.terms.remove(&e);
        } else {
            self.terms.insert(e, v);
        }
    }

    fn partial(&self, var: usize) -> Ternary {
        let mut out = Ternary {
            p: self.p,
            terms: BTreeMap::new(),
        };
        for (&e, &c) in &self.terms {
            if e[var] == 0 {
                continue;
            }
            let mut ne = e;
            ne[var] -= 1;
            out.add_term(c * (e[var] % self.p) % self.p, ne);
        }
        out
    }

    /// Sets the variables in `vars` to zero.
    fn vanish(&self, vars: &[usize]) -> Ternary {
        let terms = self
            .terms
            .iter()
            .filter(|(e, _)| vars.iter().all(|&v| e[v] == 0))
            .map(|(&e, &c)| (e, c))
            .collect();
        Ternary { p: self.p, terms }
    }

    /// If this is a single pure power of one variable, that variable.
    fn pure_power_variable(&self) -> Option<usize> {
        if self.terms.len() != 1 {
            return None;
        }
        let (e, _) = self.terms.iter().next().unwrap();
        let nz: Vec<usize> = (0..3).filter(|&i| e[i] > 0).collect();
        (nz.len() == 1).then(|| nz[0])
    }
}

/// Symbolic Jacobian argument: the partials force X = 0, then Z = 0, then Y = 0.
fn check_smoothness(params: CurveParams) -> Result<()> {
    let qe = params.qe();
    let (x, y, z) = (0usize, 1usize, 2usize);
    let f = Ternary::new(
        params.p,
        &[(1, [0, qe, 0]), (-1, [qe - 1, 1, 0]), (-1, [1, 0, qe - 1])],
    );
    let fail = |msg: &str| Err(Error::SmoothnessCheckFailed(msg.to_string()));
    if f.partial(y).pure_power_variable() != Some(x) {
        return fail("F_Y is not a pure power of X");
    }
    if f.partial(x).vanish(&[x]).pure_power_variable() != Some(z) {
        return fail("F_X with X = 0 is not a pure power of Z");
    }
    if f.vanish(&[x, z]).pure_power_variable() != Some(y) {
        return fail("F with X = Z = 0 is not a pure power of Y");
    }
    Ok(())
}

impl CurveCtx {
    pub fn field(&self) -> &Field {
        &self.series.field
    }

    pub fn qe(&self) -> u64 {
        self.params.qe()
    }

    pub fn q(&self) -> u64 {
        self.params.q()
    }

    /// `l = e(qe-3)/(q+1)` when integral.
    pub fn l(&self) -> Option<i64> {
        let num = self.params.alpha_exponent();
        let den = self.q() as i64 + 1;
        (num % den == 0).then(|| num / den)
    }

    /// `z^n` as a series at infinity (cached).
    pub fn z_power(&self, n: usize) -> Arc<Series> {
        let mut cache = self.z_powers.lock().expect("z-power cache poisoned");
        let f = &*self.series.field;
        if cache.is_empty() {
            let one = Series::monomial(FieldElem::ONE, 0, self.series.precision as i64);
            cache.push(Arc::new(one));
        }
        while cache.len() <= n {
            let next = cache.last().unwrap().mul(&self.series.z, f);
            cache.push(Arc::new(next));
        }
        cache[n].clone()
    }

    /// Series of `z^a y1^b = y^b z^{a+b}`.
    pub fn mono_series(&self, m: Mono) -> Series {
        self.z_power((m.a + m.b) as usize).shift(m.b as i64)
    }

    pub fn is_on_curve(&self, f: &FieldDesc, z: FieldElem, y1: FieldElem) -> bool {
        let qe = self.qe();
        f.sub(f.pow(y1, qe), y1) == f.pow(z, qe - 1)
    }
}

/// `dim L(M * inf)` via pole-order counting.
pub fn h0_inf_count(ctx: &CurveCtx, m: i64) -> usize {
    if m < 0 {
        return 0;
    }
    let qe = ctx.qe() as i64;
    (0..qe)
        .map(|b| {
            let rest = m - b * (qe - 1);
            if rest < 0 {
                0
            } else {
                (rest / qe + 1) as usize
            }
        })
        .sum()
}

/// Monomials with pole order at most `m`, sorted by (pole order, b).
pub fn monomial_basis(ctx: &CurveCtx, m: i64) -> Vec<Mono> {
    let qe = ctx.qe();
    let mut out = Vec::new();
    if m < 0 {
        return out;
    }
    for b in 0..qe as u32 {
        let mut a = 0u32;
        loop {
            let mono = Mono { a, b };
            if mono.pole(qe) > m {
                break;
            }
            out.push(mono);
            a += 1;
        }
    }
    out.sort_by_key(|mono| (mono.pole(qe), mono.b));
    debug_assert!(out.windows(2).all(|w| w[0].pole(qe) < w[1].pole(qe)));
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum PointKind {
    Affine,
    Infinity,
}

#[derive(Clone, Debug)]
pub struct PointRec {
    pub field: Field,
    pub z: FieldElem,
    pub y1: FieldElem,
    pub kind: PointKind,
}

impl PartialEq for PointRec {
    fn eq(&self, other: &Self) -> bool {
        self.kind == other.kind
            && self.z == other.z
            && self.y1 == other.y1
            && *self.field == *other.field
    }
}

impl Eq for PointRec {}

impl PointRec {
    pub fn infinity(field: Field) -> PointRec {
        PointRec {
            field,
            z: FieldElem::ZERO,
            y1: FieldElem::ZERO,
            kind: PointKind::Infinity,
        }
    }

    pub fn is_affine(&self) -> bool {
        self.kind == PointKind::Affine
    }

    pub fn describe(&self) -> String {
        match self.kind {
            PointKind::Infinity => "inf".into(),
            PointKind::Affine => format!(
                "(z={:?}, y1={:?}) over {}",
                self.field.to_coeffs(self.z),
                self.field.to_coeffs(self.y1),
                self.field.describe()
            ),
        }
    }
}

/// `T^{qe} - T - c^{qe-1}`; its roots are the `y1`-coordinates over `z = c`.
pub fn fiber_poly(ctx: &CurveCtx, f: &FieldDesc, c: FieldElem) -> Poly {
    let qe = ctx.qe() as usize;
    let mut coeffs = vec![FieldElem::ZERO; qe + 1];
    coeffs[0] = f.neg(f.pow(c, qe as u64 - 1));
    coeffs[1] = f.neg(FieldElem::ONE);
    coeffs[qe] = FieldElem::ONE;
    Poly::from_coeffs(coeffs)
}

/// Rational points of the fiber `z = c`.
pub fn fiber_points(ctx: &CurveCtx, c: FieldElem, field: &Field) -> Result<Vec<PointRec>> {
    fiber_points_seeded(ctx, c, field, DEFAULT_SPLIT_SEED)
}

/// As [`fiber_points`], with an explicit seed for the root splitting.
pub fn fiber_points_seeded(
    ctx: &CurveCtx,
    c: FieldElem,
    field: &Field,
    seed: u64,
) -> Result<Vec<PointRec>> {
    if c.is_zero() {
        return Err(Error::ZeroFiberValue);
    }
    if field.characteristic() != ctx.params.p {
        return Err(Error::FieldMismatch(
            "fiber field has the wrong characteristic".into(),
        ));
    }
    let roots = roots_in_field_seeded(field, &fiber_poly(ctx, field, c), seed)?;
    Ok(roots
        .into_iter()
        .map(|t| PointRec {
            field: field.clone(),
            z: c,
            y1: t,
            kind: PointKind::Affine,
        })
        .collect())
}

/// Deterministic sweep of admissible affine points: fields F_{p^k}, k = 1..=kmax,
/// fiber values in encoding order, skipping points already defined over a
/// proper subfield.
pub fn sample_points(ctx: &CurveCtx, count: usize, kmax: u32) -> Result<Vec<PointRec>> {
    sample_points_seeded(ctx, count, kmax, DEFAULT_SPLIT_SEED)
}

pub fn sample_points_seeded(
    ctx: &CurveCtx,
    count: usize,
    kmax: u32,
    seed: u64,
) -> Result<Vec<PointRec>> {
    let mut out = Vec::new();
    for k in 1..=kmax {
        let field = make_field(ctx.params.p, k)?;
        let proper: Vec<u32> = (1..k).filter(|d| k % d == 0).collect();
        for c in field.elements().skip(1) {
            for pt in fiber_points_seeded(ctx, c, &field, seed)? {
                let old = proper
                    .iter()
                    .any(|&d| field.in_subfield(pt.z, d) && field.in_subfield(pt.y1, d));
                if old {
                    continue;
                }
                out.push(pt);
                if out.len() == count {
                    return Ok(out);
                }
            }
        }
    }
    Ok(out)
}

/// `inf_mult * inf + sum(mult * P)` with every affine `P` in a single `z`-fiber.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DivisorRec {
    pub inf_mult: i64,
    pub affine: Vec<(PointRec, i8)>,
}

impl DivisorRec {
    pub fn at_infinity(m: i64) -> DivisorRec {
        DivisorRec {
            inf_mult: m,
            affine: Vec::new(),
        }
    }

    pub fn with_point(mut self, pt: PointRec, mult: i8) -> DivisorRec {
        self.affine.push((pt, mult));
        self
    }

    pub fn degree(&self) -> i64 {
        self.inf_mult + self.affine.iter().map(|(_, m)| *m as i64).sum::<i64>()
    }

    pub fn negate(&self) -> DivisorRec {
        DivisorRec {
            inf_mult: -self.inf_mult,
            affine: self.affine.iter().map(|(p, m)| (p.clone(), -m)).collect(),
        }
    }

    pub fn plus_infinity(&self, k: i64) -> DivisorRec {
        DivisorRec {
            inf_mult: self.inf_mult + k,
            affine: self.affine.clone(),
        }
    }

    /// The field carrying the affine points, if any.
    pub fn field(&self) -> Option<&Field> {
        self.affine.first().map(|(p, _)| &p.field)
    }

    /// Enforces the support restriction: one fiber `z = c != 0`, distinct
    /// on-curve points, multiplicities all `+1` or all `-1`.
    pub fn validate(&self, ctx: &CurveCtx) -> Result<()> {
        let Some((first, _)) = self.affine.first() else {
            return Ok(());
        };
        let bad = |m: &str| Err(Error::UnsupportedDivisor(m.to_string()));
        let sign = self.affine[0].1;
        for (i, (pt, m)) in self.affine.iter().enumerate() {
            if !pt.is_affine() {
                return bad("affine part contains the point at infinity");
            }
            if *m != 1 && *m != -1 {
                return bad("multiplicities must be +1 or -1");
            }
            if *m != sign {
                return bad("mixed signs within one fiber");
            }
            if *pt.field != *first.field || pt.z != first.z {
                return bad("points lie in different fibers or fields");
            }
            if pt.z.is_zero() {
                return bad("fiber z = 0 is excluded");
            }
            if !ctx.is_on_curve(&pt.field, pt.z, pt.y1) {
                return bad("point is not on the curve");
            }
            if self.affine[..i].iter().any(|(o, _)| o.y1 == pt.y1) {
                return bad("repeated point");
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct TranslationCheck {
    pub exact: bool,
    /// Nonzero remainder modulo the chart equation, as `coef*x^i*y^j` terms.
    pub witness: Option<String>,
    pub numeric_points: usize,
    pub numeric_pass: bool,
}

impl TranslationCheck {
    pub fn pass(&self) -> bool {
        self.exact && self.numeric_pass
    }
}

/// Checks `z - y^{-qe} = y^{qe(qe-3)} gamma` on the chart `y^{qe} - x^{qe-1} y = x`.
pub fn verify_translation_identity(ctx: &CurveCtx) -> Result<TranslationCheck> {
    verify_translation_identity_with(ctx, ctx.params.canonical_degree())
}

/// As [`verify_translation_identity`], with `y^{shift}` in place of `y^{qe(qe-3)}`.
pub fn verify_translation_identity_with(ctx: &CurveCtx, shift: i64) -> Result<TranslationCheck> {
    let p = ctx.params.p;
    let qe = ctx.qe() as i64;
    // z - y^{-qe} - y^{shift} (x/y^{qe})^{qe-2} y, with z = 1/x.
    let mut diff: BTreeMap<(i64, i64), i64> = BTreeMap::new();
    let mut add = |ex: i64, ey: i64, c: i64| {
        let v = diff.entry((ex, ey)).or_insert(0);
        *v = (*v + c).rem_euclid(p as i64);
    };
    add(-1, 0, 1);
    add(0, -qe, -1);
    add(qe - 2, shift + 1 - qe * (qe - 2), -1);
    let min_x = diff.keys().map(|k| k.0).min().unwrap_or(0).min(0);
    let min_y = diff.keys().map(|k| k.1).min().unwrap_or(0).min(0);
    // Polynomial in y with coefficients in F_p[x]: y_exp -> (x_exp -> coef).
    let mut poly: BTreeMap<i64, BTreeMap<i64, i64>> = BTreeMap::new();
    for (&(ex, ey), &c) in &diff {
        if c != 0 {
            *poly
                .entry(ey - min_y)
                .or_default()
                .entry(ex - min_x)
                .or_insert(0) += c;
        }
    }
    // Reduce with y^{qe} = x^{qe-1} y + x.
    while let Some((&top, _)) = poly.iter().next_back().filter(|(&d, _)| d >= qe) {
        let row = poly.remove(&top).unwrap();
        for (ex, c) in row {
            *poly
                .entry(top - qe + 1)
                .or_default()
                .entry(ex + qe - 1)
                .or_insert(0) += c;
            *poly.entry(top - qe).or_default().entry(ex + 1).or_insert(0) += c;
        }
    }
    let mut remainder = Vec::new();
    for (ey, row) in &poly {
        for (ex, c) in row {
            let c = c.rem_euclid(p as i64);
            if c != 0 {
                remainder.push(format!("{c}*x^{ex}*y^{ey}"));
            }
        }
    }
    let exact = remainder.is_empty();

    let points = sample_points(ctx, 20, 12)?;
    let numeric_pass = points.iter().all(|pt| {
        let f = &*pt.field;
        let x = f.inv(pt.z);
        let y = f.mul(pt.y1, x);
        let pow_i = |b: FieldElem, e: i64| {
            if e >= 0 {
                f.pow(b, e as u64)
            } else {
                f.inv(f.pow(b, (-e) as u64))
            }
        };
        let gamma = f.mul(pow_i(f.mul(x, pow_i(y, -qe)), qe - 2), y);
        let lhs = f.sub(pt.z, pow_i(y, -qe));
        lhs == f.mul(pow_i(y, shift), gamma)
    });
    Ok(TranslationCheck {
        exact,
        witness: (!exact).then(|| remainder.join(" + ")),
        numeric_points: points.len(),
        numeric_pass,
    })
}
