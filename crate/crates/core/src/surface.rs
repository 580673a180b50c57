//! The surface side: parameter gates, intersection numbers on `P(E)` and on
//! the cyclic cover `S`, the pushforward of the adjoint bundle to the curve,
//! and the per-point base-point check.

use num_rational::Rational64;
use serde::{Deserialize, Serialize};

use crate::bundle::{describe_divisor, make_sym_quotient, sym_block, BundleRec};
use crate::cohomology::{h0_basis, BasisRec};
use crate::curve::{CurveCtx, DivisorRec, PointRec};
use crate::error::{Error, Result};
use crate::ff::{is_prime, FieldElem};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ParamsRec {
    pub p: u64,
    pub n: u32,
    pub e: u64,
    pub m: i64,
    pub q: i64,
    pub l: i64,
    pub big_n: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GateReport {
    pub p: u64,
    pub n: u32,
    pub e: u64,
    pub m: i64,
    pub q: i64,
    /// `(q+1) | e(qe-3)`.
    pub divisibility: bool,
    /// `l - q - 1 >= e(q-2)`.
    pub star: bool,
    /// The weaker reading `l - q + 1 >= e(q-2)`.
    pub star_printed: bool,
    /// `l + 1 - q >= e(q-2)`, which is what the vanishing argument consumes.
    pub star_needed: bool,
    pub m_in_range: bool,
    pub l: Option<i64>,
    pub big_n: Option<i64>,
    pub violations: Vec<String>,
}

impl GateReport {
    pub fn pass(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn params(&self) -> Result<ParamsRec> {
        if !self.pass() {
            return Err(Error::GateFailure(self.violations.join("; ")));
        }
        Ok(ParamsRec {
            p: self.p,
            n: self.n,
            e: self.e,
            m: self.m,
            q: self.q,
            l: self.l.expect("gates passed"),
            big_n: self.big_n.expect("gates passed"),
        })
    }
}

/// Evaluates the divisibility gate, the `(star)` inequality and `1 <= m <= q`.
/// Gate failures are reported in the result; only malformed input errors.
pub fn check_gates(p: u64, n: u32, e: u64, m: i64) -> Result<GateReport> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if n == 0 || e == 0 {
        return Err(Error::DegenerateParams(format!(
            "n = {n}, e = {e} must be positive"
        )));
    }
    let q = p
        .checked_pow(n)
        .filter(|q| q.checked_mul(e).is_some_and(|qe| qe < 1 << 20))
        .ok_or_else(|| Error::DegenerateParams("q e is too large".into()))? as i64;
    let e = e as i64;
    let num = e * (q * e - 3);
    let divisibility = num % (q + 1) == 0;
    let l = divisibility.then_some(num / (q + 1));
    let need = e * (q - 2);
    let star = l.is_some_and(|l| l - q > need);
    let star_printed = l.is_some_and(|l| l - q + 1 >= need);
    let star_needed = l.is_some_and(|l| l + 1 - q >= need);
    let m_in_range = (1..=q).contains(&m);
    let mut violations = Vec::new();
    if !divisibility {
        violations.push(format!("(■) violated: {} does not divide {}", q + 1, num));
    }
    if let Some(l) = l {
        if !star {
            violations.push(format!(
                "(★) violated: l - q - 1 = {} < e(q-2) = {}",
                l - q - 1,
                need
            ));
        }
    }
    if !m_in_range {
        violations.push(format!("m = {m} outside 1..={q}"));
    }
    Ok(GateReport {
        p,
        n,
        e: e as u64,
        m,
        q,
        divisibility,
        star,
        star_printed,
        star_needed,
        m_in_range,
        l,
        big_n: l.map(|l| l + 1 - m),
        violations,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum SurfaceKind {
    ProjectiveBundle,
    Cover,
}

/// A class `h H + f_coef f` on `P(E)`, or `g1 Gamma_1 + g2 Gamma_2 + f_coef f*` on `S`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SurfaceClass {
    P {
        h: Rational64,
        f: Rational64,
    },
    S {
        g1: Rational64,
        g2: Rational64,
        f: Rational64,
    },
}

impl SurfaceClass {
    pub fn kind(&self) -> SurfaceKind {
        match self {
            SurfaceClass::P { .. } => SurfaceKind::ProjectiveBundle,
            SurfaceClass::S { .. } => SurfaceKind::Cover,
        }
    }
}

/// Numerical data fixing the intersection pairings.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct IntersectionForm {
    pub q: i64,
    /// `deg L = (2g-2)/q`.
    pub deg_l: i64,
}

fn int(v: i64) -> Rational64 {
    Rational64::from_integer(v)
}

impl IntersectionForm {
    pub fn new(ctx: &CurveCtx) -> IntersectionForm {
        IntersectionForm {
            q: ctx.q() as i64,
            deg_l: ctx.params.alpha_exponent(),
        }
    }

    pub fn h(&self) -> SurfaceClass {
        SurfaceClass::P {
            h: int(1),
            f: int(0),
        }
    }

    pub fn fiber_p(&self) -> SurfaceClass {
        SurfaceClass::P {
            h: int(0),
            f: int(1),
        }
    }

    pub fn sigma1(&self) -> SurfaceClass {
        self.h()
    }

    /// `Sigma_2 = qH - q deg(L) f`, the class of `O(q) (x) omega^{-1}`.
    pub fn sigma2(&self) -> SurfaceClass {
        SurfaceClass::P {
            h: int(self.q),
            f: int(-self.q * self.deg_l),
        }
    }

    pub fn gamma1(&self) -> SurfaceClass {
        SurfaceClass::S {
            g1: int(1),
            g2: int(0),
            f: int(0),
        }
    }

    pub fn gamma2(&self) -> SurfaceClass {
        SurfaceClass::S {
            g1: int(0),
            g2: int(1),
            f: int(0),
        }
    }

    pub fn fiber_s(&self) -> SurfaceClass {
        SurfaceClass::S {
            g1: int(0),
            g2: int(0),
            f: int(1),
        }
    }

    /// `A_R = Gamma_1 + f* R`.
    pub fn ample(&self, deg_r: i64) -> SurfaceClass {
        SurfaceClass::S {
            g1: int(1),
            g2: int(0),
            f: int(deg_r),
        }
    }

    /// `pi^* H = (q+1) Gamma_1`, `pi^* f = f*`.
    pub fn pullback(&self, c: SurfaceClass) -> Result<SurfaceClass> {
        match c {
            SurfaceClass::P { h, f } => Ok(SurfaceClass::S {
                g1: h * int(self.q + 1),
                g2: int(0),
                f,
            }),
            SurfaceClass::S { .. } => Err(Error::MixedSurfaces),
        }
    }

    pub fn intersect(&self, a: SurfaceClass, b: SurfaceClass) -> Result<Rational64> {
        match (a, b) {
            (SurfaceClass::P { h: h1, f: f1 }, SurfaceClass::P { h: h2, f: f2 }) => {
                Ok(h1 * h2 * int(self.deg_l) + h1 * f2 + f1 * h2)
            }
            (
                SurfaceClass::S {
                    g1: a1,
                    g2: a2,
                    f: af,
                },
                SurfaceClass::S {
                    g1: b1,
                    g2: b2,
                    f: bf,
                },
            ) => {
                let q = int(self.q);
                let gram = [
                    [Rational64::new(self.deg_l, self.q + 1), int(0), int(1)],
                    [int(0), -q * q * Rational64::new(self.deg_l, self.q + 1), q],
                    [int(1), q, int(0)],
                ];
                let (x, y) = ([a1, a2, af], [b1, b2, bf]);
                let mut total = int(0);
                for (i, row) in gram.iter().enumerate() {
                    for (j, g) in row.iter().enumerate() {
                        total += x[i] * *g * y[j];
                    }
                }
                Ok(total)
            }
            _ => Err(Error::MixedSurfaces),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PositivityReport {
    pub deg_r: i64,
    pub a_squared: Rational64,
    pub a_gamma1: Rational64,
    pub a_gamma2: Rational64,
    pub a_fiber: Rational64,
    pub pass: bool,
}

pub fn positivity(form: &IntersectionForm, deg_r: i64) -> Result<PositivityReport> {
    let a = form.ample(deg_r);
    let a_squared = form.intersect(a, a)?;
    let a_gamma1 = form.intersect(a, form.gamma1())?;
    let a_gamma2 = form.intersect(a, form.gamma2())?;
    let a_fiber = form.intersect(a, form.fiber_s())?;
    let zero = int(0);
    Ok(PositivityReport {
        deg_r,
        pass: a_squared > zero && a_gamma1 > zero && a_fiber > zero && a_gamma2 >= zero,
        a_squared,
        a_gamma1,
        a_gamma2,
        a_fiber,
    })
}

/// `pi^*(O(o_degree) (x) rho^*(L (x) N(m R))) (gamma1_mult Gamma_1)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct AdjointPresentation {
    pub o_degree: i64,
    pub gamma1_mult: i64,
}

impl AdjointPresentation {
    /// `O(q-2)(m Gamma_1)`: the canonical-class form.
    pub fn canonical(q: i64, m: i64) -> AdjointPresentation {
        AdjointPresentation {
            o_degree: q - 2,
            gamma1_mult: m,
        }
    }

    /// `O(q-1)(-(q+1-m) Gamma_1)`.
    pub fn reduced(q: i64, m: i64) -> AdjointPresentation {
        AdjointPresentation {
            o_degree: q - 1,
            gamma1_mult: -(q + 1 - m),
        }
    }

    /// Trades `(q+1) Gamma_1 = pi^* Sigma_1` for `O(1)` until
    /// `-(q+1) < gamma1_mult <= 0`.
    pub fn normalize(self, q: i64) -> AdjointPresentation {
        let k =
            self.gamma1_mult.div_euclid(q + 1) + i64::from(self.gamma1_mult.rem_euclid(q + 1) != 0);
        AdjointPresentation {
            o_degree: self.o_degree + k,
            gamma1_mult: self.gamma1_mult - k * (q + 1),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum SummandRole {
    First,
    Other,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AdjointSummand {
    pub index: i64,
    /// Symmetric power of `E`; negative means the summand is zero.
    pub sym_degree: i64,
    /// Whether the summand carries the `(-Sigma_1)` twist.
    pub sigma_twisted: bool,
    pub role: SummandRole,
    pub bundle: BundleRec,
}

fn admissible(ctx: &CurveCtx, q_pt: &PointRec) -> Result<()> {
    if !q_pt.is_affine() {
        return Err(Error::InadmissiblePoint(
            "Q must differ from the point at infinity".into(),
        ));
    }
    if q_pt.z.is_zero() {
        return Err(Error::InadmissiblePoint(
            "the fiber z = 0 is excluded".into(),
        ));
    }
    if q_pt.field.characteristic() != ctx.params.p || !ctx.is_on_curve(&q_pt.field, q_pt.z, q_pt.y1)
    {
        return Err(Error::InadmissiblePoint(format!(
            "{} is not on the curve",
            q_pt.describe()
        )));
    }
    Ok(())
}

/// Curve-level summands of the pushforward of the adjoint bundle written in
/// the given presentation, with `m R_Q` replaced by `(m-1) inf + Q`.
pub fn adjoint_summands_for(
    ctx: &CurveCtx,
    params: &ParamsRec,
    q_pt: &PointRec,
    pres: AdjointPresentation,
) -> Result<Vec<AdjointSummand>> {
    admissible(ctx, q_pt)?;
    let q = params.q;
    let norm = pres.normalize(q);
    let r = -norm.gamma1_mult;
    let ql = q * params.l;
    (0..=q)
        .map(|i| {
            let sigma_twisted = i < r;
            let sym_degree = norm.o_degree - i - i64::from(sigma_twisted);
            let twist =
                DivisorRec::at_infinity((1 + i) * ql + params.m - 1).with_point(q_pt.clone(), 1);
            let name = format!(
                "S^{sym_degree}(E)(x)L(x)N^{}({})",
                1 + i,
                describe_divisor(&twist)
            );
            let bundle = if sym_degree < 0 {
                twist.validate(ctx)?;
                BundleRec {
                    twist,
                    ..BundleRec::zero(name)
                }
            } else {
                sym_block(ctx, 0, sym_degree, 1, twist, name)?
            };
            Ok(AdjointSummand {
                index: i,
                sym_degree,
                sigma_twisted,
                role: if i == 0 {
                    SummandRole::First
                } else {
                    SummandRole::Other
                },
                bundle,
            })
        })
        .collect()
}

/// Summands for `K_S + m A_{R_Q}`; index 0 is the first summand.
pub fn adjoint_summands(
    ctx: &CurveCtx,
    params: &ParamsRec,
    q_pt: &PointRec,
) -> Result<Vec<AdjointSummand>> {
    adjoint_summands_for(
        ctx,
        params,
        q_pt,
        AdjointPresentation::reduced(params.q, params.m),
    )
}

#[derive(Clone, Debug)]
pub struct PropMainRecord {
    pub point: PointRec,
    pub h0_no_q: usize,
    pub h0_with_q: usize,
    pub iso: bool,
    pub fingerprint_no_q: String,
    pub fingerprint_with_q: String,
    pub with_q_basis: BasisRec,
}

/// Compares `h^0(Sq^0(-Delta))` with `h^0(Sq^0(-Delta + Q))`.
pub fn verify_prop_main(
    ctx: &CurveCtx,
    params: &ParamsRec,
    q_pt: &PointRec,
) -> Result<PropMainRecord> {
    admissible(ctx, q_pt)?;
    let delta = DivisorRec::at_infinity(-params.big_n);
    let without = h0_basis(ctx, &make_sym_quotient(ctx, 0, delta.clone())?)?;
    let with = h0_basis(
        ctx,
        &make_sym_quotient(ctx, 0, delta.with_point(q_pt.clone(), 1))?,
    )?;
    Ok(PropMainRecord {
        point: q_pt.clone(),
        h0_no_q: without.dim,
        h0_with_q: with.dim,
        iso: without.dim == with.dim,
        fingerprint_no_q: without.fingerprint(),
        fingerprint_with_q: with.fingerprint(),
        with_q_basis: with,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Verdict {
    BasePointCertified,
    Inconclusive,
    Refuted,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SectionEvaluation {
    /// `P_a(Q)` for each frame index `a`.
    pub coordinates: Vec<FieldElem>,
    /// `sum_a P_a(Q) w^a`.
    pub value: FieldElem,
}

#[derive(Clone, Debug)]
pub struct BasePointRecord {
    pub point: PointRec,
    pub w: FieldElem,
    pub summand_dims: Vec<(String, usize)>,
    pub h0_total: usize,
    pub prop_main: PropMainRecord,
    pub evaluations: Vec<SectionEvaluation>,
    pub verdict: Verdict,
}

/// Evaluates every first-summand section at the point of `Gamma_2` over `Q`.
pub fn base_point_certificate(
    ctx: &CurveCtx,
    params: &ParamsRec,
    q_pt: &PointRec,
) -> Result<BasePointRecord> {
    let summands = adjoint_summands(ctx, params, q_pt)?;
    let mut summand_dims = Vec::with_capacity(summands.len());
    let mut first_basis = None;
    for s in &summands {
        let basis = h0_basis(ctx, &s.bundle)?;
        summand_dims.push((s.bundle.name.clone(), basis.dim));
        if s.role == SummandRole::First {
            first_basis = Some(basis);
        }
    }
    let first_basis = first_basis.expect("summand list starts with the first summand");
    let h0_total = summand_dims.iter().map(|(_, d)| d).sum();
    let prop_main = verify_prop_main(ctx, params, q_pt)?;
    let f = &*q_pt.field;
    let w = f.qth_root(q_pt.z, ctx.q())?;
    let evaluations: Vec<SectionEvaluation> = first_basis
        .sections
        .iter()
        .map(|s| {
            let coordinates: Vec<FieldElem> = s
                .coords
                .iter()
                .map(|u| u.eval_numerator(f, q_pt.z, q_pt.y1))
                .collect();
            let value = coordinates
                .iter()
                .enumerate()
                .fold(FieldElem::ZERO, |acc, (a, &v)| {
                    f.add(acc, f.mul(v, f.pow(w, a as u64)))
                });
            SectionEvaluation { coordinates, value }
        })
        .collect();
    let verdict = if evaluations.iter().any(|ev| !ev.value.is_zero()) {
        Verdict::Refuted
    } else if h0_total > 0 && prop_main.iso {
        Verdict::BasePointCertified
    } else {
        Verdict::Inconclusive
    };
    Ok(BasePointRecord {
        point: q_pt.clone(),
        w,
        summand_dims,
        h0_total,
        prop_main,
        evaluations,
        verdict,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::{curve_init, sample_points};

    #[test]
    fn gate_examples() {
        let g = check_gates(2, 1, 3, 1).unwrap();
        assert!(g.pass());
        assert_eq!((g.l, g.big_n), (Some(3), Some(3)));
        let g = check_gates(2, 1, 4, 1).unwrap();
        assert!(!g.divisibility && !g.pass());
        let g = check_gates(2, 2, 2, 1).unwrap();
        assert!(g.divisibility && !g.star);
        assert!(g.violations[0].contains("(★)"));
        assert!(check_gates(2, 2, 5, 4).unwrap().pass());
        assert!(!check_gates(2, 1, 3, 3).unwrap().pass());
    }

    #[test]
    fn intersections_on_both_surfaces() {
        let form = IntersectionForm { q: 2, deg_l: 9 };
        assert_eq!(
            form.intersect(form.sigma1(), form.sigma1()).unwrap(),
            int(9)
        );
        assert_eq!(
            form.intersect(form.sigma1(), form.sigma2()).unwrap(),
            int(0)
        );
        assert_eq!(
            form.intersect(form.gamma1(), form.gamma1()).unwrap(),
            int(3)
        );
        assert_eq!(
            form.intersect(form.ample(1), form.ample(1)).unwrap(),
            int(5)
        );
        assert_eq!(
            form.intersect(form.h(), form.gamma1()),
            Err(Error::MixedSurfaces)
        );
        let s2 = form.pullback(form.sigma2()).unwrap();
        let g2 = form.gamma2();
        for c in [form.gamma1(), form.gamma2(), form.fiber_s()] {
            assert_eq!(
                form.intersect(s2, c).unwrap(),
                int(3) * form.intersect(g2, c).unwrap()
            );
        }
    }

    #[test]
    fn presentations_agree() {
        let ctx = curve_init(3, 1, 4).unwrap();
        let pt = sample_points(&ctx, 1, 2).unwrap().remove(0);
        for m in 1..=3 {
            let params = check_gates(3, 1, 4, m).unwrap().params().unwrap();
            let a = adjoint_summands_for(&ctx, &params, &pt, AdjointPresentation::canonical(3, m))
                .unwrap();
            let b = adjoint_summands_for(&ctx, &params, &pt, AdjointPresentation::reduced(3, m))
                .unwrap();
            assert_eq!(a, b);
        }
        let params = check_gates(3, 1, 4, 1).unwrap().params().unwrap();
        let s = adjoint_summands(&ctx, &params, &pt).unwrap();
        let ranks: Vec<usize> = s.iter().map(|s| s.bundle.rank).collect();
        assert_eq!(ranks, vec![2, 1, 0, 0]);
    }

    #[test]
    fn two_one_three_certificate() {
        let ctx = curve_init(2, 1, 3).unwrap();
        let pt = sample_points(&ctx, 1, 8).unwrap().remove(0);
        for (m, dims, total) in [(1, 7, 7), (2, 8, 22)] {
            let params = check_gates(2, 1, 3, m).unwrap().params().unwrap();
            let rec = base_point_certificate(&ctx, &params, &pt).unwrap();
            assert_eq!(
                (rec.prop_main.h0_no_q, rec.prop_main.h0_with_q),
                (dims, dims)
            );
            assert_eq!(rec.h0_total, total);
            assert_eq!(rec.verdict, Verdict::BasePointCertified);
        }
        let params = check_gates(2, 1, 3, 1).unwrap().params().unwrap();
        let inf = PointRec::infinity(ctx.field().clone());
        assert!(matches!(
            base_point_certificate(&ctx, &params, &inf),
            Err(Error::InadmissiblePoint(_))
        ));
    }
}
