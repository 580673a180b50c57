//! The eight verification tiers run by `raynaud suite`.

use std::time::{Duration, Instant};

use crate::bundle::{line_power, make_line_bundle, make_sym_quotient, sym_power};
use crate::certificate::{bundle_row, certify, curve_summary, RunConfig};
use crate::cohomology::{chi, cocycle_regularity, h0_basis, h0_dim, h1_dim, phi_report};
use crate::curve::{curve_init, h0_inf_count, sample_points, CurveCtx, DivisorRec};
use crate::error::{Error, Result};
use crate::series::verify_differential_identities_with;
use crate::surface::{adjoint_summands, check_gates, Verdict};

#[derive(Clone, Debug)]
pub struct CriterionResult {
    pub id: u8,
    pub name: &'static str,
    pub pass: bool,
    pub detail: String,
    pub elapsed: Duration,
}

impl CriterionResult {
    pub fn line(&self) -> String {
        format!(
            "criterion {} [{}] {}: {} ({:.2?})",
            self.id,
            if self.pass { "PASS" } else { "FAIL" },
            self.name,
            self.detail,
            self.elapsed
        )
    }
}

pub const PARAMETER_SETS: [(u64, u32, u64); 3] = [(2, 1, 3), (3, 1, 4), (2, 2, 5)];

fn timed(
    id: u8,
    name: &'static str,
    limit: Duration,
    f: impl FnOnce() -> Result<(bool, String)>,
) -> CriterionResult {
    let start = Instant::now();
    let outcome = f();
    let elapsed = start.elapsed();
    let (mut pass, mut detail) = outcome.unwrap_or_else(|e| (false, format!("error: {e}")));
    if elapsed > limit {
        pass = false;
        detail.push_str(&format!("; exceeded time limit {limit:?}"));
    }
    CriterionResult {
        id,
        name,
        pass,
        detail,
        elapsed,
    }
}

fn gate_tier() -> Result<(bool, String)> {
    let expected = [
        ((2, 1, 3), true),
        ((2, 1, 4), false),
        ((2, 2, 2), false),
        ((2, 2, 5), true),
        ((3, 1, 4), true),
    ];
    let mut bad = Vec::new();
    for ((p, n, e), pass) in expected {
        let g = check_gates(p, n, e, 1)?;
        if g.pass() != pass {
            bad.push(format!("({p},{n},{e})"));
        }
    }
    let g = check_gates(2, 1, 4, 1)?;
    if g.divisibility {
        bad.push("(2,1,4) should fail divisibility".into());
    }
    let g = check_gates(2, 2, 2, 1)?;
    if g.star || !g.divisibility {
        bad.push("(2,2,2) should fail (★) only".into());
    }
    Ok((
        bad.is_empty(),
        if bad.is_empty() {
            "5 gate reports match".into()
        } else {
            bad.join(", ")
        },
    ))
}

fn curves() -> Result<Vec<CurveCtx>> {
    PARAMETER_SETS
        .iter()
        .map(|&(p, n, e)| curve_init(p, n, e))
        .collect()
}

fn curve_tier(ctxs: &[CurveCtx]) -> Result<(bool, String)> {
    let mut pass = true;
    let mut parts = Vec::new();
    for ctx in ctxs {
        let s = curve_summary(ctx)?;
        let ok = s.identity_checks.iter().all(|c| c.pass);
        pass &= ok;
        parts.push(format!(
            "{} g={} checks {}",
            ctx.params,
            s.genus,
            if ok { "ok" } else { "FAILED" }
        ));
    }
    Ok((pass, parts.join("; ")))
}

fn line_bundle_tier(ctxs: &[CurveCtx]) -> Result<(bool, String)> {
    let mut checked = 0;
    let mut failures = Vec::new();
    for ctx in ctxs {
        let top = ctx.params.canonical_degree() + ctx.qe() as i64;
        let step = (top / 40).max(1);
        for d in (-3..=top).step_by(step as usize) {
            let b = make_line_bundle(ctx, DivisorRec::at_infinity(d))?;
            let (h0, h1) = (h0_dim(ctx, &b)?, h1_dim(ctx, &b)?);
            checked += 1;
            if h0 != h0_inf_count(ctx, d) || h0 as i64 - h1 as i64 != d + 1 - ctx.genus {
                failures.push(format!("{} d={d}", ctx.params));
            }
        }
    }
    let spots = [(0usize, 15i64, 7usize), (0, 18, 10), (1, 99, 46)];
    for (i, d, want) in spots {
        let got = h0_dim(
            &ctxs[i],
            &make_line_bundle(&ctxs[i], DivisorRec::at_infinity(d))?,
        )?;
        if got != want {
            failures.push(format!("h0({d} inf) = {got}, expected {want}"));
        }
    }
    Ok((
        failures.is_empty(),
        format!(
            "{checked} line bundles, 3 spot values; {} failures {}",
            failures.len(),
            failures.join(", ")
        ),
    ))
}

fn riemann_roch_tier(ctxs: &[CurveCtx]) -> Result<(bool, String)> {
    let mut count = 0;
    let mut failures = Vec::new();
    for ctx in ctxs {
        let q = ctx.q() as i64;
        let pt = sample_points(ctx, 1, 8)?.remove(0);
        for m in 1..=q {
            let params = check_gates(ctx.params.p, ctx.params.n, ctx.params.e, m)?.params()?;
            let delta = DivisorRec::at_infinity(-params.big_n);
            let mut bundles = Vec::new();
            for r in 0..=q - 2 {
                bundles.push(make_sym_quotient(ctx, r, delta.clone())?);
            }
            bundles.extend(
                adjoint_summands(ctx, &params, &pt)?
                    .into_iter()
                    .map(|s| s.bundle)
                    .filter(|b| b.rank > 0),
            );
            for b in bundles {
                let row = bundle_row(ctx, &b)?;
                count += 1;
                if !row.riemann_roch {
                    failures.push(format!("{} {}", ctx.params, row.name));
                }
            }
        }
    }
    let spot = sym_power(&ctxs[1], 1, 2, DivisorRec::at_infinity(-9))?;
    let spot_chi = chi(&ctxs[1], &spot)?;
    if spot_chi != 54 {
        failures.push(format!("chi spot {spot_chi}"));
    }
    Ok((
        failures.is_empty(),
        format!(
            "{count} bundles, chi spot {spot_chi}; failures: {}",
            failures.len()
        ),
    ))
}

fn line_vanishing_tier(ctxs: &[CurveCtx]) -> Result<(bool, String)> {
    let mut checks = 0;
    let mut failures = Vec::new();
    for ctx in ctxs {
        let q = ctx.q() as i64;
        let points = sample_points(ctx, 10, 8)?;
        for m in 1..=q {
            let big_n = check_gates(ctx.params.p, ctx.params.n, ctx.params.e, m)?
                .params()?
                .big_n;
            let delta = DivisorRec::at_infinity(-big_n);
            for i in 0..=q {
                let base = h0_dim(ctx, &line_power(ctx, i, delta.clone())?)?;
                for pt in &points {
                    let with = h0_dim(
                        ctx,
                        &line_power(ctx, i, delta.clone().with_point(pt.clone(), 1))?,
                    )?;
                    checks += 1;
                    if with != base {
                        failures.push(format!("{} m={m} i={i} at {}", ctx.params, pt.describe()));
                    }
                }
            }
        }
    }
    Ok((
        failures.is_empty(),
        format!("{checks} comparisons; {} failures", failures.len()),
    ))
}

fn connecting_map_tier(ctxs: &[CurveCtx]) -> Result<(bool, String)> {
    let mut reports = 0;
    let mut sections = 0;
    let mut failures = Vec::new();
    for ctx in &ctxs[1..] {
        let q = ctx.q() as i64;
        let e = ctx.params.e as i64;
        for m in 1..=q {
            for r in 0..=q - 2 {
                let rep = phi_report(ctx, r, m)?;
                reports += 1;
                if rep.surjective || rep.w_codim < 1 {
                    failures.push(format!("{} r={r} m={m} surjective", ctx.params));
                }
                let b = make_sym_quotient(ctx, r + 1, DivisorRec::at_infinity(-rep.big_n))?;
                for s in &h0_basis(ctx, &b)?.sections {
                    let chk = cocycle_regularity(ctx, r, m, s)?;
                    sections += 1;
                    if !chk.pass || !chk.min_valuation.at_least(rep.big_n - e * (q - 2)) {
                        failures.push(format!(
                            "{} r={r} m={m} cocycle {:?}",
                            ctx.params, chk.min_valuation
                        ));
                    }
                }
            }
        }
    }
    Ok((
        failures.is_empty(),
        format!(
            "{reports} reports, {sections} sections; failures: {}",
            failures.join(", ")
        ),
    ))
}

pub const CERTIFIED_CASES: [(u64, u32, u64, i64); 9] = [
    (2, 1, 3, 1),
    (2, 1, 3, 2),
    (3, 1, 4, 1),
    (3, 1, 4, 2),
    (3, 1, 4, 3),
    (2, 2, 5, 1),
    (2, 2, 5, 2),
    (2, 2, 5, 3),
    (2, 2, 5, 4),
];

fn certificate_tier() -> Result<(bool, String)> {
    let mut parts = Vec::new();
    let mut pass = true;
    for (p, n, e, m) in CERTIFIED_CASES {
        let cert = certify(&RunConfig::new(p, n, e, m))?;
        let ok = cert.passes() && cert.sweep.pass_fraction >= 0.9;
        pass &= ok;
        let pm = &cert.prop_main[0];
        parts.push(format!(
            "({p},{n},{e},m={m}) {:?} ({},{}) frac {:.2}",
            cert.base_point.verdict, pm.h0_no_q, pm.h0_with_q, cert.sweep.pass_fraction
        ));
        if (p, e) == (2, 3) {
            let want = if m == 1 { 7 } else { 8 };
            if (pm.h0_no_q, pm.h0_with_q) != (want, want) {
                pass = false;
            }
        }
    }
    Ok((pass, parts.join("; ")))
}

fn negative_controls(ctxs: &[CurveCtx]) -> Result<(bool, String)> {
    let mut failures = Vec::new();
    let ctx = &ctxs[0];
    let wrong_alpha = verify_differential_identities_with(
        ctx.params,
        &ctx.series,
        ctx.params.alpha_exponent() + 1,
    );
    if wrong_alpha.iter().all(|c| c.pass) {
        failures.push("wrong alpha exponent not detected");
    }
    let c314 = &ctxs[1];
    let big_n = 9;
    let loose = make_sym_quotient(
        c314,
        1,
        DivisorRec::at_infinity(-(big_n - c314.qe() as i64)),
    )?;
    let caught = h0_basis(c314, &loose)?.sections.iter().any(|s| {
        matches!(
            cocycle_regularity(c314, 0, 1, s),
            Err(Error::NotAGlobalSection(_))
        )
    });
    if !caught {
        failures.push("wrong N not detected");
    }
    if !matches!(phi_report(c314, 2, 1), Err(Error::RankOutOfRange { .. })) {
        failures.push("r = q-1 accepted");
    }
    if !matches!(
        make_sym_quotient(c314, 3, DivisorRec::at_infinity(0)),
        Err(Error::RankOutOfRange { .. })
    ) {
        failures.push("Sq^q accepted");
    }
    let cfg = RunConfig::new(2, 1, 3, 1);
    let (a, b) = (certify(&cfg)?.to_json(), certify(&cfg)?.to_json());
    if a != b {
        failures.push("certificates differ between runs");
    }
    let cert = certify(&cfg)?;
    if cert.base_point.verdict != Verdict::BasePointCertified {
        failures.push("baseline certificate not certified");
    }
    Ok((
        failures.is_empty(),
        if failures.is_empty() {
            "all controls behave".into()
        } else {
            failures.join(", ")
        },
    ))
}

/// Runs every tier in order; each result is independent of the others' outcome.
pub fn run_suite() -> Vec<CriterionResult> {
    let ctxs = match curves() {
        Ok(c) => c,
        Err(e) => {
            return vec![CriterionResult {
                id: 0,
                name: "curve setup",
                pass: false,
                detail: e.to_string(),
                elapsed: Duration::ZERO,
            }]
        }
    };
    let min = Duration::from_secs(60);
    vec![
        timed(1, "parameter gates", Duration::from_secs(1), gate_tier),
        timed(
            2,
            "genus and curve identities",
            3 * Duration::from_secs(10),
            || curve_tier(&ctxs),
        ),
        timed(3, "line bundles against the semigroup", 10 * min, || {
            line_bundle_tier(&ctxs)
        }),
        timed(4, "Riemann-Roch for higher rank", 10 * min, || {
            riemann_roch_tier(&ctxs)
        }),
        timed(5, "h0(L^i(-D)) unchanged by +Q", 11 * min, || {
            line_vanishing_tier(&ctxs)
        }),
        timed(6, "connecting map not surjective", 30 * min, || {
            connecting_map_tier(&ctxs)
        }),
        timed(7, "base point certificates", 30 * min, certificate_tier),
        timed(8, "negative controls and determinism", 10 * min, || {
            negative_controls(&ctxs)
        }),
    ]
}
