//! Acceptance runner: one line per criterion, nonzero exit if any fails.
//!
//! Expected values come from small oracles defined here (hand tables,
//! brute-force semigroup counts, Riemann-Roch arithmetic), never from the
//! library's own bookkeeping.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use raynaud::bundle::{line_power, make_line_bundle, make_sym_quotient, sym_power};
use raynaud::certificate::{certify, RunConfig};
use raynaud::cli::run_with;
use raynaud::cohomology::{chi, cocycle_regularity, h0_basis, h0_dim, h1_dim, phi_report};
use raynaud::curve::{
    curve_init, sample_points, verify_translation_identity, CurveCtx, DivisorRec,
};
use raynaud::series::{verify_differential_identities, verify_differential_identities_with};
use raynaud::surface::{adjoint_summands, check_gates, Verdict};
use raynaud::Error;

type Outcome = Result<String, String>;
type Criterion<'a> = (u8, &'static str, Duration, Box<dyn Fn() -> Outcome + 'a>);

const SETS: [(u64, u32, u64); 3] = [(2, 1, 3), (3, 1, 4), (2, 2, 5)];
const MIN: Duration = Duration::from_secs(60);

struct Hand {
    q: i64,
    e: i64,
}

impl Hand {
    fn new(p: u64, n: u32, e: u64) -> Hand {
        Hand {
            q: p.pow(n) as i64,
            e: e as i64,
        }
    }
    fn qe(&self) -> i64 {
        self.q * self.e
    }
    fn genus(&self) -> i64 {
        (self.qe() - 1) * (self.qe() - 2) / 2
    }
    fn deg_l(&self) -> i64 {
        self.e * (self.qe() - 3)
    }
    fn l(&self) -> i64 {
        self.deg_l() / (self.q + 1)
    }
    fn big_n(&self, m: i64) -> i64 {
        self.l() + 1 - m
    }
    fn in_semigroup(&self, n: i64) -> bool {
        n >= 0 && (0..=n / (self.qe() - 1)).any(|a| (n - a * (self.qe() - 1)) % self.qe() == 0)
    }
    fn h0_at_infinity(&self, d: i64) -> usize {
        (0..=d).filter(|&n| self.in_semigroup(n)).count()
    }
    fn gaps(&self) -> i64 {
        let bound = (self.qe() - 1) * (self.qe() - 2);
        (0..bound).filter(|&n| !self.in_semigroup(n)).count() as i64
    }
    /// Degree of the symmetric quotient of rank `q - 1 - r` twisted by `-N inf`.
    fn sym_quotient_degree(&self, r: i64, big_n: i64) -> i64 {
        (r..=self.q - 2)
            .map(|b| self.deg_l() * (b + 2) - big_n)
            .sum()
    }
}

fn check(cond: bool, what: impl FnOnce() -> String, failures: &mut Vec<String>) {
    if !cond {
        failures.push(what());
    }
}

fn verdict(summary: String, failures: Vec<String>) -> Outcome {
    if failures.is_empty() {
        Ok(summary)
    } else {
        Err(format!(
            "{summary}; {} failures: {}",
            failures.len(),
            failures.join("; ")
        ))
    }
}

fn lib<T>(r: raynaud::Result<T>) -> Result<T, String> {
    r.map_err(|e| format!("error: {e}"))
}

fn gates() -> Outcome {
    // (p, n, e, divisible, star holds, l)
    let table = [
        (2, 1, 3, true, true, 3),
        (2, 1, 4, false, false, 0),
        (2, 2, 2, true, false, 2),
        (2, 2, 5, true, true, 17),
        (3, 1, 4, true, true, 9),
    ];
    let mut failures = Vec::new();
    for (p, n, e, div, star, l) in table {
        let g = lib(check_gates(p, n, e, 1))?;
        check(
            g.divisibility == div,
            || format!("({p},{n},{e}) divisibility"),
            &mut failures,
        );
        check(
            g.pass() == (div && star),
            || format!("({p},{n},{e}) pass"),
            &mut failures,
        );
        if div {
            check(
                g.l == Some(l),
                || format!("({p},{n},{e}) l = {:?}", g.l),
                &mut failures,
            );
            check(
                g.star == star,
                || format!("({p},{n},{e}) star"),
                &mut failures,
            );
        }
    }
    verdict("5 hand-computed gate reports".into(), failures)
}

fn curves(ctxs: &[CurveCtx]) -> Outcome {
    let mut failures = Vec::new();
    let mut parts = Vec::new();
    for (ctx, (want, &(p, n, e))) in ctxs.iter().zip([10, 55, 171].iter().zip(SETS.iter())) {
        let hand = Hand::new(p, n, e);
        let canonical = lib(make_line_bundle(
            ctx,
            DivisorRec::at_infinity(2 * hand.genus() - 2),
        ))?;
        let h0_omega = lib(h0_dim(ctx, &canonical))? as i64;
        let agree = [ctx.genus, hand.genus(), hand.gaps(), h0_omega]
            .iter()
            .all(|g| g == want);
        check(
            agree,
            || {
                format!(
                    "({p},{n},{e}) genus {} {} {h0_omega}",
                    ctx.genus,
                    hand.gaps()
                )
            },
            &mut failures,
        );
        for c in verify_differential_identities(ctx.params, &ctx.series) {
            check(
                c.pass,
                || format!("({p},{n},{e}) {}", c.name),
                &mut failures,
            );
        }
        let t = lib(verify_translation_identity(ctx))?;
        check(
            t.pass(),
            || format!("({p},{n},{e}) translation identity"),
            &mut failures,
        );
        parts.push(format!("g({p},{n},{e}) = {want}"));
    }
    verdict(parts.join(", "), failures)
}

fn line_bundles(ctxs: &[CurveCtx]) -> Outcome {
    let mut failures = Vec::new();
    let mut per_set = Vec::new();
    for (ctx, &(p, n, e)) in ctxs.iter().zip(SETS.iter()) {
        let hand = Hand::new(p, n, e);
        let top = 2 * hand.genus() - 2 + hand.qe();
        let degrees: Vec<i64> = (0..36).map(|i| -5 + i * (top + 5) / 35).collect();
        for &d in &degrees {
            let b = lib(make_line_bundle(ctx, DivisorRec::at_infinity(d)))?;
            let basis = lib(h0_basis(ctx, &b))?;
            let h1 = lib(h1_dim(ctx, &b))? as i64;
            check(
                basis.dim == hand.h0_at_infinity(d),
                || format!("({p},{n},{e}) h0({d} inf)"),
                &mut failures,
            );
            check(
                basis.dim as i64 - h1 == d + 1 - hand.genus(),
                || format!("({p},{n},{e}) RR at {d}"),
                &mut failures,
            );
        }
        per_set.push(degrees.len());
    }
    for (i, d, want) in [(0usize, 15i64, 7usize), (0, 18, 10), (1, 99, 46)] {
        let got = lib(h0_dim(
            &ctxs[i],
            &lib(make_line_bundle(&ctxs[i], DivisorRec::at_infinity(d)))?,
        ))?;
        check(
            got == want,
            || format!("h0({d} inf) = {got}, expected {want}"),
            &mut failures,
        );
    }
    verdict(
        format!("{per_set:?} bundles per set, 3 spot values"),
        failures,
    )
}

fn riemann_roch(ctxs: &[CurveCtx]) -> Outcome {
    let mut failures = Vec::new();
    let mut count = 0;
    for (ctx, &(p, n, e)) in ctxs.iter().zip(SETS.iter()) {
        let hand = Hand::new(p, n, e);
        let pt = lib(sample_points(ctx, 1, 8))?.remove(0);
        for m in 1..=hand.q {
            let big_n = hand.big_n(m);
            let params = lib(lib(check_gates(p, n, e, m))?.params())?;
            let mut bundles = Vec::new();
            for r in 0..=hand.q - 2 {
                let b = lib(make_sym_quotient(ctx, r, DivisorRec::at_infinity(-big_n)))?;
                let deg = lib(b.degree())?;
                check(
                    deg == hand.sym_quotient_degree(r, big_n),
                    || format!("({p},{n},{e}) m={m} r={r} degree {deg}"),
                    &mut failures,
                );
                bundles.push(b);
            }
            bundles.extend(
                lib(adjoint_summands(ctx, &params, &pt))?
                    .into_iter()
                    .map(|s| s.bundle),
            );
            for b in bundles.into_iter().filter(|b| b.rank >= 2) {
                let h0 = lib(h0_dim(ctx, &b))? as i64;
                let h1 = lib(h1_dim(ctx, &b))? as i64;
                let expected = lib(b.degree())? + b.rank as i64 * (1 - hand.genus());
                count += 1;
                check(
                    h0 - h1 == expected && lib(chi(ctx, &b))? == expected,
                    || format!("({p},{n},{e}) m={m} rank {} h0 {h0} h1 {h1}", b.rank),
                    &mut failures,
                );
            }
        }
    }
    let spot = lib(sym_power(&ctxs[1], 1, 2, DivisorRec::at_infinity(-9)))?;
    let spot_chi = lib(chi(&ctxs[1], &spot))?;
    check(
        spot_chi == 54,
        || format!("chi spot {spot_chi}"),
        &mut failures,
    );
    verdict(
        format!("{count} bundles of rank >= 2, chi spot {spot_chi}"),
        failures,
    )
}

fn twist_by_q(ctxs: &[CurveCtx]) -> Outcome {
    let mut failures = Vec::new();
    let mut checks = 0;
    for (ctx, &(p, n, e)) in ctxs.iter().zip(SETS.iter()) {
        let hand = Hand::new(p, n, e);
        let points = lib(sample_points(ctx, 10, 8))?;
        check(
            points.len() >= 10,
            || format!("({p},{n},{e}) only {} points", points.len()),
            &mut failures,
        );
        for m in 1..=hand.q {
            let delta = DivisorRec::at_infinity(-hand.big_n(m));
            for i in 0..=hand.q {
                let want = hand.h0_at_infinity(i * hand.deg_l() - hand.big_n(m));
                let base = lib(h0_dim(ctx, &lib(line_power(ctx, i, delta.clone()))?))?;
                check(
                    base == want,
                    || format!("({p},{n},{e}) m={m} i={i} base {base}"),
                    &mut failures,
                );
                for pt in &points {
                    let b = lib(line_power(ctx, i, delta.clone().with_point(pt.clone(), 1)))?;
                    let with = lib(h0_dim(ctx, &b))?;
                    checks += 1;
                    check(
                        with == want,
                        || format!("({p},{n},{e}) m={m} i={i} at {}", pt.describe()),
                        &mut failures,
                    );
                }
            }
        }
    }
    verdict(
        format!("{checks} comparisons against semigroup counts"),
        failures,
    )
}

fn connecting_map(ctxs: &[CurveCtx]) -> Outcome {
    let mut failures = Vec::new();
    let (mut reports, mut sections) = (0, 0);
    for (ctx, &(p, n, e)) in ctxs.iter().zip(SETS.iter()).skip(1) {
        let hand = Hand::new(p, n, e);
        let g = hand.genus();
        for m in 1..=hand.q {
            let big_n = hand.big_n(m);
            for r in 0..=hand.q - 2 {
                let rep = lib(phi_report(ctx, r, m))?;
                reports += 1;
                let deg = (r + 2) * hand.deg_l() - big_n;
                let h0_l = hand.h0_at_infinity(deg);
                let h1_l = h0_l as i64 - (deg + 1 - g);
                let tag = format!("({p},{n},{e}) r={r} m={m}");
                check(
                    rep.dims.h0_l == h0_l,
                    || format!("{tag} h0(L)"),
                    &mut failures,
                );
                check(
                    rep.dims.h1_l as i64 == h1_l,
                    || format!("{tag} h1(L)"),
                    &mut failures,
                );
                check(
                    rep.phi_rank < h1_l && !rep.surjective,
                    || format!("{tag} surjective"),
                    &mut failures,
                );
                let b = lib(make_sym_quotient(
                    ctx,
                    r + 1,
                    DivisorRec::at_infinity(-big_n),
                ))?;
                for s in &lib(h0_basis(ctx, &b))?.sections {
                    let c = lib(cocycle_regularity(ctx, r, m, s))?;
                    sections += 1;
                    let weak = big_n - hand.e * (hand.q - 2);
                    check(
                        c.pass && c.min_valuation.at_least(weak),
                        || format!("{tag} valuation {:?}", c.min_valuation),
                        &mut failures,
                    );
                }
            }
        }
    }
    verdict(
        format!("{reports} reports, {sections} cocycle checks"),
        failures,
    )
}

fn certificates() -> Outcome {
    let cases = [
        (2, 1, 3, 1, Some(7)),
        (2, 1, 3, 2, Some(8)),
        (3, 1, 4, 1, None),
        (3, 1, 4, 2, None),
        (3, 1, 4, 3, None),
        (2, 2, 5, 1, None),
        (2, 2, 5, 2, None),
        (2, 2, 5, 3, None),
        (2, 2, 5, 4, None),
    ];
    let mut failures = Vec::new();
    let mut fractions = Vec::new();
    for (p, n, e, m, dims) in cases {
        let cert = lib(certify(&RunConfig::new(p, n, e, m)))?;
        let tag = format!("({p},{n},{e},m={m})");
        let bp = &cert.base_point;
        check(
            bp.verdict == Verdict::BasePointCertified,
            || format!("{tag} {:?}", bp.verdict),
            &mut failures,
        );
        check(
            bp.h0_total > 0,
            || format!("{tag} h0_total 0"),
            &mut failures,
        );
        let pm = &cert.prop_main[0];
        check(
            pm.h0_no_q == pm.h0_with_q && pm.iso,
            || format!("{tag} prop main"),
            &mut failures,
        );
        if let Some(d) = dims {
            check(
                (pm.h0_no_q, pm.h0_with_q) == (d, d),
                || format!("{tag} expected ({d},{d})"),
                &mut failures,
            );
        }
        check(
            cert.sweep.pass_fraction >= 0.9,
            || format!("{tag} pass fraction {}", cert.sweep.pass_fraction),
            &mut failures,
        );
        fractions.push(cert.sweep.pass_fraction);
    }
    let worst = fractions.iter().cloned().fold(1.0, f64::min);
    verdict(
        format!("9 certificates, worst pass fraction {worst:.2}"),
        failures,
    )
}

fn negative_controls(ctxs: &[CurveCtx]) -> Outcome {
    let mut failures = Vec::new();
    let ctx = &ctxs[0];
    let wrong = verify_differential_identities_with(
        ctx.params,
        &ctx.series,
        ctx.params.alpha_exponent() + 1,
    );
    check(
        wrong.iter().any(|c| !c.pass),
        || "wrong alpha exponent accepted".into(),
        &mut failures,
    );

    // Twisting by N - qe instead of N leaves sections that are not global.
    let c = &ctxs[1];
    let loose = lib(make_sym_quotient(c, 1, DivisorRec::at_infinity(-(9 - 12))))?;
    let caught = lib(h0_basis(c, &loose))?.sections.iter().any(|s| {
        matches!(
            cocycle_regularity(c, 0, 1, s),
            Err(Error::NotAGlobalSection(_))
        )
    });
    check(caught, || "wrong N accepted".into(), &mut failures);
    check(
        matches!(phi_report(c, 2, 1), Err(Error::RankOutOfRange { .. })),
        || "r = q - 1 accepted".into(),
        &mut failures,
    );
    check(
        matches!(phi_report(c, -1, 1), Err(Error::RankOutOfRange { .. })),
        || "r = -1 accepted".into(),
        &mut failures,
    );

    let argv = [
        "raynaud", "certify", "--p", "3", "--n", "1", "--e", "4", "--m", "2", "--fibers", "4",
    ];
    let run = || {
        let (mut out, mut err) = (Vec::new(), Vec::new());
        let code = run_with(argv, &mut out, &mut err);
        (code, out)
    };
    let (a, b) = (run(), run());
    check(
        a.0 == 0 && a == b,
        || "repeat runs differ".into(),
        &mut failures,
    );
    verdict(
        "3 mutations rejected, repeat certificates byte-identical".into(),
        failures,
    )
}

fn main() -> ExitCode {
    let start = Instant::now();
    let ctxs: Vec<CurveCtx> = match SETS.iter().map(|&(p, n, e)| curve_init(p, n, e)).collect() {
        Ok(c) => c,
        Err(e) => {
            println!("curve setup failed: {e}");
            return ExitCode::FAILURE;
        }
    };
    let setup = start.elapsed();
    let criteria: Vec<Criterion> = vec![
        (
            1,
            "parameter gates",
            Duration::from_secs(1),
            Box::new(gates),
        ),
        (
            2,
            "genus and curve identities",
            Duration::from_secs(30),
            Box::new(|| curves(&ctxs)),
        ),
        (
            3,
            "line bundles at infinity",
            10 * MIN,
            Box::new(|| line_bundles(&ctxs)),
        ),
        (
            4,
            "Riemann-Roch in rank >= 2",
            10 * MIN,
            Box::new(|| riemann_roch(&ctxs)),
        ),
        (
            5,
            "h0 unchanged by twisting with Q",
            11 * MIN,
            Box::new(|| twist_by_q(&ctxs)),
        ),
        (
            6,
            "connecting map not surjective",
            30 * MIN,
            Box::new(|| connecting_map(&ctxs)),
        ),
        (
            7,
            "base point certificates",
            30 * MIN,
            Box::new(certificates),
        ),
        (
            8,
            "negative controls and determinism",
            10 * MIN,
            Box::new(|| negative_controls(&ctxs)),
        ),
    ];
    let mut all = true;
    for (id, name, limit, f) in criteria {
        let t = Instant::now();
        let mut outcome = f();
        let elapsed = t.elapsed() + if id == 2 { setup } else { Duration::ZERO };
        if elapsed > limit {
            outcome = Err(format!("took {elapsed:.2?}, limit {limit:?}"));
        }
        let (tag, detail) = match outcome {
            Ok(d) => ("PASS", d),
            Err(d) => ("FAIL", d),
        };
        all &= tag == "PASS";
        println!("criterion {id} [{tag}] {name}: {detail} ({elapsed:.2?})");
    }
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
