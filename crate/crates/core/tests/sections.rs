use raynaud::bundle::{line_power, make_line_bundle, make_sym_quotient, sym_power};
use raynaud::cohomology::{chi, h0_basis, h0_dim, h1_dim, phi_report};
use raynaud::curve::{
    curve_init, curve_init_with_precision, fiber_points, monomial_basis, sample_points,
    CurveParams, DivisorRec, Mono,
};
use raynaud::ff::make_field;
use raynaud::Error;

/// Elements `<= d` of the semigroup generated by `qe - 1` and `qe`.
fn semigroup_count(qe: i64, d: i64) -> usize {
    (0..=d.max(-1))
        .filter(|&n| (0..=n / (qe - 1)).any(|a| (n - a * (qe - 1)) % qe == 0))
        .count()
}

#[test]
fn genus_and_degenerate_curves() {
    assert_eq!(curve_init(2, 1, 3).unwrap().genus, 10);
    assert_eq!(curve_init(3, 1, 4).unwrap().genus, 55);
    assert!(matches!(
        curve_init(2, 1, 1),
        Err(Error::DegenerateParams(_))
    ));
    assert!(matches!(curve_init(6, 1, 3), Err(Error::NotPrime(6))));
}

#[test]
fn small_monomial_bases() {
    let ctx = curve_init(2, 1, 3).unwrap();
    assert_eq!(
        monomial_basis(&ctx, 6),
        vec![
            Mono { a: 0, b: 0 },
            Mono { a: 0, b: 1 },
            Mono { a: 1, b: 0 }
        ]
    );
    assert_eq!(monomial_basis(&ctx, 4), vec![Mono { a: 0, b: 0 }]);
}

#[test]
fn line_bundles_at_infinity_match_semigroup_and_riemann_roch() {
    for (p, n, e) in [(2, 1, 3), (3, 1, 4)] {
        let ctx = curve_init(p, n, e).unwrap();
        let qe = ctx.qe() as i64;
        for d in (-4..=ctx.params.canonical_degree() + 4).step_by(3) {
            let b = make_line_bundle(&ctx, DivisorRec::at_infinity(d)).unwrap();
            let h0 = h0_dim(&ctx, &b).unwrap();
            assert_eq!(h0, semigroup_count(qe, d), "({p},{n},{e}) d = {d}");
            let h1 = h1_dim(&ctx, &b).unwrap();
            assert_eq!(h0 as i64 - h1 as i64, d + 1 - ctx.genus);
            assert_eq!(chi(&ctx, &b).unwrap(), d + 1 - ctx.genus);
        }
    }
}

#[test]
fn spot_dimensions() {
    let c = curve_init(2, 1, 3).unwrap();
    let o = |d| make_line_bundle(&c, DivisorRec::at_infinity(d)).unwrap();
    assert_eq!(h0_dim(&c, &o(15)).unwrap(), 7);
    assert_eq!(h1_dim(&c, &o(15)).unwrap(), 1);
    assert_eq!(h0_dim(&c, &o(18)).unwrap(), 10);
    assert_eq!(chi(&c, &o(0)).unwrap(), 1 - 10);
    assert_eq!(chi(&c, &o(18)).unwrap(), 10 - 1);
    let c = curve_init(3, 1, 4).unwrap();
    assert_eq!(
        h0_dim(
            &c,
            &make_line_bundle(&c, DivisorRec::at_infinity(99)).unwrap()
        )
        .unwrap(),
        46
    );
    let s = sym_power(&c, 1, 2, DivisorRec::at_infinity(-9)).unwrap();
    assert_eq!(s.degree().unwrap(), 162);
    assert_eq!(chi(&c, &s).unwrap(), 54);
}

#[test]
fn twisting_by_a_fiber_point() {
    let c = curve_init(2, 1, 3).unwrap();
    let f6 = make_field(2, 6).unwrap();
    let fiber = fiber_points(&c, f6.one(), &f6).unwrap();
    assert_eq!(fiber.len(), 6);
    let q = fiber[0].clone();
    let b = line_power(&c, 2, DivisorRec::at_infinity(-3).with_point(q.clone(), 1)).unwrap();
    assert_eq!(h0_dim(&c, &b).unwrap(), 7);
    assert_eq!(h1_dim(&c, &b).unwrap(), 0);

    // Two points of the same fiber, both with a pole allowance.
    let two = make_line_bundle(
        &c,
        DivisorRec::at_infinity(3)
            .with_point(fiber[0].clone(), 1)
            .with_point(fiber[1].clone(), 1),
    )
    .unwrap();
    let (h0, h1) = (
        h0_dim(&c, &two).unwrap() as i64,
        h1_dim(&c, &two).unwrap() as i64,
    );
    assert!(h0 >= 1);
    assert_eq!(h0 - h1, 5 + 1 - 10);
    // A full fiber is linearly equivalent to 6 inf.
    let full = fiber.iter().fold(DivisorRec::at_infinity(0), |d, pt| {
        d.with_point(pt.clone(), 1)
    });
    let full = make_line_bundle(&c, full).unwrap();
    assert_eq!(h0_dim(&c, &full).unwrap(), semigroup_count(6, 6));
    // Vanishing at points: O(15 inf - Q).
    let minus =
        make_line_bundle(&c, DivisorRec::at_infinity(15).with_point(q.clone(), -1)).unwrap();
    assert_eq!(h0_dim(&c, &minus).unwrap(), 6);
    assert_eq!(h1_dim(&c, &minus).unwrap(), 1);

    let mixed = DivisorRec::at_infinity(3)
        .with_point(fiber[0].clone(), 1)
        .with_point(fiber[1].clone(), -1);
    assert!(matches!(
        make_line_bundle(&c, mixed),
        Err(Error::UnsupportedDivisor(_))
    ));
}

#[test]
fn sections_vanish_where_required() {
    let c = curve_init(2, 1, 3).unwrap();
    let q = sample_points(&c, 3, 8).unwrap().remove(2);
    let b = make_line_bundle(&c, DivisorRec::at_infinity(20).with_point(q.clone(), -1)).unwrap();
    let basis = h0_basis(&c, &b).unwrap();
    assert_eq!(basis.dim, semigroup_count(6, 20) - 1);
    for s in &basis.sections {
        assert!(s.coords[0].eval_numerator(&q.field, q.z, q.y1).is_zero());
    }
}

#[test]
fn twisting_by_q_never_loses_or_gains_too_much() {
    let c = curve_init(3, 1, 4).unwrap();
    let points = sample_points(&c, 4, 4).unwrap();
    for r in 0..=1 {
        for d in [-20, -9, 0, 12] {
            let base = make_sym_quotient(&c, r, DivisorRec::at_infinity(d)).unwrap();
            let h0 = h0_dim(&c, &base).unwrap();
            for pt in &points {
                let plus =
                    make_sym_quotient(&c, r, DivisorRec::at_infinity(d).with_point(pt.clone(), 1))
                        .unwrap();
                let h = h0_dim(&c, &plus).unwrap();
                assert!(h0 <= h && h <= h0 + base.rank, "r={r} d={d}");
            }
        }
    }
}

#[test]
fn riemann_roch_for_symmetric_quotients() {
    for (p, n, e, l) in [(3, 1, 4, 9), (2, 2, 5, 17)] {
        let c = curve_init(p, n, e).unwrap();
        let q = c.q() as i64;
        for m in 1..=q {
            for r in 0..=q - 2 {
                let b = make_sym_quotient(&c, r, DivisorRec::at_infinity(-(l + 1 - m))).unwrap();
                let lhs = h0_dim(&c, &b).unwrap() as i64 - h1_dim(&c, &b).unwrap() as i64;
                let expected = b.degree().unwrap() + b.rank as i64 * (1 - c.genus);
                assert_eq!(lhs, expected, "({p},{n},{e}) r={r} m={m}");
            }
        }
    }
}

#[test]
fn bases_are_deterministic() {
    let c = curve_init(3, 1, 4).unwrap();
    let pt = sample_points(&c, 2, 3).unwrap().remove(1);
    let b = make_sym_quotient(&c, 0, DivisorRec::at_infinity(-8).with_point(pt, 1)).unwrap();
    let a = h0_basis(&c, &b).unwrap();
    let again = h0_basis(&c, &b).unwrap();
    assert_eq!(a.fingerprint(), again.fingerprint());
    assert_eq!(a.sections, again.sections);
}

#[test]
fn connecting_map_is_never_surjective() {
    for (p, n, e) in [(3, 1, 4), (2, 2, 5)] {
        let c = curve_init(p, n, e).unwrap();
        let q = c.q() as i64;
        for m in 1..=q {
            for r in 0..=q - 2 {
                let rep = phi_report(&c, r, m).unwrap();
                assert!(
                    !rep.surjective && rep.w_codim >= 1,
                    "({p},{n},{e}) r={r} m={m}"
                );
                assert!(rep.phi_rank >= 0);
            }
            assert!(matches!(
                phi_report(&c, q - 1, m),
                Err(Error::RankOutOfRange { .. })
            ));
            assert!(matches!(
                phi_report(&c, -1, m),
                Err(Error::RankOutOfRange { .. })
            ));
        }
    }
}

#[test]
fn insufficient_precision_is_reported() {
    assert!(matches!(
        curve_init_with_precision(CurveParams::new(2, 1, 3), Some(8)),
        Err(Error::PrecisionTooLow { .. })
    ));
    let c = curve_init_with_precision(CurveParams::new(2, 1, 3), Some(400)).unwrap();
    let b = make_line_bundle(&c, DivisorRec::at_infinity(40)).unwrap();
    assert_eq!(h0_dim(&c, &b).unwrap(), semigroup_count(6, 40));
}
