use num_rational::Rational64;
use raynaud::cohomology::h0_dim;
use raynaud::curve::{curve_init, sample_points, PointRec};
use raynaud::surface::{
    adjoint_summands, adjoint_summands_for, base_point_certificate, check_gates, positivity,
    verify_prop_main, AdjointPresentation, IntersectionForm, SummandRole, Verdict,
};
use raynaud::Error;

#[test]
fn gate_arithmetic_over_a_grid() {
    for p in [2u64, 3, 5] {
        for n in 1..=2u32 {
            for e in 1..=12u64 {
                let q = p.pow(n) as i64;
                let e = e as i64;
                let g = check_gates(p, n, e as u64, 1).unwrap();
                let divisible = (e * (q * e - 3)).rem_euclid(q + 1) == 0;
                assert_eq!(g.divisibility, divisible, "({p},{n},{e})");
                if divisible {
                    let l = e * (q * e - 3) / (q + 1);
                    assert_eq!(g.l, Some(l));
                    assert_eq!(g.star, l - q > e * (q - 2));
                    if g.pass() {
                        let params = g.params().unwrap();
                        assert_eq!((q + 1) * params.l, e * (q * e - 3));
                        for m in 1..=q {
                            let big_n = l + 1 - m;
                            assert!(big_n >= l + 1 - q && l + 1 - q >= e * (q - 2));
                        }
                    }
                }
            }
        }
    }
}

#[test]
fn gate_examples() {
    let g = check_gates(2, 1, 3, 1).unwrap();
    assert!(g.pass() && g.l == Some(3) && g.big_n == Some(3));
    assert!(!check_gates(2, 1, 4, 1).unwrap().divisibility);
    let g = check_gates(2, 2, 2, 1).unwrap();
    assert_eq!(g.l, Some(2));
    assert!(!g.star && !g.star_printed);
    assert!(check_gates(3, 1, 4, 3).unwrap().pass());
    assert!(!check_gates(3, 1, 4, 4).unwrap().m_in_range);
    assert!(!check_gates(3, 1, 4, 0).unwrap().pass());
    assert_eq!(check_gates(9, 1, 4, 1).unwrap_err(), Error::NotPrime(9));
}

#[test]
fn intersection_numbers() {
    let c = curve_init(2, 1, 3).unwrap();
    let form = IntersectionForm::new(&c);
    let r = Rational64::from_integer;
    assert_eq!(form.intersect(form.sigma1(), form.sigma1()).unwrap(), r(9));
    assert_eq!(form.intersect(form.sigma1(), form.sigma2()).unwrap(), r(0));
    assert_eq!(form.intersect(form.h(), form.fiber_p()).unwrap(), r(1));
    assert_eq!(
        form.intersect(form.fiber_p(), form.fiber_p()).unwrap(),
        r(0)
    );
    assert_eq!(form.intersect(form.gamma1(), form.gamma1()).unwrap(), r(3));
    assert_eq!(
        form.intersect(form.gamma2(), form.gamma2()).unwrap(),
        r(-12)
    );
    assert_eq!(form.intersect(form.gamma1(), form.gamma2()).unwrap(), r(0));
    assert_eq!(form.intersect(form.ample(1), form.ample(1)).unwrap(), r(5));
    assert_eq!(
        form.intersect(form.sigma1(), form.gamma1()),
        Err(Error::MixedSurfaces)
    );

    // pi^* D . pi^* D' = (q+1) D . D'
    let classes = [form.h(), form.fiber_p(), form.sigma2()];
    for a in classes {
        for b in classes {
            let down = form.intersect(a, b).unwrap();
            let up = form
                .intersect(form.pullback(a).unwrap(), form.pullback(b).unwrap())
                .unwrap();
            assert_eq!(up, down * r(3));
        }
    }
}

#[test]
fn ample_class_is_numerically_positive() {
    for (p, n, e) in [(2, 1, 3), (3, 1, 4), (2, 2, 5)] {
        let c = curve_init(p, n, e).unwrap();
        let form = IntersectionForm::new(&c);
        for deg_r in 1..=3 {
            assert!(positivity(&form, deg_r).unwrap().pass);
        }
    }
}

#[test]
fn adjoint_summand_bookkeeping() {
    let c = curve_init(2, 1, 3).unwrap();
    let pt = sample_points(&c, 1, 8).unwrap().remove(0);
    let params = check_gates(2, 1, 3, 1).unwrap().params().unwrap();
    let s = adjoint_summands(&c, &params, &pt).unwrap();
    let nonzero: Vec<_> = s.iter().filter(|s| s.bundle.rank > 0).collect();
    assert_eq!(nonzero.len(), 1);
    assert_eq!(nonzero[0].index, 0);
    assert_eq!(nonzero[0].role, SummandRole::First);
    // L (x) N(Q) has degree 9 + 6 + 1, the degree of L^2(-3 inf + Q).
    assert_eq!(nonzero[0].bundle.degree().unwrap(), 16);

    let c = curve_init(3, 1, 4).unwrap();
    let pt = sample_points(&c, 1, 4).unwrap().remove(0);
    for m in 1..=3 {
        let params = check_gates(3, 1, 4, m).unwrap().params().unwrap();
        let s = adjoint_summands(&c, &params, &pt).unwrap();
        let r = 4 - m;
        for x in &s {
            assert_eq!(x.sigma_twisted, x.index < r);
        }
        let canonical =
            adjoint_summands_for(&c, &params, &pt, AdjointPresentation::canonical(3, m)).unwrap();
        assert_eq!(s, canonical);
    }
    let params = check_gates(3, 1, 4, 1).unwrap().params().unwrap();
    let s = adjoint_summands(&c, &params, &pt).unwrap();
    assert_eq!(s[0].sym_degree, 1);
    assert_eq!(s[1].sym_degree, 0);
    assert!(s[2..].iter().all(|x| x.bundle.rank == 0));
    // m = q: only index 0 carries the (-Sigma_1) twist.
    let params = check_gates(3, 1, 4, 3).unwrap().params().unwrap();
    let s = adjoint_summands(&c, &params, &pt).unwrap();
    assert!(s[0].sigma_twisted && s[1..].iter().all(|x| !x.sigma_twisted));
}

#[test]
fn first_summand_matches_the_twisted_quotient() {
    let c = curve_init(3, 1, 4).unwrap();
    for pt in sample_points(&c, 3, 4).unwrap() {
        for m in 1..=3 {
            let params = check_gates(3, 1, 4, m).unwrap().params().unwrap();
            let first = &adjoint_summands(&c, &params, &pt).unwrap()[0];
            let rec = verify_prop_main(&c, &params, &pt).unwrap();
            assert_eq!(h0_dim(&c, &first.bundle).unwrap(), rec.h0_with_q);
        }
    }
}

#[test]
fn prop_main_at_two_one_three() {
    let c = curve_init(2, 1, 3).unwrap();
    for pt in sample_points(&c, 6, 8).unwrap() {
        for (m, d) in [(1, 7), (2, 8)] {
            let params = check_gates(2, 1, 3, m).unwrap().params().unwrap();
            let rec = verify_prop_main(&c, &params, &pt).unwrap();
            assert_eq!((rec.h0_no_q, rec.h0_with_q, rec.iso), (d, d, true));
            assert_eq!(rec.fingerprint_with_q.len(), 64);
        }
    }
}

#[test]
fn certificates_and_inadmissible_points() {
    let c = curve_init(3, 1, 4).unwrap();
    let params = check_gates(3, 1, 4, 2).unwrap().params().unwrap();
    let pts = sample_points(&c, 4, 4).unwrap();
    for pt in &pts {
        let rec = base_point_certificate(&c, &params, pt).unwrap();
        assert_eq!(rec.verdict, Verdict::BasePointCertified);
        assert!(rec.h0_total > 0);
        for ev in &rec.evaluations {
            assert!(ev.coordinates.iter().all(|v| v.is_zero()));
        }
        assert_eq!(pt.field.pow(rec.w, 3), pt.z);
    }
    let inf = PointRec::infinity(c.field().clone());
    assert!(matches!(
        base_point_certificate(&c, &params, &inf),
        Err(Error::InadmissiblePoint(_))
    ));
    let mut off = pts[0].clone();
    off.y1 = off.field.add(off.y1, off.field.one());
    off.y1 = off.field.add(off.y1, off.field.one());
    if !c.is_on_curve(&off.field, off.z, off.y1) {
        assert!(matches!(
            verify_prop_main(&c, &params, &off),
            Err(Error::InadmissiblePoint(_))
        ));
    }
}
