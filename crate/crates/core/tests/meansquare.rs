use gcdsum_core::arith::RealExponent;
use gcdsum_core::asymptotic::{delta_a, ErrorTermEngine, TheoremId};
use gcdsum_core::meansquare::{
    integrate_k_squared, mean_square_report, series_constant, CoefficientForm, KSquaredIntegrator,
    MeanSquareTheorem, SeriesKind,
};
use gcdsum_core::special::zeta;

/// Composite Simpson on each unit interval, `steps` panels per interval.
fn simpson(f: impl Fn(f64) -> f64, lo: usize, hi: usize, steps: usize) -> f64 {
    let mut total = 0.0;
    for m in lo..hi {
        let h = 1.0 / steps as f64;
        // stay strictly inside [m, m+1) where the step function is constant
        let at = |i: usize| f(m as f64 + (i as f64 * h).min(1.0 - 1e-12));
        let mut s = at(0) + at(steps);
        for i in 1..steps {
            s += if i % 2 == 1 { 4.0 } else { 2.0 } * at(i);
        }
        total += s * h / 3.0;
    }
    total
}

#[test]
fn gauss_quadrature_matches_simpson_oracle() {
    let a = -0.2;
    let eng = ErrorTermEngine::new(TheoremId::Th1, TheoremId::Th1.params(1, 1, Some(a)).unwrap(), 300).unwrap();
    let oracle = simpson(|x| eng.sample(x).unwrap().k.powi(2), 1, 200, 200);
    let lib = KSquaredIntegrator::new(MeanSquareTheorem::Th3, 1, Some(a), 300)
        .unwrap()
        .integrate(1.0, 200.0)
        .unwrap();
    assert!((lib - oracle).abs() <= 1e-9 * oracle, "{lib} vs {oracle}");

    let ra = RealExponent::divisor_range(a).unwrap();
    let oracle = simpson(|x| delta_a(x, ra).unwrap().powi(2), 1, 150, 200);
    let lib = KSquaredIntegrator::new(MeanSquareTheorem::DeltaA, 1, Some(a), 200)
        .unwrap()
        .integrate(1.0, 150.0)
        .unwrap();
    assert!((lib - oracle).abs() <= 1e-9 * oracle, "{lib} vs {oracle}");
}

#[test]
fn integral_is_monotone_and_additive() {
    let integ = KSquaredIntegrator::new(MeanSquareTheorem::Lr, 2, None, 5000).unwrap();
    let whole = integ.integrate(1.0, 4000.5).unwrap();
    let parts = integ.integrate(1.0, 1234.25).unwrap() + integ.integrate(1234.25, 4000.5).unwrap();
    assert!((whole - parts).abs() <= 1e-12 * whole);
    let direct = integrate_k_squared(MeanSquareTheorem::Lr, 2, None, 4000.5).unwrap();
    assert!((whole - direct).abs() <= 1e-12 * whole);
    assert!(integ.integrate(1.0, 3000.0).unwrap() < whole);
}

#[test]
fn kmean_constant_has_closed_form() {
    let a = -0.2;
    let c = series_constant(SeriesKind::Kmean, Some(a), 100_000).unwrap();
    assert!(series_constant(SeriesKind::Kmean, Some(-0.45), 10).is_ok());
    assert!(series_constant(SeriesKind::C2, Some(-0.45), 10).is_err());
    let z = |s| zeta(s).unwrap();
    // ζ(3/2+a)ζ(3/2)²ζ(3/2−a) / (ζ(3)(6+4a)π²)
    let closed = z(1.5 + a) * z(1.5).powi(2) * z(1.5 - a)
        / (z(3.0) * (6.0 + 4.0 * a) * std::f64::consts::PI.powi(2));
    assert!((c.value - closed).abs() <= 1e-14 * closed, "{} vs {closed}", c.value);
}

#[test]
fn tail_bounds_shrink_with_more_terms() {
    for kind in [SeriesKind::C2, SeriesKind::C3, SeriesKind::D1] {
        let a = kind.needs_a().then_some(-0.2);
        let small = series_constant(kind, a, 10_000).unwrap();
        let big = series_constant(kind, a, 100_000).unwrap();
        assert!(big.tail_bound < small.tail_bound);
        assert!((big.value - small.value).abs() <= small.tail_bound, "{kind}");
    }
}

#[test]
fn report_rows_and_forms() {
    let rep = mean_square_report(MeanSquareTheorem::DeltaA, 1, Some(-0.2), &[1e3, 1e4], 20_000).unwrap();
    assert_eq!(rep.rows.len(), 2);
    assert!(rep.rows[1].integral > rep.rows[0].integral);
    assert_eq!(rep.constant.form, CoefficientForm::Displayed);
    assert!(mean_square_report(MeanSquareTheorem::Th3, 1, Some(-0.2), &[1e4, 1e3], 1000).is_err());
    assert!(mean_square_report(MeanSquareTheorem::Th3, 1, Some(-0.3), &[1e3], 1000).is_err());
}
