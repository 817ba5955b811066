use gcdsum_core::arith::{sieve, summatory_tau, ArithFn, Backend, FnTable, RealExponent};
use gcdsum_core::asymptotic::{
    delta_a, delta_divisor, lemma_sum_check, phi_psi_combination_coefficient, residual_growth,
    sweep_grid, voronoi_delta_a, weighted_delta_sum, DeltaKind, DeltaTable, ErrorTermEngine,
    LemmaId, MainTermModel, Normalization, TheoremId, BELOW_INTEGER,
};
use gcdsum_core::special::{euler_gamma, zeta};
use proptest::prelude::*;

fn ex(a: f64) -> RealExponent {
    RealExponent::divisor_range(a).unwrap()
}

#[test]
fn delta_against_direct_divisor_count() {
    let tau = sieve(ArithFn::Tau, 5000, Backend::Real).unwrap();
    let mut d_sum = 0.0;
    let c = 2.0 * euler_gamma() - 1.0;
    for n in 1..=5000usize {
        d_sum += tau.get_f64(n);
        assert_eq!(summatory_tau(n as f64 + 0.5), d_sum as u128);
        let x = n as f64 + 0.25;
        let want = d_sum - x * x.ln() - c * x;
        assert!((delta_divisor(x).unwrap() - want).abs() < 1e-9 * x.max(1.0), "x={x}");
    }
}

#[test]
fn delta_a_against_direct_sigma_sum() {
    let a = -0.4;
    let sig = sieve(ArithFn::Sigma(a), 3000, Backend::Real).unwrap();
    let z = |s| zeta(s).unwrap();
    let mut acc = 0.0;
    for n in 1..=3000usize {
        acc += sig.get_f64(n);
        let x = n as f64 + 0.5;
        let main = z(1.0 - a) * x + z(1.0 + a) / (1.0 + a) * x.powf(1.0 + a) - z(-a) / 2.0;
        assert!((delta_a(x, ex(a)).unwrap() - (acc - main)).abs() < 1e-9 * x);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn delta_jumps_by_tau(n in 2u64..1_000_000) {
        let n = n as f64;
        let jump = delta_divisor(n).unwrap() - delta_divisor(n - BELOW_INTEGER).unwrap();
        let tau = sieve(ArithFn::Tau, n as usize, Backend::Real).unwrap().get_f64(n as usize);
        prop_assert!((jump - tau).abs() < 1e-3, "jump {} tau {}", jump, tau);
    }

    #[test]
    fn delta_a_jumps_by_sigma(n in 2u64..200_000, a in -0.9f64..-0.05) {
        let n = n as f64;
        let jump = delta_a(n, ex(a)).unwrap() - delta_a(n - BELOW_INTEGER, ex(a)).unwrap();
        let sig = sieve(ArithFn::Sigma(a), n as usize, Backend::Real).unwrap().get_f64(n as usize);
        prop_assert!((jump - sig).abs() < 1e-4);
    }
}

#[test]
fn delta_table_matches_one_shot() {
    let a = ex(-0.3);
    let table = DeltaTable::new(DeltaKind::Sigma(a), 20_000).unwrap();
    let plain = DeltaTable::new(DeltaKind::Divisor, 20_000).unwrap();
    for x in sweep_grid(1.0, 20_000.0, 300, 3) {
        assert!((table.eval(x) - delta_a(x, a).unwrap()).abs() < 1e-8 * x.max(1.0));
        assert!((plain.eval(x) - delta_divisor(x).unwrap()).abs() < 1e-8 * x.max(1.0));
    }
}

#[test]
fn weighted_delta_sum_with_unit_weight_is_delta() {
    let mut w = vec![0.0; 501];
    w[1] = 1.0;
    let e = FnTable::from_real("e", w).unwrap();
    for x in [3.5, 77.0, 499.9] {
        let plain = weighted_delta_sum(&e, 1.0, x, None).unwrap();
        assert!((plain - delta_divisor(x).unwrap()).abs() < 1e-10);
        let sig = weighted_delta_sum(&e, 2.0, x, Some(ex(-0.5))).unwrap();
        assert!((sig - delta_a(x, ex(-0.5)).unwrap()).abs() < 1e-10);
    }
}

#[test]
fn voronoi_regime_flag_and_error_decay() {
    let a = ex(-0.5);
    assert!(!voronoi_delta_a(50.0, a, 100).unwrap().in_regime);
    assert!(voronoi_delta_a(500.0, a, 100).unwrap().in_regime);
    let rms = |n: usize| {
        let xs: Vec<f64> = (0..2000).map(|i| 10_000.0 + 0.1 * i as f64).collect();
        let s: f64 = xs
            .iter()
            .map(|&x| (delta_a(x, a).unwrap() - voronoi_delta_a(x, a, n).unwrap().value).powi(2))
            .sum();
        (s / xs.len() as f64).sqrt()
    };
    assert!(rms(1000) < rms(10));
}

#[test]
fn combination_coefficient_follows_from_main_terms() {
    let (r, a) = (2, -0.3);
    let z = |s| zeta(s).unwrap();
    let model = |id: TheoremId| MainTermModel::build(id, id.params(r, 1, Some(a)).unwrap()).unwrap();
    let (phi, psi) = (model(TheoremId::Th2Phi), model(TheoremId::Th2Psi));
    let (wp, ws) = (z(2.0 + a).powi(2), z(4.0 + 2.0 * a));
    let coef = phi_psi_combination_coefficient(r, ex(a)).unwrap();
    let from_models = wp * phi.c_x - ws * psi.c_x;
    assert!((from_models - coef.derived).abs() <= 1e-9 * coef.derived.abs());
    assert!((wp * phi.c_x1pa - ws * psi.c_x1pa).abs() < 1e-12);
    assert!((coef.alternative - coef.derived).abs() > 1e-3);

    // the exact sums pick the derived coefficient
    let x = 20_000.0f64;
    let exact = |id: TheoremId| {
        ErrorTermEngine::new(id, id.params(r, 1, Some(a)).unwrap(), x as usize)
            .unwrap()
            .exact(x)
            .unwrap()
    };
    let combo = wp * exact(TheoremId::Th2Phi) - ws * exact(TheoremId::Th2Psi);
    let err_derived = (combo / x - coef.derived).abs();
    let err_alt = (combo / x - coef.alternative).abs();
    assert!(err_derived < 0.1 * err_alt, "{err_derived} vs {err_alt}");
}

#[test]
fn lemma_residuals_stay_bounded() {
    let a = ex(-0.3);
    let xs = [1e2, 1e3, 1e4];
    let la: Vec<f64> = xs
        .iter()
        .map(|&x| lemma_sum_check(LemmaId::La, x, a, 2).unwrap().residual.abs())
        .collect();
    assert!(la.iter().all(|&v| v < 3.0 * la[0].max(0.05)), "{la:?}");
    for id in [LemmaId::Mu, LemmaId::Sigma1, LemmaId::Psi] {
        let r: Vec<f64> = xs
            .iter()
            .map(|&x| lemma_sum_check(id, x, a, 2).unwrap().residual.abs() / x.ln().powi(2))
            .collect();
        assert!(r[2] <= 3.0 * r[0], "{id}: {r:?}");
    }
    for id in [LemmaId::L2m, LemmaId::Psi2m] {
        let c = lemma_sum_check(id, 1e4, a, 2).unwrap();
        assert!(c.residual.abs() < 1.0, "{id}: {c:?}");
    }
}

#[test]
fn limit_ratios_at_moderate_x() {
    let engine = |id: TheoremId, a| ErrorTermEngine::new(id, id.params(1, 1, a).unwrap(), 100_000).unwrap();
    let k = engine(TheoremId::KPhi, None);
    let x = 1e5f64;
    let ratio = k.exact(x).unwrap() / (x * x.ln());
    assert!((ratio / k.model().limit_ratio() - 1.0).abs() < 0.5);
    let th1 = engine(TheoremId::Th1, Some(-0.5));
    let ratio = th1.exact(x).unwrap() / x;
    assert!((ratio / th1.model().limit_ratio() - 1.0).abs() < 0.05);
}

#[test]
fn small_sweep_residuals() {
    let cases = [
        (TheoremId::Th1, 1, 1, Some(-0.5), Normalization::Plain),
        (TheoremId::KId, 2, 1, None, Normalization::Log),
        (TheoremId::CorTau, 1, 2, None, Normalization::Plain),
    ];
    for (id, r, s, a, norm) in cases {
        let eng = ErrorTermEngine::new(id, id.params(r, s, a).unwrap(), 3000).unwrap();
        let samples = eng.sample_many(&sweep_grid(10.0, 3000.0, 120, 3)).unwrap();
        let g = residual_growth(&samples, norm, 100.0);
        assert!(g.passes(3.0), "{id}: {g:?}");
    }
}
