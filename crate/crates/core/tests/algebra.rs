use gcdsum_core::arith::{dirichlet_convolve, sieve, ArithFn, Backend, FnTable};
use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

fn exact_table(values: &[i64]) -> FnTable {
    let mut v = vec![BigRational::from_integer(BigInt::from(0))];
    v.extend(values.iter().map(|&x| BigRational::from_integer(BigInt::from(x))));
    FnTable::from_exact("rand", v).unwrap()
}

fn ex(kind: ArithFn, n: usize) -> FnTable {
    sieve(kind, n, Backend::Exact).unwrap()
}

fn same(a: &FnTable, b: &FnTable) -> bool {
    a.exact().unwrap()[1..] == b.exact().unwrap()[1..]
}

fn values(max_len: usize) -> impl Strategy<Value = Vec<i64>> {
    (1..=max_len).prop_flat_map(|n| prop::collection::vec(-50i64..50, n))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn moebius_round_trip(v in values(2000)) {
        let f = exact_table(&v);
        let n = f.limit();
        let g = dirichlet_convolve(&f, &ex(ArithFn::One, n)).unwrap();
        let back = dirichlet_convolve(&g, &ex(ArithFn::Mu, n)).unwrap();
        prop_assert!(same(&f, &back));
    }

    #[test]
    fn convolution_commutes(a in values(512), b in values(512)) {
        let n = a.len().min(b.len());
        let (f, g) = (exact_table(&a[..n]), exact_table(&b[..n]));
        prop_assert!(same(&dirichlet_convolve(&f, &g).unwrap(), &dirichlet_convolve(&g, &f).unwrap()));
    }

    #[test]
    fn convolution_associates(a in values(512), b in values(512), c in values(512)) {
        let n = a.len().min(b.len()).min(c.len());
        let (f, g, h) = (exact_table(&a[..n]), exact_table(&b[..n]), exact_table(&c[..n]));
        let left = dirichlet_convolve(&dirichlet_convolve(&f, &g).unwrap(), &h).unwrap();
        let right = dirichlet_convolve(&f, &dirichlet_convolve(&g, &h).unwrap()).unwrap();
        prop_assert!(same(&left, &right));
    }

    #[test]
    fn unit_is_neutral(v in values(1000)) {
        let f = exact_table(&v);
        let e = dirichlet_convolve(&ex(ArithFn::Mu, f.limit()), &ex(ArithFn::One, f.limit())).unwrap();
        prop_assert!(same(&dirichlet_convolve(&f, &e).unwrap(), &f));
    }

    #[test]
    fn real_and_exact_convolutions_agree(a in values(300), b in values(300)) {
        let n = a.len().min(b.len());
        let (f, g) = (exact_table(&a[..n]), exact_table(&b[..n]));
        let exact = dirichlet_convolve(&f, &g).unwrap();
        let real = dirichlet_convolve(&f.to_real(), &g.to_real()).unwrap();
        for k in 1..=n {
            prop_assert_eq!(exact.get_f64(k), real.get_f64(k));
        }
    }
}

#[test]
fn catalog_identities_to_ten_thousand() {
    let n = 10_000;
    let conv = |a, b| dirichlet_convolve(&ex(a, n), &ex(b, n)).unwrap();
    assert!(same(&ex(ArithFn::Phi, n), &conv(ArithFn::Id, ArithFn::Mu)));
    assert!(same(&ex(ArithFn::Psi, n), &conv(ArithFn::Id, ArithFn::AbsMu)));
    assert!(same(&ex(ArithFn::Tau, n), &conv(ArithFn::One, ArithFn::One)));
    assert!(same(&ex(ArithFn::Sigma(1.0), n), &conv(ArithFn::Id, ArithFn::One)));
    assert!(same(&ex(ArithFn::Sigma(2.0), n), &conv(ArithFn::IdPow(2.0), ArithFn::One)));
    assert!(same(&ex(ArithFn::Jordan(2.0), n), &conv(ArithFn::IdPow(2.0), ArithFn::Mu)));
    assert!(same(&ex(ArithFn::Dedekind(2.0), n), &conv(ArithFn::IdPow(2.0), ArithFn::AbsMu)));
    assert!(same(&ex(ArithFn::Id, n), &conv(ArithFn::Phi, ArithFn::One)));
    let e = conv(ArithFn::Mu, ArithFn::One);
    assert!(e.exact().unwrap()[1..].iter().enumerate().all(|(i, v)| {
        *v == BigRational::from_integer(BigInt::from(i64::from(i == 0)))
    }));
}

#[test]
fn squarefree_indicator_matches_abs_mu() {
    let n = 5000;
    assert!(same(&ex(ArithFn::QFree(2), n), &ex(ArithFn::AbsMu, n)));
}

#[test]
fn real_sieve_matches_exact_for_integer_exponents() {
    let n = 3000;
    for kind in [ArithFn::Phi, ArithFn::Psi, ArithFn::Jordan(2.0), ArithFn::Sigma(2.0), ArithFn::Tau] {
        let e = ex(kind, n);
        let r = sieve(kind, n, Backend::Real).unwrap();
        for k in 1..=n {
            assert_eq!(e.get_f64(k), r.get_f64(k), "{kind} at {k}");
        }
    }
}
