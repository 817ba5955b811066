//! ζ and ζ′ on the real line, Bernoulli numbers, Euler's constant.

use std::f64::consts::E;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::arith::NeumaierSum;
use crate::error::{domain, Error, Result};
use crate::scalar::rational_to_f64;

/// Euler–Maclaurin parameters for ζ: the direct sum runs over `n < cutoff`
/// and `corrections` Bernoulli terms are added.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ZetaConfig {
    pub cutoff: usize,
    pub corrections: usize,
}

impl Default for ZetaConfig {
    fn default() -> Self {
        ZetaConfig {
            cutoff: 50,
            corrections: 10,
        }
    }
}

/// A ζ value with the magnitude of the first omitted correction term as its
/// error estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZetaEval {
    pub argument: f64,
    pub value: f64,
    pub precision: f64,
}

pub fn zeta(sigma: f64) -> Result<f64> {
    Ok(zeta_with(sigma, ZetaConfig::default())?.value)
}

pub fn zeta_with(sigma: f64, cfg: ZetaConfig) -> Result<ZetaEval> {
    if sigma == 1.0 {
        return Err(Error::Pole);
    }
    if !(sigma > -1.0) || !sigma.is_finite() {
        return Err(Error::Unsupported(sigma));
    }
    let n = cfg.cutoff.max(2) as f64;
    let mut acc = NeumaierSum::new();
    for k in (1..cfg.cutoff.max(2)).rev() {
        acc += (k as f64).powf(-sigma);
    }
    let n_pow = n.powf(-sigma);
    acc += n_pow * n / (sigma - 1.0);
    acc += n_pow / 2.0;
    // T_k = B_{2k}/(2k)! · s(s+1)…(s+2k−2) · N^{−s−2k+1}
    let mut poch = sigma;
    let mut fact = 2.0;
    let mut p = n_pow / n;
    let mut last = 0.0;
    for k in 1..=cfg.corrections + 1 {
        if k > 1 {
            let j = (2 * k - 3) as f64;
            poch *= (sigma + j) * (sigma + j + 1.0);
            fact *= ((2 * k - 1) * 2 * k) as f64;
            p /= n * n;
        }
        let t = bernoulli_even_f64(k) / fact * poch * p;
        if k > cfg.corrections {
            last = t;
        } else {
            acc += t;
        }
    }
    Ok(ZetaEval {
        argument: sigma,
        value: acc.sum(),
        precision: last.abs(),
    })
}

/// `ζ′(σ)` for `σ > 1`, differentiating the Euler–Maclaurin formula term by
/// term.
pub fn zeta_prime(sigma: f64) -> Result<f64> {
    zeta_prime_with(sigma, ZetaConfig::default())
}

pub fn zeta_prime_with(sigma: f64, cfg: ZetaConfig) -> Result<f64> {
    if !(sigma > 1.0) || !sigma.is_finite() {
        return Err(domain(format!("zeta_prime needs sigma > 1, got {sigma}")));
    }
    let cutoff = cfg.cutoff.max(2);
    let n = cutoff as f64;
    let ln_n = n.ln();
    let mut acc = NeumaierSum::new();
    for k in (2..cutoff).rev() {
        let kf = k as f64;
        acc += -kf.ln() * kf.powf(-sigma);
    }
    let n_pow = n.powf(-sigma);
    let s1 = sigma - 1.0;
    acc += -ln_n * n_pow * n / s1 - n_pow * n / (s1 * s1);
    acc += -ln_n * n_pow / 2.0;
    let mut poch = sigma;
    let mut dlog = 1.0 / sigma;
    let mut fact = 2.0;
    let mut p = n_pow / n;
    for k in 1..=cfg.corrections {
        if k > 1 {
            let j = (2 * k - 3) as f64;
            poch *= (sigma + j) * (sigma + j + 1.0);
            dlog += 1.0 / (sigma + j) + 1.0 / (sigma + j + 1.0);
            fact *= ((2 * k - 1) * 2 * k) as f64;
            p /= n * n;
        }
        let t = bernoulli_even_f64(k) / fact * poch * p;
        acc += t * (dlog - ln_n);
    }
    Ok(acc.sum())
}

/// Exact Bernoulli numbers `B_0..=B_max` from `Σ_{k=0}^{m} C(m+1,k) B_k = 0`.
/// Only `B_0` and even indices are exposed.
#[derive(Debug, Clone)]
pub struct BernoulliTable {
    values: Vec<BigRational>,
}

impl BernoulliTable {
    pub fn new(max_index: usize) -> Self {
        let mut values: Vec<BigRational> = Vec::with_capacity(max_index + 1);
        values.push(BigRational::one());
        for m in 1..=max_index {
            let mut s = BigRational::zero();
            let mut c = BigInt::one(); // C(m+1, k)
            for (k, b) in values.iter().enumerate() {
                if !b.is_zero() {
                    s += b * BigRational::from_integer(c.clone());
                }
                c = c * BigInt::from(m + 1 - k) / BigInt::from(k + 1);
            }
            values.push(-s / BigRational::from_integer(BigInt::from(m + 1)));
        }
        BernoulliTable { values }
    }

    pub fn max_index(&self) -> usize {
        self.values.len() - 1
    }

    /// `B_k` for `k = 0` or even `k`; `None` for odd `k` or beyond the table.
    pub fn get(&self, k: usize) -> Option<&BigRational> {
        if k % 2 == 1 {
            return None;
        }
        self.values.get(k)
    }
}

const CACHED_INDEX: usize = 64;

fn cached() -> &'static (BernoulliTable, Vec<f64>) {
    static TABLE: OnceLock<(BernoulliTable, Vec<f64>)> = OnceLock::new();
    TABLE.get_or_init(|| {
        let t = BernoulliTable::new(CACHED_INDEX);
        let f = t.values.iter().map(rational_to_f64).collect();
        (t, f)
    })
}

/// `B_{2m}` as an exact rational.
pub fn bernoulli_even(m: usize) -> Result<BigRational> {
    if m == 0 {
        return Err(domain("bernoulli_even needs m >= 1"));
    }
    if 2 * m <= CACHED_INDEX {
        return Ok(cached().0.values[2 * m].clone());
    }
    Ok(BernoulliTable::new(2 * m).values[2 * m].clone())
}

/// `B_{2m}` rounded to `f64`.
pub fn bernoulli_even_f64(m: usize) -> f64 {
    if 2 * m <= CACHED_INDEX {
        cached().1[2 * m]
    } else {
        rational_to_f64(&BernoulliTable::new(2 * m).values[2 * m])
    }
}

/// `B_k^+` (the convention with `B_1 = +1/2`), as used in Faulhaber's formula
/// `Σ_{n≤N} n^r = 1/(r+1) Σ_{k=0}^{r} C(r+1,k) B_k^+ N^{r+1−k}`.
pub fn bernoulli_plus(k: usize) -> BigRational {
    match k {
        0 => BigRational::one(),
        1 => BigRational::new(BigInt::one(), BigInt::from(2)),
        k if k % 2 == 1 => BigRational::zero(),
        k => bernoulli_even(k / 2).expect("k >= 2"),
    }
}

/// Binomial coefficient as an exact integer.
pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut c = BigInt::one();
    for i in 0..k {
        c = c * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    c
}

const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// `H_N − log N − 1/(2N) + 1/(12N²) − 1/(120N⁴)`.
pub fn harmonic_gamma_estimate(n: u64) -> f64 {
    let mut h = NeumaierSum::new();
    for k in (1..=n).rev() {
        h += 1.0 / k as f64;
    }
    let nf = n as f64;
    let n2 = nf * nf;
    h += -nf.ln();
    h += -1.0 / (2.0 * nf);
    h += 1.0 / (12.0 * n2);
    h += -1.0 / (120.0 * n2 * n2);
    h.sum()
}

/// Euler's constant γ. The stored literal is checked once per process
/// against [`harmonic_gamma_estimate`].
pub fn euler_gamma() -> f64 {
    static CHECKED: OnceLock<()> = OnceLock::new();
    CHECKED.get_or_init(|| {
        let est = harmonic_gamma_estimate(10_000);
        assert!(
            (est - EULER_GAMMA).abs() < 1e-13,
            "stored gamma disagrees with harmonic estimate {est}"
        );
    });
    EULER_GAMMA
}

/// `δ(x) = exp(−C (log x)^{3/5} (log log x)^{−1/5})`, for `x > e`.
pub fn delta_decay(x: f64, c: f64) -> Result<f64> {
    if !(x > E) || !x.is_finite() {
        return Err(domain(format!("delta_decay needs x > e, got {x}")));
    }
    if !(c > 0.0) {
        return Err(domain(format!("delta_decay needs C > 0, got {c}")));
    }
    let l = x.ln();
    Ok((-c * l.powf(0.6) * l.ln().powf(-0.2)).exp())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn zeta_classical_values() {
        assert!((zeta(2.0).unwrap() - PI * PI / 6.0).abs() < 1e-15);
        assert!((zeta(4.0).unwrap() - PI.powi(4) / 90.0).abs() < 1e-15);
        assert!((zeta(0.0).unwrap() + 0.5).abs() < 1e-15);
        assert!(matches!(zeta(1.0), Err(Error::Pole)));
        assert!(matches!(zeta(-1.5), Err(Error::Unsupported(_))));
    }

    #[test]
    fn zeta_reports_precision() {
        let z = zeta_with(0.5, ZetaConfig::default()).unwrap();
        assert!(z.precision < 1e-14);
        let coarse = zeta_with(0.5, ZetaConfig { cutoff: 5, corrections: 2 }).unwrap();
        assert!((coarse.value - z.value).abs() < 10.0 * coarse.precision);
    }

    #[test]
    fn bernoulli_values() {
        let q = |n: i64, d: i64| BigRational::new(BigInt::from(n), BigInt::from(d));
        assert_eq!(bernoulli_even(1).unwrap(), q(1, 6));
        assert_eq!(bernoulli_even(2).unwrap(), q(-1, 30));
        assert_eq!(bernoulli_even(3).unwrap(), q(1, 42));
        assert_eq!(bernoulli_even(6).unwrap(), q(-691, 2730));
        assert!(bernoulli_even(0).is_err());
        let t = BernoulliTable::new(10);
        assert!(t.get(3).is_none());
        assert_eq!(t.get(0), Some(&BigRational::one()));
    }

    #[test]
    fn gamma_checks() {
        let g = euler_gamma();
        assert!((g - 0.5772156649015329).abs() < 1e-16);
        assert!((2.0 * g - 1.0 - 0.1544313298).abs() < 1e-10);
    }

    #[test]
    fn delta_decay_values() {
        let v = delta_decay(E.powf(E), 1.0).unwrap();
        assert!((v - (-E.powf(0.6)).exp()).abs() < 1e-15);
        assert!((v - 0.161).abs() < 1e-3);
        assert!(delta_decay(E, 1.0).is_err());
        let grid: Vec<f64> = (1..=6).map(|k| delta_decay(10f64.powi(k), 1.0).unwrap()).collect();
        assert!(grid.windows(2).all(|w| w[1] < w[0]));
    }
}
