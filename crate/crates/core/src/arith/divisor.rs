//! Summatory divisor functions by the Dirichlet hyperbola method.

use num_integer::Roots;

use super::sum::NeumaierSum;
use super::{floor_index, RealExponent};
use crate::error::{domain, Result};
use crate::special::{bernoulli_even_f64, zeta};

/// `Σ_{n≤x} τ(n)`, exact, via `2 Σ_{d≤u} ⌊N/d⌋ − u²` with `u = ⌊√N⌋`.
pub fn summatory_tau(x: f64) -> u128 {
    let n = floor_index(x).unwrap_or(0) as u64;
    if n == 0 {
        return 0;
    }
    let u = n.sqrt();
    let s: u128 = (1..=u).map(|d| (n / d) as u128).sum();
    2 * s - (u as u128) * (u as u128)
}

const DIRECT_BELOW: u64 = 64;
const EM_TERMS: usize = 6;

/// `S_a(M) = Σ_{n≤M} n^a` for a fixed exponent, direct for small `M` and by
/// Euler–Maclaurin with the constant `ζ(−a)` beyond.
#[derive(Debug, Clone)]
pub struct PowerSum {
    a: f64,
    zeta_neg_a: f64,
    /// `B_{2k}/(2k)! · a(a−1)…(a−2k+2)` for `k = 1..=EM_TERMS`.
    coeffs: [f64; EM_TERMS],
}

impl PowerSum {
    pub fn new(a: RealExponent) -> Result<Self> {
        let a = a.get();
        let zeta_neg_a = zeta(-a)?;
        let mut coeffs = [0.0; EM_TERMS];
        let mut falling = 1.0;
        let mut fact = 1.0;
        for (k, c) in coeffs.iter_mut().enumerate() {
            let k = k + 1;
            // falling = a(a−1)…(a−2k+2), fact = (2k)!
            let lo = 2 * k - 2;
            if k == 1 {
                falling = a;
            } else {
                falling *= (a - (lo as f64 - 1.0)) * (a - lo as f64);
            }
            fact *= ((2 * k - 1) * 2 * k) as f64;
            *c = bernoulli_even_f64(k) / fact * falling;
        }
        Ok(PowerSum {
            a,
            zeta_neg_a,
            coeffs,
        })
    }

    pub fn exponent(&self) -> f64 {
        self.a
    }

    pub fn eval(&self, m: u64) -> f64 {
        let a = self.a;
        if m < DIRECT_BELOW {
            let mut s = NeumaierSum::new();
            for n in 1..=m {
                s += (n as f64).powf(a);
            }
            return s.sum();
        }
        let mf = m as f64;
        let ma = mf.powf(a);
        let mut s = NeumaierSum::new();
        s += self.zeta_neg_a;
        s += ma * mf / (1.0 + a);
        s += ma / 2.0;
        let inv2 = 1.0 / (mf * mf);
        let mut p = ma / mf;
        for c in self.coeffs {
            s += c * p;
            p *= inv2;
        }
        s.sum()
    }
}

/// `Σ_{n≤M} n^a`.
pub fn power_sum(m: u64, a: RealExponent) -> Result<f64> {
    Ok(PowerSum::new(a)?.eval(m))
}

/// `Σ_{n≤x} σ_a(n)` through `σ_a = id_a * 1` split at `u = ⌊√x⌋`:
/// `Σ_{d≤u} d^a ⌊N/d⌋ + Σ_{l≤u} S_a(⌊N/l⌋) − u·S_a(u)`.
pub fn summatory_sigma_a(x: f64, a: RealExponent) -> Result<f64> {
    if !(x >= 1.0) {
        return Err(domain(format!("summatory sigma_a needs x >= 1, got {x}")));
    }
    let ps = PowerSum::new(a)?;
    Ok(summatory_sigma_with(&ps, x))
}

pub(crate) fn summatory_sigma_with(ps: &PowerSum, x: f64) -> f64 {
    let n = x.floor() as u64;
    if n == 0 {
        return 0.0;
    }
    let u = n.sqrt();
    let a = ps.exponent();
    let mut s = NeumaierSum::new();
    for d in 1..=u {
        s += (d as f64).powf(a) * (n / d) as f64;
    }
    for l in 1..=u {
        s += ps.eval(n / l);
    }
    s += -(u as f64) * ps.eval(u);
    s.sum()
}
