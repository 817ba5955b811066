//! The sawtooth `ϑ` and the sums `D_s`, `D̃_s` built from it.

use crate::arith::{compensated_sum, FnTable};
use crate::error::{domain, Error, Result};
use crate::special::zeta;

/// `ϑ(x) = x − ⌊x⌋ − 1/2`.
pub fn vartheta(x: f64) -> f64 {
    x - x.floor() - 0.5
}

/// `Σ_{d≤x} h(d) d^{−s} ϑ(x/d)`.
pub fn vartheta_sum(h: &FnTable, s: f64, x: f64) -> Result<f64> {
    let n = crate::arith::floor_index(x)?;
    if n > h.limit() {
        return Err(Error::OutOfRange {
            what: "x",
            value: x,
            limit: h.limit() as u64,
        });
    }
    Ok(vartheta_sum_with(&h.reals(), s, x))
}

pub(crate) fn vartheta_sum_with(h: &[f64], s: f64, x: f64) -> f64 {
    let n = if x >= 1.0 { x.floor() as usize } else { 0 };
    compensated_sum((1..=n).filter(|&d| h[d] != 0.0).map(|d| {
        let df = d as f64;
        h[d] * df.powf(-s) * vartheta(x / df)
    }))
}

/// `D_s(x) = −Σ_{d≤x} μ(d) d^{−s} ϑ(x/d) − 1/(2ζ(s))`; `mu` must cover `⌊x⌋`.
pub fn d_s(x: f64, s: f64, mu: &FnTable) -> Result<f64> {
    check(x, s)?;
    Ok(-vartheta_sum(mu, s, x)? - 1.0 / (2.0 * zeta(s)?))
}

/// `D̃_s(x) = −Σ_{d≤x} |μ(d)| d^{−s} ϑ(x/d) − ζ(s)/(2ζ(2s))`.
pub fn d_tilde_s(x: f64, s: f64, abs_mu: &FnTable) -> Result<f64> {
    check(x, s)?;
    Ok(-vartheta_sum(abs_mu, s, x)? - zeta(s)? / (2.0 * zeta(2.0 * s)?))
}

fn check(x: f64, s: f64) -> Result<()> {
    if !(x >= 1.0) {
        return Err(domain(format!("D_s needs x >= 1, got {x}")));
    }
    if !(s > 1.0) {
        return Err(domain(format!("D_s needs s > 1, got {s}")));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{sieve, ArithFn, Backend};

    #[test]
    fn vartheta_values() {
        assert_eq!(vartheta(2.5), 0.0);
        assert_eq!(vartheta(3.0), -0.5);
        assert!((vartheta(-0.25) - 0.25).abs() < 1e-15);
    }

    #[test]
    fn d2_at_one() {
        let mu = sieve(ArithFn::Mu, 1, Backend::Real).unwrap();
        let v = d_s(1.0, 2.0, &mu).unwrap();
        assert!((v - (0.5 - 1.0 / (2.0 * zeta(2.0).unwrap()))).abs() < 1e-15);
        assert!((v - 0.196036).abs() < 1e-6);
    }
}
