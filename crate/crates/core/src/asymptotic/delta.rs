//! Error terms of the (generalized) Dirichlet divisor problem.

use std::f64::consts::{PI, SQRT_2};

use crate::arith::{
    sieve, summatory_tau, ArithFn, Backend, FnTable, NeumaierSum, PowerSum, RealExponent,
};
use crate::arith::{compensated_sum, summatory_sigma_a};
use crate::error::{domain, Error, Result};
use crate::special::{euler_gamma, zeta};

/// Which divisor problem: `Δ` (for `τ`) or `Δ_a` (for `σ_a`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DeltaKind {
    Divisor,
    Sigma(RealExponent),
}

impl DeltaKind {
    pub fn from_exponent(a: Option<RealExponent>) -> Self {
        a.map_or(DeltaKind::Divisor, DeltaKind::Sigma)
    }
}

/// Smooth main part of the summatory function.
#[derive(Debug, Clone, Copy)]
enum MainPart {
    /// `y log y + (2γ−1) y`
    Divisor { c1: f64 },
    /// `ζ(1−a) y + ζ(1+a)/(1+a) y^{1+a} − ζ(−a)/2`
    Sigma { a: f64, c_lin: f64, c_pow: f64, c_0: f64 },
}

impl MainPart {
    fn new(kind: DeltaKind) -> Result<Self> {
        Ok(match kind {
            DeltaKind::Divisor => MainPart::Divisor {
                c1: 2.0 * euler_gamma() - 1.0,
            },
            DeltaKind::Sigma(a) => {
                let a = a.get();
                MainPart::Sigma {
                    a,
                    c_lin: zeta(1.0 - a)?,
                    c_pow: zeta(1.0 + a)? / (1.0 + a),
                    c_0: -zeta(-a)? / 2.0,
                }
            }
        })
    }

    fn eval(&self, y: f64) -> f64 {
        match *self {
            MainPart::Divisor { c1 } => {
                if y <= 0.0 {
                    0.0
                } else {
                    y * y.ln() + c1 * y
                }
            }
            MainPart::Sigma { a, c_lin, c_pow, c_0 } => c_lin * y + c_pow * y.powf(1.0 + a) + c_0,
        }
    }
}

/// `Δ(x) = Σ_{n≤x} τ(n) − x log x − (2γ−1)x`.
pub fn delta_divisor(x: f64) -> Result<f64> {
    if !(x >= 1.0) || !x.is_finite() {
        return Err(domain(format!("delta needs x >= 1, got {x}")));
    }
    let main = MainPart::new(DeltaKind::Divisor)?;
    Ok(summatory_tau(x) as f64 - main.eval(x))
}

/// `Δ_a(x) = Σ_{n≤x} σ_a(n) − ζ(1−a)x − ζ(1+a)/(1+a) x^{1+a} + ζ(−a)/2`.
pub fn delta_a(x: f64, a: RealExponent) -> Result<f64> {
    let s = summatory_sigma_a(x, a)?;
    Ok(s - MainPart::new(DeltaKind::Sigma(a))?.eval(x))
}

/// Δ or Δ_a with the summatory function tabulated up to `limit` (O(1)
/// lookups) and the hyperbola method beyond.
#[derive(Debug, Clone)]
pub struct DeltaTable {
    kind: DeltaKind,
    main: MainPart,
    prefix: Vec<f64>,
    power_sum: Option<PowerSum>,
}

impl DeltaTable {
    pub fn new(kind: DeltaKind, limit: usize) -> Result<Self> {
        let f = match kind {
            DeltaKind::Divisor => ArithFn::Tau,
            DeltaKind::Sigma(a) => ArithFn::Sigma(a.get()),
        };
        let t = sieve(f, limit.max(1), Backend::Real)?;
        let mut acc = NeumaierSum::new();
        let mut prefix = Vec::with_capacity(limit + 2);
        prefix.push(0.0);
        for v in &t.reals()[1..] {
            acc += *v;
            prefix.push(acc.sum());
        }
        let power_sum = match kind {
            DeltaKind::Divisor => None,
            DeltaKind::Sigma(a) => Some(PowerSum::new(a)?),
        };
        Ok(DeltaTable {
            kind,
            main: MainPart::new(kind)?,
            prefix,
            power_sum,
        })
    }

    pub fn kind(&self) -> DeltaKind {
        self.kind
    }

    pub fn limit(&self) -> usize {
        self.prefix.len() - 1
    }

    /// `Σ_{n≤y} τ(n)` or `Σ_{n≤y} σ_a(n)`; zero for `y < 1`.
    pub fn summatory(&self, y: f64) -> f64 {
        if !(y >= 1.0) {
            return 0.0;
        }
        let n = y.floor() as usize;
        if n <= self.limit() {
            return self.prefix[n];
        }
        match &self.power_sum {
            None => summatory_tau(y) as f64,
            Some(ps) => crate::arith::divisor::summatory_sigma_with(ps, y),
        }
    }

    pub fn main(&self, y: f64) -> f64 {
        self.main.eval(y)
    }

    pub fn eval(&self, y: f64) -> f64 {
        self.summatory(y) - self.main(y)
    }
}

/// `Σ_{n≤x} w(n)/n^p · Δ_a(x/n)` (or with `Δ` when `a` is absent).
pub fn weighted_delta_sum(w: &FnTable, p: f64, x: f64, a: Option<RealExponent>) -> Result<f64> {
    let n = crate::arith::floor_index(x)?;
    if n > w.limit() {
        return Err(Error::OutOfRange {
            what: "x",
            value: x,
            limit: w.limit() as u64,
        });
    }
    let table = DeltaTable::new(DeltaKind::from_exponent(a), n)?;
    Ok(weighted_delta_sum_with(&table, &w.reals(), p, x))
}

/// As [`weighted_delta_sum`] with a prepared Δ table and weights (index 0
/// unused, covering `⌊x⌋`).
pub fn weighted_delta_sum_with(table: &DeltaTable, w: &[f64], p: f64, x: f64) -> f64 {
    let n = if x >= 1.0 { x.floor() as usize } else { 0 };
    compensated_sum((1..=n).filter(|&k| w[k] != 0.0).map(|k| {
        let kf = k as f64;
        w[k] * kf.powf(-p) * table.eval(x / kf)
    }))
}

/// A truncated Voronoi series evaluation and whether `N ≤ x` held.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VoronoiEval {
    pub value: f64,
    pub in_regime: bool,
}

/// `x^{1/4+a/2}/(π√2) Σ_{n≤N} σ_a(n) n^{−3/4−a/2} cos(4π√(nx) − π/4)`.
#[derive(Debug, Clone)]
pub struct VoronoiSeries {
    a: f64,
    coeffs: Vec<f64>,
}

impl VoronoiSeries {
    pub fn new(a: RealExponent, terms: usize) -> Result<Self> {
        let a = a.get();
        let coeffs = if terms == 0 {
            Vec::new()
        } else {
            let sig = sieve(ArithFn::Sigma(a), terms, Backend::Real)?;
            let e = -0.75 - a / 2.0;
            sig.reals()[1..]
                .iter()
                .enumerate()
                .map(|(i, s)| s * ((i + 1) as f64).powf(e))
                .collect()
        };
        Ok(VoronoiSeries { a, coeffs })
    }

    pub fn terms(&self) -> usize {
        self.coeffs.len()
    }

    pub fn eval(&self, x: f64) -> VoronoiEval {
        let sx = x.sqrt();
        let s = compensated_sum(self.coeffs.iter().enumerate().map(|(i, c)| {
            let n = (i + 1) as f64;
            c * (4.0 * PI * n.sqrt() * sx - PI / 4.0).cos()
        }));
        VoronoiEval {
            value: x.powf(0.25 + self.a / 2.0) / (PI * SQRT_2) * s,
            in_regime: self.terms() as f64 <= x,
        }
    }
}

/// One-shot truncated Voronoi series for `Δ_a(x)`.
pub fn voronoi_delta_a(x: f64, a: RealExponent, terms: usize) -> Result<VoronoiEval> {
    if !(x > 0.0) {
        return Err(domain(format!("voronoi needs x > 0, got {x}")));
    }
    Ok(VoronoiSeries::new(a, terms)?.eval(x))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ex(a: f64) -> RealExponent {
        RealExponent::divisor_range(a).unwrap()
    }

    #[test]
    fn delta_at_one() {
        let g = euler_gamma();
        assert!((delta_divisor(1.0).unwrap() - (2.0 - 2.0 * g)).abs() < 1e-15);
        let a = ex(-0.5);
        let want = 1.0 - zeta(1.5).unwrap() - 2.0 * zeta(0.5).unwrap() + zeta(0.5).unwrap() / 2.0;
        assert!((delta_a(1.0, a).unwrap() - want).abs() < 1e-14);
        assert!((want - 0.578156).abs() < 1e-6);
    }

    #[test]
    fn table_and_hyperbola_agree() {
        let a = ex(-0.3);
        let t = DeltaTable::new(DeltaKind::Sigma(a), 5000).unwrap();
        let small = DeltaTable::new(DeltaKind::Sigma(a), 10).unwrap();
        for y in [10.5, 99.0, 1234.7, 4999.0] {
            assert!((t.eval(y) - small.eval(y)).abs() < 1e-9 * t.summatory(y));
            assert!((t.eval(y) - delta_a(y, a).unwrap()).abs() < 1e-9 * t.summatory(y));
        }
        let d = DeltaTable::new(DeltaKind::Divisor, 3000).unwrap();
        for y in [1.0, 2.5, 2999.9] {
            assert!((d.eval(y) - delta_divisor(y).unwrap()).abs() < 1e-9);
        }
    }

    #[test]
    fn voronoi_edge_cases() {
        let a = ex(-0.5);
        let v0 = voronoi_delta_a(1e4, a, 0).unwrap();
        assert_eq!(v0.value, 0.0);
        let big = voronoi_delta_a(10.0, a, 100).unwrap();
        assert!(!big.in_regime);
        let x: f64 = 1e4 + 0.3;
        let v1 = voronoi_delta_a(x, a, 1).unwrap();
        let amp = x.powf(0.25 - 0.25) / (PI * SQRT_2);
        let phase = (4.0 * PI * x.sqrt() - PI / 4.0).cos();
        assert!((v1.value - amp * phase).abs() < 1e-12);
    }

    #[test]
    fn weighted_sum_single_term() {
        let a = ex(-0.5);
        let mu = sieve(ArithFn::Mu, 5, Backend::Real).unwrap();
        let v = weighted_delta_sum(&mu, 1.0, 1.0, Some(a)).unwrap();
        assert!((v - delta_a(1.0, a).unwrap()).abs() < 1e-14);
        assert!(weighted_delta_sum(&mu, 1.0, 6.0, Some(a)).is_err());
    }
}
