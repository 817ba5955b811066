//! Convolution partial sums behind the main terms, checked against their
//! predicted main parts.

use std::fmt;
use std::str::FromStr;

use crate::arith::{
    compensated_sum, dirichlet_convolve, floor_index, sieve, ArithFn, Backend, FnTable,
    NeumaierSum, RealExponent,
};
use crate::error::{domain, Error, Result};
use crate::special::zeta;

use super::delta::{weighted_delta_sum_with, DeltaKind, DeltaTable};

/// The partial sums `Σ_{dl≤x} c(d) e(l)` that are checked.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LemmaId {
    /// `Σ_{n≤x} (μ/id * σ_a)(n)`.
    Sigma1,
    /// `Σ_{dl≤x} (μ/id * id_{−2m})(d) l^a`.
    La,
    /// `Σ_{dl≤x} (φ_{1+a} * μ)(d)/d`.
    Mu,
    /// `Σ_{dl≤x} (ψ_{1+a} * μ)(d)/d`.
    Psi,
    /// `Σ_{dl≤x} (φ_{1+a} * μ)(d)/d · l^{−2m}`.
    L2m,
    /// `Σ_{dl≤x} (ψ_{1+a} * μ)(d)/d · l^{−2m}`.
    Psi2m,
}

impl LemmaId {
    pub const ALL: [LemmaId; 6] = [
        LemmaId::Sigma1,
        LemmaId::La,
        LemmaId::Mu,
        LemmaId::Psi,
        LemmaId::L2m,
        LemmaId::Psi2m,
    ];

    pub fn needs_m(self) -> bool {
        matches!(self, LemmaId::La | LemmaId::L2m | LemmaId::Psi2m)
    }
}

impl fmt::Display for LemmaId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            LemmaId::Sigma1 => "lem2-sigma1",
            LemmaId::La => "lem2-la",
            LemmaId::Mu => "lem2-mu",
            LemmaId::Psi => "lem2-psi",
            LemmaId::L2m => "lem2-l2m",
            LemmaId::Psi2m => "lem2-psi2m",
        })
    }
}

impl FromStr for LemmaId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        LemmaId::ALL
            .into_iter()
            .find(|id| id.to_string().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| Error::UnknownSelector(s.to_string()))
    }
}

/// `residual = exact − predicted_main − delta_sum`; `delta_sum` is zero
/// where no Δ_a part is displayed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LemmaCheck {
    pub exact: f64,
    pub predicted_main: f64,
    pub delta_sum: f64,
    pub residual: f64,
}

fn div_by_id(t: &FnTable) -> Result<FnTable> {
    t.mul_power(-1.0)
}

/// Run one check at `x` (tables are built to `⌊x⌋`).
pub fn lemma_sum_check(id: LemmaId, x: f64, a: RealExponent, m: u32) -> Result<LemmaCheck> {
    if !(x >= 1.0) {
        return Err(domain(format!("lemma checks need x >= 1, got {x}")));
    }
    if id.needs_m() && m < 2 {
        return Err(domain(format!("{id} needs m >= 2, got {m}")));
    }
    let n = floor_index(x)?.max(2);
    let av = a.get();
    let real = |k| sieve(k, n, Backend::Real);
    let mu = real(ArithFn::Mu)?;
    let phi_mu = || dirichlet_convolve(&real(ArithFn::Jordan(1.0 + av))?, &mu);
    let psi_mu = || dirichlet_convolve(&real(ArithFn::Dedekind(1.0 + av))?, &mu);
    let l_pow = |e: f64| -> Vec<f64> {
        let mut acc = NeumaierSum::new();
        let mut v = vec![0.0];
        for l in 1..=n {
            acc += (l as f64).powf(e);
            v.push(acc.sum());
        }
        v
    };
    let ones: Vec<f64> = (0..=n).map(|l| l as f64).collect();
    let two_m = 2.0 * m as f64;
    let z = zeta;

    // coefficients c(d), running sums E, main part, and the Δ_a weight
    let (c, e, main, weight): (FnTable, Vec<f64>, f64, Option<FnTable>) = match id {
        LemmaId::Sigma1 => {
            let c = div_by_id(&mu)?;
            let t = DeltaTable::new(DeltaKind::Sigma(a), n)?;
            let e = (0..=n).map(|l| t.summatory(l as f64)).collect();
            let main = z(1.0 - av)? / z(2.0)? * x
                + z(1.0 + av)? / ((1.0 + av) * z(2.0 + av)?) * x.powf(1.0 + av);
            (c, e, main, Some(mu.clone()))
        }
        LemmaId::La => {
            let c = dirichlet_convolve(&div_by_id(&mu)?, &real(ArithFn::IdPow(-two_m))?)?;
            let main = z(two_m + av + 1.0)? / ((1.0 + av) * z(2.0 + av)?) * x.powf(1.0 + av);
            (c, l_pow(av), main, None)
        }
        LemmaId::Mu => {
            let main = z(1.0 - av)? / z(2.0)?.powi(2) * x
                + z(1.0 + av)? / ((1.0 + av) * z(2.0 + av)?.powi(2)) * x.powf(1.0 + av);
            let w = dirichlet_convolve(&mu, &mu)?;
            (div_by_id(&phi_mu()?)?, ones, main, Some(w))
        }
        LemmaId::Psi => {
            let main = z(1.0 - av)? / z(4.0)? * x
                + z(1.0 + av)? / ((1.0 + av) * z(4.0 + 2.0 * av)?) * x.powf(1.0 + av);
            let w = dirichlet_convolve(&real(ArithFn::AbsMu)?, &mu)?;
            (div_by_id(&psi_mu()?)?, ones, main, Some(w))
        }
        LemmaId::L2m => {
            let main =
                z(av + two_m + 1.0)? / ((av + 1.0) * z(av + 2.0)?.powi(2)) * x.powf(1.0 + av);
            (div_by_id(&phi_mu()?)?, l_pow(-two_m), main, None)
        }
        LemmaId::Psi2m => {
            let main =
                z(two_m + av + 1.0)? / ((1.0 + av) * z(4.0 + 2.0 * av)?) * x.powf(1.0 + av);
            (div_by_id(&psi_mu()?)?, l_pow(-two_m), main, None)
        }
    };
    let cv = c.reals();
    let nx = floor_index(x)?;
    let exact = compensated_sum((1..=nx).map(|d| cv[d] * e[floor_index(x / d as f64).unwrap_or(0)]));
    let delta_sum = match weight {
        Some(w) => {
            let t = DeltaTable::new(DeltaKind::Sigma(a), n)?;
            weighted_delta_sum_with(&t, &w.reals(), 1.0, x)
        }
        None => 0.0,
    };
    Ok(LemmaCheck {
        exact,
        predicted_main: main,
        delta_sum,
        residual: exact - main - delta_sum,
    })
}
