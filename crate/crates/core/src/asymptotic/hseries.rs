//! Closed forms of `H_h(σ) = Σ h(n) n^{−σ}` and `H_h′(σ)` for the `h` catalog.

use std::fmt;
use std::str::FromStr;

use crate::arith::ArithFn;
use crate::error::{domain, Error, Result};
use crate::special::{zeta, zeta_prime};

/// The admissible `h` for the `h * id_s` and `h * id_{s+a}` instances.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum HKind {
    Mu,
    AbsMu,
    Tau,
    QFree(u32),
}

impl HKind {
    pub fn arith_fn(self) -> ArithFn {
        match self {
            HKind::Mu => ArithFn::Mu,
            HKind::AbsMu => ArithFn::AbsMu,
            HKind::Tau => ArithFn::Tau,
            HKind::QFree(q) => ArithFn::QFree(q),
        }
    }
}

impl fmt::Display for HKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            HKind::Mu => f.write_str("mu"),
            HKind::AbsMu => f.write_str("abs_mu"),
            HKind::Tau => f.write_str("tau"),
            HKind::QFree(q) => write!(f, "xi_q(q={q})"),
        }
    }
}

impl FromStr for HKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.parse::<ArithFn>() {
            Ok(ArithFn::Mu) => Ok(HKind::Mu),
            Ok(ArithFn::AbsMu) => Ok(HKind::AbsMu),
            Ok(ArithFn::Tau) => Ok(HKind::Tau),
            Ok(ArithFn::QFree(q)) if (2..=3).contains(&q) => Ok(HKind::QFree(q)),
            _ => Err(Error::UnknownSelector(s.to_string())),
        }
    }
}

fn check(sigma: f64) -> Result<()> {
    if !(sigma > 1.0) {
        return Err(domain(format!("H series needs sigma > 1, got {sigma}")));
    }
    Ok(())
}

/// `H_h(σ)`.
pub fn h_series(kind: HKind, sigma: f64) -> Result<f64> {
    check(sigma)?;
    let z = zeta(sigma)?;
    Ok(match kind {
        HKind::Mu => 1.0 / z,
        HKind::AbsMu => z / zeta(2.0 * sigma)?,
        HKind::Tau => z * z,
        HKind::QFree(q) => z / zeta(q as f64 * sigma)?,
    })
}

/// `H_h′(σ) = −Σ h(n) log n · n^{−σ}`.
pub fn h_series_prime(kind: HKind, sigma: f64) -> Result<f64> {
    check(sigma)?;
    let z = zeta(sigma)?;
    let zp = zeta_prime(sigma)?;
    let q = match kind {
        HKind::Mu => return Ok(-zp / (z * z)),
        HKind::Tau => return Ok(2.0 * zp * z),
        HKind::AbsMu => 2.0,
        HKind::QFree(q) => q as f64,
    };
    let zq = zeta(q * sigma)?;
    let zqp = zeta_prime(q * sigma)?;
    Ok((zp * zq - q * zqp * z) / (zq * zq))
}
