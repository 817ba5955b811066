//! Arithmetic-function tables, Dirichlet convolution and summatory functions.

pub(crate) mod divisor;
mod sieve;
mod sum;

use std::borrow::Cow;
use std::fmt;
use std::str::FromStr;

use num_rational::BigRational;
use num_traits::Signed;

pub use divisor::{power_sum, summatory_sigma_a, summatory_tau, PowerSum};
pub use sieve::Factorizer;
pub use sum::{compensated_sum, NeumaierSum};

use crate::error::{domain, Error, Result};
use crate::scalar::{Scalar, Value};

/// Mantissa bits of the real backend.
pub const REAL_PRECISION_BITS: u32 = f64::MANTISSA_DIGITS;

/// An exponent `a` checked against an open interval at construction.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct RealExponent(f64);

impl RealExponent {
    pub fn in_open_interval(a: f64, lo: f64, hi: f64) -> Result<Self> {
        if a.is_finite() && lo < a && a < hi {
            Ok(RealExponent(a))
        } else {
            Err(domain(format!("exponent a = {a} must lie in ({lo}, {hi})")))
        }
    }

    /// `-1 < a < 0`, the range of the divisor-problem theorems.
    pub fn divisor_range(a: f64) -> Result<Self> {
        Self::in_open_interval(a, -1.0, 0.0)
    }

    /// `-1/4 < a < 0`, the range of the mean-square theorems.
    pub fn mean_square_range(a: f64) -> Result<Self> {
        Self::in_open_interval(a, -0.25, 0.0)
    }

    pub fn get(self) -> f64 {
        self.0
    }
}

impl fmt::Display for RealExponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Value backend of a table.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Backend {
    Exact,
    Real,
}

impl fmt::Display for Backend {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Backend::Exact => "exact",
            Backend::Real => "real",
        })
    }
}

impl FromStr for Backend {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exact" => Ok(Backend::Exact),
            "real" => Ok(Backend::Real),
            _ => Err(Error::UnknownSelector(s.to_string())),
        }
    }
}

/// The catalog of arithmetic functions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ArithFn {
    Mu,
    AbsMu,
    One,
    Id,
    /// `id_a(n) = n^a`.
    IdPow(f64),
    Tau,
    /// `σ_a = id_a * 1`.
    Sigma(f64),
    Phi,
    Psi,
    /// Jordan totient `φ_α = id_α * μ`.
    Jordan(f64),
    /// Generalized Dedekind function `ψ_β = id_β * |μ|`.
    Dedekind(f64),
    /// Indicator of `q`-free integers.
    QFree(u32),
}

impl ArithFn {
    /// The real exponent carried by the kind, if any.
    fn exponent(&self) -> Option<f64> {
        match *self {
            ArithFn::IdPow(a) | ArithFn::Sigma(a) | ArithFn::Jordan(a) | ArithFn::Dedekind(a) => {
                Some(a)
            }
            _ => None,
        }
    }

    /// Whether the exact backend can represent the function.
    pub fn is_exact_representable(&self) -> bool {
        self.exponent().is_none_or(is_small_integer)
    }

    fn validate(&self) -> Result<()> {
        if let Some(a) = self.exponent() {
            if !a.is_finite() {
                return Err(domain(format!("non-finite exponent in {self}")));
            }
        }
        if let ArithFn::QFree(q) = self {
            if *q < 2 {
                return Err(domain("xi_q needs q >= 2"));
            }
        }
        Ok(())
    }
}

fn is_small_integer(a: f64) -> bool {
    a.fract() == 0.0 && a.abs() <= 64.0
}

impl fmt::Display for ArithFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ArithFn::Mu => f.write_str("mu"),
            ArithFn::AbsMu => f.write_str("abs_mu"),
            ArithFn::One => f.write_str("one"),
            ArithFn::Id => f.write_str("id"),
            ArithFn::IdPow(a) => write!(f, "id_a(a={a})"),
            ArithFn::Tau => f.write_str("tau"),
            ArithFn::Sigma(a) => write!(f, "sigma_a(a={a})"),
            ArithFn::Phi => f.write_str("phi"),
            ArithFn::Psi => f.write_str("psi"),
            ArithFn::Jordan(a) => write!(f, "phi_alpha(alpha={a})"),
            ArithFn::Dedekind(b) => write!(f, "psi_beta(beta={b})"),
            ArithFn::QFree(q) => write!(f, "xi_q(q={q})"),
        }
    }
}

/// Accepts the canonical display form (`sigma_a(a=-0.3)`), the bare argument
/// form (`sigma_a(-0.3)`) and the subscript shorthand (`sigma_-0.3`, `phi_2`,
/// `id_1.5`, `xi_3`).
impl FromStr for ArithFn {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        let unknown = || Error::UnknownSelector(s.to_string());
        let simple = match t {
            "mu" => Some(ArithFn::Mu),
            "abs_mu" | "|mu|" => Some(ArithFn::AbsMu),
            "one" | "1" => Some(ArithFn::One),
            "id" => Some(ArithFn::Id),
            "tau" => Some(ArithFn::Tau),
            "phi" => Some(ArithFn::Phi),
            "psi" => Some(ArithFn::Psi),
            _ => None,
        };
        if let Some(k) = simple {
            return Ok(k);
        }
        let (name, arg) = if let Some(open) = t.find('(') {
            let inner = t[open + 1..].strip_suffix(')').ok_or_else(unknown)?;
            let arg = inner.split_once('=').map_or(inner, |(_, v)| v);
            (&t[..open], arg.trim())
        } else {
            let (name, arg) = t.split_once('_').ok_or_else(unknown)?;
            (name, arg)
        };
        let x: f64 = arg.parse().map_err(|_| unknown())?;
        let kind = match name {
            "id_a" | "id" => ArithFn::IdPow(x),
            "sigma_a" | "sigma" => ArithFn::Sigma(x),
            "phi_alpha" | "phi" => ArithFn::Jordan(x),
            "psi_beta" | "psi" => ArithFn::Dedekind(x),
            "xi_q" | "xi" => {
                if x.fract() != 0.0 || x < 2.0 {
                    return Err(unknown());
                }
                ArithFn::QFree(x as u32)
            }
            _ => return Err(unknown()),
        };
        Ok(kind)
    }
}

/// Table storage, index 0 unused (holds zero).
#[derive(Debug, Clone, PartialEq)]
pub enum TableValues {
    Exact(Vec<BigRational>),
    Real(Vec<f64>),
}

/// Values `f(1..=N)` of an arithmetic function. Immutable once built.
#[derive(Debug, Clone, PartialEq)]
pub struct FnTable {
    label: String,
    values: TableValues,
}

impl FnTable {
    /// `values[0]` is ignored; `values[n]` is `f(n)`.
    pub fn from_exact(label: impl Into<String>, values: Vec<BigRational>) -> Result<Self> {
        if values.len() < 2 {
            return Err(domain("table limit must be at least 1"));
        }
        Ok(FnTable {
            label: label.into(),
            values: TableValues::Exact(values),
        })
    }

    /// `values[0]` is ignored; `values[n]` is `f(n)`.
    pub fn from_real(label: impl Into<String>, values: Vec<f64>) -> Result<Self> {
        if values.len() < 2 {
            return Err(domain("table limit must be at least 1"));
        }
        Ok(FnTable {
            label: label.into(),
            values: TableValues::Real(values),
        })
    }

    pub(crate) fn from_scalar<T: Scalar>(label: impl Into<String>, values: Vec<T>) -> Self {
        T::into_table(label.into(), values)
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn limit(&self) -> usize {
        match &self.values {
            TableValues::Exact(v) => v.len() - 1,
            TableValues::Real(v) => v.len() - 1,
        }
    }

    pub fn backend(&self) -> Backend {
        match self.values {
            TableValues::Exact(_) => Backend::Exact,
            TableValues::Real(_) => Backend::Real,
        }
    }

    /// Working precision of the real backend; `None` for exact tables.
    pub fn precision_bits(&self) -> Option<u32> {
        match self.values {
            TableValues::Exact(_) => None,
            TableValues::Real(_) => Some(REAL_PRECISION_BITS),
        }
    }

    pub fn values(&self) -> &TableValues {
        &self.values
    }

    /// Exact storage including the unused index 0.
    pub fn exact(&self) -> Option<&[BigRational]> {
        match &self.values {
            TableValues::Exact(v) => Some(v),
            TableValues::Real(_) => None,
        }
    }

    /// Real values including the unused index 0, converting exact entries.
    pub fn reals(&self) -> Cow<'_, [f64]> {
        match &self.values {
            TableValues::Real(v) => Cow::Borrowed(v),
            TableValues::Exact(v) => Cow::Owned(v.iter().map(Scalar::to_f64).collect()),
        }
    }

    /// `f(n)`; panics outside `1..=limit`.
    pub fn get(&self, n: usize) -> Value {
        assert!(n >= 1 && n <= self.limit(), "index {n} outside table");
        match &self.values {
            TableValues::Exact(v) => Value::Exact(v[n].clone()),
            TableValues::Real(v) => Value::Real(v[n]),
        }
    }

    pub fn get_f64(&self, n: usize) -> f64 {
        assert!(n >= 1 && n <= self.limit(), "index {n} outside table");
        match &self.values {
            TableValues::Exact(v) => v[n].to_f64(),
            TableValues::Real(v) => v[n],
        }
    }

    pub fn to_real(&self) -> FnTable {
        FnTable {
            label: self.label.clone(),
            values: TableValues::Real(self.reals().into_owned()),
        }
    }

    /// Restrict to `1..=limit`.
    pub fn truncate(&self, limit: usize) -> Result<FnTable> {
        if limit == 0 || limit > self.limit() {
            return Err(Error::OutOfRange {
                what: "truncation limit",
                value: limit as f64,
                limit: self.limit() as u64,
            });
        }
        let values = match &self.values {
            TableValues::Exact(v) => TableValues::Exact(v[..=limit].to_vec()),
            TableValues::Real(v) => TableValues::Real(v[..=limit].to_vec()),
        };
        Ok(FnTable {
            label: self.label.clone(),
            values,
        })
    }

    /// `n ↦ f(n)·n^e`. The exact backend needs an integral `e`.
    pub fn mul_power(&self, e: f64) -> Result<FnTable> {
        let label = format!("({})*id_a(a={e})", self.label);
        match &self.values {
            TableValues::Exact(v) => {
                if !is_small_integer(e) {
                    return Err(Error::BackendMismatch(format!(
                        "exact table scaled by non-integral power {e}"
                    )));
                }
                let k = e as i32;
                let out = v
                    .iter()
                    .enumerate()
                    .map(|(n, x)| {
                        if n == 0 {
                            x.clone()
                        } else {
                            x * <BigRational as Scalar>::int_pow(n as u64, k)
                        }
                    })
                    .collect();
                FnTable::from_exact(label, out)
            }
            TableValues::Real(v) => {
                let out = v
                    .iter()
                    .enumerate()
                    .map(|(n, x)| if n == 0 { 0.0 } else { x * (n as f64).powf(e) })
                    .collect();
                FnTable::from_real(label, out)
            }
        }
    }

    /// Pointwise product `f(n)·g(n)`.
    pub fn pointwise_mul(&self, other: &FnTable) -> Result<FnTable> {
        check_limits(self, other)?;
        let label = format!("({})·({})", self.label, other.label);
        match (&self.values, &other.values) {
            (TableValues::Exact(a), TableValues::Exact(b)) => {
                FnTable::from_exact(label, a.iter().zip(b).map(|(x, y)| x * y).collect())
            }
            _ => {
                let (a, b) = (self.reals(), other.reals());
                FnTable::from_real(label, a.iter().zip(b.iter()).map(|(x, y)| x * y).collect())
            }
        }
    }

    /// Pointwise absolute value.
    pub fn abs(&self) -> FnTable {
        let label = format!("|{}|", self.label);
        let values = match &self.values {
            TableValues::Exact(v) => TableValues::Exact(v.iter().map(|x| x.abs()).collect()),
            TableValues::Real(v) => TableValues::Real(v.iter().map(|x| x.abs()).collect()),
        };
        FnTable { label, values }
    }

    /// Running sums `F(n) = Σ_{m≤n} f(m)`, compensated in the real backend.
    pub fn prefix_sums(&self) -> FnTable {
        let label = format!("sum({})", self.label);
        match &self.values {
            TableValues::Exact(v) => FnTable::from_scalar(label, prefix::<BigRational>(v)),
            TableValues::Real(v) => FnTable::from_scalar(label, prefix::<f64>(v)),
        }
    }
}

fn prefix<T: Scalar>(v: &[T]) -> Vec<T> {
    use crate::scalar::Accumulator;
    let mut acc = T::Acc::default();
    let mut out = Vec::with_capacity(v.len());
    out.push(T::zero());
    for x in &v[1..] {
        acc.push(x);
        out.push(acc.total());
    }
    out
}

fn check_limits(f: &FnTable, g: &FnTable) -> Result<()> {
    if f.limit() != g.limit() {
        return Err(domain(format!(
            "table limits differ: {} ({}) vs {} ({})",
            f.limit(),
            f.label,
            g.limit(),
            g.label
        )));
    }
    Ok(())
}

/// Prime-power value builder used by [`sieve`].
trait PowerOf: Scalar {
    /// `p^x`; the exact backend only sees integral `x`.
    fn power(p: u64, x: f64) -> Self;
}

impl PowerOf for f64 {
    fn power(p: u64, x: f64) -> Self {
        (p as f64).powf(x)
    }
}

impl PowerOf for BigRational {
    fn power(p: u64, x: f64) -> Self {
        <BigRational as Scalar>::int_pow(p, x as i32)
    }
}

fn build<T: PowerOf>(fac: &Factorizer, kind: ArithFn) -> Vec<T> {
    let mul = |x: &T, y: &T| x.mul(y);
    let from = |v: i64| T::from_i64(v);
    match kind {
        ArithFn::Mu => fac.multiplicative(T::zero(), T::one(), mul, |_, e| {
            from(if e == 1 { -1 } else { 0 })
        }),
        ArithFn::AbsMu => fac.multiplicative(T::zero(), T::one(), mul, |_, e| {
            from(if e == 1 { 1 } else { 0 })
        }),
        ArithFn::One => fac.multiplicative(T::zero(), T::one(), mul, |_, _| T::one()),
        ArithFn::Id => fac.multiplicative(T::zero(), T::one(), mul, |p, e| {
            T::int_pow(p, e as i32)
        }),
        ArithFn::IdPow(a) => {
            // Direct powers are more accurate than products of prime powers.
            let mut v = Vec::with_capacity(fac.limit() + 1);
            v.push(T::zero());
            v.extend((1..=fac.limit() as u64).map(|n| T::power(n, a)));
            v
        }
        ArithFn::Tau => fac.multiplicative(T::zero(), T::one(), mul, |_, e| from(e as i64 + 1)),
        ArithFn::Sigma(a) => fac.multiplicative(T::zero(), T::one(), mul, |p, e| {
            (0..=e).fold(T::zero(), |acc, i| acc.add(&T::power(p, a * i as f64)))
        }),
        ArithFn::Phi => fac.multiplicative(T::zero(), T::one(), mul, |p, e| {
            T::int_pow(p, e as i32).sub(&T::int_pow(p, e as i32 - 1))
        }),
        ArithFn::Psi => fac.multiplicative(T::zero(), T::one(), mul, |p, e| {
            T::int_pow(p, e as i32).add(&T::int_pow(p, e as i32 - 1))
        }),
        ArithFn::Jordan(a) => fac.multiplicative(T::zero(), T::one(), mul, |p, e| {
            T::power(p, a * e as f64).sub(&T::power(p, a * (e as f64 - 1.0)))
        }),
        ArithFn::Dedekind(b) => fac.multiplicative(T::zero(), T::one(), mul, |p, e| {
            T::power(p, b * e as f64).add(&T::power(p, b * (e as f64 - 1.0)))
        }),
        ArithFn::QFree(q) => fac.multiplicative(T::zero(), T::one(), mul, |_, e| {
            from(if e < q { 1 } else { 0 })
        }),
    }
}

/// Tabulate `kind` on `1..=limit`.
pub fn sieve(kind: ArithFn, limit: usize, backend: Backend) -> Result<FnTable> {
    let fac = Factorizer::new(limit);
    sieve_with(&fac, kind, limit, backend)
}

/// As [`sieve`], reusing a factorizer that covers at least `limit`.
pub fn sieve_with(fac: &Factorizer, kind: ArithFn, limit: usize, backend: Backend) -> Result<FnTable> {
    if limit == 0 {
        return Err(domain("table limit must be at least 1"));
    }
    kind.validate()?;
    if fac.limit() < limit {
        return Err(domain("factorizer does not cover the requested limit"));
    }
    let label = kind.to_string();
    let table = match backend {
        Backend::Exact => {
            if !kind.is_exact_representable() {
                return Err(Error::BackendMismatch(format!(
                    "{kind} has a non-integral exponent and needs the real backend"
                )));
            }
            let mut v = build::<BigRational>(fac, kind);
            v.truncate(limit + 1);
            FnTable::from_scalar(label, v)
        }
        Backend::Real => {
            let mut v = build::<f64>(fac, kind);
            v.truncate(limit + 1);
            FnTable::from_scalar(label, v)
        }
    };
    Ok(table)
}

/// `h(n) = Σ_{d|n} f(d) g(n/d)` by the multiples loop.
pub fn dirichlet_convolve(f: &FnTable, g: &FnTable) -> Result<FnTable> {
    check_limits(f, g)?;
    let label = format!("({})*({})", f.label, g.label);
    let table = match (&f.values, &g.values) {
        (TableValues::Exact(a), TableValues::Exact(b)) => {
            FnTable::from_scalar(label, convolve_slices(a, b))
        }
        _ => FnTable::from_scalar(label, convolve_slices(&f.reals(), &g.reals())),
    };
    Ok(table)
}

/// Convolution on raw slices with index 0 unused.
pub(crate) fn convolve_slices<T: Scalar>(f: &[T], g: &[T]) -> Vec<T> {
    let n = f.len().min(g.len()) - 1;
    let mut h = vec![T::zero(); n + 1];
    for d in 1..=n {
        if f[d].is_zero() {
            continue;
        }
        for m in 1..=n / d {
            if g[m].is_zero() {
                continue;
            }
            let k = d * m;
            h[k] = h[k].add(&f[d].mul(&g[m]));
        }
    }
    h
}

/// `⌊x⌋` as a table index; `x` must be finite.
pub(crate) fn floor_index(x: f64) -> Result<usize> {
    if !x.is_finite() {
        return Err(domain(format!("non-finite abscissa {x}")));
    }
    Ok(if x < 1.0 { 0 } else { x.floor() as usize })
}

/// `Σ_{n≤x} f(n)`; requires `1 ≤ x` and `⌊x⌋ ≤ limit`.
pub fn partial_sum(f: &FnTable, x: f64) -> Result<Value> {
    if !(x >= 1.0) {
        return Err(domain(format!("partial sum needs x >= 1, got {x}")));
    }
    let n = floor_index(x)?;
    if n > f.limit() {
        return Err(Error::OutOfRange {
            what: "x",
            value: x,
            limit: f.limit() as u64,
        });
    }
    Ok(match &f.values {
        TableValues::Exact(v) => Value::Exact(v[1..=n].iter().sum()),
        TableValues::Real(v) => Value::Real(compensated_sum(v[1..=n].iter().copied())),
    })
}
