//! Weighted gcd-sum averages, their divisor-sum identities, and the
//! Ramanujan / Cohen / Anderson–Apostol sums.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use rayon::prelude::*;

use crate::arith::{
    dirichlet_convolve, sieve, ArithFn, Backend, FnTable, RealExponent,
};
use crate::error::{domain, Error, Result};
use crate::scalar::{Accumulator, Scalar, Value};
use crate::special::{bernoulli_even, bernoulli_plus, binomial};

/// Default cap on inner iterations of the brute-force `M_r^(s)` oracle.
pub const DEFAULT_TERM_BUDGET: u128 = 100_000_000;

/// An `f` for the sums: a catalog function or a convolution `h * id_e`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FSpec {
    Catalog(ArithFn),
    ConvIdPow { h: ArithFn, exponent: f64 },
}

impl FSpec {
    pub fn natural_backend(&self) -> Backend {
        let exact = match self {
            FSpec::Catalog(k) => k.is_exact_representable(),
            FSpec::ConvIdPow { h, exponent } => {
                h.is_exact_representable() && ArithFn::IdPow(*exponent).is_exact_representable()
            }
        };
        if exact {
            Backend::Exact
        } else {
            Backend::Real
        }
    }

    /// Tabulate `f` on `1..=limit`; convolutions are built once here.
    pub fn materialize(&self, limit: usize, backend: Backend) -> Result<FnTable> {
        match *self {
            FSpec::Catalog(k) => sieve(k, limit, backend),
            FSpec::ConvIdPow { h, exponent } => {
                let ht = sieve(h, limit, backend)?;
                let id = if exponent == 1.0 {
                    ArithFn::Id
                } else {
                    ArithFn::IdPow(exponent)
                };
                let idt = sieve(id, limit, backend)?;
                Ok(dirichlet_convolve(&ht, &idt)?.with_label(self.to_string()))
            }
        }
    }
}

impl fmt::Display for FSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FSpec::Catalog(k) => write!(f, "{k}"),
            FSpec::ConvIdPow { h, exponent } => write!(f, "{h}*id_a(a={exponent})"),
        }
    }
}

/// `kind` or `h*id_e` with `e` written as any `id` selector (`h*id_2`,
/// `tau*id_a(a=1.5)`, `mu*id`).
impl FromStr for FSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        if let Some((h, rhs)) = t.split_once('*') {
            let h: ArithFn = h.parse()?;
            let exponent = match rhs.parse::<ArithFn>()? {
                ArithFn::Id => 1.0,
                ArithFn::IdPow(e) => e,
                _ => return Err(Error::UnknownSelector(s.to_string())),
            };
            Ok(FSpec::ConvIdPow { h, exponent })
        } else {
            Ok(FSpec::Catalog(t.parse()?))
        }
    }
}

/// The tuple `(r, s, a, f)` selecting an instance of the sums.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SumParams {
    pub r: u32,
    pub s: u32,
    pub a: Option<RealExponent>,
    pub f: FSpec,
}

impl SumParams {
    pub fn new(r: u32, s: u32, a: Option<RealExponent>, f: FSpec) -> Result<Self> {
        if r < 1 {
            return Err(domain("r must be at least 1"));
        }
        if s < 1 {
            return Err(domain("s must be at least 1"));
        }
        Ok(SumParams { r, s, a, f })
    }

    /// Enforce `s ≥ min_s` for theorems that need it.
    pub fn require_s(self, min_s: u32) -> Result<Self> {
        if self.s < min_s {
            return Err(domain(format!("this instance needs s >= {min_s}, got {}", self.s)));
        }
        Ok(self)
    }

    pub fn require_a(&self) -> Result<RealExponent> {
        self.a.ok_or_else(|| domain("this instance needs an exponent a"))
    }
}

/// One row of an identity check.
#[derive(Debug, Clone, PartialEq)]
pub struct IdentityReport {
    pub x: f64,
    pub lhs: Value,
    pub rhs: Value,
    pub backend: Backend,
    pub discrepancy: Value,
}

impl IdentityReport {
    fn new(x: f64, lhs: Value, rhs: Value) -> Self {
        let (backend, discrepancy) = match (&lhs, &rhs) {
            (Value::Exact(l), Value::Exact(r)) => (Backend::Exact, Value::Exact((l - r).abs())),
            _ => (
                Backend::Real,
                Value::Real((lhs.to_f64() - rhs.to_f64()).abs()),
            ),
        };
        IdentityReport {
            x,
            lhs,
            rhs,
            backend,
            discrepancy,
        }
    }

    /// Exact rows must agree exactly; real rows within `rel_tol·(1+|lhs|)`.
    pub fn holds(&self, rel_tol: f64) -> bool {
        match &self.discrepancy {
            Value::Exact(d) => Zero::is_zero(d),
            Value::Real(d) => *d <= rel_tol * (1.0 + self.lhs.to_f64().abs()),
        }
    }
}

fn table_slice<T: Scalar>(f: &FnTable) -> &[T] {
    T::slice(f).expect("backend checked by caller")
}

fn index_for(x: f64, f: &FnTable) -> Result<usize> {
    if !(x >= 1.0) || !x.is_finite() {
        return Err(domain(format!("x must be >= 1, got {x}")));
    }
    let n = x.floor() as usize;
    if n > f.limit() {
        return Err(Error::OutOfRange {
            what: "x",
            value: x,
            limit: f.limit() as u64,
        });
    }
    Ok(n)
}

/// Upper estimate of `k^e` used to pick the `u128` fast path.
fn fits_u128(base: u64, e: u32) -> bool {
    (base as f64).powi(e as i32) < 1e37
}

fn pow_u128(j: u64, r: u32) -> u128 {
    (j as u128).pow(r)
}

fn pow_big(j: u64, r: u32) -> BigInt {
    BigInt::from(j).pow(r)
}

fn from_big<T: Scalar>(v: &BigInt) -> T {
    T::from_bigint(v)
}

/// `Σ_{j≤k} j^r f(gcd(j,k))` by grouping the `j` by their gcd.
fn pillai_direct<T: Scalar>(f: &[T], k: usize, r: u32) -> T {
    let mut acc = T::Acc::default();
    if fits_u128(k as u64, r + 1) {
        let mut bucket = vec![0u128; k + 1];
        for j in 1..=k {
            bucket[j.gcd(&k)] += pow_u128(j as u64, r);
        }
        for (g, b) in bucket.iter().enumerate() {
            if *b != 0 && !f[g].is_zero() {
                acc.push(&f[g].mul(&T::from_u128(*b)));
            }
        }
    } else {
        let mut bucket = vec![BigInt::zero(); k + 1];
        for j in 1..=k {
            bucket[j.gcd(&k)] += pow_big(j as u64, r);
        }
        for (g, b) in bucket.iter().enumerate() {
            if !b.is_zero() && !f[g].is_zero() {
                acc.push(&f[g].mul(&from_big::<T>(b)));
            }
        }
    }
    acc.total()
}

fn divisors_trial(n: u64) -> Vec<u64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1;
    while d * d <= n {
        if n.is_multiple_of(d) {
            small.push(d);
            if d * d != n {
                large.push(n / d);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

fn mobius_trial(mut n: u64) -> i64 {
    let mut m = 1;
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            n /= p;
            if n.is_multiple_of(p) {
                return 0;
            }
            m = -m;
        }
        p += 1;
    }
    if n > 1 {
        m = -m;
    }
    m
}

/// `Σ_{d|k} f(d) d^r Σ_{m≤k/d, (m,k/d)=1} m^r`.
fn pillai_divisor<T: Scalar>(f: &[T], k: usize, r: u32) -> T {
    let mut acc = T::Acc::default();
    for d in divisors_trial(k as u64) {
        let d = d as usize;
        if f[d].is_zero() {
            continue;
        }
        let e = k / d;
        let inner = if fits_u128(k as u64, r + 1) {
            let j: u128 = (1..=e as u64)
                .filter(|m| m.gcd(&(e as u64)) == 1)
                .map(|m| pow_u128(m, r))
                .sum();
            T::from_u128(pow_u128(d as u64, r) * j)
        } else {
            let j: BigInt = (1..=e as u64)
                .filter(|m| m.gcd(&(e as u64)) == 1)
                .map(|m| pow_big(m, r))
                .sum();
            from_big::<T>(&(pow_big(d as u64, r) * j))
        };
        acc.push(&f[d].mul(&inner));
    }
    acc.total()
}

/// How the weighted inner sum is evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PillaiMethod {
    /// Loop over `j ≤ k` with a gcd per term.
    Direct,
    /// Decompose by `d = gcd(j,k)` and sum over reduced residues.
    Divisor,
}

/// `Σ_{j=1}^{k} j^r f(gcd(j,k))`.
pub fn pillai_weighted(f: &FnTable, k: usize, r: u32, method: PillaiMethod) -> Result<Value> {
    if k == 0 || k > f.limit() {
        return Err(Error::OutOfRange {
            what: "k",
            value: k as f64,
            limit: f.limit() as u64,
        });
    }
    Ok(match f.backend() {
        Backend::Exact => {
            let v = table_slice::<BigRational>(f);
            Value::Exact(match method {
                PillaiMethod::Direct => pillai_direct(v, k, r),
                PillaiMethod::Divisor => pillai_divisor(v, k, r),
            })
        }
        Backend::Real => {
            let v = table_slice::<f64>(f);
            Value::Real(match method {
                PillaiMethod::Direct => pillai_direct(v, k, r),
                PillaiMethod::Divisor => pillai_divisor(v, k, r),
            })
        }
    })
}

/// How the left-hand side of the identities is evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LhsMethod {
    /// The defining sums: a gcd loop for `s = 1`, the triple loop otherwise.
    Brute,
    /// `M_r^(s)(x; f) = Σ_{k≤x} ((f*μ)/id_s * u)(k)` with
    /// `u(t) = S_r(t^s)/t^{s(r+1)}` from Faulhaber's formula.
    Fast,
}

fn prefix<T: Scalar>(terms: &[T]) -> Vec<T> {
    let mut acc = T::Acc::default();
    let mut out = Vec::with_capacity(terms.len());
    out.push(T::zero());
    for t in &terms[1..] {
        acc.push(t);
        out.push(acc.total());
    }
    out
}

fn brute_terms_s1<T: Scalar>(f: &[T], r: u32, n: usize) -> Vec<T> {
    let mut terms: Vec<T> = (1..=n)
        .into_par_iter()
        .map(|k| pillai_direct(f, k, r).div(&T::int_pow(k as u64, r as i32 + 1)))
        .collect();
    terms.insert(0, T::zero());
    terms
}

fn brute_cost(n: usize, s: u32) -> u128 {
    (1..=n as u128).map(|k| k.pow(s)).sum()
}

/// `k^{−s(r+1)} Σ_{j≤k^s} j^r Σ_{d|k, d^s|j} g(d)` by the triple loop.
fn brute_term_s<T: Scalar>(g: &[T], r: u32, s: u32, k: usize) -> T {
    let divs = divisors_trial(k as u64);
    let ks = (k as u64).pow(s);
    let mut bucket = vec![BigInt::zero(); divs.len()];
    let dpow: Vec<u64> = divs.iter().map(|d| d.pow(s)).collect();
    for j in 1..=ks {
        let jr = pow_big(j, r);
        for (i, ds) in dpow.iter().enumerate() {
            if j % ds == 0 {
                bucket[i] += &jr;
            }
        }
    }
    let mut acc = T::Acc::default();
    for (i, d) in divs.iter().enumerate() {
        let gd = &g[*d as usize];
        if !gd.is_zero() && !bucket[i].is_zero() {
            acc.push(&gd.mul(&from_big::<T>(&bucket[i])));
        }
    }
    acc.total().div(&T::int_pow(k as u64, (s * (r + 1)) as i32))
}

/// `1/(r+1) Σ_{k=0}^{r} C(r+1,k) B_k^+ t^{−sk}`, i.e. `S_r(t^s)/t^{s(r+1)}`.
fn faulhaber_weights(r: u32) -> Vec<BigRational> {
    let r1 = BigRational::from_integer(BigInt::from(r + 1));
    (0..=r as u64)
        .map(|k| {
            BigRational::from_integer(binomial(r as u64 + 1, k)) * bernoulli_plus(k as usize) / &r1
        })
        .collect()
}

fn fast_terms<T: Scalar>(g: &[T], r: u32, s: u32, n: usize) -> Vec<T> {
    let w: Vec<T> = faulhaber_weights(r).iter().map(T::from_rational).collect();
    let mut u = vec![T::zero(); n + 1];
    for (t, slot) in u.iter_mut().enumerate().skip(1) {
        let mut acc = T::Acc::default();
        for (k, wk) in w.iter().enumerate() {
            if !wk.is_zero() {
                acc.push(&wk.mul(&T::int_pow(t as u64, -((s as usize * k) as i32))));
            }
        }
        *slot = acc.total();
    }
    let gs: Vec<T> = g
        .iter()
        .enumerate()
        .map(|(d, v)| if d == 0 { T::zero() } else { v.div(&T::int_pow(d as u64, s as i32)) })
        .collect();
    crate::arith::convolve_slices(&gs, &u)
}

fn f_star_mu(f: &FnTable) -> Result<FnTable> {
    let mu = sieve(ArithFn::Mu, f.limit(), f.backend())?;
    Ok(dirichlet_convolve(f, &mu)?.with_label(format!("({})*mu", f.label())))
}

/// Running values `M_r^(s)(n; f)` for `n = 1..=n_max` (a table indexed by `n`).
pub fn m_rs_series(
    f: &FnTable,
    r: u32,
    s: u32,
    n_max: usize,
    method: LhsMethod,
) -> Result<FnTable> {
    m_rs_series_with_budget(f, r, s, n_max, method, DEFAULT_TERM_BUDGET)
}

pub fn m_rs_series_with_budget(
    f: &FnTable,
    r: u32,
    s: u32,
    n_max: usize,
    method: LhsMethod,
    budget: u128,
) -> Result<FnTable> {
    if s == 0 {
        return Err(domain("s must be at least 1"));
    }
    let f = f.truncate(n_max)?;
    let label = format!("M_{r}^({s})({})", f.label());
    if method == LhsMethod::Brute && s > 1 {
        let needed = brute_cost(n_max, s);
        if needed > budget {
            return Err(Error::Budget { needed, budget });
        }
    }
    Ok(match (method, f.backend()) {
        (LhsMethod::Brute, backend) if s == 1 => match backend {
            Backend::Exact => FnTable::from_scalar(
                label,
                prefix(&brute_terms_s1(table_slice::<BigRational>(&f), r, n_max)),
            ),
            Backend::Real => FnTable::from_scalar(
                label,
                prefix(&brute_terms_s1(table_slice::<f64>(&f), r, n_max)),
            ),
        },
        (LhsMethod::Brute, backend) => {
            let g = f_star_mu(&f)?;
            match backend {
                Backend::Exact => {
                    let gv = table_slice::<BigRational>(&g);
                    let mut t: Vec<BigRational> = (1..=n_max)
                        .into_par_iter()
                        .map(|k| brute_term_s(gv, r, s, k))
                        .collect();
                    t.insert(0, <BigRational as Zero>::zero());
                    FnTable::from_scalar(label, prefix(&t))
                }
                Backend::Real => {
                    let gv = table_slice::<f64>(&g);
                    let mut t: Vec<f64> = (1..=n_max)
                        .into_par_iter()
                        .map(|k| brute_term_s(gv, r, s, k))
                        .collect();
                    t.insert(0, 0.0);
                    FnTable::from_scalar(label, prefix(&t))
                }
            }
        }
        (LhsMethod::Fast, backend) => {
            let g = f_star_mu(&f)?;
            match backend {
                Backend::Exact => FnTable::from_scalar(
                    label,
                    prefix(&fast_terms(table_slice::<BigRational>(&g), r, s, n_max)),
                ),
                Backend::Real => FnTable::from_scalar(
                    label,
                    prefix(&fast_terms(table_slice::<f64>(&g), r, s, n_max)),
                ),
            }
        }
    })
}

/// Running values `M_r(n; f)` for `n = 1..=n_max`.
pub fn m_r_series(f: &FnTable, r: u32, n_max: usize, method: LhsMethod) -> Result<FnTable> {
    m_rs_series(f, r, 1, n_max, method)
}

/// Increments of the identity right-hand side at `n = dl`:
/// `f(n)/(2n^s) + 1/(r+1) Σ_{dl=n} g(d)/d^s (1 + Σ_m C(r+1,2m) B_{2m} l^{−2ms})`.
fn rhs_increments<T: Scalar>(f: &[T], g: &[T], r: u32, s: u32, n: usize) -> Result<Vec<T>> {
    let mut block: Vec<(i32, T)> = Vec::new();
    for m in 1..=(r / 2) as usize {
        let c = BigRational::from_integer(binomial(r as u64 + 1, 2 * m as u64)) * bernoulli_even(m)?;
        block.push((-((2 * m) as i32) * s as i32, T::from_rational(&c)));
    }
    let inv_r1 = T::one().div(&T::from_i64(r as i64 + 1));
    let half = T::one().div(&T::from_i64(2));
    let weight: Vec<T> = (0..=n)
        .map(|l| {
            if l == 0 {
                return T::zero();
            }
            let mut acc = T::Acc::default();
            acc.push(&T::one());
            for (e, c) in &block {
                acc.push(&c.mul(&T::int_pow(l as u64, *e)));
            }
            acc.total()
        })
        .collect();
    let mut inc: Vec<T> = (0..=n)
        .map(|k| {
            if k == 0 {
                T::zero()
            } else {
                f[k].mul(&half).div(&T::int_pow(k as u64, s as i32))
            }
        })
        .collect();
    for d in 1..=n {
        if g[d].is_zero() {
            continue;
        }
        let gd = g[d].div(&T::int_pow(d as u64, s as i32)).mul(&inv_r1);
        for l in 1..=n / d {
            let k = d * l;
            inc[k] = inc[k].add(&gd.mul(&weight[l]));
        }
    }
    Ok(inc)
}

/// Running values of the identity right-hand side for `n = 1..=n_max`.
pub fn identity_rhs_series(f: &FnTable, r: u32, s: u32, n_max: usize) -> Result<FnTable> {
    if s == 0 || r == 0 {
        return Err(domain("identity needs r >= 1 and s >= 1"));
    }
    let f = f.truncate(n_max)?;
    let g = f_star_mu(&f)?;
    let label = format!("rhs_{r}^({s})({})", f.label());
    Ok(match f.backend() {
        Backend::Exact => {
            let inc = rhs_increments(
                table_slice::<BigRational>(&f),
                table_slice::<BigRational>(&g),
                r,
                s,
                n_max,
            )?;
            FnTable::from_scalar(label, prefix(&inc))
        }
        Backend::Real => {
            let inc = rhs_increments(table_slice::<f64>(&f), table_slice::<f64>(&g), r, s, n_max)?;
            FnTable::from_scalar(label, prefix(&inc))
        }
    })
}

/// `M_r(x; f)` from the defining double sum.
pub fn m_r_exact(x: f64, r: u32, f: &FnTable) -> Result<Value> {
    let n = index_for(x, f)?;
    Ok(m_r_series(f, r, n, LhsMethod::Brute)?.get(n))
}

/// Closed-form right-hand side for `M_r(x; f)`.
pub fn m_r_identity_rhs(x: f64, r: u32, f: &FnTable) -> Result<Value> {
    m_rs_identity_rhs(x, r, 1, f)
}

/// `M_r^(s)(x; f)` by the triple loop, under [`DEFAULT_TERM_BUDGET`].
pub fn m_rs_exact(x: f64, r: u32, s: u32, f: &FnTable) -> Result<Value> {
    m_rs_exact_with_budget(x, r, s, f, DEFAULT_TERM_BUDGET)
}

pub fn m_rs_exact_with_budget(x: f64, r: u32, s: u32, f: &FnTable, budget: u128) -> Result<Value> {
    let n = index_for(x, f)?;
    Ok(m_rs_series_with_budget(f, r, s, n, LhsMethod::Brute, budget)?.get(n))
}

/// Closed-form right-hand side for `M_r^(s)(x; f)`.
pub fn m_rs_identity_rhs(x: f64, r: u32, s: u32, f: &FnTable) -> Result<Value> {
    let n = index_for(x, f)?;
    Ok(identity_rhs_series(f, r, s, n)?.get(n))
}

/// Compare the defining sum with the closed form at every integer
/// `x = 1..=x_max`.
pub fn verify_identity(f: &FnTable, r: u32, s: u32, x_max: usize) -> Result<Vec<IdentityReport>> {
    verify_identity_with(f, r, s, x_max, LhsMethod::Brute)
}

pub fn verify_identity_with(
    f: &FnTable,
    r: u32,
    s: u32,
    x_max: usize,
    method: LhsMethod,
) -> Result<Vec<IdentityReport>> {
    let lhs = m_rs_series(f, r, s, x_max, method)?;
    let rhs = identity_rhs_series(f, r, s, x_max)?;
    Ok((1..=x_max)
        .map(|n| IdentityReport::new(n as f64, lhs.get(n), rhs.get(n)))
        .collect())
}

/// `(j, k^s)_s`: the largest `d | k` with `d^s | j`. `j = 0` gives `k`.
pub fn generalized_gcd(j: u64, k: u64, s: u32) -> u64 {
    assert!(k >= 1 && s >= 1, "generalized_gcd needs k, s >= 1");
    if j == 0 {
        return k;
    }
    let mut best = 1;
    for d in divisors_trial(k) {
        if let Some(ds) = d.checked_pow(s) {
            if j.is_multiple_of(ds) {
                best = d;
            }
        }
    }
    best
}

/// Ramanujan's sum `c_k(j) = Σ_{d | (j,k)} d μ(k/d)`.
pub fn ramanujan_sum(k: u64, j: i64) -> i64 {
    cohen_sum(k, j.unsigned_abs(), 1) as i64
}

/// Cohen's sum `c_k^(s)(j) = Σ_{d|k, d^s|j} d^s μ(k/d)`.
pub fn cohen_sum(k: u64, j: u64, s: u32) -> i128 {
    assert!(k >= 1 && s >= 1, "cohen_sum needs k, s >= 1");
    divisors_trial(k)
        .into_iter()
        .filter_map(|d| {
            let ds = (d as i128).checked_pow(s)?;
            (j == 0 || j as i128 % ds == 0).then(|| ds * mobius_trial(k / d) as i128)
        })
        .sum()
}

/// Anderson–Apostol sum `s_k^(s)(j) = Σ_{d|k, d^s|j} f(d) g(k/d)`, with `d^s | 0`
/// for every `d`.
pub fn anderson_apostol_sum(k: usize, j: u64, s: u32, f: &FnTable, g: &FnTable) -> Result<Value> {
    let limit = f.limit().min(g.limit());
    if k == 0 || k > limit {
        return Err(Error::OutOfRange {
            what: "k",
            value: k as f64,
            limit: limit as u64,
        });
    }
    let divs: Vec<usize> = divisors_trial(k as u64)
        .into_iter()
        .filter(|&d| j == 0 || d.checked_pow(s).is_some_and(|ds| j.is_multiple_of(ds)))
        .map(|d| d as usize)
        .collect();
    Ok(match (f.exact(), g.exact()) {
        (Some(fv), Some(gv)) => {
            Value::Exact(divs.iter().map(|&d| &fv[d] * &gv[k / d]).sum())
        }
        _ => {
            let (fv, gv) = (f.reals(), g.reals());
            Value::Real(crate::arith::compensated_sum(
                divs.iter().map(|&d| fv[d] * gv[k / d]),
            ))
        }
    })
}
