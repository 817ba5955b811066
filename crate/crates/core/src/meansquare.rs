//! Mean squares of error terms and the series constants predicting them.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::arith::{dirichlet_convolve, sieve, ArithFn, Backend, FnTable, NeumaierSum, RealExponent};
use crate::asymptotic::{DeltaKind, DeltaTable, MainTermModel, TheoremId};
use crate::error::{domain, Error, Result};
use crate::gcdsum::{m_rs_series, LhsMethod};
use crate::special::zeta;

/// Nodes and weights of 8-point Gauss–Legendre on `[-1, 1]` (positive half).
const GL8: [(f64, f64); 4] = [
    (0.183_434_642_495_649_8, 0.362_683_783_378_362),
    (0.525_532_409_916_329, 0.313_706_645_877_887_3),
    (0.796_666_477_413_626_7, 0.222_381_034_453_374_5),
    (0.960_289_856_497_536_3, 0.101_228_536_290_376_3),
];

/// Unit intervals per parallel work item; fixed so that the reduction
/// order never depends on the thread count.
const CHUNK: usize = 2048;

/// Exponent used to bound coefficient growth in tail estimates.
const TAIL_EPS: f64 = 0.1;
/// Inflation applied to the empirical tail bound.
const TAIL_INFLATION: f64 = 4.0;

/// The predicted leading constants.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SeriesKind {
    C2,
    C3,
    C4,
    D1,
    D2,
    Kmean,
}

impl SeriesKind {
    pub fn needs_a(self) -> bool {
        !matches!(self, SeriesKind::D1 | SeriesKind::D2)
    }

    fn exponent(self, a: f64) -> Result<RealExponent> {
        match self {
            SeriesKind::Kmean => RealExponent::in_open_interval(a, -0.5, 0.0),
            _ => RealExponent::mean_square_range(a),
        }
    }
}

impl fmt::Display for SeriesKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SeriesKind::C2 => "C2",
            SeriesKind::C3 => "C3",
            SeriesKind::C4 => "C4",
            SeriesKind::D1 => "D1",
            SeriesKind::D2 => "D2",
            SeriesKind::Kmean => "Kmean",
        })
    }
}

impl FromStr for SeriesKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        [
            SeriesKind::C2,
            SeriesKind::C3,
            SeriesKind::C4,
            SeriesKind::D1,
            SeriesKind::D2,
            SeriesKind::Kmean,
        ]
        .into_iter()
        .find(|k| k.to_string().eq_ignore_ascii_case(s.trim()))
        .ok_or_else(|| Error::UnknownSelector(s.to_string()))
    }
}

/// How the divisor factor enters the coefficients of C2, C3 and C4.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum CoefficientForm {
    /// `(w/id_{(1+a)/2} * σ_a)(n)`.
    #[default]
    Displayed,
    /// `(w/id_{(1+a)/2} * σ_a/id_{a/2})(n)`, the form whose `w = δ` case
    /// is the Δ_a mean-square constant.
    Symmetric,
}

impl fmt::Display for CoefficientForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CoefficientForm::Displayed => "displayed",
            CoefficientForm::Symmetric => "symmetric",
        })
    }
}

impl FromStr for CoefficientForm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "displayed" => Ok(CoefficientForm::Displayed),
            "symmetric" => Ok(CoefficientForm::Symmetric),
            _ => Err(Error::UnknownSelector(s.to_string())),
        }
    }
}

/// A truncated series constant with a heuristic tail bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesConstant {
    pub kind: SeriesKind,
    pub form: CoefficientForm,
    pub a: Option<RealExponent>,
    /// Truncation point; zero for closed forms.
    pub n: usize,
    pub value: f64,
    /// `4 · prefactor · c² · N^{−0.3}/0.3` with `c = max |h(n)|/n^{0.1}`.
    pub tail_bound: f64,
}

/// Coefficients `h(n)` of the series, index 0 unused.
pub fn series_coefficients(
    kind: SeriesKind,
    a: Option<RealExponent>,
    n: usize,
    form: CoefficientForm,
) -> Result<FnTable> {
    let n = n.max(2);
    let real = |k| sieve(k, n, Backend::Real);
    let mu = real(ArithFn::Mu)?;
    let left = match kind {
        SeriesKind::C2 => mu,
        SeriesKind::C3 | SeriesKind::D1 => dirichlet_convolve(&mu, &mu)?,
        SeriesKind::C4 | SeriesKind::D2 => dirichlet_convolve(&mu, &real(ArithFn::AbsMu)?)?,
        SeriesKind::Kmean => return Err(domain("Kmean is a closed form")),
    };
    let (scale, right) = match kind {
        SeriesKind::D1 | SeriesKind::D2 => (-0.5, real(ArithFn::Tau)?),
        _ => {
            let a = a.ok_or_else(|| domain(format!("{kind} needs an exponent a")))?.get();
            let sigma = real(ArithFn::Sigma(a))?;
            let sigma = match form {
                CoefficientForm::Displayed => sigma,
                CoefficientForm::Symmetric => sigma.mul_power(-a / 2.0)?,
            };
            (-(1.0 + a) / 2.0, sigma)
        }
    };
    dirichlet_convolve(&left.mul_power(scale)?, &right)
}

pub fn series_constant(kind: SeriesKind, a: Option<f64>, n: usize) -> Result<SeriesConstant> {
    series_constant_with(kind, a, n, CoefficientForm::Displayed)
}

pub fn series_constant_with(
    kind: SeriesKind,
    a: Option<f64>,
    n: usize,
    form: CoefficientForm,
) -> Result<SeriesConstant> {
    let a = match (kind.needs_a(), a) {
        (true, Some(a)) => Some(kind.exponent(a)?),
        (true, None) => return Err(domain(format!("{kind} needs an exponent a"))),
        (false, _) => None,
    };
    if n < 1 {
        return Err(domain("series truncation must be at least 1"));
    }
    let av = a.map_or(0.0, RealExponent::get);
    if kind == SeriesKind::Kmean {
        let value = zeta(1.5 - av)? * zeta(1.5 + av)? * zeta(1.5)?.powi(2)
            / (zeta(3.0)? * (6.0 + 4.0 * av) * PI * PI);
        return Ok(SeriesConstant {
            kind,
            form,
            a,
            n: 0,
            value,
            tail_bound: 0.0,
        });
    }
    let prefactor = match kind {
        SeriesKind::D1 | SeriesKind::D2 => 1.0 / (6.0 * PI * PI),
        _ => 1.0 / (2.0 * (3.0 + 2.0 * av) * PI * PI),
    };
    let h = series_coefficients(kind, a, n, form)?;
    let hv = h.reals();
    let mut acc = NeumaierSum::new();
    let mut c = 0.0f64;
    for (k, v) in hv.iter().enumerate().take(n + 1).skip(1) {
        let kf = k as f64;
        acc += v * v * kf.powf(-1.5);
        c = c.max(v.abs() * kf.powf(-TAIL_EPS));
    }
    let decay = 0.5 - 2.0 * TAIL_EPS;
    Ok(SeriesConstant {
        kind,
        form,
        a,
        n,
        value: prefactor * acc.sum(),
        tail_bound: TAIL_INFLATION * prefactor * c * c * (n as f64).powf(-decay) / decay,
    })
}

/// The error terms whose mean squares are studied.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MeanSquareTheorem {
    /// `K_r(x; id_{1+a})`, constant C2.
    Th3,
    /// `K_r(x; φ_{1+a})`, constant C3.
    Th4Phi,
    /// `K_r(x; ψ_{1+a})`, constant C4.
    Th4Psi,
    /// `L_r(x) = K_r(x; φ)`, constant D1.
    Lr,
    /// `U_r(x) = K_r(x; ψ)`, constant D2.
    Ur,
    /// `Δ_a(x)` itself, integrated from 0.
    DeltaA,
}

impl MeanSquareTheorem {
    pub const ALL: [MeanSquareTheorem; 6] = [
        MeanSquareTheorem::Th3,
        MeanSquareTheorem::Th4Phi,
        MeanSquareTheorem::Th4Psi,
        MeanSquareTheorem::Lr,
        MeanSquareTheorem::Ur,
        MeanSquareTheorem::DeltaA,
    ];

    pub fn series_kind(self) -> SeriesKind {
        match self {
            MeanSquareTheorem::Th3 => SeriesKind::C2,
            MeanSquareTheorem::Th4Phi => SeriesKind::C3,
            MeanSquareTheorem::Th4Psi => SeriesKind::C4,
            MeanSquareTheorem::Lr => SeriesKind::D1,
            MeanSquareTheorem::Ur => SeriesKind::D2,
            MeanSquareTheorem::DeltaA => SeriesKind::Kmean,
        }
    }

    fn error_term_theorem(self) -> Option<TheoremId> {
        match self {
            MeanSquareTheorem::Th3 => Some(TheoremId::Th1),
            MeanSquareTheorem::Th4Phi => Some(TheoremId::Th2Phi),
            MeanSquareTheorem::Th4Psi => Some(TheoremId::Th2Psi),
            MeanSquareTheorem::Lr => Some(TheoremId::KPhi),
            MeanSquareTheorem::Ur => Some(TheoremId::KPsi),
            MeanSquareTheorem::DeltaA => None,
        }
    }

    /// Lower end of the integration range.
    pub fn lower(self) -> f64 {
        if self == MeanSquareTheorem::DeltaA {
            0.0
        } else {
            1.0
        }
    }
}

impl fmt::Display for MeanSquareTheorem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            MeanSquareTheorem::Th3 => "Th3",
            MeanSquareTheorem::Th4Phi => "Th4-phi",
            MeanSquareTheorem::Th4Psi => "Th4-psi",
            MeanSquareTheorem::Lr => "Lr",
            MeanSquareTheorem::Ur => "Ur",
            MeanSquareTheorem::DeltaA => "Delta_a",
        })
    }
}

impl FromStr for MeanSquareTheorem {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        MeanSquareTheorem::ALL
            .into_iter()
            .find(|k| k.to_string().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| Error::UnknownSelector(s.to_string()))
    }
}

#[derive(Debug, Clone)]
enum MainPart {
    Model(MainTermModel),
    Delta(DeltaTable),
}

impl MainPart {
    fn eval(&self, x: f64) -> f64 {
        match self {
            MainPart::Model(m) => m.eval(x),
            MainPart::Delta(t) => t.main(x),
        }
    }
}

/// Step values of the exact sum and the smooth main part, ready for
/// integrating `(exact − main)²` up to `limit`.
#[derive(Debug, Clone)]
pub struct KSquaredIntegrator {
    theorem: MeanSquareTheorem,
    r: u32,
    a: Option<RealExponent>,
    /// `steps[m]` is the exact sum on `[m, m+1)`.
    steps: Vec<f64>,
    main: MainPart,
}

impl KSquaredIntegrator {
    pub fn new(theorem: MeanSquareTheorem, r: u32, a: Option<f64>, limit: usize) -> Result<Self> {
        let kind = theorem.series_kind();
        let a = match (kind.needs_a(), a) {
            (true, Some(a)) => Some(kind.exponent(a)?),
            (true, None) => return Err(domain(format!("{theorem} needs an exponent a"))),
            (false, _) => None,
        };
        let limit = limit.max(2);
        let (steps, main) = match theorem.error_term_theorem() {
            Some(id) => {
                let params = id.params(r, 1, a.map(RealExponent::get))?;
                let f = params.f.materialize(limit, Backend::Real)?;
                let m = m_rs_series(&f, params.r, 1, limit, LhsMethod::Fast)?;
                (m.reals().into_owned(), MainPart::Model(MainTermModel::build(id, params)?))
            }
            None => {
                let a = a.ok_or_else(|| domain("Delta_a needs an exponent a"))?;
                let t = DeltaTable::new(DeltaKind::Sigma(a), limit)?;
                let steps = (0..=limit).map(|m| t.summatory(m as f64)).collect();
                (steps, MainPart::Delta(t))
            }
        };
        Ok(KSquaredIntegrator {
            theorem,
            r,
            a,
            steps,
            main,
        })
    }

    pub fn theorem(&self) -> MeanSquareTheorem {
        self.theorem
    }

    pub fn r(&self) -> u32 {
        self.r
    }

    pub fn a(&self) -> Option<RealExponent> {
        self.a
    }

    /// Largest `T` that can be integrated to.
    pub fn limit(&self) -> usize {
        self.steps.len() - 1
    }

    fn piece(&self, m: usize, lo: f64, hi: f64) -> f64 {
        let c = self.steps[m];
        let mid = 0.5 * (lo + hi);
        let half = 0.5 * (hi - lo);
        let mut acc = 0.0;
        for (t, w) in GL8 {
            let k1 = c - self.main.eval(mid - half * t);
            let k2 = c - self.main.eval(mid + half * t);
            acc += w * (k1 * k1 + k2 * k2);
        }
        acc * half
    }

    /// `∫_{t0}^{t1} (exact − main)² dx`.
    pub fn integrate(&self, t0: f64, t1: f64) -> Result<f64> {
        if !(t0.is_finite() && t1.is_finite()) || t0 < self.theorem.lower() || t1 < t0 {
            return Err(domain(format!("bad integration range [{t0}, {t1}]")));
        }
        if t1 >= (self.limit() + 1) as f64 {
            return Err(Error::OutOfRange {
                what: "T",
                value: t1,
                limit: self.limit() as u64,
            });
        }
        let m0 = t0.floor() as usize;
        let m1 = t1.floor() as usize;
        let chunks: Vec<NeumaierSum> = (m0..=m1)
            .collect::<Vec<_>>()
            .par_chunks(CHUNK)
            .map(|ms| {
                let mut acc = NeumaierSum::new();
                for &m in ms {
                    let lo = t0.max(m as f64);
                    let hi = t1.min((m + 1) as f64);
                    if hi > lo {
                        acc += self.piece(m, lo, hi);
                    }
                }
                acc
            })
            .collect();
        let mut total = NeumaierSum::new();
        for c in &chunks {
            total.merge(c);
        }
        Ok(total.sum())
    }
}

/// `∫ K² dx` from the theorem's lower end to `t`.
pub fn integrate_k_squared(theorem: MeanSquareTheorem, r: u32, a: Option<f64>, t: f64) -> Result<f64> {
    if !(t >= theorem.lower()) || !t.is_finite() {
        return Err(domain(format!("T must be at least {}", theorem.lower())));
    }
    let limit = t.floor() as usize + 1;
    KSquaredIntegrator::new(theorem, r, a, limit)?.integrate(theorem.lower(), t)
}

/// One row of a mean-square report.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeanSquareRow {
    pub t: f64,
    pub integral: f64,
    pub prediction: f64,
    pub ratio: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MeanSquareReport {
    pub theorem: MeanSquareTheorem,
    pub r: u32,
    pub a: Option<RealExponent>,
    pub constant: SeriesConstant,
    pub rows: Vec<MeanSquareRow>,
}

impl MeanSquareReport {
    /// Whether `|ratio − 1|` shrank on the last step; `None` with fewer
    /// than two rows.
    pub fn final_step_improves(&self) -> Option<bool> {
        let n = self.rows.len();
        (n >= 2).then(|| (self.rows[n - 1].ratio - 1.0).abs() < (self.rows[n - 2].ratio - 1.0).abs())
    }

    pub fn final_ratio(&self) -> Option<f64> {
        self.rows.last().map(|r| r.ratio)
    }
}

/// Integrals at each `T` (ascending) against `C/(r+1)² · T^{3/2+a}`, or
/// `Kmean · T^{3/2+a}` for `Δ_a`. `series_terms` truncates the constant.
pub fn mean_square_report(
    theorem: MeanSquareTheorem,
    r: u32,
    a: Option<f64>,
    t_list: &[f64],
    series_terms: usize,
) -> Result<MeanSquareReport> {
    mean_square_report_with(theorem, r, a, t_list, series_terms, CoefficientForm::Displayed)
}

pub fn mean_square_report_with(
    theorem: MeanSquareTheorem,
    r: u32,
    a: Option<f64>,
    t_list: &[f64],
    series_terms: usize,
    form: CoefficientForm,
) -> Result<MeanSquareReport> {
    if t_list.is_empty() {
        return Err(domain("empty T list"));
    }
    if t_list.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(domain("T list must be strictly ascending"));
    }
    let lower = theorem.lower();
    if t_list.iter().any(|t| !(*t > lower) || !t.is_finite()) {
        return Err(domain(format!("every T must exceed {lower}")));
    }
    let t_max = *t_list.last().expect("non-empty");
    let integ = KSquaredIntegrator::new(theorem, r, a, t_max.floor() as usize + 1)?;
    let constant = series_constant_with(theorem.series_kind(), a, series_terms, form)?;
    let av = integ.a.map_or(0.0, RealExponent::get);
    let scale = match theorem {
        MeanSquareTheorem::DeltaA => 1.0,
        _ => 1.0 / ((r + 1) as f64).powi(2),
    };
    let mut rows = Vec::with_capacity(t_list.len());
    let mut acc = NeumaierSum::new();
    let mut prev = lower;
    for &t in t_list {
        acc += integ.integrate(prev, t)?;
        prev = t;
        let integral = acc.sum();
        let prediction = constant.value * scale * t.powf(1.5 + av);
        rows.push(MeanSquareRow {
            t,
            integral,
            prediction,
            ratio: integral / prediction,
        });
    }
    Ok(MeanSquareReport {
        theorem,
        r,
        a: integ.a,
        constant,
        rows,
    })
}
