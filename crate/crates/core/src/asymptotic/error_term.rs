//! `K = exact − main` against the weighted-Δ representation.

use rayon::prelude::*;

use crate::arith::{dirichlet_convolve, floor_index, sieve, ArithFn, Backend, FnTable};
use crate::error::{domain, Error, Result};
use crate::gcdsum::{m_rs_series, LhsMethod, SumParams};

use super::aux::vartheta_sum_with;
use super::delta::{weighted_delta_sum_with, DeltaKind, DeltaTable};
use super::model::{KFormulaSpec, MainTermModel, TheoremId, Weight};

/// One evaluation of an error term.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErrorSample {
    pub x: f64,
    pub exact: f64,
    pub main: f64,
    /// `exact − main`.
    pub k: f64,
    pub k_formula: f64,
    /// `|k − k_formula|`.
    pub residual: f64,
}

/// Tables for sampling one theorem instance at any `x ≤ limit`.
#[derive(Debug, Clone)]
pub struct ErrorTermEngine {
    model: MainTermModel,
    formula: KFormulaSpec,
    exact: Vec<f64>,
    weight: Vec<f64>,
    delta: DeltaTable,
    vartheta: Option<(Vec<f64>, f64, f64)>,
}

pub(crate) fn weight_table(weight: Weight, limit: usize) -> Result<FnTable> {
    let mu = sieve(ArithFn::Mu, limit, Backend::Real)?;
    let other = match weight {
        Weight::Mu => return Ok(mu),
        Weight::MuMu => mu.clone(),
        Weight::MuAbsMu => sieve(ArithFn::AbsMu, limit, Backend::Real)?,
        Weight::HMu(h) => sieve(h.arith_fn(), limit, Backend::Real)?,
    };
    Ok(dirichlet_convolve(&other, &mu)?.with_label(weight.label()))
}

impl ErrorTermEngine {
    pub fn new(theorem: TheoremId, params: SumParams, limit: usize) -> Result<Self> {
        let limit = limit.max(2);
        let model = MainTermModel::build(theorem, params)?;
        let formula = KFormulaSpec::build(theorem, params)?;
        let f = params.f.materialize(limit, Backend::Real)?;
        let exact = m_rs_series(&f, params.r, params.s, limit, LhsMethod::Fast)?
            .reals()
            .into_owned();
        let weight = weight_table(formula.weight, limit)?.reals().into_owned();
        let delta = DeltaTable::new(DeltaKind::from_exponent(formula.a), limit)?;
        let vartheta = match formula.vartheta {
            Some((h, c, s)) => Some((sieve(h, limit, Backend::Real)?.reals().into_owned(), c, s)),
            None => None,
        };
        Ok(ErrorTermEngine {
            model,
            formula,
            exact,
            weight,
            delta,
            vartheta,
        })
    }

    pub fn model(&self) -> &MainTermModel {
        &self.model
    }

    pub fn formula(&self) -> &KFormulaSpec {
        &self.formula
    }

    pub fn limit(&self) -> usize {
        self.exact.len() - 1
    }

    /// The exact sum at `x`.
    pub fn exact(&self, x: f64) -> Result<f64> {
        let n = self.index(x)?;
        Ok(self.exact[n])
    }

    fn index(&self, x: f64) -> Result<usize> {
        if !(x >= 1.0) {
            return Err(domain(format!("error terms need x >= 1, got {x}")));
        }
        let n = floor_index(x)?;
        if n > self.limit() {
            return Err(Error::OutOfRange {
                what: "x",
                value: x,
                limit: self.limit() as u64,
            });
        }
        Ok(n)
    }

    /// `Σ_{d≤x} h(d) d^{−s} ϑ(x/d)` for the displayed sawtooth part, if any.
    pub fn vartheta_part(&self, x: f64) -> Result<f64> {
        self.index(x)?;
        Ok(match &self.vartheta {
            Some((h, _, s)) => vartheta_sum_with(h, *s, x),
            None => 0.0,
        })
    }

    pub fn k_formula(&self, x: f64) -> Result<f64> {
        self.index(x)?;
        let r1 = (self.model.params.r + 1) as f64;
        let mut v = weighted_delta_sum_with(&self.delta, &self.weight, self.formula.p, x) / r1
            + self.formula.constant;
        if let Some((h, c, s)) = &self.vartheta {
            v += c * vartheta_sum_with(h, *s, x);
        }
        Ok(v)
    }

    pub fn sample(&self, x: f64) -> Result<ErrorSample> {
        let exact = self.exact(x)?;
        let main = self.model.eval(x);
        let k = exact - main;
        let k_formula = self.k_formula(x)?;
        Ok(ErrorSample {
            x,
            exact,
            main,
            k,
            k_formula,
            residual: (k - k_formula).abs(),
        })
    }

    /// Samples in input order.
    pub fn sample_many(&self, xs: &[f64]) -> Result<Vec<ErrorSample>> {
        xs.par_iter().map(|&x| self.sample(x)).collect()
    }
}

/// One-shot [`ErrorTermEngine::sample`] with tables sized to `x`.
pub fn error_term(theorem: TheoremId, params: SumParams, x: f64) -> Result<ErrorSample> {
    let n = floor_index(x)?;
    ErrorTermEngine::new(theorem, params, n)?.sample(x)
}
