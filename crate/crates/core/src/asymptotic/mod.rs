//! Main terms, error terms and the machinery to sample them.

mod aux;
mod delta;
mod error_term;
mod hseries;
mod lemma;
mod model;
mod sweep;

pub use aux::{d_s, d_tilde_s, vartheta, vartheta_sum};
pub use delta::{
    delta_a, delta_divisor, voronoi_delta_a, weighted_delta_sum, weighted_delta_sum_with, DeltaKind,
    DeltaTable, VoronoiEval, VoronoiSeries,
};
pub use error_term::{error_term, ErrorSample, ErrorTermEngine};
pub use hseries::{h_series, h_series_prime, HKind};
pub use lemma::{lemma_sum_check, LemmaCheck, LemmaId};
pub use model::{
    bernoulli_block, main_term, phi_psi_combination_coefficient, CombinationCoefficient,
    KFormulaSpec, MainTermModel, TheoremId, Weight,
};
pub use sweep::{
    growth_check, residual_growth, sweep_grid, GrowthCheck, Normalization, BELOW_INTEGER,
    WINDOW_ANCHORS,
};
