//! Sample grids and growth checks for error-term sweeps.

use super::error_term::ErrorSample;

/// Centres of the integer windows added to every sweep grid.
pub const WINDOW_ANCHORS: [f64; 7] = [10.0, 31.0, 100.0, 316.0, 1000.0, 3162.0, 9980.0];

/// Offset used to sample just below an integer.
pub const BELOW_INTEGER: f64 = 1e-6;

/// `log_points` logarithmically spaced points on `[lo, hi]` plus, for
/// every anchor inside the range, the integers within `window` of it and
/// the points just below them. Sorted, without duplicates.
pub fn sweep_grid(lo: f64, hi: f64, log_points: usize, window: u32) -> Vec<f64> {
    let mut xs = Vec::new();
    if !(lo >= 1.0 && hi >= lo) {
        return xs;
    }
    if log_points == 1 {
        xs.push(lo);
    } else if log_points > 1 {
        let (l0, l1) = (lo.ln(), hi.ln());
        let step = (l1 - l0) / (log_points - 1) as f64;
        xs.extend((0..log_points).map(|i| (l0 + step * i as f64).exp().clamp(lo, hi)));
    }
    let w = window as f64;
    for c in WINDOW_ANCHORS {
        let mut n = (c - w).max(lo.ceil());
        while n <= (c + w).min(hi) {
            xs.push(n);
            if n - BELOW_INTEGER >= lo {
                xs.push(n - BELOW_INTEGER);
            }
            n += 1.0;
        }
    }
    xs.sort_by(f64::total_cmp);
    xs.dedup();
    xs
}

/// How a residual is scaled before its growth is judged.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Normalization {
    Plain,
    /// `residual / log x`.
    Log,
    /// `residual / (log x)²`.
    LogSquared,
    /// `residual · x^{−e}`.
    Power(f64),
}

impl Normalization {
    pub fn apply(self, x: f64, v: f64) -> f64 {
        match self {
            Normalization::Plain => v,
            Normalization::Log => v / x.ln(),
            Normalization::LogSquared => v / x.ln().powi(2),
            Normalization::Power(e) => v * x.powf(-e),
        }
    }
}

/// Maximum of a scaled quantity on an early window against the whole sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GrowthCheck {
    pub early_max: f64,
    pub overall_max: f64,
    /// `overall_max / early_max`.
    pub ratio: f64,
    /// Abscissa of the overall maximum.
    pub argmax: f64,
}

impl GrowthCheck {
    pub fn passes(&self, factor: f64) -> bool {
        self.ratio.is_finite() && self.ratio <= factor
    }
}

/// Growth of `|value|` scaled by `norm`, early window `x ≤ early_hi`.
pub fn growth_check(points: &[(f64, f64)], norm: Normalization, early_hi: f64) -> GrowthCheck {
    let mut early_max = 0.0f64;
    let mut overall_max = 0.0f64;
    let mut argmax = f64::NAN;
    for &(x, v) in points {
        let s = norm.apply(x, v.abs());
        if x <= early_hi {
            early_max = early_max.max(s);
        }
        if s > overall_max || argmax.is_nan() {
            overall_max = overall_max.max(s);
            argmax = x;
        }
    }
    GrowthCheck {
        early_max,
        overall_max,
        ratio: overall_max / early_max,
        argmax,
    }
}

/// [`growth_check`] on the residuals of error samples.
pub fn residual_growth(samples: &[ErrorSample], norm: Normalization, early_hi: f64) -> GrowthCheck {
    let pts: Vec<(f64, f64)> = samples.iter().map(|s| (s.x, s.residual)).collect();
    growth_check(&pts, norm, early_hi)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_covers_windows() {
        let g = sweep_grid(10.0, 1e4, 50, 3);
        assert_eq!(g[0], 10.0);
        assert_eq!(*g.last().unwrap(), 1e4);
        assert!(g.contains(&9983.0) && g.contains(&(9983.0 - BELOW_INTEGER)));
        assert!(g.contains(&316.0) && g.contains(&(313.0 - BELOW_INTEGER)));
        assert!(!g.contains(&(10.0 - BELOW_INTEGER)));
        assert!(g.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn growth_of_bounded_and_growing() {
        let flat: Vec<(f64, f64)> = (10..10_000).map(|n| (n as f64, (n as f64).sin())).collect();
        assert!(growth_check(&flat, Normalization::Plain, 100.0).passes(3.0));
        let lin: Vec<(f64, f64)> = (10..10_000).map(|n| (n as f64, n as f64)).collect();
        let g = growth_check(&lin, Normalization::Plain, 100.0);
        assert!(!g.passes(3.0));
        assert!(growth_check(&lin, Normalization::Power(1.0), 100.0).passes(1.0 + 1e-12));
        assert_eq!(g.argmax, 9999.0);
    }
}
