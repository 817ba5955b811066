use std::iter::Sum;
use std::ops::AddAssign;

/// Neumaier's variant of Kahan summation: the running compensation also
/// captures the low-order bits lost when an addend exceeds the running total.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct NeumaierSum {
    sum: f64,
    comp: f64,
}

impl NeumaierSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    /// Merge another partial sum, keeping both compensation terms.
    pub fn merge(&mut self, other: &NeumaierSum) {
        self.add(other.sum);
        self.add(other.comp);
    }

    pub fn sum(&self) -> f64 {
        self.sum + self.comp
    }
}

impl AddAssign<f64> for NeumaierSum {
    fn add_assign(&mut self, x: f64) {
        self.add(x);
    }
}

impl Extend<f64> for NeumaierSum {
    fn extend<I: IntoIterator<Item = f64>>(&mut self, iter: I) {
        for x in iter {
            self.add(x);
        }
    }
}

impl FromIterator<f64> for NeumaierSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut s = NeumaierSum::new();
        s.extend(iter);
        s
    }
}

impl Sum<f64> for NeumaierSum {
    fn sum<I: Iterator<Item = f64>>(iter: I) -> Self {
        iter.collect()
    }
}

/// Compensated sum of an iterator of `f64`.
pub fn compensated_sum<I: IntoIterator<Item = f64>>(iter: I) -> f64 {
    iter.into_iter().collect::<NeumaierSum>().sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recovers_cancelled_small_terms() {
        let xs = [1.0, 1e100, 1.0, -1e100];
        assert_eq!(compensated_sum(xs), 2.0);
        assert_eq!(xs.iter().sum::<f64>(), 0.0);
    }

    #[test]
    fn harmonic_tail_matches_reverse_order() {
        let n = 1_000_000;
        let fwd = compensated_sum((1..=n).map(|k| 1.0 / k as f64));
        let rev = compensated_sum((1..=n).rev().map(|k| 1.0 / k as f64));
        assert!((fwd - rev).abs() <= 2.0 * f64::EPSILON * fwd);
    }

    #[test]
    fn merge_equals_sequential() {
        let xs: Vec<f64> = (1..2000).map(|k| ((k * 7919) % 1013) as f64 * 1e-3 - 0.4).collect();
        let whole = compensated_sum(xs.iter().copied());
        let mut a: NeumaierSum = xs[..1000].iter().copied().collect();
        let b: NeumaierSum = xs[1000..].iter().copied().collect();
        a.merge(&b);
        assert!((a.sum() - whole).abs() < 1e-13);
    }
}
