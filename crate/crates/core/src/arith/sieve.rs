//! Linear sieve with smallest-prime-factor bookkeeping.

/// For every `n ≤ limit`: its smallest prime factor `p`, the exponent `e` of
/// `p` in `n`, and the cofactor `n / p^e`. Index 0 is unused and `n = 1` has
/// `spf = 1`.
#[derive(Debug, Clone)]
pub struct Factorizer {
    spf: Vec<u32>,
    exp: Vec<u8>,
    rest: Vec<u32>,
}

impl Factorizer {
    pub fn new(limit: usize) -> Self {
        assert!(limit < u32::MAX as usize, "sieve limit too large");
        let mut spf = vec![0u32; limit + 1];
        let mut exp = vec![0u8; limit + 1];
        let mut rest = vec![1u32; limit + 1];
        let mut primes: Vec<u32> = Vec::new();
        if limit >= 1 {
            spf[1] = 1;
        }
        for i in 2..=limit {
            if spf[i] == 0 {
                spf[i] = i as u32;
                exp[i] = 1;
                rest[i] = 1;
                primes.push(i as u32);
            }
            let si = spf[i];
            for &p in &primes {
                let m = i * p as usize;
                if p > si || m > limit {
                    break;
                }
                spf[m] = p;
                if p == si {
                    exp[m] = exp[i] + 1;
                    rest[m] = rest[i];
                } else {
                    exp[m] = 1;
                    rest[m] = i as u32;
                }
            }
        }
        Factorizer { spf, exp, rest }
    }

    pub fn limit(&self) -> usize {
        self.spf.len() - 1
    }

    /// `(p, e, n / p^e)` for the smallest prime `p | n`; `None` for `n = 1`.
    pub fn split(&self, n: usize) -> Option<(u64, u32, usize)> {
        if n <= 1 {
            return None;
        }
        Some((
            self.spf[n] as u64,
            self.exp[n] as u32,
            self.rest[n] as usize,
        ))
    }

    /// Prime factorization as `(p, e)` pairs in increasing order of `p`.
    pub fn factorize(&self, mut n: usize) -> Vec<(u64, u32)> {
        let mut out = Vec::new();
        while let Some((p, e, r)) = self.split(n) {
            out.push((p, e));
            n = r;
        }
        out
    }

    /// Sorted list of divisors of `n`.
    pub fn divisors(&self, n: usize) -> Vec<u64> {
        let mut divs = vec![1u64];
        for (p, e) in self.factorize(n) {
            let len = divs.len();
            let mut pk = 1u64;
            for _ in 0..e {
                pk *= p;
                for i in 0..len {
                    divs.push(divs[i] * pk);
                }
            }
        }
        divs.sort_unstable();
        divs
    }

    /// Tabulate a multiplicative function from its values on prime powers.
    /// `out[0]` is filled with `zero` and `out[1]` with `one`.
    pub fn multiplicative<T, F>(&self, zero: T, one: T, mul: impl Fn(&T, &T) -> T, pp: F) -> Vec<T>
    where
        T: Clone,
        F: Fn(u64, u32) -> T,
    {
        let limit = self.limit();
        let mut out = Vec::with_capacity(limit + 1);
        out.push(zero);
        if limit >= 1 {
            out.push(one);
        }
        for n in 2..=limit {
            let (p, e, r) = self.split(n).expect("n > 1");
            let v = mul(&out[r], &pp(p, e));
            out.push(v);
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn trial_factor(mut n: u64) -> Vec<(u64, u32)> {
        let mut out = Vec::new();
        let mut p = 2;
        while p * p <= n {
            let mut e = 0;
            while n.is_multiple_of(p) {
                n /= p;
                e += 1;
            }
            if e > 0 {
                out.push((p, e));
            }
            p += 1;
        }
        if n > 1 {
            out.push((n, 1));
        }
        out
    }

    #[test]
    fn factorization_matches_trial_division() {
        let f = Factorizer::new(5000);
        for n in 1..=5000usize {
            assert_eq!(f.factorize(n), trial_factor(n as u64), "n = {n}");
        }
    }

    #[test]
    fn divisors_are_complete() {
        let f = Factorizer::new(1000);
        for n in 1..=1000usize {
            let brute: Vec<u64> = (1..=n as u64).filter(|d| (n as u64).is_multiple_of(*d)).collect();
            assert_eq!(f.divisors(n), brute);
        }
    }
}
