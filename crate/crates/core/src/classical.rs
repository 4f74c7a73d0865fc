//! Classical sl2 tensor-power coefficients `F_k^(N)` and exact binomials.

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// `C(n, k)`, zero outside `0..=n`.
pub fn binom(n: usize, k: i64) -> BigInt {
    if k < 0 || k as u64 > n as u64 {
        return BigInt::zero();
    }
    let k = (k as usize).min(n - k as usize);
    let mut acc = BigInt::one();
    for j in 0..k {
        acc = acc * (n - j) / (j + 1);
    }
    acc
}

/// `F_k^(N) = C(N, (N-k)/2) - C(N, (N-k-2)/2)` for `N - k` even, zero otherwise.
///
/// Negative `k` is allowed and gives `F_{-k-2} = -F_k`.
pub fn classical_mult(n: usize, k: i64) -> BigInt {
    let d = n as i64 - k;
    if d.rem_euclid(2) != 0 {
        return BigInt::zero();
    }
    let a = d / 2;
    binom(n, a) - binom(n, a - 1)
}

/// Cached row `C(N, 0..=N)` for repeated evaluation of `F_k^(N)` at fixed `N`.
#[derive(Debug, Clone)]
pub struct BinomialRow {
    n: usize,
    row: Vec<BigInt>,
}

impl BinomialRow {
    pub fn new(n: usize) -> Self {
        let mut row = Vec::with_capacity(n + 1);
        let mut c = BigInt::one();
        row.push(c.clone());
        for j in 0..n {
            c = c * (n - j) / (j + 1);
            row.push(c.clone());
        }
        Self { n, row }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn binom(&self, k: i64) -> BigInt {
        if k < 0 || k as usize > self.n {
            BigInt::zero()
        } else {
            self.row[k as usize].clone()
        }
    }

    /// `F_k^(N)` for this row's `N`.
    pub fn classical(&self, k: i64) -> BigInt {
        let d = self.n as i64 - k;
        if d.rem_euclid(2) != 0 {
            return BigInt::zero();
        }
        self.binom(d / 2) - self.binom(d / 2 - 1)
    }
}

/// Natural logarithm of a positive big integer, accurate for arbitrarily many bits.
pub fn ln_big(x: &BigInt) -> f64 {
    assert!(x.is_positive(), "ln of non-positive integer");
    let bits = x.bits();
    if bits <= 1000 {
        return x.to_f64().unwrap().ln();
    }
    let shift = bits - 64;
    let top = (x >> shift).to_f64().unwrap();
    top.ln() + shift as f64 * std::f64::consts::LN_2
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    // ballot paths 0 -> k with +-1 steps staying >= 0
    fn ballot(n: usize) -> Vec<u64> {
        let mut v = vec![0u64; n + 2];
        v[0] = 1;
        for _ in 0..n {
            let mut w = vec![0u64; n + 2];
            for (x, &c) in v.iter().enumerate() {
                if c == 0 {
                    continue;
                }
                w[x + 1] += c;
                if x > 0 {
                    w[x - 1] += c;
                }
            }
            v = w;
        }
        v
    }

    #[test]
    fn binom_examples() {
        assert_eq!(binom(5, 2), BigInt::from(10));
        assert_eq!(binom(5, -1), BigInt::zero());
        assert_eq!(binom(5, 6), BigInt::zero());
        assert_eq!(binom(0, 0), BigInt::one());
    }

    #[test]
    fn binom_matches_pascal() {
        let mut row = vec![BigInt::one()];
        for n in 1..=30usize {
            let mut next = vec![BigInt::one(); n + 1];
            for k in 1..n {
                next[k] = &row[k - 1] + &row[k];
            }
            row = next;
            for (k, c) in row.iter().enumerate() {
                assert_eq!(&binom(n, k as i64), c);
            }
        }
        assert_eq!(binom(30, 15), BigInt::from(155_117_520u64));
    }

    #[test]
    fn classical_examples() {
        assert_eq!(classical_mult(1, 1), BigInt::one());
        assert_eq!(classical_mult(5, 3), BigInt::from(4));
        assert_eq!(classical_mult(5, 1), BigInt::from(5));
        assert_eq!(classical_mult(5, 2), BigInt::zero());
    }

    #[test]
    fn classical_counts_ballot_paths() {
        for n in 0..=20 {
            let paths = ballot(n);
            for (k, count) in paths.iter().enumerate().take(n + 1) {
                assert_eq!(
                    classical_mult(n, k as i64),
                    BigInt::from(*count),
                    "N={n} k={k}"
                );
            }
        }
    }

    #[test]
    fn dimension_count() {
        for n in 0..=40usize {
            let total: BigInt = (0..=n as i64).map(|k| classical_mult(n, k) * (k + 1)).sum();
            assert_eq!(total, BigInt::one() << n);
        }
    }

    #[test]
    fn row_agrees() {
        for n in [0usize, 1, 7, 30] {
            let row = BinomialRow::new(n);
            for k in -40i64..40 {
                assert_eq!(row.binom(k), binom(n, k));
                assert_eq!(row.classical(k), classical_mult(n, k));
            }
        }
    }

    #[test]
    fn ln_big_large() {
        let x = BigInt::one() << 5000u32;
        assert!((ln_big(&x) - 5000.0 * std::f64::consts::LN_2).abs() < 1e-9);
        assert!((ln_big(&BigInt::from(1000)) - 1000f64.ln()).abs() < 1e-12);
    }

    proptest! {
        #[test]
        fn reflection_antisymmetry(n in 0usize..60, k in 0i64..70) {
            prop_assert_eq!(classical_mult(n, -k - 2), -classical_mult(n, k));
        }
    }
}
