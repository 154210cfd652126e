//! Number-theoretic scalar functions and brute-force counting oracles.
//!
//! Everything here is computed without the series engine so it can serve as
//! an independent check on it: representation counts by dynamic programming
//! over triangular-number strides, closed forms by divisor enumeration.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_integer::Roots;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::series::PowerSeries;

/// Exact rational, always reduced with a positive denominator.
pub type ExactRational = BigRational;

/// Tabulating `sigma(2n+1)` switches from trial division to a
/// smallest-prime-factor sieve above this many terms.
pub const SIEVE_THRESHOLD: usize = 10_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ArithError {
    /// The divisor sum in the Williams formula was not divisible by 4.
    NonIntegralResult { n: u64, sum: i128 },
    EmptyWeights,
    ZeroWeight,
}

impl fmt::Display for ArithError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ArithError::NonIntegralResult { n, sum } => {
                write!(f, "Williams divisor sum {sum} for n = {n} is not divisible by 4")
            }
            ArithError::EmptyWeights => write!(f, "representation query needs at least one weight"),
            ArithError::ZeroWeight => write!(f, "representation weights must be positive"),
        }
    }
}

impl core::error::Error for ArithError {}

/// `T_n = n(n+1)/2`.
pub fn triangular(n: u64) -> u128 {
    let n = u128::from(n);
    n * (n + 1) / 2
}

/// Positive divisors of `m` in increasing order, by trial division up to `sqrt(m)`.
///
/// # Panics
///
/// Panics if `m == 0`.
pub fn divisors(m: u64) -> Vec<u64> {
    assert!(m >= 1, "divisors of zero are undefined");
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1u64;
    while d.saturating_mul(d) <= m {
        if m % d == 0 {
            small.push(d);
            if d != m / d {
                large.push(m / d);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

/// Sum of the positive divisors of `m`.
///
/// # Panics
///
/// Panics if `m == 0`.
pub fn sigma(m: u64) -> u128 {
    divisors(m).into_iter().map(u128::from).sum()
}

/// Smallest prime factor of every integer below `limit` (entries 0 and 1 are 0).
pub fn smallest_prime_factors(limit: usize) -> Vec<u32> {
    let mut spf = vec![0u32; limit];
    for i in 2..limit {
        if spf[i] != 0 {
            continue;
        }
        spf[i] = i as u32;
        let mut j = i.saturating_mul(i);
        while j < limit {
            if spf[j] == 0 {
                spf[j] = i as u32;
            }
            j += i;
        }
    }
    spf
}

/// `sigma(m)` for every `m < limit` from a smallest-prime-factor sieve.
/// Entry 0 is 0.
pub fn sigma_table(limit: usize) -> Vec<u128> {
    let spf = smallest_prime_factors(limit);
    let mut table = vec![0u128; limit];
    if limit > 1 {
        table[1] = 1;
    }
    for m in 2..limit {
        let p = spf[m] as usize;
        // split m = p^k * rest with p not dividing rest
        let mut rest = m;
        let mut pk = 1u128;
        let mut geom = 1u128;
        while rest % p == 0 {
            rest /= p;
            pk *= p as u128;
            geom += pk;
        }
        table[m] = geom * table[rest];
    }
    table
}

/// A query "how many tuples `(x_1..x_k)` of non-negative integers satisfy
/// `sum w_i T_(x_i) = n`".
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RepCountQuery {
    weights: Vec<u32>,
    target: u64,
}

impl RepCountQuery {
    pub fn new(weights: Vec<u32>, target: u64) -> Result<Self, ArithError> {
        if weights.is_empty() {
            return Err(ArithError::EmptyWeights);
        }
        if weights.contains(&0) {
            return Err(ArithError::ZeroWeight);
        }
        Ok(RepCountQuery { weights, target })
    }

    pub fn weights(&self) -> &[u32] {
        &self.weights
    }

    pub fn target(&self) -> u64 {
        self.target
    }
}

/// Representation counts for every target `0..=n_max` at once.
///
/// Layered dynamic programming: each weight `w` convolves the running table
/// with the indicator of `{ w T_x }`. Costs `O(k * n_max * sqrt(n_max))`.
pub fn rep_count_table(weights: &[u32], n_max: u64) -> Vec<u128> {
    let len = n_max as usize + 1;
    let mut counts = vec![0u128; len];
    counts[0] = 1;
    for &w in weights {
        let strides: Vec<usize> = (0u64..)
            .map(|x| triangular(x) * u128::from(w))
            .take_while(|&s| s <= u128::from(n_max))
            .map(|s| s as usize)
            .collect();
        let mut next = vec![0u128; len];
        for (i, slot) in next.iter_mut().enumerate() {
            let mut acc = 0u128;
            for &s in strides.iter().take_while(|&&s| s <= i) {
                acc = acc.checked_add(counts[i - s]).expect("representation count overflows u128");
            }
            *slot = acc;
        }
        counts = next;
    }
    counts
}

pub fn rep_count(query: &RepCountQuery) -> u128 {
    rep_count_table(&query.weights, query.target)[query.target as usize]
}

/// `t_4(n) = sigma(2n+1)`.
pub fn t4_formula(n: u64) -> u128 {
    sigma(2 * n + 1)
}

/// `t_8(n) = sum over odd d | n+1 of ((n+1)/d)^3`.
pub fn t8_formula(n: u64) -> u128 {
    let m = n + 1;
    divisors(m)
        .into_iter()
        .filter(|d| d % 2 == 1)
        .map(|d| u128::from(m / d).pow(3))
        .sum()
}

/// Count of `T_u + T_v + 2T_x + 2T_y = n` from the divisors of `4n+3`.
///
/// The per-divisor terms `(d - (-1)^((d-1)/2)) / 4` are not integers on their
/// own, so the full sum is formed first and divided by 4 once.
pub fn williams_formula(n: u64) -> Result<u128, ArithError> {
    let sum: i128 = divisors(4 * n + 3)
        .into_iter()
        .map(|d| {
            let d = i128::from(d);
            let sign = if (d - 1) / 2 % 2 == 0 { 1 } else { -1 };
            d - sign
        })
        .sum();
    if sum % 4 != 0 {
        return Err(ArithError::NonIntegralResult { n, sum });
    }
    Ok((sum / 4) as u128)
}

/// Jacobi's `r_4(n) = 8 * sum of divisors of n not divisible by 4`, with
/// `r_4(0) = 1`.
pub fn r4_formula(n: u64) -> u128 {
    if n == 0 {
        return 1;
    }
    8 * divisors(n).into_iter().filter(|d| d % 4 != 0).map(u128::from).sum::<u128>()
}

/// Signed ordered 4-tuples of integers with `w^2 + x^2 + y^2 + z^2 = n`,
/// counted by enumeration.
pub fn r4_bruteforce(n: u64) -> u128 {
    let r = n.sqrt() as i64;
    let n = n as i64;
    let mut count = 0u128;
    for w in -r..=r {
        let rw = n - w * w;
        for x in -r..=r {
            let rx = rw - x * x;
            if rx < 0 {
                continue;
            }
            for y in -r..=r {
                let rem = rx - y * y;
                if rem < 0 {
                    continue;
                }
                let z = rem.sqrt();
                if z * z == rem {
                    count += if z == 0 { 1 } else { 2 };
                }
            }
        }
    }
    count
}

/// Binomial coefficient `C(n, k)` as a big integer.
pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

/// `B_0 .. B_max` from `B_0 = 1` and `sum_(k=0..n) C(n+1,k) B_k = 0` (so `B_1 = -1/2`).
pub fn bernoulli(max: usize) -> Vec<ExactRational> {
    let mut b: Vec<ExactRational> = Vec::with_capacity(max + 1);
    b.push(ExactRational::one());
    for n in 1..=max as u64 {
        let mut acc = ExactRational::zero();
        for (k, bk) in b.iter().enumerate() {
            acc += ExactRational::from_integer(binomial(n + 1, k as u64)) * bk;
        }
        // C(n+1, n) = n+1
        b.push(-acc / ExactRational::from_integer(BigInt::from(n + 1)));
    }
    b
}

/// `sum_(k=0..n) C(n+1,k) B_k`, which vanishes for `n >= 1`.
pub fn bernoulli_residual(b: &[ExactRational], n: usize) -> ExactRational {
    b[..=n]
        .iter()
        .enumerate()
        .map(|(k, bk)| ExactRational::from_integer(binomial(n as u64 + 1, k as u64)) * bk)
        .fold(ExactRational::zero(), |a, x| a + x)
}

/// `sigma(2n+1)` for `n < order`.
pub fn sigma_odd_values(order: usize) -> Vec<u128> {
    if order > SIEVE_THRESHOLD {
        let table = sigma_table(2 * order);
        (0..order).map(|n| table[2 * n + 1]).collect()
    } else {
        (0..order as u64).map(|n| sigma(2 * n + 1)).collect()
    }
}

/// The series `sum sigma(2n+1) q^n` truncated to `order`.
pub fn sigma_series(order: usize) -> PowerSeries {
    PowerSeries::from_coeffs(sigma_odd_values(order).into_iter().map(BigInt::from).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(n: i64, d: i64) -> ExactRational {
        ExactRational::new(BigInt::from(n), BigInt::from(d))
    }

    // Brute force over all tuples with T_(x_i) <= n.
    fn rep_count_brute(weights: &[u32], n: u64) -> u128 {
        fn go(weights: &[u32], left: u64) -> u128 {
            match weights.split_first() {
                None => u128::from(left == 0),
                Some((&w, rest)) => (0u64..)
                    .map(|x| triangular(x) * u128::from(w))
                    .take_while(|&t| t <= u128::from(left))
                    .map(|t| go(rest, left - t as u64))
                    .sum(),
            }
        }
        go(weights, n)
    }

    #[test]
    fn triangular_examples() {
        assert_eq!(triangular(0), 0);
        assert_eq!(triangular(3), 6);
        assert_eq!(triangular(10), 55);
    }

    #[test]
    fn sigma_examples() {
        assert_eq!(sigma(1), 1);
        assert_eq!(sigma(9), 13);
        assert_eq!(sigma(15), 24);
        assert_eq!(divisors(36), vec![1, 2, 3, 4, 6, 9, 12, 18, 36]);
    }

    #[test]
    fn sieve_agrees_with_trial_division() {
        let table = sigma_table(5000);
        for m in 1..5000u64 {
            assert_eq!(table[m as usize], sigma(m), "m = {m}");
        }
        assert_eq!(sigma_odd_values(SIEVE_THRESHOLD + 5)[..200], sigma_odd_values(200)[..]);
    }

    #[test]
    fn rep_count_examples() {
        let q = |w: &[u32], n| rep_count(&RepCountQuery::new(w.to_vec(), n).unwrap());
        assert_eq!(q(&[1, 1, 1, 1], 0), 1);
        assert_eq!(q(&[1, 1, 1, 1], 4), 13);
        assert_eq!(q(&[1, 1, 2, 2], 2), 3);
        assert_eq!(rep_count_brute(&[1, 1, 1, 1], 4), 13);
        assert_eq!(rep_count_brute(&[1, 1, 2, 2], 2), 3);
    }

    #[test]
    fn rep_count_dp_matches_brute_force() {
        for weights in [&[1u32, 1, 1, 1][..], &[1, 1, 2, 2], &[1, 1, 1, 1, 1, 1, 1, 1], &[3, 1, 5]] {
            let table = rep_count_table(weights, 40);
            for n in 0..=40u64 {
                assert_eq!(table[n as usize], rep_count_brute(weights, n), "{weights:?} n={n}");
            }
        }
    }

    #[test]
    fn rep_count_query_validation() {
        assert_eq!(RepCountQuery::new(vec![], 3), Err(ArithError::EmptyWeights));
        assert_eq!(RepCountQuery::new(vec![1, 0], 3), Err(ArithError::ZeroWeight));
    }

    #[test]
    fn closed_form_examples() {
        assert_eq!(t4_formula(4), 13);
        assert_eq!(t8_formula(2), 28);
        assert_eq!(williams_formula(0), Ok(1));
        assert_eq!(williams_formula(2), Ok(3));
        assert_eq!(r4_formula(0), r4_bruteforce(0));
        assert_eq!(r4_formula(1), 8);
        assert_eq!(r4_formula(2), 24);
        assert_eq!(r4_formula(4), 24);
        assert_eq!(r4_bruteforce(1), 8);
        assert_eq!(r4_bruteforce(2), 24);
        assert_eq!(r4_bruteforce(4), 24);
    }

    #[test]
    fn closed_form_sweeps() {
        let t4 = rep_count_table(&[1, 1, 1, 1], 1000);
        for n in 0..=1000u64 {
            assert_eq!(t4[n as usize], t4_formula(n), "t4 n={n}");
        }
        let t8 = rep_count_table(&[1; 8], 300);
        for n in 0..=300u64 {
            assert_eq!(t8[n as usize], t8_formula(n), "t8 n={n}");
        }
        let w = rep_count_table(&[1, 1, 2, 2], 500);
        for n in 0..=500u64 {
            assert_eq!(Ok(w[n as usize]), williams_formula(n), "williams n={n}");
        }
        for n in 1..=500u64 {
            assert_eq!(r4_bruteforce(n), r4_formula(n), "r4 n={n}");
        }
    }

    #[test]
    fn bernoulli_values() {
        let b = bernoulli(12);
        assert_eq!(b[0], rat(1, 1));
        assert_eq!(b[1], rat(-1, 2));
        assert_eq!(b[2], rat(1, 6));
        assert_eq!(b[3], rat(0, 1));
        assert_eq!(b[4], rat(-1, 30));
        assert_eq!(b[12], rat(-691, 2730));
    }

    #[test]
    fn bernoulli_residuals_vanish() {
        let b = bernoulli(40);
        for n in 1..=40 {
            assert!(bernoulli_residual(&b, n).is_zero(), "n = {n}");
        }
    }

    #[test]
    fn sigma_series_examples() {
        assert_eq!(sigma_series(5), PowerSeries::from_i64s(&[1, 4, 6, 8, 13]));
        assert_eq!(sigma_series(1), PowerSeries::from_i64s(&[1]));
        assert_eq!(sigma_series(6).coeff(5), BigInt::from(12));
    }

    #[test]
    fn binomial_values() {
        assert_eq!(binomial(8, 2), BigInt::from(28));
        assert_eq!(binomial(5, 7), BigInt::zero());
        assert_eq!(binomial(40, 20), BigInt::from(137_846_528_820u64));
    }
}
