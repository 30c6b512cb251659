//! Practical numbers and the divisor sum `sigma`.
//!
//! `n = p_1^a_1 ... p_k^a_k` (with `p_1 < ... < p_k`) is practical iff
//! `p_1 = 2` (or `n = 1`) and every further prime satisfies
//! `p_{j+1} <= sigma(p_1^a_1 ... p_j^a_j) + 1`. [`enumerate_practical`]
//! applies that test inside a segmented sieve: within a segment the small
//! primes are visited in ascending order, so each number's running
//! prefix `sigma` is available exactly when its next prime factor is removed.
//! The cofactor left after all primes up to `sqrt(N)` is either 1 or one
//! prime larger than every factor already seen.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::primes::small_primes;

const MODULE: &str = "practical";

/// Largest `n` the subset-sum oracle accepts.
pub const ORACLE_LIMIT: u64 = 100_000;

/// One practical number with its exact divisor sum.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PracticalRow {
    pub n: u64,
    pub sigma: u64,
}

impl PracticalRow {
    /// `sigma(n) + 1`
    #[inline]
    pub fn theta(&self) -> u64 {
        self.sigma + 1
    }
}

/// Prime factorization by trial division, ascending primes.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            let mut e = 0;
            while n.is_multiple_of(d) {
                n /= d;
                e += 1;
            }
            out.push((d, e));
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

fn overflow(n: u64) -> Error {
    Error::consistency(MODULE, format!("sigma({n}) overflows u64"))
}

/// `1 + p + ... + p^e`
fn prime_power_sigma(p: u64, e: u32, n: u64) -> Result<u64> {
    let mut s = 1u64;
    let mut pk = 1u64;
    for _ in 0..e {
        pk = pk.checked_mul(p).ok_or_else(|| overflow(n))?;
        s = s.checked_add(pk).ok_or_else(|| overflow(n))?;
    }
    Ok(s)
}

/// Sum of the positive divisors of `n`.
pub fn sigma(n: u64) -> Result<u64> {
    if n == 0 {
        return Err(Error::domain(MODULE, "sigma is defined for n >= 1"));
    }
    factorize(n)
        .into_iter()
        .try_fold(1u64, |acc, (p, e)| acc.checked_mul(prime_power_sigma(p, e, n)?).ok_or_else(|| overflow(n)))
}

/// Structural test: every prime factor, in ascending order, is at most
/// `sigma(prefix) + 1`.
pub fn is_practical(n: u64) -> bool {
    if n == 0 {
        return false;
    }
    let mut prefix_sigma = 1u64;
    for (p, e) in factorize(n) {
        if p > prefix_sigma.saturating_add(1) {
            return false;
        }
        match prime_power_sigma(p, e, n).ok().and_then(|s| prefix_sigma.checked_mul(s)) {
            Some(s) => prefix_sigma = s,
            None => return false,
        }
    }
    true
}

/// Brute-force test from the definition: every `m <= n` is a sum of
/// distinct divisors of `n`. Reachable subset sums are tracked in a bitset.
pub fn is_practical_oracle(n: u64) -> Result<bool> {
    if n == 0 || n > ORACLE_LIMIT {
        return Err(Error::config(MODULE, format!("oracle accepts 1 <= n <= {ORACLE_LIMIT}, got {n}")));
    }
    let len = n as usize + 1;
    let words = len.div_ceil(64);
    let mut reach = vec![0u64; words];
    reach[0] = 1;
    for d in (1..=n).filter(|d| n.is_multiple_of(*d)) {
        let d = d as usize;
        // reach |= reach << d, highest words first so sources are unmodified.
        let (ws, bs) = (d / 64, d % 64);
        for w in (ws..words).rev() {
            let mut v = reach[w - ws] << bs;
            if bs > 0 && w > ws {
                v |= reach[w - ws - 1] >> (64 - bs);
            }
            reach[w] |= v;
        }
    }
    Ok((1..len).all(|m| reach[m / 64] >> (m % 64) & 1 == 1))
}

/// Limits for [`enumerate_practical`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EnumerationLimits {
    pub max_n: u64,
    pub segment_len: u64,
}

impl Default for EnumerationLimits {
    fn default() -> Self {
        EnumerationLimits { max_n: 1 << 26, segment_len: 1 << 18 }
    }
}

/// All practical `n <= n_max` with their divisor sums, ascending in `n`.
pub fn enumerate_practical(n_max: u64) -> Result<Vec<PracticalRow>> {
    enumerate_practical_with(n_max, &EnumerationLimits::default())
}

pub fn enumerate_practical_with(n_max: u64, limits: &EnumerationLimits) -> Result<Vec<PracticalRow>> {
    if n_max == 0 {
        return Err(Error::config(MODULE, "N must be at least 1"));
    }
    if n_max > limits.max_n {
        return Err(Error::config(MODULE, format!("N = {n_max} exceeds the enumeration limit {}", limits.max_n)));
    }
    let base = small_primes(n_max.isqrt());
    let seg = limits.segment_len.max(64);
    let starts: Vec<u64> = (0..n_max.div_ceil(seg)).map(|i| 1 + i * seg).collect();
    let parts = starts
        .par_iter()
        .map(|&lo| practical_segment(&base, lo, (lo + seg).min(n_max + 1)))
        .collect::<Result<Vec<_>>>()?;
    Ok(parts.concat())
}

/// Practical numbers in `[lo, end)`.
fn practical_segment(base: &[u64], lo: u64, end: u64) -> Result<Vec<PracticalRow>> {
    let len = (end - lo) as usize;
    let mut rem: Vec<u64> = (lo..end).collect();
    let mut sig = vec![1u64; len];
    let mut ok = vec![true; len];
    for &p in base {
        if p * p >= end {
            break;
        }
        let first = lo.div_ceil(p) * p;
        let mut m = first;
        while m < end {
            let i = (m - lo) as usize;
            if ok[i] {
                if p > sig[i] + 1 {
                    ok[i] = false;
                } else {
                    let mut s = 1u64;
                    let mut pk = 1u64;
                    while rem[i].is_multiple_of(p) {
                        rem[i] /= p;
                        pk *= p;
                        s += pk;
                    }
                    sig[i] = sig[i].checked_mul(s).ok_or_else(|| overflow(m))?;
                }
            }
            m += p;
        }
    }
    let mut out = Vec::new();
    for i in 0..len {
        if !ok[i] {
            continue;
        }
        let n = lo + i as u64;
        let r = rem[i];
        if r > 1 {
            if r > sig[i] + 1 {
                continue;
            }
            sig[i] = sig[i].checked_mul(r + 1).ok_or_else(|| overflow(n))?;
        }
        let row = PracticalRow { n, sigma: sig[i] };
        if n >= 2 && row.theta() < 2 * n {
            return Err(Error::consistency(MODULE, format!("theta({n}) = {} is below 2n", row.theta())));
        }
        out.push(row);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    const FIRST_TWELVE: [u64; 12] = [1, 2, 4, 6, 8, 12, 16, 18, 20, 24, 28, 30];

    #[test]
    fn sigma_values() {
        assert_eq!(sigma(1).unwrap(), 1);
        assert_eq!(sigma(12).unwrap(), 28);
        assert_eq!(sigma(1 << 10).unwrap(), 2047);
        assert!(sigma(0).is_err());
        // sigma(2^63) = 2^64 - 1 fits, 3 * 2^62 does not: sigma = 4 * (2^63 - 1)
        assert_eq!(sigma(1 << 63).unwrap(), u64::MAX);
        assert!(sigma(3 << 62).is_err());
    }

    #[test]
    fn oracle_small_cases() {
        assert!(is_practical_oracle(1).unwrap());
        assert!(!is_practical_oracle(10).unwrap());
        let found: Vec<u64> = (1..=30).filter(|&n| is_practical_oracle(n).unwrap()).collect();
        assert_eq!(found, FIRST_TWELVE);
        assert!(is_practical_oracle(ORACLE_LIMIT + 1).is_err());
    }

    #[test]
    fn structural_small_cases() {
        assert!(is_practical(1));
        assert!(is_practical(2));
        assert!(!is_practical(3));
        assert!(is_practical(6) && is_practical(28));
        assert!(!is_practical(10));
        // 78 = 2 * 3 * 13 with sigma(6) + 1 = 13: the tie is accepted
        assert!(is_practical(78));
        assert!(!is_practical(2 * 3 * 17));
    }

    #[test]
    fn structural_matches_oracle() {
        for n in 1..=3000 {
            assert_eq!(is_practical(n), is_practical_oracle(n).unwrap(), "n = {n}");
        }
    }

    #[test]
    fn enumeration_small() {
        assert_eq!(enumerate_practical(1).unwrap(), vec![PracticalRow { n: 1, sigma: 1 }]);
        let ns: Vec<u64> = enumerate_practical(30).unwrap().iter().map(|r| r.n).collect();
        assert_eq!(ns, FIRST_TWELVE);
        assert!(matches!(enumerate_practical(0), Err(Error::Config { .. })));
        let limits = EnumerationLimits { max_n: 100, ..Default::default() };
        assert!(matches!(enumerate_practical_with(101, &limits), Err(Error::Config { .. })));
    }

    #[test]
    fn enumeration_matches_direct_filter() {
        let n_max = 100_000;
        let limits = EnumerationLimits { segment_len: 4096, ..Default::default() };
        let rows = enumerate_practical_with(n_max, &limits).unwrap();
        let direct: Vec<u64> = (1..=n_max).filter(|&n| is_practical(n)).collect();
        assert_eq!(rows.iter().map(|r| r.n).collect::<Vec<_>>(), direct);
        for r in rows.iter().step_by(97) {
            assert_eq!(r.sigma, sigma(r.n).unwrap());
        }
    }
}
