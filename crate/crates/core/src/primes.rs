//! Segmented prime generation and the running prime functionals.
//!
//! Primes come out of an odd-only, bit-packed segmented sieve. Segments of a
//! batch are sieved in parallel and concatenated in ascending order, so every
//! consumer sees a strictly increasing stream regardless of the thread count.
//!
//! `eta(x) = sum_{p <= x} log p / (p - 1) - log x + gamma` jumps up by
//! `log p / (p - 1)` at each prime and decreases between primes. Its extrema
//! on `[a, b]` are therefore found among the values right after each prime
//! (local maxima), the left limits just before each prime (local minima) and
//! the two endpoints; [`eta_sup_bound`] evaluates all of them.

use rayon::prelude::*;

use crate::divisor_series::wqj_value;
use crate::error::{Error, Result};
use crate::interval::{Interval, MathConstants};

const MODULE: &str = "primes";

pub const DEFAULT_SEGMENT_LEN: u64 = 1 << 22;
pub const DEFAULT_MAX_HI: u64 = 1 << 40;

/// Resource configuration for the segmented sieve.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PrimeSieve {
    /// Integers covered by one segment.
    pub segment_len: u64,
    /// Largest upper end a caller may request.
    pub max_hi: u64,
}

impl Default for PrimeSieve {
    fn default() -> Self {
        PrimeSieve { segment_len: DEFAULT_SEGMENT_LEN, max_hi: DEFAULT_MAX_HI }
    }
}

impl PrimeSieve {
    pub fn with_segment_len(segment_len: u64) -> Self {
        PrimeSieve { segment_len: segment_len.max(64), ..Default::default() }
    }

    pub fn check_range(&self, hi: u64) -> Result<()> {
        if hi > self.max_hi {
            return Err(Error::config(MODULE, format!("sieve limit {hi} exceeds configured maximum {}", self.max_hi)));
        }
        Ok(())
    }

    /// Ascending stream of the primes in `[lo, hi]`.
    pub fn stream(&self, lo: u64, hi: u64) -> Result<PrimeStream> {
        self.check_range(hi)?;
        let base = if hi >= 9 { small_primes(hi.isqrt()) } else { Vec::new() };
        Ok(PrimeStream {
            base,
            next_start: lo.max(2),
            end: hi.saturating_add(1),
            segment_len: self.segment_len,
            batch: rayon::current_num_threads().max(1),
            buffer: Vec::new(),
            pos: 0,
        })
    }

    /// All primes in `[lo, hi]`.
    pub fn primes(&self, lo: u64, hi: u64) -> Result<Vec<u64>> {
        if lo > hi {
            return Ok(Vec::new());
        }
        Ok(self.stream(lo, hi)?.collect())
    }
}

/// Primes in `[lo, hi]` under the default sieve configuration.
pub fn segmented_primes(lo: u64, hi: u64) -> Result<Vec<u64>> {
    if lo < 2 || lo > hi {
        return Err(Error::domain(MODULE, format!("require 2 <= lo <= hi, got [{lo}, {hi}]")));
    }
    PrimeSieve::default().primes(lo, hi)
}

/// Plain sieve of Eratosthenes up to `n` (inclusive). Used for base primes.
pub fn small_primes(n: u64) -> Vec<u64> {
    if n < 2 {
        return Vec::new();
    }
    let n = n as usize;
    let mut composite = vec![false; n + 1];
    let mut out = Vec::new();
    for i in 2..=n {
        if composite[i] {
            continue;
        }
        out.push(i as u64);
        let mut m = i * i;
        while m <= n {
            composite[m] = true;
            m += i;
        }
    }
    out
}

/// Primes in `[lo, end)` using the odd base primes in `base`.
fn sieve_segment(base: &[u64], lo: u64, end: u64) -> Vec<u64> {
    let mut out = Vec::new();
    if lo <= 2 && 2 < end {
        out.push(2);
    }
    let start = {
        let s = lo.max(3);
        s | 1
    };
    if start >= end {
        return out;
    }
    let count = (end - start).div_ceil(2) as usize;
    let mut bits = vec![u64::MAX; count.div_ceil(64)];
    for &p in base.iter().skip_while(|&&p| p == 2) {
        if p * p >= end {
            break;
        }
        let mut m = (p * p).max(start.div_ceil(p) * p);
        if m % 2 == 0 {
            m += p;
        }
        while m < end {
            let idx = ((m - start) / 2) as usize;
            bits[idx / 64] &= !(1u64 << (idx % 64));
            m += 2 * p;
        }
    }
    for (w, &word) in bits.iter().enumerate() {
        let mut word = word;
        while word != 0 {
            let b = word.trailing_zeros() as usize;
            let idx = w * 64 + b;
            if idx >= count {
                break;
            }
            out.push(start + 2 * idx as u64);
            word &= word - 1;
        }
    }
    out
}

/// Iterator over primes produced segment by segment.
pub struct PrimeStream {
    base: Vec<u64>,
    next_start: u64,
    end: u64,
    segment_len: u64,
    batch: usize,
    buffer: Vec<u64>,
    pos: usize,
}

impl PrimeStream {
    fn refill(&mut self) -> bool {
        self.buffer.clear();
        self.pos = 0;
        while self.buffer.is_empty() && self.next_start < self.end {
            let mut starts = Vec::with_capacity(self.batch);
            let mut s = self.next_start;
            while starts.len() < self.batch && s < self.end {
                starts.push(s);
                s = s.saturating_add(self.segment_len).min(self.end);
            }
            self.next_start = s;
            let (seg, end, base) = (self.segment_len, self.end, &self.base);
            let parts: Vec<Vec<u64>> =
                starts.par_iter().map(|&lo| sieve_segment(base, lo, lo.saturating_add(seg).min(end))).collect();
            for part in parts {
                self.buffer.extend(part);
            }
        }
        !self.buffer.is_empty()
    }
}

impl Iterator for PrimeStream {
    type Item = u64;

    fn next(&mut self) -> Option<u64> {
        if self.pos >= self.buffer.len() && !self.refill() {
            return None;
        }
        let p = self.buffer[self.pos];
        self.pos += 1;
        Some(p)
    }
}

/// `log p / (p - 1)`.
pub fn logp_over_pm1(p: u64) -> Interval {
    Interval::from_int(p).ln().expect("p >= 2") / Interval::from_int(p - 1)
}

/// `1 - 1/p`, as the exact ratio `(p - 1) / p`.
pub fn mertens_factor(p: u64) -> Interval {
    Interval::ratio(p - 1, p)
}

/// Running values of the prime functionals at threshold `x`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PrimeFunctionalState {
    pub x: u64,
    /// `prod_{p <= x} (1 - 1/p)`
    pub mertens_prod: Interval,
    /// `sum_{p <= x} log p / (p - 1)`
    pub sum_logp_over_pm1: Interval,
    /// `sum_{q <= x} W_{q,J}`
    pub sum_wqj: Interval,
    pub j_order: u32,
}

impl PrimeFunctionalState {
    pub fn new(j_order: u32) -> Result<Self> {
        if j_order < 2 {
            return Err(Error::domain(MODULE, format!("truncation order J must be >= 2, got {j_order}")));
        }
        Ok(PrimeFunctionalState {
            x: 1,
            mertens_prod: Interval::ONE,
            sum_logp_over_pm1: Interval::ZERO,
            sum_wqj: Interval::ZERO,
            j_order,
        })
    }

    /// Absorb the next prime `p > x`.
    pub fn advance(&mut self, p: u64) -> Result<()> {
        if p <= self.x {
            return Err(Error::consistency(MODULE, format!("primes must ascend: got {p} after {}", self.x)));
        }
        self.mertens_prod = self.mertens_prod * mertens_factor(p);
        self.sum_logp_over_pm1 = self.sum_logp_over_pm1 + logp_over_pm1(p);
        self.sum_wqj = self.sum_wqj + wqj_value(p, self.j_order)?;
        self.x = p;
        Ok(())
    }

    pub fn advanced(mut self, p: u64) -> Result<Self> {
        self.advance(p)?;
        Ok(self)
    }

    /// Batch construction: each functional is formed in one pass over `primes`.
    pub fn from_primes(primes: &[u64], j_order: u32) -> Result<Self> {
        let mut s = Self::new(j_order)?;
        if !primes.windows(2).all(|w| w[0] < w[1]) {
            return Err(Error::consistency(MODULE, "primes must ascend"));
        }
        s.mertens_prod = primes.iter().fold(Interval::ONE, |acc, &p| acc * mertens_factor(p));
        s.sum_logp_over_pm1 = primes.iter().map(|&p| logp_over_pm1(p)).sum();
        s.sum_wqj = Interval::sum(primes.iter().map(|&p| wqj_value(p, j_order)).collect::<Result<Vec<_>>>()?);
        s.x = primes.last().copied().unwrap_or(1);
        Ok(s)
    }
}

/// `eta` at a given location.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EtaPoint {
    pub x: u64,
    /// True for the limit from the left at a prime `x` (value before the jump).
    pub left_limit: bool,
    pub value: Interval,
}

/// `eta(x)` for integer `x >= 2`.
pub fn eta(sieve: &PrimeSieve, x: u64) -> Result<Interval> {
    if x < 2 {
        return Err(Error::domain(MODULE, format!("eta requires x >= 2, got {x}")));
    }
    let gamma = MathConstants::new().gamma;
    let s: Interval = sieve.stream(2, x)?.map(logp_over_pm1).sum();
    Ok(s - Interval::from_int(x).ln()? + gamma)
}

/// Certified upper bound on `sup |eta(y)|` for real `y` in `[a, b]`.
#[derive(Clone, Copy, Debug)]
pub struct EtaSup {
    pub bound: f64,
    /// The candidate point whose enclosure produced `bound`.
    pub at: EtaPoint,
}

pub fn eta_sup_bound(sieve: &PrimeSieve, a: u64, b: u64) -> Result<EtaSup> {
    if a < 2 || a > b {
        return Err(Error::domain(MODULE, format!("require 2 <= a <= b, got [{a}, {b}]")));
    }
    sieve.check_range(b)?;
    let gamma = MathConstants::new().gamma;
    let mut sum = Interval::ZERO;
    let mut primes = sieve.stream(2, b)?.peekable();
    while let Some(&p) = primes.peek() {
        if p > a {
            break;
        }
        sum = sum + logp_over_pm1(p);
        primes.next();
    }
    let start = EtaPoint { x: a, left_limit: false, value: sum - Interval::from_int(a).ln()? + gamma };
    let mut best = EtaSup { bound: start.value.mag(), at: start };
    let mut consider = |pt: EtaPoint| {
        let m = pt.value.mag();
        if m > best.bound {
            best = EtaSup { bound: m, at: pt };
        }
    };
    for p in primes {
        let log_p = Interval::from_int(p).ln()?;
        let before = sum - log_p + gamma;
        consider(EtaPoint { x: p, left_limit: true, value: before });
        sum = sum + log_p / Interval::from_int(p - 1);
        consider(EtaPoint { x: p, left_limit: false, value: sum - log_p + gamma });
    }
    consider(EtaPoint { x: b, left_limit: false, value: sum - Interval::from_int(b).ln()? + gamma });
    Ok(best)
}

/// Enclosure of `delta(x) = eta(x) + sum_{p > x} log p / (p (p - 1))`, summing
/// the tail explicitly up to `tail_cutoff` and bounding the rest by
/// `(1 + log T) / T`.
pub fn delta_enclosure(sieve: &PrimeSieve, x: u64, tail_cutoff: u64) -> Result<Interval> {
    if x < 2 {
        return Err(Error::domain(MODULE, format!("delta requires x >= 2, got {x}")));
    }
    if tail_cutoff < x {
        return Err(Error::domain(MODULE, format!("tail cutoff {tail_cutoff} below x = {x}")));
    }
    let eta_x = eta(sieve, x)?;
    let partial: Interval = sieve.stream(x + 1, tail_cutoff)?.map(|p| logp_over_pm1(p) / Interval::from_int(p)).sum();
    let t = Interval::from_int(tail_cutoff);
    let rest = (Interval::ONE + t.ln()?) / t;
    Ok(eta_x + partial + Interval::new(0.0, rest.hi()))
}
