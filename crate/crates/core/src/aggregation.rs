//! The sorted-table pipeline.
//!
//! Rows `(n, sigma(n))` for practical `n <= N` are ordered by
//! `theta(n) = sigma(n) + 1`; one ascending pass over the primes up to
//! `max theta` advances a [`PrimeFunctionalState`] and snapshots it at each
//! threshold. The snapshots are stored back in `n` order and the four
//! truncation sums are folded sequentially in ascending `n`, so results are
//! bitwise reproducible for any thread count.

use std::time::Instant;

use crate::bounds::YSum;
use crate::error::{Error, Result};
use crate::interval::Interval;
use crate::practical::{enumerate_practical_with, EnumerationLimits, PracticalRow};
use crate::primes::{PrimeFunctionalState, PrimeSieve};

const MODULE: &str = "aggregation";

/// A practical row joined with the prime functionals at `theta(n)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AugmentedRow {
    pub row: PracticalRow,
    /// `prod_{p <= theta(n)} (1 - 1/p)`
    pub mertens_at_theta: Interval,
    /// `sum_{p <= theta(n)} log p / (p - 1)`
    pub logsum_at_theta: Interval,
    /// `sum_{q <= theta(n)} W_{q,J}`
    pub wsum_at_theta: Interval,
}

/// Truncated sums over practical `n <= N`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Aggregates {
    pub n_max: u64,
    pub j_order: u32,
    /// `sum (logsum - log n) * mertens / n`
    pub alpha_n: Interval,
    /// `1 - lemma1_sum`
    pub eps_n: Interval,
    /// `sum log(sigma(n)/n) * mertens / n`
    pub u_n: Interval,
    /// `sum wsum * mertens / n`
    pub a_nj: Interval,
    /// `sum mertens / n`
    pub lemma1_sum: Interval,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct PipelineConfig {
    pub sieve: PrimeSieve,
    pub limits: EnumerationLimits,
}

/// Everything one pass produces.
#[derive(Clone, Debug)]
pub struct PipelineRun {
    pub aggregates: Aggregates,
    /// `sum_{q <= 2N} W_{q,J}`, read off the same prime pass.
    pub y_sum: YSum,
    /// Augmented rows in ascending `n`.
    pub rows: Vec<AugmentedRow>,
}

/// Join `rows` (ascending `n`) with the functionals at each `theta(n)`.
/// Also returns the state at `extra` if given.
pub fn augment(
    sieve: &PrimeSieve,
    rows: &[PracticalRow],
    j_order: u32,
    extra: Option<u64>,
) -> Result<(Vec<AugmentedRow>, Option<PrimeFunctionalState>)> {
    if !rows.windows(2).all(|w| w[0].n < w[1].n) {
        return Err(Error::consistency(MODULE, "rows must be strictly ascending in n"));
    }
    // (threshold, index); index == rows.len() stands for `extra`.
    let mut order: Vec<(u64, usize)> = rows.iter().enumerate().map(|(i, r)| (r.theta(), i)).collect();
    if let Some(x) = extra {
        order.push((x, rows.len()));
    }
    order.sort_unstable();
    let max_threshold = order.last().map_or(1, |t| t.0);

    let mut state = PrimeFunctionalState::new(j_order)?;
    let mut snapshots = vec![state; rows.len()];
    let mut extra_state = None;
    let mut primes = sieve.stream(2, max_threshold)?.peekable();
    let mut last_threshold = 0;
    for (threshold, idx) in order {
        if threshold < last_threshold {
            return Err(Error::consistency(MODULE, "theta ordering is not monotone"));
        }
        last_threshold = threshold;
        while let Some(&p) = primes.peek() {
            if p > threshold {
                break;
            }
            state.advance(p)?;
            primes.next();
        }
        if idx == rows.len() {
            extra_state = Some(state);
        } else {
            snapshots[idx] = state;
        }
    }
    let augmented = rows
        .iter()
        .zip(snapshots)
        .map(|(&row, s)| AugmentedRow {
            row,
            mertens_at_theta: s.mertens_prod,
            logsum_at_theta: s.sum_logp_over_pm1,
            wsum_at_theta: s.sum_wqj,
        })
        .collect();
    Ok((augmented, extra_state))
}

/// Fold the four sums in the order given.
pub fn accumulate(rows: &[AugmentedRow], n_max: u64, j_order: u32) -> Result<Aggregates> {
    let mut alpha_n = Interval::ZERO;
    let mut lemma1_sum = Interval::ZERO;
    let mut u_n = Interval::ZERO;
    let mut a_nj = Interval::ZERO;
    for r in rows {
        let n = Interval::from_int(r.row.n);
        let log_n = n.ln()?;
        let weight = r.mertens_at_theta / n;
        alpha_n = alpha_n + (r.logsum_at_theta - log_n) * weight;
        lemma1_sum = lemma1_sum + weight;
        u_n = u_n + (Interval::from_int(r.row.sigma).ln()? - log_n) * weight;
        a_nj = a_nj + r.wsum_at_theta * weight;
    }
    let eps_n = Interval::ONE - lemma1_sum;
    if !(eps_n.lo() > 0.0) {
        return Err(Error::consistency(MODULE, format!("eps_N = {eps_n:?} is not positive")));
    }
    Ok(Aggregates { n_max, j_order, alpha_n, eps_n, u_n, a_nj, lemma1_sum })
}

impl PipelineConfig {
    pub fn run(&self, n_max: u64, j_order: u32) -> Result<PipelineRun> {
        let t0 = Instant::now();
        let rows = enumerate_practical_with(n_max, &self.limits)?;
        log::info!("enumerated {} practical numbers up to {n_max} in {:.2?}", rows.len(), t0.elapsed());
        self.run_on_rows(&rows, n_max, j_order)
    }

    /// Run on rows supplied by the caller (e.g. loaded from a checkpoint).
    pub fn run_on_rows(&self, rows: &[PracticalRow], n_max: u64, j_order: u32) -> Result<PipelineRun> {
        if rows.last().is_some_and(|r| r.n > n_max) {
            return Err(Error::consistency(MODULE, "row beyond N"));
        }
        let t1 = Instant::now();
        let y_at = 2 * n_max;
        let (augmented, y_state) = augment(&self.sieve, rows, j_order, Some(y_at))?;
        log::info!("joined prime functionals at {} thresholds in {:.2?}", augmented.len(), t1.elapsed());
        let t2 = Instant::now();
        let aggregates = accumulate(&augmented, n_max, j_order)?;
        log::info!("accumulated truncation sums in {:.2?}", t2.elapsed());
        let y_state = y_state.expect("extra threshold requested");
        Ok(PipelineRun { aggregates, y_sum: YSum { x: y_at, j_order, value: y_state.sum_wqj }, rows: augmented })
    }
}

/// Aggregates for practical `n <= n_max` under the default configuration.
pub fn run_pipeline(n_max: u64, j_order: u32) -> Result<Aggregates> {
    Ok(PipelineConfig::default().run(n_max, j_order)?.aggregates)
}

/// `sum_{n <= N, n practical} prod_{p <= theta(n)} (1 - 1/p) / n`.
pub fn lemma1_partial(n_max: u64) -> Result<Interval> {
    Ok(run_pipeline(n_max, 2)?.lemma1_sum)
}

/// Truncated check of the prime-power identity at `s = 1` over practical
/// `n <= n_max`: `L = sum_{q^h || n} mertens / n` against `((1 - 1/q) / q^h) R`
/// with `R = sum_{theta(n) >= q} mertens / n`. Returns an upper bound on `|L - cR|`.
pub fn lemma2_check(q: u64, h: u32, n_max: u64) -> Result<f64> {
    let run = PipelineConfig::default().run(n_max, 2)?;
    lemma2_residual(&run.rows, q, h)
}

/// [`lemma2_check`] on rows already joined.
pub fn lemma2_residual(rows: &[AugmentedRow], q: u64, h: u32) -> Result<f64> {
    if q < 2 || h < 1 {
        return Err(Error::domain(MODULE, format!("need prime q >= 2 and h >= 1, got q = {q}, h = {h}")));
    }
    let mut left = Interval::ZERO;
    let mut right = Interval::ZERO;
    for r in rows {
        let weight = r.mertens_at_theta / Interval::from_int(r.row.n);
        if exact_power(r.row.n, q) == h {
            left = left + weight;
        }
        if r.row.theta() >= q {
            right = right + weight;
        }
    }
    let mut q_pow = Interval::ONE;
    for _ in 0..h {
        q_pow = q_pow * Interval::from_int(q);
    }
    let coeff = Interval::ratio(q - 1, q) / q_pow;
    Ok((left - coeff * right).mag())
}

/// Largest `e` with `q^e | n`.
fn exact_power(mut n: u64, q: u64) -> u32 {
    let mut e = 0;
    while n.is_multiple_of(q) {
        n /= q;
        e += 1;
    }
    e
}
