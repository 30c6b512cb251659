//! Per-prime weights `W_q` and their `J`-term truncations `W_{q,J}`.
//!
//! `W_q = sum_{h >= 1} (1 - 1/q) q^{-h} log((1 - q^{-(h+1)}) / (1 - 1/q))`.
//! Expanding `log(1 - q^{-(h+1)})` and summing over `h` first gives
//!
//! ```text
//! W_q = -log(1 - 1/q)/q - sum_{j >= 1} (q - 1) / (j q^{j+1} (q^{j+1} - 1))
//! ```
//!
//! and `W_{q,J}` keeps the first `J` terms of the inner sum, so it exceeds
//! `W_q` by at most `1 / (J q^{2J+2} (q + 1))`.
//!
//! [`wq_direct`] sums the defining series for `h <= h_max` and adds the
//! tail interval `[0, log(q/(q-1)) (1 - 1/q) q^{-h_max} q/(q-1)]`. Each tail
//! term is below `(1 - 1/q) q^{-h} log(1/(1 - 1/q))` because the log factor
//! never exceeds `log(1/(1 - 1/q))`; the bound is that geometric series
//! overestimated by a factor `q`. It is a test oracle for [`wqj`].

use crate::error::{Error, Result};
use crate::interval::Interval;

const MODULE: &str = "divisor-series";

/// `W_{q,J}` with the bound on how far it may exceed `W_q`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct WqValue {
    pub q: u64,
    pub j_order: u32,
    /// Encloses `W_{q,J}`.
    pub value: Interval,
    /// Upper bound on `R_{q,J} = W_{q,J} - W_q`.
    pub remainder_bound: f64,
}

fn check_order(j: u32) -> Result<()> {
    if j < 2 {
        return Err(Error::domain(MODULE, format!("truncation order J must be >= 2, got {j}")));
    }
    Ok(())
}

/// `log(q / (q - 1)) = -log(1 - 1/q)`.
fn log_q_over_qm1(q: u64) -> Interval {
    Interval::ratio(1, q - 1).ln_1p().expect("positive argument")
}

/// Closed-form `W_{q,J}`.
pub fn wqj(q: u64, j_order: u32) -> Result<WqValue> {
    let value = wqj_value(q, j_order)?;
    let qi = Interval::from_int(q);
    let mut q_2j2 = Interval::ONE;
    for _ in 0..(2 * j_order + 2) {
        q_2j2 = q_2j2 * qi;
    }
    let rem = Interval::ONE / (Interval::from_int(j_order as u64) * q_2j2 * Interval::from_int(q + 1));
    Ok(WqValue { q, j_order, value, remainder_bound: rem.hi() })
}

/// Enclosure of `W_{q,J}` alone, without the remainder bound.
pub fn wqj_value(q: u64, j_order: u32) -> Result<Interval> {
    check_order(j_order)?;
    if q < 2 {
        return Err(Error::domain(MODULE, format!("q must be a prime >= 2, got {q}")));
    }
    let qi = Interval::from_int(q);
    let qm1 = Interval::from_int(q - 1);
    let mut value = log_q_over_qm1(q) / qi;
    let mut qpow = qi;
    for j in 1..=j_order {
        qpow = qpow * qi;
        let den = Interval::from_int(j as u64) * qpow * (qpow - Interval::ONE);
        value = value - qm1 / den;
    }
    Ok(value)
}

/// Partial sum of the defining series for `h <= h_max` plus a tail interval.
pub fn wq_direct(q: u64, h_max: u32) -> Result<Interval> {
    if h_max < 1 {
        return Err(Error::domain(MODULE, "h_max must be >= 1"));
    }
    if q < 2 {
        return Err(Error::domain(MODULE, format!("q must be a prime >= 2, got {q}")));
    }
    let inv_q = Interval::ratio(1, q);
    let one_minus = Interval::ratio(q - 1, q);
    let log_inv = log_q_over_qm1(q);
    let mut q_neg_h = Interval::ONE;
    let mut sum = Interval::ZERO;
    for _ in 1..=h_max {
        q_neg_h = q_neg_h * inv_q;
        let q_neg_h1 = q_neg_h * inv_q;
        // log(1 - q^{-(h+1)}) + log(q/(q-1))
        let log_ratio = (-q_neg_h1).ln_1p()? + log_inv;
        sum = sum + one_minus * q_neg_h * log_ratio;
    }
    let tail = log_inv * one_minus * q_neg_h * (Interval::from_int(q) / Interval::from_int(q - 1));
    Ok(sum + Interval::new(0.0, tail.hi().max(0.0)))
}

/// Upper bound `1 / (J 2^{2J+3})` on `sum_q R_{q,J}`.
pub fn global_remainder_bound(j_order: u32) -> Result<f64> {
    check_order(j_order)?;
    let pow = Interval::point(2f64.powi(2 * j_order as i32 + 3));
    Ok((Interval::ONE / (Interval::from_int(j_order as u64) * pow)).hi())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::primes::small_primes;

    #[test]
    fn direct_series_at_two() {
        let w = wq_direct(2, 200).unwrap();
        // h = 1 term alone: (1/4) log(3/2)
        let first = 0.25 * 1.5f64.ln();
        assert!((first - 0.101_366).abs() < 1e-6);
        assert!(w.lo() > first);
        assert!(w.contains(0.252_608_121_599_091_8), "{w:?}");
        // one outward ulp per added term
        assert!(w.width() < 1e-13);
    }

    #[test]
    fn direct_series_below_reciprocal_bound() {
        for q in [2u64, 3, 5, 7, 11, 101] {
            let w = wq_direct(q, 200).unwrap();
            assert!(w.lo() > 0.0);
            assert!(w.hi() < 1.0 / (q as f64 * (q - 1) as f64), "q = {q}");
            assert!(wq_direct(q, 1).unwrap().hi() >= wq_direct(q, 50).unwrap().lo());
        }
    }

    #[test]
    fn closed_form_at_three_two_terms() {
        let w = wqj(3, 2).unwrap();
        let hand = -(2.0f64 / 3.0).ln() / 3.0 - 2.0 / (1.0 * 9.0 * 8.0) - 2.0 / (2.0 * 27.0 * 26.0);
        assert!((w.value.mid() - hand).abs() < 1e-15);
    }

    #[test]
    fn closed_form_against_direct_at_two() {
        let w = wqj(2, 13).unwrap();
        let d = wq_direct(2, 200).unwrap();
        let diff = w.value - d;
        let bound = 1.0 / (13.0 * 2f64.powi(28) * 3.0);
        assert!(diff.hi() >= 0.0 && diff.lo() <= bound, "{diff:?}");
        assert!((w.remainder_bound - bound).abs() <= bound * 1e-15);
    }

    #[test]
    fn remainder_bound_monotone() {
        let r = |q, j| wqj(q, j).unwrap().remainder_bound;
        assert!(r(3, 5) < r(2, 5));
        assert!(r(2, 6) < r(2, 5));
        assert!(r(101, 13) < r(11, 13));
    }

    #[test]
    fn global_bound_values() {
        assert_eq!(global_remainder_bound(2).unwrap(), 1.0 / 256.0);
        let g = global_remainder_bound(13).unwrap();
        assert!((g - 1.43e-10).abs() < 0.01e-10);
        assert!(global_remainder_bound(1).is_err());
        assert!(wqj(5, 1).is_err());
    }

    #[test]
    fn remainder_sum_below_global_bound() {
        let total: f64 = small_primes(10_000).iter().map(|&q| wqj(q, 5).unwrap().remainder_bound).sum();
        assert!(total <= global_remainder_bound(5).unwrap());
    }

    #[test]
    fn huge_prime_stays_finite_and_positive() {
        let w = wqj(1_000_000_007, 13).unwrap();
        assert!(w.value.lo() > 0.0 && w.value.hi().is_finite());
        assert!(w.remainder_bound >= 0.0);
    }
}
