//! Outward-rounded interval arithmetic over `f64`.
//!
//! The four basic operations round each endpoint toward the safe side
//! exactly: the round-to-nearest result is stepped by one ulp only when an
//! error-free transform (two-sum for `+`/`-`, an fma residual for `*`/`/`)
//! shows that it landed on the wrong side of the true value. Near the
//! underflow threshold, where those transforms stop being exact, the result
//! is widened by one ulp unconditionally, which is valid because IEEE-754
//! basic operations are correctly rounded.
//!
//! `ln`, `ln_1p` and `exp` are taken from the platform libm and widened by
//! `2 * widening_factor()` ulps on each side. [`kernel_self_test`] checks that
//! policy against the fixed-point oracle in [`crate::oracle`].
//!
//! The widening factor is thread-local. A factor `k > 1` additionally widens
//! every arithmetic result by `k - 1` ulps per side; it exists so that
//! callers can check that a computation never gets narrower when the kernel
//! becomes more pessimistic.

use std::cell::Cell;
use std::fmt;
use std::iter::Sum;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::sync::OnceLock;

use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::oracle;

const MODULE: &str = "numeric-rigor";

/// Below this magnitude two-sum / fma residuals may underflow.
const TINY: f64 = 1.0e-270;

thread_local! {
    static WIDENING: Cell<u32> = const { Cell::new(1) };
}

/// Current widening factor of this thread (1 by default).
pub fn widening_factor() -> u32 {
    WIDENING.with(|w| w.get())
}

/// Run `f` with the kernel widening factor set to `factor` on this thread.
pub fn with_widening<R>(factor: u32, f: impl FnOnce() -> R) -> R {
    struct Restore(u32);
    impl Drop for Restore {
        fn drop(&mut self) {
            WIDENING.with(|w| w.set(self.0));
        }
    }
    assert!(factor >= 1, "widening factor must be at least 1");
    let _restore = Restore(WIDENING.with(|w| w.replace(factor)));
    f()
}

fn step_down(mut x: f64, n: u32) -> f64 {
    for _ in 0..n {
        x = x.next_down();
    }
    x
}

fn step_up(mut x: f64, n: u32) -> f64 {
    for _ in 0..n {
        x = x.next_up();
    }
    x
}

fn extra() -> u32 {
    widening_factor() - 1
}

#[inline]
fn two_sum_err(a: f64, b: f64, s: f64) -> f64 {
    let bb = s - a;
    (a - (s - bb)) + (b - bb)
}

fn add_down(a: f64, b: f64) -> f64 {
    let s = a + b;
    if !s.is_finite() {
        return if s == f64::INFINITY && a.is_finite() && b.is_finite() { f64::MAX } else { s };
    }
    if two_sum_err(a, b, s) < 0.0 {
        s.next_down()
    } else {
        s
    }
}

fn add_up(a: f64, b: f64) -> f64 {
    -add_down(-a, -b)
}

fn mul_down(a: f64, b: f64) -> f64 {
    if a == 0.0 || b == 0.0 {
        return 0.0;
    }
    let p = a * b;
    if !p.is_finite() {
        return if p == f64::INFINITY && a.is_finite() && b.is_finite() { f64::MAX } else { p };
    }
    if p.abs() < TINY {
        return p.next_down();
    }
    if a.mul_add(b, -p) < 0.0 {
        p.next_down()
    } else {
        p
    }
}

fn mul_up(a: f64, b: f64) -> f64 {
    -mul_down(-a, b)
}

fn div_down(a: f64, b: f64) -> f64 {
    if a == 0.0 {
        return 0.0;
    }
    let q = a / b;
    if !q.is_finite() {
        return if q == f64::INFINITY && a.is_finite() { f64::MAX } else { q };
    }
    if q.abs() < TINY || a.abs() < TINY {
        return q.next_down();
    }
    // a - q*b is exact; the true quotient is q + r/b.
    let r = (-q).mul_add(b, a);
    if r != 0.0 && ((r < 0.0) != (b < 0.0)) {
        q.next_down()
    } else {
        q
    }
}

fn div_up(a: f64, b: f64) -> f64 {
    -div_down(-a, b)
}

/// A closed real interval `[lo, hi]` with `lo <= hi`.
#[derive(Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    lo: f64,
    hi: f64,
}

impl fmt::Debug for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{:.17e}, {:.17e}]", self.lo, self.hi)
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{:.16e}, {:.16e}]", self.lo, self.hi)
    }
}

impl Interval {
    pub const ZERO: Interval = Interval { lo: 0.0, hi: 0.0 };
    pub const ONE: Interval = Interval { lo: 1.0, hi: 1.0 };

    /// Panics if the endpoints are NaN or out of order.
    pub fn new(lo: f64, hi: f64) -> Self {
        Self::try_new(lo, hi).unwrap_or_else(|e| panic!("{e}"))
    }

    pub fn try_new(lo: f64, hi: f64) -> Result<Self> {
        if lo.is_nan() || hi.is_nan() || lo > hi {
            return Err(Error::domain(MODULE, format!("invalid interval endpoints [{lo}, {hi}]")));
        }
        Ok(Self { lo, hi })
    }

    pub fn point(x: f64) -> Self {
        Self::new(x, x)
    }

    /// Enclosure of an integer; exact up to 2^53.
    pub fn from_int(n: u64) -> Self {
        let x = n as f64;
        if x as u128 == n as u128 {
            return Self::point(x);
        }
        if (x as u128) > n as u128 {
            Self { lo: x.next_down(), hi: x }
        } else {
            Self { lo: x, hi: x.next_up() }
        }
    }

    /// Enclosure of `num / den`.
    pub fn ratio(num: u64, den: u64) -> Self {
        Self::from_int(num) / Self::from_int(den)
    }

    /// Enclosure of a decimal literal, widened one ulp beyond the parsed value.
    pub fn from_decimal(lo: &str, hi: &str) -> Result<Self> {
        let parse = |s: &str| s.trim().parse::<f64>().map_err(|e| Error::Parse(format!("{s}: {e}")));
        let (l, h) = (parse(lo)?, parse(hi)?);
        Self::try_new(l.next_down(), h.next_up())
    }

    #[inline]
    pub fn lo(&self) -> f64 {
        self.lo
    }

    #[inline]
    pub fn hi(&self) -> f64 {
        self.hi
    }

    pub fn width(&self) -> f64 {
        add_up(self.hi, -self.lo)
    }

    pub fn mid(&self) -> f64 {
        0.5 * self.lo + 0.5 * self.hi
    }

    /// Upper bound on `|x|` over the interval.
    pub fn mag(&self) -> f64 {
        self.lo.abs().max(self.hi.abs())
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    pub fn contains_interval(&self, other: &Interval) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }

    pub fn contains_zero(&self) -> bool {
        self.contains(0.0)
    }

    pub fn intersect(&self, other: &Interval) -> Option<Interval> {
        let lo = self.lo.max(other.lo);
        let hi = self.hi.min(other.hi);
        (lo <= hi).then_some(Interval { lo, hi })
    }

    pub fn hull(&self, other: &Interval) -> Interval {
        Interval { lo: self.lo.min(other.lo), hi: self.hi.max(other.hi) }
    }

    fn widened(lo: f64, hi: f64, ulps: u32) -> Interval {
        Interval { lo: step_down(lo, ulps), hi: step_up(hi, ulps) }
    }

    /// Interval division; fails when the divisor contains zero.
    pub fn checked_div(self, rhs: Interval) -> Result<Interval> {
        if rhs.contains_zero() {
            return Err(Error::domain(MODULE, format!("division by interval containing zero {rhs:?}")));
        }
        let (a, b) = (self, rhs);
        let cands_lo = [div_down(a.lo, b.lo), div_down(a.lo, b.hi), div_down(a.hi, b.lo), div_down(a.hi, b.hi)];
        let cands_hi = [div_up(a.lo, b.lo), div_up(a.lo, b.hi), div_up(a.hi, b.lo), div_up(a.hi, b.hi)];
        let lo = cands_lo.into_iter().fold(f64::INFINITY, f64::min);
        let hi = cands_hi.into_iter().fold(f64::NEG_INFINITY, f64::max);
        Ok(Self::widened(lo, hi, extra()))
    }

    /// Natural logarithm; the argument must be strictly positive.
    pub fn ln(self) -> Result<Interval> {
        if !(self.lo > 0.0) {
            return Err(Error::domain(MODULE, format!("logarithm of nonpositive interval {self:?}")));
        }
        let k = 2 * widening_factor();
        let lo = if self.lo == 1.0 { 0.0 } else { step_down(self.lo.ln(), k) };
        let hi = if self.hi == 1.0 { 0.0 } else { step_up(self.hi.ln(), k) };
        Ok(Interval { lo, hi })
    }

    /// `ln(1 + x)`; the argument must exceed -1.
    pub fn ln_1p(self) -> Result<Interval> {
        if !(self.lo > -1.0) {
            return Err(Error::domain(MODULE, format!("ln_1p argument not above -1: {self:?}")));
        }
        let k = 2 * widening_factor();
        let lo = if self.lo == 0.0 { 0.0 } else { step_down(self.lo.ln_1p(), k) };
        let hi = if self.hi == 0.0 { 0.0 } else { step_up(self.hi.ln_1p(), k) };
        Ok(Interval { lo, hi })
    }

    pub fn exp(self) -> Interval {
        let k = 2 * widening_factor();
        let lo = if self.lo == 0.0 { 1.0 } else { step_down(self.lo.exp(), k).max(0.0) };
        let hi = if self.hi == 0.0 { 1.0 } else { step_up(self.hi.exp(), k) };
        Interval { lo, hi }
    }

    /// Sum in iteration order; the empty sum is `[0, 0]`.
    pub fn sum<I: IntoIterator<Item = Interval>>(terms: I) -> Interval {
        terms.into_iter().fold(Interval::ZERO, |acc, t| acc + t)
    }
}

impl From<f64> for Interval {
    fn from(x: f64) -> Self {
        Interval::point(x)
    }
}

impl Add for Interval {
    type Output = Interval;

    fn add(self, rhs: Interval) -> Interval {
        Interval::widened(add_down(self.lo, rhs.lo), add_up(self.hi, rhs.hi), extra())
    }
}

impl Sub for Interval {
    type Output = Interval;

    fn sub(self, rhs: Interval) -> Interval {
        self + (-rhs)
    }
}

impl Neg for Interval {
    type Output = Interval;

    fn neg(self) -> Interval {
        Interval { lo: -self.hi, hi: -self.lo }
    }
}

impl Mul for Interval {
    type Output = Interval;

    fn mul(self, rhs: Interval) -> Interval {
        let (a, b) = (self, rhs);
        let lo = [mul_down(a.lo, b.lo), mul_down(a.lo, b.hi), mul_down(a.hi, b.lo), mul_down(a.hi, b.hi)]
            .into_iter()
            .fold(f64::INFINITY, f64::min);
        let hi = [mul_up(a.lo, b.lo), mul_up(a.lo, b.hi), mul_up(a.hi, b.lo), mul_up(a.hi, b.hi)]
            .into_iter()
            .fold(f64::NEG_INFINITY, f64::max);
        Interval::widened(lo, hi, extra())
    }
}

impl Div for Interval {
    type Output = Interval;

    /// Panics when the divisor contains zero; see [`Interval::checked_div`].
    fn div(self, rhs: Interval) -> Interval {
        self.checked_div(rhs).unwrap_or_else(|e| panic!("{e}"))
    }
}

impl Sum for Interval {
    fn sum<I: Iterator<Item = Interval>>(iter: I) -> Interval {
        Interval::sum(iter)
    }
}

/// Euler's constant as a 20-significant-digit bracket.
const GAMMA_LO: &str = "0.57721566490153286060";
const GAMMA_HI: &str = "0.57721566490153286061";

/// Constants derived from Euler's constant by interval operations.
#[derive(Clone, Copy, Debug)]
pub struct MathConstants {
    pub gamma: Interval,
    pub exp_neg_gamma: Interval,
    pub one_minus_exp_neg_gamma: Interval,
}

impl MathConstants {
    /// Evaluated under the current widening factor.
    pub fn new() -> Self {
        let gamma = Interval::from_decimal(GAMMA_LO, GAMMA_HI).expect("valid literal");
        let exp_neg_gamma = (-gamma).exp();
        MathConstants { gamma, exp_neg_gamma, one_minus_exp_neg_gamma: Interval::ONE - exp_neg_gamma }
    }
}

impl Default for MathConstants {
    fn default() -> Self {
        Self::new()
    }
}

/// Compare the widened transcendentals against the fixed-point oracle on
/// `samples` random arguments per function. Returns the first counterexample.
pub fn kernel_self_test(samples: usize, seed: u64) -> Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let fail = |what: &str, x: f64, iv: Interval| {
        Err(Error::consistency(MODULE, format!("{what}({x:e}) = {iv:?} misses the oracle value")))
    };
    for _ in 0..samples {
        let x = 2f64.powf(rng.random_range(-30.0..40.0));
        let iv = Interval::point(x).ln()?;
        if !oracle::encloses(&iv, &oracle::ln(x)) {
            return fail("ln", x, iv);
        }

        let y =
            if rng.random_bool(0.5) { rng.random_range(-0.5..1.0) } else { 2f64.powf(rng.random_range(-40.0..-1.0)) };
        let iv = Interval::point(y).ln_1p()?;
        if !oracle::encloses(&iv, &oracle::ln_1p(y)) {
            return fail("ln_1p", y, iv);
        }

        let z: f64 = rng.random_range(-40.0..40.0);
        let iv = Interval::point(z).exp();
        if !oracle::encloses(&iv, &oracle::exp(z)) {
            return fail("exp", z, iv);
        }
    }
    Ok(())
}

/// Runs [`kernel_self_test`] with 10^4 samples once per process.
pub fn ensure_kernel_verified() -> Result<()> {
    static VERIFIED: OnceLock<std::result::Result<(), String>> = OnceLock::new();
    VERIFIED
        .get_or_init(|| kernel_self_test(10_000, 0x5eed).map_err(|e| e.to_string()))
        .clone()
        .map_err(|msg| Error::consistency(MODULE, msg))
}
