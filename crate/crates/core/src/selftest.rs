//! Built-in checks run by `selftest fast|full` and by `bounds --verify`.

use std::fmt;
use std::time::{Duration, Instant};

use crate::aggregation::{lemma2_residual, PipelineConfig};
use crate::bounds::BoundsReport;
use crate::divisor_series::{wq_direct, wqj};
use crate::error::{Error, Result};
use crate::eta_bounds::{verify_table_prefix, MkTable};
use crate::interval::{kernel_self_test, with_widening, Interval, MathConstants};
use crate::practical::{is_practical, is_practical_oracle};
use crate::primes::{eta, small_primes, PrimeSieve};
use crate::run::{Certifier, RunConfig};

/// The published enclosure `1.33607322 < c < 1.33607654`.
pub const PUBLISHED_C: (f64, f64) = (1.336_073_22, 1.336_076_54);

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Level {
    Fast,
    Full,
}

#[derive(Clone, Debug)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub elapsed: Duration,
}

#[derive(Clone, Debug)]
pub struct SelftestReport {
    pub level: Level,
    pub checks: Vec<Check>,
}

impl SelftestReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn into_result(self) -> Result<()> {
        if self.passed() {
            return Ok(());
        }
        let failed: Vec<String> =
            self.checks.iter().filter(|c| !c.passed).map(|c| format!("{}: {}", c.name, c.detail)).collect();
        Err(Error::Check(failed.join("; ")))
    }
}

impl fmt::Display for SelftestReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            let tag = if c.passed { "PASS" } else { "FAIL" };
            writeln!(f, "{tag} {:<24} {:>9.2?}  {}", c.name, c.elapsed, c.detail)?;
        }
        let n = self.checks.iter().filter(|c| c.passed).count();
        write!(f, "{n}/{} checks passed", self.checks.len())
    }
}

fn run_check(name: &'static str, f: impl FnOnce() -> Result<(bool, String)>) -> Check {
    let t = Instant::now();
    let (passed, detail) = f().unwrap_or_else(|e| (false, format!("error: {e}")));
    let check = Check { name, passed, detail, elapsed: t.elapsed() };
    log::info!("{} {name} ({:.2?})", if passed { "PASS" } else { "FAIL" }, check.elapsed);
    check
}

pub fn selftest(level: Level) -> SelftestReport {
    selftest_with(level, &MkTable::standard())
}

pub fn selftest_with(level: Level, table: &MkTable) -> SelftestReport {
    let mut checks = vec![
        run_check("interval-kernel", || kernel_self_test(10_000, 0x5eed).map(|_| (true, "10000 samples".into()))),
        run_check("practical-oracle-5000", || oracle_equivalence(5000)),
        run_check("w-sandwich-q<=100", || {
            let qs = small_primes(100);
            w_sandwich(&qs, &[2, 5, 13])
        }),
        run_check("eta-10", eta_ten),
    ];
    if level == Level::Full {
        checks.extend(full_checks(table));
    }
    SelftestReport { level, checks }
}

/// Structural test against the subset-sum definition for `n <= limit`.
pub fn oracle_equivalence(limit: u64) -> Result<(bool, String)> {
    for n in 1..=limit {
        if is_practical(n) != is_practical_oracle(n)? {
            return Ok((false, format!("mismatch at n = {n}")));
        }
    }
    Ok((true, format!("n <= {limit} agree")))
}

/// `0 <= W_{q,J} - W_q <= 1/(J q^{2J+2} (q+1))` and `W_q < 1/(q(q-1))`,
/// with `W_q` from the direct series.
pub fn w_sandwich(qs: &[u64], js: &[u32]) -> Result<(bool, String)> {
    for &q in qs {
        let direct = wq_direct(q, 200)?;
        let cap = (Interval::ONE / Interval::from_int(q * (q - 1))).lo();
        if !(direct.hi() < cap) {
            return Ok((false, format!("W_{q} <= {:e} not below 1/(q(q-1))", direct.hi())));
        }
        for &j in js {
            let w = wqj(q, j)?;
            let d = w.value - direct;
            if !(d.hi() >= 0.0 && d.lo() <= w.remainder_bound) {
                return Ok((false, format!("q = {q}, J = {j}: W_qJ - W_q in {d:?}, bound {:e}", w.remainder_bound)));
            }
        }
    }
    Ok((true, format!("{} primes x {} orders", qs.len(), js.len())))
}

fn eta_ten() -> Result<(bool, String)> {
    let e = eta(&PrimeSieve::default(), 10)?;
    let ok = (e.mid() - 0.243_760).abs() <= 1e-5 && e.width() < 1e-12;
    Ok((ok, format!("eta(10) in {e}")))
}

fn intersects(r: &BoundsReport, (lo, hi): (f64, f64)) -> bool {
    r.c_lo < hi && r.c_hi > lo
}

fn full_checks(table: &MkTable) -> Vec<Check> {
    let engine = Certifier { table: table.clone(), ..Default::default() };
    let mut checks = vec![run_check("c1-oracle-20000", || oracle_equivalence(20_000))];

    let mut r20: Option<BoundsReport> = None;
    checks.push(run_check("c2-published-overlap", || {
        let a = engine.report(1 << 20, 13, 24)?;
        let b = engine.report(1 << 22, 13, 24)?;
        let ok = intersects(&a, PUBLISHED_C) && intersects(&b, PUBLISHED_C) && b.width() < a.width();
        let detail = format!("N=2^20: [{:.9}, {:.9}]; N=2^22: [{:.9}, {:.9}]", a.c_lo, a.c_hi, b.c_lo, b.c_hi);
        r20 = Some(a);
        Ok((ok, detail))
    }));
    let r20 = r20.ok_or(());

    checks.push(run_check("c3-gap-prediction", || {
        let r = r20.map_err(|_| Error::Check("no N=2^20 report".into()))?;
        let ratio = r.width() / r.predicted_gap.unwrap_or(f64::NAN);
        Ok(((0.3..=3.0).contains(&ratio), format!("width / predicted = {ratio:.4}")))
    }));
    checks.push(run_check("c4-eps-decay", || {
        let r = r20.map_err(|_| Error::Check("no N=2^20 report".into()))?;
        let target = 1.336 * MathConstants::new().exp_neg_gamma.mid();
        let ratio = r.eps_n.mid() * ((1u64 << 20) as f64).ln() / target;
        Ok(((0.8..=1.2).contains(&ratio), format!("eps_N log N / (1.336 e^-gamma) = {ratio:.4}")))
    }));
    checks.push(run_check("c5-w-sandwich", || w_sandwich(&[2, 3, 5, 7, 11, 101], &[2, 5, 13])));
    checks.push(run_check("c6-prime-power-identity", || {
        let run = PipelineConfig::default().run(100_000, 2)?;
        let eps = run.aggregates.eps_n.hi();
        for (q, h) in [(2u64, 1u32), (2, 2), (3, 1), (5, 1)] {
            let res = lemma2_residual(&run.rows, q, h)?;
            let bound = eps * (1.0 + (1.0 - 1.0 / q as f64) / (q as f64).powi(h as i32));
            if res > bound {
                return Ok((false, format!("q = {q}, h = {h}: residual {res:e} > {bound:e}")));
            }
        }
        Ok((true, format!("eps_N = {eps:.6e}")))
    }));
    checks.push(run_check("c7-eta-spot-values", || {
        let s = PrimeSieve::default();
        let gamma = MathConstants::new().gamma;
        let e2 = eta(&s, 2)?;
        let e24 = eta(&s, 1 << 24)?;
        let ok = e2.contains_interval(&gamma) && eta_ten()?.0 && e24.mag() <= 36.80e-5;
        Ok((ok, format!("eta(2) = {e2}, |eta(2^24)| <= {:.6e}", e24.mag())))
    }));
    checks.push(run_check("c8-table-prefix", || {
        let s = PrimeSieve::default();
        for k in [24, 25] {
            if !verify_table_prefix(table, &s, k, 1 << 26)? {
                return Ok((false, format!("sup |eta| on [2^{k}, 2^26] exceeds M_{k}")));
            }
        }
        Ok((true, "k = 24, 25 up to 2^26".into()))
    }));
    checks.push(run_check("c9-rigor-regression", || {
        let base = r20.map_err(|_| Error::Check("no N=2^20 report".into()))?;
        let wide = with_widening(2, || engine.report(1 << 20, 13, 24))?;
        if !(wide.c_lo <= base.c_lo && wide.c_hi >= base.c_hi) {
            return Ok((false, format!("widened run narrowed: [{:e}, {:e}]", wide.c_lo, wide.c_hi)));
        }
        let mut prev = Interval::ZERO;
        for n in [100u64, 1000, 10_000, 100_000, 1_000_000] {
            let l = PipelineConfig::default().run(n, 2)?.aggregates.lemma1_sum;
            if !(l.hi() < 1.0 && l.lo() >= prev.lo()) {
                return Ok((false, format!("partial sum at N = {n} is {l}")));
            }
            prev = l;
        }
        Ok((true, format!("widened width {:.3e} >= {:.3e}", wide.width(), base.width())))
    }));
    checks.push(run_check("c10-determinism", || {
        let mut docs = Vec::new();
        for threads in [1, 4] {
            let mut cfg = RunConfig::new(1 << 20);
            cfg.threads = threads;
            docs.push(crate::run::cmd_bounds(&cfg)?);
        }
        Ok((docs[0] == docs[1], "1 vs 4 threads".into()))
    }));
    checks
}
