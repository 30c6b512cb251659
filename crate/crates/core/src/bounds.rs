//! Final assembly of the certified interval for `c`.
//!
//! With `alpha = (1 - e^{-gamma}) c`,
//!
//! ```text
//! alpha >= alpha_N + A_{N,J} - U_N - 1/(J 2^{2J+3}) + eps_N (Y_{2N,J} - gamma - E(2N))
//! alpha <= alpha_N + A_{N,J} - U_N + eps_N (Y_{2N,J} + 1/N - gamma + E(2N))
//! ```
//!
//! and both bounds are divided by `1 - e^{-gamma}` with outward rounding.

use std::fmt::Write as _;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use serde_json::Number;

use crate::aggregation::Aggregates;
use crate::divisor_series::{global_remainder_bound, wqj_value};
use crate::error::{Error, Result};
use crate::eta_bounds::EBound;
use crate::interval::{Interval, MathConstants};
use crate::primes::PrimeSieve;

const MODULE: &str = "constant-bounds";

/// Bundled JSON schema for [`BoundsReport::to_json`].
pub const REPORT_SCHEMA: &str = include_str!("../schema/bounds_report.schema.json");

pub const CSV_HEADER: &str = "N,J,alpha_N_lo,alpha_N_hi,eps_N_lo,eps_N_hi,U_N_lo,U_N_hi,A_NJ_lo,A_NJ_hi,\
Y_2NJ_lo,Y_2NJ_hi,E_2N,alpha_lo,alpha_hi,c_lo,c_hi,predicted_gap";

/// Midpoint of the published interval, used when no report midpoint exists.
const C_FALLBACK: f64 = 1.336;

/// `Y_{x,J} = sum_{q <= x} W_{q,J}`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct YSum {
    pub x: u64,
    pub j_order: u32,
    pub value: Interval,
}

/// Sum of `W_{q,J}` over primes `q <= x`, ascending.
pub fn y_sum(sieve: &PrimeSieve, x: u64, j_order: u32) -> Result<YSum> {
    if x < 2 {
        return Err(Error::domain(MODULE, format!("Y requires x >= 2, got {x}")));
    }
    let mut value = Interval::ZERO;
    for q in sieve.stream(2, x)? {
        value = value + wqj_value(q, j_order)?;
    }
    Ok(YSum { x, j_order, value })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, clap::ValueEnum)]
pub enum OutputFormat {
    #[default]
    Json,
    Csv,
    Text,
}

impl FromStr for OutputFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "json" => Ok(OutputFormat::Json),
            "csv" => Ok(OutputFormat::Csv),
            "text" => Ok(OutputFormat::Text),
            _ => Err(Error::config("cli", format!("unknown output format {s:?}"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BoundsReport {
    pub n_max: u64,
    pub j_order: u32,
    pub alpha_n: Interval,
    pub eps_n: Interval,
    pub u_n: Interval,
    pub a_nj: Interval,
    pub y_2nj: Interval,
    pub e_2n: f64,
    pub alpha_lo: f64,
    pub alpha_hi: f64,
    pub c_lo: f64,
    pub c_hi: f64,
    /// `2 c e^{-gamma} E(2N) / ((1 - e^{-gamma}) log N)`; `None` when `N = 1`.
    pub predicted_gap: Option<f64>,
}

pub fn assemble(agg: &Aggregates, y: &YSum, e: &EBound) -> Result<BoundsReport> {
    let n = agg.n_max;
    let two_n = n.checked_mul(2).ok_or_else(|| Error::config(MODULE, "2N overflows"))?;
    if y.x != two_n || e.x != two_n {
        return Err(Error::consistency(
            MODULE,
            format!("inputs disagree on 2N: aggregates {two_n}, Y at {}, E at {}", y.x, e.x),
        ));
    }
    if y.j_order != agg.j_order {
        return Err(Error::consistency(
            MODULE,
            format!("inputs disagree on J: aggregates {}, Y {}", agg.j_order, y.j_order),
        ));
    }
    let j = agg.j_order;
    if (j as f64) * 2f64.powi(2 * j as i32 + 3) < n as f64 {
        log::warn!("J 2^(2J+3) < N for J = {j}, N = {n}: the remainder term dominates the gap");
    }

    let k = MathConstants::new();
    let remainder = Interval::point(global_remainder_bound(j)?);
    let e2n = Interval::point(e.value);
    let core = agg.alpha_n + agg.a_nj - agg.u_n;
    let lower = core - remainder + agg.eps_n * (y.value - k.gamma - e2n);
    let upper = core + agg.eps_n * (y.value + Interval::ratio(1, n) - k.gamma + e2n);
    let (alpha_lo, alpha_hi) = (lower.lo(), upper.hi());
    if !(alpha_lo < alpha_hi) {
        return Err(Error::consistency(MODULE, format!("inverted alpha bounds [{alpha_lo:e}, {alpha_hi:e}]")));
    }
    let c_lo = (Interval::point(alpha_lo) / k.one_minus_exp_neg_gamma).lo();
    let c_hi = (Interval::point(alpha_hi) / k.one_minus_exp_neg_gamma).hi();
    if !(c_lo < c_hi) {
        return Err(Error::consistency(MODULE, format!("inverted c bounds [{c_lo:e}, {c_hi:e}]")));
    }
    let predicted_gap = (n >= 2).then(|| {
        let c = if c_lo.is_finite() && c_hi.is_finite() { 0.5 * (c_lo + c_hi) } else { C_FALLBACK };
        2.0 * c * k.exp_neg_gamma.mid() * e.value / (k.one_minus_exp_neg_gamma.mid() * (n as f64).ln())
    });
    Ok(BoundsReport {
        n_max: n,
        j_order: j,
        alpha_n: agg.alpha_n,
        eps_n: agg.eps_n,
        u_n: agg.u_n,
        a_nj: agg.a_nj,
        y_2nj: y.value,
        e_2n: e.value,
        alpha_lo,
        alpha_hi,
        c_lo,
        c_hi,
        predicted_gap,
    })
}

/// Seventeen significant digits; parses back to the same `f64`.
fn fmt17(x: f64) -> String {
    format!("{x:.16e}")
}

fn num(x: f64) -> Result<Number> {
    if !x.is_finite() {
        return Err(Error::consistency(MODULE, format!("non-finite report field {x}")));
    }
    Number::from_str(&fmt17(x)).map_err(|e| Error::Parse(e.to_string()))
}

fn to_f64(n: &Number) -> Result<f64> {
    n.to_string().parse().map_err(|_| Error::Parse(format!("bad number {n}")))
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct IntervalDoc {
    lo: Number,
    hi: Number,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ReportDoc {
    #[serde(rename = "N")]
    n: u64,
    #[serde(rename = "J")]
    j: u32,
    #[serde(rename = "alpha_N")]
    alpha_n: IntervalDoc,
    #[serde(rename = "eps_N")]
    eps_n: IntervalDoc,
    #[serde(rename = "U_N")]
    u_n: IntervalDoc,
    #[serde(rename = "A_NJ")]
    a_nj: IntervalDoc,
    #[serde(rename = "Y_2NJ")]
    y_2nj: IntervalDoc,
    #[serde(rename = "E_2N")]
    e_2n: Number,
    alpha_lo: Number,
    alpha_hi: Number,
    c_lo: Number,
    c_hi: Number,
    predicted_gap: Option<Number>,
}

fn iv_doc(x: &Interval) -> Result<IntervalDoc> {
    Ok(IntervalDoc { lo: num(x.lo())?, hi: num(x.hi())? })
}

fn iv_parse(d: &IntervalDoc) -> Result<Interval> {
    Interval::try_new(to_f64(&d.lo)?, to_f64(&d.hi)?)
}

impl BoundsReport {
    pub fn width(&self) -> f64 {
        self.c_hi - self.c_lo
    }

    pub fn serialize(&self, format: OutputFormat) -> Result<String> {
        match format {
            OutputFormat::Json => self.to_json(),
            OutputFormat::Csv => self.to_csv(),
            OutputFormat::Text => Ok(self.to_text()),
        }
    }

    pub fn to_json(&self) -> Result<String> {
        let doc = ReportDoc {
            n: self.n_max,
            j: self.j_order,
            alpha_n: iv_doc(&self.alpha_n)?,
            eps_n: iv_doc(&self.eps_n)?,
            u_n: iv_doc(&self.u_n)?,
            a_nj: iv_doc(&self.a_nj)?,
            y_2nj: iv_doc(&self.y_2nj)?,
            e_2n: num(self.e_2n)?,
            alpha_lo: num(self.alpha_lo)?,
            alpha_hi: num(self.alpha_hi)?,
            c_lo: num(self.c_lo)?,
            c_hi: num(self.c_hi)?,
            predicted_gap: self.predicted_gap.map(num).transpose()?,
        };
        let mut s = serde_json::to_string_pretty(&doc).map_err(|e| Error::Parse(e.to_string()))?;
        s.push('\n');
        Ok(s)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let d: ReportDoc = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        Ok(BoundsReport {
            n_max: d.n,
            j_order: d.j,
            alpha_n: iv_parse(&d.alpha_n)?,
            eps_n: iv_parse(&d.eps_n)?,
            u_n: iv_parse(&d.u_n)?,
            a_nj: iv_parse(&d.a_nj)?,
            y_2nj: iv_parse(&d.y_2nj)?,
            e_2n: to_f64(&d.e_2n)?,
            alpha_lo: to_f64(&d.alpha_lo)?,
            alpha_hi: to_f64(&d.alpha_hi)?,
            c_lo: to_f64(&d.c_lo)?,
            c_hi: to_f64(&d.c_hi)?,
            predicted_gap: d.predicted_gap.as_ref().map(to_f64).transpose()?,
        })
    }

    pub fn to_csv(&self) -> Result<String> {
        let mut fields = vec![self.n_max.to_string(), self.j_order.to_string()];
        for iv in [self.alpha_n, self.eps_n, self.u_n, self.a_nj, self.y_2nj] {
            fields.push(fmt17(iv.lo()));
            fields.push(fmt17(iv.hi()));
        }
        for x in [self.e_2n, self.alpha_lo, self.alpha_hi, self.c_lo, self.c_hi] {
            fields.push(fmt17(x));
        }
        fields.push(self.predicted_gap.map(fmt17).unwrap_or_default());
        Ok(format!("{CSV_HEADER}\n{}\n", fields.join(",")))
    }

    pub fn from_csv(s: &str) -> Result<Self> {
        let mut lines = s.lines();
        if lines.next() != Some(CSV_HEADER) {
            return Err(Error::Parse("unexpected CSV header".into()));
        }
        let row = lines.next().ok_or_else(|| Error::Parse("missing CSV row".into()))?;
        let f: Vec<&str> = row.split(',').collect();
        if f.len() != 18 {
            return Err(Error::Parse(format!("expected 18 CSV fields, got {}", f.len())));
        }
        let real = |i: usize| f[i].parse::<f64>().map_err(|_| Error::Parse(format!("bad field {:?}", f[i])));
        let iv = |i: usize| Interval::try_new(real(i)?, real(i + 1)?);
        let int = |i: usize| f[i].parse::<u64>().map_err(|_| Error::Parse(format!("bad field {:?}", f[i])));
        Ok(BoundsReport {
            n_max: int(0)?,
            j_order: int(1)? as u32,
            alpha_n: iv(2)?,
            eps_n: iv(4)?,
            u_n: iv(6)?,
            a_nj: iv(8)?,
            y_2nj: iv(10)?,
            e_2n: real(12)?,
            alpha_lo: real(13)?,
            alpha_hi: real(14)?,
            c_lo: real(15)?,
            c_hi: real(16)?,
            predicted_gap: if f[17].is_empty() { None } else { Some(real(17)?) },
        })
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let iv = |x: &Interval| format!("[{}, {}]", fmt17(x.lo()), fmt17(x.hi()));
        let _ = writeln!(s, "N = {}, J = {}", self.n_max, self.j_order);
        let _ = writeln!(s, "alpha_N = {}", iv(&self.alpha_n));
        let _ = writeln!(s, "eps_N   = {}", iv(&self.eps_n));
        let _ = writeln!(s, "U_N     = {}", iv(&self.u_n));
        let _ = writeln!(s, "A_NJ    = {}", iv(&self.a_nj));
        let _ = writeln!(s, "Y_2NJ   = {}", iv(&self.y_2nj));
        let _ = writeln!(s, "E(2N)  <= {}", fmt17(self.e_2n));
        let _ = writeln!(s, "alpha ∈ [{}, {}]", fmt17(self.alpha_lo), fmt17(self.alpha_hi));
        let _ = writeln!(s, "c ∈ [{}, {}]", fmt17(self.c_lo), fmt17(self.c_hi));
        let _ = write!(s, "width = {}", fmt17(self.width()));
        if let Some(g) = self.predicted_gap {
            let _ = write!(s, ", predicted gap = {}", fmt17(g));
        }
        s.push('\n');
        s
    }
}
