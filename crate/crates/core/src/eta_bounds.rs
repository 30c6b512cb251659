//! Bounds on `E(x) = sup_{y >= x} |eta(y)|`.
//!
//! For `x >= 2^24` the published table of `M_k` (valid for `y >= 2^k`) is
//! used directly. Below that, the supremum over `[x, 2^k0]` is computed by
//! [`eta_sup_bound`] and combined with `M_k0` for the remainder.

use crate::error::{Error, Result};
use crate::interval::Interval;
use crate::primes::{eta_sup_bound, PrimeSieve};

const MODULE: &str = "eta-bounds";

pub const TABLE_MIN_K: u32 = 24;
pub const TABLE_MAX_K: u32 = 38;
pub const DEFAULT_EXTENSION_K0: u32 = 24;

/// `M_k` in units of `10^-8`, i.e. the printed `M_k * 10^5` times 1000.
const STANDARD_ROWS: [(u32, u64); 15] = [
    (24, 36_800),
    (25, 27_650),
    (26, 17_600),
    (27, 13_040),
    (28, 8_173),
    (29, 6_377),
    (30, 5_122),
    (31, 3_143),
    (32, 2_174),
    (33, 1_654),
    (34, 1_101),
    (35, 833),
    (36, 569),
    (37, 438),
    (38, 305),
];

const SCALE: u64 = 100_000_000;

/// Bounds `|eta(x)| <= M_k` for `x >= 2^k`, `k = 24..=38`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MkTable {
    rows: Vec<(u32, u64)>,
}

impl Default for MkTable {
    fn default() -> Self {
        Self::standard()
    }
}

impl MkTable {
    pub fn standard() -> Self {
        MkTable { rows: STANDARD_ROWS.to_vec() }
    }

    /// Build from `(k, M_k * 10^8)` pairs. Requires the fifteen consecutive
    /// `k` and strictly decreasing values.
    pub fn from_scaled(rows: Vec<(u32, u64)>) -> Result<Self> {
        let ks: Vec<u32> = rows.iter().map(|r| r.0).collect();
        if ks != (TABLE_MIN_K..=TABLE_MAX_K).collect::<Vec<_>>() {
            return Err(Error::config(MODULE, "table must list k = 24..=38 in order"));
        }
        if !rows.windows(2).all(|w| w[0].1 > w[1].1) {
            return Err(Error::config(MODULE, "M_k must be strictly decreasing"));
        }
        Ok(MkTable { rows })
    }

    /// Copy with the entry for `k` scaled by `factor` (fault injection).
    pub fn perturbed(&self, k: u32, factor: f64) -> Self {
        let mut rows = self.rows.clone();
        for r in rows.iter_mut().filter(|r| r.0 == k) {
            r.1 = (r.1 as f64 * factor).round() as u64;
        }
        MkTable { rows }
    }

    pub fn rows(&self) -> &[(u32, u64)] {
        &self.rows
    }

    fn scaled(&self, k: u32) -> Option<u64> {
        self.rows.iter().find(|r| r.0 == k).map(|r| r.1)
    }

    /// `M_k` rounded up; the value to use as a bound.
    pub fn upper(&self, k: u32) -> Option<f64> {
        self.scaled(k).map(|m| Interval::ratio(m, SCALE).hi())
    }

    /// `M_k` rounded down; the value to compare computed suprema against.
    pub fn lower(&self, k: u32) -> Option<f64> {
        self.scaled(k).map(|m| Interval::ratio(m, SCALE).lo())
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum EBoundSource {
    /// `M_k` for the largest tabulated `k` with `2^k <= x`.
    Table { k: u32 },
    /// `max(sup_{x <= y <= 2^k0} |eta(y)|, M_k0)`.
    Extension { k0: u32, computed_sup: f64 },
}

/// Certified upper bound on `sup_{y >= x} |eta(y)|`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EBound {
    pub x: u64,
    pub value: f64,
    pub source: EBoundSource,
}

pub fn e_bound(table: &MkTable, sieve: &PrimeSieve, x: u64, extension_k0: u32) -> Result<EBound> {
    if x < 2 {
        return Err(Error::domain(MODULE, format!("E(x) requires x >= 2, got {x}")));
    }
    if x >= 1 << TABLE_MIN_K {
        let k = (63 - x.leading_zeros()).min(TABLE_MAX_K);
        let value = table.upper(k).expect("tabulated k");
        return Ok(EBound { x, value, source: EBoundSource::Table { k } });
    }
    if !(TABLE_MIN_K..=TABLE_MAX_K).contains(&extension_k0) {
        return Err(Error::config(MODULE, format!("extension k0 must lie in 24..=38, got {extension_k0}")));
    }
    let top = 1u64 << extension_k0;
    sieve.check_range(top)?;
    let computed_sup = eta_sup_bound(sieve, x, top)?.bound;
    let value = computed_sup.max(table.upper(extension_k0).expect("tabulated k"));
    Ok(EBound { x, value, source: EBoundSource::Extension { k0: extension_k0, computed_sup } })
}

/// Desk-scale consistency check of one table row: the certified supremum of
/// `|eta|` over `[2^k, span_limit]` must not exceed `M_k`.
pub fn verify_table_prefix(table: &MkTable, sieve: &PrimeSieve, k: u32, span_limit: u64) -> Result<bool> {
    let m_k = table.lower(k).ok_or_else(|| Error::domain(MODULE, format!("k = {k} is not tabulated")))?;
    let sup = eta_sup_bound(sieve, 1 << k, span_limit)?;
    log::debug!("sup |eta| on [2^{k}, {span_limit}] <= {:.6e} (at {:?}), M_{k} = {m_k:.6e}", sup.bound, sup.at);
    Ok(sup.bound <= m_k)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn standard_table_shape() {
        let t = MkTable::standard();
        assert_eq!(t.rows().len(), 15);
        assert!(MkTable::from_scaled(t.rows().to_vec()).is_ok());
        assert!((t.upper(24).unwrap() - 36.80e-5).abs() < 1e-18);
        assert!(t.lower(24).unwrap() <= 36.80e-5 && 36.80e-5 <= t.upper(24).unwrap());
        assert!(t.upper(23).is_none());
    }

    #[test]
    fn table_path() {
        let t = MkTable::standard();
        let s = PrimeSieve::default();
        let e = e_bound(&t, &s, 1 << 32, 24).unwrap();
        assert_eq!(e.source, EBoundSource::Table { k: 32 });
        assert!((e.value - 2.174e-5).abs() < 1e-18);
        assert!((e_bound(&t, &s, 1 << 38, 24).unwrap().value - 0.305e-5).abs() < 1e-18);
        assert_eq!(e_bound(&t, &s, u64::MAX, 24).unwrap().source, EBoundSource::Table { k: 38 });
        assert_eq!(e_bound(&t, &s, (1 << 25) - 1, 24).unwrap().source, EBoundSource::Table { k: 24 });
    }

    #[test]
    fn table_path_nonincreasing() {
        let t = MkTable::standard();
        let s = PrimeSieve::default();
        let vals: Vec<f64> = (24..=38).map(|k| e_bound(&t, &s, 1 << k, 24).unwrap().value).collect();
        assert!(vals.windows(2).all(|w| w[0] > w[1]));
    }

    #[test]
    fn rejects_bad_inputs() {
        let t = MkTable::standard();
        let s = PrimeSieve::default();
        assert!(e_bound(&t, &s, 1, 24).is_err());
        assert!(matches!(e_bound(&t, &s, 1000, 23), Err(Error::Config { .. })));
        let small = PrimeSieve { max_hi: 1 << 20, ..Default::default() };
        assert!(matches!(e_bound(&t, &small, 1000, 24), Err(Error::Config { .. })));
        let mut rows = t.rows().to_vec();
        rows.swap(0, 1);
        assert!(MkTable::from_scaled(rows).is_err());
    }

    #[test]
    fn perturbation_changes_one_row() {
        let t = MkTable::standard().perturbed(24, 0.9);
        assert_eq!(t.rows()[0], (24, 33_120));
        assert_eq!(t.rows()[1..], MkTable::standard().rows()[1..]);
    }
}
