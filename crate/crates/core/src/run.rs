//! End-to-end commands behind the binary.

use std::path::{Path, PathBuf};
use std::time::Instant;

use crate::aggregation::{PipelineConfig, PipelineRun};
use crate::bounds::{assemble, BoundsReport, OutputFormat};
use crate::checkpoint::{self, DumpFormat};
use crate::error::{Error, Result};
use crate::eta_bounds::{e_bound, MkTable, DEFAULT_EXTENSION_K0, TABLE_MAX_K, TABLE_MIN_K};
use crate::interval::ensure_kernel_verified;
use crate::practical::PracticalRow;
use crate::selftest::{selftest_with, Level};

const MODULE: &str = "cli";

pub const DEFAULT_J: u32 = 13;
pub const DEFAULT_MEM_BUDGET: u64 = 4 << 30;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, clap::ValueEnum)]
pub enum VerifyLevel {
    #[default]
    None,
    Fast,
    Full,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub n_max: u64,
    pub j_order: u32,
    pub extension_k0: u32,
    pub mem_budget_bytes: u64,
    pub output_format: OutputFormat,
    pub checkpoint_dir: Option<PathBuf>,
    pub verify_level: VerifyLevel,
    /// Worker threads; 0 lets rayon decide.
    pub threads: usize,
}

impl RunConfig {
    pub fn new(n_max: u64) -> Self {
        RunConfig {
            n_max,
            j_order: DEFAULT_J,
            extension_k0: DEFAULT_EXTENSION_K0,
            mem_budget_bytes: DEFAULT_MEM_BUDGET,
            output_format: OutputFormat::Json,
            checkpoint_dir: None,
            verify_level: VerifyLevel::None,
            threads: 0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_max < 1 {
            return Err(Error::config(MODULE, "--n-max must be at least 1"));
        }
        if self.j_order < 2 {
            return Err(Error::config(MODULE, format!("--j must be at least 2, got {}", self.j_order)));
        }
        if !(TABLE_MIN_K..=TABLE_MAX_K).contains(&self.extension_k0) {
            return Err(Error::config(
                MODULE,
                format!("--k0 must lie in {TABLE_MIN_K}..={TABLE_MAX_K}, got {}", self.extension_k0),
            ));
        }
        let limits = PipelineConfig::default().limits;
        if self.n_max > limits.max_n {
            return Err(Error::config(MODULE, format!("--n-max {} exceeds the limit {}", self.n_max, limits.max_n)));
        }
        let need = self.estimated_memory();
        if need > self.mem_budget_bytes {
            return Err(Error::config(
                MODULE,
                format!("estimated memory {need} bytes exceeds --mem-budget {}", self.mem_budget_bytes),
            ));
        }
        Ok(())
    }

    fn worker_count(&self) -> usize {
        if self.threads > 0 {
            self.threads
        } else {
            std::thread::available_parallelism().map_or(1, |n| n.get())
        }
    }

    /// Upper estimate of peak memory: the row tables plus in-flight sieve
    /// segments per worker plus a fixed baseline.
    pub fn estimated_memory(&self) -> u64 {
        let n = self.n_max as f64;
        let rows = if self.n_max >= 64 { 2.0 * n / n.ln() } else { n };
        // row, augmented row, snapshot, sort key, enumeration output copy
        const PER_ROW: f64 = 16.0 + 64.0 + 80.0 + 16.0 + 16.0;
        let pipeline = PipelineConfig::default();
        let enum_seg = pipeline.limits.segment_len as f64 * 17.0;
        let sieve_seg = pipeline.sieve.segment_len as f64 * (1.0 / 16.0 + 8.0 / 10.0);
        let per_worker = enum_seg + sieve_seg;
        (rows * PER_ROW + self.worker_count() as f64 * per_worker) as u64 + (16 << 20)
    }

    fn pool(&self) -> Result<rayon::ThreadPool> {
        rayon::ThreadPoolBuilder::new()
            .num_threads(self.threads)
            .build()
            .map_err(|e| Error::config(MODULE, format!("cannot start worker pool: {e}")))
    }
}

/// Shared engine for reports: pipeline settings plus the `M_k` table.
#[derive(Clone, Debug, Default)]
pub struct Certifier {
    pub pipeline: PipelineConfig,
    pub table: MkTable,
}

impl Certifier {
    pub fn report(&self, n_max: u64, j_order: u32, extension_k0: u32) -> Result<BoundsReport> {
        let run = self.pipeline.run(n_max, j_order)?;
        self.report_from_run(&run, extension_k0)
    }

    pub fn report_from_rows(
        &self,
        rows: &[PracticalRow],
        n_max: u64,
        j_order: u32,
        extension_k0: u32,
    ) -> Result<BoundsReport> {
        let run = self.pipeline.run_on_rows(rows, n_max, j_order)?;
        self.report_from_run(&run, extension_k0)
    }

    pub fn report_from_run(&self, run: &PipelineRun, extension_k0: u32) -> Result<BoundsReport> {
        let t = Instant::now();
        let e = e_bound(&self.table, &self.pipeline.sieve, 2 * run.aggregates.n_max, extension_k0)?;
        log::info!("E(2N) <= {:.6e} ({:?}) in {:.2?}", e.value, e.source, t.elapsed());
        assemble(&run.aggregates, &run.y_sum, &e)
    }
}

/// Certified bounds for `c`, serialized in the configured format.
pub fn cmd_bounds(cfg: &RunConfig) -> Result<String> {
    cfg.validate()?;
    cfg.pool()?.install(|| {
        let t = Instant::now();
        ensure_kernel_verified()?;
        verify(cfg.verify_level)?;
        let engine = Certifier::default();
        let report = match &cfg.checkpoint_dir {
            Some(dir) => {
                let rows = checkpoint::load_or_enumerate(dir, cfg.n_max, &engine.pipeline.limits, DumpFormat::Csv)?;
                engine.report_from_rows(&rows, cfg.n_max, cfg.j_order, cfg.extension_k0)?
            }
            None => engine.report(cfg.n_max, cfg.j_order, cfg.extension_k0)?,
        };
        log::info!("c in [{:.10}, {:.10}], total {:.2?}", report.c_lo, report.c_hi, t.elapsed());
        report.serialize(cfg.output_format)
    })
}

fn verify(level: VerifyLevel) -> Result<()> {
    let level = match level {
        VerifyLevel::None => return Ok(()),
        VerifyLevel::Fast => Level::Fast,
        VerifyLevel::Full => Level::Full,
    };
    let report = selftest_with(level, &MkTable::standard());
    log::info!("{report}");
    report.into_result()
}

/// Self-test at `level`; the summary on success, a `Check` error otherwise.
pub fn cmd_selftest(level: Level, threads: usize) -> Result<String> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| Error::config(MODULE, format!("cannot start worker pool: {e}")))?;
    pool.install(|| {
        let report = selftest_with(level, &MkTable::standard());
        let text = report.to_string();
        report.into_result().map(|_| text)
    })
}

/// Files written by [`cmd_table`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TableOutput {
    pub rows: PathBuf,
    pub augmented: Option<PathBuf>,
    pub row_count: usize,
}

/// Write the practical-rows dump (and optionally the augmented table) into
/// `out`, or into the configured checkpoint directory. An existing dump for
/// the same `N` is reused.
pub fn cmd_table(cfg: &RunConfig, out: Option<&Path>, format: DumpFormat, augmented: bool) -> Result<TableOutput> {
    cfg.validate()?;
    let dir = out
        .or(cfg.checkpoint_dir.as_deref())
        .ok_or_else(|| Error::config(MODULE, "table needs --out or --checkpoint"))?
        .to_path_buf();
    cfg.pool()?.install(|| {
        let pipeline = PipelineConfig::default();
        std::fs::create_dir_all(&dir)?;
        let rows = checkpoint::load_or_enumerate(&dir, cfg.n_max, &pipeline.limits, format)?;
        let aug_path = if augmented {
            ensure_kernel_verified()?;
            let path = checkpoint::augmented_path(&dir, cfg.n_max, cfg.j_order, format);
            if !path.exists() {
                let run = pipeline.run_on_rows(&rows, cfg.n_max, cfg.j_order)?;
                checkpoint::write_augmented(&path, &run.rows, format)?;
            }
            Some(path)
        } else {
            None
        };
        Ok(TableOutput {
            rows: checkpoint::rows_path(&dir, cfg.n_max, format),
            augmented: aug_path,
            row_count: rows.len(),
        })
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validation() {
        assert!(RunConfig::new(1000).validate().is_ok());
        assert_eq!(RunConfig::new(0).validate().unwrap_err().exit_code(), 2);
        let mut c = RunConfig::new(1000);
        c.j_order = 1;
        assert!(c.validate().is_err());
        c = RunConfig::new(1000);
        c.extension_k0 = 39;
        assert!(c.validate().is_err());
        c = RunConfig::new(1 << 22);
        c.mem_budget_bytes = 1 << 20;
        assert!(matches!(c.validate(), Err(Error::Config { .. })));
    }

    #[test]
    fn memory_estimate_grows_with_n() {
        let a = RunConfig::new(1 << 16).estimated_memory();
        let b = RunConfig::new(1 << 22).estimated_memory();
        assert!(b > a && b > (1 << 22) * 20);
    }

    #[test]
    fn bounds_small_text() {
        let mut c = RunConfig::new(1);
        c.j_order = 2;
        c.output_format = OutputFormat::Text;
        let out = cmd_bounds(&c).unwrap();
        assert!(out.contains("c ∈ ["), "{out}");
    }

    #[test]
    fn table_needs_destination() {
        let c = RunConfig::new(30);
        assert!(matches!(cmd_table(&c, None, DumpFormat::Csv, false), Err(Error::Config { .. })));
    }
}
