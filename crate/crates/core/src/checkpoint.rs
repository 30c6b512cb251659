//! Row dumps for reuse across runs.
//!
//! Practical rows are written either as `n,sigma` text lines or as
//! little-endian `u64` pairs. The augmented table appends the three interval
//! columns (Mertens product, log sum, W sum) as `lo,hi` pairs: text uses
//! seventeen significant digits, binary uses the raw little-endian `f64` bits.

use std::fs::{self, File};
use std::io::{BufRead, BufReader, BufWriter, Read, Write};
use std::path::{Path, PathBuf};

use crate::aggregation::AugmentedRow;
use crate::error::{Error, Result};
use crate::interval::Interval;
use crate::practical::{enumerate_practical_with, sigma, EnumerationLimits, PracticalRow};

const MODULE: &str = "checkpoint";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, clap::ValueEnum)]
pub enum DumpFormat {
    #[default]
    Csv,
    Bin,
}

impl DumpFormat {
    pub fn extension(self) -> &'static str {
        match self {
            DumpFormat::Csv => "csv",
            DumpFormat::Bin => "bin",
        }
    }
}

pub fn rows_path(dir: &Path, n_max: u64, format: DumpFormat) -> PathBuf {
    dir.join(format!("practical_rows_N{n_max}.{}", format.extension()))
}

pub fn augmented_path(dir: &Path, n_max: u64, j_order: u32, format: DumpFormat) -> PathBuf {
    dir.join(format!("augmented_N{n_max}_J{j_order}.{}", format.extension()))
}

fn parse_err(path: &Path, line: usize, what: &str) -> Error {
    Error::Parse(format!("{}:{line}: {what}", path.display()))
}

pub fn write_rows(path: &Path, rows: &[PracticalRow], format: DumpFormat) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    for r in rows {
        match format {
            DumpFormat::Csv => writeln!(w, "{},{}", r.n, r.sigma)?,
            DumpFormat::Bin => {
                w.write_all(&r.n.to_le_bytes())?;
                w.write_all(&r.sigma.to_le_bytes())?;
            }
        }
    }
    w.flush()?;
    Ok(())
}

pub fn read_rows(path: &Path, format: DumpFormat) -> Result<Vec<PracticalRow>> {
    match format {
        DumpFormat::Csv => {
            let mut rows = Vec::new();
            for (i, line) in BufReader::new(File::open(path)?).lines().enumerate() {
                let line = line?;
                let (n, s) = line.split_once(',').ok_or_else(|| parse_err(path, i + 1, "expected n,sigma"))?;
                let n = n.trim().parse().map_err(|_| parse_err(path, i + 1, "bad n"))?;
                let sigma = s.trim().parse().map_err(|_| parse_err(path, i + 1, "bad sigma"))?;
                rows.push(PracticalRow { n, sigma });
            }
            Ok(rows)
        }
        DumpFormat::Bin => {
            let words = read_u64s(path, 2)?;
            Ok(words.chunks_exact(2).map(|c| PracticalRow { n: c[0], sigma: c[1] }).collect())
        }
    }
}

fn read_u64s(path: &Path, record: usize) -> Result<Vec<u64>> {
    let mut bytes = Vec::new();
    File::open(path)?.read_to_end(&mut bytes)?;
    if bytes.len() % (8 * record) != 0 {
        return Err(Error::Parse(format!("{}: truncated binary record", path.display())));
    }
    Ok(bytes.chunks_exact(8).map(|c| u64::from_le_bytes(c.try_into().expect("8 bytes"))).collect())
}

pub fn write_augmented(path: &Path, rows: &[AugmentedRow], format: DumpFormat) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    for r in rows {
        let ivs = [r.mertens_at_theta, r.logsum_at_theta, r.wsum_at_theta];
        match format {
            DumpFormat::Csv => {
                write!(w, "{},{}", r.row.n, r.row.sigma)?;
                for iv in ivs {
                    write!(w, ",{:.16e},{:.16e}", iv.lo(), iv.hi())?;
                }
                writeln!(w)?;
            }
            DumpFormat::Bin => {
                w.write_all(&r.row.n.to_le_bytes())?;
                w.write_all(&r.row.sigma.to_le_bytes())?;
                for iv in ivs {
                    w.write_all(&iv.lo().to_le_bytes())?;
                    w.write_all(&iv.hi().to_le_bytes())?;
                }
            }
        }
    }
    w.flush()?;
    Ok(())
}

pub fn read_augmented(path: &Path, format: DumpFormat) -> Result<Vec<AugmentedRow>> {
    let build = |n: u64, sigma: u64, v: &[f64]| -> Result<AugmentedRow> {
        Ok(AugmentedRow {
            row: PracticalRow { n, sigma },
            mertens_at_theta: Interval::try_new(v[0], v[1])?,
            logsum_at_theta: Interval::try_new(v[2], v[3])?,
            wsum_at_theta: Interval::try_new(v[4], v[5])?,
        })
    };
    match format {
        DumpFormat::Csv => {
            let mut rows = Vec::new();
            for (i, line) in BufReader::new(File::open(path)?).lines().enumerate() {
                let line = line?;
                let f: Vec<&str> = line.split(',').collect();
                if f.len() != 8 {
                    return Err(parse_err(path, i + 1, "expected 8 fields"));
                }
                let n = f[0].parse().map_err(|_| parse_err(path, i + 1, "bad n"))?;
                let sigma = f[1].parse().map_err(|_| parse_err(path, i + 1, "bad sigma"))?;
                let v = f[2..]
                    .iter()
                    .map(|s| s.parse::<f64>().map_err(|_| parse_err(path, i + 1, "bad float")))
                    .collect::<Result<Vec<_>>>()?;
                rows.push(build(n, sigma, &v)?);
            }
            Ok(rows)
        }
        DumpFormat::Bin => read_u64s(path, 8)?
            .chunks_exact(8)
            .map(|c| {
                let v: Vec<f64> = c[2..].iter().map(|&b| f64::from_bits(b)).collect();
                build(c[0], c[1], &v)
            })
            .collect(),
    }
}

/// Practical rows up to `n_max`, read from `dir` when a dump exists there and
/// enumerated (then written) otherwise.
pub fn load_or_enumerate(
    dir: &Path,
    n_max: u64,
    limits: &EnumerationLimits,
    format: DumpFormat,
) -> Result<Vec<PracticalRow>> {
    let path = rows_path(dir, n_max, format);
    if path.exists() {
        let rows = read_rows(&path, format)?;
        validate_rows(&rows, n_max)?;
        log::info!("loaded {} rows from {}", rows.len(), path.display());
        return Ok(rows);
    }
    let rows = enumerate_practical_with(n_max, limits)?;
    fs::create_dir_all(dir)?;
    write_rows(&path, &rows, format)?;
    log::info!("wrote {} rows to {}", rows.len(), path.display());
    Ok(rows)
}

/// Cheap checks on a loaded dump: ascending, within range, starts at 1, and
/// a sparse sample of divisor sums is exact.
fn validate_rows(rows: &[PracticalRow], n_max: u64) -> Result<()> {
    let bad = |msg: String| Error::consistency(MODULE, msg);
    if rows.first() != Some(&PracticalRow { n: 1, sigma: 1 }) {
        return Err(bad("dump does not start with n = 1".into()));
    }
    if !rows.windows(2).all(|w| w[0].n < w[1].n) || rows.last().is_some_and(|r| r.n > n_max) {
        return Err(bad(format!("dump is not an ascending list of n <= {n_max}")));
    }
    let step = (rows.len() / 1000).max(1);
    for r in rows.iter().step_by(step) {
        if sigma(r.n)? != r.sigma {
            return Err(bad(format!("dump has sigma({}) = {}", r.n, r.sigma)));
        }
    }
    Ok(())
}
