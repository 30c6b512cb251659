//! Writing, reading and reusing the row dumps in both formats.
//!
//! cargo run --release --example checkpoint_tables [dir]

use practical_bounds::checkpoint::{read_augmented, read_rows, DumpFormat};
use practical_bounds::{cmd_table, RunConfig};

fn main() -> practical_bounds::Result<()> {
    let dir = std::env::args()
        .nth(1)
        .map(std::path::PathBuf::from)
        .unwrap_or_else(|| std::env::temp_dir().join("practical-bounds-demo"));
    let cfg = RunConfig::new(1 << 16);
    for format in [DumpFormat::Csv, DumpFormat::Bin] {
        let out = cmd_table(&cfg, Some(&dir), format, true)?;
        let rows = read_rows(&out.rows, format)?;
        let aug = read_augmented(out.augmented.as_deref().expect("requested"), format)?;
        println!(
            "{format:?}: {} rows in {}, {} augmented; row 100 = {:?}",
            rows.len(),
            out.rows.display(),
            aug.len(),
            rows[100]
        );
    }
    let csv = read_rows(&dir.join("practical_rows_N65536.csv"), DumpFormat::Csv)?;
    let bin = read_rows(&dir.join("practical_rows_N65536.bin"), DumpFormat::Bin)?;
    println!("CSV and binary dumps agree: {}", csv == bin);
    Ok(())
}
