//! Certified intervals for c at several truncation points, compared with the
//! published enclosure.
//!
//! cargo run --release --example certified_constant [log2 N ...]

use practical_bounds::{Certifier, OutputFormat, PUBLISHED_C};

fn main() -> practical_bounds::Result<()> {
    let mut ks: Vec<u32> = std::env::args().skip(1).filter_map(|s| s.parse().ok()).collect();
    if ks.is_empty() {
        ks = vec![16, 18, 20];
    }
    let engine = Certifier::default();
    println!("published: {} < c < {}", PUBLISHED_C.0, PUBLISHED_C.1);
    let mut last = None;
    for k in ks {
        let r = engine.report(1 << k, 13, 24)?;
        let overlap = r.c_lo < PUBLISHED_C.1 && r.c_hi > PUBLISHED_C.0;
        println!(
            "N = 2^{k}: c in [{:.9}, {:.9}], width {:.3e}, predicted {:.3e}, overlaps published: {overlap}",
            r.c_lo,
            r.c_hi,
            r.width(),
            r.predicted_gap.unwrap_or(f64::NAN),
        );
        last = Some(r);
    }
    if let Some(r) = last {
        print!("{}", r.serialize(OutputFormat::Text)?);
    }
    Ok(())
}
