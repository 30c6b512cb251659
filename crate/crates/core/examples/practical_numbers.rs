//! Practical numbers: the ascending-prefix criterion, the subset-sum
//! definition, and the segmented enumeration with divisor sums.
//!
//! cargo run --release --example practical_numbers [N]

use practical_bounds::practical::{factorize, is_practical_oracle, sigma};
use practical_bounds::{enumerate_practical, is_practical};

fn main() -> practical_bounds::Result<()> {
    let n_max: u64 = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(1_000_000);

    let first: Vec<u64> = (1..=60).filter(|&n| is_practical(n)).collect();
    println!("practical numbers up to 60: {first:?}");

    for n in [78u64, 102, 720] {
        let f = factorize(n);
        println!(
            "{n} = {f:?}: sigma = {}, practical = {} (subset sums: {})",
            sigma(n)?,
            is_practical(n),
            is_practical_oracle(n)?
        );
    }

    let t = std::time::Instant::now();
    let rows = enumerate_practical(n_max)?;
    let n = n_max as f64;
    println!(
        "P({n_max}) = {} in {:.2?}; P(x) log x / x = {:.4}",
        rows.len(),
        t.elapsed(),
        rows.len() as f64 * n.ln() / n
    );
    let max_ratio = rows.iter().skip(1).map(|r| r.theta() as f64 / r.n as f64).fold(0.0, f64::max);
    println!("largest theta(n)/n = {max_ratio:.4}, so one prime pass to {:.3e} suffices", max_ratio * n);
    Ok(())
}
