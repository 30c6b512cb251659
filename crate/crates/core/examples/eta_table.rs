//! Bounds E(x) on sup |eta(y)| for y >= x: the tabulated M_k and the computed
//! extension below 2^24.
//!
//! cargo run --release --example eta_table

use practical_bounds::eta_bounds::verify_table_prefix;
use practical_bounds::{e_bound, eta, MkTable, PrimeSieve};

fn main() -> practical_bounds::Result<()> {
    let table = MkTable::standard();
    let sieve = PrimeSieve::default();
    for &(k, _) in table.rows() {
        println!("M_{k} = {:.5e}", table.upper(k).unwrap_or(f64::NAN));
    }
    for k in [16, 20, 21, 22, 23, 24, 30] {
        let e = e_bound(&table, &sieve, 1 << k, 24)?;
        println!("E(2^{k}) <= {:.6e}  via {:?}", e.value, e.source);
    }
    println!("|eta(2^24)| <= {:.6e}", eta(&sieve, 1 << 24)?.mag());
    for k in [24, 25] {
        println!("table row k = {k} consistent up to 2^26: {}", verify_table_prefix(&table, &sieve, k, 1 << 26)?);
    }
    let bad = table.perturbed(24, 0.9);
    println!("row k = 24 shrunk by 10% consistent: {}", verify_table_prefix(&bad, &sieve, 24, 1 << 26)?);
    Ok(())
}
