//! The per-prime weights W_q: closed-form truncation against the direct series.
//!
//! cargo run --release --example w_series

use practical_bounds::divisor_series::{global_remainder_bound, wq_direct, wqj};

fn main() -> practical_bounds::Result<()> {
    println!("{:>5} {:>24} {:>12} {:>12} {:>12}", "q", "W_q (direct)", "J=2 excess", "J=5 excess", "1/(q(q-1))");
    for q in [2u64, 3, 5, 7, 11, 101, 1009] {
        let direct = wq_direct(q, 200)?;
        let excess: Vec<String> = [2, 5]
            .iter()
            .map(|&j| wqj(q, j).map(|w| format!("{:.3e}", (w.value - direct).mid())))
            .collect::<Result<_, _>>()?;
        println!(
            "{q:>5} {:>24.17} {:>12} {:>12} {:>12.5e}",
            direct.mid(),
            excess[0],
            excess[1],
            1.0 / (q * (q - 1)) as f64
        );
    }
    for j in [2, 5, 13] {
        println!("J = {j:>2}: sum over q of W_(q,J) - W_q <= {:.3e}", global_remainder_bound(j)?);
    }
    Ok(())
}
