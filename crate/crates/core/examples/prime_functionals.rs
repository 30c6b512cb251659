//! Segmented sieve, the Mertens product and the error functional eta.
//!
//! cargo run --release --example prime_functionals [x]

use practical_bounds::primes::{delta_enclosure, PrimeFunctionalState};
use practical_bounds::{eta, eta_sup_bound, Interval, MathConstants, PrimeSieve};

fn main() -> practical_bounds::Result<()> {
    let x: u64 = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(1_000_000);
    let sieve = PrimeSieve::default();

    let mut state = PrimeFunctionalState::new(13)?;
    let mut count = 0u64;
    for p in sieve.stream(2, x)? {
        state.advance(p)?;
        count += 1;
    }
    println!("pi({x}) = {count}");
    println!("prod (1 - 1/p)          in {}", state.mertens_prod);
    let k = MathConstants::new();
    let scaled = state.mertens_prod * k.gamma.exp() * Interval::from_int(x).ln()?;
    println!("times e^gamma log x     in {scaled}");
    println!("sum log p / (p - 1)     in {}", state.sum_logp_over_pm1);
    println!("sum W_(q,13)            in {}", state.sum_wqj);

    for y in [2u64, 10, 1000, x] {
        println!("eta({y}) in {}", eta(&sieve, y)?);
    }
    println!("delta({x}) in {}", delta_enclosure(&sieve, x, 10 * x)?);
    let sup = eta_sup_bound(&sieve, x, 4 * x)?;
    println!(
        "sup |eta| on [{x}, {}] <= {:.6e}, attained near {}{}",
        4 * x,
        sup.bound,
        sup.at.x,
        if sup.at.left_limit { " (left limit)" } else { "" }
    );
    Ok(())
}
