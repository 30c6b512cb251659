//! Outward-rounded interval arithmetic: enclosures, width growth, widening.
//!
//! cargo run --release --example interval_kernel

use practical_bounds::interval::{kernel_self_test, with_widening};
use practical_bounds::primes::small_primes;
use practical_bounds::{Interval, MathConstants};

fn main() -> practical_bounds::Result<()> {
    // 0.1 is not a double; the decimal constructor brackets it.
    let tenth = Interval::from_decimal("0.1", "0.1")?;
    println!("0.1            in {tenth}");
    let sum: Interval = std::iter::repeat_n(tenth, 10).sum();
    println!("ten times 0.1  in {sum}  (contains 1: {})", sum.contains(1.0));

    let third = Interval::ratio(1, 3);
    println!("1/3            in {third}  width {:.1e}", third.width());
    println!("log 2          in {}", Interval::from_int(2).ln()?);
    println!("exp(1)         in {}", Interval::ONE.exp());

    let k = MathConstants::new();
    println!("gamma          in {}", k.gamma);
    println!("1 - e^-gamma   in {}", k.one_minus_exp_neg_gamma);

    // A long product of (1 - 1/p) factors stays narrow: a few ulps per step.
    let primes = small_primes(1_000_000);
    let prod = primes.iter().fold(Interval::ONE, |acc, &p| acc * Interval::ratio(p - 1, p));
    println!(
        "prod over {} primes in {prod}, relative width {:.2e} = {:.1} ulp per factor",
        primes.len(),
        prod.width() / prod.mid(),
        prod.width() / prod.mid() / f64::EPSILON / primes.len() as f64
    );

    let wide = with_widening(2, || Interval::ratio(1, 3) * Interval::ratio(1, 7));
    let base = Interval::ratio(1, 3) * Interval::ratio(1, 7);
    println!("1/21 widened x2 in {wide}, contains default {}", wide.contains_interval(&base));

    kernel_self_test(2_000, 7)?;
    println!("log/exp self-test against the 192-bit oracle passed");
    Ok(())
}
