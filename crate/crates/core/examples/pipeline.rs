//! The sorted-threshold pipeline: truncation sums, the partial-sum deficit and the prime-power identity.
//!
//! cargo run --release --example pipeline [N]

use practical_bounds::aggregation::lemma2_residual;
use practical_bounds::PipelineConfig;

fn main() -> practical_bounds::Result<()> {
    let n_max: u64 = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(100_000);
    let run = PipelineConfig::default().run(n_max, 13)?;
    let a = &run.aggregates;
    println!("N = {n_max}, {} practical rows", run.rows.len());
    println!("alpha_N  in {}", a.alpha_n);
    println!("U_N      in {}", a.u_n);
    println!("A_N,J    in {}", a.a_nj);
    println!("sum 1/n prod(1-1/p) in {}", a.lemma1_sum);
    println!("eps_N    in {}  (eps_N log N = {:.4})", a.eps_n, a.eps_n.mid() * (n_max as f64).ln());
    println!("Y_2N,J   in {}", run.y_sum.value);

    let last = run.rows.last().expect("N >= 1");
    println!("last row: n = {}, theta = {}, mertens in {}", last.row.n, last.row.theta(), last.mertens_at_theta);

    for (q, h) in [(2u64, 1u32), (2, 2), (3, 1), (5, 1)] {
        let res = lemma2_residual(&run.rows, q, h)?;
        println!("q = {q}, h = {h}: |L - cR| <= {res:.3e}  (eps_N = {:.3e})", a.eps_n.hi());
    }
    Ok(())
}
