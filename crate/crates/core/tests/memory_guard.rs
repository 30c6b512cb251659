//! Peak resident memory of a child run at N = 2^22 against its budget. Kept
//! in its own test binary so no other child process shares the rusage total.

use std::process::Command;

use practical_bounds::RunConfig;

fn children_max_rss_bytes() -> u64 {
    let mut usage: libc::rusage = unsafe { std::mem::zeroed() };
    let rc = unsafe { libc::getrusage(libc::RUSAGE_CHILDREN, &mut usage) };
    assert_eq!(rc, 0);
    // kilobytes on Linux
    usage.ru_maxrss as u64 * 1024
}

#[test]
fn peak_memory_within_budget_at_2_22() {
    let mut cfg = RunConfig::new(1 << 22);
    cfg.threads = 4;
    let budget = cfg.estimated_memory();
    let status = Command::new(env!("CARGO_BIN_EXE_practical-bounds"))
        .args(["bounds", "--n-max", "4194304", "--threads", "4", "--mem-budget", &budget.to_string()])
        .env("RUST_LOG", "warn")
        .stdout(std::process::Stdio::null())
        .status()
        .unwrap();
    assert!(status.success());
    let peak = children_max_rss_bytes();
    assert!(peak as f64 <= 1.25 * budget as f64, "peak {peak} bytes, budget {budget} bytes");
    eprintln!("peak {:.1} MiB of {:.1} MiB budget", peak as f64 / 1048576.0, budget as f64 / 1048576.0);
}
