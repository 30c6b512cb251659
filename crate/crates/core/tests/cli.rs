use std::fs;
use std::process::{Command, Output};

use practical_bounds::bounds::REPORT_SCHEMA;
use practical_bounds::checkpoint::{read_rows, DumpFormat};
use practical_bounds::BoundsReport;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_practical-bounds"));
    c.env("RUST_LOG", "warn");
    for (k, _) in std::env::vars().filter(|(k, _)| k.starts_with("PRACTICAL_BOUNDS_")) {
        c.env_remove(k);
    }
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn n_max_zero_is_a_usage_error() {
    let o = run(&["bounds", "--n-max", "0"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("--n-max"));
}

#[test]
fn n_max_is_required() {
    assert_eq!(run(&["bounds"]).status.code(), Some(2));
}

#[test]
fn config_errors_exit_2() {
    assert_eq!(run(&["bounds", "--n-max", "100", "--j", "1"]).status.code(), Some(2));
    assert_eq!(run(&["bounds", "--n-max", "100", "--k0", "23"]).status.code(), Some(2));
    let o = run(&["bounds", "--n-max", "4194304", "--mem-budget", "1000000"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("cli"));
}

#[test]
fn smallest_run_prints_the_interval() {
    let o = run(&["bounds", "--n-max", "1", "--j", "2", "--format", "text"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("c ∈ ["), "{text}");
    assert!(text.contains("N = 1, J = 2"));
}

#[test]
fn json_report_matches_schema_and_round_trips() {
    let o = run(&["bounds", "--n-max", "65536", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let doc = stdout(&o);
    let schema: serde_json::Value = serde_json::from_str(REPORT_SCHEMA).unwrap();
    let value: serde_json::Value = serde_json::from_str(&doc).unwrap();
    let validator = jsonschema::validator_for(&schema).unwrap();
    assert!(validator.is_valid(&value));
    let r = BoundsReport::from_json(&doc).unwrap();
    assert_eq!(r.n_max, 65536);
    assert_eq!(r.to_json().unwrap(), doc);
    assert!(r.c_lo < 1.336_076_54 && r.c_hi > 1.336_073_22);

    let mut broken = value.clone();
    broken.as_object_mut().unwrap().remove("c_lo");
    assert!(!validator.is_valid(&broken));
}

#[test]
fn environment_overrides_flags() {
    let o = bin()
        .args(["bounds"])
        .env("PRACTICAL_BOUNDS_N_MAX", "1000")
        .env("PRACTICAL_BOUNDS_FORMAT", "csv")
        .env("PRACTICAL_BOUNDS_J", "5")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0));
    let csv = stdout(&o);
    assert!(csv.starts_with("N,J,alpha_N_lo"));
    assert!(csv.lines().nth(1).unwrap().starts_with("1000,5,"));
}

#[test]
fn output_file_and_checkpoint() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("report.json");
    let ck = dir.path().join("ck");
    let args = ["bounds", "--n-max", "20000", "--checkpoint", ck.to_str().unwrap(), "--out", out.to_str().unwrap()];
    assert_eq!(run(&args).status.code(), Some(0));
    let first = fs::read(&out).unwrap();
    assert!(ck.join("practical_rows_N20000.csv").exists());
    assert_eq!(run(&args).status.code(), Some(0));
    assert_eq!(fs::read(&out).unwrap(), first);
    let plain = run(&["bounds", "--n-max", "20000"]);
    assert_eq!(plain.stdout, first);
}

#[test]
fn table_for_thirty_has_twelve_rows() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    assert_eq!(run(&["table", "--n-max", "30", "--out", d]).status.code(), Some(0));
    let rows = read_rows(&dir.path().join("practical_rows_N30.csv"), DumpFormat::Csv).unwrap();
    let ns: Vec<u64> = rows.iter().map(|r| r.n).collect();
    assert_eq!(ns, [1, 2, 4, 6, 8, 12, 16, 18, 20, 24, 28, 30]);
}

#[test]
fn table_dumps_are_stable_and_agree() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    for f in ["csv", "bin"] {
        let o = run(&["table", "--n-max", "100000", "--out", d, "--dump-format", f, "--augmented"]);
        assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    }
    let csv_path = dir.path().join("practical_rows_N100000.csv");
    let aug_path = dir.path().join("augmented_N100000_J13.csv");
    let (csv_bytes, aug_bytes) = (fs::read(&csv_path).unwrap(), fs::read(&aug_path).unwrap());
    // a rerun leaves the dumps byte-identical
    assert_eq!(run(&["table", "--n-max", "100000", "--checkpoint", d, "--augmented"]).status.code(), Some(0));
    assert_eq!(fs::read(&csv_path).unwrap(), csv_bytes);
    assert_eq!(fs::read(&aug_path).unwrap(), aug_bytes);
    let csv = read_rows(&csv_path, DumpFormat::Csv).unwrap();
    let bin = read_rows(&dir.path().join("practical_rows_N100000.bin"), DumpFormat::Bin).unwrap();
    assert_eq!(csv, bin);
    assert_eq!(csv.len(), 11_751);
}

#[test]
fn table_io_failure_exits_4() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("plain-file");
    fs::write(&file, "x").unwrap();
    let target = file.join("sub");
    let o = run(&["table", "--n-max", "30", "--out", target.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(4));
}

#[test]
fn table_without_destination_exits_2() {
    assert_eq!(run(&["table", "--n-max", "30"]).status.code(), Some(2));
}

#[test]
fn selftest_fast_passes_quickly() {
    let t = std::time::Instant::now();
    let o = run(&["selftest", "fast"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("4/4 checks passed"));
    assert!(t.elapsed().as_secs() < 60);
}

#[test]
fn bounds_with_fast_verification() {
    let o = run(&["bounds", "--n-max", "1000", "--verify", "fast", "--format", "csv"]);
    assert_eq!(o.status.code(), Some(0));
}
