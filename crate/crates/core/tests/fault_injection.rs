use practical_bounds::selftest::{selftest_with, Level};
use practical_bounds::MkTable;

#[test]
fn shrunk_table_row_fails_full_selftest() {
    let table = MkTable::standard().perturbed(24, 0.9);
    let report = selftest_with(Level::Full, &table);
    let failed: Vec<&str> = report.checks.iter().filter(|c| !c.passed).map(|c| c.name).collect();
    assert!(failed.contains(&"c8-table-prefix"), "{report}");
    let err = report.into_result().unwrap_err();
    assert_eq!(err.exit_code(), 1);
    assert!(err.to_string().contains("M_24"));
}
