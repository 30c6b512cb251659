//! Values recorded from the first run of each computation. A change here
//! means the arithmetic or the summation order changed.

use practical_bounds::{e_bound, enumerate_practical, eta_sup_bound, y_sum, MkTable, PipelineConfig, PrimeSieve};

#[test]
fn eta_sup_between_2_20_and_2_24() {
    let s = eta_sup_bound(&PrimeSieve::default(), 1 << 20, 1 << 24).unwrap();
    assert_eq!(s.bound, 0.0015105451014669757);
}

#[test]
fn e_bound_at_2_21() {
    let e = e_bound(&MkTable::standard(), &PrimeSieve::default(), 1 << 21, 24).unwrap();
    assert_eq!(e.value, 0.001048349823084438);
    assert!(e.value >= 36.80e-5);
}

#[test]
fn y_sum_at_2_21() {
    let y = y_sum(&PrimeSieve::default(), 1 << 21, 13).unwrap();
    assert_eq!((y.value.lo(), y.value.hi()), (4.4570888687191745e-1, 4.4570888688055704e-1));
    let from_pipeline = PipelineConfig::default().run(1 << 20, 13).unwrap().y_sum;
    assert_eq!(from_pipeline, y);
}

#[test]
fn practical_count_to_one_million() {
    assert_eq!(enumerate_practical(1_000_000).unwrap().len(), 97_385);
}
