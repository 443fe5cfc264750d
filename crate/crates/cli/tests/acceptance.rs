//! Acceptance criteria 1–11 at the full tier, one test per criterion.
//!
//! Run with `cargo test --offline -p recur-cli --test acceptance -- --nocapture`
//! to see the pass/fail line of each criterion.

use recur_cli::verify::{run_criterion, Tier};

fn criterion(id: u8) {
    let dir = tempfile::tempdir().unwrap();
    let report = run_criterion(id, Tier::Full, 0, dir.path()).unwrap();
    println!("{}", report.line());
    let failed: Vec<String> = report
        .checks
        .iter()
        .filter(|c| !c.pass)
        .map(|c| format!("{}: measured {}, target {}", c.name, c.measured, c.target))
        .collect();
    assert!(failed.is_empty(), "criterion {id} failed: {}", failed.join("; "));
}

#[test]
fn criterion_01_exponent_oracle() {
    criterion(1);
}

#[test]
fn criterion_02_cat_map_slope() {
    criterion(2);
}

#[test]
fn criterion_03_expanding_map_slope() {
    criterion(3);
}

#[test]
fn criterion_04_doubling_map_slope() {
    criterion(4);
}

#[test]
fn criterion_05_product_maps() {
    criterion(5);
}

#[test]
fn criterion_06_word_return_law() {
    criterion(6);
}

#[test]
fn criterion_07_periodic_points() {
    criterion(7);
}

#[test]
fn criterion_08_covering_certificate() {
    criterion(8);
}

#[test]
fn criterion_09_spectrum_affinity() {
    criterion(9);
}

#[test]
fn criterion_10_sample_vs_exact_oracle() {
    criterion(10);
}

#[test]
fn criterion_11_determinism() {
    criterion(11);
}
