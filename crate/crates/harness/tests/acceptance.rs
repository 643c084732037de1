//! One test per acceptance criterion; each prints a PASS/FAIL line.

use std::io::Write;

use qperc_harness::acceptance::{self, Outcome};

fn report(o: Outcome) {
    // Written to stderr directly so the line survives output capture.
    let _ = writeln!(std::io::stderr(), "{}", o.line());
    assert!(o.pass, "{}", o.line());
}

#[test]
fn criterion_01_survival_probability() {
    report(acceptance::survival());
}

#[test]
fn criterion_02_giant_fraction() {
    report(acceptance::giant_fraction_d16());
}

#[test]
fn criterion_03_second_largest_component() {
    report(acceptance::second_largest());
}

#[test]
fn criterion_04_isoperimetric_verifier() {
    report(acceptance::harper());
}

#[test]
fn criterion_05_cheeger_sandwich() {
    report(acceptance::cheeger_sandwich());
}

#[test]
fn criterion_06_mixing_bound() {
    report(acceptance::mixing_bound());
}

#[test]
fn criterion_07_tree_decomposition() {
    report(acceptance::tree_decomposition());
}

#[test]
fn criterion_08_disjoint_paths() {
    report(acceptance::disjoint_paths());
}

#[test]
fn criterion_09_sprinkling_coupling() {
    report(acceptance::sprinkling());
}

#[test]
fn criterion_10_attachment_and_density() {
    report(acceptance::attachment_density());
}

#[test]
fn criterion_11_mixing_time_trend() {
    report(acceptance::mixing_trend());
}

#[test]
fn criterion_12_diameter() {
    report(acceptance::diameter_bound());
}

#[test]
fn criterion_13_cycle_certificate() {
    report(acceptance::cycles());
}

#[test]
fn criterion_14_minor_certificate() {
    report(acceptance::minors());
}

#[test]
fn criterion_15_direction_split() {
    report(acceptance::direction_split_guarantee());
}

#[test]
fn criterion_16_chernoff_and_tree_count_dominance() {
    report(acceptance::dominance());
}

#[test]
fn criterion_17_determinism() {
    report(acceptance::determinism());
}
