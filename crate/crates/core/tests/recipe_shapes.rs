//! Predicted Newton polygons for every recipe, and the degree contracts of the builders.

mod support;

use support::*;

fn shape(index: usize) {
    let (curve, n, recipe) = shape_cases().swap_remove(index);
    let run = run_recipe(&curve, n, recipe, 100, 7, None).unwrap();
    assert!(run.shape_ok(), "{}: {} of {} matched, {} rejected", run.label, run.matched, run.accepted(), run.rejected);
}

#[test]
fn short_cycle_2() {
    shape(0);
}

#[test]
fn short_cycle_3() {
    shape(1);
}

#[test]
fn short_cycle_5() {
    shape(2);
}

#[test]
fn a_transitive() {
    shape(3);
}

#[test]
fn a_long() {
    shape(4);
}

#[test]
fn b_transitive() {
    shape(5);
}

#[test]
fn b_long() {
    shape(6);
}

#[test]
fn c_irred() {
    shape(7);
}

#[test]
fn c_long() {
    shape(8);
}

#[test]
fn point_long() {
    shape(9);
}

#[test]
fn point_top_coefficients_vanish() {
    check_point_contracts().unwrap();
}

#[test]
fn generic_samples_reach_degree_n() {
    check_generic_degrees(200, 3).unwrap();
}
