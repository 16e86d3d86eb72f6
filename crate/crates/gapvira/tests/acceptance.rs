//! The exit checklist: every verification suite must pass at its
//! default breadth.  Each test prints one line per suite so a full run
//! reads as a scoreboard.

use gapvira::rng::seeded_rng;
use gapvira::suites::{run_suite, SuiteOptions};

fn run(name: &str) {
    let mut rng = seeded_rng();
    let opts = SuiteOptions::default();
    let checks = run_suite(name, &opts, &mut rng).expect("suite ran");
    let failed: Vec<_> = checks.iter().filter(|c| !c.passed).collect();
    let verdict = if failed.is_empty() { "PASS" } else { "FAIL" };
    println!("{name}: {verdict} ({} checks)", checks.len());
    for c in &checks {
        println!("  [{}] {} — {}", if c.passed { "ok" } else { "FAIL" }, c.name, c.detail);
    }
    assert!(failed.is_empty(), "{name} failed: {failed:?}");
}

#[test]
fn bracket_laws_hold_exhaustively() {
    run("jacobi");
}

#[test]
fn rescaled_basis_matches_the_pulled_back_brackets() {
    run("rescaled");
}

#[test]
fn order_p_automorphism_and_its_broken_variant() {
    run("sigma");
}

#[test]
fn pbw_rewriting_is_confluent() {
    run("pbw");
}

#[test]
fn formal_identities_and_the_mode_dictionary() {
    run("formal");
}

#[test]
fn graded_dimensions_match_the_generating_function() {
    run("dims");
}

#[test]
fn first_fractional_grade_singular_vector_is_unique() {
    run("singular");
}

#[test]
fn reduction_postconditions_on_random_vectors() {
    run("reduction");
}

#[test]
fn module_axiom_on_random_triples() {
    run("module-axiom");
}

#[test]
fn category_conditions_and_profile_extraction() {
    run("category");
}

#[test]
fn whittaker_validation_vectors_and_iso_probe() {
    run("whittaker");
}

#[test]
fn restrictedness_witnesses_within_bounds() {
    run("restricted");
}
