//! Full invariant grid at the default limits, one test per criterion.
//! Each test prints its criterion's summary line and fails with the
//! first recorded discrepancy if the criterion does not hold.

use fingeo::verify::{
    criterion_1, criterion_2, criterion_3, criterion_4, criterion_5, criterion_6, criterion_7,
    criterion_8, criterion_9, CriterionOutcome, RankCache, VerifyOptions,
};

fn opts() -> VerifyOptions {
    VerifyOptions::default()
}

fn report(out: &CriterionOutcome) {
    println!(
        "criterion {} [{}] {} checks, {} failures, {:.1}s  {}",
        out.id,
        if out.passed { "pass" } else { "FAIL" },
        out.checks,
        out.failures,
        out.seconds,
        out.name
    );
    assert!(out.passed, "criterion {} failed: {}", out.id, out.detail);
    assert!(out.checks > 0, "criterion {} ran no checks", out.id);
}

#[test]
fn criterion_1_rank_agreement_matrix_closed_form_duals_characters() {
    let mut cache = RankCache::new();
    report(&criterion_1(&opts(), &mut cache).unwrap());
}

#[test]
fn criterion_2_hyperoval_ranks_and_point_removal_stability() {
    let mut cache = RankCache::new();
    report(&criterion_2(&opts(), &mut cache).unwrap());
}

#[test]
fn criterion_3_wenger_rank_three_way_consistency() {
    report(&criterion_3(&opts()).unwrap());
}

#[test]
fn criterion_4_plane_and_capacitor_families_span_their_codes() {
    report(&criterion_4(&opts()).unwrap());
}

#[test]
fn criterion_5_word_weight_and_integer_membership_contracts() {
    report(&criterion_5(&opts()).unwrap());
}

#[test]
fn criterion_6_minimum_weight_floors_and_exact_small_cases() {
    let mut cache = RankCache::new();
    report(&criterion_6(&opts(), &mut cache).unwrap());
}

#[test]
fn criterion_7_characteristic_p_rank_inequality_and_witnesses() {
    let mut cache = RankCache::new();
    report(&criterion_7(&opts(), &mut cache).unwrap());
}

#[test]
fn criterion_8_character_sum_and_trace_dichotomies() {
    report(&criterion_8(&opts()).unwrap());
}

#[test]
fn criterion_9_majority_decoding_within_guaranteed_radius() {
    report(&criterion_9(&opts()).unwrap());
}
