//! Randomized property checks for the PBW engine: schedule independence,
//! filtration, grading preservation, and totality of the principal order.

use std::cmp::Ordering;

use num::{BigRational, Zero};
use rand::Rng;

use gapvira::algebra::{AlgebraId, Family, Gen};
use gapvira::exponents::{principal_compare, ExponentVector};
use gapvira::pbw::{normal_form_with, PbwMonomial, SwapSchedule, UeaElement};
use gapvira::rng::seeded_rng;

fn random_letter<R: Rng>(rng: &mut R, alg: AlgebraId, allow_central: bool) -> Gen {
    let p = alg.p();
    let idx = rng.gen_range(-4..=4i64);
    match alg.family() {
        Family::Gap => {
            if allow_central && rng.gen_ratio(1, 8) {
                Gen::C(rng.gen_range(0..=(p / 2)))
            } else {
                Gen::L(idx)
            }
        }
        Family::Np => {
            if allow_central && rng.gen_ratio(1, 8) {
                Gen::K(rng.gen_range(0..=(p / 2)))
            } else if rng.gen_bool(0.5) {
                Gen::T(idx)
            } else {
                Gen::N(rng.gen_range(1..p), idx)
            }
        }
    }
}

fn random_word<R: Rng>(rng: &mut R, alg: AlgebraId, max_len: usize, allow_central: bool) -> Vec<Gen> {
    let len = rng.gen_range(0..=max_len);
    (0..len).map(|_| random_letter(rng, alg, allow_central)).collect()
}

#[test]
fn straightening_is_schedule_independent() {
    let mut rng = seeded_rng();
    for p in [2u32, 3] {
        for alg in [AlgebraId::gap(p).unwrap(), AlgebraId::np(p).unwrap()] {
            for _ in 0..500 {
                let word = random_word(&mut rng, alg, 4, true);
                let a = normal_form_with(alg, &word, SwapSchedule::Leftmost).unwrap();
                let b = normal_form_with(alg, &word, SwapSchedule::Rightmost).unwrap();
                assert_eq!(a, b, "schedules disagree on {word:?} (p={p})");
            }
        }
    }
}

#[test]
fn filtration_keeps_one_full_length_monomial() {
    let mut rng = seeded_rng();
    for p in [2u32, 3] {
        for alg in [AlgebraId::gap(p).unwrap(), AlgebraId::np(p).unwrap()] {
            for _ in 0..300 {
                let word = random_word(&mut rng, alg, 4, false);
                let nf = normal_form_with(alg, &word, SwapSchedule::Leftmost).unwrap();
                let input_len = word.len() as u64;
                let mut full = 0usize;
                for (m, c) in nf.terms() {
                    assert!(
                        m.word_len() <= input_len,
                        "monomial {m} longer than input {word:?}"
                    );
                    if m.word_len() == input_len {
                        full += 1;
                        assert!(
                            c.is_one(),
                            "straightened word must keep coefficient 1, got {c} on {word:?}"
                        );
                    }
                }
                assert_eq!(full, 1, "expected exactly one full-length monomial for {word:?}");
            }
        }
    }
}

#[test]
fn straightening_preserves_total_grade() {
    let mut rng = seeded_rng();
    for p in [2u32, 3] {
        for alg in [AlgebraId::gap(p).unwrap(), AlgebraId::np(p).unwrap()] {
            for _ in 0..200 {
                let word = random_word(&mut rng, alg, 4, true);
                let input_grade: BigRational = word
                    .iter()
                    .map(|g| g.canonical(alg).unwrap().grade(alg))
                    .fold(BigRational::zero(), |a, b| a + b);
                let nf = normal_form_with(alg, &word, SwapSchedule::Leftmost).unwrap();
                for (m, _) in nf.terms() {
                    assert_eq!(m.grade(alg), input_grade, "grade drift on {word:?}");
                }
            }
        }
    }
}

#[test]
fn products_of_generators_commute_to_the_bracket() {
    let mut rng = seeded_rng();
    for p in [2u32, 3] {
        for alg in [AlgebraId::gap(p).unwrap(), AlgebraId::np(p).unwrap()] {
            for _ in 0..100 {
                let a = random_letter(&mut rng, alg, false);
                let b = random_letter(&mut rng, alg, false);
                let xa = normal_form_with(alg, &[a], SwapSchedule::Leftmost).unwrap();
                let xb = normal_form_with(alg, &[b], SwapSchedule::Leftmost).unwrap();
                let comm = xa
                    .multiply(&xb)
                    .unwrap()
                    .sub(&xb.multiply(&xa).unwrap())
                    .unwrap();
                // lift the Lie bracket into the enveloping algebra
                let br = gapvira::algebra::bracket_gens(alg, a, b).unwrap();
                let mut lifted = UeaElement::zero(alg);
                for (g, c) in br.terms() {
                    let gen_elt = normal_form_with(alg, &[*g], SwapSchedule::Leftmost).unwrap();
                    lifted = lifted.add(&gen_elt.scale(c)).unwrap();
                }
                assert_eq!(comm, lifted, "commutator mismatch on [{a}, {b}] (p={p})");
            }
        }
    }
}

#[test]
fn multiplication_is_associative_on_random_words() {
    let mut rng = seeded_rng();
    for p in [2u32, 3] {
        let alg = AlgebraId::gap(p).unwrap();
        for _ in 0..50 {
            let a = normal_form_with(alg, &random_word(&mut rng, alg, 3, true), SwapSchedule::Leftmost)
                .unwrap();
            let b = normal_form_with(alg, &random_word(&mut rng, alg, 3, true), SwapSchedule::Leftmost)
                .unwrap();
            let c = normal_form_with(alg, &random_word(&mut rng, alg, 3, true), SwapSchedule::Leftmost)
                .unwrap();
            let left = a.multiply(&b).unwrap().multiply(&c).unwrap();
            let right = a.multiply(&b.multiply(&c).unwrap()).unwrap();
            assert_eq!(left, right);
        }
    }
}

fn random_split_pair<R: Rng>(rng: &mut R, p: u32) -> (ExponentVector, ExponentVector) {
    let p = p as i64;
    let mut i = ExponentVector::zero();
    let mut j = ExponentVector::zero();
    for _ in 0..rng.gen_range(0..4) {
        let mut s = rng.gen_range(-9..=9i64);
        if s.rem_euclid(p) == 0 {
            s += 1; // nudge onto a non-multiple
        }
        i.add_at(s, rng.gen_range(1..3u64));
    }
    for _ in 0..rng.gen_range(0..4) {
        let s = -p * rng.gen_range(1..=3i64);
        j.add_at(s, rng.gen_range(1..3u64));
    }
    (i, j)
}

#[test]
fn principal_order_is_total_antisymmetric_transitive() {
    let mut rng = seeded_rng();
    let p = 3u32;
    for _ in 0..1000 {
        let a = random_split_pair(&mut rng, p);
        let b = random_split_pair(&mut rng, p);
        let c = random_split_pair(&mut rng, p);
        let ab = principal_compare(p, &a, &b).unwrap();
        let ba = principal_compare(p, &b, &a).unwrap();
        assert_eq!(ab, ba.reverse(), "antisymmetry fails on {a:?} vs {b:?}");
        if ab == Ordering::Equal {
            assert_eq!(a, b, "EQ must mean identical pairs");
        }
        let bc = principal_compare(p, &b, &c).unwrap();
        let ac = principal_compare(p, &a, &c).unwrap();
        if ab == Ordering::Less && bc == Ordering::Less {
            assert_eq!(ac, Ordering::Less, "transitivity fails");
        }
        if ab == Ordering::Greater && bc == Ordering::Greater {
            assert_eq!(ac, Ordering::Greater, "transitivity fails");
        }
    }
}

#[test]
fn normal_form_word_exponents_respect_the_split_order() {
    // a straightened gap word sorts ascending: L[-3] then L[-1] then L[2]
    let alg = AlgebraId::gap(3).unwrap();
    let nf = normal_form_with(
        alg,
        &[Gen::L(2), Gen::L(-1), Gen::L(-3)],
        SwapSchedule::Leftmost,
    )
    .unwrap();
    let full: Vec<&PbwMonomial> = nf
        .terms()
        .filter(|(m, _)| m.word_len() == 3)
        .map(|(m, _)| m)
        .collect();
    assert_eq!(full.len(), 1);
    let letters: Vec<Gen> = full[0].letters().collect();
    assert_eq!(letters, vec![Gen::L(-3), Gen::L(-1), Gen::L(2)]);
}
