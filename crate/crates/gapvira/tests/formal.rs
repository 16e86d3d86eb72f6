//! Window checks for the delta-function commutator identities.

use num::{BigInt, BigRational};

use gapvira::algebra::Family;
use gapvira::formal::{
    all_relations, verify_commutator_identity, verify_mode_dictionary, window_labels,
};

fn ratio(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Every relation family of both algebras holds coefficientwise over the
/// [-6, 6] mode window, symbolically and at three rational levels.
#[test]
fn commutator_identities_hold_over_the_window() {
    let levels = [None, Some(ratio(0, 1)), Some(ratio(1, 1)), Some(ratio(7, 2))];
    for p in [2u32, 3, 4, 5] {
        for family in [Family::Gap, Family::Np] {
            for relation in all_relations(p, family) {
                for (la, lb) in window_labels(p, relation, 6) {
                    for level in &levels {
                        let check =
                            verify_commutator_identity(p, relation, &la, &lb, level.as_ref())
                                .unwrap();
                        assert!(
                            check.holds,
                            "p={p} {relation} at ({la},{lb}): lhs={} rhs={}",
                            check.lhs, check.rhs
                        );
                    }
                }
            }
        }
    }
}

/// The two families' structure constants agree under the mode
/// identification, over the window, at three rational levels.
#[test]
fn mode_dictionary_agrees_over_the_window() {
    for p in [2u32, 3, 4, 5] {
        for l0 in [ratio(0, 1), ratio(1, 1), ratio(7, 2)] {
            let report = verify_mode_dictionary(p, &l0, 6).unwrap();
            for entry in &report.entries {
                assert!(
                    entry.holds,
                    "p={p} l0={l0}: {} vs {} disagreed over {} label pairs",
                    entry.gap_relation, entry.np_relation, entry.pairs_checked
                );
            }
            assert!(report.holds);
        }
    }
}
