//! Finitely supported exponent vectors and the comparison orders used by
//! the reduction machinery.
//!
//! An [`ExponentVector`] encodes **i** = (..., i_{-1}, i_0, i_1, ...) with
//! finitely many nonzero natural entries.  Three orders matter:
//!
//! - lex: **j** > **i** when the *smallest* differing index carries the
//!   larger entry,
//! - revlex: **j** > **i** when the *largest* differing index carries the
//!   larger entry,
//! - principal (on pairs (**i**, **j**)): weight of **j** first, then
//!   revlex on **j**, then lex on **i**.
//!
//! The principal order acts on split supports: **j** lives on negative
//! multiples of p, **i** on non-multiples of p (either sign).  The weight
//! is w(**i**) = sum |s| * i_s.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};

/// A finitely supported map Z -> N; zero entries are never stored.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct ExponentVector {
    entries: BTreeMap<i64, u64>,
}

impl ExponentVector {
    pub fn zero() -> Self {
        ExponentVector::default()
    }

    /// The unit vector e_s.
    pub fn unit(s: i64) -> Self {
        let mut v = ExponentVector::zero();
        v.add_at(s, 1);
        v
    }

    /// Sums duplicate indices; zero multiplicities are dropped.
    pub fn from_pairs<I: IntoIterator<Item = (i64, u64)>>(pairs: I) -> Self {
        let mut v = ExponentVector::zero();
        for (s, m) in pairs {
            v.add_at(s, m);
        }
        v
    }

    pub fn get(&self, s: i64) -> u64 {
        self.entries.get(&s).copied().unwrap_or(0)
    }

    pub fn add_at(&mut self, s: i64, delta: u64) {
        if delta == 0 {
            return;
        }
        *self.entries.entry(s).or_insert(0) += delta;
    }

    /// Decrements entry s, failing on underflow.
    pub fn sub_at(&mut self, s: i64, delta: u64) -> Result<()> {
        let cur = self.get(s);
        if cur < delta {
            return Err(Error::invalid(format!(
                "exponent underflow at index {s}: {cur} - {delta}"
            )));
        }
        if cur == delta {
            self.entries.remove(&s);
        } else {
            self.entries.insert(s, cur - delta);
        }
        Ok(())
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (i64, u64)> + '_ {
        self.entries.iter().map(|(&s, &m)| (s, m))
    }

    pub fn support(&self) -> impl Iterator<Item = i64> + '_ {
        self.entries.keys().copied()
    }

    pub fn min_support(&self) -> Option<i64> {
        self.entries.keys().next().copied()
    }

    pub fn max_support(&self) -> Option<i64> {
        self.entries.keys().next_back().copied()
    }

    /// Total multiplicity (word length of the monomial it encodes).
    pub fn total(&self) -> u64 {
        self.entries.values().sum()
    }

    /// w(**i**) = sum |s| * i_s.
    pub fn weight(&self) -> u128 {
        self.entries
            .iter()
            .map(|(&s, &m)| s.unsigned_abs() as u128 * m as u128)
            .sum()
    }

    pub fn add(&self, other: &ExponentVector) -> ExponentVector {
        let mut out = self.clone();
        for (s, m) in other.iter() {
            out.add_at(s, m);
        }
        out
    }
}

impl fmt::Display for ExponentVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .entries
            .iter()
            .map(|(s, m)| if *m == 1 { format!("e_{s}") } else { format!("{m}e_{s}") })
            .collect();
        write!(f, "{}", parts.join("+"))
    }
}

/// Which total order a comparison uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OrderKind {
    Lex,
    RevLex,
    Principal,
}

/// Lex/revlex comparison over the union of supports; no dense window is
/// materialized.
pub fn compare(a: &ExponentVector, b: &ExponentVector, kind: OrderKind) -> Ordering {
    match kind {
        OrderKind::Lex => compare_at_extreme(a, b, /*smallest=*/ true),
        OrderKind::RevLex => compare_at_extreme(a, b, /*smallest=*/ false),
        OrderKind::Principal => {
            panic!("principal order compares exponent-vector pairs; use principal_compare")
        }
    }
}

fn compare_at_extreme(a: &ExponentVector, b: &ExponentVector, smallest: bool) -> Ordering {
    let mut keys: Vec<i64> = a.support().chain(b.support()).collect();
    keys.sort_unstable();
    keys.dedup();
    let iter: Box<dyn Iterator<Item = &i64>> = if smallest {
        Box::new(keys.iter())
    } else {
        Box::new(keys.iter().rev())
    };
    for &s in iter {
        match a.get(s).cmp(&b.get(s)) {
            Ordering::Equal => continue,
            other => return other,
        }
    }
    Ordering::Equal
}

/// Checks the M'/M support split: **i** on non-multiples of p, **j** on
/// negative multiples of p.
pub fn validate_split(p: u32, i: &ExponentVector, j: &ExponentVector) -> Result<()> {
    let p = p as i64;
    for s in i.support() {
        if s.rem_euclid(p) == 0 {
            return Err(Error::invalid(format!(
                "index {s} in the non-multiple part is divisible by p={p}"
            )));
        }
    }
    for s in j.support() {
        if s >= 0 || s.rem_euclid(p) != 0 {
            return Err(Error::invalid(format!(
                "index {s} in the multiple part is not a negative multiple of p={p}"
            )));
        }
    }
    Ok(())
}

/// The principal order on pairs (**i**, **j**): compares w(**j**) first,
/// then **j** by revlex, then **i** by lex.
pub fn principal_compare(
    p: u32,
    x: &(ExponentVector, ExponentVector),
    y: &(ExponentVector, ExponentVector),
) -> Result<Ordering> {
    validate_split(p, &x.0, &x.1)?;
    validate_split(p, &y.0, &y.1)?;
    Ok(principal_compare_unchecked(x, y))
}

/// Same order without support validation, for callers whose invariants
/// already guarantee the split.
pub fn principal_compare_unchecked(
    x: &(ExponentVector, ExponentVector),
    y: &(ExponentVector, ExponentVector),
) -> Ordering {
    x.1.weight()
        .cmp(&y.1.weight())
        .then_with(|| compare(&x.1, &y.1, OrderKind::RevLex))
        .then_with(|| compare(&x.0, &y.0, OrderKind::Lex))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ev(pairs: &[(i64, u64)]) -> ExponentVector {
        ExponentVector::from_pairs(pairs.iter().copied())
    }

    #[test]
    fn weight_sums_absolute_index_times_multiplicity() {
        assert_eq!(ExponentVector::zero().weight(), 0);
        assert_eq!(ev(&[(-2, 1), (1, 3)]).weight(), 5);
        assert_eq!(ev(&[(-3, 2)]).weight(), 6);
    }

    #[test]
    fn lex_decides_at_the_smallest_differing_index() {
        let a = ExponentVector::unit(-2);
        let b = ExponentVector::unit(-1);
        assert_eq!(compare(&a, &b, OrderKind::Lex), Ordering::Greater);
        assert_eq!(compare(&b, &a, OrderKind::Lex), Ordering::Less);
        assert_eq!(compare(&a, &a, OrderKind::Lex), Ordering::Equal);
    }

    #[test]
    fn revlex_decides_at_the_largest_differing_index() {
        let a = ExponentVector::unit(-1);
        let b = ExponentVector::unit(-2);
        assert_eq!(compare(&a, &b, OrderKind::RevLex), Ordering::Greater);
        assert_eq!(compare(&b, &a, OrderKind::RevLex), Ordering::Less);
    }

    #[test]
    fn principal_clause_weight_dominates() {
        let x = (ExponentVector::zero(), ExponentVector::unit(-3));
        let y = (ExponentVector::unit(-1), ExponentVector::zero());
        assert_eq!(principal_compare(3, &x, &y).unwrap(), Ordering::Greater);
        let same = (ExponentVector::zero(), ev(&[(-3, 1), (-6, 1)]));
        assert_eq!(principal_compare(3, &same, &same).unwrap(), Ordering::Equal);
    }

    #[test]
    fn principal_clause_three_uses_lex_on_the_left_part() {
        let x = (ExponentVector::unit(-1), ExponentVector::unit(-3));
        let y = (ExponentVector::unit(-2), ExponentVector::unit(-3));
        assert_eq!(principal_compare(3, &x, &y).unwrap(), Ordering::Less);
    }

    #[test]
    fn principal_clause_two_uses_revlex_on_the_multiple_part() {
        // equal weight 6: e_{-6} vs 2e_{-3}; revlex compares at -3 first
        let x = (ExponentVector::zero(), ExponentVector::unit(-6));
        let y = (ExponentVector::zero(), ev(&[(-3, 2)]));
        assert_eq!(principal_compare(3, &x, &y).unwrap(), Ordering::Less);
    }

    #[test]
    fn split_validation_rejects_misplaced_support() {
        let bad_i = ExponentVector::unit(-3);
        assert!(validate_split(3, &bad_i, &ExponentVector::zero()).is_err());
        let bad_j = ExponentVector::unit(-4);
        assert!(validate_split(3, &ExponentVector::zero(), &bad_j).is_err());
        let positive_j = ExponentVector::unit(3);
        assert!(validate_split(3, &ExponentVector::zero(), &positive_j).is_err());
        // positive non-multiples are legal on the left part
        let pos_i = ExponentVector::unit(2);
        assert!(validate_split(3, &pos_i, &ExponentVector::zero()).is_ok());
    }

    #[test]
    fn unit_arithmetic_round_trips() {
        let mut v = ev(&[(-2, 2), (1, 1)]);
        assert_eq!(v.total(), 3);
        v.sub_at(-2, 1).unwrap();
        assert_eq!(v.get(-2), 1);
        v.sub_at(-2, 1).unwrap();
        assert_eq!(v.get(-2), 0);
        assert!(v.sub_at(-2, 1).is_err());
        assert_eq!(v, ExponentVector::unit(1));
    }

    #[test]
    fn zero_pair_is_the_principal_minimum() {
        let zero = (ExponentVector::zero(), ExponentVector::zero());
        let candidates = [
            (ExponentVector::unit(-1), ExponentVector::zero()),
            (ExponentVector::zero(), ExponentVector::unit(-3)),
            (ExponentVector::unit(2), ExponentVector::unit(-6)),
        ];
        for c in &candidates {
            assert_eq!(principal_compare(3, &zero, c).unwrap(), Ordering::Less);
        }
    }
}
