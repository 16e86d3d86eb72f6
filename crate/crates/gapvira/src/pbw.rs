//! PBW normal ordering in the universal enveloping algebras.
//!
//! A word of generators is straightened by repeatedly swapping adjacent
//! out-of-order pairs x_a x_b into x_b x_a + [x_a, x_b] and recursing on
//! the bracket terms; central generators commute out into a separate
//! multidegree.  Normal order is ascending integer index; in the companion
//! family T_m precedes N^i_m at equal index and equal-index N generators
//! sort by superscript.  The rewriter terminates because each step either
//! shortens the word (bracket term) or removes one adjacent inversion
//! (swap), i.e. the measure (word length, inversion count) drops
//! lexicographically.  The result is schedule-independent.

use std::collections::BTreeMap;
use std::fmt;

use num::{BigRational, Zero};

use crate::algebra::{bracket_gens, AlgebraId, Gen};
use crate::error::{Error, Result};
use crate::exponents::ExponentVector;
use crate::scalar::Cyclo;

/// Position of a non-central generator in normal order.
pub(crate) fn pbw_key(g: &Gen) -> (i64, u8, u32) {
    match g {
        Gen::L(m) | Gen::T(m) => (*m, 0, 0),
        Gen::N(i, m) => (*m, 1, *i),
        Gen::C(_) | Gen::K(_) => unreachable!("centrals never enter the ordered word"),
    }
}

/// A normal-ordered monomial: non-central word (with multiplicities)
/// ascending under the PBW order, times a central multidegree.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct PbwMonomial {
    word: Vec<(Gen, u64)>,
    central: BTreeMap<u32, u64>,
}

impl PbwMonomial {
    pub fn one() -> Self {
        PbwMonomial::default()
    }

    /// Builds from an arbitrary multiset of non-central generators (sorted
    /// here) and a central multidegree.
    pub(crate) fn from_parts(gens: Vec<Gen>, central: BTreeMap<u32, u64>) -> Self {
        let mut sorted = gens;
        sorted.sort_by_key(pbw_key);
        let mut word: Vec<(Gen, u64)> = Vec::new();
        for g in sorted {
            match word.last_mut() {
                Some((last, m)) if *last == g => *m += 1,
                _ => word.push((g, 1)),
            }
        }
        PbwMonomial { word, central }
    }

    /// Generator factors in normal order with multiplicities.
    pub fn word(&self) -> &[(Gen, u64)] {
        &self.word
    }

    /// Central multidegree, index -> power.
    pub fn central(&self) -> &BTreeMap<u32, u64> {
        &self.central
    }

    /// Expands the word into a flat generator sequence.
    pub fn letters(&self) -> impl Iterator<Item = Gen> + '_ {
        self.word.iter().flat_map(|(g, m)| std::iter::repeat(*g).take(*m as usize))
    }

    /// Number of non-central letters.
    pub fn word_len(&self) -> u64 {
        self.word.iter().map(|(_, m)| m).sum()
    }

    pub fn is_one(&self) -> bool {
        self.word.is_empty() && self.central.is_empty()
    }

    /// The word as an index -> multiplicity map; defined for gap-family
    /// monomials whose letters are determined by their index alone.
    pub fn exponents(&self) -> ExponentVector {
        ExponentVector::from_pairs(self.word.iter().map(|(g, m)| match g {
            Gen::L(s) | Gen::T(s) => (*s, *m),
            Gen::N(_, s) => (*s, *m),
            _ => unreachable!("centrals never enter the ordered word"),
        }))
    }

    /// Total grade: sum of letter grades (centrals contribute 0).
    pub fn grade(&self, alg: AlgebraId) -> BigRational {
        let mut total = BigRational::zero();
        for (g, m) in &self.word {
            total += g.grade(alg) * BigRational::from_integer((*m).into());
        }
        total
    }
}

impl fmt::Display for PbwMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            return write!(f, "1");
        }
        let mut parts = Vec::new();
        for (g, m) in &self.word {
            if *m == 1 {
                parts.push(g.to_string());
            } else {
                parts.push(format!("{g}^{m}"));
            }
        }
        for (i, m) in &self.central {
            // the monomial does not know its family, so central letters
            // print with the neutral letter Z; element context (which
            // knows the family) can substitute C or K when rendering
            if *m == 1 {
                parts.push(format!("Z[{i}]"));
            } else {
                parts.push(format!("Z[{i}]^{m}"));
            }
        }
        write!(f, "{}", parts.join("*"))
    }
}

/// An enveloping-algebra element: normal-ordered monomials with cyclotomic
/// coefficients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UeaElement {
    alg: AlgebraId,
    terms: BTreeMap<PbwMonomial, Cyclo>,
}

/// Which adjacent inversion the rewriter resolves first; used to
/// demonstrate schedule independence.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SwapSchedule {
    Leftmost,
    Rightmost,
}

impl UeaElement {
    pub fn zero(alg: AlgebraId) -> Self {
        UeaElement { alg, terms: BTreeMap::new() }
    }

    /// The multiplicative identity (empty monomial).
    pub fn one(alg: AlgebraId) -> Self {
        let mut out = UeaElement::zero(alg);
        out.add_term(PbwMonomial::one(), Cyclo::one(alg.p()));
        out
    }

    pub fn alg(&self) -> AlgebraId {
        self.alg
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&PbwMonomial, &Cyclo)> {
        self.terms.iter()
    }

    pub fn coeff(&self, mono: &PbwMonomial) -> Cyclo {
        self.terms.get(mono).cloned().unwrap_or_else(|| Cyclo::zero(self.alg.p()))
    }

    fn add_term(&mut self, mono: PbwMonomial, coeff: Cyclo) {
        if coeff.is_zero() {
            return;
        }
        let entry = self
            .terms
            .entry(mono)
            .or_insert_with(|| Cyclo::zero(self.alg.p()));
        *entry = entry.add(&coeff);
        if entry.is_zero() {
            let mono = self
                .terms
                .iter()
                .find(|(_, c)| c.is_zero())
                .map(|(m, _)| m.clone());
            if let Some(m) = mono {
                self.terms.remove(&m);
            }
        }
    }

    pub fn add(&self, other: &UeaElement) -> Result<UeaElement> {
        if self.alg != other.alg {
            return Err(Error::mismatch("enveloping elements from different algebras".to_string()));
        }
        let mut out = self.clone();
        for (m, c) in other.terms() {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &UeaElement) -> Result<UeaElement> {
        self.add(&other.scale(&Cyclo::from_int(self.alg.p(), -1)))
    }

    pub fn scale(&self, factor: &Cyclo) -> UeaElement {
        let mut out = UeaElement::zero(self.alg);
        if factor.is_zero() {
            return out;
        }
        for (m, c) in self.terms() {
            out.terms.insert(m.clone(), c.mul(factor));
        }
        out
    }

    /// Product via concatenation and re-normalization.
    pub fn multiply(&self, other: &UeaElement) -> Result<UeaElement> {
        if self.alg != other.alg {
            return Err(Error::mismatch("enveloping elements from different algebras".to_string()));
        }
        let mut out = UeaElement::zero(self.alg);
        for (ma, ca) in self.terms() {
            for (mb, cb) in other.terms() {
                let mut word: Vec<Gen> = ma.letters().collect();
                word.extend(mb.letters());
                let mut central = ma.central().clone();
                for (i, m) in mb.central() {
                    *central.entry(*i).or_insert(0) += m;
                }
                let part = normal_form_seeded(
                    self.alg,
                    &word,
                    central,
                    ca.mul(cb),
                    SwapSchedule::Leftmost,
                )?;
                out = out.add(&part)?;
            }
        }
        Ok(out)
    }
}

impl fmt::Display for UeaElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}",
            crate::algebra::render_terms(self.terms.iter().map(|(m, c)| (m.to_string(), c)))
        )
    }
}

/// Straightens a generator word into PBW normal form.
pub fn normal_form(alg: AlgebraId, word: &[Gen]) -> Result<UeaElement> {
    normal_form_with(alg, word, SwapSchedule::Leftmost)
}

/// Same, with an explicit swap schedule (the result must not depend on it).
pub fn normal_form_with(
    alg: AlgebraId,
    word: &[Gen],
    schedule: SwapSchedule,
) -> Result<UeaElement> {
    for g in word {
        g.canonical(alg)?;
    }
    normal_form_seeded(alg, word, BTreeMap::new(), Cyclo::one(alg.p()), schedule)
}

fn find_inversion(word: &[Gen], schedule: SwapSchedule) -> Option<usize> {
    let positions = 0..word.len().saturating_sub(1);
    let out_of_order = |t: &usize| pbw_key(&word[*t]) > pbw_key(&word[*t + 1]);
    match schedule {
        SwapSchedule::Leftmost => positions.clone().find(|t| out_of_order(t)),
        SwapSchedule::Rightmost => positions.rev().find(|t| out_of_order(t)),
    }
}

fn normal_form_seeded(
    alg: AlgebraId,
    word: &[Gen],
    central: BTreeMap<u32, u64>,
    coeff: Cyclo,
    schedule: SwapSchedule,
) -> Result<UeaElement> {
    let mut out = UeaElement::zero(alg);
    if coeff.is_zero() {
        return Ok(out);
    }
    let mut stack: Vec<(Vec<Gen>, BTreeMap<u32, u64>, Cyclo)> =
        vec![(word.to_vec(), central, coeff)];
    while let Some((mut w, mut central, coeff)) = stack.pop() {
        // centrals commute freely: fold them into the multidegree
        let mut kept = Vec::with_capacity(w.len());
        for g in w.drain(..) {
            match g.canonical(alg)? {
                Gen::C(i) | Gen::K(i) => *central.entry(i).or_insert(0) += 1,
                g => kept.push(g),
            }
        }
        let w = kept;
        match find_inversion(&w, schedule) {
            None => out.add_term(PbwMonomial::from_parts(w, central), coeff),
            Some(t) => {
                let (a, b) = (w[t], w[t + 1]);
                let mut swapped = w.clone();
                swapped.swap(t, t + 1);
                stack.push((swapped, central.clone(), coeff.clone()));
                for (g, c) in bracket_gens(alg, a, b)?.terms() {
                    let mut shorter: Vec<Gen> = w[..t].to_vec();
                    shorter.push(*g);
                    shorter.extend_from_slice(&w[t + 2..]);
                    stack.push((shorter, central.clone(), coeff.mul(c)));
                }
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::LieElement;

    fn gap(p: u32) -> AlgebraId {
        AlgebraId::gap(p).unwrap()
    }

    fn mono(alg: AlgebraId, gens: &[Gen], central: &[(u32, u64)]) -> PbwMonomial {
        for g in gens {
            g.canonical(alg).unwrap();
        }
        PbwMonomial::from_parts(gens.to_vec(), central.iter().copied().collect())
    }

    #[test]
    fn single_swap_produces_the_central_term() {
        let alg = gap(3);
        let nf = normal_form(alg, &[Gen::L(1), Gen::L(-1)]).unwrap();
        let mut want = UeaElement::zero(alg);
        want.add_term(mono(alg, &[Gen::L(-1), Gen::L(1)], &[]), Cyclo::one(3));
        want.add_term(mono(alg, &[], &[(1, 1)]), Cyclo::one(3));
        assert_eq!(nf, want);
    }

    #[test]
    fn multiple_of_p_pair_reduces_to_l_zero() {
        let alg = gap(3);
        let nf = normal_form(alg, &[Gen::L(3), Gen::L(-3)]).unwrap();
        let mut want = UeaElement::zero(alg);
        want.add_term(mono(alg, &[Gen::L(-3), Gen::L(3)], &[]), Cyclo::one(3));
        want.add_term(mono(alg, &[Gen::L(0)], &[]), Cyclo::from_int(3, -6));
        assert_eq!(nf, want);
    }

    #[test]
    fn ordered_words_pass_through() {
        let alg = gap(3);
        let nf = normal_form(alg, &[Gen::L(0), Gen::L(0)]).unwrap();
        let mut want = UeaElement::zero(alg);
        want.add_term(mono(alg, &[Gen::L(0), Gen::L(0)], &[]), Cyclo::one(3));
        assert_eq!(nf, want);
    }

    #[test]
    fn schedules_agree_on_a_hard_word() {
        let alg = gap(2);
        let word = [Gen::L(2), Gen::L(1), Gen::L(-1), Gen::L(-2)];
        let a = normal_form_with(alg, &word, SwapSchedule::Leftmost).unwrap();
        let b = normal_form_with(alg, &word, SwapSchedule::Rightmost).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn commutator_of_products_matches_the_bracket() {
        let alg = gap(3);
        let x = normal_form(alg, &[Gen::L(1)]).unwrap();
        let y = normal_form(alg, &[Gen::L(-1)]).unwrap();
        let comm = x.multiply(&y).unwrap().sub(&y.multiply(&x).unwrap()).unwrap();
        let mut want = UeaElement::zero(alg);
        want.add_term(mono(alg, &[], &[(1, 1)]), Cyclo::one(3));
        assert_eq!(comm, want);
        // and in the algebra itself
        let br = LieElement::generator(alg, Gen::L(1))
            .unwrap()
            .bracket(&LieElement::generator(alg, Gen::L(-1)).unwrap())
            .unwrap();
        assert_eq!(br, LieElement::generator(alg, Gen::C(1)).unwrap());
    }

    #[test]
    fn identity_element_is_neutral() {
        let alg = gap(3);
        let x = normal_form(alg, &[Gen::L(2), Gen::L(-2), Gen::L(1)]).unwrap();
        assert_eq!(UeaElement::one(alg).multiply(&x).unwrap(), x);
        assert_eq!(x.multiply(&UeaElement::one(alg)).unwrap(), x);
    }

    #[test]
    fn multiplication_is_associative_on_a_sample() {
        let alg = gap(3);
        let a = normal_form(alg, &[Gen::L(2)]).unwrap();
        let b = normal_form(alg, &[Gen::L(1)]).unwrap();
        let c = normal_form(alg, &[Gen::L(-3)]).unwrap();
        let left = a.multiply(&b).unwrap().multiply(&c).unwrap();
        let right = a.multiply(&b.multiply(&c).unwrap()).unwrap();
        assert_eq!(left, right);
    }

    #[test]
    fn companion_family_words_straighten_too() {
        let alg = AlgebraId::np(2).unwrap();
        // T_1 N^1_1 is already ordered (T before N at equal index)
        let nf = normal_form(alg, &[Gen::T(1), Gen::N(1, 1)]).unwrap();
        let mut want = UeaElement::zero(alg);
        want.add_term(mono(alg, &[Gen::T(1), Gen::N(1, 1)], &[]), Cyclo::one(2));
        assert_eq!(nf, want);
        // the reversed word needs one swap and one bracket term
        let nf = normal_form(alg, &[Gen::N(1, 1), Gen::T(1)]).unwrap();
        let mut want = UeaElement::zero(alg);
        want.add_term(mono(alg, &[Gen::T(1), Gen::N(1, 1)], &[]), Cyclo::one(2));
        want.add_term(mono(alg, &[Gen::N(1, 2)], &[]), Cyclo::one(2));
        assert_eq!(nf, want);
    }

    #[test]
    fn grading_is_preserved_by_straightening() {
        let alg = gap(3);
        let word = [Gen::L(4), Gen::L(-1), Gen::L(-3)];
        let input_grade: BigRational = word
            .iter()
            .map(|g| g.grade(alg))
            .fold(BigRational::zero(), |a, b| a + b);
        let nf = normal_form(alg, &word).unwrap();
        assert!(!nf.is_zero());
        for (m, _) in nf.terms() {
            assert_eq!(m.grade(alg), input_grade, "monomial {m} changed grade");
        }
    }

    #[test]
    fn exponent_view_matches_the_word() {
        let alg = gap(3);
        let nf = normal_form(alg, &[Gen::L(-3), Gen::L(-1), Gen::L(-1)]).unwrap();
        assert_eq!(nf.terms().count(), 1, "ordered words straighten to themselves");
        let (m, _) = nf.terms().next().unwrap();
        let exp = m.exponents();
        assert_eq!(exp.get(-1), 2);
        assert_eq!(exp.get(-3), 1);
        assert_eq!(m.word_len(), 3);
    }
}
