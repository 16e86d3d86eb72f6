//! Formal delta-function calculus for the generating-function commutators.
//!
//! Both algebra families package their brackets into bivariate delta
//! identities.  With the expansion
//!
//!   delta(x2/x1) (x2/x1)^s = sum over r in s+Z of x2^r x1^{-r-1},
//!
//! the coefficient of x1^a x2^b in d/dx2^k ( x1^{-1} delta(x2/x1)(x2/x1)^s )
//! is the falling factorial (b+k)(b+k-1)...(b+1) when a = -(b+k)-1 and
//! b+k lies on the s+Z lattice, else 0 ([`delta_coefficient`]).
//!
//! Series conventions (fractional mode labels):
//!
//! - Virasoro-like: A(x) = sum A(n) x^{-n-2}, weight 2, integer labels;
//! - fractional family Ih^i: labels in i/p + Z, weight 1;
//! - companion N^i: integer labels, weight 1.
//!
//! Each relation family carries a short list of [`DeltaTerm`]s; the right
//! side of a commutator is the term list evaluated coefficientwise, the
//! left side is the plain Lie bracket of the two mode operators.  The two
//! computations are independent; [`verify_commutator_identity`] compares
//! them exactly.  [`verify_mode_dictionary`] additionally compares the two
//! families against each other under the mode identification (shared term
//! data, matched labels, centrals substituted by the level).

use std::collections::BTreeMap;
use std::fmt;

use num::{BigInt, BigRational, One, Zero};

use crate::algebra::{AlgebraId, Family, Gen, LieElement};
use crate::error::{Error, Result};
use crate::rescaled::{bracket_rescaled_gens, RescaledGen};

fn ratio(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn is_integer(q: &BigRational) -> bool {
    q.denom().is_one()
}

/// Coefficient of x1^a x2^b in d/dx2^k (x1^{-1} delta(x2/x1)(x2/x1)^s).
pub fn delta_coefficient(k: u32, s: &BigRational, a: &BigRational, b: &BigRational) -> BigRational {
    let r = b + BigRational::from_integer(BigInt::from(k));
    if !is_integer(&(&r - s)) {
        return BigRational::zero();
    }
    if *a != -(&r) - BigRational::one() {
        return BigRational::zero();
    }
    falling(&r, k)
}

/// r (r-1) ... (r-k+1).
fn falling(r: &BigRational, k: u32) -> BigRational {
    let mut out = BigRational::one();
    for t in 0..k {
        out *= r - BigRational::from_integer(BigInt::from(t));
    }
    out
}

/// One generating function appearing in a relation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum SeriesKind {
    /// Rescaled Virasoro-like gap series (weight 2, integer labels).
    L,
    /// Fractional gap series Ih^i (weight 1, labels in i/p + Z).
    I(u32),
    /// Companion Virasoro series (weight 2, integer labels).
    T,
    /// Companion current N^i (weight 1, integer labels).
    N(u32),
}

impl SeriesKind {
    fn weight(&self) -> BigRational {
        match self {
            SeriesKind::L | SeriesKind::T => ratio(2, 1),
            SeriesKind::I(_) | SeriesKind::N(_) => ratio(1, 1),
        }
    }

    /// Fractional offset of the label lattice within (1/p)Z.
    fn lattice_offset(&self, p: u32) -> BigRational {
        match self {
            SeriesKind::I(i) => ratio(*i as i64, p as i64),
            _ => BigRational::zero(),
        }
    }

    /// The mode operator at an on-lattice label.
    fn op_at(&self, p: u32, label: &BigRational) -> Result<OpKey> {
        let shifted = label - self.lattice_offset(p);
        if !is_integer(&shifted) {
            return Err(Error::invalid(format!(
                "label {label} is off the lattice of the {self:?} series"
            )));
        }
        let n: i64 = integer_part(&shifted)?;
        Ok(match self {
            SeriesKind::L => OpKey::Gap(RescaledGen::LHat(n)),
            SeriesKind::I(i) => OpKey::Gap(RescaledGen::IHat(*i, n)),
            SeriesKind::T => OpKey::Np(Gen::T(n)),
            SeriesKind::N(i) => OpKey::Np(Gen::N(*i, n)),
        })
    }
}

fn integer_part(q: &BigRational) -> Result<i64> {
    use num::ToPrimitive;
    q.to_integer()
        .to_i64()
        .ok_or_else(|| Error::invalid(format!("mode label {q} out of machine range")))
}

/// What multiplies one delta expression on the right side.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OperatorLabel {
    /// d/dx2 of the second series.
    SeriesDerivative,
    /// c times the second series.
    Series(BigRational),
    /// c times a central generator (canonical index).
    Central(BigRational, u32),
}

/// One summand of a commutator right side: operator times
/// d/dx2^k (x1^{-1} delta (x2/x1)^s).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DeltaTerm {
    pub derivative_order: u32,
    pub fractional_shift: BigRational,
    pub operator: OperatorLabel,
}

/// A commutator family from one of the two delta identities.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    LL,
    LI(u32),
    II(u32, u32),
    TT,
    TN(u32),
    NN(u32, u32),
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Relation::LL => write!(f, "LL"),
            Relation::LI(i) => write!(f, "LI({i})"),
            Relation::II(i, j) => write!(f, "II({i},{j})"),
            Relation::TT => write!(f, "TT"),
            Relation::TN(i) => write!(f, "TN({i})"),
            Relation::NN(i, j) => write!(f, "NN({i},{j})"),
        }
    }
}

impl Relation {
    pub fn family(&self) -> Family {
        match self {
            Relation::LL | Relation::LI(_) | Relation::II(_, _) => Family::Gap,
            _ => Family::Np,
        }
    }

    fn series(&self) -> (SeriesKind, SeriesKind) {
        match self {
            Relation::LL => (SeriesKind::L, SeriesKind::L),
            Relation::LI(i) => (SeriesKind::L, SeriesKind::I(*i)),
            Relation::II(i, j) => (SeriesKind::I(*i), SeriesKind::I(*j)),
            Relation::TT => (SeriesKind::T, SeriesKind::T),
            Relation::TN(i) => (SeriesKind::T, SeriesKind::N(*i)),
            Relation::NN(i, j) => (SeriesKind::N(*i), SeriesKind::N(*j)),
        }
    }

    fn validate(&self, p: u32) -> Result<()> {
        let sup_ok = |i: u32| i >= 1 && i <= p - 1;
        let ok = match self {
            Relation::LL | Relation::TT => true,
            Relation::LI(i) | Relation::TN(i) => sup_ok(*i),
            Relation::II(i, j) | Relation::NN(i, j) => sup_ok(*i) && sup_ok(*j),
        };
        if ok {
            Ok(())
        } else {
            Err(Error::invalid(format!("superscripts of {self} out of range for p={p}")))
        }
    }

    /// The delta-term data of the relation's right side.
    pub fn delta_terms(&self, p: u32) -> Vec<DeltaTerm> {
        let zero = BigRational::zero();
        let virasoro = |central: u32| {
            vec![
                DeltaTerm {
                    derivative_order: 0,
                    fractional_shift: zero.clone(),
                    operator: OperatorLabel::SeriesDerivative,
                },
                DeltaTerm {
                    derivative_order: 1,
                    fractional_shift: zero.clone(),
                    operator: OperatorLabel::Series(ratio(2, 1)),
                },
                DeltaTerm {
                    derivative_order: 3,
                    fractional_shift: zero.clone(),
                    operator: OperatorLabel::Central(ratio(1, 12), central),
                },
            ]
        };
        let primary = || {
            vec![
                DeltaTerm {
                    derivative_order: 0,
                    fractional_shift: zero.clone(),
                    operator: OperatorLabel::SeriesDerivative,
                },
                DeltaTerm {
                    derivative_order: 1,
                    fractional_shift: zero.clone(),
                    operator: OperatorLabel::Series(BigRational::one()),
                },
            ]
        };
        match self {
            Relation::LL | Relation::TT => virasoro(0),
            Relation::LI(_) | Relation::TN(_) => primary(),
            Relation::II(i, _) => vec![DeltaTerm {
                derivative_order: 1,
                fractional_shift: ratio(*i as i64, p as i64),
                operator: OperatorLabel::Central(BigRational::one(), (*i).min(p - *i)),
            }],
            Relation::NN(i, j) => {
                if i + j == p {
                    vec![DeltaTerm {
                        derivative_order: 1,
                        fractional_shift: zero,
                        operator: OperatorLabel::Central(BigRational::one(), (*i).min(p - *i)),
                    }]
                } else {
                    Vec::new()
                }
            }
        }
    }
}

/// A basis operator in a commutator result.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum OpKey {
    /// The identity operator (scalar part after level substitution).
    Scalar,
    Gap(RescaledGen),
    Np(Gen),
}

impl fmt::Display for OpKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OpKey::Scalar => write!(f, "1"),
            OpKey::Gap(g) => write!(f, "{g}"),
            OpKey::Np(g) => write!(f, "{g}"),
        }
    }
}

/// A rational combination of basis operators.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct OpSum {
    terms: BTreeMap<OpKey, BigRational>,
}

impl OpSum {
    pub fn zero() -> Self {
        OpSum::default()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&OpKey, &BigRational)> {
        self.terms.iter()
    }

    pub fn add_term(&mut self, key: OpKey, coeff: BigRational) {
        if coeff.is_zero() {
            return;
        }
        let entry = self.terms.entry(key).or_insert_with(BigRational::zero);
        *entry += coeff;
        if entry.is_zero() {
            self.terms.remove(&key);
        }
    }

    /// Substitutes the level: index-0 central -> l0 * identity, others -> 0.
    pub fn substitute_level(&self, l0: &BigRational) -> OpSum {
        let mut out = OpSum::zero();
        for (key, coeff) in self.terms() {
            match key {
                OpKey::Gap(RescaledGen::CBar(0)) | OpKey::Np(Gen::K(0)) => {
                    out.add_term(OpKey::Scalar, coeff * l0);
                }
                OpKey::Gap(RescaledGen::CBar(_)) | OpKey::Np(Gen::K(_)) => {}
                other => out.add_term(*other, coeff.clone()),
            }
        }
        out
    }
}

impl fmt::Display for OpSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(k, c)| {
                if c.is_one() && !matches!(k, OpKey::Scalar) {
                    k.to_string()
                } else if matches!(k, OpKey::Scalar) {
                    format!("{c}")
                } else {
                    format!("{c}*{k}")
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// One mode target produced by evaluating a delta term.
enum ModeTarget {
    Series(SeriesKind, BigRational),
    Central(u32),
}

/// Evaluates a relation's delta-term data at mode labels (la, lb),
/// returning (target, coefficient) pairs.  `shift_override` replaces the
/// stored fractional shifts (used by the twisted-lattice dictionary
/// evaluation); `None` keeps the data as is.
fn eval_delta_side(
    p: u32,
    relation: Relation,
    la: &BigRational,
    lb: &BigRational,
    shift_override: Option<&BigRational>,
) -> Vec<(ModeTarget, BigRational)> {
    let (ka, kb) = relation.series();
    let wa = ka.weight();
    let wb = kb.weight();
    // x1 exponent is -la-wa; the delta factor forces r = la + wa - 1
    let r = la + &wa - BigRational::one();
    let mut out = Vec::new();
    for term in relation.delta_terms(p) {
        let s = shift_override.unwrap_or(&term.fractional_shift);
        if !is_integer(&(&r - s)) {
            continue;
        }
        let v = falling(&r, term.derivative_order);
        if v.is_zero() {
            continue;
        }
        let e_delta = &r - BigRational::from_integer(BigInt::from(term.derivative_order));
        let b_total = -(lb.clone()) - &wb;
        match &term.operator {
            OperatorLabel::SeriesDerivative => {
                // dB has B(nu) * (-nu - wb) at exponent -nu - wb - 1
                let nu = lb + &e_delta - BigRational::one();
                let coeff = (-(nu.clone()) - &wb) * &v;
                out.push((ModeTarget::Series(kb, nu), coeff));
            }
            OperatorLabel::Series(c) => {
                let nu = lb + &e_delta;
                out.push((ModeTarget::Series(kb, nu), c * &v));
            }
            OperatorLabel::Central(c, idx) => {
                if e_delta == b_total {
                    out.push((ModeTarget::Central(*idx), c * &v));
                }
            }
        }
    }
    out
}

/// The delta-expansion right side as an operator sum (lattice-validated).
fn rhs_op_sum(p: u32, relation: Relation, la: &BigRational, lb: &BigRational) -> Result<OpSum> {
    let mut out = OpSum::zero();
    for (target, coeff) in eval_delta_side(p, relation, la, lb, None) {
        match target {
            ModeTarget::Series(kind, label) => {
                out.add_term(kind.op_at(p, &label)?, coeff);
            }
            ModeTarget::Central(idx) => {
                let key = match relation.family() {
                    Family::Gap => OpKey::Gap(RescaledGen::CBar(idx)),
                    Family::Np => OpKey::Np(Gen::K(idx)),
                };
                out.add_term(key, coeff);
            }
        }
    }
    Ok(out)
}

fn rational_coeff(c: &crate::scalar::Cyclo) -> BigRational {
    c.as_rational()
        .cloned()
        .expect("structure constants are rational")
}

/// The Lie-bracket left side as an operator sum.
fn lhs_op_sum(p: u32, relation: Relation, la: &BigRational, lb: &BigRational) -> Result<OpSum> {
    let (ka, kb) = relation.series();
    let a = ka.op_at(p, la)?;
    let b = kb.op_at(p, lb)?;
    let mut out = OpSum::zero();
    match (a, b) {
        (OpKey::Gap(ga), OpKey::Gap(gb)) => {
            let alg = AlgebraId::gap(p)?;
            let br = bracket_rescaled_gens(alg, ga, gb)?;
            for (g, c) in br.terms() {
                out.add_term(OpKey::Gap(*g), rational_coeff(c));
            }
        }
        (OpKey::Np(ga), OpKey::Np(gb)) => {
            let alg = AlgebraId::np(p)?;
            let xa = LieElement::generator(alg, ga)?;
            let xb = LieElement::generator(alg, gb)?;
            for (g, c) in xa.bracket(&xb)?.terms() {
                out.add_term(OpKey::Np(*g), rational_coeff(c));
            }
        }
        _ => unreachable!("a relation never mixes families"),
    }
    Ok(out)
}

/// Result of one coefficientwise identity check.
#[derive(Debug, Clone)]
pub struct IdentityCheck {
    pub relation: Relation,
    pub la: BigRational,
    pub lb: BigRational,
    pub holds: bool,
    pub lhs: OpSum,
    pub rhs: OpSum,
}

/// Compares the bracket of two modes against the delta expansion at the
/// same labels.  `level` substitutes centrals (index 0 -> l0, rest -> 0);
/// `None` compares symbolically with central generators kept.
pub fn verify_commutator_identity(
    p: u32,
    relation: Relation,
    la: &BigRational,
    lb: &BigRational,
    level: Option<&BigRational>,
) -> Result<IdentityCheck> {
    relation.validate(p)?;
    let lhs = lhs_op_sum(p, relation, la, lb)?;
    let rhs = rhs_op_sum(p, relation, la, lb)?;
    let (lhs, rhs) = match level {
        Some(l0) => (lhs.substitute_level(l0), rhs.substitute_level(l0)),
        None => (lhs, rhs),
    };
    Ok(IdentityCheck {
        relation,
        la: la.clone(),
        lb: lb.clone(),
        holds: lhs == rhs,
        lhs,
        rhs,
    })
}

/// All relation families of one algebra family for a given p.
pub fn all_relations(p: u32, family: Family) -> Vec<Relation> {
    let mut out = Vec::new();
    match family {
        Family::Gap => {
            out.push(Relation::LL);
            for i in 1..p {
                out.push(Relation::LI(i));
            }
            for i in 1..p {
                for j in 1..p {
                    out.push(Relation::II(i, j));
                }
            }
        }
        Family::Np => {
            out.push(Relation::TT);
            for i in 1..p {
                out.push(Relation::TN(i));
            }
            for i in 1..p {
                for j in 1..p {
                    out.push(Relation::NN(i, j));
                }
            }
        }
    }
    out
}

/// Integer mode labels of a relation within |m| <= window, lifted onto the
/// series lattices.
pub fn window_labels(
    p: u32,
    relation: Relation,
    window: i64,
) -> Vec<(BigRational, BigRational)> {
    let (ka, kb) = relation.series();
    let offa = ka.lattice_offset(p);
    let offb = kb.lattice_offset(p);
    let mut out = Vec::new();
    for m in -window..=window {
        for n in -window..=window {
            out.push((ratio(m, 1) + &offa, ratio(n, 1) + &offb));
        }
    }
    out
}

/// One row of a mode-dictionary report.
#[derive(Debug, Clone)]
pub struct DictEntry {
    pub gap_relation: Relation,
    pub np_relation: Relation,
    pub pairs_checked: usize,
    pub holds: bool,
}

/// Full mode-dictionary report.
#[derive(Debug, Clone)]
pub struct DictionaryReport {
    pub entries: Vec<DictEntry>,
    pub holds: bool,
}

/// Family-agnostic key identifying a mode operator under the dictionary.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
enum DictKey {
    Virasoro(BigRational),
    Current(u32, BigRational),
    Scalar,
}

fn dict_key(kind: SeriesKind, label: BigRational) -> DictKey {
    match kind {
        SeriesKind::L | SeriesKind::T => DictKey::Virasoro(label),
        SeriesKind::I(i) | SeriesKind::N(i) => DictKey::Current(i, label),
    }
}

/// Evaluates one relation's delta data into dictionary keys at arbitrary
/// (possibly twisted) labels, substituting the level.
fn dict_eval(
    p: u32,
    relation: Relation,
    la: &BigRational,
    lb: &BigRational,
    l0: &BigRational,
    twist_to_a_lattice: bool,
) -> BTreeMap<DictKey, BigRational> {
    let (ka, _) = relation.series();
    let wa = ka.weight();
    // the twisted delta factor carries the fractional part of r
    let shift = if twist_to_a_lattice {
        let r = la + &wa - BigRational::one();
        Some(&r - BigRational::from_integer(r.to_integer()))
    } else {
        None
    };
    let mut out: BTreeMap<DictKey, BigRational> = BTreeMap::new();
    let mut add = |key: DictKey, coeff: BigRational| {
        if coeff.is_zero() {
            return;
        }
        let entry = out.entry(key).or_insert_with(BigRational::zero);
        *entry += coeff;
        if entry.is_zero() {
            let dead: Vec<DictKey> = out
                .iter()
                .filter(|(_, c)| c.is_zero())
                .map(|(k, _)| k.clone())
                .collect();
            for k in dead {
                out.remove(&k);
            }
        }
    };
    for (target, coeff) in eval_delta_side(p, relation, la, lb, shift.as_ref()) {
        match target {
            ModeTarget::Series(kind, label) => add(dict_key(kind, label), coeff),
            ModeTarget::Central(0) => add(DictKey::Scalar, coeff * l0),
            ModeTarget::Central(_) => {}
        }
    }
    out
}

/// Certifies the commutator layer of the mode correspondence: the two
/// families' delta data produce identical structure constants at matched
/// labels (gap lattices), for all integer modes within the window, with
/// the level substituted.
pub fn verify_mode_dictionary(p: u32, l0: &BigRational, window: i64) -> Result<DictionaryReport> {
    let mut pairs: Vec<(Relation, Relation)> = vec![(Relation::LL, Relation::TT)];
    for i in 1..p {
        pairs.push((Relation::LI(i), Relation::TN(i)));
    }
    for i in 1..p {
        for j in 1..p {
            pairs.push((Relation::II(i, j), Relation::NN(i, j)));
        }
    }
    let mut entries = Vec::new();
    let mut all_hold = true;
    for (gap_rel, np_rel) in pairs {
        gap_rel.validate(p)?;
        np_rel.validate(p)?;
        let mut holds = true;
        let labels = window_labels(p, gap_rel, window);
        let checked = labels.len();
        for (la, lb) in labels {
            // gap side: certified bracket evaluation on its own lattice
            let gap_side = {
                let lhs = lhs_op_sum(p, gap_rel, &la, &lb)?.substitute_level(l0);
                let mut map: BTreeMap<DictKey, BigRational> = BTreeMap::new();
                for (key, coeff) in lhs.terms() {
                    let dk = match key {
                        OpKey::Scalar => DictKey::Scalar,
                        OpKey::Gap(RescaledGen::LHat(n)) => DictKey::Virasoro(ratio(*n, 1)),
                        OpKey::Gap(RescaledGen::IHat(i, n)) => {
                            DictKey::Current(*i, ratio(*n, 1) + ratio(*i as i64, p as i64))
                        }
                        OpKey::Gap(RescaledGen::CBar(_)) => continue,
                        OpKey::Np(_) => unreachable!("gap relation produced companion operator"),
                    };
                    map.insert(dk, coeff.clone());
                }
                map
            };
            // companion side: same delta data read on the twisted lattice
            let np_side = dict_eval(p, np_rel, &la, &lb, l0, true);
            if gap_side != np_side {
                holds = false;
            }
        }
        all_hold &= holds;
        entries.push(DictEntry { gap_relation: gap_rel, np_relation: np_rel, pairs_checked: checked, holds });
    }
    Ok(DictionaryReport { entries, holds: all_hold })
}
