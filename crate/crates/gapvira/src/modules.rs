//! Generalized induced modules and their machinery.
//!
//! An induced module is built from three pieces of data:
//!
//! - a *splitting* of the non-central generators into a positive
//!   subalgebra and its complement ([`PositivePart`]);
//! - a *base module* over the positive part ([`BaseModule`]), acting on
//!   abstract basis keys;
//! - a rational *level* fixing the central action (index-0 central acts
//!   as p^2 * level on the gap side and as the level itself on the
//!   companion side; the other centrals act as 0).
//!
//! Vectors are finite sums  (normal-ordered word in complement
//! generators) (x) (base key)  with cyclotomic coefficients.  The action
//! of any algebra element is computed by a straightening worklist:
//! centrals substitute their scalars, positive generators migrate right
//! and land on the base module, complement generators re-sort into normal
//! order, every swap paying the bracket correction term.
//!
//! On top of the engine sit the graded dimension counts (two independent
//! backends), exact singular-vector search, the degree function on
//! exponent pairs, the degree-reduction step and its iteration to the
//! base, annihilation-profile extraction from finite snapshots, and the
//! restrictedness witness scan.

use std::collections::BTreeMap;
use std::fmt;

use num::{BigInt, BigRational, One, Signed, ToPrimitive};

use crate::algebra::{bracket_gens, AlgebraId, Family, Gen, LieElement};
use crate::error::{Error, Result};
use crate::exponents::{principal_compare, ExponentVector};
use crate::linalg;
use crate::pbw::{pbw_key, PbwMonomial};
use crate::scalar::Cyclo;

/// The shifted positive part of the gap algebra: L_m belongs to it iff
/// m is a nonnegative multiple of p, or m is congruent to j (1 <= j <=
/// p-1) with m >= j - p*d_j.  All centrals belong to it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PositivePartSpec {
    p: u32,
    d: Vec<i64>,
}

impl PositivePartSpec {
    pub fn new(p: u32, d: Vec<i64>) -> Result<Self> {
        if p < 2 {
            return Err(Error::invalid("p must be at least 2"));
        }
        if d.len() != (p - 1) as usize {
            return Err(Error::invalid(format!(
                "tuning vector must have length {}, got {}",
                p - 1,
                d.len()
            )));
        }
        Ok(PositivePartSpec { p, d })
    }

    /// The zero tuning vector (plain positive part).
    pub fn unshifted(p: u32) -> Result<Self> {
        Self::new(p, vec![0; (p - 1) as usize])
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn d(&self) -> &[i64] {
        &self.d
    }

    /// d_j for a residue 1 <= j <= p-1.
    pub fn d_at(&self, j: u32) -> i64 {
        self.d[(j - 1) as usize]
    }

    /// Smallest member index in residue class j (1 <= j <= p-1).
    pub fn min_index(&self, j: u32) -> i64 {
        j as i64 - self.p as i64 * self.d_at(j)
    }

    /// Membership of L_m.
    pub fn contains_index(&self, m: i64) -> bool {
        let p = self.p as i64;
        let j = m.rem_euclid(p);
        if j == 0 {
            m >= 0
        } else {
            m >= self.min_index(j as u32)
        }
    }
}

/// Which generators count as "positive" (inducing subalgebra) for a
/// module.  Complement generators form the free PBW side.
#[derive(Debug, Clone)]
pub enum PositivePart {
    /// The shifted gap positive part for a tuning vector.
    Shifted(PositivePartSpec),
    /// Strictly positive gap indices {L_m : m >= 1}; the complement
    /// includes L_0.
    AllPositive,
    /// The companion vacuum subalgebra {T_m : m >= -1, N^i_n : n >= 0}.
    NpVacuum,
    /// Every generator is positive; the module is its own base (finite
    /// action-table modules).
    Everything,
}

impl PositivePart {
    /// Positivity of a non-central generator.
    pub fn is_positive(&self, g: &Gen) -> bool {
        match (self, g) {
            (PositivePart::Everything, _) => true,
            (PositivePart::Shifted(spec), Gen::L(m)) => spec.contains_index(*m),
            (PositivePart::AllPositive, Gen::L(m)) => *m >= 1,
            (PositivePart::NpVacuum, Gen::T(m)) => *m >= -1,
            (PositivePart::NpVacuum, Gen::N(_, n)) => *n >= 0,
            _ => false,
        }
    }
}

/// The annihilation profile a base module is declared to satisfy: all
/// L_{p t} with t > k and all L_{j + p t} with t > k - d_j act as zero
/// on it, and the boundary operators act injectively.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AnnihilationSpec {
    pub k: i64,
    pub d: Vec<i64>,
}

impl AnnihilationSpec {
    /// r_j = k - d_j for j >= 1, r_0 = k.
    pub fn thresholds(&self) -> Vec<i64> {
        let mut out = vec![self.k];
        out.extend(self.d.iter().map(|dj| self.k - dj));
        out
    }
}

/// The set of indices required to annihilate for thresholds r:
/// {p t : t > r_0} and {j + p t : t > r_j}, capped at `bound`.
pub fn raising_set(p: u32, thresholds: &[i64], bound: i64) -> Vec<i64> {
    let mut out = Vec::new();
    for (j, &r) in thresholds.iter().enumerate() {
        let mut t = r + 1;
        loop {
            let idx = j as i64 + p as i64 * t;
            if idx > bound {
                break;
            }
            out.push(idx);
            t += 1;
        }
    }
    out.sort_unstable();
    out.dedup();
    out
}

/// Abstract basis key of a base module.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum BaseKey {
    /// An ordered word of generator indices with exponents, in the base
    /// module's own canonical order.  The empty word is the cyclic
    /// vector.
    Word(Vec<(i64, u64)>),
    /// A row of a finite action table.
    Idx(usize),
}

impl BaseKey {
    pub fn unit() -> Self {
        BaseKey::Word(Vec::new())
    }

    pub fn is_unit(&self) -> bool {
        matches!(self, BaseKey::Word(w) if w.is_empty())
    }
}

impl fmt::Display for BaseKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BaseKey::Word(w) if w.is_empty() => write!(f, "1"),
            BaseKey::Word(w) => {
                let parts: Vec<String> = w
                    .iter()
                    .map(|(m, e)| {
                        if *e == 1 {
                            format!("L[{m}]")
                        } else {
                            format!("L[{m}]^{e}")
                        }
                    })
                    .collect();
                write!(f, "{}", parts.join(""))
            }
            BaseKey::Idx(k) => write!(f, "e{k}"),
        }
    }
}

/// A module over the positive part, given by its action on basis keys.
pub trait BaseModule: Send + Sync {
    fn describe(&self) -> String;

    /// Action of a positive generator on a basis key, as a finite
    /// combination of basis keys.  Induced modules substitute central
    /// scalars before reaching the base, so implementations only need
    /// centrals when they are also used standalone.
    fn act_on_key(&self, g: &Gen, key: &BaseKey) -> Result<Vec<(BaseKey, Cyclo)>>;
}

/// A vector of an induced module: finite sum of (normal-ordered
/// complement word) (x) (base key) with cyclotomic coefficients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModuleVector {
    alg: AlgebraId,
    terms: BTreeMap<(PbwMonomial, BaseKey), Cyclo>,
}

impl ModuleVector {
    pub fn zero(alg: AlgebraId) -> Self {
        ModuleVector { alg, terms: BTreeMap::new() }
    }

    pub fn alg(&self) -> AlgebraId {
        self.alg
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(PbwMonomial, BaseKey), &Cyclo)> {
        self.terms.iter()
    }

    pub fn coeff(&self, mono: &PbwMonomial, key: &BaseKey) -> Cyclo {
        self.terms
            .get(&(mono.clone(), key.clone()))
            .cloned()
            .unwrap_or_else(|| Cyclo::zero(self.alg.p()))
    }

    pub fn add_assign_term(&mut self, mono: PbwMonomial, key: BaseKey, coeff: Cyclo) {
        if coeff.is_zero() {
            return;
        }
        let slot = self
            .terms
            .entry((mono, key))
            .or_insert_with(|| Cyclo::zero(self.alg.p()));
        *slot = slot.add(&coeff);
        if slot.is_zero() {
            let dead: Vec<_> = self
                .terms
                .iter()
                .filter(|(_, c)| c.is_zero())
                .map(|(k, _)| k.clone())
                .collect();
            for k in dead {
                self.terms.remove(&k);
            }
        }
    }

    pub fn add(&self, other: &ModuleVector) -> Result<ModuleVector> {
        if self.alg != other.alg {
            return Err(Error::mismatch("adding vectors of different modules"));
        }
        let mut out = self.clone();
        for ((m, k), c) in other.terms() {
            out.add_assign_term(m.clone(), k.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &ModuleVector) -> Result<ModuleVector> {
        self.add(&other.scale(&Cyclo::from_int(self.alg.p(), -1)))
    }

    pub fn scale(&self, factor: &Cyclo) -> ModuleVector {
        let mut out = ModuleVector::zero(self.alg);
        if factor.is_zero() {
            return out;
        }
        for ((m, k), c) in self.terms() {
            out.terms.insert((m.clone(), k.clone()), c.mul(factor));
        }
        out
    }

    /// Splits one gap monomial into (non-multiple, multiple-of-p)
    /// exponent vectors keyed by generator index.
    pub fn split_exponents(p: u32, mono: &PbwMonomial) -> (ExponentVector, ExponentVector) {
        let mut i_exp = ExponentVector::zero();
        let mut j_exp = ExponentVector::zero();
        for (g, mult) in mono.word() {
            if let Gen::L(m) = g {
                if m.rem_euclid(p as i64) == 0 {
                    j_exp.add_at(*m, *mult);
                } else {
                    i_exp.add_at(*m, *mult);
                }
            }
        }
        (i_exp, j_exp)
    }
}

impl fmt::Display for ModuleVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|((m, k), c)| {
                let body = if m.is_one() {
                    format!("{k}")
                } else {
                    format!("{m}(x){k}")
                };
                if c.is_one() {
                    body
                } else {
                    format!("{}*{}", c.render(), body)
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// An induced module: splitting, base module, level, and (optionally)
/// the annihilation profile its base is declared to satisfy.
pub struct InducedModule {
    alg: AlgebraId,
    positive: PositivePart,
    level: BigRational,
    ann: Option<AnnihilationSpec>,
    base: Box<dyn BaseModule>,
    label: String,
}

impl InducedModule {
    pub fn new(
        alg: AlgebraId,
        positive: PositivePart,
        level: BigRational,
        ann: Option<AnnihilationSpec>,
        base: Box<dyn BaseModule>,
        label: impl Into<String>,
    ) -> Self {
        InducedModule { alg, positive, level, ann, base, label: label.into() }
    }

    pub fn alg(&self) -> AlgebraId {
        self.alg
    }

    pub fn p(&self) -> u32 {
        self.alg.p()
    }

    pub fn family(&self) -> Family {
        self.alg.family()
    }

    pub fn level(&self) -> &BigRational {
        &self.level
    }

    pub fn annihilation(&self) -> Option<&AnnihilationSpec> {
        self.ann.as_ref()
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn describe_base(&self) -> String {
        self.base.describe()
    }

    pub fn is_positive_gen(&self, g: &Gen) -> bool {
        self.positive.is_positive(g)
    }

    /// Scalar by which a central generator acts.
    pub fn central_scalar(&self, g: &Gen) -> Option<Cyclo> {
        let p = self.p();
        match g {
            Gen::C(0) => {
                let psq = BigRational::from_integer(BigInt::from((p as i64) * (p as i64)));
                Some(Cyclo::from_ratio(p, psq * &self.level))
            }
            Gen::K(0) => Some(Cyclo::from_ratio(p, self.level.clone())),
            Gen::C(_) | Gen::K(_) => Some(Cyclo::zero(p)),
            _ => None,
        }
    }

    /// The cyclic vector 1 (x) unit key.
    pub fn vacuum(&self) -> ModuleVector {
        self.key_vector(BaseKey::unit())
    }

    /// The vector 1 (x) key for an explicit base key.
    pub fn key_vector(&self, key: BaseKey) -> ModuleVector {
        let mut v = ModuleVector::zero(self.alg);
        v.add_assign_term(PbwMonomial::one(), key, Cyclo::one(self.p()));
        v
    }

    /// A PBW basis vector: normal-ordered product of complement letters
    /// applied to a base key.
    pub fn mono_vector(&self, letters: &[Gen], key: BaseKey) -> Result<ModuleVector> {
        for g in letters {
            let g = g.canonical(self.alg)?;
            if g.is_central() {
                return Err(Error::invalid("centrals do not appear in module words"));
            }
            if self.positive.is_positive(&g) {
                return Err(Error::invalid(format!(
                    "{g} lies in the positive part; not a free module letter"
                )));
            }
        }
        let mono = PbwMonomial::from_parts(letters.to_vec(), BTreeMap::new());
        let mut v = ModuleVector::zero(self.alg);
        v.add_assign_term(mono, key, Cyclo::one(self.p()));
        Ok(v)
    }

    /// Action of an algebra element.
    pub fn act(&self, x: &LieElement, v: &ModuleVector) -> Result<ModuleVector> {
        if x.alg() != self.alg {
            return Err(Error::mismatch("element algebra differs from module algebra"));
        }
        let mut out = ModuleVector::zero(self.alg);
        for (g, c) in x.terms() {
            let single = self.act_gen(*g, v)?;
            out = out.add(&single.scale(c))?;
        }
        Ok(out)
    }

    /// Action of a single generator.
    pub fn act_gen(&self, g: Gen, v: &ModuleVector) -> Result<ModuleVector> {
        if v.alg != self.alg {
            return Err(Error::mismatch("vector algebra differs from module algebra"));
        }
        let g = g.canonical(self.alg)?;
        let mut out = ModuleVector::zero(self.alg);
        for ((mono, key), coeff) in v.terms() {
            let mut letters: Vec<Gen> = Vec::with_capacity(1 + mono.word_len() as usize);
            letters.push(g);
            letters.extend(mono.letters());
            self.straighten(coeff.clone(), letters, key.clone(), &mut out)?;
        }
        Ok(out)
    }

    /// Applies a product of generators (leftmost acts last).
    pub fn apply_word(&self, word: &[Gen], v: &ModuleVector) -> Result<ModuleVector> {
        let mut cur = v.clone();
        for g in word.iter().rev() {
            cur = self.act_gen(*g, &cur)?;
        }
        Ok(cur)
    }

    /// Straightening worklist: centrals substitute, positives migrate
    /// right onto the base, the complement re-sorts into normal order.
    fn straighten(
        &self,
        coeff: Cyclo,
        letters: Vec<Gen>,
        key: BaseKey,
        out: &mut ModuleVector,
    ) -> Result<()> {
        let mut stack: Vec<(Cyclo, Vec<Gen>, BaseKey)> = vec![(coeff, letters, key)];
        let mut steps: u64 = 0;
        while let Some((coeff, mut letters, key)) = stack.pop() {
            steps += 1;
            if steps > 20_000_000 {
                return Err(Error::internal("straightening did not terminate in budget"));
            }
            if coeff.is_zero() {
                continue;
            }
            // substitute the leftmost central, if any
            if let Some(pos) = letters.iter().position(Gen::is_central) {
                let g = letters.remove(pos);
                let scalar = self
                    .central_scalar(&g)
                    .ok_or_else(|| Error::internal("central scalar missing"))?;
                stack.push((coeff.mul(&scalar), letters, key));
                continue;
            }
            // migrate the rightmost positive letter rightward
            if let Some(k) = (0..letters.len())
                .rev()
                .find(|&k| self.positive.is_positive(&letters[k]))
            {
                if k + 1 == letters.len() {
                    let g = letters.pop().expect("nonempty");
                    let image = self.base.act_on_key(&g, &key)?;
                    for (key2, c2) in image {
                        stack.push((coeff.mul(&c2), letters.clone(), key2));
                    }
                } else {
                    let a = letters[k];
                    let b = letters[k + 1];
                    let mut swapped = letters.clone();
                    swapped.swap(k, k + 1);
                    stack.push((coeff.clone(), swapped, key.clone()));
                    let br = bracket_gens(self.alg, a, b)?;
                    for (bg, bc) in br.terms() {
                        let mut shorter = letters.clone();
                        shorter.remove(k + 1);
                        shorter[k] = *bg;
                        stack.push((coeff.mul(bc), shorter, key.clone()));
                    }
                }
                continue;
            }
            // all letters are complement generators: sort into normal order
            if let Some(k) =
                (0..letters.len().saturating_sub(1)).find(|&k| pbw_key(&letters[k]) > pbw_key(&letters[k + 1]))
            {
                let a = letters[k];
                let b = letters[k + 1];
                let mut swapped = letters.clone();
                swapped.swap(k, k + 1);
                stack.push((coeff.clone(), swapped, key.clone()));
                let br = bracket_gens(self.alg, a, b)?;
                for (bg, bc) in br.terms() {
                    let mut shorter = letters.clone();
                    shorter.remove(k + 1);
                    shorter[k] = *bg;
                    stack.push((coeff.mul(bc), shorter, key.clone()));
                }
                continue;
            }
            let mono = PbwMonomial::from_parts(letters, BTreeMap::new());
            out.add_assign_term(mono, key, coeff);
        }
        Ok(())
    }
}

impl fmt::Debug for InducedModule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "InducedModule({}, {})", self.label, self.base.describe())
    }
}

/// One-dimensional highest-weight base: L_0 acts by -p*h, every other
/// positive generator by 0.
struct HighestWeightBase {
    p: u32,
    h: BigRational,
}

impl BaseModule for HighestWeightBase {
    fn describe(&self) -> String {
        format!("highest-weight line at h={}", self.h)
    }

    fn act_on_key(&self, g: &Gen, key: &BaseKey) -> Result<Vec<(BaseKey, Cyclo)>> {
        if !key.is_unit() {
            return Err(Error::invalid("highest-weight base has a single key"));
        }
        match g {
            Gen::L(0) => {
                let val = -BigRational::from_integer(BigInt::from(self.p as i64)) * &self.h;
                Ok(vec![(BaseKey::unit(), Cyclo::from_ratio(self.p, val))])
            }
            Gen::L(m) if *m >= 1 => Ok(Vec::new()),
            _ => Err(Error::invalid(format!("{g} is outside the inducing subalgebra"))),
        }
    }
}

/// Vacuum base of the companion algebra: every positive generator acts
/// as zero.
struct NpVacuumBase;

impl BaseModule for NpVacuumBase {
    fn describe(&self) -> String {
        "companion vacuum line".to_string()
    }

    fn act_on_key(&self, g: &Gen, key: &BaseKey) -> Result<Vec<(BaseKey, Cyclo)>> {
        if !key.is_unit() {
            return Err(Error::invalid("vacuum base has a single key"));
        }
        match g {
            Gen::T(m) if *m >= -1 => Ok(Vec::new()),
            Gen::N(_, n) if *n >= 0 => Ok(Vec::new()),
            _ => Err(Error::invalid(format!("{g} is outside the inducing subalgebra"))),
        }
    }
}

/// The highest-weight module of the gap algebra at level l0 and weight h
/// (the rescaled zero mode acts on the cyclic vector by h).
pub fn verma(p: u32, l0: BigRational, h: BigRational) -> Result<InducedModule> {
    let alg = AlgebraId::gap(p)?;
    let spec = PositivePartSpec::unshifted(p)?;
    let ann = AnnihilationSpec { k: 0, d: vec![0; (p - 1) as usize] };
    Ok(InducedModule::new(
        alg,
        PositivePart::Shifted(spec),
        l0,
        Some(ann),
        Box::new(HighestWeightBase { p, h }),
        format!("verma(p={p})"),
    ))
}

/// The vacuum module of the companion algebra at level l0.
pub fn vacuum_np(p: u32, l0: BigRational) -> Result<InducedModule> {
    let alg = AlgebraId::np(p)?;
    Ok(InducedModule::new(
        alg,
        PositivePart::NpVacuum,
        l0,
        None,
        Box::new(NpVacuumBase),
        format!("vacuum-np(p={p})"),
    ))
}

/// Free generator degrees of the highest-weight module in 1/p grade
/// units: every positive integer degree has exactly one generator on the
/// gap side; the companion side has p-1 currents per degree >= 1 plus a
/// Virasoro mode per degree >= 2.
fn generator_multiplicity(family: Family, p: u32, deg: u64) -> u64 {
    if deg == 0 {
        return 0;
    }
    match family {
        Family::Gap => 1,
        Family::Np => {
            let currents = (p - 1) as u64;
            if deg >= 2 {
                currents + 1
            } else {
                currents
            }
        }
    }
}

/// Graded dimensions by direct multiset enumeration.
pub fn graded_dim_enumeration(alg: AlgebraId, upto: u64) -> BTreeMap<BigRational, u64> {
    let unit = match alg.family() {
        Family::Gap => alg.p() as u64,
        Family::Np => 1,
    };
    let max_deg = upto * unit;
    let mut table: BTreeMap<u64, u64> = BTreeMap::new();
    // count multisets of generators with total degree n, recursively by
    // largest degree used
    fn count(family: Family, p: u32, remaining: u64, max_part: u64) -> u64 {
        if remaining == 0 {
            return 1;
        }
        let mut total = 0u64;
        for part in (1..=max_part.min(remaining)).rev() {
            let types = generator_multiplicity(family, p, part);
            if types == 0 {
                continue;
            }
            // choose how many letters of this degree: c >= 1, multiset of
            // size c from `types` flavors
            let mut c = 1u64;
            while c * part <= remaining {
                let ways = multiset_count(types, c);
                total += ways * count(family, p, remaining - c * part, part - 1);
                c += 1;
            }
        }
        total
    }
    for n in 0..=max_deg {
        table.insert(n, count(alg.family(), alg.p(), n, n.max(1)));
    }
    table
        .into_iter()
        .map(|(n, v)| {
            (
                BigRational::new(BigInt::from(n), BigInt::from(unit)),
                v,
            )
        })
        .collect()
}

/// Multisets of size c from t flavors: C(t + c - 1, c).
fn multiset_count(t: u64, c: u64) -> u64 {
    let mut num = 1u64;
    for i in 0..c {
        num = num * (t + i) / (i + 1);
    }
    num
}

/// Graded dimensions by expanding the product generating function
/// prod_d (1 - q^d)^(-types(d)).
pub fn graded_dim_genfunction(alg: AlgebraId, upto: u64) -> BTreeMap<BigRational, u64> {
    let unit = match alg.family() {
        Family::Gap => alg.p() as u64,
        Family::Np => 1,
    };
    let max_deg = (upto * unit) as usize;
    let mut series = vec![0u64; max_deg + 1];
    series[0] = 1;
    for d in 1..=max_deg {
        let types = generator_multiplicity(alg.family(), alg.p(), d as u64);
        for _ in 0..types {
            // multiply by (1 - q^d)^{-1}: s[n] += s[n - d]
            for n in d..=max_deg {
                series[n] += series[n - d];
            }
        }
    }
    series
        .into_iter()
        .enumerate()
        .map(|(n, v)| {
            (
                BigRational::new(BigInt::from(n), BigInt::from(unit)),
                v,
            )
        })
        .collect()
}

/// All partitions of n (each part becomes one complement letter L_{-part}
/// of the gap highest-weight module).
pub fn partitions(n: u64) -> Vec<Vec<u64>> {
    fn rec(remaining: u64, max_part: u64, prefix: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
        if remaining == 0 {
            out.push(prefix.clone());
            return;
        }
        for part in (1..=max_part.min(remaining)).rev() {
            prefix.push(part);
            rec(remaining - part, part, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, n.max(1), &mut Vec::new(), &mut out);
    out
}

/// Exact basis of the space of vectors at the given grade of the
/// highest-weight module that are annihilated by the full raising set.
pub fn singular_vectors(
    p: u32,
    l0: &BigRational,
    h: &BigRational,
    grade: &BigRational,
) -> Result<Vec<ModuleVector>> {
    let module = verma(p, l0.clone(), h.clone())?;
    let scaled = grade * BigRational::from_integer(BigInt::from(p));
    if !scaled.denom().is_one() || !scaled.numer().is_positive() {
        return Err(Error::invalid(format!(
            "grade must be a positive multiple of 1/{p}, got {grade}"
        )));
    }
    let d = scaled
        .to_integer()
        .to_u64()
        .ok_or_else(|| Error::invalid("grade out of range"))?;
    // basis monomials at this grade: partitions of d
    let basis: Vec<ModuleVector> = partitions(d)
        .into_iter()
        .map(|parts| {
            let letters: Vec<Gen> = parts.iter().map(|&q| Gen::L(-(q as i64))).collect();
            module.mono_vector(&letters, BaseKey::unit())
        })
        .collect::<Result<_>>()?;
    if basis.is_empty() {
        return Ok(Vec::new());
    }
    // raising operators: rescaled Virasoro modes 1..=d and fractional
    // modes 0..=d of every current
    let mut raising: Vec<Gen> = Vec::new();
    for m in 1..=d as i64 {
        raising.push(Gen::L(p as i64 * m));
    }
    for i in 1..p as i64 {
        for n in 0..=d as i64 {
            raising.push(Gen::L(p as i64 * n + i));
        }
    }
    // assemble the linear system: unknowns are basis coefficients, one
    // row per (raising operator, output monomial) pair
    let mut columns: Vec<BTreeMap<usize, Cyclo>> = Vec::new();
    let mut labels: BTreeMap<(usize, PbwMonomial, BaseKey), usize> = BTreeMap::new();
    for b in &basis {
        let mut col: BTreeMap<usize, Cyclo> = BTreeMap::new();
        for (op_idx, g) in raising.iter().enumerate() {
            let image = module.act_gen(*g, b)?;
            for ((mono, key), c) in image.terms() {
                let next = labels.len();
                let row = *labels
                    .entry((op_idx, mono.clone(), key.clone()))
                    .or_insert(next);
                col.insert(row, c.clone());
            }
        }
        columns.push(col);
    }
    let nrows = labels.len();
    let ncols = basis.len();
    let mut rows = vec![vec![Cyclo::zero(p); ncols]; nrows];
    for (cix, col) in columns.iter().enumerate() {
        for (&rix, c) in col {
            rows[rix][cix] = c.clone();
        }
    }
    let kernel = linalg::kernel_basis(p, &rows, ncols);
    let mut out = Vec::new();
    for coords in kernel {
        let mut v = ModuleVector::zero(module.alg());
        for (c, b) in coords.iter().zip(basis.iter()) {
            v = v.add(&b.scale(c))?;
        }
        out.push(v);
    }
    Ok(out)
}

/// Degree of a nonzero gap module vector: the principal-order maximum of
/// the (non-multiple, multiple) exponent pairs in its support.
pub fn degree(v: &ModuleVector) -> Result<(ExponentVector, ExponentVector)> {
    if v.alg().family() != Family::Gap {
        return Err(Error::invalid("degree is defined for gap-side modules"));
    }
    if v.is_zero() {
        return Err(Error::ZeroVector);
    }
    let p = v.alg().p();
    let mut best: Option<(ExponentVector, ExponentVector)> = None;
    for ((mono, _), _) in v.terms() {
        let pair = ModuleVector::split_exponents(p, mono);
        best = Some(match best {
            None => pair,
            Some(cur) => {
                if principal_compare(p, &(pair.0.clone(), pair.1.clone()), &(cur.0.clone(), cur.1.clone()))?
                    == std::cmp::Ordering::Greater
                {
                    pair
                } else {
                    cur
                }
            }
        });
    }
    best.ok_or(Error::ZeroVector)
}

/// The record of one degree-reduction step: the prescribed operator, the
/// image, and how the image's degree compares with the prediction.
///
/// When the step consumed a negative multiple letter (`multiple_case`),
/// the predicted degree is always achieved: the operator commutes with
/// every non-multiple letter, so no term can stray.  When it consumed a
/// non-multiple letter, a lower term of the input can be bumped onto
/// another letter of its residue class that the operator's threshold
/// does not clear; the image degree then falls strictly between the
/// prediction and the input degree.  `exact` records which happened.
#[derive(Debug, Clone)]
pub struct ReductionStep {
    pub op: Gen,
    pub next: ModuleVector,
    pub predicted: (ExponentVector, ExponentVector),
    pub achieved: (ExponentVector, ExponentVector),
    pub exact: bool,
    pub multiple_case: bool,
}

/// One degree-reduction step: picks the prescribed positive operator for
/// the current degree, applies it, and checks that the degree strictly
/// drops (exactly to the prediction in the multiple-letter case).
pub fn reduction_step(module: &InducedModule, v: &ModuleVector) -> Result<ReductionStep> {
    let ann = module
        .annihilation()
        .ok_or_else(|| Error::invalid("module carries no annihilation profile"))?;
    let p = module.p() as i64;
    let (i_exp, j_exp) = degree(v)?;
    if i_exp.is_zero() && j_exp.is_zero() {
        return Err(Error::invalid("vector already lies in the base module"));
    }
    let multiple_case = !j_exp.is_zero();
    let (op, want_i, want_j) = if multiple_case {
        // drop the closest-to-zero multiple letter via the residue-1 op
        let top = j_exp.max_support().expect("nonzero");
        let s = -top / p;
        let d1 = ann.d[0];
        let op = Gen::L(1 + p * (s + ann.k - d1));
        let mut want_j = j_exp.clone();
        want_j.sub_at(-p * s, 1)?;
        (op, i_exp.clone(), want_j)
    } else {
        // drop the largest non-multiple letter via a multiple op
        let top = i_exp.max_support().expect("nonzero");
        let s = top.rem_euclid(p);
        let r = (s - top) / p;
        let ds = ann.d[(s - 1) as usize];
        let op = Gen::L(p * (r + ann.k - ds));
        let mut want_i = i_exp.clone();
        want_i.sub_at(top, 1)?;
        (op, want_i, ExponentVector::zero())
    };
    let next = module.act_gen(op, v)?;
    if next.is_zero() {
        return Err(Error::internal(format!(
            "reduction by {op} annihilated the vector"
        )));
    }
    let (got_i, got_j) = if next
        .terms()
        .all(|((mono, _), _)| mono.is_one())
    {
        (ExponentVector::zero(), ExponentVector::zero())
    } else {
        degree(&next)?
    };
    let exact = got_i == want_i && got_j == want_j;
    if multiple_case && !exact {
        return Err(Error::internal(format!(
            "degree after {op} is ({got_i}, {got_j}), predicted ({want_i}, {want_j})"
        )));
    }
    if !exact {
        // the image must still sit strictly below the input degree
        let dropped = principal_compare(
            module.p(),
            &(i_exp.clone(), j_exp.clone()),
            &(got_i.clone(), got_j.clone()),
        )? == std::cmp::Ordering::Greater;
        if !dropped {
            return Err(Error::internal(format!(
                "degree after {op} is ({got_i}, {got_j}), not below ({i_exp}, {j_exp})"
            )));
        }
    }
    Ok(ReductionStep {
        op,
        next,
        predicted: (want_i, want_j),
        achieved: (got_i, got_j),
        exact,
        multiple_case,
    })
}

/// Iterates the reduction step until the vector lies in the base module;
/// returns the base element and the operator trace.
pub fn reduce_to_base(
    module: &InducedModule,
    v: &ModuleVector,
) -> Result<(ModuleVector, Vec<Gen>)> {
    if v.is_zero() {
        return Err(Error::ZeroVector);
    }
    let mut cur = v.clone();
    let mut trace = Vec::new();
    for _ in 0..100_000 {
        let in_base = cur.terms().all(|((mono, _), _)| mono.is_one());
        if in_base {
            if cur.is_zero() {
                return Err(Error::internal("reduction reached zero"));
            }
            return Ok((cur, trace));
        }
        let step = reduction_step(module, &cur)?;
        trace.push(step.op);
        cur = step.next;
    }
    Err(Error::internal("reduction did not reach the base in budget"))
}

/// A finite snapshot of a module: an explicit basis with actions
/// computed on demand.  Actions leaving the span are reported as
/// unavailable, never truncated to zero.
pub struct Snapshot<'a> {
    module: &'a InducedModule,
    basis: Vec<(PbwMonomial, BaseKey)>,
    index: BTreeMap<(PbwMonomial, BaseKey), usize>,
}

impl<'a> Snapshot<'a> {
    pub fn new(module: &'a InducedModule, basis: Vec<(PbwMonomial, BaseKey)>) -> Result<Self> {
        let mut index = BTreeMap::new();
        for (i, b) in basis.iter().enumerate() {
            if index.insert(b.clone(), i).is_some() {
                return Err(Error::invalid("duplicate basis element in snapshot"));
            }
        }
        Ok(Snapshot { module, basis, index })
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn module(&self) -> &InducedModule {
        self.module
    }

    pub fn basis(&self) -> &[(PbwMonomial, BaseKey)] {
        &self.basis
    }

    pub fn basis_vector(&self, i: usize) -> ModuleVector {
        let mut v = ModuleVector::zero(self.module.alg());
        let (mono, key) = &self.basis[i];
        v.add_assign_term(mono.clone(), key.clone(), Cyclo::one(self.module.p()));
        v
    }

    /// Coordinates of a vector in the snapshot basis; None when it has a
    /// component outside the span.
    pub fn coords(&self, v: &ModuleVector) -> Option<Vec<Cyclo>> {
        let p = self.module.p();
        let mut out = vec![Cyclo::zero(p); self.basis.len()];
        for ((mono, key), c) in v.terms() {
            let i = self.index.get(&(mono.clone(), key.clone()))?;
            out[*i] = c.clone();
        }
        Some(out)
    }

    /// Per-basis-column action of one generator: None marks a column
    /// whose image leaves the snapshot span (unavailable).
    pub fn action_columns(&self, g: Gen) -> Result<Vec<Option<Vec<Cyclo>>>> {
        let mut cols = Vec::with_capacity(self.basis.len());
        for i in 0..self.basis.len() {
            let image = self.module.act_gen(g, &self.basis_vector(i))?;
            cols.push(self.coords(&image));
        }
        Ok(cols)
    }
}

/// Result of an annihilation-profile search.
#[derive(Debug)]
pub struct ExtractReport {
    pub profile: Option<ExtractFound>,
    pub searched: u64,
}

/// A found profile: thresholds, the solution space, boundary-operator
/// injectivity verdicts (None = action unavailable in the snapshot), and
/// whether every componentwise decrement has empty solution space.
#[derive(Debug)]
pub struct ExtractFound {
    pub thresholds: Vec<i64>,
    pub basis: Vec<ModuleVector>,
    pub boundary: Vec<(i64, Option<bool>)>,
    pub minimal: bool,
}

/// Exact solution space {w in the snapshot span : act(g) w = scalar w
/// for every condition}, computed over the sub-basis whose images under
/// every conditioned generator stay inside the snapshot.  Returns
/// full-coordinate solution vectors.
pub fn condition_space(
    snap: &Snapshot<'_>,
    conditions: &[(Gen, Cyclo)],
) -> Result<Vec<Vec<Cyclo>>> {
    let p = snap.module().p();
    let dim = snap.dim();
    let mut usable = vec![true; dim];
    let mut all_cols = Vec::new();
    for (g, _) in conditions {
        let cols = snap.action_columns(*g)?;
        for (b, col) in cols.iter().enumerate() {
            if col.is_none() {
                usable[b] = false;
            }
        }
        all_cols.push(cols);
    }
    let active: Vec<usize> = (0..dim).filter(|&b| usable[b]).collect();
    if active.is_empty() {
        return Ok(Vec::new());
    }
    let mut rows: Vec<Vec<Cyclo>> = Vec::new();
    for (cols, (_, scalar)) in all_cols.iter().zip(conditions) {
        for out_row in 0..dim {
            let mut row = Vec::with_capacity(active.len());
            let mut nonzero = false;
            for &b in &active {
                let mut entry = cols[b].as_ref().expect("usable column")[out_row].clone();
                if out_row == b {
                    entry = entry.sub(scalar);
                }
                nonzero |= !entry.is_zero();
                row.push(entry);
            }
            if nonzero {
                rows.push(row);
            }
        }
    }
    let kernel = linalg::kernel_basis(p, &rows, active.len());
    // lift back to full coordinates
    Ok(kernel
        .into_iter()
        .map(|k| {
            let mut full = vec![Cyclo::zero(p); dim];
            for (pos, &b) in active.iter().enumerate() {
                full[b] = k[pos].clone();
            }
            full
        })
        .collect())
}

/// Exact solution space {w : L_i w = 0 for all i in the raising set of
/// r, i <= bound}, over the sub-basis where all the needed actions stay
/// inside the snapshot.
fn profile_space(snap: &Snapshot<'_>, thresholds: &[i64], bound: i64) -> Result<Vec<Vec<Cyclo>>> {
    let p = snap.module().p();
    let conditions: Vec<(Gen, Cyclo)> = raising_set(p, thresholds, bound)
        .into_iter()
        .map(|i| (Gen::L(i), Cyclo::zero(p)))
        .collect();
    condition_space(snap, &conditions)
}

/// Searches threshold vectors r (componentwise within [r_min, r_max]) in
/// increasing (sum, lex) order for the first with a nonzero solution
/// space; verifies decrement-minimality and boundary injectivity.
pub fn extract_annihilation_profile(
    snap: &Snapshot<'_>,
    bound: i64,
    r_min: i64,
    r_max: i64,
) -> Result<ExtractReport> {
    let p = snap.module().p() as usize;
    if snap.module().family() != Family::Gap {
        return Err(Error::invalid("profile extraction applies to gap-side modules"));
    }
    let span = (r_max - r_min + 1) as u64;
    let total = span.pow(p as u32);
    // enumerate in (sum, lex) order
    let mut candidates: Vec<Vec<i64>> = Vec::new();
    let mut cur = vec![r_min; p];
    loop {
        candidates.push(cur.clone());
        let mut j = p;
        loop {
            if j == 0 {
                break;
            }
            j -= 1;
            if cur[j] < r_max {
                cur[j] += 1;
                for t in j + 1..p {
                    cur[t] = r_min;
                }
                break;
            }
            if j == 0 {
                cur.clear();
                break;
            }
        }
        if cur.is_empty() {
            break;
        }
        if candidates.len() as u64 >= total {
            break;
        }
    }
    candidates.sort_by_key(|r| (r.iter().sum::<i64>(), r.clone()));
    let mut searched = 0u64;
    for r in &candidates {
        searched += 1;
        let space = profile_space(snap, r, bound)?;
        if space.is_empty() {
            continue;
        }
        // decrement minimality
        let mut minimal = true;
        for j in 0..p {
            if r[j] - 1 < r_min {
                continue;
            }
            let mut dec = r.clone();
            dec[j] -= 1;
            if !profile_space(snap, &dec, bound)?.is_empty() {
                minimal = false;
            }
        }
        // boundary injectivity on the found space
        let mut boundary = Vec::new();
        for (j, &rj) in r.iter().enumerate() {
            let op_index = j as i64 + snap.module().p() as i64 * rj;
            let cols = snap.action_columns(Gen::L(op_index))?;
            // the operator matrix restricted to the found space
            let mut rows: Vec<Vec<Cyclo>> = vec![Vec::new(); snap.dim()];
            let mut available = true;
            let dim_space = space.len();
            for vec in &space {
                // image of this space vector
                let mut image = vec![Cyclo::zero(snap.module().p()); snap.dim()];
                for (b, coeff) in vec.iter().enumerate() {
                    if coeff.is_zero() {
                        continue;
                    }
                    match &cols[b] {
                        None => {
                            available = false;
                            break;
                        }
                        Some(col) => {
                            for (out, e) in image.iter_mut().zip(col.iter()) {
                                *out = out.add(&e.mul(coeff));
                            }
                        }
                    }
                }
                if !available {
                    break;
                }
                for (row, e) in rows.iter_mut().zip(image.into_iter()) {
                    row.push(e);
                }
            }
            let verdict = if available {
                let kernel = linalg::kernel_basis(snap.module().p(), &rows, dim_space);
                Some(kernel.is_empty())
            } else {
                None
            };
            boundary.push((op_index, verdict));
        }
        let basis = space
            .into_iter()
            .map(|coords| {
                let mut v = ModuleVector::zero(snap.module().alg());
                for (b, c) in coords.into_iter().enumerate() {
                    if !c.is_zero() {
                        let (mono, key) = &snap.basis()[b];
                        v.add_assign_term(mono.clone(), key.clone(), c);
                    }
                }
                v
            })
            .collect();
        return Ok(ExtractReport {
            profile: Some(ExtractFound { thresholds: r.clone(), basis, boundary, minimal }),
            searched,
        });
    }
    Ok(ExtractReport { profile: None, searched })
}

/// Scans the window for the largest index whose generator acts
/// nontrivially on v; returns the smallest n such that every generator
/// of index >= n (up to the window) kills v.
pub fn restrictedness_witness(
    module: &InducedModule,
    v: &ModuleVector,
    window: i64,
) -> Result<i64> {
    let mut highest_nonzero: i64 = 0;
    for m in 1..=window {
        let gens: Vec<Gen> = match module.family() {
            Family::Gap => vec![Gen::L(m)],
            Family::Np => {
                let mut gs = vec![Gen::T(m)];
                for i in 1..module.p() {
                    gs.push(Gen::N(i, m));
                }
                gs
            }
        };
        for g in gens {
            if !module.act_gen(g, v)?.is_zero() {
                highest_nonzero = m;
            }
        }
    }
    Ok(highest_nonzero + 1)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ratio(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn positive_part_membership_matches_the_shifted_thresholds() {
        let spec = PositivePartSpec::new(3, vec![0, -1]).unwrap();
        // multiples: nonnegative only
        assert!(spec.contains_index(0));
        assert!(spec.contains_index(3));
        assert!(!spec.contains_index(-3));
        // residue 1: threshold 1
        assert!(spec.contains_index(1));
        assert!(spec.contains_index(4));
        assert!(!spec.contains_index(-2));
        // residue 2 with d_2 = -1: threshold 5
        assert!(spec.contains_index(5));
        assert!(!spec.contains_index(2));
        assert!(!spec.contains_index(-1));
    }

    #[test]
    fn verma_zero_mode_and_first_relations() {
        // raw generators, p=2: [L_2, L_{-2}] = -4 L_0 (no central term at
        // m = p), and [L_4, L_{-4}] = -8 L_0 + (1/2) C_0
        let h = ratio(3, 1);
        let l0 = ratio(7, 2);
        let module = verma(2, l0.clone(), h.clone()).unwrap();
        let v2 = module.mono_vector(&[Gen::L(-2)], BaseKey::unit()).unwrap();
        let up2 = module.act_gen(Gen::L(2), &v2).unwrap();
        let got2 = up2.coeff(&PbwMonomial::one(), &BaseKey::unit());
        // -4 L_0 . 1 = -4 (-p h) 1 = 8h 1
        assert_eq!(got2, Cyclo::from_ratio(2, ratio(8, 1) * &h));

        let v4 = module.mono_vector(&[Gen::L(-4)], BaseKey::unit()).unwrap();
        let up4 = module.act_gen(Gen::L(4), &v4).unwrap();
        let got4 = up4.coeff(&PbwMonomial::one(), &BaseKey::unit());
        // -8 L_0 . 1 + (1/2) C_0 . 1 = 16h + (1/2)(4 l0) = 16h + 2 l0
        assert_eq!(
            got4,
            Cyclo::from_ratio(2, ratio(16, 1) * &h + ratio(2, 1) * &l0)
        );
    }

    #[test]
    fn rescaled_verma_oracles_hold() {
        // the two frozen oracle values in rescaled generators, p=2
        let h = ratio(5, 3);
        let l0 = ratio(7, 2);
        let module = verma(2, l0.clone(), h.clone()).unwrap();
        // Lhat(-1) 1 = -(1/2) L_{-2} 1 ; act(Lhat(1), .) with Lhat(1) = -(1/2) L_2
        let lhat = |m: i64| -> LieElement {
            LieElement::term(
                module.alg(),
                Gen::L(2 * m),
                Cyclo::rational(2, -1, 2),
            )
            .unwrap()
        };
        let down1 = module.act(&lhat(-1), &module.vacuum()).unwrap();
        let up1 = module.act(&lhat(1), &down1).unwrap();
        let want1 = module.vacuum().scale(&Cyclo::from_ratio(2, ratio(2, 1) * &h));
        assert_eq!(up1, want1, "act(Lhat(1), Lhat(-1) 1) = 2h 1");

        let down2 = module.act(&lhat(-2), &module.vacuum()).unwrap();
        let up2 = module.act(&lhat(2), &down2).unwrap();
        let want2 = module
            .vacuum()
            .scale(&Cyclo::from_ratio(2, ratio(4, 1) * &h + &l0 / BigInt::from(2)));
        assert_eq!(up2, want2, "act(Lhat(2), Lhat(-2) 1) = (4h + l0/2) 1");
    }

    #[test]
    fn centrals_act_by_the_level() {
        let module = verma(3, ratio(5, 1), ratio(1, 1)).unwrap();
        let v = module.mono_vector(&[Gen::L(-1)], BaseKey::unit()).unwrap();
        let c0 = module.act_gen(Gen::C(0), &v).unwrap();
        assert_eq!(c0, v.scale(&Cyclo::from_int(3, 45)), "C_0 acts as p^2 l0");
        let c1 = module.act_gen(Gen::C(1), &v).unwrap();
        assert!(c1.is_zero(), "C_1 acts as zero");
    }

    #[test]
    fn vacuum_np_first_oracles() {
        let l0 = ratio(7, 2);
        let module = vacuum_np(2, l0.clone()).unwrap();
        // act(T_2, T_{-2} 1) = (4 T_0 + (1/2) K_0) 1 = (l0/2) 1
        let v = module.mono_vector(&[Gen::T(-2)], BaseKey::unit()).unwrap();
        let up = module.act_gen(Gen::T(2), &v).unwrap();
        let want = module.vacuum().scale(&Cyclo::from_ratio(2, l0 / BigInt::from(2)));
        assert_eq!(up, want);
        // N^1_0 kills the vacuum
        assert!(module.act_gen(Gen::N(1, 0), &module.vacuum()).unwrap().is_zero());
    }

    #[test]
    fn graded_dimensions_match_both_backends_and_known_prefixes() {
        for p in [2u32, 3, 4] {
            let alg = AlgebraId::gap(p).unwrap();
            let a = graded_dim_enumeration(alg, 4);
            let b = graded_dim_genfunction(alg, 4);
            assert_eq!(a, b, "backends disagree at p={p}");
        }
        let table2 = graded_dim_enumeration(AlgebraId::gap(2).unwrap(), 2);
        let grades2: Vec<u64> = (0..=4)
            .map(|n| table2[&ratio(n, 2)])
            .collect();
        assert_eq!(grades2, vec![1, 1, 2, 3, 5]);
        let table3 = graded_dim_enumeration(AlgebraId::gap(3).unwrap(), 1);
        let grades3: Vec<u64> = (0..=3)
            .map(|n| table3[&ratio(n, 3)])
            .collect();
        assert_eq!(grades3, vec![1, 1, 2, 3]);
        // companion side small check, p=2: grades 0,1,2 -> 1,1,3
        let np = graded_dim_enumeration(AlgebraId::np(2).unwrap(), 2);
        assert_eq!(np[&ratio(0, 1)], 1);
        assert_eq!(np[&ratio(1, 1)], 1);
        assert_eq!(np[&ratio(2, 1)], 3);
    }

    #[test]
    fn singular_vector_at_the_first_fractional_grade() {
        for p in [2u32, 3, 4] {
            let basis = singular_vectors(p, &ratio(7, 2), &ratio(5, 3), &ratio(1, p as i64)).unwrap();
            assert_eq!(basis.len(), 1, "p={p}");
            let v = &basis[0];
            let mono = PbwMonomial::from_parts(vec![Gen::L(-1)], BTreeMap::new());
            assert!(!v.coeff(&mono, &BaseKey::unit()).is_zero());
        }
    }

    #[test]
    fn degree_picks_the_principal_maximum() {
        let module = verma(3, ratio(0, 1), ratio(1, 1)).unwrap();
        let a = module.mono_vector(&[Gen::L(-1)], BaseKey::unit()).unwrap();
        let b = module.mono_vector(&[Gen::L(-3)], BaseKey::unit()).unwrap();
        let v = a.add(&b).unwrap();
        let (i_exp, j_exp) = degree(&v).unwrap();
        assert!(i_exp.is_zero());
        assert_eq!(j_exp, ExponentVector::unit(-3));
    }

    #[test]
    fn restrictedness_witness_for_the_vacuum() {
        let module = verma(2, ratio(1, 1), ratio(1, 1)).unwrap();
        let n = restrictedness_witness(&module, &module.vacuum(), 8).unwrap();
        assert_eq!(n, 1, "every positive generator kills the cyclic vector");
        let v = module.mono_vector(&[Gen::L(-2)], BaseKey::unit()).unwrap();
        let n2 = restrictedness_witness(&module, &v, 10).unwrap();
        assert!(n2 <= 5, "witness within the stated margin, got {n2}");
    }
}
