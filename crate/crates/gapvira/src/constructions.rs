//! Explicit simple-module constructions over the gap algebra.
//!
//! Four families of base modules over shifted positive parts, each with
//! its validator and certification helpers:
//!
//! - *Virasoro pullbacks*: a finite action-table module over the
//!   multiples-of-p subalgebra (a Virasoro copy), extended by zero to
//!   the full algebra and re-verified against the Virasoro bracket.
//! - *polynomial line modules R*: basis {L0^n}; the closed-form action
//!   L_m . L0^n = (L0 - m)^n (L_m . 1), where L_m . 1 is a boundary
//!   constant theta/eta or zero.
//! - *polynomial modules Q*: basis of convention-ordered monomials in a
//!   finite variable set T; generic action by commuting against the
//!   defining ideal and evaluating rightmost factors.
//! - *Whittaker modules W(phi)*: induced from a character phi of the
//!   strictly-positive subalgebra plus the centrals, with the vector
//!   check L_m v = phi(L_m) v over a finite window.
//!
//! The isomorphism probe for W(phi) builds the matching Q module and
//! searches a finite truncation for a Whittaker vector of type phi by
//! exact linear solving; its tuning-vector inference and vector search
//! are best-effort and flagged in the report.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num::{BigInt, BigRational};

use crate::algebra::{bracket_gens, AlgebraId, Gen};
use crate::error::{Error, Result};
use crate::linalg;
use crate::modules::{
    condition_space, raising_set, AnnihilationSpec, BaseKey, BaseModule, InducedModule,
    ModuleVector, PositivePart, PositivePartSpec, Snapshot,
};
use crate::pbw::PbwMonomial;
use crate::scalar::Cyclo;

/// Scalar of a gap central generator at a given level.
fn gap_central_value(p: u32, idx: u32, level: &BigRational) -> Cyclo {
    if idx == 0 {
        let psq = BigRational::from_integer(BigInt::from((p as i64) * (p as i64)));
        Cyclo::from_ratio(p, psq * level)
    } else {
        Cyclo::zero(p)
    }
}

/// (x - m)^n expanded in the monomial basis: pairs (exponent, coefficient).
fn shifted_power(p: u32, m: i64, n: u64) -> Vec<(u64, Cyclo)> {
    let mut out = Vec::with_capacity(n as usize + 1);
    // binomial row computed incrementally: C(n, k)
    let mut binom = BigInt::from(1);
    for k in 0..=n {
        if k > 0 {
            binom = binom * BigInt::from(n - k + 1) / BigInt::from(k);
        }
        // coefficient of x^k is C(n, k) (-m)^(n-k)
        let pow = BigInt::from(-m).pow((n - k) as u32);
        let c = Cyclo::from_ratio(p, BigRational::from_integer(&binom * pow));
        if !c.is_zero() {
            out.push((k, c));
        }
    }
    out
}

// ---------------------------------------------------------------------
// the polynomial line module R
// ---------------------------------------------------------------------

/// Data of an R module: tuning vector with S = {i : d_i <= 0} nonempty,
/// a nonzero boundary constant per residue (theta on S, eta on the
/// complement), and the level.
#[derive(Debug, Clone)]
pub struct RSpec {
    p: u32,
    d: Vec<i64>,
    theta: BTreeMap<u32, Cyclo>,
    eta: BTreeMap<u32, Cyclo>,
    level: BigRational,
}

impl RSpec {
    pub fn new(
        p: u32,
        d: Vec<i64>,
        theta: BTreeMap<u32, Cyclo>,
        eta: BTreeMap<u32, Cyclo>,
        level: BigRational,
    ) -> Result<Self> {
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
        let s_set: BTreeSet<u32> = (1..p).filter(|&i| d[(i - 1) as usize] <= 0).collect();
        if s_set.is_empty() {
            return Err(Error::invalid(
                "no residue has d_i <= 0; the R construction needs at least one",
            ));
        }
        let sbar_set: BTreeSet<u32> = (1..p).filter(|i| !s_set.contains(i)).collect();
        let theta_keys: BTreeSet<u32> = theta.keys().copied().collect();
        if theta_keys != s_set {
            return Err(Error::invalid(format!(
                "theta must assign exactly the residues with d_i <= 0, expected {s_set:?}"
            )));
        }
        let eta_keys: BTreeSet<u32> = eta.keys().copied().collect();
        if eta_keys != sbar_set {
            return Err(Error::invalid(format!(
                "eta must assign exactly the residues with d_i > 0, expected {sbar_set:?}"
            )));
        }
        if theta.values().chain(eta.values()).any(Cyclo::is_zero) {
            return Err(Error::invalid("all boundary constants must be nonzero"));
        }
        Ok(RSpec { p, d, theta, eta, level })
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn d(&self) -> &[i64] {
        &self.d
    }

    pub fn level(&self) -> &BigRational {
        &self.level
    }

    pub fn positive_spec(&self) -> PositivePartSpec {
        PositivePartSpec::new(self.p, self.d.clone()).expect("validated at construction")
    }

    /// The boundary constant for residue t (theta or eta).
    pub fn boundary_value(&self, t: u32) -> &Cyclo {
        self.theta.get(&t).or_else(|| self.eta.get(&t)).expect("residue in 1..p")
    }

    /// Value of L_m on the cyclic vector: boundary constant at the
    /// lowest index of each nonzero residue class, zero elsewhere.
    /// Errors when L_m is outside the positive part.  The zero mode is
    /// excluded (it multiplies rather than evaluates).
    fn unit_value(&self, m: i64) -> Result<Option<Cyclo>> {
        let p = self.p as i64;
        let t = m.rem_euclid(p);
        if t == 0 {
            if m < 0 {
                return Err(Error::invalid(format!(
                    "L[{m}] is outside the inducing subalgebra"
                )));
            }
            if m == 0 {
                return Ok(None);
            }
            return Ok(Some(Cyclo::zero(self.p)));
        }
        let threshold = t - p * self.d[(t - 1) as usize];
        if m < threshold {
            return Err(Error::invalid(format!(
                "L[{m}] is outside the inducing subalgebra"
            )));
        }
        if m == threshold {
            Ok(Some(self.boundary_value(t as u32).clone()))
        } else {
            Ok(Some(Cyclo::zero(self.p)))
        }
    }
}

/// Basis key L0^n.
pub fn r_key(n: u64) -> BaseKey {
    if n == 0 {
        BaseKey::unit()
    } else {
        BaseKey::Word(vec![(0, n)])
    }
}

fn r_key_exponent(key: &BaseKey) -> Result<u64> {
    match key {
        BaseKey::Word(w) if w.is_empty() => Ok(0),
        BaseKey::Word(w) if w.len() == 1 && w[0].0 == 0 && w[0].1 >= 1 => Ok(w[0].1),
        _ => Err(Error::invalid(format!("{key} is not a monomial in L[0]"))),
    }
}

/// The R module as a base module on keys {L0^n}.
pub struct RBase {
    spec: RSpec,
}

impl RBase {
    pub fn new(spec: RSpec) -> Self {
        RBase { spec }
    }

    pub fn spec(&self) -> &RSpec {
        &self.spec
    }
}

impl BaseModule for RBase {
    fn describe(&self) -> String {
        format!("polynomial line module, d={:?}", self.spec.d)
    }

    fn act_on_key(&self, g: &Gen, key: &BaseKey) -> Result<Vec<(BaseKey, Cyclo)>> {
        let n = r_key_exponent(key)?;
        match g {
            Gen::C(i) => {
                let c = gap_central_value(self.spec.p, *i, &self.spec.level);
                if c.is_zero() {
                    Ok(Vec::new())
                } else {
                    Ok(vec![(key.clone(), c)])
                }
            }
            Gen::L(m) => {
                match self.spec.unit_value(*m)? {
                    // the zero mode multiplies by the variable
                    None => Ok(vec![(r_key(n + 1), Cyclo::one(self.spec.p))]),
                    Some(c) if c.is_zero() => Ok(Vec::new()),
                    Some(c) => Ok(shifted_power(self.spec.p, *m, n)
                        .into_iter()
                        .map(|(k, b)| (r_key(k), b.mul(&c)))
                        .collect()),
                }
            }
            other => Err(Error::invalid(format!(
                "{other} does not belong to the gap algebra's positive part"
            ))),
        }
    }
}

/// Closed-form action on the R module directly: L (generator) applied to
/// L0^n, returned as (exponent, coefficient) pairs.
pub fn r_act(spec: &RSpec, g: &Gen, n: u64) -> Result<Vec<(u64, Cyclo)>> {
    let base = RBase::new(spec.clone());
    let image = base.act_on_key(g, &r_key(n))?;
    image
        .into_iter()
        .map(|(key, c)| Ok((r_key_exponent(&key)?, c)))
        .collect()
}

/// The module induced from R along the shifted positive part.
pub fn induced_r(spec: &RSpec) -> Result<InducedModule> {
    let alg = AlgebraId::gap(spec.p)?;
    let positive = PositivePart::Shifted(spec.positive_spec());
    let ann = AnnihilationSpec { k: 0, d: spec.d.clone() };
    Ok(InducedModule::new(
        alg,
        positive,
        spec.level.clone(),
        Some(ann),
        Box::new(RBase::new(spec.clone())),
        format!("induced-r(p={})", spec.p),
    ))
}

// ---------------------------------------------------------------------
// the polynomial modules Q
// ---------------------------------------------------------------------

/// Data of a Q module: cutoff k, tuning vector, per-residue evaluation
/// sets S_0..S_{p-1} inside {1..k}, the constants theta_{i,j} for
/// j in S_i, and the level.
#[derive(Debug, Clone)]
pub struct QSpec {
    p: u32,
    k: i64,
    d: Vec<i64>,
    s: Vec<BTreeSet<i64>>,
    theta: BTreeMap<(u32, i64), Cyclo>,
    level: BigRational,
}

impl QSpec {
    pub fn new(
        p: u32,
        k: i64,
        d: Vec<i64>,
        s: Vec<BTreeSet<i64>>,
        theta: BTreeMap<(u32, i64), Cyclo>,
        level: BigRational,
    ) -> Result<Self> {
        if p < 2 {
            return Err(Error::invalid("p must be at least 2"));
        }
        if k < 1 {
            return Err(Error::invalid("the cutoff k must be positive"));
        }
        if d.len() != (p - 1) as usize {
            return Err(Error::invalid(format!(
                "tuning vector must have length {}, got {}",
                p - 1,
                d.len()
            )));
        }
        if s.len() != p as usize {
            return Err(Error::invalid(format!(
                "need {p} evaluation sets, got {}",
                s.len()
            )));
        }
        for (i, set) in s.iter().enumerate() {
            if set.iter().any(|&j| j < 1 || j > k) {
                return Err(Error::invalid(format!(
                    "evaluation set {i} leaves the range 1..={k}"
                )));
            }
        }
        let wanted: BTreeSet<(u32, i64)> = s
            .iter()
            .enumerate()
            .flat_map(|(i, set)| set.iter().map(move |&j| (i as u32, j)))
            .collect();
        let got: BTreeSet<(u32, i64)> = theta.keys().copied().collect();
        if wanted != got {
            return Err(Error::invalid(
                "theta must assign exactly the pairs (i, j) with j in S_i",
            ));
        }
        Ok(QSpec { p, k, d, s, theta, level })
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn k(&self) -> i64 {
        self.k
    }

    pub fn d(&self) -> &[i64] {
        &self.d
    }

    pub fn level(&self) -> &BigRational {
        &self.level
    }

    pub fn evaluation_set(&self, i: u32) -> &BTreeSet<i64> {
        &self.s[i as usize]
    }

    pub fn theta(&self, i: u32, j: i64) -> Option<&Cyclo> {
        self.theta.get(&(i, j))
    }

    pub fn positive_spec(&self) -> PositivePartSpec {
        PositivePartSpec::new(self.p, self.d.clone()).expect("validated at construction")
    }

    /// d_t for residue 1 <= t <= p-1.
    fn d_at(&self, t: u32) -> i64 {
        self.d[(t - 1) as usize]
    }

    /// Classifies a positive-part generator index: a free variable of
    /// the polynomial module, an evaluated constant, or zero.
    pub fn classify(&self, m: i64) -> Result<QLetter> {
        let p = self.p as i64;
        let t = m.rem_euclid(p);
        if t == 0 {
            let i = m / p;
            if i < 0 {
                return Err(Error::invalid(format!(
                    "L[{m}] is outside the inducing subalgebra"
                )));
            }
            if i > self.k {
                return Ok(QLetter::Zero);
            }
            if self.s[0].contains(&i) {
                return Ok(QLetter::Scalar(self.theta[&(0, i)].clone()));
            }
            return Ok(QLetter::Variable(QVar::Multiple { i }));
        }
        let dt = self.d_at(t as u32);
        let l = (m - t) / p + dt;
        if l < 0 {
            return Err(Error::invalid(format!(
                "L[{m}] is outside the inducing subalgebra"
            )));
        }
        if l > self.k {
            return Ok(QLetter::Zero);
        }
        if self.s[t as usize].contains(&l) {
            return Ok(QLetter::Scalar(self.theta[&(t as u32, l)].clone()));
        }
        Ok(QLetter::Variable(QVar::Shifted { t: t as u32, l }))
    }

    /// The variable set T in convention order.
    pub fn variables(&self) -> Vec<QVar> {
        let mut vars = Vec::new();
        for t in 1..self.p {
            for l in 0..=self.k {
                if !self.s[t as usize].contains(&l) {
                    vars.push(QVar::Shifted { t, l });
                }
            }
        }
        for i in 0..=self.k {
            if !self.s[0].contains(&i) {
                vars.push(QVar::Multiple { i });
            }
        }
        vars.sort_by_key(QVar::order_key);
        vars
    }
}

/// A variable of the polynomial module Q.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QVar {
    /// L_{t + p(l - d_t)} with l outside S_t.
    Shifted { t: u32, l: i64 },
    /// L_{p i} with i outside S_0.
    Multiple { i: i64 },
}

impl QVar {
    /// The raw generator index.
    pub fn index(&self, spec: &QSpec) -> i64 {
        match self {
            QVar::Shifted { t, l } => *t as i64 + spec.p as i64 * (l - spec.d_at(*t)),
            QVar::Multiple { i } => spec.p as i64 * i,
        }
    }

    /// Ascending sort by this key realizes the convention order: the
    /// shifted variables first (by l descending, then residue
    /// descending), then the multiples by index descending.
    fn order_key(&self) -> (u8, i64, i64) {
        match self {
            QVar::Shifted { t, l } => (0, -l, -(*t as i64)),
            QVar::Multiple { i } => (1, -i, 0),
        }
    }
}

/// Outcome of classifying a positive-part index against a Q spec.
#[derive(Debug, Clone)]
pub enum QLetter {
    Variable(QVar),
    Scalar(Cyclo),
    Zero,
}

/// Validation verdict for a Q spec.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QValidation {
    pub valid: bool,
    pub violation: Option<String>,
}

/// Checks the three closure conditions of a Q spec.
pub fn validate_qspec(spec: &QSpec) -> QValidation {
    let k = spec.k;
    // condition 1: k in every S_i with nonzero constant
    for i in 0..spec.p {
        if !spec.s[i as usize].contains(&k) {
            return QValidation {
                valid: false,
                violation: Some(format!("condition 1 fails: {k} is missing from S_{i}")),
            };
        }
        if spec.theta[&(i, k)].is_zero() {
            return QValidation {
                valid: false,
                violation: Some(format!("condition 1 fails: theta_({i},{k}) is zero")),
            };
        }
    }
    // condition 2: complements of S_0 pair into some S_t, t >= 1
    for i in 0..=k {
        if spec.s[0].contains(&i) {
            continue;
        }
        let paired = (1..spec.p).any(|t| spec.s[t as usize].contains(&(k - i)));
        if !paired {
            return QValidation {
                valid: false,
                violation: Some(format!(
                    "condition 2 fails: {} is in no S_t with t >= 1",
                    k - i
                )),
            };
        }
    }
    // condition 3: complements of S_j (j >= 1) pair into S_0
    for j in 1..spec.p {
        for i in 0..=k {
            if spec.s[j as usize].contains(&i) {
                continue;
            }
            if !spec.s[0].contains(&(k - i)) {
                return QValidation {
                    valid: false,
                    violation: Some(format!(
                        "condition 3 fails: {} is not in S_0 (complement of S_{j} at {i})",
                        k - i
                    )),
                };
            }
        }
    }
    QValidation { valid: true, violation: None }
}

/// The Q module as a base module on convention-ordered monomial keys.
pub struct QBase {
    spec: QSpec,
}

impl QBase {
    pub fn new(spec: QSpec) -> Result<Self> {
        let check = validate_qspec(&spec);
        if !check.valid {
            return Err(Error::invalid(
                check.violation.unwrap_or_else(|| "invalid Q spec".to_string()),
            ));
        }
        Ok(QBase { spec })
    }

    pub fn spec(&self) -> &QSpec {
        &self.spec
    }

    /// Decodes and validates a convention-ordered key into letters.
    fn key_letters(&self, key: &BaseKey) -> Result<Vec<i64>> {
        let word = match key {
            BaseKey::Word(w) => w,
            BaseKey::Idx(_) => {
                return Err(Error::invalid("polynomial modules use word keys"));
            }
        };
        let mut letters = Vec::new();
        let mut prev: Option<(u8, i64, i64)> = None;
        for &(m, e) in word {
            if e == 0 {
                return Err(Error::invalid("zero exponent in key"));
            }
            let var = match self.spec.classify(m)? {
                QLetter::Variable(v) => v,
                _ => {
                    return Err(Error::invalid(format!(
                        "L[{m}] is not a free variable of this module"
                    )));
                }
            };
            let ok = var.order_key();
            if let Some(pk) = prev {
                if pk >= ok {
                    return Err(Error::invalid(format!(
                        "key is not in convention order at L[{m}]"
                    )));
                }
            }
            prev = Some(ok);
            for _ in 0..e {
                letters.push(m);
            }
        }
        Ok(letters)
    }

    /// Straightens a generator word applied to the cyclic vector into a
    /// combination of convention-ordered monomial keys.
    fn straighten(&self, coeff: Cyclo, letters: Vec<i64>) -> Result<Vec<(BaseKey, Cyclo)>> {
        let p = self.spec.p;
        let alg = AlgebraId::gap(p)?;
        let mut out: BTreeMap<BaseKey, Cyclo> = BTreeMap::new();
        let mut stack: Vec<(Cyclo, Vec<i64>)> = vec![(coeff, letters)];
        let mut steps = 0u64;
        while let Some((coeff, letters)) = stack.pop() {
            steps += 1;
            if steps > 5_000_000 {
                return Err(Error::internal("straightening did not terminate in budget"));
            }
            if coeff.is_zero() {
                continue;
            }
            // classify every letter
            let classes: Vec<QLetter> = letters
                .iter()
                .map(|&m| self.spec.classify(m))
                .collect::<Result<_>>()?;
            // evaluate or migrate the rightmost non-variable letter
            if let Some(pos) = (0..letters.len())
                .rev()
                .find(|&i| !matches!(classes[i], QLetter::Variable(_)))
            {
                if pos + 1 == letters.len() {
                    match &classes[pos] {
                        QLetter::Zero => continue,
                        QLetter::Scalar(c) => {
                            let mut shorter = letters.clone();
                            shorter.pop();
                            stack.push((coeff.mul(c), shorter));
                        }
                        QLetter::Variable(_) => unreachable!(),
                    }
                } else {
                    self.push_swap(alg, &coeff, &letters, pos, &mut stack)?;
                }
                continue;
            }
            // all variables: sort into convention order
            let keys: Vec<(u8, i64, i64)> = letters
                .iter()
                .map(|&m| match self.spec.classify(m) {
                    Ok(QLetter::Variable(v)) => v.order_key(),
                    _ => unreachable!("classified above"),
                })
                .collect();
            if let Some(pos) = (0..letters.len().saturating_sub(1)).find(|&i| keys[i] > keys[i + 1])
            {
                self.push_swap(alg, &coeff, &letters, pos, &mut stack)?;
                continue;
            }
            // sorted: compress into a key
            let mut word: Vec<(i64, u64)> = Vec::new();
            for &m in &letters {
                match word.last_mut() {
                    Some((lm, e)) if *lm == m => *e += 1,
                    _ => word.push((m, 1)),
                }
            }
            let key = if word.is_empty() { BaseKey::unit() } else { BaseKey::Word(word) };
            let slot = out.entry(key).or_insert_with(|| Cyclo::zero(p));
            *slot = slot.add(&coeff);
        }
        Ok(out.into_iter().filter(|(_, c)| !c.is_zero()).collect())
    }

    /// Pushes the swap of letters (pos, pos+1) plus its bracket
    /// correction onto the worklist; centrals in the bracket substitute
    /// their scalars immediately.
    fn push_swap(
        &self,
        alg: AlgebraId,
        coeff: &Cyclo,
        letters: &[i64],
        pos: usize,
        stack: &mut Vec<(Cyclo, Vec<i64>)>,
    ) -> Result<()> {
        let mut swapped = letters.to_vec();
        swapped.swap(pos, pos + 1);
        stack.push((coeff.clone(), swapped));
        let br = bracket_gens(alg, Gen::L(letters[pos]), Gen::L(letters[pos + 1]))?;
        for (g, c) in br.terms() {
            match g {
                Gen::L(m) => {
                    let mut shorter = letters.to_vec();
                    shorter.remove(pos + 1);
                    shorter[pos] = *m;
                    stack.push((coeff.mul(c), shorter));
                }
                Gen::C(i) => {
                    let scalar = gap_central_value(self.spec.p, *i, &self.spec.level);
                    if !scalar.is_zero() {
                        let mut shorter = letters.to_vec();
                        shorter.remove(pos + 1);
                        shorter.remove(pos);
                        stack.push((coeff.mul(c).mul(&scalar), shorter));
                    }
                }
                other => {
                    return Err(Error::internal(format!(
                        "unexpected bracket term {other} in a gap straightening"
                    )));
                }
            }
        }
        Ok(())
    }
}

impl BaseModule for QBase {
    fn describe(&self) -> String {
        format!("polynomial module, k={}, d={:?}", self.spec.k, self.spec.d)
    }

    fn act_on_key(&self, g: &Gen, key: &BaseKey) -> Result<Vec<(BaseKey, Cyclo)>> {
        match g {
            Gen::C(i) => {
                let c = gap_central_value(self.spec.p, *i, &self.spec.level);
                if c.is_zero() {
                    Ok(Vec::new())
                } else {
                    Ok(vec![(key.clone(), c)])
                }
            }
            Gen::L(m) => {
                // reject indices outside the positive part up front
                self.spec.classify(*m)?;
                let mut letters = vec![*m];
                letters.extend(self.key_letters(key)?);
                self.straighten(Cyclo::one(self.spec.p), letters)
            }
            other => Err(Error::invalid(format!(
                "{other} does not belong to the gap algebra's positive part"
            ))),
        }
    }
}

/// Action on the Q module directly: generator applied to a
/// convention-ordered monomial key.
pub fn q_act(spec: &QSpec, g: &Gen, key: &BaseKey) -> Result<Vec<(BaseKey, Cyclo)>> {
    QBase::new(spec.clone())?.act_on_key(g, key)
}

/// The module induced from Q along the shifted positive part.
pub fn induced_q(spec: &QSpec) -> Result<InducedModule> {
    let base = QBase::new(spec.clone())?;
    let alg = AlgebraId::gap(spec.p)?;
    let positive = PositivePart::Shifted(spec.positive_spec());
    let ann = AnnihilationSpec { k: spec.k, d: spec.d.clone() };
    Ok(InducedModule::new(
        alg,
        positive,
        spec.level.clone(),
        Some(ann),
        Box::new(base),
        format!("induced-q(p={}, k={})", spec.p, spec.k),
    ))
}

// ---------------------------------------------------------------------
// internal reductions to the cyclic vector
// ---------------------------------------------------------------------

/// Reduces a base-supported vector of an induced R module to a multiple
/// of the cyclic vector by iterating the boundary-operator step
/// (L_boundary - theta) for the smallest residue with d_i <= 0; each
/// step lowers the polynomial degree by exactly one.
pub fn internal_reduce_r(
    spec: &RSpec,
    module: &InducedModule,
    v: &ModuleVector,
) -> Result<ModuleVector> {
    let i = *spec
        .theta
        .keys()
        .next()
        .ok_or_else(|| Error::internal("validated spec has nonempty S"))?;
    let m = i as i64 - spec.p as i64 * spec.d[(i - 1) as usize];
    let theta = spec.theta[&i].clone();
    let mut cur = v.clone();
    for _ in 0..100_000 {
        if cur.is_zero() {
            return Err(Error::internal("internal reduction reached zero"));
        }
        let top = cur
            .terms()
            .map(|((mono, key), _)| {
                if !mono.is_one() {
                    Err(Error::invalid("vector is not base-supported"))
                } else {
                    r_key_exponent(key)
                }
            })
            .collect::<Result<Vec<u64>>>()?
            .into_iter()
            .max()
            .expect("nonzero vector");
        if top == 0 {
            return Ok(cur);
        }
        let acted = module.act_gen(Gen::L(m), &cur)?;
        cur = acted.sub(&cur.scale(&theta))?;
    }
    Err(Error::internal("internal reduction did not finish in budget"))
}

/// Reduces a base-supported vector of an induced Q module to a multiple
/// of the cyclic vector.  Each step eliminates the leading variable of
/// the largest monomial: multiples L_{p i} pair with the shifted
/// operator at l = k - i (closure condition 2), shifted variables at l
/// pair with L_{p(k-l)} (closure condition 3); in both cases the
/// operator evaluates to a constant on the cyclic vector and the step
/// subtracts that constant times the identity.
pub fn internal_reduce_q(
    spec: &QSpec,
    module: &InducedModule,
    v: &ModuleVector,
) -> Result<ModuleVector> {
    let qbase = QBase::new(spec.clone())?;
    let mut cur = v.clone();
    for _ in 0..10_000 {
        if cur.is_zero() {
            return Err(Error::internal("internal reduction reached zero"));
        }
        // find the largest key by (total degree, convention position)
        let mut top: Option<(u64, Vec<i64>)> = None;
        for ((mono, key), _) in cur.terms() {
            if !mono.is_one() {
                return Err(Error::invalid("vector is not base-supported"));
            }
            let letters = qbase.key_letters(key)?;
            let deg = letters.len() as u64;
            let cand = (deg, letters);
            top = Some(match top {
                None => cand,
                Some(best) => {
                    if (cand.0, &cand.1) > (best.0, &best.1) {
                        cand
                    } else {
                        best
                    }
                }
            });
        }
        let (deg, letters) = top.expect("nonzero vector");
        if deg == 0 {
            return Ok(cur);
        }
        // leading variable of the leading monomial
        let lead = letters[0];
        let var = match spec.classify(lead)? {
            QLetter::Variable(v) => v,
            _ => return Err(Error::internal("key letter is always a variable")),
        };
        let (op_index, op_value) = match var {
            QVar::Multiple { i } => {
                // pair with a shifted operator at level k - i
                let t = (1..spec.p)
                    .find(|&t| spec.s[t as usize].contains(&(spec.k - i)))
                    .ok_or_else(|| {
                        Error::internal("closure condition 2 guarantees a pairing")
                    })?;
                let idx =
                    t as i64 + spec.p as i64 * (spec.k - i - spec.d_at(t));
                let value = match spec.classify(idx)? {
                    QLetter::Scalar(c) => c,
                    QLetter::Zero => Cyclo::zero(spec.p),
                    QLetter::Variable(_) => {
                        return Err(Error::internal("pairing operator must evaluate"));
                    }
                };
                (idx, value)
            }
            QVar::Shifted { l, .. } => {
                // pair with the multiple operator at k - l
                if !spec.s[0].contains(&(spec.k - l)) {
                    return Err(Error::internal("closure condition 3 guarantees a pairing"));
                }
                let idx = spec.p as i64 * (spec.k - l);
                (idx, spec.theta[&(0, spec.k - l)].clone())
            }
        };
        let acted = module.act_gen(Gen::L(op_index), &cur)?;
        let next = acted.sub(&cur.scale(&op_value))?;
        cur = next;
    }
    Err(Error::internal("internal reduction did not finish in budget"))
}

// ---------------------------------------------------------------------
// Whittaker characters and modules
// ---------------------------------------------------------------------

/// A character datum for Whittaker modules: values on the positive
/// modes plus the index-0 central (the higher centrals are sent to zero
/// by definition).
#[derive(Debug, Clone)]
pub struct WhittakerType {
    p: u32,
    values: BTreeMap<i64, Cyclo>,
    central: BigRational,
}

impl WhittakerType {
    pub fn new(p: u32, values: BTreeMap<i64, Cyclo>, central: BigRational) -> Result<Self> {
        if p < 2 {
            return Err(Error::invalid("p must be at least 2"));
        }
        if values.keys().any(|&m| m < 1) {
            return Err(Error::invalid("character values live on positive modes only"));
        }
        let values = values.into_iter().filter(|(_, v)| !v.is_zero()).collect();
        Ok(WhittakerType { p, values, central })
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    /// phi(L_m) for m >= 1 (zero when unset).
    pub fn value(&self, m: i64) -> Cyclo {
        self.values.get(&m).cloned().unwrap_or_else(|| Cyclo::zero(self.p))
    }

    /// phi(C_0).
    pub fn central(&self) -> &BigRational {
        &self.central
    }

    /// The matching module level: the index-0 central acts by p^2 the
    /// level, so the level is phi(C_0)/p^2.
    pub fn level(&self) -> BigRational {
        let psq = BigRational::from_integer(BigInt::from((self.p as i64) * (self.p as i64)));
        &self.central / psq
    }

    pub fn entries(&self) -> impl Iterator<Item = (&i64, &Cyclo)> {
        self.values.iter()
    }
}

/// Validation verdict for a Whittaker character.
#[derive(Debug, Clone)]
pub struct WhittakerReport {
    pub valid: bool,
    pub violation: Option<String>,
    /// A positive-generator pair whose bracket has nonzero value, when
    /// one exists.
    pub witness: Option<(i64, i64)>,
}

/// Checks that the character kills every bracket of positive modes
/// (pairs with index sum up to 4p) and the forced vanishing pattern:
/// only indices in 1..=p and 2p may carry nonzero values.
pub fn validate_whittaker(phi: &WhittakerType) -> Result<WhittakerReport> {
    let p = phi.p as i64;
    let alg = AlgebraId::gap(phi.p)?;
    // bracket scan with witness
    for a in 1..=(4 * p) {
        for b in (a + 1)..=(4 * p - a) {
            let br = bracket_gens(alg, Gen::L(a), Gen::L(b))?;
            let mut total = Cyclo::zero(phi.p);
            for (g, c) in br.terms() {
                match g {
                    Gen::L(m) => total = total.add(&phi.value(*m).mul(c)),
                    // the centrals never appear at positive index sums,
                    // but evaluate them faithfully anyway
                    Gen::C(0) => {
                        total = total
                            .add(&Cyclo::from_ratio(phi.p, phi.central.clone()).mul(c));
                    }
                    Gen::C(_) => {}
                    other => {
                        return Err(Error::internal(format!(
                            "unexpected bracket term {other}"
                        )));
                    }
                }
            }
            if !total.is_zero() {
                return Ok(WhittakerReport {
                    valid: false,
                    violation: Some(format!(
                        "character does not kill [L[{a}], L[{b}]]"
                    )),
                    witness: Some((a, b)),
                });
            }
        }
    }
    // forced vanishing pattern
    for (&m, v) in phi.values.iter() {
        if m > p && m != 2 * p && !v.is_zero() {
            return Ok(WhittakerReport {
                valid: false,
                violation: Some(format!(
                    "value at L[{m}] must vanish: the index exceeds p and is not 2p"
                )),
                witness: None,
            });
        }
    }
    Ok(WhittakerReport { valid: true, violation: None, witness: None })
}

/// One-dimensional character base: every strictly positive mode acts by
/// its character value.
struct CharacterBase {
    phi: WhittakerType,
}

impl BaseModule for CharacterBase {
    fn describe(&self) -> String {
        format!("character line, p={}", self.phi.p)
    }

    fn act_on_key(&self, g: &Gen, key: &BaseKey) -> Result<Vec<(BaseKey, Cyclo)>> {
        if !key.is_unit() {
            return Err(Error::invalid("character base has a single key"));
        }
        match g {
            Gen::L(m) if *m >= 1 => {
                let c = self.phi.value(*m);
                if c.is_zero() {
                    Ok(Vec::new())
                } else {
                    Ok(vec![(key.clone(), c)])
                }
            }
            Gen::C(i) => {
                let c = gap_central_value(self.phi.p, *i, &self.phi.level());
                if c.is_zero() {
                    Ok(Vec::new())
                } else {
                    Ok(vec![(key.clone(), c)])
                }
            }
            other => Err(Error::invalid(format!(
                "{other} is outside the inducing subalgebra"
            ))),
        }
    }
}

/// The universal Whittaker module of a character: induced from the
/// character line along the strictly positive modes, with PBW basis the
/// monomials in the modes of index <= 0.
pub fn whittaker_universal(phi: &WhittakerType) -> Result<InducedModule> {
    let report = validate_whittaker(phi)?;
    if !report.valid {
        return Err(Error::invalid(
            report.violation.unwrap_or_else(|| "invalid character".to_string()),
        ));
    }
    let alg = AlgebraId::gap(phi.p)?;
    Ok(InducedModule::new(
        alg,
        PositivePart::AllPositive,
        phi.level(),
        None,
        Box::new(CharacterBase { phi: phi.clone() }),
        format!("whittaker(p={})", phi.p),
    ))
}

/// Verdict of the finite-window Whittaker vector check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VectorCheck {
    pub holds: bool,
    /// The smallest window index where the defining relation fails.
    pub witness: Option<i64>,
}

/// Checks L_m v = phi(L_m) v for all 0 < m <= window.
pub fn whittaker_vector_check(
    module: &InducedModule,
    phi: &WhittakerType,
    v: &ModuleVector,
    window: i64,
) -> Result<VectorCheck> {
    if v.is_zero() {
        return Err(Error::ZeroVector);
    }
    for m in 1..=window {
        let lhs = module.act_gen(Gen::L(m), v)?;
        let rhs = v.scale(&phi.value(m));
        if lhs.sub(&rhs)?.is_zero() {
            continue;
        }
        return Ok(VectorCheck { holds: false, witness: Some(m) });
    }
    Ok(VectorCheck { holds: true, witness: None })
}

/// Basis of the space of Whittaker vectors of type phi inside a finite
/// snapshot of a module, by exact linear solving of
/// (L_m - phi(L_m)) v = 0 over 0 < m <= window.
pub fn whittaker_vector_space(
    snap: &Snapshot<'_>,
    phi: &WhittakerType,
    window: i64,
) -> Result<Vec<ModuleVector>> {
    let conditions: Vec<(Gen, Cyclo)> =
        (1..=window).map(|m| (Gen::L(m), phi.value(m))).collect();
    let coords = condition_space(snap, &conditions)?;
    Ok(coords
        .into_iter()
        .map(|cs| {
            let mut v = ModuleVector::zero(snap.module().alg());
            for (b, c) in cs.into_iter().enumerate() {
                if !c.is_zero() {
                    let (mono, key) = &snap.basis()[b];
                    v.add_assign_term(mono.clone(), key.clone(), c);
                }
            }
            v
        })
        .collect())
}

/// A finite snapshot basis of the universal Whittaker module: monomials
/// in the modes of index <= 0 with bounded letter count, bounded index
/// depth, and bounded zero-mode exponent.
pub fn whittaker_snapshot_basis(
    module: &InducedModule,
    max_letters: u64,
    max_depth: i64,
    max_zero_exp: u64,
) -> Result<Vec<(PbwMonomial, BaseKey)>> {
    let mut letters: Vec<i64> = (-max_depth..=0).rev().collect();
    letters.sort_unstable();
    let mut out = Vec::new();
    // enumerate multisets of letters with the stated caps
    fn rec(
        module: &InducedModule,
        letters: &[i64],
        start: usize,
        remaining: u64,
        zero_budget: u64,
        prefix: &mut Vec<Gen>,
        out: &mut Vec<(PbwMonomial, BaseKey)>,
    ) -> Result<()> {
        let mono = PbwMonomial::from_parts(prefix.clone(), BTreeMap::new());
        out.push((mono, BaseKey::unit()));
        if remaining == 0 {
            return Ok(());
        }
        for (pos, &m) in letters.iter().enumerate().skip(start) {
            let budget = if m == 0 {
                if zero_budget == 0 {
                    continue;
                }
                zero_budget - 1
            } else {
                zero_budget
            };
            prefix.push(Gen::L(m));
            rec(module, letters, pos, remaining - 1, budget, prefix, out)?;
            prefix.pop();
        }
        Ok(())
    }
    rec(module, &letters, 0, max_letters, max_zero_exp, &mut Vec::new(), &mut out)?;
    // the recursion can emit a prefix more than once; dedupe
    out.sort();
    out.dedup();
    Ok(out)
}

/// Report of the isomorphism probe between a Whittaker module and its
/// polynomial realization.
#[derive(Debug)]
pub struct WhittakerIsoReport {
    pub p: u32,
    pub window: i64,
    /// Whether the inferred Q spec passed validation.
    pub q_valid: bool,
    /// phi(L_p): when nonzero, the cyclic vector of the Q side cannot
    /// itself be the Whittaker vector (its L_p eigenvalue is zero).
    pub phi_at_p: Cyclo,
    /// Dimension of the snapshot actually searched.
    pub snapshot_dim: usize,
    /// The Whittaker vectors of type phi found in the truncation.
    pub found: Vec<String>,
    /// Caveats that make this a best-effort probe rather than a proof.
    pub notes: Vec<String>,
}

/// Builds the polynomial realization matching a Whittaker character
/// (cutoff 2, evaluation sets {1,2} and {2},...,{2}, tuning vector
/// (2,...,2)) and searches a finite truncation of it for a Whittaker
/// vector of type phi.
pub fn check_whittaker_iso(phi: &WhittakerType, b: u64) -> Result<WhittakerIsoReport> {
    let p = phi.p;
    let report = validate_whittaker(phi)?;
    if !report.valid {
        return Err(Error::invalid(
            report.violation.unwrap_or_else(|| "invalid character".to_string()),
        ));
    }
    if phi.value(2 * p as i64).is_zero() {
        return Err(Error::invalid(
            "the probe needs a nonzero value at L[2p]",
        ));
    }
    for i in 1..p as i64 {
        if phi.value(i).is_zero() {
            return Err(Error::invalid(format!(
                "the probe needs a nonzero value at L[{i}]"
            )));
        }
    }
    // the matching Q data
    let k = 2i64;
    let d = vec![2i64; (p - 1) as usize];
    let mut s: Vec<BTreeSet<i64>> = vec![[1i64, 2].into_iter().collect()];
    for _ in 1..p {
        s.push([2i64].into_iter().collect());
    }
    let mut theta: BTreeMap<(u32, i64), Cyclo> = BTreeMap::new();
    theta.insert((0, 1), Cyclo::zero(p));
    theta.insert((0, 2), phi.value(2 * p as i64));
    for i in 1..p {
        theta.insert((i, 2), phi.value(i as i64));
    }
    let spec = QSpec::new(p, k, d, s, theta, phi.level())?;
    let q_check = validate_qspec(&spec);
    let module = induced_q(&spec)?;
    let window = 3 * p as i64;

    // snapshot: complement monomials of bounded length and depth, keys
    // of bounded degree
    let mut basis: Vec<(PbwMonomial, BaseKey)> = Vec::new();
    let pos_spec = spec.positive_spec();
    let mut letters: Vec<i64> = Vec::new();
    if b > 0 {
        let floor = -((b as i64 + 3) * p as i64);
        for m in floor..0 {
            if !pos_spec.contains_index(m) {
                letters.push(m);
            }
        }
    }
    let vars = spec.variables();
    // key monomials of total degree <= b in the variables
    fn key_rec(
        spec: &QSpec,
        vars: &[QVar],
        start: usize,
        remaining: u64,
        prefix: &mut Vec<(i64, u64)>,
        out: &mut Vec<BaseKey>,
    ) {
        let key = if prefix.is_empty() {
            BaseKey::unit()
        } else {
            BaseKey::Word(prefix.clone())
        };
        out.push(key);
        if remaining == 0 {
            return;
        }
        for (pos, var) in vars.iter().enumerate().skip(start) {
            let idx = var.index(spec);
            match prefix.last_mut() {
                Some((m, e)) if *m == idx => *e += 1,
                _ => prefix.push((idx, 1)),
            }
            key_rec(spec, vars, pos, remaining - 1, prefix, out);
            match prefix.last_mut() {
                Some((m, e)) if *m == idx && *e > 1 => *e -= 1,
                _ => {
                    prefix.pop();
                }
            }
        }
    }
    let mut keys = Vec::new();
    key_rec(&spec, &vars, 0, b, &mut Vec::new(), &mut keys);
    keys.sort();
    keys.dedup();
    // complement monomials: multisets of letters with count <= b
    let mut monos: Vec<Vec<Gen>> = vec![Vec::new()];
    for _ in 0..b {
        let mut next = monos.clone();
        for mono in &monos {
            for &m in &letters {
                if let Some(Gen::L(last)) = mono.last() {
                    if m > *last {
                        continue;
                    }
                }
                let mut ext = mono.clone();
                ext.push(Gen::L(m));
                next.push(ext);
            }
        }
        monos = next;
        monos.sort();
        monos.dedup();
    }
    for mono in monos {
        let pm = PbwMonomial::from_parts(mono, BTreeMap::new());
        for key in &keys {
            basis.push((pm.clone(), key.clone()));
        }
    }
    basis.sort();
    basis.dedup();
    let snap = Snapshot::new(&module, basis)?;
    let solutions = whittaker_vector_space(&snap, phi, window)?;
    Ok(WhittakerIsoReport {
        p,
        window,
        q_valid: q_check.valid,
        phi_at_p: phi.value(p as i64),
        snapshot_dim: snap.dim(),
        found: solutions.iter().map(|v| format!("{v}")).collect(),
        notes: vec![
            "tuning vector (2,...,2) inferred from the boundary matching".to_string(),
            "whittaker vector searched by linear solve, not assumed to be the cyclic vector"
                .to_string(),
            format!("finite truncation of dimension {}", snap.dim()),
        ],
    })
}

// ---------------------------------------------------------------------
// Virasoro pullbacks
// ---------------------------------------------------------------------

/// A finite-dimensional action table for the multiples-of-p subalgebra:
/// per tabulated index, one optional column per basis row (a missing
/// column marks an action that leaves the tabulated window).  Indices
/// at or above the zero bound act as zero.
pub struct VirasoroTables {
    p: u32,
    dim: usize,
    level: BigRational,
    tables: BTreeMap<i64, Vec<Option<Vec<Cyclo>>>>,
    zero_from: i64,
    row_grades: Option<Vec<u64>>,
}

impl VirasoroTables {
    pub fn new(
        p: u32,
        dim: usize,
        level: BigRational,
        tables: BTreeMap<i64, Vec<Option<Vec<Cyclo>>>>,
        zero_from: i64,
    ) -> Result<Self> {
        if dim == 0 {
            return Err(Error::invalid("the table module must have positive dimension"));
        }
        for (&m, cols) in &tables {
            if m.rem_euclid(p as i64) != 0 {
                return Err(Error::invalid(format!(
                    "table index {m} is not a multiple of {p}"
                )));
            }
            if cols.len() != dim {
                return Err(Error::invalid(format!(
                    "table for L[{m}] has {} columns, expected {dim}",
                    cols.len()
                )));
            }
            for col in cols.iter().flatten() {
                if col.len() != dim {
                    return Err(Error::invalid(format!(
                        "column length mismatch in the table for L[{m}]"
                    )));
                }
            }
        }
        Ok(VirasoroTables { p, dim, level, tables, zero_from, row_grades: None })
    }

    /// The trivial one-dimensional module: every mode acts as zero.
    pub fn trivial(p: u32) -> Self {
        VirasoroTables {
            p,
            dim: 1,
            level: BigRational::from_integer(BigInt::from(0)),
            tables: BTreeMap::new(),
            zero_from: i64::MIN,
            row_grades: Some(vec![0]),
        }
    }

    /// Attaches the grade of each basis row (in units of the inner
    /// module's grading, so index p times this in the pulled-back
    /// module).
    pub fn with_row_grades(mut self, grades: Vec<u64>) -> Result<Self> {
        if grades.len() != self.dim {
            return Err(Error::invalid(format!(
                "{} row grades for a dimension-{} table",
                grades.len(),
                self.dim
            )));
        }
        self.row_grades = Some(grades);
        Ok(self)
    }

    /// Grade of a basis row, when known.
    pub fn row_grade(&self, idx: usize) -> Option<u64> {
        self.row_grades.as_ref().and_then(|g| g.get(idx).copied())
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn level(&self) -> &BigRational {
        &self.level
    }

    /// Column of the action of L_m on basis row `col`; None marks an
    /// action leaving the window; an error marks an untabulated index.
    fn column(&self, m: i64, col: usize) -> Result<Option<&[Cyclo]>> {
        if let Some(cols) = self.tables.get(&m) {
            return Ok(cols[col].as_deref());
        }
        if m >= self.zero_from {
            Ok(Some(&[]))
        } else {
            Err(Error::OutsideDomain(format!(
                "L[{m}] is not tabulated in this window"
            )))
        }
    }

    /// Verifies the Virasoro bracket on every tabulated pair whose
    /// composite actions stay inside the window; returns the number of
    /// verified (pair, column) checks.
    pub fn validate(&self) -> Result<usize> {
        let p = self.p;
        let pl = p as i64;
        let indices: Vec<i64> = self.tables.keys().copied().collect();
        let mut checked = 0usize;
        for &a in &indices {
            for &b in &indices {
                if a >= b {
                    continue;
                }
                let m = a / pl;
                let n = b / pl;
                for col in 0..self.dim {
                    let Some(lhs) = self.compose(a, b, col)? else { continue };
                    let Some(rhs_swap) = self.compose(b, a, col)? else { continue };
                    // bracket value: p(n - m) L_{p(m+n)} + delta (1/12)(m^3 - m) p^2 l0
                    let mut want = vec![Cyclo::zero(p); self.dim];
                    let target = a + b;
                    let coeff = Cyclo::from_int(p, pl * (n - m));
                    if !coeff.is_zero() {
                        let Ok(tcol) = self.column(target, col) else { continue };
                        let Some(tcol) = tcol else { continue };
                        for (w, e) in want.iter_mut().zip(tcol.iter().chain(std::iter::repeat(&Cyclo::zero(p)))) {
                            *w = w.add(&e.mul(&coeff));
                        }
                    }
                    if m + n == 0 {
                        let mm = BigRational::from_integer(BigInt::from(m));
                        let twelve = BigRational::from_integer(BigInt::from(12));
                        let central = (&mm * &mm * &mm - &mm) / twelve
                            * BigRational::from_integer(BigInt::from(pl * pl))
                            * &self.level;
                        let cc = Cyclo::from_ratio(p, central);
                        want[col] = want[col].add(&cc);
                    }
                    let mut ok = true;
                    for i in 0..self.dim {
                        let got = lhs[i].sub(&rhs_swap[i]);
                        if got != want[i] {
                            ok = false;
                            break;
                        }
                    }
                    if !ok {
                        return Err(Error::invalid(format!(
                            "tables violate the Virasoro bracket at L[{a}], L[{b}]"
                        )));
                    }
                    checked += 1;
                }
            }
        }
        Ok(checked)
    }

    /// Action of L_a after L_b on a basis column, when both stay inside
    /// the window.
    fn compose(&self, a: i64, b: i64, col: usize) -> Result<Option<Vec<Cyclo>>> {
        let p = self.p;
        let Ok(first) = self.column(b, col) else { return Ok(None) };
        let Some(first) = first else { return Ok(None) };
        let mut out = vec![Cyclo::zero(p); self.dim];
        for (row, c) in first.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let Ok(second) = self.column(a, row) else { return Ok(None) };
            let Some(second) = second else { return Ok(None) };
            for (o, e) in out.iter_mut().zip(second.iter().chain(std::iter::repeat(&Cyclo::zero(p)))) {
                *o = o.add(&e.mul(c));
            }
        }
        Ok(Some(out))
    }
}

impl fmt::Debug for VirasoroTables {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "VirasoroTables(p={}, dim={}, tabulated={})",
            self.p,
            self.dim,
            self.tables.len()
        )
    }
}

/// Base module wrapping a validated table set; non-multiple modes act
/// as zero.
struct TableBase {
    tables: VirasoroTables,
}

impl BaseModule for TableBase {
    fn describe(&self) -> String {
        format!("table module of dimension {}", self.tables.dim)
    }

    fn act_on_key(&self, g: &Gen, key: &BaseKey) -> Result<Vec<(BaseKey, Cyclo)>> {
        let row = match key {
            BaseKey::Idx(r) if *r < self.tables.dim => *r,
            BaseKey::Idx(r) => {
                return Err(Error::invalid(format!("row {r} exceeds the table dimension")));
            }
            BaseKey::Word(_) => {
                return Err(Error::invalid("table modules use row keys"));
            }
        };
        match g {
            Gen::L(m) if m.rem_euclid(self.tables.p as i64) != 0 => Ok(Vec::new()),
            Gen::L(m) => {
                let col = self.tables.column(*m, row)?.ok_or_else(|| {
                    Error::OutsideDomain(format!(
                        "L[{m}] on row {row} leaves the tabulated window"
                    ))
                })?;
                Ok(col
                    .iter()
                    .enumerate()
                    .filter(|(_, c)| !c.is_zero())
                    .map(|(i, c)| (BaseKey::Idx(i), c.clone()))
                    .collect())
            }
            Gen::C(i) => {
                let c = gap_central_value(self.tables.p, *i, &self.tables.level);
                if c.is_zero() {
                    Ok(Vec::new())
                } else {
                    Ok(vec![(key.clone(), c)])
                }
            }
            other => Err(Error::invalid(format!(
                "{other} does not belong to the gap algebra"
            ))),
        }
    }
}

/// Builds the gap module pulled back from a table module over the
/// multiples-of-p subalgebra: validates the tables, then extends by
/// zero on all non-multiple modes and higher centrals.
pub fn pullback_module(tables: VirasoroTables) -> Result<InducedModule> {
    tables.validate()?;
    let alg = AlgebraId::gap(tables.p)?;
    let level = tables.level.clone();
    let label = format!("pullback(p={}, dim={})", tables.p, tables.dim);
    Ok(InducedModule::new(
        alg,
        PositivePart::Everything,
        level,
        None,
        Box::new(TableBase { tables }),
        label,
    ))
}

/// Tabulates the multiples-of-p action of the gap highest-weight module
/// on its sub-basis of multiples-only monomials up to the stated depth
/// (the depth of L_{-p i} is i).  Entries whose images exceed the depth
/// window are left unavailable rather than truncated.
pub fn highest_weight_tables(
    p: u32,
    l0: BigRational,
    h: BigRational,
    depth: u64,
) -> Result<VirasoroTables> {
    let module = crate::modules::verma(p, l0.clone(), h)?;
    // basis: partitions of every n <= depth, parts as letters L_{-p part}
    let mut basis: Vec<Vec<u64>> = Vec::new();
    for n in 0..=depth {
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
        rec(n, n.max(1), &mut Vec::new(), &mut basis);
    }
    let keyed: Vec<(PbwMonomial, u64)> = basis
        .iter()
        .map(|parts| {
            let letters: Vec<Gen> = parts.iter().map(|&q| Gen::L(-(p as i64) * q as i64)).collect();
            let depth: u64 = parts.iter().sum();
            (PbwMonomial::from_parts(letters, BTreeMap::new()), depth)
        })
        .collect();
    let index: BTreeMap<PbwMonomial, usize> = keyed
        .iter()
        .enumerate()
        .map(|(i, (m, _))| (m.clone(), i))
        .collect();
    let dim = keyed.len();
    let mut tables: BTreeMap<i64, Vec<Option<Vec<Cyclo>>>> = BTreeMap::new();
    for m in -(depth as i64)..=depth as i64 {
        let raw = p as i64 * m;
        let mut cols: Vec<Option<Vec<Cyclo>>> = Vec::with_capacity(dim);
        for (mono, mono_depth) in &keyed {
            if m < 0 && mono_depth + m.unsigned_abs() > depth {
                cols.push(None);
                continue;
            }
            let mut vec = ModuleVector::zero(module.alg());
            vec.add_assign_term(mono.clone(), BaseKey::unit(), Cyclo::one(p));
            let image = module.act_gen(Gen::L(raw), &vec)?;
            let mut col = vec![Cyclo::zero(p); dim];
            let mut inside = true;
            for ((om, _), c) in image.terms() {
                match index.get(om) {
                    Some(&i) => col[i] = c.clone(),
                    None => {
                        inside = false;
                        break;
                    }
                }
            }
            cols.push(if inside { Some(col) } else { None });
        }
        tables.insert(raw, cols);
    }
    let grades: Vec<u64> = keyed.iter().map(|(_, d)| *d).collect();
    VirasoroTables::new(p, dim, l0, tables, p as i64 * (depth as i64 + 1))?
        .with_row_grades(grades)
}

// ---------------------------------------------------------------------
// base-module certification
// ---------------------------------------------------------------------

/// Certificate that a base module satisfies its contracts on a finite
/// sample: the bracket compatibility on generator pairs, the exact
/// annihilation above the thresholds, and the injectivity of each
/// boundary operator on the sampled keys.
#[derive(Debug)]
pub struct BaseCertificate {
    pub bracket_pairs: usize,
    pub annihilation_checks: usize,
    pub boundary: Vec<(i64, bool)>,
    pub holds: bool,
}

fn apply_gen_to_map(
    base: &dyn BaseModule,
    p: u32,
    level: &BigRational,
    g: &Gen,
    v: &BTreeMap<BaseKey, Cyclo>,
) -> Result<BTreeMap<BaseKey, Cyclo>> {
    let mut out: BTreeMap<BaseKey, Cyclo> = BTreeMap::new();
    for (key, c) in v {
        if c.is_zero() {
            continue;
        }
        let image = match g {
            Gen::C(i) => {
                let s = gap_central_value(p, *i, level);
                if s.is_zero() {
                    Vec::new()
                } else {
                    vec![(key.clone(), s)]
                }
            }
            _ => base.act_on_key(g, key)?,
        };
        for (k2, c2) in image {
            let slot = out.entry(k2).or_insert_with(|| Cyclo::zero(p));
            *slot = slot.add(&c2.mul(c));
        }
    }
    out.retain(|_, c| !c.is_zero());
    Ok(out)
}

/// Runs the three certification checks for a base module over the gap
/// algebra.
pub fn certify_base(
    p: u32,
    base: &dyn BaseModule,
    level: &BigRational,
    gens: &[Gen],
    ann: &AnnihilationSpec,
    ann_bound: i64,
    keys: &[BaseKey],
) -> Result<BaseCertificate> {
    let alg = AlgebraId::gap(p)?;
    let mut bracket_pairs = 0usize;
    for a in gens {
        for b in gens {
            let br = bracket_gens(alg, *a, *b)?;
            for key in keys {
                let mut unit: BTreeMap<BaseKey, Cyclo> = BTreeMap::new();
                unit.insert(key.clone(), Cyclo::one(p));
                let ab = apply_gen_to_map(base, p, level, a, &apply_gen_to_map(base, p, level, b, &unit)?)?;
                let ba = apply_gen_to_map(base, p, level, b, &apply_gen_to_map(base, p, level, a, &unit)?)?;
                let mut lhs = ab;
                for (k, c) in ba {
                    let slot = lhs.entry(k).or_insert_with(|| Cyclo::zero(p));
                    *slot = slot.sub(&c);
                }
                lhs.retain(|_, c| !c.is_zero());
                let mut rhs: BTreeMap<BaseKey, Cyclo> = BTreeMap::new();
                for (g, c) in br.terms() {
                    let image = apply_gen_to_map(base, p, level, g, &unit)?;
                    for (k, c2) in image {
                        let slot = rhs.entry(k).or_insert_with(|| Cyclo::zero(p));
                        *slot = slot.add(&c2.mul(c));
                    }
                }
                rhs.retain(|_, c| !c.is_zero());
                if lhs != rhs {
                    return Ok(BaseCertificate {
                        bracket_pairs,
                        annihilation_checks: 0,
                        boundary: Vec::new(),
                        holds: false,
                    });
                }
            }
            bracket_pairs += 1;
        }
    }
    // exact annihilation above the thresholds
    let mut annihilation_checks = 0usize;
    for idx in raising_set(p, &ann.thresholds(), ann_bound) {
        for key in keys {
            let image = base.act_on_key(&Gen::L(idx), key)?;
            if image.iter().any(|(_, c)| !c.is_zero()) {
                return Ok(BaseCertificate {
                    bracket_pairs,
                    annihilation_checks,
                    boundary: Vec::new(),
                    holds: false,
                });
            }
            annihilation_checks += 1;
        }
    }
    // boundary injectivity on the sampled keys
    let thresholds = ann.thresholds();
    let mut boundary = Vec::new();
    let mut holds = true;
    for (j, &rj) in thresholds.iter().enumerate() {
        let op = j as i64 + p as i64 * rj;
        let mut out_index: BTreeMap<BaseKey, usize> = BTreeMap::new();
        let mut cols: Vec<BTreeMap<usize, Cyclo>> = Vec::new();
        for key in keys {
            let image = base.act_on_key(&Gen::L(op), key)?;
            let mut col = BTreeMap::new();
            for (k2, c2) in image {
                let next = out_index.len();
                let row = *out_index.entry(k2).or_insert(next);
                let slot: &mut Cyclo = col.entry(row).or_insert_with(|| Cyclo::zero(p));
                *slot = slot.add(&c2);
            }
            cols.push(col);
        }
        let nrows = out_index.len();
        let mut rows = vec![vec![Cyclo::zero(p); keys.len()]; nrows];
        for (cix, col) in cols.iter().enumerate() {
            for (&rix, c) in col {
                rows[rix][cix] = c.clone();
            }
        }
        let injective = linalg::kernel_basis(p, &rows, keys.len()).is_empty();
        holds &= injective;
        boundary.push((op, injective));
    }
    Ok(BaseCertificate { bracket_pairs, annihilation_checks, boundary, holds })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modules::{reduce_to_base, restrictedness_witness};

    fn ratio(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    fn cy(p: u32, n: i64) -> Cyclo {
        Cyclo::from_int(p, n)
    }

    /// p=3, d=(0,-1): both residues have d <= 0, boundary ops L_1, L_5.
    fn sample_r() -> RSpec {
        let theta: BTreeMap<u32, Cyclo> =
            [(1, cy(3, 2)), (2, cy(3, 5))].into_iter().collect();
        RSpec::new(3, vec![0, -1], theta, BTreeMap::new(), ratio(7, 2)).unwrap()
    }

    /// The p=2 polynomial module with cutoff 2 and variables L1, L3, L0.
    fn sample_q() -> QSpec {
        let s: Vec<BTreeSet<i64>> = vec![
            [1i64, 2].into_iter().collect(),
            [2i64].into_iter().collect(),
        ];
        let theta: BTreeMap<(u32, i64), Cyclo> = [
            ((0, 1), cy(2, 3)),
            ((0, 2), cy(2, 4)),
            ((1, 2), cy(2, 7)),
        ]
        .into_iter()
        .collect();
        QSpec::new(2, 2, vec![0], s, theta, ratio(1, 2)).unwrap()
    }

    /// A p=3 polynomial module with cutoff 2.
    fn sample_q3() -> QSpec {
        let s: Vec<BTreeSet<i64>> = vec![
            [1i64, 2].into_iter().collect(),
            [2i64].into_iter().collect(),
            [2i64].into_iter().collect(),
        ];
        let theta: BTreeMap<(u32, i64), Cyclo> = [
            ((0, 1), cy(3, 1)),
            ((0, 2), cy(3, 4)),
            ((1, 2), cy(3, 2)),
            ((2, 2), cy(3, 5)),
        ]
        .into_iter()
        .collect();
        QSpec::new(3, 2, vec![0, 0], s, theta, ratio(0, 1)).unwrap()
    }

    #[test]
    fn r_closed_form_oracles() {
        let spec = sample_r();
        // L1 . L0 -> theta_1 (L0 - 1)
        let got = r_act(&spec, &Gen::L(1), 1).unwrap();
        let t1 = spec.boundary_value(1).clone();
        assert_eq!(
            got,
            vec![(0, t1.scale(&ratio(-1, 1))), (1, t1.clone())]
        );
        // L5 . L0^2 -> theta_2 (L0^2 - 10 L0 + 25)
        let got = r_act(&spec, &Gen::L(5), 2).unwrap();
        let t2 = spec.boundary_value(2).clone();
        assert_eq!(
            got,
            vec![
                (0, t2.scale(&ratio(25, 1))),
                (1, t2.scale(&ratio(-10, 1))),
                (2, t2.clone())
            ]
        );
        // L3 . L0^n -> 0
        for n in 0..4 {
            assert!(r_act(&spec, &Gen::L(3), n).unwrap().is_empty());
        }
        // L0 multiplies
        let got = r_act(&spec, &Gen::L(0), 2).unwrap();
        assert_eq!(got, vec![(3, Cyclo::one(3))]);
        // below the positive part -> rejected
        assert!(r_act(&spec, &Gen::L(-1), 1).is_err());
    }

    #[test]
    fn q_variables_and_convention_order() {
        let spec = sample_q();
        let vars = spec.variables();
        let indices: Vec<i64> = vars.iter().map(|v| v.index(&spec)).collect();
        assert_eq!(indices, vec![3, 1, 0], "L3, then L1, then L0");

        let spec3 = sample_q3();
        let indices3: Vec<i64> = spec3.variables().iter().map(|v| v.index(&spec3)).collect();
        assert_eq!(indices3, vec![5, 4, 2, 1, 0]);
    }

    #[test]
    fn q_act_oracles() {
        let spec = sample_q();
        let t01 = spec.theta(0, 1).unwrap().clone();
        let t12 = spec.theta(1, 2).unwrap().clone();
        // L2 . L0 = theta_{0,1} (L0 - 2)
        let got = q_act(&spec, &Gen::L(2), &BaseKey::Word(vec![(0, 1)])).unwrap();
        let want: Vec<(BaseKey, Cyclo)> = vec![
            (BaseKey::unit(), t01.scale(&ratio(-2, 1))),
            (BaseKey::Word(vec![(0, 1)]), t01.clone()),
        ];
        assert_eq!(got, want);
        // (L5 - theta_{1,2}) . L0 = -5 theta_{1,2} 1
        let acted = q_act(&spec, &Gen::L(5), &BaseKey::Word(vec![(0, 1)])).unwrap();
        let mut combined: BTreeMap<BaseKey, Cyclo> = acted.into_iter().collect();
        let slot = combined
            .entry(BaseKey::Word(vec![(0, 1)]))
            .or_insert_with(|| Cyclo::zero(2));
        *slot = slot.sub(&t12);
        combined.retain(|_, c| !c.is_zero());
        assert_eq!(combined.len(), 1);
        assert_eq!(combined[&BaseKey::unit()], t12.scale(&ratio(-5, 1)));
        // L7 kills every monomial in the variables; checked on L3 L1 L0
        let key = BaseKey::Word(vec![(3, 1), (1, 1), (0, 1)]);
        assert!(q_act(&spec, &Gen::L(7), &key).unwrap().is_empty());
        // out-of-order keys are rejected
        let bad = BaseKey::Word(vec![(0, 1), (1, 1)]);
        assert!(q_act(&spec, &Gen::L(2), &bad).is_err());
    }

    #[test]
    fn qspec_validation_examples() {
        assert!(validate_qspec(&sample_q()).valid);
        assert!(validate_qspec(&sample_q3()).valid);
        // k missing from S_1
        let s: Vec<BTreeSet<i64>> = vec![
            [1i64, 2].into_iter().collect(),
            [1i64].into_iter().collect(),
        ];
        let theta: BTreeMap<(u32, i64), Cyclo> = [
            ((0, 1), cy(2, 3)),
            ((0, 2), cy(2, 4)),
            ((1, 1), cy(2, 7)),
        ]
        .into_iter()
        .collect();
        let bad = QSpec::new(2, 2, vec![0], s, theta, ratio(0, 1)).unwrap();
        let check = validate_qspec(&bad);
        assert!(!check.valid);
        assert!(check.violation.unwrap().contains("condition 1"));
        // k = 1 with an empty S_2
        let s: Vec<BTreeSet<i64>> = vec![
            [1i64].into_iter().collect(),
            [1i64].into_iter().collect(),
            BTreeSet::new(),
        ];
        let theta: BTreeMap<(u32, i64), Cyclo> =
            [((0, 1), cy(3, 1)), ((1, 1), cy(3, 1))].into_iter().collect();
        let bad = QSpec::new(3, 1, vec![0, 0], s, theta, ratio(0, 1)).unwrap();
        let check = validate_qspec(&bad);
        assert!(!check.valid);
        assert!(check.violation.unwrap().contains("condition 1"));
    }

    #[test]
    fn whittaker_validation_examples() {
        // p=2: values at L1, L2, L4 -> valid
        let phi = WhittakerType::new(
            2,
            [(1, cy(2, 1)), (2, cy(2, 5)), (4, cy(2, 2))].into_iter().collect(),
            ratio(3, 1),
        )
        .unwrap();
        let report = validate_whittaker(&phi).unwrap();
        assert!(report.valid, "{report:?}");
        // p=2: value at L3 -> invalid with witness [L1, L2]
        let phi = WhittakerType::new(2, [(3, cy(2, 1))].into_iter().collect(), ratio(0, 1))
            .unwrap();
        let report = validate_whittaker(&phi).unwrap();
        assert!(!report.valid);
        assert_eq!(report.witness, Some((1, 2)));
        // p=3: value at L7 -> invalid
        let phi = WhittakerType::new(3, [(7, cy(3, 1))].into_iter().collect(), ratio(0, 1))
            .unwrap();
        let report = validate_whittaker(&phi).unwrap();
        assert!(!report.valid);
    }

    #[test]
    fn whittaker_vector_check_witnesses() {
        let phi = WhittakerType::new(
            2,
            [(1, cy(2, 1)), (2, cy(2, 5)), (4, cy(2, 2))].into_iter().collect(),
            ratio(3, 1),
        )
        .unwrap();
        let module = whittaker_universal(&phi).unwrap();
        // the cyclic vector is a Whittaker vector
        let check = whittaker_vector_check(&module, &phi, &module.vacuum(), 6).unwrap();
        assert!(check.holds);
        // L_{-1} 1 fails at the window index 2 when phi(L_1) is nonzero
        let v = module.mono_vector(&[Gen::L(-1)], BaseKey::unit()).unwrap();
        let check = whittaker_vector_check(&module, &phi, &v, 6).unwrap();
        assert!(!check.holds);
        assert_eq!(check.witness, Some(2));
        // the zero vector is rejected
        let z = ModuleVector::zero(module.alg());
        assert!(whittaker_vector_check(&module, &phi, &z, 6).is_err());
    }

    #[test]
    fn whittaker_iso_probe_at_window_zero() {
        // phi(L_p) = 0, so the cyclic vector of the Q side is itself a
        // Whittaker vector and the search finds it already at window 0
        let phi = WhittakerType::new(
            2,
            [(1, cy(2, 1)), (4, cy(2, 3))].into_iter().collect(),
            ratio(5, 1),
        )
        .unwrap();
        let report = check_whittaker_iso(&phi, 0).unwrap();
        assert!(report.q_valid);
        assert_eq!(report.snapshot_dim, 1);
        assert_eq!(report.found.len(), 1, "{report:?}");
        // with phi(L_p) nonzero the cyclic vector alone is not of type
        // phi, so the window-0 search comes back empty
        let phi = WhittakerType::new(
            2,
            [(1, cy(2, 1)), (2, cy(2, 5)), (4, cy(2, 3))].into_iter().collect(),
            ratio(5, 1),
        )
        .unwrap();
        let report = check_whittaker_iso(&phi, 0).unwrap();
        assert!(report.q_valid);
        assert!(report.found.is_empty());
    }

    #[test]
    fn pullback_of_the_trivial_module() {
        let module = pullback_module(VirasoroTables::trivial(3)).unwrap();
        let v = module.key_vector(BaseKey::Idx(0));
        for m in -6..=6 {
            assert!(module.act_gen(Gen::L(m), &v).unwrap().is_zero(), "L[{m}]");
        }
        assert!(module.act_gen(Gen::C(0), &v).unwrap().is_zero());
    }

    #[test]
    fn pullback_from_the_highest_weight_tables() {
        let tables = highest_weight_tables(2, ratio(7, 2), ratio(5, 3), 3).unwrap();
        let checked = tables.validate().unwrap();
        assert!(checked > 0);
        let module = pullback_module(tables).unwrap();
        // non-multiples act as zero
        let v = module.key_vector(BaseKey::Idx(1));
        assert!(module.act_gen(Gen::L(1), &v).unwrap().is_zero());
        assert!(module.act_gen(Gen::L(-3), &v).unwrap().is_zero());
        // a restrictedness witness exists within the window
        let n = restrictedness_witness(&module, &v, 12).unwrap();
        assert!(n <= 7, "witness {n}");
    }

    #[test]
    fn broken_tables_are_rejected() {
        let p = 2u32;
        let mut tables: BTreeMap<i64, Vec<Option<Vec<Cyclo>>>> = BTreeMap::new();
        // dim 2: rows e0, e1; L_{-2} e0 = e1, L_2 e1 = wrong multiple of e0
        tables.insert(
            -2,
            vec![Some(vec![Cyclo::zero(p), Cyclo::one(p)]), None],
        );
        tables.insert(
            2,
            vec![Some(vec![Cyclo::zero(p), Cyclo::zero(p)]), Some(vec![cy(p, 1), Cyclo::zero(p)])],
        );
        tables.insert(
            0,
            vec![
                Some(vec![Cyclo::zero(p), Cyclo::zero(p)]),
                Some(vec![Cyclo::zero(p), cy(p, -2)]),
            ],
        );
        let tables = VirasoroTables::new(p, 2, ratio(0, 1), tables, 4).unwrap();
        assert!(tables.validate().is_err());
    }

    #[test]
    fn induced_r_reduction_reaches_the_cyclic_vector() {
        let spec = sample_r();
        let module = induced_r(&spec).unwrap();
        // a mixed vector with letters from both residue classes
        let v = module
            .mono_vector(&[Gen::L(-1), Gen::L(-3)], BaseKey::unit())
            .unwrap()
            .add(&module.mono_vector(&[Gen::L(2)], r_key(1)).unwrap())
            .unwrap();
        let (base_vec, trace) = reduce_to_base(&module, &v).unwrap();
        assert!(!base_vec.is_zero());
        assert!(!trace.is_empty());
        let reduced = internal_reduce_r(&spec, &module, &base_vec).unwrap();
        assert!(!reduced.is_zero());
        let only: Vec<_> = reduced.terms().collect();
        assert_eq!(only.len(), 1);
        assert!(only[0].0 .0.is_one());
        assert!(only[0].0 .1.is_unit());
    }

    #[test]
    fn induced_q_reduction_reaches_the_cyclic_vector() {
        let spec = sample_q();
        let module = induced_q(&spec).unwrap();
        let v = module
            .mono_vector(&[Gen::L(-2)], BaseKey::Word(vec![(1, 1), (0, 1)]))
            .unwrap()
            .add(&module.mono_vector(&[Gen::L(-1)], r_key(1)).unwrap())
            .unwrap();
        let (base_vec, _trace) = reduce_to_base(&module, &v).unwrap();
        assert!(!base_vec.is_zero());
        let reduced = internal_reduce_q(&spec, &module, &base_vec).unwrap();
        assert!(!reduced.is_zero());
        let only: Vec<_> = reduced.terms().collect();
        assert_eq!(only.len(), 1);
        assert!(only[0].0 .1.is_unit());
    }

    #[test]
    fn reduction_examples_use_the_predicted_operators() {
        // the two worked examples: j-part reduction applies L4, i-part
        // reduction applies L6
        let spec = sample_r();
        let module = induced_r(&spec).unwrap();
        let v = module.mono_vector(&[Gen::L(-3)], BaseKey::unit()).unwrap();
        let step = crate::modules::reduction_step(&module, &v).unwrap();
        assert_eq!(step.op, Gen::L(4));
        assert!(step.exact);
        let v = module.mono_vector(&[Gen::L(-1)], BaseKey::unit()).unwrap();
        let step = crate::modules::reduction_step(&module, &v).unwrap();
        assert_eq!(step.op, Gen::L(6));
        assert!(!step.next.is_zero());
        assert!(step.exact);
    }

    #[test]
    fn r_base_certification() {
        let spec = sample_r();
        let base = RBase::new(spec.clone());
        let pos = spec.positive_spec();
        let gens: Vec<Gen> = (-12..=12)
            .filter(|&m| pos.contains_index(m))
            .map(Gen::L)
            .collect();
        let keys: Vec<BaseKey> = (0..=4).map(r_key).collect();
        let ann = AnnihilationSpec { k: 0, d: spec.d().to_vec() };
        let cert = certify_base(3, &base, spec.level(), &gens, &ann, 12, &keys).unwrap();
        assert!(cert.holds, "{cert:?}");
        assert!(cert.bracket_pairs > 0);
        assert!(cert.boundary.iter().all(|(_, inj)| *inj));
    }

    #[test]
    fn q_base_certification() {
        let spec = sample_q();
        let base = QBase::new(spec.clone()).unwrap();
        let pos = spec.positive_spec();
        let gens: Vec<Gen> = (-8..=8)
            .filter(|&m| pos.contains_index(m))
            .map(Gen::L)
            .collect();
        // keys of monomial degree <= 2 in the three variables
        let vars = spec.variables();
        let mut keys = vec![BaseKey::unit()];
        for (a, va) in vars.iter().enumerate() {
            keys.push(BaseKey::Word(vec![(va.index(&spec), 1)]));
            for vb in vars.iter().skip(a) {
                let ia = va.index(&spec);
                let ib = vb.index(&spec);
                if ia == ib {
                    keys.push(BaseKey::Word(vec![(ia, 2)]));
                } else {
                    keys.push(BaseKey::Word(vec![(ia, 1), (ib, 1)]));
                }
            }
        }
        let ann = AnnihilationSpec { k: spec.k(), d: spec.d().to_vec() };
        let cert = certify_base(2, &base, spec.level(), &gens, &ann, 8, &keys).unwrap();
        assert!(cert.holds, "{cert:?}");
        assert!(cert.boundary.iter().all(|(_, inj)| *inj));
    }

    #[test]
    fn whittaker_irreducibility_window_witness() {
        // with phi(L_1) = 0 a second Whittaker vector of type phi shows
        // up in the truncation; with phi(L_1) nonzero the solution
        // space in the same truncation is the cyclic line alone
        let reducible = WhittakerType::new(
            2,
            [(2, cy(2, 5)), (4, cy(2, 2))].into_iter().collect(),
            ratio(3, 1),
        )
        .unwrap();
        let module = whittaker_universal(&reducible).unwrap();
        let basis = whittaker_snapshot_basis(&module, 2, 3, 1).unwrap();
        let snap = Snapshot::new(&module, basis).unwrap();
        let space = whittaker_vector_space(&snap, &reducible, 6).unwrap();
        assert!(space.len() >= 2, "found {}", space.len());

        let irreducible = WhittakerType::new(
            2,
            [(1, cy(2, 1)), (2, cy(2, 5)), (4, cy(2, 2))].into_iter().collect(),
            ratio(3, 1),
        )
        .unwrap();
        let module = whittaker_universal(&irreducible).unwrap();
        let basis = whittaker_snapshot_basis(&module, 2, 3, 1).unwrap();
        let snap = Snapshot::new(&module, basis).unwrap();
        let space = whittaker_vector_space(&snap, &irreducible, 6).unwrap();
        assert_eq!(space.len(), 1, "only the cyclic line");
    }

    #[test]
    fn whittaker_restrictedness_exceeds_the_naive_bound_by_one() {
        // the cyclic vector carries a nonzero action at index 2p, so
        // the least annihilation bound is 2p + 1
        let phi = WhittakerType::new(
            2,
            [(1, cy(2, 1)), (2, cy(2, 5)), (4, cy(2, 2))].into_iter().collect(),
            ratio(3, 1),
        )
        .unwrap();
        let module = whittaker_universal(&phi).unwrap();
        let n = restrictedness_witness(&module, &module.vacuum(), 10).unwrap();
        assert_eq!(n, 5);
    }
}
