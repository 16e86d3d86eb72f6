//! The rescaled basis of the gap family.
//!
//! The gap generators repackage into a Virasoro-like family:
//!
//! - Lh(m) = -(1/p) L_{pm},
//! - Ih^i(m) = -(1/p) L_{pm+i} for 1 <= i <= p-1,
//! - Cb_0 = C_0 / p^2 and Cb_i = C_i / p,
//!
//! in which the bracket takes the uniform shape
//!
//! - [Lh(m), Lh(n)] = (m-n) Lh(m+n) + (1/12)(m^3-m) delta_{m+n,0} Cb_0,
//! - [Lh(m), Ih^i(n)] = -(n + i/p) Ih^i(m+n),
//! - [Ih^i(m), Ih^j(n)] = (m + i/p) delta_{i+j,p} delta_{m+n+1,0} Cb_i,
//!
//! with Cb_i = Cb_{p-i} folded like the unrescaled centrals.  The change of
//! basis is an exact invertible linear map; [`to_rescaled`] and
//! [`from_rescaled`] round-trip, and the bracket here matches the pulled
//! back bracket of [`crate::algebra`].

use std::collections::BTreeMap;
use std::fmt;

use num::{BigInt, BigRational, Zero};

use crate::algebra::{AlgebraId, Family, Gen, LieElement};
use crate::error::{Error, Result};
use crate::scalar::Cyclo;

/// One generator of the rescaled basis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum RescaledGen {
    /// Lh(m), the Virasoro-like modes.
    LHat(i64),
    /// Ih^i(m) with superscript 1..=p-1.
    IHat(u32, i64),
    /// Cb_i with canonical index 0..=floor(p/2).
    CBar(u32),
}

impl RescaledGen {
    pub fn canonical(self, alg: AlgebraId) -> Result<RescaledGen> {
        let p = alg.p();
        if alg.family() != Family::Gap {
            return Err(Error::mismatch(
                "rescaled generators belong to the gap family".to_string(),
            ));
        }
        match self {
            RescaledGen::LHat(_) => Ok(self),
            RescaledGen::IHat(i, m) => {
                if i == 0 || i > p - 1 {
                    Err(Error::invalid(format!(
                        "superscript of Ih[{i},{m}] must be in 1..={} for p={p}",
                        p - 1
                    )))
                } else {
                    Ok(self)
                }
            }
            RescaledGen::CBar(i) => {
                if i > p - 1 {
                    Err(Error::invalid(format!(
                        "central index Cb[{i}] out of range for p={p} (max {})",
                        p - 1
                    )))
                } else {
                    Ok(RescaledGen::CBar(i.min(p - i)))
                }
            }
        }
    }

    pub fn is_central(&self) -> bool {
        matches!(self, RescaledGen::CBar(_))
    }

    /// Grade in (1/p)Z: Lh(m) -> m, Ih^i(m) -> m + i/p, centrals 0.
    pub fn grade(&self, alg: AlgebraId) -> BigRational {
        match self {
            RescaledGen::LHat(m) => BigRational::from_integer(BigInt::from(*m)),
            RescaledGen::IHat(i, m) => BigRational::new(
                BigInt::from(*m * alg.p() as i64 + *i as i64),
                BigInt::from(alg.p()),
            ),
            RescaledGen::CBar(_) => BigRational::zero(),
        }
    }

    /// The gap-basis generator this one is proportional to.
    pub fn unscaled(&self, alg: AlgebraId) -> Gen {
        let p = alg.p() as i64;
        match self {
            RescaledGen::LHat(m) => Gen::L(p * m),
            RescaledGen::IHat(i, m) => Gen::L(p * m + *i as i64),
            RescaledGen::CBar(i) => Gen::C(*i),
        }
    }
}

impl fmt::Display for RescaledGen {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RescaledGen::LHat(m) => write!(f, "Lh[{m}]"),
            RescaledGen::IHat(i, m) => write!(f, "Ih[{i},{m}]"),
            RescaledGen::CBar(i) => write!(f, "Cb[{i}]"),
        }
    }
}

/// A linear combination of rescaled generators.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RescaledElement {
    alg: AlgebraId,
    terms: BTreeMap<RescaledGen, Cyclo>,
}

impl RescaledElement {
    pub fn zero(alg: AlgebraId) -> Self {
        RescaledElement { alg, terms: BTreeMap::new() }
    }

    pub fn generator(alg: AlgebraId, gen: RescaledGen) -> Result<Self> {
        RescaledElement::term(alg, gen, Cyclo::one(alg.p()))
    }

    pub fn term(alg: AlgebraId, gen: RescaledGen, coeff: Cyclo) -> Result<Self> {
        let mut out = RescaledElement::zero(alg);
        out.add_assign_term(gen, coeff)?;
        Ok(out)
    }

    pub fn alg(&self) -> AlgebraId {
        self.alg
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&RescaledGen, &Cyclo)> {
        self.terms.iter()
    }

    pub fn coeff(&self, gen: &RescaledGen) -> Cyclo {
        self.terms.get(gen).cloned().unwrap_or_else(|| Cyclo::zero(self.alg.p()))
    }

    pub fn add_assign_term(&mut self, gen: RescaledGen, coeff: Cyclo) -> Result<()> {
        let gen = gen.canonical(self.alg)?;
        if coeff.is_zero() {
            return Ok(());
        }
        let entry = self
            .terms
            .entry(gen)
            .or_insert_with(|| Cyclo::zero(self.alg.p()));
        *entry = entry.add(&coeff);
        if entry.is_zero() {
            self.terms.remove(&gen);
        }
        Ok(())
    }

    pub fn add(&self, other: &RescaledElement) -> Result<RescaledElement> {
        if self.alg != other.alg {
            return Err(Error::mismatch(
                "rescaled elements belong to different algebras".to_string(),
            ));
        }
        let mut out = self.clone();
        for (g, c) in other.terms() {
            out.add_assign_term(*g, c.clone())?;
        }
        Ok(out)
    }

    pub fn scale(&self, factor: &Cyclo) -> RescaledElement {
        let mut out = RescaledElement::zero(self.alg);
        if factor.is_zero() {
            return out;
        }
        for (g, c) in self.terms() {
            out.terms.insert(*g, c.mul(factor));
        }
        out
    }

    pub fn neg(&self) -> RescaledElement {
        self.scale(&Cyclo::from_int(self.alg.p(), -1))
    }

    /// Bracket in the rescaled structure constants.
    pub fn bracket(&self, other: &RescaledElement) -> Result<RescaledElement> {
        if self.alg != other.alg {
            return Err(Error::mismatch(
                "rescaled elements belong to different algebras".to_string(),
            ));
        }
        let mut out = RescaledElement::zero(self.alg);
        for (a, ca) in self.terms() {
            for (b, cb) in other.terms() {
                let pair = bracket_rescaled_gens(self.alg, *a, *b)?;
                out = out.add(&pair.scale(&ca.mul(cb)))?;
            }
        }
        Ok(out)
    }

    /// Common grade of all terms, or `None` when mixed; zero reports 0.
    pub fn grade(&self) -> Option<BigRational> {
        let mut grades = self.terms.keys().map(|g| g.grade(self.alg));
        let first = match grades.next() {
            None => return Some(BigRational::zero()),
            Some(g) => g,
        };
        if grades.all(|g| g == first) {
            Some(first)
        } else {
            None
        }
    }
}

impl fmt::Display for RescaledElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}",
            crate::algebra::render_terms(self.terms.iter().map(|(g, c)| (g.to_string(), c)))
        )
    }
}

/// Structure constants of the rescaled basis.
pub fn bracket_rescaled_gens(
    alg: AlgebraId,
    a: RescaledGen,
    b: RescaledGen,
) -> Result<RescaledElement> {
    let a = a.canonical(alg)?;
    let b = b.canonical(alg)?;
    let mut out = RescaledElement::zero(alg);
    if a.is_central() || b.is_central() {
        return Ok(out);
    }
    let p = alg.p();
    let frac = |m: i64, i: u32| {
        // m + i/p as an exact rational coefficient
        Cyclo::from_ratio(
            p,
            BigRational::new(BigInt::from(m * p as i64 + i as i64), BigInt::from(p)),
        )
    };
    match (a, b) {
        (RescaledGen::LHat(m), RescaledGen::LHat(n)) => {
            out.add_assign_term(RescaledGen::LHat(m + n), Cyclo::from_int(p, m - n))?;
            if m + n == 0 {
                let q = m as i128;
                let coeff = BigRational::new(BigInt::from(q * q * q - q), BigInt::from(12));
                out.add_assign_term(RescaledGen::CBar(0), Cyclo::from_ratio(p, coeff))?;
            }
        }
        (RescaledGen::LHat(m), RescaledGen::IHat(i, n)) => {
            out.add_assign_term(RescaledGen::IHat(i, m + n), frac(n, i).neg())?;
        }
        (RescaledGen::IHat(i, n), RescaledGen::LHat(m)) => {
            out.add_assign_term(RescaledGen::IHat(i, m + n), frac(n, i))?;
        }
        (RescaledGen::IHat(i, m), RescaledGen::IHat(j, n)) => {
            if i + j == p && m + n + 1 == 0 {
                out.add_assign_term(RescaledGen::CBar(i), frac(m, i))?;
            }
        }
        _ => unreachable!("centrals handled above"),
    }
    Ok(out)
}

/// Expresses a gap-family element in the rescaled basis.
pub fn to_rescaled(x: &LieElement) -> Result<RescaledElement> {
    let alg = x.alg();
    if alg.family() != Family::Gap {
        return Err(Error::mismatch(
            "only gap-family elements have a rescaled form".to_string(),
        ));
    }
    let p = alg.p();
    let mut out = RescaledElement::zero(alg);
    for (g, c) in x.terms() {
        let (gen, factor) = match *g {
            Gen::L(k) => {
                let i = k.rem_euclid(p as i64) as u32;
                let m = (k - i as i64) / p as i64;
                let gen = if i == 0 {
                    RescaledGen::LHat(m)
                } else {
                    RescaledGen::IHat(i, m)
                };
                // L_{pm+i} = -p * (rescaled generator)
                (gen, Cyclo::from_int(p, -(p as i64)))
            }
            Gen::C(0) => (RescaledGen::CBar(0), Cyclo::from_int(p, (p * p) as i64)),
            Gen::C(i) => (RescaledGen::CBar(i), Cyclo::from_int(p, p as i64)),
            _ => unreachable!("gap elements contain only L and C generators"),
        };
        out.add_assign_term(gen, c.mul(&factor))?;
    }
    Ok(out)
}

/// Expands a rescaled element back into the gap basis.
pub fn from_rescaled(x: &RescaledElement) -> Result<LieElement> {
    let alg = x.alg();
    let p = alg.p();
    let mut out = LieElement::zero(alg);
    for (g, c) in x.terms() {
        let factor = match g {
            RescaledGen::LHat(_) | RescaledGen::IHat(_, _) => Cyclo::rational(p, -1, p as i64),
            RescaledGen::CBar(0) => Cyclo::rational(p, 1, (p * p) as i64),
            RescaledGen::CBar(_) => Cyclo::rational(p, 1, p as i64),
        };
        out.add_assign_term(g.unscaled(alg), c.mul(&factor))?;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gap(p: u32) -> AlgebraId {
        AlgebraId::gap(p).unwrap()
    }

    fn rgen(alg: AlgebraId, g: RescaledGen) -> RescaledElement {
        RescaledElement::generator(alg, g).unwrap()
    }

    #[test]
    fn negative_index_lands_in_the_fractional_family() {
        let alg = gap(3);
        let x = LieElement::generator(alg, Gen::L(-1)).unwrap();
        let got = to_rescaled(&x).unwrap();
        let want = RescaledElement::term(alg, RescaledGen::IHat(2, -1), Cyclo::from_int(3, -3))
            .unwrap();
        assert_eq!(got, want);
    }

    #[test]
    fn rescaled_bracket_matches_hand_value() {
        let alg = gap(3);
        let got = rgen(alg, RescaledGen::LHat(1))
            .bracket(&rgen(alg, RescaledGen::IHat(2, -1)))
            .unwrap();
        let want =
            RescaledElement::term(alg, RescaledGen::IHat(2, 0), Cyclo::rational(3, 1, 3)).unwrap();
        assert_eq!(got, want);
    }

    #[test]
    fn central_scaling_is_p_squared_for_index_zero() {
        let alg = gap(2);
        let c0 = LieElement::generator(alg, Gen::C(0)).unwrap();
        let got = to_rescaled(&c0).unwrap();
        let want =
            RescaledElement::term(alg, RescaledGen::CBar(0), Cyclo::from_int(2, 4)).unwrap();
        assert_eq!(got, want);
        let back = from_rescaled(&rgen(alg, RescaledGen::CBar(0))).unwrap();
        let quarter = LieElement::term(alg, Gen::C(0), Cyclo::rational(2, 1, 4)).unwrap();
        assert_eq!(back, quarter);
    }

    #[test]
    fn round_trip_is_identity() {
        for p in 2..=5u32 {
            let alg = gap(p);
            for k in -7..=7i64 {
                let x = LieElement::generator(alg, Gen::L(k)).unwrap();
                assert_eq!(from_rescaled(&to_rescaled(&x).unwrap()).unwrap(), x);
            }
            for i in 0..=(p / 2) {
                let x = LieElement::generator(alg, Gen::C(i)).unwrap();
                assert_eq!(from_rescaled(&to_rescaled(&x).unwrap()).unwrap(), x);
            }
        }
    }

    #[test]
    fn rescaled_bracket_agrees_with_pullback() {
        // spot check here; the exhaustive window lives in the integration suite
        let alg = gap(3);
        let pairs = [
            (RescaledGen::LHat(2), RescaledGen::LHat(-2)),
            (RescaledGen::LHat(1), RescaledGen::IHat(2, -1)),
            (RescaledGen::IHat(1, 0), RescaledGen::IHat(2, -1)),
            (RescaledGen::IHat(1, 2), RescaledGen::IHat(1, -3)),
        ];
        for (a, b) in pairs {
            let lhs = from_rescaled(
                &rgen(alg, a).bracket(&rgen(alg, b)).unwrap(),
            )
            .unwrap();
            let rhs = from_rescaled(&rgen(alg, a))
                .unwrap()
                .bracket(&from_rescaled(&rgen(alg, b)).unwrap())
                .unwrap();
            assert_eq!(lhs, rhs, "[{a}, {b}] disagrees with the pullback");
        }
    }

    #[test]
    fn fractional_central_pairing_needs_offset_minus_one() {
        let alg = gap(3);
        // [Ih^1(0), Ih^2(-1)] = (0 + 1/3) Cb_1
        let got = rgen(alg, RescaledGen::IHat(1, 0))
            .bracket(&rgen(alg, RescaledGen::IHat(2, -1)))
            .unwrap();
        let want =
            RescaledElement::term(alg, RescaledGen::CBar(1), Cyclo::rational(3, 1, 3)).unwrap();
        assert_eq!(got, want);
        // same superscripts but wrong mode sum: zero
        let got = rgen(alg, RescaledGen::IHat(1, 0))
            .bracket(&rgen(alg, RescaledGen::IHat(2, 0)))
            .unwrap();
        assert!(got.is_zero());
    }

    #[test]
    fn grades_add_the_fractional_offset() {
        let alg = gap(3);
        let x = rgen(alg, RescaledGen::IHat(1, -2));
        assert_eq!(
            x.grade(),
            Some(BigRational::new(BigInt::from(-5), BigInt::from(3)))
        );
        let y = LieElement::generator(alg, Gen::L(-5)).unwrap();
        assert_eq!(to_rescaled(&y).unwrap().grade(), y.grade());
    }
}
