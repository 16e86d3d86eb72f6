//! Text grammar and JSON forms shared by the command line and the C
//! interface.
//!
//! Grammar (whitespace permitted between tokens):
//!
//! ```text
//! element  := '0' | ['-'] term (('+'|'-') term)*
//! term     := [scalar '*'] gen
//! gen      := 'L[' int ']' | 'C[' nat ']' | 'T[' int ']'
//!           | 'N[' nat ',' int ']' | 'K[' nat ']'
//! scalar   := rational | 'xi^' nat | '(' sum ')'
//! sum      := ['-'] sterm (('+'|'-') sterm)*
//! sterm    := rational ['*' 'xi^' nat] | 'xi^' nat
//! rational := ['-'] nat ['/' nat]
//! ```
//!
//! Printing an element and parsing it back is the identity on canonical
//! forms.  Parse errors carry the line and column of the offending
//! character.

use std::collections::BTreeMap;

use num::{BigInt, BigRational, One, Zero};
use serde::{Deserialize, Serialize};

use crate::algebra::{AlgebraId, Family, Gen, LieElement};
use crate::error::{Error, Result};
use crate::modules::{BaseKey, ModuleVector};
use crate::pbw::{PbwMonomial, UeaElement};
use crate::scalar::{cyclo_dim, format_ratio, Cyclo};

// ---------------------------------------------------------------------
// cursor
// ---------------------------------------------------------------------

struct Cursor {
    chars: Vec<char>,
    pos: usize,
    line: usize,
    col: usize,
}

impl Cursor {
    fn new(text: &str) -> Self {
        Cursor { chars: text.chars().collect(), pos: 0, line: 1, col: 1 }
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.pos += 1;
        if c == '\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        Some(c)
    }

    fn skip_ws(&mut self) {
        while matches!(self.peek(), Some(c) if c.is_whitespace()) {
            self.bump();
        }
    }

    fn err(&self, msg: impl Into<String>) -> Error {
        Error::Parse { line: self.line, col: self.col, msg: msg.into() }
    }

    fn expect(&mut self, want: char) -> Result<()> {
        match self.peek() {
            Some(c) if c == want => {
                self.bump();
                Ok(())
            }
            Some(c) => Err(self.err(format!("expected '{want}', found '{c}'"))),
            None => Err(self.err(format!("expected '{want}', found end of input"))),
        }
    }

    fn eat(&mut self, want: char) -> bool {
        if self.peek() == Some(want) {
            self.bump();
            true
        } else {
            false
        }
    }

    fn at_end(&mut self) -> bool {
        self.skip_ws();
        self.peek().is_none()
    }

    fn finish(&mut self) -> Result<()> {
        self.skip_ws();
        match self.peek() {
            None => Ok(()),
            Some(c) => Err(self.err(format!("unexpected '{c}' after the element"))),
        }
    }

    fn digits(&mut self) -> Result<BigInt> {
        let start = self.pos;
        while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
            self.bump();
        }
        if self.pos == start {
            return Err(self.err("expected a digit"));
        }
        let text: String = self.chars[start..self.pos].iter().collect();
        text.parse::<BigInt>().map_err(|_| self.err("number out of range"))
    }

    fn nat_u64(&mut self) -> Result<u64> {
        let n = self.digits()?;
        u64::try_from(n).map_err(|_| self.err("number out of range"))
    }

    fn int_i64(&mut self) -> Result<i64> {
        let neg = self.eat('-');
        let n = self.digits()?;
        let n = i64::try_from(n).map_err(|_| self.err("number out of range"))?;
        Ok(if neg { -n } else { n })
    }

    fn rational(&mut self) -> Result<BigRational> {
        let neg = self.eat('-');
        self.skip_ws();
        let numer = self.digits()?;
        let numer = if neg { -numer } else { numer };
        if self.eat('/') {
            let denom = self.digits()?;
            if denom.is_zero() {
                return Err(self.err("zero denominator"));
            }
            Ok(BigRational::new(numer, denom))
        } else {
            Ok(BigRational::from_integer(numer))
        }
    }
}

// ---------------------------------------------------------------------
// grammar productions
// ---------------------------------------------------------------------

fn parse_gen_at(cur: &mut Cursor, alg: AlgebraId) -> Result<Gen> {
    cur.skip_ws();
    let letter = match cur.peek() {
        Some(c @ ('L' | 'C' | 'T' | 'N' | 'K')) => {
            cur.bump();
            c
        }
        Some(c) => return Err(cur.err(format!("expected a generator letter, found '{c}'"))),
        None => return Err(cur.err("expected a generator, found end of input")),
    };
    cur.expect('[')?;
    cur.skip_ws();
    let gen = match letter {
        'L' => Gen::L(cur.int_i64()?),
        'T' => Gen::T(cur.int_i64()?),
        'C' => Gen::C(cur.nat_u64()? as u32),
        'K' => Gen::K(cur.nat_u64()? as u32),
        'N' => {
            let sup = cur.nat_u64()? as u32;
            cur.skip_ws();
            cur.expect(',')?;
            cur.skip_ws();
            let idx = cur.int_i64()?;
            Gen::N(sup, idx)
        }
        _ => unreachable!(),
    };
    cur.skip_ws();
    cur.expect(']')?;
    // canonicalize here so range errors carry the position of the closing
    // bracket rather than surfacing later without one
    gen.canonical(alg).map_err(|e| cur.err(e.to_string()))
}

fn parse_xi_power(cur: &mut Cursor, p: u32) -> Result<Cyclo> {
    // the caller has already seen 'x'
    cur.expect('x')?;
    cur.expect('i')?;
    cur.expect('^')?;
    let k = cur.nat_u64()?;
    Ok(Cyclo::xi_pow(p, k))
}

fn parse_cyclo_sum(cur: &mut Cursor, p: u32) -> Result<Cyclo> {
    // the caller has already consumed '('
    let mut total = Cyclo::zero(p);
    let mut negative = {
        cur.skip_ws();
        cur.eat('-')
    };
    loop {
        cur.skip_ws();
        let term = match cur.peek() {
            Some('x') => parse_xi_power(cur, p)?,
            Some(c) if c.is_ascii_digit() => {
                let q = cur.rational()?;
                cur.skip_ws();
                if cur.eat('*') {
                    cur.skip_ws();
                    parse_xi_power(cur, p)?.scale(&q)
                } else {
                    Cyclo::from_ratio(p, q)
                }
            }
            Some(c) => return Err(cur.err(format!("expected a scalar term, found '{c}'"))),
            None => return Err(cur.err("unterminated scalar sum")),
        };
        total = if negative { total.sub(&term) } else { total.add(&term) };
        cur.skip_ws();
        match cur.peek() {
            Some(')') => {
                cur.bump();
                return Ok(total);
            }
            Some('+') => {
                cur.bump();
                negative = false;
            }
            Some('-') => {
                cur.bump();
                negative = true;
            }
            Some(c) => return Err(cur.err(format!("expected '+', '-' or ')', found '{c}'"))),
            None => return Err(cur.err("unterminated scalar sum")),
        }
    }
}

/// Parses one scalar in the grammar (`rational`, `xi^k`, or a
/// parenthesized sum).
fn parse_scalar_at(cur: &mut Cursor, p: u32) -> Result<Cyclo> {
    cur.skip_ws();
    match cur.peek() {
        Some('(') => {
            cur.bump();
            parse_cyclo_sum(cur, p)
        }
        Some('x') => parse_xi_power(cur, p),
        Some(c) if c.is_ascii_digit() || c == '-' => {
            Ok(Cyclo::from_ratio(p, cur.rational()?))
        }
        Some(c) => Err(cur.err(format!("expected a scalar, found '{c}'"))),
        None => Err(cur.err("expected a scalar, found end of input")),
    }
}

/// term := [scalar '*'] gen, with the sign already folded into `negative`.
fn parse_term_at(cur: &mut Cursor, alg: AlgebraId, negative: bool) -> Result<(Gen, Cyclo)> {
    cur.skip_ws();
    let p = alg.p();
    let coeff = match cur.peek() {
        Some(c) if c.is_ascii_digit() || c == '(' || c == '-' => {
            let s = parse_scalar_at(cur, p)?;
            cur.skip_ws();
            cur.expect('*')?;
            s
        }
        // 'xi^k' needs the lookahead: an 'x' always starts a scalar
        Some('x') => {
            let s = parse_scalar_at(cur, p)?;
            cur.skip_ws();
            cur.expect('*')?;
            s
        }
        _ => Cyclo::one(p),
    };
    let gen = parse_gen_at(cur, alg)?;
    let coeff = if negative { coeff.neg() } else { coeff };
    Ok((gen, coeff))
}

/// Parses an element of the Lie algebra from its text form.
pub fn parse_element(text: &str, alg: AlgebraId) -> Result<LieElement> {
    let mut cur = Cursor::new(text);
    cur.skip_ws();
    // the zero element prints as a bare '0'
    if cur.peek() == Some('0') {
        let save = (cur.pos, cur.line, cur.col);
        cur.bump();
        if cur.at_end() {
            return Ok(LieElement::zero(alg));
        }
        cur.pos = save.0;
        cur.line = save.1;
        cur.col = save.2;
    }
    let mut out = LieElement::zero(alg);
    let mut negative = cur.eat('-');
    loop {
        let (gen, coeff) = parse_term_at(&mut cur, alg, negative)?;
        out.add_assign_term(gen, coeff).map_err(|e| cur.err(e.to_string()))?;
        cur.skip_ws();
        match cur.peek() {
            None => return Ok(out),
            Some('+') => {
                cur.bump();
                negative = false;
            }
            Some('-') => {
                cur.bump();
                negative = true;
            }
            Some(c) => return Err(cur.err(format!("expected '+' or '-', found '{c}'"))),
        }
    }
}

/// Parses a product word of generators (`gen ('*' gen)*`), left factor
/// first.
pub fn parse_word(text: &str, alg: AlgebraId) -> Result<Vec<Gen>> {
    let mut cur = Cursor::new(text);
    let mut word = vec![parse_gen_at(&mut cur, alg)?];
    loop {
        cur.skip_ws();
        match cur.peek() {
            None => return Ok(word),
            Some('*') => {
                cur.bump();
                word.push(parse_gen_at(&mut cur, alg)?);
            }
            Some('^') => {
                cur.bump();
                cur.skip_ws();
                let e = cur.nat_u64()?;
                if e == 0 {
                    return Err(cur.err("exponent must be positive"));
                }
                let last = *word.last().expect("word is nonempty");
                for _ in 1..e {
                    word.push(last);
                }
            }
            Some(c) => return Err(cur.err(format!("expected '*' or '^', found '{c}'"))),
        }
    }
}

/// Parses a standalone scalar (the whole string must be one scalar).
pub fn parse_scalar(text: &str, p: u32) -> Result<Cyclo> {
    let mut cur = Cursor::new(text);
    let s = parse_scalar_at(&mut cur, p)?;
    cur.finish()?;
    Ok(s)
}

/// Parses a character assignment list like `L[1]=1,L[2]=0,L[4]=3`;
/// returns the nonzero mode values.  Entries must be L generators with
/// positive index.
pub fn parse_phi(text: &str, p: u32) -> Result<BTreeMap<i64, Cyclo>> {
    let alg = AlgebraId::gap(p)?;
    let mut out = BTreeMap::new();
    let mut cur = Cursor::new(text);
    loop {
        let gen = parse_gen_at(&mut cur, alg)?;
        let m = match gen {
            Gen::L(m) if m >= 1 => m,
            other => {
                return Err(cur.err(format!(
                    "character entries must be positive L modes, found {other}"
                )));
            }
        };
        cur.skip_ws();
        cur.expect('=')?;
        let value = parse_scalar_at(&mut cur, p)?;
        if out.insert(m, value).is_some() {
            return Err(cur.err(format!("duplicate entry for L[{m}]")));
        }
        cur.skip_ws();
        match cur.peek() {
            None => return Ok(out),
            Some(',') => {
                cur.bump();
            }
            Some(c) => return Err(cur.err(format!("expected ',' between entries, found '{c}'"))),
        }
    }
}

/// Parses a base-module key: `1`, a product of `L[m]` / `L[m]^e`
/// factors (with or without `*` separators), or a table row `e<k>`.
pub fn parse_base_key(text: &str) -> Result<BaseKey> {
    let mut cur = Cursor::new(text);
    cur.skip_ws();
    match cur.peek() {
        Some('1') => {
            cur.bump();
            cur.finish()?;
            Ok(BaseKey::unit())
        }
        Some('e') => {
            cur.bump();
            let k = cur.nat_u64()? as usize;
            cur.finish()?;
            Ok(BaseKey::Idx(k))
        }
        Some('L') => {
            let mut word: Vec<(i64, u64)> = Vec::new();
            loop {
                cur.skip_ws();
                cur.expect('L')?;
                cur.expect('[')?;
                cur.skip_ws();
                let m = cur.int_i64()?;
                cur.skip_ws();
                cur.expect(']')?;
                let e = if cur.eat('^') { cur.nat_u64()? } else { 1 };
                if e == 0 {
                    return Err(cur.err("exponent must be positive"));
                }
                match word.last_mut() {
                    Some((lm, le)) if *lm == m => *le += e,
                    _ => word.push((m, e)),
                }
                cur.skip_ws();
                match cur.peek() {
                    None => return Ok(BaseKey::Word(word)),
                    Some('*') => {
                        cur.bump();
                    }
                    Some('L') => {}
                    Some(c) => {
                        return Err(cur.err(format!("expected '*' or 'L', found '{c}'")));
                    }
                }
            }
        }
        Some(c) => Err(cur.err(format!("expected a base key, found '{c}'"))),
        None => Err(cur.err("expected a base key, found end of input")),
    }
}

// ---------------------------------------------------------------------
// rationals and scalars as JSON strings
// ---------------------------------------------------------------------

/// Parses an "a/b" string (integers allowed without the "/b").
pub fn ratio_from_str(text: &str) -> Result<BigRational> {
    let mut cur = Cursor::new(text);
    cur.skip_ws();
    let q = cur.rational()?;
    cur.finish()?;
    Ok(q)
}

/// Coefficient array of a scalar ("a/b" strings in the cyclotomic
/// basis, constant term first).
pub fn scalar_to_strings(c: &Cyclo) -> Vec<String> {
    c.coeff_strings()
}

/// Rebuilds a scalar from its coefficient array; longer arrays reduce
/// against the cyclotomic polynomial, shorter ones pad with zeros.
pub fn scalar_from_strings(p: u32, parts: &[String]) -> Result<Cyclo> {
    let mut coeffs = Vec::with_capacity(parts.len());
    for s in parts {
        coeffs.push(ratio_from_str(s)?);
    }
    if coeffs.len() > cyclo_dim(p) {
        // reduce the high powers through xi arithmetic
        let mut total = Cyclo::zero(p);
        for (k, q) in coeffs.into_iter().enumerate() {
            total = total.add(&Cyclo::xi_pow(p, k as u64).scale(&q));
        }
        return Ok(total);
    }
    Ok(Cyclo::from_coeffs(p, coeffs))
}

// ---------------------------------------------------------------------
// JSON forms
// ---------------------------------------------------------------------

/// JSON form of a Lie-algebra element.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ElementJson {
    pub p: u32,
    pub family: String,
    pub terms: Vec<TermJson>,
}

/// One term of an element: generator letter, indices, coefficient in
/// the cyclotomic basis.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TermJson {
    pub gen: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sup: Option<u32>,
    pub index: i64,
    pub coeff: Vec<String>,
}

fn family_name(family: Family) -> &'static str {
    match family {
        Family::Gap => "gap",
        Family::Np => "np",
    }
}

fn family_from_name(name: &str) -> Result<Family> {
    match name {
        "gap" => Ok(Family::Gap),
        "np" => Ok(Family::Np),
        other => Err(Error::invalid(format!(
            "unknown family \"{other}\" (expected \"gap\" or \"np\")"
        ))),
    }
}

fn gen_to_parts(g: &Gen) -> (&'static str, Option<u32>, i64) {
    match g {
        Gen::L(m) => ("L", None, *m),
        Gen::C(i) => ("C", None, *i as i64),
        Gen::T(m) => ("T", None, *m),
        Gen::N(i, m) => ("N", Some(*i), *m),
        Gen::K(i) => ("K", None, *i as i64),
    }
}

fn gen_from_parts(letter: &str, sup: Option<u32>, index: i64) -> Result<Gen> {
    let nat = |index: i64| -> Result<u32> {
        u32::try_from(index)
            .map_err(|_| Error::invalid(format!("central index {index} must be nonnegative")))
    };
    match (letter, sup) {
        ("L", None) => Ok(Gen::L(index)),
        ("C", None) => Ok(Gen::C(nat(index)?)),
        ("T", None) => Ok(Gen::T(index)),
        ("N", Some(i)) => Ok(Gen::N(i, index)),
        ("N", None) => Err(Error::invalid("N generators need the superscript field \"sup\"")),
        ("K", None) => Ok(Gen::K(nat(index)?)),
        (other, _) => Err(Error::invalid(format!("unknown generator letter \"{other}\""))),
    }
}

/// Element to its JSON form.
pub fn element_to_json(x: &LieElement) -> ElementJson {
    ElementJson {
        p: x.alg().p(),
        family: family_name(x.alg().family()).to_string(),
        terms: x
            .terms()
            .map(|(g, c)| {
                let (letter, sup, index) = gen_to_parts(g);
                TermJson { gen: letter.to_string(), sup, index, coeff: scalar_to_strings(c) }
            })
            .collect(),
    }
}

/// Element from its JSON form.
pub fn element_from_json(j: &ElementJson) -> Result<LieElement> {
    let alg = AlgebraId::new(j.p, family_from_name(&j.family)?)?;
    let mut out = LieElement::zero(alg);
    for t in &j.terms {
        let gen = gen_from_parts(&t.gen, t.sup, t.index)?;
        out.add_assign_term(gen, scalar_from_strings(j.p, &t.coeff)?)?;
    }
    Ok(out)
}

/// JSON form of an enveloping-algebra element: one entry per normal-
/// ordered monomial.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct UeaJson {
    pub p: u32,
    pub family: String,
    pub terms: Vec<UeaTermJson>,
}

/// One monomial: generator word in normal order, central multidegree,
/// coefficient.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct UeaTermJson {
    pub word: Vec<String>,
    pub central: BTreeMap<String, u64>,
    pub coeff: Vec<String>,
}

/// Enveloping element to its JSON form.
pub fn uea_to_json(x: &UeaElement) -> UeaJson {
    UeaJson {
        p: x.alg().p(),
        family: family_name(x.alg().family()).to_string(),
        terms: x
            .terms()
            .map(|(mono, coeff)| UeaTermJson {
                word: mono.letters().map(|g| g.to_string()).collect(),
                central: mono
                    .central()
                    .iter()
                    .map(|(i, e)| (i.to_string(), *e))
                    .collect(),
                coeff: scalar_to_strings(coeff),
            })
            .collect(),
    }
}

/// JSON form of a module vector: one entry per (monomial, key) pair,
/// the monomial split into its fractional and integral exponent parts.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VectorJson {
    pub terms: Vec<VectorTermJson>,
}

/// One term: exponent maps keyed by generator index, the base key in
/// its text form, and the coefficient.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VectorTermJson {
    pub iexp: BTreeMap<String, u64>,
    pub jexp: BTreeMap<String, u64>,
    pub key: String,
    pub coeff: Vec<String>,
}

/// Module vector to its JSON form (gap-family vectors, whose monomial
/// letters split by index residue).
pub fn vector_to_json(v: &ModuleVector) -> VectorJson {
    let p = v.alg().p() as i64;
    VectorJson {
        terms: v
            .terms()
            .map(|((mono, key), coeff)| {
                let mut iexp: BTreeMap<String, u64> = BTreeMap::new();
                let mut jexp: BTreeMap<String, u64> = BTreeMap::new();
                for (g, e) in mono.word() {
                    let idx = match g {
                        Gen::L(m) => *m,
                        Gen::T(m) | Gen::N(_, m) => *m,
                        Gen::C(i) | Gen::K(i) => *i as i64,
                    };
                    let slot = if matches!(g, Gen::L(m) if m.rem_euclid(p) == 0) {
                        &mut jexp
                    } else {
                        &mut iexp
                    };
                    *slot.entry(idx.to_string()).or_insert(0) += e;
                }
                VectorTermJson {
                    iexp,
                    jexp,
                    key: key.to_string(),
                    coeff: scalar_to_strings(coeff),
                }
            })
            .collect(),
    }
}

/// Module vector from its JSON form, for a module over the gap algebra.
pub fn vector_from_json(p: u32, j: &VectorJson) -> Result<ModuleVector> {
    let alg = AlgebraId::gap(p)?;
    let mut out = ModuleVector::zero(alg);
    for term in &j.terms {
        let mut letters: Vec<Gen> = Vec::new();
        for (idx, e) in term.iexp.iter().chain(term.jexp.iter()) {
            let m: i64 = idx
                .parse()
                .map_err(|_| Error::invalid(format!("bad generator index \"{idx}\"")))?;
            for _ in 0..*e {
                letters.push(Gen::L(m));
            }
        }
        letters.sort_by_key(|g| match g {
            Gen::L(m) => *m,
            _ => unreachable!("only L letters are built above"),
        });
        let mono = PbwMonomial::from_parts(letters, BTreeMap::new());
        let key = parse_base_key(&term.key)?;
        let coeff = scalar_from_strings(p, &term.coeff)?;
        out.add_assign_term(mono, key, coeff);
    }
    Ok(out)
}

/// Renders a rational for JSON output.
pub fn ratio_to_string(q: &BigRational) -> String {
    format_ratio(q)
}

/// True when the rational is integral (used to pretty-print grades).
pub fn ratio_is_integer(q: &BigRational) -> bool {
    q.denom().is_one()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grammar_examples_parse() {
        let alg = AlgebraId::gap(3).unwrap();
        let x = parse_element("L[-3] + 2/3*C[0]", alg).unwrap();
        assert_eq!(x.terms().count(), 2);
        assert_eq!(x.coeff(&Gen::C(0)), Cyclo::rational(3, 2, 3));

        let np = AlgebraId::np(3).unwrap();
        let y = parse_element("N[1,-2] - xi^1*K[1]", np).unwrap();
        assert_eq!(y.terms().count(), 2);
        assert_eq!(y.coeff(&Gen::K(1)), Cyclo::xi_pow(3, 1).neg());

        // central index beyond the canonicalization bound is an error
        let err = parse_element("C[5]", alg).unwrap_err();
        assert!(matches!(err, Error::Parse { .. }), "{err}");
    }

    #[test]
    fn print_parse_round_trip() {
        let alg = AlgebraId::gap(3).unwrap();
        for text in [
            "0",
            "L[0]",
            "-L[2]",
            "2/3*L[-1] + C[0]",
            "xi^1*L[4] - 5*C[1]",
            "(1 + 2*xi^1)*L[2] + (1/2 - xi^2)*L[3]",
            "-6*L[0]",
        ] {
            let x = parse_element(text, alg).unwrap();
            let printed = x.to_string();
            let y = parse_element(&printed, alg).unwrap();
            assert_eq!(x, y, "round trip through {printed:?}");
        }
    }

    #[test]
    fn parse_errors_carry_positions() {
        let alg = AlgebraId::gap(2).unwrap();
        match parse_element("L[1] + + L[2]", alg) {
            Err(Error::Parse { line: 1, col, .. }) => assert_eq!(col, 8),
            other => panic!("expected a positioned parse error, got {other:?}"),
        }
        match parse_element("L[1]\n+ Q[2]", alg) {
            Err(Error::Parse { line: 2, col, .. }) => assert_eq!(col, 3),
            other => panic!("expected a positioned parse error, got {other:?}"),
        }
    }

    #[test]
    fn words_and_keys_parse() {
        let alg = AlgebraId::gap(2).unwrap();
        let w = parse_word("L[1]*L[-1]^2*C[0]", alg).unwrap();
        assert_eq!(w, vec![Gen::L(1), Gen::L(-1), Gen::L(-1), Gen::C(0)]);

        assert_eq!(parse_base_key("1").unwrap(), BaseKey::unit());
        assert_eq!(parse_base_key("e3").unwrap(), BaseKey::Idx(3));
        assert_eq!(
            parse_base_key("L[0]^2L[1]").unwrap(),
            BaseKey::Word(vec![(0, 2), (1, 1)])
        );
        assert_eq!(
            parse_base_key("L[3]*L[1]*L[0]").unwrap(),
            BaseKey::Word(vec![(3, 1), (1, 1), (0, 1)])
        );
    }

    #[test]
    fn phi_lists_parse() {
        let phi = parse_phi("L[1]=1,L[2]=0,L[4]=3", 2).unwrap();
        assert_eq!(phi.len(), 3);
        assert_eq!(phi[&4], Cyclo::from_int(2, 3));
        assert!(parse_phi("L[-1]=1", 2).is_err());
        assert!(parse_phi("L[1]=1,L[1]=2", 2).is_err());
    }

    #[test]
    fn element_json_round_trip() {
        let alg = AlgebraId::np(3).unwrap();
        let x = parse_element("N[1,-2] - xi^1*K[1] + 7/2*T[0]", alg).unwrap();
        let j = element_to_json(&x);
        assert_eq!(j.family, "np");
        let y = element_from_json(&j).unwrap();
        assert_eq!(x, y);
    }

    #[test]
    fn vector_json_round_trip() {
        let module = crate::modules::verma(3, BigRational::from_integer(1.into()), BigRational::from_integer(2.into())).unwrap();
        let v = module
            .mono_vector(&[Gen::L(-3), Gen::L(-1)], BaseKey::unit())
            .unwrap();
        let j = vector_to_json(&v);
        assert_eq!(j.terms.len(), 1);
        assert_eq!(j.terms[0].jexp["-3"], 1);
        assert_eq!(j.terms[0].iexp["-1"], 1);
        let w = vector_from_json(3, &j).unwrap();
        assert_eq!(v, w);
    }

    #[test]
    fn scalar_strings_reduce_high_powers() {
        // an array longer than the field dimension reduces mod the
        // cyclotomic polynomial: 1 + xi + xi^2 = 0 at p = 3
        let c = scalar_from_strings(3, &["1".into(), "1".into(), "1".into()]).unwrap();
        assert!(c.is_zero());
    }
}
