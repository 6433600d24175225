//! Digit sequences over `{0, 2}` and the middle-third Cantor set.
//!
//! A [`Word`] is a finite string of digits; a [`Coding`] is an infinite,
//! eventually periodic sequence `u v v v ...` written `u(v)`. Every coding
//! is stored in canonical form (primitive period, shortest preperiod), so
//! structural equality coincides with equality of sequences and, because
//! evaluation is injective on `{0, 2}^N`, with equality of values.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;
use core::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CodingError {
    #[error("digit `{0}` is not in {{0, 2}}")]
    BadDigit(char),
    #[error("periodic part of a coding must be nonempty")]
    EmptyPeriod,
    #[error("malformed coding `{0}`; expected e.g. `2(0)` or `(20)`")]
    Malformed(String),
    #[error("value {0} is outside [0, 1]")]
    OutOfRange(Rational),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Digit {
    Zero,
    Two,
}

impl Digit {
    pub fn value(self) -> u8 {
        match self {
            Digit::Zero => 0,
            Digit::Two => 2,
        }
    }

    pub fn flip(self) -> Digit {
        match self {
            Digit::Zero => Digit::Two,
            Digit::Two => Digit::Zero,
        }
    }

    pub fn as_char(self) -> char {
        match self {
            Digit::Zero => '0',
            Digit::Two => '2',
        }
    }

    pub fn from_char(c: char) -> Result<Digit, CodingError> {
        match c {
            '0' => Ok(Digit::Zero),
            '2' => Ok(Digit::Two),
            other => Err(CodingError::BadDigit(other)),
        }
    }
}

/// A finite word over `{0, 2}`.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct Word(Vec<Digit>);

impl Word {
    pub fn new() -> Word {
        Word(Vec::new())
    }

    pub fn from_digits(digits: Vec<Digit>) -> Word {
        Word(digits)
    }

    pub fn repeat(d: Digit, n: usize) -> Word {
        Word(alloc::vec![d; n])
    }

    pub fn digits(&self) -> &[Digit] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn push(&mut self, d: Digit) {
        self.0.push(d);
    }

    pub fn pop(&mut self) -> Option<Digit> {
        self.0.pop()
    }

    pub fn extend_from(&mut self, other: &Word) {
        self.0.extend_from_slice(&other.0);
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut w = self.clone();
        w.extend_from(other);
        w
    }

    pub fn with(&self, d: Digit) -> Word {
        let mut w = self.clone();
        w.push(d);
        w
    }

    pub fn is_all_zero(&self) -> bool {
        self.0.iter().all(|&d| d == Digit::Zero)
    }

    pub fn count(&self, d: Digit) -> usize {
        self.0.iter().filter(|&&x| x == d).count()
    }

    /// `Σ d_i 3^{n-i}`: the word read as a base-3 integer.
    pub fn ternary_integer(&self) -> BigInt {
        self.0
            .iter()
            .fold(BigInt::zero(), |acc, d| acc * 3u8 + d.value())
    }

    /// `Σ d_i 3^{-i}` over the word.
    pub fn partial_sum(&self) -> Rational {
        Rational::ratio(self.ternary_integer(), pow3(self.len()))
    }

    /// The infinite sequence `self d d d ...`.
    pub fn complete(&self, d: Digit) -> Coding {
        Coding::new(self.clone(), Word(alloc::vec![d])).expect("single-digit period is nonempty")
    }

    /// Word order: `a < b` iff `a0^∞ < b0^∞`.
    pub fn compare_lex(&self, other: &Word) -> Ordering {
        self.complete(Digit::Zero).cmp(&other.complete(Digit::Zero))
    }
}

impl FromStr for Word {
    type Err = CodingError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        s.trim()
            .chars()
            .map(Digit::from_char)
            .collect::<Result<Vec<_>, _>>()
            .map(Word)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for d in &self.0 {
            write!(f, "{}", d.as_char())?;
        }
        Ok(())
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Word({self})")
    }
}

/// An eventually periodic sequence over `{0, 2}` in canonical form.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Coding {
    preperiod: Word,
    period: Word,
}

impl Coding {
    /// Builds and canonicalizes `preperiod (period)^∞`.
    pub fn new(preperiod: Word, period: Word) -> Result<Coding, CodingError> {
        if period.is_empty() {
            return Err(CodingError::EmptyPeriod);
        }
        Ok(canonicalize(Coding { preperiod, period }))
    }

    pub fn preperiod(&self) -> &Word {
        &self.preperiod
    }

    pub fn period(&self) -> &Word {
        &self.period
    }

    pub fn zeros() -> Coding {
        Word::new().complete(Digit::Zero)
    }

    pub fn twos() -> Coding {
        Word::new().complete(Digit::Two)
    }

    pub fn is_zero(&self) -> bool {
        self.preperiod.is_all_zero() && self.period.is_all_zero()
    }

    /// Digit at 0-based position `i`.
    pub fn digit(&self, i: usize) -> Digit {
        let pre = self.preperiod.len();
        if i < pre {
            self.preperiod.0[i]
        } else {
            self.period.0[(i - pre) % self.period.len()]
        }
    }

    pub fn digits(&self) -> impl Iterator<Item = Digit> + '_ {
        (0..).map(move |i| self.digit(i))
    }

    /// The first `n` digits.
    pub fn prefix(&self, n: usize) -> Word {
        Word(self.digits().take(n).collect())
    }

    /// `Σ d_i 3^{-i}`, exact.
    pub fn eval(&self) -> Rational {
        eval_coding(self)
    }
}

/// Exact value `Σ_{i≥1} d_i 3^{-i}` of a coding.
///
/// The preperiod `u` (length `n`) and period `v` (length `L`) give
/// `(U (3^L - 1) + V) / (3^n (3^L - 1))` with `U`, `V` the base-3 integers
/// of the two words.
pub fn eval_coding(c: &Coding) -> Rational {
    let u = c.preperiod.ternary_integer();
    let v = c.period.ternary_integer();
    let cycle = pow3(c.period.len()) - 1u8;
    let num = u * &cycle + v;
    let den = pow3(c.preperiod.len()) * cycle;
    Rational::ratio(num, den)
}

/// Reduces a coding to canonical form without changing the sequence.
pub fn canonicalize(c: Coding) -> Coding {
    let Coding {
        mut preperiod,
        period,
    } = c;
    let mut period = primitive_root(period);
    // Absorb a trailing preperiod digit that matches the end of the period:
    // u a (v a)^∞ = u (a v)^∞.
    while let (Some(&a), Some(&b)) = (preperiod.0.last(), period.0.last()) {
        if a != b {
            break;
        }
        preperiod.0.pop();
        period.0.rotate_right(1);
    }
    Coding { preperiod, period }
}

fn primitive_root(period: Word) -> Word {
    let n = period.len();
    for d in 1..n {
        if n % d == 0 && (d..n).all(|i| period.0[i] == period.0[i % d]) {
            return Word(period.0[..d].to_vec());
        }
    }
    period
}

/// Lexicographic order on sequences, the first differing digit decides.
pub fn compare_lex(a: &Coding, b: &Coding) -> Ordering {
    let horizon = a.preperiod.len().max(b.preperiod.len()) + a.period.len().lcm(&b.period.len());
    for i in 0..horizon {
        match a.digit(i).cmp(&b.digit(i)) {
            Ordering::Equal => continue,
            other => return other,
        }
    }
    Ordering::Equal
}

impl PartialOrd for Coding {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Coding {
    fn cmp(&self, other: &Self) -> Ordering {
        compare_lex(self, other)
    }
}

impl fmt::Display for Coding {
    /// `u(v)`, e.g. `2(0)` for `20^∞`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}({})", self.preperiod, self.period)
    }
}

impl fmt::Debug for Coding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Coding({self})")
    }
}

impl FromStr for Coding {
    type Err = CodingError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let malformed = || CodingError::Malformed(s.into());
        let (pre, rest) = s.split_once('(').ok_or_else(malformed)?;
        let period = rest.strip_suffix(')').ok_or_else(malformed)?;
        if period.contains(['(', ')']) || pre.contains(')') {
            return Err(malformed());
        }
        Coding::new(pre.parse()?, period.parse()?)
    }
}

/// Certificate that a value lies in a removed middle third: after
/// `index - 1` forced digits, the residue falls strictly inside `(1/3, 2/3)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RejectWitness {
    /// 1-based position of the digit that would have to be `1`.
    pub index: usize,
    pub residue: Rational,
}

/// Outcome of the Cantor-set membership decision.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Expansion {
    Accepted(Coding),
    Rejected(RejectWitness),
}

impl Expansion {
    pub fn coding(&self) -> Option<&Coding> {
        match self {
            Expansion::Accepted(c) => Some(c),
            Expansion::Rejected(_) => None,
        }
    }

    pub fn is_accepted(&self) -> bool {
        matches!(self, Expansion::Accepted(_))
    }
}

/// Decides whether `y ∈ [0, 1]` lies in the middle-third Cantor set and, if
/// so, returns its unique `{0, 2}` coding.
///
/// The residue `y_i` is scaled by 3 each step: `y ≤ 1/3` emits 0,
/// `y ≥ 2/3` emits 2 (subtracting 2), anything strictly between is
/// rejected. Residues of `a/b` all have the form `t/b`, so the orbit is
/// finite and the first repeated residue closes the period.
pub fn ternary_expand(y: &Rational) -> Result<Expansion, CodingError> {
    if y.is_negative() || *y > Rational::one() {
        return Err(CodingError::OutOfRange(y.clone()));
    }
    let den = y.denom().clone();
    let twice_den = &den * 2u8;
    let mut residue = y.numer().clone();
    let mut seen: BTreeMap<BigInt, usize> = BTreeMap::new();
    let mut digits = Vec::new();
    loop {
        if let Some(&start) = seen.get(&residue) {
            let period = Word(digits.split_off(start));
            let coding = Coding::new(Word(digits), period)?;
            return Ok(Expansion::Accepted(coding));
        }
        seen.insert(residue.clone(), digits.len());
        let tripled = &residue * 3u8;
        if tripled <= den {
            digits.push(Digit::Zero);
            residue = tripled;
        } else if tripled >= twice_den {
            digits.push(Digit::Two);
            residue = tripled - &twice_den;
        } else {
            return Ok(Expansion::Rejected(RejectWitness {
                index: digits.len() + 1,
                residue: Rational::ratio(residue, den),
            }));
        }
    }
}

pub(crate) fn pow3(n: usize) -> BigInt {
    let mut acc = BigInt::one();
    let mut base = BigInt::from(3u8);
    let mut e = n;
    while e > 0 {
        if e & 1 == 1 {
            acc *= &base;
        }
        e >>= 1;
        if e > 0 {
            base = &base * &base;
        }
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;

    fn c(s: &str) -> Coding {
        s.parse().unwrap()
    }

    fn r(s: &str) -> Rational {
        s.parse().unwrap()
    }

    #[test]
    fn evaluation() {
        assert_eq!(c("(2)").eval(), r("1"));
        assert_eq!(c("(0)").eval(), r("0"));
        assert_eq!(c("(20)").eval(), r("3/4"));
        assert_eq!(c("2(0)").eval(), r("2/3"));
        assert_eq!(c("0(2)").eval(), r("1/3"));
        assert_eq!(c("22(0)").eval(), r("8/9"));
    }

    #[test]
    fn expansion_examples() {
        assert_eq!(
            ternary_expand(&r("3/4")).unwrap(),
            Expansion::Accepted(c("(20)"))
        );
        assert_eq!(
            ternary_expand(&r("1/3")).unwrap(),
            Expansion::Accepted(c("0(2)"))
        );
        assert_eq!(
            ternary_expand(&r("2/3")).unwrap(),
            Expansion::Accepted(c("2(0)"))
        );
        assert_eq!(
            ternary_expand(&r("0")).unwrap(),
            Expansion::Accepted(c("(0)"))
        );
        assert_eq!(
            ternary_expand(&r("1")).unwrap(),
            Expansion::Accepted(c("(2)"))
        );
        assert_eq!(
            ternary_expand(&r("5/6")).unwrap(),
            Expansion::Rejected(RejectWitness {
                index: 2,
                residue: r("1/2")
            })
        );
        assert_eq!(
            ternary_expand(&r("1/2")).unwrap(),
            Expansion::Rejected(RejectWitness {
                index: 1,
                residue: r("1/2")
            })
        );
        assert!(matches!(
            ternary_expand(&r("3/2")),
            Err(CodingError::OutOfRange(_))
        ));
        assert!(matches!(
            ternary_expand(&r("-1/9")),
            Err(CodingError::OutOfRange(_))
        ));
    }

    #[test]
    fn canonical_forms() {
        let a = Coding::new("2".parse().unwrap(), "22".parse().unwrap()).unwrap();
        assert_eq!(a.preperiod().to_string(), "");
        assert_eq!(a.period().to_string(), "2");

        let b = Coding::new(Word::new(), "2020".parse().unwrap()).unwrap();
        assert_eq!(b.period().to_string(), "20");

        // 2 (02)^∞ = (20)^∞
        let d = Coding::new("2".parse().unwrap(), "02".parse().unwrap()).unwrap();
        assert_eq!(d, c("(20)"));
        assert_eq!(d.eval(), r("3/4"));

        // 20 (02)^∞ is already canonical and evaluates to 25/36, not 3/4.
        let e = Coding::new("20".parse().unwrap(), "02".parse().unwrap()).unwrap();
        assert_eq!(e.to_string(), "20(02)");
        assert_eq!(e.eval(), r("25/36"));
    }

    #[test]
    fn lexicographic_order() {
        assert_eq!(compare_lex(&c("20(2)"), &c("22(0)")), Ordering::Less);
        assert_eq!(compare_lex(&c("(20)"), &c("(20)")), Ordering::Equal);
        assert_eq!(compare_lex(&c("(0)"), &c("(2)")), Ordering::Less);
        assert_eq!(compare_lex(&c("(200)"), &c("(20)")), Ordering::Less);
        let w1: Word = "22".parse().unwrap();
        let w2: Word = "220".parse().unwrap();
        assert_eq!(w1.compare_lex(&w2), Ordering::Equal);
    }

    #[test]
    fn parsing_and_display() {
        assert_eq!(c("2(0)").to_string(), "2(0)");
        assert_eq!(c("22(22)").to_string(), "(2)");
        assert!("2".parse::<Coding>().is_err());
        assert!("2()".parse::<Coding>().is_err());
        assert!("1(0)".parse::<Coding>().is_err());
        assert!("(0)(2)".parse::<Coding>().is_err());
    }

    #[test]
    fn word_helpers() {
        let w: Word = "202".parse().unwrap();
        assert_eq!(w.ternary_integer(), BigInt::from(20));
        assert_eq!(w.partial_sum(), r("20/27"));
        assert_eq!(w.complete(Digit::Two).eval(), r("21/27"));
        assert!(Word::repeat(Digit::Zero, 4).is_all_zero());
        assert_eq!(c("2(0)").prefix(4).to_string(), "2000");
    }
}
