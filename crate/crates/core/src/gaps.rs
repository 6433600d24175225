//! Level-by-level construction of `Λ(x) ∩ [2x, q]` by removing open gaps.
//!
//! A coding prefix `w` of length `L` with base-3 integer `S` covers
//! `y ∈ [S/3^L, (S+1)/3^L]`, i.e. `λ ∈ [2x·3^L/(S+1), 2x·3^L/S]`. Level `n`
//! keeps the intervals of all prefixes of length `n + 1` that meet
//! `[2x, q]`; passing from level `n - 1` to `n` removes, inside each kept
//! interval of prefix `w`, the gap between its children `w2` and `w0`.
//! Because the coding map is decreasing, the `w2` child lies to the left.

use alloc::vec::Vec;
use core::cmp::Ordering;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::coding::{pow3, Coding, Digit, Word};
use crate::param::{self, ParamError};
use crate::rational::{fraction_to_f64, Rational};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GapError {
    #[error("upper bound q = {q} must exceed min Λ(x) = {min}")]
    BadRange { q: Rational, min: Rational },
    #[error(transparent)]
    Param(#[from] ParamError),
}

/// Closed interval of parameters whose codings start with `prefix`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabeledInterval {
    pub lo: Rational,
    pub hi: Rational,
    pub prefix: Word,
    /// `hi` was cut down to `q` (the natural upper end exceeds `q`, or is
    /// infinite for an all-zero prefix).
    pub clipped: bool,
}

impl LabeledInterval {
    pub fn length(&self) -> Rational {
        &self.hi - &self.lo
    }
}

/// Open interval removed between the two children of `prefix`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Gap {
    pub lo: Rational,
    pub hi: Rational,
    pub prefix: Word,
    /// Level at which the gap is first removed.
    pub level: usize,
}

impl Gap {
    /// `prefix 2 0^∞`, the coding of the left endpoint.
    pub fn left_coding(&self) -> Coding {
        self.prefix.with(Digit::Two).complete(Digit::Zero)
    }

    /// `prefix 0 2^∞`, the coding of the right endpoint.
    pub fn right_coding(&self) -> Coding {
        self.prefix.with(Digit::Zero).complete(Digit::Two)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GapReport {
    pub x: Rational,
    pub q: Rational,
    pub level: usize,
    /// Kept intervals in increasing order of `λ`.
    pub kept: Vec<LabeledInterval>,
    /// Every gap removed up to `level`, ordered by level, then by `λ`.
    pub removed: Vec<Gap>,
}

impl GapReport {
    /// Whether the top kept interval was cut at `q`.
    pub fn truncated(&self) -> bool {
        self.kept.iter().any(|k| k.clipped)
    }

    /// `[min lo, max hi]` over the kept intervals.
    pub fn hull(&self) -> Option<(Rational, Rational)> {
        let first = self.kept.first()?;
        let last = self.kept.last()?;
        Some((first.lo.clone(), last.hi.clone()))
    }
}

/// Builds the level-`n` approximation of `Λ(x) ∩ [2x, q]`.
///
/// Subtrees whose smallest parameter already exceeds `q` are never visited,
/// so the cost is proportional to the number of surviving intervals.
pub fn level_intervals(x: &Rational, q: &Rational, n: usize) -> Result<GapReport, GapError> {
    let min = param::min_lambda(x)?;
    if *q <= min {
        return Err(GapError::BadRange { q: q.clone(), min });
    }
    let two_x = min;
    let powers: Vec<BigInt> = (0..=n + 1).map(pow3).collect();
    // lower(s, len) > q  <=>  3^len·above.0 > (s + 1)·above.1
    let above = (two_x.numer() * q.denom(), q.numer() * two_x.denom());
    let mut walker = Walker {
        two_x: &two_x,
        q,
        powers: &powers,
        above: &above,
        depth: n + 1,
        kept: Vec::new(),
        removed: Vec::new(),
        prefix: Word::new(),
    };
    walker.visit(&BigInt::zero(), 0);
    let mut removed = walker.removed;
    // the walk already emits each level's gaps in increasing order
    removed.sort_by_key(|g| g.level);
    Ok(GapReport {
        x: x.clone(),
        q: q.clone(),
        level: n,
        kept: walker.kept,
        removed,
    })
}

struct Walker<'a> {
    two_x: &'a Rational,
    q: &'a Rational,
    powers: &'a [BigInt],
    above: &'a (BigInt, BigInt),
    depth: usize,
    kept: Vec<LabeledInterval>,
    removed: Vec<Gap>,
    prefix: Word,
}

impl Walker<'_> {
    /// `2x·3^len / t`, the parameter at `y = t/3^len`.
    fn lambda_at(&self, t: &BigInt, len: usize) -> Rational {
        Rational::ratio(
            self.two_x.numer() * &self.powers[len],
            self.two_x.denom() * t,
        )
    }

    /// Whether the subtree at `t = s + 1` lies entirely above `q`.
    fn beyond_q(&self, t: &BigInt, len: usize) -> bool {
        &self.powers[len] * &self.above.0 > t * &self.above.1
    }

    /// Smallest parameter in the subtree of the current prefix.
    fn lower(&self, s: &BigInt, len: usize) -> Rational {
        self.lambda_at(&(s + 1u8), len)
    }

    fn visit(&mut self, s: &BigInt, len: usize) {
        if self.beyond_q(&(s + 1u8), len) {
            return;
        }
        if len == self.depth {
            let lo = self.lower(s, len);
            let (hi, clipped) = if s.is_zero() {
                (self.q.clone(), true)
            } else {
                let hi = self.lambda_at(s, len);
                if hi > *self.q {
                    (self.q.clone(), true)
                } else {
                    (hi, false)
                }
            };
            self.kept.push(LabeledInterval {
                lo,
                hi,
                prefix: self.prefix.clone(),
                clipped,
            });
            return;
        }
        let child_two = s * 3u8 + 2u8;
        let child_zero = s * 3u8;
        let zero_survives = !self.beyond_q(&(&child_zero + 1u8), len + 1);
        if zero_survives {
            self.removed.push(Gap {
                lo: self.lambda_at(&child_two, len + 1),
                hi: self.lambda_at(&(&child_zero + 1u8), len + 1),
                prefix: self.prefix.clone(),
                level: len,
            });
        }
        self.prefix.push(Digit::Two);
        self.visit(&child_two, len + 1);
        self.prefix.pop();
        if zero_survives {
            self.prefix.push(Digit::Zero);
            self.visit(&child_zero, len + 1);
            self.prefix.pop();
        }
    }
}

/// Exact sum kept as an unreduced fraction `num/den`, `den > 0`.
///
/// Deep levels have reduced denominators of millions of bits, and
/// reducing them costs far more than the exact comparisons that are
/// usually all a caller needs.
#[derive(Debug, Clone)]
pub struct LengthSum {
    num: BigInt,
    den: BigInt,
}

impl LengthSum {
    fn from_rational(r: &Rational) -> LengthSum {
        LengthSum {
            num: r.numer().clone(),
            den: r.denom().clone(),
        }
    }

    fn add(&self, other: &LengthSum) -> LengthSum {
        LengthSum {
            num: &self.num * &other.den + &other.num * &self.den,
            den: &self.den * &other.den,
        }
    }

    /// Exact comparison with another sum.
    pub fn cmp_sum(&self, other: &LengthSum) -> Ordering {
        (&self.num * &other.den).cmp(&(&other.num * &self.den))
    }

    /// Exact comparison with a rational.
    pub fn cmp_rational(&self, other: &Rational) -> Ordering {
        (&self.num * other.denom()).cmp(&(other.numer() * &self.den))
    }

    pub fn to_rational(&self) -> Rational {
        Rational::ratio(self.num.clone(), self.den.clone())
    }

    pub fn to_f64(&self) -> f64 {
        fraction_to_f64(&self.num, &self.den)
    }
}

/// Sum of the kept lengths by balanced pairwise addition.
pub fn length_sum(report: &GapReport) -> LengthSum {
    let mut level: Vec<LengthSum> = report
        .kept
        .iter()
        .map(|k| LengthSum::from_rational(&k.length()))
        .collect();
    if level.is_empty() {
        return LengthSum {
            num: BigInt::zero(),
            den: BigInt::from(1u8),
        };
    }
    while level.len() > 1 {
        level = level
            .chunks(2)
            .map(|pair| match pair {
                [a, b] => a.add(b),
                [a] => a.clone(),
                _ => unreachable!(),
            })
            .collect();
    }
    level.pop().expect("nonempty")
}

/// Exact total length of the kept intervals.
pub fn total_length(report: &GapReport) -> Rational {
    length_sum(report).to_rational()
}
