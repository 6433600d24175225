//! The block measure on `{0, 2}`-words that never contain an all-zero block.
//!
//! After a fixed prefix of length `n`, digits come in blocks of length `k`.
//! Each block is drawn from the product law with `P(0) = θ`, `P(2) = 1 - θ`
//! conditioned on not being `0^k`, where `θ = θ_k(p)`. Under this law every
//! position of a block is 2 with probability exactly `p`.

use alloc::vec::Vec;

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

use crate::coding::{Digit, Word};
use crate::dimension::theta::{solve_theta_with_precision, ThetaError, DEFAULT_THETA_BITS};
use crate::dimension::LN_3;
use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TreeError {
    #[error(transparent)]
    Theta(#[from] ThetaError),
    #[error("block length must be at least 1")]
    ZeroBlockLength,
    #[error("theta must lie in [0, 1), got {0}")]
    BadTheta(Rational),
    #[error("word does not start with the prefix {0}")]
    PrefixMismatch(Word),
    #[error("word length {len} is not {n} plus a multiple of {k}")]
    BadLength { len: usize, n: usize, k: u32 },
    #[error("block {0} is all zeros; the cylinder has measure zero")]
    ZeroBlock(usize),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TreeMeasureSpec {
    pub k: u32,
    pub prefix: Word,
    pub p: Rational,
    /// `P(0)` inside a block, a dyadic approximation of `θ_k(p)`.
    pub theta: Rational,
}

impl TreeMeasureSpec {
    pub fn new(p: Rational, k: u32, prefix: Word) -> Result<TreeMeasureSpec, TreeError> {
        Self::with_precision(p, k, prefix, DEFAULT_THETA_BITS)
    }

    pub fn with_precision(
        p: Rational,
        k: u32,
        prefix: Word,
        bits: u32,
    ) -> Result<TreeMeasureSpec, TreeError> {
        let sol = solve_theta_with_precision(&p, k, bits)?;
        Ok(TreeMeasureSpec {
            k,
            prefix,
            p,
            theta: sol.theta,
        })
    }

    /// A spec with an explicit `θ`, e.g. `θ = 0` for the point mass on `2^∞`.
    pub fn with_theta(
        p: Rational,
        k: u32,
        prefix: Word,
        theta: Rational,
    ) -> Result<TreeMeasureSpec, TreeError> {
        if k == 0 {
            return Err(TreeError::ZeroBlockLength);
        }
        if theta.is_negative() || theta >= Rational::one() {
            return Err(TreeError::BadTheta(theta));
        }
        Ok(TreeMeasureSpec {
            k,
            prefix,
            p,
            theta,
        })
    }

    pub fn n(&self) -> usize {
        self.prefix.len()
    }

    pub fn p0(&self) -> Rational {
        self.theta.clone()
    }

    pub fn p2(&self) -> Rational {
        Rational::one() - &self.theta
    }
}

/// `⌊u · 2^53⌋ / 2^53` from the top 53 bits of a 64-bit draw.
fn unit(rng: &mut ChaCha8Rng) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// The prefix followed by `blocks` independent blocks.
///
/// Block `i` is drawn from ChaCha8 stream `i` under `seed`, so any block
/// can be regenerated on its own. Digits are compared against `θ` rounded
/// to `f64`.
pub fn sample_tree(spec: &TreeMeasureSpec, blocks: usize, seed: u64) -> Word {
    let k = spec.k as usize;
    let theta = spec.theta.to_f64();
    let mut digits = Vec::with_capacity(spec.n() + blocks * k);
    digits.extend_from_slice(spec.prefix.digits());
    let mut block = Vec::with_capacity(k);
    for i in 0..blocks {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(i as u64);
        loop {
            block.clear();
            block.extend((0..k).map(|_| {
                if unit(&mut rng) < theta {
                    Digit::Zero
                } else {
                    Digit::Two
                }
            }));
            if block.contains(&Digit::Two) {
                break;
            }
        }
        digits.extend_from_slice(&block);
    }
    Word::from_digits(digits)
}

/// Digit counts over the blocks after the prefix: `(N, c0, c2)`.
fn block_counts(spec: &TreeMeasureSpec, word: &Word) -> Result<(usize, usize, usize), TreeError> {
    let n = spec.n();
    let k = spec.k as usize;
    let digits = word.digits();
    if digits.len() < n || digits[..n] != *spec.prefix.digits() {
        return Err(TreeError::PrefixMismatch(spec.prefix.clone()));
    }
    let rest = &digits[n..];
    if rest.len() % k != 0 {
        return Err(TreeError::BadLength {
            len: digits.len(),
            n,
            k: spec.k,
        });
    }
    let mut c2 = 0;
    for (i, block) in rest.chunks(k).enumerate() {
        let twos = block.iter().filter(|d| **d == Digit::Two).count();
        if twos == 0 {
            return Err(TreeError::ZeroBlock(i));
        }
        c2 += twos;
    }
    Ok((rest.len() / k, rest.len() - c2, c2))
}

/// `θ^{c0} (1-θ)^{c2} / (1-θ^k)^N`, exact in the rational `θ`.
pub fn cylinder_measure(spec: &TreeMeasureSpec, word: &Word) -> Result<Rational, TreeError> {
    let (blocks, c0, c2) = block_counts(spec, word)?;
    let norm = (Rational::one() - spec.theta.pow(spec.k)).pow(blocks as u32);
    let weight = spec.p0().pow(c0 as u32) * spec.p2().pow(c2 as u32);
    Ok(weight.checked_div(&norm).expect("θ < 1"))
}

/// Natural log of [`cylinder_measure`], computed from the digit counts.
pub fn log_cylinder_measure(spec: &TreeMeasureSpec, word: &Word) -> Result<f64, TreeError> {
    let (blocks, c0, c2) = block_counts(spec, word)?;
    let theta = spec.theta.to_f64();
    let mut log = 0.0;
    if c0 > 0 {
        log += c0 as f64 * libm::log(theta);
    }
    log += c2 as f64 * libm::log1p(-theta);
    log -= blocks as f64 * libm::log1p(-libm::pow(theta, spec.k as f64));
    Ok(log)
}

/// `-ln μ(word) / (len(word) · ln 3)`.
pub fn empirical_local_dim(spec: &TreeMeasureSpec, word: &Word) -> Result<f64, TreeError> {
    let log = log_cylinder_measure(spec, word)?;
    Ok(-log / (word.len() as f64 * LN_3))
}
