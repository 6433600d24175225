//! Sequences whose share of 2s oscillates between two limits.
//!
//! After a fixed prefix, block `m ≥ 0` is a free segment of length
//! `3·2^m·q` whose digits at offsets `kq` (odd `k ≤ 3·2^m`) are pinned to
//! 2, followed by `0^{2^{m+1}} 2^{2^m}`. Block `m` ends at
//! `r_{m+1} = 3(q+1)(2^{m+1} - 1)`; the trailing run of 2s starts right
//! after `ℓ_{m+1} = r_{m+1} - 2^m`.

use alloc::vec::Vec;

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

use super::{freq_stats, FreqError, FreqStats};
use crate::coding::{Digit, Word};
use crate::rational::Rational;

/// Policy for the unpinned digits of each free segment.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Filler {
    AllZero,
    AllTwo,
    /// Independent fair digits; block `m` reads ChaCha8 stream `m`.
    Seeded(u64),
}

impl Filler {
    /// `lim M_2(m)/2^m`, the number of 2s in free segment `m` over `2^m`,
    /// when it is known in closed form.
    pub fn alpha(&self, q: u32) -> Option<Rational> {
        match self {
            Filler::AllZero => Some(Rational::ratio(3, 2)),
            Filler::AllTwo => Some(Rational::from(3 * i64::from(q))),
            Filler::Seeded(_) => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SigmaSpec {
    pub q: u32,
    pub prefix: Word,
    pub filler: Filler,
}

/// `3(q+1)(2^m - 1)`.
pub fn r_m(q: u32, m: u32) -> u64 {
    3 * (u64::from(q) + 1) * ((1u64 << m) - 1)
}

/// `r_m - 2^{m-1}` for `m ≥ 1`.
pub fn ell_m(q: u32, m: u32) -> Option<u64> {
    if m == 0 {
        None
    } else {
        Some(r_m(q, m) - (1u64 << (m - 1)))
    }
}

fn validate(spec: &SigmaSpec) -> Result<(), FreqError> {
    if spec.q == 0 {
        return Err(FreqError::BadQ);
    }
    if spec.prefix.is_empty() || spec.prefix.is_all_zero() {
        return Err(FreqError::BadPrefix);
    }
    Ok(())
}

pub const MAX_BLOCKS: u32 = 40;

/// `prefix` followed by blocks `0..M`, `n + r_M` digits in total.
pub fn sigma_generate(spec: &SigmaSpec, blocks: u32) -> Result<Word, FreqError> {
    validate(spec)?;
    if blocks == 0 {
        return Err(FreqError::NoBlocks);
    }
    if blocks > MAX_BLOCKS {
        return Err(FreqError::TooManyBlocks(blocks));
    }
    let q = spec.q as usize;
    let total = spec.prefix.len() + r_m(spec.q, blocks) as usize;
    let mut digits: Vec<Digit> = Vec::with_capacity(total);
    digits.extend_from_slice(spec.prefix.digits());
    for m in 0..blocks {
        let free = 3usize << m;
        let mut rng = match spec.filler {
            Filler::Seeded(seed) => {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                rng.set_stream(u64::from(m));
                Some(rng)
            }
            _ => None,
        };
        for offset in 1..=free * q {
            let pinned = offset % q == 0 && (offset / q) % 2 == 1;
            let d = if pinned {
                Digit::Two
            } else {
                match (&spec.filler, rng.as_mut()) {
                    (Filler::AllZero, _) => Digit::Zero,
                    (Filler::AllTwo, _) => Digit::Two,
                    (Filler::Seeded(_), Some(rng)) => {
                        if rng.next_u32() & 1 == 0 {
                            Digit::Zero
                        } else {
                            Digit::Two
                        }
                    }
                    (Filler::Seeded(_), None) => unreachable!(),
                }
            };
            digits.push(d);
        }
        digits.extend(core::iter::repeat(Digit::Zero).take(2usize << m));
        digits.extend(core::iter::repeat(Digit::Two).take(1usize << m));
    }
    debug_assert_eq!(digits.len(), total);
    Ok(Word::from_digits(digits))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SigmaReport {
    pub spec: SigmaSpec,
    pub blocks: u32,
    pub word: Word,
    /// Stats of the digits after the prefix, with checkpoints
    /// `ℓ_1, r_1, ℓ_2, r_2, …, ℓ_M, r_M`.
    pub stats: FreqStats,
}

pub fn sigma_report(spec: &SigmaSpec, blocks: u32) -> Result<SigmaReport, FreqError> {
    let word = sigma_generate(spec, blocks)?;
    let mut checkpoints = Vec::with_capacity(2 * blocks as usize);
    for m in 1..=blocks {
        checkpoints.push(ell_m(spec.q, m).expect("m ≥ 1") as usize);
        checkpoints.push(r_m(spec.q, m) as usize);
    }
    let stats = freq_stats(&word.digits()[spec.prefix.len()..], &checkpoints)?;
    Ok(SigmaReport {
        spec: spec.clone(),
        blocks,
        word,
        stats,
    })
}

/// Limits of the share of 2s along `r_m` and along `ℓ_m` when
/// `M_2(m)/2^m → α`: `(1+α)/(3(q+1))` and `(1+2α)/(6q+5)`.
pub fn checkpoint_limits(q: u32, alpha: &Rational) -> Result<(Rational, Rational), FreqError> {
    check_alpha(q, alpha)?;
    let q = i64::from(q);
    let one = Rational::one();
    let two = Rational::from(2);
    let at_r = (&one + alpha)
        .checked_div(&Rational::from(3 * (q + 1)))
        .expect("q ≥ 1");
    let at_l = (&one + &(&two * alpha))
        .checked_div(&Rational::from(6 * q + 5))
        .expect("q ≥ 1");
    Ok((at_r, at_l))
}

/// `(3q + 2 - α)/(3(q+1)(6q+5))`, the difference of the two limits.
pub fn checkpoint_gap(q: u32, alpha: &Rational) -> Result<Rational, FreqError> {
    check_alpha(q, alpha)?;
    let q = i64::from(q);
    Ok((Rational::from(3 * q + 2) - alpha)
        .checked_div(&Rational::from(3 * (q + 1) * (6 * q + 5)))
        .expect("q ≥ 1"))
}

fn check_alpha(q: u32, alpha: &Rational) -> Result<(), FreqError> {
    if q == 0 {
        return Err(FreqError::BadQ);
    }
    let max = 3 * u64::from(q);
    if alpha.is_negative() || *alpha > Rational::from(max as i64) {
        return Err(FreqError::AlphaOutOfRange {
            alpha: alpha.clone(),
            max,
        });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;

    fn spec(q: u32, prefix: &str, filler: Filler) -> SigmaSpec {
        SigmaSpec {
            q,
            prefix: prefix.parse().unwrap(),
            filler,
        }
    }

    #[test]
    fn checkpoints() {
        assert_eq!(r_m(1, 0), 0);
        assert_eq!(r_m(1, 1), 6);
        assert_eq!(r_m(2, 3), 63);
        assert_eq!(ell_m(1, 1), Some(5));
        assert_eq!(ell_m(1, 0), None);
        assert_eq!(ell_m(1, 12), Some(24570 - 2048));
    }

    #[test]
    fn first_block_by_hand() {
        let word = sigma_generate(&spec(1, "2", Filler::AllZero), 1).unwrap();
        assert_eq!(word.to_string(), "2202002");
        let word = sigma_generate(&spec(2, "2", Filler::AllZero), 1).unwrap();
        // free segment 000000 with pins at offsets 2 and 6
        assert_eq!(word.to_string(), "2020002002");
        let word = sigma_generate(&spec(1, "20", Filler::AllZero), 2).unwrap();
        assert_eq!(word.to_string(), "20202002202020000022");
    }

    #[test]
    fn lengths_and_pins() {
        for filler in [Filler::AllZero, Filler::AllTwo, Filler::Seeded(7)] {
            for q in 1..=4 {
                let s = spec(q, "02", filler);
                let word = sigma_generate(&s, 5).unwrap();
                assert_eq!(word.len(), 2 + r_m(q, 5) as usize);
                let d = &word.digits()[2..];
                for m in 0..5u32 {
                    let start = r_m(q, m) as usize;
                    for k in (1..=3u64 << m).step_by(2) {
                        let pos = start + (k * u64::from(q)) as usize;
                        assert_eq!(d[pos - 1], Digit::Two);
                    }
                }
            }
        }
    }

    #[test]
    fn seeded_is_reproducible() {
        let a = sigma_generate(&spec(3, "2", Filler::Seeded(42)), 6).unwrap();
        let b = sigma_generate(&spec(3, "2", Filler::Seeded(42)), 6).unwrap();
        let c = sigma_generate(&spec(3, "2", Filler::Seeded(43)), 6).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn limits() {
        let (r, l) = checkpoint_limits(1, &Rational::ratio(3, 2)).unwrap();
        assert_eq!((r, l), (Rational::ratio(5, 12), Rational::ratio(4, 11)));
        let (r, l) = checkpoint_limits(2, &Rational::zero()).unwrap();
        assert_eq!((r, l), (Rational::ratio(1, 9), Rational::ratio(1, 17)));
        for q in 1..10u32 {
            for a in 0..=(6 * q) {
                let alpha = Rational::ratio(a, 2);
                let (r, l) = checkpoint_limits(q, &alpha).unwrap();
                let gap = checkpoint_gap(q, &alpha).unwrap();
                assert_eq!(&r - &l, gap);
                let floor = Rational::ratio(2, 3 * (q + 1) * (6 * q + 5));
                assert!(gap >= floor);
            }
        }
        assert!(checkpoint_limits(1, &Rational::from(4)).is_err());
        assert!(checkpoint_limits(1, &Rational::from(-1)).is_err());
        assert_eq!(Filler::AllTwo.alpha(5), Some(Rational::from(15)));
    }

    #[test]
    fn all_zero_ratios_approach_limits() {
        let rep = sigma_report(&spec(1, "2", Filler::AllZero), 12).unwrap();
        let last = &rep.stats.checkpoints[rep.stats.checkpoints.len() - 2..];
        assert_eq!((last[0].index, last[0].count2), (22522, 8190));
        assert_eq!((last[1].index, last[1].count2), (24570, 10238));
        let at_six = &rep.stats.checkpoints[11];
        assert_eq!(at_six.index, r_m(1, 6) as usize);
        assert!((at_six.ratio2.to_f64() - 5.0 / 12.0).abs() < 0.05);
    }

    #[test]
    fn rejects_bad_specs() {
        assert_eq!(
            sigma_generate(&spec(0, "2", Filler::AllZero), 1),
            Err(FreqError::BadQ)
        );
        assert_eq!(
            sigma_generate(&spec(1, "00", Filler::AllZero), 1),
            Err(FreqError::BadPrefix)
        );
        assert_eq!(
            sigma_generate(&spec(1, "2", Filler::AllZero), 0),
            Err(FreqError::NoBlocks)
        );
    }
}
