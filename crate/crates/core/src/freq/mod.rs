//! Digit frequencies, the oscillating-frequency sequences and the block
//! tree measure.

pub mod sigma;
pub mod tree;

use alloc::vec::Vec;

use crate::coding::{Digit, Word};
use crate::rational::Rational;

pub use sigma::{
    checkpoint_gap, checkpoint_limits, ell_m, r_m, sigma_generate, Filler, SigmaReport, SigmaSpec,
};
pub use tree::{
    cylinder_measure, empirical_local_dim, log_cylinder_measure, sample_tree, TreeError,
    TreeMeasureSpec,
};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FreqError {
    #[error("checkpoint {index} is outside 1..={length}")]
    CheckpointOutOfRange { index: usize, length: usize },
    #[error("q must be at least 1")]
    BadQ,
    #[error("alpha = {alpha} must lie in [0, 3q] = [0, {max}]")]
    AlphaOutOfRange { alpha: Rational, max: u64 },
    #[error("block count M must be at least 1")]
    NoBlocks,
    #[error("block count {0} exceeds the supported maximum")]
    TooManyBlocks(u32),
    #[error("prefix must be nonempty and not all zeros")]
    BadPrefix,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Checkpoint {
    pub index: usize,
    pub count2: usize,
    /// `count2 / index`.
    pub ratio2: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FreqStats {
    pub length: usize,
    pub count0: usize,
    pub count2: usize,
    pub checkpoints: Vec<Checkpoint>,
}

/// Exact counts of each digit and the share of 2s in each prefix
/// `digits[..index]`.
pub fn freq_stats(digits: &[Digit], checkpoints: &[usize]) -> Result<FreqStats, FreqError> {
    let length = digits.len();
    if let Some(&index) = checkpoints.iter().find(|&&i| i == 0 || i > length) {
        return Err(FreqError::CheckpointOutOfRange { index, length });
    }
    let mut running = Vec::with_capacity(length + 1);
    running.push(0usize);
    let mut twos = 0;
    for d in digits {
        if *d == Digit::Two {
            twos += 1;
        }
        running.push(twos);
    }
    let checkpoints = checkpoints
        .iter()
        .map(|&index| Checkpoint {
            index,
            count2: running[index],
            ratio2: Rational::ratio(running[index] as u64, index as u64),
        })
        .collect();
    Ok(FreqStats {
        length,
        count0: length - twos,
        count2: twos,
        checkpoints,
    })
}

/// [`freq_stats`] over a whole [`Word`].
pub fn word_stats(word: &Word, checkpoints: &[usize]) -> Result<FreqStats, FreqError> {
    freq_stats(word.digits(), checkpoints)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    #[test]
    fn examples() {
        let s = word_stats(&w("2020"), &[2, 4]).unwrap();
        let ratios: Vec<_> = s.checkpoints.iter().map(|c| c.ratio2.clone()).collect();
        assert_eq!(ratios, [Rational::ratio(1, 2), Rational::ratio(1, 2)]);
        assert_eq!((s.count0, s.count2, s.length), (2, 2, 4));
        let s = word_stats(&w("2222"), &[4]).unwrap();
        assert_eq!(s.checkpoints[0].ratio2, Rational::one());
    }

    #[test]
    fn bad_checkpoints() {
        assert_eq!(
            word_stats(&w("20"), &[3]),
            Err(FreqError::CheckpointOutOfRange {
                index: 3,
                length: 2
            })
        );
        assert!(word_stats(&w("20"), &[0]).is_err());
        assert!(word_stats(&w(""), &[]).unwrap().checkpoints.is_empty());
    }
}
