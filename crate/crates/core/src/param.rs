//! The parameter set `Λ(x) = {λ > 0 : x ∈ E_λ}` and its coding map.
//!
//! `E_λ = (λ/2)·C` where `C` is the middle-third Cantor set, so `λ ∈ Λ(x)`
//! iff `2x/λ ∈ C`. The coding map sends `λ` to the `{0, 2}` coding of
//! `2x/λ`; it is a strictly decreasing bijection onto `{0, 2}^N`.

use alloc::vec::Vec;

use crate::coding::{self, Coding, Digit, Expansion, Word};
use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ParamError {
    #[error("x must be positive, got {0}")]
    NonPositiveX(Rational),
    #[error("lambda must be positive, got {0}")]
    NonPositiveLambda(Rational),
    #[error("coding 0^∞ corresponds to λ = ∞")]
    ZeroCoding,
    #[error("lambda {lambda} is below min Λ(x) = {min}")]
    BelowMinimum { lambda: Rational, min: Rational },
    #[error("prefix {0} is all zeros; its window is unbounded")]
    AllZeroPrefix(Word),
}

fn check_x(x: &Rational) -> Result<(), ParamError> {
    if x.is_positive() {
        Ok(())
    } else {
        Err(ParamError::NonPositiveX(x.clone()))
    }
}

/// `λ = 2x / Σ c_i 3^{-i}`: the unique parameter whose coding of `x` is `c`.
pub fn lambda_of(x: &Rational, c: &Coding) -> Result<Rational, ParamError> {
    check_x(x)?;
    let value = c.eval();
    if value.is_zero() {
        return Err(ParamError::ZeroCoding);
    }
    Ok((x * Rational::from_integer(2))
        .checked_div(&value)
        .expect("nonzero value"))
}

/// The coding of `x` with respect to `λ`, or a certificate that
/// `λ ∉ Λ(x)`.
pub fn phi_x(x: &Rational, lambda: &Rational) -> Result<Expansion, ParamError> {
    check_x(x)?;
    if !lambda.is_positive() {
        return Err(ParamError::NonPositiveLambda(lambda.clone()));
    }
    let min = min_lambda(x)?;
    if *lambda < min {
        return Err(ParamError::BelowMinimum {
            lambda: lambda.clone(),
            min,
        });
    }
    let y = (x * Rational::from_integer(2))
        .checked_div(lambda)
        .expect("positive lambda");
    Ok(coding::ternary_expand(&y).expect("2x/λ ∈ (0, 1] when λ ≥ 2x"))
}

pub fn is_member(x: &Rational, lambda: &Rational) -> Result<bool, ParamError> {
    match phi_x(x, lambda) {
        Ok(e) => Ok(e.is_accepted()),
        Err(ParamError::BelowMinimum { .. }) => Ok(false),
        Err(e) => Err(e),
    }
}

/// `min Λ(x) = 2x`, attained by the coding `2^∞`.
pub fn min_lambda(x: &Rational) -> Result<Rational, ParamError> {
    check_x(x)?;
    Ok(x * Rational::from_integer(2))
}

/// The parameters whose codings start with `prefix` fill `[beta, gamma]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParamWindow {
    /// `λ` of `prefix 2^∞`.
    pub beta: Rational,
    /// `λ` of `prefix 0^∞`.
    pub gamma: Rational,
    pub prefix: Word,
}

impl ParamWindow {
    pub fn n(&self) -> usize {
        self.prefix.len()
    }

    pub fn width(&self) -> Rational {
        &self.gamma - &self.beta
    }

    pub fn contains(&self, lambda: &Rational) -> bool {
        self.beta <= *lambda && *lambda <= self.gamma
    }
}

pub fn window(x: &Rational, prefix: &Word) -> Result<ParamWindow, ParamError> {
    check_x(x)?;
    if prefix.is_all_zero() {
        return Err(ParamError::AllZeroPrefix(prefix.clone()));
    }
    Ok(ParamWindow {
        beta: lambda_of(x, &prefix.complete(Digit::Two))?,
        gamma: lambda_of(x, &prefix.complete(Digit::Zero))?,
        prefix: prefix.clone(),
    })
}

/// Result of the floating-point membership test.
#[derive(Debug, Clone, PartialEq)]
pub enum ApproxMembership {
    /// No removed middle third was hit in the first `depth` digits; this is
    /// evidence, not a proof, of membership.
    AcceptedToDepth {
        depth: usize,
        prefix: Word,
    },
    /// The residue left `[0,1/3] ∪ [2/3,1]` at the given 1-based index, up
    /// to floating-point error.
    RejectedAt {
        index: usize,
        residue: f64,
    },
    BelowMinimum,
}

/// Membership test for real (e.g. irrational) inputs known only to `f64`
/// accuracy. Only rational inputs to [`phi_x`] give exact answers.
pub fn phi_x_approx(x: f64, lambda: f64, depth: usize) -> ApproxMembership {
    let mut y = 2.0 * x / lambda;
    if y.is_nan() || y > 1.0 {
        return ApproxMembership::BelowMinimum;
    }
    let mut digits = Vec::with_capacity(depth);
    for i in 0..depth {
        if y <= 1.0 / 3.0 {
            digits.push(Digit::Zero);
            y *= 3.0;
        } else if y >= 2.0 / 3.0 {
            digits.push(Digit::Two);
            y = 3.0 * y - 2.0;
        } else {
            return ApproxMembership::RejectedAt {
                index: i + 1,
                residue: y,
            };
        }
    }
    ApproxMembership::AcceptedToDepth {
        depth,
        prefix: Word::from_digits(digits),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coding::RejectWitness;

    fn r(s: &str) -> Rational {
        s.parse().unwrap()
    }

    fn c(s: &str) -> Coding {
        s.parse().unwrap()
    }

    #[test]
    fn lambda_from_coding() {
        let x = r("1/2");
        assert_eq!(lambda_of(&x, &c("(2)")).unwrap(), r("1"));
        assert_eq!(lambda_of(&x, &c("2(0)")).unwrap(), r("3/2"));
        assert_eq!(lambda_of(&x, &c("22(0)")).unwrap(), r("9/8"));
        assert_eq!(lambda_of(&x, &c("(0)")), Err(ParamError::ZeroCoding));
        assert!(matches!(
            lambda_of(&r("0"), &c("(2)")),
            Err(ParamError::NonPositiveX(_))
        ));
    }

    #[test]
    fn coding_from_lambda() {
        let x = r("1/2");
        assert_eq!(
            phi_x(&x, &r("4/3")).unwrap(),
            Expansion::Accepted(c("(20)"))
        );
        assert_eq!(phi_x(&x, &r("1")).unwrap(), Expansion::Accepted(c("(2)")));
        assert_eq!(
            phi_x(&x, &r("6/5")).unwrap(),
            Expansion::Rejected(RejectWitness {
                index: 2,
                residue: r("1/2")
            })
        );
        assert!(matches!(
            phi_x(&x, &r("9/10")),
            Err(ParamError::BelowMinimum { .. })
        ));
        assert!(matches!(
            phi_x(&x, &r("-1")),
            Err(ParamError::NonPositiveLambda(_))
        ));
        assert_eq!(is_member(&x, &r("9/10")), Ok(false));
        assert_eq!(is_member(&x, &r("9/7")), Ok(true));
    }

    #[test]
    fn minimum() {
        assert_eq!(min_lambda(&r("1/2")).unwrap(), r("1"));
        assert_eq!(min_lambda(&r("1")).unwrap(), r("2"));
        assert_eq!(min_lambda(&r("3/7")).unwrap(), r("6/7"));
        let x = r("3/7");
        assert_eq!(
            phi_x(&x, &r("6/7")).unwrap(),
            Expansion::Accepted(Coding::twos())
        );
    }

    #[test]
    fn windows() {
        let x = r("1/2");
        let w = window(&x, &"2".parse().unwrap()).unwrap();
        assert_eq!((w.beta, w.gamma), (r("1"), r("3/2")));
        let w = window(&x, &"22".parse().unwrap()).unwrap();
        assert_eq!((w.beta, w.gamma), (r("1"), r("9/8")));
        let w = window(&x, &"20".parse().unwrap()).unwrap();
        assert_eq!((w.beta, w.gamma), (r("9/7"), r("3/2")));
        assert!(matches!(
            window(&x, &"000".parse().unwrap()),
            Err(ParamError::AllZeroPrefix(_))
        ));
    }

    #[test]
    fn floating_front_end() {
        let pi = core::f64::consts::PI;
        match phi_x_approx(3.0 * pi / 8.0, pi, 20) {
            ApproxMembership::AcceptedToDepth { depth, prefix } => {
                assert_eq!(depth, 20);
                assert_eq!(prefix, c("(20)").prefix(20));
            }
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(
            phi_x_approx(0.5, 1.2, 30),
            ApproxMembership::RejectedAt { index: 2, .. }
        ));
        assert_eq!(phi_x_approx(0.5, 0.9, 30), ApproxMembership::BelowMinimum);
    }
}
