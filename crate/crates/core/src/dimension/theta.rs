//! Block probabilities for the frequency-`p` tree measure.
//!
//! For a target frequency `p ∈ (0, 1)` and block length `k`, `θ_k` is the
//! root in `(0, 1)` of `1 + θ + ... + θ^{k-1} = 1/p`, equivalently
//! `(1 - θ)/(1 - θ^k) = p`. The left side is strictly increasing on
//! `(0, 1)`, runs from 1 to `k`, and so has a root there exactly when
//! `k > 1/p`; every `k ≥ ⌊1/p⌋ + 2` qualifies.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::rational::{fraction_to_f64, Rational};

pub const DEFAULT_THETA_BITS: u32 = 128;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ThetaError {
    #[error("probability must lie strictly between 0 and 1, got {0}")]
    Domain(Rational),
    #[error("block length {k} is below k0 = {k0}; no root in (0, 1) is guaranteed")]
    NoRoot { k: u32, k0: u32 },
    #[error("precision must be between 8 and 4096 bits, got {0}")]
    Precision(u32),
}

fn check_probability(p: &Rational) -> Result<(), ThetaError> {
    if p.is_positive() && *p < Rational::one() {
        Ok(())
    } else {
        Err(ThetaError::Domain(p.clone()))
    }
}

/// `⌊1/p⌋ + 2`, the smallest block length used for frequency `p`.
pub fn k0(p: &Rational) -> Result<u32, ThetaError> {
    check_probability(p)?;
    let floor = p.recip().expect("p > 0").floor();
    let floor: u32 = u32::try_from(floor).map_err(|_| ThetaError::Domain(p.clone()))?;
    floor
        .checked_add(2)
        .ok_or_else(|| ThetaError::Domain(p.clone()))
}

#[derive(Debug, Clone, PartialEq)]
pub struct ThetaSolution {
    pub p: Rational,
    pub k: u32,
    /// Dyadic approximation `a / 2^bits`, within `2^-bits` of the true root.
    pub theta: Rational,
    pub bits: u32,
    /// `|(1 - θ)/(1 - θ^k) - p|`, evaluated exactly at `theta`.
    pub residual: f64,
    /// `|1 + θ + ... + θ^{k-1} - 1/p|`, evaluated exactly at `theta`.
    pub sum_residual: f64,
}

impl ThetaSolution {
    pub fn theta_f64(&self) -> f64 {
        self.theta.to_f64()
    }
}

pub fn solve_theta(p: &Rational, k: u32) -> Result<ThetaSolution, ThetaError> {
    solve_theta_with_precision(p, k, DEFAULT_THETA_BITS)
}

/// Bisection for `θ_k` over dyadic rationals `a / 2^bits`.
///
/// Signs are decided in exact integer arithmetic. With `p = u/v` and
/// `θ = a/2^B < 1`, `S(θ) - 1/p` has the sign of `u(1 - θ^k) - v(1 - θ)`,
/// i.e. of `u(2^{Bk} - a^k) - v·2^{B(k-1)}(2^B - a)`.
pub fn solve_theta_with_precision(
    p: &Rational,
    k: u32,
    bits: u32,
) -> Result<ThetaSolution, ThetaError> {
    let k_min = k0(p)?;
    if k < k_min {
        return Err(ThetaError::NoRoot { k, k0: k_min });
    }
    if !(8..=4096).contains(&bits) {
        return Err(ThetaError::Precision(bits));
    }
    let u = p.numer();
    let v = p.denom();
    let scale = BigInt::one() << bits;
    let top = BigInt::one() << (bits as usize * (k as usize - 1));
    let full = &top << bits as usize;
    let excess = |a: &BigInt| -> BigInt { u * (&full - a.pow(k)) - v * &top * (&scale - a) };

    let mut lo = BigInt::zero();
    let mut hi = scale.clone();
    let mut exact = None;
    while &hi - &lo > BigInt::one() {
        let mid: BigInt = (&lo + &hi) >> 1;
        let e = excess(&mid);
        if e.is_zero() {
            exact = Some(mid);
            break;
        }
        if e.is_negative() {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let numer = match exact {
        Some(a) => a,
        None => {
            // keep the endpoint with the smaller defect, never θ = 1
            if hi == scale || excess(&lo).abs() <= excess(&hi).abs() {
                lo
            } else {
                hi
            }
        }
    };
    let theta = Rational::ratio(numer, scale);
    let (residual, sum_residual) = residuals(p, k, &theta);
    Ok(ThetaSolution {
        p: p.clone(),
        k,
        theta,
        bits,
        residual,
        sum_residual,
    })
}

/// Defects of both defining equations at `theta`, computed exactly.
///
/// With `p = u/v` and `θ = n/d`, both share the numerator
/// `E = u(d^k - n^k) - v·d^{k-1}(d - n)`: the product form is
/// `|E| / (v(d^k - n^k))` and the sum form `|E| / (u·d^{k-1}(d - n))`.
pub fn residuals(p: &Rational, k: u32, theta: &Rational) -> (f64, f64) {
    let (u, v) = (p.numer(), p.denom());
    let (n, d) = (theta.numer(), theta.denom());
    let d_k1 = d.pow(k - 1);
    let gap_k = &d_k1 * d - n.pow(k);
    let gap_1 = d - n;
    let e = (u * &gap_k - v * &d_k1 * &gap_1).abs();
    let product_form = fraction_to_f64(&e, &(v * gap_k));
    let sum_form = fraction_to_f64(&e, &(u * d_k1 * gap_1));
    (product_form, sum_form)
}
