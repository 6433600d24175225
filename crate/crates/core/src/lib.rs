//! Exact computations on the parameter set `Λ(x) = {λ > 0 : x ∈ E_λ}` of
//! the self-similar sets `E_λ = (λ/2)·C`, `C` the middle-third Cantor set.
//!
//! Everything that can be exact is: parameters, codings, gap endpoints and
//! cylinder weights are [`Rational`]s. Logarithmic quantities (dimension
//! estimates and formulas) are returned as `f64`.

#![no_std]
#![allow(clippy::result_large_err)]

extern crate alloc;

pub mod coding;
pub mod dimension;
pub mod freq;
pub mod gaps;
pub mod param;
pub mod rational;

pub use coding::{Coding, Digit, Expansion, RejectWitness, Word};
pub use gaps::{
    length_sum, level_intervals, total_length, Gap, GapReport, LabeledInterval, LengthSum,
};
pub use param::{lambda_of, min_lambda, phi_x, window, ParamWindow};
pub use rational::Rational;
