//! Box-counting estimates and the closed-form dimension values.

pub mod theta;

use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::coding::pow3;
use crate::gaps::{GapReport, LabeledInterval};
use crate::rational::Rational;

pub use theta::{
    k0, residuals, solve_theta, solve_theta_with_precision, ThetaError, ThetaSolution,
};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum DimError {
    #[error("need at least {min} scales, got {got}")]
    TooFewScales { got: usize, min: usize },
    #[error("box counts are constant or empty; the slope is undefined")]
    DegenerateSeries,
    #[error("argument outside the domain: {0}")]
    Domain(&'static str),
    #[error(transparent)]
    Theta(#[from] ThetaError),
}

pub const MIN_SCALES: usize = 4;

/// Number of grid cells `[a + jε, a + (j+1)ε)` meeting `kept ∩ [a, b]`.
///
/// The grid spans `[a, b]` with the last cell closed, so `b` itself is
/// counted in cell `⌈(b - a)/ε⌉ - 1`. `kept` must be sorted by `lo`.
pub fn box_count_in(
    kept: &[LabeledInterval],
    window: (&Rational, &Rational),
    eps: &Rational,
) -> u64 {
    assert!(eps.is_positive(), "box size must be positive");
    let (a, b) = window;
    if b < a {
        return 0;
    }
    let cells = (b - a).checked_div(eps).expect("eps > 0").ceil();
    let last = if cells.is_zero() {
        BigInt::zero()
    } else {
        cells - 1u8
    };
    let cell_of = |v: &Rational| -> BigInt {
        let j = (v - a).floor_div(eps);
        if j > last {
            last.clone()
        } else {
            j
        }
    };

    let mut count: u64 = 0;
    let mut covered: Option<BigInt> = None;
    for iv in kept {
        let lo = if iv.lo > *a { &iv.lo } else { a };
        let hi = if iv.hi < *b { &iv.hi } else { b };
        if lo > hi {
            continue;
        }
        let mut first = cell_of(lo);
        let end = cell_of(hi);
        if let Some(c) = &covered {
            if first <= *c {
                first = c + 1u8;
            }
        }
        if first <= end {
            let added = (&end - &first + 1u8)
                .to_u64()
                .expect("cell count fits in u64");
            count += added;
            covered = Some(end);
        }
    }
    count
}

/// Clipped endpoints as `(v - a)/(b - a)` over a shared denominator.
fn normalized_spans(
    kept: &[LabeledInterval],
    window: (&Rational, &Rational),
) -> Vec<(BigInt, BigInt, BigInt)> {
    let (a, b) = window;
    let width = b - a;
    if !width.is_positive() {
        return Vec::new();
    }
    kept.iter()
        .filter_map(|iv| {
            let lo = if iv.lo > *a { &iv.lo } else { a };
            let hi = if iv.hi < *b { &iv.hi } else { b };
            if lo > hi {
                return None;
            }
            let s = (lo - a).checked_div(&width).expect("positive width");
            let t = (hi - a).checked_div(&width).expect("positive width");
            let den = s.denom().lcm(t.denom());
            let sn = s.numer() * (&den / s.denom());
            let tn = t.numer() * (&den / t.denom());
            Some((sn, tn, den))
        })
        .collect()
}

/// Same rule as [`box_count_in`] with `cells` boxes across the window.
fn count_cells(spans: &[(BigInt, BigInt, BigInt)], cells: &BigInt) -> u64 {
    let last = cells - 1u8;
    let cell_of = |n: &BigInt, den: &BigInt| -> BigInt {
        let j = (n * cells).div_floor(den);
        if j > last {
            last.clone()
        } else {
            j
        }
    };
    let mut count: u64 = 0;
    let mut covered: Option<BigInt> = None;
    for (sn, tn, den) in spans {
        let mut first = cell_of(sn, den);
        let end = cell_of(tn, den);
        if let Some(c) = &covered {
            if first <= *c {
                first = c + 1u8;
            }
        }
        if first <= end {
            count += (&end - &first + 1u8)
                .to_u64()
                .expect("cell count fits in u64");
            covered = Some(end);
        }
    }
    count
}

/// [`box_count_in`] over the hull of the report's kept set.
pub fn box_count(report: &GapReport, eps: &Rational) -> u64 {
    match report.hull() {
        Some((lo, hi)) => box_count_in(&report.kept, (&lo, &hi), eps),
        None => 0,
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoxPoint {
    pub eps: Rational,
    pub count: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoxCountSeries {
    pub window: (Rational, Rational),
    /// Strictly decreasing `eps`.
    pub points: Vec<BoxPoint>,
}

impl BoxCountSeries {
    /// Counts at `ε_d = (b - a)/3^d` for each `d` in `depths`.
    pub fn ternary(
        kept: &[LabeledInterval],
        window: (Rational, Rational),
        depths: impl IntoIterator<Item = usize>,
    ) -> BoxCountSeries {
        Self::geometric(kept, window, depths, pow3)
    }

    /// Counts at `ε_d = (b - a)/2^d`.
    pub fn binary(
        kept: &[LabeledInterval],
        window: (Rational, Rational),
        depths: impl IntoIterator<Item = usize>,
    ) -> BoxCountSeries {
        Self::geometric(kept, window, depths, |d| BigInt::one() << d)
    }

    fn geometric(
        kept: &[LabeledInterval],
        window: (Rational, Rational),
        depths: impl IntoIterator<Item = usize>,
        divisor: impl Fn(usize) -> BigInt,
    ) -> BoxCountSeries {
        let width = &window.1 - &window.0;
        let spans = normalized_spans(kept, (&window.0, &window.1));
        let points = depths
            .into_iter()
            .map(|d| {
                let cells = divisor(d);
                let eps = width
                    .checked_div(&Rational::from(cells.clone()))
                    .expect("divisor > 0");
                let count = if width.is_positive() {
                    count_cells(&spans, &cells)
                } else {
                    box_count_in(kept, (&window.0, &window.1), &eps)
                };
                BoxPoint { eps, count }
            })
            .collect();
        BoxCountSeries { window, points }
    }

    pub fn is_monotone(&self) -> bool {
        self.points
            .windows(2)
            .all(|w| w[1].eps < w[0].eps && w[1].count >= w[0].count)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DimEstimate {
    pub slope: f64,
    pub intercept: f64,
    /// Standard error of the slope; zero for collinear points.
    pub slope_stderr: f64,
    pub r_squared: f64,
    /// `ln N - (slope · ln(1/ε) + intercept)` per point.
    pub residuals: Vec<f64>,
}

/// Least-squares fit of `ln N(ε)` against `ln(1/ε)`.
pub fn dim_estimate(series: &BoxCountSeries) -> Result<DimEstimate, DimError> {
    let n = series.points.len();
    if n < MIN_SCALES {
        return Err(DimError::TooFewScales {
            got: n,
            min: MIN_SCALES,
        });
    }
    if series
        .points
        .iter()
        .any(|p| p.count == 0 || !p.eps.is_positive())
    {
        return Err(DimError::DegenerateSeries);
    }
    if series
        .points
        .iter()
        .all(|p| p.count == series.points[0].count)
    {
        return Err(DimError::DegenerateSeries);
    }
    let xs: Vec<f64> = series.points.iter().map(|p| -p.eps.ln()).collect();
    let ys: Vec<f64> = series
        .points
        .iter()
        .map(|p| libm::log(p.count as f64))
        .collect();
    let nf = n as f64;
    let mx = xs.iter().sum::<f64>() / nf;
    let my = ys.iter().sum::<f64>() / nf;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let syy: f64 = ys.iter().map(|y| (y - my) * (y - my)).sum();
    if sxx == 0.0 {
        return Err(DimError::DegenerateSeries);
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let residuals: Vec<f64> = xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| y - (slope * x + intercept))
        .collect();
    let sse: f64 = residuals.iter().map(|r| r * r).sum();
    let r_squared = if syy == 0.0 { 1.0 } else { 1.0 - sse / syy };
    let slope_stderr = if n > 2 {
        libm::sqrt(sse / (nf - 2.0) / sxx)
    } else {
        0.0
    };
    Ok(DimEstimate {
        slope,
        intercept,
        slope_stderr,
        r_squared,
        residuals,
    })
}

/// `(q - 1) ln 2 / ((q + 1) ln 3)`.
pub fn moran_lower_bound(q: u64) -> Result<f64, DimError> {
    if q == 0 {
        return Err(DimError::Domain("q must be at least 1"));
    }
    let q = q as f64;
    Ok((q - 1.0) * core::f64::consts::LN_2 / ((q + 1.0) * LN_3))
}

pub const LN_3: f64 = 1.098_612_288_668_109_8;

/// `ln 2 / ln 3`, the dimension of the middle-third Cantor set.
pub fn cantor_dim() -> f64 {
    core::f64::consts::LN_2 / LN_3
}

/// `h(p, 1 - p) / ln 3` with `h(p, 1-p) = -p ln p - (1-p) ln(1-p)`.
pub fn entropy_dim(p: f64) -> Result<f64, DimError> {
    if !(p > 0.0 && p < 1.0) {
        return Err(DimError::Domain("p must lie strictly between 0 and 1"));
    }
    let h = -p * libm::log(p) - (1.0 - p) * libm::log1p(-p);
    Ok(h / LN_3)
}

/// Finite-`k` local dimension of the block measure,
/// `-[p ln(1-θ) + (1-p) ln θ]/ln 3 + ln(1-θ^k)/(k ln 3)` with `θ = θ_k(p)`.
pub fn local_dim_formula(p: &Rational, k: u32) -> Result<f64, DimError> {
    let sol = solve_theta(p, k)?;
    Ok(local_dim_at(p.to_f64(), sol.theta_f64(), k))
}

pub(crate) fn local_dim_at(p: f64, theta: f64, k: u32) -> f64 {
    let cross = p * libm::log1p(-theta) + (1.0 - p) * libm::log(theta);
    let correction = libm::log1p(-libm::pow(theta, k as f64)) / k as f64;
    (-cross + correction) / LN_3
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gaps::level_intervals;

    fn r(s: &str) -> Rational {
        s.parse().unwrap()
    }

    #[test]
    fn box_count_examples() {
        let rep = level_intervals(&r("1/2"), &r("2"), 0).unwrap();
        assert_eq!(box_count(&rep, &r("1/2")), 1);
        let rep = level_intervals(&r("1/2"), &r("2"), 1).unwrap();
        assert_eq!(box_count(&rep, &r("1/8")), 4);
        assert_eq!(box_count_in(&[], (&r("1"), &r("3/2")), &r("1/8")), 0);
    }

    #[test]
    fn box_count_brute_force() {
        let rep = level_intervals(&r("1/2"), &r("2"), 3).unwrap();
        let (a, b) = rep.hull().unwrap();
        for denom in [5u32, 16, 27, 100] {
            let eps = (&b - &a)
                .checked_div(&Rational::from(denom as i64))
                .unwrap();
            let mut brute = 0;
            for j in 0..denom {
                let c_lo = &a + &(&eps * &Rational::from(j as i64));
                let c_hi = &c_lo + &eps;
                let last = j + 1 == denom;
                let hit = rep
                    .kept
                    .iter()
                    .any(|iv| iv.lo <= c_hi && (iv.hi >= c_lo) && (last || iv.lo < c_hi));
                if hit {
                    brute += 1;
                }
            }
            assert_eq!(box_count(&rep, &eps), brute, "denom {denom}");
        }
    }

    #[test]
    fn series_matches_direct_counts() {
        let rep = level_intervals(&r("1/2"), &r("3/2"), 9).unwrap();
        for window in [
            (r("1"), r("3/2")),
            (r("77/60"), r("83/60")),
            (r("11/10"), r("13/10")),
        ] {
            let tern = BoxCountSeries::ternary(&rep.kept, window.clone(), 1..=7);
            let bin = BoxCountSeries::binary(&rep.kept, window.clone(), 1..=10);
            for p in tern.points.iter().chain(&bin.points) {
                assert_eq!(
                    p.count,
                    box_count_in(&rep.kept, (&window.0, &window.1), &p.eps)
                );
            }
        }
    }

    #[test]
    fn analytic_cantor_series() {
        let series = BoxCountSeries {
            window: (r("0"), r("1")),
            points: (4..=12)
                .map(|n| BoxPoint {
                    eps: Rational::ratio(1, pow3(n)),
                    count: 1 << n,
                })
                .collect(),
        };
        let est = dim_estimate(&series).unwrap();
        assert!((est.slope - cantor_dim()).abs() < 1e-12);
        assert!(est.residuals.iter().all(|r| r.abs() < 1e-9));
        assert!((est.r_squared - 1.0).abs() < 1e-12);
    }

    #[test]
    fn regression_errors() {
        let flat = BoxCountSeries {
            window: (r("0"), r("1")),
            points: (1..=5)
                .map(|n| BoxPoint {
                    eps: Rational::ratio(1, pow3(n)),
                    count: 7,
                })
                .collect(),
        };
        assert_eq!(dim_estimate(&flat), Err(DimError::DegenerateSeries));
        let short = BoxCountSeries {
            window: flat.window.clone(),
            points: flat.points[..3].to_vec(),
        };
        assert_eq!(
            dim_estimate(&short),
            Err(DimError::TooFewScales { got: 3, min: 4 })
        );
    }

    #[test]
    fn hull_window_estimate() {
        let depths = 6..=10;
        let rep = level_intervals(&r("1/2"), &r("2"), 13).unwrap();
        let series = BoxCountSeries::ternary(&rep.kept, (r("1"), r("3/2")), depths);
        assert!(series.is_monotone());
        let est = dim_estimate(&series).unwrap();
        assert!((0.58..=0.68).contains(&est.slope), "slope {}", est.slope);
    }

    #[test]
    fn moran_values() {
        assert_eq!(moran_lower_bound(1).unwrap(), 0.0);
        let expected = core::f64::consts::LN_2 / (2.0 * LN_3);
        assert!((moran_lower_bound(3).unwrap() - expected).abs() < 1e-15);
        assert!((moran_lower_bound(3).unwrap() - 0.31547).abs() < 1e-5);
        assert!(moran_lower_bound(0).is_err());
        let far = moran_lower_bound(1 << 40).unwrap();
        assert!(far < cantor_dim() && cantor_dim() - far < 1e-11);
    }

    #[test]
    fn entropy_values() {
        assert!((entropy_dim(0.5).unwrap() - cantor_dim()).abs() < 1e-15);
        let quarter = (0.25 * libm::log(4.0) + 0.75 * libm::log(4.0 / 3.0)) / LN_3;
        assert!((entropy_dim(0.25).unwrap() - quarter).abs() < 1e-15);
        assert!((entropy_dim(0.25).unwrap() - 0.511_86).abs() < 1e-5);
        for p in [0.1, 0.3, 0.37, 0.49] {
            assert!((entropy_dim(p).unwrap() - entropy_dim(1.0 - p).unwrap()).abs() < 1e-15);
        }
        assert!(entropy_dim(0.0).is_err());
        assert!(entropy_dim(1.0).is_err());
        assert!(entropy_dim(f64::NAN).is_err());
    }

    #[test]
    fn local_dim_examples() {
        let v = local_dim_formula(&r("1/2"), 20).unwrap();
        assert!((v - cantor_dim()).abs() < 1e-4);
        let v = local_dim_formula(&r("1/4"), 40).unwrap();
        assert!((v - entropy_dim(0.25).unwrap()).abs() < 1e-6);
        for p in ["0.1", "0.25", "1/3", "0.5", "0.75", "0.9"] {
            let p = r(p);
            let start = k0(&p).unwrap();
            for k in start..start + 30 {
                let v = local_dim_formula(&p, k).unwrap();
                assert!(v <= cantor_dim() + 1e-15);
                assert!(v <= entropy_dim(p.to_f64()).unwrap() + 1e-15);
            }
        }
    }
}
