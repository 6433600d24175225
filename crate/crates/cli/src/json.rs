//! Serialized forms of the command outputs.
//!
//! Exact values are strings `num/den`; fields ending in `_display` carry
//! rounded decimals for reading only.

use cantorparam_core::gaps::{Gap, GapReport, LabeledInterval};
use cantorparam_core::Rational;
use serde::{Deserialize, Serialize};

pub fn rational(r: &Rational) -> String {
    r.to_string()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IntervalJson {
    pub lo: String,
    pub hi: String,
    pub prefix: String,
    pub clipped: bool,
    pub lo_display: String,
    pub hi_display: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GapJson {
    pub lo: String,
    pub hi: String,
    pub level: usize,
    pub prefix: String,
    pub left_coding: String,
    pub right_coding: String,
    pub lo_display: String,
    pub hi_display: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GapReportJson {
    pub x: String,
    pub q: String,
    pub level: usize,
    pub truncated: bool,
    pub hull: Option<[String; 2]>,
    pub total_length: String,
    pub total_length_display: String,
    pub kept: Vec<IntervalJson>,
    pub removed: Vec<GapJson>,
}

/// Output of `gaps --all-levels`: one report per level `0..=depth`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GapLevelsJson {
    pub x: String,
    pub q: String,
    pub levels: Vec<GapReportJson>,
}

/// Either shape of `gaps` output, as read back by `render`.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(untagged)]
pub enum GapsDocument {
    Levels(GapLevelsJson),
    Single(GapReportJson),
}

impl GapsDocument {
    pub fn into_levels(self) -> Vec<GapReportJson> {
        match self {
            GapsDocument::Levels(l) => l.levels,
            GapsDocument::Single(r) => vec![r],
        }
    }
}

fn interval(k: &LabeledInterval, digits: usize) -> IntervalJson {
    IntervalJson {
        lo: rational(&k.lo),
        hi: rational(&k.hi),
        prefix: k.prefix.to_string(),
        clipped: k.clipped,
        lo_display: k.lo.to_decimal(digits),
        hi_display: k.hi.to_decimal(digits),
    }
}

fn gap(g: &Gap, digits: usize) -> GapJson {
    GapJson {
        lo: rational(&g.lo),
        hi: rational(&g.hi),
        level: g.level,
        prefix: g.prefix.to_string(),
        left_coding: g.left_coding().to_string(),
        right_coding: g.right_coding().to_string(),
        lo_display: g.lo.to_decimal(digits),
        hi_display: g.hi.to_decimal(digits),
    }
}

impl GapReportJson {
    pub fn from_report(report: &GapReport, total: &Rational, digits: usize) -> GapReportJson {
        GapReportJson {
            x: rational(&report.x),
            q: rational(&report.q),
            level: report.level,
            truncated: report.truncated(),
            hull: report.hull().map(|(lo, hi)| [rational(&lo), rational(&hi)]),
            total_length: rational(total),
            total_length_display: total.to_decimal(digits),
            kept: report.kept.iter().map(|k| interval(k, digits)).collect(),
            removed: report.removed.iter().map(|g| gap(g, digits)).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CodeJson {
    pub x: String,
    pub lambda: String,
    pub member: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub coding: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reject_index: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub residue: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ApproxCodeJson {
    pub x: f64,
    pub lambda: f64,
    pub exact: bool,
    pub depth: usize,
    pub accepted_to_depth: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub prefix: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reject_index: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub residue: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LambdaJson {
    pub x: String,
    pub coding: String,
    pub lambda: String,
    pub lambda_display: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DimPointJson {
    pub depth: usize,
    pub eps: String,
    pub count: u64,
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DimJson {
    pub x: String,
    pub window: [String; 2],
    pub schedule: String,
    pub tree_level: usize,
    pub slope: f64,
    pub intercept: f64,
    pub slope_stderr: f64,
    pub r_squared: f64,
    pub reference: f64,
    pub points: Vec<DimPointJson>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MoranValueJson {
    pub q: u64,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MoranJson {
    pub limit: f64,
    pub values: Vec<MoranValueJson>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ThetaRowJson {
    pub k: u32,
    pub theta: String,
    pub theta_display: String,
    pub residual: f64,
    pub sum_residual: f64,
    pub limit_gap: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ThetaJson {
    pub p: String,
    pub k0: u32,
    pub bits: u32,
    pub solutions: Vec<ThetaRowJson>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EntropyJson {
    pub p: String,
    pub entropy_dim: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub local_dim_formula: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckpointJson {
    pub index: usize,
    pub count2: usize,
    pub ratio2: String,
    pub ratio2_display: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FreqJson {
    pub length: usize,
    pub count0: usize,
    pub count2: usize,
    pub checkpoints: Vec<CheckpointJson>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SigmaRowJson {
    pub m: u32,
    pub ell_m: u64,
    pub ratio_ell: String,
    pub ratio_ell_display: String,
    pub r_m: u64,
    pub ratio_r: String,
    pub ratio_r_display: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SigmaLimitsJson {
    pub alpha: String,
    pub at_r: String,
    pub at_ell: String,
    pub gap: String,
    pub at_r_display: String,
    pub at_ell_display: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SigmaJson {
    pub q: u32,
    pub prefix: String,
    pub filler: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub blocks: u32,
    pub length: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub limits: Option<SigmaLimitsJson>,
    pub checkpoints: Vec<SigmaRowJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub digits: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SampleRunJson {
    pub seed: u64,
    pub freq2: f64,
    pub ln_measure: f64,
    pub local_dim: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub measure: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub digits: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SampleJson {
    pub p: String,
    pub k: u32,
    pub bits: u32,
    pub theta: String,
    pub theta_display: String,
    pub prefix: String,
    pub blocks: usize,
    pub local_dim_formula: f64,
    pub mean_local_dim: f64,
    pub stderr_local_dim: f64,
    pub runs: Vec<SampleRunJson>,
}
