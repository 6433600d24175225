use std::ffi::OsString;
use std::io::{Read, Write};
use std::path::PathBuf;

use cantorparam_core::coding::{Coding, Expansion, Word};
use cantorparam_core::dimension::{
    self, dim_estimate, entropy_dim, local_dim_formula, moran_lower_bound, theta, BoxCountSeries,
};
use cantorparam_core::freq::{self, sigma, tree, Filler, SigmaSpec, TreeMeasureSpec};
use cantorparam_core::gaps::{level_intervals, total_length};
use cantorparam_core::param::{self, phi_x_approx, ApproxMembership};
use cantorparam_core::Rational;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::json::*;
use crate::svg::{render_levels, RenderStyle};

/// Default seed for stochastic commands when `--seed` is not given.
pub const DEFAULT_SEED: u64 = 0;

#[derive(Debug, Parser)]
#[command(
    name = "cantorparam",
    version,
    about = "Exact computations on the parameter set of a point in scaled middle-third Cantor sets"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Output format; `svg` is available for `gaps` and `render` only.
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,

    /// Write output to this file instead of stdout.
    #[arg(long, short = 'o', global = true)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Svg,
    Text,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Coding of x with respect to λ, or a certificate that λ is not a member.
    Code(CodeArgs),
    /// The parameter λ whose coding of x is the given sequence.
    Lambda(LambdaArgs),
    /// Level-n approximation of the parameter set inside [2x, q].
    Gaps(GapsArgs),
    /// SVG figure from the JSON written by `gaps`.
    Render(RenderArgs),
    /// Box-counting dimension estimate over a window.
    Dim(DimArgs),
    /// (q-1) ln 2 / ((q+1) ln 3).
    Moran(MoranArgs),
    /// Root θ_k of 1 + θ + ... + θ^{k-1} = 1/p.
    Theta(ThetaArgs),
    /// h(p, 1-p)/ln 3, optionally with the finite-k local dimension.
    Entropy(EntropyArgs),
    /// Sequence with oscillating frequency of 2s and its checkpoint table.
    Sigma(SigmaArgs),
    /// Digit counts and frequencies of a word or coding.
    Freq(FreqArgs),
    /// Words sampled from the block tree measure.
    Sample(SampleArgs),
}

fn parse_rational(s: &str) -> Result<Rational, String> {
    s.parse().map_err(|e| format!("{e}"))
}

fn parse_word(s: &str) -> Result<Word, String> {
    s.parse().map_err(|e| format!("{e}"))
}

fn parse_coding(s: &str) -> Result<Coding, String> {
    s.parse().map_err(|e| format!("{e}"))
}

#[derive(Debug, Args)]
pub struct CodeArgs {
    /// Point x > 0, as `a/b` or an exact decimal.
    #[arg(long, value_parser = parse_rational)]
    pub x: Rational,
    #[arg(long, value_parser = parse_rational)]
    pub lambda: Rational,
    /// Treat x and λ as floating-point values and expand to this depth.
    #[arg(long)]
    pub float_depth: Option<usize>,
}

#[derive(Debug, Args)]
pub struct LambdaArgs {
    #[arg(long, value_parser = parse_rational)]
    pub x: Rational,
    /// Coding such as `2(0)` or `(20)`.
    #[arg(long, value_parser = parse_coding)]
    pub coding: Coding,
    #[arg(long, default_value_t = 4)]
    pub digits: usize,
}

#[derive(Debug, Args)]
pub struct GapsArgs {
    #[arg(long, value_parser = parse_rational)]
    pub x: Rational,
    /// Upper end of the parameter range; must exceed 2x.
    #[arg(long, value_parser = parse_rational)]
    pub q: Rational,
    #[arg(long, default_value_t = 2)]
    pub depth: usize,
    /// Emit every level 0..=depth instead of the last one.
    #[arg(long)]
    pub all_levels: bool,
    /// Decimal digits in `*_display` fields.
    #[arg(long, default_value_t = 4)]
    pub digits: usize,
    #[arg(long, default_value_t = 800)]
    pub width: u32,
    #[arg(long, default_value_t = 320)]
    pub height: u32,
}

#[derive(Debug, Args)]
pub struct RenderArgs {
    /// JSON from `gaps`; `-` reads stdin.
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long, default_value_t = 800)]
    pub width: u32,
    #[arg(long, default_value_t = 320)]
    pub height: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Schedule {
    /// ε_d = width / 3^d
    Ternary,
    /// ε_d = width / 2^d
    Binary,
}

#[derive(Debug, Args)]
pub struct DimArgs {
    #[arg(long, value_parser = parse_rational)]
    pub x: Rational,
    /// Window lower end; defaults to 2x.
    #[arg(long, value_parser = parse_rational, conflicts_with_all = ["center", "radius"])]
    pub lo: Option<Rational>,
    /// Window upper end; defaults to 3x.
    #[arg(long, value_parser = parse_rational, conflicts_with_all = ["center", "radius"])]
    pub hi: Option<Rational>,
    /// Window center; use with --radius.
    #[arg(long, value_parser = parse_rational, requires = "radius")]
    pub center: Option<Rational>,
    #[arg(long, value_parser = parse_rational, requires = "center")]
    pub radius: Option<Rational>,
    #[arg(long, default_value_t = 6)]
    pub depth_min: usize,
    #[arg(long, default_value_t = 14)]
    pub depth_max: usize,
    #[arg(long, value_enum, default_value = "ternary")]
    pub schedule: Schedule,
    /// Gap-tree level used for the kept set; defaults to three levels
    /// below the finest box size.
    #[arg(long)]
    pub tree_level: Option<usize>,
}

#[derive(Debug, Args)]
pub struct MoranArgs {
    #[arg(long)]
    pub q: u64,
    /// Emit every value for 1..=q.
    #[arg(long)]
    pub table: bool,
}

#[derive(Debug, Args)]
pub struct ThetaArgs {
    #[arg(long, value_parser = parse_rational)]
    pub p: Rational,
    /// Block length; defaults to k0 = floor(1/p) + 2.
    #[arg(long)]
    pub k: Option<u32>,
    /// Solve for every block length k..=k_max.
    #[arg(long)]
    pub k_max: Option<u32>,
    #[arg(long, default_value_t = theta::DEFAULT_THETA_BITS)]
    pub bits: u32,
    #[arg(long, default_value_t = 12)]
    pub digits: usize,
}

#[derive(Debug, Args)]
pub struct EntropyArgs {
    #[arg(long, value_parser = parse_rational)]
    pub p: Rational,
    /// Also evaluate the local dimension of the block measure with this k.
    #[arg(long)]
    pub k: Option<u32>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FillerArg {
    Zero,
    Two,
    Seeded,
}

#[derive(Debug, Args)]
pub struct SigmaArgs {
    #[arg(long, default_value_t = 1)]
    pub q: u32,
    /// Fixed prefix, not all zeros.
    #[arg(long, value_parser = parse_word, default_value = "2")]
    pub prefix: Word,
    /// Number of blocks M.
    #[arg(long, default_value_t = 12)]
    pub blocks: u32,
    #[arg(long, value_enum, default_value = "zero")]
    pub filler: FillerArg,
    /// Seed for `--filler seeded`.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Leave the digit string out of the output.
    #[arg(long)]
    pub no_digits: bool,
    #[arg(long, default_value_t = 5)]
    pub display_digits: usize,
}

#[derive(Debug, Args)]
pub struct FreqArgs {
    /// Finite word over {0, 2}.
    #[arg(long, value_parser = parse_word, conflicts_with = "coding", required_unless_present = "coding")]
    pub word: Option<Word>,
    /// Eventually periodic coding; analysed on its first --length digits.
    #[arg(long, value_parser = parse_coding, requires = "length")]
    pub coding: Option<Coding>,
    #[arg(long)]
    pub length: Option<usize>,
    /// Comma-separated prefix lengths; defaults to the full length.
    #[arg(long, value_delimiter = ',')]
    pub checkpoints: Vec<usize>,
    #[arg(long, default_value_t = 5)]
    pub display_digits: usize,
}

#[derive(Debug, Args)]
pub struct SampleArgs {
    #[arg(long, value_parser = parse_rational)]
    pub p: Rational,
    /// Block length; defaults to k0 = floor(1/p) + 2.
    #[arg(long)]
    pub k: Option<u32>,
    #[arg(long, value_parser = parse_word, default_value = "2")]
    pub prefix: Word,
    #[arg(long, default_value_t = 1000)]
    pub blocks: usize,
    /// Base seed; run i uses seed + i.
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long, default_value_t = 1)]
    pub repeat: u64,
    #[arg(long, default_value_t = theta::DEFAULT_THETA_BITS)]
    pub bits: u32,
    /// Include the exact cylinder measure as `num/den`.
    #[arg(long)]
    pub exact: bool,
    /// Leave the sampled digits out of the output.
    #[arg(long)]
    pub no_digits: bool,
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Domain(String),
    #[error("{0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Domain(_) | CliError::Io(_) => 1,
        }
    }
}

fn domain(e: impl std::fmt::Display) -> CliError {
    CliError::Domain(e.to_string())
}

/// Parses `argv` (including the program name), runs the command and
/// returns the process exit code.
pub fn run<I, T>(argv: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 {
                stdout.write_all(text.as_bytes())
            } else {
                stderr.write_all(text.as_bytes())
            };
            return code;
        }
    };
    match execute(&cli, stderr).and_then(|out| emit(&cli, &out, stdout)) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.exit_code()
        }
    }
}

fn emit(cli: &Cli, out: &str, stdout: &mut dyn Write) -> Result<(), CliError> {
    match &cli.output {
        Some(path) => std::fs::write(path, out)?,
        None => stdout.write_all(out.as_bytes())?,
    }
    Ok(())
}

fn format_of(cli: &Cli) -> Format {
    match (&cli.command, cli.format) {
        (_, Some(f)) => f,
        (Command::Render(_), None) => Format::Svg,
        _ => Format::Json,
    }
}

fn serialize<T: Serialize>(value: &T, format: Format) -> Result<String, CliError> {
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(value).expect("serializable output");
            s.push('\n');
            Ok(s)
        }
        Format::Text => {
            let value = serde_json::to_value(value).expect("serializable output");
            let mut s = String::new();
            flatten("", &value, &mut s);
            Ok(s)
        }
        Format::Svg => Err(CliError::Usage(
            "--format svg is only available for `gaps` and `render`".into(),
        )),
    }
}

/// `key.path = value` lines.
fn flatten(prefix: &str, value: &serde_json::Value, out: &mut String) {
    use serde_json::Value;
    match value {
        Value::Object(map) => {
            for (k, v) in map {
                let key = if prefix.is_empty() {
                    k.clone()
                } else {
                    format!("{prefix}.{k}")
                };
                flatten(&key, v, out);
            }
        }
        Value::Array(items) => {
            for (i, v) in items.iter().enumerate() {
                flatten(&format!("{prefix}[{i}]"), v, out);
            }
        }
        Value::String(s) => out.push_str(&format!("{prefix} = {s}\n")),
        other => out.push_str(&format!("{prefix} = {other}\n")),
    }
}

fn execute(cli: &Cli, stderr: &mut dyn Write) -> Result<String, CliError> {
    let format = format_of(cli);
    match &cli.command {
        Command::Code(a) => code(a, format),
        Command::Lambda(a) => lambda(a, format),
        Command::Gaps(a) => gaps(a, format),
        Command::Render(a) => render(a, format),
        Command::Dim(a) => dim(a, format),
        Command::Moran(a) => moran(a, format),
        Command::Theta(a) => theta_cmd(a, format),
        Command::Entropy(a) => entropy(a, format),
        Command::Sigma(a) => sigma_cmd(a, format, stderr),
        Command::Freq(a) => freq_cmd(a, format),
        Command::Sample(a) => sample(a, format, stderr),
    }
}

fn code(a: &CodeArgs, format: Format) -> Result<String, CliError> {
    if let Some(depth) = a.float_depth {
        let (x, lambda) = (a.x.to_f64(), a.lambda.to_f64());
        if !(x > 0.0 && lambda > 0.0) {
            return Err(domain("x and lambda must be positive"));
        }
        let out = match phi_x_approx(x, lambda, depth) {
            ApproxMembership::BelowMinimum => {
                return Err(domain(format!(
                    "lambda {lambda} is below min = 2x = {}",
                    2.0 * x
                )))
            }
            ApproxMembership::AcceptedToDepth { depth, prefix } => ApproxCodeJson {
                x,
                lambda,
                exact: false,
                depth,
                accepted_to_depth: true,
                prefix: Some(prefix.to_string()),
                reject_index: None,
                residue: None,
            },
            ApproxMembership::RejectedAt { index, residue } => ApproxCodeJson {
                x,
                lambda,
                exact: false,
                depth,
                accepted_to_depth: false,
                prefix: None,
                reject_index: Some(index),
                residue: Some(residue),
            },
        };
        return serialize(&out, format);
    }
    let out = match param::phi_x(&a.x, &a.lambda).map_err(domain)? {
        Expansion::Accepted(c) => CodeJson {
            x: rational(&a.x),
            lambda: rational(&a.lambda),
            member: true,
            coding: Some(c.to_string()),
            reject_index: None,
            residue: None,
        },
        Expansion::Rejected(w) => CodeJson {
            x: rational(&a.x),
            lambda: rational(&a.lambda),
            member: false,
            coding: None,
            reject_index: Some(w.index),
            residue: Some(rational(&w.residue)),
        },
    };
    serialize(&out, format)
}

fn lambda(a: &LambdaArgs, format: Format) -> Result<String, CliError> {
    let lambda = param::lambda_of(&a.x, &a.coding).map_err(domain)?;
    serialize(
        &LambdaJson {
            x: rational(&a.x),
            coding: a.coding.to_string(),
            lambda_display: lambda.to_decimal(a.digits),
            lambda: rational(&lambda),
        },
        format,
    )
}

fn gap_levels(a: &GapsArgs, all: bool) -> Result<Vec<GapReportJson>, CliError> {
    let levels: Vec<usize> = if all {
        (0..=a.depth).collect()
    } else {
        vec![a.depth]
    };
    levels
        .into_iter()
        .map(|n| {
            let rep = level_intervals(&a.x, &a.q, n).map_err(domain)?;
            Ok(GapReportJson::from_report(
                &rep,
                &total_length(&rep),
                a.digits,
            ))
        })
        .collect()
}

fn gaps(a: &GapsArgs, format: Format) -> Result<String, CliError> {
    match format {
        Format::Svg => {
            let levels = gap_levels(a, true)?;
            let style = RenderStyle {
                width: a.width,
                height: a.height,
                ..RenderStyle::default()
            };
            render_levels(&levels, &style).map_err(domain)
        }
        _ if a.all_levels => serialize(
            &GapLevelsJson {
                x: rational(&a.x),
                q: rational(&a.q),
                levels: gap_levels(a, true)?,
            },
            format,
        ),
        _ => {
            let mut levels = gap_levels(a, false)?;
            serialize(&levels.pop().expect("one level"), format)
        }
    }
}

fn render(a: &RenderArgs, format: Format) -> Result<String, CliError> {
    if format != Format::Svg {
        return Err(CliError::Usage("`render` only writes svg".into()));
    }
    let mut text = String::new();
    if a.input.as_os_str() == "-" {
        std::io::stdin().read_to_string(&mut text)?;
    } else {
        text = std::fs::read_to_string(&a.input)?;
    }
    let doc: GapsDocument = serde_json::from_str(&text)
        .map_err(|e| domain(format!("input is not `gaps` JSON: {e}")))?;
    let style = RenderStyle {
        width: a.width,
        height: a.height,
        ..RenderStyle::default()
    };
    render_levels(&doc.into_levels(), &style).map_err(domain)
}

fn dim(a: &DimArgs, format: Format) -> Result<String, CliError> {
    if !a.x.is_positive() {
        return Err(domain("x must be positive"));
    }
    let two = Rational::from(2);
    let (lo, hi) = match (&a.center, &a.radius) {
        (Some(c), Some(r)) => (c - r, c + r),
        _ => (
            a.lo.clone().unwrap_or_else(|| &a.x * &two),
            a.hi.clone().unwrap_or_else(|| &a.x * &Rational::from(3)),
        ),
    };
    if lo >= hi {
        return Err(domain("window is empty"));
    }
    if a.depth_min > a.depth_max {
        return Err(CliError::Usage("--depth-min exceeds --depth-max".into()));
    }
    let finest = match a.schedule {
        Schedule::Ternary => a.depth_max,
        // 2^d boxes need about d·log_3(2) ternary levels
        Schedule::Binary => {
            (a.depth_max as f64 * std::f64::consts::LN_2 / dimension::LN_3).ceil() as usize
        }
    };
    let tree_level = a.tree_level.unwrap_or(finest + 3);
    let report = level_intervals(&a.x, &hi, tree_level).map_err(domain)?;
    let depths = a.depth_min..=a.depth_max;
    let window = (lo.clone(), hi.clone());
    let series = match a.schedule {
        Schedule::Ternary => BoxCountSeries::ternary(&report.kept, window, depths.clone()),
        Schedule::Binary => BoxCountSeries::binary(&report.kept, window, depths.clone()),
    };
    let est = dim_estimate(&series).map_err(domain)?;
    let points = depths
        .zip(&series.points)
        .zip(&est.residuals)
        .map(|((depth, p), residual)| DimPointJson {
            depth,
            eps: rational(&p.eps),
            count: p.count,
            residual: *residual,
        })
        .collect();
    serialize(
        &DimJson {
            x: rational(&a.x),
            window: [rational(&lo), rational(&hi)],
            schedule: match a.schedule {
                Schedule::Ternary => "ternary".into(),
                Schedule::Binary => "binary".into(),
            },
            tree_level,
            slope: est.slope,
            intercept: est.intercept,
            slope_stderr: est.slope_stderr,
            r_squared: est.r_squared,
            reference: dimension::cantor_dim(),
            points,
        },
        format,
    )
}

fn moran(a: &MoranArgs, format: Format) -> Result<String, CliError> {
    let qs: Vec<u64> = if a.table {
        (1..=a.q).collect()
    } else {
        vec![a.q]
    };
    let values = qs
        .into_iter()
        .map(|q| {
            Ok(MoranValueJson {
                q,
                value: moran_lower_bound(q).map_err(domain)?,
            })
        })
        .collect::<Result<_, CliError>>()?;
    serialize(
        &MoranJson {
            limit: dimension::cantor_dim(),
            values,
        },
        format,
    )
}

fn theta_cmd(a: &ThetaArgs, format: Format) -> Result<String, CliError> {
    let k0 = theta::k0(&a.p).map_err(domain)?;
    let k = a.k.unwrap_or(k0);
    let k_max = a.k_max.unwrap_or(k);
    if k_max < k {
        return Err(CliError::Usage("--k-max is below --k".into()));
    }
    let one_minus_p = Rational::one() - &a.p;
    let solutions = (k..=k_max)
        .map(|k| {
            let sol = theta::solve_theta_with_precision(&a.p, k, a.bits).map_err(domain)?;
            Ok(ThetaRowJson {
                k,
                theta: rational(&sol.theta),
                theta_display: sol.theta.to_decimal(a.digits),
                residual: sol.residual,
                sum_residual: sol.sum_residual,
                limit_gap: (&sol.theta - &one_minus_p).abs().to_f64(),
            })
        })
        .collect::<Result<_, CliError>>()?;
    serialize(
        &ThetaJson {
            p: rational(&a.p),
            k0,
            bits: a.bits,
            solutions,
        },
        format,
    )
}

fn entropy(a: &EntropyArgs, format: Format) -> Result<String, CliError> {
    let value = entropy_dim(a.p.to_f64()).map_err(domain)?;
    let local = match a.k {
        Some(k) => Some(local_dim_formula(&a.p, k).map_err(domain)?),
        None => None,
    };
    serialize(
        &EntropyJson {
            p: rational(&a.p),
            entropy_dim: value,
            k: a.k,
            local_dim_formula: local,
        },
        format,
    )
}

fn sigma_cmd(a: &SigmaArgs, format: Format, stderr: &mut dyn Write) -> Result<String, CliError> {
    let (filler, seed) = match a.filler {
        FillerArg::Zero => (Filler::AllZero, None),
        FillerArg::Two => (Filler::AllTwo, None),
        FillerArg::Seeded => {
            let seed = a.seed.unwrap_or(DEFAULT_SEED);
            writeln!(stderr, "seed = {seed}")?;
            (Filler::Seeded(seed), Some(seed))
        }
    };
    let spec = SigmaSpec {
        q: a.q,
        prefix: a.prefix.clone(),
        filler,
    };
    let rep = sigma::sigma_report(&spec, a.blocks).map_err(domain)?;
    let d = a.display_digits;
    let limits = match filler.alpha(a.q) {
        Some(alpha) => {
            let (at_r, at_ell) = sigma::checkpoint_limits(a.q, &alpha).map_err(domain)?;
            let gap = sigma::checkpoint_gap(a.q, &alpha).map_err(domain)?;
            Some(SigmaLimitsJson {
                alpha: rational(&alpha),
                at_r_display: at_r.to_decimal(d),
                at_ell_display: at_ell.to_decimal(d),
                at_r: rational(&at_r),
                at_ell: rational(&at_ell),
                gap: rational(&gap),
            })
        }
        None => None,
    };
    let checkpoints = rep
        .stats
        .checkpoints
        .chunks(2)
        .zip(1u32..)
        .map(|(pair, m)| SigmaRowJson {
            m,
            ell_m: pair[0].index as u64,
            ratio_ell: rational(&pair[0].ratio2),
            ratio_ell_display: pair[0].ratio2.to_decimal(d),
            r_m: pair[1].index as u64,
            ratio_r: rational(&pair[1].ratio2),
            ratio_r_display: pair[1].ratio2.to_decimal(d),
        })
        .collect();
    serialize(
        &SigmaJson {
            q: a.q,
            prefix: a.prefix.to_string(),
            filler: match a.filler {
                FillerArg::Zero => "zero".into(),
                FillerArg::Two => "two".into(),
                FillerArg::Seeded => "seeded".into(),
            },
            seed,
            blocks: a.blocks,
            length: rep.word.len(),
            limits,
            checkpoints,
            digits: (!a.no_digits).then(|| rep.word.to_string()),
        },
        format,
    )
}

fn freq_cmd(a: &FreqArgs, format: Format) -> Result<String, CliError> {
    let word = match (&a.word, &a.coding, a.length) {
        (Some(w), _, _) => w.clone(),
        (None, Some(c), Some(n)) => c.prefix(n),
        _ => {
            return Err(CliError::Usage(
                "give --word, or --coding with --length".into(),
            ))
        }
    };
    let checkpoints = if a.checkpoints.is_empty() {
        if word.is_empty() {
            Vec::new()
        } else {
            vec![word.len()]
        }
    } else {
        a.checkpoints.clone()
    };
    let stats = freq::word_stats(&word, &checkpoints).map_err(domain)?;
    serialize(
        &FreqJson {
            length: stats.length,
            count0: stats.count0,
            count2: stats.count2,
            checkpoints: stats
                .checkpoints
                .iter()
                .map(|c| CheckpointJson {
                    index: c.index,
                    count2: c.count2,
                    ratio2: rational(&c.ratio2),
                    ratio2_display: c.ratio2.to_decimal(a.display_digits),
                })
                .collect(),
        },
        format,
    )
}

fn sample(a: &SampleArgs, format: Format, stderr: &mut dyn Write) -> Result<String, CliError> {
    let k = match a.k {
        Some(k) => k,
        None => theta::k0(&a.p).map_err(domain)?,
    };
    if a.blocks == 0 || a.repeat == 0 {
        return Err(CliError::Usage(
            "--blocks and --repeat must be at least 1".into(),
        ));
    }
    let spec = TreeMeasureSpec::with_precision(a.p.clone(), k, a.prefix.clone(), a.bits)
        .map_err(domain)?;
    let base = a.seed.unwrap_or(DEFAULT_SEED);
    writeln!(stderr, "seed = {base}")?;
    let mut runs = Vec::new();
    for i in 0..a.repeat {
        let seed = base.wrapping_add(i);
        let w = tree::sample_tree(&spec, a.blocks, seed);
        let tail = &w.digits()[spec.n()..];
        let twos = tail
            .iter()
            .filter(|d| **d == cantorparam_core::Digit::Two)
            .count();
        let ln_measure = tree::log_cylinder_measure(&spec, &w).map_err(domain)?;
        let local_dim = tree::empirical_local_dim(&spec, &w).map_err(domain)?;
        let measure = if a.exact {
            Some(rational(
                &tree::cylinder_measure(&spec, &w).map_err(domain)?,
            ))
        } else {
            None
        };
        runs.push(SampleRunJson {
            seed,
            freq2: twos as f64 / tail.len() as f64,
            ln_measure,
            local_dim,
            measure,
            digits: (!a.no_digits).then(|| w.to_string()),
        });
    }
    let n = runs.len() as f64;
    let mean = runs.iter().map(|r| r.local_dim).sum::<f64>() / n;
    let stderr_local_dim = if runs.len() > 1 {
        let var = runs
            .iter()
            .map(|r| (r.local_dim - mean).powi(2))
            .sum::<f64>()
            / (n - 1.0);
        (var / n).sqrt()
    } else {
        0.0
    };
    serialize(
        &SampleJson {
            p: rational(&a.p),
            k,
            bits: a.bits,
            theta: rational(&spec.theta),
            theta_display: spec.theta.to_decimal(12),
            prefix: a.prefix.to_string(),
            blocks: a.blocks,
            local_dim_formula: local_dim_formula(&a.p, k).map_err(domain)?,
            mean_local_dim: mean,
            stderr_local_dim,
            runs,
        },
        format,
    )
}
