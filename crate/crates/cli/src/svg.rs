//! One horizontal band per level: kept intervals filled, gaps blank.

use std::fmt::Write as _;

use cantorparam_core::Rational;

use crate::json::GapReportJson;

#[derive(Debug, Clone, PartialEq)]
pub struct RenderStyle {
    pub width: u32,
    pub height: u32,
    pub margin: u32,
    pub fill: String,
}

impl Default for RenderStyle {
    fn default() -> RenderStyle {
        RenderStyle {
            width: 800,
            height: 320,
            margin: 20,
            fill: "#1f3b73".to_string(),
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum RenderError {
    #[error("nothing to render")]
    Empty,
    #[error("levels disagree on (x, q)")]
    Inconsistent,
    #[error("bad rational `{0}` in input")]
    BadValue(String),
}

/// A kept interval in band coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct Bar {
    pub level: usize,
    pub x: f64,
    pub width: f64,
}

fn parse(s: &str) -> Result<Rational, RenderError> {
    s.parse().map_err(|_| RenderError::BadValue(s.to_string()))
}

/// The horizontal axis spans the hull of the first (coarsest) level.
pub fn layout(
    levels: &[GapReportJson],
    style: &RenderStyle,
) -> Result<(Vec<Bar>, (Rational, Rational)), RenderError> {
    let first = levels.first().ok_or(RenderError::Empty)?;
    if levels.iter().any(|l| l.x != first.x || l.q != first.q) {
        return Err(RenderError::Inconsistent);
    }
    let (lo, hi) = match levels.iter().find_map(|l| l.hull.clone()) {
        Some([lo, hi]) => (parse(&lo)?, parse(&hi)?),
        None => (Rational::zero(), Rational::one()),
    };
    let span = &hi - &lo;
    let inner = f64::from(style.width - 2 * style.margin);
    let mut bars = Vec::new();
    for (i, level) in levels.iter().enumerate() {
        for k in &level.kept {
            let a = parse(&k.lo)?;
            let b = parse(&k.hi)?;
            let (x0, x1) = if span.is_positive() {
                (
                    (&a - &lo)
                        .checked_div(&span)
                        .expect("positive span")
                        .to_f64(),
                    (&b - &lo)
                        .checked_div(&span)
                        .expect("positive span")
                        .to_f64(),
                )
            } else {
                (0.0, 1.0)
            };
            bars.push(Bar {
                level: i,
                x: f64::from(style.margin) + x0 * inner,
                width: (x1 - x0) * inner,
            });
        }
    }
    Ok((bars, (lo, hi)))
}

pub fn render_levels(levels: &[GapReportJson], style: &RenderStyle) -> Result<String, RenderError> {
    let (bars, (lo, hi)) = layout(levels, style)?;
    let rows = levels.len() as f64;
    let band = (f64::from(style.height) - 2.0 * f64::from(style.margin)) / rows;
    let bar_height = band * 0.6;
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}">"#,
        w = style.width,
        h = style.height
    );
    let _ = writeln!(
        out,
        r#"<rect x="0" y="0" width="{}" height="{}" fill="white"/>"#,
        style.width, style.height
    );
    let _ = writeln!(
        out,
        r#"<desc>x = {}, q = {}, axis [{}, {}]</desc>"#,
        levels[0].x,
        levels[0].q,
        lo.to_decimal(4),
        hi.to_decimal(4)
    );
    for (i, level) in levels.iter().enumerate() {
        let y = f64::from(style.margin) + band * i as f64 + (band - bar_height) / 2.0;
        let _ = writeln!(out, r#"<g id="level-{}">"#, level.level);
        for bar in bars.iter().filter(|b| b.level == i) {
            let _ = writeln!(
                out,
                r#"<rect x="{:.4}" y="{:.4}" width="{:.4}" height="{:.4}" fill="{}"/>"#,
                bar.x, y, bar.width, bar_height, style.fill
            );
        }
        let _ = writeln!(out, "</g>");
    }
    out.push_str("</svg>\n");
    Ok(out)
}
