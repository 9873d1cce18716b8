//! Static SVG charts of survey responses.
//!
//! Diverging stacked bars: one horizontal bar per group, segments are the
//! category shares of that group, and every bar is shifted so that the middle
//! of its neutral segment sits on a shared vertical axis. Categories below the
//! neutral one extend left, those above extend right. Geometry uses exact
//! fractions; only the printed labels are rounded.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::survey::SurveyDataset;

const MARGIN_LEFT: f64 = 140.0;
const MARGIN_RIGHT: f64 = 30.0;
const MARGIN_TOP: f64 = 50.0;
const LEGEND_HEIGHT: f64 = 50.0;
const MIN_LABEL_SHARE: f64 = 0.04;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChartSpec {
    pub question: String,
    pub title: String,
    pub category_labels: Vec<String>,
    /// 0-based index of the neutral category.
    pub neutral_index: usize,
    /// Display order, top to bottom.
    pub groups: Vec<String>,
    /// One fill color per category.
    pub colors: Vec<String>,
    pub width: u32,
    pub height: u32,
}

impl ChartSpec {
    /// Spec built from the dataset's metadata, with the default palette.
    pub fn for_question(dataset: &SurveyDataset, question: &str, groups: Vec<String>) -> Self {
        let meta = dataset.meta();
        let labels = meta.labels(question).to_vec();
        let neutral = meta.neutral(question);
        let title = match meta.text(question) {
            "" => question.to_string(),
            text => format!("{question}: {text}"),
        };
        ChartSpec {
            question: question.to_string(),
            title,
            colors: diverging_palette(labels.len(), neutral),
            category_labels: labels,
            neutral_index: neutral,
            height: (MARGIN_TOP + LEGEND_HEIGHT + 40.0 * groups.len() as f64 + 20.0) as u32,
            groups,
            width: 720,
        }
    }

    fn validate(&self) -> Result<()> {
        let k = self.category_labels.len();
        if k < 3 {
            return Err(Error::input(
                "a diverging chart needs at least 3 categories",
            ));
        }
        if self.neutral_index >= k {
            return Err(Error::input("neutral index outside the category range"));
        }
        if self.colors.len() != k {
            return Err(Error::Dimension {
                expected: k,
                got: self.colors.len(),
            });
        }
        if self.groups.is_empty() {
            return Err(Error::input("chart needs at least one group"));
        }
        if self.width == 0 || self.height == 0 {
            return Err(Error::input("chart dimensions must be positive"));
        }
        Ok(())
    }
}

/// Reds below the neutral category, grey at it, blues above.
pub fn diverging_palette(k: usize, neutral: usize) -> Vec<String> {
    let lerp = |from: [f64; 3], to: [f64; 3], t: f64| {
        let c: Vec<u8> = (0..3)
            .map(|i| (from[i] + (to[i] - from[i]) * t).round() as u8)
            .collect();
        format!("#{:02x}{:02x}{:02x}", c[0], c[1], c[2])
    };
    let (deep_red, pale_red) = ([202.0, 0.0, 32.0], [244.0, 165.0, 130.0]);
    let (pale_blue, deep_blue) = ([146.0, 197.0, 222.0], [5.0, 113.0, 176.0]);
    (0..k)
        .map(|c| {
            if c == neutral {
                "#dddddd".to_string()
            } else if c < neutral {
                let t = if neutral > 1 {
                    c as f64 / (neutral - 1) as f64
                } else {
                    1.0
                };
                lerp(deep_red, pale_red, t)
            } else {
                let span = k - neutral - 1;
                let t = if span > 1 {
                    (c - neutral - 1) as f64 / (span - 1) as f64
                } else {
                    1.0
                };
                lerp(deep_blue, pale_blue, 1.0 - t)
            }
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Segment {
    pub category: usize,
    /// Share of the group's responses in this category.
    pub fraction: f64,
    /// Left edge relative to the axis, in shares (negative = left of axis).
    pub start: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BarLayout {
    pub group: String,
    pub responses: usize,
    pub segments: Vec<Segment>,
}

/// Response shares per category (codes `1..=k`) for one group.
fn shares(
    dataset: &SurveyDataset,
    question: &str,
    group: &str,
    k: usize,
) -> Result<(usize, Vec<f64>)> {
    let codes = dataset.responses(question, group);
    if codes.is_empty() {
        return Err(Error::input(format!(
            "group {group:?} has no responses to {question}"
        )));
    }
    let mut counts = vec![0usize; k];
    for c in &codes {
        counts[*c as usize - 1] += 1;
    }
    let n = codes.len();
    Ok((n, counts.into_iter().map(|c| c as f64 / n as f64).collect()))
}

/// Bar geometry in share units, before scaling to pixels.
pub fn diverging_layout(dataset: &SurveyDataset, spec: &ChartSpec) -> Result<Vec<BarLayout>> {
    spec.validate()?;
    let k = spec.category_labels.len();
    if dataset.meta().category_count(&spec.question) as usize != k {
        return Err(Error::Dimension {
            expected: dataset.meta().category_count(&spec.question) as usize,
            got: k,
        });
    }
    spec.groups
        .iter()
        .map(|g| {
            let (n, f) = shares(dataset, &spec.question, g, k)?;
            let left: f64 =
                f[..spec.neutral_index].iter().sum::<f64>() + f[spec.neutral_index] / 2.0;
            let mut cursor = -left;
            let segments = f
                .iter()
                .enumerate()
                .map(|(category, &fraction)| {
                    let s = Segment {
                        category,
                        fraction,
                        start: cursor,
                    };
                    cursor += fraction;
                    s
                })
                .collect();
            Ok(BarLayout {
                group: g.clone(),
                responses: n,
                segments,
            })
        })
        .collect()
}

pub(crate) fn escape(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    for ch in text.chars() {
        match ch {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            c => out.push(c),
        }
    }
    out
}

fn svg_open(out: &mut String, width: u32, height: u32, title: &str) {
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" viewBox="0 0 {width} {height}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(
        out,
        r#"<rect x="0" y="0" width="{width}" height="{height}" fill="white"/>"#
    );
    let _ = writeln!(
        out,
        r#"<text x="{:.2}" y="24" text-anchor="middle" font-size="14" font-weight="bold">{}</text>"#,
        f64::from(width) / 2.0,
        escape(title)
    );
}

fn legend(out: &mut String, labels: &[String], colors: &[String], y: f64, width: f64) {
    let slot = (width - MARGIN_LEFT - MARGIN_RIGHT) / labels.len() as f64;
    for (i, (label, color)) in labels.iter().zip(colors).enumerate() {
        let x = MARGIN_LEFT + i as f64 * slot;
        let _ = writeln!(
            out,
            r#"<rect class="legend" x="{x:.2}" y="{y:.2}" width="12" height="12" fill="{color}"/>"#
        );
        let _ = writeln!(
            out,
            r#"<text x="{:.2}" y="{:.2}" font-size="10">{}</text>"#,
            x + 16.0,
            y + 10.0,
            escape(label)
        );
    }
}

/// Diverging stacked bar chart as an SVG document. Emits exactly one
/// `class="segment"` rectangle per group and category, zero-width ones
/// included.
pub fn render_diverging_chart(dataset: &SurveyDataset, spec: &ChartSpec) -> Result<String> {
    let bars = diverging_layout(dataset, spec)?;
    let (w, h) = (f64::from(spec.width), f64::from(spec.height));
    let max_left = bars
        .iter()
        .map(|b| -b.segments[0].start)
        .fold(0.0, f64::max);
    let max_right = bars
        .iter()
        .map(|b| b.segments.last().map_or(0.0, |s| s.start + s.fraction))
        .fold(0.0, f64::max);
    let plot_w = (w - MARGIN_LEFT - MARGIN_RIGHT).max(1.0);
    let scale = plot_w / (max_left + max_right).max(f64::MIN_POSITIVE);
    let axis = MARGIN_LEFT + max_left * scale;
    let plot_h = (h - MARGIN_TOP - LEGEND_HEIGHT).max(1.0);
    let band = plot_h / bars.len() as f64;
    let bar_h = band * 0.7;

    let mut out = String::new();
    svg_open(&mut out, spec.width, spec.height, &spec.title);
    for (row, bar) in bars.iter().enumerate() {
        let y = MARGIN_TOP + row as f64 * band + (band - bar_h) / 2.0;
        let _ = writeln!(
            out,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="end">{} (n={})</text>"#,
            MARGIN_LEFT - 8.0,
            y + bar_h / 2.0 + 4.0,
            escape(&bar.group),
            bar.responses
        );
        for seg in &bar.segments {
            let x = axis + seg.start * scale;
            let sw = seg.fraction * scale;
            let _ = writeln!(
                out,
                r#"<rect class="segment" data-group="{}" data-category="{}" x="{x:.2}" y="{y:.2}" width="{sw:.2}" height="{bar_h:.2}" fill="{}"/>"#,
                escape(&bar.group),
                seg.category + 1,
                spec.colors[seg.category]
            );
            if seg.fraction >= MIN_LABEL_SHARE {
                let _ = writeln!(
                    out,
                    r#"<text x="{:.2}" y="{:.2}" text-anchor="middle" font-size="10">{:.0}%</text>"#,
                    x + sw / 2.0,
                    y + bar_h / 2.0 + 4.0,
                    seg.fraction * 100.0
                );
            }
        }
    }
    let _ = writeln!(
        out,
        r##"<line class="axis" x1="{axis:.2}" y1="{:.2}" x2="{axis:.2}" y2="{:.2}" stroke="#333333" stroke-width="1"/>"##,
        MARGIN_TOP - 6.0,
        MARGIN_TOP + plot_h + 6.0
    );
    legend(
        &mut out,
        &spec.category_labels,
        &spec.colors,
        h - LEGEND_HEIGHT + 16.0,
        w,
    );
    out.push_str("</svg>\n");
    Ok(out)
}

/// Grouped vertical bars of option shares, for questions whose options have
/// no order. One `class="segment"` rectangle per group and option.
pub fn render_grouped_bars(
    dataset: &SurveyDataset,
    question: &str,
    groups: &[String],
) -> Result<String> {
    if groups.is_empty() {
        return Err(Error::input("chart needs at least one group"));
    }
    let meta = dataset.meta();
    let labels = meta.labels(question).to_vec();
    let k = labels.len();
    let palette: Vec<String> = (0..groups.len())
        .map(|g| {
            [
                "#1b9e77", "#d95f02", "#7570b3", "#e7298a", "#66a61e", "#e6ab02",
            ][g % 6]
                .to_string()
        })
        .collect();
    let (w, h) = (720.0, 360.0);
    let plot_w = w - MARGIN_LEFT - MARGIN_RIGHT;
    let plot_h = h - MARGIN_TOP - LEGEND_HEIGHT - 20.0;
    let base = MARGIN_TOP + plot_h;
    let cluster = plot_w / k as f64;
    let bar_w = cluster * 0.8 / groups.len() as f64;

    let title = match meta.text(question) {
        "" => question.to_string(),
        text => format!("{question}: {text}"),
    };
    let mut out = String::new();
    svg_open(&mut out, w as u32, h as u32, &title);
    for (gi, g) in groups.iter().enumerate() {
        let (_, f) = shares(dataset, question, g, k)?;
        for (c, share) in f.iter().enumerate() {
            let x = MARGIN_LEFT + c as f64 * cluster + cluster * 0.1 + gi as f64 * bar_w;
            let bh = share * plot_h;
            let _ = writeln!(
                out,
                r#"<rect class="segment" data-group="{}" data-category="{}" x="{x:.2}" y="{:.2}" width="{bar_w:.2}" height="{bh:.2}" fill="{}"/>"#,
                escape(g),
                c + 1,
                base - bh,
                palette[gi]
            );
        }
    }
    for c in 0..k {
        let _ = writeln!(
            out,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="middle" font-size="10">{}</text>"#,
            MARGIN_LEFT + (c as f64 + 0.5) * cluster,
            base + 14.0,
            (b'a' + (c % 26) as u8) as char
        );
    }
    let _ = writeln!(
        out,
        r##"<line x1="{MARGIN_LEFT:.2}" y1="{base:.2}" x2="{:.2}" y2="{base:.2}" stroke="#333333"/>"##,
        MARGIN_LEFT + plot_w
    );
    legend(&mut out, groups, &palette, h - LEGEND_HEIGHT + 16.0, w);
    out.push_str("</svg>\n");
    Ok(out)
}
