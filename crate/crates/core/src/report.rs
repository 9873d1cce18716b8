//! Survey report: per-group summaries, pairwise rank tests and one chart per
//! question, written as flat files.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::chart::{render_diverging_chart, render_grouped_bars, ChartSpec};
use crate::error::{Error, Result};
use crate::ordinal::{descriptive_summary, GroupComparison, Summary};
use crate::survey::{compare_groups, QuestionKind, SurveyDataset};

/// Groups answering a question with fewer responses than this get a note.
pub const LOW_N: usize = 5;

pub const COMPARISONS_FILE: &str = "comparisons.csv";
pub const SUMMARIES_FILE: &str = "summaries.csv";
pub const NOTES_FILE: &str = "notes.txt";

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GroupSummary {
    pub question: String,
    pub group: String,
    pub n: usize,
    pub summary: Summary,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ChartFile {
    pub question: String,
    pub file_name: String,
    pub svg: String,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct ReportBundle {
    pub summaries: Vec<GroupSummary>,
    pub comparisons: Vec<GroupComparison>,
    pub charts: Vec<ChartFile>,
    pub notes: Vec<String>,
}

/// File name for a question's chart; characters outside `[A-Za-z0-9_-]`
/// become `_`.
pub fn chart_file_name(question: &str) -> String {
    let safe: String = question
        .chars()
        .map(|c| {
            if c.is_ascii_alphanumeric() || c == '-' || c == '_' {
                c
            } else {
                '_'
            }
        })
        .collect();
    format!("chart_{safe}.svg")
}

/// Builds the report for `questions` x `groups`. Empty slices mean "all, in
/// file order". Groups without any response to a question are left out of
/// that question's chart and tests, with a note.
pub fn run_report(
    dataset: &SurveyDataset,
    questions: &[String],
    groups: &[String],
    alpha: f64,
) -> Result<ReportBundle> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::input(format!(
            "alpha must lie in (0, 1), got {alpha}"
        )));
    }
    let questions = if questions.is_empty() {
        dataset.questions()
    } else {
        questions.to_vec()
    };
    let groups = if groups.is_empty() {
        dataset.groups()
    } else {
        groups.to_vec()
    };
    for q in &questions {
        if !dataset.has_question(q) {
            return Err(Error::input(format!("unknown question {q:?}")));
        }
    }
    for g in &groups {
        if !dataset.has_group(g) {
            return Err(Error::input(format!("unknown group {g:?}")));
        }
    }

    let mut bundle = ReportBundle::default();
    for q in &questions {
        let mut present = Vec::new();
        for g in &groups {
            let codes = dataset.responses(q, g);
            if codes.is_empty() {
                bundle
                    .notes
                    .push(format!("{q}: group {g} has no responses; omitted"));
                continue;
            }
            if codes.len() < LOW_N {
                bundle
                    .notes
                    .push(format!("{q}: low n for group {g} (n={})", codes.len()));
            }
            let sample = dataset.sample(q, g)?;
            bundle.summaries.push(GroupSummary {
                question: q.clone(),
                group: g.clone(),
                n: codes.len(),
                summary: descriptive_summary(&sample),
            });
            present.push(g.clone());
        }
        if present.is_empty() {
            continue;
        }
        let nominal = dataset.meta().kind(q) == QuestionKind::Nominal;
        let svg = if nominal {
            bundle
                .notes
                .push(format!("{q}: options are unordered; no rank tests"));
            render_grouped_bars(dataset, q, &present)?
        } else {
            for (i, a) in present.iter().enumerate() {
                for b in &present[i + 1..] {
                    bundle
                        .comparisons
                        .push(compare_groups(dataset, q, a, b, alpha)?);
                }
            }
            render_diverging_chart(
                dataset,
                &ChartSpec::for_question(dataset, q, present.clone()),
            )?
        };
        bundle.charts.push(ChartFile {
            question: q.clone(),
            file_name: chart_file_name(q),
            svg,
        });
    }
    Ok(bundle)
}

impl ReportBundle {
    /// `question,groupA,groupB,U,p,significant`; U is the first group's
    /// statistic.
    pub fn comparisons_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["question", "groupA", "groupB", "U", "p", "significant"])?;
        for c in &self.comparisons {
            w.write_record([
                c.question.clone(),
                c.group_a.clone(),
                c.group_b.clone(),
                c.result.u_x.to_string(),
                c.result.p_two_sided.to_string(),
                c.significant.to_string(),
            ])?;
        }
        into_string(w)
    }

    /// `question,group,n,median,modes,counts`, with `;`-separated lists.
    pub fn summaries_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["question", "group", "n", "median", "modes", "counts"])?;
        for s in &self.summaries {
            let modes: Vec<String> = s.summary.modes.iter().map(|m| m.to_string()).collect();
            let counts: Vec<String> = s
                .summary
                .counts
                .iter()
                .map(|(v, c)| format!("{v}:{c}"))
                .collect();
            w.write_record([
                s.question.clone(),
                s.group.clone(),
                s.n.to_string(),
                s.summary.median.to_string(),
                modes.join(";"),
                counts.join(";"),
            ])?;
        }
        into_string(w)
    }

    pub fn notes_text(&self) -> String {
        let mut out = String::new();
        for n in &self.notes {
            let _ = writeln!(out, "{n}");
        }
        out
    }

    /// Writes charts, both CSVs and the notes into `dir`, creating it if
    /// needed. Returns the written paths in a fixed order.
    pub fn write_to(&self, dir: &Path) -> Result<Vec<PathBuf>> {
        fs::create_dir_all(dir)?;
        let mut written = Vec::new();
        let mut put = |name: &str, body: &str| -> Result<()> {
            let path = dir.join(name);
            fs::write(&path, body)?;
            written.push(path);
            Ok(())
        };
        put(COMPARISONS_FILE, &self.comparisons_csv()?)?;
        put(SUMMARIES_FILE, &self.summaries_csv()?)?;
        put(NOTES_FILE, &self.notes_text())?;
        for c in &self.charts {
            put(&c.file_name, &c.svg)?;
        }
        Ok(written)
    }
}

fn into_string(w: csv::Writer<Vec<u8>>) -> Result<String> {
    let bytes = w.into_inner().map_err(|e| Error::Io(e.into_error()))?;
    String::from_utf8(bytes).map_err(|e| Error::input(e.to_string()))
}
