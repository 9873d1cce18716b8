//! Survey responses: the CSV interchange format, question metadata and
//! group-versus-group comparisons.
//!
//! The CSV has the header `respondent_id,group,question,response`. An empty
//! response (or `NA`) is kept as missing. Each `(respondent_id, question)`
//! pair may appear once.

use std::collections::{BTreeMap, HashSet};
use std::io::Read;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ordinal::{mann_whitney_u, GroupComparison, OrdinalSample};

pub const DEFAULT_LIKERT_LABELS: [&str; 5] = [
    "Strongly disagree",
    "Disagree",
    "Neutral",
    "Agree",
    "Strongly agree",
];

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum QuestionKind {
    #[default]
    Ordinal,
    /// Unordered options; charted as plain bars, never rank-tested.
    Nominal,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct QuestionMeta {
    #[serde(default)]
    pub text: String,
    #[serde(default)]
    pub kind: QuestionKind,
    /// Option labels overriding the shared category labels.
    #[serde(default)]
    pub options: Vec<String>,
    /// Neutral option index (0-based) overriding the shared one.
    #[serde(default)]
    pub neutral_index: Option<usize>,
}

/// Shared response scale plus per-question details. Questions missing from
/// `questions` use the shared ordinal scale.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SurveyMeta {
    pub category_labels: Vec<String>,
    /// 0-based index of the neutral category.
    pub neutral_index: usize,
    #[serde(default)]
    pub questions: BTreeMap<String, QuestionMeta>,
}

impl Default for SurveyMeta {
    fn default() -> Self {
        SurveyMeta::likert(
            DEFAULT_LIKERT_LABELS
                .iter()
                .map(|s| s.to_string())
                .collect(),
            2,
        )
        .expect("default scale is valid")
    }
}

impl SurveyMeta {
    pub fn likert(labels: Vec<String>, neutral_index: usize) -> Result<Self> {
        let meta = SurveyMeta {
            category_labels: labels,
            neutral_index,
            questions: BTreeMap::new(),
        };
        meta.validate()?;
        Ok(meta)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let meta: SurveyMeta = serde_json::from_str(text)?;
        meta.validate()?;
        Ok(meta)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        SurveyMeta::from_json(&std::fs::read_to_string(path)?)
    }

    fn validate(&self) -> Result<()> {
        if self.category_labels.len() < 2 {
            return Err(Error::input("a response scale needs at least 2 categories"));
        }
        if self.neutral_index >= self.category_labels.len() {
            return Err(Error::input("neutral index outside the category range"));
        }
        for (q, m) in &self.questions {
            let k = if m.options.is_empty() {
                self.category_labels.len()
            } else {
                m.options.len()
            };
            if m.neutral_index.is_some_and(|i| i >= k) {
                return Err(Error::input(format!(
                    "neutral index of {q} outside its {k} options"
                )));
            }
        }
        Ok(())
    }

    pub fn kind(&self, question: &str) -> QuestionKind {
        self.questions
            .get(question)
            .map(|m| m.kind)
            .unwrap_or_default()
    }

    /// Option labels for `question`.
    pub fn labels(&self, question: &str) -> &[String] {
        match self.questions.get(question) {
            Some(m) if !m.options.is_empty() => &m.options,
            _ => &self.category_labels,
        }
    }

    pub fn category_count(&self, question: &str) -> u32 {
        self.labels(question).len() as u32
    }

    pub fn neutral(&self, question: &str) -> usize {
        self.questions
            .get(question)
            .and_then(|m| m.neutral_index)
            .unwrap_or(self.neutral_index)
    }

    pub fn text(&self, question: &str) -> &str {
        self.questions.get(question).map_or("", |m| m.text.as_str())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurveyRecord {
    pub respondent_id: String,
    pub group: String,
    pub question: String,
    pub response: Option<u32>,
}

#[derive(Deserialize)]
struct CsvRow {
    respondent_id: String,
    group: String,
    question: String,
    response: String,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SurveyDataset {
    records: Vec<SurveyRecord>,
    meta: SurveyMeta,
}

impl SurveyDataset {
    /// Validates records against `meta`.
    pub fn new(records: Vec<SurveyRecord>, meta: SurveyMeta) -> Result<Self> {
        if records.is_empty() {
            return Err(Error::input("survey has no records"));
        }
        let mut seen = HashSet::new();
        for (i, r) in records.iter().enumerate() {
            check_record(r, &meta, &mut seen).map_err(|message| Error::Record {
                line: i as u64 + 1,
                message,
            })?;
        }
        Ok(SurveyDataset { records, meta })
    }

    /// Reads the CSV interchange format. Errors carry the 1-based file line.
    pub fn from_reader<R: Read>(reader: R, meta: SurveyMeta) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new()
            .trim(csv::Trim::All)
            .from_reader(reader);
        let headers = rdr.headers()?.clone();
        for col in ["respondent_id", "group", "question", "response"] {
            if !headers.iter().any(|h| h == col) {
                return Err(Error::Record {
                    line: 1,
                    message: format!("missing column {col:?}"),
                });
            }
        }
        let mut records = Vec::new();
        let mut seen = HashSet::new();
        for raw in rdr.records() {
            let raw = raw.map_err(|e| Error::Record {
                line: e.position().map_or(0, |p| p.line()),
                message: e.to_string(),
            })?;
            let line = raw.position().map_or(0, |p| p.line());
            let row: CsvRow = raw.deserialize(Some(&headers)).map_err(|e| Error::Record {
                line,
                message: e.to_string(),
            })?;
            let response = match row.response.as_str() {
                "" | "NA" | "na" => None,
                text => Some(text.parse::<u32>().map_err(|_| Error::Record {
                    line,
                    message: format!("response {text:?} is not a category code"),
                })?),
            };
            let rec = SurveyRecord {
                respondent_id: row.respondent_id,
                group: row.group,
                question: row.question,
                response,
            };
            check_record(&rec, &meta, &mut seen)
                .map_err(|message| Error::Record { line, message })?;
            records.push(rec);
        }
        if records.is_empty() {
            return Err(Error::input("survey file has no records"));
        }
        Ok(SurveyDataset { records, meta })
    }

    pub fn records(&self) -> &[SurveyRecord] {
        &self.records
    }

    pub fn meta(&self) -> &SurveyMeta {
        &self.meta
    }

    /// Groups in order of first appearance.
    pub fn groups(&self) -> Vec<String> {
        first_seen(self.records.iter().map(|r| &r.group))
    }

    /// Questions in order of first appearance.
    pub fn questions(&self) -> Vec<String> {
        first_seen(self.records.iter().map(|r| &r.question))
    }

    pub fn has_group(&self, group: &str) -> bool {
        self.records.iter().any(|r| r.group == group)
    }

    pub fn has_question(&self, question: &str) -> bool {
        self.records.iter().any(|r| r.question == question)
    }

    /// Non-missing response codes of `group` for `question`, in file order.
    pub fn responses(&self, question: &str, group: &str) -> Vec<u32> {
        self.records
            .iter()
            .filter(|r| r.question == question && r.group == group)
            .filter_map(|r| r.response)
            .collect()
    }

    /// Responses as an ordinal sample; errors when the cell is empty.
    pub fn sample(&self, question: &str, group: &str) -> Result<OrdinalSample> {
        if !self.has_question(question) {
            return Err(Error::input(format!("unknown question {question:?}")));
        }
        if !self.has_group(group) {
            return Err(Error::input(format!("unknown group {group:?}")));
        }
        let codes = self.responses(question, group);
        if codes.is_empty() {
            return Err(Error::input(format!(
                "group {group:?} has no responses to {question}"
            )));
        }
        OrdinalSample::likert(&codes, self.meta.category_count(question))
    }
}

fn first_seen<'a>(items: impl Iterator<Item = &'a String>) -> Vec<String> {
    let mut out: Vec<String> = Vec::new();
    for s in items {
        if !out.contains(s) {
            out.push(s.clone());
        }
    }
    out
}

fn check_record(
    r: &SurveyRecord,
    meta: &SurveyMeta,
    seen: &mut HashSet<(String, String)>,
) -> std::result::Result<(), String> {
    if r.respondent_id.is_empty() {
        return Err("empty respondent_id".into());
    }
    if r.group.is_empty() {
        return Err("empty group name".into());
    }
    if r.question.is_empty() {
        return Err("empty question id".into());
    }
    if let Some(code) = r.response {
        let k = meta.category_count(&r.question);
        if code == 0 || code > k {
            return Err(format!(
                "response {code} for {} outside 1..={k}",
                r.question
            ));
        }
    }
    if !seen.insert((r.respondent_id.clone(), r.question.clone())) {
        return Err(format!(
            "duplicate response of {} to {}",
            r.respondent_id, r.question
        ));
    }
    Ok(())
}

/// Loads a survey CSV using `meta`, or the default five-point scale.
pub fn load_survey_csv(path: impl AsRef<Path>, meta: Option<SurveyMeta>) -> Result<SurveyDataset> {
    let file = std::fs::File::open(path)?;
    SurveyDataset::from_reader(file, meta.unwrap_or_default())
}

/// Mann-Whitney U between two groups' answers to one ordinal question.
pub fn compare_groups(
    dataset: &SurveyDataset,
    question: &str,
    group_a: &str,
    group_b: &str,
    alpha: f64,
) -> Result<GroupComparison> {
    if dataset.meta().kind(question) == QuestionKind::Nominal {
        return Err(Error::input(format!(
            "{question} has unordered options; a rank test does not apply"
        )));
    }
    let x = dataset.sample(question, group_a)?;
    let y = dataset.sample(question, group_b)?;
    let result = mann_whitney_u(&x, &y, alpha)?;
    Ok(GroupComparison {
        question: question.to_string(),
        group_a: group_a.to_string(),
        group_b: group_b.to_string(),
        significant: result.p_two_sided < alpha,
        result,
    })
}
