//! Full survey report from the bundled synthetic data: summaries, pairwise
//! tests and one chart per question.
//!
//!     cargo run --example survey_report -- [OUT_DIR]

use std::path::PathBuf;

use fairdice::report::run_report;
use fairdice::survey::{load_survey_csv, SurveyMeta};

fn main() -> fairdice::Result<()> {
    let data = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data");
    let meta = SurveyMeta::load(data.join("sample_meta.json"))?;
    let dataset = load_survey_csv(data.join("sample_survey.csv"), Some(meta))?;
    let out = std::env::args().nth(1).map_or_else(
        || std::env::temp_dir().join("fairdice-report"),
        PathBuf::from,
    );

    let bundle = run_report(&dataset, &[], &[], 0.05)?;
    for c in bundle.comparisons.iter().filter(|c| c.significant) {
        println!(
            "{:<4} {:>9} vs {:<9} U={:<6} p={:.5}",
            c.question, c.group_a, c.group_b, c.result.u_x, c.result.p_two_sided
        );
    }
    for note in &bundle.notes {
        println!("note: {note}");
    }
    let written = bundle.write_to(&out)?;
    println!("{} files in {}", written.len(), out.display());
    Ok(())
}
