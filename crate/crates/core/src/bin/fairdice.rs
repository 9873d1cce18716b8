use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use fairdice::decision::{
    analytic_overlap_cost, monte_carlo_cost, nearest_mean_classifier, overlap_deterministic,
    overlap_randomized,
};
use fairdice::games::{
    build_harm_game, build_matching_pennies, build_rock_paper_scissors, fictitious_play, is_nash,
    solve_2x2_zero_sum,
};
use fairdice::ordinal::mann_whitney_u;
use fairdice::repeated::run_repeated;
use fairdice::report::run_report;
use fairdice::survey::{compare_groups, SurveyMeta};
use fairdice::{
    AgentPolicy, Classifier, CostMatrix, Density, Error, HarmScenario, LabelId, MixedProfile,
    Mixture, NormalFormGame, OrdinalSample, Result, SurveyDataset,
};

#[derive(Parser)]
#[command(
    name = "fairdice",
    version,
    about = "Randomized decisions, small games and Likert statistics"
)]
struct Cli {
    /// Seed for every random stream.
    #[arg(long, global = true, default_value_t = 42)]
    seed: u64,
    /// Directory for output files. `report` defaults to ./report.
    #[arg(long, global = true)]
    out_dir: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Table)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Table,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Monte Carlo cost of a classifier on a known mixture.
    ClassifyDemo {
        /// Mixture JSON (file or inline), or `overlap:A,B`.
        #[arg(long, default_value = "overlap:0.5,1")]
        mixture: String,
        /// Cost matrix JSON (file or inline), or `zero-one`.
        #[arg(long, default_value = "zero-one")]
        cost: String,
        /// bayes, md, mr, nearest-mean or constant:LABEL (1-based).
        #[arg(long, default_value = "bayes")]
        classifier: String,
        #[arg(long, default_value_t = 1_000_000)]
        n: usize,
    },
    /// Equilibrium of a zero-sum game.
    SolveGame {
        /// Game JSON (file or inline), `mp` or `rps`.
        #[arg(long)]
        game: Option<String>,
        /// Harm scenario mX,vX,mY,vY; replaces --game.
        #[arg(long)]
        harm: Option<String>,
        #[arg(long, value_enum, default_value_t = Method::Exact)]
        method: Method,
        #[arg(long, default_value_t = 100_000)]
        iters: usize,
    },
    /// Play a stage game repeatedly between two policies.
    SimulateRepeated {
        /// Game JSON, `mp`, `rps` or `harm:mX,vX,mY,vY`.
        #[arg(long)]
        game: String,
        /// pure:I, mixed:P1,P2,... or exploiter.
        #[arg(long)]
        row: String,
        #[arg(long)]
        col: String,
        #[arg(long, default_value_t = 1000)]
        rounds: usize,
        /// Per-round trace CSV; relative paths land in --out-dir when given.
        #[arg(long)]
        trace: Option<PathBuf>,
    },
    /// Mann-Whitney U test of two samples.
    Mwu {
        #[arg(long)]
        x: String,
        #[arg(long)]
        y: String,
        #[arg(long, default_value_t = 0.05)]
        alpha: f64,
    },
    /// Compare two groups' answers to one survey question.
    Compare {
        #[arg(long)]
        data: PathBuf,
        /// Survey metadata JSON; defaults to a five-point agreement scale.
        #[arg(long)]
        meta: Option<PathBuf>,
        #[arg(long)]
        question: String,
        /// Exactly two group names, comma separated.
        #[arg(long)]
        groups: String,
        #[arg(long, default_value_t = 0.05)]
        alpha: f64,
    },
    /// Summaries, pairwise tests and charts for a survey.
    Report {
        #[arg(long)]
        data: PathBuf,
        #[arg(long)]
        meta: Option<PathBuf>,
        /// Comma separated; all questions when omitted.
        #[arg(long)]
        questions: Option<String>,
        /// Comma separated; all groups when omitted.
        #[arg(long)]
        groups: Option<String>,
        #[arg(long, default_value_t = 0.05)]
        alpha: f64,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Method {
    Exact,
    Fp,
}

struct Table {
    header: Vec<String>,
    rows: Vec<Vec<String>>,
}

impl Table {
    fn new(header: &[&str]) -> Self {
        Table {
            header: header.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    fn fields(pairs: Vec<(&str, String)>) -> Self {
        let mut t = Table::new(&["field", "value"]);
        for (k, v) in pairs {
            t.push(vec![k.to_string(), v]);
        }
        t
    }

    fn push(&mut self, row: Vec<String>) {
        self.rows.push(row);
    }

    fn to_text(&self) -> String {
        let mut widths: Vec<usize> = self.header.iter().map(|h| h.len()).collect();
        for r in &self.rows {
            for (w, cell) in widths.iter_mut().zip(r) {
                *w = (*w).max(cell.chars().count());
            }
        }
        let line = |cells: &[String]| {
            let parts: Vec<String> = cells
                .iter()
                .zip(&widths)
                .map(|(c, w)| format!("{c:<w$}"))
                .collect();
            parts.join("  ").trim_end().to_string() + "\n"
        };
        let mut out = line(&self.header);
        out += &line(&widths.iter().map(|w| "-".repeat(*w)).collect::<Vec<_>>());
        for r in &self.rows {
            out += &line(r);
        }
        out
    }

    fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.header)?;
        for r in &self.rows {
            w.write_record(r)?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Io(e.into_error()))?;
        Ok(String::from_utf8_lossy(&bytes).into_owned())
    }
}

fn invalid(msg: impl Into<String>) -> Error {
    Error::Input(msg.into())
}

/// File contents, or the argument itself when it looks like inline JSON.
fn json_arg(arg: &str) -> Result<String> {
    if arg.trim_start().starts_with('{') {
        Ok(arg.to_string())
    } else {
        read_input(Path::new(arg))
    }
}

fn read_input(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| invalid(format!("cannot read {}: {e}", path.display())))
}

fn numbers(text: &str, what: &str) -> Result<Vec<f64>> {
    text.split(',')
        .map(|t| {
            t.trim()
                .parse::<f64>()
                .map_err(|_| invalid(format!("bad number {t:?} in {what}")))
        })
        .collect()
}

fn names(text: &str) -> Vec<String> {
    text.split(',')
        .map(|s| s.trim().to_string())
        .filter(|s| !s.is_empty())
        .collect()
}

fn harm_scenario(text: &str) -> Result<HarmScenario> {
    match numbers(text, "harm scenario")?.as_slice() {
        &[mx, vx, my, vy] => HarmScenario::new(mx, vx, my, vy),
        _ => Err(invalid("harm scenario needs four numbers mX,vX,mY,vY")),
    }
}

fn game_arg(spec: &str) -> Result<NormalFormGame> {
    match spec {
        "mp" => Ok(build_matching_pennies()),
        "rps" => Ok(build_rock_paper_scissors()),
        s if s.starts_with("harm:") => build_harm_game(&harm_scenario(&s[5..])?),
        s => NormalFormGame::from_json(&json_arg(s)?),
    }
}

/// `(a, b)` when the mixture is the shifted-uniform pair.
fn overlap_params(m: &Mixture) -> Option<(f64, f64)> {
    match m.components() {
        [c1, c2] => match (&c1.density, &c2.density) {
            (Density::Uniform { lo: 0.0, hi: b }, Density::Uniform { lo: a, hi })
                if (a + b - hi).abs() <= 1e-12 * (1.0 + hi.abs()) && c1.prior == 0.5 =>
            {
                Some((*a, *b))
            }
            _ => None,
        },
        _ => None,
    }
}

fn classify_demo(
    seed: u64,
    mixture: &str,
    cost: &str,
    classifier: &str,
    n: usize,
) -> Result<Table> {
    let mixture = match mixture.strip_prefix("overlap:") {
        Some(ab) => match numbers(ab, "overlap mixture")?.as_slice() {
            &[a, b] => Mixture::shifted_uniforms(a, b)?,
            _ => return Err(invalid("overlap mixture needs two numbers A,B")),
        },
        None => Mixture::from_json(&json_arg(mixture)?)?,
    };
    let k = mixture.num_classes();
    let zero_one = cost == "zero-one";
    let cost = if zero_one {
        CostMatrix::zero_one(k)
    } else {
        serde_json::from_str(&json_arg(cost)?)?
    };
    let overlap = overlap_params(&mixture);
    let need_overlap = || overlap.ok_or_else(|| invalid("md and mr need an overlap:A,B mixture"));
    let (clf, analytic) = match classifier {
        "bayes" => (Classifier::bayes(&mixture, &cost)?, None),
        "nearest-mean" => (nearest_mean_classifier(&mixture)?, None),
        "md" | "mr" => {
            let (a, b) = need_overlap()?;
            let clf = if classifier == "md" {
                overlap_deterministic(a, b)?
            } else {
                overlap_randomized(a, b)?
            };
            (
                clf,
                zero_one.then(|| analytic_overlap_cost(a, b)).transpose()?,
            )
        }
        c => match c.strip_prefix("constant:") {
            Some(label) => {
                let label: usize = label
                    .trim()
                    .parse()
                    .map_err(|_| invalid(format!("bad label in {c:?}")))?;
                if label == 0 || label > k {
                    return Err(invalid(format!("label {label} outside 1..={k}")));
                }
                let id = LabelId(label - 1);
                (
                    Classifier::constant(id, k)?,
                    zero_one.then(|| 1.0 - mixture.prior(id)),
                )
            }
            None => return Err(invalid(format!("unknown classifier {c:?}"))),
        },
    };
    let est = monte_carlo_cost(&mixture, &cost, &clf, n, seed)?;
    Ok(Table::fields(vec![
        ("classifier", clf.name().to_string()),
        ("n", est.n.to_string()),
        ("seed", est.seed.to_string()),
        ("mean_cost", format!("{:.6}", est.mean_cost)),
        ("standard_error", format!("{:.6}", est.standard_error)),
        (
            "analytic_cost",
            analytic.map_or("-".into(), |v| format!("{v:.6}")),
        ),
    ]))
}

fn fmt_probs(p: &[f64]) -> String {
    p.iter()
        .map(|v| format!("{v:.6}"))
        .collect::<Vec<_>>()
        .join(" ")
}

fn solve_game(
    seed: u64,
    game: Option<&str>,
    harm: Option<&str>,
    method: Method,
    iters: usize,
) -> Result<Table> {
    let game = match (harm, game) {
        (Some(h), _) => build_harm_game(&harm_scenario(h)?)?,
        (None, Some(g)) => game_arg(g)?,
        (None, None) => return Err(invalid("give --game or --harm")),
    };
    let mut rows = Vec::new();
    let (profile, value): (MixedProfile, f64) = match method {
        Method::Exact => {
            let eq = solve_2x2_zero_sum(&game)?;
            (eq.profile, eq.value)
        }
        Method::Fp => {
            let fp = fictitious_play(&game, iters, seed)?;
            rows.push(("iterations", fp.iterations.to_string()));
            rows.push((
                "value_bounds",
                format!("[{:.6}, {:.6}]", fp.lower_bound, fp.upper_bound),
            ));
            (fp.profile, fp.value)
        }
    };
    let mut out = vec![
        ("row_actions", game.row_actions().join(" | ")),
        ("row_strategy", fmt_probs(profile.row.probs())),
        ("col_actions", game.col_actions().join(" | ")),
        ("col_strategy", fmt_probs(profile.col.probs())),
        ("value", format!("{value:.6}")),
    ];
    out.extend(rows);
    out.push(("is_nash_1e-9", is_nash(&game, &profile, 1e-9).to_string()));
    Ok(Table::fields(out))
}

fn simulate(
    seed: u64,
    out_dir: Option<&Path>,
    game: &str,
    row: &str,
    col: &str,
    rounds: usize,
    trace_path: Option<&Path>,
) -> Result<Table> {
    let game = game_arg(game)?;
    let (row, col): (AgentPolicy, AgentPolicy) = (row.parse()?, col.parse()?);
    let (trace, s) = run_repeated(&game, &row, &col, rounds, seed)?;
    let mut out = vec![
        ("row_policy", row.to_string()),
        ("col_policy", col.to_string()),
        ("rounds", rounds.to_string()),
        ("average_row_payoff", format!("{:.6}", s.average_row_payoff)),
        ("average_col_payoff", format!("{:.6}", s.average_col_payoff)),
        ("row_frequencies", fmt_probs(s.row_frequencies.probs())),
        ("col_frequencies", fmt_probs(s.col_frequencies.probs())),
    ];
    if let Some(p) = trace_path {
        let path = match out_dir {
            Some(dir) if p.is_relative() => {
                fs::create_dir_all(dir)?;
                dir.join(p)
            }
            _ => p.to_path_buf(),
        };
        trace.write_csv(fs::File::create(&path)?)?;
        out.push(("trace", path.display().to_string()));
    }
    Ok(Table::fields(out))
}

fn mwu_rows(table: &mut Table, label: &str, r: &fairdice::MwuResult) {
    table.push(vec![
        label.to_string(),
        r.n.to_string(),
        r.m.to_string(),
        r.u_x.to_string(),
        r.u_y.to_string(),
        format!("{:.6}", r.z),
        fmt_p(r.p_two_sided),
        r.significant.to_string(),
        if r.degenerate {
            "all values equal".into()
        } else {
            String::new()
        },
    ]);
}

fn fmt_p(p: f64) -> String {
    if p >= 1e-4 {
        format!("{p:.6}")
    } else {
        format!("{p:.3e}")
    }
}

const MWU_HEADER: [&str; 9] = [
    "comparison",
    "n",
    "m",
    "U_x",
    "U_y",
    "z",
    "p",
    "significant",
    "note",
];

fn mwu(x: &str, y: &str, alpha: f64) -> Result<Table> {
    let xs = OrdinalSample::new(numbers(x, "--x")?)?;
    let ys = OrdinalSample::new(numbers(y, "--y")?)?;
    let mut t = Table::new(&MWU_HEADER);
    mwu_rows(&mut t, "x vs y", &mann_whitney_u(&xs, &ys, alpha)?);
    Ok(t)
}

fn load_dataset(data: &Path, meta: Option<&Path>) -> Result<SurveyDataset> {
    let meta = match meta {
        Some(p) => SurveyMeta::from_json(&read_input(p)?)?,
        None => SurveyMeta::default(),
    };
    SurveyDataset::from_reader(read_input(data)?.as_bytes(), meta)
}

fn compare(
    data: &Path,
    meta: Option<&Path>,
    question: &str,
    groups: &str,
    alpha: f64,
) -> Result<Table> {
    let ds = load_dataset(data, meta)?;
    let g = names(groups);
    if g.len() != 2 {
        return Err(invalid("--groups needs exactly two names"));
    }
    let c = compare_groups(&ds, question, &g[0], &g[1], alpha)?;
    let mut t = Table::new(&MWU_HEADER);
    mwu_rows(
        &mut t,
        &format!("{question}: {} vs {}", c.group_a, c.group_b),
        &c.result,
    );
    Ok(t)
}

fn report(
    out_dir: Option<&Path>,
    data: &Path,
    meta: Option<&Path>,
    questions: Option<&str>,
    groups: Option<&str>,
    alpha: f64,
) -> Result<Table> {
    let ds = load_dataset(data, meta)?;
    let questions = questions.map(names).unwrap_or_default();
    let groups = groups.map(names).unwrap_or_default();
    let bundle = run_report(&ds, &questions, &groups, alpha)?;
    let dir = out_dir.map_or_else(|| PathBuf::from("report"), Path::to_path_buf);
    let written = bundle.write_to(&dir)?;
    let mut t = Table::new(&MWU_HEADER);
    for c in &bundle.comparisons {
        mwu_rows(
            &mut t,
            &format!("{}: {} vs {}", c.question, c.group_a, c.group_b),
            &c.result,
        );
    }
    for n in &bundle.notes {
        eprintln!("note: {n}");
    }
    eprintln!("wrote {} files to {}", written.len(), dir.display());
    Ok(t)
}

fn run(cli: &Cli) -> Result<(&'static str, Table)> {
    let out_dir = cli.out_dir.as_deref();
    Ok(match &cli.command {
        Command::ClassifyDemo {
            mixture,
            cost,
            classifier,
            n,
        } => (
            "classify-demo",
            classify_demo(cli.seed, mixture, cost, classifier, *n)?,
        ),
        Command::SolveGame {
            game,
            harm,
            method,
            iters,
        } => (
            "solve-game",
            solve_game(cli.seed, game.as_deref(), harm.as_deref(), *method, *iters)?,
        ),
        Command::SimulateRepeated {
            game,
            row,
            col,
            rounds,
            trace,
        } => (
            "simulate-repeated",
            simulate(cli.seed, out_dir, game, row, col, *rounds, trace.as_deref())?,
        ),
        Command::Mwu { x, y, alpha } => ("mwu", mwu(x, y, *alpha)?),
        Command::Compare {
            data,
            meta,
            question,
            groups,
            alpha,
        } => (
            "compare",
            compare(data, meta.as_deref(), question, groups, *alpha)?,
        ),
        Command::Report {
            data,
            meta,
            questions,
            groups,
            alpha,
        } => (
            "report",
            report(
                out_dir,
                data,
                meta.as_deref(),
                questions.as_deref(),
                groups.as_deref(),
                *alpha,
            )?,
        ),
    })
}

fn emit(cli: &Cli, name: &str, table: &Table) -> Result<()> {
    let body = match cli.format {
        Format::Table => table.to_text(),
        Format::Csv => table.to_csv()?,
    };
    std::io::stdout().write_all(body.as_bytes())?;
    // report writes its own files
    if let (Some(dir), false) = (&cli.out_dir, name == "report") {
        fs::create_dir_all(dir)?;
        fs::write(dir.join(format!("{name}.csv")), table.to_csv()?)?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli).and_then(|(name, table)| emit(&cli, name, &table)) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_validation() { 2 } else { 1 })
        }
    }
}
