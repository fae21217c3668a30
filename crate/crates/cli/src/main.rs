use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};

use confsel_core::adjustment::{enumerate_minimal_sufficient_sets, StructuralCriterion, DEFAULT_SUBSET_CAP};
use confsel_core::blanket::{Blankets, DSepOracle};
use confsel_core::dsep::{d_separated, ignorability_oracle};
use confsel_core::format::read_graph_file;
use confsel_core::sem::{ate_standardization, FisherZOracle, DEFAULT_ALPHA};
use confsel_core::testkit::{property_suites, SuiteConfig};
use confsel_core::{BlanketCriterion, Dag, Dataset, Error, LinearSem, SelectionReport, VertexId, VertexSet};

mod render;

#[derive(Parser)]
#[command(name = "confsel", version, about = "Confounder selection on causal DAGs")]
struct Cli {
    /// Human-readable output instead of JSON.
    #[arg(long, global = true)]
    text: bool,
    /// Worker threads for parallel library routines; results do not depend on it.
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Test whether X and Y are d-separated given a set.
    Dsep {
        graph: PathBuf,
        #[arg(long)]
        x: String,
        #[arg(long)]
        y: String,
        #[arg(long, default_value = "")]
        given: String,
        /// Query the graph with the treatment's outgoing edges removed.
        #[arg(long)]
        backdoor: bool,
    },
    /// Check whether a covariate set blocks every back-door path.
    Check {
        graph: PathBuf,
        #[arg(long)]
        set: String,
    },
    /// Select an adjustment set by a structural or blanket criterion.
    Select {
        graph: PathBuf,
        /// pretreatment, conjunctive, disjunctive, cap, cup, ay, ya, ay-star or ya-star.
        #[arg(long)]
        criterion: String,
        /// Candidate covariates; defaults to the observed pre-treatment covariates.
        #[arg(long)]
        s: Option<String>,
    },
    /// Select an adjustment set from data with Fisher-z tests.
    SelectData {
        data: PathBuf,
        /// cap, cup, ay, ya, ay-star or ya-star.
        #[arg(long)]
        criterion: String,
        #[arg(long)]
        treatment: String,
        #[arg(long)]
        outcome: String,
        #[arg(long, default_value_t = DEFAULT_ALPHA)]
        alpha: f64,
        /// Candidate columns; defaults to every other column.
        #[arg(long)]
        candidates: Option<String>,
    },
    /// List every minimal sufficient adjustment set.
    Minimal {
        graph: PathBuf,
        /// Candidate covariates; defaults to the observed pre-treatment covariates.
        #[arg(long)]
        s: Option<String>,
        #[arg(long, default_value_t = DEFAULT_SUBSET_CAP)]
        cap: usize,
    },
    /// Smallest causally closed superset of a vertex set.
    Closure {
        graph: PathBuf,
        #[arg(long)]
        set: String,
    },
    /// Sample a dataset from the SEM parameters in a graph file.
    Simulate {
        graph: PathBuf,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
        /// Threshold the treatment into {0, 1}.
        #[arg(long)]
        binary_treatment: bool,
        /// Also write latent columns.
        #[arg(long)]
        include_latent: bool,
    },
    /// Regression-adjusted effect estimate of the treatment on the outcome.
    Estimate {
        data: PathBuf,
        #[arg(long)]
        treatment: String,
        #[arg(long)]
        outcome: String,
        #[arg(long, default_value = "")]
        adjust: String,
    },
    /// Run the built-in property suites.
    Selftest {
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 30)]
        random_graphs: usize,
        #[arg(long, default_value_t = 8)]
        max_vertices: usize,
        /// Write failing graphs here as .cg files.
        #[arg(long)]
        counterexample_dir: Option<PathBuf>,
    },
}

/// Command failure carrying its exit code.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure { code: 1, message: message.into() }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::UnknownVertex(_) | Error::MissingColumn(_) => 3,
            Error::InvalidGraph(_) | Error::Parse { .. } | Error::InvalidSem(_) => 2,
            _ => 1,
        };
        Failure { code, message: e.to_string() }
    }
}

type CmdResult = Result<Value, Failure>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if let Some(jobs) = cli.jobs {
        if jobs == 0 {
            eprintln!("error: --jobs must be at least 1");
            return ExitCode::from(1);
        }
        let _ = rayon::ThreadPoolBuilder::new().num_threads(jobs).build_global();
    }
    let selftest = matches!(cli.command, Command::Selftest { .. });
    match run(cli.command) {
        Ok(value) => {
            if cli.text {
                print!("{}", render::text(&value));
            } else {
                println!("{}", serde_json::to_string_pretty(&value).expect("JSON value serializes"));
            }
            let failed = selftest && value["passed"] == json!(false);
            ExitCode::from(u8::from(failed))
        }
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn run(command: Command) -> CmdResult {
    match command {
        Command::Dsep { graph, x, y, given, backdoor } => cmd_dsep(&graph, &x, &y, &given, backdoor),
        Command::Check { graph, set } => cmd_check(&graph, &set),
        Command::Select { graph, criterion, s } => cmd_select(&graph, &criterion, s.as_deref()),
        Command::SelectData { data, criterion, treatment, outcome, alpha, candidates } => {
            cmd_select_data(&data, &criterion, &treatment, &outcome, alpha, candidates.as_deref())
        }
        Command::Minimal { graph, s, cap } => cmd_minimal(&graph, s.as_deref(), cap),
        Command::Closure { graph, set } => cmd_closure(&graph, &set),
        Command::Simulate { graph, n, seed, out, binary_treatment, include_latent } => {
            cmd_simulate(&graph, n, seed, &out, binary_treatment, include_latent)
        }
        Command::Estimate { data, treatment, outcome, adjust } => cmd_estimate(&data, &treatment, &outcome, &adjust),
        Command::Selftest { seed, random_graphs, max_vertices, counterexample_dir } => {
            cmd_selftest(seed, random_graphs, max_vertices, counterexample_dir)
        }
    }
}

/// Any failure to read or parse a graph file is an invalid-graph error.
fn load_graph(path: &Path) -> Result<confsel_core::format::GraphFile, Failure> {
    read_graph_file(path).map_err(|e| Failure {
        code: 2,
        message: format!("{}: {e}", path.display()),
    })
}

/// Comma-separated names; the empty string is the empty set.
fn split_names(list: &str) -> Vec<String> {
    list.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(str::to_string)
        .collect()
}

fn parse_set(g: &Dag, list: &str) -> Result<VertexSet, Failure> {
    Ok(g.set(split_names(list))?)
}

/// Candidate set from `--s`, defaulting to the observed pre-treatment
/// covariates. Latent vertices are dropped with a warning.
fn candidates(g: &Dag, list: Option<&str>) -> Result<(VertexSet, Vec<String>), Failure> {
    let Some(list) = list else {
        return Ok((g.pretreatment_covariates().difference(g.latent()), Vec::new()));
    };
    let s = parse_set(g, list)?;
    let latent = s.intersection(g.latent());
    let mut warnings = Vec::new();
    if !latent.is_empty() {
        warnings.push(format!("dropped latent candidates {:?}", g.names_of(&latent)));
    }
    Ok((s.difference(&latent), warnings))
}

fn cmd_dsep(path: &Path, x: &str, y: &str, given: &str, backdoor: bool) -> CmdResult {
    let g = load_graph(path)?.dag;
    let (xs, ys, zs) = (parse_set(&g, x)?, parse_set(&g, y)?, parse_set(&g, given)?);
    let host = if backdoor { g.mutilate_backdoor() } else { g.clone() };
    let separated = d_separated(&host, &xs, &ys, &zs)?;
    Ok(json!({
        "query": {
            "x": g.names_of(&xs),
            "y": g.names_of(&ys),
            "given": g.names_of(&zs),
            "backdoor": backdoor,
        },
        "separated": separated,
    }))
}

fn cmd_check(path: &Path, set: &str) -> CmdResult {
    let g = load_graph(path)?.dag;
    let c = parse_set(&g, set)?;
    let sufficient = ignorability_oracle(&g, &c)?;
    Ok(json!({ "set": g.names_of(&c), "sufficient": sufficient }))
}

fn structural(name: &str) -> Option<StructuralCriterion> {
    match name {
        "pretreatment" => Some(StructuralCriterion::Pretreatment),
        "conjunctive" => Some(StructuralCriterion::Conjunctive),
        "disjunctive" => Some(StructuralCriterion::Disjunctive),
        _ => None,
    }
}

fn report_value(report: &SelectionReport) -> Value {
    serde_json::to_value(report).expect("report serializes")
}

fn cmd_select(path: &Path, criterion: &str, s: Option<&str>) -> CmdResult {
    let g = load_graph(path)?.dag;
    let (s, dropped) = candidates(&g, s)?;
    let mut report = if let Some(c) = structural(criterion) {
        c.select(&g, &s)?
    } else if let Some(c) = BlanketCriterion::from_name(criterion) {
        reject_post_treatment(&g, &s)?;
        let oracle = DSepOracle::new(&g);
        let names: Vec<String> = g.vertices().map(|v| g.name(v).to_string()).collect();
        Blankets::new(&oracle, g.treatment(), g.outcome()).select(c, &s, &names, Some(&g))?
    } else {
        return Err(Failure::usage(format!("unknown criterion `{criterion}`")));
    };
    if report.is_sufficient() == Some(false) {
        report.warnings.push("the selected set does not block every back-door path".into());
    }
    report.warnings.splice(0..0, dropped);
    Ok(report_value(&report))
}

fn reject_post_treatment(g: &Dag, s: &VertexSet) -> Result<(), Failure> {
    let mut de = g.descendants(&VertexSet::singleton(g.treatment()));
    de.remove(g.treatment());
    let post = s.intersection(&de);
    if let Some(v) = post.iter().next() {
        if let Some(path) = confsel_core::graph::directed_path(g, g.treatment(), v) {
            let names: Vec<&str> = path.iter().map(|&p| g.name(p)).collect();
            eprintln!("note: {}", names.join(" -> "));
        }
        return Err(Error::PostTreatment(g.names_of(&post)).into());
    }
    Ok(())
}

#[derive(Serialize)]
struct DataSelection {
    #[serde(flatten)]
    report: SelectionReport,
    alpha: f64,
    n: usize,
    /// Oracle queries including the stability check.
    oracle_calls: usize,
}

fn cmd_select_data(
    path: &Path,
    criterion: &str,
    treatment: &str,
    outcome: &str,
    alpha: f64,
    candidates: Option<&str>,
) -> CmdResult {
    let Some(c) = BlanketCriterion::from_name(criterion) else {
        return Err(Failure::usage(if structural(criterion).is_some() {
            format!("criterion `{criterion}` needs a causal graph; use `select`")
        } else {
            format!("unknown criterion `{criterion}`")
        }));
    };
    let d = Dataset::read_csv(path)?;
    let a = VertexId(d.column_index(treatment)?);
    let y = VertexId(d.column_index(outcome)?);
    if a == y {
        return Err(Failure::usage("treatment and outcome must be different columns"));
    }
    let s: VertexSet = match candidates {
        Some(list) => split_names(list)
            .iter()
            .map(|n| d.column_index(n).map(VertexId))
            .collect::<Result<_, _>>()?,
        None => (0..d.columns().len()).map(VertexId).filter(|&v| v != a && v != y).collect(),
    };
    let oracle = FisherZOracle::new(&d, alpha)?;
    let blankets = Blankets::new(&oracle, a, y);
    let report = blankets.select(c, &s, d.columns(), None)?;
    Ok(serde_json::to_value(DataSelection {
        report,
        alpha,
        n: d.n_rows(),
        oracle_calls: blankets.calls(),
    })
    .expect("report serializes"))
}

fn cmd_minimal(path: &Path, s: Option<&str>, cap: usize) -> CmdResult {
    let g = load_graph(path)?.dag;
    let (s, warnings) = candidates(&g, s)?;
    let sets = enumerate_minimal_sufficient_sets(&g, &s, cap)?;
    let mut out = json!({
        "candidates": g.names_of(&s),
        "minimal_sets": sets.iter().map(|c| g.names_of(c)).collect::<Vec<_>>(),
    });
    if !warnings.is_empty() {
        out["warnings"] = json!(warnings);
    }
    Ok(out)
}

fn cmd_closure(path: &Path, set: &str) -> CmdResult {
    let g = load_graph(path)?.dag;
    let h = parse_set(&g, set)?;
    Ok(json!({ "set": g.names_of(&h), "closure": g.names_of(&g.causal_closure(&h)) }))
}

fn cmd_simulate(path: &Path, n: usize, seed: u64, out: &Path, binary: bool, include_latent: bool) -> CmdResult {
    let file = load_graph(path)?;
    let name = path.file_stem().map_or_else(String::new, |s| s.to_string_lossy().into_owned());
    let mut sem = LinearSem::from_graph_file(&file)?.with_name(name);
    if binary {
        sem = sem.with_binary_treatment();
    }
    let d = if include_latent { sem.sample_with_latent(n, seed)? } else { sem.sample(n, seed)? };
    d.write_csv(out)?;
    Ok(json!({
        "out": out.display().to_string(),
        "n": n,
        "seed": seed,
        "columns": d.columns(),
        "binary_treatment": binary,
    }))
}

fn cmd_estimate(path: &Path, treatment: &str, outcome: &str, adjust: &str) -> CmdResult {
    let d = Dataset::read_csv(path)?;
    let adjust = split_names(adjust);
    let refs: Vec<&str> = adjust.iter().map(String::as_str).collect();
    let estimate = ate_standardization(&d, treatment, outcome, &refs)?;
    Ok(json!({
        "treatment": treatment,
        "outcome": outcome,
        "adjust": adjust,
        "n": d.n_rows(),
        "estimate": estimate,
    }))
}

fn cmd_selftest(seed: u64, random_graphs: usize, max_vertices: usize, dir: Option<PathBuf>) -> CmdResult {
    let config = SuiteConfig {
        seed,
        random_graphs,
        max_vertices,
        counterexample_dir: dir,
    };
    let reports = property_suites(&config);
    let passed = reports.iter().all(|r| r.passed());
    Ok(json!({ "passed": passed, "suites": reports }))
}
