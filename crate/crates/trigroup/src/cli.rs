//! Command-line front end.

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use thiserror::Error;
use trigroup_core::collapse::{decide, verify, Budget, Outcome};
use trigroup_core::davkd::analysis::{
    boundary_bound_from, constraint_analysis, fulfillability_upper_bound, parse_decimal, Q,
};
use trigroup_core::davkd::arithmetic::{default_b, evaluate_arithmetic, DEFAULT_A};
use trigroup_core::davkd::diagram::{Diagram, DiagramStream, Mode};
use trigroup_core::davkd::verify::tally;
use trigroup_core::sampling::{sample_presentation, SampleConfig};
use trigroup_core::threshold::boost::{default_r_fixed, letter_closure, BoostConfig};
use trigroup_core::threshold::estimate::TrialRecord;
use trigroup_core::threshold::stats::{wilson, Z95};
use trigroup_core::threshold::sweep::{p_of_c, parse_grid};

use crate::format::{self, parse_diagram, parse_presentation};
use crate::manifest::{emit, jsonl, RunManifest};
use crate::runner;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;

#[derive(Parser, Debug)]
#[command(
    name = "trigroup",
    version,
    about = "Random triangular group presentations: sampling, collapse certificates, diagram analysis and threshold experiments"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Sample a presentation of Γ(n, p)
    Sample(SampleArgs),
    /// Decide whether a presentation collapses, with a certificate
    Decide(DecideArgs),
    /// Coupled sweep of p = c·n^(-3/2) over a grid of c
    Sweep(SweepArgs),
    /// Bisection for the c at which the certified-trivial fraction is 1/2
    Threshold(ThresholdArgs),
    /// Paired comparison of collapse with added relators
    Boost(BoostArgs),
    /// Enumerate decorated diagrams with m faces
    DavkdEnum(DavkdEnumArgs),
    /// Analyse one diagram, or check the boundary inequality for all diagrams with m faces
    DavkdCheck(DavkdCheckArgs),
    /// Statistics of the graph induced by relators meeting Z once
    Zgraph(ZgraphArgs),
    /// Length-two paths in the graph built from planted prefix pairs
    Paths(PathsArgs),
    /// Evaluate the asymptotic parameters at a finite n
    Arithmetic(ArithmeticArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Switch {
    On,
    Off,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ModeArg {
    Raw,
    Canonical,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct Engine {
    /// Coset table cap for the enumeration stage; 0 skips the stage
    #[arg(long, default_value_t = 10_000)]
    pub max_cosets: usize,
    /// Run the deduction cascade stage
    #[arg(long, value_enum, default_value_t = Switch::On)]
    pub cascade: Switch,
}

impl Engine {
    fn budget(&self) -> Budget {
        Budget {
            cascade: self.cascade == Switch::On,
            abelianization: true,
            max_cosets: self.max_cosets,
        }
    }
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct Run {
    /// Master seed
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// Worker threads (0 = one per core); never changes the output
    #[arg(long, default_value_t = 0)]
    #[serde(skip)]
    pub threads: usize,
    /// Output file; stdout when absent
    #[arg(long)]
    #[serde(skip)]
    pub output: Option<PathBuf>,
}

#[derive(Args, Debug, Serialize)]
pub struct SampleArgs {
    /// Number of generators
    #[arg(long)]
    pub n: u32,
    /// Inclusion probability of each relator
    #[arg(long)]
    pub p: f64,
    #[command(flatten)]
    #[serde(flatten)]
    pub run: Run,
}

#[derive(Args, Debug, Serialize)]
pub struct DecideArgs {
    /// Presentation file (text or JSON)
    #[arg(long)]
    #[serde(skip)]
    pub input: PathBuf,
    #[command(flatten)]
    #[serde(flatten)]
    pub engine: Engine,
    /// Verdict JSON file; only the outcome is printed when absent
    #[arg(long)]
    #[serde(skip)]
    pub output: Option<PathBuf>,
}

#[derive(Args, Debug, Serialize)]
pub struct SweepArgs {
    #[arg(long)]
    pub n: u32,
    /// Grid of c values as lo:hi:step
    #[arg(long)]
    pub c: String,
    #[arg(long, default_value_t = 200)]
    pub trials: u64,
    #[command(flatten)]
    #[serde(flatten)]
    pub engine: Engine,
    #[command(flatten)]
    #[serde(flatten)]
    pub run: Run,
}

#[derive(Args, Debug, Serialize)]
pub struct ThresholdArgs {
    #[arg(long)]
    pub n: u32,
    /// Search range and tolerance as lo:hi:tol
    #[arg(long)]
    pub c: String,
    #[arg(long, default_value_t = 200)]
    pub trials: u64,
    #[command(flatten)]
    #[serde(flatten)]
    pub engine: Engine,
    #[command(flatten)]
    #[serde(flatten)]
    pub run: Run,
}

#[derive(Args, Debug, Serialize)]
pub struct BoostArgs {
    #[arg(long)]
    pub n: u32,
    #[arg(long)]
    pub p: f64,
    /// Sprinkle density relative to p
    #[arg(long, default_value_t = 0.1)]
    pub eps: f64,
    #[arg(long, default_value_t = 200)]
    pub trials: u64,
    /// Presentation file holding the fixed relator set (default: g1 g1 g2, g2 g2 g3, g3 g3 g1)
    #[arg(long)]
    #[serde(skip)]
    pub input: Option<PathBuf>,
    #[command(flatten)]
    #[serde(flatten)]
    pub engine: Engine,
    #[command(flatten)]
    #[serde(flatten)]
    pub run: Run,
}

#[derive(Args, Debug, Serialize)]
pub struct DavkdEnumArgs {
    /// Number of faces
    #[arg(long)]
    pub m: usize,
    #[arg(long, value_enum, default_value_t = ModeArg::Canonical)]
    pub mode: ModeArg,
    /// f in d = 1/2 - f/3, as an exact decimal
    #[arg(long, default_value = "0.1")]
    pub f: String,
    /// Output file; stdout when absent
    #[arg(long)]
    #[serde(skip)]
    pub output: Option<PathBuf>,
}

#[derive(Args, Debug, Serialize)]
pub struct DavkdCheckArgs {
    /// Diagram JSON file
    #[arg(long, conflicts_with = "m", required_unless_present = "m")]
    #[serde(skip)]
    pub input: Option<PathBuf>,
    /// Check every reduced diagram with this many faces instead
    #[arg(long)]
    pub m: Option<usize>,
    /// f values as exact decimals (repeatable; default 0.1, 0.3, 0.9)
    #[arg(long)]
    pub f: Vec<String>,
    /// Generators for the fulfillability bound
    #[arg(long, requires = "p")]
    pub n: Option<u32>,
    /// Relator probability for the fulfillability bound
    #[arg(long, requires = "n")]
    pub p: Option<f64>,
    /// Worker threads (0 = one per core); never changes the output
    #[arg(long, default_value_t = 0)]
    #[serde(skip)]
    pub threads: usize,
    /// Output file; stdout when absent
    #[arg(long)]
    #[serde(skip)]
    pub output: Option<PathBuf>,
}

#[derive(Args, Debug, Serialize)]
pub struct ZgraphArgs {
    #[arg(long)]
    pub n: u32,
    #[arg(long)]
    pub p: f64,
    #[arg(long, default_value_t = 200)]
    pub trials: u64,
    /// Presentation file whose letters form Z (default: g1, g2, g3 and inverses)
    #[arg(long)]
    #[serde(skip)]
    pub input: Option<PathBuf>,
    #[command(flatten)]
    #[serde(flatten)]
    pub run: Run,
}

#[derive(Args, Debug, Serialize)]
pub struct PathsArgs {
    #[arg(long)]
    pub n: u32,
    /// Number of planted letter pairs
    #[arg(long)]
    pub pairs: usize,
    #[arg(long, default_value_t = 1.0)]
    pub eps: f64,
    #[arg(long)]
    pub p: f64,
    #[arg(long, default_value_t = 1000)]
    pub trials: u64,
    #[command(flatten)]
    #[serde(flatten)]
    pub run: Run,
}

#[derive(Args, Debug, Serialize)]
pub struct ArithmeticArgs {
    /// n as a real number, e.g. 1e6
    #[arg(long)]
    pub n: f64,
    /// Output file; stdout when absent
    #[arg(long)]
    #[serde(skip)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Budget(String),
    #[error("{0}")]
    Failure(String),
    #[error("{0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Budget(_) => EXIT_BUDGET,
            CliError::Failure(_) | CliError::Io(_) => EXIT_FAILURE,
        }
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path)
        .map_err(|e| CliError::Io(std::io::Error::new(e.kind(), format!("{}: {e}", path.display()))))
}

fn read_presentation(path: &Path) -> Result<trigroup_core::Presentation, CliError> {
    parse_presentation(&read(path)?).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
}

fn grid(spec: &str) -> Result<Vec<f64>, CliError> {
    parse_grid(spec).ok_or_else(|| CliError::Usage(format!("--c expects lo:hi:step with 0 < step and lo <= hi, got {spec:?}")))
}

fn probability(p: f64, flag: &str) -> Result<f64, CliError> {
    if (0.0..=1.0).contains(&p) {
        Ok(p)
    } else {
        Err(CliError::Usage(format!("{flag} must lie in [0, 1], got {p}")))
    }
}

fn decimal(s: &str) -> Result<Q, CliError> {
    parse_decimal(s).ok_or_else(|| CliError::Usage(format!("--f expects a plain decimal such as 0.3, got {s:?}")))
}

/// Parses `argv` (including the program name) and runs the subcommand.
/// Returns the process exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    match dispatch(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn dispatch(cmd: Command) -> Result<i32, CliError> {
    match cmd {
        Command::Sample(a) => sample(a),
        Command::Decide(a) => decide_cmd(a),
        Command::Sweep(a) => sweep(a),
        Command::Threshold(a) => threshold(a),
        Command::Boost(a) => boost(a),
        Command::DavkdEnum(a) => davkd_enum(a),
        Command::DavkdCheck(a) => davkd_check(a),
        Command::Zgraph(a) => zgraph(a),
        Command::Paths(a) => paths(a),
        Command::Arithmetic(a) => arithmetic(a),
    }
}

fn sample(a: SampleArgs) -> Result<i32, CliError> {
    let cfg = SampleConfig::new(a.n, probability(a.p, "--p")?, a.run.seed);
    cfg.validate().map_err(|e| CliError::Usage(e.to_string()))?;
    let p = sample_presentation(&cfg);
    let manifest = RunManifest::new("sample", &a, Some(a.run.seed), None);
    let json = a.run.output.as_ref().is_some_and(|o| o.extension().is_some_and(|e| e == "json"));
    let body = if json {
        format::to_json(&p) + "\n"
    } else {
        // the manifest comment follows the format header
        let text = format::to_text(&p);
        let (head, rest) = text.split_once('\n').expect("header line");
        format!("{head}\n{}{rest}", manifest.comment_header())
    };
    emit(a.run.output.as_deref(), &body, &manifest, 1)?;
    Ok(EXIT_OK)
}

#[derive(Serialize)]
struct DecideOutput<'a> {
    manifest: &'a RunManifest,
    verdict: &'a trigroup_core::Verdict,
    certificate_verified: bool,
}

fn decide_cmd(a: DecideArgs) -> Result<i32, CliError> {
    let p = read_presentation(&a.input)?;
    let v = decide(&p, &a.engine.budget());
    let checked = verify(&p, &v).is_ok();
    println!("{:?}", v.outcome);
    if let Some(out) = &a.output {
        let manifest = RunManifest::new("decide", &a, None, Some(&a.input));
        let body = serde_json::to_string(&DecideOutput {
            manifest: &manifest,
            verdict: &v,
            certificate_verified: checked,
        })
        .expect("plain data")
            + "\n";
        emit(Some(out), &body, &manifest, 1)?;
    }
    if !checked {
        return Err(CliError::Failure("certificate failed verification".into()));
    }
    Ok(if v.outcome == Outcome::Undecided {
        eprintln!("undecided within the budget; raise --max-cosets");
        EXIT_BUDGET
    } else {
        EXIT_OK
    })
}

fn wants_jsonl(out: &Option<PathBuf>) -> bool {
    out.as_ref().is_some_and(|o| o.extension().is_some_and(|e| e == "jsonl"))
}

fn sweep(a: SweepArgs) -> Result<i32, CliError> {
    let g = grid(&a.c)?;
    let budget = a.engine.budget();
    let (runs, curve) = runner::with_threads(a.run.threads, || runner::sweep(a.n, &g, a.trials, &budget, a.run.seed));
    let manifest = RunManifest::new("sweep", &a, Some(a.run.seed), None);
    let summary = serde_json::json!({
        "c_hat": curve.c_hat,
        "window": curve.window,
        "relative_width_ci": curve.relative_width_ci,
        "raw_monotone_violations": curve.raw_monotone_violations,
        "contradictions": curve.contradictions,
    });
    let body = if wants_jsonl(&a.run.output) {
        let rows = runs.iter().flat_map(|t| {
            g.iter().enumerate().map(move |(j, &c)| TrialRecord {
                trial: t.trial,
                seed: a.run.seed,
                n: a.n,
                p: p_of_c(a.n, c),
                verdict: t.outcomes[j],
                stage: t.stages[j],
                budget_spent: t.spent[j],
            })
        });
        format!(
            "{}{}{{\"summary\":{}}}\n",
            manifest.jsonl_header(),
            jsonl(rows),
            serde_json::to_string(&curve).expect("plain data")
        )
    } else {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["c", "p", "lower", "upper", "undecided", "ci_lo", "ci_hi"])
            .map_err(|e| CliError::Failure(e.to_string()))?;
        for pt in &curve.points {
            let e = &pt.estimate;
            let (lo, hi) = wilson(e.counts.trivial, e.trials, Z95);
            w.write_record([pt.c, e.p, e.lower, e.upper, e.undecided, lo, hi].map(|x| x.to_string()))
                .map_err(|e| CliError::Failure(e.to_string()))?;
        }
        let table = String::from_utf8(w.into_inner().map_err(|e| CliError::Failure(e.to_string()))?)
            .expect("ascii");
        format!("{}{table}# summary {summary}\n", manifest.comment_header())
    };
    emit(a.run.output.as_deref(), &body, &manifest, a.run.threads)?;
    Ok(EXIT_OK)
}

fn threshold(a: ThresholdArgs) -> Result<i32, CliError> {
    let parts: Vec<f64> = a
        .c
        .split(':')
        .map(|s| s.trim().parse::<f64>())
        .collect::<Result<_, _>>()
        .map_err(|_| CliError::Usage(format!("--c expects lo:hi:tol, got {:?}", a.c)))?;
    let [lo, hi, tol] = parts[..] else {
        return Err(CliError::Usage(format!("--c expects lo:hi:tol, got {:?}", a.c)));
    };
    if !(lo < hi) || !(tol > 0.0) {
        return Err(CliError::Usage("--c needs lo < hi and tol > 0".into()));
    }
    let budget = a.engine.budget();
    let res = runner::with_threads(a.run.threads, || {
        runner::find_threshold(a.n, a.trials, tol, a.run.seed, &budget, lo, hi)
    })
    .map_err(|e| CliError::Failure(e.to_string()))?;
    let manifest = RunManifest::new("threshold", &a, Some(a.run.seed), None);
    let body = format!(
        "{{\"manifest\":{},\"result\":{}}}\n",
        manifest.to_json(),
        serde_json::to_string(&res).expect("plain data")
    );
    emit(a.run.output.as_deref(), &body, &manifest, a.run.threads)?;
    Ok(EXIT_OK)
}

fn boost(a: BoostArgs) -> Result<i32, CliError> {
    let r_fixed = match &a.input {
        Some(path) => read_presentation(path)?.relators().to_vec(),
        None => default_r_fixed(),
    };
    if r_fixed.iter().any(|r| r.max_generator() > a.n) {
        return Err(CliError::Usage(format!("the fixed relators need more than n = {} generators", a.n)));
    }
    let cfg = BoostConfig {
        n: a.n,
        p: probability(a.p, "--p")?,
        eps: a.eps,
        r_fixed,
        trials: a.trials,
        seed: a.run.seed,
        budget: a.engine.budget(),
    };
    let (runs, report) = runner::with_threads(a.run.threads, || runner::boost(&cfg));
    let manifest = RunManifest::new("boost", &cfg, Some(a.run.seed), a.input.as_deref());
    let body = format!(
        "{}{}{{\"summary\":{}}}\n",
        manifest.jsonl_header(),
        jsonl(&runs),
        serde_json::to_string(&report).expect("plain data")
    );
    emit(a.run.output.as_deref(), &body, &manifest, a.run.threads)?;
    Ok(EXIT_OK)
}

#[derive(Serialize)]
struct DiagramRow {
    m: usize,
    k: usize,
    l1: usize,
    l2: usize,
    #[serde(rename = "C")]
    components: Vec<u32>,
    d: Vec<String>,
    min_d: String,
    bound_lhs: String,
    bound_rhs: String,
    reduced: bool,
    orbit: u64,
    diagram: trigroup_core::davkd::diagram::DiagramJson,
}

fn row(d: &Diagram, f: Q, orbit: u64) -> DiagramRow {
    let a = constraint_analysis(d, f);
    let b = boundary_bound_from(d, &a);
    DiagramRow {
        m: d.m(),
        k: d.k(),
        l1: d.l1(),
        l2: d.l2(),
        d: a.d.iter().map(|x| x.to_string()).collect(),
        min_d: a.min_d().to_string(),
        components: a.components,
        bound_lhs: b.lhs.to_string(),
        bound_rhs: b.rhs.to_string(),
        reduced: d.is_reduced(),
        orbit,
        diagram: d.to_json(),
    }
}

fn davkd_enum(a: DavkdEnumArgs) -> Result<i32, CliError> {
    if a.m == 0 {
        return Err(CliError::Usage("--m must be at least 1".into()));
    }
    let f = decimal(&a.f)?;
    let mode = match a.mode {
        ModeArg::Raw => Mode::Raw,
        ModeArg::Canonical => Mode::Canonical,
    };
    let stream = DiagramStream::new(a.m, mode).map_err(|e| CliError::Failure(e.to_string()))?;
    let manifest = RunManifest::new("davkd-enum", &a, None, None);
    let mut body = manifest.jsonl_header();
    for (d, orbit) in stream {
        body.push_str(&serde_json::to_string(&row(&d, f, orbit)).expect("plain data"));
        body.push('\n');
    }
    emit(a.output.as_deref(), &body, &manifest, 1)?;
    Ok(EXIT_OK)
}

fn f_values(fs: &[String]) -> Result<Vec<Q>, CliError> {
    if fs.is_empty() {
        Ok(vec![Q::new(1, 10), Q::new(3, 10), Q::new(9, 10)])
    } else {
        fs.iter().map(|s| decimal(s)).collect()
    }
}

fn davkd_check(a: DavkdCheckArgs) -> Result<i32, CliError> {
    let fs = f_values(&a.f)?;
    let manifest = RunManifest::new("davkd-check", &a, None, a.input.as_deref());
    let mut body = manifest.jsonl_header();
    if let Some(m) = a.m {
        if m == 0 {
            return Err(CliError::Usage("--m must be at least 1".into()));
        }
        let hist = runner::with_threads(a.threads, || runner::boundary_histogram(m));
        for f in fs {
            let t = tally(m, &hist, f);
            let line = serde_json::json!({
                "m": m,
                "f": f.to_string(),
                "reduced": t.reduced,
                "violations": t.violations,
                "equalities": t.equalities,
                "equality_with_edges": t.equality_with_edges,
                "strict_edgeless": t.strict_edgeless,
                "self_inverse": t.self_inverse,
                "violations_without_self_inverse": t.violations_without_self_inverse,
                "holds_everywhere": t.holds_everywhere(),
                "equality_iff_edgeless": t.equality_iff_edgeless(),
            });
            body.push_str(&line.to_string());
            body.push('\n');
        }
    } else {
        let path = a.input.as_ref().expect("clap enforces --input or --m");
        let d = parse_diagram(&read(path)?).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
        for f in fs {
            let mut v = serde_json::to_value(row(&d, f, 1)).expect("plain data");
            v["f"] = f.to_string().into();
            v["holds"] = (boundary_bound_from(&d, &constraint_analysis(&d, f)).holds).into();
            if let (Some(n), Some(p)) = (a.n, a.p) {
                v["fulfillability_bound"] = fulfillability_upper_bound(&d, n, probability(p, "--p")?).into();
            }
            body.push_str(&v.to_string());
            body.push('\n');
        }
    }
    emit(a.output.as_deref(), &body, &manifest, a.threads)?;
    Ok(EXIT_OK)
}

fn zgraph(a: ZgraphArgs) -> Result<i32, CliError> {
    let rels = match &a.input {
        Some(path) => read_presentation(path)?.relators().to_vec(),
        None => default_r_fixed(),
    };
    let z = letter_closure(&rels);
    if z.iter().any(|l| l.generator() > a.n) {
        return Err(CliError::Usage(format!("Z uses generators beyond n = {}", a.n)));
    }
    let p = probability(a.p, "--p")?;
    let (runs, summary) = runner::with_threads(a.run.threads, || runner::zgraph(a.n, p, &z, a.trials, a.run.seed));
    let manifest = RunManifest::new("zgraph", &a, Some(a.run.seed), a.input.as_deref());
    let body = format!(
        "{}{}{{\"summary\":{}}}\n",
        manifest.jsonl_header(),
        jsonl(&runs),
        serde_json::to_string(&summary).expect("plain data")
    );
    emit(a.run.output.as_deref(), &body, &manifest, a.run.threads)?;
    Ok(EXIT_OK)
}

fn paths(a: PathsArgs) -> Result<i32, CliError> {
    let available = trigroup_core::threshold::paths::admissible_pairs(a.n).len();
    if a.pairs > available {
        return Err(CliError::Usage(format!("--pairs is at most {available} for n = {}", a.n)));
    }
    let p = probability(a.p, "--p")?;
    let (runs, stats) = runner::with_threads(a.run.threads, || runner::paths(a.n, a.pairs, a.eps, p, a.trials, a.run.seed));
    let manifest = RunManifest::new("paths", &a, Some(a.run.seed), None);
    let body = format!(
        "{}{}{{\"summary\":{}}}\n",
        manifest.jsonl_header(),
        jsonl(&runs),
        serde_json::to_string(&stats).expect("plain data")
    );
    emit(a.run.output.as_deref(), &body, &manifest, a.run.threads)?;
    Ok(EXIT_OK)
}

fn arithmetic(a: ArithmeticArgs) -> Result<i32, CliError> {
    let b = default_b(DEFAULT_A);
    let (params, tail) = evaluate_arithmetic(a.n, DEFAULT_A, b).map_err(|e| CliError::Usage(e.to_string()))?;
    let manifest = RunManifest::new("arithmetic", &a, None, None);
    let body = format!(
        "{{\"manifest\":{},\"params\":{},\"tail\":{},\"majorant_holds\":{}}}\n",
        manifest.to_json(),
        serde_json::to_string(&params).expect("plain data"),
        serde_json::to_string(&tail).expect("plain data"),
        tail.majorant_holds()
    );
    emit(a.output.as_deref(), &body, &manifest, 1)?;
    Ok(EXIT_OK)
}
