//! Command-line front end. Exit code 0 is success, 1 is a mathematically
//! meaningful negative result (contradiction, a non-formal sequence, a failed
//! covering hypothesis, a trace that does not replay), 2 is malformed input.
//! All output is deterministic: fixed key order, canonical coefficients.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::algebra::GradedAlgebra;
use crate::infer::{self, DerivationTrace, Envelope, Outcome};
use crate::jsonio::{self, BoundJson, EnvelopeJson, SequenceJson, TraceFileJson};
use crate::realize;
use crate::seq::{optimal_sequence, SeqValue, Sequence};

pub const EXIT_OK: i32 = 0;
pub const EXIT_NEGATIVE: i32 = 1;
pub const EXIT_BAD_INPUT: i32 = 2;

const DEFAULT_INDEX_CAP: u64 = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Parser, Debug)]
#[command(name = "catseq", version, about = "Calculus for categorical sequences", disable_help_subcommand = true)]
struct Cli {
    /// Output rendering
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Index cap override for sequence closures and inference
    #[arg(long, global = true)]
    cap: Option<u64>,
    /// Degree cap for truncated presentations of infinite algebras
    #[arg(long = "degree-cap", global = true)]
    degree_cap: Option<u64>,
    /// Write the derivation trace to this file
    #[arg(long, global = true)]
    trace: Option<PathBuf>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Pointwise minimum of two sequences
    SeqMin { s: String, t: String },
    /// Star product of two sequences
    SeqStar { s: String, t: String },
    /// Superadditive closure of a sequence up to the index cap
    SeqClosure { s: String },
    /// Test whether a sequence is formal
    SeqFormal { s: String },
    /// The optimal k-term sequence ending at n
    SeqOptimal { k: u64, n: u64 },
    /// Validate an algebra description
    AlgebraValidate { algebra: String },
    /// Product-length sequence of an algebra
    AlgebraSeq { algebra: String },
    /// Tensor product of two algebras, as a multiplication table
    AlgebraTensor { left: String, right: String },
    /// Realize a formal sequence as a wedge of products of spheres
    Realize { s: String },
    /// Sequence of a wedge of products of spheres
    WedgeSeq { wedge: String },
    /// Bracket sigma_X from a problem file of asserted facts
    Infer { problems: String },
    /// Strict cat upper bound from an interval covering of the
    /// nonvanishing degrees
    Ganea { input: String },
    /// Replay a derivation trace against its problem file
    Replay { trace_file: String, problems: String },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunOutput {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

fn ok(stdout: String) -> RunOutput {
    RunOutput { code: EXIT_OK, stdout, stderr: String::new() }
}

fn negative(stdout: String) -> RunOutput {
    RunOutput { code: EXIT_NEGATIVE, stdout, stderr: String::new() }
}

fn bad_input(message: String) -> RunOutput {
    RunOutput { code: EXIT_BAD_INPUT, stdout: String::new(), stderr: format!("catseq: {message}\n") }
}

/// Arguments may be inline JSON (starting with `[` or `{`) or a file path.
struct Source {
    name: String,
    text: String,
}

fn load(arg: &str) -> Result<Source, RunOutput> {
    let trimmed = arg.trim_start();
    if trimmed.starts_with('[') || trimmed.starts_with('{') {
        return Ok(Source { name: "<inline>".into(), text: arg.to_string() });
    }
    match fs::read_to_string(Path::new(arg)) {
        Ok(text) => Ok(Source { name: arg.to_string(), text }),
        Err(e) => Err(bad_input(format!("{arg}: {e}"))),
    }
}

fn parse_in<T: serde::de::DeserializeOwned>(src: &Source) -> Result<T, RunOutput> {
    jsonio::parse_json(&src.text).map_err(|e| bad_input(format!("{}: {e}", src.name)))
}

fn env_degree_cap() -> Option<u64> {
    std::env::var("CATSEQ_DEGREE_CAP").ok().and_then(|v| v.parse().ok())
}

fn json_line<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string(value).expect("output serializes");
    s.push('\n');
    s
}

/// Run the CLI against explicit arguments; the binary wraps this.
pub fn run<I, S>(args: I) -> RunOutput
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let rendered = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ok(rendered),
                _ => RunOutput { code: EXIT_BAD_INPUT, stdout: String::new(), stderr: rendered },
            };
        }
    };
    let degree_cap = cli.degree_cap.or_else(env_degree_cap);
    match dispatch(&cli, degree_cap) {
        Ok(out) | Err(out) => out,
    }
}

fn dispatch(cli: &Cli, degree_cap: Option<u64>) -> Result<RunOutput, RunOutput> {
    match &cli.cmd {
        Cmd::SeqMin { s, t } => {
            let (s, t) = (parse_seq_arg(s)?, parse_seq_arg(t)?);
            Ok(render_seq(cli.format, &s.min(&t)))
        }
        Cmd::SeqStar { s, t } => {
            let (s, t) = (parse_seq_arg(s)?, parse_seq_arg(t)?);
            Ok(render_seq(cli.format, &s.star(&t)))
        }
        Cmd::SeqClosure { s } => {
            let s = parse_seq_arg(s)?;
            let cap = cli.cap.unwrap_or(64);
            Ok(render_seq(cli.format, &s.superadditive_closure(cap)))
        }
        Cmd::SeqFormal { s } => {
            let s = parse_seq_arg(s)?;
            let formal = s.is_formal();
            let out = match cli.format {
                Format::Json => json_line(&serde_json::json!({ "formal": formal })),
                Format::Text => format!("{}\n", if formal { "formal" } else { "not formal" }),
            };
            Ok(if formal { ok(out) } else { negative(out) })
        }
        Cmd::SeqOptimal { k, n } => {
            let tau = optimal_sequence(*k, *n).map_err(|e| bad_input(e.to_string()))?;
            Ok(render_seq(cli.format, &tau))
        }
        Cmd::AlgebraValidate { algebra } => {
            let alg = load_algebra(algebra, degree_cap)?;
            alg.validate().map_err(|e| bad_input(format!("{algebra}: {e}")))?;
            let dims: Vec<usize> = (0..=alg.top_degree()).map(|d| alg.dim(d)).collect();
            let out = match cli.format {
                Format::Json => json_line(&serde_json::json!({
                    "valid": true,
                    "field": jsonio::field_to_json(alg.field()),
                    "top_degree": alg.top_degree(),
                    "truncated": alg.is_truncated(),
                    "dimensions": dims,
                })),
                Format::Text => format!(
                    "valid algebra over {}, top degree {}{}\n",
                    alg.field(),
                    alg.top_degree(),
                    if alg.is_truncated() { " (truncated)" } else { "" }
                ),
            };
            Ok(ok(out))
        }
        Cmd::AlgebraSeq { algebra } => {
            let alg = load_algebra(algebra, degree_cap)?;
            let cap = cli.cap.unwrap_or(64);
            Ok(render_seq(cli.format, &alg.product_length_sequence(cap)))
        }
        Cmd::AlgebraTensor { left, right } => {
            let a = load_algebra(left, degree_cap)?;
            let b = load_algebra(right, degree_cap)?;
            let t = crate::algebra::tensor(&a, &b)
                .map_err(|e| bad_input(e.to_string()))?;
            Ok(ok(json_line(&jsonio::algebra_to_table_json(&t))))
        }
        Cmd::Realize { s } => {
            let s = parse_seq_arg(s)?;
            match realize::realize_formal(&s) {
                Ok(w) => Ok(ok(json_line(&jsonio::wedge_to_json(&w)))),
                Err(e @ (realize::RealizeError::NotFormal(_) | realize::RealizeError::HasUnknowns(_))) => {
                    Ok(negative(json_line(&serde_json::json!({ "error": e.to_string() }))))
                }
                Err(e) => Err(bad_input(e.to_string())),
            }
        }
        Cmd::WedgeSeq { wedge } => {
            let src = load(wedge)?;
            let json: jsonio::WedgeJson = parse_in(&src)?;
            let w = jsonio::wedge_from_json(&json)
                .map_err(|e| bad_input(format!("{}: {e}", src.name)))?;
            Ok(render_seq(cli.format, &w.sequence()))
        }
        Cmd::Infer { problems } => cmd_infer(cli, problems, degree_cap),
        Cmd::Ganea { input } => cmd_ganea(cli, input),
        Cmd::Replay { trace_file, problems } => cmd_replay(trace_file, problems, degree_cap),
    }
}

fn parse_seq_arg(arg: &str) -> Result<Sequence, RunOutput> {
    jsonio::parse_sequence(arg).map_err(|e| bad_input(format!("sequence {arg:?}: {e}")))
}

fn load_algebra(arg: &str, degree_cap: Option<u64>) -> Result<GradedAlgebra, RunOutput> {
    let src = load(arg)?;
    let json: jsonio::AlgebraJson = parse_in(&src)?;
    jsonio::algebra_from_json(&json, degree_cap)
        .map_err(|e| bad_input(format!("{}: {e}", src.name)))
}

fn render_seq(format: Format, s: &Sequence) -> RunOutput {
    match format {
        Format::Json => ok(format!("{}\n", jsonio::render_sequence(s))),
        Format::Text => {
            let mut out = format!("{s}\n");
            if let Some(d) = s.cap_note() {
                let _ = writeln!(
                    out,
                    "entries past index {} are unknown above degree {d}",
                    s.known_length()
                );
            }
            ok(out)
        }
    }
}

// ---------------------------------------------------------------------------
// infer / replay / ganea

#[derive(Debug, Serialize, Deserialize)]
struct CatOut {
    lower: u64,
    upper: BoundJson,
}

#[derive(Debug, Serialize)]
struct ExactOut {
    k: u64,
    value: BoundJson,
}

#[derive(Debug, Serialize)]
struct ContradictionOut {
    problem: String,
    index: u64,
    detail: String,
}

#[derive(Debug, Serialize)]
struct InferOut {
    target: String,
    status: &'static str,
    index_cap: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    lower: Option<Vec<BoundJson>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    upper: Option<Vec<BoundJson>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    exact: Option<Vec<ExactOut>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    sigma_exact_prefix: Option<SequenceJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    cat: Option<CatOut>,
    #[serde(skip_serializing_if = "Option::is_none")]
    contradiction: Option<ContradictionOut>,
}

fn effective_cap(cli_cap: Option<u64>, problem_cap: Option<u64>) -> u64 {
    cli_cap.or(problem_cap).unwrap_or(DEFAULT_INDEX_CAP)
}

fn write_trace_file(
    path: &Path,
    index_cap: u64,
    trace: &DerivationTrace,
    envelopes: &BTreeMap<String, Envelope>,
) -> Result<(), RunOutput> {
    let file = TraceFileJson {
        index_cap,
        steps: trace.clone(),
        final_envelopes: envelopes
            .iter()
            .map(|(name, env)| (name.clone(), jsonio::envelope_to_json(env)))
            .collect(),
    };
    let mut text = serde_json::to_string_pretty(&file).expect("trace serializes");
    text.push('\n');
    fs::write(path, text).map_err(|e| bad_input(format!("{}: {e}", path.display())))
}

fn cmd_infer(cli: &Cli, problems_arg: &str, degree_cap: Option<u64>) -> Result<RunOutput, RunOutput> {
    let src = load(problems_arg)?;
    let file = jsonio::parse_problem_file(&src.text)
        .map_err(|e| bad_input(format!("{}: {e}", src.name)))?;
    let (fact_sets, target) = jsonio::problem_file_to_fact_sets(&file, degree_cap)
        .map_err(|e| bad_input(format!("{}: {e}", src.name)))?;
    let target_cap = fact_sets.iter().find(|f| f.name == target).and_then(|f| f.index_cap);
    let cap = effective_cap(cli.cap, target_cap);
    let outcome = infer::run_fixpoint(&fact_sets, &target, cap)
        .map_err(|e| bad_input(format!("{}: {e}", src.name)))?;
    match outcome {
        Outcome::Success { target, envelopes, cat, trace } => {
            if let Some(path) = &cli.trace {
                write_trace_file(path, cap, &trace, &envelopes)?;
            }
            let env = &envelopes[&target];
            let exact: Vec<ExactOut> = env
                .exact_indices()
                .into_iter()
                .map(|k| ExactOut { k: k as u64, value: jsonio::bound_to_json(env.lower_at(k)) })
                .collect();
            let out = InferOut {
                target: target.clone(),
                status: "ok",
                index_cap: cap,
                lower: Some((0..=env.cap()).map(|k| jsonio::bound_to_json(env.lower_at(k))).collect()),
                upper: Some((0..=env.cap()).map(|k| jsonio::bound_to_json(env.upper_at(k))).collect()),
                exact: Some(exact),
                sigma_exact_prefix: Some(jsonio::sequence_to_json(&env.exact_prefix())),
                cat: Some(CatOut {
                    lower: cat.lower,
                    upper: cat.upper.map_or(BoundJson::Word("inf".into()), BoundJson::Value),
                }),
                contradiction: None,
            };
            Ok(match cli.format {
                Format::Json => ok(json_line(&out)),
                Format::Text => ok(render_infer_text(&target, env, &out)),
            })
        }
        Outcome::Contradiction { contradiction, trace } => {
            if let Some(path) = &cli.trace {
                // replaying the steps reconstructs the state at the stop point
                let envelopes = infer::replay_trace(&fact_sets, cap, &trace)
                    .expect("a fresh trace replays");
                write_trace_file(path, cap, &trace, &envelopes)?;
            }
            let out = InferOut {
                target: target.clone(),
                status: "contradiction",
                index_cap: cap,
                lower: None,
                upper: None,
                exact: None,
                sigma_exact_prefix: None,
                cat: None,
                contradiction: Some(ContradictionOut {
                    problem: contradiction.problem.clone(),
                    index: contradiction.index,
                    detail: contradiction.detail.clone(),
                }),
            };
            Ok(match cli.format {
                Format::Json => negative(json_line(&out)),
                Format::Text => negative(format!(
                    "contradiction in {} at index {}: {}\n",
                    contradiction.problem, contradiction.index, contradiction.detail
                )),
            })
        }
    }
}

fn render_infer_text(target: &str, env: &Envelope, out: &InferOut) -> String {
    let mut text = format!("target: {target}\n");
    let prefix = |side: &dyn Fn(usize) -> SeqValue| -> String {
        let mut vals = vec!["0".to_string()];
        for k in 1..=env.cap() {
            match side(k) {
                SeqValue::Finite(n) => vals.push(n.to_string()),
                _ => break,
            }
        }
        format!("({})", vals.join(","))
    };
    let lo = |k: usize| env.lower_at(k);
    let up = |k: usize| env.upper_at(k);
    let _ = write!(text, "lower: {}", prefix(&lo));
    if let Some(k) = (1..=env.cap()).find(|&k| !env.lower_at(k).is_finite()) {
        match env.lower_at(k) {
            SeqValue::Infinite => {
                let _ = write!(text, "; sigma({k}) = inf");
            }
            SeqValue::UnknownAbove(d) => {
                let _ = write!(text, "; sigma({k}) unknown above degree {d}");
            }
            SeqValue::Finite(_) => unreachable!(),
        }
    }
    text.push('\n');
    let _ = writeln!(text, "upper: {}", prefix(&up));
    let exacts: Vec<String> = env
        .exact_indices()
        .into_iter()
        .map(|k| format!("sigma({k}) = {}", env.lower_at(k)))
        .collect();
    if !exacts.is_empty() {
        let _ = writeln!(text, "exact: {}", exacts.join("; "));
    }
    if let Some(cat) = &out.cat {
        let upper = match &cat.upper {
            BoundJson::Value(u) => u.to_string(),
            _ => "inf".into(),
        };
        let _ = writeln!(text, "cat({target}) in [{}, {}]", cat.lower, upper);
    }
    text
}

#[derive(Debug, Deserialize)]
struct GaneaIn {
    k: u64,
    n: u64,
    a: Vec<u64>,
    h: Vec<u64>,
    complete_up_to: u64,
}

fn cmd_ganea(cli: &Cli, input: &str) -> Result<RunOutput, RunOutput> {
    let src = load(input)?;
    let g: GaneaIn = parse_in(&src)?;
    match infer::ganea_bound(g.k, g.n, &g.a, &g.h, g.complete_up_to) {
        Ok(bound) => {
            if let Some(path) = &cli.trace {
                let trace = DerivationTrace { steps: bound.steps.clone() };
                let mut text =
                    serde_json::to_string_pretty(&trace).expect("trace serializes");
                text.push('\n');
                fs::write(path, text).map_err(|e| bad_input(format!("{}: {e}", path.display())))?;
            }
            let out = match cli.format {
                Format::Json => json_line(&serde_json::json!({
                    "cat_strict_upper_bound": bound.strict_bound,
                    "intervals": bound.intervals,
                })),
                Format::Text => format!(
                    "cat < {} (intervals {})\n",
                    bound.strict_bound,
                    bound
                        .intervals
                        .iter()
                        .map(|(a, b)| format!("[{a},{b}]"))
                        .collect::<Vec<_>>()
                        .join(" ")
                ),
            };
            Ok(ok(out))
        }
        Err(e @ infer::GaneaError::HypothesisFails { .. }) => Ok(negative(json_line(
            &serde_json::json!({ "error": "hypothesis_fails", "detail": e.to_string() }),
        ))),
        Err(e) => Err(bad_input(format!("{}: {e}", src.name))),
    }
}

fn cmd_replay(trace_arg: &str, problems_arg: &str, degree_cap: Option<u64>) -> Result<RunOutput, RunOutput> {
    let trace_src = load(trace_arg)?;
    let trace_file: TraceFileJson = parse_in(&trace_src)?;
    let problems_src = load(problems_arg)?;
    let file = jsonio::parse_problem_file(&problems_src.text)
        .map_err(|e| bad_input(format!("{}: {e}", problems_src.name)))?;
    let (fact_sets, _) = jsonio::problem_file_to_fact_sets(&file, degree_cap)
        .map_err(|e| bad_input(format!("{}: {e}", problems_src.name)))?;
    match infer::replay_trace(&fact_sets, trace_file.index_cap, &trace_file.steps) {
        Ok(envelopes) => {
            let replayed: BTreeMap<String, EnvelopeJson> = envelopes
                .iter()
                .map(|(n, e)| (n.clone(), jsonio::envelope_to_json(e)))
                .collect();
            if replayed == trace_file.final_envelopes {
                Ok(ok(json_line(&serde_json::json!({ "replayed": true }))))
            } else {
                Ok(negative(json_line(&serde_json::json!({
                    "replayed": false,
                    "error": "replayed envelopes differ from the recorded final state",
                }))))
            }
        }
        Err(e) => Ok(negative(json_line(&serde_json::json!({
            "replayed": false,
            "error": e.to_string(),
        })))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str]) -> RunOutput {
        run(std::iter::once("catseq").chain(args.iter().copied()))
    }

    #[test]
    fn seq_star_inline() {
        let out = run_args(&["seq-star", "[0,2,10]", "[0,2]"]);
        assert_eq!(out.code, EXIT_OK);
        assert_eq!(out.stdout, "[0,2,4,12]\n");
    }

    #[test]
    fn seq_min_and_closure() {
        let out = run_args(&["seq-min", "[0,3,7,10]", "[0,2]"]);
        assert_eq!(out.stdout, "[0,2,7,10]\n");
        let out = run_args(&["seq-closure", "[0,3,7]", "--cap", "4"]);
        assert_eq!(out.stdout, "[0,3,7,10,14]\n");
    }

    #[test]
    fn seq_formal_exit_codes() {
        assert_eq!(run_args(&["seq-formal", "[0,3,7]"]).code, EXIT_OK);
        let out = run_args(&["seq-formal", "[0,3,8,11]"]);
        assert_eq!(out.code, EXIT_NEGATIVE);
        assert_eq!(out.stdout, "{\"formal\":false}\n");
    }

    #[test]
    fn realize_inline() {
        let out = run_args(&["realize", "[0,3,7]"]);
        assert_eq!(out.code, EXIT_OK);
        assert_eq!(out.stdout, "{\"summands\":[[3],[3,4]]}\n");

        let out = run_args(&["realize", "[0,3,8,11]"]);
        assert_eq!(out.code, EXIT_NEGATIVE);
    }

    #[test]
    fn wedge_seq_inline() {
        let out = run_args(&["wedge-seq", r#"{"summands":[[3],[3,4]]}"#]);
        assert_eq!(out.stdout, "[0,3,7]\n");
    }

    #[test]
    fn malformed_input_is_exit_2() {
        let out = run_args(&["seq-star", "[1,2]", "[0]"]);
        assert_eq!(out.code, EXIT_BAD_INPUT);
        assert!(out.stderr.contains("start with 0"));

        let out = run_args(&["infer", "/nonexistent/problems.json"]);
        assert_eq!(out.code, EXIT_BAD_INPUT);
        assert!(out.stderr.contains("/nonexistent/problems.json"));
    }

    #[test]
    fn seq_optimal() {
        let out = run_args(&["seq-optimal", "3", "7"]);
        assert_eq!(out.stdout, "[0,2,4,7]\n");
        assert_eq!(run_args(&["seq-optimal", "5", "3"]).code, EXIT_BAD_INPUT);
    }

    #[test]
    fn text_format_renders_paper_style() {
        let out = run_args(&["seq-star", "[0,2,10]", "[0,2]", "--format", "text"]);
        assert_eq!(out.stdout, "(0,2,4,12)\n");
    }
}
