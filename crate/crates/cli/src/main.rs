//! `wordsys`: word systems, Cartesian systems and subproduct systems from the
//! command line. Documents are JSON; see the README for the formats.

mod doc;

use std::fmt;
use std::io::{self, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigUint;
use serde_json::{json, Value};
use wordsys_core::cartesian::{self, validate_cartesian};
use wordsys_core::enumeration::{self, build_automaton, growth_rate, recurrence_of, series_of};
use wordsys_core::graph::{self, max_paths, MaxPathsOptions};
use wordsys_core::realizability::{
    check_necessary, construct_nested, search_prefix, SearchOutcome, DEFAULT_BUDGET,
};
use wordsys_core::subproduct::{self, validate_projector_family};
use wordsys_core::words::{self, check_word_system};
use wordsys_core::{
    AbstractSubproduct, CartesianSystem, ExclusionSet, Graph, ProjectorFamily, TargetSequence, Word,
};

use doc::{Doc, Kind};

#[derive(Parser)]
#[command(
    name = "wordsys",
    version,
    about = "Word systems and their cardinality sequences"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

/// Positional input document; `-` or nothing reads standard input.
#[derive(Args)]
struct Input {
    input: Option<PathBuf>,
}

#[derive(Args)]
struct Horizon {
    /// Largest word length to generate.
    #[arg(long)]
    n: usize,
}

#[derive(Args)]
struct Csv {
    /// Emit `n,count` lines instead of JSON.
    #[arg(long)]
    csv: bool,
}

/// Excluded words given inline or as an exclusions document.
#[derive(Args)]
struct Exclusions {
    #[command(flatten)]
    input: Input,
    /// Alphabet size, used with --exclude.
    #[arg(long, requires = "exclude")]
    d: Option<usize>,
    /// Excluded words as a JSON array of letter arrays, e.g. "[[1,1]]".
    #[arg(long, requires = "d")]
    exclude: Option<String>,
}

#[derive(Args)]
struct Target {
    /// Comma-separated cardinalities d_1,...,d_k.
    #[arg(long, value_parser = parse_target)]
    target: TargetSequence,
}

#[derive(Clone, Copy, ValueEnum)]
enum ThinMode {
    Stride,
    Overlap,
}

#[derive(Subcommand)]
enum Command {
    /// Cardinality sequence of a word system or Cartesian system.
    Seq {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        csv: Csv,
    },
    /// Check any document against its defining conditions.
    Validate(Input),
    /// Minimal excluded words of a word system.
    Antidict(Input),
    /// Drop excluded words that contain another excluded word.
    Reduce(Input),
    /// Word system of all words avoiding the excluded words.
    FromExclusions {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        horizon: Horizon,
    },
    /// Word system of vertex paths in a graph.
    FromGraph {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        horizon: Horizon,
    },
    /// Path counts of a graph without materializing words.
    GraphSeq {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        horizon: Horizon,
        #[command(flatten)]
        csv: Csv,
    },
    /// Largest number of length-two paths over graphs with given size.
    MaxPaths {
        #[arg(long)]
        vertices: usize,
        #[arg(long)]
        edges: usize,
        /// Only search graphs with non-increasing out-degrees.
        #[arg(long)]
        canonical: bool,
        #[arg(long)]
        budget: Option<u64>,
    },
    /// Word system with the same cardinalities as a Cartesian system.
    Standardize(Input),
    /// Thin a Cartesian system by stride or overlap.
    Thin {
        #[command(flatten)]
        input: Input,
        #[arg(long, value_enum)]
        mode: ThinMode,
        #[arg(long)]
        k: usize,
    },
    /// Projectors onto the symmetric tensors.
    Symmetric {
        #[arg(long)]
        d: usize,
        #[arg(long)]
        n: usize,
    },
    /// Word system with the dimensions of a projector family.
    Extract(Input),
    /// Nested projectors of a subproduct system given by its products.
    StandardForm(Input),
    /// Complexity series of the words avoiding the excluded words.
    Series {
        #[command(flatten)]
        exclusions: Exclusions,
        #[command(flatten)]
        horizon: Horizon,
        #[command(flatten)]
        csv: Csv,
    },
    /// Linear recurrence and growth rate of the complexity series.
    Recurrence {
        #[command(flatten)]
        exclusions: Exclusions,
    },
    /// Autocorrelation vector of a word.
    Autocorr {
        /// Word as a JSON letter array, e.g. "[0,1,0]".
        #[arg(long)]
        word: String,
    },
    /// Compare the series avoiding r with the series avoiding s.
    Compare {
        #[arg(long)]
        d: usize,
        #[arg(long)]
        r: String,
        #[arg(long)]
        s: String,
        #[arg(long)]
        n: usize,
    },
    /// Necessary conditions on a target sequence.
    Check(Target),
    /// Nested-block word system for a target sequence.
    Construct(Target),
    /// Exhaustive search for a word system with the target cardinalities.
    Search {
        #[command(flatten)]
        target: Target,
        /// Node budget; defaults to WORDSYS_BUDGET or 10000000.
        #[arg(long)]
        budget: Option<u64>,
    },
}

fn parse_target(text: &str) -> std::result::Result<TargetSequence, String> {
    text.parse()
        .map_err(|e| format!("expected comma-separated non-negative integers: {e}"))
}

/// Bad flag values discovered after argument parsing.
#[derive(Debug)]
struct UsageError(String);

impl fmt::Display for UsageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

/// A document that fails validation; the verdict is already on stdout.
#[derive(Debug)]
struct Invalid;

impl fmt::Display for Invalid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("validation failed")
    }
}

impl std::error::Error for Invalid {}

enum Output {
    Json(Value),
    Text(String),
}

fn read_input(input: &Input) -> Result<String> {
    let mut text = String::new();
    match input.input.as_deref() {
        None => io::stdin().read_to_string(&mut text).map(|_| ()),
        Some(p) if p.as_os_str() == "-" => io::stdin().read_to_string(&mut text).map(|_| ()),
        Some(p) => std::fs::read_to_string(p).map(|t| text = t),
    }
    .with_context(|| match &input.input {
        Some(p) => format!("cannot read {}", p.display()),
        None => "cannot read standard input".into(),
    })?;
    Ok(text)
}

fn load(input: &Input) -> Result<Doc> {
    let doc = doc::parse(&read_input(input)?)?;
    for w in &doc.warnings {
        eprintln!("warning: {w}");
    }
    Ok(doc)
}

fn word_flag(flag: &str, text: &str) -> Result<Word> {
    let value: Value =
        serde_json::from_str(text).map_err(|e| UsageError(format!("{flag}: invalid JSON: {e}")))?;
    Ok(doc::as_word(&value, "").map_err(|e| UsageError(format!("{flag}: {}", e.message)))?)
}

fn exclusions(args: &Exclusions) -> Result<ExclusionSet> {
    match (&args.exclude, args.d) {
        (Some(text), Some(d)) => {
            if args.input.input.is_some() {
                return Err(UsageError(
                    "--exclude cannot be combined with an input document".into(),
                )
                .into());
            }
            let value: Value = serde_json::from_str(text)
                .map_err(|e| UsageError(format!("--exclude: invalid JSON: {e}")))?;
            let words = value
                .as_array()
                .ok_or_else(|| UsageError("--exclude: expected an array of words".into()))?
                .iter()
                .enumerate()
                .map(|(i, w)| {
                    doc::as_word(w, &format!("/{i}"))
                        .map_err(|e| UsageError(format!("--exclude: {e}")))
                })
                .collect::<std::result::Result<Vec<_>, _>>()?;
            Ok(ExclusionSet::new(d, words)?)
        }
        _ => {
            let doc = load(&args.input)?;
            let (alphabet, words) = doc::read_exclusions(&doc)?;
            Ok(ExclusionSet::new(alphabet, words)?)
        }
    }
}

/// Cartesian systems, with word systems accepted through their canonical
/// injections.
fn cartesian_input(doc: &Doc) -> Result<CartesianSystem> {
    doc.expect(&[Kind::Cartesian, Kind::WordSystem])?;
    if doc.kind() == Kind::WordSystem {
        let system = doc::read_word_system(doc)?.into_system()?;
        return Ok(cartesian::from_word_system(&system));
    }
    let (levels, tables) = doc::read_cartesian(doc)?;
    let system = CartesianSystem::new(levels, &tables)?;
    if let Some(violation) = validate_cartesian(&system) {
        return Err(wordsys_core::Error::NotValid(violation.to_string()).into());
    }
    Ok(system)
}

fn projector_input(doc: &Doc) -> Result<ProjectorFamily> {
    let (dim, projectors) = doc::read_projectors(doc)?;
    let family = ProjectorFamily::new(dim, projectors)?;
    if let Some(violation) = validate_projector_family(&family) {
        return Err(wordsys_core::Error::NotValid(violation.to_string()).into());
    }
    Ok(family)
}

fn subproduct_input(doc: &Doc) -> Result<AbstractSubproduct> {
    let (dims, products) = doc::read_subproduct(doc)?;
    let system = AbstractSubproduct::new(dims, products)?;
    system.validate()?;
    Ok(system)
}

fn sequence(counts: Vec<BigUint>, csv: &Csv) -> Output {
    if csv.csv {
        Output::Text(doc::sequence_csv(&counts))
    } else {
        Output::Json(doc::sequence_json(&counts))
    }
}

fn big(counts: Vec<u64>) -> Vec<BigUint> {
    counts.into_iter().map(BigUint::from).collect()
}

fn verdict(kind: Kind, failure: Option<(&str, String)>) -> Value {
    match failure {
        None => json!({"v": doc::VERSION, "kind": kind.name(), "valid": true}),
        Some((error, message)) => json!({
            "v": doc::VERSION,
            "kind": kind.name(),
            "valid": false,
            "error": error,
            "message": message,
        }),
    }
}

/// Runs the library checks for the document's kind. Schema errors still
/// abort; mathematical failures become a negative verdict.
fn validate(doc: &Doc) -> Result<(Value, bool)> {
    let domain = |e: wordsys_core::Error| Some((e.name(), e.to_string()));
    let failure = match doc.kind() {
        Kind::WordSystem => {
            let raw = doc::read_word_system(doc)?;
            match check_word_system(raw.alphabet, &raw.levels) {
                Ok(None) => None,
                Ok(Some(v)) => Some(("NotClosed", v.to_string())),
                Err(e) => domain(e),
            }
        }
        Kind::Exclusions => {
            let (alphabet, words) = doc::read_exclusions(doc)?;
            ExclusionSet::new(alphabet, words).err().and_then(domain)
        }
        Kind::Graph => {
            let (vertices, edges) = doc::read_graph(doc)?;
            Graph::new(vertices, edges).err().and_then(domain)
        }
        Kind::Cartesian => {
            let (levels, tables) = doc::read_cartesian(doc)?;
            match CartesianSystem::new(levels, &tables) {
                Ok(system) => validate_cartesian(&system).map(|v| ("NotValid", v.to_string())),
                Err(e) => domain(e),
            }
        }
        Kind::Projectors => {
            let (dim, projectors) = doc::read_projectors(doc)?;
            match ProjectorFamily::new(dim, projectors) {
                Ok(family) => {
                    validate_projector_family(&family).map(|v| ("NotValid", v.to_string()))
                }
                Err(e) => domain(e),
            }
        }
        Kind::Subproduct => {
            let (dims, products) = doc::read_subproduct(doc)?;
            match AbstractSubproduct::new(dims, products).and_then(|s| s.validate()) {
                Ok(()) => None,
                Err(e) => domain(e),
            }
        }
        Kind::Sequence => {
            doc::read_sequence(doc)?;
            None
        }
    };
    let ok = failure.is_none();
    Ok((verdict(doc.kind(), failure), ok))
}

fn budget_from_env() -> Result<u64> {
    match std::env::var("WORDSYS_BUDGET") {
        Ok(text) => text.trim().parse().map_err(|_| {
            UsageError(format!(
                "WORDSYS_BUDGET: expected an integer, found {text:?}"
            ))
            .into()
        }),
        Err(_) => Ok(DEFAULT_BUDGET),
    }
}

fn run(command: Command) -> Result<Output> {
    let out = match command {
        Command::Seq { input, csv } => {
            let doc = load(&input)?;
            doc.expect(&[Kind::WordSystem, Kind::Cartesian, Kind::Sequence])?;
            let counts = match doc.kind() {
                Kind::Sequence => doc::read_sequence(&doc)?,
                Kind::WordSystem => big(doc::read_word_system(&doc)?.into_system()?.counts()),
                _ => big(cartesian_input(&doc)?.counts()),
            };
            sequence(counts, &csv)
        }
        Command::Validate(input) => {
            let (verdict, ok) = validate(&load(&input)?)?;
            if !ok {
                emit(Output::Json(verdict))?;
                return Err(Invalid.into());
            }
            Output::Json(verdict)
        }
        Command::Antidict(input) => {
            let system = doc::read_word_system(&load(&input)?)?.into_system()?;
            Output::Json(doc::exclusions_json(&words::antidictionary(&system)))
        }
        Command::Reduce(input) => {
            let (alphabet, words) = doc::read_exclusions(&load(&input)?)?;
            let excluded = ExclusionSet::new(alphabet, words)?;
            Output::Json(doc::exclusions_json(&words::reduce_exclusions(&excluded)))
        }
        Command::FromExclusions { input, horizon } => {
            let (alphabet, words) = doc::read_exclusions(&load(&input)?)?;
            let excluded = ExclusionSet::new(alphabet, words)?;
            let system = words::from_exclusions(alphabet, &excluded, horizon.n)?;
            Output::Json(doc::word_system_json(&system))
        }
        Command::FromGraph { input, horizon } => {
            let (vertices, edges) = doc::read_graph(&load(&input)?)?;
            let graph = Graph::new(vertices, edges)?;
            Output::Json(doc::word_system_json(&graph::graph_system(
                &graph, horizon.n,
            )))
        }
        Command::GraphSeq {
            input,
            horizon,
            csv,
        } => {
            let (vertices, edges) = doc::read_graph(&load(&input)?)?;
            let graph = Graph::new(vertices, edges)?;
            let counts = (0..=horizon.n)
                .map(|n| graph::path_count(&graph, n))
                .collect();
            sequence(counts, &csv)
        }
        Command::MaxPaths {
            vertices,
            edges,
            canonical,
            budget,
        } => {
            let found = max_paths(vertices, edges, MaxPathsOptions { canonical, budget })?;
            Output::Json(json!({
                "v": doc::VERSION,
                "vertices": vertices,
                "edges": edges,
                "maximum": found.maximum,
                "witness": doc::graph_json(&found.witness),
                "nodes": found.nodes,
            }))
        }
        Command::Standardize(input) => {
            let system = cartesian_input(&load(&input)?)?;
            Output::Json(doc::word_system_json(&cartesian::standardize(&system)?))
        }
        Command::Thin { input, mode, k } => {
            let system = cartesian_input(&load(&input)?)?;
            let thinned = match mode {
                ThinMode::Stride => cartesian::thin_stride(&system, k)?,
                ThinMode::Overlap => cartesian::thin_overlap(&system, k)?,
            };
            Output::Json(doc::cartesian_json(&thinned))
        }
        Command::Symmetric { d, n } => {
            Output::Json(doc::projectors_json(&subproduct::symmetric_family(d, n)?))
        }
        Command::Extract(input) => {
            let family = projector_input(&load(&input)?)?;
            Output::Json(doc::word_system_json(&subproduct::extract_word_system(
                &family,
            )?))
        }
        Command::StandardForm(input) => {
            let system = subproduct_input(&load(&input)?)?;
            Output::Json(doc::projectors_json(&subproduct::standard_form(&system)?))
        }
        Command::Series {
            exclusions: args,
            horizon,
            csv,
        } => {
            let excluded = exclusions(&args)?;
            let automaton = build_automaton(excluded.alphabet(), &excluded)?;
            sequence(series_of(&automaton, horizon.n).counts().to_vec(), &csv)
        }
        Command::Recurrence { exclusions: args } => {
            let excluded = exclusions(&args)?;
            let automaton = build_automaton(excluded.alphabet(), &excluded)?;
            let recurrence = recurrence_of(&automaton);
            let growth = growth_rate(&automaton);
            Output::Json(json!({
                "v": doc::VERSION,
                "states": automaton.state_count(),
                "coefficients": recurrence.coefficients.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
                "growth": {
                    "value": growth.value,
                    "iterations": growth.iterations,
                    "converged": growth.converged,
                    "approximate": true,
                },
            }))
        }
        Command::Autocorr { word } => {
            let word = word_flag("--word", &word)?;
            Output::Json(json!({
                "v": doc::VERSION,
                "word": word.letters(),
                "autocorrelation": enumeration::autocorrelation(&word)?,
            }))
        }
        Command::Compare { d, r, s, n } => {
            let r = word_flag("--r", &r)?;
            let s = word_flag("--s", &s)?;
            let report = enumeration::dominance_compare(d, &r, &s, n)?;
            Output::Json(json!({
                "v": doc::VERSION,
                "r": r.letters(),
                "s": s.letters(),
                "r_counts": report.r_series.iter().map(doc::big_json).collect::<Vec<_>>(),
                "s_counts": report.s_series.iter().map(doc::big_json).collect::<Vec<_>>(),
                "r_dominates": report.r_dominates,
                "s_dominates": report.s_dominates,
                "r_autocorrelation": report.r_autocorrelation,
                "s_autocorrelation": report.s_autocorrelation,
            }))
        }
        Command::Check(Target { target }) => {
            let violations = check_necessary(&target);
            Output::Json(json!({
                "v": doc::VERSION,
                "target": target.values(),
                "passes": violations.is_empty(),
                "violations": violations
                    .iter()
                    .map(|v| json!({"kind": v.kind(), "message": v.to_string()}))
                    .collect::<Vec<_>>(),
            }))
        }
        Command::Construct(Target { target }) => {
            Output::Json(doc::word_system_json(&construct_nested(&target)?))
        }
        Command::Search { target, budget } => {
            let budget = match budget {
                Some(b) => b,
                None => budget_from_env()?,
            };
            let report = search_prefix(&target.target, budget);
            let mut out = json!({"v": doc::VERSION, "target": target.target.values()});
            let fields = out.as_object_mut().expect("object");
            match report.outcome {
                SearchOutcome::Witness(system) => {
                    fields.insert("verdict".into(), "REALIZABLE".into());
                    fields.insert("witness".into(), doc::word_system_json(&system));
                }
                SearchOutcome::Unrealizable { violations } => {
                    fields.insert("verdict".into(), "UNREALIZABLE".into());
                    let kinds: Vec<_> = violations
                        .iter()
                        .map(|v| json!({"kind": v.kind(), "message": v.to_string()}))
                        .collect();
                    fields.insert("violations".into(), kinds.into());
                }
                SearchOutcome::BudgetExceeded { realized, prefix } => {
                    fields.insert("verdict".into(), "BUDGET_EXCEEDED".into());
                    fields.insert("realized".into(), realized.into());
                    fields.insert("prefix".into(), doc::word_system_json(&prefix));
                }
            }
            fields.insert("nodes".into(), report.nodes.into());
            Output::Json(out)
        }
    };
    Ok(out)
}

fn emit(output: Output) -> Result<()> {
    let mut stdout = io::stdout().lock();
    match output {
        Output::Json(value) => writeln!(stdout, "{}", serde_json::to_string(&value)?)?,
        Output::Text(text) => stdout.write_all(text.as_bytes())?,
    }
    stdout.flush()?;
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command).and_then(emit) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            if err.is::<Invalid>() {
                return ExitCode::from(1);
            }
            if let Some(usage) = err.downcast_ref::<UsageError>() {
                eprintln!("error: {usage}");
                return ExitCode::from(2);
            }
            if let Some(e) = err.downcast_ref::<doc::SchemaError>() {
                eprintln!("error[SchemaError]: {e}");
            } else if let Some(e) = err.downcast_ref::<wordsys_core::Error>() {
                eprintln!("error[{}]: {e}", e.name());
            } else {
                eprintln!("error: {err:#}");
            }
            ExitCode::from(1)
        }
    }
}
