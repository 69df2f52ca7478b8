// SPDX-License-Identifier: Apache-2.0
// SPDX-FileCopyrightText: Copyright The semiadd Authors

//! `semiadd` command-line front end.
//!
//! Exit status: 0 on success, 1 on a user error (bad flags, unreadable or
//! malformed input), 2 on an internal error.

use std::fmt::Display;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use semiadd::cbr::Case;
use semiadd::eval::{
    bench, generate_synthetic_corpus, learning_curve, run_protocol, split, Corpus, FeatureMask,
    SynthSpec,
};
use semiadd::{
    baseline_rule, bind_roles, extract_case_features, similarity, AggregateAction, CaseBase,
    FeatureWeights, Lexicon, RoleManifest, Table, DEFAULT_K,
};

const CASEBASE_ENV: &str = "SEMIADD_CASEBASE";
const LEXICON_ENV: &str = "SEMIADD_LEXICON";

#[derive(Parser)]
#[command(name = "semiadd", version, about = "Learn default aggregations of measure columns")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Load a delimited file and report column kinds.
    Ingest(IngestArgs),
    /// Print the concept tags of every column.
    Annotate(AnnotateArgs),
    /// Print one feature record per (category, measure) context as JSON lines.
    Features(FeaturesArgs),
    /// Compare two cases feature by feature.
    Sim(SimArgs),
    /// Manage the case base.
    #[command(subcommand)]
    Case(CaseCommand),
    /// Suggest an aggregate action for one context.
    Suggest(SuggestArgs),
    /// Evaluation protocol on a labeled corpus.
    #[command(subcommand)]
    Eval(EvalCommand),
}

#[derive(Args)]
struct TableArgs {
    /// Delimited text file with a header row.
    #[arg(long)]
    data: PathBuf,
    /// Field delimiter: a single character, or `tab`.
    #[arg(long, default_value = ",", value_parser = parse_delimiter)]
    delimiter: u8,
}

#[derive(Args)]
struct LexiconArg {
    /// Lexicon file; the built-in lexicon when absent.
    #[arg(long, env = LEXICON_ENV)]
    lexicon: Option<PathBuf>,
}

#[derive(Args)]
struct IngestArgs {
    #[command(flatten)]
    table: TableArgs,
    /// Role manifest to check against the table.
    #[arg(long)]
    manifest: Option<PathBuf>,
}

#[derive(Args)]
struct AnnotateArgs {
    #[command(flatten)]
    table: TableArgs,
    #[command(flatten)]
    lexicon: LexiconArg,
    /// Emit JSON lines instead of a table.
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct FeaturesArgs {
    #[command(flatten)]
    table: TableArgs,
    #[arg(long)]
    manifest: PathBuf,
    #[command(flatten)]
    lexicon: LexiconArg,
}

#[derive(Args)]
struct SimArgs {
    /// Two cases: JSON files holding one case each, or case ids when
    /// `--casebase` is given.
    #[arg(num_args = 2, required = true)]
    cases: Vec<String>,
    /// Look the cases up by id in this case base.
    #[arg(long)]
    casebase: Option<PathBuf>,
    /// Feature weights `w1,w2,w3`; the case base's weights (or 1,1,1) when absent.
    #[arg(long)]
    weights: Option<FeatureWeights>,
}

#[derive(Subcommand)]
enum CaseCommand {
    /// Extract a context's features and store it as a labeled case.
    Add(Box<CaseAddArgs>),
    /// List the stored cases.
    List(CaseListArgs),
}

#[derive(Args)]
struct CasebaseArg {
    /// Case-base file (JSON lines).
    #[arg(long, env = CASEBASE_ENV, default_value = "casebase.jsonl")]
    casebase: PathBuf,
}

#[derive(Args)]
struct CaseAddArgs {
    #[command(flatten)]
    casebase: CasebaseArg,
    #[command(flatten)]
    table: TableArgs,
    /// Role manifest; the context must be one it declares.
    #[arg(long)]
    manifest: Option<PathBuf>,
    #[arg(long)]
    category: String,
    #[arg(long)]
    measure: String,
    /// sum, average or last-period.
    #[arg(long)]
    action: AggregateAction,
    /// Case id; `<dataset>/<category>/<measure>` when absent.
    #[arg(long)]
    id: Option<String>,
    #[arg(long)]
    question: Option<String>,
    /// Weights for a newly created case base.
    #[arg(long)]
    weights: Option<FeatureWeights>,
    #[command(flatten)]
    lexicon: LexiconArg,
}

#[derive(Args)]
struct CaseListArgs {
    #[command(flatten)]
    casebase: CasebaseArg,
    /// Emit the stored case records instead of a table.
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct SuggestArgs {
    #[command(flatten)]
    table: TableArgs,
    #[arg(long)]
    manifest: PathBuf,
    #[arg(long)]
    category: String,
    #[arg(long)]
    measure: String,
    #[arg(long, default_value_t = DEFAULT_K, value_parser = parse_k)]
    k: usize,
    /// Feature weights `w1,w2,w3`; the case base's weights when absent.
    #[arg(long)]
    weights: Option<FeatureWeights>,
    #[command(flatten)]
    casebase: CasebaseArg,
    #[command(flatten)]
    lexicon: LexiconArg,
    /// Print the action only.
    #[arg(long, short)]
    quiet: bool,
}

#[derive(Subcommand)]
enum EvalCommand {
    /// Print the train/test partition.
    Split(SplitArgs),
    /// Accuracy, confusion counts and feature ablations.
    Run(RunArgs),
    /// Accuracy against a fixed test set for growing training sets.
    Curve(CurveArgs),
    /// Feature-extraction and suggestion latency.
    Bench(BenchArgs),
    /// Write a synthetic labeled corpus.
    Synth(SynthArgs),
}

#[derive(Args)]
struct CorpusArgs {
    /// Corpus directory with `labels.jsonl`; a synthetic corpus when absent.
    #[arg(long)]
    corpus: Option<PathBuf>,
    /// Seed of the synthetic corpus.
    #[arg(long, default_value_t = 0)]
    synth_seed: u64,
    /// Size of the synthetic corpus.
    #[arg(long, default_value_t = 100)]
    synth_cases: usize,
}

#[derive(Args)]
struct SplitOpts {
    #[arg(long, default_value_t = 0.65)]
    ratio: f64,
    /// Seed of the train/test shuffle.
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct SplitArgs {
    #[command(flatten)]
    corpus: CorpusArgs,
    #[command(flatten)]
    split: SplitOpts,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct RunArgs {
    #[command(flatten)]
    corpus: CorpusArgs,
    #[command(flatten)]
    split: SplitOpts,
    #[arg(long, default_value_t = DEFAULT_K, value_parser = parse_k)]
    k: usize,
    /// Also report accuracy for each of these k values, e.g. `3,4,5,6`.
    #[arg(long, value_delimiter = ',', value_parser = parse_k)]
    sweep_k: Vec<usize>,
    /// Features used for similarity: `all`, or a list such as `F1,F3`.
    #[arg(long, default_value = "all")]
    mask: FeatureMask,
    #[arg(long, default_value = "1,1,1")]
    weights: FeatureWeights,
    #[command(flatten)]
    lexicon: LexiconArg,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct CurveArgs {
    #[command(flatten)]
    corpus: CorpusArgs,
    #[command(flatten)]
    split: SplitOpts,
    #[arg(long, value_delimiter = ',', default_value = "10,25,40,55")]
    sizes: Vec<usize>,
    #[arg(long, default_value_t = DEFAULT_K, value_parser = parse_k)]
    k: usize,
    #[arg(long, default_value = "1,1,1")]
    weights: FeatureWeights,
    #[command(flatten)]
    lexicon: LexiconArg,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct BenchArgs {
    #[command(flatten)]
    corpus: CorpusArgs,
    #[command(flatten)]
    split: SplitOpts,
    /// Row range `min,max` of synthetic tables.
    #[arg(long, default_value = "20,200", value_parser = parse_rows)]
    rows: (usize, usize),
    #[arg(long, default_value_t = DEFAULT_K, value_parser = parse_k)]
    k: usize,
    #[arg(long, default_value = "1,1,1")]
    weights: FeatureWeights,
    #[command(flatten)]
    lexicon: LexiconArg,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct SynthArgs {
    /// Output directory.
    #[arg(long)]
    out: PathBuf,
    #[arg(long, default_value_t = 100)]
    cases: usize,
    #[arg(long, default_value_t = 0.3)]
    noise: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Proportions `average,last-period,sum` of the labels; equal when absent.
    #[arg(long, value_parser = parse_mix)]
    mix: Option<[f64; 3]>,
    /// Row range `min,max` of each table.
    #[arg(long, default_value = "20,200", value_parser = parse_rows)]
    rows: (usize, usize),
}

enum CliError {
    User(String),
    Internal(String),
    /// The reader of stdout went away.
    Closed,
}

type CliResult = Result<(), CliError>;

fn user(e: impl Display) -> CliError {
    CliError::User(e.to_string())
}

fn internal(e: impl Display) -> CliError {
    CliError::Internal(e.to_string())
}

fn write_err(e: std::io::Error) -> CliError {
    if e.kind() == std::io::ErrorKind::BrokenPipe {
        CliError::Closed
    } else {
        internal(e)
    }
}

fn parse_delimiter(s: &str) -> Result<u8, String> {
    match s {
        "tab" | "\\t" | "\t" => Ok(b'\t'),
        _ if s.len() == 1 && s.is_ascii() => Ok(s.as_bytes()[0]),
        _ => Err(format!("delimiter must be one ASCII character, got {s:?}")),
    }
}

fn parse_rows(s: &str) -> Result<(usize, usize), String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    match parts.as_slice() {
        [lo, hi] => match (lo.parse(), hi.parse()) {
            (Ok(lo), Ok(hi)) => Ok((lo, hi)),
            _ => Err(format!("bad row range {s:?}")),
        },
        _ => Err(format!("expected `min,max`, got {s:?}")),
    }
}

fn parse_mix(s: &str) -> Result<[f64; 3], String> {
    let parts: Vec<f64> = s
        .split(',')
        .map(|p| p.trim().parse::<f64>().map_err(|_| format!("bad proportion {p:?}")))
        .collect::<Result<_, _>>()?;
    <[f64; 3]>::try_from(parts).map_err(|_| format!("expected three proportions, got {s:?}"))
}

fn parse_k(s: &str) -> Result<usize, String> {
    match s.parse::<usize>() {
        Ok(k) if k >= 1 => Ok(k),
        _ => Err(format!("k must be a positive integer, got {s:?}")),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli.command) {
        Ok(()) | Err(CliError::Closed) => ExitCode::SUCCESS,
        Err(CliError::User(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(CliError::Internal(msg)) => {
            eprintln!("internal error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn run(command: Command) -> CliResult {
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    let result = match command {
        Command::Ingest(a) => ingest(a, &mut out),
        Command::Annotate(a) => annotate(a, &mut out),
        Command::Features(a) => features(a, &mut out),
        Command::Sim(a) => sim(a, &mut out),
        Command::Case(CaseCommand::Add(a)) => case_add(*a, &mut out),
        Command::Case(CaseCommand::List(a)) => case_list(a, &mut out),
        Command::Suggest(a) => suggest(a, &mut out),
        Command::Eval(EvalCommand::Split(a)) => eval_split(a, &mut out),
        Command::Eval(EvalCommand::Run(a)) => eval_run(a, &mut out),
        Command::Eval(EvalCommand::Curve(a)) => eval_curve(a, &mut out),
        Command::Eval(EvalCommand::Bench(a)) => eval_bench(a, &mut out),
        Command::Eval(EvalCommand::Synth(a)) => eval_synth(a, &mut out),
    };
    result.and_then(|()| out.flush().map_err(write_err))
}

macro_rules! emit {
    ($out:expr, $($arg:tt)*) => {
        writeln!($out, $($arg)*).map_err(write_err)?
    };
}

fn load_table(a: &TableArgs) -> Result<Table, CliError> {
    Table::load(&a.data, a.delimiter).map_err(user)
}

fn load_lexicon(a: &LexiconArg) -> Result<Lexicon, CliError> {
    Lexicon::load(a.lexicon.as_deref()).map_err(user)
}

fn load_manifest(path: &Path) -> Result<RoleManifest, CliError> {
    RoleManifest::load(path).map_err(user)
}

fn json_line(value: &impl serde::Serialize) -> Result<String, CliError> {
    serde_json::to_string(value).map_err(internal)
}

fn ingest(a: IngestArgs, out: &mut impl Write) -> CliResult {
    let table = load_table(&a.table)?;
    emit!(out, "dataset {} ({} rows, {} columns)", table.dataset_id(), table.row_count(), table.headers().len());
    emit!(out, "{:<32}{:>9}{:>10}{:>8}{:>10}", "column", "kind", "numeric", "empty", "currency");
    for (header, column) in table.headers().iter().zip(table.columns()) {
        let kind = column.kind();
        emit!(
            out,
            "{:<32}{:>9}{:>10.3}{:>8}{:>10}",
            header,
            format!("{:?}", kind.kind).to_lowercase(),
            kind.numeric_fraction,
            kind.empty_cells,
            if column.currency { "yes" } else { "no" }
        );
    }
    if let Some(path) = a.manifest {
        let manifest = load_manifest(&path)?;
        let bound = bind_roles(&table, &manifest).map_err(user)?;
        emit!(out, "contexts");
        for c in bound.contexts() {
            emit!(out, "  {} by {}", c.measure, c.category);
        }
    }
    Ok(())
}

fn annotate(a: AnnotateArgs, out: &mut impl Write) -> CliResult {
    let table = load_table(&a.table)?;
    let lexicon = load_lexicon(&a.lexicon)?;
    for (header, column) in table.headers().iter().zip(table.columns()) {
        let concepts = lexicon.annotate(header, &column.kind(), column.currency);
        if a.json {
            let rec = serde_json::json!({ "column": header, "concepts": concepts });
            emit!(out, "{}", json_line(&rec)?);
        } else {
            emit!(out, "{header}\t{concepts}");
        }
    }
    Ok(())
}

fn features(a: FeaturesArgs, out: &mut impl Write) -> CliResult {
    let table = load_table(&a.table)?;
    let manifest = load_manifest(&a.manifest)?;
    let lexicon = load_lexicon(&a.lexicon)?;
    let bound = bind_roles(&table, &manifest).map_err(user)?;
    for c in bound.contexts() {
        let f = extract_case_features(&table, c.category, c.measure, &lexicon)
            .map_err(|e| user(format!("{} by {}: {e}", c.measure, c.category)))?;
        let rec = serde_json::json!({
            "dataset": table.dataset_id(),
            "category": c.category,
            "measure": c.measure,
            "measure_concepts": f.measure_concepts(),
            "category_concepts": f.category_concepts(),
            "association": f.association(),
            "avg_cov": f.avg_cov(),
            "baseline": baseline_rule(f.avg_cov()),
        });
        emit!(out, "{}", json_line(&rec)?);
    }
    Ok(())
}

fn read_case_file(path: &str) -> Result<Case, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| user(format!("{path}: {e}")))?;
    let line = text
        .lines()
        .find(|l| !l.trim().is_empty())
        .ok_or_else(|| user(format!("{path}: no case record")))?;
    serde_json::from_str(line).map_err(|e| user(format!("{path}: {e}")))
}

fn sim(a: SimArgs, out: &mut impl Write) -> CliResult {
    let (x, y, base_weights) = match &a.casebase {
        Some(path) => {
            let base = CaseBase::load(path).map_err(user)?;
            let get = |id: &str| {
                base.get(id)
                    .cloned()
                    .ok_or_else(|| user(format!("no case {id:?} in {}", path.display())))
            };
            (get(&a.cases[0])?, get(&a.cases[1])?, base.weights())
        }
        None => (
            read_case_file(&a.cases[0])?,
            read_case_file(&a.cases[1])?,
            FeatureWeights::default(),
        ),
    };
    let w = a.weights.unwrap_or(base_weights);
    let s = similarity(&x.features, &y.features, &w);
    emit!(out, "{:<12}{:>10}", "feature", "similarity");
    emit!(out, "{:<12}{:>10.6}", "concepts", s.concepts);
    emit!(out, "{:<12}{:>10.6}", "association", s.association);
    emit!(out, "{:<12}{:>10.6}", "cov", s.cov);
    emit!(out, "{:<12}{:>10.6}", "total", s.total);
    Ok(())
}

fn load_or_create_casebase(path: &Path, weights: Option<FeatureWeights>) -> Result<CaseBase, CliError> {
    if path.exists() {
        let mut base = CaseBase::load(path).map_err(user)?;
        if let Some(w) = weights {
            base.set_weights(w);
        }
        Ok(base)
    } else {
        Ok(CaseBase::new(weights.unwrap_or_default()))
    }
}

fn case_add(a: CaseAddArgs, out: &mut impl Write) -> CliResult {
    let table = load_table(&a.table)?;
    let lexicon = load_lexicon(&a.lexicon)?;
    if let Some(path) = &a.manifest {
        let manifest = load_manifest(path)?;
        bind_roles(&table, &manifest)
            .and_then(|b| b.context(&a.category, &a.measure))
            .map_err(user)?;
    }
    let id = a.id.unwrap_or_else(|| {
        format!("{}/{}/{}", table.dataset_id(), a.category.trim(), a.measure.trim())
    });
    let mut case = Case::from_table(id, &table, &a.category, &a.measure, &lexicon, Some(a.action))
        .map_err(user)?;
    case.question = a.question;
    let path = &a.casebase.casebase;
    let mut base = load_or_create_casebase(path, a.weights)?;
    let id = case.case_id.clone();
    base.add_case(case).map_err(user)?;
    base.save(path).map_err(user)?;
    emit!(out, "added {id} ({} cases in {})", base.len(), path.display());
    Ok(())
}

fn case_list(a: CaseListArgs, out: &mut impl Write) -> CliResult {
    let base = CaseBase::load(&a.casebase.casebase).map_err(user)?;
    if a.json {
        for case in base.cases() {
            emit!(out, "{}", json_line(case)?);
        }
        return Ok(());
    }
    emit!(out, "{:<28}{:<12}{:>9}  {:<28}{:<28}{:<14}{}", "case", "action", "avg_cov", "measure concepts", "category concepts", "association", "context");
    for case in base.cases() {
        let f = &case.features;
        emit!(
            out,
            "{:<28}{:<12}{:>9.4}  {:<28}{:<28}{:<14}{} by {}",
            case.case_id,
            case.action.map(|a| a.as_str()).unwrap_or("-"),
            f.avg_cov(),
            f.measure_concepts().to_string(),
            f.category_concepts().to_string(),
            f.association().as_str(),
            case.measure_column,
            case.category_column
        );
    }
    Ok(())
}

fn suggest(a: SuggestArgs, out: &mut impl Write) -> CliResult {
    let table = load_table(&a.table)?;
    let manifest = load_manifest(&a.manifest)?;
    let lexicon = load_lexicon(&a.lexicon)?;
    let context = bind_roles(&table, &manifest)
        .and_then(|b| b.context(&a.category, &a.measure))
        .map_err(user)?;
    let mut base = CaseBase::load(&a.casebase.casebase).map_err(user)?;
    if let Some(w) = a.weights {
        base.set_weights(w);
    }
    let s = base
        .suggest(&table, context.category, context.measure, &lexicon, a.k)
        .map_err(user)?;
    emit!(out, "{}", s.action);
    if a.quiet {
        return Ok(());
    }
    let f = &s.features;
    emit!(
        out,
        "query: {} by {}  concepts {} / {}  {}  avg_cov {:.4}",
        context.measure,
        context.category,
        f.measure_concepts(),
        f.category_concepts(),
        f.association(),
        f.avg_cov()
    );
    emit!(out, "{:<6}{:<28}{:<12}{:>9}{:>10}{:>13}{:>8}", "rank", "case", "action", "total", "concepts", "association", "cov");
    for (i, n) in s.neighbours.iter().enumerate() {
        emit!(
            out,
            "{:<6}{:<28}{:<12}{:>9.4}{:>10.4}{:>13.4}{:>8.4}",
            i + 1,
            n.case_id,
            n.action.as_str(),
            n.similarity.total,
            n.similarity.concepts,
            n.similarity.association,
            n.similarity.cov
        );
    }
    Ok(())
}

fn load_cases(a: &CorpusArgs, lexicon: &Lexicon) -> Result<Vec<Case>, CliError> {
    load_corpus(a, None)?.to_cases(lexicon).map_err(user)
}

fn load_corpus(a: &CorpusArgs, rows: Option<(usize, usize)>) -> Result<Corpus, CliError> {
    match &a.corpus {
        Some(dir) => Corpus::load_dir(dir).map_err(user),
        None => {
            let mut spec = SynthSpec {
                n_cases: a.synth_cases,
                seed: a.synth_seed,
                ..SynthSpec::default()
            };
            if let Some(rows) = rows {
                spec.rows = rows;
            }
            generate_synthetic_corpus(&spec).map_err(user)
        }
    }
}

fn eval_split(a: SplitArgs, out: &mut impl Write) -> CliResult {
    let corpus = load_corpus(&a.corpus, None)?;
    let ids: Vec<String> = corpus.items.iter().map(|i| i.case_id.clone()).collect();
    let (train, test) = split(&ids, a.split.ratio, a.split.seed).map_err(user)?;
    for (side, ids) in [("train", &train), ("test", &test)] {
        for id in ids {
            if a.json {
                let rec = serde_json::json!({ "side": side, "case_id": id });
                emit!(out, "{}", json_line(&rec)?);
            } else {
                emit!(out, "{side}\t{id}");
            }
        }
    }
    if !a.json {
        emit!(out, "# {} train, {} test, seed {}", train.len(), test.len(), a.split.seed);
    }
    Ok(())
}

fn eval_run(a: RunArgs, out: &mut impl Write) -> CliResult {
    let lexicon = load_lexicon(&a.lexicon)?;
    let cases = load_cases(&a.corpus, &lexicon)?;
    let report = run_protocol(&cases, a.split.ratio, a.split.seed, a.k, a.mask, a.weights).map_err(user)?;
    if a.json {
        emit!(out, "{}", json_line(&report)?);
    } else {
        write!(out, "{report}").map_err(write_err)?;
    }
    for &k in &a.sweep_k {
        let r = run_protocol(&cases, a.split.ratio, a.split.seed, k, a.mask, a.weights).map_err(user)?;
        if a.json {
            let rec = serde_json::json!({ "k": k, "accuracy": r.accuracy });
            emit!(out, "{}", json_line(&rec)?);
        } else {
            emit!(out, "k={k}\t{:.4}", r.accuracy);
        }
    }
    Ok(())
}

fn eval_curve(a: CurveArgs, out: &mut impl Write) -> CliResult {
    let lexicon = load_lexicon(&a.lexicon)?;
    let cases = load_cases(&a.corpus, &lexicon)?;
    let points = learning_curve(&cases, &a.sizes, a.split.ratio, a.split.seed, a.k, a.weights)
        .map_err(user)?;
    if !a.json {
        emit!(out, "{:>6}{:>10}", "size", "accuracy");
    }
    for p in points {
        if a.json {
            emit!(out, "{}", json_line(&p)?);
        } else {
            emit!(out, "{:>6}{:>10.4}", p.size, p.accuracy);
        }
    }
    Ok(())
}

fn eval_bench(a: BenchArgs, out: &mut impl Write) -> CliResult {
    let lexicon = load_lexicon(&a.lexicon)?;
    let corpus = load_corpus(&a.corpus, Some(a.rows))?;
    let (known, queries) = split(&corpus.items, a.split.ratio, a.split.seed).map_err(user)?;
    let report = bench(&known, &queries, a.k, &lexicon, a.weights).map_err(user)?;
    if a.json {
        emit!(out, "{}", json_line(&report)?);
    } else {
        emit!(out, "feature extraction ({} known cases): {:.3} ms", known.len(), report.feature_extraction_total);
        emit!(
            out,
            "per suggestion over {} queries ({} warm-up): mean {:.3} ms, min {:.3} ms, max {:.3} ms",
            report.suggestions,
            report.warmup,
            report.per_suggestion_mean,
            report.per_suggestion_min,
            report.per_suggestion_max
        );
    }
    Ok(())
}

fn eval_synth(a: SynthArgs, out: &mut impl Write) -> CliResult {
    let spec = SynthSpec {
        n_cases: a.cases,
        noise: a.noise,
        seed: a.seed,
        mix: a.mix.unwrap_or(SynthSpec::default().mix),
        rows: a.rows,
    };
    let corpus = generate_synthetic_corpus(&spec).map_err(user)?;
    corpus.save_dir(&a.out).map_err(user)?;
    let mut counts = [0usize; 3];
    for item in &corpus.items {
        counts[item.action.index()] += 1;
    }
    emit!(
        out,
        "wrote {} cases to {} (average {}, last-period {}, sum {})",
        corpus.len(),
        a.out.display(),
        counts[0],
        counts[1],
        counts[2]
    );
    Ok(())
}
