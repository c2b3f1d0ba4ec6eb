//! Command-line front end. The `qlog-bm25` binary calls [`run`].

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use crate::bench::{run_bench, BenchConfig};
use crate::corpus::{load_corpus, load_qrels, load_queries, QrelSet, QuerySet, TextFormat};
use crate::dph::build_dph_index;
use crate::eval::{
    df_bin_occlusion, evaluate, paired_bootstrap, q_sweep_from_path, recall_at_token_budget, DfBin, Metric,
    WhitespaceCounter, DEFAULT_GRID, DEFAULT_RESAMPLES, NDCG_K,
};
use crate::index::{build_index, load_index, save_index, BuildParams, SparseScoreIndex};
use crate::rescale::{rescale_index, rescale_index_gamma, RescaleOutcome};
use crate::search::{batch_retrieve, write_run};
use crate::stats::{compute_corpus_stats, predict_q, PredictorModel};
use crate::tokenize::TokenizerMode;

#[derive(Debug, Parser)]
#[command(name = "qlog-bm25", version, about = "BM25 with q-log IDF for code retrieval")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Build an index from a corpus.
    Build(BuildArgs),
    /// Apply a q-log or idf^gamma rescale to a baseline index.
    Rescale(RescaleArgs),
    /// Retrieve top-k documents and write a run file.
    Search(SearchArgs),
    /// NDCG@10 over a grid of q values; reports the oracle q.
    Sweep(SweepArgs),
    /// Corpus statistics and the label-free q prediction.
    PredictQ(PredictArgs),
    /// Evaluate a method, optionally against BM25 with a paired bootstrap.
    Eval(EvalArgs),
    /// df-bin occlusion diagnostic.
    Occlusion(OcclusionArgs),
    /// Systems-overhead benchmark.
    Bench(BenchArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Mode {
    T0,
    T1,
    T2,
    T3,
}

impl From<Mode> for TokenizerMode {
    fn from(m: Mode) -> Self {
        match m {
            Mode::T0 => TokenizerMode::T0Default,
            Mode::T1 => TokenizerMode::T1Whitespace,
            Mode::T2 => TokenizerMode::T2IdentifierAware,
            Mode::T3 => TokenizerMode::T3SubtokensOnly,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum, PartialEq, Eq)]
enum Format {
    Tsv,
    Json,
    Csv,
}

#[derive(Debug, Args)]
struct Scoring {
    /// q-log exponent.
    #[arg(long, conflicts_with_all = ["gamma", "dph"])]
    q: Option<f64>,
    /// idf^gamma exponent.
    #[arg(long, conflicts_with = "dph")]
    gamma: Option<f64>,
    /// Score with DPH instead of BM25.
    #[arg(long)]
    dph: bool,
}

#[derive(Debug, Args)]
struct BuildArgs {
    #[arg(long)]
    corpus: PathBuf,
    #[arg(long, value_enum, default_value = "t0")]
    mode: Mode,
    #[arg(long, default_value_t = 1.5)]
    k1: f64,
    #[arg(long, default_value_t = 0.75)]
    b: f64,
    #[command(flatten)]
    scoring: Scoring,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Debug, Args)]
struct RescaleArgs {
    #[arg(long)]
    index: PathBuf,
    #[arg(long, conflicts_with = "gamma", required_unless_present = "gamma")]
    q: Option<f64>,
    #[arg(long)]
    gamma: Option<f64>,
    /// Output path; defaults to rewriting the input.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct SearchArgs {
    #[arg(long)]
    index: PathBuf,
    #[arg(long)]
    queries: PathBuf,
    #[arg(long, value_enum)]
    mode: Option<Mode>,
    #[command(flatten)]
    scoring: Scoring,
    #[arg(long, default_value_t = 100)]
    k: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct SweepArgs {
    #[arg(long)]
    index: PathBuf,
    #[arg(long)]
    queries: PathBuf,
    #[arg(long)]
    qrels: PathBuf,
    /// Comma-separated q values.
    #[arg(long, value_delimiter = ',')]
    grid: Option<Vec<f64>>,
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct PredictArgs {
    #[arg(long)]
    corpus: PathBuf,
    #[arg(long, value_enum, default_value = "t0")]
    mode: Mode,
    #[arg(long, default_value_t = PredictorModel::SHIPPED_COEFFICIENT)]
    coefficient: f64,
    #[arg(long, value_enum, default_value = "tsv")]
    format: Format,
}

#[derive(Debug, Args)]
struct EvalArgs {
    #[arg(long)]
    index: PathBuf,
    #[arg(long)]
    queries: PathBuf,
    #[arg(long)]
    qrels: PathBuf,
    #[arg(long, conflicts_with = "gamma")]
    q: Option<f64>,
    #[arg(long)]
    gamma: Option<f64>,
    /// Recall cutoff.
    #[arg(long, default_value_t = 100)]
    k: usize,
    /// Corpus, needed for --budgets.
    #[arg(long)]
    corpus: Option<PathBuf>,
    /// Token budgets for Recall@K-tokens.
    #[arg(long, value_delimiter = ',')]
    budgets: Option<Vec<u64>>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = DEFAULT_RESAMPLES)]
    resamples: usize,
    #[arg(long, value_enum, default_value = "tsv")]
    format: Format,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct OcclusionArgs {
    #[arg(long)]
    index: PathBuf,
    #[arg(long)]
    queries: PathBuf,
    #[arg(long)]
    qrels: PathBuf,
    #[arg(long)]
    q: Option<f64>,
    /// Bins such as `1,2,3-5,6-20,5001+`.
    #[arg(long)]
    bins: Option<String>,
    #[arg(long, value_enum, default_value = "tsv")]
    format: Format,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct BenchArgs {
    #[arg(long)]
    index: PathBuf,
    #[arg(long)]
    queries: PathBuf,
    /// Also time index builds from this corpus.
    #[arg(long)]
    corpus: Option<PathBuf>,
    #[arg(long, default_value_t = 5)]
    trials: usize,
    #[arg(long, default_value_t = 100)]
    top_k: usize,
    #[arg(long, default_value_t = 0.1)]
    q: f64,
    #[arg(long, default_value_t = 1000)]
    max_queries: usize,
    #[arg(long, value_enum, default_value = "tsv")]
    format: Format,
}

/// Parses `argv` (including the program name) and runs the subcommand.
/// Returns 0 on success, 2 on usage errors and 1 on runtime errors.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    eprintln!("# config: {:?}", cli.command);
    match dispatch(cli.command) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e:#}");
            1
        }
    }
}

fn output(path: Option<&Path>) -> anyhow::Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p).with_context(|| format!("creating {}", p.display()))?)),
        None => Box::new(BufWriter::new(io::stdout())),
    })
}

fn read_queries(path: &Path) -> anyhow::Result<QuerySet> {
    Ok(load_queries(path, TextFormat::from_path(path))?)
}

fn read_eval_inputs(queries: &Path, qrels: &Path) -> anyhow::Result<(QuerySet, QrelSet)> {
    let queries = read_queries(queries)?;
    let qrels = load_qrels(qrels)?;
    if qrels.duplicate_rows > 0 {
        eprintln!("warning: {} duplicate qrel rows; the last value was kept", qrels.duplicate_rows);
    }
    qrels.check_against(&queries)?;
    Ok((queries, qrels))
}

fn apply_scoring(index: &mut SparseScoreIndex, q: Option<f64>, gamma: Option<f64>) -> anyhow::Result<()> {
    let outcome = match (q, gamma) {
        (Some(q), None) => rescale_index(index, q)?,
        (None, Some(g)) => rescale_index_gamma(index, g)?,
        (None, None) => return Ok(()),
        (Some(_), Some(_)) => bail!("--q and --gamma are mutually exclusive"),
    };
    if outcome == RescaleOutcome::Skipped {
        eprintln!("rescale skipped (bit-identity gate): index left unchanged");
    }
    Ok(())
}

fn dispatch(command: Command) -> anyhow::Result<()> {
    match command {
        Command::Build(a) => {
            let corpus = load_corpus(&a.corpus, TextFormat::from_path(&a.corpus))?;
            let mode = a.mode.into();
            let mut index = if a.scoring.dph {
                build_dph_index(&corpus, mode)?
            } else {
                build_index(&corpus, mode, BuildParams::new(a.k1, a.b)?)?
            };
            apply_scoring(&mut index, a.scoring.q, a.scoring.gamma)?;
            save_index(&index, &a.out)?;
            eprintln!(
                "built {} index: {} docs, {} terms, {} entries -> {}",
                index.header().method_label(),
                index.num_docs(),
                index.num_terms(),
                index.nnz(),
                a.out.display()
            );
        }
        Command::Rescale(a) => {
            let mut index = load_index(&a.index)?;
            let outcome = match (a.q, a.gamma) {
                (Some(q), _) => rescale_index(&mut index, q)?,
                (None, Some(g)) => rescale_index_gamma(&mut index, g)?,
                (None, None) => bail!("one of --q or --gamma is required"),
            };
            let out = a.out.as_deref().unwrap_or(&a.index);
            match outcome {
                RescaleOutcome::Skipped => {
                    println!("skipped (bit-identity gate): index unchanged");
                    if out != a.index {
                        save_index(&index, out)?;
                    }
                }
                RescaleOutcome::Applied => {
                    save_index(&index, out)?;
                    println!("applied {} -> {}", index.header().method_label(), out.display());
                }
            }
        }
        Command::Search(a) => {
            let mut index = if a.scoring.dph {
                bail!("--dph applies at build time; pass a DPH index instead")
            } else {
                load_index(&a.index)?
            };
            apply_scoring(&mut index, a.scoring.q, a.scoring.gamma)?;
            let mode = a.mode.map(TokenizerMode::from).unwrap_or(index.mode());
            let queries = read_queries(&a.queries)?;
            let runs = batch_retrieve(&index, &queries, mode, a.k)?;
            let mut w = output(a.out.as_deref())?;
            write_run(&mut w, &runs)?;
            w.flush()?;
        }
        Command::Sweep(a) => {
            let (queries, qrels) = read_eval_inputs(&a.queries, &a.qrels)?;
            let grid = a.grid.unwrap_or_else(|| DEFAULT_GRID.to_vec());
            let table = q_sweep_from_path(&a.index, &queries, &qrels, &grid)?;
            let mut w = output(a.out.as_deref())?;
            match a.format {
                Format::Json => writeln!(w, "{}", serde_json::to_string_pretty(&table)?)?,
                Format::Csv | Format::Tsv => {
                    table.write_csv(&mut w)?;
                }
            }
            w.flush()?;
            eprintln!("q_opt = {} (ndcg@10 = {:.4})", table.q_opt, table.best().mean_ndcg);
        }
        Command::PredictQ(a) => {
            let corpus = load_corpus(&a.corpus, TextFormat::from_path(&a.corpus))?;
            let stats = compute_corpus_stats(&corpus, a.mode.into())?;
            let model = PredictorModel::with_coefficient(a.coefficient)?;
            let q = predict_q(&stats, &model);
            match a.format {
                Format::Json => println!("{}", json!({ "htok": stats.htok, "q_pred": q, "stats": stats })),
                Format::Tsv | Format::Csv => {
                    let sep = if a.format == Format::Csv { "," } else { "\t" };
                    println!("htok{sep}q_pred");
                    println!("{:.6}{sep}{:.4}", stats.htok, q);
                }
            }
        }
        Command::Eval(a) => eval_command(a)?,
        Command::Occlusion(a) => {
            let (queries, qrels) = read_eval_inputs(&a.queries, &a.qrels)?;
            let index = load_index(&a.index)?;
            let bins = match &a.bins {
                Some(s) => DfBin::parse_list(s)?,
                None => DfBin::default_bins(),
            };
            let report = df_bin_occlusion(&index, &queries, &qrels, &bins, a.q)?;
            let mut w = output(a.out.as_deref())?;
            match a.format {
                Format::Json => writeln!(w, "{}", serde_json::to_string_pretty(&report)?)?,
                _ => report.write_tsv(&mut w)?,
            }
            w.flush()?;
        }
        Command::Bench(a) => {
            let index = load_index(&a.index)?;
            let mut queries = read_queries(&a.queries)?;
            queries.truncate(a.max_queries);
            let corpus = match &a.corpus {
                Some(p) => Some(load_corpus(p, TextFormat::from_path(p))?),
                None => None,
            };
            let config = BenchConfig {
                trials: a.trials,
                top_k: a.top_k,
                q: a.q,
            };
            let report = run_bench(&index, corpus.as_ref(), &queries, config)?;
            match a.format {
                Format::Json => println!("{}", serde_json::to_string_pretty(&report)?),
                _ => print!("{}", report.to_table()),
            }
        }
    }
    Ok(())
}

fn eval_command(a: EvalArgs) -> anyhow::Result<()> {
    let (queries, qrels) = read_eval_inputs(&a.queries, &a.qrels)?;
    let base = load_index(&a.index)?;
    let mut method = base.clone();
    apply_scoring(&mut method, a.q, a.gamma)?;
    let depth = a.k.max(NDCG_K);
    let runs = batch_retrieve(&method, &queries, method.mode(), depth)?;
    let ndcg = evaluate(&runs, &qrels, Metric::Ndcg(NDCG_K));
    let mrr = evaluate(&runs, &qrels, Metric::Mrr);
    let recall = evaluate(&runs, &qrels, Metric::Recall(a.k));

    let comparison = if a.q.is_some() || a.gamma.is_some() {
        let base_runs = batch_retrieve(&base, &queries, base.mode(), depth)?;
        let base_ndcg = evaluate(&base_runs, &qrels, Metric::Ndcg(NDCG_K));
        let boot = paired_bootstrap(&base_ndcg.per_query, &ndcg.per_query, a.resamples, a.seed)?;
        Some((base_ndcg, boot))
    } else {
        None
    };

    let budget = match (&a.budgets, &a.corpus) {
        (Some(b), Some(c)) => {
            let corpus = load_corpus(c, TextFormat::from_path(c))?;
            Some(recall_at_token_budget(&runs, &corpus, &qrels, b, &WhitespaceCounter)?)
        }
        (Some(_), None) => bail!("--budgets needs --corpus"),
        _ => None,
    };

    let mut w = output(a.out.as_deref())?;
    let label = method.header().method_label();
    match a.format {
        Format::Json => {
            let mut doc = json!({
                "method": label,
                "ndcg@10": ndcg,
                "mrr": mrr,
                format!("recall@{}", a.k): recall,
            });
            if let Some((base_ndcg, boot)) = &comparison {
                doc["baseline_ndcg@10"] = json!(base_ndcg.mean);
                doc["bootstrap"] = json!(boot);
                doc["p"] = json!(boot.p_display());
            }
            if let Some(b) = &budget {
                doc["recall_at_token_budget"] = json!(b);
            }
            writeln!(w, "{}", serde_json::to_string_pretty(&doc)?)?;
        }
        _ => {
            writeln!(w, "method\t{label}")?;
            writeln!(w, "queries\t{}", ndcg.n_queries)?;
            writeln!(w, "skipped\t{}", ndcg.skipped.len())?;
            writeln!(w, "ndcg@10\t{:.4}", ndcg.mean)?;
            writeln!(w, "mrr\t{:.4}", mrr.mean)?;
            writeln!(w, "recall@{}\t{:.4}", a.k, recall.mean)?;
            if let Some((base_ndcg, boot)) = &comparison {
                writeln!(w, "bm25_ndcg@10\t{:.4}", base_ndcg.mean)?;
                writeln!(w, "delta\t{:+.4}", boot.mean_delta)?;
                writeln!(w, "ci95\t[{:+.4}, {:+.4}]", boot.ci_lo, boot.ci_hi)?;
                writeln!(w, "sign_reversals\t{}", boot.sign_reversals)?;
                writeln!(w, "resamples\t{}", boot.resamples)?;
                writeln!(w, "seed\t{}", boot.seed)?;
                writeln!(w, "p\t{}", boot.p_display())?;
            }
            if let Some(b) = &budget {
                for p in &b.points {
                    writeln!(w, "recall@{}tok\t{:.4}", p.budget, p.recall)?;
                }
            }
        }
    }
    w.flush()?;
    Ok(())
}
