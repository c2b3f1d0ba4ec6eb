// Systems overhead of q-log versus BM25: build, rescale and query latency.

use qlog_bm25::bench::{run_bench, BenchConfig};
use qlog_bm25::synthetic::{random_corpus, random_queries};
use qlog_bm25::{build_index, TokenizerMode};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let corpus = random_corpus(5_000, 30_000, 60, 3);
    let queries = random_queries(200, 30_000, 6, 3);
    let base = build_index(&corpus, TokenizerMode::T0Default, Default::default())?;
    let report = run_bench(&base, Some(&corpus), &queries, BenchConfig { trials: 3, top_k: 100, q: 0.1 })?;
    print!("{}", report.to_table());
    Ok(())
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
