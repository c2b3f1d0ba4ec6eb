// Label-free q prediction from corpus statistics, and refitting the
// coefficient from observed (htok, q_opt) pairs.

use qlog_bm25::stats::fit_coefficient;
use qlog_bm25::synthetic::random_corpus;
use qlog_bm25::{compute_corpus_stats, predict_q, recovery, PredictorModel, TokenizerMode};

pub fn run_example() -> Result<f64, Box<dyn std::error::Error>> {
    let corpus = random_corpus(2_000, 20_000, 40, 7);
    let stats = compute_corpus_stats(&corpus, TokenizerMode::T0Default)?;
    let model = PredictorModel::default();
    let q = predict_q(&stats, &model);
    println!(
        "N={} tokens={} V={} htok={:.4} ttr={:.4} median_df={} -> q_pred={:.2}",
        stats.n_docs, stats.n_tok, stats.vocab_size, stats.htok, stats.ttr, stats.median_df, q
    );

    for htok in [0.01, 0.03, 0.063, 0.12, 0.2] {
        println!("htok={htok:<5} q={:.3}", model.predict(htok));
    }

    let c = fit_coefficient(&[(0.05, 0.62), (0.08, 0.45), (0.11, 0.2)])?;
    println!("refit coefficient: {c:.2}");
    println!("recovery: {}", recovery(0.40, 0.45, 0.46));
    Ok(q)
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example().map(|_| ())
}
