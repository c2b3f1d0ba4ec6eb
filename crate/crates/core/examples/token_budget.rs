// Recall@K-tokens: would the gold document fit into a context window when
// results are concatenated in rank order?

use qlog_bm25::eval::{recall_at_token_budget, WhitespaceCounter};
use qlog_bm25::synthetic::{hapax_collection, HapaxSpec};
use qlog_bm25::{batch_retrieve, build_index, rescale_index, TokenizerMode};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let c = hapax_collection(HapaxSpec::default(), 9);
    let mode = TokenizerMode::T1Whitespace;
    let bm25 = build_index(&c.corpus, mode, Default::default())?;
    let mut qlog = bm25.clone();
    rescale_index(&mut qlog, 0.2)?;
    let budgets = [16, 64, 256, 1024];

    for (name, index) in [("bm25", &bm25), ("qlog", &qlog)] {
        let runs = batch_retrieve(index, &c.queries, mode, 100)?;
        let words = recall_at_token_budget(&runs, &c.corpus, &c.qrels, &budgets, &WhitespaceCounter)?;
        let chars = |t: &str| (t.len() as u64).div_ceil(4);
        let approx = recall_at_token_budget(&runs, &c.corpus, &c.qrels, &budgets, &chars)?;
        for (w, a) in words.points.iter().zip(&approx.points) {
            println!("{name}\t{}\twords={:.3}\tchars/4={:.3}", w.budget, w.recall, a.recall);
        }
    }
    Ok(())
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
