// DPH shares the sparse layout and the scoring loop with BM25.

use qlog_bm25::eval::{evaluate, Metric};
use qlog_bm25::synthetic::{hapax_collection, HapaxSpec};
use qlog_bm25::{batch_retrieve, build_dph_index, build_index, rescale_index, TokenizerMode};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let c = hapax_collection(HapaxSpec::default(), 2);
    let mode = TokenizerMode::T1Whitespace;
    let mut dph = build_dph_index(&c.corpus, mode)?;
    let bm25 = build_index(&c.corpus, mode, Default::default())?;
    for (name, index) in [("dph", &dph), ("bm25", &bm25)] {
        let runs = batch_retrieve(index, &c.queries, mode, 10)?;
        println!("{name}\tndcg@10={:.4}", evaluate(&runs, &c.qrels, Metric::Ndcg(10)).mean);
    }
    // IDF rescales are defined for BM25 weights only.
    assert!(rescale_index(&mut dph, 0.5).is_err());
    Ok(())
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
