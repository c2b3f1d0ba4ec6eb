// Compare BM25 against q-log on a synthetic collection: NDCG@10, MRR and a
// paired bootstrap on the per-query differences.

use qlog_bm25::eval::{evaluate, paired_bootstrap, Metric};
use qlog_bm25::synthetic::{hapax_collection, HapaxSpec};
use qlog_bm25::{batch_retrieve, build_index, rescale_index, TokenizerMode};

pub fn run_example() -> Result<f64, Box<dyn std::error::Error>> {
    let c = hapax_collection(HapaxSpec::default(), 11);
    let mode = TokenizerMode::T1Whitespace;
    let bm25 = build_index(&c.corpus, mode, Default::default())?;
    let mut qlog = bm25.clone();
    rescale_index(&mut qlog, 0.1)?;

    let a = batch_retrieve(&bm25, &c.queries, mode, 100)?;
    let b = batch_retrieve(&qlog, &c.queries, mode, 100)?;
    for (name, runs) in [("bm25", &a), ("qlog(q=0.1)", &b)] {
        let ndcg = evaluate(runs, &c.qrels, Metric::Ndcg(10));
        let mrr = evaluate(runs, &c.qrels, Metric::Mrr);
        println!("{name:<12} ndcg@10={:.4} mrr={:.4}", ndcg.mean, mrr.mean);
    }

    let na = evaluate(&a, &c.qrels, Metric::Ndcg(10));
    let nb = evaluate(&b, &c.qrels, Metric::Ndcg(10));
    let boot = paired_bootstrap(&na.per_query, &nb.per_query, 10_000, 42)?;
    println!(
        "delta={:+.4} 95% CI [{:+.4}, {:+.4}] {}",
        boot.mean_delta,
        boot.ci_lo,
        boot.ci_hi,
        boot.p_display()
    );
    Ok(boot.mean_delta)
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example().map(|_| ())
}
