// How the q-log transform reweights rare and common terms, and how the
// in-place rescale leaves q = 1 untouched.

use qlog_bm25::synthetic::random_corpus;
use qlog_bm25::{build_index, idf_lucene, idf_qlog, rescale_index, RescaleOutcome, TokenizerMode};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let n = 182_440;
    println!("df\tlucene\tq=1.0\tq=0.5\tq=0.1");
    for df in [1u64, 20, 1820, 3714, 14203] {
        println!(
            "{df}\t{:.2}\t{:.2}\t{:.2}\t{:.2}",
            idf_lucene(df, n)?,
            idf_qlog(df, n, 1.0)?,
            idf_qlog(df, n, 0.5)?,
            idf_qlog(df, n, 0.1)?
        );
    }

    let corpus = random_corpus(2_000, 5_000, 30, 1);
    let mut index = build_index(&corpus, TokenizerMode::T1Whitespace, Default::default())?;
    let before = index.scores().to_vec();

    assert_eq!(rescale_index(&mut index.clone(), 1.0)?, RescaleOutcome::Skipped);
    assert_eq!(rescale_index(&mut index, 0.1)?, RescaleOutcome::Applied);
    println!("{}", index.header().method_label());

    // One column per df, rarest first.
    let mut seen = std::collections::BTreeSet::new();
    let mut cols: Vec<usize> = (0..index.num_terms()).collect();
    cols.sort_by_key(|&t| index.df()[t]);
    for t in cols {
        let df = index.df()[t];
        if [1, 10, 100, 1000].contains(&df) && seen.insert(df) {
            let start = index.col_ptr()[t] as usize;
            println!("{}: df={df} weight x{:.2}", index.terms()[t], index.scores()[start] / before[start]);
        }
    }
    Ok(())
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
