//! DPH, the parameter-free divergence-from-randomness model.
//!
//! For a term with frequency `tf` in a document of length `dl`, corpus size
//! `N`, mean length `avg_dl` and collection frequency `F`:
//!
//! ```text
//! f     = min(tf / dl, 1 - 1e-9)
//! norm  = (1 - f)^2 / (tf + 1)
//! score = norm * ( tf * log2((tf * avg_dl / dl) * (N / F))
//!                + 0.5 * log2(2 * pi * tf * (1 - f)) )
//! ```

use std::f64::consts::PI;

use crate::corpus::Corpus;
use crate::error::Result;
use crate::index::{analyze_corpus, BuildParams, IndexHeader, Postings, Scorer, SparseScoreIndex};
use crate::tokenize::TokenizerMode;

/// Upper bound on `tf / dl`, keeping `log2(1 - f)` finite.
pub const DPH_MAX_F: f64 = 1.0 - 1e-9;

/// Per-(term, document) DPH weight.
pub fn dph_score(tf: f64, doc_len: f64, avg_len: f64, n_docs: f64, coll_freq: f64) -> f64 {
    let f = (tf / doc_len).min(DPH_MAX_F);
    let norm = (1.0 - f) * (1.0 - f) / (tf + 1.0);
    norm * (tf * ((tf * avg_len / doc_len) * (n_docs / coll_freq)).log2() + 0.5 * (2.0 * PI * tf * (1.0 - f)).log2())
}

/// Builds an index whose entries are DPH weights. The header marks the
/// scorer so IDF rescales are refused.
pub fn build_dph_index(corpus: &Corpus, mode: TokenizerMode) -> Result<SparseScoreIndex> {
    let (names, docs) = analyze_corpus(corpus, mode);
    let postings = Postings::assemble(names, &docs)?;
    let n_docs = docs.len() as f64;
    let mut scores = vec![0f64; postings.row_idx.len()];
    for col in 0..postings.terms.len() {
        let range = postings.col_ptr[col] as usize..postings.col_ptr[col + 1] as usize;
        let coll_freq: f64 = postings.tfs[range.clone()].iter().map(|&tf| tf as f64).sum();
        for i in range {
            let d = postings.row_idx[i] as usize;
            scores[i] = dph_score(
                postings.tfs[i] as f64,
                postings.doc_lens[d] as f64,
                postings.avg_len,
                n_docs,
                coll_freq,
            );
        }
    }
    let header = IndexHeader {
        mode,
        scorer: Scorer::Dph,
        params: BuildParams::default(),
        applied_q: None,
        applied_gamma: None,
    };
    let doc_ids = corpus.iter().map(|d| d.doc_id.clone()).collect();
    Ok(SparseScoreIndex::from_parts(header, doc_ids, postings, scores))
}
