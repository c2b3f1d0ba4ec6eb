//! In-place IDF replacement on a built index.
//!
//! A fresh BM25 index stores `idf_lucene(t) * tf_factor(t, d)`. Replacing the
//! IDF is a single pass that multiplies column `t` by
//! `new_idf(t) / idf_lucene(t)`; the sparsity pattern never changes.

use crate::error::{Error, Result};
use crate::idf::{idf_lucene, idf_qlog};
use crate::index::{Scorer, SparseScoreIndex};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RescaleOutcome {
    /// The identity parameter was requested; the matrix was not touched.
    Skipped,
    Applied,
}

/// Rescales every column to the q-log RSJ IDF.
///
/// `q == 1.0` (exactly) leaves the index bit-identical and its header
/// unchanged. Any other finite `q` overwrites the scores and records
/// `applied_q`. Rescaling an index that was already rescaled is an error.
pub fn rescale_index(index: &mut SparseScoreIndex, q: f64) -> Result<RescaleOutcome> {
    if !q.is_finite() {
        return Err(Error::Domain(format!("q must be finite, got {q}")));
    }
    check_baseline(index)?;
    if q == 1.0 {
        return Ok(RescaleOutcome::Skipped);
    }
    let n_docs = index.num_docs() as u64;
    let ratios = index
        .df
        .iter()
        .map(|&df| Ok(idf_qlog(df as u64, n_docs, q)? / idf_lucene(df as u64, n_docs)?))
        .collect::<Result<Vec<f64>>>()?;
    scale_columns(index, &ratios);
    index.header.applied_q = Some(q);
    Ok(RescaleOutcome::Applied)
}

/// Rescales every column to `idf_lucene^gamma`. `gamma == 1.0` is skipped.
pub fn rescale_index_gamma(index: &mut SparseScoreIndex, gamma: f64) -> Result<RescaleOutcome> {
    if !(gamma.is_finite() && gamma > 0.0) {
        return Err(Error::Domain(format!("gamma must be finite and > 0, got {gamma}")));
    }
    check_baseline(index)?;
    if gamma == 1.0 {
        return Ok(RescaleOutcome::Skipped);
    }
    let n_docs = index.num_docs() as u64;
    let ratios = index
        .df
        .iter()
        .map(|&df| Ok(idf_lucene(df as u64, n_docs)?.powf(gamma - 1.0)))
        .collect::<Result<Vec<f64>>>()?;
    scale_columns(index, &ratios);
    index.header.applied_gamma = Some(gamma);
    Ok(RescaleOutcome::Applied)
}

fn check_baseline(index: &SparseScoreIndex) -> Result<()> {
    let h = index.header();
    if h.scorer != Scorer::Bm25 {
        return Err(Error::State(format!("cannot rescale a {} index", h.scorer)));
    }
    if let Some(q) = h.applied_q {
        return Err(Error::State(format!(
            "index was already rescaled (q = {q}); reload the baseline index first"
        )));
    }
    if let Some(g) = h.applied_gamma {
        return Err(Error::State(format!(
            "index was already rescaled (gamma = {g}); reload the baseline index first"
        )));
    }
    Ok(())
}

fn scale_columns(index: &mut SparseScoreIndex, ratios: &[f64]) {
    let col_ptr = &index.col_ptr;
    let scores = &mut index.scores;
    for (t, &ratio) in ratios.iter().enumerate() {
        let lo = col_ptr[t] as usize;
        let hi = col_ptr[t + 1] as usize;
        for s in &mut scores[lo..hi] {
            *s *= ratio;
        }
    }
}
