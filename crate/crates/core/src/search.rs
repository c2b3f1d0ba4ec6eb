//! Query scoring and top-k retrieval.
//!
//! One code path serves every index flavour: a query is a multiset of terms,
//! and a document's score is the sum of the stored column entries.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::io::Write;
use std::path::Path;
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::Serialize;

use crate::corpus::QuerySet;
use crate::error::{Error, Result};
use crate::index::SparseScoreIndex;
use crate::tokenize::{Tokenizer, TokenizerMode};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Hit {
    pub doc_id: String,
    pub doc_index: u32,
    pub score: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RankedList {
    pub query_id: String,
    pub hits: Vec<Hit>,
}

impl RankedList {
    /// 1-based rank of `doc_id`, if retrieved.
    pub fn rank_of(&self, doc_id: &str) -> Option<usize> {
        self.hits.iter().position(|h| h.doc_id == doc_id).map(|p| p + 1)
    }

    pub fn doc_ids(&self) -> impl Iterator<Item = &str> {
        self.hits.iter().map(|h| h.doc_id.as_str())
    }
}

/// Dense per-document scores for a tokenized query. Unknown tokens are
/// ignored and repeated tokens count once per occurrence.
pub fn score_query<S: AsRef<str>>(index: &SparseScoreIndex, tokens: &[S]) -> Vec<f64> {
    let mut scores = vec![0.0; index.num_docs()];
    let ids: Vec<u32> = tokens.iter().filter_map(|t| index.term_id(t.as_ref())).collect();
    accumulate(index, &ids, &mut scores);
    scores
}

/// Adds the columns of `term_ids` into `scores`, which must hold one slot
/// per document.
pub fn accumulate(index: &SparseScoreIndex, term_ids: &[u32], scores: &mut [f64]) {
    for &t in term_ids {
        let (rows, vals) = index.column(t);
        for (&d, &v) in rows.iter().zip(vals) {
            scores[d as usize] += v;
        }
    }
}

/// Min-heap entry: the heap top is the worst retained document.
#[derive(Clone, Copy)]
struct Kept(u32, f64);

impl Kept {
    /// Greater means better: higher score, then lower document index.
    fn rank_cmp(&self, other: &Self) -> Ordering {
        self.1.partial_cmp(&other.1).unwrap_or(Ordering::Equal).then(other.0.cmp(&self.0))
    }
}

impl PartialEq for Kept {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Kept {}

impl PartialOrd for Kept {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Kept {
    fn cmp(&self, other: &Self) -> Ordering {
        other.rank_cmp(self)
    }
}

/// Highest `k` scores, descending; ties go to the lower document index.
/// One pass with a size-`k` heap.
pub fn top_k_indices(scores: &[f64], k: usize) -> Vec<(u32, f64)> {
    let k = k.min(scores.len());
    if k == 0 {
        return Vec::new();
    }
    let mut heap = BinaryHeap::with_capacity(k);
    for (d, &s) in scores.iter().enumerate().take(k) {
        heap.push(Kept(d as u32, s));
    }
    let mut floor = heap.peek().map_or(f64::NEG_INFINITY, |w| w.1);
    for (d, &s) in scores.iter().enumerate().skip(k) {
        // Later documents lose ties, so only a strictly higher score enters.
        if s > floor {
            let mut worst = heap.peek_mut().expect("heap holds k entries");
            *worst = Kept(d as u32, s);
            drop(worst);
            floor = heap.peek().map_or(f64::NEG_INFINITY, |w| w.1);
        }
    }
    let mut out: Vec<Kept> = heap.into_vec();
    out.sort_unstable_by(|a, b| b.rank_cmp(a));
    out.into_iter().map(|Kept(d, s)| (d, s)).collect()
}

fn check_mode(index: &SparseScoreIndex, mode: TokenizerMode) -> Result<()> {
    if index.mode() != mode {
        return Err(Error::ModeMismatch {
            index: index.mode().to_string(),
            query: mode.to_string(),
        });
    }
    Ok(())
}

fn to_ranked(index: &SparseScoreIndex, query_id: &str, top: Vec<(u32, f64)>) -> RankedList {
    RankedList {
        query_id: query_id.to_string(),
        hits: top
            .into_iter()
            .map(|(d, score)| Hit {
                doc_id: index.doc_id(d as usize).to_string(),
                doc_index: d,
                score,
            })
            .collect(),
    }
}

/// Tokenizes `query_text` with `mode` and returns the best `k` documents.
pub fn top_k(index: &SparseScoreIndex, query_id: &str, query_text: &str, mode: TokenizerMode, k: usize) -> Result<RankedList> {
    if k == 0 {
        return Err(Error::Invalid("k must be at least 1".into()));
    }
    check_mode(index, mode)?;
    let tokens = Tokenizer::new(mode).tokenize(query_text);
    Ok(top_k_tokens(index, query_id, &tokens, k))
}

/// Top-k for an already tokenized query.
pub fn top_k_tokens<S: AsRef<str>>(index: &SparseScoreIndex, query_id: &str, tokens: &[S], k: usize) -> RankedList {
    let scores = score_query(index, tokens);
    to_ranked(index, query_id, top_k_indices(&scores, k))
}

/// Runs `top_k` for every query, in query order. Queries run in parallel.
pub fn batch_retrieve(index: &SparseScoreIndex, queries: &QuerySet, mode: TokenizerMode, k: usize) -> Result<Vec<RankedList>> {
    if k == 0 {
        return Err(Error::Invalid("k must be at least 1".into()));
    }
    check_mode(index, mode)?;
    let tokenizer = Tokenizer::new(mode);
    Ok(queries
        .entries()
        .par_iter()
        .map(|q| top_k_tokens(index, &q.query_id, &tokenizer.tokenize(&q.text), k))
        .collect())
}

/// Sequential retrieval with per-query wall-clock latencies. Query
/// tokenization happens before timing; the score buffer is reused.
pub fn batch_retrieve_timed(
    index: &SparseScoreIndex,
    queries: &QuerySet,
    mode: TokenizerMode,
    k: usize,
) -> Result<(Vec<RankedList>, Vec<Duration>)> {
    if k == 0 {
        return Err(Error::Invalid("k must be at least 1".into()));
    }
    check_mode(index, mode)?;
    let tokenizer = Tokenizer::new(mode);
    let term_ids: Vec<Vec<u32>> = queries
        .iter()
        .map(|q| tokenizer.tokenize(&q.text).iter().filter_map(|t| index.term_id(t)).collect())
        .collect();
    let mut buf = vec![0.0; index.num_docs()];
    let mut lists = Vec::with_capacity(queries.len());
    let mut latencies = Vec::with_capacity(queries.len());
    for (q, ids) in queries.iter().zip(&term_ids) {
        let start = Instant::now();
        buf.iter_mut().for_each(|s| *s = 0.0);
        accumulate(index, ids, &mut buf);
        let top = top_k_indices(&buf, k);
        latencies.push(start.elapsed());
        lists.push(to_ranked(index, &q.query_id, top));
    }
    Ok((lists, latencies))
}

/// Writes `query_id<TAB>doc_id<TAB>rank<TAB>score` rows, ranks 1-based.
pub fn write_run<W: Write>(w: &mut W, runs: &[RankedList]) -> std::io::Result<()> {
    for run in runs {
        for (i, hit) in run.hits.iter().enumerate() {
            writeln!(w, "{}\t{}\t{}\t{}", run.query_id, hit.doc_id, i + 1, hit.score)?;
        }
    }
    Ok(())
}

pub fn save_run(path: &Path, runs: &[RankedList]) -> Result<()> {
    let file = std::fs::File::create(path).map_err(|e| Error::io(path, e))?;
    let mut w = std::io::BufWriter::new(file);
    write_run(&mut w, runs).map_err(|e| Error::io(path, e))?;
    w.flush().map_err(|e| Error::io(path, e))
}
