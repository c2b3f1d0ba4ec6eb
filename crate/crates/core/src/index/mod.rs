//! Compressed-sparse-column (CSC) term x document score matrix.
//!
//! Column `t` holds every document containing term `t` together with the
//! pre-multiplied score `idf(t) * tf_factor(t, d)`. Rescaling the IDF is then
//! a pure per-column multiply and queries sum columns.

mod io;

use std::collections::HashMap;
use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::corpus::Corpus;
use crate::error::{Error, Result};
use crate::idf::{idf_lucene, RSJ_DELTA};
use crate::tokenize::{Tokenizer, TokenizerMode};

pub use io::{load_index, save_index, INDEX_MAGIC, INDEX_VERSION};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BuildParams {
    pub k1: f64,
    pub b: f64,
}

impl Default for BuildParams {
    fn default() -> Self {
        Self { k1: 1.5, b: 0.75 }
    }
}

impl BuildParams {
    pub fn new(k1: f64, b: f64) -> Result<Self> {
        let p = Self { k1, b };
        p.validate()?;
        Ok(p)
    }

    /// RSJ smoothing; fixed.
    pub fn delta(&self) -> f64 {
        RSJ_DELTA
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.k1.is_finite() && self.k1 > 0.0) {
            return Err(Error::Invalid(format!("k1 must be > 0, got {}", self.k1)));
        }
        if !(0.0..=1.0).contains(&self.b) {
            return Err(Error::Invalid(format!("b must lie in [0, 1], got {}", self.b)));
        }
        Ok(())
    }

    /// BM25 term-frequency saturation with length normalisation.
    #[inline]
    pub fn tf_factor(&self, tf: f64, doc_len: f64, avg_len: f64) -> f64 {
        tf * (self.k1 + 1.0) / (tf + self.k1 * (1.0 - self.b + self.b * doc_len / avg_len))
    }
}

/// Scoring model whose per-entry weights are stored in the matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Scorer {
    Bm25,
    Dph,
}

impl Scorer {
    pub(crate) fn code(self) -> u8 {
        match self {
            Scorer::Bm25 => 0,
            Scorer::Dph => 1,
        }
    }

    pub(crate) fn from_code(code: u8) -> Option<Self> {
        match code {
            0 => Some(Scorer::Bm25),
            1 => Some(Scorer::Dph),
            _ => None,
        }
    }
}

impl fmt::Display for Scorer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scorer::Bm25 => f.write_str("bm25"),
            Scorer::Dph => f.write_str("dph"),
        }
    }
}

/// Provenance recorded alongside the matrix.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IndexHeader {
    pub mode: TokenizerMode,
    pub scorer: Scorer,
    pub params: BuildParams,
    /// q of the q-log rescale, if one was applied.
    pub applied_q: Option<f64>,
    /// gamma of the idf^gamma rescale, if one was applied.
    pub applied_gamma: Option<f64>,
}

impl IndexHeader {
    /// Short label such as `bm25`, `qlog(q=0.1)`, `idf^2`, `dph`.
    pub fn method_label(&self) -> String {
        match (self.scorer, self.applied_q, self.applied_gamma) {
            (Scorer::Dph, _, _) => "dph".to_string(),
            (Scorer::Bm25, Some(q), _) => format!("qlog(q={q})"),
            (Scorer::Bm25, None, Some(g)) => format!("idf^{g}"),
            (Scorer::Bm25, None, None) => "bm25".to_string(),
        }
    }
}

/// Term-frequency lists of one document, with its token count.
#[derive(Debug, Clone, Default)]
pub struct DocTerms {
    pub len: u32,
    /// `(term id, tf)` pairs; term ids need not be sorted but must be unique.
    pub terms: Vec<(u32, u32)>,
}

impl DocTerms {
    pub fn from_tokens(tokens: &[String], vocab: &mut HashMap<String, u32>) -> Self {
        let mut counts: HashMap<u32, u32> = HashMap::new();
        for t in tokens {
            let next = vocab.len() as u32;
            let id = *vocab.entry(t.clone()).or_insert(next);
            *counts.entry(id).or_insert(0) += 1;
        }
        DocTerms {
            len: tokens.len() as u32,
            terms: counts.into_iter().collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SparseScoreIndex {
    pub(crate) header: IndexHeader,
    pub(crate) doc_ids: Vec<String>,
    pub(crate) doc_lens: Vec<u32>,
    pub(crate) avg_len: f64,
    /// Term strings in column order (sorted).
    pub(crate) terms: Vec<String>,
    pub(crate) vocab: HashMap<String, u32>,
    pub(crate) df: Vec<u32>,
    pub(crate) col_ptr: Vec<u64>,
    pub(crate) row_idx: Vec<u32>,
    pub(crate) scores: Vec<f64>,
}

/// Column data assembled from per-document term counts.
pub(crate) struct Postings {
    pub terms: Vec<String>,
    pub doc_lens: Vec<u32>,
    pub avg_len: f64,
    pub col_ptr: Vec<u64>,
    pub row_idx: Vec<u32>,
    /// Raw term frequencies parallel to `row_idx`.
    pub tfs: Vec<u32>,
}

impl Postings {
    /// Columns are ordered by term string; empty columns are dropped.
    pub fn assemble(term_names: Vec<String>, docs: &[DocTerms]) -> Result<Self> {
        if docs.is_empty() {
            return Err(Error::Build("corpus is empty".into()));
        }
        if docs.len() > u32::MAX as usize {
            return Err(Error::Build("too many documents".into()));
        }
        let total_len: u64 = docs.iter().map(|d| d.len as u64).sum();
        if total_len == 0 {
            return Err(Error::Build("no document produced any token".into()));
        }
        let avg_len = total_len as f64 / docs.len() as f64;

        let mut counts = vec![0u64; term_names.len()];
        for d in docs {
            for &(t, tf) in &d.terms {
                let slot = counts
                    .get_mut(t as usize)
                    .ok_or_else(|| Error::Build(format!("term id {t} out of range")))?;
                if tf > 0 {
                    *slot += 1;
                }
            }
        }

        // Sorted, non-empty columns; `remap[old] = new` or u32::MAX.
        let mut order: Vec<u32> = (0..term_names.len() as u32)
            .filter(|&t| counts[t as usize] > 0)
            .collect();
        order.sort_unstable_by(|&a, &b| term_names[a as usize].cmp(&term_names[b as usize]));
        let mut remap = vec![u32::MAX; term_names.len()];
        for (new, &old) in order.iter().enumerate() {
            remap[old as usize] = new as u32;
        }

        let mut col_ptr = Vec::with_capacity(order.len() + 1);
        col_ptr.push(0u64);
        for &old in &order {
            let last = *col_ptr.last().unwrap();
            col_ptr.push(last + counts[old as usize]);
        }
        let nnz = *col_ptr.last().unwrap() as usize;
        let mut cursor: Vec<u64> = col_ptr[..order.len()].to_vec();
        let mut row_idx = vec![0u32; nnz];
        let mut tfs = vec![0u32; nnz];
        // Documents are visited in order, so rows come out sorted per column.
        for (d, doc) in docs.iter().enumerate() {
            for &(t, tf) in &doc.terms {
                if tf == 0 {
                    continue;
                }
                let col = remap[t as usize] as usize;
                let pos = cursor[col] as usize;
                if pos > col_ptr[col] as usize && row_idx[pos - 1] == d as u32 {
                    return Err(Error::Build(format!("document {d} lists term id {t} twice")));
                }
                row_idx[pos] = d as u32;
                tfs[pos] = tf;
                cursor[col] += 1;
            }
        }

        let mut names: Vec<Option<String>> = term_names.into_iter().map(Some).collect();
        let terms = order
            .iter()
            .map(|&old| names[old as usize].take().unwrap())
            .collect();

        Ok(Postings {
            terms,
            doc_lens: docs.iter().map(|d| d.len).collect(),
            avg_len,
            col_ptr,
            row_idx,
            tfs,
        })
    }

    pub fn df(&self, col: usize) -> u32 {
        (self.col_ptr[col + 1] - self.col_ptr[col]) as u32
    }
}

/// Tokenizes every document; order is preserved.
pub(crate) fn analyze_corpus(corpus: &Corpus, mode: TokenizerMode) -> (Vec<String>, Vec<DocTerms>) {
    let tokenizer = Tokenizer::new(mode);
    let token_lists: Vec<Vec<String>> = corpus
        .docs()
        .par_iter()
        .map(|d| tokenizer.tokenize(&d.text))
        .collect();
    let mut vocab: HashMap<String, u32> = HashMap::new();
    let docs = token_lists
        .iter()
        .map(|tokens| DocTerms::from_tokens(tokens, &mut vocab))
        .collect();
    let mut names = vec![String::new(); vocab.len()];
    for (term, id) in vocab {
        names[id as usize] = term;
    }
    (names, docs)
}

/// Builds a BM25 index with the shifted IDF baked into every entry.
pub fn build_index(corpus: &Corpus, mode: TokenizerMode, params: BuildParams) -> Result<SparseScoreIndex> {
    if corpus.is_empty() {
        return Err(Error::Build("corpus is empty".into()));
    }
    let (names, docs) = analyze_corpus(corpus, mode);
    let doc_ids = corpus.iter().map(|d| d.doc_id.clone()).collect();
    SparseScoreIndex::from_doc_terms(doc_ids, names, &docs, mode, params)
}

impl SparseScoreIndex {
    /// Builds a BM25 index from pre-counted documents. `term_names[i]` names
    /// term id `i`.
    pub fn from_doc_terms(
        doc_ids: Vec<String>,
        term_names: Vec<String>,
        docs: &[DocTerms],
        mode: TokenizerMode,
        params: BuildParams,
    ) -> Result<Self> {
        params.validate()?;
        if doc_ids.len() != docs.len() {
            return Err(Error::Build(format!(
                "{} document ids for {} documents",
                doc_ids.len(),
                docs.len()
            )));
        }
        let postings = Postings::assemble(term_names, docs)?;
        let n_docs = docs.len() as u64;
        let mut scores = vec![0f64; postings.row_idx.len()];
        for col in 0..postings.terms.len() {
            let idf = idf_lucene(postings.df(col) as u64, n_docs)?;
            let range = postings.col_ptr[col] as usize..postings.col_ptr[col + 1] as usize;
            for i in range {
                let d = postings.row_idx[i] as usize;
                let tf = postings.tfs[i] as f64;
                scores[i] = idf * params.tf_factor(tf, postings.doc_lens[d] as f64, postings.avg_len);
            }
        }
        let header = IndexHeader {
            mode,
            scorer: Scorer::Bm25,
            params,
            applied_q: None,
            applied_gamma: None,
        };
        Ok(Self::from_parts(header, doc_ids, postings, scores))
    }

    pub(crate) fn from_parts(header: IndexHeader, doc_ids: Vec<String>, postings: Postings, scores: Vec<f64>) -> Self {
        let df = (0..postings.terms.len()).map(|c| postings.df(c)).collect();
        let vocab = postings
            .terms
            .iter()
            .enumerate()
            .map(|(i, t)| (t.clone(), i as u32))
            .collect();
        SparseScoreIndex {
            header,
            doc_ids,
            doc_lens: postings.doc_lens,
            avg_len: postings.avg_len,
            terms: postings.terms,
            vocab,
            df,
            col_ptr: postings.col_ptr,
            row_idx: postings.row_idx,
            scores,
        }
    }

    pub fn header(&self) -> &IndexHeader {
        &self.header
    }

    pub fn mode(&self) -> TokenizerMode {
        self.header.mode
    }

    pub fn params(&self) -> BuildParams {
        self.header.params
    }

    pub fn num_docs(&self) -> usize {
        self.doc_ids.len()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn nnz(&self) -> usize {
        self.scores.len()
    }

    pub fn avg_len(&self) -> f64 {
        self.avg_len
    }

    pub fn doc_ids(&self) -> &[String] {
        &self.doc_ids
    }

    pub fn doc_id(&self, doc: usize) -> &str {
        &self.doc_ids[doc]
    }

    pub fn doc_lens(&self) -> &[u32] {
        &self.doc_lens
    }

    pub fn terms(&self) -> &[String] {
        &self.terms
    }

    pub fn term_id(&self, term: &str) -> Option<u32> {
        self.vocab.get(term).copied()
    }

    /// Document frequency of a term, 0 when absent.
    pub fn df_of(&self, term: &str) -> u32 {
        self.term_id(term).map(|t| self.df[t as usize]).unwrap_or(0)
    }

    pub fn df(&self) -> &[u32] {
        &self.df
    }

    pub fn col_ptr(&self) -> &[u64] {
        &self.col_ptr
    }

    pub fn row_idx(&self) -> &[u32] {
        &self.row_idx
    }

    pub fn scores(&self) -> &[f64] {
        &self.scores
    }

    /// Rows and scores of column `t`.
    pub fn column(&self, t: u32) -> (&[u32], &[f64]) {
        let lo = self.col_ptr[t as usize] as usize;
        let hi = self.col_ptr[t as usize + 1] as usize;
        (&self.row_idx[lo..hi], &self.scores[lo..hi])
    }

    /// Stored score for `(term, doc)`, 0 when the pair is absent.
    pub fn entry(&self, t: u32, doc: u32) -> f64 {
        let (rows, scores) = self.column(t);
        rows.binary_search(&doc).map(|i| scores[i]).unwrap_or(0.0)
    }

    pub fn term_stats(&self) -> TermStats<'_> {
        TermStats {
            df: &self.df,
            num_docs: self.num_docs(),
            avg_len: self.avg_len,
        }
    }

    /// Checks the structural invariants of the CSC layout.
    pub fn validate(&self) -> Result<()> {
        let v = self.terms.len();
        if self.col_ptr.len() != v + 1 || self.df.len() != v {
            return Err(Error::Corrupt("column arrays disagree with vocabulary size".into()));
        }
        if self.col_ptr[0] != 0 || *self.col_ptr.last().unwrap() as usize != self.row_idx.len() {
            return Err(Error::Corrupt("column pointers do not span the entries".into()));
        }
        if self.row_idx.len() != self.scores.len() {
            return Err(Error::Corrupt("row and score arrays differ in length".into()));
        }
        if self.doc_lens.len() != self.doc_ids.len() {
            return Err(Error::Corrupt("document arrays differ in length".into()));
        }
        let n = self.doc_ids.len() as u32;
        for t in 0..v {
            let (lo, hi) = (self.col_ptr[t], self.col_ptr[t + 1]);
            if hi <= lo {
                return Err(Error::Corrupt(format!("column {t} is empty or inverted")));
            }
            if (hi - lo) as u32 != self.df[t] {
                return Err(Error::Corrupt(format!("df of column {t} disagrees with its length")));
            }
            let rows = &self.row_idx[lo as usize..hi as usize];
            if rows.windows(2).any(|w| w[0] >= w[1]) || rows.iter().any(|&r| r >= n) {
                return Err(Error::Corrupt(format!("rows of column {t} are not strictly increasing")));
            }
        }
        if let Some(bad) = self.scores.iter().position(|s| !s.is_finite()) {
            return Err(Error::Corrupt(format!("non-finite score at entry {bad}")));
        }
        Ok(())
    }
}

/// Read-only view of the per-term statistics.
#[derive(Debug, Clone, Copy)]
pub struct TermStats<'a> {
    pub df: &'a [u32],
    pub num_docs: usize,
    pub avg_len: f64,
}
