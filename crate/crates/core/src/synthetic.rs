//! Seeded synthetic corpora for tests, examples and benchmarks.

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::corpus::{Corpus, QrelSet, QuerySet};
use crate::index::{BuildParams, DocTerms, SparseScoreIndex};
use crate::tokenize::TokenizerMode;

/// A corpus with queries and relevance judgments.
#[derive(Debug, Clone)]
pub struct Collection {
    pub corpus: Corpus,
    pub queries: QuerySet,
    pub qrels: QrelSet,
}

/// Shape of the rare-identifier collection built by [`hapax_collection`].
#[derive(Debug, Clone, Copy)]
pub struct HapaxSpec {
    pub n_docs: usize,
    pub n_queries: usize,
    /// Size of the shared mid-frequency vocabulary.
    pub n_mid: usize,
    /// Mid-frequency tokens placed in every document.
    pub mids_per_doc: usize,
    pub n_filler: usize,
    pub filler_per_doc: usize,
    /// Documents per query that repeat the query's mid-frequency tokens.
    pub distractors: usize,
    pub mids_per_query: usize,
    /// Repetitions of each query mid token inside a distractor.
    pub distractor_tf: usize,
}

impl Default for HapaxSpec {
    fn default() -> Self {
        Self {
            n_docs: 1000,
            n_queries: 100,
            n_mid: 80,
            mids_per_doc: 3,
            n_filler: 1000,
            filler_per_doc: 10,
            distractors: 12,
            mids_per_query: 4,
            distractor_tf: 3,
        }
    }
}

/// Each query is one document-unique token `hN` plus a few shared `mN`
/// tokens (df around 100 with the default spec). The gold document holds the
/// unique token; a dozen distractors repeat the shared tokens.
pub fn hapax_collection(spec: HapaxSpec, seed: u64) -> Collection {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut docs: Vec<Vec<String>> = (0..spec.n_docs)
        .map(|_| {
            let mut words: Vec<String> = sample(&mut rng, spec.n_mid, spec.mids_per_doc)
                .iter()
                .map(|m| format!("m{m}"))
                .collect();
            words.extend((0..spec.filler_per_doc).map(|_| format!("f{}", rng.gen_range(0..spec.n_filler))));
            words
        })
        .collect();

    let golds = sample(&mut rng, spec.n_docs, spec.n_queries).into_vec();
    let mut queries = Vec::with_capacity(spec.n_queries);
    let mut qrels = QrelSet::new();
    for (i, &gold) in golds.iter().enumerate() {
        let mids: Vec<usize> = sample(&mut rng, spec.n_mid, spec.mids_per_query).into_vec();
        docs[gold].push(format!("h{i}"));
        let mut placed = 0;
        for d in sample(&mut rng, spec.n_docs, spec.distractors + 1).iter() {
            if d == gold || placed == spec.distractors {
                continue;
            }
            for &m in &mids {
                for _ in 0..spec.distractor_tf {
                    docs[d].push(format!("m{m}"));
                }
            }
            placed += 1;
        }
        let mut text = format!("h{i}");
        for m in &mids {
            text.push_str(&format!(" m{m}"));
        }
        let qid = format!("q{i}");
        qrels.insert(&qid, &format!("d{gold}"), 1);
        queries.push((qid, text));
    }

    Collection {
        corpus: Corpus::from_pairs(docs.iter().enumerate().map(|(i, w)| (format!("d{i}"), w.join(" ")))).expect("unique ids"),
        queries: QuerySet::from_pairs(queries).expect("unique ids"),
        qrels,
    }
}

/// Random text corpus over `w0..w{vocab}` with Zipf-like term popularity.
pub fn random_corpus(n_docs: usize, vocab: usize, max_len: usize, seed: u64) -> Corpus {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let docs = (0..n_docs).map(|i| {
        let len = rng.gen_range(1..=max_len.max(1));
        let words: Vec<String> = (0..len).map(|_| format!("w{}", zipf_like(&mut rng, vocab))).collect();
        (format!("d{i}"), words.join(" "))
    });
    Corpus::from_pairs(docs.collect::<Vec<_>>()).expect("unique ids")
}

/// Random queries drawn from the same vocabulary as [`random_corpus`].
pub fn random_queries(n: usize, vocab: usize, max_len: usize, seed: u64) -> QuerySet {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9e37_79b9_7f4a_7c15);
    let qs = (0..n).map(|i| {
        let len = rng.gen_range(1..=max_len.max(1));
        let words: Vec<String> = (0..len).map(|_| format!("w{}", zipf_like(&mut rng, vocab))).collect();
        (format!("q{i}"), words.join(" "))
    });
    QuerySet::from_pairs(qs.collect::<Vec<_>>()).expect("unique ids")
}

fn zipf_like(rng: &mut impl Rng, vocab: usize) -> usize {
    // Inverse-CDF of a continuous 1/x law over [1, vocab].
    let u: f64 = rng.gen();
    (((vocab as f64).powf(u)) as usize - 1).min(vocab - 1)
}

/// A BM25 index with roughly `target_nnz` stored entries, assembled straight
/// from term counts (no tokenization). Used to time the rescale pass.
pub fn index_with_nnz(target_nnz: usize, seed: u64) -> SparseScoreIndex {
    const TERMS_PER_DOC: usize = 50;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n_docs = (target_nnz / TERMS_PER_DOC).max(1);
    let vocab = (target_nnz / 20).clamp(100, 2_000_000);
    let docs: Vec<DocTerms> = (0..n_docs)
        .map(|_| {
            let mut ids: Vec<u32> = (0..TERMS_PER_DOC).map(|_| zipf_like(&mut rng, vocab) as u32).collect();
            ids.sort_unstable();
            ids.dedup();
            let terms: Vec<(u32, u32)> = ids.into_iter().map(|t| (t, rng.gen_range(1..4))).collect();
            DocTerms {
                len: terms.iter().map(|p| p.1).sum(),
                terms,
            }
        })
        .collect();
    let names = (0..vocab).map(|t| format!("t{t}")).collect();
    let doc_ids = (0..n_docs).map(|d| format!("d{d}")).collect();
    SparseScoreIndex::from_doc_terms(doc_ids, names, &docs, TokenizerMode::T1Whitespace, BuildParams::default())
        .expect("synthetic index is valid")
}
