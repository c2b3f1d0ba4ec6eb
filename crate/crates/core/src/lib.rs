//! Lexical code retrieval with BM25 and a q-logarithm deformation of the
//! RSJ-odds IDF.
//!
//! The baseline index stores precomputed BM25 weights in a column-major
//! sparse matrix. A q-log index is the same matrix with each term column
//! rescaled once, so query-time cost is unchanged.
//!
//! ```
//! use qlog_bm25::{build_index, rescale_index, top_k, Corpus, TokenizerMode};
//!
//! let corpus = Corpus::from_pairs([
//!     ("a", "fn parse_header(buf: &[u8])"),
//!     ("b", "fn parse_body(buf: &[u8])"),
//!     ("c", "struct Header { len: usize }"),
//! ])?;
//! let mut index = build_index(&corpus, TokenizerMode::T2IdentifierAware, Default::default())?;
//! rescale_index(&mut index, 0.3)?;
//! let hits = top_k(&index, "q1", "parse_header", TokenizerMode::T2IdentifierAware, 2)?;
//! assert_eq!(hits.hits[0].doc_id, "a");
//! # Ok::<(), qlog_bm25::Error>(())
//! ```

pub mod bench;
pub mod cli;
pub mod corpus;
pub mod dph;
pub mod error;
pub mod eval;
pub mod idf;
pub mod index;
pub mod rescale;
pub mod search;
pub mod stats;
pub mod synthetic;
pub mod tokenize;

pub use corpus::{load_corpus, load_qrels, load_queries, Corpus, Document, QrelSet, Query, QuerySet, TextFormat};
pub use dph::{build_dph_index, dph_score};
pub use error::{Error, Result};
pub use idf::{idf_lucene, idf_qlog, idf_rsj, ln_q, rsj_odds};
pub use index::{build_index, load_index, save_index, BuildParams, IndexHeader, Scorer, SparseScoreIndex};
pub use rescale::{rescale_index, rescale_index_gamma, RescaleOutcome};
pub use search::{batch_retrieve, top_k, Hit, RankedList};
pub use stats::{compute_corpus_stats, predict_q, recovery, CorpusStats, PredictorModel, Recovery};
pub use tokenize::{split_identifier, tokenize, Tokenizer, TokenizerMode};
