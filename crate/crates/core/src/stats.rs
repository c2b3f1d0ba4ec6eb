//! Label-free corpus statistics and the closed-form q predictor.
//!
//! Statistics are computed on the same token stream the index sees, so for
//! T0/T2/T3 they are taken after stopword removal.

use std::collections::HashMap;

use serde::Serialize;

use crate::corpus::Corpus;
use crate::error::{Error, Result};
use crate::tokenize::{Tokenizer, TokenizerMode};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CorpusStats {
    pub n_docs: usize,
    /// Total token occurrences.
    pub n_tok: u64,
    pub vocab_size: usize,
    /// Fraction of token occurrences whose type occurs exactly once.
    pub htok: f64,
    /// Type-token ratio `vocab_size / n_tok`.
    pub ttr: f64,
    /// Lower median of the per-term document frequencies.
    pub median_df: u64,
    pub frac_df_le5: f64,
}

pub fn compute_corpus_stats(corpus: &Corpus, mode: TokenizerMode) -> Result<CorpusStats> {
    if corpus.is_empty() {
        return Err(Error::Invalid("corpus is empty".into()));
    }
    let tokenizer = Tokenizer::new(mode);
    // term -> (total occurrences, document frequency, last doc seen)
    let mut counts: HashMap<String, (u64, u64, usize)> = HashMap::new();
    let mut n_tok = 0u64;
    for (d, doc) in corpus.iter().enumerate() {
        for tok in tokenizer.tokenize(&doc.text) {
            n_tok += 1;
            let e = counts.entry(tok).or_insert((0, 0, usize::MAX));
            e.0 += 1;
            if e.2 != d {
                e.1 += 1;
                e.2 = d;
            }
        }
    }
    if n_tok == 0 {
        return Err(Error::Invalid("corpus produced no tokens".into()));
    }
    let vocab_size = counts.len();
    let hapax = counts.values().filter(|c| c.0 == 1).count() as u64;
    let mut dfs: Vec<u64> = counts.values().map(|c| c.1).collect();
    dfs.sort_unstable();
    let median_df = dfs[(dfs.len() - 1) / 2];
    let le5 = dfs.iter().filter(|&&d| d <= 5).count();
    Ok(CorpusStats {
        n_docs: corpus.len(),
        n_tok,
        vocab_size,
        htok: hapax as f64 / n_tok as f64,
        ttr: vocab_size as f64 / n_tok as f64,
        median_df,
        frac_df_le5: le5 as f64 / vocab_size as f64,
    })
}

/// `q = clip(1 - c * htok, clip_lo, clip_hi)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PredictorModel {
    pub coefficient: f64,
    pub clip_lo: f64,
    pub clip_hi: f64,
}

impl PredictorModel {
    pub const SHIPPED_COEFFICIENT: f64 = 7.28;

    pub fn with_coefficient(coefficient: f64) -> Result<Self> {
        if coefficient.is_nan() || coefficient < 0.0 {
            return Err(Error::Invalid(format!("coefficient must be >= 0, got {coefficient}")));
        }
        Ok(Self {
            coefficient,
            ..Self::default()
        })
    }

    pub fn predict(&self, htok: f64) -> f64 {
        (1.0 - self.coefficient * htok).clamp(self.clip_lo, self.clip_hi)
    }
}

impl Default for PredictorModel {
    fn default() -> Self {
        Self {
            coefficient: Self::SHIPPED_COEFFICIENT,
            clip_lo: 0.01,
            clip_hi: 1.0,
        }
    }
}

pub fn predict_q(stats: &CorpusStats, model: &PredictorModel) -> f64 {
    model.predict(stats.htok)
}

/// Share of the BM25 -> oracle NDCG gap closed by the predicted q.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", content = "value", rename_all = "lowercase")]
pub enum Recovery {
    Fraction(f64),
    /// Oracle and BM25 coincide (gap < 1e-9); the ratio is undefined.
    Flat,
}

impl std::fmt::Display for Recovery {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Recovery::Fraction(r) => write!(f, "{:.1}%", r * 100.0),
            Recovery::Flat => f.write_str("flat"),
        }
    }
}

pub fn recovery(ndcg_bm25: f64, ndcg_pred: f64, ndcg_opt: f64) -> Recovery {
    let gap = ndcg_opt - ndcg_bm25;
    if gap.abs() < 1e-9 {
        Recovery::Flat
    } else {
        Recovery::Fraction((ndcg_pred - ndcg_bm25) / gap)
    }
}

/// Least-squares coefficient for `q_opt ~ 1 - c * htok`:
/// `c = sum(htok * (1 - q_opt)) / sum(htok^2)`.
pub fn fit_coefficient(points: &[(f64, f64)]) -> Result<f64> {
    if points.is_empty() {
        return Err(Error::Invalid("need at least one (htok, q_opt) point".into()));
    }
    let (num, den) = points
        .iter()
        .fold((0.0, 0.0), |(n, d), &(h, q)| (n + h * (1.0 - q), d + h * h));
    if den == 0.0 {
        return Err(Error::Invalid("every point has htok = 0; coefficient is unidentifiable".into()));
    }
    Ok(num / den)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn counting_example() {
        let c = Corpus::from_pairs([("d", "a b b")]).unwrap();
        let s = compute_corpus_stats(&c, TokenizerMode::T1Whitespace).unwrap();
        assert_eq!(s.n_tok, 3);
        assert_eq!(s.vocab_size, 2);
        assert!((s.htok - 1.0 / 3.0).abs() < 1e-15);
        assert!((s.ttr - 2.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn all_unique() {
        let c = Corpus::from_pairs([("d", "a b c"), ("e", "d e")]).unwrap();
        let s = compute_corpus_stats(&c, TokenizerMode::T1Whitespace).unwrap();
        assert_eq!(s.htok, 1.0);
        assert_eq!(s.frac_df_le5, 1.0);
    }

    #[test]
    fn htok_uses_occurrences_not_df() {
        // "x" appears twice in one document: df = 1 but it is not a hapax.
        let c = Corpus::from_pairs([("d", "x x y"), ("e", "z")]).unwrap();
        let s = compute_corpus_stats(&c, TokenizerMode::T1Whitespace).unwrap();
        assert!((s.htok - 2.0 / 4.0).abs() < 1e-15);
        assert_eq!(s.median_df, 1);
    }

    #[test]
    fn lower_median_df() {
        let c = Corpus::from_pairs([("a", "p q"), ("b", "p q"), ("c", "p r"), ("d", "s")]).unwrap();
        // dfs sorted: r=1, s=1, q=2, p=3 -> lower median 1
        let s = compute_corpus_stats(&c, TokenizerMode::T1Whitespace).unwrap();
        assert_eq!(s.median_df, 1);
    }

    #[test]
    fn empty_corpus() {
        assert!(compute_corpus_stats(&Corpus::new(), TokenizerMode::T0Default).is_err());
    }

    #[test]
    fn predictor_values() {
        let m = PredictorModel::default();
        assert_eq!(format!("{:.2}", m.predict(0.0630)), "0.54");
        assert_eq!(format!("{:.2}", m.predict(0.0160)), "0.88");
        assert_eq!(m.predict(0.20), 0.01);
        assert_eq!(m.predict(0.0), 1.0);
    }

    #[test]
    fn recovery_cases() {
        match recovery(0.258, 0.448, 0.487) {
            Recovery::Fraction(r) => assert!((r - 0.827).abs() < 0.01),
            Recovery::Flat => panic!(),
        }
        assert_eq!(recovery(0.3, 0.5, 0.5), Recovery::Fraction(1.0));
        assert_eq!(recovery(0.4, 0.4, 0.4), Recovery::Flat);
        assert_eq!(Recovery::Flat.to_string(), "flat");
    }

    #[test]
    fn fit_cases() {
        assert!((fit_coefficient(&[(0.1, 0.5)]).unwrap() - 5.0).abs() < 1e-12);
        let c = fit_coefficient(&[(0.0, 1.0), (0.1, 0.5), (0.2, 0.0)]).unwrap();
        assert!((c - 5.0).abs() < 1e-12);
        assert!(fit_coefficient(&[(0.0, 1.0), (0.0, 0.7)]).is_err());
        assert!(fit_coefficient(&[]).is_err());
    }

    proptest! {
        #[test]
        fn predictor_monotone(a in 0.0f64..1.0, b in 0.0f64..1.0) {
            let m = PredictorModel::default();
            let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
            prop_assert!(m.predict(lo) >= m.predict(hi));
        }

        #[test]
        fn graceful_boundary(h in 0.0f64..=0.0206) {
            let m = PredictorModel::default();
            prop_assert!(m.predict(h) >= 0.85 - 1e-12);
            if h <= 0.016 {
                prop_assert!(m.predict(h) >= 0.88);
            }
        }

        #[test]
        fn fit_scale_consistent(c in 0.5f64..20.0, hs in prop::collection::vec(0.001f64..0.05, 2..10)) {
            let pts: Vec<(f64, f64)> = hs.iter().map(|&h| (h, 1.0 - c * h)).collect();
            let doubled: Vec<(f64, f64)> = pts.iter().map(|&(h, q)| (2.0 * h, q)).collect();
            let c1 = fit_coefficient(&pts).unwrap();
            let c2 = fit_coefficient(&doubled).unwrap();
            prop_assert!((c1 - c).abs() < 1e-9 * c);
            prop_assert!((c2 - c / 2.0).abs() < 1e-9 * c);
        }
    }
}
