use proptest::prelude::*;
use qlog_bm25::eval::{ndcg_at_k, recall_at_k, recall_at_token_budget, Judgments, WhitespaceCounter};
use qlog_bm25::search::{score_query, top_k_indices, Hit, RankedList};
use qlog_bm25::synthetic::{random_corpus, random_queries};
use qlog_bm25::tokenize::default_stopwords;
use qlog_bm25::{
    build_index, idf_lucene, load_index, rescale_index, save_index, top_k, tokenize, Corpus, QrelSet, TokenizerMode,
};

const T1: TokenizerMode = TokenizerMode::T1Whitespace;

/// One document holds a unique identifier; a dozen others repeat the
/// query's mid-frequency words. The identifier should win only once rarity
/// is amplified.
fn hapax_case() -> Corpus {
    let mids = ["handle", "auth", "request", "session"];
    let mut docs = vec![("gold".to_string(), "xq_session_reaper close cleanup".to_string())];
    for i in 0..12 {
        let text: Vec<&str> = mids.iter().flat_map(|m| [*m; 3]).collect();
        docs.push((format!("noise{i}"), text.join(" ")));
    }
    for i in 0..987 {
        let text = format!("filler{} filler{} {}", i % 17, i % 23, if i % 10 < 4 { mids[i % 4] } else { "misc" });
        docs.push((format!("bg{i}"), text));
    }
    Corpus::from_pairs(docs).unwrap()
}

#[test]
fn rare_identifier_reaches_rank_one_under_qlog() {
    let corpus = hapax_case();
    let query = "xq_session_reaper handle auth request session";
    let bm25 = build_index(&corpus, T1, Default::default()).unwrap();
    let base = top_k(&bm25, "q", query, T1, 10).unwrap();
    assert_ne!(base.rank_of("gold"), Some(1), "BM25 should bury the identifier");

    let mut qlog = bm25.clone();
    rescale_index(&mut qlog, 0.1).unwrap();
    let amplified = top_k(&qlog, "q", query, T1, 10).unwrap();
    assert_eq!(amplified.rank_of("gold"), Some(1));
}

#[test]
fn rescaled_index_survives_disk_roundtrip() {
    let corpus = random_corpus(80, 200, 20, 3);
    let mut index = build_index(&corpus, TokenizerMode::T2IdentifierAware, Default::default()).unwrap();
    rescale_index(&mut index, 0.2).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("x.idx");
    save_index(&index, &path).unwrap();
    let back = load_index(&path).unwrap();
    assert_eq!(back.header(), index.header());
    assert_eq!(back.scores(), index.scores());
    assert!(rescale_index(&mut back.clone(), 0.5).is_err(), "double rescale must be refused");
}

#[test]
fn single_term_rankings_stable_across_q() {
    let corpus = random_corpus(300, 400, 30, 8);
    let base = build_index(&corpus, T1, Default::default()).unwrap();
    let n = base.num_docs() as u64;
    for q in [0.05, 0.3, 0.7] {
        let mut idx = base.clone();
        rescale_index(&mut idx, q).unwrap();
        for t in 0..base.num_terms() as u32 {
            let df = base.df()[t as usize] as u64;
            // Positive column scale: order within the column is unchanged.
            if 2 * df >= n {
                continue;
            }
            let term = &base.terms()[t as usize];
            let a = top_k_indices(&score_query(&base, &[term]), 20);
            let b = top_k_indices(&score_query(&idx, &[term]), 20);
            assert_eq!(a.iter().map(|p| p.0).collect::<Vec<_>>(), b.iter().map(|p| p.0).collect::<Vec<_>>(), "{term} q={q}");
        }
    }
}

#[test]
fn scores_are_column_sums() {
    let corpus = random_corpus(40, 120, 15, 21);
    let queries = random_queries(30, 120, 6, 21);
    let index = build_index(&corpus, T1, Default::default()).unwrap();
    let stop = default_stopwords();
    for query in queries.iter() {
        let tokens = tokenize(&query.text, T1, stop);
        let dense = score_query(&index, &tokens);
        let mut by_hand = vec![0.0; index.num_docs()];
        for t in &tokens {
            if let Some(id) = index.term_id(t) {
                for d in 0..index.num_docs() as u32 {
                    by_hand[d as usize] += index.entry(id, d);
                }
            }
        }
        for (a, b) in dense.iter().zip(&by_hand) {
            assert!((a - b).abs() <= 1e-12 * a.abs().max(1.0));
        }
    }
}

#[test]
fn lucene_weights_are_positive() {
    let corpus = random_corpus(60, 50, 30, 4);
    let index = build_index(&corpus, T1, Default::default()).unwrap();
    assert!(index.scores().iter().all(|&s| s > 0.0));
    assert!(idf_lucene(60, 60).unwrap() > 0.0);
}

fn ranked(order: &[u32]) -> RankedList {
    RankedList {
        query_id: "q".into(),
        hits: order
            .iter()
            .map(|&d| Hit {
                doc_id: format!("d{d}"),
                doc_index: d,
                score: 0.0,
            })
            .collect(),
    }
}

fn judgments(rel: &[u32]) -> Judgments {
    rel.iter().enumerate().filter(|p| *p.1 > 0).map(|(d, &r)| (format!("d{d}"), r)).collect()
}

proptest! {
    #[test]
    fn ndcg_invariant_under_monotone_transform(
        scores in prop::collection::vec(-50i32..50, 1..60),
        rel in prop::collection::vec(0u32..3, 60),
    ) {
        let s: Vec<f64> = scores.iter().map(|&v| v as f64 / 7.0).collect();
        let t: Vec<f64> = s.iter().map(|v| (v * 0.3).exp() * 4.0 + 1.0).collect();
        let a: Vec<u32> = top_k_indices(&s, 10).into_iter().map(|p| p.0).collect();
        let b: Vec<u32> = top_k_indices(&t, 10).into_iter().map(|p| p.0).collect();
        let j = judgments(&rel[..s.len()]);
        prop_assert_eq!(ndcg_at_k(&ranked(&a), &j, 10), ndcg_at_k(&ranked(&b), &j, 10));
    }

    #[test]
    fn ndcg_bounded(order in Just((0u32..40).collect::<Vec<_>>()).prop_shuffle(), rel in prop::collection::vec(0u32..4, 40)) {
        let j = judgments(&rel);
        if let Some(v) = ndcg_at_k(&ranked(&order), &j, 10) {
            prop_assert!((0.0..=1.0 + 1e-12).contains(&v));
        } else {
            prop_assert!(j.is_empty());
        }
    }

    #[test]
    fn recall_monotone_in_k(order in Just((0u32..30).collect::<Vec<_>>()).prop_shuffle(), rel in prop::collection::vec(0u32..2, 30)) {
        let j = judgments(&rel);
        let run = ranked(&order);
        let mut prev = 0.0;
        for k in 1..=30 {
            let Some(r) = recall_at_k(&run, &j, k) else { break };
            prop_assert!(r >= prev);
            prev = r;
        }
    }

    #[test]
    fn token_budget_recall_monotone(lens in prop::collection::vec(1usize..300, 10), gold in 0usize..10, budgets in prop::collection::btree_set(1u64..3000, 1..8)) {
        let corpus = Corpus::from_pairs(lens.iter().enumerate().map(|(i, &n)| (format!("d{i}"), vec!["x"; n].join(" ")))).unwrap();
        let mut qrels = QrelSet::new();
        qrels.insert("q", &format!("d{gold}"), 1);
        let run = ranked(&(0..10).collect::<Vec<_>>());
        let budgets: Vec<u64> = budgets.into_iter().collect();
        let report = recall_at_token_budget(&[run], &corpus, &qrels, &budgets, &WhitespaceCounter).unwrap();
        let needed: usize = lens[..=gold].iter().sum();
        for p in &report.points {
            prop_assert_eq!(p.recall, if p.budget as usize >= needed { 1.0 } else { 0.0 });
        }
    }
}
