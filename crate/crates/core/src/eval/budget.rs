//! Recall under a context-token budget.
//!
//! Documents are concatenated in rank order; a query counts as recalled at
//! budget `K` when the cumulative token count through its highest-ranked
//! relevant document is at most `K`.

use serde::Serialize;

use crate::corpus::{Corpus, QrelSet};
use crate::error::{Error, Result};
use crate::search::RankedList;

pub trait TokenCounter {
    fn count(&self, text: &str) -> u64;
}

/// Counts whitespace-separated words.
#[derive(Debug, Clone, Copy, Default)]
pub struct WhitespaceCounter;

impl TokenCounter for WhitespaceCounter {
    fn count(&self, text: &str) -> u64 {
        text.split_whitespace().count() as u64
    }
}

impl<F: Fn(&str) -> u64> TokenCounter for F {
    fn count(&self, text: &str) -> u64 {
        self(text)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct BudgetRecall {
    pub budget: u64,
    pub recall: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct BudgetReport {
    pub n_queries: usize,
    pub points: Vec<BudgetRecall>,
}

/// Recall@K-tokens for each budget. Queries without a relevant judgment are
/// excluded. `budgets` must be strictly ascending.
pub fn recall_at_token_budget(
    runs: &[RankedList],
    corpus: &Corpus,
    qrels: &QrelSet,
    budgets: &[u64],
    counter: &dyn TokenCounter,
) -> Result<BudgetReport> {
    if budgets.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Invalid("token budgets must be strictly ascending".into()));
    }
    let mut doc_tokens: Vec<Option<u64>> = vec![None; corpus.len()];
    let mut hits = vec![0usize; budgets.len()];
    let mut n_queries = 0;
    for run in runs {
        let Some(judgments) = qrels.get(&run.query_id) else { continue };
        if !judgments.values().any(|&r| r > 0) {
            continue;
        }
        n_queries += 1;
        let mut cumulative = 0u64;
        let mut reached = None;
        for hit in &run.hits {
            let idx = corpus
                .index_of(&hit.doc_id)
                .ok_or_else(|| Error::Invalid(format!("run references unknown document `{}`", hit.doc_id)))?;
            let n = *doc_tokens[idx].get_or_insert_with(|| counter.count(&corpus.docs()[idx].text));
            cumulative += n;
            if judgments.get(&hit.doc_id).is_some_and(|&r| r > 0) {
                reached = Some(cumulative);
                break;
            }
            if budgets.last().is_some_and(|&max| cumulative > max) {
                break;
            }
        }
        if let Some(total) = reached {
            for (h, &k) in hits.iter_mut().zip(budgets) {
                if total <= k {
                    *h += 1;
                }
            }
        }
    }
    let points = budgets
        .iter()
        .zip(&hits)
        .map(|(&budget, &h)| BudgetRecall {
            budget,
            recall: if n_queries == 0 { 0.0 } else { h as f64 / n_queries as f64 },
        })
        .collect();
    Ok(BudgetReport { n_queries, points })
}
