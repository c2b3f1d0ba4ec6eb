//! Per-query ranking metrics and their aggregation.

use std::collections::BTreeMap;
use std::io::Write;

use serde::Serialize;

use crate::corpus::QrelSet;
use crate::search::RankedList;

pub type Judgments = BTreeMap<String, u32>;

/// NDCG@k with linear gains `rel / log2(rank + 1)`. `None` when the query
/// has no relevant document.
pub fn ndcg_at_k(ranked: &RankedList, judgments: &Judgments, k: usize) -> Option<f64> {
    let mut ideal: Vec<u32> = judgments.values().copied().filter(|&r| r > 0).collect();
    if ideal.is_empty() {
        return None;
    }
    ideal.sort_unstable_by(|a, b| b.cmp(a));
    let discount = |i: usize| ((i + 2) as f64).log2();
    let idcg: f64 = ideal.iter().take(k).enumerate().map(|(i, &r)| r as f64 / discount(i)).sum();
    let dcg: f64 = ranked
        .hits
        .iter()
        .take(k)
        .enumerate()
        .map(|(i, h)| judgments.get(&h.doc_id).copied().unwrap_or(0) as f64 / discount(i))
        .sum();
    Some(dcg / idcg)
}

/// Reciprocal rank of the first relevant hit (0 when none is retrieved).
pub fn mrr(ranked: &RankedList, judgments: &Judgments) -> Option<f64> {
    if !judgments.values().any(|&r| r > 0) {
        return None;
    }
    Some(
        ranked
            .hits
            .iter()
            .position(|h| judgments.get(&h.doc_id).is_some_and(|&r| r > 0))
            .map_or(0.0, |p| 1.0 / (p + 1) as f64),
    )
}

/// `|relevant ∩ top-k| / |relevant|`.
pub fn recall_at_k(ranked: &RankedList, judgments: &Judgments, k: usize) -> Option<f64> {
    let n_rel = judgments.values().filter(|&&r| r > 0).count();
    if n_rel == 0 {
        return None;
    }
    let found = ranked
        .hits
        .iter()
        .take(k)
        .filter(|h| judgments.get(&h.doc_id).is_some_and(|&r| r > 0))
        .count();
    Some(found as f64 / n_rel as f64)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Metric {
    Ndcg(usize),
    Mrr,
    Recall(usize),
}

impl Metric {
    pub fn evaluate(self, ranked: &RankedList, judgments: &Judgments) -> Option<f64> {
        match self {
            Metric::Ndcg(k) => ndcg_at_k(ranked, judgments, k),
            Metric::Mrr => mrr(ranked, judgments),
            Metric::Recall(k) => recall_at_k(ranked, judgments, k),
        }
    }

    pub fn name(self) -> String {
        match self {
            Metric::Ndcg(k) => format!("ndcg@{k}"),
            Metric::Mrr => "mrr".to_string(),
            Metric::Recall(k) => format!("recall@{k}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EvalReport {
    pub metric: String,
    pub per_query: BTreeMap<String, f64>,
    pub mean: f64,
    pub n_queries: usize,
    /// Queries without any relevant judgment; excluded from the mean.
    pub skipped: Vec<String>,
}

impl EvalReport {
    pub fn from_values(metric: String, per_query: BTreeMap<String, f64>, skipped: Vec<String>) -> Self {
        let n = per_query.len();
        let mean = if n == 0 { 0.0 } else { per_query.values().sum::<f64>() / n as f64 };
        Self {
            metric,
            per_query,
            mean,
            n_queries: n,
            skipped,
        }
    }

    pub fn write_tsv<W: Write>(&self, w: &mut W) -> std::io::Result<()> {
        writeln!(w, "query_id\t{}", self.metric)?;
        for (q, v) in &self.per_query {
            writeln!(w, "{q}\t{v}")?;
        }
        writeln!(w, "mean\t{}", self.mean)
    }
}

pub fn evaluate(runs: &[RankedList], qrels: &QrelSet, metric: Metric) -> EvalReport {
    let empty = Judgments::new();
    let mut per_query = BTreeMap::new();
    let mut skipped = Vec::new();
    for run in runs {
        let judgments = qrels.get(&run.query_id).unwrap_or(&empty);
        match metric.evaluate(run, judgments) {
            Some(v) => {
                per_query.insert(run.query_id.clone(), v);
            }
            None => skipped.push(run.query_id.clone()),
        }
    }
    EvalReport::from_values(metric.name(), per_query, skipped)
}
