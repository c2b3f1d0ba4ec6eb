//! q sweeps with oracle selection, and df-bin occlusion.

use std::fmt;
use std::io::Write;
use std::path::Path;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

use super::metrics::{evaluate, ndcg_at_k, EvalReport, Judgments, Metric};
use crate::corpus::{QrelSet, QuerySet};
use crate::error::{Error, Result};
use crate::index::{load_index, SparseScoreIndex};
use crate::rescale::rescale_index;
use crate::search::{batch_retrieve, top_k_tokens};
use crate::tokenize::Tokenizer;

/// Rank cutoff of the primary metric.
pub const NDCG_K: usize = 10;

/// Default q grid for oracle selection.
pub const DEFAULT_GRID: [f64; 8] = [0.05, 0.10, 0.20, 0.30, 0.50, 0.70, 0.90, 1.00];

#[derive(Debug, Clone, Serialize)]
pub struct SweepRow {
    pub q: f64,
    pub mean_ndcg: f64,
    #[serde(skip)]
    pub report: EvalReport,
}

#[derive(Debug, Clone, Serialize)]
pub struct SweepTable {
    pub rows: Vec<SweepRow>,
    pub q_opt: f64,
}

impl SweepTable {
    fn from_rows(rows: Vec<SweepRow>) -> Self {
        // Ties go to the larger q, i.e. closer to plain BM25.
        let best = rows
            .iter()
            .max_by(|a, b| a.mean_ndcg.total_cmp(&b.mean_ndcg).then(a.q.total_cmp(&b.q)))
            .expect("non-empty grid");
        let q_opt = best.q;
        SweepTable { rows, q_opt }
    }

    pub fn row(&self, q: f64) -> Option<&SweepRow> {
        self.rows.iter().find(|r| r.q == q)
    }

    pub fn best(&self) -> &SweepRow {
        self.row(self.q_opt).expect("q_opt is a grid value")
    }

    pub fn write_csv<W: Write>(&self, w: &mut W) -> std::io::Result<()> {
        writeln!(w, "q,mean_ndcg")?;
        for r in &self.rows {
            writeln!(w, "{},{}", r.q, r.mean_ndcg)?;
        }
        Ok(())
    }
}

fn check_grid(grid: &[f64]) -> Result<()> {
    if grid.is_empty() {
        return Err(Error::Invalid("q grid is empty".into()));
    }
    if let Some(q) = grid.iter().find(|q| !q.is_finite()) {
        return Err(Error::Invalid(format!("q grid contains non-finite value {q}")));
    }
    Ok(())
}

fn sweep_point(index: SparseScoreIndex, q: f64, queries: &QuerySet, qrels: &QrelSet) -> Result<SweepRow> {
    let mut index = index;
    rescale_index(&mut index, q)?;
    let runs = batch_retrieve(&index, queries, index.mode(), NDCG_K)?;
    let report = evaluate(&runs, qrels, Metric::Ndcg(NDCG_K));
    Ok(SweepRow {
        q,
        mean_ndcg: report.mean,
        report,
    })
}

/// Sweeps `grid` starting each point from a copy of the baseline index.
pub fn q_sweep(base: &SparseScoreIndex, queries: &QuerySet, qrels: &QrelSet, grid: &[f64]) -> Result<SweepTable> {
    check_grid(grid)?;
    let rows = grid
        .iter()
        .map(|&q| sweep_point(base.clone(), q, queries, qrels))
        .collect::<Result<Vec<_>>>()?;
    Ok(SweepTable::from_rows(rows))
}

/// Sweeps `grid`, reloading the baseline from disk for every point.
pub fn q_sweep_from_path(base_path: &Path, queries: &QuerySet, qrels: &QrelSet, grid: &[f64]) -> Result<SweepTable> {
    check_grid(grid)?;
    let rows = grid
        .iter()
        .map(|&q| sweep_point(load_index(base_path)?, q, queries, qrels))
        .collect::<Result<Vec<_>>>()?;
    Ok(SweepTable::from_rows(rows))
}

/// Inclusive document-frequency range; `hi = None` is unbounded.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct DfBin {
    pub lo: u32,
    pub hi: Option<u32>,
}

impl DfBin {
    pub fn contains(&self, df: u32) -> bool {
        df >= self.lo && self.hi.is_none_or(|h| df <= h)
    }

    pub fn default_bins() -> Vec<DfBin> {
        [
            (1, Some(1)),
            (2, Some(2)),
            (3, Some(5)),
            (6, Some(20)),
            (21, Some(50)),
            (51, Some(200)),
            (201, Some(1000)),
            (1001, Some(5000)),
            (5001, None),
        ]
        .into_iter()
        .map(|(lo, hi)| DfBin { lo, hi })
        .collect()
    }

    /// Parses `1,2,3-5,6-20,5001+`.
    pub fn parse_list(s: &str) -> Result<Vec<DfBin>> {
        let bins = s
            .split(',')
            .map(str::trim)
            .filter(|p| !p.is_empty())
            .map(DfBin::from_str)
            .collect::<Result<Vec<_>>>()?;
        check_bins(&bins)?;
        Ok(bins)
    }
}

impl fmt::Display for DfBin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.hi {
            Some(h) if h == self.lo => write!(f, "{}", self.lo),
            Some(h) => write!(f, "{}-{}", self.lo, h),
            None => write!(f, "{}+", self.lo),
        }
    }
}

impl FromStr for DfBin {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Invalid(format!("bad df bin `{s}`"));
        let num = |t: &str| t.trim().parse::<u32>().map_err(|_| bad());
        let bin = if let Some(lo) = s.strip_suffix('+') {
            DfBin { lo: num(lo)?, hi: None }
        } else if let Some((lo, hi)) = s.split_once('-') {
            DfBin {
                lo: num(lo)?,
                hi: Some(num(hi)?),
            }
        } else {
            let v = num(s)?;
            DfBin { lo: v, hi: Some(v) }
        };
        if bin.lo == 0 || bin.hi.is_some_and(|h| h < bin.lo) {
            return Err(bad());
        }
        Ok(bin)
    }
}

/// Bins must be ascending and disjoint.
fn check_bins(bins: &[DfBin]) -> Result<()> {
    if bins.is_empty() {
        return Err(Error::Invalid("no df bins given".into()));
    }
    for w in bins.windows(2) {
        match w[0].hi {
            Some(h) if h < w[1].lo => {}
            _ => return Err(Error::Invalid(format!("df bins {} and {} overlap or are out of order", w[0], w[1]))),
        }
    }
    Ok(())
}

#[derive(Debug, Clone, Serialize)]
pub struct BinLoss {
    pub bin: DfBin,
    /// Mean over evaluated queries of `NDCG(full) - NDCG(occluded)`. Not clamped.
    pub loss: f64,
    /// Evaluated queries with at least one token in the bin.
    pub queries_affected: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct OcclusionReport {
    pub q: Option<f64>,
    pub full_ndcg: f64,
    pub n_queries: usize,
    pub bins: Vec<BinLoss>,
}

impl OcclusionReport {
    pub fn write_tsv<W: Write>(&self, w: &mut W) -> std::io::Result<()> {
        writeln!(w, "bin\tloss\tqueries_affected")?;
        for b in &self.bins {
            writeln!(w, "{}\t{}\t{}", b.bin, b.loss, b.queries_affected)?;
        }
        Ok(())
    }
}

/// For each df bin, drops the query tokens whose df falls in it and measures
/// the NDCG@10 loss. `q = Some(..)` rescales a copy of the baseline first.
pub fn df_bin_occlusion(
    base: &SparseScoreIndex,
    queries: &QuerySet,
    qrels: &QrelSet,
    bins: &[DfBin],
    q: Option<f64>,
) -> Result<OcclusionReport> {
    check_bins(bins)?;
    let scored;
    let index = match q {
        Some(q) => {
            let mut copy = base.clone();
            rescale_index(&mut copy, q)?;
            scored = copy;
            &scored
        }
        None => base,
    };
    let tokenizer = Tokenizer::new(index.mode());
    let empty = Judgments::new();

    // Per query: (full NDCG, per-bin occluded NDCG or None when untouched).
    let per_query: Vec<Option<(f64, Vec<Option<f64>>)>> = queries
        .entries()
        .par_iter()
        .map(|query| {
            let judgments = qrels.get(&query.query_id).unwrap_or(&empty);
            let tokens = tokenizer.tokenize(&query.text);
            let full = ndcg_at_k(&top_k_tokens(index, &query.query_id, &tokens, NDCG_K), judgments, NDCG_K)?;
            let dfs: Vec<u32> = tokens.iter().map(|t| index.df_of(t)).collect();
            let occluded = bins
                .iter()
                .map(|bin| {
                    if !dfs.iter().any(|&d| bin.contains(d)) {
                        return None;
                    }
                    let kept: Vec<&str> = tokens
                        .iter()
                        .zip(&dfs)
                        .filter(|(_, &d)| !bin.contains(d))
                        .map(|(t, _)| t.as_str())
                        .collect();
                    let ranked = top_k_tokens(index, &query.query_id, &kept, NDCG_K);
                    Some(ndcg_at_k(&ranked, judgments, NDCG_K).unwrap_or(0.0))
                })
                .collect();
            Some((full, occluded))
        })
        .collect();

    let evaluated: Vec<&(f64, Vec<Option<f64>>)> = per_query.iter().flatten().collect();
    let n = evaluated.len();
    let full_ndcg = if n == 0 { 0.0 } else { evaluated.iter().map(|e| e.0).sum::<f64>() / n as f64 };
    let bins = bins
        .iter()
        .enumerate()
        .map(|(b, &bin)| {
            let mut loss = 0.0;
            let mut affected = 0;
            for (full, occ) in &evaluated {
                if let Some(o) = occ[b] {
                    loss += full - o;
                    affected += 1;
                }
            }
            BinLoss {
                bin,
                loss: if n == 0 { 0.0 } else { loss / n as f64 },
                queries_affected: affected,
            }
        })
        .collect();
    Ok(OcclusionReport {
        q,
        full_ndcg,
        n_queries: n,
        bins,
    })
}
