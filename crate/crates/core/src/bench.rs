//! Systems-overhead measurement: index build, q-log rescale and query
//! latency for BM25 versus q-log indexes sharing one scoring path.
//!
//! Steady-state protocol: query term ids and the score buffer are prepared
//! before timing, both indexes answer the full query set once per trial as
//! warm-up, and each query is then timed on both indexes back to back.

use std::time::{Duration, Instant};

use serde::Serialize;

use crate::corpus::{Corpus, QuerySet};
use crate::error::Result;
use crate::index::{build_index, SparseScoreIndex};
use crate::rescale::rescale_index;
use crate::search::{accumulate, top_k_indices};
use crate::tokenize::Tokenizer;

#[derive(Debug, Clone, Copy, Serialize)]
pub struct BenchConfig {
    pub trials: usize,
    pub top_k: usize,
    pub q: f64,
}

impl Default for BenchConfig {
    fn default() -> Self {
        Self {
            trials: 5,
            top_k: 100,
            q: 0.1,
        }
    }
}

/// Median and median absolute deviation, in milliseconds.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Summary {
    pub median: f64,
    pub mad: f64,
}

impl Summary {
    pub fn of(values: &[f64]) -> Self {
        let median = median(values);
        let dev: Vec<f64> = values.iter().map(|v| (v - median).abs()).collect();
        Summary { median, mad: median_of(dev) }
    }
}

impl std::fmt::Display for Summary {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{:.3} ± {:.3}", self.median, self.mad)
    }
}

fn median(values: &[f64]) -> f64 {
    median_of(values.to_vec())
}

fn median_of(mut v: Vec<f64>) -> f64 {
    if v.is_empty() {
        return f64::NAN;
    }
    v.sort_unstable_by(f64::total_cmp);
    let m = v.len() / 2;
    if v.len() % 2 == 1 {
        v[m]
    } else {
        (v[m - 1] + v[m]) / 2.0
    }
}

/// Nearest-rank percentile of latencies, in milliseconds.
pub fn percentile_ms(latencies: &[Duration], p: f64) -> f64 {
    let mut ms: Vec<f64> = latencies.iter().map(|d| d.as_secs_f64() * 1e3).collect();
    if ms.is_empty() {
        return f64::NAN;
    }
    ms.sort_unstable_by(f64::total_cmp);
    let rank = ((p / 100.0) * ms.len() as f64).ceil().max(1.0) as usize;
    ms[rank.min(ms.len()) - 1]
}

#[derive(Debug, Clone, Serialize)]
pub struct MethodRow {
    pub method: String,
    pub build_ms: Option<Summary>,
    pub rescale_ms: Summary,
    pub p50_ms: Summary,
    pub p95_ms: Summary,
    pub index_bytes: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct BenchReport {
    pub config: BenchConfig,
    pub n_docs: usize,
    pub vocab: usize,
    pub nnz: usize,
    pub n_queries: usize,
    pub bm25: MethodRow,
    pub qlog: MethodRow,
    /// Peak resident set size of the process in KiB, when available.
    pub peak_rss_kib: Option<u64>,
}

impl BenchReport {
    pub fn p50_delta_pct(&self) -> f64 {
        100.0 * (self.qlog.p50_ms.median / self.bm25.p50_ms.median - 1.0)
    }

    pub fn p95_delta_pct(&self) -> f64 {
        100.0 * (self.qlog.p95_ms.median / self.bm25.p95_ms.median - 1.0)
    }

    pub fn to_table(&self) -> String {
        let opt = |s: Option<Summary>| s.map_or("-".to_string(), |s| s.to_string());
        let mut out = format!(
            "# {} docs, V={}, nnz={}, {} queries x {} trials, top-{}\n",
            self.n_docs, self.vocab, self.nnz, self.n_queries, self.config.trials, self.config.top_k
        );
        out.push_str("method\tbuild_ms\trescale_ms\tquery_p50_ms\tquery_p95_ms\tindex_bytes\n");
        for row in [&self.bm25, &self.qlog] {
            out.push_str(&format!(
                "{}\t{}\t{}\t{}\t{}\t{}\n",
                row.method,
                opt(row.build_ms),
                row.rescale_ms,
                row.p50_ms,
                row.p95_ms,
                row.index_bytes
            ));
        }
        out.push_str(&format!(
            "delta\tp50 {:+.2}%\tp95 {:+.2}%\tindex size {:+.2}%\n",
            self.p50_delta_pct(),
            self.p95_delta_pct(),
            100.0 * (self.qlog.index_bytes as f64 / self.bm25.index_bytes as f64 - 1.0)
        ));
        if let Some(kib) = self.peak_rss_kib {
            out.push_str(&format!("peak_rss_mib\t{:.1}\n", kib as f64 / 1024.0));
        }
        out
    }
}

/// Peak resident set size (`VmHWM`) from `/proc/self/status`.
pub fn peak_rss_kib() -> Option<u64> {
    let status = std::fs::read_to_string("/proc/self/status").ok()?;
    status
        .lines()
        .find_map(|l| l.strip_prefix("VmHWM:"))
        .and_then(|v| v.trim().trim_end_matches("kB").trim().parse().ok())
}

/// Wall-clock time of one q-log rescale on a copy of `base`.
pub fn time_rescale(base: &SparseScoreIndex, q: f64) -> Result<Duration> {
    let mut copy = base.clone();
    let start = Instant::now();
    rescale_index(&mut copy, q)?;
    Ok(start.elapsed())
}

/// Times each query on both indexes back to back, alternating which goes
/// first, so cache state and drift hit both sides equally.
fn paired_latencies(a: &SparseScoreIndex, b: &SparseScoreIndex, term_ids: &[Vec<u32>], k: usize, b_first: bool) -> (Vec<Duration>, Vec<Duration>) {
    let mut buf = vec![0.0; a.num_docs()];
    let mut time = |index: &SparseScoreIndex, ids: &[u32]| {
        let start = Instant::now();
        buf.iter_mut().for_each(|s| *s = 0.0);
        accumulate(index, ids, &mut buf);
        std::hint::black_box(top_k_indices(&buf, k));
        start.elapsed()
    };
    let mut out = (Vec::with_capacity(term_ids.len()), Vec::with_capacity(term_ids.len()));
    for (i, ids) in term_ids.iter().enumerate() {
        if (i % 2 == 1) ^ b_first {
            out.1.push(time(b, ids));
            out.0.push(time(a, ids));
        } else {
            out.0.push(time(a, ids));
            out.1.push(time(b, ids));
        }
    }
    out
}

/// Runs the overhead protocol. With a corpus, index build is timed too and
/// each trial builds its own baseline; otherwise `base` is used.
pub fn run_bench(base: &SparseScoreIndex, corpus: Option<&Corpus>, queries: &QuerySet, config: BenchConfig) -> Result<BenchReport> {
    let mode = base.mode();
    let mut build_ms = Vec::new();
    let mut rescale_ms = Vec::new();
    let mut skip_ms = Vec::new();
    let mut p50 = (Vec::new(), Vec::new());
    let mut p95 = (Vec::new(), Vec::new());
    let mut sizes = (0, 0);
    let tokenizer = Tokenizer::new(mode);
    let term_ids: Vec<Vec<u32>> = queries
        .iter()
        .map(|q| tokenizer.tokenize(&q.text).iter().filter_map(|t| base.term_id(t)).collect())
        .collect();

    for trial in 0..config.trials.max(1) {
        let baseline = match corpus {
            Some(c) => {
                let start = Instant::now();
                let idx = build_index(c, mode, base.params())?;
                build_ms.push(start.elapsed().as_secs_f64() * 1e3);
                idx
            }
            None => base.clone(),
        };
        let mut identity = baseline.clone();
        let start = Instant::now();
        rescale_index(&mut identity, 1.0)?;
        skip_ms.push(start.elapsed().as_secs_f64() * 1e3);
        drop(identity);

        let mut qlog = baseline.clone();
        let start = Instant::now();
        rescale_index(&mut qlog, config.q)?;
        rescale_ms.push(start.elapsed().as_secs_f64() * 1e3);

        if trial == 0 {
            sizes = (baseline.to_bytes().len(), qlog.to_bytes().len());
        }
        paired_latencies(&baseline, &qlog, &term_ids, config.top_k, false);
        let (lat_a, lat_b) = paired_latencies(&baseline, &qlog, &term_ids, config.top_k, trial % 2 == 1);
        p50.0.push(percentile_ms(&lat_a, 50.0));
        p95.0.push(percentile_ms(&lat_a, 95.0));
        p50.1.push(percentile_ms(&lat_b, 50.0));
        p95.1.push(percentile_ms(&lat_b, 95.0));
    }

    let build = (!build_ms.is_empty()).then(|| Summary::of(&build_ms));
    let build_q = (!build_ms.is_empty()).then(|| {
        let sums: Vec<f64> = build_ms.iter().zip(&rescale_ms).map(|(a, b)| a + b).collect();
        Summary::of(&sums)
    });
    Ok(BenchReport {
        config,
        n_docs: base.num_docs(),
        vocab: base.num_terms(),
        nnz: base.nnz(),
        n_queries: queries.len(),
        bm25: MethodRow {
            method: "bm25".into(),
            build_ms: build,
            rescale_ms: Summary::of(&skip_ms),
            p50_ms: Summary::of(&p50.0),
            p95_ms: Summary::of(&p95.0),
            index_bytes: sizes.0,
        },
        qlog: MethodRow {
            method: format!("qlog(q={})", config.q),
            build_ms: build_q,
            rescale_ms: Summary::of(&rescale_ms),
            p50_ms: Summary::of(&p50.1),
            p95_ms: Summary::of(&p95.1),
            index_bytes: sizes.1,
        },
        peak_rss_kib: peak_rss_kib(),
    })
}
