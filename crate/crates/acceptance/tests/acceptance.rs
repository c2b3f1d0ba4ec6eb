//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero when any criterion fails.

use std::collections::HashMap;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::Instant;

use qlog_bm25::bench::{run_bench, BenchConfig};
use qlog_bm25::eval::{df_bin_occlusion, paired_bootstrap, q_sweep, DfBin, DEFAULT_GRID};
use qlog_bm25::search::{score_query, top_k_indices};
use qlog_bm25::synthetic::{hapax_collection, index_with_nnz, random_corpus, random_queries, HapaxSpec};
use qlog_bm25::tokenize::default_stopwords;
use qlog_bm25::{
    batch_retrieve, build_dph_index, build_index, idf_qlog, ln_q, predict_q, recovery, rescale_index,
    rescale_index_gamma, tokenize, CorpusStats, PredictorModel, Recovery, RescaleOutcome, TokenizerMode,
};

type Outcome = Result<String, String>;
type Criterion = (u32, &'static str, fn() -> Outcome);

fn ensure(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn c01_bit_identity() -> Outcome {
    let corpus = random_corpus(100, 500, 40, 101);
    let queries = random_queries(100, 500, 5, 101);
    let mode = TokenizerMode::T0Default;
    let base = build_index(&corpus, mode, Default::default()).map_err(|e| e.to_string())?;
    let mut gated = base.clone();
    let outcome = rescale_index(&mut gated, 1.0).map_err(|e| e.to_string())?;
    let max_diff = base
        .scores()
        .iter()
        .zip(gated.scores())
        .map(|(a, b)| (a - b).abs())
        .fold(0.0f64, f64::max);
    let bitwise = base.scores().iter().zip(gated.scores()).all(|(a, b)| a.to_bits() == b.to_bits());
    let ra = batch_retrieve(&base, &queries, mode, 10).map_err(|e| e.to_string())?;
    let rb = batch_retrieve(&gated, &queries, mode, 10).map_err(|e| e.to_string())?;
    ensure(
        outcome == RescaleOutcome::Skipped && max_diff == 0.0 && bitwise && ra == rb,
        format!("max |diff| = {max_diff}, bitwise = {bitwise}, identical top-10 on {} queries = {}", ra.len(), ra == rb),
    )
}

fn c02_case_study_idf() -> Outcome {
    const N: u64 = 182_440;
    let table: [(u64, f64, f64); 4] = [(1, 11.7, 41_933.0), (1820, 4.6, 68.8), (3714, 3.9, 35.2), (14203, 2.5, 9.2)];
    let mut misses = Vec::new();
    let mut worst: f64 = 0.0;
    for (df, at_one, at_tenth) in table {
        for (q, want) in [(1.0, at_one), (0.1, at_tenth)] {
            let got = idf_qlog(df, N, q).map_err(|e| e.to_string())?;
            let rel = (got - want).abs() / want;
            worst = worst.max(rel);
            if rel > 0.005 {
                misses.push(format!("df={df} q={q}: {got:.4} vs {want} ({:.2}%)", rel * 100.0));
            }
        }
    }
    ensure(
        misses.is_empty(),
        if misses.is_empty() {
            format!("8 values within 0.5% (worst {:.3}%)", worst * 100.0)
        } else {
            misses.join("; ")
        },
    )
}

fn c03_predictor() -> Outcome {
    let htok = [0.0630, 0.0156, 0.0244, 0.0160, 0.0133, 0.0206];
    let want = ["0.54", "0.89", "0.82", "0.88", "0.90", "0.85"];
    let model = PredictorModel::default();
    let got: Vec<String> = htok
        .iter()
        .map(|&h| {
            let stats = CorpusStats {
                n_docs: 1,
                n_tok: 1,
                vocab_size: 1,
                htok: h,
                ttr: 1.0,
                median_df: 1,
                frac_df_le5: 1.0,
            };
            format!("{:.2}", predict_q(&stats, &model))
        })
        .collect();
    ensure(got == want, format!("q_pred = {got:?}"))
}

fn c04_recovery() -> Outcome {
    match recovery(0.258, 0.448, 0.487) {
        Recovery::Fraction(r) => ensure((r - 0.827).abs() <= 0.01, format!("recovery = {r:.4}")),
        Recovery::Flat => Err("reported flat".into()),
    }
}

/// Direct BM25 evaluation from raw token counts, no matrix involved.
fn dense_scores(docs: &[Vec<String>], query: &[String], q: Option<f64>) -> Vec<(f64, f64)> {
    let (k1, b) = (1.5, 0.75);
    let n = docs.len() as f64;
    let avg = docs.iter().map(|d| d.len()).sum::<usize>() as f64 / n;
    let mut df: HashMap<&str, f64> = HashMap::new();
    for d in docs {
        let mut seen: Vec<&str> = d.iter().map(String::as_str).collect();
        seen.sort_unstable();
        seen.dedup();
        for t in seen {
            *df.entry(t).or_default() += 1.0;
        }
    }
    docs.iter()
        .map(|d| {
            let mut total = 0.0;
            let mut magnitude = 0.0;
            for t in query {
                let Some(&n_t) = df.get(t.as_str()) else { continue };
                let tf = d.iter().filter(|w| *w == t).count() as f64;
                if tf == 0.0 {
                    continue;
                }
                let odds = (n - n_t + 0.5) / (n_t + 0.5);
                let idf = match q {
                    None => (1.0 + odds).ln(),
                    Some(q) if (q - 1.0).abs() < 1e-9 => odds.ln(),
                    Some(q) => (odds.powf(1.0 - q) - 1.0) / (1.0 - q),
                };
                let sat = tf * (k1 + 1.0) / (tf + k1 * (1.0 - b + b * d.len() as f64 / avg));
                total += idf * sat;
                magnitude += (idf * sat).abs();
            }
            (total, magnitude)
        })
        .collect()
}

fn c05_dense_oracle() -> Outcome {
    let mode = TokenizerMode::T1Whitespace;
    let stop = default_stopwords();
    let mut checked = 0usize;
    let mut worst: f64 = 0.0;
    for seed in 0..20u64 {
        let n_docs = 5 + (seed as usize * 7) % 46;
        let vocab = 20 + (seed as usize * 37) % 181;
        let corpus = random_corpus(n_docs, vocab, 25, seed);
        let queries = random_queries(15, vocab, 5, seed);
        let docs: Vec<Vec<String>> = corpus.iter().map(|d| tokenize(&d.text, mode, stop)).collect();
        let base = build_index(&corpus, mode, Default::default()).map_err(|e| e.to_string())?;
        for q in [None, Some(0.3)] {
            let mut index = base.clone();
            if let Some(q) = q {
                rescale_index(&mut index, q).map_err(|e| e.to_string())?;
            }
            for query in queries.iter() {
                let tokens = tokenize(&query.text, mode, stop);
                let sparse = score_query(&index, &tokens);
                for (s, (d, mag)) in sparse.iter().zip(dense_scores(&docs, &tokens, q)) {
                    let err = (s - d).abs() / mag.max(f64::MIN_POSITIVE);
                    if (s - d).abs() > 0.0 {
                        worst = worst.max(err);
                    }
                    if err > 1e-9 {
                        return Err(format!("seed {seed} q={q:?} query {}: sparse {s} vs dense {d}", query.query_id));
                    }
                    checked += 1;
                }
            }
        }
    }
    Ok(format!("{checked} (query, doc) pairs across 20 corpora, BM25 and q-log; worst rel err {worst:.2e}"))
}

fn c06_monotonicity() -> Outcome {
    let n = 100_000u64;
    for q in [0.05, 0.5, 1.0, 1.5] {
        let mut prev = f64::INFINITY;
        for n_t in 1..=n {
            let v = idf_qlog(n_t, n, q).map_err(|e| e.to_string())?;
            if v >= prev {
                return Err(format!("q={q}: idf({n_t}) = {v} >= idf({}) = {prev}", n_t - 1));
            }
            prev = v;
        }
    }
    let mut x = 1.0f64;
    while x <= 1e12 {
        let v = ln_q(x, 1.5).map_err(|e| e.to_string())?;
        if v >= 2.0 {
            return Err(format!("ln_q({x:e}, 1.5) = {v} >= 2"));
        }
        x *= 1.5;
    }
    let top = ln_q(1e12, 1.5).map_err(|e| e.to_string())?;
    ensure(top > 1.99 && top < 2.0, format!("strictly decreasing for 4 q values over 1e5 df; ln_q(1e12, 1.5) = {top:.6}"))
}

fn c07_lhopital() -> Outcome {
    let mut worst: f64 = 0.0;
    for x in [1.001, 2.0, 10.0, 1e3, 1e6] {
        for q in [1.0 - 1e-12, 1.0 + 1e-12] {
            let v = ln_q(x, q).map_err(|e| e.to_string())?;
            worst = worst.max((v - x.ln()).abs());
        }
    }
    ensure(worst < 1e-6, format!("max |ln_q - ln| = {worst:.2e}"))
}

fn c08_mechanism() -> Outcome {
    let c = hapax_collection(HapaxSpec::default(), 2024);
    let base = build_index(&c.corpus, TokenizerMode::T1Whitespace, Default::default()).map_err(|e| e.to_string())?;
    let sweep = q_sweep(&base, &c.queries, &c.qrels, &DEFAULT_GRID).map_err(|e| e.to_string())?;
    let bm25 = sweep.row(1.0).ok_or("grid lacks q=1")?.mean_ndcg;
    let best = sweep.best().mean_ndcg;
    let occ = df_bin_occlusion(&base, &c.queries, &c.qrels, &DfBin::default_bins(), Some(sweep.q_opt))
        .map_err(|e| e.to_string())?;
    let top = occ
        .bins
        .iter()
        .max_by(|a, b| a.loss.total_cmp(&b.loss))
        .ok_or("no bins")?;
    let hapax_top = top.bin == DfBin { lo: 1, hi: Some(1) };
    ensure(
        sweep.q_opt <= 0.5 && best - bm25 >= 0.2 && hapax_top,
        format!(
            "q_opt = {}, ndcg {:.4} vs bm25 {:.4} (+{:.4}), largest occlusion loss in bin {} ({:.4})",
            sweep.q_opt,
            best,
            bm25,
            best - bm25,
            top.bin,
            top.loss
        ),
    )
}

fn c09_bootstrap() -> Outcome {
    let a: std::collections::BTreeMap<String, f64> = (0..200).map(|i| (format!("q{i:03}"), ((i * 37) % 100) as f64 / 100.0)).collect();
    let b: std::collections::BTreeMap<String, f64> = a.iter().map(|(k, v)| (k.clone(), (v + 0.07).min(1.0))).collect();
    let same = paired_bootstrap(&a, &a, 10_000, 1).map_err(|e| e.to_string())?;
    if (same.ci_lo, same.ci_hi) != (0.0, 0.0) {
        return Err(format!("identical inputs gave CI [{}, {}]", same.ci_lo, same.ci_hi));
    }
    let run = |threads: usize| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .expect("thread pool")
            .install(|| paired_bootstrap(&a, &b, 10_000, 42))
    };
    let r1 = run(1).map_err(|e| e.to_string())?;
    let r4 = run(4).map_err(|e| e.to_string())?;
    let again = run(4).map_err(|e| e.to_string())?;
    ensure(
        r1 == r4 && r4 == again,
        format!("CI [0, 0] on identical inputs; seed 42 gives CI [{:.6}, {:.6}] on 1 and 4 threads, equal = {}", r1.ci_lo, r1.ci_hi, r1 == r4),
    )
}

fn c10_gamma_gate() -> Outcome {
    let corpus = random_corpus(300, 800, 40, 10);
    let base = build_index(&corpus, TokenizerMode::T0Default, Default::default()).map_err(|e| e.to_string())?;
    let mut gated = base.clone();
    let outcome = rescale_index_gamma(&mut gated, 1.0).map_err(|e| e.to_string())?;
    let bitwise = base.scores().iter().zip(gated.scores()).all(|(a, b)| a.to_bits() == b.to_bits());
    ensure(outcome == RescaleOutcome::Skipped && bitwise, format!("{} stored weights bit-identical = {bitwise}", base.nnz()))
}

/// Kendall tau-b between two paired score vectors.
fn kendall_tau(x: &[f64], y: &[f64]) -> f64 {
    let (mut concordant, mut discordant, mut ties_x, mut ties_y) = (0f64, 0f64, 0f64, 0f64);
    for i in 0..x.len() {
        for j in i + 1..x.len() {
            let dx = (x[i] - x[j]).signum() * ((x[i] - x[j]).abs() > 1e-9 * x[i].abs().max(x[j].abs())) as i32 as f64;
            let dy = (y[i] - y[j]).signum() * ((y[i] - y[j]).abs() > 1e-9 * y[i].abs().max(y[j].abs())) as i32 as f64;
            match (dx == 0.0, dy == 0.0) {
                (true, true) => {}
                (true, false) => ties_x += 1.0,
                (false, true) => ties_y += 1.0,
                _ if dx == dy => concordant += 1.0,
                _ => discordant += 1.0,
            }
        }
    }
    let denom = ((concordant + discordant + ties_x) * (concordant + discordant + ties_y)).sqrt();
    if denom == 0.0 {
        1.0
    } else {
        (concordant - discordant) / denom
    }
}

fn c11_dph_reference() -> Outcome {
    let mode = TokenizerMode::T0Default;
    let corpus = random_corpus(2_000, 3_000, 50, 11);
    let queries = random_queries(100, 3_000, 4, 11);
    let index = build_dph_index(&corpus, mode).map_err(|e| e.to_string())?;

    // Reference: term statistics recounted from raw tokens, scores summed per document.
    let stop = default_stopwords();
    let docs: Vec<Vec<String>> = corpus.iter().map(|d| tokenize(&d.text, mode, stop)).collect();
    let n = docs.len() as f64;
    let avg = docs.iter().map(Vec::len).sum::<usize>() as f64 / n;
    let mut cf: HashMap<&str, f64> = HashMap::new();
    for d in &docs {
        for t in d {
            *cf.entry(t.as_str()).or_default() += 1.0;
        }
    }
    let mut taus = Vec::new();
    for query in queries.iter() {
        let tokens = tokenize(&query.text, mode, stop);
        let reference: Vec<f64> = docs
            .iter()
            .map(|d| {
                let dl = d.len() as f64;
                tokens
                    .iter()
                    .filter_map(|t| {
                        let tf = d.iter().filter(|w| *w == t).count() as f64;
                        (tf > 0.0).then(|| {
                            let f = (tf / dl).min(1.0 - 1e-9);
                            let norm = (1.0 - f).powi(2) / (tf + 1.0);
                            norm * (tf * (tf * avg / dl * n / cf[t.as_str()]).log2()
                                + 0.5 * (2.0 * std::f64::consts::PI * tf * (1.0 - f)).log2())
                        })
                    })
                    .sum()
            })
            .collect();
        let ours = score_query(&index, &tokens);
        let top: Vec<u32> = top_k_indices(&reference, 100).into_iter().map(|(d, _)| d).collect();
        let x: Vec<f64> = top.iter().map(|&d| reference[d as usize]).collect();
        let y: Vec<f64> = top.iter().map(|&d| ours[d as usize]).collect();
        taus.push(kendall_tau(&x, &y));
    }
    taus.sort_unstable_by(f64::total_cmp);
    let median = taus[taus.len() / 2];
    ensure(median == 1.0, format!("median Kendall tau over {} queries = {median:.2} (min {:.4})", taus.len(), taus[0]))
}

fn c12_overhead() -> Outcome {
    let corpus = random_corpus(20_000, 50_000, 80, 12);
    let queries = random_queries(3_000, 50_000, 6, 12);
    let base = build_index(&corpus, TokenizerMode::T0Default, Default::default()).map_err(|e| e.to_string())?;
    let report = run_bench(&base, None, &queries, BenchConfig { trials: 9, top_k: 100, q: 0.1 }).map_err(|e| e.to_string())?;
    let delta = report.p50_delta_pct();
    drop(base);

    let sizes = [100_000usize, 300_000, 1_000_000, 3_000_000, 10_000_000];
    let mut points = Vec::new();
    for (i, &target) in sizes.iter().enumerate() {
        let base = index_with_nnz(target, i as u64);
        let mut times = Vec::new();
        for _ in 0..3 {
            let mut copy = base.clone();
            let start = Instant::now();
            rescale_index(&mut copy, 0.1).map_err(|e| e.to_string())?;
            times.push(start.elapsed().as_secs_f64());
        }
        times.sort_unstable_by(f64::total_cmp);
        points.push((base.nnz() as f64, times[1]));
    }
    let n = points.len() as f64;
    let (mx, my) = (points.iter().map(|p| p.0).sum::<f64>() / n, points.iter().map(|p| p.1).sum::<f64>() / n);
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let syy: f64 = points.iter().map(|p| (p.1 - my).powi(2)).sum();
    let r2 = sxy * sxy / (sxx * syy);

    ensure(
        r2 >= 0.98 && delta.abs() < 5.0,
        format!(
            "rescale time vs nnz R^2 = {r2:.4} ({:.1} ms at {:.2e} nnz); query p50 {:.4} ms vs {:.4} ms ({delta:+.2}%)",
            points[4].1 * 1e3,
            points[4].0,
            report.qlog.p50_ms.median,
            report.bm25.p50_ms.median
        ),
    )
}

fn main() {
    let criteria: [Criterion; 12] = [
        (1, "q=1 bit-identity gate", c01_bit_identity),
        (2, "case-study IDF values", c02_case_study_idf),
        (3, "predictor arithmetic", c03_predictor),
        (4, "recovery metric", c04_recovery),
        (5, "dense-oracle equivalence", c05_dense_oracle),
        (6, "monotonicity and saturation", c06_monotonicity),
        (7, "q -> 1 guard", c07_lhopital),
        (8, "synthetic hapax mechanism", c08_mechanism),
        (9, "bootstrap determinism", c09_bootstrap),
        (10, "gamma=1 gate", c10_gamma_gate),
        (11, "DPH reference agreement", c11_dph_reference),
        (12, "systems overhead shape", c12_overhead),
    ];
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut failed = 0;
    for (id, name, check) in criteria {
        if !filter.is_empty() && !filter.iter().any(|f| name.contains(f.as_str()) || *f == id.to_string()) {
            continue;
        }
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|_| Err("panicked".into()));
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {id:>2} PASS  {name}: {detail} [{secs:.2}s]"),
            Err(detail) => {
                failed += 1;
                println!("criterion {id:>2} FAIL  {name}: {detail} [{secs:.2}s]");
            }
        }
    }
    if failed > 0 {
        println!("{failed} criterion(s) failed");
        std::process::exit(1);
    }
}
