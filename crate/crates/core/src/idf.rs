//! Scalar IDF functions: the q-logarithm, smoothed RSJ odds, the q-log RSJ
//! IDF and the shifted (Lucene) IDF baked into a freshly built index.

use crate::error::{Error, Result};

/// Smoothing constant added to both sides of the RSJ odds.
pub const RSJ_DELTA: f64 = 0.5;

/// Half-width of the neighbourhood around `q = 1` where `ln_q` falls back
/// to the natural log.
pub const Q_ONE_EPS: f64 = 1e-9;

/// `ln_q(x) = (x^(1-q) - 1) / (1 - q)`, and `ln(x)` when `|q - 1| < 1e-9`.
pub fn ln_q(x: f64, q: f64) -> Result<f64> {
    if !(x.is_finite() && x > 0.0) {
        return Err(Error::Domain(format!("ln_q requires finite x > 0, got {x}")));
    }
    if !q.is_finite() {
        return Err(Error::Domain(format!("q must be finite, got {q}")));
    }
    Ok(ln_q_unchecked(x, q))
}

#[inline]
pub(crate) fn ln_q_unchecked(x: f64, q: f64) -> f64 {
    let lambda = 1.0 - q;
    if lambda.abs() < Q_ONE_EPS {
        x.ln()
    } else {
        // exp_m1 keeps precision when lambda * ln x is small.
        (lambda * x.ln()).exp_m1() / lambda
    }
}

/// `(N - n_t + delta) / (n_t + delta)`.
pub fn rsj_odds(n_t: u64, n_docs: u64, delta: f64) -> Result<f64> {
    if n_t > n_docs {
        return Err(Error::Domain(format!(
            "document frequency {n_t} exceeds corpus size {n_docs}"
        )));
    }
    if delta.is_nan() || delta <= 0.0 {
        return Err(Error::Domain(format!("RSJ smoothing must be positive, got {delta}")));
    }
    Ok(((n_docs - n_t) as f64 + delta) / (n_t as f64 + delta))
}

/// q-log RSJ IDF: `ln_q(rsj_odds(n_t, N, 0.5), q)`. Negative when `n_t > N/2`.
pub fn idf_qlog(n_t: u64, n_docs: u64, q: f64) -> Result<f64> {
    ln_q(rsj_odds(n_t, n_docs, RSJ_DELTA)?, q)
}

/// Classical RSJ log IDF, equal to `idf_qlog(.., 1.0)`.
pub fn idf_rsj(n_t: u64, n_docs: u64) -> Result<f64> {
    Ok(rsj_odds(n_t, n_docs, RSJ_DELTA)?.ln())
}

/// Shifted IDF `ln(1 + odds)`, strictly positive for `1 <= n_t <= N`.
pub fn idf_lucene(n_t: u64, n_docs: u64) -> Result<f64> {
    if n_t == 0 {
        return Err(Error::Domain("idf_lucene is undefined for df = 0".into()));
    }
    Ok(rsj_odds(n_t, n_docs, RSJ_DELTA)?.ln_1p())
}
