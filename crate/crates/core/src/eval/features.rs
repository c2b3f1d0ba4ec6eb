//! Per-query mechanism features.

use serde::Serialize;

use crate::index::SparseScoreIndex;
use crate::tokenize::Tokenizer;

/// Tokens with df at or below this count as low-df.
pub const LOW_DF_MAX: u32 = 5;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QueryFeatures {
    /// Fraction of query tokens with `df <= 5`. Unknown tokens have df 0.
    pub low_df_mass: f64,
    pub median_df: f64,
    /// Fraction of surface tokens that look like identifiers.
    pub identifier_fraction: f64,
}

/// CamelCase (an uppercase letter after the first character) or dotted.
pub fn looks_like_identifier(surface: &str) -> bool {
    surface.contains('.') || surface.chars().skip(1).any(char::is_uppercase)
}

impl QueryFeatures {
    /// `dfs` are document frequencies of the analyzed query tokens;
    /// `surfaces` are the raw whitespace-delimited query words.
    pub fn compute<S: AsRef<str>>(surfaces: &[S], dfs: &[u32]) -> Self {
        let low_df_mass = if dfs.is_empty() {
            0.0
        } else {
            dfs.iter().filter(|&&d| d <= LOW_DF_MAX).count() as f64 / dfs.len() as f64
        };
        let identifier_fraction = if surfaces.is_empty() {
            0.0
        } else {
            surfaces.iter().filter(|s| looks_like_identifier(s.as_ref())).count() as f64 / surfaces.len() as f64
        };
        QueryFeatures {
            low_df_mass,
            median_df: median(dfs),
            identifier_fraction,
        }
    }
}

fn median(values: &[u32]) -> f64 {
    if values.is_empty() {
        return 0.0;
    }
    let mut v = values.to_vec();
    v.sort_unstable();
    let mid = v.len() / 2;
    if v.len() % 2 == 1 {
        v[mid] as f64
    } else {
        (v[mid - 1] as f64 + v[mid] as f64) / 2.0
    }
}

/// Features of `query_text` against `index`, tokenized with the index's mode.
pub fn query_features(index: &SparseScoreIndex, query_text: &str) -> QueryFeatures {
    let surfaces: Vec<&str> = query_text
        .split_whitespace()
        .map(|w| w.trim_matches(|c: char| !c.is_alphanumeric() && c != '_' && c != '.'))
        .map(|w| w.trim_matches('.'))
        .filter(|w| !w.is_empty())
        .collect();
    let tokens = Tokenizer::new(index.mode()).tokenize(query_text);
    let dfs: Vec<u32> = tokens.iter().map(|t| index.df_of(t)).collect();
    QueryFeatures::compute(&surfaces, &dfs)
}
