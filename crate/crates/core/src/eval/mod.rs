//! Evaluation: ranking metrics, paired bootstrap, q sweeps, df-bin
//! occlusion, query features and token-budget recall.

mod bootstrap;
mod budget;
mod features;
mod metrics;
mod sweep;

pub use bootstrap::{paired_bootstrap, BootstrapResult, DEFAULT_RESAMPLES, P_FLOOR};
pub use budget::{recall_at_token_budget, BudgetRecall, BudgetReport, TokenCounter, WhitespaceCounter};
pub use features::{looks_like_identifier, query_features, QueryFeatures, LOW_DF_MAX};
pub use metrics::{evaluate, mrr, ndcg_at_k, recall_at_k, EvalReport, Judgments, Metric};
pub use sweep::{
    df_bin_occlusion, q_sweep, q_sweep_from_path, BinLoss, DfBin, OcclusionReport, SweepRow, SweepTable, DEFAULT_GRID,
    NDCG_K,
};
