//! Scoring recovered chart tables against ground truth.
//!
//! [`value_accuracy`] counts elements recovered within ε relative error,
//! optionally requiring a minimum label similarity ([`levenshtein_ratio`]).
//! [`evaluate`] sums it over a batch into an [`EvalReport`];
//! [`ablation_report`] compares the box and heatmap pie paths;
//! [`detection_ap`] scores detector boxes.

mod ablation;
mod ap;
mod labels;
mod matching;
mod report;

use charter_core::ChartType;

pub use ablation::{ablation_report, AblationReport};
pub use ap::{average_precision, detection_ap};
pub use labels::{levenshtein_ratio, normalize_label};
pub use matching::{value_accuracy, within_epsilon, Accuracy, LabelMode, MatchPolicy, MatchedPair, Pairing, ValueKind};
pub use report::{
    evaluate, Condition, EvalCell, EvalItem, EvalReport, EvalRow, FailedChart, RuntimeStats, ABLATION_TAUS,
    DEFAULT_EPSILONS, REPORT_SCHEMA_VERSION,
};

#[derive(Debug, thiserror::Error)]
pub enum EvalError {
    #[error("chart type mismatch: ground truth is {gt}, prediction is {pred}")]
    TypeMismatch { gt: ChartType, pred: ChartType },
    #[error("invalid match policy: {0}")]
    InvalidPolicy(String),
    #[error("empty dataset")]
    EmptyDataset,
    #[error(transparent)]
    Oracle(#[from] charter_oracle::OracleError),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
