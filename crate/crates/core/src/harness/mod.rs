//! Dataset ingestion, prompt-wise cross-validation, training and reporting.

pub mod config;
pub mod cv;
pub mod dataset;
pub mod folds;
pub mod prepare;
pub mod report;
pub mod train;

pub use config::RunConfig;
pub use cv::{run_cross_validation, run_single_fold, subsample_curve, CrossValidation};
pub use dataset::{dataset_stats, load_dataset, parse_dataset, Dataset, Essay, SetStats};
pub use folds::{make_fold, make_folds, FoldPlan};
pub use prepare::{load_pretagged, prepare, PreparedEssay};
pub use report::{parse_predictions_csv, parse_results_csv, ResultRow, RunDir};
pub use train::{evaluate_checkpoint, fit_fold_normalization, train_fold, FoldResult, Prediction};
