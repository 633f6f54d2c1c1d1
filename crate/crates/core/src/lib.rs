//! Cross-prompt automated essay scoring.
//!
//! Essays are reduced to part-of-speech sequences and scored by a
//! convolutional/recurrent attention network whose essay vector is
//! concatenated with 86 prompt-independent linguistic features before a
//! sigmoid regression head. The crate also carries the quadratic weighted
//! kappa metric and a prompt-wise cross-validation harness.

pub mod error;
pub mod features;
pub mod harness;
pub mod metrics;
pub mod neural;
pub mod text_prep;

pub use error::{Error, Result};
