//! The scoring network: tag embeddings, per-sentence convolution with
//! attention pooling, a sentence-level LSTM with attention pooling, and a
//! sigmoid head over the essay vector joined with the features.
//!
//! Everything is `f64` with hand-written reverse passes.

mod checkpoint;
pub mod layers;
pub mod linalg;
mod model;
mod optim;
mod params;

pub use checkpoint::Checkpoint;
pub use layers::{
    attention_pool, attention_pool_masked, conv1d, embed, lstm_sequence, AttentionTrace, LstmTrace,
    LstmWeights,
};
pub use model::{
    backward, batch_gradients, dropout_mask, forward, mse, predict, Example, ForwardTrace,
    SentenceTrace, DROPOUT_RATE,
};
pub use optim::{clip_global_norm, OptimizerState, RmsProp};
pub use params::{ids, init_params, ModelDims, ModelParams, ParamSet, Tensor};
