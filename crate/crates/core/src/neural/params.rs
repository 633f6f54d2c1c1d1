use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::text_prep::PAD;
use crate::{Error, Result};

/// Layer sizes of the network.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ModelDims {
    pub vocab: usize,
    pub embedding: usize,
    pub filters: usize,
    pub window: usize,
    pub hidden: usize,
    pub features: usize,
    /// `false` drops the whole text encoder: `e = f` and the model is a
    /// logistic regression over the features.
    pub encoder: bool,
}

impl ModelDims {
    /// Embedding 50, 100 filters of width 5, LSTM 100.
    pub fn paes(vocab: usize, features: usize) -> Self {
        ModelDims {
            vocab,
            embedding: 50,
            filters: 100,
            window: 5,
            hidden: 100,
            features,
            encoder: true,
        }
    }

    pub fn features_only(features: usize) -> Self {
        ModelDims {
            vocab: 0,
            embedding: 0,
            filters: 0,
            window: 0,
            hidden: 0,
            features,
            encoder: false,
        }
    }

    /// Width of the essay representation `o`.
    pub fn essay_dim(&self) -> usize {
        if self.encoder {
            self.hidden
        } else {
            0
        }
    }

    /// Names and shapes of every parameter group, in storage order.
    pub fn shapes(&self) -> Vec<(&'static str, Vec<usize>)> {
        let on = |n: usize| if self.encoder { n } else { 0 };
        let (v, d, k, h) = (
            on(self.vocab),
            on(self.embedding),
            on(self.filters),
            on(self.hidden),
        );
        let w = on(self.window);
        vec![
            ("embedding", vec![v, d]),
            ("conv.W_z", vec![k, w * d]),
            ("conv.b_z", vec![k]),
            ("word_attention.W_m", vec![k, k]),
            ("word_attention.b_m", vec![k]),
            ("word_attention.w_u", vec![k]),
            ("lstm.W_i", vec![h, k]),
            ("lstm.W_f", vec![h, k]),
            ("lstm.W_c", vec![h, k]),
            ("lstm.W_o", vec![h, k]),
            ("lstm.U_i", vec![h, h]),
            ("lstm.U_f", vec![h, h]),
            ("lstm.U_c", vec![h, h]),
            ("lstm.U_o", vec![h, h]),
            ("lstm.b_i", vec![h]),
            ("lstm.b_f", vec![h]),
            ("lstm.b_c", vec![h]),
            ("lstm.b_o", vec![h]),
            ("sentence_attention.W_a", vec![h, h]),
            ("sentence_attention.b_a", vec![h]),
            ("sentence_attention.w_alpha", vec![h]),
            ("output.w_y", vec![h + self.features]),
            ("output.b_y", vec![1]),
        ]
    }
}

/// Indices into [`ParamSet::groups`].
pub mod ids {
    pub const EMBEDDING: usize = 0;
    pub const W_Z: usize = 1;
    pub const B_Z: usize = 2;
    pub const W_M: usize = 3;
    pub const B_M: usize = 4;
    pub const W_U: usize = 5;
    /// Input weights for gates i, f, c, o.
    pub const LSTM_W: [usize; 4] = [6, 7, 8, 9];
    pub const LSTM_U: [usize; 4] = [10, 11, 12, 13];
    pub const LSTM_B: [usize; 4] = [14, 15, 16, 17];
    pub const W_A: usize = 18;
    pub const B_A: usize = 19;
    pub const W_ALPHA: usize = 20;
    pub const W_Y: usize = 21;
    pub const B_Y: usize = 22;
    pub const COUNT: usize = 23;
}

#[derive(Debug, Clone, PartialEq)]
pub struct Tensor {
    pub name: String,
    pub shape: Vec<usize>,
    pub data: Vec<f64>,
}

impl Tensor {
    pub fn zeros(name: &str, shape: Vec<usize>) -> Self {
        let n = shape.iter().product();
        Tensor {
            name: name.to_string(),
            shape,
            data: vec![0.0; n],
        }
    }

    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }
}

/// Every learnable array; also used for gradients and optimizer state.
#[derive(Debug, Clone, PartialEq)]
pub struct ParamSet {
    pub dims: ModelDims,
    pub groups: Vec<Tensor>,
}

pub type ModelParams = ParamSet;

impl ParamSet {
    pub fn zeros(dims: ModelDims) -> Self {
        ParamSet {
            dims,
            groups: dims
                .shapes()
                .into_iter()
                .map(|(name, shape)| Tensor::zeros(name, shape))
                .collect(),
        }
    }

    pub fn zeros_like(&self) -> Self {
        Self::zeros(self.dims)
    }

    pub fn get(&self, id: usize) -> &[f64] {
        &self.groups[id].data
    }

    pub fn get_mut(&mut self, id: usize) -> &mut [f64] {
        &mut self.groups[id].data
    }

    pub fn num_scalars(&self) -> usize {
        self.groups.iter().map(Tensor::len).sum()
    }

    /// `self += other`, group by group.
    pub fn add_assign(&mut self, other: &ParamSet) {
        for (a, b) in self.groups.iter_mut().zip(&other.groups) {
            for (x, y) in a.data.iter_mut().zip(&b.data) {
                *x += y;
            }
        }
    }

    pub fn scale(&mut self, factor: f64) {
        for g in &mut self.groups {
            for x in &mut g.data {
                *x *= factor;
            }
        }
    }

    pub fn l2_norm(&self) -> f64 {
        self.groups
            .iter()
            .flat_map(|g| &g.data)
            .map(|x| x * x)
            .sum::<f64>()
            .sqrt()
    }

    /// Checks that `other` has exactly this set's names and shapes.
    pub fn check_layout(&self, other: &ParamSet) -> Result<()> {
        if self.groups.len() != other.groups.len() {
            return Err(Error::LengthMismatch(self.groups.len(), other.groups.len()));
        }
        for (a, b) in self.groups.iter().zip(&other.groups) {
            if a.name != b.name || a.shape != b.shape {
                return Err(Error::ShapeMismatch {
                    name: a.name.clone(),
                    expected: a.shape.clone(),
                    found: b.shape.clone(),
                });
            }
        }
        Ok(())
    }
}

/// Glorot-uniform matrices, zero biases (forget gate 1), embeddings
/// uniform in (-0.05, 0.05) with the PAD row zero.
pub fn init_params(dims: ModelDims, seed: u64) -> ParamSet {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut params = ParamSet::zeros(dims);
    for (id, tensor) in params.groups.iter_mut().enumerate() {
        if tensor.is_empty() {
            continue;
        }
        let is_bias =
            matches!(id, ids::B_Z | ids::B_M | ids::B_A | ids::B_Y) || ids::LSTM_B.contains(&id);
        if id == ids::EMBEDDING {
            for x in &mut tensor.data {
                *x = rng.random_range(-0.05..0.05);
            }
            let d = tensor.shape[1];
            let pad = PAD as usize;
            tensor.data[pad * d..(pad + 1) * d].fill(0.0);
        } else if is_bias {
            if id == ids::LSTM_B[1] {
                tensor.data.fill(1.0);
            }
        } else {
            let (fan_out, fan_in) = match tensor.shape.as_slice() {
                [rows, cols] => (*rows, *cols),
                [n] => (1, *n),
                _ => unreachable!("parameter groups are vectors or matrices"),
            };
            let bound = (6.0 / (fan_in + fan_out) as f64).sqrt();
            for x in &mut tensor.data {
                *x = rng.random_range(-bound..bound);
            }
        }
    }
    params
}
