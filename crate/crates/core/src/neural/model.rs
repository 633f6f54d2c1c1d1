//! Whole-essay forward pass, loss and reverse pass.

use rand::Rng;
use rayon::prelude::*;

use super::layers::{
    attention_backward, attention_pool, conv1d, conv1d_backward, embed, embed_backward,
    lstm_backward, lstm_sequence, AttentionTrace, LstmGrads, LstmTrace, LstmWeights,
};
use super::linalg::{dot, sigmoid};
use super::params::{ids, ParamSet};
use crate::text_prep::EssayTensor;
use crate::{Error, Result};

pub const DROPOUT_RATE: f64 = 0.5;

/// Inverted-dropout multipliers: 0 with probability `rate`, else `1 / (1 - rate)`.
pub fn dropout_mask<R: Rng + ?Sized>(rng: &mut R, dim: usize, rate: f64) -> Vec<f64> {
    let keep = 1.0 / (1.0 - rate);
    (0..dim)
        .map(|_| {
            if rng.random::<f64>() < rate {
                0.0
            } else {
                keep
            }
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct SentenceTrace {
    pub indices: Vec<u32>,
    pub x: Vec<f64>,
    pub z: Vec<f64>,
    pub attention: AttentionTrace,
}

/// Every intermediate needed by [`backward`].
#[derive(Debug, Clone, PartialEq)]
pub struct ForwardTrace {
    pub sentences: Vec<SentenceTrace>,
    /// Sentence vectors `[T x filters]`.
    pub s: Vec<f64>,
    pub lstm: LstmTrace,
    pub sentence_attention: AttentionTrace,
    /// Essay representation before dropout.
    pub o: Vec<f64>,
    pub dropout_mask: Option<Vec<f64>>,
    pub e: Vec<f64>,
    pub y_hat: f64,
}

fn lstm_weights(p: &ParamSet) -> LstmWeights<'_> {
    LstmWeights {
        w: ids::LSTM_W.map(|i| p.get(i)),
        u: ids::LSTM_U.map(|i| p.get(i)),
        b: ids::LSTM_B.map(|i| p.get(i)),
    }
}

/// Scores one essay. `dropout_mask`, when given, multiplies `o` before it is
/// joined with the features.
pub fn forward(
    params: &ParamSet,
    essay: &EssayTensor,
    features: &[f64],
    dropout_mask: Option<&[f64]>,
) -> Result<ForwardTrace> {
    let dims = params.dims;
    if features.len() != dims.features {
        return Err(Error::ShapeMismatch {
            name: "features".into(),
            expected: vec![dims.features],
            found: vec![features.len()],
        });
    }
    let hidden = dims.essay_dim();
    if let Some(m) = dropout_mask {
        if m.len() != hidden {
            return Err(Error::ShapeMismatch {
                name: "dropout mask".into(),
                expected: vec![hidden],
                found: vec![m.len()],
            });
        }
    }

    let filters = if dims.encoder { dims.filters } else { 0 };
    let mut sentences = Vec::new();
    let mut s = Vec::new();
    if dims.encoder {
        for t in 0..essay.num_sentences() {
            let indices = essay.row(t).to_vec();
            let x = embed(&indices, params.get(ids::EMBEDDING), dims.embedding)?;
            let z = conv1d(
                &x,
                dims.embedding,
                params.get(ids::W_Z),
                params.get(ids::B_Z),
                dims.window,
            );
            let attention = attention_pool(
                &z,
                filters,
                params.get(ids::W_M),
                params.get(ids::B_M),
                params.get(ids::W_U),
            );
            s.extend_from_slice(&attention.output);
            sentences.push(SentenceTrace {
                indices,
                x,
                z,
                attention,
            });
        }
    }
    let lstm = lstm_sequence(&s, filters, lstm_weights(params));
    let sentence_attention = attention_pool(
        &lstm.h,
        hidden,
        params.get(ids::W_A),
        params.get(ids::B_A),
        params.get(ids::W_ALPHA),
    );
    let o = sentence_attention.output.clone();

    let mut e = Vec::with_capacity(hidden + features.len());
    match dropout_mask {
        Some(m) => e.extend(o.iter().zip(m).map(|(a, b)| a * b)),
        None => e.extend_from_slice(&o),
    }
    e.extend_from_slice(features);
    let y_hat = sigmoid(dot(params.get(ids::W_Y), &e) + params.get(ids::B_Y)[0]);

    Ok(ForwardTrace {
        sentences,
        s,
        lstm,
        sentence_attention,
        o,
        dropout_mask: dropout_mask.map(<[f64]>::to_vec),
        e,
        y_hat,
    })
}

/// Gradients of a loss with `dL/dy_hat = d_y_hat` for every parameter.
pub fn backward(params: &ParamSet, trace: &ForwardTrace, d_y_hat: f64) -> ParamSet {
    let dims = params.dims;
    let mut grads = params.zeros_like();
    let d_pre = d_y_hat * trace.y_hat * (1.0 - trace.y_hat);
    if d_pre == 0.0 {
        return grads;
    }
    for (g, e) in grads.get_mut(ids::W_Y).iter_mut().zip(&trace.e) {
        *g = d_pre * e;
    }
    grads.get_mut(ids::B_Y)[0] = d_pre;
    if !dims.encoder || trace.sentences.is_empty() {
        return grads;
    }

    let hidden = dims.hidden;
    let filters = dims.filters;
    let w_y = params.get(ids::W_Y);
    let d_o: Vec<f64> = match &trace.dropout_mask {
        Some(m) => (0..hidden).map(|j| d_pre * w_y[j] * m[j]).collect(),
        None => (0..hidden).map(|j| d_pre * w_y[j]).collect(),
    };

    let (d_wa, d_ba, d_walpha) = split3(&mut grads, ids::W_A, ids::B_A, ids::W_ALPHA);
    let dh = attention_backward(
        &trace.lstm.h,
        hidden,
        &trace.sentence_attention,
        &d_o,
        params.get(ids::W_A),
        params.get(ids::W_ALPHA),
        d_wa,
        d_ba,
        d_walpha,
    );

    let ds = {
        let mut refs = grads
            .groups
            .iter_mut()
            .map(|t| Some(&mut t.data[..]))
            .collect::<Vec<_>>();
        let mut take = |i: usize| refs[i].take().expect("distinct parameter groups");
        let mut lg = LstmGrads {
            w: ids::LSTM_W.map(&mut take),
            u: ids::LSTM_U.map(&mut take),
            b: ids::LSTM_B.map(&mut take),
        };
        lstm_backward(&trace.s, &trace.lstm, &dh, lstm_weights(params), &mut lg)
    };

    for (t, st) in trace.sentences.iter().enumerate() {
        let d_s = &ds[t * filters..(t + 1) * filters];
        let (d_wm, d_bm, d_wu) = split3(&mut grads, ids::W_M, ids::B_M, ids::W_U);
        let dz = attention_backward(
            &st.z,
            filters,
            &st.attention,
            d_s,
            params.get(ids::W_M),
            params.get(ids::W_U),
            d_wm,
            d_bm,
            d_wu,
        );
        let (d_wz, d_bz, _) = split3(&mut grads, ids::W_Z, ids::B_Z, ids::EMBEDDING);
        let dx = conv1d_backward(
            &st.x,
            dims.embedding,
            &st.z,
            &dz,
            params.get(ids::W_Z),
            dims.window,
            d_wz,
            d_bz,
        );
        embed_backward(
            &st.indices,
            &dx,
            dims.embedding,
            grads.get_mut(ids::EMBEDDING),
        );
    }
    grads
}

/// Three disjoint mutable group borrows.
fn split3(p: &mut ParamSet, a: usize, b: usize, c: usize) -> (&mut [f64], &mut [f64], &mut [f64]) {
    let mut refs: Vec<Option<&mut [f64]>> =
        p.groups.iter_mut().map(|t| Some(&mut t.data[..])).collect();
    let ra = refs[a].take().expect("distinct groups");
    let rb = refs[b].take().expect("distinct groups");
    let rc = refs[c].take().expect("distinct groups");
    (ra, rb, rc)
}

/// Mean squared error.
pub fn mse(y: &[f64], y_hat: &[f64]) -> Result<f64> {
    if y.len() != y_hat.len() {
        return Err(Error::LengthMismatch(y.len(), y_hat.len()));
    }
    if y.is_empty() {
        return Err(Error::EmptyBatch);
    }
    Ok(y.iter()
        .zip(y_hat)
        .map(|(a, b)| (b - a) * (b - a))
        .sum::<f64>()
        / y.len() as f64)
}

/// One training example in unit-score space.
#[derive(Debug, Clone, Copy)]
pub struct Example<'a> {
    pub essay: &'a EssayTensor,
    pub features: &'a [f64],
    pub target: f64,
}

/// Batch MSE and its gradient. Per-essay gradients are computed in
/// parallel and summed in batch order.
pub fn batch_gradients(
    params: &ParamSet,
    batch: &[Example<'_>],
    masks: Option<&[Vec<f64>]>,
) -> Result<(f64, ParamSet)> {
    if batch.is_empty() {
        return Err(Error::EmptyBatch);
    }
    let n = batch.len() as f64;
    let per_essay: Vec<(f64, ParamSet)> = batch
        .par_iter()
        .enumerate()
        .map(|(i, ex)| {
            let mask = masks.map(|m| m[i].as_slice());
            let trace = forward(params, ex.essay, ex.features, mask)?;
            let grads = backward(params, &trace, 2.0 * (trace.y_hat - ex.target) / n);
            Ok((trace.y_hat, grads))
        })
        .collect::<Result<_>>()?;
    let mut total = params.zeros_like();
    let mut preds = Vec::with_capacity(batch.len());
    for (y_hat, g) in &per_essay {
        total.add_assign(g);
        preds.push(*y_hat);
    }
    let targets: Vec<f64> = batch.iter().map(|e| e.target).collect();
    Ok((mse(&targets, &preds)?, total))
}

/// Unit-space predictions with dropout off.
pub fn predict(params: &ParamSet, essays: &[(&EssayTensor, &[f64])]) -> Result<Vec<f64>> {
    essays
        .par_iter()
        .map(|(e, f)| forward(params, e, f, None).map(|t| t.y_hat))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::neural::params::{init_params, ModelDims};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn tiny() -> (ModelDims, EssayTensor, Vec<f64>) {
        let dims = ModelDims {
            vocab: 10,
            embedding: 4,
            filters: 3,
            window: 5,
            hidden: 5,
            features: 6,
            encoder: true,
        };
        let essay = EssayTensor::from_rows(&[vec![2, 5, 9, 3], vec![7, 1, 4]], 2, 4);
        let f = vec![0.1, 0.5, 0.9, 0.0, 1.0, 0.3];
        (dims, essay, f)
    }

    #[test]
    fn zero_output_weights_give_one_half() {
        let (dims, essay, f) = tiny();
        let mut p = init_params(dims, 4);
        p.get_mut(ids::W_Y).fill(0.0);
        assert_eq!(forward(&p, &essay, &f, None).unwrap().y_hat, 0.5);
        p.get_mut(ids::B_Y)[0] = 20.0;
        assert!(forward(&p, &essay, &f, None).unwrap().y_hat > 0.999);
    }

    #[test]
    fn empty_essay_scores_from_features() {
        let (dims, _, f) = tiny();
        let p = init_params(dims, 4);
        let empty = EssayTensor::from_rows(&[], 2, 4);
        let t = forward(&p, &empty, &f, None).unwrap();
        assert_eq!(t.o, vec![0.0; 5]);
        let expected = sigmoid(dot(&p.get(ids::W_Y)[5..], &f));
        assert_eq!(t.y_hat, expected);
        let g = backward(&p, &t, 1.0);
        assert!(g.get(ids::W_Z).iter().all(|x| *x == 0.0));
    }

    #[test]
    fn mse_examples() {
        assert_eq!(mse(&[0.2, 0.4], &[0.2, 0.4]).unwrap(), 0.0);
        assert_eq!(mse(&[0.0, 1.0], &[1.0, 1.0]).unwrap(), 0.5);
        assert!(matches!(mse(&[], &[]), Err(Error::EmptyBatch)));
    }

    #[test]
    fn zero_loss_gradient_is_zero() {
        let (dims, essay, f) = tiny();
        let p = init_params(dims, 4);
        let target = forward(&p, &essay, &f, None).unwrap().y_hat;
        let ex = [Example {
            essay: &essay,
            features: &f,
            target,
        }];
        let (loss, g) = batch_gradients(&p, &ex, None).unwrap();
        assert_eq!(loss, 0.0);
        assert_eq!(g.l2_norm(), 0.0);
    }

    #[test]
    fn dropout_masks_are_reproducible() {
        let mut a = ChaCha8Rng::seed_from_u64(9);
        let mut b = ChaCha8Rng::seed_from_u64(9);
        let ma = dropout_mask(&mut a, 100, DROPOUT_RATE);
        assert_eq!(ma, dropout_mask(&mut b, 100, DROPOUT_RATE));
        assert!(ma.iter().all(|x| *x == 0.0 || *x == 2.0));
        assert!(ma.contains(&0.0) && ma.contains(&2.0));
    }

    #[test]
    fn pad_row_gradient_is_zero() {
        let (dims, _, f) = tiny();
        let p = init_params(dims, 4);
        let essay = EssayTensor::from_rows(&[vec![2, 0, 3]], 2, 4);
        let t = forward(&p, &essay, &f, None).unwrap();
        let g = backward(&p, &t, 1.0);
        assert!(g.get(ids::EMBEDDING)[..4].iter().all(|x| *x == 0.0));
        assert!(g.get(ids::EMBEDDING)[8..12].iter().any(|x| *x != 0.0));
    }
}
