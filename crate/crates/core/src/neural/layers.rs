//! Forward and reverse passes of the individual layers.
//!
//! Sequences are flattened row-major: `n` positions of width `k` occupy
//! `n * k` consecutive values.

use super::linalg::{axpy, dot, matvec_add, matvec_t_add, outer_add, sigmoid, softmax};
use crate::text_prep::PAD;
use crate::{Error, Result};

/// Looks up embedding rows; PAD always maps to the zero vector.
pub fn embed(indices: &[u32], table: &[f64], dim: usize) -> Result<Vec<f64>> {
    let rows = table.len().checked_div(dim).unwrap_or(0);
    let mut out = vec![0.0; indices.len() * dim];
    for (i, &idx) in indices.iter().enumerate() {
        let idx = idx as usize;
        if idx >= rows {
            return Err(Error::IndexOutOfRange {
                index: idx,
                size: rows,
            });
        }
        if idx != PAD as usize {
            out[i * dim..(i + 1) * dim].copy_from_slice(&table[idx * dim..(idx + 1) * dim]);
        }
    }
    Ok(out)
}

/// Scatters `dx` into the embedding gradient, skipping PAD.
pub fn embed_backward(indices: &[u32], dx: &[f64], dim: usize, grad: &mut [f64]) {
    for (i, &idx) in indices.iter().enumerate() {
        if idx == PAD {
            continue;
        }
        let idx = idx as usize;
        axpy(
            1.0,
            &dx[i * dim..(i + 1) * dim],
            &mut grad[idx * dim..(idx + 1) * dim],
        );
    }
}

/// Window rows start `(window - 1) / 2` positions before the output position.
fn window_offset(window: usize) -> isize {
    ((window.saturating_sub(1)) / 2) as isize
}

fn gather_window(x: &[f64], n: usize, dim: usize, window: usize, pos: usize, buf: &mut [f64]) {
    let off = window_offset(window);
    for k in 0..window {
        let src = pos as isize - off + k as isize;
        let dst = &mut buf[k * dim..(k + 1) * dim];
        if src >= 0 && (src as usize) < n {
            let s = src as usize;
            dst.copy_from_slice(&x[s * dim..(s + 1) * dim]);
        } else {
            dst.fill(0.0);
        }
    }
}

/// ReLU convolution with zero padding so that every position yields an output.
pub fn conv1d(x: &[f64], dim: usize, w_z: &[f64], b_z: &[f64], window: usize) -> Vec<f64> {
    let filters = b_z.len();
    let n = x.len().checked_div(dim).unwrap_or(0);
    let mut z = vec![0.0; n * filters];
    let mut buf = vec![0.0; window * dim];
    for pos in 0..n {
        gather_window(x, n, dim, window, pos, &mut buf);
        let out = &mut z[pos * filters..(pos + 1) * filters];
        out.copy_from_slice(b_z);
        matvec_add(w_z, &buf, out);
        for v in out.iter_mut() {
            *v = v.max(0.0);
        }
    }
    z
}

/// Accumulates `dW_z`, `db_z` and returns `dx`.
#[allow(clippy::too_many_arguments)]
pub fn conv1d_backward(
    x: &[f64],
    dim: usize,
    z: &[f64],
    dz: &[f64],
    w_z: &[f64],
    window: usize,
    dw_z: &mut [f64],
    db_z: &mut [f64],
) -> Vec<f64> {
    let filters = db_z.len();
    let n = x.len().checked_div(dim).unwrap_or(0);
    let off = window_offset(window);
    let mut dx = vec![0.0; x.len()];
    let mut buf = vec![0.0; window * dim];
    let mut dbuf = vec![0.0; window * dim];
    let mut dpre = vec![0.0; filters];
    for pos in 0..n {
        let zs = &z[pos * filters..(pos + 1) * filters];
        let dzs = &dz[pos * filters..(pos + 1) * filters];
        let mut any = false;
        for f in 0..filters {
            dpre[f] = if zs[f] > 0.0 { dzs[f] } else { 0.0 };
            any |= dpre[f] != 0.0;
        }
        if !any {
            continue;
        }
        gather_window(x, n, dim, window, pos, &mut buf);
        outer_add(dw_z, &dpre, &buf);
        axpy(1.0, &dpre, db_z);
        dbuf.fill(0.0);
        matvec_t_add(w_z, &dpre, &mut dbuf);
        for k in 0..window {
            let src = pos as isize - off + k as isize;
            if src >= 0 && (src as usize) < n {
                let s = src as usize;
                axpy(
                    1.0,
                    &dbuf[k * dim..(k + 1) * dim],
                    &mut dx[s * dim..(s + 1) * dim],
                );
            }
        }
    }
    dx
}

/// Intermediates of one attention pooling.
#[derive(Debug, Clone, PartialEq)]
pub struct AttentionTrace {
    /// `tanh(W v_i + b)`, one row per position.
    pub m: Vec<f64>,
    pub weights: Vec<f64>,
    pub output: Vec<f64>,
}

/// Attention pooling over `n = values.len() / dim` positions.
///
/// `w` is `[a x dim]`, `b` and `u` have length `a`. With no positions the
/// output is the zero vector and the weights are empty.
pub fn attention_pool(
    values: &[f64],
    dim: usize,
    w: &[f64],
    b: &[f64],
    u: &[f64],
) -> AttentionTrace {
    let a = b.len();
    let n = values.len().checked_div(dim).unwrap_or(0);
    let mut m = vec![0.0; n * a];
    let mut scores = vec![0.0; n];
    for i in 0..n {
        let row = &mut m[i * a..(i + 1) * a];
        row.copy_from_slice(b);
        matvec_add(w, &values[i * dim..(i + 1) * dim], row);
        for x in row.iter_mut() {
            *x = x.tanh();
        }
        scores[i] = dot(u, row);
    }
    let weights = softmax(&scores);
    let mut output = vec![0.0; dim];
    for (i, wt) in weights.iter().enumerate() {
        axpy(*wt, &values[i * dim..(i + 1) * dim], &mut output);
    }
    AttentionTrace { m, weights, output }
}

/// Attention over the positions where `mask` is true; masked positions get
/// weight exactly 0.
pub fn attention_pool_masked(
    values: &[f64],
    mask: &[bool],
    dim: usize,
    w: &[f64],
    b: &[f64],
    u: &[f64],
) -> (Vec<f64>, Vec<f64>) {
    let compact: Vec<f64> = mask
        .iter()
        .enumerate()
        .filter(|(_, m)| **m)
        .flat_map(|(i, _)| values[i * dim..(i + 1) * dim].iter().copied())
        .collect();
    let trace = attention_pool(&compact, dim, w, b, u);
    let mut weights = vec![0.0; mask.len()];
    let mut it = trace.weights.iter();
    for (slot, m) in weights.iter_mut().zip(mask) {
        if *m {
            *slot = *it.next().unwrap();
        }
    }
    (trace.output, weights)
}

/// Accumulates `dW`, `db`, `du` and returns `d values`.
#[allow(clippy::too_many_arguments)]
pub fn attention_backward(
    values: &[f64],
    dim: usize,
    trace: &AttentionTrace,
    d_output: &[f64],
    w: &[f64],
    u: &[f64],
    dw: &mut [f64],
    db: &mut [f64],
    du: &mut [f64],
) -> Vec<f64> {
    let a = u.len();
    let n = trace.weights.len();
    let mut dv = vec![0.0; values.len()];
    let d_alpha: Vec<f64> = (0..n)
        .map(|i| dot(d_output, &values[i * dim..(i + 1) * dim]))
        .collect();
    let mean: f64 = trace.weights.iter().zip(&d_alpha).map(|(p, g)| p * g).sum();
    let mut dpre = vec![0.0; a];
    for i in 0..n {
        let p = trace.weights[i];
        let v = &values[i * dim..(i + 1) * dim];
        let dvi = &mut dv[i * dim..(i + 1) * dim];
        axpy(p, d_output, dvi);
        let d_score = p * (d_alpha[i] - mean);
        if d_score == 0.0 {
            continue;
        }
        let m = &trace.m[i * a..(i + 1) * a];
        axpy(d_score, m, du);
        for k in 0..a {
            dpre[k] = d_score * u[k] * (1.0 - m[k] * m[k]);
        }
        outer_add(dw, &dpre, v);
        axpy(1.0, &dpre, db);
        matvec_t_add(w, &dpre, dvi);
    }
    dv
}

/// Borrowed LSTM weights; gate order is input, forget, candidate, output.
#[derive(Debug, Clone, Copy)]
pub struct LstmWeights<'a> {
    pub w: [&'a [f64]; 4],
    pub u: [&'a [f64]; 4],
    pub b: [&'a [f64]; 4],
}

/// Gate activations and states for every step.
#[derive(Debug, Clone, PartialEq)]
pub struct LstmTrace {
    pub input: usize,
    pub hidden: usize,
    /// `[T x 4H]`: i, f, c-tilde, o.
    pub gates: Vec<f64>,
    pub c: Vec<f64>,
    pub h: Vec<f64>,
}

impl LstmTrace {
    pub fn steps(&self) -> usize {
        self.h.len().checked_div(self.hidden).unwrap_or(0)
    }

    pub fn gate(&self, t: usize, g: usize) -> &[f64] {
        let h = self.hidden;
        &self.gates[t * 4 * h + g * h..t * 4 * h + (g + 1) * h]
    }
}

/// Runs the recurrence from `h_0 = c_0 = 0`.
pub fn lstm_sequence(inputs: &[f64], input: usize, weights: LstmWeights<'_>) -> LstmTrace {
    let hidden = weights.b[0].len();
    let steps = inputs.len().checked_div(input).unwrap_or(0);
    let mut gates = vec![0.0; steps * 4 * hidden];
    let mut c = vec![0.0; steps * hidden];
    let mut h = vec![0.0; steps * hidden];
    let zeros = vec![0.0; hidden];
    for t in 0..steps {
        let s = &inputs[t * input..(t + 1) * input];
        let (h_prev, c_prev): (Vec<f64>, Vec<f64>) = if t == 0 {
            (zeros.clone(), zeros.clone())
        } else {
            (
                h[(t - 1) * hidden..t * hidden].to_vec(),
                c[(t - 1) * hidden..t * hidden].to_vec(),
            )
        };
        let g = &mut gates[t * 4 * hidden..(t + 1) * 4 * hidden];
        for k in 0..4 {
            let pre = &mut g[k * hidden..(k + 1) * hidden];
            pre.copy_from_slice(weights.b[k]);
            matvec_add(weights.w[k], s, pre);
            matvec_add(weights.u[k], &h_prev, pre);
            for x in pre.iter_mut() {
                *x = if k == 2 { x.tanh() } else { sigmoid(*x) };
            }
        }
        for j in 0..hidden {
            let (i_t, f_t, g_t, o_t) = (g[j], g[hidden + j], g[2 * hidden + j], g[3 * hidden + j]);
            let c_t = i_t * g_t + f_t * c_prev[j];
            c[t * hidden + j] = c_t;
            h[t * hidden + j] = o_t * c_t.tanh();
        }
    }
    LstmTrace {
        input,
        hidden,
        gates,
        c,
        h,
    }
}

/// Gradient buffers for the LSTM parameters, same layout as [`LstmWeights`].
pub struct LstmGrads<'a> {
    pub w: [&'a mut [f64]; 4],
    pub u: [&'a mut [f64]; 4],
    pub b: [&'a mut [f64]; 4],
}

/// Backpropagation through time; `dh` is the external gradient on every
/// `h_t`. Returns the gradient on the inputs.
pub fn lstm_backward(
    inputs: &[f64],
    trace: &LstmTrace,
    dh: &[f64],
    weights: LstmWeights<'_>,
    grads: &mut LstmGrads<'_>,
) -> Vec<f64> {
    let (input, hidden) = (trace.input, trace.hidden);
    let steps = trace.steps();
    let mut ds = vec![0.0; inputs.len()];
    let mut dh_next = vec![0.0; hidden];
    let mut dc_next = vec![0.0; hidden];
    let mut dpre = vec![vec![0.0; hidden]; 4];
    let zeros = vec![0.0; hidden];
    for t in (0..steps).rev() {
        let c_t = &trace.c[t * hidden..(t + 1) * hidden];
        let c_prev = if t == 0 {
            &zeros[..]
        } else {
            &trace.c[(t - 1) * hidden..t * hidden]
        };
        let h_prev = if t == 0 {
            &zeros[..]
        } else {
            &trace.h[(t - 1) * hidden..t * hidden]
        };
        let (gi, gf, gc, go) = (
            trace.gate(t, 0),
            trace.gate(t, 1),
            trace.gate(t, 2),
            trace.gate(t, 3),
        );
        for j in 0..hidden {
            let dh_j = dh[t * hidden + j] + dh_next[j];
            let tc = c_t[j].tanh();
            let d_o = dh_j * tc;
            let dc = dh_j * go[j] * (1.0 - tc * tc) + dc_next[j];
            let d_i = dc * gc[j];
            let d_g = dc * gi[j];
            let d_f = dc * c_prev[j];
            dc_next[j] = dc * gf[j];
            dpre[0][j] = d_i * gi[j] * (1.0 - gi[j]);
            dpre[1][j] = d_f * gf[j] * (1.0 - gf[j]);
            dpre[2][j] = d_g * (1.0 - gc[j] * gc[j]);
            dpre[3][j] = d_o * go[j] * (1.0 - go[j]);
        }
        let s = &inputs[t * input..(t + 1) * input];
        dh_next.fill(0.0);
        let ds_t = &mut ds[t * input..(t + 1) * input];
        for (k, d) in dpre.iter().enumerate() {
            outer_add(grads.w[k], d, s);
            outer_add(grads.u[k], d, h_prev);
            axpy(1.0, d, grads.b[k]);
            matvec_t_add(weights.w[k], d, ds_t);
            matvec_t_add(weights.u[k], d, &mut dh_next);
        }
    }
    ds
}
