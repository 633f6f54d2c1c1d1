//! Dense row-major helpers.

#[inline]
pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    let mut acc = [0.0f64; 4];
    let chunks = a.len() / 4;
    for k in 0..chunks {
        let i = 4 * k;
        acc[0] += a[i] * b[i];
        acc[1] += a[i + 1] * b[i + 1];
        acc[2] += a[i + 2] * b[i + 2];
        acc[3] += a[i + 3] * b[i + 3];
    }
    let mut tail = 0.0;
    for i in 4 * chunks..a.len() {
        tail += a[i] * b[i];
    }
    (acc[0] + acc[1]) + (acc[2] + acc[3]) + tail
}

/// `out += W x` for `W` of shape `[out.len() x x.len()]`.
#[inline]
pub fn matvec_add(w: &[f64], x: &[f64], out: &mut [f64]) {
    let cols = x.len();
    debug_assert_eq!(w.len(), out.len() * cols);
    for (r, o) in out.iter_mut().enumerate() {
        *o += dot(&w[r * cols..(r + 1) * cols], x);
    }
}

/// `dx += W^T dy`.
#[inline]
pub fn matvec_t_add(w: &[f64], dy: &[f64], dx: &mut [f64]) {
    let cols = dx.len();
    debug_assert_eq!(w.len(), dy.len() * cols);
    for (r, g) in dy.iter().enumerate() {
        if *g == 0.0 {
            continue;
        }
        axpy(*g, &w[r * cols..(r + 1) * cols], dx);
    }
}

/// `dW += dy x^T`.
#[inline]
pub fn outer_add(dw: &mut [f64], dy: &[f64], x: &[f64]) {
    let cols = x.len();
    debug_assert_eq!(dw.len(), dy.len() * cols);
    for (r, g) in dy.iter().enumerate() {
        if *g == 0.0 {
            continue;
        }
        axpy(*g, x, &mut dw[r * cols..(r + 1) * cols]);
    }
}

/// `y += a x`.
#[inline]
pub fn axpy(a: f64, x: &[f64], y: &mut [f64]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += a * xi;
    }
}

#[inline]
pub fn sigmoid(x: f64) -> f64 {
    if x >= 0.0 {
        1.0 / (1.0 + (-x).exp())
    } else {
        let e = x.exp();
        e / (1.0 + e)
    }
}

/// Softmax with max subtraction; empty input gives an empty output.
pub fn softmax(scores: &[f64]) -> Vec<f64> {
    let max = scores.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let exps: Vec<f64> = scores.iter().map(|s| (s - max).exp()).collect();
    let sum: f64 = exps.iter().sum();
    exps.into_iter().map(|e| e / sum).collect()
}
