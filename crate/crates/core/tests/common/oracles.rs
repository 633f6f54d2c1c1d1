use paes_core::neural::{
    batch_gradients, dropout_mask, forward, ids, init_params, mse, Example, ModelDims, ParamSet,
    DROPOUT_RATE,
};
use paes_core::text_prep::EssayTensor;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn tiny_dims(window: usize) -> ModelDims {
    ModelDims {
        vocab: 10,
        embedding: 4,
        filters: 3,
        window,
        hidden: 5,
        features: 6,
        encoder: true,
    }
}

/// Perturbs every parameter a little so biases are non-zero too.
pub fn jitter(p: &mut ParamSet, rng: &mut ChaCha8Rng) {
    for (id, g) in p.groups.iter_mut().enumerate() {
        for (k, x) in g.data.iter_mut().enumerate() {
            if id == ids::EMBEDDING && k < 4 {
                continue;
            }
            *x += rng.random_range(-0.3..0.3);
        }
    }
}

pub fn loss(p: &ParamSet, examples: &[Example<'_>], masks: Option<&[Vec<f64>]>) -> f64 {
    let preds: Vec<f64> = examples
        .iter()
        .enumerate()
        .map(|(i, e)| {
            forward(p, e.essay, e.features, masks.map(|m| m[i].as_slice()))
                .unwrap()
                .y_hat
        })
        .collect();
    let targets: Vec<f64> = examples.iter().map(|e| e.target).collect();
    mse(&targets, &preds).unwrap()
}

/// Largest group-wise relative error `|a - n| / max(|a| + |n|, 1e-12)`.
pub fn gradient_check(seed: u64, dropout: bool) -> Vec<(String, f64)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let dims = tiny_dims(5);
    let mut p = init_params(dims, seed);
    jitter(&mut p, &mut rng);
    let essays: Vec<EssayTensor> = (0..2)
        .map(|_| {
            let rows: Vec<Vec<u32>> = (0..2)
                .map(|_| {
                    (0..rng.random_range(2..=4))
                        .map(|_| rng.random_range(1..10))
                        .collect()
                })
                .collect();
            EssayTensor::from_rows(&rows, 2, 4)
        })
        .collect();
    let feats: Vec<Vec<f64>> = (0..2)
        .map(|_| (0..6).map(|_| rng.random::<f64>()).collect())
        .collect();
    let examples: Vec<Example<'_>> = (0..2)
        .map(|i| Example {
            essay: &essays[i],
            features: &feats[i],
            target: rng.random(),
        })
        .collect();
    let masks: Option<Vec<Vec<f64>>> = dropout.then(|| {
        (0..2)
            .map(|_| dropout_mask(&mut rng, 5, DROPOUT_RATE))
            .collect()
    });
    let (_, grads) = batch_gradients(&p, &examples, masks.as_deref()).unwrap();

    let h = 1e-5;
    let mut report = Vec::new();
    for gid in 0..p.groups.len() {
        let mut diff = 0.0f64;
        let mut scale = 0.0f64;
        for k in 0..p.groups[gid].data.len() {
            let orig = p.groups[gid].data[k];
            p.groups[gid].data[k] = orig + h;
            let up = loss(&p, &examples, masks.as_deref());
            p.groups[gid].data[k] = orig - h;
            let down = loss(&p, &examples, masks.as_deref());
            p.groups[gid].data[k] = orig;
            let numeric = (up - down) / (2.0 * h);
            let analytic = grads.groups[gid].data[k];
            diff = diff.max((analytic - numeric).abs());
            scale = scale.max(analytic.abs() + numeric.abs());
        }
        report.push((p.groups[gid].name.clone(), diff / scale.max(1e-12)));
    }
    report
}

pub fn sig(x: f64) -> f64 {
    1.0 / (1.0 + (-x).exp())
}

/// Micro-network evaluated by the model and by hand: `(quantity, model, reference)`.
pub fn forward_reference() -> Vec<(&'static str, f64, f64)> {
    // vocab 4, embedding 2, 1 filter of width 3, hidden 1, 1 feature.
    let dims = ModelDims {
        vocab: 4,
        embedding: 2,
        filters: 1,
        window: 3,
        hidden: 1,
        features: 1,
        encoder: true,
    };
    let mut p = ParamSet::zeros(dims);
    p.get_mut(ids::EMBEDDING)
        .copy_from_slice(&[0.0, 0.0, 0.0, 0.0, 0.5, -0.25, 1.0, 0.75]);
    p.get_mut(ids::W_Z)
        .copy_from_slice(&[0.2, -0.1, 0.4, 0.3, -0.5, 0.6]);
    p.get_mut(ids::B_Z)[0] = 0.05;
    p.get_mut(ids::W_M)[0] = 0.9;
    p.get_mut(ids::B_M)[0] = -0.1;
    p.get_mut(ids::W_U)[0] = 1.3;
    let lstm = [
        (0.7, 0.2, 0.1),
        (-0.4, 0.5, 1.0),
        (1.1, -0.3, 0.0),
        (0.6, 0.8, -0.2),
    ];
    for (k, (w, u, b)) in lstm.iter().enumerate() {
        p.get_mut(ids::LSTM_W[k])[0] = *w;
        p.get_mut(ids::LSTM_U[k])[0] = *u;
        p.get_mut(ids::LSTM_B[k])[0] = *b;
    }
    p.get_mut(ids::W_A)[0] = -0.7;
    p.get_mut(ids::B_A)[0] = 0.2;
    p.get_mut(ids::W_ALPHA)[0] = 2.0;
    p.get_mut(ids::W_Y).copy_from_slice(&[1.5, -0.8]);
    p.get_mut(ids::B_Y)[0] = 0.1;

    // Sentence 1 = tokens [2, 3], sentence 2 = [3].
    let essay = EssayTensor::from_rows(&[vec![2, 3], vec![3]], 3, 4);
    let feature = 0.4;
    let t = forward(&p, &essay, &[feature], None).unwrap();

    let e2 = [0.5, -0.25];
    let e3 = [1.0, 0.75];
    let w = [0.2, -0.1, 0.4, 0.3, -0.5, 0.6];
    let relu = |v: f64| v.max(0.0);
    // Window [prev, cur, next], zero outside the sentence.
    let z11 = relu(w[2] * e2[0] + w[3] * e2[1] + w[4] * e3[0] + w[5] * e3[1] + 0.05);
    let z12 = relu(w[0] * e2[0] + w[1] * e2[1] + w[2] * e3[0] + w[3] * e3[1] + 0.05);
    let z21 = relu(w[2] * e3[0] + w[3] * e3[1] + 0.05);
    let m11 = (0.9 * z11 - 0.1).tanh();
    let m12 = (0.9 * z12 - 0.1).tanh();
    let u11 = (1.3 * m11).exp() / ((1.3 * m11).exp() + (1.3 * m12).exp());
    let u12 = 1.0 - u11;
    let s1 = u11 * z11 + u12 * z12;
    let s2 = z21;

    let i1 = sig(0.7 * s1 + 0.1);
    let f1 = sig(-0.4 * s1 + 1.0);
    let g1 = (1.1 * s1).tanh();
    let o1 = sig(0.6 * s1 - 0.2);
    let c1 = i1 * g1 + f1 * 0.0;
    let h1 = o1 * c1.tanh();
    let i2 = sig(0.7 * s2 + 0.2 * h1 + 0.1);
    let f2 = sig(-0.4 * s2 + 0.5 * h1 + 1.0);
    let g2 = (1.1 * s2 - 0.3 * h1).tanh();
    let o2 = sig(0.6 * s2 + 0.8 * h1 - 0.2);
    let c2 = i2 * g2 + f2 * c1;
    let h2 = o2 * c2.tanh();

    let a1 = (-0.7 * h1 + 0.2).tanh();
    let a2 = (-0.7 * h2 + 0.2).tanh();
    let al1 = (2.0 * a1).exp() / ((2.0 * a1).exp() + (2.0 * a2).exp());
    let o = al1 * h1 + (1.0 - al1) * h2;
    let y = sig(1.5 * o - 0.8 * feature + 0.1);

    vec![
        ("s_1", t.s[0], s1),
        ("s_2", t.s[1], s2),
        ("h_2", t.lstm.h[1], h2),
        ("o", t.o[0], o),
        ("y_hat", t.y_hat, y),
    ]
}
