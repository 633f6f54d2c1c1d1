mod common;

use common::oracles::{forward_reference, gradient_check, jitter, sig, tiny_dims};
use paes_core::neural::{
    attention_pool_masked, backward, batch_gradients, forward, ids, init_params, Example, ModelDims,
};
use paes_core::text_prep::EssayTensor;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn gradients_match_finite_differences() {
    for (seed, dropout) in [(1, false), (2, true), (3, false)] {
        for (name, err) in gradient_check(seed, dropout) {
            assert!(
                err < 1e-4,
                "seed {seed} dropout {dropout}: {name} relative error {err:e}"
            );
        }
    }
}

#[test]
fn forward_matches_straight_line_reference() {
    for (name, got, want) in forward_reference() {
        assert!((got - want).abs() < 1e-12, "{name}: {got} vs {want}");
    }
}

#[test]
fn batch_loss_is_order_invariant() {
    let dims = tiny_dims(5);
    let p = init_params(dims, 8);
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let essays: Vec<EssayTensor> = (0..7)
        .map(|_| EssayTensor::from_rows(&[(0..3).map(|_| rng.random_range(2..10)).collect()], 2, 4))
        .collect();
    let feats: Vec<Vec<f64>> = (0..7)
        .map(|_| (0..6).map(|_| rng.random()).collect())
        .collect();
    let mut batch: Vec<Example<'_>> = (0..7)
        .map(|i| Example {
            essay: &essays[i],
            features: &feats[i],
            target: i as f64 / 7.0,
        })
        .collect();
    let (a, _) = batch_gradients(&p, &batch, None).unwrap();
    batch.reverse();
    let (b, _) = batch_gradients(&p, &batch, None).unwrap();
    assert!((a - b).abs() < 1e-12);
}

#[test]
fn features_only_model_is_logistic_regression() {
    let p = {
        let mut p = init_params(ModelDims::features_only(3), 1);
        p.get_mut(ids::W_Y).copy_from_slice(&[0.5, -1.0, 2.0]);
        p.get_mut(ids::B_Y)[0] = -0.3;
        p
    };
    let essay = EssayTensor::from_rows(&[vec![2, 3]], 1, 2);
    let t = forward(&p, &essay, &[0.2, 0.4, 0.6], None).unwrap();
    assert_eq!(t.y_hat, sig(0.1 - 0.4 + 1.2 - 0.3));
    let g = backward(&p, &t, 1.0);
    assert_eq!(g.num_scalars(), 4);
}

proptest! {
    #[test]
    fn attention_weights_are_a_distribution_over_the_mask(
        seed in any::<u64>(),
        n in 1usize..12,
        dim in 1usize..5,
    ) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let values: Vec<f64> = (0..n * dim).map(|_| rng.random_range(-3.0..3.0)).collect();
        let mut mask: Vec<bool> = (0..n).map(|_| rng.random_bool(0.6)).collect();
        mask[rng.random_range(0..n)] = true;
        let w: Vec<f64> = (0..dim * dim).map(|_| rng.random_range(-2.0..2.0)).collect();
        let b: Vec<f64> = (0..dim).map(|_| rng.random_range(-1.0..1.0)).collect();
        let u: Vec<f64> = (0..dim).map(|_| rng.random_range(-4.0..4.0)).collect();
        let (_, weights) = attention_pool_masked(&values, &mask, dim, &w, &b, &u);
        let sum: f64 = weights.iter().sum();
        prop_assert!((sum - 1.0).abs() < 1e-6);
        for (wt, m) in weights.iter().zip(&mask) {
            prop_assert!(*wt >= 0.0);
            if !m { prop_assert_eq!(*wt, 0.0); }
        }
    }

    #[test]
    fn prediction_stays_in_unit_interval(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut p = init_params(tiny_dims(5), seed);
        jitter(&mut p, &mut rng);
        let essay = EssayTensor::from_rows(&[vec![3, 4, 5], vec![9]], 2, 4);
        let f: Vec<f64> = (0..6).map(|_| rng.random()).collect();
        let y = forward(&p, &essay, &f, None).unwrap().y_hat;
        prop_assert!(y > 0.0 && y < 1.0);
    }
}
