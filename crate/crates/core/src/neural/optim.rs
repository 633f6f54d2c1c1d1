use super::params::ParamSet;
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct RmsProp {
    pub learning_rate: f64,
    pub rho: f64,
    pub epsilon: f64,
    /// Running mean of squared gradients, shaped like the parameters.
    pub accumulators: ParamSet,
}

pub type OptimizerState = RmsProp;

impl RmsProp {
    pub const LEARNING_RATE: f64 = 0.001;
    pub const RHO: f64 = 0.9;
    pub const EPSILON: f64 = 1e-7;

    pub fn new(params: &ParamSet) -> Self {
        Self::with_hyper(params, Self::LEARNING_RATE, Self::RHO, Self::EPSILON)
    }

    pub fn with_hyper(params: &ParamSet, learning_rate: f64, rho: f64, epsilon: f64) -> Self {
        RmsProp {
            learning_rate,
            rho,
            epsilon,
            accumulators: params.zeros_like(),
        }
    }

    /// `acc <- rho acc + (1 - rho) g^2; theta <- theta - lr g / (sqrt(acc) + eps)`.
    ///
    /// Nothing is modified when any gradient is non-finite.
    pub fn step(&mut self, params: &mut ParamSet, grads: &ParamSet) -> Result<()> {
        params.check_layout(grads)?;
        params.check_layout(&self.accumulators)?;
        for g in &grads.groups {
            if g.data.iter().any(|x| !x.is_finite()) {
                return Err(Error::NonFiniteGradient(g.name.clone()));
            }
        }
        let (lr, rho, eps) = (self.learning_rate, self.rho, self.epsilon);
        for ((p, g), acc) in params
            .groups
            .iter_mut()
            .zip(&grads.groups)
            .zip(&mut self.accumulators.groups)
        {
            for ((theta, grad), a) in p.data.iter_mut().zip(&g.data).zip(acc.data.iter_mut()) {
                *a = rho * *a + (1.0 - rho) * grad * grad;
                *theta -= lr * grad / (a.sqrt() + eps);
            }
        }
        Ok(())
    }
}

/// Rescales `grads` so their global L2 norm is at most `max_norm`; returns
/// the norm before clipping.
pub fn clip_global_norm(grads: &mut ParamSet, max_norm: f64) -> f64 {
    let norm = grads.l2_norm();
    if norm > max_norm && norm.is_finite() {
        grads.scale(max_norm / norm);
    }
    norm
}
