//! Adam with bias correction.

use crate::nn::MlpParams;
use crate::{Error, Result};

/// Adam hyperparameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AdamConfig {
    /// Step size `η`.
    pub learning_rate: f64,
    /// First-moment decay `β₁`.
    pub beta1: f64,
    /// Second-moment decay `β₂`.
    pub beta2: f64,
    /// Denominator offset `ε`.
    pub epsilon: f64,
}

impl Default for AdamConfig {
    fn default() -> Self {
        Self {
            learning_rate: 1e-2,
            beta1: 0.9,
            beta2: 0.999,
            epsilon: 1e-8,
        }
    }
}

impl AdamConfig {
    /// Checks `η > 0`, `β ∈ [0, 1)`, `ε > 0`.
    pub fn validate(&self) -> Result<()> {
        if !(self.learning_rate > 0.0 && self.learning_rate.is_finite()) {
            return Err(Error::InvalidConfig("learning rate must be positive"));
        }
        if !(0.0..1.0).contains(&self.beta1) || !(0.0..1.0).contains(&self.beta2) {
            return Err(Error::InvalidConfig("beta1 and beta2 must lie in [0, 1)"));
        }
        if !(self.epsilon > 0.0 && self.epsilon.is_finite()) {
            return Err(Error::InvalidConfig("epsilon must be positive"));
        }
        Ok(())
    }
}

/// Moment buffers and step counter.
#[derive(Debug, Clone, PartialEq)]
pub struct AdamState {
    /// First moment.
    pub m: MlpParams,
    /// Second moment; never negative.
    pub v: MlpParams,
    /// Number of completed updates.
    pub step: u64,
}

impl AdamState {
    /// Zeroed state shaped like `params`.
    pub fn new(params: &MlpParams) -> Self {
        Self {
            m: params.zeros_like(),
            v: params.zeros_like(),
            step: 0,
        }
    }
}

/// One Adam update:
///
/// ```text
/// m ← β₁m + (1-β₁)g        v ← β₂v + (1-β₂)g²
/// m̂ = m / (1-β₁^t)         v̂ = v / (1-β₂^t)
/// θ ← θ - η·m̂ / (√v̂ + ε)
/// ```
///
/// where `t` is the step count after incrementing.
pub fn adam_step(
    params: &mut MlpParams,
    grads: &MlpParams,
    state: &mut AdamState,
    config: &AdamConfig,
) -> Result<()> {
    if grads.layer_sizes() != params.layer_sizes() || state.m.layer_sizes() != params.layer_sizes() {
        return Err(Error::LengthMismatch {
            expected: params.len(),
            got: grads.len(),
        });
    }
    state.step += 1;
    let t = state.step as f64;
    let c1 = 1.0 - libm::pow(config.beta1, t);
    let c2 = 1.0 - libm::pow(config.beta2, t);
    let (b1, b2) = (config.beta1, config.beta2);
    let theta = params.as_mut_slice();
    let m = state.m.as_mut_slice();
    let v = state.v.as_mut_slice();
    for (i, g) in grads.as_slice().iter().enumerate() {
        m[i] = b1 * m[i] + (1.0 - b1) * g;
        v[i] = b2 * v[i] + (1.0 - b2) * g * g;
        let m_hat = m[i] / c1;
        let v_hat = v[i] / c2;
        theta[i] -= config.learning_rate * m_hat / (libm::sqrt(v_hat) + config.epsilon);
    }
    Ok(())
}
