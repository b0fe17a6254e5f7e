//! Residual loss and the full-batch training loop.
//!
//! The residual of `y' + 2y = 0` at a collocation point is
//! `r = dŷ/dx + 2ŷ` and the loss is the mean of `r²` over the grid. There is
//! no initial-condition term: the ansatz satisfies `ŷ(0) = 1` for every
//! parameter value.

use alloc::vec::Vec;

use crate::features::{build_feature_matrix, make_grid, probability_derivative, FeatureMatrix, Grid, Standardizer};
use crate::nn::{self, AnsatzOutput, MlpParams, NetworkInput};
use crate::optim::{adam_step, AdamConfig, AdamState};
use crate::qsim::{born_probabilities, circuit_state};
use crate::{Error, Result};

/// Decay coefficient `k` in `y' + k·y = 0`.
pub const DECAY_RATE: f64 = 2.0;

/// How `dŷ/dx` treats the `x`-dependence of the features.
///
/// Only [`DerivativeMode::AnalyticDiff`] differentiates the function that is
/// actually evaluated, `x ↦ 1 + x·g(x, q(x))`. Under
/// [`DerivativeMode::Frozen`] the loss constrains `∂g/∂x` at fixed `q` only,
/// which the network can satisfy while routing the true `x`-dependence through
/// the features; the loss then goes to zero without the curve solving the ODE.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DerivativeMode {
    /// Features are constant inputs: `dq/dx = 0`.
    Frozen,
    /// Chain rule through the exact probabilities and the `1/sigma` scaling.
    /// With sampled features the tangent is still the exact derivative.
    #[default]
    AnalyticDiff,
}

impl DerivativeMode {
    /// Name used on the command line and in config files.
    pub fn as_str(&self) -> &'static str {
        match self {
            Self::Frozen => "frozen",
            Self::AnalyticDiff => "analytic-diff",
        }
    }
}

impl core::str::FromStr for DerivativeMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "frozen" => Ok(Self::Frozen),
            "analytic-diff" => Ok(Self::AnalyticDiff),
            _ => Err(Error::InvalidConfig("derivative mode must be 'frozen' or 'analytic-diff'")),
        }
    }
}

/// Everything `train` needs.
#[derive(Debug, Clone, PartialEq)]
pub struct TrainConfig {
    /// Number of full-batch Adam updates.
    pub epochs: usize,
    /// Optimizer settings.
    pub adam: AdamConfig,
    /// Treatment of `dq/dx` in the residual.
    pub derivative_mode: DerivativeMode,
    /// Seeds weight initialization and feature sampling.
    pub seed: u64,
    /// Number of collocation points.
    pub grid_size: usize,
    /// Shots per point; 0 means exact probabilities.
    pub shots: u64,
    /// Hidden layer widths.
    pub hidden_sizes: Vec<usize>,
}

impl Default for TrainConfig {
    fn default() -> Self {
        Self {
            epochs: 5000,
            adam: AdamConfig::default(),
            derivative_mode: DerivativeMode::AnalyticDiff,
            seed: 0,
            grid_size: 64,
            shots: 0,
            hidden_sizes: alloc::vec![32, 32],
        }
    }
}

impl TrainConfig {
    /// Rejects settings `train` cannot run with.
    pub fn validate(&self) -> Result<()> {
        if self.epochs == 0 {
            return Err(Error::InvalidConfig("epochs must be positive"));
        }
        if self.grid_size < 2 {
            return Err(Error::GridTooSmall(self.grid_size));
        }
        if self.hidden_sizes.contains(&0) {
            return Err(Error::InvalidLayerSizes("layer widths must be positive"));
        }
        self.adam.validate()
    }

    /// Seed of the weight initializer. Kept apart from the feature seed so
    /// that changing `shots` does not change the initial weights.
    pub fn init_seed(&self) -> u64 {
        crate::rng::derive_seed(self.seed, u64::MAX)
    }
}

/// `r = dŷ/dx + 2ŷ` from ansatz outputs.
pub fn residual_of(out: AnsatzOutput) -> f64 {
    out.dy_dx + DECAY_RATE * out.y
}

/// ODE residual of the ansatz at one collocation input.
pub fn residual(params: &MlpParams, input: &NetworkInput) -> f64 {
    residual_of(nn::ansatz(params, input))
}

/// Mean squared residual over `batch`.
pub fn ode_loss(params: &MlpParams, batch: &[NetworkInput]) -> Result<f64> {
    if batch.is_empty() {
        return Err(Error::EmptyBatch);
    }
    let sum: f64 = batch.iter().map(|i| {
        let r = residual(params, i);
        r * r
    }).sum();
    Ok(sum / batch.len() as f64)
}

/// Network inputs for the rows of `features`.
///
/// In [`DerivativeMode::AnalyticDiff`] the tangent is the exact probability
/// derivative divided by the column sigma.
pub fn collocation_inputs(grid: &Grid, features: &FeatureMatrix, mode: DerivativeMode) -> Vec<NetworkInput> {
    grid.points()
        .iter()
        .zip(&features.standardized)
        .map(|(&x, q)| feature_input(x, *q, &features.stats, mode))
        .collect()
}

fn feature_input(x: f64, q: [f64; 4], stats: &Standardizer, mode: DerivativeMode) -> NetworkInput {
    match mode {
        DerivativeMode::Frozen => NetworkInput::frozen(x, q),
        DerivativeMode::AnalyticDiff => {
            NetworkInput::with_tangent(x, q, stats.scale_derivative(&probability_derivative(x)))
        }
    }
}

/// Trained network plus the frozen feature transform it was trained with.
#[derive(Debug, Clone, PartialEq)]
pub struct TrainedModel {
    /// Network parameters.
    pub params: MlpParams,
    /// Training-grid feature statistics.
    pub stats: Standardizer,
    /// Derivative mode used in training.
    pub mode: DerivativeMode,
}

impl TrainedModel {
    /// Network input at an arbitrary `x`, using exact features and the
    /// training statistics.
    pub fn input_at(&self, x: f64) -> NetworkInput {
        let raw = born_probabilities(&circuit_state(x));
        feature_input(x, self.stats.apply(raw.as_array()), &self.stats, self.mode)
    }

    /// `ŷ(x)` and `dŷ/dx`.
    pub fn evaluate(&self, x: f64) -> AnsatzOutput {
        nn::ansatz(&self.params, &self.input_at(x))
    }

    /// `ŷ(x)`.
    pub fn predict(&self, x: f64) -> f64 {
        self.evaluate(x).y
    }
}

/// Outcome of a training run.
#[derive(Debug, Clone, PartialEq)]
pub struct TrainReport {
    /// Loss at the start of each epoch, before its update.
    pub loss_history: Vec<f64>,
    /// Loss after the last update.
    pub final_loss: f64,
    /// Final parameters with the feature transform.
    pub model: TrainedModel,
    /// Collocation grid.
    pub grid: Grid,
    /// Training features.
    pub features: FeatureMatrix,
}

impl TrainReport {
    /// Final network parameters.
    pub fn final_params(&self) -> &MlpParams {
        &self.model.params
    }
}

/// Full-batch Adam on the residual loss.
///
/// Builds the grid and features (sampled once when `shots > 0`), initializes
/// the network, and runs `epochs` updates. Deterministic in `config`. Aborts
/// with [`Error::Diverged`] on a non-finite loss.
pub fn train(config: &TrainConfig) -> Result<TrainReport> {
    config.validate()?;
    let grid = make_grid(config.grid_size)?;
    let features = build_feature_matrix(&grid, config.shots, config.seed)?;
    let params = nn::init_params(&nn::layer_sizes(&config.hidden_sizes), config.init_seed())?;
    train_from(config, grid, features, params)
}

/// Training loop from explicit grid, features and initial parameters.
pub fn train_from(
    config: &TrainConfig,
    grid: Grid,
    features: FeatureMatrix,
    mut params: MlpParams,
) -> Result<TrainReport> {
    config.validate()?;
    if features.rows() != grid.len() {
        return Err(Error::LengthMismatch {
            expected: grid.len(),
            got: features.rows(),
        });
    }
    let batch = collocation_inputs(&grid, &features, config.derivative_mode);
    let mut state = AdamState::new(&params);
    let mut loss_history = Vec::with_capacity(config.epochs);
    for epoch in 0..config.epochs {
        let (loss, grad) = nn::loss_and_gradient(&params, &batch)?;
        if !loss.is_finite() {
            return Err(Error::Diverged { epoch, loss });
        }
        loss_history.push(loss);
        adam_step(&mut params, &grad, &mut state, &config.adam)?;
    }
    let final_loss = ode_loss(&params, &batch)?;
    if !final_loss.is_finite() {
        return Err(Error::Diverged {
            epoch: config.epochs,
            loss: final_loss,
        });
    }
    Ok(TrainReport {
        loss_history,
        final_loss,
        model: TrainedModel {
            params,
            stats: features.stats,
            mode: config.derivative_mode,
        },
        grid,
        features,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nn::layer_sizes;

    #[test]
    fn exact_solution_has_zero_residual() {
        for &x in &[0.0, 0.3, 1.0] {
            let y = libm::exp(-2.0 * x);
            assert_eq!(residual_of(AnsatzOutput { y, dy_dx: -2.0 * y }), 0.0);
        }
    }

    #[test]
    fn zero_network_residual_and_loss() {
        let p = MlpParams::zeros(&layer_sizes(&[4])).unwrap();
        let batch: Vec<_> = (0..7).map(|i| NetworkInput::frozen(i as f64 / 6.0, [0.5; 4])).collect();
        for input in &batch {
            assert_eq!(residual(&p, input), 2.0);
        }
        assert_eq!(ode_loss(&p, &batch).unwrap(), 4.0);
        assert_eq!(ode_loss(&p, &[]), Err(Error::EmptyBatch));
    }

    #[test]
    fn hand_set_unit_residual() {
        let mut p = MlpParams::zeros(&[5, 1, 1]).unwrap();
        p.weights_mut(0)[0] = 0.8;
        p.biases_mut(0)[0] = -0.1;
        p.weights_mut(1)[0] = -1.5;
        let x: f64 = 0.4;
        let h = (0.8 * x - 0.1).tanh();
        let g = -1.5 * h;
        let dg = -1.5 * (1.0 - h * h) * 0.8;
        let expected = (g + x * dg) + 2.0 * (1.0 + x * g);
        let r = residual(&p, &NetworkInput::frozen(x, [0.0; 4]));
        assert!((r - expected).abs() < 1e-15);
        let loss = ode_loss(&p, &[NetworkInput::frozen(x, [0.0; 4])]).unwrap();
        assert_eq!(loss, r * r);
    }

    #[test]
    fn loss_ignores_batch_order() {
        let p = nn::init_params(&layer_sizes(&[6]), 2).unwrap();
        let mut batch: Vec<_> = (0..9)
            .map(|i| NetworkInput::frozen(i as f64 / 8.0, [0.1 * i as f64, 0.0, -0.3, 0.2]))
            .collect();
        let a = ode_loss(&p, &batch).unwrap();
        batch.reverse();
        let b = ode_loss(&p, &batch).unwrap();
        assert!((a - b).abs() <= 1e-15 * a);
    }

    #[test]
    fn config_validation() {
        assert!(TrainConfig::default().validate().is_ok());
        let bad = [
            TrainConfig { epochs: 0, ..Default::default() },
            TrainConfig { grid_size: 1, ..Default::default() },
            TrainConfig { hidden_sizes: alloc::vec![4, 0], ..Default::default() },
        ];
        for c in bad {
            assert!(c.validate().is_err());
            assert!(train(&c).is_err());
        }
    }

    #[test]
    fn mode_names_round_trip() {
        for m in [DerivativeMode::Frozen, DerivativeMode::AnalyticDiff] {
            assert_eq!(m.as_str().parse::<DerivativeMode>().unwrap(), m);
        }
        assert!("chain".parse::<DerivativeMode>().is_err());
    }

    #[test]
    fn short_run_is_deterministic_and_decreasing() {
        let cfg = TrainConfig {
            epochs: 200,
            grid_size: 16,
            hidden_sizes: alloc::vec![8],
            ..Default::default()
        };
        let a = train(&cfg).unwrap();
        let b = train(&cfg).unwrap();
        assert_eq!(a.loss_history, b.loss_history);
        assert_eq!(a.model, b.model);
        assert_eq!(a.loss_history.len(), 200);
        assert!(a.loss_history.iter().all(|&l| l >= 0.0));
        assert!(a.final_loss < a.loss_history[0]);
    }

    #[test]
    fn divergence_is_reported() {
        let cfg = TrainConfig {
            epochs: 3,
            grid_size: 4,
            hidden_sizes: alloc::vec![2],
            ..Default::default()
        };
        let grid = make_grid(4).unwrap();
        let features = build_feature_matrix(&grid, 0, 0).unwrap();
        let mut params = MlpParams::zeros(&layer_sizes(&[2])).unwrap();
        params.biases_mut(1)[0] = 1e300;
        params.weights_mut(1)[0] = 1e300;
        params.as_mut_slice()[0] = 1.0;
        let err = train_from(&cfg, grid, features, params).unwrap_err();
        assert!(matches!(err, Error::Diverged { epoch: 0, .. }));
    }
}
