//! Quantum feature generation over a collocation grid.
//!
//! Each grid point `x_i` is encoded as `t = x_i`, the circuit is measured
//! (exactly, or with `shots` samples), and the resulting probability rows are
//! standardized column by column. Column statistics use the population
//! convention (divide by `N`); a column whose deviation falls below
//! [`SIGMA_FLOOR`] keeps `sigma = 1` and is only mean-centred.

use alloc::vec::Vec;

use crate::qsim::{born_probabilities, circuit_state, sample_counts, ProbVector};
use crate::{rng, Error, Result};

/// Columns with a standard deviation below this are not rescaled.
pub const SIGMA_FLOOR: f64 = 1e-8;

/// Width of a feature row.
pub const N_FEATURES: usize = 4;

/// Strictly increasing collocation points in `[0, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    xs: Vec<f64>,
}

impl Grid {
    /// Validates `xs`: at least two points, strictly increasing, within `[0, 1]`.
    pub fn new(xs: Vec<f64>) -> Result<Self> {
        if xs.len() < 2 {
            return Err(Error::GridTooSmall(xs.len()));
        }
        if xs.iter().any(|x| !(0.0..=1.0).contains(x)) {
            return Err(Error::InvalidGrid("points must lie in [0, 1]"));
        }
        if xs.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidGrid("points must be strictly increasing"));
        }
        Ok(Self { xs })
    }

    /// Points of the grid.
    pub fn points(&self) -> &[f64] {
        &self.xs
    }

    /// Number of points.
    pub fn len(&self) -> usize {
        self.xs.len()
    }

    /// Always false; a grid has at least two points.
    pub fn is_empty(&self) -> bool {
        self.xs.is_empty()
    }
}

/// `n` uniformly spaced points from 0 to 1 inclusive.
pub fn make_grid(n: usize) -> Result<Grid> {
    if n < 2 {
        return Err(Error::GridTooSmall(n));
    }
    let step = (n - 1) as f64;
    let xs = (0..n).map(|i| i as f64 / step).collect();
    Grid::new(xs)
}

/// Feature vector of one point: exact Born probabilities when `shots == 0`,
/// otherwise relative frequencies of `shots` samples.
pub fn quantum_features(t: f64, shots: u64, seed: u64) -> Result<ProbVector> {
    let exact = born_probabilities(&circuit_state(t));
    if shots == 0 {
        return Ok(exact);
    }
    ProbVector::from_counts(&sample_counts(&exact, shots, seed)?)
}

/// Seed used to sample grid point `index` under the global `seed`.
pub fn point_seed(seed: u64, index: usize) -> u64 {
    rng::derive_seed(seed, index as u64)
}

/// Frozen per-column affine transform `(q - mu) / sigma`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Standardizer {
    /// Column means.
    pub mu: [f64; N_FEATURES],
    /// Column standard deviations after the floor rule.
    pub sigma: [f64; N_FEATURES],
}

impl Standardizer {
    /// Population mean and standard deviation of each column of `rows`.
    pub fn fit(rows: &[[f64; N_FEATURES]]) -> Result<Self> {
        if rows.is_empty() {
            return Err(Error::EmptyBatch);
        }
        let n = rows.len() as f64;
        let mut mu = [0.0; N_FEATURES];
        for row in rows {
            for (m, v) in mu.iter_mut().zip(row) {
                *m += v;
            }
        }
        mu.iter_mut().for_each(|m| *m /= n);
        let mut var = [0.0; N_FEATURES];
        for row in rows {
            for j in 0..N_FEATURES {
                let d = row[j] - mu[j];
                var[j] += d * d;
            }
        }
        let sigma = var.map(|v| {
            let s = libm::sqrt(v / n);
            if s < SIGMA_FLOOR {
                1.0
            } else {
                s
            }
        });
        Ok(Self { mu, sigma })
    }

    /// Standardizes one raw row.
    pub fn apply(&self, raw: &[f64; N_FEATURES]) -> [f64; N_FEATURES] {
        core::array::from_fn(|j| (raw[j] - self.mu[j]) / self.sigma[j])
    }

    /// Inverse of [`Self::apply`].
    pub fn invert(&self, standardized: &[f64; N_FEATURES]) -> [f64; N_FEATURES] {
        core::array::from_fn(|j| standardized[j] * self.sigma[j] + self.mu[j])
    }

    /// Scales a raw-feature derivative into standardized units (divides by sigma).
    pub fn scale_derivative(&self, d_raw: &[f64; N_FEATURES]) -> [f64; N_FEATURES] {
        core::array::from_fn(|j| d_raw[j] / self.sigma[j])
    }
}

/// Raw and standardized features of a grid.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureMatrix {
    /// Probability rows, one per grid point.
    pub raw: Vec<[f64; N_FEATURES]>,
    /// `(raw - mu) / sigma`.
    pub standardized: Vec<[f64; N_FEATURES]>,
    /// Statistics fitted on `raw`.
    pub stats: Standardizer,
}

impl FeatureMatrix {
    /// Number of rows.
    pub fn rows(&self) -> usize {
        self.raw.len()
    }
}

/// Builds the feature matrix of `grid`.
///
/// With `shots > 0`, point `i` is sampled with seed [`point_seed`]`(seed, i)`.
pub fn build_feature_matrix(grid: &Grid, shots: u64, seed: u64) -> Result<FeatureMatrix> {
    let raw = grid
        .points()
        .iter()
        .enumerate()
        .map(|(i, &x)| quantum_features(x, shots, point_seed(seed, i)).map(|p| *p.as_array()))
        .collect::<Result<Vec<_>>>()?;
    let stats = Standardizer::fit(&raw)?;
    let standardized = raw.iter().map(|r| stats.apply(r)).collect();
    Ok(FeatureMatrix {
        raw,
        standardized,
        stats,
    })
}

/// `d/dt` of the exact probabilities: `[-½sin2t, ½sin2t, -½sin2t, ½sin2t]`.
pub fn probability_derivative(t: f64) -> [f64; N_FEATURES] {
    let h = 0.5 * libm::sin(2.0 * t);
    [-h, h, -h, h]
}

/// Derivatives of the exact raw features at every grid point.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureDerivatives {
    /// One row per grid point.
    pub dq_dt: Vec<[f64; N_FEATURES]>,
}

/// Exact feature derivatives along `grid`.
pub fn feature_derivatives(grid: &Grid) -> FeatureDerivatives {
    FeatureDerivatives {
        dq_dt: grid.points().iter().map(|&t| probability_derivative(t)).collect(),
    }
}
