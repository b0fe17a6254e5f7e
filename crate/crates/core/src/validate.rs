//! Reference solution, closed-form circuit statistics and error metrics.

use crate::features::make_grid;
use crate::pinn::{TrainedModel, DECAY_RATE};
use crate::Result;

/// `y(x) = e^{-2x}`.
pub fn exact_solution(x: f64) -> f64 {
    libm::exp(-DECAY_RATE * x)
}

/// `y'(x) = -2e^{-2x}`.
pub fn exact_derivative(x: f64) -> f64 {
    -DECAY_RATE * exact_solution(x)
}

/// `[½cos²t, ½sin²t, ½cos²t, ½sin²t]`, the circuit's outcome distribution.
pub fn closed_form_probabilities(t: f64) -> [f64; 4] {
    let c = libm::cos(t);
    let s = libm::sin(t);
    let (pc, ps) = (0.5 * c * c, 0.5 * s * s);
    [pc, ps, pc, ps]
}

/// Central difference `(f(x + h) - f(x - h)) / 2h`.
pub fn finite_difference_check(f: impl Fn(f64) -> f64, x: f64, step: f64) -> f64 {
    (f(x + step) - f(x - step)) / (2.0 * step)
}

/// Error of a prediction against `e^{-2x}` on a uniform grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErrorReport {
    /// `max |ŷ - y|`.
    pub max_abs_error: f64,
    /// Mean of `|ŷ - y|`.
    pub mean_abs_error: f64,
    /// Root mean square of `ŷ - y` over the grid points.
    pub l2_error: f64,
    /// Number of evaluation points.
    pub eval_points: usize,
}

/// Per-point comparison row.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolutionPoint {
    /// Evaluation coordinate.
    pub x: f64,
    /// Model prediction.
    pub y_pred: f64,
    /// `e^{-2x}`.
    pub y_exact: f64,
    /// `|y_pred - y_exact|`.
    pub abs_err: f64,
}

/// Evaluates `predict` against the exact solution on `n_eval` uniform points.
pub fn solution_curve(predict: impl Fn(f64) -> f64, n_eval: usize) -> Result<alloc::vec::Vec<SolutionPoint>> {
    let grid = make_grid(n_eval)?;
    Ok(grid
        .points()
        .iter()
        .map(|&x| {
            let (y_pred, y_exact) = (predict(x), exact_solution(x));
            SolutionPoint {
                x,
                y_pred,
                y_exact,
                abs_err: libm::fabs(y_pred - y_exact),
            }
        })
        .collect())
}

/// Summarizes a solution curve.
pub fn error_report(points: &[SolutionPoint]) -> ErrorReport {
    let n = points.len() as f64;
    let max = points.iter().fold(0.0f64, |m, p| m.max(p.abs_err));
    let mean = points.iter().map(|p| p.abs_err).sum::<f64>() / n;
    let l2 = libm::sqrt(points.iter().map(|p| p.abs_err * p.abs_err).sum::<f64>() / n);
    ErrorReport {
        max_abs_error: max,
        mean_abs_error: mean,
        l2_error: l2,
        eval_points: points.len(),
    }
}

/// Errors of an arbitrary predictor on `n_eval ≥ 2` uniform points.
pub fn compare_fn(predict: impl Fn(f64) -> f64, n_eval: usize) -> Result<ErrorReport> {
    solution_curve(predict, n_eval).map(|c| error_report(&c))
}

/// Errors of a trained model. Features on the evaluation grid are exact and
/// standardized with the training statistics.
pub fn compare(model: &TrainedModel, n_eval: usize) -> Result<ErrorReport> {
    compare_fn(|x| model.predict(x), n_eval)
}
