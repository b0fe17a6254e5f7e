//! CSV and JSON artifact formats.
//!
//! Every CSV starts with a header row. Reals are written with 17 significant
//! digits (`{:.16e}`), so values round-trip exactly and reruns are
//! byte-identical.

use std::fmt::Write as _;

use anyhow::{Context, Result};
use serde::{Deserialize, Serialize};

use qpinn_core::features::{FeatureMatrix, Grid, Standardizer};
use qpinn_core::qsim::{Counts, BASIS_LABELS};
use qpinn_core::validate::{ErrorReport, SolutionPoint};
use qpinn_core::{DerivativeMode, MlpParams, TrainedModel};

use crate::config::RunConfig;

/// Fixed 17-significant-digit rendering.
pub fn fmt_real(v: f64) -> String {
    format!("{v:.16e}")
}

fn csv<const N: usize>(header: [&str; N], rows: impl IntoIterator<Item = [String; N]>) -> String {
    let mut out = header.join(",");
    out.push('\n');
    for row in rows {
        let _ = writeln!(out, "{}", row.join(","));
    }
    out
}

/// `x, p00_raw, p01_raw, p10_raw, p11_raw, q0_std, q1_std, q2_std, q3_std`
pub fn features_csv(grid: &Grid, features: &FeatureMatrix) -> String {
    let header = ["x", "p00_raw", "p01_raw", "p10_raw", "p11_raw", "q0_std", "q1_std", "q2_std", "q3_std"];
    let rows = grid
        .points()
        .iter()
        .zip(features.raw.iter().zip(&features.standardized))
        .map(|(x, (raw, std))| {
            let mut row: [String; 9] = Default::default();
            row[0] = fmt_real(*x);
            for j in 0..4 {
                row[1 + j] = fmt_real(raw[j]);
                row[5 + j] = fmt_real(std[j]);
            }
            row
        });
    csv(header, rows)
}

/// `epoch, loss` with epochs numbered from 1.
pub fn loss_csv(loss_history: &[f64]) -> String {
    csv(
        ["epoch", "loss"],
        loss_history
            .iter()
            .enumerate()
            .map(|(i, l)| [(i + 1).to_string(), fmt_real(*l)]),
    )
}

/// `x, y_pred, y_exact, abs_err`
pub fn solution_csv(points: &[SolutionPoint]) -> String {
    csv(
        ["x", "y_pred", "y_exact", "abs_err"],
        points
            .iter()
            .map(|p| [fmt_real(p.x), fmt_real(p.y_pred), fmt_real(p.y_exact), fmt_real(p.abs_err)]),
    )
}

/// One row of `histogram.csv`.
#[derive(Debug, Clone, PartialEq)]
pub struct HistogramRow {
    pub outcome: &'static str,
    pub count: u64,
    pub frequency: f64,
    pub exact_probability: f64,
}

/// Rows for the four basis outcomes.
pub fn histogram_rows(counts: &Counts, exact: &[f64; 4]) -> Vec<HistogramRow> {
    let shots = counts.shots() as f64;
    (0..4)
        .map(|k| HistogramRow {
            outcome: BASIS_LABELS[k],
            count: counts[k],
            frequency: counts[k] as f64 / shots,
            exact_probability: exact[k],
        })
        .collect()
}

/// `outcome, count, frequency, exact_probability`
pub fn histogram_csv(rows: &[HistogramRow]) -> String {
    csv(
        ["outcome", "count", "frequency", "exact_probability"],
        rows.iter().map(|r| {
            [
                r.outcome.to_owned(),
                r.count.to_string(),
                fmt_real(r.frequency),
                fmt_real(r.exact_probability),
            ]
        }),
    )
}

/// Config echoed into `errors.json`. The output directory is left out so the
/// file does not depend on where it was written.
#[derive(Debug, Serialize)]
struct ConfigEcho<'a> {
    n_points: usize,
    n_eval: usize,
    shots: u64,
    seed: u64,
    epochs: usize,
    lr: f64,
    beta1: f64,
    beta2: f64,
    epsilon: f64,
    hidden: &'a [usize],
    mode: &'a str,
    histogram_t: f64,
    histogram_shots: u64,
}

#[derive(Debug, Serialize)]
struct ErrorsFile<'a> {
    max_abs_error: f64,
    mean_abs_error: f64,
    l2_error: f64,
    eval_points: usize,
    final_loss: f64,
    config_echo: ConfigEcho<'a>,
}

/// `{max_abs_error, mean_abs_error, l2_error, eval_points, final_loss, config_echo}`
pub fn errors_json(report: &ErrorReport, final_loss: f64, config: &RunConfig) -> Result<String> {
    let file = ErrorsFile {
        max_abs_error: report.max_abs_error,
        mean_abs_error: report.mean_abs_error,
        l2_error: report.l2_error,
        eval_points: report.eval_points,
        final_loss,
        config_echo: ConfigEcho {
            n_points: config.n_points,
            n_eval: config.n_eval,
            shots: config.shots,
            seed: config.seed,
            epochs: config.epochs,
            lr: config.lr,
            beta1: config.beta1,
            beta2: config.beta2,
            epsilon: config.epsilon,
            hidden: &config.hidden,
            mode: &config.mode,
            histogram_t: config.histogram_t,
            histogram_shots: config.histogram_shots,
        },
    };
    Ok(serde_json::to_string_pretty(&file)? + "\n")
}

/// Network checkpoint: layer sizes, flat parameters in storage order, and the
/// feature transform needed to evaluate the model on new points.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Checkpoint {
    pub layer_sizes: Vec<usize>,
    pub params: Vec<f64>,
    pub feature_mu: [f64; 4],
    pub feature_sigma: [f64; 4],
    pub derivative_mode: String,
}

impl Checkpoint {
    pub fn from_model(model: &TrainedModel) -> Self {
        Self {
            layer_sizes: model.params.layer_sizes().to_vec(),
            params: model.params.as_slice().to_vec(),
            feature_mu: model.stats.mu,
            feature_sigma: model.stats.sigma,
            derivative_mode: model.mode.as_str().to_owned(),
        }
    }

    pub fn into_model(self) -> Result<TrainedModel> {
        let params = MlpParams::from_flat(&self.layer_sizes, self.params).context("checkpoint parameters")?;
        let mode: DerivativeMode = self.derivative_mode.parse()?;
        Ok(TrainedModel {
            params,
            stats: Standardizer {
                mu: self.feature_mu,
                sigma: self.feature_sigma,
            },
            mode,
        })
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)? + "\n")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).context("parsing checkpoint")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use qpinn_core::features::{build_feature_matrix, make_grid};
    use qpinn_core::nn::{init_params, layer_sizes};

    #[test]
    fn real_formatting_has_17_digits_and_round_trips() {
        for v in [1.0, 0.1, -2.0f64.exp(), 1e-300, 123456.789] {
            let s = fmt_real(v);
            let mantissa = s.split('e').next().unwrap().trim_start_matches('-');
            assert_eq!(mantissa.chars().filter(|c| c.is_ascii_digit()).count(), 17, "{s}");
            assert_eq!(s.parse::<f64>().unwrap(), v);
        }
    }

    #[test]
    fn csv_headers() {
        let grid = make_grid(3).unwrap();
        let fm = build_feature_matrix(&grid, 0, 0).unwrap();
        let text = features_csv(&grid, &fm);
        let mut lines = text.lines();
        assert_eq!(
            lines.next().unwrap(),
            "x,p00_raw,p01_raw,p10_raw,p11_raw,q0_std,q1_std,q2_std,q3_std"
        );
        assert_eq!(lines.count(), 3);
        assert_eq!(loss_csv(&[4.0, 2.0]).lines().next().unwrap(), "epoch,loss");
        assert!(loss_csv(&[4.0, 2.0]).contains("\n2,"));
    }

    #[test]
    fn histogram_rows_in_basis_order() {
        let rows = histogram_rows(&Counts([2, 1, 1, 0]), &[0.5, 0.25, 0.25, 0.0]);
        assert_eq!(rows.iter().map(|r| r.outcome).collect::<Vec<_>>(), ["00", "01", "10", "11"]);
        assert_eq!(rows[0].frequency, 0.5);
        let text = histogram_csv(&rows);
        assert!(text.starts_with("outcome,count,frequency,exact_probability\n00,2,"));
    }

    #[test]
    fn checkpoint_round_trip() {
        let fm = build_feature_matrix(&make_grid(8).unwrap(), 0, 0).unwrap();
        let model = TrainedModel {
            params: init_params(&layer_sizes(&[4, 3]), 1).unwrap(),
            stats: fm.stats,
            mode: DerivativeMode::AnalyticDiff,
        };
        let json = Checkpoint::from_model(&model).to_json().unwrap();
        let back = Checkpoint::from_json(&json).unwrap().into_model().unwrap();
        assert_eq!(back, model);

        let mut bad = Checkpoint::from_model(&model);
        bad.params.pop();
        assert!(bad.into_model().is_err());
    }
}
