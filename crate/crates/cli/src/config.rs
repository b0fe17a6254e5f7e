//! Run configuration: built-in defaults, overridden by a JSON file, overridden
//! by command-line flags.

use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::Parser;
use serde::{Deserialize, Serialize};

use qpinn_core::{AdamConfig, DerivativeMode, TrainConfig};

/// Everything a run needs. Keys mirror the command-line flags.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub n_points: usize,
    pub n_eval: usize,
    pub shots: u64,
    pub seed: u64,
    pub epochs: usize,
    pub lr: f64,
    pub beta1: f64,
    pub beta2: f64,
    pub epsilon: f64,
    pub hidden: Vec<usize>,
    pub mode: String,
    pub histogram_t: f64,
    pub histogram_shots: u64,
    pub out: PathBuf,
}

impl Default for RunConfig {
    fn default() -> Self {
        let train = TrainConfig::default();
        Self {
            n_points: train.grid_size,
            n_eval: 200,
            shots: train.shots,
            seed: train.seed,
            epochs: train.epochs,
            lr: train.adam.learning_rate,
            beta1: train.adam.beta1,
            beta2: train.adam.beta2,
            epsilon: train.adam.epsilon,
            hidden: train.hidden_sizes,
            mode: train.derivative_mode.as_str().to_owned(),
            histogram_t: 0.3,
            histogram_shots: 4096,
            out: PathBuf::from("out"),
        }
    }
}

/// Partial configuration as read from a JSON file.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    n_points: Option<usize>,
    n_eval: Option<usize>,
    shots: Option<u64>,
    seed: Option<u64>,
    epochs: Option<usize>,
    lr: Option<f64>,
    beta1: Option<f64>,
    beta2: Option<f64>,
    epsilon: Option<f64>,
    hidden: Option<Vec<usize>>,
    mode: Option<String>,
    histogram_t: Option<f64>,
    histogram_shots: Option<u64>,
    out: Option<PathBuf>,
}

/// Solve y' + 2y = 0, y(0) = 1 with a physics-informed network fed by
/// two-qubit circuit measurement features, and write the result artifacts.
#[derive(Debug, Parser)]
#[command(name = "qpinn", version, allow_negative_numbers = true)]
pub struct Cli {
    /// Number of collocation points [default: 64]
    #[arg(long, value_name = "N")]
    pub n_points: Option<usize>,
    /// Number of evaluation points for the error report [default: 200]
    #[arg(long, value_name = "N")]
    pub n_eval: Option<usize>,
    /// Shots per collocation point; 0 uses exact probabilities [default: 0]
    #[arg(long)]
    pub shots: Option<u64>,
    /// Seed for weight initialization and shot sampling [default: 0]
    #[arg(long)]
    pub seed: Option<u64>,
    /// Number of full-batch Adam updates [default: 5000]
    #[arg(long)]
    pub epochs: Option<usize>,
    /// Adam learning rate [default: 0.01]
    #[arg(long)]
    pub lr: Option<f64>,
    /// Hidden layer widths, comma separated [default: 32,32]
    #[arg(long, value_delimiter = ',', num_args = 1..)]
    pub hidden: Option<Vec<usize>>,
    /// How dŷ/dx treats the features: frozen or analytic-diff [default: analytic-diff]
    #[arg(long, value_parser = ["frozen", "analytic-diff"])]
    pub mode: Option<String>,
    /// Input value whose measurement histogram is exported [default: 0.3]
    #[arg(long, value_name = "T")]
    pub histogram_t: Option<f64>,
    /// Shots for the exported histogram [default: 4096]
    #[arg(long, value_name = "N")]
    pub histogram_shots: Option<u64>,
    /// Output directory [default: out]
    #[arg(long, value_name = "DIR")]
    pub out: Option<PathBuf>,
    /// JSON file with any of the above keys (snake_case); flags take precedence
    #[arg(long, value_name = "FILE")]
    pub config: Option<PathBuf>,
}

macro_rules! overlay {
    ($dst:expr, $src:expr, $($field:ident),+) => {
        $( if let Some(v) = $src.$field { $dst.$field = v; } )+
    };
}

impl Cli {
    /// Resolves defaults, file values and flags into a validated config.
    pub fn resolve(self) -> Result<RunConfig> {
        let mut cfg = RunConfig::default();
        if let Some(path) = &self.config {
            let file = read_file_config(path)?;
            overlay!(cfg, file, n_points, n_eval, shots, seed, epochs, lr, beta1, beta2, epsilon, hidden, mode, histogram_t, histogram_shots, out);
        }
        overlay!(cfg, self, n_points, n_eval, shots, seed, epochs, lr, hidden, mode, histogram_t, histogram_shots, out);
        cfg.validate()?;
        Ok(cfg)
    }
}

fn read_file_config(path: &Path) -> Result<FileConfig> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading config {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("parsing config {}", path.display()))
}

/// Parses command-line style arguments (first item is the program name).
pub fn parse_config<I, T>(args: I) -> Result<RunConfig>
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    Cli::try_parse_from(args)?.resolve()
}

impl RunConfig {
    /// Checks value ranges.
    pub fn validate(&self) -> Result<()> {
        if self.n_eval < 2 {
            bail!("n_eval must be at least 2, got {}", self.n_eval);
        }
        if !(0.0..=1.0).contains(&self.histogram_t) {
            bail!("histogram_t must lie in [0, 1], got {}", self.histogram_t);
        }
        if self.histogram_shots == 0 {
            bail!("histogram_shots must be positive");
        }
        if self.hidden.is_empty() {
            bail!("hidden must list at least one layer width");
        }
        self.train_config()?.validate()?;
        Ok(())
    }

    /// Derivative mode parsed from `mode`.
    pub fn derivative_mode(&self) -> Result<DerivativeMode> {
        Ok(self.mode.parse::<DerivativeMode>()?)
    }

    /// The training part of the config.
    pub fn train_config(&self) -> Result<TrainConfig> {
        Ok(TrainConfig {
            epochs: self.epochs,
            adam: AdamConfig {
                learning_rate: self.lr,
                beta1: self.beta1,
                beta2: self.beta2,
                epsilon: self.epsilon,
            },
            derivative_mode: self.derivative_mode()?,
            seed: self.seed,
            grid_size: self.n_points,
            shots: self.shots,
            hidden_sizes: self.hidden.clone(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn no_arguments_gives_defaults() {
        let cfg = parse_config(["qpinn"]).unwrap();
        assert_eq!(cfg, RunConfig::default());
        assert_eq!(cfg.n_points, 64);
        assert_eq!(cfg.shots, 0);
        assert_eq!(cfg.hidden, vec![32, 32]);
        assert_eq!(cfg.mode, "analytic-diff");
        assert_eq!(cfg.histogram_shots, 4096);
    }

    #[test]
    fn flags_override_defaults() {
        let cfg = parse_config([
            "qpinn", "--shots", "0", "--hidden", "8,4", "--mode", "frozen", "--lr", "0.003", "--epochs", "10",
        ])
        .unwrap();
        assert_eq!(cfg.shots, 0);
        assert_eq!(cfg.hidden, vec![8, 4]);
        assert_eq!(cfg.derivative_mode().unwrap(), DerivativeMode::Frozen);
        assert_eq!(cfg.lr, 0.003);
        assert_eq!(cfg.epochs, 10);
    }

    #[test]
    fn invalid_values_rejected() {
        for args in [
            vec!["qpinn", "--epochs", "-5"],
            vec!["qpinn", "--epochs", "0"],
            vec!["qpinn", "--lr", "-1"],
            vec!["qpinn", "--histogram-t", "1.5"],
            vec!["qpinn", "--histogram-shots", "0"],
            vec!["qpinn", "--n-points", "1"],
            vec!["qpinn", "--n-eval", "1"],
            vec!["qpinn", "--mode", "chain"],
            vec!["qpinn", "--hidden", "4,0"],
            vec!["qpinn", "--bogus"],
        ] {
            assert!(parse_config(args.clone()).is_err(), "{args:?}");
        }
    }

    #[test]
    fn file_then_flags() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("cfg.json");
        std::fs::write(&path, r#"{"epochs": 12, "seed": 5, "hidden": [3], "beta1": 0.8}"#).unwrap();
        let p = path.to_str().unwrap();
        let cfg = parse_config(["qpinn", "--config", p, "--seed", "9"]).unwrap();
        assert_eq!(cfg.epochs, 12);
        assert_eq!(cfg.seed, 9);
        assert_eq!(cfg.hidden, vec![3]);
        assert_eq!(cfg.beta1, 0.8);

        std::fs::write(&path, r#"{"epochs": 12, "colour": "red"}"#).unwrap();
        assert!(parse_config(["qpinn", "--config", p]).is_err());
        std::fs::write(&path, r#"{"epochs": "many"}"#).unwrap();
        assert!(parse_config(["qpinn", "--config", p]).is_err());
    }
}
