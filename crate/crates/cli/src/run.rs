//! End-to-end experiment: features, training, evaluation, histogram, artifacts.

use std::fs;
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use anyhow::{Context, Result};

use qpinn_core::features::quantum_features;
use qpinn_core::qsim::{born_probabilities, circuit_state, sample_counts, Counts};
use qpinn_core::validate::{error_report, solution_curve, ErrorReport};
use qpinn_core::{pinn, rng, TrainReport};

use crate::artifacts::{self, Checkpoint, HistogramRow};
use crate::config::RunConfig;
use crate::svg;

/// Files written by [`run_experiment`].
pub const ARTIFACTS: [&str; 8] = [
    "features.csv",
    "loss.csv",
    "solution.csv",
    "errors.json",
    "histogram.csv",
    "plot_solution.svg",
    "plot_histogram.svg",
    "checkpoint.json",
];

/// What a run produced.
#[derive(Debug)]
pub struct RunSummary {
    pub report: TrainReport,
    pub errors: ErrorReport,
    pub histogram: Vec<HistogramRow>,
    pub wall_time: Duration,
    pub out_dir: PathBuf,
}

impl RunSummary {
    pub fn final_loss(&self) -> f64 {
        self.report.final_loss
    }
}

/// Seed of the histogram sample, independent of the per-point feature seeds.
pub fn histogram_seed(seed: u64) -> u64 {
    rng::derive_seed(seed, u64::MAX - 1)
}

/// Measurement counts of the circuit at `t`.
pub fn histogram_counts(t: f64, shots: u64, seed: u64) -> Result<Counts> {
    let exact = born_probabilities(&circuit_state(t));
    Ok(sample_counts(&exact, shots, seed)?)
}

fn write(dir: &Path, name: &str, contents: &str) -> Result<()> {
    let path = dir.join(name);
    fs::write(&path, contents).with_context(|| format!("writing {}", path.display()))
}

/// Trains with `config` and writes every artifact into `config.out`.
pub fn run_experiment(config: &RunConfig) -> Result<RunSummary> {
    config.validate()?;
    let out = &config.out;
    fs::create_dir_all(out).with_context(|| format!("creating output directory {}", out.display()))?;

    let start = Instant::now();
    let report = pinn::train(&config.train_config()?).context("training failed")?;
    let wall_time = start.elapsed();

    let curve = solution_curve(|x| report.model.predict(x), config.n_eval)?;
    let errors = error_report(&curve);

    let counts = histogram_counts(config.histogram_t, config.histogram_shots, histogram_seed(config.seed))?;
    let exact = quantum_features(config.histogram_t, 0, 0)?;
    let histogram = artifacts::histogram_rows(&counts, exact.as_array());

    write(out, "features.csv", &artifacts::features_csv(&report.grid, &report.features))?;
    write(out, "loss.csv", &artifacts::loss_csv(&report.loss_history))?;
    write(out, "solution.csv", &artifacts::solution_csv(&curve))?;
    write(out, "errors.json", &artifacts::errors_json(&errors, report.final_loss, config)?)?;
    write(out, "histogram.csv", &artifacts::histogram_csv(&histogram))?;
    write(out, "checkpoint.json", &Checkpoint::from_model(&report.model).to_json()?)?;

    let solution_plot = svg::line_chart(
        "Trained network vs. exact solution of y' + 2y = 0",
        "x",
        "y",
        &[
            svg::Series {
                name: "exact e^(-2x)",
                points: curve.iter().map(|p| (p.x, p.y_exact)).collect(),
                color: "#444444",
                dashed: true,
            },
            svg::Series {
                name: "network prediction",
                points: curve.iter().map(|p| (p.x, p.y_pred)).collect(),
                color: "#1f77b4",
                dashed: false,
            },
        ],
    );
    write(out, "plot_solution.svg", &solution_plot)?;

    let groups: Vec<_> = histogram
        .iter()
        .map(|r| svg::BarGroup {
            label: r.outcome,
            values: vec![r.frequency, r.exact_probability],
        })
        .collect();
    let title = format!(
        "Measurement outcomes at t = {} ({} shots)",
        config.histogram_t, config.histogram_shots
    );
    let histogram_plot = svg::bar_chart(
        &title,
        "outcome",
        "probability",
        &[("sampled frequency", "#1f77b4"), ("exact probability", "#bbbbbb")],
        &groups,
    );
    write(out, "plot_histogram.svg", &histogram_plot)?;

    Ok(RunSummary {
        report,
        errors,
        histogram,
        wall_time,
        out_dir: out.clone(),
    })
}
