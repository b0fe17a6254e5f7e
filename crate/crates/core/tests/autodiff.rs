//! Dual-number and reverse-accumulated derivatives against central differences.

use qpinn_core::features::{build_feature_matrix, make_grid, Standardizer};
use qpinn_core::nn::{self, layer_sizes, MlpParams, NetworkInput};
use qpinn_core::pinn::{self, DerivativeMode, TrainedModel};
use qpinn_core::rng;
use qpinn_core::validate::finite_difference_check;

/// Relative error with a floor on the scale, as usual for gradient checks:
/// entries far below the floor are compared absolutely.
fn rel_err(a: f64, b: f64, floor: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(floor)
}

fn random_params(sizes: &[usize], rng: &mut rng::Rng) -> MlpParams {
    let mut p = MlpParams::zeros(sizes).unwrap();
    for v in p.as_mut_slice() {
        *v = rng::symmetric(rng, 1.0);
    }
    p
}

fn random_features(rng: &mut rng::Rng) -> [f64; 4] {
    core::array::from_fn(|_| rng::symmetric(rng, 2.0))
}

#[test]
fn input_derivative_frozen_features() {
    let mut r = rng::seeded(2024);
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let p = random_params(&layer_sizes(&[4]), &mut r);
        let x = 0.1 + 0.8 * rng::uniform(&mut r);
        let q = random_features(&mut r);
        let y = |x1: f64| nn::ansatz(&p, &NetworkInput::frozen(x1, q)).y;
        let fd = finite_difference_check(y, x, 1e-6);
        let ad = nn::ansatz(&p, &NetworkInput::frozen(x, q)).dy_dx;
        worst = worst.max(rel_err(ad, fd, 1e-3));
    }
    assert!(worst <= 1e-6, "worst relative error {worst:e}");
}

#[test]
fn input_derivative_through_closed_form_features() {
    let fm = build_feature_matrix(&make_grid(64).unwrap(), 0, 0).unwrap();
    let mut r = rng::seeded(77);
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let model = TrainedModel {
            params: random_params(&layer_sizes(&[4]), &mut r),
            stats: fm.stats,
            mode: DerivativeMode::AnalyticDiff,
        };
        let x = 0.1 + 0.8 * rng::uniform(&mut r);
        let fd = finite_difference_check(|x1| model.predict(x1), x, 1e-6);
        let ad = model.evaluate(x).dy_dx;
        worst = worst.max(rel_err(ad, fd, 1e-3));
    }
    assert!(worst <= 1e-6, "worst relative error {worst:e}");
}

#[test]
fn parameter_gradient_matches_finite_differences() {
    let mut r = rng::seeded(5);
    let sizes = layer_sizes(&[4]);
    let mut worst = 0.0f64;
    for probe in 0..20 {
        let p = random_params(&sizes, &mut r);
        let batch: Vec<NetworkInput> = (0..5)
            .map(|i| {
                let x = i as f64 / 4.0;
                let q = random_features(&mut r);
                if probe % 2 == 0 {
                    NetworkInput::frozen(x, q)
                } else {
                    NetworkInput::with_tangent(x, q, random_features(&mut r))
                }
            })
            .collect();
        let grad = nn::parameter_gradient(&p, &batch).unwrap();
        for k in 0..p.len() {
            let loss_at = |v: f64| {
                let mut q = p.clone();
                q.as_mut_slice()[k] = v;
                pinn::ode_loss(&q, &batch).unwrap()
            };
            let fd = finite_difference_check(loss_at, p.as_slice()[k], 1e-5);
            worst = worst.max(rel_err(grad.as_slice()[k], fd, 1e-3));
        }
    }
    assert!(worst <= 1e-5, "worst relative error {worst:e}");
}

#[test]
fn parameter_gradient_deep_network() {
    // Two hidden layers exercise the backward pass through tanh twice.
    let mut r = rng::seeded(31);
    let p = random_params(&layer_sizes(&[6, 5]), &mut r);
    let batch: Vec<NetworkInput> = (0..7)
        .map(|i| NetworkInput::with_tangent(i as f64 / 6.0, random_features(&mut r), random_features(&mut r)))
        .collect();
    let grad = nn::parameter_gradient(&p, &batch).unwrap();
    for k in 0..p.len() {
        let fd = finite_difference_check(
            |v| {
                let mut q = p.clone();
                q.as_mut_slice()[k] = v;
                pinn::ode_loss(&q, &batch).unwrap()
            },
            p.as_slice()[k],
            1e-5,
        );
        assert!(rel_err(grad.as_slice()[k], fd, 1e-3) <= 1e-5, "param {k}: {} vs {fd}", grad.as_slice()[k]);
    }
}

#[test]
fn zero_residual_gives_zero_gradient() {
    // A network that outputs g ≡ -2 at x = 0 has r = g + 2 = 0 there, and all
    // derivative terms carry a factor x, so the single-point gradient vanishes.
    let mut p = MlpParams::zeros(&layer_sizes(&[3])).unwrap();
    p.biases_mut(1)[0] = -2.0;
    p.weights_mut(0).iter_mut().enumerate().for_each(|(i, w)| *w = 0.1 * i as f64);
    let batch = [NetworkInput::frozen(0.0, [0.3, -0.1, 0.3, 0.1])];
    assert_eq!(pinn::residual(&p, &batch[0]), 0.0);
    let g = nn::parameter_gradient(&p, &batch).unwrap();
    assert!(g.as_slice().iter().all(|&v| v == 0.0));
}

#[test]
fn standardization_enters_tangent() {
    let stats = Standardizer {
        mu: [0.0; 4],
        sigma: [0.5, 0.25, 2.0, 1.0],
    };
    let model = TrainedModel {
        params: MlpParams::zeros(&layer_sizes(&[2])).unwrap(),
        stats,
        mode: DerivativeMode::AnalyticDiff,
    };
    let x = 0.4f64;
    let input = model.input_at(x);
    let h = 0.5 * (2.0 * x).sin();
    let expected = [-h / 0.5, h / 0.25, -h / 2.0, h / 1.0];
    for (a, b) in input.dq_dx.iter().zip(expected) {
        assert!((a - b).abs() < 1e-15);
    }
}
