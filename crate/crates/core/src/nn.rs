//! Feed-forward network `g` and the hard-initial-condition ansatz
//! `ŷ(x) = 1 + x·g([x, q(x)])`.
//!
//! Hidden layers use `tanh`, the output layer is linear. The forward pass runs
//! on [`DualValue`]s seeded with tangent `(1, dq/dx)`, which gives `dŷ/dx` in
//! the same sweep. Parameter gradients are obtained by reverse accumulation
//! through that dual forward pass, so they include the `dŷ/dx` dependence of
//! the residual.

use alloc::vec;
use alloc::vec::Vec;

use crate::dual::DualValue;
use crate::features::N_FEATURES;
use crate::pinn::DECAY_RATE;
use crate::{rng, Error, Result};

/// Network input width: `x` followed by the four features.
pub const INPUT_WIDTH: usize = 1 + N_FEATURES;

/// Network parameters stored as one flat buffer.
///
/// Layer `l` maps `sizes[l]` inputs to `sizes[l + 1]` outputs and occupies a
/// contiguous block: the `sizes[l + 1] × sizes[l]` weight matrix (row-major,
/// one row per output unit) followed by the `sizes[l + 1]` biases. The same
/// type holds gradients and optimizer moments.
#[derive(Debug, Clone, PartialEq)]
pub struct MlpParams {
    sizes: Vec<usize>,
    offsets: Vec<usize>,
    data: Vec<f64>,
}

fn validate_sizes(sizes: &[usize]) -> Result<()> {
    if sizes.len() < 2 {
        return Err(Error::InvalidLayerSizes("need at least an input and an output layer"));
    }
    if sizes[0] != INPUT_WIDTH {
        return Err(Error::InvalidLayerSizes("input width must be 5"));
    }
    if sizes[sizes.len() - 1] != 1 {
        return Err(Error::InvalidLayerSizes("output width must be 1"));
    }
    if sizes.contains(&0) {
        return Err(Error::InvalidLayerSizes("layer widths must be positive"));
    }
    Ok(())
}

/// `[5, hidden..., 1]`.
pub fn layer_sizes(hidden: &[usize]) -> Vec<usize> {
    let mut sizes = Vec::with_capacity(hidden.len() + 2);
    sizes.push(INPUT_WIDTH);
    sizes.extend_from_slice(hidden);
    sizes.push(1);
    sizes
}

impl MlpParams {
    /// All-zero parameters for the given architecture.
    pub fn zeros(sizes: &[usize]) -> Result<Self> {
        validate_sizes(sizes)?;
        let mut offsets = Vec::with_capacity(sizes.len());
        let mut total = 0;
        for w in sizes.windows(2) {
            offsets.push(total);
            total += w[1] * (w[0] + 1);
        }
        offsets.push(total);
        Ok(Self {
            sizes: sizes.to_vec(),
            offsets,
            data: vec![0.0; total],
        })
    }

    /// Rebuilds parameters from a flat list in storage order.
    pub fn from_flat(sizes: &[usize], values: Vec<f64>) -> Result<Self> {
        let mut p = Self::zeros(sizes)?;
        if values.len() != p.data.len() {
            return Err(Error::LengthMismatch {
                expected: p.data.len(),
                got: values.len(),
            });
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidConfig("parameters must be finite"));
        }
        p.data = values;
        Ok(p)
    }

    /// Zero buffer with the same shape.
    pub fn zeros_like(&self) -> Self {
        Self {
            sizes: self.sizes.clone(),
            offsets: self.offsets.clone(),
            data: vec![0.0; self.data.len()],
        }
    }

    /// Layer widths `[5, ..., 1]`.
    pub fn layer_sizes(&self) -> &[usize] {
        &self.sizes
    }

    /// Number of weight layers.
    pub fn n_layers(&self) -> usize {
        self.sizes.len() - 1
    }

    /// Total number of scalars.
    pub fn len(&self) -> usize {
        self.data.len()
    }

    /// True only for an empty buffer, which a valid architecture never has.
    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    /// Flat view in storage order.
    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    /// Mutable flat view in storage order.
    pub fn as_mut_slice(&mut self) -> &mut [f64] {
        &mut self.data
    }

    fn split(&self, layer: usize) -> (usize, usize, usize) {
        let (n_in, n_out) = (self.sizes[layer], self.sizes[layer + 1]);
        (self.offsets[layer], n_in, n_out)
    }

    /// Weights of `layer`, `n_out × n_in` row-major.
    pub fn weights(&self, layer: usize) -> &[f64] {
        let (o, n_in, n_out) = self.split(layer);
        &self.data[o..o + n_in * n_out]
    }

    /// Mutable weights of `layer`.
    pub fn weights_mut(&mut self, layer: usize) -> &mut [f64] {
        let (o, n_in, n_out) = self.split(layer);
        &mut self.data[o..o + n_in * n_out]
    }

    /// Biases of `layer`.
    pub fn biases(&self, layer: usize) -> &[f64] {
        let (o, n_in, n_out) = self.split(layer);
        &self.data[o + n_in * n_out..o + n_in * n_out + n_out]
    }

    /// Mutable biases of `layer`.
    pub fn biases_mut(&mut self, layer: usize) -> &mut [f64] {
        let (o, n_in, n_out) = self.split(layer);
        &mut self.data[o + n_in * n_out..o + n_in * n_out + n_out]
    }

    fn same_shape(&self, other: &Self) -> bool {
        self.sizes == other.sizes
    }
}

/// Glorot-uniform weights in `±√(6 / (fan_in + fan_out))`, zero biases.
///
/// Weights are drawn layer by layer in storage order from a ChaCha8 stream
/// seeded with `seed`.
pub fn init_params(sizes: &[usize], seed: u64) -> Result<MlpParams> {
    let mut params = MlpParams::zeros(sizes)?;
    let mut rng = rng::seeded(seed);
    for layer in 0..params.n_layers() {
        let (fan_in, fan_out) = (sizes[layer], sizes[layer + 1]);
        let bound = libm::sqrt(6.0 / (fan_in + fan_out) as f64);
        for w in params.weights_mut(layer) {
            *w = rng::symmetric(&mut rng, bound);
        }
    }
    Ok(params)
}

/// One collocation input `z = [x, q]` with the feature tangent `dq/dx`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NetworkInput {
    /// Collocation coordinate.
    pub x: f64,
    /// Standardized features at `x`.
    pub q: [f64; N_FEATURES],
    /// `dq/dx`; zero when features are treated as constants.
    pub dq_dx: [f64; N_FEATURES],
}

impl NetworkInput {
    /// Input whose features do not vary with `x`.
    pub const fn frozen(x: f64, q: [f64; N_FEATURES]) -> Self {
        Self {
            x,
            q,
            dq_dx: [0.0; N_FEATURES],
        }
    }

    /// Input with an explicit feature tangent.
    pub const fn with_tangent(x: f64, q: [f64; N_FEATURES], dq_dx: [f64; N_FEATURES]) -> Self {
        Self { x, q, dq_dx }
    }

    /// Checked construction from slices.
    pub fn from_slices(x: f64, q: &[f64], dq_dx: &[f64]) -> Result<Self> {
        let q: [f64; N_FEATURES] = q.try_into().map_err(|_| Error::LengthMismatch {
            expected: N_FEATURES,
            got: q.len(),
        })?;
        let dq_dx: [f64; N_FEATURES] = dq_dx.try_into().map_err(|_| Error::LengthMismatch {
            expected: N_FEATURES,
            got: dq_dx.len(),
        })?;
        Ok(Self { x, q, dq_dx })
    }

    fn dual_inputs(&self) -> [DualValue; INPUT_WIDTH] {
        let mut z = [DualValue::variable(self.x); INPUT_WIDTH];
        for j in 0..N_FEATURES {
            z[j + 1] = DualValue::new(self.q[j], self.dq_dx[j]);
        }
        z
    }
}

/// Values and tangents recorded during a dual forward pass.
struct Trace {
    /// Input values of each layer (post-activation of the previous one).
    values: Vec<Vec<f64>>,
    /// Input tangents of each layer.
    tangents: Vec<Vec<f64>>,
    /// Pre-activation tangents of each hidden layer, indexed like `values`.
    pre_tangents: Vec<Vec<f64>>,
    output: DualValue,
}

fn dual_forward(params: &MlpParams, input: &NetworkInput) -> Trace {
    let z = input.dual_inputs();
    let n_layers = params.n_layers();
    let mut values = Vec::with_capacity(n_layers);
    let mut tangents = Vec::with_capacity(n_layers);
    let mut pre_tangents = Vec::with_capacity(n_layers);
    values.push(z.iter().map(|d| d.value).collect::<Vec<_>>());
    tangents.push(z.iter().map(|d| d.tangent).collect::<Vec<_>>());
    pre_tangents.push(Vec::new());

    let mut output = DualValue::default();
    for layer in 0..n_layers {
        let (w, b) = (params.weights(layer), params.biases(layer));
        let (a, at) = (&values[layer], &tangents[layer]);
        let n_in = a.len();
        let mut s = Vec::with_capacity(b.len());
        let mut st = Vec::with_capacity(b.len());
        for (i, bias) in b.iter().enumerate() {
            let row = &w[i * n_in..(i + 1) * n_in];
            let mut acc = DualValue::constant(*bias);
            for ((wij, aj), atj) in row.iter().zip(a).zip(at) {
                acc += DualValue::new(*aj, *atj) * *wij;
            }
            s.push(acc.value);
            st.push(acc.tangent);
        }
        if layer + 1 == n_layers {
            output = DualValue::new(s[0], st[0]);
        } else {
            let mut act = Vec::with_capacity(s.len());
            let mut act_t = Vec::with_capacity(s.len());
            for (si, sti) in s.iter().zip(&st) {
                let h = DualValue::new(*si, *sti).tanh();
                act.push(h.value);
                act_t.push(h.tangent);
            }
            values.push(act);
            tangents.push(act_t);
            pre_tangents.push(st);
        }
    }
    Trace {
        values,
        tangents,
        pre_tangents,
        output,
    }
}

/// Accumulates into `grad` the gradient of `out_bar·g + tan_bar·ġ`.
fn dual_backward(params: &MlpParams, trace: &Trace, out_bar: f64, tan_bar: f64, grad: &mut MlpParams) {
    let mut s_bar = vec![out_bar];
    let mut st_bar = vec![tan_bar];
    for layer in (0..params.n_layers()).rev() {
        let (a, at) = (&trace.values[layer], &trace.tangents[layer]);
        let n_in = a.len();
        {
            let gw = grad.weights_mut(layer);
            for (i, (sb, stb)) in s_bar.iter().zip(&st_bar).enumerate() {
                let row = &mut gw[i * n_in..(i + 1) * n_in];
                for ((g, aj), atj) in row.iter_mut().zip(a).zip(at) {
                    *g += sb * aj + stb * atj;
                }
            }
        }
        for (g, sb) in grad.biases_mut(layer).iter_mut().zip(&s_bar) {
            *g += sb;
        }
        if layer == 0 {
            break;
        }
        // Back through W, then through tanh of the previous layer:
        // a = tanh(s), ȧ = (1 - a²)·ṡ.
        let w = params.weights(layer);
        let st = &trace.pre_tangents[layer];
        let mut next_s_bar = vec![0.0; n_in];
        let mut next_st_bar = vec![0.0; n_in];
        for j in 0..n_in {
            let (mut ab, mut atb) = (0.0, 0.0);
            for (i, (sb, stb)) in s_bar.iter().zip(&st_bar).enumerate() {
                let wij = w[i * n_in + j];
                ab += wij * sb;
                atb += wij * stb;
            }
            let d = 1.0 - a[j] * a[j];
            next_s_bar[j] = ab * d - 2.0 * atb * a[j] * d * st[j];
            next_st_bar[j] = atb * d;
        }
        s_bar = next_s_bar;
        st_bar = next_st_bar;
    }
}

/// `g([x, q])`.
pub fn forward(params: &MlpParams, input: &NetworkInput) -> f64 {
    let mut a: Vec<f64> = input.dual_inputs().iter().map(|d| d.value).collect();
    let n_layers = params.n_layers();
    for layer in 0..n_layers {
        let (w, b) = (params.weights(layer), params.biases(layer));
        let n_in = a.len();
        let s = b.iter().enumerate().map(|(i, bias)| {
            let row = &w[i * n_in..(i + 1) * n_in];
            row.iter().zip(&a).fold(*bias, |acc, (wij, aj)| acc + wij * aj)
        });
        a = if layer + 1 == n_layers {
            s.collect()
        } else {
            s.map(libm::tanh).collect()
        };
    }
    a[0]
}

/// `g` together with its total derivative along `(1, dq/dx)`.
pub fn forward_dual(params: &MlpParams, input: &NetworkInput) -> DualValue {
    dual_forward(params, input).output
}

/// Ansatz value and its `x`-derivative.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AnsatzOutput {
    /// `ŷ = 1 + x·g`.
    pub y: f64,
    /// `dŷ/dx = g + x·dg/dx`.
    pub dy_dx: f64,
}

fn ansatz_from(x: f64, g: DualValue) -> AnsatzOutput {
    AnsatzOutput {
        y: 1.0 + x * g.value,
        dy_dx: g.value + x * g.tangent,
    }
}

/// `ŷ(x) = 1 + x·g` and `dŷ/dx`. At `x = 0` the value is exactly 1.
pub fn ansatz(params: &MlpParams, input: &NetworkInput) -> AnsatzOutput {
    ansatz_from(input.x, forward_dual(params, input))
}

/// Accumulates the gradient of `y_bar·ŷ + dy_bar·dŷ/dx` at `input` into
/// `grad` and returns the ansatz outputs.
pub fn ansatz_vjp(
    params: &MlpParams,
    input: &NetworkInput,
    adjoint: impl FnOnce(AnsatzOutput) -> (f64, f64),
    grad: &mut MlpParams,
) -> AnsatzOutput {
    let trace = dual_forward(params, input);
    let out = ansatz_from(input.x, trace.output);
    let (y_bar, dy_bar) = adjoint(out);
    let x = input.x;
    dual_backward(params, &trace, x * y_bar + dy_bar, x * dy_bar, grad);
    out
}

/// Mean squared residual over `batch` and its exact gradient.
pub fn loss_and_gradient(params: &MlpParams, batch: &[NetworkInput]) -> Result<(f64, MlpParams)> {
    if batch.is_empty() {
        return Err(Error::EmptyBatch);
    }
    let n = batch.len() as f64;
    let mut grad = params.zeros_like();
    let mut loss = 0.0;
    for input in batch {
        // r = dŷ/dx + 2ŷ, loss = mean r², so ∂loss/∂r = 2r/N.
        ansatz_vjp(
            params,
            input,
            |out| {
                let r = out.dy_dx + DECAY_RATE * out.y;
                loss += r * r;
                let r_bar = 2.0 * r / n;
                (DECAY_RATE * r_bar, r_bar)
            },
            &mut grad,
        );
    }
    Ok((loss / n, grad))
}

/// Gradient of the residual loss with respect to every weight and bias.
pub fn parameter_gradient(params: &MlpParams, batch: &[NetworkInput]) -> Result<MlpParams> {
    loss_and_gradient(params, batch).map(|(_, g)| g)
}

/// `a + scale·b`, used by optimizers and tests.
pub fn axpy(a: &MlpParams, scale: f64, b: &MlpParams) -> Result<MlpParams> {
    if !a.same_shape(b) {
        return Err(Error::LengthMismatch {
            expected: a.len(),
            got: b.len(),
        });
    }
    let mut out = a.clone();
    for (o, v) in out.data.iter_mut().zip(&b.data) {
        *o += scale * v;
    }
    Ok(out)
}
