//! Two-qubit statevector engine for the feature circuit
//! `U(t) = (Rx(-2t) ⊗ Rx(-2t))(H ⊗ I)`.
//!
//! Basis states are labelled `b0 b1` with qubit 0 (the Hadamard qubit) as the
//! left bit, so amplitude index `k = 2·b0 + b1` and the order is
//! `[00, 01, 10, 11]`. With this ordering `P(00) = ½cos²t`.
//!
//! `Rx(θ) = exp(-iθX/2) = cos(θ/2)·I - i·sin(θ/2)·X`.

use core::ops::Index;

use num_complex::Complex64;
use crate::{rng, Error, Result};

/// A complex amplitude.
pub type ComplexAmp = Complex64;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Labels of the four computational basis states, in amplitude order.
pub const BASIS_LABELS: [&str; 4] = ["00", "01", "10", "11"];

/// A 2×2 complex matrix acting on one qubit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SingleQubitGate {
    entries: [[Complex64; 2]; 2],
}

impl SingleQubitGate {
    /// Wraps a matrix. Unitarity is not checked here; see [`Self::is_unitary`].
    pub const fn new(entries: [[Complex64; 2]; 2]) -> Self {
        Self { entries }
    }

    /// The 2×2 identity.
    pub const fn identity() -> Self {
        Self::new([[ONE, ZERO], [ZERO, ONE]])
    }

    /// `(1/√2)[[1, 1], [1, -1]]`.
    pub fn hadamard() -> Self {
        let h = Complex64::new(core::f64::consts::FRAC_1_SQRT_2, 0.0);
        Self::new([[h, h], [h, -h]])
    }

    /// Rotation about X: `[[cos(θ/2), -i·sin(θ/2)], [-i·sin(θ/2), cos(θ/2)]]`.
    pub fn rx(theta: f64) -> Self {
        let c = Complex64::new(libm::cos(theta / 2.0), 0.0);
        let s = Complex64::new(0.0, -libm::sin(theta / 2.0));
        Self::new([[c, s], [s, c]])
    }

    /// Matrix entries, row-major.
    pub fn entries(&self) -> &[[Complex64; 2]; 2] {
        &self.entries
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        let m = &self.entries;
        Self::new([
            [m[0][0].conj(), m[1][0].conj()],
            [m[0][1].conj(), m[1][1].conj()],
        ])
    }

    /// Matrix product `self · rhs`.
    pub fn matmul(&self, rhs: &Self) -> Self {
        let (a, b) = (&self.entries, &rhs.entries);
        let mut out = [[ZERO; 2]; 2];
        for (i, row) in out.iter_mut().enumerate() {
            for (j, e) in row.iter_mut().enumerate() {
                *e = a[i][0] * b[0][j] + a[i][1] * b[1][j];
            }
        }
        Self::new(out)
    }

    /// Largest entrywise deviation of `G·G†` from the identity.
    pub fn unitarity_error(&self) -> f64 {
        let p = self.matmul(&self.adjoint());
        let id = Self::identity();
        let mut worst = 0.0f64;
        for i in 0..2 {
            for j in 0..2 {
                worst = worst.max((p.entries[i][j] - id.entries[i][j]).norm());
            }
        }
        worst
    }

    /// `G·G† = I` entrywise within `tol`.
    pub fn is_unitary(&self, tol: f64) -> bool {
        self.unitarity_error() <= tol
    }
}

/// Pure state of the 2-qubit register.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StateVector {
    amps: [Complex64; 4],
}

impl StateVector {
    /// `|00⟩`.
    pub const fn zero() -> Self {
        Self {
            amps: [ONE, ZERO, ZERO, ZERO],
        }
    }

    /// Computational basis state with index `k = 2·b0 + b1`.
    pub fn basis(k: usize) -> Result<Self> {
        if k >= 4 {
            return Err(Error::InvalidQubit(k));
        }
        let mut amps = [ZERO; 4];
        amps[k] = ONE;
        Ok(Self { amps })
    }

    /// Builds a state from raw amplitudes without renormalizing.
    pub const fn from_amplitudes(amps: [Complex64; 4]) -> Self {
        Self { amps }
    }

    /// Amplitudes in `[00, 01, 10, 11]` order.
    pub fn amplitudes(&self) -> &[Complex64; 4] {
        &self.amps
    }

    /// `Σ |amp|²`.
    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    /// Applies `gate` to `qubit`, identity on the other one.
    pub fn apply(&self, gate: &SingleQubitGate, qubit: usize) -> Result<Self> {
        apply_single(self, gate, qubit)
    }
}

impl Default for StateVector {
    fn default() -> Self {
        Self::zero()
    }
}

/// Applies a single-qubit gate to qubit 0 (left bit) or 1 (right bit).
pub fn apply_single(state: &StateVector, gate: &SingleQubitGate, qubit: usize) -> Result<StateVector> {
    let mask = match qubit {
        0 => 0b10,
        1 => 0b01,
        q => return Err(Error::InvalidQubit(q)),
    };
    let g = gate.entries();
    let mut amps = state.amps;
    // Pair each index with its partner differing only in the target bit.
    for lo in (0..4).filter(|k| k & mask == 0) {
        let hi = lo | mask;
        let (a0, a1) = (state.amps[lo], state.amps[hi]);
        amps[lo] = g[0][0] * a0 + g[0][1] * a1;
        amps[hi] = g[1][0] * a0 + g[1][1] * a1;
    }
    Ok(StateVector { amps })
}

/// `U(t)|00⟩`: Hadamard on qubit 0, then `Rx(-2t)` on both qubits.
pub fn circuit_state(t: f64) -> StateVector {
    let rx = SingleQubitGate::rx(-2.0 * t);
    let steps = [
        (SingleQubitGate::hadamard(), 0),
        (rx, 0),
        (rx, 1),
    ];
    steps.iter().fold(StateVector::zero(), |s, (g, q)| {
        apply_single(&s, g, *q).expect("qubit indices are fixed and valid")
    })
}

/// Outcome distribution over `[00, 01, 10, 11]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProbVector([f64; 4]);

impl ProbVector {
    /// Validates entries in `[0, 1]` summing to 1 within `1e-12`.
    pub fn new(p: [f64; 4]) -> Result<Self> {
        if p.iter().any(|v| !v.is_finite() || *v < 0.0 || *v > 1.0) {
            return Err(Error::InvalidProbabilities("entries must lie in [0, 1]"));
        }
        if (p.iter().sum::<f64>() - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidProbabilities("entries must sum to 1"));
        }
        Ok(Self(p))
    }

    /// Relative frequencies `counts / shots`.
    ///
    /// Entries are the rounded quotients, except the last nonzero one, which
    /// is `1 - (sum of the entries before it)`. That makes [`Self::sum`]
    /// exactly 1 and moves the entry by at most a few ulps of 1.
    pub fn from_counts(counts: &Counts) -> Result<Self> {
        let shots = counts.shots();
        if shots == 0 {
            return Err(Error::ZeroShots);
        }
        let total = shots as f64;
        let mut p = counts.0.map(|c| c as f64 / total);
        let last = (0..4).rev().find(|&k| counts.0[k] > 0).expect("shots > 0");
        // fl(s + fl(1 - s)) = 1 for every s in [0, 1].
        let head: f64 = p[..last].iter().sum();
        p[last] = (1.0 - head).max(0.0);
        debug_assert_eq!(p.iter().sum::<f64>(), 1.0);
        Ok(Self(p))
    }

    /// Entries as an array.
    pub fn as_array(&self) -> &[f64; 4] {
        &self.0
    }

    /// Left-to-right sum of the entries.
    pub fn sum(&self) -> f64 {
        self.0.iter().sum()
    }
}

impl Index<usize> for ProbVector {
    type Output = f64;
    fn index(&self, k: usize) -> &f64 {
        &self.0[k]
    }
}

/// Born rule: `p_k = |amp_k|²`.
pub fn born_probabilities(state: &StateVector) -> ProbVector {
    ProbVector(state.amps.map(|a| a.norm_sqr()))
}

/// Measurement counts over `[00, 01, 10, 11]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Counts(pub [u64; 4]);

impl Counts {
    /// Total number of shots.
    pub fn shots(&self) -> u64 {
        self.0.iter().sum()
    }
}

impl Index<usize> for Counts {
    type Output = u64;
    fn index(&self, k: usize) -> &u64 {
        &self.0[k]
    }
}

/// Draws `shots` outcomes from `p` with a ChaCha8 stream seeded by `seed`.
///
/// Each shot takes one uniform `u ∈ [0, 1)` and picks the first outcome whose
/// cumulative probability exceeds `u`, so zero-probability outcomes are
/// never drawn.
pub fn sample_counts(p: &ProbVector, shots: u64, seed: u64) -> Result<Counts> {
    if shots == 0 {
        return Err(Error::ZeroShots);
    }
    let mut cumulative = [0.0; 4];
    let mut acc = 0.0;
    for (c, v) in cumulative.iter_mut().zip(p.0) {
        acc += v;
        *c = acc;
    }
    // Rounding can leave the total a hair below 1; such draws go to the last
    // outcome with nonzero mass.
    let fallback = (0..4).rev().find(|&k| p.0[k] > 0.0).unwrap_or(0);
    let mut rng = rng::seeded(seed);
    let mut counts = [0u64; 4];
    for _ in 0..shots {
        let u = rng::uniform(&mut rng);
        let k = cumulative.iter().position(|&c| u < c).unwrap_or(fallback);
        counts[k] += 1;
    }
    Ok(Counts(counts))
}
