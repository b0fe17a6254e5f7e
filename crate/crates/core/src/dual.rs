//! Forward-mode dual numbers `a + ȧε` with `ε² = 0`.

use core::ops::{Add, AddAssign, Div, Mul, Neg, Sub};

/// A value paired with its derivative along one input direction.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct DualValue {
    /// Primal value.
    pub value: f64,
    /// Directional derivative.
    pub tangent: f64,
}

impl DualValue {
    /// `(value, tangent)`.
    pub const fn new(value: f64, tangent: f64) -> Self {
        Self { value, tangent }
    }

    /// A constant: zero tangent.
    pub const fn constant(value: f64) -> Self {
        Self::new(value, 0.0)
    }

    /// The independent variable: unit tangent.
    pub const fn variable(value: f64) -> Self {
        Self::new(value, 1.0)
    }

    /// Applies a scalar function given its value and derivative at `self.value`.
    #[inline]
    fn chain(self, f: f64, df: f64) -> Self {
        Self::new(f, df * self.tangent)
    }

    /// Hyperbolic tangent; `tanh' = 1 - tanh²`.
    pub fn tanh(self) -> Self {
        let t = libm::tanh(self.value);
        self.chain(t, 1.0 - t * t)
    }

    /// Sine.
    pub fn sin(self) -> Self {
        self.chain(libm::sin(self.value), libm::cos(self.value))
    }

    /// Cosine.
    pub fn cos(self) -> Self {
        self.chain(libm::cos(self.value), -libm::sin(self.value))
    }

    /// Exponential.
    pub fn exp(self) -> Self {
        let e = libm::exp(self.value);
        self.chain(e, e)
    }

    /// Square.
    pub fn square(self) -> Self {
        self * self
    }
}

impl From<f64> for DualValue {
    fn from(value: f64) -> Self {
        Self::constant(value)
    }
}

impl Add for DualValue {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self::new(self.value + rhs.value, self.tangent + rhs.tangent)
    }
}

impl AddAssign for DualValue {
    fn add_assign(&mut self, rhs: Self) {
        *self = *self + rhs;
    }
}

impl Sub for DualValue {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Self::new(self.value - rhs.value, self.tangent - rhs.tangent)
    }
}

impl Mul for DualValue {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        Self::new(
            self.value * rhs.value,
            self.value * rhs.tangent + self.tangent * rhs.value,
        )
    }
}

impl Mul<f64> for DualValue {
    type Output = Self;
    fn mul(self, rhs: f64) -> Self {
        Self::new(self.value * rhs, self.tangent * rhs)
    }
}

impl Div for DualValue {
    type Output = Self;
    fn div(self, rhs: Self) -> Self {
        let v = self.value / rhs.value;
        Self::new(v, (self.tangent - v * rhs.tangent) / rhs.value)
    }
}

impl Neg for DualValue {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.value, -self.tangent)
    }
}
