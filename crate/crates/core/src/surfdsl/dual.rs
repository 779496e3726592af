use std::ops::{Add, Div, Mul, Neg, Sub};

/// Forward-mode dual number carrying `N` partial derivatives.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Dual<const N: usize> {
    pub value: f64,
    pub partials: [f64; N],
}

impl<const N: usize> Dual<N> {
    pub fn constant(value: f64) -> Self {
        Dual { value, partials: [0.0; N] }
    }

    /// Independent variable seeded along direction `index`.
    pub fn variable(value: f64, index: usize) -> Self {
        let mut partials = [0.0; N];
        partials[index] = 1.0;
        Dual { value, partials }
    }

    pub fn new(value: f64, partials: [f64; N]) -> Self {
        Dual { value, partials }
    }

    pub fn has_derivative(&self) -> bool {
        self.partials.iter().any(|&p| p != 0.0)
    }

    /// Chain rule for a scalar function with value `f` and slope `df` at `self.value`.
    pub(crate) fn chain(self, f: f64, df: f64) -> Self {
        Dual { value: f, partials: self.partials.map(|p| p * df) }
    }
}

impl<const N: usize> Add for Dual<N> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        let mut partials = self.partials;
        for (p, q) in partials.iter_mut().zip(o.partials) {
            *p += q;
        }
        Dual { value: self.value + o.value, partials }
    }
}

impl<const N: usize> Sub for Dual<N> {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        self + (-o)
    }
}

impl<const N: usize> Neg for Dual<N> {
    type Output = Self;
    fn neg(self) -> Self {
        Dual { value: -self.value, partials: self.partials.map(|p| -p) }
    }
}

impl<const N: usize> Mul for Dual<N> {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        let mut partials = [0.0; N];
        for (i, p) in partials.iter_mut().enumerate() {
            *p = self.partials[i] * o.value + self.value * o.partials[i];
        }
        Dual { value: self.value * o.value, partials }
    }
}

impl<const N: usize> Mul<f64> for Dual<N> {
    type Output = Self;
    fn mul(self, k: f64) -> Self {
        Dual { value: self.value * k, partials: self.partials.map(|p| p * k) }
    }
}

impl<const N: usize> Div for Dual<N> {
    type Output = Self;
    fn div(self, o: Self) -> Self {
        let q = self.value / o.value;
        let mut partials = [0.0; N];
        for (i, p) in partials.iter_mut().enumerate() {
            *p = (self.partials[i] - q * o.partials[i]) / o.value;
        }
        Dual { value: q, partials }
    }
}
