//! Dense complex polynomials in one variable.

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

/// Coefficients in ascending order; trailing exact zeros are trimmed.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Poly(Vec<Complex64>);

impl Poly {
    pub fn new(mut coeffs: Vec<Complex64>) -> Self {
        while coeffs.last().is_some_and(|c| *c == Complex64::new(0.0, 0.0)) {
            coeffs.pop();
        }
        Poly(coeffs)
    }

    pub fn zero() -> Self {
        Poly(Vec::new())
    }

    pub fn constant(c: Complex64) -> Self {
        Poly::new(vec![c])
    }

    pub fn one() -> Self {
        Poly::constant(Complex64::new(1.0, 0.0))
    }

    /// `c xᵏ`.
    pub fn monomial(k: usize, c: Complex64) -> Self {
        let mut v = vec![Complex64::new(0.0, 0.0); k + 1];
        v[k] = c;
        Poly::new(v)
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// Degree, with the zero polynomial reported as 0.
    pub fn degree(&self) -> usize {
        self.0.len().saturating_sub(1)
    }

    pub fn eval(&self, x: Complex64) -> Complex64 {
        self.0.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, c| acc * x + c)
    }

    pub fn scale(&self, s: Complex64) -> Poly {
        Poly::new(self.0.iter().map(|c| c * s).collect())
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let n = self.0.len().max(other.0.len());
        let zero = Complex64::new(0.0, 0.0);
        Poly::new(
            (0..n)
                .map(|i| self.0.get(i).copied().unwrap_or(zero) + other.0.get(i).copied().unwrap_or(zero))
                .collect(),
        )
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![Complex64::new(0.0, 0.0); self.0.len() + other.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in other.0.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly::new(out)
    }

    pub fn derivative(&self) -> Poly {
        Poly::new(
            self.0
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * k as f64)
                .collect(),
        )
    }

    /// `y ↦ p(u + v y)`.
    pub fn compose_affine(&self, u: Complex64, v: Complex64) -> Poly {
        let lin = Poly::new(vec![u, v]);
        self.0
            .iter()
            .rev()
            .fold(Poly::zero(), |acc, c| acc.mul(&lin).add(&Poly::constant(*c)))
    }

    /// Sum of coefficient moduli.
    pub fn l1_norm(&self) -> f64 {
        self.0.iter().map(|c| c.norm()).sum()
    }
}
