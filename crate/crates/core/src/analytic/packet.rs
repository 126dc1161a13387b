//! Finite sums of polynomial-times-Gaussian terms on `ℝ × ℤ/cℤ`.

use alloc::format;
use alloc::vec::Vec;

use num_complex::Complex64;

use super::poly::Poly;
use crate::error::{Error, Result};

/// `x ↦ poly(x)·exp(quad·x²/2 + lin·x)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Gaussian {
    pub poly: Poly,
    pub quad: Complex64,
    pub lin: Complex64,
}

impl Gaussian {
    pub fn new(poly: Poly, quad: Complex64, lin: Complex64) -> Self {
        Gaussian { poly, quad, lin }
    }

    pub fn eval(&self, x: Complex64) -> Complex64 {
        self.poly.eval(x) * (self.quad * x * x * 0.5 + self.lin * x).exp()
    }

    /// `y ↦ self(u + v y)`.
    pub fn compose_affine(&self, u: Complex64, v: Complex64) -> Gaussian {
        let k = (self.quad * u * u * 0.5 + self.lin * u).exp();
        Gaussian {
            poly: self.poly.compose_affine(u, v).scale(k),
            quad: self.quad * v * v,
            lin: (self.quad * u + self.lin) * v,
        }
    }

    /// `x ↦ self(x − s)`.
    pub fn translate(&self, s: f64) -> Gaussian {
        self.compose_affine(Complex64::new(-s, 0.0), Complex64::new(1.0, 0.0))
    }

    pub fn mul(&self, other: &Gaussian) -> Gaussian {
        Gaussian {
            poly: self.poly.mul(&other.poly),
            quad: self.quad + other.quad,
            lin: self.lin + other.lin,
        }
    }

    pub fn scale(&self, s: Complex64) -> Gaussian {
        Gaussian { poly: self.poly.scale(s), quad: self.quad, lin: self.lin }
    }

    pub fn is_integrable(&self) -> bool {
        self.quad.re < 0.0
    }
}

/// A term of a packet, supported on one leg.
#[derive(Debug, Clone, PartialEq)]
pub struct Term {
    pub alpha: usize,
    pub gauss: Gaussian,
}

/// An element of the Schwartz space on `ℝ × ℤ/cℤ` of the form
/// `Σ poly(x)·exp(quad x²/2 + lin x)·δ_alpha`.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussianPacket {
    legs: usize,
    terms: Vec<Term>,
}

impl GaussianPacket {
    pub fn zero(legs: usize) -> Self {
        assert!(legs > 0, "a packet needs at least one leg");
        GaussianPacket { legs, terms: Vec::new() }
    }

    /// A single-term packet; the term must decay.
    pub fn single(legs: usize, alpha: i64, gauss: Gaussian) -> Result<Self> {
        let mut p = GaussianPacket::zero(legs);
        p.push(alpha, gauss)?;
        Ok(p)
    }

    pub fn legs(&self) -> usize {
        self.legs
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn leg_index(&self, alpha: i64) -> usize {
        alpha.rem_euclid(self.legs as i64) as usize
    }

    /// Adds a term, merging with any term of identical exponent on the same leg.
    pub fn push(&mut self, alpha: i64, gauss: Gaussian) -> Result<()> {
        if !gauss.is_integrable() {
            return Err(Error::NonIntegrable(format!("quadratic coefficient {}", gauss.quad)));
        }
        if gauss.poly.is_zero() {
            return Ok(());
        }
        let alpha = self.leg_index(alpha);
        if let Some(pos) = self.terms.iter().position(|t| {
            t.alpha == alpha
                && t.gauss.quad.re.to_bits() == gauss.quad.re.to_bits()
                && t.gauss.quad.im.to_bits() == gauss.quad.im.to_bits()
                && t.gauss.lin.re.to_bits() == gauss.lin.re.to_bits()
                && t.gauss.lin.im.to_bits() == gauss.lin.im.to_bits()
        }) {
            let merged = self.terms[pos].gauss.poly.add(&gauss.poly);
            if merged.is_zero() {
                self.terms.remove(pos);
            } else {
                self.terms[pos].gauss.poly = merged;
            }
        } else {
            self.terms.push(Term { alpha, gauss });
        }
        Ok(())
    }

    /// Rebuilds a packet from transformed terms.
    pub fn map_terms(&self, legs: usize, f: impl Fn(&Term) -> (i64, Gaussian)) -> Result<Self> {
        let mut out = GaussianPacket::zero(legs);
        for t in &self.terms {
            let (alpha, g) = f(t);
            out.push(alpha, g)?;
        }
        Ok(out)
    }

    pub fn add(&self, other: &GaussianPacket) -> Result<Self> {
        if self.legs != other.legs {
            return Err(Error::ShapeMismatch(format!("{} vs {} legs", self.legs, other.legs)));
        }
        let mut out = self.clone();
        for t in &other.terms {
            out.push(t.alpha as i64, t.gauss.clone())?;
        }
        Ok(out)
    }

    pub fn scale(&self, s: Complex64) -> Self {
        let mut out = GaussianPacket::zero(self.legs);
        for t in &self.terms {
            out.push(t.alpha as i64, t.gauss.scale(s)).expect("scaling preserves decay");
        }
        out
    }

    pub fn sub(&self, other: &GaussianPacket) -> Result<Self> {
        self.add(&other.scale(Complex64::new(-1.0, 0.0)))
    }

    /// Multiplies every term by a polynomial in `x`.
    pub fn mul_poly(&self, p: &Poly) -> Self {
        let mut out = GaussianPacket::zero(self.legs);
        for t in &self.terms {
            let g = Gaussian { poly: t.gauss.poly.mul(p), ..t.gauss.clone() };
            out.push(t.alpha as i64, g).expect("polynomial factor preserves decay");
        }
        out
    }

    pub fn eval(&self, x: f64, alpha: i64) -> Complex64 {
        let alpha = self.leg_index(alpha);
        let x = Complex64::new(x, 0.0);
        self.terms
            .iter()
            .filter(|t| t.alpha == alpha)
            .map(|t| t.gauss.eval(x))
            .sum()
    }
}
