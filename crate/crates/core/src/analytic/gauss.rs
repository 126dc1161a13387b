//! Closed-form Gaussian integrals and certified Gaussian lattice sums.

use alloc::format;

use core::f64::consts::PI;

use num_complex::Complex64;

use super::packet::Gaussian;
use crate::error::{Error, Result};
use crate::index::ArithProgression;

/// Largest half-width of a summation window.
pub const MAX_WINDOW: i64 = 100_000;

/// `∫_ℝ p(x) exp(A x²/2 + B x) dx` for `Re A < 0`.
pub fn integrate(g: &Gaussian) -> Result<Complex64> {
    let (a, b) = (g.quad, g.lin);
    if !(a.re < 0.0) {
        return Err(Error::NonIntegrable(format!("quadratic coefficient {a}")));
    }
    let coeffs = g.poly.coeffs();
    if coeffs.is_empty() {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let m0 = (Complex64::new(-2.0 * PI, 0.0) / a).sqrt() * (-(b * b) / (a * 2.0)).exp();
    let mut prev = Complex64::new(0.0, 0.0);
    let mut cur = m0;
    let mut total = coeffs[0] * m0;
    for (k, c) in coeffs.iter().enumerate().skip(1) {
        let next = -(b * cur + prev * (k - 1) as f64) / a;
        prev = cur;
        cur = next;
        total += c * cur;
    }
    Ok(total)
}

/// A truncated lattice sum together with a bound on the discarded tail.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LatticeSum {
    pub value: Complex64,
    pub bound: f64,
    pub window: i64,
}

impl LatticeSum {
    pub const ZERO: LatticeSum = LatticeSum { value: Complex64::new(0.0, 0.0), bound: 0.0, window: 0 };
}

/// Bound on `Σ_{|k|>M} |g(k)|` through a geometric majorant, when it applies.
fn tail_bound(g: &Gaussian, window: i64) -> Option<f64> {
    let s = -g.quad.re / 2.0;
    let t = g.lin.re.abs();
    let amp = g.poly.l1_norm();
    let d = g.poly.degree() as f64;
    let m = window as f64;
    let log_ratio = d * (1.0 / (m + 1.0)).ln_1p() - s * (2.0 * m + 3.0) + t;
    if log_ratio >= 0.0 {
        return None;
    }
    let log_head = amp.ln() + d * (m + 1.0).ln() - s * (m + 1.0) * (m + 1.0) + t * (m + 1.0);
    Some(2.0 * log_head.exp() / (1.0 - log_ratio.exp()))
}

/// `Σ_{n ∈ prog} g(n)` with a certified tail below `tol`.
pub fn lattice_sum(g: &Gaussian, prog: &ArithProgression, tol: f64) -> Result<LatticeSum> {
    if prog.empty || g.poly.is_zero() {
        return Ok(LatticeSum::ZERO);
    }
    if !(g.quad.re < 0.0) {
        return Err(Error::ConvergenceError(format!("no Gaussian decay (quad = {})", g.quad)));
    }
    let (res, modulus) = (prog.residue as f64, prog.modulus as f64);
    let peak = -g.lin.re / g.quad.re;
    let j0 = ((peak - res) / modulus).round();
    if !j0.is_finite() || j0.abs() > 1e15 {
        return Err(Error::ConvergenceError(format!("summand peaks out of range ({peak})")));
    }
    let h = g.compose_affine(Complex64::new(res + modulus * j0, 0.0), Complex64::new(modulus, 0.0));
    let amp = h.poly.l1_norm();
    if !amp.is_finite() {
        return Err(Error::ConvergenceError("summand overflows at its peak".into()));
    }
    let mut window = 0;
    let bound = loop {
        if let Some(b) = tail_bound(&h, window) {
            if b <= tol {
                break b;
            }
        }
        window += 1;
        if window > MAX_WINDOW {
            return Err(Error::ConvergenceError(format!("window cap {MAX_WINDOW} reached")));
        }
    };
    let value = (-window..=window).map(|k| h.eval(Complex64::new(k as f64, 0.0))).sum();
    Ok(LatticeSum { value, bound, window })
}
