//! Kernel and cokernel of `f ↦ f′ + (ax + z) f` in a truncated Hermite-function basis.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{domain, Error, Result};

/// Singular values within this factor of the threshold make the count ambiguous.
const BAND: f64 = 100.0;

/// Matrix of `±d/dx + a x + z` from the first `n` to the first `n + 1` Hermite functions
/// scaled by `κ = |a|^{1/2}`.
fn operator_matrix(a: Complex64, z: Complex64, n: usize, sign: f64) -> DMatrix<Complex64> {
    let kappa = a.norm().sqrt();
    let s2 = core::f64::consts::SQRT_2;
    // x = (A + A†)/(κ√2), d/dx = κ(A − A†)/√2
    let lower = (a / kappa + sign * kappa) / s2;
    let raise = (a / kappa - sign * kappa) / s2;
    let mut m = DMatrix::<Complex64>::zeros(n + 1, n);
    for j in 0..n {
        m[(j, j)] = z;
        if j > 0 {
            m[(j - 1, j)] = lower * (j as f64).sqrt();
        }
        m[(j + 1, j)] = raise * ((j + 1) as f64).sqrt();
    }
    m
}

fn small_count(m: &DMatrix<Complex64>, threshold: f64) -> Result<usize> {
    let sv = m.singular_values();
    let top = sv.iter().copied().fold(0.0, f64::max);
    if !(top > 0.0) || !top.is_finite() {
        return Err(Error::IndeterminateRank);
    }
    let mut count = 0;
    for &s in sv.iter() {
        let r = s / top;
        if r > threshold / BAND && r < threshold * BAND {
            return Err(Error::IndeterminateRank);
        }
        if r <= threshold / BAND {
            count += 1;
        }
    }
    Ok(count)
}

/// `(dim ker, dim coker)` of `f ↦ f′ + (ax + z) f` on Schwartz space.
///
/// The kernel count comes from the rectangular truncation of the operator; the cokernel
/// count from the same truncation of its transpose `−d/dx + ax + z`.
pub fn kernel_cokernel_dims(a: Complex64, z: Complex64, hermite_dim: usize, threshold: f64) -> Result<(usize, usize)> {
    if a.re == 0.0 || !a.re.is_finite() {
        return Err(domain("the quadratic coefficient needs a nonzero real part"));
    }
    if hermite_dim < 64 {
        return Err(domain("Hermite truncation must have at least 64 functions"));
    }
    if !(threshold > 0.0 && threshold < 1.0) {
        return Err(domain("threshold must lie in (0, 1)"));
    }
    let ker = small_count(&operator_matrix(a, z, hermite_dim, 1.0), threshold)?;
    let coker = small_count(&operator_matrix(a, z, hermite_dim, -1.0), threshold)?;
    Ok((ker, coker))
}

#[cfg(test)]
mod tests {
    use super::*;
    use core::f64::consts::TAU;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn reference_operators() {
        assert_eq!(kernel_cokernel_dims(c(TAU, 0.0), c(0.0, 0.0), 256, 1e-8).unwrap(), (1, 0));
        assert_eq!(kernel_cokernel_dims(c(-TAU, 0.0), c(0.0, 0.0), 256, 1e-8).unwrap(), (0, 1));
        assert_eq!(kernel_cokernel_dims(c(TAU, 0.0), c(3.0, 4.0), 256, 1e-8).unwrap(), (1, 0));
    }

    #[test]
    fn preconditions() {
        assert!(kernel_cokernel_dims(c(0.0, 1.0), c(0.0, 0.0), 256, 1e-8).is_err());
        assert!(kernel_cokernel_dims(c(1.0, 0.0), c(0.0, 0.0), 32, 1e-8).is_err());
    }
}
