//! The integral pairing `b` and the lattice-sum pairings `t_{g1,g2}`.

use alloc::vec::Vec;

use num_complex::Complex64;

use super::gauss::{integrate, lattice_sum};
use super::packet::GaussianPacket;
use crate::error::{domain, Error, Result};
use crate::index::index_set;
use crate::sl2::{compose, SL2Mat};

fn require_legs(f: &GaussianPacket, legs: i64, what: &str) -> Result<()> {
    if f.legs() as i64 != legs.abs() {
        return Err(domain(alloc::format!("{what}: packet has {} legs, expected {}", f.legs(), legs.abs())));
    }
    Ok(())
}

/// `b(f1 ⊗ f2) = Σ_α ∫ f1(x/rk(g,θ), α) f2(x, −aα) dx`
/// for `f1 ∈ E_{g⁻¹}(gθ)` and `f2 ∈ E_g(θ)`.
pub fn pairing_b(f1: &GaussianPacket, f2: &GaussianPacket, g: &SL2Mat, theta: f64) -> Result<Complex64> {
    if g.c == 0 {
        return Err(Error::DegenerateDegree);
    }
    require_legs(f1, g.c, "first factor")?;
    require_legs(f2, g.c, "second factor")?;
    let r = g.rk(theta);
    if r.abs() < crate::sl2::RANK_EPS {
        return Err(Error::ZeroRank(r));
    }
    let zero = Complex64::new(0.0, 0.0);
    let scale = Complex64::new(1.0 / r, 0.0);
    let mut total = zero;
    for t1 in f1.terms() {
        let leg2 = f2.leg_index(-g.a * t1.alpha as i64);
        let s1 = t1.gauss.compose_affine(zero, scale);
        for t2 in f2.terms().iter().filter(|t| t.alpha == leg2) {
            total += integrate(&s1.mul(&t2.gauss))?;
        }
    }
    Ok(total)
}

/// Pointwise values of a pairing with the certified total truncation error.
#[derive(Debug, Clone, PartialEq)]
pub struct PairingValues {
    pub values: Vec<Complex64>,
    pub bound: f64,
}

/// `t_{g1,g2}(f1 ⊗ f2)(x, α)` at each sample point, for `f1 ∈ E_{g1}(g2θ)`,
/// `f2 ∈ E_{g2}(θ)`, in the generic case where `g1`, `g2`, `g1g2` all have nonzero degree.
pub fn pairing_t(
    g1: &SL2Mat,
    g2: &SL2Mat,
    theta: f64,
    f1: &GaussianPacket,
    f2: &GaussianPacket,
    points: &[(f64, i64)],
    tol: f64,
) -> Result<PairingValues> {
    let g12 = compose(g1, g2)?;
    if g1.c == 0 || g2.c == 0 || g12.c == 0 {
        return Err(Error::DegenerateDegree);
    }
    require_legs(f1, g1.c, "first factor")?;
    require_legs(f2, g2.c, "second factor")?;
    if !(tol > 0.0) {
        return Err(domain("tolerance must be positive"));
    }
    let r2 = g2.rk(theta);
    let r1 = g1.rk(g2.act(theta)?);
    let (c1, c2, c12) = (g1.c as f64, g2.c as f64, g12.c as f64);
    let k1 = Complex64::new(r1 / (c1 * c12), 0.0);
    let k2 = Complex64::new(-1.0 / (c2 * c12), 0.0);
    let pairs = (f1.terms().len() * f2.terms().len()).max(1) as f64;
    let tol_each = tol / pairs;

    let mut values = Vec::with_capacity(points.len());
    let mut bound: f64 = 0.0;
    for &(x, alpha) in points {
        let mut v = Complex64::new(0.0, 0.0);
        let mut b = 0.0;
        for t1 in f1.terms() {
            let s1 = t1.gauss.compose_affine(Complex64::new(x / r2, 0.0), k1);
            for t2 in f2.terms() {
                let prog = index_set(g1, g2, t1.alpha as i64, t2.alpha as i64, alpha)?;
                if prog.empty {
                    continue;
                }
                let s2 = t2.gauss.compose_affine(Complex64::new(x, 0.0), k2);
                let sum = lattice_sum(&s1.mul(&s2), &prog, tol_each)?;
                v += sum.value;
                b += sum.bound;
            }
        }
        values.push(v);
        bound = bound.max(b);
    }
    Ok(PairingValues { values, bound })
}
