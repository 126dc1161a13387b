//! Theta-type structure constants for products of holomorphic sections.

use alloc::format;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::analytic::{lattice_sum, two_pi_i, Gaussian, Poly};
use crate::error::{domain, Error, Result};
use crate::index::index_set;
use crate::sl2::{compose, quotient, SL2Mat, TorusParams, RANK_EPS};

/// Default truncation tolerance.
pub const DEFAULT_TOL: f64 = 1e-12;

/// `c_{α1,α2}^α` for `α1 mod c1`, `α2 mod c2`, `α mod c12`, with a certified bound on the
/// truncation error of every entry.
#[derive(Debug, Clone, PartialEq)]
pub struct StructureConstantsTable {
    pub g1: SL2Mat,
    pub g2: SL2Mat,
    pub params: TorusParams,
    pub z1: Complex64,
    pub z2: Complex64,
    pub tol: f64,
    pub tail_bound: f64,
    values: Vec<Complex64>,
}

impl StructureConstantsTable {
    /// Reassembles a table from stored values, laid out as `(α1·c2 + α2)·c12 + α`.
    #[allow(clippy::too_many_arguments)]
    pub fn from_parts(
        g1: SL2Mat,
        g2: SL2Mat,
        params: TorusParams,
        z1: Complex64,
        z2: Complex64,
        tol: f64,
        tail_bound: f64,
        values: Vec<Complex64>,
    ) -> Result<Self> {
        let g12 = compose(&g1, &g2)?;
        let expected = (g1.c * g2.c * g12.c).unsigned_abs() as usize;
        if values.len() != expected || !(tail_bound >= 0.0) {
            return Err(Error::ShapeMismatch(format!("{} values for a table of size {expected}", values.len())));
        }
        Ok(StructureConstantsTable { g1, g2, params, z1, z2, tol, tail_bound, values })
    }

    /// `(c1, c2, c12)`.
    pub fn dims(&self) -> (usize, usize, usize) {
        let c12 = self.g1.c * self.g2.a + self.g1.d * self.g2.c;
        (self.g1.c as usize, self.g2.c as usize, c12 as usize)
    }

    fn offset(&self, a1: i64, a2: i64, a: i64) -> usize {
        let (c1, c2, c12) = self.dims();
        let a1 = a1.rem_euclid(c1 as i64) as usize;
        let a2 = a2.rem_euclid(c2 as i64) as usize;
        let a = a.rem_euclid(c12 as i64) as usize;
        (a1 * c2 + a2) * c12 + a
    }

    /// Entry for arbitrary integer representatives of the residues.
    pub fn get(&self, a1: i64, a2: i64, a: i64) -> Complex64 {
        self.values[self.offset(a1, a2, a)]
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    /// `(α1, α2, α, value)` in storage order.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, usize, Complex64)> + '_ {
        let (_, c2, c12) = self.dims();
        self.values
            .iter()
            .enumerate()
            .map(move |(i, v)| (i / (c2 * c12), (i / c12) % c2, i % c12, *v))
    }
}

/// `deg(g1) z2 − rk(g1g2, θ) deg(g2) z1`, the only way `θ` enters the constants.
pub fn twist_combination(g1: &SL2Mat, g2: &SL2Mat, theta: f64, z1: Complex64, z2: Complex64) -> Result<Complex64> {
    let g12 = compose(g1, g2)?;
    Ok(z2 * g1.c as f64 - z1 * (g12.rk(theta) * g2.c as f64))
}

fn check_positive(g1: &SL2Mat, g2: &SL2Mat, theta: f64) -> Result<()> {
    if g1.c <= 0 || g2.c <= 0 {
        return Err(domain(format!("degrees must be positive (got {} and {})", g1.c, g2.c)));
    }
    let r2 = g2.rk(theta);
    if !(r2 > RANK_EPS) {
        return Err(domain(format!("rk(g2, θ) = {r2} must be positive")));
    }
    let r1 = g1.rk(g2.act(theta)?);
    if !(r1 > RANK_EPS) {
        return Err(domain(format!("rk(g1, g2θ) = {r1} must be positive")));
    }
    Ok(())
}

/// The table of
/// `c_{α1,α2}^α = Σ_{m ∈ I_{g1,g2}(α1,α2,α)} e[(−τm²/2 + (c1z2 − rk(g1g2,θ)c2z1)m)/(c1c2c12)]`.
pub fn structure_constants(
    g1: &SL2Mat,
    g2: &SL2Mat,
    params: TorusParams,
    z1: Complex64,
    z2: Complex64,
    tol: f64,
) -> Result<StructureConstantsTable> {
    if !(params.tau.im < 0.0) {
        return Err(domain("Im(τ) must be negative"));
    }
    if !(tol > 0.0) {
        return Err(domain("tolerance must be positive"));
    }
    check_positive(g1, g2, params.theta)?;
    let g12 = compose(g1, g2)?;
    if g12.c <= 0 {
        return Err(Error::InternalInvariantViolation(format!("deg(g1g2) = {} is not positive", g12.c)));
    }
    let denom = (g1.c * g2.c * g12.c) as f64;
    let quad = two_pi_i(-params.tau / denom);
    let lin = two_pi_i(twist_combination(g1, g2, params.theta, z1, z2)? / denom);
    let summand = Gaussian::new(Poly::one(), quad, lin);

    let (c1, c2, c12) = (g1.c, g2.c, g12.c);
    let mut values = Vec::with_capacity((c1 * c2 * c12) as usize);
    let mut tail_bound: f64 = 0.0;
    for a1 in 0..c1 {
        for a2 in 0..c2 {
            for a in 0..c12 {
                let sum = lattice_sum(&summand, &index_set(g1, g2, a1, a2, a)?, tol)?;
                values.push(sum.value);
                tail_bound = tail_bound.max(sum.bound);
            }
        }
    }
    Ok(StructureConstantsTable { g1: *g1, g2: *g2, params, z1, z2, tol, tail_bound, values })
}

/// Arguments of [`structure_constants`] that describe composing holomorphic maps
/// `E1 → E2 → E3` between `E_{gi}^{zi}(θ)`: labels `g3g2⁻¹` and `g2g1⁻¹` over `g1θ`,
/// twists `rk(g1,θ)(z3 − z2)` and `rk(g1,θ)(z2 − z1)`.
pub fn composition_arguments(
    g: [&SL2Mat; 3],
    z: [Complex64; 3],
    theta: f64,
) -> Result<(SL2Mat, SL2Mat, f64, Complex64, Complex64)> {
    let h1 = quotient(g[2], g[1])?;
    let h2 = quotient(g[1], g[0])?;
    let r1 = g[0].rk(theta);
    Ok((h1, h2, g[0].act(theta)?, (z[2] - z[1]) * r1, (z[1] - z[0]) * r1))
}

/// `c_{α,β}^γ(g1, g2, g3; z; θ)`: the table for composing `E1 → E2 → E3`.
pub fn composition_constants(
    g: [&SL2Mat; 3],
    z: [Complex64; 3],
    params: TorusParams,
    tol: f64,
) -> Result<StructureConstantsTable> {
    for gi in g {
        if !(gi.rk(params.theta) > RANK_EPS) {
            return Err(domain("objects must have positive rank"));
        }
    }
    let (h1, h2, base, w1, w2) = composition_arguments(g, z, params.theta)?;
    structure_constants(&h1, &h2, TorusParams { theta: base, tau: params.tau }, w1, w2, tol)
}

/// `|a − b| ≤ tol·max(1, |a|) + slack`.
fn agree(a: Complex64, b: Complex64, tol: f64, slack: f64) -> bool {
    (a - b).norm() <= tol * a.norm().max(1.0) + slack
}

fn sign_pattern(g: [&SL2Mat; 3], theta: f64) -> Result<[bool; 3]> {
    let mut out = [false; 3];
    for (o, gi) in out.iter_mut().zip(g) {
        let r = gi.rk(theta);
        if r.abs() < RANK_EPS {
            return Err(Error::ZeroRank(r));
        }
        *o = r > 0.0;
    }
    Ok(out)
}

/// Compares composition constants at `θ` with those at `θ′` after rescaling the twists
/// by `λ(g) = rk(g,θ)/rk(g,θ′)`.
///
/// With all `rk(gi, θ′) > 0` the tables must agree index by index. With `rk(g1, θ′) < 0`
/// and the other two positive the identity is the cyclic one
/// `c_{α,β}^γ(g1,g2,g3; z; θ) = c_{−d13γ,α}^{−d12β}(g2,g3,−g1; λ2z2,λ3z3,λ1z1; θ′)`,
/// with `d1j` the lower-right entry of `gj g1⁻¹`.
#[allow(clippy::too_many_arguments)]
pub fn cyclic_identity_check(
    g1: &SL2Mat,
    g2: &SL2Mat,
    g3: &SL2Mat,
    z1: Complex64,
    z2: Complex64,
    z3: Complex64,
    theta: f64,
    theta_prime: f64,
    tau: Complex64,
    tol: f64,
) -> Result<bool> {
    let lam = |g: &SL2Mat| g.rk(theta) / g.rk(theta_prime);
    let z = [z1, z2, z3];
    let zl = [z1 * lam(g1), z2 * lam(g2), z3 * lam(g3)];
    cyclic_identity_with(g1, g2, g3, z, zl, theta, theta_prime, tau, tol)
}

/// As [`cyclic_identity_check`] with the rescaled twists supplied by the caller.
#[allow(clippy::too_many_arguments)]
pub fn cyclic_identity_with(
    g1: &SL2Mat,
    g2: &SL2Mat,
    g3: &SL2Mat,
    z: [Complex64; 3],
    zl: [Complex64; 3],
    theta: f64,
    theta_prime: f64,
    tau: Complex64,
    tol: f64,
) -> Result<bool> {
    let params = TorusParams::new(theta, tau)?;
    let params_prime = TorusParams::new(theta_prime, tau)?;
    let lhs = composition_constants([g1, g2, g3], z, params, tol)?;
    let (c23, c12, _) = lhs.dims();
    let c13 = quotient(g3, g1)?.c;
    match sign_pattern([g1, g2, g3], theta_prime)? {
        [true, true, true] => {
            let rhs = composition_constants([g1, g2, g3], zl, params_prime, tol)?;
            let slack = lhs.tail_bound + rhs.tail_bound;
            Ok(lhs.values().iter().zip(rhs.values()).all(|(a, b)| agree(*a, *b, tol, slack)))
        }
        [false, true, true] => {
            let m1 = -*g1;
            let rhs = composition_constants([g2, g3, &m1], [zl[1], zl[2], zl[0]], params_prime, tol)?;
            let d13 = quotient(g3, g1)?.d;
            let d12 = quotient(g2, g1)?.d;
            let slack = lhs.tail_bound + rhs.tail_bound;
            for a in 0..c23 as i64 {
                for b in 0..c12 as i64 {
                    for c in 0..c13 {
                        let l = lhs.get(a, b, c);
                        let r = rhs.get(-d13 * c, a, -d12 * b);
                        if !agree(l, r, tol, slack) {
                            return Ok(false);
                        }
                    }
                }
            }
            Ok(true)
        }
        _ => Err(domain("sign pattern at θ′ is not one of the two handled cases")),
    }
}
