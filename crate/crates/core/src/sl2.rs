//! Integer unimodular matrices and the invariants attached to them.

use core::fmt;
use core::ops::Neg;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Ranks with absolute value below this are treated as zero.
pub const RANK_EPS: f64 = 1e-12;

/// An element of SL2(Z), stored as `[[a, b], [c, d]]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SL2Mat {
    pub a: i64,
    pub b: i64,
    pub c: i64,
    pub d: i64,
}

/// The pair (θ, τ) fixing a noncommutative torus with complex structure.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TorusParams {
    pub theta: f64,
    pub tau: Complex64,
}

/// Output of [`invariants_of`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Invariants {
    pub deg: i64,
    pub rk: f64,
    pub mu: f64,
    pub gtheta: f64,
}

impl TorusParams {
    pub fn new(theta: f64, tau: Complex64) -> Result<Self> {
        if !(tau.im < 0.0) || !theta.is_finite() || !tau.re.is_finite() {
            return Err(crate::error::domain("tau must have negative imaginary part"));
        }
        Ok(TorusParams { theta, tau })
    }
}

fn mul_add(x: i64, y: i64, u: i64, v: i64) -> Result<i64> {
    x.checked_mul(y)
        .and_then(|p| u.checked_mul(v).and_then(|q| p.checked_add(q)))
        .ok_or(Error::Overflow("matrix product"))
}

impl SL2Mat {
    pub const IDENTITY: SL2Mat = SL2Mat { a: 1, b: 0, c: 0, d: 1 };

    /// Builds a matrix and checks the determinant.
    pub fn new(a: i64, b: i64, c: i64, d: i64) -> Result<Self> {
        let det = a as i128 * d as i128 - b as i128 * c as i128;
        if det != 1 {
            return Err(Error::NotUnimodular { det });
        }
        Ok(SL2Mat { a, b, c, d })
    }

    /// Some matrix with bottom row `(c, d)`; the pair must be coprime.
    pub fn with_bottom_row(c: i64, d: i64) -> Result<Self> {
        let (gcd, x, y) = crate::index::egcd(d as i128, c as i128);
        if gcd.abs() != 1 {
            return Err(crate::error::domain("bottom row is not coprime"));
        }
        // a d - b c = 1 with a = x * gcd, b = -y * gcd
        let a = (x * gcd) as i64;
        let b = (-y * gcd) as i64;
        SL2Mat::new(a, b, c, d)
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::IDENTITY
    }

    pub fn det(&self) -> i128 {
        self.a as i128 * self.d as i128 - self.b as i128 * self.c as i128
    }

    /// Inverse `[[d, -b], [-c, a]]`.
    pub fn inv(&self) -> SL2Mat {
        SL2Mat { a: self.d, b: -self.b, c: -self.c, d: self.a }
    }

    pub fn transpose(&self) -> SL2Mat {
        SL2Mat { a: self.a, b: self.c, c: self.b, d: self.d }
    }

    pub fn deg(&self) -> i64 {
        self.c
    }

    /// `c θ + d`.
    pub fn rk(&self, theta: f64) -> f64 {
        self.c as f64 * theta + self.d as f64
    }

    fn checked_rk(&self, theta: f64) -> Result<f64> {
        let r = self.rk(theta);
        if r.abs() < RANK_EPS {
            Err(Error::ZeroRank(r))
        } else {
            Ok(r)
        }
    }

    /// `deg / rk`.
    pub fn mu(&self, theta: f64) -> Result<f64> {
        Ok(self.c as f64 / self.checked_rk(theta)?)
    }

    /// Möbius action `(a θ + b) / (c θ + d)`.
    pub fn act(&self, theta: f64) -> Result<f64> {
        Ok((self.a as f64 * theta + self.b as f64) / self.checked_rk(theta)?)
    }
}

impl Neg for SL2Mat {
    type Output = SL2Mat;
    fn neg(self) -> SL2Mat {
        SL2Mat { a: -self.a, b: -self.b, c: -self.c, d: -self.d }
    }
}

impl fmt::Display for SL2Mat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{};{},{}", self.a, self.b, self.c, self.d)
    }
}

/// Matrix product `g1 g2`, failing on overflow.
pub fn compose(g1: &SL2Mat, g2: &SL2Mat) -> Result<SL2Mat> {
    Ok(SL2Mat {
        a: mul_add(g1.a, g2.a, g1.b, g2.c)?,
        b: mul_add(g1.a, g2.b, g1.b, g2.d)?,
        c: mul_add(g1.c, g2.a, g1.d, g2.c)?,
        d: mul_add(g1.c, g2.b, g1.d, g2.d)?,
    })
}

/// `g1 g2⁻¹`.
pub fn quotient(g1: &SL2Mat, g2: &SL2Mat) -> Result<SL2Mat> {
    compose(g1, &g2.inv())
}

/// Degree, rank, slope and Möbius image of `g` at `theta`.
pub fn invariants_of(g: &SL2Mat, theta: f64) -> Result<Invariants> {
    let rk = g.checked_rk(theta)?;
    Ok(Invariants {
        deg: g.c,
        rk,
        mu: g.c as f64 / rk,
        gtheta: (g.a as f64 * theta + g.b as f64) / rk,
    })
}

/// Relative defect of `rk(g1 g2, θ) = rk(g1, g2 θ) rk(g2, θ)`.
pub fn cocycle_residual(g1: &SL2Mat, g2: &SL2Mat, theta: f64) -> Result<f64> {
    let g12 = compose(g1, g2)?;
    let lhs = g12.rk(theta);
    let rhs = g1.rk(g2.act(theta)?) * g2.rk(theta);
    Ok((lhs - rhs).abs() / lhs.abs().max(1.0))
}

/// Relative defect of the three-term degree identity
/// `deg(g2 g1⁻¹) rk(g3) − deg(g3 g1⁻¹) rk(g2) + deg(g3 g2⁻¹) rk(g1) = 0`.
pub fn degree_identity_residual(g1: &SL2Mat, g2: &SL2Mat, g3: &SL2Mat, theta: f64) -> Result<f64> {
    let d21 = quotient(g2, g1)?.deg() as f64;
    let d31 = quotient(g3, g1)?.deg() as f64;
    let d32 = quotient(g3, g2)?.deg() as f64;
    let (r1, r2, r3) = (g1.rk(theta), g2.rk(theta), g3.rk(theta));
    let terms = [d21 * r3, -d31 * r2, d32 * r1];
    let scale = terms.iter().map(|t| t.abs()).fold(1.0, f64::max);
    Ok(terms.iter().sum::<f64>().abs() / scale)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(a: i64, b: i64, c: i64, d: i64) -> SL2Mat {
        SL2Mat::new(a, b, c, d).unwrap()
    }

    #[test]
    fn composition_examples() {
        let u = m(1, 0, 1, 1);
        assert_eq!(compose(&SL2Mat::IDENTITY, &u).unwrap(), u);
        assert_eq!(compose(&u, &u).unwrap(), m(1, 0, 2, 1));
        let g = m(2, 1, -3, -1);
        assert_eq!(compose(&g, &g.inv()).unwrap(), SL2Mat::IDENTITY);
    }

    #[test]
    fn rejects_bad_determinant() {
        assert!(matches!(SL2Mat::new(1, 1, 1, 1), Err(Error::NotUnimodular { det: 0 })));
    }

    #[test]
    fn overflow_is_reported() {
        let big = m(1, i64::MAX / 2 + 1, 0, 1);
        assert!(matches!(compose(&big, &big), Err(Error::Overflow(_))));
    }

    #[test]
    fn invariant_examples() {
        let inv = invariants_of(&m(1, 0, 1, 1), 0.25).unwrap();
        assert_eq!(inv.deg, 1);
        assert!((inv.rk - 1.25).abs() < 1e-15);
        assert!((inv.mu - 0.8).abs() < 1e-15);
        assert!((inv.gtheta - 0.2).abs() < 1e-15);

        let id = invariants_of(&SL2Mat::IDENTITY, 0.37).unwrap();
        assert_eq!((id.deg, id.rk, id.mu, id.gtheta), (0, 1.0, 0.0, 0.37));

        let inv = invariants_of(&m(2, 1, -3, -1), -0.4).unwrap();
        assert_eq!(inv.deg, -3);
        assert!((inv.rk - 0.2).abs() < 1e-12);
        assert!((inv.mu + 15.0).abs() < 1e-9);
        // (aθ + b)/(cθ + d) = 0.2/0.2
        assert!((inv.gtheta - 1.0).abs() < 1e-9);
    }

    #[test]
    fn zero_rank_is_an_error() {
        assert!(matches!(invariants_of(&m(1, 0, 2, 1), -0.5), Err(Error::ZeroRank(_))));
    }

    #[test]
    fn bottom_row_completion() {
        for (c, d) in [(3, 5), (-4, 7), (0, 1), (1, 0), (5, -2)] {
            let g = SL2Mat::with_bottom_row(c, d).unwrap();
            assert_eq!((g.c, g.d, g.det()), (c, d, 1));
        }
        assert!(SL2Mat::with_bottom_row(2, 4).is_err());
    }

    #[test]
    fn display_round_trip_format() {
        use alloc::string::ToString;
        assert_eq!(m(2, 1, -3, -1).to_string(), "2,1;-3,-1");
    }
}
