//! Gaussian-packet model of the basic modules and the operators acting on them.

pub mod algebra;
pub mod gauss;
pub mod hermite;
pub mod packet;
pub mod pairing;
pub mod poly;
pub mod transport;

mod actions;

pub use actions::{act_generator, cokernel_representative, dbar, phi_basis, Generator, Side};
pub use algebra::TorusElement;
pub use gauss::{integrate, lattice_sum, LatticeSum};
pub use hermite::kernel_cokernel_dims;
pub use packet::{Gaussian, GaussianPacket, Term};
pub use pairing::{pairing_b, pairing_t, PairingValues};
pub use poly::Poly;
pub use transport::{isogeny_transport, translate, translate_iso_check, Direction};

use core::f64::consts::TAU;

use num_complex::Complex64;

use crate::error::{domain, Error, Result};
use crate::sl2::{SL2Mat, RANK_EPS};

/// `2πi·w`.
pub fn two_pi_i(w: Complex64) -> Complex64 {
    Complex64::new(-TAU * w.im, TAU * w.re)
}

/// `e(t) = exp(2πi t)` for real `t`.
pub fn e(t: f64) -> Complex64 {
    Complex64::from_polar(1.0, TAU * t)
}

/// `e(w)` for complex `w`.
pub fn ec(w: Complex64) -> Complex64 {
    two_pi_i(w).exp()
}

/// Coefficient of `x` in the holomorphic structure, `2πiτμ`.
pub fn holo_quad(tau: Complex64, mu: f64) -> Complex64 {
    two_pi_i(tau * mu)
}

/// Constant part `2πiz` of the holomorphic structure.
pub fn holo_lin(z: Complex64) -> Complex64 {
    two_pi_i(z)
}

/// The basic module `E_g(θ)` with `rk(g, θ) > 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModuleLabel {
    pub g: SL2Mat,
    pub theta: f64,
}

impl ModuleLabel {
    pub fn new(g: SL2Mat, theta: f64) -> Result<Self> {
        let r = g.rk(theta);
        if r.abs() < RANK_EPS {
            return Err(Error::ZeroRank(r));
        }
        if r < 0.0 {
            return Err(domain("module label needs positive rank; use the parity shift"));
        }
        Ok(ModuleLabel { g, theta })
    }

    pub fn deg(&self) -> i64 {
        self.g.c
    }

    /// The pair `(n, m) = (d, c)`.
    pub fn nm(&self) -> (i64, i64) {
        (self.g.d, self.g.c)
    }

    pub fn rk(&self) -> f64 {
        self.g.rk(self.theta)
    }

    pub fn mu(&self) -> f64 {
        self.g.c as f64 / self.rk()
    }

    /// Number of legs `|c|` of the packet model.
    pub fn legs(&self) -> usize {
        self.g.c.unsigned_abs() as usize
    }

    /// Parameter of the algebra acting on the left.
    pub fn left_theta(&self) -> f64 {
        (self.g.a as f64 * self.theta + self.g.b as f64) / self.rk()
    }

    pub(crate) fn require_nondegenerate(&self) -> Result<()> {
        if self.g.c == 0 {
            Err(Error::DegenerateDegree)
        } else {
            Ok(())
        }
    }

    pub(crate) fn require_legs(&self, f: &GaussianPacket) -> Result<()> {
        if f.legs() != self.legs() {
            return Err(Error::ShapeMismatch(alloc::format!(
                "packet has {} legs, module needs {}",
                f.legs(),
                self.legs()
            )));
        }
        Ok(())
    }
}
