use num_complex::Complex64;

use super::packet::{Gaussian, GaussianPacket};
use super::poly::Poly;
use super::{e, holo_lin, holo_quad, two_pi_i, ModuleLabel};
use crate::error::{domain, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Right,
    Left,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Generator {
    U1,
    U2,
}

/// Applies `U^power` on the given side.
///
/// Right action of `A_θ`: `fU1(x,α) = f(x − rk/c, α − 1)`, `fU2(x,α) = e(x − αd/c) f(x,α)`.
/// Left action of `A_{gθ}`: `U1f(x,α) = f(x − 1/c, α − a)`, `U2f(x,α) = e(x/rk − α/c) f(x,α)`.
pub fn act_generator(
    f: &GaussianPacket,
    label: &ModuleLabel,
    side: Side,
    gen: Generator,
    power: i64,
) -> Result<GaussianPacket> {
    label.require_nondegenerate()?;
    label.require_legs(f)?;
    let c = label.deg() as f64;
    let k = power as f64;
    let (n, a) = (label.g.d as f64, label.g.a);
    let legs = f.legs();
    match (side, gen) {
        (Side::Right, Generator::U1) => {
            let s = k * label.rk() / c;
            f.map_terms(legs, |t| (t.alpha as i64 + power, t.gauss.translate(s)))
        }
        (Side::Right, Generator::U2) => f.map_terms(legs, |t| {
            let phase = e(-k * t.alpha as f64 * n / c);
            let mut g = t.gauss.scale(phase);
            g.lin += two_pi_i(Complex64::new(k, 0.0));
            (t.alpha as i64, g)
        }),
        (Side::Left, Generator::U1) => {
            let s = k / c;
            f.map_terms(legs, |t| (t.alpha as i64 + power * a, t.gauss.translate(s)))
        }
        (Side::Left, Generator::U2) => {
            let slope = k / label.rk();
            f.map_terms(legs, |t| {
                let phase = e(-k * t.alpha as f64 / c);
                let mut g = t.gauss.scale(phase);
                g.lin += two_pi_i(Complex64::new(slope, 0.0));
                (t.alpha as i64, g)
            })
        }
    }
}

/// `∇̄_z f = f′ + 2πi(τμx + z) f`.
pub fn dbar(f: &GaussianPacket, label: &ModuleLabel, tau: Complex64, z: Complex64) -> Result<GaussianPacket> {
    label.require_nondegenerate()?;
    label.require_legs(f)?;
    let qa = holo_quad(tau, label.mu());
    let lb = holo_lin(z);
    f.map_terms(f.legs(), |t| {
        let g = &t.gauss;
        let factor = Poly::new(alloc::vec![g.lin + lb, g.quad + qa]);
        let poly = g.poly.derivative().add(&g.poly.mul(&factor));
        (t.alpha as i64, Gaussian { poly, quad: g.quad, lin: g.lin })
    })
}

/// `φ_α^z(x, β) = e(−τμx²/2 − zx) δ_α(β)`, a holomorphic section for `deg > 0`.
pub fn phi_basis(label: &ModuleLabel, z: Complex64, alpha: i64, tau: Complex64) -> Result<GaussianPacket> {
    if label.deg() <= 0 {
        return Err(domain("holomorphic sections need positive degree"));
    }
    let g = Gaussian::new(Poly::one(), -holo_quad(tau, label.mu()), -holo_lin(z));
    GaussianPacket::single(label.legs(), alpha, g)
}

/// `e(τμx²/2 + zx) δ_α`: spans the kernel of the transpose of `∇̄_z` for `deg < 0`,
/// so it represents a nonzero class of the cokernel.
pub fn cokernel_representative(
    label: &ModuleLabel,
    z: Complex64,
    alpha: i64,
    tau: Complex64,
) -> Result<GaussianPacket> {
    if label.deg() >= 0 {
        return Err(domain("cokernel representatives need negative degree"));
    }
    let g = Gaussian::new(Poly::one(), holo_quad(tau, label.mu()), holo_lin(z));
    GaussianPacket::single(label.legs(), alpha, g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sl2::SL2Mat;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn sample_packet(legs: usize) -> GaussianPacket {
        let mut p = GaussianPacket::zero(legs);
        for a in 0..legs as i64 {
            let poly = Poly::new(alloc::vec![c(1.0, 0.2 * a as f64), c(-0.3, 0.1)]);
            p.push(a, Gaussian::new(poly, c(-1.1 - 0.2 * a as f64, 0.4), c(0.3, -0.2 * a as f64)))
                .unwrap();
        }
        p
    }

    fn close(f: &GaussianPacket, g: &GaussianPacket, tol: f64) -> bool {
        (0..f.legs() as i64)
            .all(|a| [-1.3, -0.2, 0.0, 0.7, 1.9].iter().all(|&x| (f.eval(x, a) - g.eval(x, a)).norm() < tol))
    }

    fn label() -> ModuleLabel {
        ModuleLabel::new(SL2Mat::new(2, 1, 3, 2).unwrap(), 0.23).unwrap()
    }

    #[test]
    fn inverse_powers_cancel() {
        let l = label();
        let f = sample_packet(3);
        for side in [Side::Right, Side::Left] {
            for gen in [Generator::U1, Generator::U2] {
                let g = act_generator(&act_generator(&f, &l, side, gen, 1).unwrap(), &l, side, gen, -1).unwrap();
                assert!(close(&f, &g, 1e-12));
            }
        }
    }

    #[test]
    fn right_relation() {
        let l = label();
        let f = sample_packet(3);
        let r = |p: &GaussianPacket, g| act_generator(p, &l, Side::Right, g, 1).unwrap();
        let lhs = r(&r(&f, Generator::U1), Generator::U2);
        let rhs = r(&r(&f, Generator::U2), Generator::U1).scale(e(l.theta));
        assert!(close(&lhs, &rhs, 1e-12));
    }

    #[test]
    fn left_and_right_commute() {
        let l = label();
        let f = sample_packet(3);
        for lg in [Generator::U1, Generator::U2] {
            for rg in [Generator::U1, Generator::U2] {
                let a = act_generator(&act_generator(&f, &l, Side::Left, lg, 1).unwrap(), &l, Side::Right, rg, 1)
                    .unwrap();
                let b = act_generator(&act_generator(&f, &l, Side::Right, rg, 1).unwrap(), &l, Side::Left, lg, 1)
                    .unwrap();
                assert!(close(&a, &b, 1e-12));
            }
        }
    }

    #[test]
    fn phi_is_killed_exactly() {
        let l = ModuleLabel::new(SL2Mat::new(1, 0, 1, 1).unwrap(), 0.0).unwrap();
        let tau = c(0.0, -1.0);
        let z = c(0.2, -0.1);
        let phi = phi_basis(&l, z, 0, tau).unwrap();
        assert_eq!(phi.terms()[0].gauss.quad, c(-2.0 * core::f64::consts::PI, 0.0));
        assert!(dbar(&phi, &l, tau, z).unwrap().is_zero());
        let x_phi = phi.mul_poly(&Poly::monomial(1, c(1.0, 0.0)));
        assert_eq!(dbar(&x_phi, &l, tau, z).unwrap(), phi);
    }

    #[test]
    fn leibniz_for_right_u1() {
        let l = label();
        let tau = c(0.3, -0.8);
        let z = c(0.1, 0.4);
        let f = sample_packet(3);
        let lhs = dbar(&act_generator(&f, &l, Side::Right, Generator::U1, 1).unwrap(), &l, tau, z).unwrap();
        let fa = act_generator(&f, &l, Side::Right, Generator::U1, 1).unwrap();
        let rhs = act_generator(&dbar(&f, &l, tau, z).unwrap(), &l, Side::Right, Generator::U1, 1)
            .unwrap()
            .add(&fa.scale(two_pi_i(tau)))
            .unwrap();
        assert!(close(&lhs, &rhs, 1e-11));
    }

    #[test]
    fn left_action_needs_degree() {
        let l = ModuleLabel::new(SL2Mat::IDENTITY, 0.3).unwrap();
        let f = GaussianPacket::zero(1);
        assert_eq!(
            act_generator(&f, &l, Side::Left, Generator::U1, 1),
            Err(crate::error::Error::DegenerateDegree)
        );
    }
}
