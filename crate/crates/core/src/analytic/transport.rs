//! Translations of the torus and transport along the isogeny `U1 ↦ U1^N, U2 ↦ U2`.

use alloc::vec::Vec;

use num_complex::Complex64;

use super::actions::{act_generator, cokernel_representative, dbar, phi_basis, Generator, Side};
use super::packet::GaussianPacket;
use super::poly::Poly;
use super::{e, two_pi_i, ModuleLabel};
use crate::error::{Error, Result};
use crate::index::egcd;
use crate::sl2::SL2Mat;

const SAMPLE_X: [f64; 5] = [-0.9, -0.25, 0.0, 0.45, 1.3];

fn agree(f: &GaussianPacket, g: &GaussianPacket, tol: f64) -> bool {
    f.legs() == g.legs()
        && (0..f.legs() as i64).all(|a| {
            SAMPLE_X.iter().all(|&x| {
                let (u, v) = (f.eval(x, a), g.eval(x, a));
                (u - v).norm() <= tol * u.norm().max(v.norm()).max(1.0)
            })
        })
}

/// `f ↦ e(μ v1 x) f(x + v2)`.
pub fn translate(f: &GaussianPacket, label: &ModuleLabel, v1: f64, v2: f64) -> Result<GaussianPacket> {
    label.require_legs(f)?;
    let kick = two_pi_i(Complex64::new(label.mu() * v1, 0.0));
    f.map_terms(f.legs(), |t| {
        let mut g = t.gauss.translate(-v2);
        g.lin += kick;
        (t.alpha as i64, g)
    })
}

/// Change of twist `μ(τ v2 − v1)` produced by [`translate`].
pub fn translation_twist(label: &ModuleLabel, v1: f64, v2: f64, tau: Complex64) -> Complex64 {
    (tau * v2 - v1) * label.mu()
}

/// Sections used to probe operator identities: holomorphic ones and their `x`-multiples.
fn probes(label: &ModuleLabel, z: Complex64, tau: Complex64) -> Result<Vec<GaussianPacket>> {
    let x = Poly::monomial(1, Complex64::new(1.0, 0.0));
    let mut out = Vec::new();
    for a in 0..label.legs() as i64 {
        let p = if label.deg() > 0 {
            phi_basis(label, z, a, tau)?
        } else {
            cokernel_representative(label, z, a, tau)?
        };
        out.push(p.mul_poly(&x));
        out.push(p);
    }
    Ok(out)
}

/// Checks that `f ↦ e(μ v1 x) f(x + v2)` intertwines the translated right action with the
/// plain one and carries `∇̄_z` to `∇̄_{z + μ(τ v2 − v1)}`.
pub fn translate_iso_check(
    label: &ModuleLabel,
    z: Complex64,
    v1: f64,
    v2: f64,
    tau: Complex64,
    tol: f64,
) -> Result<bool> {
    label.require_nondegenerate()?;
    let z2 = z + translation_twist(label, v1, v2, tau);
    for f in probes(label, z, tau)? {
        let tf = translate(&f, label, v1, v2)?;
        for (gen, v) in [(Generator::U1, v1), (Generator::U2, v2)] {
            let twisted = act_generator(&f, label, Side::Right, gen, 1)?.scale(e(-v));
            let lhs = translate(&twisted, label, v1, v2)?;
            let rhs = act_generator(&tf, label, Side::Right, gen, 1)?;
            if !agree(&lhs, &rhs, tol) {
                return Ok(false);
            }
        }
        let lhs = dbar(&tf, label, tau, z2)?;
        let rhs = translate(&dbar(&f, label, tau, z)?, label, v1, v2)?;
        if !agree(&lhs, &rhs, tol) {
            return Ok(false);
        }
    }
    Ok(true)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    /// `π_* E_{1,m}(θ) ≅ E_{N,m}(Nθ)`.
    Push,
    /// `π^* E_{1,m}(Nθ) ≅ E_{1,mN}(θ)`.
    Pull,
}

fn shape(label: &ModuleLabel, n: i64) -> Result<i64> {
    let m = label.g.c;
    if n < 1 || m < 1 || label.g.d != 1 {
        return Err(Error::ShapeMismatch(alloc::format!(
            "expected a label (1, m) with m > 0 and N > 0, got (n, m) = ({}, {m}), N = {n}",
            label.g.d
        )));
    }
    Ok(m)
}

/// Label of the target module.
pub fn isogeny_target(label: &ModuleLabel, n: i64, direction: Direction) -> Result<ModuleLabel> {
    let m = shape(label, n)?;
    match direction {
        Direction::Push => ModuleLabel::new(SL2Mat::with_bottom_row(m, n)?, n as f64 * label.theta),
        Direction::Pull => ModuleLabel::new(SL2Mat::with_bottom_row(m * n, 1)?, label.theta / n as f64),
    }
}

/// Transports a packet along the isogeny.
///
/// For `Push`, `f` lives on `E_{1,m}(θ)` and is sent to `f(x, Nα)` on `E_{N,m}(Nθ)`.
/// For `Pull`, `label` is `E_{1,m}(Nθ)` and `f` has `mN` legs, leg `α + m r` holding the
/// component `F(r)(x, α)` of a section of the pull-back, `0 ≤ r < N`; the image is
/// `g(x, r + kN) = F(r)(x − r(1 + mNθ)/(mN), k)` on `E_{1,mN}(θ)`.
pub fn isogeny_transport(
    f: &GaussianPacket,
    n: i64,
    direction: Direction,
    label: &ModuleLabel,
) -> Result<GaussianPacket> {
    let m = shape(label, n)?;
    match direction {
        Direction::Push => {
            let (g, inv, _) = egcd(n as i128, m as i128);
            if g != 1 {
                return Err(Error::ShapeMismatch(alloc::format!("gcd(N, m) = {g} (need 1)")));
            }
            label.require_legs(f)?;
            let inv = inv.rem_euclid(m as i128) as i64;
            f.map_terms(m as usize, |t| (t.alpha as i64 * inv, t.gauss.clone()))
        }
        Direction::Pull => {
            let legs = (m * n) as usize;
            if f.legs() != legs {
                return Err(Error::ShapeMismatch(alloc::format!("pull-back data needs {legs} legs")));
            }
            let step = label.rk() / (m * n) as f64;
            f.map_terms(legs, |t| {
                let (k, r) = (t.alpha as i64 % m, t.alpha as i64 / m);
                (r + k * n, t.gauss.translate(r as f64 * step))
            })
        }
    }
}

fn split(f: &GaussianPacket, m: usize, n: usize) -> Vec<GaussianPacket> {
    (0..n)
        .map(|r| {
            let mut p = GaussianPacket::zero(m);
            for t in f.terms().iter().filter(|t| t.alpha / m == r) {
                p.push((t.alpha % m) as i64, t.gauss.clone()).expect("terms already decay");
            }
            p
        })
        .collect()
}

fn join(parts: &[GaussianPacket], m: usize) -> GaussianPacket {
    let mut out = GaussianPacket::zero(m * parts.len());
    for (r, p) in parts.iter().enumerate() {
        for t in p.terms() {
            out.push((t.alpha + m * r) as i64, t.gauss.clone()).expect("terms already decay");
        }
    }
    out
}

/// Right action of `U1` or `U2` on pull-back data (see [`isogeny_transport`]).
fn pullback_act(f: &GaussianPacket, label: &ModuleLabel, n: usize, gen: Generator) -> Result<GaussianPacket> {
    let m = label.legs();
    let parts = split(f, m, n);
    let theta = label.theta / n as f64;
    let out: Vec<GaussianPacket> = match gen {
        Generator::U1 => (0..n)
            .map(|r| {
                if r == 0 {
                    act_generator(&parts[n - 1], label, Side::Right, Generator::U1, 1)
                } else {
                    Ok(parts[r - 1].clone())
                }
            })
            .collect::<Result<_>>()?,
        Generator::U2 => (0..n)
            .map(|r| Ok(act_generator(&parts[r], label, Side::Right, Generator::U2, 1)?.scale(e(r as f64 * theta))))
            .collect::<Result<_>>()?,
    };
    Ok(join(&out, m))
}

fn pullback_dbar(f: &GaussianPacket, label: &ModuleLabel, n: usize, tau: Complex64, z: Complex64) -> Result<GaussianPacket> {
    let m = label.legs();
    let big_tau = tau * n as f64;
    let parts = split(f, m, n);
    let out: Vec<GaussianPacket> = (0..n)
        .map(|r| dbar(&parts[r], label, big_tau, z)?.add(&parts[r].scale(two_pi_i(tau * r as f64))))
        .collect::<Result<_>>()?;
    Ok(join(&out, m))
}

/// Checks that [`isogeny_transport`] intertwines both generators and the holomorphic
/// structures (`∇̄_z` for `Nτ` upstairs, for `τ` downstairs).
pub fn isogeny_intertwining_check(
    label: &ModuleLabel,
    n: i64,
    direction: Direction,
    tau: Complex64,
    z: Complex64,
    tol: f64,
) -> Result<bool> {
    let target = isogeny_target(label, n, direction)?;
    let m = label.legs();
    let x = Poly::monomial(1, Complex64::new(1.0, 0.0));
    let legs = match direction {
        Direction::Push => m,
        Direction::Pull => m * n as usize,
    };
    let mut sources = Vec::new();
    for a in 0..legs as i64 {
        for (q, l) in [(-1.0, 0.3), (-0.6, -0.8)] {
            let g = super::Gaussian::new(Poly::one(), Complex64::new(q, 0.2), Complex64::new(l, 0.5 * a as f64));
            let f = GaussianPacket::single(legs, a, g)?;
            sources.push(f.mul_poly(&x).add(&f)?);
        }
    }
    for f in &sources {
        let image = isogeny_transport(f, n, direction, label)?;
        for gen in [Generator::U1, Generator::U2] {
            let acted = match (direction, gen) {
                (Direction::Push, Generator::U1) => act_generator(f, label, Side::Right, gen, n)?,
                (Direction::Push, Generator::U2) => act_generator(f, label, Side::Right, gen, 1)?,
                (Direction::Pull, _) => pullback_act(f, label, n as usize, gen)?,
            };
            let lhs = isogeny_transport(&acted, n, direction, label)?;
            let rhs = act_generator(&image, &target, Side::Right, gen, 1)?;
            if !agree(&lhs, &rhs, tol) {
                return Ok(false);
            }
        }
        let (src_dbar, tgt_tau) = match direction {
            Direction::Push => (dbar(f, label, tau, z)?, tau * n as f64),
            Direction::Pull => (pullback_dbar(f, label, n as usize, tau, z)?, tau),
        };
        let lhs = isogeny_transport(&src_dbar, n, direction, label)?;
        let rhs = dbar(&image, &target, tgt_tau, z)?;
        if !agree(&lhs, &rhs, tol) {
            return Ok(false);
        }
    }
    Ok(true)
}
