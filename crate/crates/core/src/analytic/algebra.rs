//! Finite Laurent sums in the generators of `A_θ`.

use alloc::collections::BTreeMap;

use num_complex::Complex64;

use super::actions::{act_generator, Generator, Side};
use super::packet::GaussianPacket;
use super::{e, two_pi_i, ModuleLabel};
use crate::error::Result;

/// `Σ c_{n1,n2} U1^{n1} U2^{n2}` in `A_θ`.
#[derive(Debug, Clone, PartialEq)]
pub struct TorusElement {
    pub theta: f64,
    coeffs: BTreeMap<(i64, i64), Complex64>,
}

impl TorusElement {
    pub fn zero(theta: f64) -> Self {
        TorusElement { theta, coeffs: BTreeMap::new() }
    }

    /// `c U1^{n1} U2^{n2}`.
    pub fn monomial(theta: f64, n1: i64, n2: i64, c: Complex64) -> Self {
        let mut t = TorusElement::zero(theta);
        t.add_term(n1, n2, c);
        t
    }

    pub fn one(theta: f64) -> Self {
        TorusElement::monomial(theta, 0, 0, Complex64::new(1.0, 0.0))
    }

    pub fn add_term(&mut self, n1: i64, n2: i64, c: Complex64) {
        let slot = self.coeffs.entry((n1, n2)).or_insert(Complex64::new(0.0, 0.0));
        *slot += c;
        if *slot == Complex64::new(0.0, 0.0) {
            self.coeffs.remove(&(n1, n2));
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = ((i64, i64), Complex64)> + '_ {
        self.coeffs.iter().map(|(k, v)| (*k, *v))
    }

    pub fn coeff(&self, n1: i64, n2: i64) -> Complex64 {
        self.coeffs.get(&(n1, n2)).copied().unwrap_or(Complex64::new(0.0, 0.0))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn add(&self, other: &TorusElement) -> TorusElement {
        let mut out = self.clone();
        for ((a, b), c) in other.terms() {
            out.add_term(a, b, c);
        }
        out
    }

    pub fn scale(&self, s: Complex64) -> TorusElement {
        let mut out = TorusElement::zero(self.theta);
        for ((a, b), c) in self.terms() {
            out.add_term(a, b, c * s);
        }
        out
    }

    /// Product, using `U2^b U1^c = e(−θbc) U1^c U2^b`.
    pub fn mul(&self, other: &TorusElement) -> TorusElement {
        let mut out = TorusElement::zero(self.theta);
        for ((a, b), x) in self.terms() {
            for ((c, d), y) in other.terms() {
                out.add_term(a + c, b + d, x * y * e(-self.theta * (b * c) as f64));
            }
        }
        out
    }

    /// `δ_τ(U1^{n1}U2^{n2}) = 2πi(n1τ + n2) U1^{n1}U2^{n2}`.
    pub fn delta(&self, tau: Complex64) -> TorusElement {
        let mut out = TorusElement::zero(self.theta);
        for ((a, b), c) in self.terms() {
            out.add_term(a, b, c * two_pi_i(tau * a as f64 + b as f64));
        }
        out
    }

    /// The trace: coefficient of `1`.
    pub fn trace(&self) -> Complex64 {
        self.coeff(0, 0)
    }

    /// Left action on `E_g(θ)` of the algebra `A_{gθ}`.
    pub fn act_left(&self, f: &GaussianPacket, label: &ModuleLabel) -> Result<GaussianPacket> {
        let mut out = GaussianPacket::zero(f.legs());
        for ((a, b), c) in self.terms() {
            let step = act_generator(f, label, Side::Left, Generator::U2, b)?;
            out = out.add(&act_generator(&step, label, Side::Left, Generator::U1, a)?.scale(c))?;
        }
        Ok(out)
    }

    /// Right action of `A_θ` on `E_g(θ)`.
    pub fn act_right(&self, f: &GaussianPacket, label: &ModuleLabel) -> Result<GaussianPacket> {
        let mut out = GaussianPacket::zero(f.legs());
        for ((a, b), c) in self.terms() {
            let step = act_generator(f, label, Side::Right, Generator::U1, a)?;
            out = out.add(&act_generator(&step, label, Side::Right, Generator::U2, b)?.scale(c))?;
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn commutation_relation() {
        let th = 0.37;
        let u1 = TorusElement::monomial(th, 1, 0, Complex64::new(1.0, 0.0));
        let u2 = TorusElement::monomial(th, 0, 1, Complex64::new(1.0, 0.0));
        let lhs = u1.mul(&u2);
        let rhs = u2.mul(&u1).scale(e(th));
        assert!((lhs.coeff(1, 1) - rhs.coeff(1, 1)).norm() < 1e-15);
    }

    #[test]
    fn delta_is_a_derivation() {
        let th = 0.21;
        let tau = Complex64::new(0.3, -0.7);
        let a = TorusElement::monomial(th, 2, -1, Complex64::new(0.5, 1.0)).add(&TorusElement::one(th));
        let b = TorusElement::monomial(th, -1, 3, Complex64::new(-1.0, 0.2));
        let lhs = a.mul(&b).delta(tau);
        let rhs = a.delta(tau).mul(&b).add(&a.mul(&b.delta(tau)));
        for ((n1, n2), c) in lhs.terms() {
            assert!((c - rhs.coeff(n1, n2)).norm() < 1e-12);
        }
    }

    fn probe(legs: usize, tau: Complex64) -> GaussianPacket {
        use crate::analytic::{Gaussian, Poly};
        let mut f = GaussianPacket::zero(legs);
        for a in 0..legs as i64 {
            let p = Poly::new(alloc::vec![Complex64::new(1.0, 0.1 * a as f64), Complex64::new(0.3, -0.2)]);
            f.push(a, Gaussian::new(p, tau * Complex64::new(0.0, -2.0), Complex64::new(0.2 * a as f64, 0.1))).unwrap();
        }
        f
    }

    #[test]
    fn actions_are_module_structures() {
        use crate::sl2::SL2Mat;
        let tau = Complex64::new(0.2, -0.9);
        let label = ModuleLabel::new(SL2Mat::new(1, 1, 2, 3).unwrap(), 0.31).unwrap();
        let f = probe(label.legs(), tau);
        let lt = label.left_theta();
        let a = TorusElement::monomial(lt, 1, 2, Complex64::new(0.5, 0.5)).add(&TorusElement::monomial(lt, -1, 1, Complex64::new(1.0, 0.0)));
        let b = TorusElement::monomial(lt, 2, -1, Complex64::new(0.0, 1.0));
        let left_prod = a.mul(&b).act_left(&f, &label).unwrap();
        let left_seq = a.act_left(&b.act_left(&f, &label).unwrap(), &label).unwrap();
        let th = label.theta;
        let c = TorusElement::monomial(th, 1, 2, Complex64::new(0.5, 0.5)).add(&TorusElement::monomial(th, -1, 1, Complex64::new(1.0, 0.0)));
        let d = TorusElement::monomial(th, 2, -1, Complex64::new(0.0, 1.0));
        let right_prod = c.mul(&d).act_right(&f, &label).unwrap();
        let right_seq = d.act_right(&c.act_right(&f, &label).unwrap(), &label).unwrap();
        for &x in &[-0.7, 0.0, 0.4, 1.3] {
            for al in 0..2 {
                assert!((left_prod.eval(x, al) - left_seq.eval(x, al)).norm() < 1e-12);
                assert!((right_prod.eval(x, al) - right_seq.eval(x, al)).norm() < 1e-12);
            }
        }
    }
}
