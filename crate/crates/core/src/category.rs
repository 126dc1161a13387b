//! The cohomology-level category of standard holomorphic bundles.
//!
//! Objects are `E_g^z(θ)[n]` with `rk(g, θ) > 0`. `Hom(E_g^z, E_{g′}^{z′})` is identified with
//! the standard bundle `E_{g′g⁻¹}^{rk(g,θ)(z′−z)}(gθ)`; its `H⁰` is indexed by the φ-basis
//! and its `H¹` by the ψ-basis dual to φ of the opposite Hom space.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::cell::RefCell;
use core::fmt;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::analytic::{
    cokernel_representative, dbar, e, pairing_b, phi_basis, GaussianPacket, ModuleLabel, TorusElement,
};
use crate::error::{domain, Error, Result};
use crate::sl2::{quotient, SL2Mat, TorusParams, RANK_EPS};
use crate::theta::{composition_arguments, structure_constants, StructureConstantsTable};

/// Below this distance from `ℤ+τℤ` a twist counts as a lattice point.
pub const LATTICE_MEMBER: f64 = 1e-12;
/// Above this distance a twist counts as off the lattice; in between is a tie.
pub const LATTICE_AMBIGUOUS: f64 = 1e-9;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// `E_g^z(θ)[shift]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StdObject {
    pub g: SL2Mat,
    pub theta: f64,
    pub z: Complex64,
    pub shift: i64,
}

impl StdObject {
    pub fn new(g: SL2Mat, theta: f64, z: Complex64, shift: i64) -> Result<Self> {
        ModuleLabel::new(g, theta)?;
        Ok(StdObject { g, theta, z, shift })
    }

    pub fn label(&self) -> ModuleLabel {
        ModuleLabel { g: self.g, theta: self.theta }
    }

    pub fn deg(&self) -> i64 {
        self.g.c
    }

    pub fn rk(&self) -> f64 {
        self.g.rk(self.theta)
    }

    pub fn mu(&self) -> f64 {
        self.g.c as f64 / self.rk()
    }
}

impl fmt::Display for StdObject {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "E[{}]^{}({})[{}]", self.g, self.z, self.theta, self.shift)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Basis {
    Phi,
    Psi,
}

/// An element of `H^degree Hom(source, target)` in coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct HolVector {
    pub source: StdObject,
    pub target: StdObject,
    pub degree: u8,
    pub coeffs: Vec<Complex64>,
    pub basis: Basis,
}

impl HolVector {
    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn scale(&self, s: Complex64) -> HolVector {
        HolVector { coeffs: self.coeffs.iter().map(|c| c * s).collect(), ..self.clone() }
    }

    pub fn add(&self, other: &HolVector) -> Result<HolVector> {
        if self.source != other.source || self.target != other.target || self.degree != other.degree {
            return Err(Error::ShapeMismatch("vectors live in different Hom spaces".into()));
        }
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect();
        Ok(HolVector { coeffs, ..self.clone() })
    }

    pub fn max_distance(&self, other: &HolVector) -> f64 {
        self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
    }
}

/// `(g′g⁻¹ over gθ, rk(g,θ)(z′ − z))`.
pub fn hom_label(e1: &StdObject, e2: &StdObject) -> Result<(ModuleLabel, Complex64)> {
    if e1.theta != e2.theta {
        return Err(domain("objects live over different θ"));
    }
    let k = quotient(&e2.g, &e1.g)?;
    let label = ModuleLabel::new(k, e1.g.act(e1.theta)?)?;
    Ok((label, (e2.z - e1.z) * e1.rk()))
}

/// Coordinates `(p, q)` with `rk·w = p + qτ` when `w ∈ (1/rk)(ℤ+τℤ)`, `None` when it is not.
pub fn lattice_coords(w: Complex64, rk: f64, tau: Complex64) -> Result<Option<(i64, i64)>> {
    let s = w * rk;
    let q = s.im / tau.im;
    let p = s.re - q * tau.re;
    let (pr, qr) = (libm::round(p), libm::round(q));
    let dist = libm::fabs(p - pr).max(libm::fabs(q - qr));
    if dist < LATTICE_MEMBER {
        Ok(Some((pr as i64, qr as i64)))
    } else if dist > LATTICE_AMBIGUOUS {
        Ok(None)
    } else {
        Err(Error::LatticeBoundary)
    }
}

/// The shape of a Hom module, which fixes both cohomology groups.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HomKind {
    /// Positive degree `c`: `H⁰` of dimension `c`, no `H¹`.
    Sections(usize),
    /// Negative degree `−c`: `H¹` of dimension `c`, no `H⁰`.
    Cosections(usize),
    /// Label `1`; `Some((p, q))` when the twist is the lattice point `p + qτ`.
    Trivial(Option<(i64, i64)>),
    /// A nontrivial unipotent label; degree zero but not the identity.
    Unipotent(Option<(i64, i64)>),
}

impl HomKind {
    pub fn dims(&self) -> (usize, usize) {
        match *self {
            HomKind::Sections(c) => (c, 0),
            HomKind::Cosections(c) => (0, c),
            HomKind::Trivial(Some(_)) | HomKind::Unipotent(Some(_)) => (1, 1),
            HomKind::Trivial(None) | HomKind::Unipotent(None) => (0, 0),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HomSpace {
    pub label: ModuleLabel,
    pub twist: Complex64,
    pub kind: HomKind,
}

impl HomSpace {
    pub fn dim(&self, degree: u8) -> usize {
        let (h0, h1) = self.kind.dims();
        if degree == 0 {
            h0
        } else {
            h1
        }
    }

    fn lattice(&self) -> Option<(i64, i64)> {
        match self.kind {
            HomKind::Trivial(l) => l,
            _ => None,
        }
    }
}

pub fn hom_space(e1: &StdObject, e2: &StdObject, tau: Complex64) -> Result<HomSpace> {
    let (label, twist) = hom_label(e1, e2)?;
    let c = label.deg();
    let kind = if c > 0 {
        HomKind::Sections(c as usize)
    } else if c < 0 {
        HomKind::Cosections(c.unsigned_abs() as usize)
    } else {
        let lat = lattice_coords(twist, label.rk(), tau)?;
        if label.g.is_identity() {
            HomKind::Trivial(lat)
        } else {
            HomKind::Unipotent(lat)
        }
    };
    Ok(HomSpace { label, twist, kind })
}

/// `(dim H⁰(E), dim H¹(E))` for `E` with its own `∇̄_z`.
pub fn cohomology_dims(e: &StdObject, tau: Complex64) -> Result<(usize, usize)> {
    if !(tau.im < 0.0) {
        return Err(domain("Im(τ) must be negative"));
    }
    let c = e.deg();
    if c > 0 {
        return Ok((c as usize, 0));
    }
    if c < 0 {
        return Ok((0, c.unsigned_abs() as usize));
    }
    Ok(match lattice_coords(e.z, e.rk(), tau)? {
        Some(_) => (1, 1),
        None => (0, 0),
    })
}

/// `χ(E[n]) = (−1)^n (h⁰ − h¹) = (−1)^n deg(E)`.
pub fn euler_char(e: &StdObject) -> i64 {
    if e.shift.rem_euclid(2) == 0 {
        e.deg()
    } else {
        -e.deg()
    }
}

/// The kernel generator `U1^{−q} U2^{−p}` of `∇̄_w` on `A_θ` for `w = p + qτ`.
pub fn lattice_generator(theta: f64, p: i64, q: i64) -> TorusElement {
    TorusElement::monomial(theta, -q, -p, ONE)
}

/// Source of structure-constant tables; lets callers share a cache.
pub trait TableProvider {
    fn table(
        &self,
        g1: &SL2Mat,
        g2: &SL2Mat,
        params: TorusParams,
        z1: Complex64,
        z2: Complex64,
        tol: f64,
    ) -> Result<Arc<StructureConstantsTable>>;
}

/// Computes every table afresh.
#[derive(Debug, Clone, Copy, Default)]
pub struct DirectTables;

impl TableProvider for DirectTables {
    fn table(
        &self,
        g1: &SL2Mat,
        g2: &SL2Mat,
        params: TorusParams,
        z1: Complex64,
        z2: Complex64,
        tol: f64,
    ) -> Result<Arc<StructureConstantsTable>> {
        structure_constants(g1, g2, params, z1, z2, tol).map(Arc::new)
    }
}

/// Exact identity of a table request: matrix entries and the bit patterns of the real inputs.
pub type TableKey = ([i64; 8], [u64; 8]);

pub fn table_key(g1: &SL2Mat, g2: &SL2Mat, params: TorusParams, z1: Complex64, z2: Complex64, tol: f64) -> TableKey {
    (
        [g1.a, g1.b, g1.c, g1.d, g2.a, g2.b, g2.c, g2.d],
        [
            params.theta.to_bits(),
            params.tau.re.to_bits(),
            params.tau.im.to_bits(),
            z1.re.to_bits(),
            z1.im.to_bits(),
            z2.re.to_bits(),
            z2.im.to_bits(),
            tol.to_bits(),
        ],
    )
}

/// Single-threaded memo keyed by the exact bit patterns of the arguments.
#[derive(Debug, Default)]
pub struct MemoTables {
    entries: RefCell<BTreeMap<TableKey, Arc<StructureConstantsTable>>>,
}

impl MemoTables {
    pub fn len(&self) -> usize {
        self.entries.borrow().len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

impl TableProvider for MemoTables {
    fn table(
        &self,
        g1: &SL2Mat,
        g2: &SL2Mat,
        params: TorusParams,
        z1: Complex64,
        z2: Complex64,
        tol: f64,
    ) -> Result<Arc<StructureConstantsTable>> {
        let key = table_key(g1, g2, params, z1, z2, tol);
        if let Some(t) = self.entries.borrow().get(&key) {
            return Ok(t.clone());
        }
        let t = Arc::new(structure_constants(g1, g2, params, z1, z2, tol)?);
        self.entries.borrow_mut().insert(key, t.clone());
        Ok(t)
    }
}

impl<T: TableProvider + ?Sized> TableProvider for &T {
    fn table(
        &self,
        g1: &SL2Mat,
        g2: &SL2Mat,
        params: TorusParams,
        z1: Complex64,
        z2: Complex64,
        tol: f64,
    ) -> Result<Arc<StructureConstantsTable>> {
        (**self).table(g1, g2, params, z1, z2, tol)
    }
}

/// `H*C^st(θ, τ)` with a table source and a summation tolerance.
#[derive(Debug, Clone)]
pub struct Category<P = DirectTables> {
    pub tau: Complex64,
    pub tol: f64,
    provider: P,
}

impl Category<DirectTables> {
    pub fn new(tau: Complex64, tol: f64) -> Result<Self> {
        Category::with_provider(tau, tol, DirectTables)
    }
}

fn shape(msg: impl Into<alloc::string::String>) -> Error {
    Error::ShapeMismatch(msg.into())
}

impl<P: TableProvider> Category<P> {
    pub fn with_provider(tau: Complex64, tol: f64, provider: P) -> Result<Self> {
        if !(tau.im < 0.0) {
            return Err(domain("Im(τ) must be negative"));
        }
        if !(tol > 0.0) {
            return Err(domain("tolerance must be positive"));
        }
        Ok(Category { tau, tol, provider })
    }

    pub fn provider(&self) -> &P {
        &self.provider
    }

    pub fn hom_space(&self, e1: &StdObject, e2: &StdObject) -> Result<HomSpace> {
        hom_space(e1, e2, self.tau)
    }

    /// `(dim H⁰, dim H¹)` of `Hom(e1, e2)`.
    pub fn hom_dims(&self, e1: &StdObject, e2: &StdObject) -> Result<(usize, usize)> {
        Ok(self.hom_space(e1, e2)?.kind.dims())
    }

    pub fn vector(&self, e1: &StdObject, e2: &StdObject, degree: u8, coeffs: Vec<Complex64>) -> Result<HolVector> {
        if degree > 1 {
            return Err(domain("Hom complexes have no cohomology above degree 1"));
        }
        let n = self.hom_space(e1, e2)?.dim(degree);
        if coeffs.len() != n {
            return Err(shape(format!("H^{degree} Hom has dimension {n}, got {} coefficients", coeffs.len())));
        }
        let basis = if degree == 0 { Basis::Phi } else { Basis::Psi };
        Ok(HolVector { source: *e1, target: *e2, degree, coeffs, basis })
    }

    pub fn zero_vector(&self, e1: &StdObject, e2: &StdObject, degree: u8) -> Result<HolVector> {
        let n = self.hom_space(e1, e2)?.dim(degree.min(1));
        self.vector(e1, e2, degree, vec![ZERO; n])
    }

    pub fn basis_vector(&self, e1: &StdObject, e2: &StdObject, degree: u8, index: usize) -> Result<HolVector> {
        let mut v = self.zero_vector(e1, e2, degree)?;
        if index >= v.len() {
            return Err(shape(format!("basis index {index} out of range {}", v.len())));
        }
        v.coeffs[index] = ONE;
        Ok(v)
    }

    /// The table for composing `E1 → E2 → E3` in positive degrees.
    pub fn composition_table(&self, g: [&SL2Mat; 3], z: [Complex64; 3], theta: f64) -> Result<Arc<StructureConstantsTable>> {
        let (h1, h2, base, w1, w2) = composition_arguments(g, z, theta)?;
        self.provider.table(&h1, &h2, TorusParams { theta: base, tau: self.tau }, w1, w2, self.tol)
    }

    /// `v2 ∘ v1`.
    pub fn compose(&self, v2: &HolVector, v1: &HolVector) -> Result<HolVector> {
        if v1.target != v2.source {
            return Err(shape("vectors are not composable"));
        }
        let (e1, e2, e3) = (v1.source, v1.target, v2.target);
        match (v2.degree, v1.degree) {
            (0, 0) => {
                let coeffs = self.compose_h0(&e1, &e2, &e3, &v2.coeffs, &v1.coeffs)?;
                self.vector(&e1, &e3, 0, coeffs)
            }
            (1, 0) => {
                // (w ∘ v)_γ = ⟨v ∘ b_γ, w⟩ with b_γ the φ-basis of H⁰(E3, E1)
                let n = self.hom_space(&e3, &e1)?.dim(0);
                let mut coeffs = Vec::with_capacity(n);
                for gamma in 0..n {
                    let mut b = vec![ZERO; n];
                    b[gamma] = ONE;
                    let vb = self.compose_h0(&e3, &e1, &e2, &v1.coeffs, &b)?;
                    coeffs.push(dot(&vb, &v2.coeffs)?);
                }
                self.vector(&e1, &e3, 1, coeffs)
            }
            (0, 1) => {
                // (v ∘ w)_γ = ⟨b_γ ∘ v, w⟩
                let n = self.hom_space(&e3, &e1)?.dim(0);
                let mut coeffs = Vec::with_capacity(n);
                for gamma in 0..n {
                    let mut b = vec![ZERO; n];
                    b[gamma] = ONE;
                    let bv = self.compose_h0(&e2, &e3, &e1, &b, &v2.coeffs)?;
                    coeffs.push(dot(&bv, &v1.coeffs)?);
                }
                self.vector(&e1, &e3, 1, coeffs)
            }
            _ => Err(domain("composition of two degree-one classes would land in H²")),
        }
    }

    /// Coordinates of `b ∘ a` for `a ∈ H⁰(E1, E2)`, `b ∈ H⁰(E2, E3)`.
    fn compose_h0(
        &self,
        e1: &StdObject,
        e2: &StdObject,
        e3: &StdObject,
        b: &[Complex64],
        a: &[Complex64],
    ) -> Result<Vec<Complex64>> {
        let h12 = self.hom_space(e1, e2)?;
        let h23 = self.hom_space(e2, e3)?;
        let h13 = self.hom_space(e1, e3)?;
        if a.len() != h12.dim(0) || b.len() != h23.dim(0) {
            return Err(shape("coefficient vectors do not match their Hom spaces"));
        }
        let n13 = h13.dim(0);
        if a.is_empty() || b.is_empty() {
            return Ok(vec![ZERO; n13]);
        }
        if matches!(h12.kind, HomKind::Unipotent(_)) || matches!(h23.kind, HomKind::Unipotent(_)) {
            return Err(domain("composition through a unipotent Hom label is not supported"));
        }
        match (h23.kind, h12.kind) {
            (HomKind::Sections(_), HomKind::Sections(_)) => {
                let t = self.composition_table([&e1.g, &e2.g, &e3.g], [e1.z, e2.z, e3.z], e1.theta)?;
                let (ca, cb, cg) = t.dims();
                if (cb, ca, cg) != (a.len(), b.len(), n13) {
                    return Err(Error::InternalInvariantViolation("table shape disagrees with Hom spaces".into()));
                }
                let mut out = vec![ZERO; n13];
                for (i, &bi) in b.iter().enumerate() {
                    for (j, &aj) in a.iter().enumerate() {
                        let s = bi * aj;
                        if s == ZERO {
                            continue;
                        }
                        for (gamma, o) in out.iter_mut().enumerate() {
                            *o += s * t.get(i as i64, j as i64, gamma as i64);
                        }
                    }
                }
                Ok(out)
            }
            (HomKind::Sections(_), HomKind::Trivial(Some((p, q)))) => {
                // b ∘ (a·u) = (b · a u) via the right action on the Hom bundle of E2 → E3
                let u = lattice_generator(h23.label.theta, p, q).scale(a[0]);
                let f = self.phi_combination(&h23, b)?;
                let image = u.act_right(&f, &h23.label)?;
                self.phi_coordinates(&image, &h13)
            }
            (HomKind::Trivial(Some((p, q))), HomKind::Sections(_)) => {
                let u = lattice_generator(h12.label.left_theta(), p, q).scale(b[0]);
                let f = self.phi_combination(&h12, a)?;
                let image = u.act_left(&f, &h12.label)?;
                self.phi_coordinates(&image, &h13)
            }
            (HomKind::Trivial(Some((p2, q2))), HomKind::Trivial(Some((p1, q1)))) => {
                let theta0 = h12.label.theta;
                let prod = lattice_generator(theta0, p2, q2).mul(&lattice_generator(theta0, p1, q1));
                let coeff = prod.coeff(-(q1 + q2), -(p1 + p2));
                if h13.lattice() != Some((p1 + p2, q1 + q2)) {
                    return Err(Error::InternalInvariantViolation("twists of isomorphisms do not add".into()));
                }
                Ok(vec![coeff * a[0] * b[0]])
            }
            _ => Err(Error::InternalInvariantViolation("inconsistent Hom kinds in composition".into())),
        }
    }

    fn phi_combination(&self, h: &HomSpace, coeffs: &[Complex64]) -> Result<GaussianPacket> {
        let mut f = GaussianPacket::zero(h.label.legs());
        for (alpha, &c) in coeffs.iter().enumerate() {
            if c != ZERO {
                f = f.add(&phi_basis(&h.label, h.twist, alpha as i64, self.tau)?.scale(c))?;
            }
        }
        Ok(f)
    }

    /// Reads the φ-coordinates of a holomorphic section off its values at `x = 0`,
    /// then confirms the expansion at a second point.
    fn phi_coordinates(&self, f: &GaussianPacket, h: &HomSpace) -> Result<Vec<Complex64>> {
        let n = h.dim(0);
        let coeffs: Vec<Complex64> = (0..n as i64).map(|alpha| f.eval(0.0, alpha)).collect();
        let x = 0.37;
        for (alpha, &c) in coeffs.iter().enumerate() {
            let want = phi_basis(&h.label, h.twist, alpha as i64, self.tau)?.eval(x, alpha as i64) * c;
            let got = f.eval(x, alpha as i64);
            if (got - want).norm() > 1e-9 * (1.0 + got.norm()) {
                return Err(Error::InternalInvariantViolation(format!(
                    "image is not holomorphic for the expected twist ({got} vs {want})"
                )));
            }
        }
        Ok(coeffs)
    }

    /// `⟨v, w⟩` for `v ∈ H^i Hom(E, E′)`, `w ∈ H^{1−i} Hom(E′, E)`.
    pub fn serre_pairing(&self, v: &HolVector, w: &HolVector) -> Result<Complex64> {
        if v.degree + w.degree != 1 {
            return Err(shape("Serre pairing needs complementary degrees"));
        }
        if v.source != w.target || v.target != w.source {
            return Err(shape("Serre pairing needs opposite Hom spaces"));
        }
        dot(&v.coeffs, &w.coeffs)
    }

    /// The matrix `G[α, δ] = b(φ_α ⊗ r_δ)` between the φ-basis of `H⁰ Hom(E′, E)` and
    /// Gaussian representatives `r_δ` of `H¹ Hom(E, E′)`; needs `deg(Hom(E, E′)) < 0`.
    pub fn serre_gram(&self, e: &StdObject, e2: &StdObject) -> Result<DMatrix<Complex64>> {
        let fwd = self.hom_space(e, e2)?;
        let back = self.hom_space(e2, e)?;
        let n = match fwd.kind {
            HomKind::Cosections(n) => n,
            _ => return Err(domain("Gram matrix needs a negative-degree Hom label")),
        };
        let k = fwd.label.g;
        let mut gram = DMatrix::from_element(n, n, ZERO);
        for alpha in 0..n {
            let phi = phi_basis(&back.label, back.twist, alpha as i64, self.tau)?;
            for delta in 0..n {
                let r = cokernel_representative(&fwd.label, fwd.twist, delta as i64, self.tau)?;
                gram[(alpha, delta)] = pairing_b(&phi, &r, &k, fwd.label.theta)?;
            }
        }
        Ok(gram)
    }

    /// Gaussian representative of the class `w ∈ H¹ Hom(E′, E)`, as a map `E′ → E`.
    pub fn h1_representative(&self, w: &HolVector) -> Result<Coupling> {
        if w.degree != 1 {
            return Err(domain("representatives are for degree-one classes"));
        }
        let (src, dst) = (w.source, w.target);
        let here = self.hom_space(&src, &dst)?;
        match here.kind {
            HomKind::Cosections(n) => {
                let gram = self.serre_gram(&src, &dst)?;
                let inv = gram.try_inverse().ok_or_else(|| domain("Serre Gram matrix is singular"))?;
                let mut f = GaussianPacket::zero(here.label.legs());
                for delta in 0..n {
                    let mut c = ZERO;
                    for (beta, &wb) in w.coeffs.iter().enumerate() {
                        c += inv[(delta, beta)] * wb;
                    }
                    if c != ZERO {
                        f = f.add(&cokernel_representative(&here.label, here.twist, delta as i64, self.tau)?.scale(c))?;
                    }
                }
                Ok(Coupling::Section(f))
            }
            HomKind::Trivial(Some((p, q))) => {
                // the cokernel of ∇̄_w on A is spanned by the same monomial as the kernel;
                // normalize against the H⁰ generator of the opposite Hom by the trace
                let theta0 = here.label.theta;
                let u = lattice_generator(theta0, p, q);
                let u_back = lattice_generator(theta0, -p, -q);
                let tr = u_back.mul(&u).trace();
                Ok(Coupling::Algebra(u.scale(w.coeffs[0] / tr)))
            }
            HomKind::Trivial(None) | HomKind::Sections(_) => Ok(Coupling::Zero),
            HomKind::Unipotent(_) => Err(domain("unipotent Hom labels have no chosen representative")),
        }
    }

    /// The extension `0 → E → E⁽²⁾ → E′ → 0` with connection `[[∇̄_E, φ], [0, ∇̄_{E′}]]`.
    pub fn ext_structure(&self, class: &HolVector) -> Result<ExtStructure> {
        let coupling = self.h1_representative(class)?;
        let split = class.coeffs.iter().all(|c| *c == ZERO);
        Ok(ExtStructure { sub: class.target, quotient: class.source, tau: self.tau, coupling, split })
    }
}

fn dot(a: &[Complex64], b: &[Complex64]) -> Result<Complex64> {
    if a.len() != b.len() {
        return Err(shape(format!("lengths {} and {} differ", a.len(), b.len())));
    }
    Ok(a.iter().zip(b).map(|(x, y)| x * y).sum())
}

/// The off-diagonal entry of an extension connection.
#[derive(Debug, Clone, PartialEq)]
pub enum Coupling {
    Zero,
    /// A section of the Hom bundle, acting by the pairing `t`.
    Section(GaussianPacket),
    /// An element of the endomorphism algebra, acting on the left.
    Algebra(TorusElement),
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExtStructure {
    pub sub: StdObject,
    pub quotient: StdObject,
    pub tau: Complex64,
    pub coupling: Coupling,
    pub split: bool,
}

impl ExtStructure {
    /// Applies the connection to `(e1, e2) ∈ E ⊕ E′` when the coupling acts by the algebra.
    pub fn apply(&self, e1: &GaussianPacket, e2: &GaussianPacket) -> Result<(GaussianPacket, GaussianPacket)> {
        let top = dbar(e1, &self.sub.label(), self.tau, self.sub.z)?;
        let bottom = dbar(e2, &self.quotient.label(), self.tau, self.quotient.z)?;
        let top = match &self.coupling {
            Coupling::Zero => top,
            Coupling::Algebra(a) => top.add(&a.act_left(e2, &self.quotient.label())?)?,
            Coupling::Section(_) => {
                return Err(domain("section couplings only act pointwise through the pairing t"));
            }
        };
        Ok((top, bottom))
    }

    /// For an endomorphism-type coupling: the connection with `φ + [∇̄, L(f)]` agrees with
    /// `S⁻¹ D S` for `S = [[1, L(f)], [0, 1]]`, checked pointwise on the probes.
    pub fn representative_change_check(
        &self,
        f: &TorusElement,
        probes: &[(GaussianPacket, GaussianPacket)],
        points: &[(f64, i64)],
        tol: f64,
    ) -> Result<bool> {
        let phi = match &self.coupling {
            Coupling::Algebra(a) => a.clone(),
            Coupling::Zero => TorusElement::zero(f.theta),
            Coupling::Section(_) => return Err(domain("representative change needs an algebra coupling")),
        };
        if self.sub.g != self.quotient.g {
            return Err(domain("representative change is implemented for endomorphism extensions"));
        }
        let twist = (self.sub.z - self.quotient.z) * self.sub.rk();
        let hom_dbar = f.delta(self.tau).add(&f.scale(crate::analytic::two_pi_i(twist)));
        let shifted = ExtStructure {
            coupling: Coupling::Algebra(phi.add(&hom_dbar.scale(Complex64::new(1.0 / self.quotient.rk(), 0.0)))),
            split: false,
            ..self.clone()
        };
        let label = self.quotient.label();
        for (e1, e2) in probes {
            // D (S e) versus S (D′ e)
            let se1 = e1.add(&f.act_left(e2, &label)?)?;
            let (l1, l2) = self.apply(&se1, e2)?;
            let (d1, d2) = shifted.apply(e1, e2)?;
            let r1 = d1.add(&f.act_left(&d2, &label)?)?;
            for &(x, alpha) in points {
                let scale = 1.0 + l1.eval(x, alpha).norm();
                if (l1.eval(x, alpha) - r1.eval(x, alpha)).norm() > tol * scale
                    || (l2.eval(x, alpha) - d2.eval(x, alpha)).norm() > tol * (1.0 + l2.eval(x, alpha).norm())
                {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }
}

/// `U_{(m/c, n/c)}` on `H^i(E)`: `M[(β + na) mod |c|, β] = e(−m(β + na)/c)`.
pub fn heisenberg_matrix(obj: &StdObject, m: i64, n: i64) -> Result<DMatrix<Complex64>> {
    let c = obj.deg();
    if c == 0 {
        return Err(Error::DegenerateDegree);
    }
    let size = c.unsigned_abs() as usize;
    let a = obj.g.a;
    let mut out = DMatrix::from_element(size, size, ZERO);
    for beta in 0..size as i64 {
        let alpha = (beta + n * a).rem_euclid(size as i64);
        out[(alpha as usize, beta as usize)] = e(-((m as i128 * alpha as i128) % c as i128) as f64 / c as f64);
    }
    Ok(out)
}

/// Dimension of `{X : X M = M X for all M}`, by the nullity of the stacked Kronecker system.
pub fn commutant_dim(mats: &[DMatrix<Complex64>]) -> Result<usize> {
    let n = mats.first().map(|m| m.nrows()).ok_or_else(|| domain("no matrices given"))?;
    let nn = n * n;
    let mut system = DMatrix::from_element(nn * mats.len(), nn, ZERO);
    for (k, m) in mats.iter().enumerate() {
        if m.nrows() != n || m.ncols() != n {
            return Err(shape("matrices of different sizes"));
        }
        // vec(X M − M X) with column-major vec: (Mᵀ ⊗ I − I ⊗ M) vec X
        for i in 0..n {
            for j in 0..n {
                let col = i + j * n;
                for r in 0..n {
                    system[(k * nn + i + r * n, col)] += m[(j, r)];
                    system[(k * nn + r + j * n, col)] -= m[(r, i)];
                }
            }
        }
    }
    let sv = system.svd(false, false).singular_values;
    let top = sv.iter().cloned().fold(0.0, f64::max);
    let rank = sv.iter().filter(|s| **s > 1e-9 * top.max(1.0)).count();
    Ok(nn - rank)
}

/// `U_x U_y U_x⁻¹ U_y⁻¹` for two Heisenberg generators, which must be a scalar matrix.
pub fn heisenberg_commutator(e: &StdObject, x: (i64, i64), y: (i64, i64)) -> Result<DMatrix<Complex64>> {
    let ux = heisenberg_matrix(e, x.0, x.1)?;
    let uy = heisenberg_matrix(e, y.0, y.1)?;
    let uxi = ux.clone().try_inverse().ok_or_else(|| domain("singular Heisenberg matrix"))?;
    let uyi = uy.clone().try_inverse().ok_or_else(|| domain("singular Heisenberg matrix"))?;
    Ok(&ux * &uy * uxi * uyi)
}

/// Checks that all objects share `θ` and have positive rank; used by callers assembling triples.
pub fn admissible(objects: &[StdObject]) -> bool {
    objects.iter().all(|o| o.rk() > RANK_EPS) && objects.windows(2).all(|w| w[0].theta == w[1].theta)
}
