//! The equivalence `F_{θ,θ′}` between categories at two parameters, Morita transport,
//! the induced action on `K_0`, and the slope classification of images.
//!
//! For `θ ≤ θ′` the functor sends `E_g^z(θ)[n]` to `E_g^{λz}(θ′)[n]` when `rk(g,θ′) > 0` and to
//! `E_{−g}^{λz}(θ′)[n−1]` otherwise, with `λ(g) = rk(g,θ)/rk(g,θ′)`. For `θ > θ′` it is the
//! inverse of the functor in the other direction.

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::category::{hom_space, Category, HolVector, HomKind, MemoTables, StdObject};
use crate::error::{domain, Error, Result};
use crate::sl2::{compose, SL2Mat, RANK_EPS};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FunctorContext {
    pub theta: f64,
    pub theta_prime: f64,
    pub tau: Complex64,
}

impl FunctorContext {
    pub fn new(theta: f64, theta_prime: f64, tau: Complex64) -> Result<Self> {
        if !(tau.im < 0.0) {
            return Err(domain("Im(τ) must be negative"));
        }
        if !theta.is_finite() || !theta_prime.is_finite() {
            return Err(domain("parameters must be finite"));
        }
        Ok(FunctorContext { theta, theta_prime, tau })
    }

    /// Whether the functor is given by the explicit formulas (`θ ≤ θ′`).
    pub fn is_forward(&self) -> bool {
        self.theta <= self.theta_prime
    }

    pub fn reversed(&self) -> FunctorContext {
        FunctorContext { theta: self.theta_prime, theta_prime: self.theta, tau: self.tau }
    }

    fn target_rank(&self, g: &SL2Mat) -> Result<f64> {
        let r = g.rk(self.theta_prime);
        if r.abs() < RANK_EPS {
            return Err(Error::ZeroRankTarget(r));
        }
        Ok(r)
    }

    /// `λ(g) = rk(g, θ)/rk(g, θ′)`.
    pub fn lambda(&self, g: &SL2Mat) -> Result<f64> {
        Ok(g.rk(self.theta) / self.target_rank(g)?)
    }
}

pub fn f_object(e: &StdObject, ctx: &FunctorContext) -> Result<StdObject> {
    if e.theta != ctx.theta {
        return Err(domain("object does not live over the source parameter"));
    }
    let r = ctx.target_rank(&e.g)?;
    let z = e.z * ctx.lambda(&e.g)?;
    let step = if ctx.is_forward() { -1 } else { 1 };
    if r > 0.0 {
        StdObject::new(e.g, ctx.theta_prime, z, e.shift)
    } else {
        StdObject::new(-e.g, ctx.theta_prime, z, e.shift + step)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CaseClass {
    I,
    II,
    III,
}

/// The sign pattern of `(rk(g1,θ′), rk(g2,θ′))` for `deg(g2g1⁻¹) > 0` and positive ranks at `θ`.
///
/// For `θ ≤ θ′` case II is `rk(g1,θ′) < 0 < rk(g2,θ′)` and the opposite mixed pattern cannot occur.
/// For `θ > θ′` the roles of the two mixed patterns are exchanged.
pub fn case_classify(g1: &SL2Mat, g2: &SL2Mat, ctx: &FunctorContext) -> Result<CaseClass> {
    let k = compose(g2, &g1.inv())?;
    if k.c <= 0 {
        return Err(domain("case classification needs deg(g2 g1⁻¹) > 0"));
    }
    if !(g1.rk(ctx.theta) > RANK_EPS && g2.rk(ctx.theta) > RANK_EPS) {
        return Err(domain("case classification needs positive ranks at θ"));
    }
    let p1 = ctx.target_rank(g1)? > 0.0;
    let p2 = ctx.target_rank(g2)? > 0.0;
    let forward = ctx.is_forward();
    match (p1, p2) {
        (true, true) => Ok(CaseClass::I),
        (false, false) => Ok(CaseClass::III),
        (false, true) if forward => Ok(CaseClass::II),
        (true, false) if !forward => Ok(CaseClass::II),
        _ => Err(Error::InternalInvariantViolation(alloc::format!(
            "impossible sign pattern for {g1}, {g2} between θ = {} and θ′ = {}",
            ctx.theta, ctx.theta_prime
        ))),
    }
}

/// Where the forward functor sends the basis vector `index` of `H^degree Hom(s, t)`.
fn forward_basis_map(s: &StdObject, t: &StdObject, degree: u8, index: usize, ctx: &FunctorContext) -> Result<(u8, usize)> {
    if degree == 1 {
        // the transpose of the map on the dual φ-basis of Hom(t, s)
        let (d, j) = forward_basis_map(t, s, 0, index, ctx)?;
        return Ok((1 - d, j));
    }
    let hs = hom_space(s, t, ctx.tau)?;
    if index >= hs.dim(0) {
        return Err(Error::ShapeMismatch(alloc::format!("basis index {index} out of range")));
    }
    match hs.kind {
        HomKind::Sections(n) => {
            let ps = ctx.target_rank(&s.g)? > 0.0;
            let pt = ctx.target_rank(&t.g)? > 0.0;
            match (ps, pt) {
                (true, true) => Ok((0, index)),
                (false, false) => Ok((0, (n - index) % n)),
                (false, true) => {
                    let d = hs.label.g.d;
                    let j = (-(d as i128) * index as i128).rem_euclid(n as i128) as usize;
                    Ok((1, j))
                }
                (true, false) => Err(Error::InternalInvariantViolation(alloc::format!(
                    "impossible sign pattern for {} → {}",
                    s.g, t.g
                ))),
            }
        }
        HomKind::Trivial(Some(_)) => Ok((0, 0)),
        HomKind::Unipotent(_) => Err(domain("the functor is not defined on unipotent Hom labels")),
        _ => Err(Error::InternalInvariantViolation("empty Hom space has no basis".into())),
    }
}

fn image_degree(v: &HolVector, fs: &StdObject, ft: &StdObject) -> Result<u8> {
    let total = v.degree as i64 - (v.target.shift - v.source.shift);
    let d = total + (ft.shift - fs.shift);
    match d {
        0 => Ok(0),
        1 => Ok(1),
        _ => Err(domain(alloc::format!("image lands in degree {d}"))),
    }
}

/// `F(v)` on cohomology classes; both degrees are handled through the φ-basis maps.
pub fn f_morphism(v: &HolVector, ctx: &FunctorContext) -> Result<HolVector> {
    let fs = f_object(&v.source, ctx)?;
    let ft = f_object(&v.target, ctx)?;
    let d_img = image_degree(v, &fs, &ft)?;
    let target_cat = Category::new(ctx.tau, 1e-12)?;
    let n_img = target_cat.hom_space(&fs, &ft)?.dim(d_img);
    if n_img != v.len() {
        return Err(Error::InternalInvariantViolation(alloc::format!(
            "image Hom space has dimension {n_img}, source {}",
            v.len()
        )));
    }
    let mut coeffs = vec![Complex64::new(0.0, 0.0); n_img];
    if ctx.is_forward() {
        for (i, &c) in v.coeffs.iter().enumerate() {
            let (d, j) = forward_basis_map(&v.source, &v.target, v.degree, i, ctx)?;
            if d != d_img {
                return Err(Error::InternalInvariantViolation("basis map disagrees with shifts".into()));
            }
            coeffs[j] = c;
        }
    } else {
        let back = ctx.reversed();
        for j in 0..n_img {
            let (d, i) = forward_basis_map(&fs, &ft, d_img, j, &back)?;
            if d != v.degree || i >= v.len() {
                return Err(Error::InternalInvariantViolation("inverse basis map is inconsistent".into()));
            }
            coeffs[j] = v.coeffs[i];
        }
    }
    target_cat.vector(&fs, &ft, d_img, coeffs)
}

/// `F(v ∘ u) = F(v) ∘ F(u)` for all basis pairs `u ∈ H⁰(E1,E2)`, `v ∈ H⁰(E2,E3)`, `Ei = E_{gi}^{zi}(θ)`.
#[allow(clippy::too_many_arguments)]
pub fn functoriality_check(
    g1: &SL2Mat,
    g2: &SL2Mat,
    g3: &SL2Mat,
    z1: Complex64,
    z2: Complex64,
    z3: Complex64,
    ctx: &FunctorContext,
    tol: f64,
) -> Result<bool> {
    if !(tol > 0.0) {
        return Err(domain("tolerance must be positive"));
    }
    let sum_tol = (tol * 1e-3).max(1e-15);
    let memo = MemoTables::default();
    let src = Category::with_provider(ctx.tau, sum_tol, &memo)?;
    let dst = Category::with_provider(ctx.tau, sum_tol, &memo)?;
    let e1 = StdObject::new(*g1, ctx.theta, z1, 0)?;
    let e2 = StdObject::new(*g2, ctx.theta, z2, 0)?;
    let e3 = StdObject::new(*g3, ctx.theta, z3, 0)?;
    for (a, b) in [(&e1, &e2), (&e2, &e3)] {
        if !matches!(src.hom_space(a, b)?.kind, HomKind::Sections(_)) {
            return Err(domain("functoriality is checked on positive-degree Hom labels"));
        }
    }
    let n12 = src.hom_space(&e1, &e2)?.dim(0);
    let n23 = src.hom_space(&e2, &e3)?.dim(0);
    for beta in 0..n12 {
        let u = src.basis_vector(&e1, &e2, 0, beta)?;
        let fu = f_morphism(&u, ctx)?;
        for alpha in 0..n23 {
            let v = src.basis_vector(&e2, &e3, 0, alpha)?;
            let lhs = f_morphism(&src.compose(&v, &u)?, ctx)?;
            let rhs = dst.compose(&f_morphism(&v, ctx)?, &fu)?;
            if lhs.degree != rhs.degree || lhs.len() != rhs.len() {
                return Ok(false);
            }
            for (x, y) in lhs.coeffs.iter().zip(&rhs.coeffs) {
                if (x - y).norm() > tol * (1.0 + x.norm()) {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

/// `E_g^z(g0θ)[n] ↦ E_{gg0}^{z/rk(g0,θ)}(θ)[n]`, moving to `−gg0` with a shift when the rank turns negative.
pub fn morita_transport(e: &StdObject, g0: &SL2Mat, theta: f64) -> Result<StdObject> {
    let base = g0.act(theta)?;
    if (base - e.theta).abs() > 1e-12 * (1.0 + base.abs()) {
        return Err(domain("object does not live over g0θ"));
    }
    let g = compose(&e.g, g0)?;
    let r = g.rk(theta);
    if r.abs() < RANK_EPS {
        return Err(Error::ZeroRank(r));
    }
    let z = e.z / g0.rk(theta);
    if r > 0.0 {
        StdObject::new(g, theta, z, e.shift)
    } else {
        StdObject::new(-g, theta, z, e.shift - 1)
    }
}

/// `(−1)^n (deg, rk(·,0))` of `E_g(θ)[n]`, the class in `K_0 ≅ ℤ²`.
pub fn ktheory_class(e: &StdObject) -> (i64, i64) {
    let sign = if e.shift.rem_euclid(2) == 0 { 1 } else { -1 };
    (sign * e.g.c, sign * e.g.d)
}

/// `G = F_{θ,0} ∘ M_{g,θ} ∘ F_{θ′,0}⁻¹` with `θ′ = gθ`, on objects over `0`.
pub fn ktheory_image(e: &StdObject, g: &SL2Mat, ctx: &FunctorContext) -> Result<StdObject> {
    let into = FunctorContext::new(0.0, ctx.theta_prime, ctx.tau)?;
    let out = FunctorContext::new(ctx.theta, 0.0, ctx.tau)?;
    let moved = morita_transport(&f_object(e, &into)?, g, ctx.theta)?;
    f_object(&moved, &out)
}

/// Whether `G` acts on classes as `predicted` (a column-vector action on `(deg, rk)`).
pub fn ktheory_prediction_check(g: &SL2Mat, samples: &[StdObject], ctx: &FunctorContext, predicted: &SL2Mat) -> Result<bool> {
    let gt = g.act(ctx.theta)?;
    if (gt - ctx.theta_prime).abs() > 1e-12 * (1.0 + gt.abs()) {
        return Err(domain("the K-theory check needs θ′ = gθ"));
    }
    for e in samples {
        let (c, d) = ktheory_class(e);
        let image = ktheory_class(&ktheory_image(e, g, ctx)?);
        let want = (predicted.a * c + predicted.b * d, predicted.c * c + predicted.d * d);
        if image != want {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `G` acts on `(deg, rk)` by `gᵗ`.
pub fn ktheory_action_check(g: &SL2Mat, samples: &[StdObject], ctx: &FunctorContext) -> Result<bool> {
    ktheory_prediction_check(g, samples, ctx, &g.transpose())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Tilt {
    /// Image is a bundle of slope below `−θ⁻¹`.
    Below,
    /// Image is a bundle of slope above `−θ⁻¹`, placed in degree `−1`.
    AboveShifted,
}

/// Which side of the slope cut `−θ⁻¹` the image of `E` under `F_{θ,0}` falls on, for `θ < 0`.
pub fn tilt_classify(e: &StdObject, ctx: &FunctorContext) -> Result<Tilt> {
    if !(ctx.theta < 0.0) || ctx.theta_prime != 0.0 {
        return Err(domain("tilt classification needs θ < 0 and θ′ = 0"));
    }
    if !(e.rk() > RANK_EPS) {
        return Err(domain("tilt classification needs rk(g, θ) > 0"));
    }
    let r0 = ctx.target_rank(&e.g)?;
    let cut = -1.0 / ctx.theta;
    let image = if r0 > 0.0 { e.g } else { -e.g };
    let slope = image.c as f64 / image.d as f64;
    let (class, holds) = if r0 > 0.0 { (Tilt::Below, slope < cut) } else { (Tilt::AboveShifted, slope > cut) };
    if !holds {
        return Err(Error::InternalInvariantViolation(alloc::format!(
            "slope {slope} on the wrong side of {cut}"
        )));
    }
    Ok(class)
}

/// Objects `E_{gi}^{zi}(θ)` for a triple, in the order given.
pub fn triple_objects(g: [&SL2Mat; 3], z: [Complex64; 3], theta: f64) -> Result<Vec<StdObject>> {
    g.iter().zip(z).map(|(gi, zi)| StdObject::new(**gi, theta, zi, 0)).collect()
}
