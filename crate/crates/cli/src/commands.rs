//! Single-object and single-context reports behind the `cohomology`, `fourier` and
//! `equivalence` subcommands.

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use nctorus_core::analytic::{kernel_cokernel_dims, two_pi_i};
use nctorus_core::category::{cohomology_dims, euler_char, StdObject};
use nctorus_core::equivalence::{case_classify, f_object, functoriality_check, CaseClass, FunctorContext};
use nctorus_core::fourier::{automorphy_check, extension_nonsplit_check, fm_class, kernel_basis, FMKind};
use nctorus_core::sampling;
use nctorus_core::sl2::{quotient, SL2Mat};
use nctorus_core::theta::cyclic_identity_check;

use crate::config::RunConfig;
use crate::error::{CliError, Result};
use crate::report::{Check, Report};

/// `E_{n,m}^0(θ)`: degree `m`, rank `mθ + n`.
pub fn basic_object(n: i64, m: i64, config: &RunConfig) -> Result<StdObject> {
    let g = SL2Mat::with_bottom_row(m, n)?;
    Ok(StdObject::new(g, config.theta, Complex64::new(0.0, 0.0), 0)?)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CohomologyReport {
    pub label: String,
    pub theta: f64,
    pub rank: f64,
    pub degree: i64,
    pub h0: usize,
    pub h1: usize,
    pub euler: i64,
    /// `(dim ker, dim coker)` of the truncated Hermite operator, scaled by `|deg|`.
    pub operator: Option<(usize, usize)>,
}

pub fn cohomology(n: i64, m: i64, config: &RunConfig) -> Result<CohomologyReport> {
    let config = config.validate()?;
    let e = basic_object(n, m, &config)?;
    let (h0, h1) = cohomology_dims(&e, config.tau)?;
    let operator = if m != 0 {
        let (k, c) = kernel_cokernel_dims(two_pi_i(config.tau * e.mu()), two_pi_i(e.z), config.hermite_dim, 1e-8)?;
        let s = m.unsigned_abs() as usize;
        Some((s * k, s * c))
    } else {
        None
    };
    Ok(CohomologyReport { label: e.g.to_string(), theta: e.theta, rank: e.rk(), degree: e.deg(), h0, h1, euler: euler_char(&e), operator })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FourierReport {
    pub label: String,
    pub kind: String,
    pub rank: i64,
    pub degree: i64,
    pub shift: i64,
    pub kernel_dim: Option<usize>,
    pub automorphy: Option<bool>,
    pub nonsplit: Option<bool>,
}

pub fn fourier(n: i64, m: i64, config: &RunConfig) -> Result<FourierReport> {
    let config = config.validate()?;
    let e = basic_object(n, m, &config)?;
    let img = fm_class(&e, config.tau)?;
    let kind = match img.kind {
        FMKind::Bundle => "bundle",
        FMKind::Point => "point",
        FMKind::Shifted => "shifted bundle",
    };
    let (kernel_dim, automorphy, nonsplit) = if m > 0 {
        let z0 = Complex64::new(0.13, 0.07);
        (
            Some(kernel_basis(&e, z0, config.tau)?.len()),
            Some(automorphy_check(&e, z0, config.tau, 1e-10)?),
            Some(extension_nonsplit_check(&e, config.tau, 1e-12)?),
        )
    } else {
        (None, None, None)
    };
    Ok(FourierReport {
        label: e.g.to_string(),
        kind: kind.into(),
        rank: img.rank,
        degree: img.degree,
        shift: img.shift,
        kernel_dim,
        automorphy,
        nonsplit,
    })
}

/// Functoriality and constant checks on random triples over the given `θ`, `θ′`.
pub fn equivalence(config: &RunConfig) -> Result<Report> {
    let config = config.validate()?;
    let ctx = FunctorContext::new(config.theta, config.theta_prime, config.tau)?;
    let mut r = ChaCha8Rng::seed_from_u64(config.seed);
    let mut samples = 0;
    let mut attempts = 0;
    let mut counts = [0usize; 3];
    let (mut func_bad, mut cyclic_bad, mut image_bad) = (0, 0, 0);
    while samples < 30 {
        attempts += 1;
        if attempts > 200_000 {
            return Err(CliError::Config(format!(
                "no admissible triples found for theta = {}, theta' = {}",
                config.theta, config.theta_prime
            )));
        }
        let g = [sampling::sl2(&mut r, 3), sampling::sl2(&mut r, 3), sampling::sl2(&mut r, 3)];
        let admissible = g.iter().all(|gi| gi.rk(ctx.theta) > 0.05 && gi.rk(ctx.theta_prime).abs() > 0.05)
            && (0..2).all(|i| quotient(&g[i + 1], &g[i]).map(|q| (1..=4).contains(&q.c)).unwrap_or(false));
        if !admissible {
            continue;
        }
        let z = [sampling::twist(&mut r, 0.5), sampling::twist(&mut r, 0.5), sampling::twist(&mut r, 0.5)];
        log::info!("equivalence: {} {} {} z = {z:?}", g[0], g[1], g[2]);
        for i in 0..2 {
            counts[match case_classify(&g[i], &g[i + 1], &ctx)? {
                CaseClass::I => 0,
                CaseClass::II => 1,
                CaseClass::III => 2,
            }] += 1;
        }
        if ctx.is_forward() && !functoriality_check(&g[0], &g[1], &g[2], z[0], z[1], z[2], &ctx, 1e-9)? {
            func_bad += 1;
        }
        let signs: Vec<bool> = g.iter().map(|gi| gi.rk(ctx.theta_prime) > 0.0).collect();
        if ctx.is_forward()
            && (signs == [true, true, true] || signs == [false, true, true])
            && !cyclic_identity_check(&g[0], &g[1], &g[2], z[0], z[1], z[2], ctx.theta, ctx.theta_prime, ctx.tau, 1e-9)?
        {
            cyclic_bad += 1;
        }
        for (gi, zi) in g.iter().zip(z) {
            let img = f_object(&StdObject::new(*gi, ctx.theta, zi, 0)?, &ctx)?;
            let expected = match (gi.rk(ctx.theta_prime) < 0.0, ctx.is_forward()) {
                (false, _) => 0,
                (true, true) => -1,
                (true, false) => 1,
            };
            if img.rk() <= 0.0 || img.shift != expected {
                image_bad += 1;
            }
        }
        samples += 1;
    }
    log::info!("equivalence: case counts (i, ii, iii) = {counts:?}");
    let mut checks = vec![Check::failures("equivalence.object_images", image_bad)];
    if ctx.is_forward() {
        checks.push(Check::failures("equivalence.functoriality", func_bad));
        checks.push(Check::failures("equivalence.cyclic", cyclic_bad));
    }
    Ok(Report::new("equivalence", config, checks))
}
