//! Verification suites. Every randomized suite draws from its own stream derived from the seed,
//! so a suite gives the same report alone or inside `all`.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use nctorus_core::analytic::{kernel_cokernel_dims, pairing_t, phi_basis, two_pi_i, ModuleLabel};
use nctorus_core::category::{
    cohomology_dims, commutant_dim, heisenberg_commutator, heisenberg_matrix, Category, StdObject,
};
use nctorus_core::equivalence::{case_classify, functoriality_check, ktheory_action_check, FunctorContext};
use nctorus_core::error::Error;
use nctorus_core::fourier::{automorphy_check, extension_nonsplit_check, fm_class, kernel_basis, kernel_is_exact};
use nctorus_core::index::{assoc_bijection_check, enumerate, index_set};
use nctorus_core::sampling;
use nctorus_core::sl2::{cocycle_residual, compose, degree_identity_residual, quotient, SL2Mat, TorusParams};
use nctorus_core::theta::{cyclic_identity_check, structure_constants};

use crate::config::RunConfig;
use crate::error::{CliError, Result};
use crate::report::{Check, Report};
use crate::tables::SharedTables;

pub const SUITES: [&str; 6] = ["identities", "index", "constants", "category", "equivalence", "fourier"];

fn stream(config: &RunConfig, suite: &str) -> ChaCha8Rng {
    let tag = suite.bytes().fold(0xcbf2_9ce4_8422_2325u64, |h, b| (h ^ b as u64).wrapping_mul(0x100_0000_01b3));
    ChaCha8Rng::seed_from_u64(config.seed ^ tag)
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

/// Turns a failed computation into a failing check.
fn guarded(id: &str, f: impl FnOnce() -> std::result::Result<Check, Error>) -> Check {
    f().unwrap_or_else(|e| {
        log::error!("{id}: {e}");
        Check { id: id.to_string(), status: crate::report::Status::Fail, residual: f64::MAX, bound: 0.0 }
    })
}

pub fn run_suite(name: &str, config: &RunConfig) -> Result<Report> {
    let config = config.validate()?;
    log::info!("suite {name}: seed {}", config.seed);
    let checks = match name {
        "identities" => identities(&config),
        "index" => index(&config),
        "constants" => constants(&config),
        "category" => category(&config),
        "equivalence" => equivalence(&config),
        "fourier" => fourier(&config),
        "all" => std::thread::scope(|scope| {
            let handles: Vec<_> = SUITES.iter().map(|s| scope.spawn(move || run_suite(s, &config))).collect();
            let mut checks = Vec::new();
            for h in handles {
                checks.extend(h.join().map_err(|_| CliError::Config("suite thread panicked".into()))??.checks);
            }
            Ok::<_, CliError>(checks)
        })?,
        other => return Err(CliError::Config(format!("unknown suite {other:?}"))),
    };
    Ok(Report::new(name, config, checks))
}

fn identities(config: &RunConfig) -> Vec<Check> {
    let mut r = stream(config, "identities");
    let (mut cocycle, mut degree) = (0.0f64, 0.0f64);
    let mut n = 0;
    while n < 10_000 {
        let g = [sampling::sl2(&mut r, 20), sampling::sl2(&mut r, 20), sampling::sl2(&mut r, 20)];
        let theta: f64 = r.random_range(-2.0..2.0);
        if g.iter().any(|gi| gi.rk(theta).abs() < 1e-6) {
            continue;
        }
        match (cocycle_residual(&g[0], &g[1], theta), degree_identity_residual(&g[0], &g[1], &g[2], theta)) {
            (Ok(a), Ok(b)) => {
                cocycle = cocycle.max(a);
                degree = degree.max(b);
            }
            _ => {
                cocycle = f64::MAX;
                log::error!("identities: evaluation failed for {} {} {} at {theta}", g[0], g[1], g[2]);
            }
        }
        n += 1;
    }
    let bound = config.tol.max(1e-12);
    vec![Check::at_most("identities.cocycle", cocycle, bound), Check::at_most("identities.degree", degree, bound)]
}

fn index(config: &RunConfig) -> Vec<Check> {
    let mut r = stream(config, "index");
    let w = config.window;
    let mut brute = 0;
    let mut secondary = 0;
    let mut done = 0;
    while done < 1000 {
        let g1 = sampling::sl2_nonzero_degree(&mut r, 6);
        let g2 = sampling::sl2_nonzero_degree(&mut r, 6);
        let Ok(g12) = compose(&g1, &g2) else { continue };
        if g12.c == 0 {
            continue;
        }
        let (a1, a2, a) = (r.random_range(0..g1.c.abs()), r.random_range(0..g2.c.abs()), r.random_range(0..g12.c.abs()));
        let Ok(p) = index_set(&g1, &g2, a1, a2, a) else {
            brute += 1;
            continue;
        };
        let got = enumerate(&p, w);
        let (m1, m2) = ((g12.c * g1.c).abs(), (g12.c * g2.c).abs());
        let want: Vec<i64> = (-w..=w)
            .filter(|n| (n + g1.c * a - g12.c * a1).rem_euclid(m1) == 0)
            .filter(|n| (n - g2.c * g12.d * a + g12.c * g2.d * a2).rem_euclid(m2) == 0)
            .collect();
        if got != want {
            log::warn!("index: {g1} {g2} ({a1},{a2},{a}) differs from the scan");
            brute += 1;
        }
        let m = (g1.c * g2.c).abs();
        secondary += got.iter().filter(|&&n| (n + g1.c * a2 - g1.d * g2.c * a1).rem_euclid(m) != 0).count();
        done += 1;
    }
    let mut bijection = 0;
    let mut t = 0;
    while t < 100 {
        let g = [
            sampling::sl2_nonzero_degree(&mut r, 3),
            sampling::sl2_nonzero_degree(&mut r, 3),
            sampling::sl2_nonzero_degree(&mut r, 3),
        ];
        let (Ok(g12), Ok(g23)) = (compose(&g[0], &g[1]), compose(&g[1], &g[2])) else { continue };
        let Ok(g123) = compose(&g12, &g[2]) else { continue };
        if g12.c == 0 || g23.c == 0 || g123.c == 0 {
            continue;
        }
        let res = [g[0].c, g[1].c, g[2].c, g123.c].map(|k| r.random_range(0..k.abs()));
        if !assoc_bijection_check(&g[0], &g[1], &g[2], res[0], res[1], res[2], res[3], w.min(30)).unwrap_or(false) {
            log::warn!("index: bijection fails for {} {} {} {res:?}", g[0], g[1], g[2]);
            bijection += 1;
        }
        t += 1;
    }
    vec![
        Check::failures("index.brute_force", brute),
        Check::failures("index.secondary_congruence", secondary),
        Check::failures("index.bijection", bijection),
    ]
}

/// The two entries of the table for `g1 = g2 = [[1,0],[1,1]]` at zero twist, summed directly as
/// `Σ_{m ≡ α mod 2} exp(−πiτm²/2)`.
fn theta_reference(tau: Complex64) -> [Complex64; 2] {
    let mut out = [c(0.0, 0.0); 2];
    for m in -200i64..=200 {
        let term = (c(0.0, -PI) * tau * (m * m) as f64 / 2.0).exp();
        out[m.rem_euclid(2) as usize] += term;
    }
    out
}

fn positive_pair(r: &mut ChaCha8Rng) -> (SL2Mat, SL2Mat, f64) {
    loop {
        let (g1, g2) = (sampling::sl2(r, 4), sampling::sl2(r, 4));
        let theta = sampling::theta(r);
        let Ok(g12) = compose(&g1, &g2) else { continue };
        if ![g1.c, g2.c, g12.c].iter().all(|d| (1..=4).contains(d)) || g2.rk(theta) < 0.05 {
            continue;
        }
        if g2.act(theta).map(|t| g1.rk(t) >= 0.05).unwrap_or(false) {
            return (g1, g2, theta);
        }
    }
}

fn constants(config: &RunConfig) -> Vec<Check> {
    let mut r = stream(config, "constants");
    let reference = guarded("constants.theta_reference", || {
        let g = SL2Mat::new(1, 0, 1, 1)?;
        let params = TorusParams::new(config.theta, config.tau)?;
        let t = structure_constants(&g, &g, params, c(0.0, 0.0), c(0.0, 0.0), config.tol)?;
        let want = theta_reference(config.tau);
        let dev = (0..2).map(|a| (t.get(0, 0, a) - want[a as usize]).norm()).fold(0.0, f64::max);
        Ok(Check::at_most("constants.theta_reference", dev, config.tol.max(1e-12)))
    });
    let oracle = guarded("constants.pairing_oracle", || {
        let mut worst = 0.0f64;
        for _ in 0..20 {
            let (g1, g2, theta) = positive_pair(&mut r);
            let tau = sampling::tau(&mut r);
            let (z1, z2) = (sampling::twist(&mut r, 0.5), sampling::twist(&mut r, 0.5));
            log::info!("constants.pairing_oracle: {g1} {g2} θ={theta} τ={tau} z=({z1}, {z2})");
            let g12 = compose(&g1, &g2)?;
            let t = structure_constants(&g1, &g2, TorusParams::new(theta, tau)?, z1, z2, config.tol)?;
            let l1 = ModuleLabel::new(g1, g2.act(theta)?)?;
            let l2 = ModuleLabel::new(g2, theta)?;
            let l12 = ModuleLabel::new(g12, theta)?;
            let points: Vec<(f64, i64)> = (0..5).map(|_| (r.random_range(-1.0..1.0), r.random_range(0..g12.c))).collect();
            for a1 in 0..g1.c {
                for a2 in 0..g2.c {
                    let f1 = phi_basis(&l1, z1 * g2.rk(theta), a1, tau)?;
                    let f2 = phi_basis(&l2, z2, a2, tau)?;
                    let got = pairing_t(&g1, &g2, theta, &f1, &f2, &points, config.tol)?;
                    for (k, &(x, al)) in points.iter().enumerate() {
                        let mut want = c(0.0, 0.0);
                        for a in 0..g12.c {
                            want += t.get(a1, a2, a) * phi_basis(&l12, z1 + z2, a, tau)?.eval(x, al);
                        }
                        worst = worst.max((got.values[k] - want).norm() / want.norm().max(1.0));
                    }
                }
            }
        }
        Ok(Check::at_most("constants.pairing_oracle", worst, 1e-9))
    });
    let collapse = guarded("constants.theta_collapse", || {
        let mut worst = 0.0f64;
        let mut n = 0;
        while n < 20 {
            let (g1, g2, t1) = positive_pair(&mut r);
            let t2 = sampling::theta(&mut r);
            if g2.rk(t2) < 0.05 || g1.rk(g2.act(t2)?) < 0.05 {
                continue;
            }
            let tau = sampling::tau(&mut r);
            let (z1, z2) = (sampling::twist(&mut r, 0.5), sampling::twist(&mut r, 0.5));
            let g12 = compose(&g1, &g2)?;
            let a = structure_constants(&g1, &g2, TorusParams::new(t1, tau)?, z1, z2, config.tol)?;
            let b = structure_constants(&g1, &g2, TorusParams::new(t2, tau)?, z1 * (g12.rk(t1) / g12.rk(t2)), z2, config.tol)?;
            for (x, y) in a.values().iter().zip(b.values()) {
                worst = worst.max((x - y).norm() / x.norm().max(1.0));
            }
            n += 1;
        }
        Ok(Check::at_most("constants.theta_collapse", worst, 1e-10))
    });
    vec![reference, oracle, collapse]
}

fn category(config: &RunConfig) -> Vec<Check> {
    let mut r = stream(config, "category");
    let cache = SharedTables::default();
    let assoc = guarded("category.associativity", || {
        let mut worst = 0.0f64;
        for _ in 0..20 {
            let tau = sampling::tau(&mut r);
            let theta = sampling::theta(&mut r);
            let mut objs = vec![sampling::positive_object(&mut r, theta, 3, 0.05)];
            while objs.len() < 4 {
                let e = sampling::positive_object(&mut r, theta, 4, 0.05);
                if quotient(&e.g, &objs[objs.len() - 1].g).map(|k| (1..=3).contains(&k.c)).unwrap_or(false) {
                    objs.push(e);
                } else if r.random_bool(0.01) {
                    objs = vec![sampling::positive_object(&mut r, theta, 3, 0.05)];
                }
            }
            log::info!("category.associativity: {} {} {} {} τ={tau}", objs[0], objs[1], objs[2], objs[3]);
            let cat = Category::with_provider(tau, config.tol, &cache)?;
            let mut vecs = Vec::new();
            for w in objs.windows(2) {
                let n = cat.hom_dims(&w[0], &w[1])?.0;
                vecs.push(cat.vector(&w[0], &w[1], 0, (0..n).map(|_| sampling::twist(&mut r, 1.0)).collect())?);
            }
            let lhs = cat.compose(&vecs[2], &cat.compose(&vecs[1], &vecs[0])?)?;
            let rhs = cat.compose(&cat.compose(&vecs[2], &vecs[1])?, &vecs[0])?;
            let scale = lhs.coeffs.iter().map(|x| x.norm()).fold(1.0, f64::max);
            worst = worst.max(lhs.max_distance(&rhs) / scale);
        }
        Ok(Check::at_most("category.associativity", worst, 1e-9))
    });
    let cohomology = guarded("category.cohomology", || {
        let theta = config.theta;
        let mut bad = 0;
        for cdeg in -5i64..=5 {
            for d in -6i64..=6 {
                if gcd(cdeg, d) != 1 {
                    continue;
                }
                let g = SL2Mat::with_bottom_row(cdeg, d)?;
                if g.rk(theta) <= 1e-3 {
                    continue;
                }
                let z = c(0.17, -0.31);
                let e = StdObject::new(g, theta, z, 0)?;
                let got = cohomology_dims(&e, config.tau)?;
                let k = cdeg.unsigned_abs() as usize;
                let want = if cdeg > 0 { (k, 0) } else if cdeg < 0 { (0, k) } else { (0, 0) };
                if got != want {
                    bad += 1;
                }
                if cdeg != 0 && d.abs() <= 1 {
                    let (ker, coker) = kernel_cokernel_dims(two_pi_i(config.tau * e.mu()), two_pi_i(z), config.hermite_dim, 1e-8)?;
                    if (k * ker, k * coker) != got {
                        bad += 1;
                    }
                }
            }
        }
        Ok(Check::failures("category.cohomology", bad))
    });
    let gram = guarded("category.serre_gram_min_det", || {
        let cat = Category::with_provider(config.tau, config.tol, &cache)?;
        let theta = config.theta;
        let trivial = StdObject::new(SL2Mat::IDENTITY, theta, c(0.0, 0.0), 0)?;
        let mut worst = f64::INFINITY;
        for cdeg in (-4i64..=4).filter(|&x| x != 0) {
            for d in (-6i64..=6).filter(|&d| gcd(cdeg, d) == 1) {
                let g = SL2Mat::with_bottom_row(cdeg, d)?;
                if g.rk(theta) <= 1e-3 {
                    continue;
                }
                let e = StdObject::new(g, theta, c(0.11, 0.07), 0)?;
                let mut m = if cdeg > 0 { cat.serre_gram(&e, &trivial)? } else { cat.serre_gram(&trivial, &e)? };
                for mut col in m.column_iter_mut() {
                    let s = col.iter().map(|x| x.norm()).fold(0.0, f64::max);
                    if s > 0.0 {
                        col /= c(s, 0.0);
                    }
                }
                worst = worst.min(m.determinant().norm());
            }
        }
        Ok(Check::at_least("category.serre_gram_min_det", worst, 1e-8))
    });
    let heis = guarded("category.heisenberg", || {
        let mut dev = 0.0f64;
        for cdeg in 2i64..=5 {
            for d in (1..=2 * cdeg).filter(|&d| gcd(cdeg, d) == 1) {
                let e = StdObject::new(SL2Mat::with_bottom_row(cdeg, d)?, 0.2, c(0.0, 0.0), 0)?;
                let k = heisenberg_commutator(&e, (1, 0), (0, 1))?;
                let s = k[(0, 0)];
                let n = cdeg as usize;
                dev = dev.max((s.norm() - 1.0).abs()).max((&k - DMatrix::identity(n, n) * s).norm());
                let gens = [heisenberg_matrix(&e, 1, 0)?, heisenberg_matrix(&e, 0, 1)?];
                if commutant_dim(&gens)? != 1 {
                    dev = f64::MAX;
                }
            }
        }
        Ok(Check::at_most("category.heisenberg", dev, 1e-12))
    });
    vec![assoc, cohomology, gram, heis]
}

fn equivalence(config: &RunConfig) -> Vec<Check> {
    let mut r = stream(config, "equivalence");
    let patterns = [[true; 3], [false, true, true], [false, false, true], [false; 3]];
    let mut cyclic_bad = 0;
    let mut func_bad = 0;
    for (k, p) in patterns.iter().enumerate() {
        for _ in 0..25 {
            let t = sampling::triple_for_pattern(&mut r, *p);
            log::info!("equivalence: {t:?}");
            let [g1, g2, g3] = t.g;
            let [z1, z2, z3] = t.z;
            if k < 2 && !cyclic_identity_check(&g1, &g2, &g3, z1, z2, z3, t.theta, t.theta_prime, t.tau, 1e-9).unwrap_or(false) {
                cyclic_bad += 1;
            }
            let ok = FunctorContext::new(t.theta, t.theta_prime, t.tau)
                .and_then(|ctx| functoriality_check(&g1, &g2, &g3, z1, z2, z3, &ctx, 1e-9))
                .unwrap_or(false);
            if !ok {
                func_bad += 1;
            }
        }
    }
    let mut forbidden = 0;
    let mut scanned = 0;
    while scanned < 10_000 {
        let (g1, g2) = (sampling::sl2(&mut r, 6), sampling::sl2(&mut r, 6));
        let (theta, theta_prime) = (sampling::theta(&mut r), sampling::theta(&mut r));
        if g1.rk(theta) <= 1e-6 || g2.rk(theta) <= 1e-6 || quotient(&g2, &g1).map(|q| q.c <= 0).unwrap_or(true) {
            continue;
        }
        if g1.rk(theta_prime).abs() < 1e-9 || g2.rk(theta_prime).abs() < 1e-9 {
            continue;
        }
        let cls = FunctorContext::new(theta, theta_prime, config.tau).and_then(|ctx| case_classify(&g1, &g2, &ctx));
        if cls.is_err() {
            forbidden += 1;
        }
        scanned += 1;
    }
    let kt = guarded("equivalence.ktheory", || {
        let mut bad = 0;
        let mut done = 0;
        while done < 5 {
            let g = sampling::sl2_nonzero_degree(&mut r, 3);
            let theta = sampling::theta(&mut r);
            if g.rk(theta).abs() < 0.1 || g.act(theta)?.abs() > 4.0 {
                continue;
            }
            let ctx = FunctorContext::new(theta, g.act(theta)?, config.tau)?;
            let mut samples = Vec::new();
            while samples.len() < 20 {
                let h = sampling::sl2(&mut r, 4);
                if h.d <= 0 || h.rk(ctx.theta_prime).abs() < 0.05 || compose(&h, &g)?.d == 0 {
                    continue;
                }
                samples.push(StdObject::new(h, 0.0, sampling::twist(&mut r, 1.0), r.random_range(-1..=1))?);
            }
            if !ktheory_action_check(&g, &samples, &ctx)? {
                bad += 1;
            }
            done += 1;
        }
        Ok(Check::failures("equivalence.ktheory", bad))
    });
    vec![
        Check::failures("equivalence.cyclic", cyclic_bad),
        Check::failures("equivalence.functoriality", func_bad),
        Check::failures("equivalence.forbidden_pattern", forbidden),
        kt,
    ]
}

fn fourier(config: &RunConfig) -> Vec<Check> {
    let mut r = stream(config, "fourier");
    let slice = guarded("fourier.slice", || {
        let mut bad = 0;
        for m in 1i64..=3 {
            for n in (-4i64..=4).filter(|&n| gcd(m, n) == 1 && 0.9 * m as f64 + n as f64 > 0.1) {
                let g = SL2Mat::with_bottom_row(m, n)?;
                let theta = loop {
                    let t = sampling::theta(&mut r);
                    if g.rk(t) > 0.05 {
                        break t;
                    }
                };
                let e = StdObject::new(g, theta, sampling::twist(&mut r, 0.5), 0)?;
                let (tau, z0) = (sampling::tau(&mut r), sampling::twist(&mut r, 0.5));
                log::info!("fourier.slice: {e} τ={tau} z0={z0}");
                let ok = kernel_basis(&e, z0, tau)?.len() as i64 == m
                    && kernel_is_exact(&e, z0, tau)?
                    && automorphy_check(&e, z0, tau, 1e-10)?
                    && {
                        let img = fm_class(&e, tau)?;
                        (img.rank, img.degree) == (m, -n)
                    };
                if !ok {
                    bad += 1;
                }
            }
        }
        Ok(Check::failures("fourier.slice", bad))
    });
    let nonsplit = guarded("fourier.nonsplit", || {
        let mut bad = 0;
        for m in [1i64, 2] {
            let e = StdObject::new(SL2Mat::with_bottom_row(m, 1)?, 0.2, c(0.0, 0.0), 0)?;
            if !extension_nonsplit_check(&e, config.tau, 1e-12)? {
                bad += 1;
            }
        }
        Ok(Check::failures("fourier.nonsplit", bad))
    });
    vec![slice, nonsplit]
}
