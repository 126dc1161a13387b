//! Random generators for labels, parameters and admissible configurations.

use alloc::vec::Vec;

use num_complex::Complex64;
use rand::Rng;

use crate::category::StdObject;
use crate::index::egcd;
use crate::sl2::{quotient, SL2Mat};

fn gcd(a: i64, b: i64) -> i64 {
    egcd(a as i128, b as i128).0.unsigned_abs() as i64
}

/// A coprime pair `(c, d)` with `|c|, |d| ≤ bound`, not both zero.
pub fn coprime_pair<R: Rng + ?Sized>(rng: &mut R, bound: i64) -> (i64, i64) {
    loop {
        let c = rng.random_range(-bound..=bound);
        let d = rng.random_range(-bound..=bound);
        if gcd(c, d) == 1 {
            return (c, d);
        }
    }
}

/// A matrix of `SL2(ℤ)` with bottom row bounded by `bound` and top row at most `bound` in size
/// whenever such a completion exists.
pub fn sl2<R: Rng + ?Sized>(rng: &mut R, bound: i64) -> SL2Mat {
    loop {
        let (c, d) = coprime_pair(rng, bound);
        // a d − b c = 1 from the Bezout identity d·x + c·y = ±1.
        let (g, x, y) = egcd(d as i128, c as i128);
        let (a0, b0) = if g == 1 { (x as i64, -y as i64) } else { (-x as i64, y as i64) };
        let span = |k: i64| (a0 + k * c, b0 + k * d);
        let ks: Vec<i64> = (-2 * bound - 2..=2 * bound + 2)
            .filter(|&k| {
                let (a, b) = span(k);
                a.abs() <= bound && b.abs() <= bound
            })
            .collect();
        if ks.is_empty() {
            continue;
        }
        let (a, b) = span(ks[rng.random_range(0..ks.len())]);
        if let Ok(m) = SL2Mat::new(a, b, c, d) {
            return m;
        }
    }
}

/// A matrix with `c ≠ 0`.
pub fn sl2_nonzero_degree<R: Rng + ?Sized>(rng: &mut R, bound: i64) -> SL2Mat {
    loop {
        let m = sl2(rng, bound);
        if m.c != 0 {
            return m;
        }
    }
}

/// A complex twist in the box `|re|, |im| ≤ r`.
pub fn twist<R: Rng + ?Sized>(rng: &mut R, r: f64) -> Complex64 {
    Complex64::new(rng.random_range(-r..=r), rng.random_range(-r..=r))
}

/// `τ` with `Re τ ∈ [−0.5, 0.5]`, `Im τ ∈ [−1.5, −0.6]`.
pub fn tau<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    Complex64::new(rng.random_range(-0.5..=0.5), rng.random_range(-1.5..=-0.6))
}

/// An irrational-looking `θ ∈ (−1, 1)`.
pub fn theta<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    rng.random_range(-0.95..0.95)
}

/// `E_g^z(θ)` with `rk(g, θ) > min_rank` and `|c|, |d| ≤ bound` in the bottom row.
pub fn positive_object<R: Rng + ?Sized>(rng: &mut R, theta: f64, bound: i64, min_rank: f64) -> StdObject {
    loop {
        let g = sl2(rng, bound);
        if g.rk(theta) > min_rank {
            if let Ok(e) = StdObject::new(g, theta, twist(rng, 1.0), 0) {
                return e;
            }
        }
    }
}

/// A triple of labels composable in positive degree at `theta`, with the sign pattern of
/// `rk(gi, theta_prime)` prescribed.
#[derive(Debug, Clone)]
pub struct AdmissibleTriple {
    pub g: [SL2Mat; 3],
    pub z: [Complex64; 3],
    pub theta: f64,
    pub theta_prime: f64,
    pub tau: Complex64,
}

/// Rejection sampler: `θ < θ′`, bottom rows bounded by 3, all ranks at `θ` above `0.05`,
/// ranks at `θ′` at least `0.05` in size, consecutive Hom degrees in `1..=4`.
pub fn triple_for_pattern<R: Rng + ?Sized>(rng: &mut R, pattern: [bool; 3]) -> AdmissibleTriple {
    const MIN_RANK: f64 = 0.05;
    loop {
        let theta = theta(rng);
        let theta_prime = rng.random_range(theta..1.0);
        if theta_prime - theta < 1e-3 {
            continue;
        }
        let g = [sl2(rng, 3), sl2(rng, 3), sl2(rng, 3)];
        if g.iter().any(|gi| gi.rk(theta) <= MIN_RANK) {
            continue;
        }
        let ok_prime = g
            .iter()
            .zip(pattern)
            .all(|(gi, p)| {
                let r = gi.rk(theta_prime);
                r.abs() >= MIN_RANK && (r > 0.0) == p
            });
        if !ok_prime {
            continue;
        }
        let degs = match (quotient(&g[1], &g[0]), quotient(&g[2], &g[1])) {
            (Ok(a), Ok(b)) => (a.c, b.c),
            _ => continue,
        };
        if !(1..=4).contains(&degs.0) || !(1..=4).contains(&degs.1) {
            continue;
        }
        let z = [twist(rng, 0.5), twist(rng, 0.5), twist(rng, 0.5)];
        return AdmissibleTriple { g, z, theta, theta_prime, tau: tau(rng) };
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn matrices_are_unimodular_and_bounded() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..2000 {
            let m = sl2(&mut rng, 5);
            assert_eq!(m.det(), 1);
            assert!(m.c.abs() <= 5 && m.d.abs() <= 5);
        }
    }

    #[test]
    fn triples_have_requested_pattern() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for pattern in [[true; 3], [false, true, true], [false, false, true], [false; 3]] {
            let t = triple_for_pattern(&mut rng, pattern);
            for (gi, p) in t.g.iter().zip(pattern) {
                assert!(gi.rk(t.theta) > 0.0);
                assert_eq!(gi.rk(t.theta_prime) > 0.0, p);
            }
        }
    }
}
