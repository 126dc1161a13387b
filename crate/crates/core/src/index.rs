//! Congruence classes of summation indices for the lattice-sum pairings.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::sl2::{compose, SL2Mat};

/// A residue class `residue + modulus·ℤ`, or the empty set.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ArithProgression {
    pub residue: i64,
    pub modulus: i64,
    pub empty: bool,
}

impl ArithProgression {
    pub fn new(residue: i64, modulus: i64) -> Self {
        assert!(modulus > 0, "modulus must be positive");
        ArithProgression { residue: residue.rem_euclid(modulus), modulus, empty: false }
    }

    pub fn empty() -> Self {
        ArithProgression { residue: 0, modulus: 1, empty: true }
    }

    pub fn contains(&self, n: i64) -> bool {
        !self.empty && (n - self.residue).rem_euclid(self.modulus) == 0
    }
}

/// Returns `(g, x, y)` with `a x + b y = g = gcd(a, b)`.
pub fn egcd(a: i128, b: i128) -> (i128, i128, i128) {
    let (mut r0, mut r1) = (a, b);
    let (mut x0, mut x1) = (1i128, 0i128);
    let (mut y0, mut y1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0.div_euclid(r1);
        (r0, r1) = (r1, r0 - q * r1);
        (x0, x1) = (x1, x0 - q * x1);
        (y0, y1) = (y1, y0 - q * y1);
    }
    if r0 < 0 {
        (-r0, -x0, -y0)
    } else {
        (r0, x0, y0)
    }
}

/// Intersects `x ≡ r1 (m1)` and `x ≡ r2 (m2)` for positive moduli.
pub fn crt(r1: i128, m1: i128, r2: i128, m2: i128) -> Result<ArithProgression> {
    let (g, p, _) = egcd(m1, m2);
    let diff = r2 - r1;
    if diff.rem_euclid(g) != 0 {
        return Ok(ArithProgression::empty());
    }
    let m2g = m2 / g;
    let lcm = m1 / g * m2;
    let k = ((diff / g).rem_euclid(m2g) * p.rem_euclid(m2g)).rem_euclid(m2g);
    let x = (r1 + m1 * k).rem_euclid(lcm);
    let modulus = i64::try_from(lcm).map_err(|_| Error::Overflow("index modulus"))?;
    Ok(ArithProgression::new(x as i64, modulus))
}

/// The index set `I_{g1,g2}(α1, α2, α)`.
pub fn index_set(g1: &SL2Mat, g2: &SL2Mat, a1: i64, a2: i64, a: i64) -> Result<ArithProgression> {
    let g12 = compose(g1, g2)?;
    let (c1, c2, c12) = (g1.c as i128, g2.c as i128, g12.c as i128);
    if c1 == 0 || c2 == 0 || c12 == 0 {
        return Err(Error::DegenerateDegree);
    }
    let (d2, d12) = (g2.d as i128, g12.d as i128);
    let (a1, a2, a) = (a1 as i128, a2 as i128, a as i128);
    let r1 = -c1 * a + c12 * a1;
    let m1 = (c12 * c1).abs();
    let r2 = c2 * d12 * a - c12 * d2 * a2;
    let m2 = (c12 * c2).abs();
    crt(r1.rem_euclid(m1), m1, r2.rem_euclid(m2), m2)
}

/// Members of `p` in `[-window, window]`, ascending.
pub fn enumerate(p: &ArithProgression, window: i64) -> Vec<i64> {
    if p.empty {
        return Vec::new();
    }
    let start = -window + (p.residue + window).rem_euclid(p.modulus);
    (0..)
        .map(|k| start + k * p.modulus)
        .take_while(|&n| n <= window)
        .collect()
}

struct Side {
    outer: Vec<ArithProgression>,
    inner: Vec<ArithProgression>,
}

impl Side {
    fn contains(&self, m: i64, n: i64) -> bool {
        self.outer.iter().zip(&self.inner).any(|(p, q)| p.contains(m) && q.contains(n))
    }
}

fn exact_div(num: i128, den: i128) -> Option<i64> {
    if num % den == 0 {
        i64::try_from(num / den).ok()
    } else {
        None
    }
}

/// Verifies on `[-window, window]²` that
/// `(m, n) ↦ ((c3 m + c123 n)/c23, (c2 m − c1 n)/c23)` restricts to a bijection between
/// `⋃_{α23} I_{g1,g2g3}(α1,α23,α) × I_{g2,g3}(α2,α3,α23)` and
/// `⋃_{α12} I_{g1g2,g3}(α12,α3,α) × I_{g1,g2}(α1,α2,α12)`.
#[allow(clippy::too_many_arguments)]
pub fn assoc_bijection_check(
    g1: &SL2Mat,
    g2: &SL2Mat,
    g3: &SL2Mat,
    a1: i64,
    a2: i64,
    a3: i64,
    a: i64,
    window: i64,
) -> Result<bool> {
    let g12 = compose(g1, g2)?;
    let g23 = compose(g2, g3)?;
    let g123 = compose(&g12, g3)?;
    let (c1, c2, c3) = (g1.c, g2.c, g3.c);
    let (c12, c23, c123) = (g12.c, g23.c, g123.c);
    if [c1, c2, c3, c12, c23, c123].contains(&0) {
        return Err(Error::DegenerateDegree);
    }
    let mut left = Side { outer: Vec::new(), inner: Vec::new() };
    for a23 in 0..c23.abs() {
        left.outer.push(index_set(g1, &g23, a1, a23, a)?);
        left.inner.push(index_set(g2, g3, a2, a3, a23)?);
    }
    let mut right = Side { outer: Vec::new(), inner: Vec::new() };
    for a12 in 0..c12.abs() {
        right.outer.push(index_set(&g12, g3, a12, a3, a)?);
        right.inner.push(index_set(g1, g2, a1, a2, a12)?);
    }

    let (c1, c2, c3) = (c1 as i128, c2 as i128, c3 as i128);
    let (c23, c123) = (c23 as i128, c123 as i128);
    let det = -c1 * c3 - c123 * c2;
    if det == 0 {
        return Ok(false);
    }
    let forward = |m: i64, n: i64| -> Option<(i64, i64)> {
        let (m, n) = (m as i128, n as i128);
        Some((exact_div(c3 * m + c123 * n, c23)?, exact_div(c2 * m - c1 * n, c23)?))
    };
    let backward = |m: i64, n: i64| -> Option<(i64, i64)> {
        let (m, n) = (m as i128, n as i128);
        Some((
            exact_div(c23 * (-c1 * m - c123 * n), det)?,
            exact_div(c23 * (-c2 * m + c3 * n), det)?,
        ))
    };

    let check = |from: &Side, to: &Side, map: &dyn Fn(i64, i64) -> Option<(i64, i64)>,
                 back: &dyn Fn(i64, i64) -> Option<(i64, i64)>| {
        for (p, q) in from.outer.iter().zip(&from.inner) {
            for &m in &enumerate(p, window) {
                for &n in &enumerate(q, window) {
                    match map(m, n) {
                        Some((u, v)) if to.contains(u, v) && back(u, v) == Some((m, n)) => {}
                        _ => return false,
                    }
                }
            }
        }
        true
    };
    Ok(check(&left, &right, &forward, &backward) && check(&right, &left, &backward, &forward))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(a: i64, b: i64, c: i64, d: i64) -> SL2Mat {
        SL2Mat::new(a, b, c, d).unwrap()
    }

    #[test]
    fn crt_basics() {
        assert_eq!(crt(1, 4, 2, 6).unwrap(), ArithProgression::empty());
        assert_eq!(crt(1, 4, 3, 6).unwrap(), ArithProgression::new(9, 12));
        assert_eq!(crt(1, 4, 3, 5).unwrap(), ArithProgression::new(13, 20));
        assert_eq!(crt(2, 6, 0, 4).unwrap(), ArithProgression::new(8, 12));
    }

    #[test]
    fn index_set_examples() {
        let u = m(1, 0, 1, 1);
        assert_eq!(index_set(&u, &u, 0, 0, 0).unwrap(), ArithProgression::new(0, 2));
        assert_eq!(index_set(&u, &u, 0, 0, 1).unwrap(), ArithProgression::new(1, 2));
        assert_eq!(index_set(&u, &m(1, 0, 2, 1), 0, 0, 1).unwrap(), ArithProgression::new(2, 6));
    }

    #[test]
    fn degenerate_degree() {
        let u = m(1, 0, 1, 1);
        assert_eq!(index_set(&u, &u.inv(), 0, 0, 0), Err(Error::DegenerateDegree));
        assert_eq!(index_set(&SL2Mat::IDENTITY, &u, 0, 0, 0), Err(Error::DegenerateDegree));
    }

    #[test]
    fn enumerate_examples() {
        assert_eq!(enumerate(&ArithProgression::new(0, 2), 4), [-4, -2, 0, 2, 4]);
        assert!(enumerate(&ArithProgression::empty(), 9).is_empty());
        assert_eq!(enumerate(&ArithProgression::new(2, 6), 10), [-10, -4, 2, 8]);
    }

    #[test]
    fn bijection_examples() {
        let u = m(1, 0, 1, 1);
        assert!(assoc_bijection_check(&u, &u, &u, 0, 0, 0, 0, 30).unwrap());
        assert!(assoc_bijection_check(&m(1, 1, 1, 2), &u, &u, 0, 0, 0, 0, 30).unwrap());
        assert_eq!(
            assoc_bijection_check(&u, &u.inv(), &u, 0, 0, 0, 0, 30),
            Err(Error::DegenerateDegree)
        );
    }
}
