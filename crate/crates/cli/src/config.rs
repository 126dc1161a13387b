//! Run parameters shared by every subcommand.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use nctorus_core::sl2::SL2Mat;

use crate::error::{CliError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub tol: f64,
    pub window: i64,
    pub hermite_dim: usize,
    #[serde(with = "complex_pair")]
    pub tau: Complex64,
    pub theta: f64,
    pub theta_prime: f64,
    pub seed: u64,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            tol: 1e-12,
            window: 50,
            hermite_dim: 256,
            tau: Complex64::new(0.0, -1.0),
            theta: 0.0,
            theta_prime: 0.25,
            seed: 0,
        }
    }
}

impl RunConfig {
    /// Rejects parameters outside the conventions: `Im τ < 0`, `tol > 0`.
    pub fn validate(self) -> Result<Self> {
        let bad = |m: String| Err(CliError::Config(m));
        if !(self.tau.im < 0.0) || !self.tau.re.is_finite() {
            return bad(format!("Im(tau) must be negative, got {}", self.tau.im));
        }
        if !(self.tol > 0.0) || !self.tol.is_finite() {
            return bad(format!("tol must be positive, got {}", self.tol));
        }
        if self.window <= 0 {
            return bad(format!("window must be positive, got {}", self.window));
        }
        if self.hermite_dim < 64 {
            return bad(format!("hermite-dim must be at least 64, got {}", self.hermite_dim));
        }
        if !self.theta.is_finite() || !self.theta_prime.is_finite() {
            return bad("theta values must be finite".into());
        }
        Ok(self)
    }
}

/// Parses `"a,b;c,d"`.
pub fn parse_matrix(s: &str) -> Result<SL2Mat> {
    let err = || CliError::Parse { what: "matrix (expected a,b;c,d)", input: s.to_string() };
    let rows: Vec<&str> = s.split(';').collect();
    if rows.len() != 2 {
        return Err(err());
    }
    let mut v = Vec::with_capacity(4);
    for row in rows {
        for x in row.split(',') {
            v.push(x.trim().parse::<i64>().map_err(|_| err())?);
        }
    }
    if v.len() != 4 {
        return Err(err());
    }
    Ok(SL2Mat::new(v[0], v[1], v[2], v[3])?)
}

pub(crate) mod complex_pair {
    use num_complex::Complex64;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(z: &Complex64, s: S) -> Result<S::Ok, S::Error> {
        [z.re, z.im].serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Complex64, D::Error> {
        let [re, im] = <[f64; 2]>::deserialize(d)?;
        Ok(Complex64::new(re, im))
    }
}
