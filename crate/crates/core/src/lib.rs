//! Standard holomorphic bundles on noncommutative two-tori.
//!
//! The crate works with the basic modules `E_g(θ)` labelled by `g ∈ SL2(Z)`, their
//! holomorphic structures `∇̄_z`, theta-type structure constants for composition of
//! holomorphic sections, the cohomology category with Serre duality, the equivalences
//! between categories for different `θ`, and the discrete shadow of the Fourier transform
//! to sheaves on the elliptic curve `ℂ/(ℤ + τℤ)`.
#![no_std]

extern crate alloc;

pub mod analytic;
pub mod category;
pub mod equivalence;
pub mod error;
pub mod fourier;
pub mod index;
pub mod sampling;
pub mod sl2;
pub mod theta;

pub use error::{Error, Result};
pub use num_complex::Complex64;
