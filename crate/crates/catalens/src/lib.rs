//! Exact Hardy–Littlewood submajorization and catalysis in finite
//! dimensions, plus lazy weak-trace-class spectra with computable
//! Dixmier-trace envelopes.
//!
//! The crate is organized around four layers:
//!
//! - [`spectra`]: finite singular-value sequences over a generic scalar
//!   (exact rationals by default), with rearrangement, submajorization,
//!   tensor/direct-sum spectra, power sums and norms.
//! - [`asymptotics`]: block-based infinite spectra (the harmonic operator,
//!   the dyadic operator `B`), log-averaged partial sums, trace envelopes,
//!   zeta evaluation and the dilation summation identities.
//! - [`catalysis`]: power-trace membership checks, strict ℓp dominance,
//!   exact catalysis certificates, bounded catalyst search, and the
//!   truncate-and-scale L1 approximation pipeline.
//! - [`counterexample`]: the end-to-end weak-trace-class construction that
//!   separates power-trace monotonicity from catalytic submajorization.
//!
//! All submajorization verdicts are exact rational certificates; floats
//! appear only for non-integer powers and logarithms and always carry an
//! absolute error bound ([`numeric::Estimate`]).

pub mod asymptotics;
pub mod catalysis;
pub mod counterexample;
pub mod numeric;
pub mod spectra;

pub use num::{BigInt, BigRational, BigUint};

/// The exact scalar used for all certificate-grade arithmetic.
pub type Rational = BigRational;

/// Finite spectrum over exact rationals — the workhorse type.
pub type Spectrum = spectra::SpectrumOf<Rational>;

/// Finite spectrum over f64, for scratch numeric work.
pub type SpectrumF64 = spectra::SpectrumOf<f64>;
