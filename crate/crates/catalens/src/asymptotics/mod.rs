//! Lazy infinite spectra with closed-form hooks: the harmonic operator,
//! the dyadic counterexample operator, log-averaged partial sums,
//! Dixmier-trace envelopes, zeta evaluation, and summation identities.

mod dyadic;
mod envelope;
mod fubini;
mod identities;
mod lazy;
mod zeta;

pub use dyadic::DyadicOperatorB;
pub use envelope::{
    dixmier_envelope, EnvelopeDiagnostics, EnvelopeSample, SubsequenceStrategy, TraceEnvelope,
};
pub use fubini::{fubini_check, FubiniReport};
pub use identities::{
    dilation_sum_check, dilation_sum_check_exact, weighted_square_sum,
    weighted_square_sum_exact, DilationCheck,
};
pub use lazy::{Block, LazySpectrum, SpectrumDescriptor, DEFAULT_WORK_BUDGET};
pub use zeta::zeta_shifted;

use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum AsymptoticsError {
    #[error("exponent s = {s} must be positive")]
    NonPositiveExponent { s: f64 },
    #[error("scaling factor must be positive")]
    NonPositiveFactor,
    #[error("threshold must be positive")]
    NonPositiveThreshold,
    #[error("direct summation would exceed the work budget of {budget} blocks; \
             no closed form covers this spectrum at this index")]
    WorkBudgetExceeded { budget: u64 },
    #[error("bad spectrum descriptor: {0}")]
    Descriptor(String),
    #[error(transparent)]
    Spectra(#[from] crate::spectra::SpectraError),
}
