//! The constructive L1 approximation pipeline: normalize so μ(0, a) = 1,
//! truncate both spectra where the tails drop below ε, scale the truncated
//! b by (1−ε), certify strict ℓp dominance of the truncation pair, search
//! for a catalyst, and report the trace-norm distance bound
//! ‖b − (1−ε)b_n‖₁ ≤ ε(‖b‖₁ + 1).

use super::search::{find_catalyst, SearchOptions, SearchOutcome};
use super::{one_minus, pm_check, strict_lp_dominance, CatalysisError, PGrid, PmReport,
            PmVerdict, StrictDominanceReport, StrictVerdict};
use crate::asymptotics::LazySpectrum;
use crate::spectra::render_rational;
use crate::{Rational, Spectrum};
use num::{One, Signed, Zero};

/// Everything the pipeline produced. The spectra inside are in the
/// normalized scale (divided by μ(0, a)); `scale_factor` restores the
/// original scale.
#[derive(Debug)]
pub struct L1ApproxReport {
    /// Truncation rank: both tails beyond n have mass < ε.
    pub n: usize,
    /// μ(0, a) of the original input, exact.
    pub scale_factor: Rational,
    /// (1−ε)·b_n in the normalized scale.
    pub truncated_scaled_b: Spectrum,
    /// ε(‖b‖₁ + 1), exact, normalized scale: the certified L1 distance
    /// from b to the catalyzable approximant.
    pub distance_bound: Rational,
    pub pm: PmReport,
    pub strict: StrictDominanceReport,
    pub search: SearchOutcome,
}

impl L1ApproxReport {
    pub fn distance_bound_string(&self) -> String {
        render_rational(&self.distance_bound)
    }
}

/// Run the pipeline on finite spectra. Fails when ε ∉ (0,1), when a is
/// zero, when the membership margins fail, or when the certified strict
/// dominance of the truncation pair fails; an unsuccessful catalyst
/// search is reported, not an error.
pub fn l1_approximate(
    a: &Spectrum,
    b: &Spectrum,
    epsilon: &Rational,
    grid: &PGrid,
    search: &SearchOptions,
) -> Result<L1ApproxReport, CatalysisError> {
    if !epsilon.is_positive() || *epsilon >= Rational::one() {
        return Err(CatalysisError::EpsilonOutOfRange);
    }
    let scale_factor = a.sup_norm();
    if scale_factor.is_zero() {
        return Err(CatalysisError::ZeroSpectrum);
    }

    // normalize so μ(0, a) = 1
    let inv = Rational::one() / &scale_factor;
    let a = a.scaled(&inv).expect("positive factor");
    let b = b.scaled(&inv).expect("positive factor");

    let pm = pm_check(&a, &b, grid);
    if let PmVerdict::FailAt { p } = pm.verdict {
        return Err(CatalysisError::PmFails { p });
    }

    // smallest n with both tails below ε
    let mut n = a.len().max(b.len());
    while n > 0 && a.tail_sum(n - 1) < *epsilon && b.tail_sum(n - 1) < *epsilon {
        n -= 1;
    }

    let a_n = a.truncated(n);
    let scaled_b = b.truncated(n).scaled(&one_minus(epsilon)).expect("1-ε > 0");

    let strict = strict_lp_dominance(&a_n, &scaled_b, grid);
    if let StrictVerdict::Fail { p, .. } = strict.verdict {
        return Err(CatalysisError::StrictFails { p });
    }

    let search = find_catalyst(&a_n, &scaled_b, search);

    // ‖b − (1−ε)b_n‖₁ ≤ ε‖b‖₁ + (1−ε)‖b − b_n‖₁ ≤ ε(‖b‖₁ + 1)
    let distance_bound = epsilon * (b.total() + Rational::one());

    Ok(L1ApproxReport {
        n,
        scale_factor,
        truncated_scaled_b: scaled_b,
        distance_bound,
        pm,
        strict,
        search,
    })
}

/// Same pipeline for trace-class lazy spectra: summable inputs are
/// materialized exactly, anything else is rejected.
pub fn l1_approximate_lazy(
    a: &LazySpectrum,
    b: &LazySpectrum,
    epsilon: &Rational,
    grid: &PGrid,
    search: &SearchOptions,
) -> Result<L1ApproxReport, CatalysisError> {
    let a = a.to_l1_spectrum().ok_or(CatalysisError::NotSummable)?;
    let b = b.to_l1_spectrum().ok_or(CatalysisError::NotSummable)?;
    l1_approximate(&a, &b, epsilon, grid, search)
}
