//! Finite-dimensional catalysis: power-trace membership, strict ℓp
//! dominance, exact certificate verification, bounded catalyst search,
//! and the truncate-and-scale L1 approximation pipeline.
//!
//! Verdicts that quantify over all p ∈ [1, ∞] cannot be certified by
//! finitely many evaluations; grid results are labeled as evidence and
//! the endpoint checks (p = 1, p = ∞, integer p) are exact.

mod l1;
mod search;

pub use l1::{l1_approximate, l1_approximate_lazy, L1ApproxReport};
pub use search::{find_catalyst, SearchMeta, SearchOptions, SearchOutcome};

use crate::numeric::Estimate;
use crate::spectra::render_rational;
use crate::{Rational, Spectrum};
use num::{One, Signed, Zero};
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CatalysisError {
    #[error("the catalyst must be nonzero")]
    ZeroCatalyst,
    #[error("epsilon must lie in (0, 1)")]
    EpsilonOutOfRange,
    #[error("spectrum must be nonzero")]
    ZeroSpectrum,
    #[error("power-trace membership fails at p = {p}")]
    PmFails { p: f64 },
    #[error("strict lp dominance fails at p = {p}")]
    StrictFails { p: f64 },
    #[error("spectrum is not trace-class summable")]
    NotSummable,
    #[error(transparent)]
    Spectra(#[from] crate::spectra::SpectraError),
}

/// Exponent grid for membership/dominance sweeps: p − 1 log-spaced, so the
/// degenerate p → 1+ end is well resolved.
#[derive(Clone, Debug)]
pub struct PGrid {
    pub points: Vec<f64>,
}

impl Default for PGrid {
    fn default() -> Self {
        PGrid::log_spaced(1e-4, 63.0, 64)
    }
}

impl PGrid {
    /// p = 1 + offset with offset log-spaced in [min_offset, max_offset].
    pub fn log_spaced(min_offset: f64, max_offset: f64, count: usize) -> Self {
        assert!(count >= 2 && min_offset > 0.0 && max_offset > min_offset);
        let ratio = (max_offset / min_offset).ln();
        let mut points: Vec<f64> = (0..count)
            .map(|i| 1.0 + min_offset * (ratio * i as f64 / (count - 1) as f64).exp())
            .collect();
        points[0] = 1.0 + min_offset;
        points[count - 1] = 1.0 + max_offset;
        PGrid { points }
    }
}

/// Margin at one grid exponent: Tr(a^p) − Tr(b^p) with its error bound.
#[derive(Clone, Debug, Serialize)]
pub struct GridMargin {
    pub p: f64,
    pub margin: Estimate,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum PmVerdict {
    /// All checks pass. Grid points are evidence, not proof; the exact
    /// integer-p and endpoint checks are certificates.
    Pass,
    /// A margin is certainly negative (or an exact check fails) at p.
    FailAt { p: f64 },
    /// Some float margin straddles zero within its error bound.
    Inconclusive { p: f64 },
}

/// Power-trace membership report: is Tr(b^p) ≤ Tr(a^p) for all p > 1?
#[derive(Clone, Debug, Serialize)]
pub struct PmReport {
    /// Exact rational margins at integer p = 2..=8.
    pub exact_margins: Vec<(u32, String)>,
    /// Float margins with bounds on the log-spaced grid (non-exhaustive).
    pub grid_margins: Vec<GridMargin>,
    /// The p → ∞ proxy: ‖b‖∞ ≤ ‖a‖∞, decided exactly.
    pub sup_norm_ok: bool,
    /// Informational p = 1 margin Tr(a) − Tr(b) (not part of the verdict:
    /// membership quantifies over p > 1 only).
    pub trace_margin: String,
    pub verdict: PmVerdict,
}

/// Evaluate the membership margins on `grid` plus exact integer p and the
/// sup-norm endpoint. a, b nonnegative spectra of any lengths.
pub fn pm_check(a: &Spectrum, b: &Spectrum, grid: &PGrid) -> PmReport {
    let equal = a.padded_eq(b);
    let sup_norm_ok = b.sup_norm() <= a.sup_norm();
    let trace_margin = a.total() - b.total();

    let mut verdict = PmVerdict::Pass;
    let mut exact_margins = Vec::new();
    for p in 2..=8u32 {
        let margin = a.power_sum_int(p).expect("p >= 1") - b.power_sum_int(p).expect("p >= 1");
        if margin.is_negative() && verdict == PmVerdict::Pass {
            verdict = PmVerdict::FailAt { p: p as f64 };
        }
        exact_margins.push((p, render_rational(&margin)));
    }
    if !sup_norm_ok && verdict == PmVerdict::Pass {
        verdict = PmVerdict::FailAt { p: f64::INFINITY };
    }

    let mut grid_margins = Vec::with_capacity(grid.points.len());
    for &p in &grid.points {
        let margin = a.power_sum(p).expect("grid p >= 1")
            - b.power_sum(p).expect("grid p >= 1");
        if verdict == PmVerdict::Pass && !equal {
            if margin.upper() < 0.0 {
                verdict = PmVerdict::FailAt { p };
            } else if margin.lower() < 0.0 && margin.value < 0.0 {
                // interval straddles zero from below: cannot certify
                verdict = PmVerdict::Inconclusive { p };
            }
        }
        grid_margins.push(GridMargin {
            p,
            margin,
        });
    }

    PmReport {
        exact_margins,
        grid_margins,
        sup_norm_ok,
        trace_margin: render_rational(&trace_margin),
        verdict,
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum StrictVerdict {
    /// Strict inequality certified at the exact endpoints and above the
    /// error bound at every grid point. Grid evidence only: a touching
    /// point between grid nodes cannot be excluded by finitely many
    /// evaluations.
    StrictPass,
    /// Equality or reversal at an exactly checked point, or a grid margin
    /// not certainly positive.
    Fail { p: f64, certified: bool },
}

/// Strict ℓp dominance report: ‖b‖_p < ‖a‖_p for p ∈ [1, ∞].
#[derive(Clone, Debug, Serialize)]
pub struct StrictDominanceReport {
    /// ‖a‖₁ − ‖b‖₁, exact.
    pub p1_margin: String,
    /// ‖a‖∞ − ‖b‖∞, exact.
    pub sup_margin: String,
    pub grid_margins: Vec<GridMargin>,
    /// Smallest certified margin and where it occurs.
    pub min_margin: Option<(f64, f64)>,
    pub verdict: StrictVerdict,
}

/// Check ‖b‖_p < ‖a‖_p strictly at p = 1, p = ∞ (exact) and on the grid
/// (norm margins with error bounds). Labeled evidence, not proof.
pub fn strict_lp_dominance(a: &Spectrum, b: &Spectrum, grid: &PGrid) -> StrictDominanceReport {
    let p1 = a.total() - b.total();
    let sup = a.sup_norm() - b.sup_norm();
    let mut verdict = StrictVerdict::StrictPass;
    if !p1.is_positive() {
        verdict = StrictVerdict::Fail {
            p: 1.0,
            certified: true,
        };
    } else if !sup.is_positive() {
        verdict = StrictVerdict::Fail {
            p: f64::INFINITY,
            certified: true,
        };
    }

    let mut grid_margins = Vec::with_capacity(grid.points.len());
    let mut min_margin: Option<(f64, f64)> = None;
    for &p in &grid.points {
        let margin = a.lp_norm(p).expect("grid p >= 1")
            - b.lp_norm(p).expect("grid p >= 1");
        if verdict == StrictVerdict::StrictPass && !margin.certainly_above(0.0) {
            verdict = StrictVerdict::Fail {
                p,
                certified: margin.upper() <= 0.0,
            };
        }
        if min_margin.is_none_or(|(_, m)| margin.value < m) {
            min_margin = Some((p, margin.value));
        }
        grid_margins.push(GridMargin { p, margin });
    }

    StrictDominanceReport {
        p1_margin: render_rational(&p1),
        sup_margin: render_rational(&sup),
        grid_margins,
        min_margin,
        verdict,
    }
}

/// An exact catalysis certificate: the triple (a, b, c) and the full
/// prefix-slack trail of partial_sum(a⊗c, n) − partial_sum(b⊗c, n).
/// Valid iff every slack entry is ≥ 0, exactly, and c is nonzero.
#[derive(Clone, Debug)]
pub struct CatalysisCertificate {
    pub a: Spectrum,
    pub b: Spectrum,
    pub c: Spectrum,
    pub slack: Vec<Rational>,
    pub valid: bool,
    pub search_meta: Option<SearchMeta>,
}

impl CatalysisCertificate {
    /// First index where the slack is negative (the violation witness).
    pub fn first_violation(&self) -> Option<usize> {
        self.slack.iter().position(|s| s.is_negative())
    }

    /// Indices where the slack is exactly zero (tight constraints).
    pub fn tight_indices(&self) -> Vec<usize> {
        self.slack
            .iter()
            .enumerate()
            .filter(|(_, s)| s.is_zero())
            .map(|(i, _)| i)
            .collect()
    }

    /// JSON export: rational arrays rendered n/d.
    pub fn to_json(&self) -> serde_json::Value {
        let arr = |s: &Spectrum| {
            s.values()
                .iter()
                .map(render_rational)
                .collect::<Vec<String>>()
        };
        serde_json::json!({
            "a": arr(&self.a),
            "b": arr(&self.b),
            "c": arr(&self.c),
            "slack": self.slack.iter().map(render_rational).collect::<Vec<String>>(),
            "valid": self.valid,
            "search_meta": self.search_meta,
        })
    }
}

/// Exact verification that b⊗c ≺≺ a⊗c: tensors are materialized, prefix
/// sums compared in rational arithmetic, and the full slack trail is
/// recorded. Rejects c = 0 (catalysis requires a nonzero catalyst).
pub fn verify_catalysis(
    a: &Spectrum,
    b: &Spectrum,
    c: &Spectrum,
) -> Result<CatalysisCertificate, CatalysisError> {
    if c.is_zero() {
        return Err(CatalysisError::ZeroCatalyst);
    }
    let ac = a.tensor(c)?;
    let bc = b.tensor(c)?;
    let n_max = ac.len().max(bc.len());
    let mut slack = Vec::with_capacity(n_max);
    let mut running_a = Rational::zero();
    let mut running_b = Rational::zero();
    let mut valid = true;
    for n in 0..n_max {
        running_a += ac.mu(n);
        running_b += bc.mu(n);
        let s = &running_a - &running_b;
        if s.is_negative() {
            valid = false;
        }
        slack.push(s);
    }
    Ok(CatalysisCertificate {
        a: a.clone(),
        b: b.clone(),
        c: c.clone(),
        slack,
        valid,
        search_meta: None,
    })
}

pub(crate) fn one_minus(eps: &Rational) -> Rational {
    Rational::one() - eps
}
