//! End-to-end reproduction of the weak-trace-class counterexample: the
//! operator B is power-trace dominated by A = αA₀ ⊕ ‖B‖_{1+δ}p for every
//! exponent, yet its log-averaged partial sums rise strictly above the
//! Dixmier value α of A. Both halves are certified at desk scale: the
//! upper bound by closed-form sweeps of s·Tr(B^{1+s}), the lower bound by
//! exact block-boundary sequences.

mod density;

pub use density::{
    branch_high, branch_high_derivative, branch_low, density_f, density_profile,
    double_prefix_sum, quadrature_f, DensityProfile,
};

use crate::asymptotics::{AsymptoticsError, DyadicOperatorB, LazySpectrum};
use crate::numeric::{ln_biguint, Dd, Estimate, EULER_GAMMA, LN2_HI};
use crate::{BigUint, Rational, Spectrum};
use serde::Serialize;
use thiserror::Error;

/// 5/(9 log 2): the certified ceiling for limsup s·Tr(B^{1+s}).
pub fn upper_limsup_constant() -> f64 {
    5.0 / (9.0 * std::f64::consts::LN_2)
}

/// 2/(3 log 2): the limit of the exact lower-bound sequence.
pub fn lower_limit_constant() -> f64 {
    2.0 / (3.0 * std::f64::consts::LN_2)
}

#[derive(Debug, Error)]
pub enum CounterexampleError {
    #[error("alpha = {alpha} must lie strictly inside ({lower}, {upper})")]
    AlphaOutOfBracket {
        alpha: f64,
        lower: f64,
        upper: f64,
    },
    #[error("no grid point certified Tr(B^(1+s)) <= Tr((alpha A0)^(1+s)); \
             this indicates an implementation bug, since the asymptotic margin is positive")]
    NoDeltaCertified,
    #[error("n_max = {n_max} exceeds the supported range (closed forms cover n <= 16)")]
    NMaxTooLarge { n_max: u32 },
    #[error(transparent)]
    Asymptotics(#[from] AsymptoticsError),
}

/// Geometric exponent grid for the s-sweeps.
#[derive(Clone, Debug)]
pub struct SGrid {
    pub points: Vec<f64>,
}

impl SGrid {
    pub fn geometric(lo: f64, hi: f64, count: usize) -> Self {
        assert!(count >= 2 && lo > 0.0 && hi > lo);
        let ratio = (hi / lo).ln();
        let mut points: Vec<f64> = (0..count)
            .map(|i| lo * (ratio * i as f64 / (count - 1) as f64).exp())
            .collect();
        // pin the endpoints exactly
        points[0] = lo;
        points[count - 1] = hi;
        SGrid { points }
    }

    /// Default sweep grid: s ∈ [2^-30, 1], 128 points.
    pub fn default_sweep() -> Self {
        Self::geometric(2f64.powi(-30), 1.0, 128)
    }

    /// Default membership grid: s ∈ [2^-30, 16], 144 points, so both the
    /// small-s and the interpolation regimes are exercised.
    pub fn default_membership() -> Self {
        Self::geometric(2f64.powi(-30), 16.0, 144)
    }
}

/// Default α: the midpoint of the admissible bracket.
pub fn choose_alpha() -> f64 {
    (upper_limsup_constant() + lower_limit_constant()) / 2.0
}

/// Enforce the strict bracket 5/(9 log 2) < α < 2/(3 log 2).
pub fn validate_alpha(alpha: f64) -> Result<f64, CounterexampleError> {
    let lower = upper_limsup_constant();
    let upper = lower_limit_constant();
    if !(alpha > lower && alpha < upper) {
        return Err(CounterexampleError::AlphaOutOfBracket {
            alpha,
            lower,
            upper,
        });
    }
    Ok(alpha)
}

/// One row of the upper-bound sweep: s ↦ s·Tr(B^{1+s}).
#[derive(Clone, Debug, Serialize)]
pub struct SweepRow {
    pub s: f64,
    pub value: Estimate,
}

#[derive(Clone, Debug, Serialize)]
pub struct SweepReport {
    pub rows: Vec<SweepRow>,
    pub max_value: f64,
    pub argmax_s: f64,
    /// 5/(9 log 2) − max: positive means the sweep stays under the
    /// certified limsup ceiling.
    pub margin_to_limsup_constant: f64,
}

/// Sweep s·Tr(B^{1+s}) over the grid via the interval closed forms
/// (reaches s as small as 2^-30 without materializing anything).
pub fn upper_bound_sweep(grid: &SGrid, precision_bits: u32) -> Result<SweepReport, CounterexampleError> {
    let b = LazySpectrum::dyadic_b();
    let mut rows = Vec::with_capacity(grid.points.len());
    let mut max_value = f64::NEG_INFINITY;
    let mut argmax_s = f64::NAN;
    for &s in &grid.points {
        let value = b.power_trace(s, precision_bits)?.scale(s);
        if value.value > max_value {
            max_value = value.value;
            argmax_s = s;
        }
        rows.push(SweepRow { s, value });
    }
    Ok(SweepReport {
        rows,
        max_value,
        argmax_s,
        margin_to_limsup_constant: upper_limsup_constant() - max_value,
    })
}

/// One row of the exact lower-bound sequence at the block boundary N_n.
#[derive(Clone, Debug, Serialize)]
pub struct LowerBoundRow {
    pub n: u32,
    /// Bit length of N_n (≈ 2^{2n+1}).
    pub n_bits: u64,
    /// Σ_{k<N_n} μ(k,B) = (2/3)·2^{2n+1} − 1/3, exact, rendered n/d.
    pub numerator: String,
    /// numerator / log(N_n + 2): the x_N convention used everywhere else.
    pub x: Estimate,
    /// numerator / log(2^{2^{2n+1}}): the power-of-two log normalization
    /// (differs from the x column by o(1)).
    pub x_pow2_convention: f64,
    /// (2/3)/log 2 − 1/(3·2^{2n+1} log 2): what x_pow2_convention equals.
    pub closed_form: f64,
}

/// Exact x_{N_n} table for n = 0..=n_max (n_max ≤ 16). For n ≤ 9 the
/// big integer N_n is materialized (≤ 2^19 bits); beyond that, log(N_n+2)
/// differs from 2^{2n+1} log 2 by less than 2^{1-4^n} and only the
/// representation is used.
pub fn lower_bound_sequence(n_max: u32) -> Result<Vec<LowerBoundRow>, CounterexampleError> {
    if n_max > 16 {
        return Err(CounterexampleError::NMaxTooLarge { n_max });
    }
    let mut rows = Vec::with_capacity(n_max as usize + 1);
    for n in 0..=n_max {
        let numerator_exact = DyadicOperatorB::unit_mass_blocks(n);
        let numerator_f = u64::try_from(numerator_exact.clone())
            .map(|v| v as f64)
            .unwrap_or(f64::MAX);
        let (log, log_bound, n_bits) = log_n_plus_2(n);
        let x = Estimate::new(numerator_f, 0.0) / Estimate::new(log.to_f64(), log_bound);
        // power-of-two normalization: divide by log 2^{2^{2n+1}} exactly
        let exponent = 2.0 * 4f64.powi(n as i32);
        let pow2_log = Dd::LN2.mul_f64(exponent);
        let x_pow2 = numerator_f / pow2_log.to_f64();
        let closed_form = (2.0 / 3.0) / LN2_HI - 1.0 / (3.0 * exponent * LN2_HI);
        rows.push(LowerBoundRow {
            n,
            n_bits,
            numerator: numerator_exact.to_string(),
            x,
            x_pow2_convention: x_pow2,
            closed_form,
        });
    }
    Ok(rows)
}

/// ln(N_n + 2) and the bit length of N_n. Materializes N_n when feasible,
/// otherwise uses 2·4^n·ln 2 with the rigorous |ln ratio| ≤ 2^{1-4^n}.
fn log_n_plus_2(n: u32) -> (Dd, f64, u64) {
    if n <= 9 {
        let n_n = DyadicOperatorB::interval_end_count(n);
        let bits = n_n.bits();
        let (dd, bound) = ln_biguint(&(n_n + BigUint::from(2u32)));
        (dd, bound, bits)
    } else {
        let exponent = 2.0 * 4f64.powi(n as i32);
        let dd = Dd::LN2.mul_f64(exponent);
        // N_n + 2 = 2^{2·4^n} (1 − 2^{-4^n} + smaller): |ln ratio| ≤ 2^{1-4^n}
        (dd, 1e-300, 2u64 << (2 * n))
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct DeltaRow {
    pub s: f64,
    pub tr_b: Estimate,
    /// Tr((αA₀)^{1+s}) = α^{1+s} ζ(1+s).
    pub tr_alpha_a0: Estimate,
    pub margin: Estimate,
    /// margin > 0 even under worst-case rounding.
    pub certified: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct DeltaReport {
    /// Largest grid-certified δ: every grid s ≤ δ has a certified margin.
    /// Grid evidence, not a for-all-s proof.
    pub delta: f64,
    pub rows: Vec<DeltaRow>,
    pub all_certified: bool,
}

/// Find the largest grid-certified δ with Tr(B^{1+s}) ≤ α^{1+s} ζ(1+s)
/// for all grid s ∈ (0, δ], error bounds folded in.
pub fn find_delta(
    alpha: f64,
    grid: &SGrid,
    precision_bits: u32,
) -> Result<DeltaReport, CounterexampleError> {
    validate_alpha(alpha)?;
    let b = LazySpectrum::dyadic_b();
    let mut rows = Vec::with_capacity(grid.points.len());
    let mut points = grid.points.clone();
    points.sort_by(|a, b| a.partial_cmp(b).expect("grid points are finite"));
    for s in points {
        let tr_b = b.power_trace(s, precision_bits)?;
        let zeta = crate::asymptotics::zeta_shifted(s)?;
        let tr_alpha_a0 = Estimate::exact(alpha).powf(1.0 + s) * zeta;
        let margin = tr_alpha_a0 - tr_b;
        let certified = margin.certainly_above(0.0);
        rows.push(DeltaRow {
            s,
            tr_b,
            tr_alpha_a0,
            margin,
            certified,
        });
    }
    let mut delta = None;
    for row in &rows {
        if row.certified {
            delta = Some(row.s);
        } else {
            break;
        }
    }
    let delta = delta.ok_or(CounterexampleError::NoDeltaCertified)?;
    let all_certified = rows.iter().all(|r| r.certified);
    Ok(DeltaReport {
        delta,
        rows,
        all_certified,
    })
}

/// The assembled constants: α, δ, ‖B‖_{1+δ}, and the spectrum of
/// A = αA₀ ⊕ ‖B‖_{1+δ}·p.
#[derive(Clone, Debug)]
pub struct CounterexampleParams {
    pub alpha: f64,
    pub delta: f64,
    /// ‖B‖_{1+δ} = Tr(B^{1+δ})^{1/(1+δ)} with its error bound.
    pub b_norm: Estimate,
    pub a: LazySpectrum,
}

/// μ(A) = sorted merge of α/(k+1) and the single value ‖B‖_{1+δ}.
pub fn build_a(alpha: f64, b_norm_value: f64) -> LazySpectrum {
    let alpha_rat = Rational::from_float(alpha).expect("alpha is finite");
    let b_norm_rat = Rational::from_float(b_norm_value).expect("norm is finite");
    LazySpectrum::direct_sum(vec![
        LazySpectrum::scaled(alpha_rat, LazySpectrum::harmonic()).expect("alpha > 0"),
        LazySpectrum::finite(
            Spectrum::from_sorted(vec![b_norm_rat]).expect("norm is nonnegative"),
        ),
    ])
}

/// Run find_delta and assemble the parameters.
pub fn build_params(
    alpha: f64,
    grid: &SGrid,
    precision_bits: u32,
) -> Result<(CounterexampleParams, DeltaReport), CounterexampleError> {
    let delta_report = find_delta(alpha, grid, precision_bits)?;
    let delta = delta_report.delta;
    let b_norm = LazySpectrum::dyadic_b()
        .power_trace(delta, precision_bits)?
        .powf(1.0 / (1.0 + delta));
    let a = build_a(alpha, b_norm.value);
    Ok((
        CounterexampleParams {
            alpha,
            delta,
            b_norm,
            a,
        },
        delta_report,
    ))
}

#[derive(Clone, Debug, Serialize)]
pub struct PmVerificationRow {
    pub s: f64,
    /// "traces" for s ≤ δ, "interpolation" for s > δ.
    pub regime: &'static str,
    pub tr_b: Estimate,
    pub tr_a: Estimate,
    /// Tr(A^{1+s}) − Tr(B^{1+s}), bounds folded.
    pub margin: Estimate,
    /// For the interpolation regime: ‖B‖_{1+δ}^{1+s} − Tr(B^{1+s}).
    pub interpolation_margin: Option<Estimate>,
    pub nonnegative: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct PmVerificationReport {
    pub rows: Vec<PmVerificationRow>,
    pub all_nonnegative: bool,
}

/// Verify Tr(B^{1+s}) ≤ Tr(A^{1+s}) on both regimes: directly from the
/// δ-certified table for s ≤ δ, via Tr(B^{1+s}) ≤ ‖B‖_{1+δ}^{1+s} ≤
/// Tr(A^{1+s}) for s > δ. All margins carry worst-case rounding.
pub fn pm_verification(
    params: &CounterexampleParams,
    grid: &SGrid,
    precision_bits: u32,
) -> Result<PmVerificationReport, CounterexampleError> {
    let b = LazySpectrum::dyadic_b();
    let mut rows = Vec::with_capacity(grid.points.len());
    for &s in &grid.points {
        let tr_b = b.power_trace(s, precision_bits)?;
        let tr_a = params.a.power_trace(s, precision_bits)?;
        let margin = tr_a - tr_b;
        let (regime, interpolation_margin) = if s <= params.delta {
            ("traces", None)
        } else {
            let b_norm_pow = params.b_norm.powf(1.0 + s);
            ("interpolation", Some(b_norm_pow - tr_b))
        };
        let nonnegative = margin.certainly_above(0.0)
            && interpolation_margin.is_none_or(|m| m.certainly_above(0.0));
        rows.push(PmVerificationRow {
            s,
            regime,
            tr_b,
            tr_a,
            margin,
            interpolation_margin,
            nonnegative,
        });
    }
    let all_nonnegative = rows.iter().all(|r| r.nonnegative);
    Ok(PmVerificationReport {
        rows,
        all_nonnegative,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct GapRow {
    pub n: u32,
    /// log2 of the matched scale N_n.
    pub log2_n: f64,
    /// x_{N_n}(B), the exact lower-bound value at the block boundary.
    pub x_b: Estimate,
    /// The certified limit of x_N(A): since x_N(A) converges, every
    /// Dixmier trace of A equals this value (= α).
    pub x_a_limit: f64,
    /// x_{N_n}(A) evaluated at the same N: α + (αγ + ‖B‖_{1+δ})/log N_n
    /// up to O(1/N_n) — the finite-scale value still carries the o(1)
    /// convergence term.
    pub x_a_at_matched_scale: Estimate,
    /// x_{N_n}(B) − α, with x_b's error bound subtracted.
    pub gap_to_limit: f64,
    /// x_{N_n}(B) − x_{N_n}(A): the raw matched-scale difference.
    pub gap_at_matched_scale: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct GapReport {
    pub alpha: f64,
    pub limit_constant: f64,
    pub margin_threshold: f64,
    pub rows: Vec<GapRow>,
    /// Smallest n from which every row has gap_to_limit ≥ threshold.
    pub witnessed_from: Option<u32>,
}

/// The quantitative rendering of the contradiction: x_{N_n}(B) rises
/// toward 2/(3 log 2) while x_N(A) converges to α, so once the certified
/// gap x_{N_n}(B) − α clears the margin, B cannot lie in the closed
/// catalysis set of A. Matched-scale x_{N_n}(A) values are reported too;
/// they carry the o(1) term (αγ + ‖B‖)/log N_n and converge from above.
pub fn dixmier_gap_report(
    params: &CounterexampleParams,
    n_max: u32,
    margin_threshold: f64,
) -> Result<GapReport, CounterexampleError> {
    let lower = lower_bound_sequence(n_max)?;
    let mut rows = Vec::with_capacity(lower.len());
    for row in &lower {
        let (log, log_bound, _) = log_n_plus_2(row.n);
        let log_est = Estimate::new(log.to_f64(), log_bound);
        // H_{N_n} = ln N_n + γ + O(1/N_n); ln N_n = ln(N_n+2) − O(1/N_n)
        let one_over_n = 2f64.powi(-((2 * 4f64.powi(row.n as i32) as i64).min(1000) as i32));
        let h = log_est + Estimate::new(EULER_GAMMA, 3.0 * one_over_n + 1e-16);
        let x_a = (h.scale(params.alpha) + params.b_norm) / log_est;
        let gap_to_limit = row.x.lower() - params.alpha;
        let gap_at_matched_scale = row.x.value - x_a.value;
        rows.push(GapRow {
            n: row.n,
            log2_n: row.n_bits as f64 - 1.0,
            x_b: row.x,
            x_a_limit: params.alpha,
            x_a_at_matched_scale: x_a,
            gap_to_limit,
            gap_at_matched_scale,
        });
    }
    let mut witnessed_from = None;
    for (i, row) in rows.iter().enumerate() {
        if rows[i..].iter().all(|r| r.gap_to_limit >= margin_threshold) {
            witnessed_from = Some(row.n);
            break;
        }
    }
    Ok(GapReport {
        alpha: params.alpha,
        limit_constant: lower_limit_constant(),
        margin_threshold,
        rows,
        witnessed_from,
    })
}

/// Everything the end-to-end run produces.
#[derive(Debug)]
pub struct RunAll {
    pub alpha: f64,
    pub alpha_bracket: (f64, f64),
    pub delta_report: DeltaReport,
    pub params: CounterexampleParams,
    pub sweep: SweepReport,
    pub lower: Vec<LowerBoundRow>,
    pub pm: PmVerificationReport,
    pub gap: GapReport,
    pub density: DensityProfile,
}

pub struct RunAllConfig {
    pub alpha: Option<f64>,
    pub sweep_grid: SGrid,
    pub membership_grid: SGrid,
    pub n_max: u32,
    pub gap_margin: f64,
    pub precision_bits: u32,
    pub density_resolution: u32,
    pub density_m_max: u64,
}

impl Default for RunAllConfig {
    fn default() -> Self {
        RunAllConfig {
            alpha: None,
            sweep_grid: SGrid::default_sweep(),
            membership_grid: SGrid::default_membership(),
            n_max: 8,
            gap_margin: 0.05,
            precision_bits: 50,
            density_resolution: 20,
            density_m_max: 1 << 20,
        }
    }
}

pub fn run_all(config: &RunAllConfig) -> Result<RunAll, CounterexampleError> {
    let alpha = validate_alpha(config.alpha.unwrap_or_else(choose_alpha))?;
    let (params, delta_report) =
        build_params(alpha, &config.sweep_grid, config.precision_bits)?;
    let sweep = upper_bound_sweep(&config.sweep_grid, config.precision_bits)?;
    let lower = lower_bound_sequence(config.n_max)?;
    let pm = pm_verification(&params, &config.membership_grid, config.precision_bits)?;
    let gap = dixmier_gap_report(&params, config.n_max, config.gap_margin)?;
    let density = density_profile(config.density_resolution, config.density_m_max);
    Ok(RunAll {
        alpha,
        alpha_bracket: (upper_limsup_constant(), lower_limit_constant()),
        delta_report,
        params,
        sweep,
        lower,
        pm,
        gap,
        density,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::rational_to_estimate;
    use num::{One, Zero};

    #[test]
    fn bracket_constants_match_their_definitions() {
        assert!((upper_limsup_constant() - 0.801_497_244_938_313).abs() < 1e-12);
        assert!((lower_limit_constant() - 0.961_796_693_925_975_6).abs() < 1e-12);
        let mid = choose_alpha();
        assert!((mid - 0.881_646_969_432_144_3).abs() < 1e-12);
        assert!(validate_alpha(mid).is_ok());
        assert!(validate_alpha(0.80).is_err());
        assert!(validate_alpha(0.97).is_err());
        assert!(validate_alpha(upper_limsup_constant()).is_err());
    }

    #[test]
    fn sweep_stays_under_the_limsup_ceiling() {
        let report = upper_bound_sweep(&SGrid::default_sweep(), 50).unwrap();
        assert!(report.max_value < upper_limsup_constant());
        assert!(report.margin_to_limsup_constant > 0.0);
        // s = 1 row is the direct block sum
        let last = report.rows.last().unwrap();
        assert_eq!(last.s, 1.0);
        assert!((last.value.value - 0.617_218_017_112_464).abs() < 1e-9);
        // s = 8: dominated by the m=1 term, ≈ 8·2^-8
        let wide = upper_bound_sweep(&SGrid::geometric(8.0, 9.0, 2), 50).unwrap();
        assert!((wide.rows[0].value.value - 8.0 * 2f64.powi(-8)).abs() < 1e-3);
    }

    #[test]
    fn lower_bound_rows_match_the_frozen_values() {
        let rows = lower_bound_sequence(8).unwrap();
        assert_eq!(rows[1].numerator, "5");
        assert!((rows[1].x.value - 0.909_559_212_140_232).abs() < 1e-9);
        assert!((rows[2].x.value - 0.946_769_269_474_942).abs() < 1e-9);
        assert!((rows[3].x.value - 0.958_039_675_590_327).abs() < 1e-9);
        // power-of-two-normalized values equal the closed form to high accuracy
        for row in &rows {
            assert!(
                (row.x_pow2_convention - row.closed_form).abs() < 1e-9,
                "n = {}",
                row.n
            );
        }
        // strictly increasing toward the limit, never exceeding it
        for pair in rows.windows(2) {
            assert!(pair[1].x.value > pair[0].x.value);
        }
        assert!(rows.last().unwrap().x.value < lower_limit_constant() + 1e-9);
    }

    #[test]
    fn virtual_path_agrees_where_both_apply() {
        // n = 9 materializes; the n > 9 branch must continue smoothly
        let rows = lower_bound_sequence(12).unwrap();
        for pair in rows.windows(2) {
            assert!(pair[1].x.value > pair[0].x.value);
        }
        let last = rows.last().unwrap();
        assert!((last.x.value - lower_limit_constant()).abs() < 1e-6);
        assert!(lower_bound_sequence(17).is_err());
    }

    #[test]
    fn delta_certifies_the_whole_default_grid_at_midpoint_alpha() {
        let report = find_delta(choose_alpha(), &SGrid::default_sweep(), 50).unwrap();
        assert!(report.all_certified);
        assert!((report.delta - 1.0).abs() < 1e-12);
        // margins grow like (α − limsup)/s toward small s
        let first = &report.rows[0];
        assert!(first.margin.value > 1e7);
    }

    #[test]
    fn delta_still_certifies_just_inside_the_bracket() {
        // α barely above the lower bracket edge: margins shrink but the
        // sweep of s·Tr(B^{1+s}) peaks near 0.7253, leaving room
        let alpha = upper_limsup_constant() + 1e-6;
        let report = find_delta(alpha, &SGrid::geometric(2f64.powi(-24), 1.0, 48), 50).unwrap();
        assert!(report.delta >= 1e-3);
        assert!(report.rows.iter().all(|r| r.certified));
    }

    #[test]
    fn membership_holds_on_both_regimes() {
        let (params, _) = build_params(choose_alpha(), &SGrid::default_sweep(), 50).unwrap();
        assert!((params.delta - 1.0).abs() < 1e-12);
        // ‖B‖₂ = sqrt(0.61721…)
        assert!((params.b_norm.value - 0.617_218_017_112_464f64.sqrt()).abs() < 1e-9);
        let report = pm_verification(&params, &SGrid::default_membership(), 50).unwrap();
        assert!(report.all_nonnegative);
        assert!(report.rows.iter().any(|r| r.regime == "interpolation"));
        assert!(report.rows.iter().any(|r| r.regime == "traces"));
    }

    #[test]
    fn gap_is_witnessed_from_n_two() {
        let (params, _) = build_params(choose_alpha(), &SGrid::default_sweep(), 50).unwrap();
        let gap = dixmier_gap_report(&params, 6, 0.05).unwrap();
        assert_eq!(gap.witnessed_from, Some(2));
        // frozen: x_{N_2}(B) − α ≈ 0.9468 − 0.8816 ≈ 0.065
        let row2 = &gap.rows[2];
        assert!((row2.gap_to_limit - 0.065_122_3).abs() < 1e-4);
        // matched-scale A values converge to α from above
        for pair in gap.rows.windows(2) {
            assert!(
                pair[1].x_a_at_matched_scale.value < pair[0].x_a_at_matched_scale.value
            );
        }
        let last = gap.rows.last().unwrap();
        assert!(last.x_a_at_matched_scale.value > params.alpha);
        assert!(last.x_a_at_matched_scale.value - params.alpha < 0.01);
    }

    #[test]
    fn alpha_outside_the_bracket_shows_no_gap_at_small_n() {
        // α artificially at 0.96 (outside admissible use): the gap margin
        // is not reached at small n, demonstrating bracket necessity
        let fake = CounterexampleParams {
            alpha: 0.96,
            delta: 1.0,
            b_norm: Estimate::exact(0.785),
            a: build_a(0.9, 0.785),
        };
        let gap = dixmier_gap_report(&fake, 4, 0.05).unwrap();
        assert_eq!(gap.witnessed_from, None);
    }

    #[test]
    fn build_a_merges_the_rank_one_part() {
        let (params, _) = build_params(choose_alpha(), &SGrid::default_sweep(), 50).unwrap();
        // μ(0, A) = max(α, ‖B‖_{1+δ}) = α here
        let mu0 = params.a.mu_at(&BigUint::zero());
        let mu0_f = rational_to_estimate(&mu0).value;
        assert!((mu0_f - params.alpha).abs() < 1e-12);
        // μ(1, A) = ‖B‖_{1+δ} (sorted merge: α > β > α/2)
        let mu1 = rational_to_estimate(&params.a.mu_at(&BigUint::one())).value;
        assert!((mu1 - params.b_norm.value).abs() < 1e-12);
        // direct-sum additivity of the power trace
        let s = 1.0;
        let tr = params.a.power_trace(s, 50).unwrap();
        let expect = params.alpha.powi(2) * std::f64::consts::PI.powi(2) / 6.0
            + params.b_norm.value.powi(2);
        assert!((tr.value - expect).abs() < 1e-9);
    }

    #[test]
    fn run_all_assembles_consistently() {
        let config = RunAllConfig {
            n_max: 4,
            density_m_max: 1 << 14,
            density_resolution: 8,
            sweep_grid: SGrid::geometric(2f64.powi(-20), 1.0, 40),
            membership_grid: SGrid::geometric(2f64.powi(-20), 8.0, 48),
            ..RunAllConfig::default()
        };
        let run = run_all(&config).unwrap();
        assert!(run.pm.all_nonnegative);
        assert!(run.sweep.max_value < 0.85);
        assert!(run.density.continuous_at_two);
        assert_eq!(run.gap.witnessed_from, Some(2));
    }
}
