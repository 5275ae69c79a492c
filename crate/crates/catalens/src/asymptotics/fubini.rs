//! Fubini check for the measurable case: A₀ ⊗ C with finite C.
//!
//! μ(A₀ ⊗ C) is the sorted merge of the scaled harmonic sequences
//! c_j/(k+1), which this module enumerates exactly. Two claims are
//! exercised: (k+1)·μ(k, A₀⊗C) ≤ ‖C‖₁ for every computed k (exact
//! rational comparisons), and x_N(A₀⊗C) → Tr(C) along dyadic N.

use super::AsymptoticsError;
use crate::numeric::{CompensatedSum, Estimate};
use crate::spectra::render_rational;
use crate::Spectrum;
use num::{BigRational, BigUint, Integer, One, ToPrimitive, Zero};

#[derive(Clone, Debug, serde::Serialize)]
pub struct FubiniReport {
    /// ‖C‖₁ = Tr(C), exact, rendered n/d.
    pub c_trace: String,
    /// Largest (k+1)·μ(k, A₀⊗C) over all computed k, exact, rendered n/d.
    pub sup_ratio: String,
    /// sup_ratio ≤ ‖C‖₁, decided exactly.
    pub sup_within_bound: bool,
    /// Index range the sup was verified on (k < sup_checked).
    pub sup_checked: u64,
    /// (N, x_N, error bound) along dyadic N up to n_max.
    pub x_samples: Vec<(u64, Estimate)>,
    /// |x at the largest N − Tr(C)|.
    pub final_deviation: f64,
}

/// Enumerates μ(A₀ ⊗ C) in order and evaluates both Fubini claims.
/// `sup_limit` is the number of leading singular values the exact weak-ℓ1
/// comparison runs over; `n_max` the largest (power-of-two) index x is
/// evaluated at.
pub fn fubini_check(
    c: &Spectrum,
    sup_limit: u64,
    n_max: u64,
) -> Result<FubiniReport, AsymptoticsError> {
    let c = c.trimmed();
    if c.is_empty() {
        return Err(AsymptoticsError::Descriptor(
            "fubini check needs a nonzero finite C".into(),
        ));
    }
    let c_trace = c.total();

    // common-denominator numerators: c_j = u_j / d
    let d = c
        .values()
        .iter()
        .fold(num::BigInt::one(), |acc, v| acc.lcm(v.denom()));
    let numerators: Vec<BigUint> = c
        .values()
        .iter()
        .map(|v| {
            (v.numer() * (&d / v.denom()))
                .to_biguint()
                .expect("spectrum entries are nonnegative")
        })
        .collect();
    let trace_numerator = numerators
        .iter()
        .fold(BigUint::zero(), |acc, u| acc + u);

    // merged enumeration state: per part, the next harmonic index
    let mut next_index: Vec<u64> = vec![0; numerators.len()];
    // f64 keys for cheap argmax; exact cross-multiplied compare on near-ties
    let key = |j: usize, idx: u64, numerators: &[BigUint]| -> f64 {
        numerators[j].to_f64().unwrap_or(f64::MAX) / (idx + 1) as f64
    };
    let mut keys: Vec<f64> = (0..numerators.len())
        .map(|j| key(j, 0, &numerators))
        .collect();

    let exact_gt = |a: (usize, u64), b: (usize, u64)| -> bool {
        // u_a/(i_a+1) > u_b/(i_b+1) ⟺ u_a (i_b+1) > u_b (i_a+1)
        let lhs = &numerators[a.0] * BigUint::from(b.1 + 1);
        let rhs = &numerators[b.0] * BigUint::from(a.1 + 1);
        lhs > rhs
    };

    let total = n_max.max(sup_limit);
    let mut sup_ratio = BigRational::zero();
    let mut sup_within_bound = true;
    let mut acc = CompensatedSum::new();
    let mut x_samples = Vec::new();
    let mut next_dyadic = 1u64;

    for k in 0..=total {
        // cheap float argmax; exact cross-multiplied compare on near-ties
        let mut best = 0usize;
        for j in 1..keys.len() {
            if keys[j] > keys[best] * (1.0 + 1e-9)
                || (keys[j] * (1.0 + 1e-9) >= keys[best]
                    && exact_gt((j, next_index[j]), (best, next_index[best])))
            {
                best = j;
            }
        }
        let idx = next_index[best];

        if k < sup_limit {
            // (k+1)·u_j ≤ trace_numerator·(idx+1), exactly
            let lhs = &numerators[best] * BigUint::from(k + 1);
            let rhs = &trace_numerator * BigUint::from(idx + 1);
            if lhs > rhs {
                sup_within_bound = false;
            }
            let ratio = BigRational::new(lhs.into(), &d * num::BigInt::from(idx + 1));
            if ratio > sup_ratio {
                sup_ratio = ratio;
            }
        }

        // accumulate the value: u_j and d·(idx+1) are exact in f64 range
        // for all realistic catalysts, so each term costs one rounding
        let u = numerators[best].to_f64().unwrap_or(f64::MAX);
        let den = d.to_f64().unwrap_or(f64::MAX) * (idx + 1) as f64;
        acc.add(u / den);

        // sample x at dyadic N (k only ever increments by one, so every
        // power of two up to n_max is hit)
        if k == next_dyadic && k <= n_max {
            let sum = acc.estimate();
            let x = sum / Estimate::new(((k + 2) as f64).ln(), 1e-13);
            x_samples.push((k, x));
            next_dyadic *= 2;
        }

        next_index[best] = idx + 1;
        keys[best] = key(best, idx + 1, &numerators);
    }

    let c_trace_f = crate::numeric::rational_to_estimate(&c_trace).value;
    let final_deviation = x_samples
        .last()
        .map(|(_, x)| (x.value - c_trace_f).abs())
        .unwrap_or(f64::NAN);

    Ok(FubiniReport {
        c_trace: render_rational(&c_trace),
        sup_ratio: render_rational(&sup_ratio),
        sup_within_bound,
        sup_checked: sup_limit,
        x_samples,
        final_deviation,
    })
}
