//! ζ(1+s) for s > 0 by Euler–Maclaurin with a certified remainder.
//!
//! The integrand x^{-σ} is completely monotone, so the remainder after
//! truncating the Bernoulli correction series is bounded by the first
//! omitted term. With M = 16 initial terms and six corrections the bound
//! stays below ~1e-17 across the whole range used here (s from 2^-30 up
//! to the σ ≈ 65 end of the power grids).

use super::AsymptoticsError;
use crate::numeric::{CompensatedSum, Estimate, OP_EPS};

/// B_{2j}/(2j)! for j = 1..=7 (the last drives the remainder bound).
const BERNOULLI_FACTORS: [f64; 7] = [
    1.0 / 12.0,
    -1.0 / 720.0,
    1.0 / 30_240.0,
    -1.0 / 1_209_600.0,
    1.0 / 47_900_160.0,
    -691.0 / 1_307_674_368_000.0,
    1.0 / 74_724_249_600.0,
];

const M: u32 = 16;
const CORRECTIONS: usize = 6;

/// ζ(1+s) with a certified absolute error bound. Rejects s ≤ 0: the pole
/// at s = 0 and the critical strip are outside this artifact's range.
pub fn zeta_shifted(s: f64) -> Result<Estimate, AsymptoticsError> {
    if !s.is_finite() || s <= 0.0 {
        return Err(AsymptoticsError::NonPositiveExponent { s });
    }
    let sigma = 1.0 + s;

    let mut acc = CompensatedSum::new();
    let mut powf_budget = 0.0f64;
    for k in 1..M {
        let term = (k as f64).powf(-sigma);
        acc.add(term);
        powf_budget += term * 4.0 * OP_EPS;
    }
    // ∫_M^∞ x^{-σ} dx = M^{-s} / s  (the dominant term as s → 0)
    let m_pow_neg_s = (-(s) * (M as f64).ln()).exp();
    let integral = m_pow_neg_s / s;
    acc.add(integral);
    powf_budget += integral * 4.0 * OP_EPS;
    // boundary term M^{-σ}/2
    let m_pow_neg_sigma = m_pow_neg_s / M as f64;
    acc.add(0.5 * m_pow_neg_sigma);

    // Bernoulli corrections: B_{2j}/(2j)! · (σ)_{2j-1} · M^{-σ-2j+1}
    let mut rising = sigma; // (σ)_1
    let mut m_power = m_pow_neg_sigma / M as f64; // M^{-σ-1}
    for (j, factor) in BERNOULLI_FACTORS.iter().enumerate().take(CORRECTIONS) {
        let term = factor * rising * m_power;
        acc.add(term);
        powf_budget += term.abs() * 4.0 * OP_EPS;
        // advance to (σ)_{2(j+1)-1} and M^{-σ-2(j+1)+1}
        rising *= (sigma + (2 * j + 1) as f64) * (sigma + (2 * j + 2) as f64);
        m_power /= (M * M) as f64;
    }
    // first omitted term bounds the remainder
    let remainder = (BERNOULLI_FACTORS[CORRECTIONS] * rising * m_power).abs();

    let total = acc.estimate();
    Ok(Estimate::new(
        total.value,
        total.bound + powf_budget + remainder,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::EULER_GAMMA;

    #[test]
    fn classical_values() {
        let pi = std::f64::consts::PI;
        let z2 = zeta_shifted(1.0).unwrap();
        assert!((z2.value - pi * pi / 6.0).abs() <= z2.bound.max(1e-13));
        let z4 = zeta_shifted(3.0).unwrap();
        assert!((z4.value - pi.powi(4) / 90.0).abs() <= z4.bound.max(1e-13));
        let z3 = zeta_shifted(2.0).unwrap();
        assert!((z3.value - 1.202_056_903_159_594_2).abs() <= z3.bound.max(1e-12));
    }

    #[test]
    fn laurent_expansion_near_the_pole() {
        // s ζ(1+s) = 1 + γ s + O(s²)
        for s in [1e-3, 1e-4, 1e-6] {
            let z = zeta_shifted(s).unwrap();
            let scaled = s * z.value;
            assert!(
                (scaled - 1.0 - EULER_GAMMA * s).abs() < 1e-3 * s.max(1e-6),
                "s = {s}: got {scaled}"
            );
        }
        let tiny = 2f64.powi(-30);
        let z = zeta_shifted(tiny).unwrap();
        assert!((tiny * z.value - 1.0).abs() < 1e-8);
    }

    #[test]
    fn large_exponents_approach_one() {
        let z = zeta_shifted(63.0).unwrap();
        assert!((z.value - 1.0).abs() < 1e-15 + 2f64.powi(-60));
        assert!(z.bound < 1e-12);
    }

    #[test]
    fn rejects_nonpositive_s() {
        assert!(zeta_shifted(0.0).is_err());
        assert!(zeta_shifted(-1.0).is_err());
        assert!(zeta_shifted(f64::NAN).is_err());
    }
}
