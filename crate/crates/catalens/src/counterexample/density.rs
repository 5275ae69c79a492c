//! The density profile behind the upper-bound constant: with z the
//! indicator of ∪_{n∈ℤ} [4^n, 2·4^n), the function
//! F(t) = (1/t²)∫₀ᵗ z(u)(t−u) du is 4-periodic in log t, piecewise
//! rational on [1,4], and attains its maximum 5/18 at t = 12/5. The
//! discrete double-sum ratio (1/(m+1)²) Σ_{k≤m} Σ_{l≤k} χ_I(l) lives
//! under the same ceiling.

use super::super::asymptotics::DyadicOperatorB;
use crate::spectra::render_rational;
use crate::Rational;
use num::{One, Zero};
use serde::Serialize;

/// F on [1, 2]: 1/2 − 2/(3t) + 2/(5t²), exact.
pub fn branch_low(t: &Rational) -> Rational {
    let half = Rational::new(1.into(), 2.into());
    let two_thirds = Rational::new(2.into(), 3.into());
    let two_fifths = Rational::new(2.into(), 5.into());
    half - two_thirds / t + two_fifths / (t * t)
}

/// F on [2, 4]: 4/(3t) − 8/(5t²), exact.
pub fn branch_high(t: &Rational) -> Rational {
    let four_thirds = Rational::new(4.into(), 3.into());
    let eight_fifths = Rational::new(8.into(), 5.into());
    four_thirds / t - eight_fifths / (t * t)
}

/// F on [1, 4] (the fundamental cell), exact rational.
pub fn density_f(t: &Rational) -> Rational {
    let two = Rational::from_integer(2.into());
    if *t <= two {
        branch_low(t)
    } else {
        branch_high(t)
    }
}

/// d/dt of the high branch: −4/(3t²) + 16/(5t³), exact.
pub fn branch_high_derivative(t: &Rational) -> Rational {
    let four_thirds = Rational::new(4.into(), 3.into());
    let sixteen_fifths = Rational::new(16.into(), 5.into());
    -four_thirds / (t * t) + sixteen_fifths / (t * t * t)
}

/// Independent quadrature of (1/t²)∫₀ᵗ z(u)(t−u)du: z is piecewise
/// constant, so the integral is summed interval by interval with an
/// explicit tail bound below 4^{-min_scale}.
pub fn quadrature_f(t: f64, min_scale: i32) -> f64 {
    assert!(t > 0.0);
    let mut total = 0.0f64;
    let mut j = (t.log2() / 2.0).floor() as i32 + 1;
    while j >= -min_scale {
        let a = 4f64.powi(j);
        let b = 2.0 * a;
        let lo = a.min(t);
        let hi = b.min(t);
        if lo < hi {
            // ∫_lo^hi (t − u) du = t(hi − lo) − (hi² − lo²)/2
            total += t * (hi - lo) - (hi * hi - lo * lo) / 2.0;
        }
        j -= 1;
    }
    total / (t * t)
}

/// Σ_{k=0}^{m} Σ_{l=0}^{k} χ_I(l) = Σ_{l ∈ I, l ≤ m} (m − l + 1), exactly,
/// via per-interval closed forms in u128.
pub fn double_prefix_sum(m: u64) -> u128 {
    let mut total: u128 = 0;
    for (a, end) in DyadicOperatorB::intervals() {
        if a > m {
            break;
        }
        let top = (end - 1).min(m);
        let count = (top - a + 1) as u128;
        // Σ_{l=a}^{top} (m + 1 − l) = count·(m+1) − count·(a+top)/2
        total += count * (m as u128 + 1) - count * (a as u128 + top as u128) / 2;
    }
    total
}

#[derive(Clone, Debug, Serialize)]
pub struct DensityProfile {
    /// t* = 12/5 and F(t*) = 5/18, rendered exactly.
    pub maximizer_t: String,
    pub maximum: String,
    /// Exact branch agreement F(2⁻) = F(2⁺) = 4/15.
    pub continuous_at_two: bool,
    /// Exact endpoint equality F(1) = F(4) (the z(4t) = z(t) periodicity).
    pub endpoints_equal: bool,
    /// d/dt of the high branch vanishes exactly at 12/5.
    pub critical_point_exact: bool,
    /// All sampled F(t) stay at or below 5/18 (exact comparisons).
    pub samples_below_max: bool,
    /// (t, F(t)) across [1, 4] at the requested resolution.
    pub samples: Vec<(f64, f64)>,
    /// Quadrature oracle at 12/5 and its deviation from 5/18.
    pub quadrature_at_maximizer: f64,
    pub quadrature_deviation: f64,
    /// Discrete double-sum ratio diagnostics over m ≤ m_max.
    pub discrete_m_max: u64,
    pub discrete_max_ratio: f64,
    pub discrete_argmax: u64,
    /// Every ratio ≤ 5/18 + 10⁻³ (checked exactly in integers).
    pub discrete_within_bound: bool,
    /// Ratios sampled at m ≈ (12/5)·4^n; they approach 5/18.
    pub near_attainment: Vec<(u64, f64)>,
}

/// Evaluate the profile: exact branch checks, a quadrature oracle, and
/// the discrete double-sum sweep up to m_max.
pub fn density_profile(resolution: u32, m_max: u64) -> DensityProfile {
    let resolution = resolution.max(2);
    let t_star = Rational::new(12.into(), 5.into());
    let maximum = Rational::new(5.into(), 18.into());

    let continuous_at_two = {
        let two = Rational::from_integer(2.into());
        let four_fifteenths = Rational::new(4.into(), 15.into());
        branch_low(&two) == four_fifteenths && branch_high(&two) == four_fifteenths
    };
    let endpoints_equal = {
        let one = Rational::one();
        let four = Rational::from_integer(4.into());
        branch_low(&one) == branch_high(&four)
            && branch_low(&one) == Rational::new(7.into(), 30.into())
    };
    let critical_point_exact = branch_high_derivative(&t_star).is_zero()
        && density_f(&t_star) == maximum;

    let mut samples = Vec::new();
    let mut samples_below_max = true;
    let steps = 3 * resolution as i64;
    for i in 0..=steps {
        let t = Rational::one() + Rational::new(i.into(), (resolution as i64).into());
        let f = density_f(&t);
        if f > maximum {
            samples_below_max = false;
        }
        samples.push((
            crate::numeric::rational_to_estimate(&t).value,
            crate::numeric::rational_to_estimate(&f).value,
        ));
    }

    let quadrature_at_maximizer = quadrature_f(2.4, 24);
    let quadrature_deviation = (quadrature_at_maximizer - 5.0 / 18.0).abs();

    // discrete sweep: ratio ≤ 5/18 + 1/1000 = 2509/9000, i.e.
    // 9000·G(m) ≤ 2509·(m+1)², all in integers
    let mut discrete_within_bound = true;
    let mut best_num: u128 = 0; // G(argmax)
    let mut best_den: u128 = 1; // (argmax+1)^2
    let mut discrete_argmax = 0u64;
    for m in 0..=m_max {
        let g = double_prefix_sum(m);
        let sq = (m as u128 + 1) * (m as u128 + 1);
        if 9_000 * g > 2_509 * sq {
            discrete_within_bound = false;
        }
        if g * best_den > best_num * sq {
            best_num = g;
            best_den = sq;
            discrete_argmax = m;
        }
    }
    let discrete_max_ratio = best_num as f64 / best_den as f64;

    let mut near_attainment = Vec::new();
    let mut scale = 1u64;
    loop {
        let m = 12 * scale / 5;
        if m > m_max {
            break;
        }
        if m >= 1 {
            let g = double_prefix_sum(m);
            let sq = (m as u128 + 1) * (m as u128 + 1);
            near_attainment.push((m, g as f64 / sq as f64));
        }
        match scale.checked_mul(4) {
            Some(next) => scale = next,
            None => break,
        }
    }

    DensityProfile {
        maximizer_t: render_rational(&t_star),
        maximum: render_rational(&maximum),
        continuous_at_two,
        endpoints_equal,
        critical_point_exact,
        samples_below_max,
        samples,
        quadrature_at_maximizer,
        quadrature_deviation,
        discrete_m_max: m_max,
        discrete_max_ratio,
        discrete_argmax,
        discrete_within_bound,
        near_attainment,
    }
}
