//! The dilation summation identity
//! Σ_m (Σ_{k≤m} Σ_{l≤k} x_l) 2^{-ms} = (1-2^{-s})^{-2} Σ_l x_l 2^{-ls}
//! and the weighted square sum Σ (m+1)² 2^{-ms} = (1+2^{-s})/(1-2^{-s})³.
//!
//! Both sides are always computed independently and reported with their
//! discrepancy; integer s keeps everything in exact rationals.

use super::AsymptoticsError;
use crate::numeric::{one_minus_exp2_neg, CompensatedSum, Estimate, OP_EPS};
use num::{BigRational, One, Zero};

/// Both sides of the identity and their difference.
#[derive(Clone, Debug, PartialEq)]
pub struct DilationCheck<T> {
    pub lhs: T,
    pub rhs: T,
    pub discrepancy: T,
}

/// Exact evaluation for integer s ≥ 1 (so 2^{-s} is rational). The left
/// side's tail past the support is geometric and summed in closed form:
/// for m beyond the support, the inner double sum grows linearly.
pub fn dilation_sum_check_exact(x: &[BigRational], s: u32) -> DilationCheck<BigRational> {
    assert!(s >= 1, "exact path needs integer s >= 1");
    let r = BigRational::new(1.into(), num::BigInt::from(2).pow(s));
    let one_minus_r = BigRational::one() - &r;

    if x.is_empty() {
        return DilationCheck {
            lhs: BigRational::zero(),
            rhs: BigRational::zero(),
            discrepancy: BigRational::zero(),
        };
    }

    // prefix S(k) and double prefix g(m) over the support
    let mut lhs = BigRational::zero();
    let mut prefix = BigRational::zero();
    let mut double_prefix = BigRational::zero();
    let mut r_pow = BigRational::one();
    let mut rhs_sum = BigRational::zero();
    for v in x {
        prefix += v;
        double_prefix += &prefix;
        lhs += &double_prefix * &r_pow;
        rhs_sum += v * &r_pow;
        r_pow *= &r;
    }
    // tails: Σ_{m>L} g(L) r^m + S_total Σ_{m>L} (m-L) r^m
    // r_pow now holds r^{L+1}
    let geometric_tail = &double_prefix * &r_pow / &one_minus_r;
    let linear_tail = &prefix * &r_pow / (&one_minus_r * &one_minus_r);
    lhs += geometric_tail + linear_tail;

    let rhs = rhs_sum / (&one_minus_r * &one_minus_r);
    let discrepancy = &lhs - &rhs;
    DilationCheck { lhs, rhs, discrepancy }
}

/// Float evaluation for arbitrary s > 0, same tail treatment.
pub fn dilation_sum_check(x: &[f64], s: f64) -> Result<DilationCheck<f64>, AsymptoticsError> {
    if !s.is_finite() || s <= 0.0 {
        return Err(AsymptoticsError::NonPositiveExponent { s });
    }
    if x.is_empty() {
        return Ok(DilationCheck {
            lhs: 0.0,
            rhs: 0.0,
            discrepancy: 0.0,
        });
    }
    let r = (-s * std::f64::consts::LN_2).exp();
    let one_minus_r = one_minus_exp2_neg(s);

    let mut lhs = CompensatedSum::new();
    let mut rhs_sum = CompensatedSum::new();
    let mut prefix = 0.0;
    let mut double_prefix = 0.0;
    let mut r_pow = 1.0;
    for &v in x {
        prefix += v;
        double_prefix += prefix;
        lhs.add(double_prefix * r_pow);
        rhs_sum.add(v * r_pow);
        r_pow *= r;
    }
    lhs.add(double_prefix * r_pow / one_minus_r);
    lhs.add(prefix * r_pow / (one_minus_r * one_minus_r));

    let lhs = lhs.value();
    let rhs = rhs_sum.value() / (one_minus_r * one_minus_r);
    Ok(DilationCheck {
        lhs,
        rhs,
        discrepancy: lhs - rhs,
    })
}

/// Σ_{m≥0} (m+1)² 2^{-ms} via the closed form (1+2^{-s})/(1-2^{-s})³.
pub fn weighted_square_sum(s: f64) -> Result<Estimate, AsymptoticsError> {
    if !s.is_finite() || s <= 0.0 {
        return Err(AsymptoticsError::NonPositiveExponent { s });
    }
    let r = (-s * std::f64::consts::LN_2).exp();
    let one_minus_r = one_minus_exp2_neg(s);
    let value = (1.0 + r) / (one_minus_r * one_minus_r * one_minus_r);
    Ok(Estimate::new(value, value.abs() * 8.0 * OP_EPS))
}

/// Exact rational closed form for integer s ≥ 1.
pub fn weighted_square_sum_exact(s: u32) -> BigRational {
    assert!(s >= 1);
    let r = BigRational::new(1.into(), num::BigInt::from(2).pow(s));
    let one_minus_r = BigRational::one() - &r;
    (BigRational::one() + &r) / (&one_minus_r * &one_minus_r * &one_minus_r)
}
