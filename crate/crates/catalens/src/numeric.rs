//! Shared numeric plumbing: error-bounded floats, double-double helpers,
//! logarithms of big integers, and rational-to-float conversion.
//!
//! Exact decisions (submajorization, certificates) never go through this
//! module; it exists for the quantities that are irreducibly real-valued
//! (non-integer powers, logarithms, zeta values). Every approximate value
//! carries an absolute error bound that downstream checks fold into their
//! margins.

use num::{BigRational, BigUint, Signed, Zero};

/// Natural log of 2, split for double-double arithmetic: the f64
/// rounding plus its residual to double-double precision.
pub const LN2_HI: f64 = std::f64::consts::LN_2;
pub const LN2_LO: f64 = 2.319_046_813_846_299_6e-17;
/// Euler–Mascheroni constant.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// Per-operation rounding slop folded into [`Estimate`] bounds.
/// Deliberately coarser than machine epsilon so the bounds stay honest
/// without full interval arithmetic.
pub const OP_EPS: f64 = 8.9e-16; // 2^-50

/// A float together with a certified absolute error bound:
/// the true value lies in [value - bound, value + bound].
#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize)]
pub struct Estimate {
    pub value: f64,
    #[serde(rename = "error_bound")]
    pub bound: f64,
}

impl Estimate {
    pub fn new(value: f64, bound: f64) -> Self {
        Estimate {
            value,
            bound: bound.abs(),
        }
    }

    /// An exactly representable value (no error beyond the representation).
    pub fn exact(value: f64) -> Self {
        Estimate { value, bound: 0.0 }
    }

    pub fn zero() -> Self {
        Estimate::exact(0.0)
    }

    fn slop(value: f64) -> f64 {
        value.abs() * OP_EPS
    }

    pub fn scale(self, factor: f64) -> Estimate {
        let value = self.value * factor;
        Estimate::new(value, self.bound * factor.abs() + Self::slop(value))
    }

    /// x^e for a positive base, via exp(e ln x) with a conservative budget.
    pub fn powf(self, exponent: f64) -> Estimate {
        assert!(self.value - self.bound > 0.0, "powf needs a positive base");
        let value = self.value.powf(exponent);
        // |d(x^e)| = |e| x^(e-1) dx ; add a relative budget for powf itself.
        let deriv = exponent.abs() * self.value.powf(exponent - 1.0);
        let bound = deriv * self.bound + value.abs() * 4.0 * OP_EPS;
        Estimate::new(value, bound)
    }

    /// Lower edge of the certified interval.
    pub fn lower(self) -> f64 {
        self.value - self.bound
    }

    /// Upper edge of the certified interval.
    pub fn upper(self) -> f64 {
        self.value + self.bound
    }

    /// True when the certified interval lies strictly above `threshold`.
    pub fn certainly_above(self, threshold: f64) -> bool {
        self.lower() > threshold
    }

    /// True when the certified interval lies at or below `threshold`.
    pub fn certainly_at_most(self, threshold: f64) -> bool {
        self.upper() <= threshold
    }
}

impl std::ops::Add for Estimate {
    type Output = Estimate;
    fn add(self, rhs: Estimate) -> Estimate {
        let value = self.value + rhs.value;
        Estimate::new(value, self.bound + rhs.bound + Self::slop(value))
    }
}

impl std::ops::Neg for Estimate {
    type Output = Estimate;
    fn neg(self) -> Estimate {
        Estimate::new(-self.value, self.bound)
    }
}

impl std::ops::Sub for Estimate {
    type Output = Estimate;
    fn sub(self, rhs: Estimate) -> Estimate {
        self + (-rhs)
    }
}

impl std::ops::Mul for Estimate {
    type Output = Estimate;
    fn mul(self, rhs: Estimate) -> Estimate {
        let value = self.value * rhs.value;
        let bound = self.value.abs() * rhs.bound
            + rhs.value.abs() * self.bound
            + self.bound * rhs.bound
            + Self::slop(value);
        Estimate::new(value, bound)
    }
}

/// Division is only defined when the divisor interval excludes zero.
impl std::ops::Div for Estimate {
    type Output = Estimate;
    fn div(self, rhs: Estimate) -> Estimate {
        let denom = rhs.value.abs() - rhs.bound;
        assert!(denom > 0.0, "division by an interval containing zero");
        let value = self.value / rhs.value;
        let bound = (self.bound + value.abs() * rhs.bound) / denom + Self::slop(value);
        Estimate::new(value, bound)
    }
}

/// Double-double value `hi + lo` with |lo| <= ulp(hi)/2.
#[derive(Clone, Copy, Debug)]
pub struct Dd {
    pub hi: f64,
    pub lo: f64,
}

fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    let err = (a - (s - bb)) + (b - bb);
    (s, err)
}

fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    // mul_add is a fused multiply-add: exact low part of the product.
    let err = a.mul_add(b, -p);
    (p, err)
}

impl Dd {
    pub const LN2: Dd = Dd {
        hi: LN2_HI,
        lo: LN2_LO,
    };

    pub fn from_f64(x: f64) -> Dd {
        Dd { hi: x, lo: 0.0 }
    }

    pub fn add_f64(self, rhs: f64) -> Dd {
        self + Dd::from_f64(rhs)
    }

    pub fn mul_f64(self, rhs: f64) -> Dd {
        let (p, e) = two_prod(self.hi, rhs);
        let e = e + self.lo * rhs;
        let (hi, lo) = two_sum(p, e);
        Dd { hi, lo }
    }

    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }
}

impl std::ops::Add for Dd {
    type Output = Dd;
    fn add(self, rhs: Dd) -> Dd {
        let (s, e) = two_sum(self.hi, rhs.hi);
        let e = e + self.lo + rhs.lo;
        let (hi, lo) = two_sum(s, e);
        Dd { hi, lo }
    }
}

impl std::ops::Div for Dd {
    type Output = Dd;
    fn div(self, rhs: Dd) -> Dd {
        let q1 = self.hi / rhs.hi;
        let r = self + rhs.mul_f64(-q1);
        let q2 = r.hi / rhs.hi;
        let (hi, lo) = two_sum(q1, q2);
        Dd { hi, lo }
    }
}

/// Natural logarithm of a big positive integer, computed from the bit
/// representation: `ln n = (bits-1) ln 2 + ln(mantissa)` where the mantissa
/// lives in [1, 2). Never converts `n` itself to a float, so it works for
/// integers with hundreds of thousands of bits.
///
/// The returned double-double carries an absolute error below 2^-48
/// (requirement: 2^-40), dominated by one `f64::ln` call on [1, 2).
pub fn ln_biguint(n: &BigUint) -> (Dd, f64) {
    assert!(!n.is_zero(), "ln of zero");
    let bits = n.bits();
    if bits <= 53 {
        let v = u64::try_from(n.clone()).expect("fits in u64") as f64;
        return (Dd::from_f64(v.ln()), v.ln().abs() * 2.0 * f64::EPSILON + 1e-18);
    }
    let shift = bits - 53;
    let top: u64 = u64::try_from(n >> shift).expect("top 53 bits fit");
    // mantissa in [1, 2), exactly representable
    let mant = top as f64 / (1u64 << 52) as f64;
    // discarded low bits shift the mantissa up by at most 2^-52
    let correction = f64::from_bits(0x3CA0000000000000); // 2^-53, interval midpoint
    let ln_mant = mant.ln() + correction;
    let dd = Dd::LN2.mul_f64((bits - 1) as f64).add_f64(ln_mant);
    // f64::ln on [1,2): <= 1 ulp of a value <= ln 2; plus the mantissa interval.
    let bound = correction + 2.0 * f64::EPSILON + dd.hi.abs() * 1e-30;
    (dd, bound)
}

/// `ln n` as an [`Estimate`] (the double-double collapsed to f64).
pub fn ln_biguint_est(n: &BigUint) -> Estimate {
    let (dd, bound) = ln_biguint(n);
    let v = dd.to_f64();
    Estimate::new(v, bound + v.abs() * f64::EPSILON)
}

/// Multiply by 2^e without going through `powf`, saturating to 0/inf
/// outside the representable exponent range.
pub fn ldexp(x: f64, e: i64) -> f64 {
    if x == 0.0 {
        return 0.0;
    }
    let mut result = x;
    let mut rem = e;
    while rem != 0 {
        let step = rem.clamp(-1000, 1000);
        result *= 2.0f64.powi(step as i32);
        rem -= step;
        if result == 0.0 || result.is_infinite() {
            break;
        }
    }
    result
}

/// Convert an exact rational to an [`Estimate`] by shifting numerator and
/// denominator to a ~60-bit quotient. Handles magnitudes far outside the
/// f64 range (they collapse to 0 or infinity with a truthful bound).
pub fn rational_to_estimate(r: &BigRational) -> Estimate {
    if r.is_zero() {
        return Estimate::exact(0.0);
    }
    let neg = r.is_negative();
    let num = r.numer().abs().to_biguint().expect("abs is nonnegative");
    let den = r.denom().abs().to_biguint().expect("abs is nonnegative");
    let nb = num.bits() as i64;
    let db = den.bits() as i64;
    // shift numerator so the integer quotient has ~60 significant bits
    let s: i64 = 60 + db - nb;
    let q = if s >= 0 {
        (num << (s as u64)) / den
    } else {
        (num >> ((-s) as u64)) / den
    };
    let q64 = u64::try_from(q).expect("quotient fits in 64 bits");
    let mut value = ldexp(q64 as f64, -s);
    let mut bound = if value.is_finite() {
        value.abs() * 4.4e-16 // floor division + two roundings, < 2^-51
    } else {
        f64::MAX
    };
    if value == 0.0 {
        // underflow: the true value is below the smallest positive f64
        bound = ldexp(1.0, -(s.min(1_070)));
        value = 0.0;
    }
    if neg {
        value = -value;
    }
    Estimate::new(value, bound)
}

/// Neumaier compensated summation with a running bound on the accumulated
/// rounding error (2 eps per term on the magnitude sum).
#[derive(Clone, Copy, Debug, Default)]
pub struct CompensatedSum {
    sum: f64,
    comp: f64,
    abs_sum: f64,
    terms: usize,
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
        self.abs_sum += x.abs();
        self.terms += 1;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }

    /// Bound on the rounding error of the compensated total.
    pub fn rounding_bound(&self) -> f64 {
        3.0 * f64::EPSILON * self.abs_sum + (self.terms as f64) * 1e-300
    }

    pub fn estimate(&self) -> Estimate {
        Estimate::new(self.value(), self.rounding_bound())
    }
}

/// Harmonic number H_n = sum_{k=1..n} 1/k with a certified bound.
/// Exact compensated summation below 2^16 terms, Euler–Maclaurin above.
pub fn harmonic_number(n: &BigUint) -> Estimate {
    if n.is_zero() {
        return Estimate::zero();
    }
    if n.bits() <= 16 {
        let n = u64::try_from(n.clone()).expect("small");
        let mut acc = CompensatedSum::new();
        for k in 1..=n {
            acc.add(1.0 / k as f64);
        }
        return acc.estimate();
    }
    let (ln_n, ln_bound) = ln_biguint(n);
    // 1/(2n) and 1/(12 n^2): zero (with truthful bound) once n is astronomical
    let inv_n = if n.bits() <= 900 {
        let nf = rational_to_estimate(&BigRational::from_integer(n.clone().into()));
        1.0 / nf.value
    } else {
        0.0
    };
    let inv_bound = if inv_n == 0.0 { ldexp(1.0, -850) } else { inv_n * 1e-15 };
    let value = ln_n.to_f64() + EULER_GAMMA + 0.5 * inv_n - inv_n * inv_n / 12.0;
    // remainder of the asymptotic series: < 1/(120 n^4)
    let tail = inv_n.powi(4) / 120.0 + inv_bound;
    Estimate::new(
        value,
        ln_bound + tail + value.abs() * 4.0 * f64::EPSILON,
    )
}

/// 1 - 2^{-s} computed without cancellation (accurate for tiny s > 0).
pub fn one_minus_exp2_neg(s: f64) -> f64 {
    -(-s * std::f64::consts::LN_2).exp_m1()
}

/// 2^{-x} for x >= 0.
pub fn exp2_neg(x: f64) -> f64 {
    (-x * std::f64::consts::LN_2).exp()
}

#[cfg(test)]
mod tests {
    use super::*;
    use num::One;

    #[test]
    fn ln_biguint_matches_f64_for_small_values() {
        for n in [1u64, 2, 3, 100, 65_535, 1 << 52] {
            let big = BigUint::from(n);
            let (dd, bound) = ln_biguint(&big);
            assert!((dd.to_f64() - (n as f64).ln()).abs() <= bound.max(1e-13));
        }
    }

    #[test]
    fn ln_biguint_handles_huge_powers_of_two() {
        // ln(2^100000) = 100000 ln 2
        let big = BigUint::one() << 100_000u32;
        let (dd, bound) = ln_biguint(&big);
        let expect = 100_000.0 * LN2_HI + 100_000.0 * LN2_LO;
        assert!(bound < 1e-12);
        assert!((dd.to_f64() - expect).abs() < 1e-9);
    }

    #[test]
    fn ln_biguint_doubling_adds_ln2() {
        let n = BigUint::parse_bytes(b"123456789123456789123456789123456789", 10).unwrap();
        let (a, _) = ln_biguint(&n);
        let (b, _) = ln_biguint(&(n.clone() << 1u32));
        assert!((b.to_f64() - a.to_f64() - LN2_HI).abs() < 1e-12);
    }

    #[test]
    fn rational_conversion_certifies_small_values() {
        let r = BigRational::new(1.into(), 3.into());
        let est = rational_to_estimate(&r);
        assert!((est.value - 1.0 / 3.0).abs() <= est.bound.max(1e-16));

        let tiny = BigRational::new(1.into(), num::BigInt::from(2).pow(2000));
        let est = rational_to_estimate(&tiny);
        assert_eq!(est.value, 0.0);
        assert!(est.bound > 0.0 && est.bound < 1e-300);
    }

    #[test]
    fn harmonic_number_crosses_the_asymptotic_threshold_smoothly() {
        // H_n for n just below/above 2^16 via both paths
        let lo = harmonic_number(&BigUint::from(65_535u64));
        let hi = harmonic_number(&BigUint::from(65_537u64));
        assert!(hi.value > lo.value);
        assert!((hi.value - lo.value) < 4.0e-5);
        // reference H_10 = 7381/2520
        let h10 = harmonic_number(&BigUint::from(10u64));
        assert!((h10.value - 7381.0 / 2520.0).abs() < 1e-14);
    }

    #[test]
    fn compensated_sum_bounds_hold_on_descending_terms() {
        let mut acc = CompensatedSum::new();
        for k in 1..=100_000u64 {
            acc.add(1.0 / (k * k) as f64);
        }
        let est = acc.estimate();
        let exact = std::f64::consts::PI.powi(2) / 6.0 - 1.0 / 100_000.5; // tail ~ 1/n
        assert!((est.value - exact).abs() < 1e-5);
        assert!(est.bound < 1e-12);
    }

    #[test]
    fn one_minus_exp2_neg_is_accurate_for_tiny_s() {
        let s = 2f64.powi(-30);
        let direct = 1.0 - exp2_neg(s);
        let stable = one_minus_exp2_neg(s);
        assert!((stable - s * std::f64::consts::LN_2).abs() < 1e-18);
        assert!((direct - stable).abs() < 1e-15);
    }
}
