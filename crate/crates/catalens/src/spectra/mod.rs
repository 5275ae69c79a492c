//! Finite singular-value sequences: rearrangement, Hardy–Littlewood
//! submajorization, tensor and direct-sum spectra, power sums and norms.
//!
//! The kernel is generic over the scalar type; all majorization verdicts in
//! the rest of the crate run it over exact rationals (`crate::Spectrum`),
//! while float spectra remain available for quick numeric work.

mod parse;
mod tensor;

pub use parse::{
    parse_rational, parse_spectrum_json, parse_spectrum_str, render_rational, ParsePosition,
};
pub use tensor::TensorIter;

use crate::numeric::{CompensatedSum, Estimate};
use num::{BigRational, FromPrimitive, Num, Signed, ToPrimitive};
use thiserror::Error;

/// Scalars a spectrum can be built over. Rationals give exact verdicts;
/// floats are convenient for scratch work and must be finite.
pub trait Scalar: Clone + PartialOrd + Num + Signed {
    fn is_finite_scalar(&self) -> bool {
        true
    }
    /// Conversion to an error-bounded float, for the norm/power paths.
    fn to_estimate(&self) -> Estimate;
}

impl Scalar for BigRational {
    fn to_estimate(&self) -> Estimate {
        crate::numeric::rational_to_estimate(self)
    }
}

impl Scalar for f64 {
    fn is_finite_scalar(&self) -> bool {
        self.is_finite()
    }
    fn to_estimate(&self) -> Estimate {
        Estimate::exact(*self)
    }
}

impl Scalar for f32 {
    fn is_finite_scalar(&self) -> bool {
        self.is_finite()
    }
    fn to_estimate(&self) -> Estimate {
        Estimate::exact(*self as f64)
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum SpectraError {
    #[error("non-finite entry at position {position}")]
    NonFinite { position: usize },
    #[error("negative entry at position {position}")]
    Negative { position: usize },
    #[error("entries not in nonincreasing order at position {position}")]
    NotSorted { position: usize },
    #[error("tensor product size {left} x {right} overflows")]
    TensorTooLarge { left: usize, right: usize },
    #[error("power exponent {p} is below 1")]
    ExponentBelowOne { p: f64 },
    #[error("scaling factor must be nonnegative")]
    NegativeFactor,
    #[error("parse error at {position}: {message}")]
    Parse { position: ParsePosition, message: String },
}

/// Materialization cap for [`SpectrumOf::tensor`].
pub const MAX_TENSOR_LEN: usize = 1 << 28;

/// A finite nonincreasing sequence of nonnegative scalars; the singular
/// value list of a finite-rank operator. Immutable after construction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpectrumOf<T> {
    values: Vec<T>,
}

/// Outcome of a submajorization check, with the least violating index
/// and both partial sums at the violation when it fails.
#[derive(Clone, Debug, PartialEq)]
pub struct MajorizationCheck<T> {
    pub holds: bool,
    pub first_violation: Option<Violation<T>>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Violation<T> {
    pub index: usize,
    /// Partial sum of the would-be dominating spectrum at `index`.
    pub dominating_sum: T,
    /// Partial sum of the dominated spectrum at `index` (the larger one).
    pub dominated_sum: T,
}

impl<T: Scalar> SpectrumOf<T> {
    pub fn empty() -> Self {
        SpectrumOf { values: Vec::new() }
    }

    /// Decreasing rearrangement of |x|: the μ(·) of a diagonal operator.
    /// Stable under permutation of the input; rejects non-finite entries.
    pub fn rearranged<I>(raw: I) -> Result<Self, SpectraError>
    where
        I: IntoIterator<Item = T>,
    {
        let mut values: Vec<T> = Vec::new();
        for (position, v) in raw.into_iter().enumerate() {
            if !v.is_finite_scalar() {
                return Err(SpectraError::NonFinite { position });
            }
            values.push(v.abs());
        }
        sort_nonincreasing(&mut values);
        Ok(SpectrumOf { values })
    }

    /// Wrap values that are already nonincreasing and nonnegative.
    pub fn from_sorted(values: Vec<T>) -> Result<Self, SpectraError> {
        for (position, v) in values.iter().enumerate() {
            if !v.is_finite_scalar() {
                return Err(SpectraError::NonFinite { position });
            }
            if v.is_negative() {
                return Err(SpectraError::Negative { position });
            }
            if position > 0 && values[position - 1] < *v {
                return Err(SpectraError::NotSorted { position });
            }
        }
        Ok(SpectrumOf { values })
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    /// μ(k), with the compact-operator convention μ(k) = 0 beyond the rank.
    pub fn mu(&self, k: usize) -> T {
        self.values.get(k).cloned().unwrap_or_else(T::zero)
    }

    /// Σ_{k=0..n} μ(k), inclusive upper index (the submajorization
    /// convention; callers needing Σ_{k<N} pass N−1).
    pub fn partial_sum(&self, n: usize) -> T {
        let end = self.values.len().min(n.saturating_add(1));
        self.values[..end]
            .iter()
            .fold(T::zero(), |acc, v| acc + v.clone())
    }

    pub fn total(&self) -> T {
        self.partial_sum(self.values.len().saturating_sub(1))
    }

    /// Σ_{k>=from} μ(k): the tail mass dropped by truncation at `from`.
    pub fn tail_sum(&self, from: usize) -> T {
        self.values[from.min(self.values.len())..]
            .iter()
            .fold(T::zero(), |acc, v| acc + v.clone())
    }

    /// Does `self` submajorize `other` (other ≺≺ self)? True iff every
    /// partial sum of `other` is dominated. Shorter spectra are implicitly
    /// zero-padded; on failure the least violating index is reported.
    pub fn submajorizes(&self, other: &Self) -> MajorizationCheck<T> {
        let n = self.len().max(other.len());
        let mut dominating = T::zero();
        let mut dominated = T::zero();
        for k in 0..n {
            dominating = dominating + self.mu(k);
            dominated = dominated + other.mu(k);
            if dominated > dominating {
                return MajorizationCheck {
                    holds: false,
                    first_violation: Some(Violation {
                        index: k,
                        dominating_sum: dominating,
                        dominated_sum: dominated,
                    }),
                };
            }
        }
        MajorizationCheck {
            holds: true,
            first_violation: None,
        }
    }

    /// Zero-padded equality (same operator up to trailing zeros).
    pub fn padded_eq(&self, other: &Self) -> bool {
        let n = self.len().max(other.len());
        (0..n).all(|k| self.mu(k) == other.mu(k))
    }

    /// Decreasing rearrangement of all pairwise products μ(i)·ν(j),
    /// fully materialized. Length is len(a)·len(b); lengths beyond
    /// [`MAX_TENSOR_LEN`] are reported, never silently truncated
    /// (use [`SpectrumOf::tensor_iter`] for prefixes of large products).
    pub fn tensor(&self, other: &Self) -> Result<Self, SpectraError> {
        let total = self
            .len()
            .checked_mul(other.len())
            .filter(|&t| t <= MAX_TENSOR_LEN)
            .ok_or(SpectraError::TensorTooLarge {
                left: self.len(),
                right: other.len(),
            })?;
        let mut products = Vec::with_capacity(total);
        for a in &self.values {
            for b in &other.values {
                products.push(a.clone() * b.clone());
            }
        }
        sort_nonincreasing(&mut products);
        Ok(SpectrumOf { values: products })
    }

    /// Lazy enumeration of the sorted tensor product; the first k items
    /// cost O(k log k) without materializing all products.
    pub fn tensor_iter<'a>(&'a self, other: &'a Self) -> TensorIter<'a, T> {
        TensorIter::new(&self.values, &other.values)
    }

    /// First `k` entries of the sorted tensor product.
    pub fn tensor_prefix(&self, other: &Self, k: usize) -> Vec<T> {
        self.tensor_iter(other).take(k).collect()
    }

    /// Merged nonincreasing concatenation: μ(A ⊕ B).
    pub fn direct_sum(&self, other: &Self) -> Self {
        let mut merged = Vec::with_capacity(self.len() + other.len());
        let (mut i, mut j) = (0, 0);
        while i < self.len() && j < other.len() {
            if self.values[i] >= other.values[j] {
                merged.push(self.values[i].clone());
                i += 1;
            } else {
                merged.push(other.values[j].clone());
                j += 1;
            }
        }
        merged.extend_from_slice(&self.values[i..]);
        merged.extend_from_slice(&other.values[j..]);
        SpectrumOf { values: merged }
    }

    /// Largest entry (the uniform norm of the operator), 0 when empty.
    pub fn sup_norm(&self) -> T {
        self.mu(0)
    }

    /// sup_k (k+1)·μ(k): the weak-ℓ1 quasi-norm, exact in the scalar type.
    pub fn weak_l1_quasinorm(&self) -> T {
        let mut best = T::zero();
        let mut count = T::zero();
        for v in &self.values {
            count = count + T::one();
            let candidate = count.clone() * v.clone();
            if candidate > best {
                best = candidate;
            }
        }
        best
    }

    /// Σ μ(k)^p for integer p >= 1, exact in the scalar type.
    pub fn power_sum_int(&self, p: u32) -> Result<T, SpectraError> {
        if p < 1 {
            return Err(SpectraError::ExponentBelowOne { p: p as f64 });
        }
        let mut acc = T::zero();
        for v in &self.values {
            let mut term = v.clone();
            for _ in 1..p {
                term = term * v.clone();
            }
            acc = acc + term;
        }
        Ok(acc)
    }

    /// Σ μ(k)^p for real p >= 1. Integer p goes through the exact path and
    /// only pays the final float conversion; fractional p uses compensated
    /// summation over descending terms with a per-term relative budget of
    /// 2^-50, aggregated into the reported bound.
    pub fn power_sum(&self, p: f64) -> Result<Estimate, SpectraError> {
        if !p.is_finite() || p < 1.0 {
            return Err(SpectraError::ExponentBelowOne { p });
        }
        if p.fract() == 0.0 && p <= u32::MAX as f64 {
            let exact = self.power_sum_int(p as u32)?;
            return Ok(exact.to_estimate());
        }
        let mut acc = CompensatedSum::new();
        let mut term_bound = 0.0f64;
        for v in &self.values {
            let base = v.to_estimate();
            if base.value == 0.0 {
                continue;
            }
            let term = base.powf(p);
            acc.add(term.value);
            term_bound += term.bound + term.value.abs() * crate::numeric::OP_EPS;
        }
        let sum = acc.estimate();
        Ok(Estimate::new(sum.value, sum.bound + term_bound))
    }

    /// ℓp norm for finite p >= 1: power_sum^(1/p). For p = ∞ use
    /// [`SpectrumOf::sup_norm`].
    pub fn lp_norm(&self, p: f64) -> Result<Estimate, SpectraError> {
        if !p.is_finite() || p < 1.0 {
            return Err(SpectraError::ExponentBelowOne { p });
        }
        let ps = self.power_sum(p)?;
        if ps.value == 0.0 {
            return Ok(Estimate::new(0.0, ps.bound));
        }
        Ok(ps.powf(1.0 / p))
    }

    /// Keep the first `n` entries.
    pub fn truncated(&self, n: usize) -> Self {
        SpectrumOf {
            values: self.values[..n.min(self.values.len())].to_vec(),
        }
    }

    /// Pointwise scaling by a nonnegative factor.
    pub fn scaled(&self, factor: &T) -> Result<Self, SpectraError> {
        if factor.is_negative() {
            return Err(SpectraError::NegativeFactor);
        }
        Ok(SpectrumOf {
            values: self.values.iter().map(|v| v.clone() * factor.clone()).collect(),
        })
    }

    /// Drop trailing zeros (the operator is unchanged).
    pub fn trimmed(&self) -> Self {
        let mut values = self.values.clone();
        while values.last().is_some_and(|v| v.is_zero()) {
            values.pop();
        }
        SpectrumOf { values }
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|v| v.is_zero())
    }
}

impl crate::Spectrum {
    /// Exact rational spectrum from integer pairs (numerator, denominator).
    pub fn from_ratios(pairs: &[(i64, i64)]) -> Self {
        let values = pairs
            .iter()
            .map(|&(n, d)| BigRational::new(n.into(), d.into()))
            .collect::<Vec<_>>();
        Self::rearranged(values).expect("rationals are always finite")
    }

    /// Lossy conversion to a float spectrum.
    pub fn to_f64_spectrum(&self) -> SpectrumOf<f64> {
        SpectrumOf {
            values: self
                .values
                .iter()
                .map(|v| v.to_f64().unwrap_or_else(|| v.to_estimate().value))
                .collect(),
        }
    }

    /// One exact rational per line, lowest terms.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("value\n");
        for v in &self.values {
            out.push_str(&render_rational(v));
            out.push('\n');
        }
        out
    }

    /// The `{"type":"finite","values":[...]}` document format.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "type": "finite",
            "values": self.values.iter().map(render_rational).collect::<Vec<_>>(),
        })
    }

    pub fn from_f64s(values: &[f64]) -> Result<Self, SpectraError> {
        let mut rationals = Vec::with_capacity(values.len());
        for (position, &v) in values.iter().enumerate() {
            let r = BigRational::from_f64(v).ok_or(SpectraError::NonFinite { position })?;
            rationals.push(r);
        }
        Self::rearranged(rationals)
    }
}

fn sort_nonincreasing<T: PartialOrd>(values: &mut [T]) {
    // entries are finite by construction, so partial_cmp never fails
    values.sort_unstable_by(|a, b| b.partial_cmp(a).unwrap_or(std::cmp::Ordering::Equal));
}
