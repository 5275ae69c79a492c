//! Block-based infinite spectra. A [`LazySpectrum`] never materializes its
//! values: every query either hits a per-variant closed form or walks the
//! block enumerator under an explicit work budget.

use super::dyadic::DyadicOperatorB;
use super::zeta::zeta_shifted;
use super::AsymptoticsError;
use crate::numeric::{
    exp2_neg, harmonic_number, ln_biguint_est, one_minus_exp2_neg, rational_to_estimate,
    CompensatedSum, Estimate, OP_EPS,
};
use crate::spectra::{parse_rational, render_rational};
use crate::Spectrum;
use num::{BigRational, BigUint, One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

/// Cap on block-enumeration work when no closed form applies.
pub const DEFAULT_WORK_BUDGET: u64 = 4_000_000;

/// One block of an infinite spectrum: an eigenvalue with its multiplicity.
/// Streams yield blocks in strictly decreasing eigenvalue order.
#[derive(Clone, Debug, PartialEq)]
pub struct Block {
    pub value: BigRational,
    pub multiplicity: BigUint,
}

/// An infinite (or finite, embedded) spectrum in block form.
///
/// Construction normalizes the shape: scalings are pushed into finite
/// spectra and merged, nested direct sums are flattened. The variants
/// after normalization are the descriptor forms of the JSON interface.
#[derive(Clone, Debug, PartialEq)]
pub enum LazySpectrum {
    /// diag(1, 1/2, 1/3, …): μ(k) = 1/(k+1), weak-ℓ1 bound 1.
    Harmonic,
    /// The dyadic block operator: eigenvalue 2^{-m}, multiplicity 2^m,
    /// for m in I = ∪ [2^{2n}, 2^{2n+1}).
    DyadicB,
    /// factor · base, factor a positive rational.
    Scaled {
        factor: BigRational,
        base: Box<LazySpectrum>,
    },
    /// Direct sum: the sorted merge of the parts' value multisets.
    DirectSum { parts: Vec<LazySpectrum> },
    /// A finite spectrum embedded as a lazy one.
    Finite { spectrum: Spectrum },
}

impl LazySpectrum {
    pub fn harmonic() -> Self {
        LazySpectrum::Harmonic
    }

    pub fn dyadic_b() -> Self {
        LazySpectrum::DyadicB
    }

    pub fn finite(spectrum: Spectrum) -> Self {
        LazySpectrum::Finite {
            spectrum: spectrum.trimmed(),
        }
    }

    pub fn scaled(factor: BigRational, base: LazySpectrum) -> Result<Self, AsymptoticsError> {
        if !factor.is_positive() {
            return Err(AsymptoticsError::NonPositiveFactor);
        }
        Ok(match base {
            LazySpectrum::Finite { spectrum } => LazySpectrum::Finite {
                spectrum: spectrum.scaled(&factor).expect("positive factor"),
            },
            LazySpectrum::Scaled {
                factor: inner,
                base,
            } => LazySpectrum::Scaled {
                factor: factor * inner,
                base,
            },
            LazySpectrum::DirectSum { parts } => LazySpectrum::DirectSum {
                parts: parts
                    .into_iter()
                    .map(|p| Self::scaled(factor.clone(), p).expect("positive factor"))
                    .collect(),
            },
            other => LazySpectrum::Scaled {
                factor,
                base: Box::new(other),
            },
        })
    }

    pub fn direct_sum(parts: Vec<LazySpectrum>) -> Self {
        let mut flat = Vec::new();
        let mut finites: Vec<Spectrum> = Vec::new();
        for part in parts {
            match part {
                LazySpectrum::DirectSum { parts } => {
                    for p in parts {
                        match p {
                            LazySpectrum::Finite { spectrum } => finites.push(spectrum),
                            other => flat.push(other),
                        }
                    }
                }
                LazySpectrum::Finite { spectrum } => finites.push(spectrum),
                other => flat.push(other),
            }
        }
        if !finites.is_empty() {
            let merged = finites
                .into_iter()
                .fold(Spectrum::empty(), |acc, s| acc.direct_sum(&s))
                .trimmed();
            if !merged.is_empty() || flat.is_empty() {
                flat.push(LazySpectrum::Finite { spectrum: merged });
            }
        }
        if flat.len() == 1 {
            flat.pop().expect("one element")
        } else {
            LazySpectrum::DirectSum { parts: flat }
        }
    }

    /// Summable (trace-class) spectra are exactly the finite-based ones.
    pub fn is_summable(&self) -> bool {
        match self {
            LazySpectrum::Harmonic | LazySpectrum::DyadicB => false,
            LazySpectrum::Scaled { base, .. } => base.is_summable(),
            LazySpectrum::DirectSum { parts } => parts.iter().all(|p| p.is_summable()),
            LazySpectrum::Finite { .. } => true,
        }
    }

    /// Materialize a summable spectrum exactly.
    pub fn to_l1_spectrum(&self) -> Option<Spectrum> {
        match self {
            LazySpectrum::Finite { spectrum } => Some(spectrum.clone()),
            LazySpectrum::DirectSum { parts } => {
                let mut merged = Spectrum::empty();
                for p in parts {
                    merged = merged.direct_sum(&p.to_l1_spectrum()?);
                }
                Some(merged)
            }
            _ => None,
        }
    }

    /// Known weak-ℓ1 bound: sup (k+1)μ(k) ≤ bound, exact in rationals.
    /// (For direct sums the bounds add; counting measures stack.)
    pub fn weak_l1_bound(&self) -> BigRational {
        match self {
            LazySpectrum::Harmonic => BigRational::one(),
            // μ(k, B) ≤ 2/(k+1), and the sup is approached along blocks
            LazySpectrum::DyadicB => BigRational::from_integer(2.into()),
            LazySpectrum::Scaled { factor, base } => factor * base.weak_l1_bound(),
            LazySpectrum::DirectSum { parts } => parts
                .iter()
                .map(|p| p.weak_l1_bound())
                .fold(BigRational::zero(), |a, b| a + b),
            LazySpectrum::Finite { spectrum } => spectrum.weak_l1_quasinorm(),
        }
    }

    /// Number of singular values strictly above `threshold`, exact.
    pub fn spectral_count(&self, threshold: &BigRational) -> Result<BigUint, AsymptoticsError> {
        if !threshold.is_positive() {
            return Err(AsymptoticsError::NonPositiveThreshold);
        }
        Ok(self.count_above(threshold))
    }

    fn count_above(&self, threshold: &BigRational) -> BigUint {
        match self {
            // 1/(k+1) > t  ⟺  k+1 ≤ ⌈1/t⌉ − 1  ⟹  count = ⌊(den−1)/num⌋
            LazySpectrum::Harmonic => {
                let num = threshold.numer().magnitude();
                let den = threshold.denom().magnitude();
                (den - BigUint::one()) / num
            }
            LazySpectrum::DyadicB => DyadicOperatorB::count_above(threshold),
            LazySpectrum::Scaled { factor, base } => base.count_above(&(threshold / factor)),
            LazySpectrum::DirectSum { parts } => parts
                .iter()
                .map(|p| p.count_above(threshold))
                .fold(BigUint::zero(), |a, b| a + b),
            LazySpectrum::Finite { spectrum } => BigUint::from(
                spectrum
                    .values()
                    .iter()
                    .take_while(|v| *v > threshold)
                    .count(),
            ),
        }
    }

    /// k-th singular value by block lookup (0 beyond the support).
    pub fn mu_at(&self, k: &BigUint) -> BigRational {
        match self {
            LazySpectrum::Harmonic => BigRational::new(
                num::BigInt::one(),
                num::BigInt::from(k + BigUint::one()),
            ),
            LazySpectrum::DyadicB => DyadicOperatorB::mu_at(k),
            LazySpectrum::Scaled { factor, base } => factor * base.mu_at(k),
            LazySpectrum::Finite { spectrum } => match k.to_usize() {
                Some(i) => spectrum.mu(i),
                None => BigRational::zero(),
            },
            LazySpectrum::DirectSum { .. } => {
                if let Some((inf, finite)) = self.split_one_infinite() {
                    // positions of the finite values in the merge
                    let mut occupied_before = BigUint::zero();
                    for (j, v) in finite.values().iter().enumerate() {
                        let pos = inf.count_above(v) + BigUint::from(j);
                        if pos == *k {
                            return v.clone();
                        }
                        if pos < *k {
                            occupied_before += BigUint::one();
                        } else {
                            break;
                        }
                    }
                    inf.mu_at(&(k - occupied_before))
                } else {
                    self.mu_by_walk(k)
                        .expect("multi-infinite mu walk exceeded budget")
                }
            }
        }
    }

    fn mu_by_walk(&self, k: &BigUint) -> Option<BigRational> {
        let mut cumulative = BigUint::zero();
        for block in self.blocks().take(DEFAULT_WORK_BUDGET as usize) {
            cumulative += &block.multiplicity;
            if cumulative > *k {
                return Some(block.value);
            }
        }
        None
    }

    /// Σ_{k=0}^{n} μ(k) with a certified bound. Closed forms cover the
    /// harmonic and dyadic spectra (and direct sums with at most one
    /// infinite summand) at any index; otherwise the block walk runs
    /// under `budget` and refuses indices beyond it.
    pub fn partial_sum(
        &self,
        n: &BigUint,
        budget: u64,
    ) -> Result<Estimate, AsymptoticsError> {
        match self {
            LazySpectrum::Harmonic => Ok(harmonic_number(&(n + BigUint::one()))),
            LazySpectrum::DyadicB => Ok(rational_to_estimate(&DyadicOperatorB::partial_sum(n))),
            LazySpectrum::Scaled { factor, base } => {
                let f = rational_to_estimate(factor);
                Ok(base.partial_sum(n, budget)? * f)
            }
            LazySpectrum::Finite { spectrum } => {
                let end = n.to_usize().unwrap_or(usize::MAX);
                Ok(rational_to_estimate(&spectrum.partial_sum(end)))
            }
            LazySpectrum::DirectSum { .. } => {
                if let Some((inf, finite)) = self.split_one_infinite() {
                    let mut q = BigUint::zero();
                    let mut finite_mass = BigRational::zero();
                    for (j, v) in finite.values().iter().enumerate() {
                        let pos = inf.count_above(v) + BigUint::from(j);
                        if pos <= *n {
                            q += BigUint::one();
                            finite_mass += v;
                        } else {
                            break;
                        }
                    }
                    let finite_part = rational_to_estimate(&finite_mass);
                    if q > *n {
                        // the whole prefix is finite values
                        return Ok(finite_part);
                    }
                    let inf_part = inf.partial_sum(&(n - &q), budget)?;
                    Ok(finite_part + inf_part)
                } else {
                    self.partial_sum_by_walk(n, budget)
                }
            }
        }
    }

    fn partial_sum_by_walk(
        &self,
        n: &BigUint,
        budget: u64,
    ) -> Result<Estimate, AsymptoticsError> {
        let target = n + BigUint::one();
        let mut cumulative = BigUint::zero();
        let mut acc = CompensatedSum::new();
        let mut value_bound = 0.0f64;
        for (steps, block) in self.blocks().enumerate() {
            if steps as u64 >= budget {
                return Err(AsymptoticsError::WorkBudgetExceeded { budget });
            }
            let take = if &cumulative + &block.multiplicity <= target {
                block.multiplicity.clone()
            } else {
                &target - &cumulative
            };
            let v = rational_to_estimate(&block.value);
            let count = take.to_f64().unwrap_or(f64::MAX);
            acc.add(v.value * count);
            value_bound += v.bound * count + v.value.abs() * count * OP_EPS;
            cumulative += &take;
            if cumulative == target {
                let sum = acc.estimate();
                return Ok(Estimate::new(sum.value, sum.bound + value_bound));
            }
        }
        // block stream exhausted: the spectrum is finite-based
        let sum = acc.estimate();
        Ok(Estimate::new(sum.value, sum.bound + value_bound))
    }

    /// If the direct sum has at most one infinite part, return it together
    /// with the merged finite parts (zeros dropped).
    fn split_one_infinite(&self) -> Option<(&LazySpectrum, Spectrum)> {
        let LazySpectrum::DirectSum { parts } = self else {
            return None;
        };
        let mut infinite = None;
        let mut finite = Spectrum::empty();
        for part in parts {
            match part {
                LazySpectrum::Finite { spectrum } => {
                    finite = finite.direct_sum(spectrum);
                }
                other => {
                    if infinite.is_some() {
                        return None;
                    }
                    infinite = Some(other);
                }
            }
        }
        infinite.map(|inf| (inf, finite.trimmed()))
    }

    /// x_N = (Σ_{k=0}^{N} μ(k)) / log(N+2), the log-averaged partial sum.
    /// The logarithm comes from the big-integer representation, never the
    /// value, so N may have hundreds of thousands of bits.
    pub fn log_average(&self, n: &BigUint, budget: u64) -> Result<Estimate, AsymptoticsError> {
        let numerator = self.partial_sum(n, budget)?;
        let log = ln_biguint_est(&(n + BigUint::from(2u32)));
        Ok(numerator / log)
    }

    /// Tr(X^{1+s}) for s > 0, with the per-variant closed forms:
    /// ζ(1+s) for the harmonic spectrum, per-interval geometric sums for
    /// the dyadic one (tail cut when the leading term of an interval
    /// falls below budget·(1−2^{-s})).
    pub fn power_trace(&self, s: f64, precision_bits: u32) -> Result<Estimate, AsymptoticsError> {
        if !s.is_finite() || s <= 0.0 {
            return Err(AsymptoticsError::NonPositiveExponent { s });
        }
        match self {
            LazySpectrum::Harmonic => zeta_shifted(s),
            LazySpectrum::DyadicB => Ok(dyadic_power_trace(s, precision_bits)),
            LazySpectrum::Scaled { factor, base } => {
                let f = rational_to_estimate(factor).powf(1.0 + s);
                Ok(base.power_trace(s, precision_bits)? * f)
            }
            LazySpectrum::Finite { spectrum } => Ok(spectrum.power_sum(1.0 + s)?),
            LazySpectrum::DirectSum { parts } => {
                let mut total = Estimate::zero();
                for p in parts {
                    total = total + p.power_trace(s, precision_bits)?;
                }
                Ok(total)
            }
        }
    }

    /// Exact partial sum at the end of the `index`-th block (0-based):
    /// the closed-form cross-check hook. Walks blocks exactly, so it is
    /// budget-capped and meant for verification, not production scale.
    pub fn boundary_partial_sum(&self, index: usize, budget: u64) -> Option<BigRational> {
        if index as u64 >= budget {
            return None;
        }
        let mut mass = BigRational::zero();
        for (i, block) in self.blocks().take(index + 1).enumerate() {
            mass += &block.value * BigRational::from_integer(block.multiplicity.clone().into());
            if i == index {
                return Some(mass);
            }
        }
        None
    }

    /// Cumulative multiplicity at the end of the `index`-th block.
    pub fn boundary_count(&self, index: usize) -> Option<BigUint> {
        let mut count = BigUint::zero();
        for (i, block) in self.blocks().take(index + 1).enumerate() {
            count += &block.multiplicity;
            if i == index {
                return Some(count);
            }
        }
        None
    }

    /// The block enumerator: strictly decreasing eigenvalues with their
    /// multiplicities. Stateless per call; direct sums merge their parts'
    /// streams and coalesce equal eigenvalues.
    pub fn blocks(&self) -> Box<dyn Iterator<Item = Block> + '_> {
        match self {
            LazySpectrum::Harmonic => Box::new((0u64..).map(|k| Block {
                value: BigRational::new(num::BigInt::one(), num::BigInt::from(k + 1)),
                multiplicity: BigUint::one(),
            })),
            LazySpectrum::DyadicB => Box::new(
                DyadicOperatorB::intervals()
                    .flat_map(|(a, end)| a..end)
                    .map(|m| Block {
                        value: BigRational::new(
                            num::BigInt::one(),
                            num::BigInt::from(BigUint::one() << m),
                        ),
                        multiplicity: BigUint::one() << m,
                    }),
            ),
            LazySpectrum::Scaled { factor, base } => {
                let factor = factor.clone();
                Box::new(base.blocks().map(move |b| Block {
                    value: &b.value * &factor,
                    multiplicity: b.multiplicity,
                }))
            }
            LazySpectrum::Finite { spectrum } => {
                let mut runs: Vec<Block> = Vec::new();
                for v in spectrum.values() {
                    if v.is_zero() {
                        break;
                    }
                    match runs.last_mut() {
                        Some(run) if run.value == *v => run.multiplicity += BigUint::one(),
                        _ => runs.push(Block {
                            value: v.clone(),
                            multiplicity: BigUint::one(),
                        }),
                    }
                }
                Box::new(runs.into_iter())
            }
            LazySpectrum::DirectSum { parts } => Box::new(MergedBlocks::new(
                parts.iter().map(|p| p.blocks()).collect(),
            )),
        }
    }
}

/// K-way merge of block streams with equal-value coalescing.
struct MergedBlocks<'a> {
    streams: Vec<std::iter::Peekable<Box<dyn Iterator<Item = Block> + 'a>>>,
}

impl<'a> MergedBlocks<'a> {
    fn new(streams: Vec<Box<dyn Iterator<Item = Block> + 'a>>) -> Self {
        MergedBlocks {
            streams: streams.into_iter().map(|s| s.peekable()).collect(),
        }
    }
}

impl Iterator for MergedBlocks<'_> {
    type Item = Block;

    fn next(&mut self) -> Option<Block> {
        let mut best: Option<(usize, BigRational)> = None;
        for (i, stream) in self.streams.iter_mut().enumerate() {
            if let Some(block) = stream.peek() {
                match &best {
                    Some((_, v)) if *v >= block.value => {}
                    _ => best = Some((i, block.value.clone())),
                }
            }
        }
        let (_, value) = best?;
        let mut multiplicity = BigUint::zero();
        for stream in &mut self.streams {
            while stream.peek().is_some_and(|b| b.value == value) {
                multiplicity += &stream.next().expect("peeked").multiplicity;
            }
        }
        Some(Block {
            value,
            multiplicity,
        })
    }
}

/// Tr(B^{1+s}) = Σ_{m∈I} 2^{-ms}: per-interval geometric sums with
/// r = 2^{-s}, stopping at the first interval whose leading term falls
/// below (error budget)·(1−r); the geometric tail bound is then rigorous.
fn dyadic_power_trace(s: f64, precision_bits: u32) -> Estimate {
    let budget = 2f64.powi(-(precision_bits.min(200) as i32));
    let one_minus_r = one_minus_exp2_neg(s);
    let cutoff = budget * one_minus_r;
    let mut acc = CompensatedSum::new();
    let mut term_bound = 0.0f64;
    let mut tail = 0.0f64;
    for j in 0.. {
        // interval [a, 2a), a = 4^j: Σ_{m=a}^{2a-1} r^m = (r^a − r^{2a})/(1−r)
        let a = 4f64.powi(j);
        let leading = exp2_neg(s * a);
        if leading < cutoff || leading == 0.0 {
            // remaining mass over I is below Σ_{m ≥ a} r^m = r^a/(1−r) ≤ budget
            tail = budget;
            break;
        }
        let term = (leading - exp2_neg(2.0 * s * a)) / one_minus_r;
        acc.add(term);
        term_bound += term * 8.0 * OP_EPS;
    }
    let sum = acc.estimate();
    Estimate::new(sum.value, sum.bound + term_bound + tail)
}

/// JSON descriptor for lazy spectra:
/// `{"type":"harmonic"}`, `{"type":"dyadic-B"}`,
/// `{"type":"scaled","factor":"n/d","base":…}`,
/// `{"type":"direct-sum","parts":[…]}`, `{"type":"finite","values":[…]}`.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(tag = "type", rename_all = "kebab-case")]
pub enum SpectrumDescriptor {
    Harmonic,
    #[serde(rename = "dyadic-B")]
    DyadicB,
    Scaled {
        factor: String,
        base: Box<SpectrumDescriptor>,
    },
    DirectSum {
        parts: Vec<SpectrumDescriptor>,
    },
    Finite {
        values: Vec<String>,
    },
}

impl SpectrumDescriptor {
    pub fn to_lazy(&self) -> Result<LazySpectrum, AsymptoticsError> {
        match self {
            SpectrumDescriptor::Harmonic => Ok(LazySpectrum::Harmonic),
            SpectrumDescriptor::DyadicB => Ok(LazySpectrum::DyadicB),
            SpectrumDescriptor::Scaled { factor, base } => {
                let f = parse_rational(factor).map_err(AsymptoticsError::Descriptor)?;
                LazySpectrum::scaled(f, base.to_lazy()?)
            }
            SpectrumDescriptor::DirectSum { parts } => Ok(LazySpectrum::direct_sum(
                parts
                    .iter()
                    .map(|p| p.to_lazy())
                    .collect::<Result<Vec<_>, _>>()?,
            )),
            SpectrumDescriptor::Finite { values } => {
                let mut parsed = Vec::with_capacity(values.len());
                for (i, v) in values.iter().enumerate() {
                    let r = parse_rational(v).map_err(|e| {
                        AsymptoticsError::Descriptor(format!("values[{i}]: {e}"))
                    })?;
                    if r.is_negative() {
                        return Err(AsymptoticsError::Descriptor(format!(
                            "values[{i}]: negative entry"
                        )));
                    }
                    parsed.push(r);
                }
                Ok(LazySpectrum::finite(
                    Spectrum::rearranged(parsed).map_err(AsymptoticsError::from)?,
                ))
            }
        }
    }

    pub fn from_lazy(spec: &LazySpectrum) -> Self {
        match spec {
            LazySpectrum::Harmonic => SpectrumDescriptor::Harmonic,
            LazySpectrum::DyadicB => SpectrumDescriptor::DyadicB,
            LazySpectrum::Scaled { factor, base } => SpectrumDescriptor::Scaled {
                factor: render_rational(factor),
                base: Box::new(Self::from_lazy(base)),
            },
            LazySpectrum::DirectSum { parts } => SpectrumDescriptor::DirectSum {
                parts: parts.iter().map(Self::from_lazy).collect(),
            },
            LazySpectrum::Finite { spectrum } => SpectrumDescriptor::Finite {
                values: spectrum.values().iter().map(render_rational).collect(),
            },
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ratio(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn harmonic_closed_forms() {
        let h = LazySpectrum::harmonic();
        assert_eq!(h.mu_at(&BigUint::zero()), BigRational::one());
        assert_eq!(h.mu_at(&BigUint::from(2u32)), ratio(1, 3));
        assert_eq!(
            h.mu_at(&BigUint::from(1_000_000u64)),
            ratio(1, 1_000_001)
        );
        assert_eq!(h.weak_l1_bound(), BigRational::one());
        // H_4 = 25/12
        let s = h.partial_sum(&BigUint::from(3u32), 10).unwrap();
        assert!((s.value - 25.0 / 12.0).abs() <= s.bound.max(1e-14));
        // spectral counts
        assert_eq!(
            h.spectral_count(&ratio(1, 4)).unwrap(),
            BigUint::from(3u32)
        );
        assert_eq!(
            h.spectral_count(&ratio(2, 7)).unwrap(),
            BigUint::from(3u32)
        );
        assert_eq!(h.spectral_count(&ratio(2, 1)).unwrap(), BigUint::zero());
    }

    #[test]
    fn dyadic_b_delegates_to_the_closed_forms() {
        let b = LazySpectrum::dyadic_b();
        assert_eq!(b.mu_at(&BigUint::zero()), ratio(1, 2));
        assert_eq!(b.mu_at(&BigUint::one()), ratio(1, 2));
        assert_eq!(b.mu_at(&BigUint::from(2u32)), ratio(1, 16));
        assert_eq!(b.weak_l1_bound(), BigRational::from_integer(2.into()));
        let s = b.partial_sum(&BigUint::from(241u32), 10).unwrap();
        assert!((s.value - 5.0).abs() <= s.bound.max(1e-12));
    }

    #[test]
    fn scaling_normalizes_and_composes() {
        let spec = LazySpectrum::scaled(ratio(1, 2), LazySpectrum::harmonic()).unwrap();
        assert_eq!(spec.mu_at(&BigUint::from(4u32)), ratio(1, 10));
        assert_eq!(spec.weak_l1_bound(), ratio(1, 2));
        // scaled(finite) folds into the finite spectrum
        let f = LazySpectrum::finite(Spectrum::from_ratios(&[(1, 2), (1, 4)]));
        let scaled = LazySpectrum::scaled(ratio(2, 1), f).unwrap();
        assert!(matches!(scaled, LazySpectrum::Finite { .. }));
        assert_eq!(scaled.mu_at(&BigUint::zero()), BigRational::one());
        // scaled(scaled) collapses
        let nested = LazySpectrum::scaled(
            ratio(3, 1),
            LazySpectrum::scaled(ratio(1, 2), LazySpectrum::dyadic_b()).unwrap(),
        )
        .unwrap();
        match &nested {
            LazySpectrum::Scaled { factor, .. } => assert_eq!(*factor, ratio(3, 2)),
            other => panic!("expected scaled, got {other:?}"),
        }
        assert!(LazySpectrum::scaled(ratio(0, 1), LazySpectrum::harmonic()).is_err());
    }

    #[test]
    fn direct_sum_with_one_infinite_part_uses_closed_forms() {
        // 1/2·A0 ⊕ (3/4 rank one): value 3/4 lands after μ(0)=1/2? No:
        // merged head is 3/4 > 1/2, so μ = (3/4, 1/2, 1/4, 1/6, …)
        let a = LazySpectrum::direct_sum(vec![
            LazySpectrum::scaled(ratio(1, 2), LazySpectrum::harmonic()).unwrap(),
            LazySpectrum::finite(Spectrum::from_ratios(&[(3, 4)])),
        ]);
        assert_eq!(a.mu_at(&BigUint::zero()), ratio(3, 4));
        assert_eq!(a.mu_at(&BigUint::one()), ratio(1, 2));
        assert_eq!(a.mu_at(&BigUint::from(2u32)), ratio(1, 4));
        assert_eq!(a.mu_at(&BigUint::from(3u32)), ratio(1, 6));
        // partial sum at N=3: 3/4 + 1/2 + 1/4 + 1/6
        let s = a.partial_sum(&BigUint::from(3u32), 10).unwrap();
        assert!((s.value - (0.75 + 0.5 + 0.25 + 1.0 / 6.0)).abs() <= s.bound.max(1e-13));
        // the N=0 prefix is entirely finite values
        let head = a.partial_sum(&BigUint::zero(), 10).unwrap();
        assert!((head.value - 0.75).abs() <= head.bound.max(1e-15));
        // the closed-form path must agree with the generic block walk
        let walk = a.partial_sum_by_walk(&BigUint::from(3u32), 100).unwrap();
        assert!((s.value - walk.value).abs() < 1e-12);
    }

    #[test]
    fn multi_infinite_direct_sums_walk_under_budget() {
        let two_harmonics = LazySpectrum::direct_sum(vec![
            LazySpectrum::harmonic(),
            LazySpectrum::scaled(ratio(1, 2), LazySpectrum::harmonic()).unwrap(),
        ]);
        // merged: 1, 1/2, 1/2, 1/3, 1/4, 1/4, 1/5, ... — μ(1) and μ(2) tie
        assert_eq!(two_harmonics.mu_at(&BigUint::one()), ratio(1, 2));
        assert_eq!(two_harmonics.mu_at(&BigUint::from(2u32)), ratio(1, 2));
        let s = two_harmonics.partial_sum(&BigUint::from(2u32), 100).unwrap();
        assert!((s.value - 2.0).abs() <= s.bound.max(1e-13));
        // budget exhaustion is an error, not a wrong answer
        let err = two_harmonics
            .partial_sum(&BigUint::from(1_000u32), 5)
            .unwrap_err();
        assert!(matches!(err, AsymptoticsError::WorkBudgetExceeded { .. }));
    }

    #[test]
    fn finite_embedding_behaves_like_the_spectrum() {
        let f = LazySpectrum::finite(Spectrum::from_ratios(&[(1, 2), (1, 2), (1, 4)]));
        assert_eq!(f.mu_at(&BigUint::from(5u32)), BigRational::zero());
        let s = f.partial_sum(&BigUint::from(100u32), 10).unwrap();
        assert!((s.value - 1.25).abs() <= s.bound.max(1e-14));
        // blocks coalesce equal values
        let blocks: Vec<Block> = f.blocks().collect();
        assert_eq!(blocks.len(), 2);
        assert_eq!(blocks[0].multiplicity, BigUint::from(2u32));
        assert!(f.is_summable());
        assert!(!LazySpectrum::harmonic().is_summable());
    }

    #[test]
    fn log_average_examples() {
        // B at N1 = 242: (5 + 2^-16)/ln(244)
        let b = LazySpectrum::dyadic_b();
        let x = b.log_average(&BigUint::from(242u32), 10).unwrap();
        let expect = (5.0 + 2f64.powi(-16)) / 244f64.ln();
        assert!((x.value - expect).abs() <= x.bound.max(1e-12));
        // harmonic at N = 10^6 is near 1 (≈ 1.0418)
        let h = LazySpectrum::harmonic();
        let x = h.log_average(&BigUint::from(1_000_000u64), 10).unwrap();
        assert!((x.value - 1.041_780_2).abs() < 1e-4);
    }

    #[test]
    fn power_trace_of_b_matches_direct_block_summation() {
        // oracle: exact rational Σ 2^{-ms} over m ∈ I ∩ [0, 192], s = 1, 2
        for s in [1u32, 2] {
            let mut oracle = BigRational::zero();
            for m in 1..=192u64 {
                if DyadicOperatorB::contains(m) {
                    oracle += BigRational::new(
                        num::BigInt::one(),
                        num::BigInt::from(BigUint::one() << (m * s as u64)),
                    );
                }
            }
            let est = LazySpectrum::dyadic_b().power_trace(s as f64, 50).unwrap();
            let oracle_f = rational_to_estimate(&oracle);
            assert!(
                (est.value - oracle_f.value).abs() <= est.bound + 1e-15,
                "s = {s}: {} vs {}",
                est.value,
                oracle_f.value
            );
        }
        // frozen: Tr(B^2) = Σ 2^{-m} ≈ 0.617218017112464
        let est = LazySpectrum::dyadic_b().power_trace(1.0, 50).unwrap();
        assert!((est.value - 0.617_218_017_112_464).abs() < 1e-12);
    }

    #[test]
    fn power_trace_composes_over_sums_and_scalings() {
        let spec = LazySpectrum::direct_sum(vec![
            LazySpectrum::scaled(ratio(1, 2), LazySpectrum::harmonic()).unwrap(),
            LazySpectrum::finite(Spectrum::from_ratios(&[(1, 4)])),
        ]);
        let est = spec.power_trace(1.0, 50).unwrap();
        let expect = 0.25 * std::f64::consts::PI.powi(2) / 6.0 + 0.0625;
        assert!((est.value - expect).abs() <= est.bound.max(1e-12));
    }

    #[test]
    fn boundary_hooks_agree_with_closed_forms() {
        let b = LazySpectrum::dyadic_b();
        // end of block index i: blocks are m = 1, 4, 5, 6, 7, 16, …
        let mass = b.boundary_partial_sum(4, 100).unwrap();
        assert_eq!(mass, BigRational::from_integer(5.into()));
        let count = b.boundary_count(4).unwrap();
        assert_eq!(count, BigUint::from(242u32));
        // agrees with the direct partial-sum closed form at the boundary
        let closed = DyadicOperatorB::partial_sum(&(count - BigUint::one()));
        assert_eq!(closed, mass);
    }

    #[test]
    fn descriptors_round_trip() {
        let spec = LazySpectrum::direct_sum(vec![
            LazySpectrum::scaled(ratio(7, 8), LazySpectrum::harmonic()).unwrap(),
            LazySpectrum::finite(Spectrum::from_ratios(&[(1, 2)])),
        ]);
        let descriptor = SpectrumDescriptor::from_lazy(&spec);
        let json = serde_json::to_string(&descriptor).unwrap();
        assert!(json.contains("direct-sum") && json.contains("harmonic"));
        let parsed: SpectrumDescriptor = serde_json::from_str(&json).unwrap();
        assert_eq!(parsed.to_lazy().unwrap(), spec);

        let b: SpectrumDescriptor = serde_json::from_str(r#"{"type":"dyadic-B"}"#).unwrap();
        assert_eq!(b.to_lazy().unwrap(), LazySpectrum::DyadicB);
        let bad: SpectrumDescriptor =
            serde_json::from_str(r#"{"type":"scaled","factor":"0","base":{"type":"harmonic"}}"#)
                .unwrap();
        assert!(bad.to_lazy().is_err());
    }
}
