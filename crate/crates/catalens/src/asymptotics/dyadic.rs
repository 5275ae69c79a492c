//! The dyadic index set I = ∪_{n≥0} [2^{2n}, 2^{2n+1}) and the block
//! operator built on it: eigenvalue 2^{-m} with multiplicity 2^m for each
//! m ∈ I. Every block carries exactly unit mass, which is what makes the
//! log-averaged partial sums of this operator oscillate.
//!
//! All counting here is exact; intervals are walked as whole units so the
//! cost of reaching position N is O(log log N) big-integer operations.

use num::{BigRational, BigUint, One, Signed, Zero};

/// The operator determined by the fixed index set I. Stateless; all
/// structure is in the associated functions.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct DyadicOperatorB;

impl DyadicOperatorB {
    /// Membership test: m ∈ I iff m ≥ 1 and ⌊log₂ m⌋ is even.
    pub fn contains(m: u64) -> bool {
        m >= 1 && m.ilog2().is_multiple_of(2)
    }

    /// The intervals [4^j, 2·4^j) composing I, for j = 0, 1, 2, …
    /// Bounds are u64; the iterator ends before overflow (j ≤ 30), far
    /// beyond any prefix that could ever be walked.
    pub fn intervals() -> impl Iterator<Item = (u64, u64)> {
        (0u32..=30).map(|j| {
            let a = 1u64 << (2 * j);
            (a, 2 * a)
        })
    }

    /// card(I ∩ [0, m]), exact.
    pub fn members_upto(m: u64) -> u64 {
        let mut count = 0;
        for (a, end) in Self::intervals() {
            if a > m {
                break;
            }
            count += (m + 1).min(end) - a;
        }
        count
    }

    /// card(I ∩ [0, 2^{2n+1})) = (2/3)·2^{2n+1} − 1/3 = (4^{n+1} − 1)/3:
    /// the number of unit-mass blocks completed by interval n.
    pub fn unit_mass_blocks(n: u32) -> BigUint {
        ((BigUint::one() << (2 * (n + 1))) - BigUint::one()) / BigUint::from(3u32)
    }

    /// Σ_{m ∈ I, m < 2^{2n+1}} 2^m: the number of eigenvalues above the
    /// cut 2^{-2^{2n+1}}, i.e. the spectral count at the end of interval n.
    /// This integer has about 2^{2n+1} bits.
    pub fn interval_end_count(n: u32) -> BigUint {
        let mut total = BigUint::zero();
        for j in 0..=n {
            let a = 1u64 << (2 * j);
            total += (BigUint::one() << (2 * a)) - (BigUint::one() << a);
        }
        total
    }

    /// Number of eigenvalues strictly above `threshold`, exact.
    pub fn count_above(threshold: &BigRational) -> BigUint {
        assert!(threshold.is_positive(), "threshold must be positive");
        let num = threshold.numer().magnitude();
        let den = threshold.denom().magnitude();
        // largest m >= 0 with num · 2^m < den (i.e. 2^{-m} > threshold)
        let (nb, db) = (num.bits(), den.bits());
        if nb > db || (nb == db && num >= den) {
            return BigUint::zero();
        }
        let shift = db - nb;
        let m_max = if (num << shift) < *den { shift } else { shift - 1 };
        let mut total = BigUint::zero();
        for (a, end) in Self::intervals() {
            if a > m_max {
                break;
            }
            let top = end.min(m_max + 1);
            total += (BigUint::one() << top) - (BigUint::one() << a);
        }
        total
    }

    /// k-th singular value: 2^{-m} for the block containing position k.
    pub fn mu_at(k: &BigUint) -> BigRational {
        let target = k + BigUint::one();
        let mut cumulative = BigUint::zero();
        for (a, end) in Self::intervals() {
            let interval_count = (BigUint::one() << end) - (BigUint::one() << a);
            if &cumulative + &interval_count < target {
                cumulative += interval_count;
                continue;
            }
            // inside interval [a, end): cumulative count through block m is
            // cumulative + 2^{m+1} − 2^a; find the smallest such m covering k
            let need = &target - &cumulative + (BigUint::one() << a);
            let m_plus_1 = if need.count_ones() == 1 {
                need.bits() - 1
            } else {
                need.bits()
            };
            let m = (m_plus_1 - 1).clamp(a, end - 1);
            return BigRational::new(
                num::BigInt::one(),
                num::BigInt::from(BigUint::one() << m),
            );
        }
        unreachable!("prefix walk exceeded interval table");
    }

    /// Exact Σ_{k=0}^{n} μ(k, B). Whole blocks contribute unit mass, whole
    /// intervals are consumed in one step, and a final partial block
    /// contributes (taken count)·2^{-m}; cost is O(log log n).
    pub fn partial_sum(n: &BigUint) -> BigRational {
        let mut remaining = n + BigUint::one(); // values still to take
        let mut mass = BigRational::zero();
        for (a, end) in Self::intervals() {
            let interval_count = (BigUint::one() << end) - (BigUint::one() << a);
            if remaining >= interval_count {
                // all (end − a) blocks of the interval, unit mass each
                mass += BigRational::from_integer(num::BigInt::from(end - a));
                remaining -= &interval_count;
                if remaining.is_zero() {
                    return mass;
                }
                continue;
            }
            // the prefix ends inside this interval; cumulative count through
            // block m is 2^{m+1} − 2^a, so complete blocks reach m_full with
            // 2^{m_full+1} ≤ remaining + 2^a
            let need = &remaining + (BigUint::one() << a);
            let fl = need.bits() - 1; // floor log2
            if fl <= a {
                // not even block a completes
                return mass
                    + BigRational::new(
                        num::BigInt::from(remaining),
                        num::BigInt::from(BigUint::one() << a),
                    );
            }
            let m_full = fl - 1;
            let taken = (BigUint::one() << (m_full + 1)) - (BigUint::one() << a);
            mass += BigRational::from_integer(num::BigInt::from(m_full - a + 1));
            remaining -= &taken;
            if remaining.is_zero() {
                return mass;
            }
            return mass
                + BigRational::new(
                    num::BigInt::from(remaining),
                    num::BigInt::from(BigUint::one() << (m_full + 1)),
                );
        }
        unreachable!("prefix walk exceeded interval table");
    }
}
