//! Catalyst search as a feasibility problem: minimize the worst prefix
//! violation v(c) = max_n [Σ_{k≤n} μ(k, b⊗c) − Σ_{k≤n} μ(k, a⊗c)]₊ over
//! the d-simplex, for d = 1..max_dim.
//!
//! The objective is piecewise linear but nonconvex in the sorted order, so
//! the search is a bounded heuristic: a coarse rational grid, coordinate
//! descent with shrinking rational steps, then seeded random restarts.
//! Every candidate is evaluated exactly, so a returned certificate is
//! always sound; "not found" is never a nonexistence proof (except for
//! the exact sup-norm obstruction, which is).

use super::{verify_catalysis, CatalysisCertificate};
use crate::{Rational, Spectrum};
use num::{BigInt, One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

#[derive(Clone, Copy, Debug, Serialize)]
pub struct SearchOptions {
    /// Largest catalyst dimension tried (1..=max_dim).
    pub max_dim: usize,
    /// Exact objective evaluations allowed, shared across dimensions.
    pub budget: u64,
    /// Seed for the random-restart phase; the outcome is a deterministic
    /// function of (inputs, options).
    pub seed: u64,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            max_dim: 6,
            budget: 20_000,
            seed: 0,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SearchMeta {
    pub method: &'static str,
    pub dimension: usize,
    pub evaluations: u64,
    pub budget: u64,
    pub seed: u64,
}

/// Search result: the certificate when a catalyst was found, plus the
/// evidence trail either way.
#[derive(Debug)]
pub struct SearchOutcome {
    pub certificate: Option<CatalysisCertificate>,
    pub evaluations: u64,
    /// Best (smallest) violation seen per dimension, as floats for display.
    pub best_violation_per_dim: Vec<(usize, f64)>,
    /// Set when an exact necessary condition already rules out every
    /// catalyst (‖b‖∞ > ‖a‖∞), in which case no search ran.
    pub obstruction: Option<String>,
}

/// Worst prefix violation of b⊗c ≺≺ a⊗c, exact. Zero iff c catalyzes.
fn violation(a: &Spectrum, b: &Spectrum, c: &Spectrum) -> Rational {
    let ac = a.tensor(c).expect("search catalysts are small");
    let bc = b.tensor(c).expect("search catalysts are small");
    let n = ac.len().max(bc.len());
    let mut worst = Rational::zero();
    let mut run_a = Rational::zero();
    let mut run_b = Rational::zero();
    for k in 0..n {
        run_a += ac.mu(k);
        run_b += bc.mu(k);
        let gap = &run_b - &run_a;
        if gap > worst {
            worst = gap;
        }
    }
    worst
}

fn simplex_point(numerators: &[u64]) -> Spectrum {
    let total: u64 = numerators.iter().sum();
    let values: Vec<Rational> = numerators
        .iter()
        .map(|&n| Rational::new(BigInt::from(n), BigInt::from(total)))
        .collect();
    Spectrum::rearranged(values).expect("rationals are finite")
}

/// Nonincreasing positive compositions of `total` into exactly `dim` parts.
fn partitions(total: u64, dim: usize) -> Vec<Vec<u64>> {
    fn rec(remaining: u64, parts: usize, cap: u64, prefix: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
        if parts == 1 {
            if remaining >= 1 && remaining <= cap {
                let mut p = prefix.clone();
                p.push(remaining);
                out.push(p);
            }
            return;
        }
        let min_first = remaining.div_ceil(parts as u64);
        let max_first = (remaining - (parts as u64 - 1)).min(cap);
        for first in (min_first..=max_first).rev() {
            prefix.push(first);
            rec(remaining - first, parts - 1, first, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(total, dim, total, &mut Vec::new(), &mut out);
    out
}

struct Evaluator<'a> {
    a: &'a Spectrum,
    b: &'a Spectrum,
    evaluations: u64,
    budget: u64,
    best: Rational,
}

impl Evaluator<'_> {
    fn spent(&self) -> bool {
        self.evaluations >= self.budget
    }

    /// One exact objective evaluation, charged against the budget.
    fn eval(&mut self, c: &Spectrum) -> Rational {
        self.evaluations += 1;
        let v = violation(self.a, self.b, c);
        if v < self.best {
            self.best = v.clone();
        }
        v
    }
}

/// Search for a catalyst of dimension ≤ max_dim. Deterministic for fixed
/// (inputs, budget, seed); returns the first success in candidate order.
/// Running pm/strict checks first is advisable: they are cheap necessary
/// evidence, while the search only proves existence.
pub fn find_catalyst(a: &Spectrum, b: &Spectrum, options: &SearchOptions) -> SearchOutcome {
    let mut outcome = SearchOutcome {
        certificate: None,
        evaluations: 0,
        best_violation_per_dim: Vec::new(),
        obstruction: None,
    };

    // exact p → ∞ necessary condition: μ(0, b⊗c) ≤ μ(0, a⊗c) for any c
    if b.sup_norm() > a.sup_norm() {
        outcome.obstruction = Some(
            "sup-norm obstruction: ‖b‖∞ > ‖a‖∞ exactly, so no catalyst exists in any dimension"
                .to_string(),
        );
        return outcome;
    }

    let mut rng = ChaCha8Rng::seed_from_u64(options.seed);
    let mut ev = Evaluator {
        a,
        b,
        evaluations: 0,
        budget: options.budget,
        best: Rational::from_integer(BigInt::from(i64::MAX)),
    };

    for dim in 1..=options.max_dim {
        ev.best = Rational::from_integer(BigInt::from(i64::MAX));

        // coarse rational grid on the sorted simplex
        let resolution = 2 * dim as u64 + 8;
        let mut starts: Vec<(Rational, Spectrum)> = Vec::new();
        for numerators in partitions(resolution, dim) {
            if ev.spent() {
                break;
            }
            let c = simplex_point(&numerators);
            let v = ev.eval(&c);
            if v.is_zero() {
                return finish_with(outcome, &ev, dim, &c, options.seed);
            }
            starts.push((v, c));
        }
        starts.sort_by(|(va, _), (vb, _)| va.cmp(vb));
        starts.truncate(3);

        // coordinate descent with shrinking rational steps
        for (v0, start) in &starts {
            let mut current = start.clone();
            let mut current_v = v0.clone();
            let mut step = Rational::new(BigInt::one(), BigInt::from(resolution));
            let min_step = &step / Rational::from_integer(BigInt::from(1u64 << 12));
            while step > min_step && !ev.spent() {
                let mut improved = false;
                for i in 0..current.len() {
                    for j in 0..current.len() {
                        if i == j || ev.spent() {
                            continue;
                        }
                        let vals = current.values();
                        if vals[i] <= step {
                            continue; // keep entries positive
                        }
                        let mut moved: Vec<Rational> = vals.to_vec();
                        moved[i] = &moved[i] - &step;
                        moved[j] = &moved[j] + &step;
                        let candidate =
                            Spectrum::rearranged(moved).expect("rationals are finite");
                        let v = ev.eval(&candidate);
                        if v.is_zero() {
                            return finish_with(outcome, &ev, dim, &candidate, options.seed);
                        }
                        if v < current_v {
                            current = candidate;
                            current_v = v;
                            improved = true;
                        }
                    }
                }
                if !improved {
                    step = &step / Rational::from_integer(BigInt::from(2));
                }
            }
        }

        // seeded random restarts with a per-dimension slice of the budget
        let restarts = ((options.budget / (4 * options.max_dim as u64)) as usize).min(200);
        for _ in 0..restarts {
            if ev.spent() {
                break;
            }
            let numerators: Vec<u64> =
                (0..dim).map(|_| rng.gen_range(1..=4 * resolution)).collect();
            let c = simplex_point(&numerators);
            let v = ev.eval(&c);
            if v.is_zero() {
                return finish_with(outcome, &ev, dim, &c, options.seed);
            }
        }

        outcome
            .best_violation_per_dim
            .push((dim, rational_to_f64(&ev.best)));
        if ev.spent() {
            break;
        }
    }

    outcome.evaluations = ev.evaluations;
    outcome
}

fn finish_with(
    mut outcome: SearchOutcome,
    ev: &Evaluator,
    dim: usize,
    c: &Spectrum,
    seed: u64,
) -> SearchOutcome {
    let mut cert = verify_catalysis(ev.a, ev.b, c).expect("nonzero candidate");
    assert!(cert.valid, "exact recheck must confirm a zero violation");
    cert.search_meta = Some(SearchMeta {
        method: "grid+coordinate-descent",
        dimension: c.len(),
        evaluations: ev.evaluations,
        budget: ev.budget,
        seed,
    });
    outcome.certificate = Some(cert);
    outcome.evaluations = ev.evaluations;
    outcome.best_violation_per_dim.push((dim, 0.0));
    outcome
}

fn rational_to_f64(r: &Rational) -> f64 {
    crate::numeric::rational_to_estimate(r).value
}
