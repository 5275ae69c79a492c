//! Heap enumeration of the sorted outer product of two nonincreasing
//! sequences. Yields products in nonincreasing order; the frontier rule
//! (advance down always, advance right only from the first row) visits
//! every index pair exactly once, so no visited-set is needed.

use super::Scalar;
use std::cmp::Ordering;
use std::collections::BinaryHeap;

struct Frontier<T> {
    value: T,
    i: usize,
    j: usize,
}

impl<T: PartialOrd> PartialEq for Frontier<T> {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl<T: PartialOrd> Eq for Frontier<T> {}

impl<T: PartialOrd> Ord for Frontier<T> {
    fn cmp(&self, other: &Self) -> Ordering {
        // larger value first; ties broken by index order so enumeration is
        // deterministic (verdicts only ever depend on the value multiset)
        self.value
            .partial_cmp(&other.value)
            .unwrap_or(Ordering::Equal)
            .then_with(|| (other.i, other.j).cmp(&(self.i, self.j)))
    }
}
impl<T: PartialOrd> PartialOrd for Frontier<T> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

pub struct TensorIter<'a, T> {
    a: &'a [T],
    b: &'a [T],
    heap: BinaryHeap<Frontier<T>>,
    remaining: usize,
}

impl<'a, T: Scalar> TensorIter<'a, T> {
    pub(super) fn new(a: &'a [T], b: &'a [T]) -> Self {
        let mut heap = BinaryHeap::new();
        let remaining = a.len().saturating_mul(b.len());
        if !a.is_empty() && !b.is_empty() {
            heap.push(Frontier {
                value: a[0].clone() * b[0].clone(),
                i: 0,
                j: 0,
            });
        }
        TensorIter {
            a,
            b,
            heap,
            remaining,
        }
    }
}

impl<T: Scalar> Iterator for TensorIter<'_, T> {
    type Item = T;

    fn next(&mut self) -> Option<T> {
        let top = self.heap.pop()?;
        self.remaining = self.remaining.saturating_sub(1);
        let Frontier { value, i, j } = top;
        if i + 1 < self.a.len() {
            self.heap.push(Frontier {
                value: self.a[i + 1].clone() * self.b[j].clone(),
                i: i + 1,
                j,
            });
        }
        if i == 0 && j + 1 < self.b.len() {
            self.heap.push(Frontier {
                value: self.a[0].clone() * self.b[j + 1].clone(),
                i: 0,
                j: j + 1,
            });
        }
        Some(value)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        (self.remaining, Some(self.remaining))
    }
}
