//! Pairwise (cascade) summation with a fixed association order, so that a
//! given sequence of terms always produces the same rounded result.

use core::ops::Add;

const BLOCK: usize = 8;

/// Sums `terms` by recursive halving; blocks of at most eight terms are added
/// left to right.
pub fn pairwise<T>(terms: &[T]) -> T
where
    T: Copy + Add<Output = T> + Default,
{
    if terms.len() <= BLOCK {
        let mut acc = T::default();
        for &t in terms {
            acc = acc + t;
        }
        return acc;
    }
    let mid = terms.len() / 2;
    pairwise(&terms[..mid]) + pairwise(&terms[mid..])
}
