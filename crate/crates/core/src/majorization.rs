//! Vector majorization and the Karamata gap.
//!
//! `a` majorizes `b` when, after sorting both in descending order, every
//! prefix sum of `a` dominates the corresponding prefix sum of `b` and the
//! totals agree. For a convex `f`, Karamata's inequality then gives
//! `sum f(a_k) >= sum f(b_k)`. The optimality proofs of the placement
//! module reduce to exactly this statement, so these two functions are the
//! backbone of its tests.

use crate::error::{Error, Result};
use crate::scalar::{cst, Real};

/// Tolerance on prefix-sum comparisons and on the total-sum equality.
const MAJORIZATION_TOL: f64 = 1e-12;

/// True iff `a` majorizes `b` (equal lengths required).
pub fn majorizes<T: Real>(a: &[T], b: &[T]) -> Result<bool> {
    if a.len() != b.len() {
        return Err(Error::Domain(format!(
            "majorization needs equal lengths, got {} and {}",
            a.len(),
            b.len()
        )));
    }
    if a.iter().chain(b).any(|x| !x.is_finite()) {
        return Err(Error::Domain("majorization needs finite entries".into()));
    }
    let tol = cst::<T>(MAJORIZATION_TOL);
    let desc = |v: &[T]| {
        let mut s = v.to_vec();
        s.sort_by(|x, y| y.partial_cmp(x).expect("finite entries"));
        s
    };
    let (a, b) = (desc(a), desc(b));
    let mut pa = T::zero();
    let mut pb = T::zero();
    for k in 0..a.len() {
        pa = pa + a[k];
        pb = pb + b[k];
        if pa < pb - tol {
            return Ok(false);
        }
    }
    Ok((pa - pb).abs() <= tol)
}

/// `sum f(a_k) - sum f(b_k)` for a convex `f`, given that `a` majorizes
/// `b`; Karamata's inequality guarantees the result is nonnegative up to
/// rounding.
pub fn karamata_gap<T: Real, F: Fn(T) -> T>(f: F, a: &[T], b: &[T]) -> Result<T> {
    if !majorizes(a, b)? {
        return Err(Error::Domain("karamata_gap needs a to majorize b".into()));
    }
    let sum = |v: &[T]| v.iter().fold(T::zero(), |acc, &x| acc + f(x));
    Ok(sum(a) - sum(b))
}
