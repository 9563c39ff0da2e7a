//! Sharp worst-case bounds and the optimal linear recovery method.
//!
//! Two closed forms live here. For a single sample of a process at a
//! random time `tau` over `[0, a]`, the worst-case expected error of the
//! method `a * xi_tau` is
//!
//! ```text
//! I(a/2 - t*) + I(a/2 + t*),    t* = || tau - a/2 ||_inf,
//! ```
//!
//! and this value is attained, so no method does better. For `n` samples
//! at times `tau + t_1, ..., tau + t_n` over `[0, 1]` with fixed offsets
//! `0 = t_1 < ... < t_n` and `tau + t_n <= 1` almost everywhere, the
//! optimal error is
//!
//! ```text
//! 2 * sum_{k<n} I((t_{k+1} - t_k)/2) + I(c - t*) + I(c + t*),
//! c = (1 - t_n)/2,    t* = || tau - c ||_inf,
//! ```
//!
//! attained by the weights produced by [`optimal_weights`]. The first and
//! last weight are affine in the realized trigger value, the interior
//! weights are fixed by the offsets alone.

use crate::error::{Error, Result};
use crate::modulus::Modulus;
use crate::scalar::{cst, Real};
use crate::stochastic::Envelope;

/// Deterministic measurement offsets `0 = t_1 < t_2 < ... < t_n` added to
/// the random trigger time.
#[derive(Debug, Clone, PartialEq)]
pub struct OffsetSchedule<T> {
    offsets: Vec<T>,
}

impl<T: Real> OffsetSchedule<T> {
    /// Builds a schedule; the first offset must be exactly zero and the
    /// sequence must increase strictly.
    pub fn new(offsets: Vec<T>) -> Result<Self> {
        if offsets.is_empty() {
            return Err(Error::Validation(
                "a schedule needs at least one offset".into(),
            ));
        }
        if offsets[0] != T::zero() {
            return Err(Error::Validation(format!(
                "the first offset must be exactly 0, got {}",
                offsets[0]
            )));
        }
        for w in offsets.windows(2) {
            if !w[1].is_finite() || w[1] <= w[0] {
                return Err(Error::Validation(format!(
                    "offsets must increase strictly, got {} after {}",
                    w[1], w[0]
                )));
            }
        }
        Ok(Self { offsets })
    }

    /// The single-sample schedule `(0)`.
    pub fn single() -> Self {
        Self {
            offsets: vec![T::zero()],
        }
    }

    pub fn offsets(&self) -> &[T] {
        &self.offsets
    }

    pub fn n(&self) -> usize {
        self.offsets.len()
    }

    /// The last offset `t_n`.
    pub fn last(&self) -> T {
        *self.offsets.last().expect("non-empty by construction")
    }
}

/// Weights of the optimal linear recovery method.
///
/// For `n >= 2` the first and last weight depend on the realized trigger
/// value: `c_1 = tau + first_base` and `c_n = last_base - tau`. The
/// interior weights are constants. Stored in this affine-in-`tau`
/// decomposition because that is what applying the method to data needs.
#[derive(Debug, Clone, PartialEq)]
pub enum RecoveryWeights<T> {
    /// Single-sample method: `c_1 = 1` regardless of the trigger value.
    Single,
    /// Multi-sample method with trigger-dependent end weights.
    Affine {
        first_base: T,
        mid: Vec<T>,
        last_base: T,
    },
}

impl<T: Real> RecoveryWeights<T> {
    /// Number of weights.
    pub fn n(&self) -> usize {
        match self {
            Self::Single => 1,
            Self::Affine { mid, .. } => mid.len() + 2,
        }
    }

    /// The realized weight vector for a trigger value `tau`.
    ///
    /// The weights always sum to one; they are all nonnegative whenever
    /// `tau + t_n <= 1`.
    pub fn realize(&self, tau: T) -> Vec<T> {
        match self {
            Self::Single => vec![T::one()],
            Self::Affine {
                first_base,
                mid,
                last_base,
            } => {
                let mut c = Vec::with_capacity(mid.len() + 2);
                c.push(tau + *first_base);
                c.extend_from_slice(mid);
                c.push(*last_base - tau);
                c
            }
        }
    }
}

/// Optimal weights for a schedule, per the affine decomposition above.
pub fn optimal_weights<T: Real>(sched: &OffsetSchedule<T>) -> RecoveryWeights<T> {
    let t = sched.offsets();
    let n = t.len();
    if n == 1 {
        return RecoveryWeights::Single;
    }
    let half = cst::<T>(0.5);
    let first_base = (t[1] - t[0]) * half;
    let mid: Vec<T> = (1..n - 1).map(|k| (t[k + 1] - t[k - 1]) * half).collect();
    let last_base = T::one() - (t[n - 1] + t[n - 2]) * half;
    RecoveryWeights::Affine {
        first_base,
        mid,
        last_base,
    }
}

/// Sharp worst-case expected error of recovering the integral over
/// `[0, a]` by `a * xi_tau` from one sample at the random time `tau`.
///
/// Depends on `tau` only through its envelope. The envelope must live on
/// `[0, a]`.
pub fn ostrowski_bound<T: Real>(m: &Modulus<T>, a: T, env: &Envelope<T>) -> Result<T> {
    if !a.is_finite() || a <= T::zero() {
        return Err(Error::Domain(format!(
            "interval length must be positive, got {a}"
        )));
    }
    if env.domain() != a {
        return Err(Error::Domain(format!(
            "envelope lives on [0, {}], expected [0, {a}]",
            env.domain()
        )));
    }
    let half = cst::<T>(0.5);
    let center = a * half;
    let t_star = env.sup_deviation(center);
    // center - t_star >= 0 in exact arithmetic; clamp rounding noise.
    let low = (center - t_star).max(T::zero());
    Ok(m.integral(low)? + m.integral(center + t_star)?)
}

/// Optimal recovery error for the schedule `tau + t_k` over `[0, 1]`.
///
/// Requires `M + t_n <= 1` (exact comparison), the hypothesis under which
/// the closed form holds; both antiderivative arguments then lie in
/// `[0, 1 - t_n]`.
pub fn recovery_error<T: Real>(
    m: &Modulus<T>,
    sched: &OffsetSchedule<T>,
    env: &Envelope<T>,
) -> Result<T> {
    if env.domain() != T::one() {
        return Err(Error::Domain(format!(
            "the multi-sample bound is defined on [0, 1]; envelope lives on [0, {}]",
            env.domain()
        )));
    }
    let t_n = sched.last();
    if env.sup() + t_n > T::one() {
        return Err(Error::Feasibility(format!(
            "need M + t_n <= 1, got {} + {} > 1",
            env.sup(),
            t_n
        )));
    }
    let half = cst::<T>(0.5);
    let two = cst::<T>(2.0);
    let mut acc = T::zero();
    for w in sched.offsets().windows(2) {
        acc = acc + two * m.integral((w[1] - w[0]) * half)?;
    }
    let center = (T::one() - t_n) * half;
    let t_star = env.sup_deviation(center);
    let low = (center - t_star).max(T::zero());
    Ok(acc + m.integral(low)? + m.integral(center + t_star)?)
}
