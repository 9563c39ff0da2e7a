//! Optimal design of the measurement schedule.
//!
//! Two regimes are covered. When the measurement times are free, the
//! optimal deterministic times are uniform, `(2k - 1) / (2n)`, with value
//! `2n * I(1/(2n))`; randomizing the times cannot beat this. When the
//! first measurement is triggered at a random time `tau` with envelope
//! `(m, M)` and only the offsets `t_2, ..., t_n` are free, the optimum
//! splits into three cases on the envelope:
//!
//! * case A, `(2n-1) m + M >= 1`: value `(2n-1) I((1-M)/(2n-1)) + I(M)`,
//!   offsets `t_k = 2 (k-1) (1-M) / (2n-1)`;
//! * case B, `(2n-1) M + m <= 1`: the mirror image with `m` in place of
//!   `M`;
//! * case C, neither: value `(2n-2) I((1-m-M)/(2n-2)) + I(m) + I(M)`,
//!   offsets `t_k = (k-1) (1-m-M) / (n-1)` (needs `n >= 2`; `n = 1` always
//!   lands in A or B).
//!
//! When both A and B hold the formulas coincide and case A is reported.
//! [`numeric_search`] is an independent grid-plus-refinement minimizer of
//! [`recovery_error`] over feasible schedules, used to certify the closed
//! forms on small instances.

use crate::error::{Error, Result};
use crate::modulus::Modulus;
use crate::recovery::{recovery_error, OffsetSchedule};
use crate::scalar::{cst, from_usize, Real};
use crate::stochastic::Envelope;

/// Which optimum produced a [`PlacementResult`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PlacementCase {
    Uniform,
    CaseA,
    CaseB,
    CaseC,
}

impl PlacementCase {
    pub fn label(&self) -> &'static str {
        match self {
            Self::Uniform => "uniform",
            Self::CaseA => "case_A",
            Self::CaseB => "case_B",
            Self::CaseC => "case_C",
        }
    }
}

/// The realized measurement times of an optimal design.
#[derive(Debug, Clone, PartialEq)]
pub enum TimesDescription<T> {
    /// Deterministic times.
    Fixed(Vec<T>),
    /// Times `tau + t_k` for a random trigger with the given envelope.
    TriggerOffset {
        envelope: Envelope<T>,
        offsets: Vec<T>,
    },
}

/// An optimal schedule together with its worst-case value.
#[derive(Debug, Clone)]
pub struct PlacementResult<T> {
    pub case: PlacementCase,
    pub offsets: OffsetSchedule<T>,
    pub value: T,
    pub times: TimesDescription<T>,
}

/// Optimal deterministic design with `n` free measurement times on
/// `[0, 1]`: value `2n * I(1/(2n))` at times `(2k - 1)/(2n)`.
pub fn uniform_optimal<T: Real>(m: &Modulus<T>, n: usize) -> Result<PlacementResult<T>> {
    if n == 0 {
        return Err(Error::Domain("at least one measurement is required".into()));
    }
    let nn = from_usize::<T>(n);
    let two = cst::<T>(2.0);
    let half_gap = (two * nn).recip();
    let value = two * nn * m.integral(half_gap)?;
    let offsets: Vec<T> = (0..n).map(|k| from_usize::<T>(k) / nn).collect();
    let times: Vec<T> = (1..=n)
        .map(|k| from_usize::<T>(2 * k - 1) * half_gap)
        .collect();
    Ok(PlacementResult {
        case: PlacementCase::Uniform,
        offsets: OffsetSchedule::new(offsets)?,
        value,
        times: TimesDescription::Fixed(times),
    })
}

/// Case-A value `(2n-1) I((1-M)/(2n-1)) + I(M)`, evaluated as a formula.
pub fn case_a_value<T: Real>(m: &Modulus<T>, n: usize, env_sup: T) -> Result<T> {
    let d = from_usize::<T>(2 * n - 1);
    Ok(d * m.integral(((T::one() - env_sup) / d).max(T::zero()))? + m.integral(env_sup)?)
}

/// Case-B value `(2n-1) I((1-m)/(2n-1)) + I(m)`, evaluated as a formula.
pub fn case_b_value<T: Real>(m: &Modulus<T>, n: usize, env_inf: T) -> Result<T> {
    let d = from_usize::<T>(2 * n - 1);
    Ok(d * m.integral(((T::one() - env_inf) / d).max(T::zero()))? + m.integral(env_inf)?)
}

/// Case-C value `(2n-2) I((1-m-M)/(2n-2)) + I(m) + I(M)`, evaluated as a
/// formula; requires `n >= 2`.
pub fn case_c_value<T: Real>(m: &Modulus<T>, n: usize, env_inf: T, env_sup: T) -> Result<T> {
    if n < 2 {
        return Err(Error::Domain("the middle case needs n >= 2".into()));
    }
    let d = from_usize::<T>(2 * n - 2);
    let gap = ((T::one() - env_inf - env_sup) / d).max(T::zero());
    Ok(d * m.integral(gap)? + m.integral(env_inf)? + m.integral(env_sup)?)
}

/// Optimal offsets `t_2, ..., t_n` for a trigger time with envelope `env`
/// on `[0, 1]`, by the three-case trichotomy.
pub fn triggered_optimal<T: Real>(
    m: &Modulus<T>,
    n: usize,
    env: &Envelope<T>,
) -> Result<PlacementResult<T>> {
    if n == 0 {
        return Err(Error::Domain("at least one measurement is required".into()));
    }
    if env.domain() != T::one() {
        return Err(Error::Domain(format!(
            "trigger optimization is defined on [0, 1]; envelope lives on [0, {}]",
            env.domain()
        )));
    }
    let (lo, hi) = (env.inf(), env.sup());
    let d = from_usize::<T>(2 * n - 1);
    let two = cst::<T>(2.0);

    // Case A first: on the overlap with case B the two formulas coincide.
    let (case, value, step) = if d * lo + hi >= T::one() {
        if n >= 2 && hi >= T::one() {
            return Err(Error::Feasibility(
                "no strictly increasing schedule fits when the trigger can reach 1".into(),
            ));
        }
        (
            PlacementCase::CaseA,
            case_a_value(m, n, hi)?,
            two * (T::one() - hi) / d,
        )
    } else if d * hi + lo <= T::one() {
        (
            PlacementCase::CaseB,
            case_b_value(m, n, lo)?,
            two * (T::one() - lo) / d,
        )
    } else {
        assert!(n >= 2, "n = 1 always satisfies m + M >= 1 or m + M <= 1");
        let gap = (T::one() - lo - hi) / from_usize::<T>(n - 1);
        (PlacementCase::CaseC, case_c_value(m, n, lo, hi)?, gap)
    };

    let offsets: Vec<T> = (0..n).map(|k| from_usize::<T>(k) * step).collect();
    let offsets = OffsetSchedule::new(offsets)?;
    Ok(PlacementResult {
        case,
        value,
        times: TimesDescription::TriggerOffset {
            envelope: *env,
            offsets: offsets.offsets().to_vec(),
        },
        offsets,
    })
}

/// Grid search plus local coordinate refinement over feasible schedules;
/// an oracle for the closed-form optima, limited to `n <= 4`.
///
/// Every candidate is evaluated through [`recovery_error`], so the
/// returned value can only overshoot the true optimum, never undershoot
/// it beyond rounding. Evaluation order is fixed, so the result is
/// deterministic.
pub fn numeric_search<T: Real>(
    m: &Modulus<T>,
    n: usize,
    env: &Envelope<T>,
    resolution: T,
) -> Result<(OffsetSchedule<T>, T)> {
    if n == 0 || n > 4 {
        return Err(Error::Domain(format!(
            "grid search supports 1 <= n <= 4, got {n}"
        )));
    }
    if !resolution.is_finite() || resolution <= T::zero() || resolution > cst(0.1) {
        return Err(Error::Domain(format!(
            "resolution must lie in (0, 0.1], got {resolution}"
        )));
    }
    if env.sup() >= T::one() {
        return Err(Error::Feasibility(format!(
            "no feasible schedule: the trigger reaches {} >= 1",
            env.sup()
        )));
    }

    if n == 1 {
        let sched = OffsetSchedule::single();
        let value = recovery_error(m, &sched, env)?;
        return Ok((sched, value));
    }

    // t_n may not exceed 1 - M; shrink the budget below the exact bound if
    // rounding pushed it over.
    let mut budget = T::one() - env.sup();
    for _ in 0..4 {
        if env.sup() + budget <= T::one() {
            break;
        }
        budget = budget * cst(0.999_999_999_999);
    }

    let mut candidates: Vec<T> = Vec::new();
    let mut j = 1usize;
    loop {
        let t = from_usize::<T>(j) * resolution;
        if t > budget {
            break;
        }
        candidates.push(t);
        j += 1;
    }
    if candidates.last().is_none_or(|&t| t < budget) {
        candidates.push(budget);
    }

    let eval = |offsets: &[T]| -> Result<T> {
        recovery_error(m, &OffsetSchedule::new(offsets.to_vec())?, env)
    };

    let mut best: Option<(Vec<T>, T)> = None;
    let free = n - 1;
    if candidates.len() >= free {
        let mut idx: Vec<usize> = (0..free).collect();
        loop {
            let mut offsets = Vec::with_capacity(n);
            offsets.push(T::zero());
            offsets.extend(idx.iter().map(|&i| candidates[i]));
            let value = eval(&offsets)?;
            if best.as_ref().is_none_or(|(_, v)| value < *v) {
                best = Some((offsets, value));
            }
            if !next_combination(&mut idx, candidates.len()) {
                break;
            }
        }
    }
    let (mut offsets, mut value) = match best {
        Some(b) => b,
        None => {
            // Budget finer than the resolution: seed with an even subdivision.
            let mut offsets = Vec::with_capacity(n);
            for k in 0..n {
                offsets.push(from_usize::<T>(k) * budget / from_usize::<T>(n - 1));
            }
            let value = eval(&offsets)?;
            (offsets, value)
        }
    };

    // Coordinate refinement: halve the step 20 times, sweeping until no
    // move improves at the current step.
    let mut step = resolution;
    let half = cst::<T>(0.5);
    for _ in 0..=20 {
        loop {
            let mut improved = false;
            for k in 1..n {
                for dir in [step, -step] {
                    let t = offsets[k] + dir;
                    let lo_ok = t > offsets[k - 1];
                    let hi_ok = if k + 1 < n {
                        t < offsets[k + 1]
                    } else {
                        env.sup() + t <= T::one()
                    };
                    if !(t.is_finite() && lo_ok && hi_ok) {
                        continue;
                    }
                    let prev = offsets[k];
                    offsets[k] = t;
                    let v = eval(&offsets)?;
                    if v < value {
                        value = v;
                        improved = true;
                    } else {
                        offsets[k] = prev;
                    }
                }
            }
            if !improved {
                break;
            }
        }
        step = step * half;
    }

    Ok((OffsetSchedule::new(offsets)?, value))
}

/// Advances `idx` to the next strictly increasing combination drawn from
/// `0..len`; returns false once exhausted.
fn next_combination(idx: &mut [usize], len: usize) -> bool {
    let k = idx.len();
    for i in (0..k).rev() {
        if idx[i] < len - (k - i) {
            idx[i] += 1;
            for j in i + 1..k {
                idx[j] = idx[j - 1] + 1;
            }
            return true;
        }
    }
    false
}
