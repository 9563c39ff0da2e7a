//! Concave moduli of continuity and their antiderivatives.
//!
//! A modulus of continuity is a continuous non-decreasing concave function
//! `omega` with `omega(0) = 0`. Every worst-case formula in this crate is
//! expressed through `omega` and its antiderivative `I(t) = integral of
//! omega over [0, t]`, which is convex because `omega` is non-decreasing.
//!
//! Four families are supported:
//!
//! * `linear`: `omega(t) = K t`,
//! * `hoelder`: `omega(t) = K t^alpha` with `alpha` in `(0, 1]`,
//! * `piecewise_linear_concave`: linear interpolation of breakpoints with
//!   an exact trapezoid antiderivative,
//! * `tabulated`: linear interpolation of samples with an adaptive-Simpson
//!   antiderivative.
//!
//! Beyond the last breakpoint of a list-backed family the modulus is
//! extended by the constant value at the last breakpoint, which keeps both
//! monotonicity and concavity.

use crate::error::{Error, Result};
use crate::scalar::{cst, from_usize, Real};

/// Number of equispaced probe points used by [`Modulus::validate`].
const PROBE_POINTS: usize = 1024;
/// Right end of the probe interval.
const PROBE_SPAN: f64 = 2.0;
/// Slack allowed when checking midpoint concavity on the probe grid.
const CONCAVITY_TOL: f64 = 1e-9;
/// Absolute tolerance target of the adaptive quadrature, scaled by `max(1, t)`.
const QUAD_TOL: f64 = 1e-10;
/// Recursion cap for the adaptive quadrature.
const QUAD_MAX_DEPTH: u32 = 48;
/// Bisections required before the local error estimate may stop the
/// recursion; guards against coincidental cancellation in the estimator.
const QUAD_MIN_DEPTH: u32 = 2;

/// A concave modulus of continuity.
///
/// Values are immutable after construction and all operations are pure, so
/// a `Modulus` can be shared freely across threads.
#[derive(Debug, Clone)]
pub struct Modulus<T> {
    kind: Kind<T>,
}

#[derive(Debug, Clone)]
enum Kind<T> {
    Linear { slope: T },
    Hoelder { scale: T, exponent: T },
    PiecewiseLinear { points: Vec<(T, T)> },
    Tabulated { samples: Vec<(T, T)> },
}

/// Outcome of [`Modulus::validate`].
#[derive(Debug, Clone)]
pub struct ValidationReport<T> {
    /// True when no property was violated on the probe grid.
    pub pass: bool,
    /// First violated property in scan order (origin, monotonicity,
    /// concavity), if any.
    pub violation: Option<Violation<T>>,
}

/// A violated class property, with the witnessing probe points.
#[derive(Debug, Clone, PartialEq)]
pub enum Violation<T> {
    /// `omega(0)` is not zero.
    OriginNotZero { value: T },
    /// `omega` decreases between two probe points `t < s`.
    NotNondecreasing { t: T, s: T, omega_t: T, omega_s: T },
    /// Midpoint concavity fails for the pair `t < s`.
    NotMidpointConcave {
        t: T,
        s: T,
        midpoint_value: T,
        chord_value: T,
    },
}

impl<T: Real> Modulus<T> {
    /// `omega(t) = slope * t`.
    pub fn linear(slope: T) -> Result<Self> {
        if !slope.is_finite() || slope < T::zero() {
            return Err(Error::Validation(format!(
                "linear modulus needs a finite nonnegative slope, got {slope}"
            )));
        }
        Ok(Self {
            kind: Kind::Linear { slope },
        })
    }

    /// `omega(t) = scale * t^exponent` with `exponent` in `(0, 1]`.
    pub fn hoelder(scale: T, exponent: T) -> Result<Self> {
        if !scale.is_finite() || scale < T::zero() {
            return Err(Error::Validation(format!(
                "hoelder modulus needs a finite nonnegative scale, got {scale}"
            )));
        }
        if !exponent.is_finite() || exponent <= T::zero() || exponent > T::one() {
            return Err(Error::Validation(format!(
                "hoelder exponent must lie in (0, 1], got {exponent}"
            )));
        }
        Ok(Self {
            kind: Kind::Hoelder { scale, exponent },
        })
    }

    /// Piecewise-linear modulus through `points`, extended by a constant
    /// beyond the last breakpoint. The antiderivative is an exact trapezoid
    /// sum.
    pub fn piecewise_linear(points: Vec<(T, T)>) -> Result<Self> {
        check_breakpoints(&points)?;
        Ok(Self {
            kind: Kind::PiecewiseLinear { points },
        })
    }

    /// Tabulated modulus: linear interpolation of `samples`, constant
    /// beyond the last sample. The antiderivative is computed by adaptive
    /// quadrature.
    pub fn tabulated(samples: Vec<(T, T)>) -> Result<Self> {
        check_breakpoints(&samples)?;
        Ok(Self {
            kind: Kind::Tabulated { samples },
        })
    }

    /// Evaluates `omega(t)` for `t >= 0`.
    pub fn eval(&self, t: T) -> Result<T> {
        if !t.is_finite() || t < T::zero() {
            return Err(Error::Domain(format!(
                "modulus argument must be a nonnegative real, got {t}"
            )));
        }
        Ok(self.eval_unchecked(t))
    }

    /// `omega(t)` without the sign check; callers guarantee `t >= 0`.
    pub(crate) fn eval_unchecked(&self, t: T) -> T {
        match &self.kind {
            Kind::Linear { slope } => *slope * t,
            Kind::Hoelder { scale, exponent } => *scale * t.powf(*exponent),
            Kind::PiecewiseLinear { points } | Kind::Tabulated { samples: points } => {
                interp_points(points, t)
            }
        }
    }

    /// `I(t)`, the integral of `omega` over `[0, t]`.
    ///
    /// Closed forms for `linear` and `hoelder`, exact trapezoid sums for
    /// `piecewise_linear`, adaptive quadrature for `tabulated`.
    pub fn integral(&self, t: T) -> Result<T> {
        if !t.is_finite() || t < T::zero() {
            return Err(Error::Domain(format!(
                "integral bound must be a nonnegative real, got {t}"
            )));
        }
        Ok(match &self.kind {
            Kind::Linear { slope } => *slope * t * t / cst(2.0),
            Kind::Hoelder { scale, exponent } => {
                let p = *exponent + T::one();
                *scale * t.powf(p) / p
            }
            Kind::PiecewiseLinear { points } => integral_points(points, t),
            Kind::Tabulated { .. } => self.integral_by_quadrature(t)?,
        })
    }

    /// `I(t)` through the adaptive Simpson path, for any family.
    ///
    /// This is the numeric route the `tabulated` family uses; for the
    /// closed-form families it serves as an independent cross-check.
    /// Breakpoints split the integration range, so the integrand is smooth
    /// inside every segment the estimator sees.
    pub fn integral_by_quadrature(&self, t: T) -> Result<T> {
        if !t.is_finite() || t < T::zero() {
            return Err(Error::Domain(format!(
                "integral bound must be a nonnegative real, got {t}"
            )));
        }
        if t == T::zero() {
            return Ok(T::zero());
        }
        let mut cuts: Vec<T> = vec![T::zero()];
        if let Kind::PiecewiseLinear { points } | Kind::Tabulated { samples: points } = &self.kind {
            cuts.extend(
                points
                    .iter()
                    .map(|&(tk, _)| tk)
                    .filter(|&tk| tk > T::zero() && tk < t),
            );
        }
        cuts.push(t);
        let tol = cst::<T>(QUAD_TOL) * T::one().max(t);
        let mut acc = T::zero();
        for w in cuts.windows(2) {
            let segment_tol = tol * (w[1] - w[0]) / t;
            acc = acc + adaptive_simpson(&|s| self.eval_unchecked(s), w[0], w[1], segment_tol);
        }
        Ok(acc)
    }

    /// Checks the class properties on a deterministic probe grid:
    /// `PROBE_POINTS` equispaced points on `[0, PROBE_SPAN]` plus all
    /// breakpoints. Failures are reported, not thrown.
    pub fn validate(&self) -> ValidationReport<T> {
        let probe = self.probe_grid();
        let values: Vec<T> = probe.iter().map(|&t| self.eval_unchecked(t)).collect();

        let origin = self.eval_unchecked(T::zero());
        if origin != T::zero() {
            return ValidationReport {
                pass: false,
                violation: Some(Violation::OriginNotZero { value: origin }),
            };
        }

        for w in 0..probe.len().saturating_sub(1) {
            if values[w] > values[w + 1] {
                return ValidationReport {
                    pass: false,
                    violation: Some(Violation::NotNondecreasing {
                        t: probe[w],
                        s: probe[w + 1],
                        omega_t: values[w],
                        omega_s: values[w + 1],
                    }),
                };
            }
        }

        let tol = cst::<T>(CONCAVITY_TOL);
        let half = cst::<T>(0.5);
        for i in 0..probe.len() {
            for j in (i + 1)..probe.len() {
                let mid = (probe[i] + probe[j]) * half;
                let chord = (values[i] + values[j]) * half;
                let at_mid = self.eval_unchecked(mid);
                if at_mid < chord - tol {
                    return ValidationReport {
                        pass: false,
                        violation: Some(Violation::NotMidpointConcave {
                            t: probe[i],
                            s: probe[j],
                            midpoint_value: at_mid,
                            chord_value: chord,
                        }),
                    };
                }
            }
        }

        ValidationReport {
            pass: true,
            violation: None,
        }
    }

    fn probe_grid(&self) -> Vec<T> {
        let span = cst::<T>(PROBE_SPAN);
        let denom = from_usize::<T>(PROBE_POINTS - 1);
        let mut probe: Vec<T> = (0..PROBE_POINTS)
            .map(|i| span * from_usize(i) / denom)
            .collect();
        if let Kind::PiecewiseLinear { points } | Kind::Tabulated { samples: points } = &self.kind {
            probe.extend(points.iter().map(|&(t, _)| t));
        }
        probe.sort_by(|a, b| a.partial_cmp(b).expect("finite probe points"));
        probe.dedup_by(|a, b| a == b);
        probe
    }
}

fn check_breakpoints<T: Real>(points: &[(T, T)]) -> Result<()> {
    if points.is_empty() {
        return Err(Error::Validation(
            "breakpoint list must not be empty".into(),
        ));
    }
    if points[0].0 != T::zero() {
        return Err(Error::Validation(format!(
            "first breakpoint must be at t = 0, got t = {}",
            points[0].0
        )));
    }
    for (i, &(t, w)) in points.iter().enumerate() {
        if !t.is_finite() || !w.is_finite() {
            return Err(Error::Validation(format!("breakpoint {i} is not finite")));
        }
        if w < T::zero() {
            return Err(Error::Validation(format!(
                "breakpoint {i} has a negative value {w}"
            )));
        }
        if i > 0 && t <= points[i - 1].0 {
            return Err(Error::Validation(format!(
                "breakpoint abscissae must increase strictly, got {} after {}",
                t,
                points[i - 1].0
            )));
        }
    }
    Ok(())
}

/// Linear interpolation of a strictly increasing breakpoint list starting
/// at `t = 0`, constant beyond the last breakpoint.
fn interp_points<T: Real>(points: &[(T, T)], t: T) -> T {
    let (t_last, w_last) = points[points.len() - 1];
    if t >= t_last {
        return w_last;
    }
    let hi = points.partition_point(|&(tk, _)| tk <= t);
    // 0 <= t < t_last and points[0].0 == 0, so 1 <= hi <= len - 1.
    let (t0, w0) = points[hi - 1];
    let (t1, w1) = points[hi];
    w0 + (t - t0) / (t1 - t0) * (w1 - w0)
}

/// Exact integral of the piecewise-linear interpolant over `[0, t]`.
fn integral_points<T: Real>(points: &[(T, T)], t: T) -> T {
    let half = cst::<T>(0.5);
    let mut acc = T::zero();
    for w in points.windows(2) {
        let (t0, w0) = w[0];
        let (t1, w1) = w[1];
        if t <= t0 {
            return acc;
        }
        if t < t1 {
            let wt = w0 + (t - t0) / (t1 - t0) * (w1 - w0);
            return acc + (t - t0) * (w0 + wt) * half;
        }
        acc = acc + (t1 - t0) * (w0 + w1) * half;
    }
    let (t_last, w_last) = points[points.len() - 1];
    if t > t_last {
        acc = acc + (t - t_last) * w_last;
    }
    acc
}

fn simpson<T: Real>(fa: T, fm: T, fb: T, a: T, b: T) -> T {
    (b - a) / cst::<T>(6.0) * (fa + cst::<T>(4.0) * fm + fb)
}

/// Adaptive Simpson quadrature with interval bisection; the local error
/// estimate `|S_left + S_right - S_whole| / 15` must drop below `tol`.
fn adaptive_simpson<T: Real>(f: &impl Fn(T) -> T, a: T, b: T, tol: T) -> T {
    let half = cst::<T>(0.5);
    let m = (a + b) * half;
    let (fa, fm, fb) = (f(a), f(m), f(b));
    let whole = simpson(fa, fm, fb, a, b);
    adaptive_step(f, a, b, tol, whole, fa, fm, fb, 0)
}

#[allow(clippy::too_many_arguments)]
fn adaptive_step<T: Real>(
    f: &impl Fn(T) -> T,
    a: T,
    b: T,
    tol: T,
    whole: T,
    fa: T,
    fm: T,
    fb: T,
    depth: u32,
) -> T {
    let half = cst::<T>(0.5);
    let m = (a + b) * half;
    let lm = (a + m) * half;
    let rm = (m + b) * half;
    let (flm, frm) = (f(lm), f(rm));
    let left = simpson(fa, flm, fm, a, m);
    let right = simpson(fm, frm, fb, m, b);
    let delta = left + right - whole;
    if depth >= QUAD_MAX_DEPTH || (depth >= QUAD_MIN_DEPTH && delta.abs() <= cst::<T>(15.0) * tol) {
        return left + right + delta / cst::<T>(15.0);
    }
    adaptive_step(f, a, m, tol * half, left, fa, flm, fm, depth + 1)
        + adaptive_step(f, m, b, tol * half, right, fm, frm, fb, depth + 1)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f64_modulus(kind: &str) -> Modulus<f64> {
        match kind {
            "linear" => Modulus::linear(1.0).unwrap(),
            "hoelder" => Modulus::hoelder(1.0, 0.5).unwrap(),
            _ => unreachable!(),
        }
    }

    #[test]
    fn eval_linear_at_origin_is_zero() {
        let m = f64_modulus("linear");
        assert_eq!(m.eval(0.0).unwrap(), 0.0);
    }

    #[test]
    fn eval_hoelder_sqrt() {
        let m = f64_modulus("hoelder");
        assert!((m.eval(0.25).unwrap() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn eval_linear_scales() {
        let m = Modulus::<f64>::linear(2.0).unwrap();
        assert!((m.eval(0.3).unwrap() - 0.6).abs() < 1e-15);
    }

    #[test]
    fn eval_rejects_negative_time() {
        let m = f64_modulus("linear");
        assert!(matches!(m.eval(-0.1), Err(Error::Domain(_))));
    }

    #[test]
    fn hoelder_exponent_out_of_range_fails_at_construction() {
        assert!(matches!(
            Modulus::hoelder(1.0, 1.5),
            Err(Error::Validation(_))
        ));
        assert!(matches!(
            Modulus::hoelder(1.0, 0.0),
            Err(Error::Validation(_))
        ));
        assert!(Modulus::hoelder(1.0, 1.0).is_ok());
    }

    #[test]
    fn validate_linear_passes() {
        assert!(f64_modulus("linear").validate().pass);
        assert!(f64_modulus("hoelder").validate().pass);
    }

    #[test]
    fn validate_flags_concavity_violation() {
        let m = Modulus::tabulated(vec![(0.0, 0.0), (0.5, 0.2), (1.0, 0.9)]).unwrap();
        let report = m.validate();
        assert!(!report.pass);
        match report.violation.unwrap() {
            Violation::NotMidpointConcave { t, s, .. } => {
                // The witnessing pair straddles the sagging breakpoint at 0.5.
                assert!(t < 0.5 && s > 0.5, "pair ({t}, {s}) must bracket 0.5");
            }
            other => panic!("expected a concavity violation, got {other:?}"),
        }
    }

    #[test]
    fn validate_flags_monotonicity_violation() {
        let m = Modulus::tabulated(vec![(0.0, 0.0), (0.5, 0.4), (1.0, 0.3)]).unwrap();
        let report = m.validate();
        assert!(!report.pass);
        assert!(matches!(
            report.violation,
            Some(Violation::NotNondecreasing { .. })
        ));
    }

    #[test]
    fn validate_flags_nonzero_origin() {
        let m = Modulus::tabulated(vec![(0.0, 0.1), (1.0, 0.2)]).unwrap();
        let report = m.validate();
        assert!(matches!(
            report.violation,
            Some(Violation::OriginNotZero { .. })
        ));
    }

    #[test]
    fn validate_probes_breakpoints_beyond_the_probe_span() {
        // Concavity violation strictly above PROBE_SPAN; only the
        // breakpoint extension of the probe grid can catch it.
        let m = Modulus::tabulated(vec![(0.0, 0.0), (2.5, 0.5), (3.0, 5.0)]).unwrap();
        assert!(!m.validate().pass);
    }

    #[test]
    fn integral_linear_closed_form() {
        let m = f64_modulus("linear");
        assert!((m.integral(0.5).unwrap() - 0.125).abs() < 1e-15);
        assert_eq!(m.integral(0.0).unwrap(), 0.0);
    }

    #[test]
    fn integral_hoelder_closed_form() {
        let m = f64_modulus("hoelder");
        assert!((m.integral(1.0).unwrap() - 2.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn integral_rejects_negative_bound() {
        assert!(matches!(
            f64_modulus("linear").integral(-1.0),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn piecewise_integral_is_exact_trapezoid() {
        let m = Modulus::<f64>::piecewise_linear(vec![(0.0, 0.0), (1.0, 1.0), (2.0, 1.0)]).unwrap();
        assert!((m.integral(2.0).unwrap() - 1.5).abs() < 1e-15);
        // Constant extension contributes a rectangle.
        assert!((m.integral(3.0).unwrap() - 2.5).abs() < 1e-15);
        assert!((m.eval(3.0).unwrap() - 1.0).abs() < 1e-15);
        // Mid-segment cut.
        assert!((m.integral(0.5).unwrap() - 0.125).abs() < 1e-15);
    }

    #[test]
    fn breakpoint_lists_are_checked_structurally() {
        assert!(Modulus::<f64>::piecewise_linear(vec![]).is_err());
        assert!(Modulus::piecewise_linear(vec![(0.5, 0.0), (1.0, 1.0)]).is_err());
        assert!(Modulus::piecewise_linear(vec![(0.0, 0.0), (0.0, 1.0)]).is_err());
        assert!(Modulus::piecewise_linear(vec![(0.0, 0.0), (1.0, -1.0)]).is_err());
    }

    #[test]
    fn quadrature_matches_closed_forms() {
        let ts = [0.1, 0.37, 0.5, 1.0, 1.618, 2.0];
        for kind in ["linear", "hoelder"] {
            let m = f64_modulus(kind);
            for &t in &ts {
                let exact = m.integral(t).unwrap();
                let quad = m.integral_by_quadrature(t).unwrap();
                assert!(
                    (exact - quad).abs() < 1e-9,
                    "{kind} at t = {t}: exact {exact}, quadrature {quad}"
                );
            }
        }
    }

    #[test]
    fn tabulated_integral_runs_through_quadrature() {
        let pts: Vec<(f64, f64)> = vec![(0.0, 0.0), (0.5, 0.5), (1.0, 0.75), (2.0, 1.0)];
        let tab = Modulus::tabulated(pts.clone()).unwrap();
        let pwl = Modulus::piecewise_linear(pts).unwrap();
        for &t in &[0.25, 0.5, 0.9, 1.5, 2.0, 2.5] {
            let a = tab.integral(t).unwrap();
            let b = pwl.integral(t).unwrap();
            assert!((a - b).abs() < 1e-9, "t = {t}: {a} vs {b}");
        }
    }

    #[test]
    fn works_for_f32_on_exact_cases() {
        let m = Modulus::<f32>::linear(2.0).unwrap();
        assert_eq!(m.eval(0.25).unwrap(), 0.5);
        assert_eq!(m.integral(1.0).unwrap(), 1.0);
        assert!(m.validate().pass);
    }
}
