//! Discretized processes and the numerical verification engine.
//!
//! Processes are discretized on an equispaced grid as one real-valued
//! function per atom of the underlying partition. This module builds the
//! constructive extremal processes that attain the closed-form bounds,
//! samples random class members for upper-bound checks, measures empirical
//! recovery errors, and decides class membership on finite data.
//!
//! Conventions:
//!
//! * `grid` parameters count cells; a function with `grid = N` has `N + 1`
//!   samples. Schedules and trigger values are never snapped to the grid;
//!   off-grid evaluation uses linear interpolation, which cannot push a
//!   function out of its class when the modulus is concave.
//! * integrals of grid functions use the trapezoid rule, whose error for a
//!   class member is of the order of `omega(h)`;
//! * every stochastic operation takes an explicit seed and derives one
//!   sub-seed per atom or trial, so results do not depend on evaluation
//!   order.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::modulus::Modulus;
use crate::recovery::{optimal_weights, recovery_error, OffsetSchedule, RecoveryWeights};
use crate::scalar::{cst, from_usize, Real};
use crate::stochastic::{probs_match, SimpleRandomVariable};

pub mod io;

/// Slack allowed by the pairwise membership check.
const MEMBERSHIP_TOL: f64 = 1e-10;
/// Above this many cells the pairwise scan is subsampled.
const PAIR_SCAN_LIMIT: usize = 2000;
/// Number of sampled pairs once the scan is subsampled.
const PAIR_SAMPLES: usize = 1_000_000;
/// Seed of the subsampled pair scan; fixed so the check is deterministic.
const PAIR_SCAN_SEED: u64 = 0x9D39_247E_3377_6D41;

/// A function sampled on `N + 1` equispaced times covering `[0, domain]`.
///
/// The grid is implied by `(domain, N)`, so equispacing holds exactly;
/// externally loaded grids are checked against this layout by [`io`].
#[derive(Debug, Clone, PartialEq)]
pub struct GridFunction<T> {
    domain: T,
    values: Vec<T>,
}

impl<T: Real> GridFunction<T> {
    pub fn new(domain: T, values: Vec<T>) -> Result<Self> {
        if !domain.is_finite() || domain <= T::zero() {
            return Err(Error::Validation(format!(
                "domain length must be positive, got {domain}"
            )));
        }
        if values.len() < 2 {
            return Err(Error::Validation(
                "a grid function needs at least two samples".into(),
            ));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::Validation("grid values must be finite".into()));
        }
        Ok(Self { domain, values })
    }

    pub fn domain(&self) -> T {
        self.domain
    }

    /// Number of grid cells.
    pub fn cells(&self) -> usize {
        self.values.len() - 1
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    /// The `j`-th grid time.
    pub fn time(&self, j: usize) -> T {
        let n = self.cells();
        if j >= n {
            return self.domain;
        }
        self.domain * (from_usize::<T>(j) / from_usize::<T>(n))
    }

    /// Value at an arbitrary `t`, clamped to the domain, by linear
    /// interpolation between the two neighbouring samples.
    pub fn value_at(&self, t: T) -> T {
        let t = t.max(T::zero()).min(self.domain);
        let n = self.cells();
        let u = (t / self.domain) * from_usize::<T>(n);
        let j = u.floor().to_usize().unwrap_or(0).min(n - 1);
        let (t0, t1) = (self.time(j), self.time(j + 1));
        let frac = ((t - t0) / (t1 - t0)).max(T::zero()).min(T::one());
        self.values[j] + frac * (self.values[j + 1] - self.values[j])
    }

    /// Trapezoid integral over the whole domain.
    pub fn integral_trapezoid(&self) -> T {
        let n = self.cells();
        let h = self.domain / from_usize::<T>(n);
        let half = cst::<T>(0.5);
        let inner = self.values[1..n].iter().fold(T::zero(), |s, &v| s + v);
        h * (inner + (self.values[0] + self.values[n]) * half)
    }
}

/// A discretized random process: one grid function per atom, sharing the
/// grid, plus the atom probabilities.
#[derive(Debug, Clone)]
pub struct GridProcess<T> {
    probs: Vec<T>,
    atoms: Vec<GridFunction<T>>,
}

impl<T: Real> GridProcess<T> {
    pub fn new(probs: Vec<T>, atoms: Vec<GridFunction<T>>) -> Result<Self> {
        if atoms.is_empty() || probs.len() != atoms.len() {
            return Err(Error::Validation(format!(
                "need one probability per atom function, got {} and {}",
                probs.len(),
                atoms.len()
            )));
        }
        let mut total = T::zero();
        for (i, &p) in probs.iter().enumerate() {
            if !p.is_finite() || p <= T::zero() || p > T::one() {
                return Err(Error::Validation(format!(
                    "atom {i} probability {p} lies outside (0, 1]"
                )));
            }
            total = total + p;
        }
        if (total - T::one()).abs() > cst(crate::stochastic::PROB_TOL) {
            return Err(Error::Validation(format!(
                "atom probabilities sum to {total}, not 1"
            )));
        }
        let (d0, n0) = (atoms[0].domain(), atoms[0].cells());
        for f in &atoms[1..] {
            if f.domain() != d0 || f.cells() != n0 {
                return Err(Error::Validation(
                    "all atom functions must share one grid".into(),
                ));
            }
        }
        Ok(Self { probs, atoms })
    }

    pub fn probs(&self) -> &[T] {
        &self.probs
    }

    pub fn atoms(&self) -> &[GridFunction<T>] {
        &self.atoms
    }

    pub fn domain(&self) -> T {
        self.atoms[0].domain()
    }

    pub fn cells(&self) -> usize {
        self.atoms[0].cells()
    }

    /// Pointwise expectation over atoms at every grid node.
    pub fn mean_values(&self) -> Vec<T> {
        let n = self.cells();
        let mut mean = vec![T::zero(); n + 1];
        for (f, &p) in self.atoms.iter().zip(&self.probs) {
            for (m, &v) in mean.iter_mut().zip(f.values()) {
                *m = *m + p * v;
            }
        }
        mean
    }
}

/// Verdict of [`classify_process`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClassVerdict {
    /// Every atom function satisfies the pointwise increment bound, which
    /// is sufficient for membership of the process class.
    CertifiedByAtoms,
    /// A random pair of grid-valued times violated the expectation bound.
    Falsified,
    /// Neither certified nor falsified within the trial budget.
    Undetermined,
}

/// The process equal to `x(t) / p` on the chosen atom and `0` elsewhere;
/// its pointwise expectation is `x(t)` exactly.
pub fn generated_process<T: Real>(
    x: &GridFunction<T>,
    atom_index: usize,
    atom_probs: &[T],
) -> Result<GridProcess<T>> {
    if atom_index >= atom_probs.len() {
        return Err(Error::Domain(format!(
            "atom index {atom_index} out of range for {} atoms",
            atom_probs.len()
        )));
    }
    let p = atom_probs[atom_index];
    if !p.is_finite() || p <= T::zero() {
        return Err(Error::Domain(format!(
            "the chosen atom needs positive probability, got {p}"
        )));
    }
    let zero = GridFunction::new(x.domain(), vec![T::zero(); x.values().len()])?;
    let scaled = GridFunction::new(x.domain(), x.values().iter().map(|&v| v / p).collect())?;
    let atoms = (0..atom_probs.len())
        .map(|i| {
            if i == atom_index {
                scaled.clone()
            } else {
                zero.clone()
            }
        })
        .collect();
    GridProcess::new(atom_probs.to_vec(), atoms)
}

/// The extremal class member for a schedule anchored at `tau1`:
/// `x(t) = min_k omega(|t - (tau1 + t_k)|)` sampled on a grid of `grid`
/// cells over `[0, 1]`. Vanishes at every sampling time and attains the
/// closed-form error once fed through [`generated_process`].
pub fn extremal_function<T: Real>(
    m: &Modulus<T>,
    sched: &OffsetSchedule<T>,
    tau1: T,
    grid: usize,
) -> Result<GridFunction<T>> {
    if grid == 0 {
        return Err(Error::Domain("the grid needs at least one cell".into()));
    }
    if !tau1.is_finite() || tau1 < T::zero() || tau1 + sched.last() > T::one() {
        return Err(Error::Feasibility(format!(
            "anchor {tau1} puts samples outside [0, 1] for t_n = {}",
            sched.last()
        )));
    }
    let n = from_usize::<T>(grid);
    let values = (0..=grid)
        .map(|j| {
            let t = from_usize::<T>(j) / n;
            sched
                .offsets()
                .iter()
                .map(|&tk| m.eval_unchecked((t - (tau1 + tk)).abs()))
                .fold(T::infinity(), T::min)
        })
        .collect();
    GridFunction::new(T::one(), values)
}

/// Draws a random member of the class `H^omega` on `[0, 1]`.
///
/// Grid points are visited left to right starting from `x(0) = 0`; each
/// new value is drawn uniformly from the interval allowed by all
/// previously fixed points. Concavity of `omega` keeps that interval
/// nonempty. Deterministic for a fixed seed.
pub fn sample_hw_function<T: Real>(
    m: &Modulus<T>,
    grid: usize,
    seed: u64,
) -> Result<GridFunction<T>> {
    if grid == 0 {
        return Err(Error::Domain("the grid needs at least one cell".into()));
    }
    let n = grid;
    let h = from_usize::<T>(n).recip();
    // Increment bounds at grid distances: bound[k] = omega(k h).
    let bound: Vec<T> = (0..=n)
        .map(|k| m.eval_unchecked(from_usize::<T>(k) * h))
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut values = vec![T::zero(); n + 1];
    for j in 1..=n {
        let mut lo = T::neg_infinity();
        let mut hi = T::infinity();
        for i in 0..j {
            lo = lo.max(values[i] - bound[j - i]);
            hi = hi.min(values[i] + bound[j - i]);
        }
        let u: f64 = rng.gen();
        values[j] = if hi > lo {
            lo + (hi - lo) * cst(u)
        } else {
            (lo + hi) * cst(0.5)
        };
    }
    GridFunction::new(T::one(), values)
}

/// Pairwise membership check: `|f(t_i) - f(t_j)| <= omega(|t_i - t_j|)`
/// up to a slack of `1e-10` over all grid pairs, subsampled to a fixed
/// random set of pairs on grids above 2000 cells.
pub fn within_class<T: Real>(m: &Modulus<T>, f: &GridFunction<T>) -> bool {
    let tol = cst::<T>(MEMBERSHIP_TOL);
    let v = f.values();
    let n = f.cells();
    let ok = |i: usize, j: usize| {
        (v[i] - v[j]).abs() <= m.eval_unchecked((f.time(i) - f.time(j)).abs()) + tol
    };
    if n <= PAIR_SCAN_LIMIT {
        for i in 0..=n {
            for j in (i + 1)..=n {
                if !ok(i, j) {
                    return false;
                }
            }
        }
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(PAIR_SCAN_SEED);
        for _ in 0..PAIR_SAMPLES {
            let i = rng.gen_range(0..=n);
            let j = rng.gen_range(0..=n);
            if !ok(i, j) {
                return false;
            }
        }
    }
    true
}

/// Two-tier class membership for a process.
///
/// Atomwise membership of every grid function certifies the class (the
/// expectation bound follows from concavity of `omega`). Otherwise random
/// pairs of grid-valued simple times on the atom partition look for a
/// violation of `E|xi_tau - xi_theta| <= omega(||tau - theta||_inf)`; with
/// no violation found the verdict stays undetermined, since the class
/// condition quantifies over all random time pairs.
pub fn classify_process<T: Real>(
    m: &Modulus<T>,
    p: &GridProcess<T>,
    trials: usize,
    seed: u64,
) -> ClassVerdict {
    if p.atoms().iter().all(|f| within_class(m, f)) {
        return ClassVerdict::CertifiedByAtoms;
    }
    let tol = cst::<T>(MEMBERSHIP_TOL);
    let n = p.cells();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..trials {
        let mut expectation = T::zero();
        let mut dist = T::zero();
        for (f, &prob) in p.atoms().iter().zip(p.probs()) {
            let i = rng.gen_range(0..=n);
            let j = rng.gen_range(0..=n);
            expectation = expectation + prob * (f.values()[i] - f.values()[j]).abs();
            dist = dist.max((f.time(i) - f.time(j)).abs());
        }
        if expectation > m.eval_unchecked(dist) + tol {
            return ClassVerdict::Falsified;
        }
    }
    ClassVerdict::Undetermined
}

/// Empirical recovery error of the weighted method on a discretized
/// process: the expectation over atoms of the absolute gap between the
/// trapezoid integral and the weighted samples at `tau + t_k`.
pub fn empirical_error<T: Real>(
    p: &GridProcess<T>,
    sched: &OffsetSchedule<T>,
    tau: &SimpleRandomVariable<T>,
    weights: &RecoveryWeights<T>,
) -> Result<T> {
    if !probs_match(p.probs(), tau.probs()) {
        return Err(Error::Partition(
            "the trigger time must live on the process's atom partition".into(),
        ));
    }
    if weights.n() != sched.n() {
        return Err(Error::Domain(format!(
            "{} weights cannot apply to {} sampling times",
            weights.n(),
            sched.n()
        )));
    }
    let a = p.domain();
    for &v in tau.values() {
        if v + sched.last() > a {
            return Err(Error::Feasibility(format!(
                "trigger value {v} puts samples outside [0, {a}] for t_n = {}",
                sched.last()
            )));
        }
    }
    let mut err = T::zero();
    for ((f, &prob), &tv) in p.atoms().iter().zip(p.probs()).zip(tau.values()) {
        let c = weights.realize(tv);
        let estimate = sched
            .offsets()
            .iter()
            .zip(&c)
            .fold(T::zero(), |s, (&tk, &ck)| s + ck * f.value_at(tv + tk));
        err = err + prob * (f.integral_trapezoid() - estimate).abs();
    }
    Ok(err)
}

/// Recenters a process at its trigger and cuts `b` time units out after
/// it. Per atom with trigger value `v`:
///
/// ```text
/// zeta(t) = xi(t) - xi(v)          for t <= v,
/// zeta(t) = xi(t + b) - xi(v + b)  for v < t <= a - b,
/// ```
///
/// resampled on a fresh grid over `[0, a - b]` with the same cell count.
/// The result stays in the class on the shorter interval and vanishes at
/// the trigger up to interpolation error.
pub fn shift_cutout<T: Real>(
    p: &GridProcess<T>,
    tau: &SimpleRandomVariable<T>,
    b: T,
) -> Result<GridProcess<T>> {
    if !b.is_finite() || b < T::zero() {
        return Err(Error::Domain(format!(
            "cut length must be nonnegative, got {b}"
        )));
    }
    if !probs_match(p.probs(), tau.probs()) {
        return Err(Error::Partition(
            "the trigger time must live on the process's atom partition".into(),
        ));
    }
    let a = p.domain();
    for &v in tau.values() {
        if v + b > a {
            return Err(Error::Domain(format!(
                "need tau + b <= {a} on every atom, got {v} + {b}"
            )));
        }
    }
    let new_domain = a - b;
    if new_domain <= T::zero() {
        return Err(Error::Domain("the cut removes the whole interval".into()));
    }
    let n = p.cells();
    let steps = from_usize::<T>(n);
    let mut atoms = Vec::with_capacity(p.atoms().len());
    for (f, &v) in p.atoms().iter().zip(tau.values()) {
        let values = (0..=n)
            .map(|j| {
                let t = new_domain * (from_usize::<T>(j) / steps);
                if t <= v {
                    f.value_at(t) - f.value_at(v)
                } else {
                    f.value_at(t + b) - f.value_at(v + b)
                }
            })
            .collect();
        atoms.push(GridFunction::new(new_domain, values)?);
    }
    GridProcess::new(p.probs().to_vec(), atoms)
}

/// A random atomwise class member on the partition given by `probs`; one
/// independently sampled function per atom, sub-seeded per atom.
pub fn sample_hw_process<T: Real>(
    m: &Modulus<T>,
    probs: &[T],
    grid: usize,
    seed: u64,
) -> Result<GridProcess<T>> {
    let atoms = (0..probs.len())
        .map(|i| sample_hw_function(m, grid, mix_seed(seed, i as u64)))
        .collect::<Result<Vec<_>>>()?;
    GridProcess::new(probs.to_vec(), atoms)
}

/// The extremal process for `(sched, tau)`: the generated process over
/// the extremal function anchored at the trigger value farthest from the
/// centered sampling window.
pub fn extremal_process<T: Real>(
    m: &Modulus<T>,
    sched: &OffsetSchedule<T>,
    tau: &SimpleRandomVariable<T>,
    grid: usize,
) -> Result<GridProcess<T>> {
    let center = (T::one() - sched.last()) * cst(0.5);
    let mut pick = 0usize;
    let mut best = T::neg_infinity();
    for (i, &v) in tau.values().iter().enumerate() {
        let dev = (v - center).abs();
        if dev > best {
            best = dev;
            pick = i;
        }
    }
    let x = extremal_function(m, sched, tau.values()[pick], grid)?;
    generated_process(&x, pick, tau.probs())
}

/// Outcome of a Monte-Carlo upper-bound run.
#[derive(Debug, Clone)]
pub struct UpperBoundRun<T> {
    /// The closed-form worst-case error for the configuration.
    pub theoretical: T,
    /// Empirical error of every sampled process, in trial order.
    pub empirical: Vec<T>,
}

impl<T: Real> UpperBoundRun<T> {
    pub fn max_empirical(&self) -> T {
        self.empirical
            .iter()
            .fold(T::neg_infinity(), |a, &b| a.max(b))
    }

    /// Largest empirical / theoretical ratio; `None` for a zero bound.
    pub fn max_ratio(&self) -> Option<T> {
        (self.theoretical > T::zero()).then(|| self.max_empirical() / self.theoretical)
    }
}

/// Draws `trials` random atomwise class members on the trigger's
/// partition and measures each one's empirical error under the optimal
/// weights, against the closed-form bound for the trigger's envelope.
pub fn monte_carlo_upper_bound<T: Real>(
    m: &Modulus<T>,
    sched: &OffsetSchedule<T>,
    tau: &SimpleRandomVariable<T>,
    grid: usize,
    trials: usize,
    seed: u64,
) -> Result<UpperBoundRun<T>> {
    let theoretical = recovery_error(m, sched, &tau.envelope())?;
    let weights = optimal_weights(sched);
    let mut empirical = Vec::with_capacity(trials);
    for trial in 0..trials {
        let p = sample_hw_process(
            m,
            tau.probs(),
            grid,
            mix_seed(seed, 0x5EED_0000 + trial as u64),
        )?;
        empirical.push(empirical_error(&p, sched, tau, &weights)?);
    }
    Ok(UpperBoundRun {
        theoretical,
        empirical,
    })
}

/// SplitMix64 step, used to derive independent sub-seeds from
/// `(seed, index)` so trials can run in any order.
pub(crate) fn mix_seed(seed: u64, index: u64) -> u64 {
    let mut z = seed ^ index.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}
