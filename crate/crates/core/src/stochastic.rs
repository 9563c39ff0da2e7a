//! Finitely supported random measurement times.
//!
//! Random times are represented as simple random variables: finitely many
//! atoms, each carrying a value in `[0, a]` and a positive probability.
//! Every closed-form bound in this crate depends on a random time only
//! through its essential envelope `(m, M)`, so no richer representation is
//! needed.

use crate::error::{Error, Result};
use crate::scalar::{cst, Real};

/// Tolerance on probability sums and on pairwise probability comparison.
pub(crate) const PROB_TOL: f64 = 1e-12;

/// A random variable with finitely many atoms, taking values in `[0, a]`.
#[derive(Debug, Clone)]
pub struct SimpleRandomVariable<T> {
    values: Vec<T>,
    probs: Vec<T>,
    domain: T,
}

/// Essential infimum and supremum of a random time over `[0, a]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Envelope<T> {
    inf: T,
    sup: T,
    domain: T,
}

impl<T: Real> SimpleRandomVariable<T> {
    /// Builds a simple random variable from `(value, probability)` atoms on
    /// `[0, domain]`.
    pub fn new(atoms: Vec<(T, T)>, domain: T) -> Result<Self> {
        if atoms.is_empty() {
            return Err(Error::Validation(
                "a simple random variable needs at least one atom".into(),
            ));
        }
        if !domain.is_finite() || domain <= T::zero() {
            return Err(Error::Validation(format!(
                "domain length must be positive, got {domain}"
            )));
        }
        let mut total = T::zero();
        for (i, &(v, p)) in atoms.iter().enumerate() {
            if !v.is_finite() || v < T::zero() || v > domain {
                return Err(Error::Validation(format!(
                    "atom {i} value {v} lies outside [0, {domain}]"
                )));
            }
            if !p.is_finite() || p <= T::zero() || p > T::one() {
                return Err(Error::Validation(format!(
                    "atom {i} probability {p} lies outside (0, 1]"
                )));
            }
            total = total + p;
        }
        if (total - T::one()).abs() > cst(PROB_TOL) {
            return Err(Error::Validation(format!(
                "atom probabilities sum to {total}, not 1"
            )));
        }
        let (values, probs) = atoms.into_iter().unzip();
        Ok(Self {
            values,
            probs,
            domain,
        })
    }

    /// A deterministic time: a single atom of probability one.
    pub fn deterministic(value: T, domain: T) -> Result<Self> {
        Self::new(vec![(value, T::one())], domain)
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn probs(&self) -> &[T] {
        &self.probs
    }

    pub fn domain(&self) -> T {
        self.domain
    }

    pub fn atom_count(&self) -> usize {
        self.values.len()
    }

    /// Essential envelope: the minimum and maximum of the support.
    pub fn envelope(&self) -> Envelope<T> {
        let mut inf = self.values[0];
        let mut sup = self.values[0];
        for &v in &self.values[1..] {
            inf = inf.min(v);
            sup = sup.max(v);
        }
        Envelope {
            inf,
            sup,
            domain: self.domain,
        }
    }

    /// Essential sup-norm of `self - other` over a shared atom partition.
    ///
    /// The two variables must have the same number of atoms with pairwise
    /// equal probabilities; no measure-theoretic refinement is attempted.
    pub fn sup_distance(&self, other: &Self) -> Result<T> {
        if !probs_match(&self.probs, &other.probs) {
            return Err(Error::Partition(
                "sup_distance needs identical atom partitions (equal lengths and probabilities)"
                    .into(),
            ));
        }
        let mut d = T::zero();
        for (&a, &b) in self.values.iter().zip(&other.values) {
            d = d.max((a - b).abs());
        }
        Ok(d)
    }
}

impl<T: Real> Envelope<T> {
    /// Builds an envelope `0 <= inf <= sup <= domain` directly.
    pub fn new(inf: T, sup: T, domain: T) -> Result<Self> {
        if !domain.is_finite() || domain <= T::zero() {
            return Err(Error::Validation(format!(
                "domain length must be positive, got {domain}"
            )));
        }
        if !inf.is_finite() || !sup.is_finite() || inf < T::zero() || inf > sup || sup > domain {
            return Err(Error::Validation(format!(
                "envelope needs 0 <= m <= M <= {domain}, got ({inf}, {sup})"
            )));
        }
        Ok(Self { inf, sup, domain })
    }

    pub fn inf(&self) -> T {
        self.inf
    }

    pub fn sup(&self) -> T {
        self.sup
    }

    pub fn domain(&self) -> T {
        self.domain
    }

    /// `max(|m - c|, |M - c|)`, the essential sup-norm deviation from `c`
    /// of any random time with this envelope.
    pub fn sup_deviation(&self, center: T) -> T {
        (self.inf - center).abs().max((self.sup - center).abs())
    }
}

/// True when two atom probability vectors describe the same partition.
pub(crate) fn probs_match<T: Real>(a: &[T], b: &[T]) -> bool {
    a.len() == b.len()
        && a.iter()
            .zip(b)
            .all(|(&p, &q)| (p - q).abs() <= cst(PROB_TOL))
}
