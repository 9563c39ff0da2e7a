//! Worst-case recovery of integrals of random processes from finitely
//! many randomly timed samples.
//!
//! The quantity of interest is `E | integral of xi over [0, a] - S |`,
//! where `xi` ranges over a class of processes whose increments are
//! bounded in expectation by a concave modulus of continuity `omega`, and
//! `S` is a linear method built from samples `xi` taken at a random
//! trigger time `tau` plus deterministic offsets. The crate computes the
//! sharp worst-case value of that error, the weights attaining it, and the
//! offset schedules minimizing it, and verifies each formula numerically
//! with constructive extremal processes and Monte-Carlo sampling on a
//! discretized grid.
//!
//! Modules:
//!
//! * [`modulus`]: concave moduli `omega` and their antiderivatives `I`;
//! * [`stochastic`]: finitely supported random times and envelopes;
//! * [`recovery`]: the sharp bounds and the optimal weights;
//! * [`placement`]: optimal measurement schedules, with a grid-search
//!   oracle;
//! * [`majorization`]: vector majorization and the Karamata gap;
//! * [`simulation`]: discretized processes, extremal constructions,
//!   empirical errors and class-membership checks;
//! * [`parse`]: the compact text descriptors used by the command line.
//!
//! All numeric code is generic over [`Real`] (any `num_traits::Float`
//! scalar); the `*64` aliases below fix `f64`, the instantiation the
//! command line uses.
//!
//! ```
//! use intrec::{Modulus64, Srv64, recovery};
//!
//! let omega = Modulus64::linear(1.0).unwrap();
//! let tau = Srv64::deterministic(0.5, 1.0).unwrap();
//! let bound = recovery::ostrowski_bound(&omega, 1.0, &tau.envelope()).unwrap();
//! assert!((bound - 0.25).abs() < 1e-15);
//! ```

pub mod error;
pub mod majorization;
pub mod modulus;
pub mod parse;
pub mod placement;
pub mod recovery;
pub mod scalar;
pub mod simulation;
pub mod stochastic;

pub use error::{Error, Result};
pub use scalar::Real;

/// `f64` modulus of continuity.
pub type Modulus64 = modulus::Modulus<f64>;
/// `f64` simple random variable.
pub type Srv64 = stochastic::SimpleRandomVariable<f64>;
/// `f64` envelope.
pub type Envelope64 = stochastic::Envelope<f64>;
/// `f64` offset schedule.
pub type Schedule64 = recovery::OffsetSchedule<f64>;
/// `f64` recovery weights.
pub type Weights64 = recovery::RecoveryWeights<f64>;
/// `f64` placement result.
pub type Placement64 = placement::PlacementResult<f64>;
/// `f64` grid function.
pub type GridFunction64 = simulation::GridFunction<f64>;
/// `f64` grid process.
pub type GridProcess64 = simulation::GridProcess<f64>;
