//! Scalar abstraction for the whole crate.
//!
//! All numeric code is generic over [`Real`], which is blanket-implemented
//! for `f32` and `f64`. The crate root exports `f64` aliases for the common
//! instantiations.

use std::fmt;

use num_traits::Float;

/// Floating-point scalar used by every computation in this crate.
pub trait Real: Float + fmt::Debug + fmt::Display + Send + Sync + 'static {}

impl<T> Real for T where T: Float + fmt::Debug + fmt::Display + Send + Sync + 'static {}

/// Converts an `f64` constant into `T`.
///
/// Panics only when the target type cannot represent the constant at all,
/// which no IEEE float in this crate's range of constants triggers.
pub(crate) fn cst<T: Real>(x: f64) -> T {
    T::from(x).expect("constant representable in scalar type")
}

/// Converts a grid index or count into `T`.
pub(crate) fn from_usize<T: Real>(n: usize) -> T {
    T::from(n).expect("index representable in scalar type")
}
