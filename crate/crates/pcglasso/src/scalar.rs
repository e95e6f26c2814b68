use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FromPrimitive, NumAssign, ToPrimitive};

/// Floating-point scalar the library is generic over.
///
/// In practice this is `f32` or `f64`; all tolerances in the crate are chosen
/// for `f64`, which is what the concrete aliases at the crate root use.
pub trait Scalar:
    Float + FromPrimitive + ToPrimitive + NumAssign + Sum + Debug + Display + Send + Sync + 'static
{
}

impl Scalar for f32 {}
impl Scalar for f64 {}

/// Shorthand for lifting `f64` literals (tolerances, constants) into `T`.
#[inline]
pub(crate) fn fl<T: Scalar>(x: f64) -> T {
    T::from_f64(x).expect("f64 constant must be representable in the scalar type")
}

/// Lift a `usize` count into `T`.
#[inline]
pub(crate) fn fl_usize<T: Scalar>(x: usize) -> T {
    T::from_usize(x).expect("usize count must be representable in the scalar type")
}
