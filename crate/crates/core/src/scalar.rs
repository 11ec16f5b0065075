//! Floating-point scalar abstraction shared by the sequence and thinning code.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FloatConst, FromPrimitive, NumAssign, ToPrimitive};

/// A real scalar the spectrum arithmetic can run on (`f32` or `f64`).
pub trait Scalar:
    Float
    + FloatConst
    + FromPrimitive
    + ToPrimitive
    + NumAssign
    + Sum
    + Debug
    + Display
    + Default
    + Send
    + Sync
    + 'static
{
    /// Threshold below which an entry counts as zero (and above which a
    /// negative entry breaks a probability spectrum).
    fn roundoff() -> Self;

    /// Slack allowed on the total mass of a probability spectrum.
    fn mass_slack() -> Self;

    /// Lossy conversion from `f64`; always succeeds for the implementors.
    fn of(x: f64) -> Self {
        Self::from_f64(x).expect("f64 converts to every Scalar")
    }

    fn of_usize(n: usize) -> Self {
        Self::from_usize(n).expect("usize converts to every Scalar")
    }

    fn as_f64(self) -> f64 {
        self.to_f64().expect("every Scalar converts to f64")
    }
}

impl Scalar for f64 {
    fn roundoff() -> Self {
        1e-12
    }

    fn mass_slack() -> Self {
        1e-9
    }
}

impl Scalar for f32 {
    fn roundoff() -> Self {
        1e-5
    }

    fn mass_slack() -> Self {
        1e-4
    }
}

/// True when `x` is an integer to within a few ulps.
pub(crate) fn is_integral<T: Scalar>(x: T) -> bool {
    (x - x.round()).abs() <= T::epsilon() * T::of(4.0) * x.abs().max(T::one())
}
