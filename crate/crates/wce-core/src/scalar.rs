//! Floating-point scalar abstraction: f32 or f64.

use num_complex::Complex;
use num_traits::{Float, FromPrimitive};
use std::fmt::{Debug, Display};

/// Real scalar type underlying all measure, function, and matrix values.
///
/// Everything in this crate is generic over `Scalar`; the crate root exports
/// `f64`-concrete aliases for ordinary use.
pub trait Scalar:
    Float + FromPrimitive + Debug + Display + Default + Send + Sync + 'static
{
    /// Lossy conversion from an `f64` constant (tolerances, literals).
    fn of(x: f64) -> Self {
        Self::from_f64(x).expect("f64 constant must convert into the scalar type")
    }
}

impl Scalar for f32 {}
impl Scalar for f64 {}

/// Complex number over a [`Scalar`].
pub type C<S> = Complex<S>;

/// Shorthand for a complex value from two f64 parts.
pub fn cx<S: Scalar>(re: f64, im: f64) -> C<S> {
    Complex::new(S::of(re), S::of(im))
}
