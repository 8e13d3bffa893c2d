//! Coefficient scalar abstraction for the exact algebra layer.

use num_traits::{One, Zero};
use std::fmt::{Debug, Display};
use std::ops::{Add, Div, Mul, Neg, Sub};

/// Field scalar for polynomial coefficients and slice linear algebra.
///
/// Instantiated with [`crate::Rat`] throughout the crate; any exact field
/// type with the same surface works.
pub trait Scalar:
    Clone
    + PartialEq
    + Debug
    + Display
    + Zero
    + One
    + Neg<Output = Self>
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
{
    fn from_integer(v: i64) -> Self;
}

impl Scalar for crate::Rat {
    fn from_integer(v: i64) -> Self {
        crate::Rat::from_integer(v.into())
    }
}
