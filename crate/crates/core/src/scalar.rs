//! Scalar traits the linear algebra is generic over.
//!
//! Matrix arithmetic only needs a commutative ring ([`Scalar`]). Normal forms,
//! kernels and integral solving need a Euclidean domain with a sign
//! ([`IntegerScalar`]), and congruence diagonalization needs an ordered field
//! ([`FieldScalar`]). `i64` and `BigInt` are both integer scalars; the exact
//! rationals over either are field scalars.

use std::fmt::Debug;
use std::ops::Neg;

use num_integer::Integer;
use num_traits::{Num, Signed};

pub trait Scalar: Clone + Debug + PartialEq + Num + Neg<Output = Self> {}

impl<T> Scalar for T where T: Clone + Debug + PartialEq + Num + Neg<Output = T> {}

pub trait IntegerScalar: Scalar + Integer + Signed {}

impl<T> IntegerScalar for T where T: Scalar + Integer + Signed {}

pub trait FieldScalar: Scalar + Signed + PartialOrd {}

impl<T> FieldScalar for T where T: Scalar + Signed + PartialOrd {}
