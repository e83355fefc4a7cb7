//! The exact ordered-field abstraction the solvers are generic over.

use std::fmt::{Debug, Display};

use num_rational::{BigRational, Ratio};
use num_traits::{FromPrimitive, NumAssignRef, NumRef, Signed, ToPrimitive};

use crate::rational::Rational;

/// An exact ordered field.
///
/// Every solver decision (ratio tests, ES membership, MIP thresholds) is a
/// sign test, so implementors must be exact: floating-point types are not
/// admissible here.
pub trait Scalar:
    Clone + Debug + Display + Ord + Signed + NumRef + NumAssignRef + FromPrimitive + ToPrimitive + Send + Sync + 'static
{
    fn from_int(n: i64) -> Self {
        Self::from_i64(n).expect("integer representable in scalar")
    }

    fn is_integer(&self) -> bool;

    fn floor(&self) -> Self;

    fn ceil(&self) -> Self;
}

macro_rules! impl_scalar {
    ($($t:ty),*) => {$(
        impl Scalar for $t {
            fn is_integer(&self) -> bool {
                <$t>::is_integer(self)
            }

            fn floor(&self) -> Self {
                <$t>::floor(self)
            }

            fn ceil(&self) -> Self {
                <$t>::ceil(self)
            }
        }
    )*};
}

// Ratio<i64> and Ratio<i128> panic on overflow, so they only suit tiny inputs.
impl_scalar!(Rational, BigRational, Ratio<i64>, Ratio<i128>);
