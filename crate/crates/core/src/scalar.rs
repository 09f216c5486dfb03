//! Exact scalar types.
//!
//! Every capacity, weight, load and certificate value in this crate is an
//! exact rational. The solvers are generic over [`Scalar`], which is
//! implemented for the `num-rational` types with `i64`, `i128` and `BigInt`
//! backing integers. Floating point types are deliberately not supported:
//! duality is checked as exact equality.

use std::fmt::{Debug, Display};
use std::hash::Hash;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::{BigRational, Ratio};
use num_traits::{One, Signed, ToPrimitive};

/// An exact ordered field element usable as a capacity or weight.
pub trait Scalar: Clone + Ord + Hash + Debug + Display + FromStr + Signed + Send + Sync + 'static {
    /// Lossless conversion to an arbitrary precision rational.
    fn to_big(&self) -> BigRational;

    /// Conversion back from an arbitrary precision rational, `None` if the
    /// value does not fit the backing integer type.
    fn from_big(value: &BigRational) -> Option<Self>;

    fn from_int(n: i64) -> Self;

    fn is_integral(&self) -> bool {
        self.to_big().is_integer()
    }

    fn half(&self) -> Self {
        self.clone() / Self::from_int(2)
    }
}

macro_rules! impl_scalar_for_ratio {
    ($int:ty) => {
        impl Scalar for Ratio<$int> {
            fn to_big(&self) -> BigRational {
                BigRational::new(BigInt::from(*self.numer()), BigInt::from(*self.denom()))
            }

            fn from_big(value: &BigRational) -> Option<Self> {
                let n = <$int>::try_from(value.numer().clone()).ok()?;
                let d = <$int>::try_from(value.denom().clone()).ok()?;
                Some(Ratio::new(n, d))
            }

            fn from_int(n: i64) -> Self {
                Ratio::from_integer(n as $int)
            }
        }
    };
}

impl_scalar_for_ratio!(i64);
impl_scalar_for_ratio!(i128);

impl Scalar for BigRational {
    fn to_big(&self) -> BigRational {
        self.clone()
    }

    fn from_big(value: &BigRational) -> Option<Self> {
        Some(value.clone())
    }

    fn from_int(n: i64) -> Self {
        BigRational::from_integer(BigInt::from(n))
    }
}

/// Smallest positive integer `d` such that `d * v` is integral for every `v`.
pub fn common_denominator<S: Scalar>(values: &[S]) -> BigInt {
    values.iter().fold(BigInt::one(), |acc, v| acc.lcm(v.to_big().denom()))
}

/// Scales `values` by `factor` and returns the integers, or `None` if some
/// product is not integral or does not fit an `i64`.
pub(crate) fn scaled_to_i64<S: Scalar>(values: &[S], factor: &BigInt) -> Option<Vec<i64>> {
    values
        .iter()
        .map(|v| {
            let x = v.to_big() * BigRational::from_integer(factor.clone());
            if !x.is_integer() {
                return None;
            }
            x.to_integer().to_i64()
        })
        .collect()
}

pub(crate) fn sum<'a, S: Scalar + 'a>(values: impl IntoIterator<Item = &'a S>) -> S {
    values.into_iter().fold(S::zero(), |acc, v| acc + v.clone())
}

#[cfg(test)]
mod tests {
    use super::*;

    type Q = Ratio<i64>;

    #[test]
    fn parses_integers_and_fractions() {
        assert_eq!("2".parse::<Q>().unwrap(), Q::from_integer(2));
        assert_eq!("3/2".parse::<Q>().unwrap(), Q::new(3, 2));
        assert_eq!("6/4".parse::<BigRational>().unwrap().to_string(), "3/2");
        assert_eq!(Q::new(4, 2).to_string(), "2");
    }

    #[test]
    fn common_denominator_is_lcm() {
        let vals = [Q::new(1, 2), Q::new(1, 3), Q::from_integer(5)];
        assert_eq!(common_denominator(&vals), BigInt::from(6));
        let scaled = scaled_to_i64(&vals, &BigInt::from(6)).unwrap();
        assert_eq!(scaled, vec![3, 2, 30]);
        assert!(scaled_to_i64(&vals, &BigInt::from(2)).is_none());
    }

    #[test]
    fn big_round_trip() {
        let x = Q::new(-7, 3);
        assert_eq!(Q::from_big(&x.to_big()), Some(x));
        let huge = BigRational::from_integer(BigInt::from(i64::MAX) * 4);
        assert!(Q::from_big(&huge).is_none());
        assert!(Ratio::<i128>::from_big(&huge).is_some());
    }

    #[test]
    fn halving_is_exact() {
        assert_eq!(Q::from_integer(3).half(), Q::new(3, 2));
        assert!(!Q::new(3, 2).is_integral());
    }
}
