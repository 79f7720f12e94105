use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

/// An exact rational number in lowest terms with a positive denominator.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RationalScalar(BigRational);

impl RationalScalar {
    /// Panics if `den` is zero.
    pub fn new(num: impl Into<BigInt>, den: impl Into<BigInt>) -> Self {
        Self(BigRational::new(num.into(), den.into()))
    }

    pub fn from_integer(n: impl Into<BigInt>) -> Self {
        Self(BigRational::from_integer(n.into()))
    }

    pub fn zero() -> Self {
        Self(BigRational::zero())
    }

    pub fn one() -> Self {
        Self(BigRational::one())
    }

    pub fn numerator(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denominator(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn as_ratio(&self) -> &BigRational {
        &self.0
    }

    /// Lossy conversion for display and numeric export only.
    pub fn to_f64(&self) -> f64 {
        num_traits::ToPrimitive::to_f64(&self.0).unwrap_or(f64::NAN)
    }
}

impl From<BigRational> for RationalScalar {
    fn from(r: BigRational) -> Self {
        Self(r)
    }
}

/// Returns `m >= 0` with `q == m^2`, or `None` when `q` is not the square of
/// an integer (non-integers included).
pub fn integer_square_root(q: &RationalScalar) -> Option<BigInt> {
    if !q.is_integer() || q.numerator().is_negative() {
        return None;
    }
    let n = q.numerator();
    let root = n.sqrt();
    (&root * &root == *n).then_some(root)
}

impl fmt::Display for RationalScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_integer() {
            write!(f, "{}", self.numerator())
        } else {
            write!(f, "{}/{}", self.numerator(), self.denominator())
        }
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident) => {
        impl $trait for RationalScalar {
            type Output = RationalScalar;
            fn $method(self, rhs: RationalScalar) -> RationalScalar {
                RationalScalar(self.0.$method(rhs.0))
            }
        }

        impl<'a> $trait<&'a RationalScalar> for &'a RationalScalar {
            type Output = RationalScalar;
            fn $method(self, rhs: &'a RationalScalar) -> RationalScalar {
                RationalScalar((&self.0).$method(&rhs.0))
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);

impl Neg for RationalScalar {
    type Output = RationalScalar;
    fn neg(self) -> RationalScalar {
        RationalScalar(-self.0)
    }
}

#[derive(Serialize, Deserialize)]
struct RationalRepr {
    #[serde(with = "crate::json")]
    num: BigInt,
    #[serde(with = "crate::json")]
    den: BigInt,
}

impl Serialize for RationalScalar {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        RationalRepr {
            num: self.numerator().clone(),
            den: self.denominator().clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for RationalScalar {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let repr = RationalRepr::deserialize(d)?;
        if repr.den.is_zero() {
            return Err(serde::de::Error::custom("zero denominator"));
        }
        Ok(RationalScalar::new(repr.num, repr.den))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reduces_and_normalizes_sign() {
        let q = RationalScalar::new(10, -32);
        assert_eq!(q.numerator(), &BigInt::from(-5));
        assert_eq!(q.denominator(), &BigInt::from(16));
        assert_eq!(q.to_string(), "-5/16");
    }

    #[test]
    fn square_root_examples() {
        assert_eq!(integer_square_root(&RationalScalar::from_integer(132)), None);
        assert_eq!(integer_square_root(&RationalScalar::from_integer(9)), Some(BigInt::from(3)));
        assert_eq!(integer_square_root(&RationalScalar::new(5, 16)), None);
        assert_eq!(integer_square_root(&RationalScalar::new(1, 4)), None);
        assert_eq!(integer_square_root(&RationalScalar::from_integer(0)), Some(BigInt::from(0)));
        assert_eq!(integer_square_root(&RationalScalar::from_integer(-4)), None);
    }

    #[test]
    fn json_shape() {
        let q = RationalScalar::new(5, 16);
        assert_eq!(serde_json::to_string(&q).unwrap(), r#"{"num":5,"den":16}"#);
        let big = RationalScalar::from_integer(BigInt::from(10).pow(30));
        let text = serde_json::to_string(&big).unwrap();
        assert_eq!(text, r#"{"num":"1000000000000000000000000000000","den":1}"#);
        let back: RationalScalar = serde_json::from_str(&text).unwrap();
        assert_eq!(back, big);
        assert!(serde_json::from_str::<RationalScalar>(r#"{"num":1,"den":0}"#).is_err());
    }
}
