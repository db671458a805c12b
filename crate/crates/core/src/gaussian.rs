//! Exact arithmetic in Q(i), the field of Gaussian rationals.
//!
//! Point configurations on the quadric live in projective coordinates over
//! Q(i): the odd-point configuration contains a point with first coordinate
//! sqrt(-1), which forces i into the coefficient field.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

/// An element re + im*i of Q(i), both parts exact rationals.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GaussianRational {
    pub re: BigRational,
    pub im: BigRational,
}

impl GaussianRational {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        GaussianRational { re, im }
    }

    pub fn from_rational(re: BigRational) -> Self {
        GaussianRational {
            re,
            im: BigRational::zero(),
        }
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_rational(BigRational::from_integer(BigInt::from(n)))
    }

    /// The imaginary unit i.
    pub fn i() -> Self {
        GaussianRational {
            re: BigRational::zero(),
            im: BigRational::one(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_rational(&self) -> bool {
        self.im.is_zero()
    }

    /// Multiplicative inverse; None for zero.
    pub fn inverse(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let norm = &self.re * &self.re + &self.im * &self.im;
        Some(GaussianRational {
            re: &self.re / &norm,
            im: -&self.im / &norm,
        })
    }
}

impl Add for &GaussianRational {
    type Output = GaussianRational;
    fn add(self, rhs: &GaussianRational) -> GaussianRational {
        GaussianRational {
            re: &self.re + &rhs.re,
            im: &self.im + &rhs.im,
        }
    }
}

impl Sub for &GaussianRational {
    type Output = GaussianRational;
    fn sub(self, rhs: &GaussianRational) -> GaussianRational {
        GaussianRational {
            re: &self.re - &rhs.re,
            im: &self.im - &rhs.im,
        }
    }
}

impl Mul for &GaussianRational {
    type Output = GaussianRational;
    fn mul(self, rhs: &GaussianRational) -> GaussianRational {
        GaussianRational {
            re: &self.re * &rhs.re - &self.im * &rhs.im,
            im: &self.re * &rhs.im + &self.im * &rhs.re,
        }
    }
}

impl Neg for &GaussianRational {
    type Output = GaussianRational;
    fn neg(self) -> GaussianRational {
        GaussianRational {
            re: -&self.re,
            im: -&self.im,
        }
    }
}

impl fmt::Display for GaussianRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_zero() {
            write!(f, "{}", self.re)
        } else if self.re.is_zero() {
            write!(f, "{}i", self.im)
        } else {
            write!(f, "{}{}{}i", self.re, if self.im.is_negative() { "" } else { "+" }, self.im)
        }
    }
}

/// A point of P^1 over Q(i), i.e. an element of Q(i) plus the point at
/// infinity. Used for fiber coordinates, where "same fiber" means equality
/// here.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ProjectiveValue {
    Finite(GaussianRational),
    Infinity,
}

impl ProjectiveValue {
    /// The value of the ratio (u : v); (0 : 0) is not a projective point.
    pub fn from_ratio(u: &GaussianRational, v: &GaussianRational) -> Option<Self> {
        if v.is_zero() {
            if u.is_zero() {
                None
            } else {
                Some(ProjectiveValue::Infinity)
            }
        } else {
            Some(ProjectiveValue::Finite(u * &v.inverse().unwrap()))
        }
    }

    /// x -> 1/x on P^1 (0 and infinity swap).
    pub fn invert(&self) -> Self {
        match self {
            ProjectiveValue::Infinity => {
                ProjectiveValue::Finite(GaussianRational::from_int(0))
            }
            ProjectiveValue::Finite(x) => match x.inverse() {
                Some(inv) => ProjectiveValue::Finite(inv),
                None => ProjectiveValue::Infinity,
            },
        }
    }
}

impl fmt::Display for ProjectiveValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ProjectiveValue::Finite(x) => write!(f, "{x}"),
            ProjectiveValue::Infinity => write!(f, "inf"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(p: i64, q: i64) -> BigRational {
        BigRational::new(BigInt::from(p), BigInt::from(q))
    }

    #[test]
    fn i_squared_is_minus_one() {
        let i = GaussianRational::i();
        assert_eq!(&i * &i, GaussianRational::from_int(-1));
    }

    #[test]
    fn inverse_roundtrip() {
        let z = GaussianRational::new(rat(2, 3), rat(-1, 5));
        let w = z.inverse().unwrap();
        assert_eq!(&z * &w, GaussianRational::from_int(1));
        assert!(GaussianRational::from_int(0).inverse().is_none());
    }

    #[test]
    fn projective_inversion_swaps_zero_and_infinity() {
        let zero = ProjectiveValue::Finite(GaussianRational::from_int(0));
        assert_eq!(zero.invert(), ProjectiveValue::Infinity);
        assert_eq!(ProjectiveValue::Infinity.invert(), zero);
        let x = ProjectiveValue::Finite(GaussianRational::from_rational(rat(1, 9)));
        assert_eq!(
            x.invert(),
            ProjectiveValue::Finite(GaussianRational::from_rational(rat(9, 1)))
        );
    }

    #[test]
    fn ratio_normalization() {
        let u = GaussianRational::from_rational(rat(1, 1));
        let v = GaussianRational::from_rational(rat(9, 1));
        assert_eq!(
            ProjectiveValue::from_ratio(&u, &v),
            Some(ProjectiveValue::Finite(GaussianRational::from_rational(
                rat(1, 9)
            )))
        );
        let zero = GaussianRational::from_int(0);
        assert_eq!(ProjectiveValue::from_ratio(&u, &zero), Some(ProjectiveValue::Infinity));
        assert_eq!(ProjectiveValue::from_ratio(&zero, &zero), None);
    }
}
