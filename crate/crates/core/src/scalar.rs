//! Exact Gaussian rationals `a + b·i` with `a, b ∈ Q`.

use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::rational::Rat;

/// An element of `Q(i)`. Both parts are kept as reduced fractions, so
/// structural equality is mathematical equality.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Scalar {
    re: Rat,
    im: Rat,
}

impl Scalar {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        Scalar { re: Rat::from_big(re), im: Rat::from_big(im) }
    }

    pub fn from_rats(re: Rat, im: Rat) -> Self {
        Scalar { re, im }
    }

    pub fn from_int(n: i64) -> Self {
        Scalar { re: Rat::int(n), im: Rat::ZERO }
    }

    pub fn from_frac(num: i64, den: i64) -> Self {
        Scalar { re: Rat::frac(num, den), im: Rat::ZERO }
    }

    pub fn real(re: BigRational) -> Self {
        Scalar { re: Rat::from_big(re), im: Rat::ZERO }
    }

    /// The imaginary unit.
    pub fn i() -> Self {
        Scalar { re: Rat::ZERO, im: Rat::ONE }
    }

    pub fn re(&self) -> &Rat {
        &self.re
    }

    pub fn im(&self) -> &Rat {
        &self.im
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        Scalar { re: self.re.clone(), im: self.im.neg() }
    }

    /// Multiplicative inverse, `None` for zero.
    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let norm = self.re.mul(&self.re).add(&self.im.mul(&self.im));
        let inv = norm.inv()?;
        Some(Scalar { re: self.re.mul(&inv), im: self.im.mul(&inv).neg() })
    }

    /// `i^k`.
    pub fn i_pow(k: u32) -> Self {
        match k % 4 {
            0 => Scalar::one(),
            1 => Scalar::i(),
            2 => -Scalar::one(),
            _ => -Scalar::i(),
        }
    }

    pub fn scale(&self, q: &BigRational) -> Self {
        self.scale_rat(&Rat::from_big(q.clone()))
    }

    pub fn scale_rat(&self, q: &Rat) -> Self {
        Scalar { re: self.re.mul(q), im: self.im.mul(q) }
    }
}

impl Zero for Scalar {
    fn zero() -> Self {
        Scalar { re: Rat::ZERO, im: Rat::ZERO }
    }
    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
}

impl One for Scalar {
    fn one() -> Self {
        Scalar { re: Rat::ONE, im: Rat::ZERO }
    }
}

impl From<i64> for Scalar {
    fn from(n: i64) -> Self {
        Scalar::from_int(n)
    }
}

impl From<BigRational> for Scalar {
    fn from(q: BigRational) -> Self {
        Scalar::real(q)
    }
}

impl<'a> Add<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        Scalar { re: self.re.add(&rhs.re), im: self.im.add(&rhs.im) }
    }
}

impl<'a> Sub<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        Scalar { re: self.re.sub(&rhs.re), im: self.im.sub(&rhs.im) }
    }
}

impl<'a> Mul<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        match (self.im.is_zero(), rhs.im.is_zero()) {
            (true, true) => Scalar { re: self.re.mul(&rhs.re), im: Rat::ZERO },
            (true, false) => Scalar { re: self.re.mul(&rhs.re), im: self.re.mul(&rhs.im) },
            (false, true) => Scalar { re: self.re.mul(&rhs.re), im: self.im.mul(&rhs.re) },
            (false, false) => Scalar {
                re: self.re.mul(&rhs.re).sub(&self.im.mul(&rhs.im)),
                im: self.re.mul(&rhs.im).add(&self.im.mul(&rhs.re)),
            },
        }
    }
}

impl<'a> Div<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    /// Panics on division by zero, like the rational division it wraps.
    fn div(self, rhs: &Scalar) -> Scalar {
        let inv = rhs.inv().expect("division of Scalar by zero");
        self * &inv
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: Scalar) -> Scalar {
                (&self).$m(&rhs)
            }
        }
        impl<'a> $tr<&'a Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: &Scalar) -> Scalar {
                (&self).$m(rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
forward_owned!(Div, div);

impl AddAssign<&Scalar> for Scalar {
    fn add_assign(&mut self, rhs: &Scalar) {
        if !rhs.re.is_zero() {
            self.re = self.re.add(&rhs.re);
        }
        if !rhs.im.is_zero() {
            self.im = self.im.add(&rhs.im);
        }
    }
}

impl SubAssign<&Scalar> for Scalar {
    fn sub_assign(&mut self, rhs: &Scalar) {
        if !rhs.re.is_zero() {
            self.re = self.re.sub(&rhs.re);
        }
        if !rhs.im.is_zero() {
            self.im = self.im.sub(&rhs.im);
        }
    }
}

impl MulAssign<&Scalar> for Scalar {
    fn mul_assign(&mut self, rhs: &Scalar) {
        *self = &*self * rhs;
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar { re: self.re.neg(), im: self.im.neg() }
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar { re: self.re.neg(), im: self.im.neg() }
    }
}

impl fmt::Display for Scalar {
    /// Renders in the polynomial text grammar: `3/2`, `-i`, `1/2*i`,
    /// `(1 + 2*i)`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.re.is_zero(), self.im.is_zero()) {
            (_, true) => write!(f, "{}", self.re),
            (true, false) => {
                if self.im.is_one() {
                    write!(f, "i")
                } else if self.im.neg().is_one() {
                    write!(f, "-i")
                } else {
                    write!(f, "{}*i", self.im)
                }
            }
            (false, false) => {
                let sign = if self.im.is_negative() { "-" } else { "+" };
                let mag = self.im.abs();
                if mag.is_one() {
                    write!(f, "({} {} i)", self.re, sign)
                } else {
                    write!(f, "({} {} {}*i)", self.re, sign, mag)
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn field_operations_are_exact() {
        let a = Scalar::new(BigRational::new(1.into(), 3.into()), BigRational::new(2.into(), 1.into()));
        let b = Scalar::new(BigRational::new((-5).into(), 7.into()), BigRational::new(1.into(), 2.into()));
        let q = &a / &b;
        assert_eq!(&q * &b, a);
        assert_eq!(&(&a + &b) - &b, a);
        assert_eq!(&Scalar::i() * &Scalar::i(), -Scalar::one());
    }

    #[test]
    fn zero_has_no_inverse() {
        assert!(Scalar::zero().inv().is_none());
    }

    #[test]
    fn display_forms() {
        assert_eq!(Scalar::from_frac(3, 2).to_string(), "3/2");
        assert_eq!((-Scalar::i()).to_string(), "-i");
        let z = Scalar::new(BigRational::from_integer(1.into()), BigRational::new((-1).into(), 2.into()));
        assert_eq!(z.to_string(), "(1 - 1/2*i)");
    }
}
