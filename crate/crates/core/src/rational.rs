//! Rationals with an inline `i64` fast path.
//!
//! Almost every coefficient the engine meets has a small numerator and
//! denominator, and `BigRational` spends most of its time in gcd and
//! allocation for those. `Rat` keeps such values inline and falls back to
//! `BigRational` only on overflow. The representation is canonical (a value
//! that fits is always `Small`), so derived equality and hashing are exact.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Rat {
    /// Reduced, denominator positive, neither part equal to `i64::MIN`.
    Small(i64, i64),
    Big(BigRational),
}

fn fits(v: i128) -> bool {
    v > i64::MIN as i128 && v <= i64::MAX as i128
}

/// Binary gcd; `gcd(0, d) = d`.
fn gcd_u64(mut a: u64, mut b: u64) -> u64 {
    if a == 0 {
        return b;
    }
    if b == 0 {
        return a;
    }
    let shift = (a | b).trailing_zeros();
    a >>= a.trailing_zeros();
    loop {
        b >>= b.trailing_zeros();
        if a > b {
            std::mem::swap(&mut a, &mut b);
        }
        b -= a;
        if b == 0 {
            return a << shift;
        }
    }
}

impl Rat {
    pub const ZERO: Rat = Rat::Small(0, 1);
    pub const ONE: Rat = Rat::Small(1, 1);

    pub fn int(n: i64) -> Rat {
        Rat::from_i128(n as i128, 1)
    }

    /// `n/d`; panics when `d = 0`.
    pub fn frac(n: i64, d: i64) -> Rat {
        Rat::from_i128(n as i128, d as i128)
    }

    fn from_i128(n: i128, d: i128) -> Rat {
        assert!(d != 0, "zero denominator");
        if fits(n) && fits(d) {
            return Rat::from_i64(n as i64, d as i64);
        }
        let (mut n, mut d) = if d < 0 { (-n, -d) } else { (n, d) };
        let g = n.gcd(&d);
        n /= g;
        d /= g;
        if fits(n) && fits(d) {
            Rat::Small(n as i64, d as i64)
        } else {
            Rat::Big(BigRational::new_raw(BigInt::from(n), BigInt::from(d)))
        }
    }

    /// Both arguments must avoid `i64::MIN`.
    fn from_i64(n: i64, d: i64) -> Rat {
        let (mut n, mut d) = if d < 0 { (-n, -d) } else { (n, d) };
        if d != 1 {
            let g = gcd_u64(n.unsigned_abs(), d as u64) as i64;
            if g != 1 {
                n /= g;
                d /= g;
            }
        }
        Rat::Small(n, d)
    }

    pub fn from_big(q: BigRational) -> Rat {
        match (q.numer().to_i64(), q.denom().to_i64()) {
            (Some(n), Some(d)) if n != i64::MIN && d != i64::MIN => Rat::Small(n, d),
            _ => Rat::Big(q),
        }
    }

    pub fn to_big(&self) -> BigRational {
        match self {
            Rat::Small(n, d) => BigRational::new_raw(BigInt::from(*n), BigInt::from(*d)),
            Rat::Big(q) => q.clone(),
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Rat::Small(0, _))
    }

    pub fn is_one(&self) -> bool {
        matches!(self, Rat::Small(1, 1))
    }

    pub fn is_negative(&self) -> bool {
        match self {
            Rat::Small(n, _) => *n < 0,
            Rat::Big(q) => q.is_negative(),
        }
    }

    pub fn is_integer(&self) -> bool {
        match self {
            Rat::Small(_, d) => *d == 1,
            Rat::Big(q) => q.is_integer(),
        }
    }

    pub fn abs(&self) -> Rat {
        if self.is_negative() {
            self.neg()
        } else {
            self.clone()
        }
    }

    pub fn neg(&self) -> Rat {
        match self {
            // canonical Small never holds i64::MIN, so this cannot overflow
            Rat::Small(n, d) => Rat::Small(-n, *d),
            Rat::Big(q) => Rat::from_big(-q),
        }
    }

    pub fn add(&self, other: &Rat) -> Rat {
        match (self, other) {
            (Rat::Small(a, 1), Rat::Small(c, 1)) => Rat::from_i128(*a as i128 + *c as i128, 1),
            (Rat::Small(a, b), Rat::Small(c, d)) => {
                Rat::from_i128(*a as i128 * *d as i128 + *c as i128 * *b as i128, *b as i128 * *d as i128)
            }
            _ => Rat::from_big(self.to_big() + other.to_big()),
        }
    }

    pub fn sub(&self, other: &Rat) -> Rat {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Rat) -> Rat {
        match (self, other) {
            (Rat::Small(0, _), _) | (_, Rat::Small(0, _)) => Rat::ZERO,
            (Rat::Small(a, b), Rat::Small(c, d)) => Rat::from_i128(*a as i128 * *c as i128, *b as i128 * *d as i128),
            _ => Rat::from_big(self.to_big() * other.to_big()),
        }
    }

    /// Multiplicative inverse, `None` for zero.
    pub fn inv(&self) -> Option<Rat> {
        match self {
            Rat::Small(0, _) => None,
            Rat::Small(n, d) => Some(Rat::from_i128(*d as i128, *n as i128)),
            Rat::Big(q) => Some(Rat::from_big(q.recip())),
        }
    }

    pub fn div(&self, other: &Rat) -> Option<Rat> {
        other.inv().map(|r| self.mul(&r))
    }
}

impl Default for Rat {
    fn default() -> Self {
        Rat::ZERO
    }
}

impl PartialOrd for Rat {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Rat {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Rat::Small(a, b), Rat::Small(c, d)) => (*a as i128 * *d as i128).cmp(&(*c as i128 * *b as i128)),
            _ => self.to_big().cmp(&other.to_big()),
        }
    }
}

impl From<BigRational> for Rat {
    fn from(q: BigRational) -> Self {
        Rat::from_big(q)
    }
}

impl From<&Rat> for BigRational {
    fn from(q: &Rat) -> Self {
        q.to_big()
    }
}

impl fmt::Display for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Rat::Small(n, 1) => write!(f, "{n}"),
            Rat::Small(n, d) => write!(f, "{n}/{d}"),
            Rat::Big(q) if q.is_integer() => write!(f, "{}", q.numer()),
            Rat::Big(q) => write!(f, "{}/{}", q.numer(), q.denom()),
        }
    }
}
