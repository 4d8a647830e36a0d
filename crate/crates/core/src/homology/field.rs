//! Coefficient fields: exact rationals and prime fields.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::Error;

pub trait Field: Clone + PartialEq + fmt::Debug + fmt::Display + Send + Sync + 'static {
    /// Data needed to build elements (the modulus for prime fields).
    type Ctx: Copy + Send + Sync;

    fn from_i64(n: i64, ctx: Self::Ctx) -> Self;
    fn ctx(&self) -> Self::Ctx;
    fn is_zero(&self) -> bool;
    fn add(&self, rhs: &Self) -> Self;
    fn sub(&self, rhs: &Self) -> Self;
    fn mul(&self, rhs: &Self) -> Self;
    fn neg(&self) -> Self;
    /// Multiplicative inverse; panics on zero.
    fn inv(&self) -> Self;

    fn zero_like(&self) -> Self {
        Self::from_i64(0, self.ctx())
    }
}

/// Rational number kept as a reduced `i64` fraction while it fits, promoted
/// to a big rational otherwise.
#[derive(Clone, Debug)]
pub enum Rational {
    Small(i64, i64),
    Big(Box<BigRational>),
}

impl Rational {
    pub fn new(num: i64, den: i64) -> Self {
        Self::from_i128(num as i128, den as i128)
    }

    fn from_i128(num: i128, den: i128) -> Self {
        assert!(den != 0, "zero denominator");
        let g = num.gcd(&den);
        let (mut n, mut d) = (num / g, den / g);
        if d < 0 {
            n = -n;
            d = -d;
        }
        match (i64::try_from(n), i64::try_from(d)) {
            (Ok(n), Ok(d)) => Rational::Small(n, d),
            _ => Rational::Big(Box::new(BigRational::new(BigInt::from(n), BigInt::from(d)))),
        }
    }

    fn from_big(r: BigRational) -> Self {
        match (r.numer().to_i64(), r.denom().to_i64()) {
            (Some(n), Some(d)) => Rational::Small(n, d),
            _ => Rational::Big(Box::new(r)),
        }
    }

    fn to_big(&self) -> BigRational {
        match self {
            Rational::Small(n, d) => BigRational::new_raw(BigInt::from(*n), BigInt::from(*d)),
            Rational::Big(b) => (**b).clone(),
        }
    }

    fn combine(
        &self,
        rhs: &Self,
        small: impl Fn(i128, i128, i128, i128) -> Option<(i128, i128)>,
        big: impl Fn(BigRational, BigRational) -> BigRational,
    ) -> Self {
        if let (Rational::Small(a, b), Rational::Small(c, d)) = (self, rhs) {
            if let Some((n, m)) = small(*a as i128, *b as i128, *c as i128, *d as i128) {
                return Self::from_i128(n, m);
            }
        }
        Self::from_big(big(self.to_big(), rhs.to_big()))
    }
}

impl PartialEq for Rational {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (Rational::Small(a, b), Rational::Small(c, d)) => a == c && b == d,
            (Rational::Big(a), Rational::Big(b)) => a == b,
            _ => false,
        }
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Rational::Small(n, 1) => write!(f, "{n}"),
            Rational::Small(n, d) => write!(f, "{n}/{d}"),
            Rational::Big(b) => write!(f, "{b}"),
        }
    }
}

impl Field for Rational {
    type Ctx = ();

    fn from_i64(n: i64, _: ()) -> Self {
        Rational::Small(n, 1)
    }

    fn ctx(&self) {}

    fn is_zero(&self) -> bool {
        match self {
            Rational::Small(n, _) => *n == 0,
            Rational::Big(b) => b.is_zero(),
        }
    }

    fn add(&self, rhs: &Self) -> Self {
        self.combine(
            rhs,
            |a, b, c, d| {
                Some((
                    a.checked_mul(d)?.checked_add(c.checked_mul(b)?)?,
                    b.checked_mul(d)?,
                ))
            },
            |x, y| x + y,
        )
    }

    fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }

    fn mul(&self, rhs: &Self) -> Self {
        self.combine(
            rhs,
            |a, b, c, d| Some((a.checked_mul(c)?, b.checked_mul(d)?)),
            |x, y| x * y,
        )
    }

    fn neg(&self) -> Self {
        match self {
            Rational::Small(n, d) if *n != i64::MIN => Rational::Small(-n, *d),
            _ => Self::from_big(-self.to_big()),
        }
    }

    fn inv(&self) -> Self {
        assert!(!self.is_zero(), "inverse of zero");
        match self {
            Rational::Small(n, d) => Self::from_i128(*d as i128, *n as i128),
            Rational::Big(b) => Self::from_big(b.recip()),
        }
    }
}

impl Rational {
    pub fn is_one(&self) -> bool {
        matches!(self, Rational::Small(1, 1)) || matches!(self, Rational::Big(b) if b.is_one())
    }

    pub fn is_negative(&self) -> bool {
        match self {
            Rational::Small(n, _) => *n < 0,
            Rational::Big(b) => b.is_negative(),
        }
    }
}

/// Element of the prime field `F_p`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Fp {
    v: u32,
    p: u32,
}

impl Fp {
    pub fn new(n: i64, p: u32) -> Self {
        Fp {
            v: n.rem_euclid(p as i64) as u32,
            p,
        }
    }

    pub fn value(&self) -> u32 {
        self.v
    }

    fn pow(&self, mut e: u64) -> Self {
        let mut base = *self;
        let mut acc = Fp {
            v: 1 % self.p,
            p: self.p,
        };
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }
}

impl fmt::Display for Fp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.v)
    }
}

impl Field for Fp {
    type Ctx = u32;

    fn from_i64(n: i64, p: u32) -> Self {
        Fp::new(n, p)
    }

    fn ctx(&self) -> u32 {
        self.p
    }

    fn is_zero(&self) -> bool {
        self.v == 0
    }

    fn add(&self, rhs: &Self) -> Self {
        let s = self.v as u64 + rhs.v as u64;
        Fp {
            v: (s % self.p as u64) as u32,
            p: self.p,
        }
    }

    fn sub(&self, rhs: &Self) -> Self {
        let s = self.v as u64 + (self.p - rhs.v) as u64;
        Fp {
            v: (s % self.p as u64) as u32,
            p: self.p,
        }
    }

    fn mul(&self, rhs: &Self) -> Self {
        Fp {
            v: ((self.v as u64 * rhs.v as u64) % self.p as u64) as u32,
            p: self.p,
        }
    }

    fn neg(&self) -> Self {
        Fp {
            v: (self.p - self.v) % self.p,
            p: self.p,
        }
    }

    fn inv(&self) -> Self {
        assert!(self.v != 0, "inverse of zero");
        self.pow(self.p as u64 - 2)
    }
}

/// Which coefficient field a computation runs over.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub enum FieldSpec {
    #[default]
    Rational,
    Prime(u32),
}

impl FieldSpec {
    pub fn prime(p: u32) -> Result<Self, Error> {
        let is_prime = p >= 2
            && (2..)
                .take_while(|d| d * d <= p)
                .all(|d| !p.is_multiple_of(d));
        if !is_prime || p > (1 << 31) {
            return Err(Error::InvalidArgument(format!(
                "{p} is not a supported prime"
            )));
        }
        Ok(FieldSpec::Prime(p))
    }

    pub fn characteristic(&self) -> u32 {
        match self {
            FieldSpec::Rational => 0,
            FieldSpec::Prime(p) => *p,
        }
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldSpec::Rational => f.write_str("Q"),
            FieldSpec::Prime(p) => write!(f, "Fp:{p}"),
        }
    }
}

impl FromStr for FieldSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        let s = s.trim();
        if s == "Q" {
            return Ok(FieldSpec::Rational);
        }
        let p = s
            .strip_prefix("Fp:")
            .and_then(|p| p.parse::<u32>().ok())
            .ok_or_else(|| {
                Error::MalformedSyntax(format!("field must be Q or Fp:<p>, got '{s}'"))
            })?;
        FieldSpec::prime(p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn rational_basics() {
        let a = Rational::new(2, 4);
        assert_eq!(a, Rational::new(1, 2));
        assert_eq!(a.add(&Rational::new(1, 2)), Rational::from_i64(1, ()));
        assert_eq!(a.inv(), Rational::from_i64(2, ()));
        assert!(a.sub(&a).is_zero());
        assert_eq!(Rational::new(3, -6).to_string(), "-1/2");
    }

    #[test]
    fn rational_promotes_on_overflow() {
        let big = Rational::from_i64(i64::MAX, ());
        let sq = big.mul(&big);
        assert!(matches!(sq, Rational::Big(_)));
        let back = sq.mul(&big.inv());
        assert_eq!(back, big);
    }

    #[test]
    fn prime_field() {
        let a = Fp::new(3, 7);
        assert_eq!(a.inv().mul(&a), Fp::new(1, 7));
        assert_eq!(a.neg().add(&a), Fp::new(0, 7));
        assert_eq!(Fp::new(-1, 2), Fp::new(1, 2));
    }

    #[test]
    fn field_spec_parsing() {
        assert_eq!("Q".parse::<FieldSpec>().unwrap(), FieldSpec::Rational);
        assert_eq!("Fp:5".parse::<FieldSpec>().unwrap(), FieldSpec::Prime(5));
        assert!("Fp:6".parse::<FieldSpec>().is_err());
        assert!("R".parse::<FieldSpec>().is_err());
        assert_eq!(FieldSpec::Prime(3).to_string(), "Fp:3");
    }

    proptest! {
        #[test]
        fn rational_field_axioms(a in -1000i64..1000, b in 1i64..1000, c in -1000i64..1000, d in 1i64..1000) {
            let x = Rational::new(a, b);
            let y = Rational::new(c, d);
            prop_assert_eq!(x.add(&y).sub(&y), x.clone());
            if !y.is_zero() {
                prop_assert_eq!(x.mul(&y).mul(&y.inv()), x);
            }
        }
    }
}
