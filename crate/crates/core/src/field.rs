//! Exact scalars over the rationals and over prime fields.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::Rng;

use crate::error::{Error, Result};

/// Largest supported prime modulus; products of two residues must fit in `u64`.
pub const MAX_PRIME: u64 = u32::MAX as u64;

/// The base field of every object in the toolkit.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FieldSpec {
    Rationals,
    Prime(u64),
}

impl FieldSpec {
    /// Prime field `F_p`. Rejects composite and oversized moduli.
    pub fn prime(p: u64) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::InvalidParameter(format!("{p} is not prime")));
        }
        if p > MAX_PRIME {
            return Err(Error::InvalidParameter(format!(
                "prime {p} exceeds the supported maximum {MAX_PRIME}"
            )));
        }
        Ok(FieldSpec::Prime(p))
    }

    pub fn zero(&self) -> Scalar {
        match *self {
            FieldSpec::Rationals => Scalar::Rational(BigRational::zero()),
            FieldSpec::Prime(p) => Scalar::Modular { value: 0, modulus: p },
        }
    }

    pub fn one(&self) -> Scalar {
        match *self {
            FieldSpec::Rationals => Scalar::Rational(BigRational::one()),
            FieldSpec::Prime(p) => Scalar::Modular { value: 1 % p, modulus: p },
        }
    }

    pub fn from_i64(&self, v: i64) -> Scalar {
        match *self {
            FieldSpec::Rationals => Scalar::Rational(BigRational::from_integer(BigInt::from(v))),
            FieldSpec::Prime(p) => Scalar::Modular {
                value: v.rem_euclid(p as i64) as u64,
                modulus: p,
            },
        }
    }

    pub fn from_u64(&self, v: u64) -> Scalar {
        match *self {
            FieldSpec::Rationals => Scalar::Rational(BigRational::from_integer(BigInt::from(v))),
            FieldSpec::Prime(p) => Scalar::Modular { value: v % p, modulus: p },
        }
    }

    /// `num / den` in this field; fails when `den` vanishes in the field.
    pub fn from_fraction(&self, num: &BigInt, den: &BigInt) -> Result<Scalar> {
        match *self {
            FieldSpec::Rationals => {
                if den.is_zero() {
                    return Err(Error::Parse("zero denominator".into()));
                }
                Ok(Scalar::Rational(BigRational::new(num.clone(), den.clone())))
            }
            FieldSpec::Prime(p) => {
                let n = reduce_bigint(num, p);
                let d = reduce_bigint(den, p);
                if d == 0 {
                    return Err(Error::Parse(format!("denominator {den} vanishes modulo {p}")));
                }
                let inv = Scalar::Modular { value: d, modulus: p }.inv().expect("nonzero residue");
                Ok(&Scalar::Modular { value: n, modulus: p } * &inv)
            }
        }
    }

    /// Parses `"n"` or `"n/d"`.
    pub fn parse(&self, text: &str) -> Result<Scalar> {
        let text = text.trim();
        let (num, den) = match text.split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (text, "1"),
        };
        let num: BigInt = num
            .parse()
            .map_err(|_| Error::Parse(format!("invalid scalar {text:?}")))?;
        let den: BigInt = den
            .parse()
            .map_err(|_| Error::Parse(format!("invalid scalar {text:?}")))?;
        self.from_fraction(&num, &den)
    }

    pub fn contains(&self, s: &Scalar) -> bool {
        match (self, s) {
            (FieldSpec::Rationals, Scalar::Rational(_)) => true,
            (FieldSpec::Prime(p), Scalar::Modular { modulus, .. }) => p == modulus,
            _ => false,
        }
    }

    /// Number of elements, `None` for the rationals.
    pub fn order(&self) -> Option<u64> {
        match *self {
            FieldSpec::Rationals => None,
            FieldSpec::Prime(p) => Some(p),
        }
    }

    /// Uniform sample from `{0, .., sample_size - 1}` (reduced into the field).
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R, sample_size: u64) -> Scalar {
        self.from_u64(rng.gen_range(0..sample_size.max(1)))
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldSpec::Rationals => write!(f, "Q"),
            FieldSpec::Prime(p) => write!(f, "F_{p}"),
        }
    }
}

fn reduce_bigint(v: &BigInt, p: u64) -> u64 {
    let r = v.mod_floor(&BigInt::from(p));
    r.to_u64().expect("residue fits in u64")
}

pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d.saturating_mul(d) <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// An exact field element in canonical form.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Scalar {
    Rational(BigRational),
    Modular { value: u64, modulus: u64 },
}

impl Scalar {
    pub fn field(&self) -> FieldSpec {
        match self {
            Scalar::Rational(_) => FieldSpec::Rationals,
            Scalar::Modular { modulus, .. } => FieldSpec::Prime(*modulus),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Rational(r) => r.is_zero(),
            Scalar::Modular { value, .. } => *value == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Rational(r) => r.is_one(),
            Scalar::Modular { value, .. } => *value == 1,
        }
    }

    /// Multiplicative inverse, `None` for zero.
    pub fn inv(&self) -> Option<Scalar> {
        if self.is_zero() {
            return None;
        }
        Some(match self {
            Scalar::Rational(r) => Scalar::Rational(r.recip()),
            Scalar::Modular { value, modulus } => Scalar::Modular {
                value: pow_mod(*value, modulus - 2, *modulus),
                modulus: *modulus,
            },
        })
    }

    pub fn div(&self, other: &Scalar) -> Option<Scalar> {
        other.inv().map(|i| self * &i)
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            Scalar::Rational(r) => Some(r),
            Scalar::Modular { .. } => None,
        }
    }
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % m;
        }
        base = base * base % m;
        exp >>= 1;
    }
    acc
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rational(r) => {
                if r.denom().is_one() {
                    write!(f, "{}", r.numer())
                } else {
                    write!(f, "{}/{}", r.numer(), r.denom())
                }
            }
            Scalar::Modular { value, .. } => write!(f, "{value}"),
        }
    }
}

fn mismatch(a: &Scalar, b: &Scalar) -> ! {
    panic!("mixed-field arithmetic: {} and {}", a.field(), b.field())
}

impl<'a> Add<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn add(self, rhs: &'a Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a + b),
            (Scalar::Modular { value: a, modulus: p }, Scalar::Modular { value: b, modulus: q })
                if p == q =>
            {
                Scalar::Modular { value: (a + b) % p, modulus: *p }
            }
            _ => mismatch(self, rhs),
        }
    }
}

impl<'a> Sub<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &'a Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a - b),
            (Scalar::Modular { value: a, modulus: p }, Scalar::Modular { value: b, modulus: q })
                if p == q =>
            {
                Scalar::Modular { value: (a + p - b) % p, modulus: *p }
            }
            _ => mismatch(self, rhs),
        }
    }
}

impl<'a> Mul<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &'a Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a * b),
            (Scalar::Modular { value: a, modulus: p }, Scalar::Modular { value: b, modulus: q })
                if p == q =>
            {
                Scalar::Modular { value: a * b % p, modulus: *p }
            }
            _ => mismatch(self, rhs),
        }
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Rational(a) => Scalar::Rational(-a),
            Scalar::Modular { value, modulus } => Scalar::Modular {
                value: (modulus - value) % modulus,
                modulus: *modulus,
            },
        }
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
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
            fn $m(self, rhs: &'a Scalar) -> Scalar {
                (&self).$m(rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

/// Integer clearing helper for fraction-free elimination: returns the row scaled to
/// integers and the positive multiplier used.
pub(crate) fn clear_denominators(row: &[BigRational]) -> (Vec<BigInt>, BigInt) {
    let lcm = row
        .iter()
        .fold(BigInt::one(), |acc, r| acc.lcm(r.denom()));
    let ints = row
        .iter()
        .map(|r| r.numer() * (&lcm / r.denom()))
        .collect();
    (ints, lcm.abs())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_forms() {
        let q = FieldSpec::Rationals;
        assert_eq!(q.parse("2/4").unwrap().to_string(), "1/2");
        assert_eq!(q.parse("3/-6").unwrap().to_string(), "-1/2");
        assert_eq!(q.parse("-0/5").unwrap().to_string(), "0");
        let f5 = FieldSpec::prime(5).unwrap();
        assert_eq!(f5.parse("-1").unwrap().to_string(), "4");
        assert_eq!(f5.parse("1/2").unwrap().to_string(), "3");
        assert!(f5.parse("1/5").is_err());
        assert!(q.parse("1/0").is_err());
        assert!(q.parse("x").is_err());
    }

    #[test]
    fn prime_validation() {
        assert!(FieldSpec::prime(4).is_err());
        assert!(FieldSpec::prime(1).is_err());
        assert!(FieldSpec::prime(2).is_ok());
        assert!(FieldSpec::prime(4_294_967_311).is_err());
    }

    #[test]
    fn modular_inverse() {
        let f7 = FieldSpec::prime(7).unwrap();
        for v in 1..7 {
            let s = f7.from_i64(v);
            assert!((&s * &s.inv().unwrap()).is_one());
        }
        assert!(f7.zero().inv().is_none());
    }

    #[test]
    #[should_panic(expected = "mixed-field")]
    fn mixed_fields_panic() {
        let _ = FieldSpec::Rationals.one() + FieldSpec::prime(3).unwrap().one();
    }
}
