//! Exact field arithmetic over the rationals and prime fields.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScalarError {
    #[error("field mismatch: {0} vs {1}")]
    FieldMismatch(FieldSpec, FieldSpec),
    #[error("division by zero")]
    DivisionByZero,
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("cannot parse {0:?}")]
    Parse(String),
}

/// The ground field: `Q` or `Fp:<prime>`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FieldSpec {
    Rationals,
    PrimeField(u64),
}

impl FieldSpec {
    pub fn rationals() -> Self {
        FieldSpec::Rationals
    }

    pub fn prime(p: u64) -> Result<Self, ScalarError> {
        if is_prime(p) {
            Ok(FieldSpec::PrimeField(p))
        } else {
            Err(ScalarError::NotPrime(p))
        }
    }

    pub fn characteristic(&self) -> u64 {
        match self {
            FieldSpec::Rationals => 0,
            FieldSpec::PrimeField(p) => *p,
        }
    }

    pub fn zero(&self) -> Scalar {
        self.from_i64(0)
    }

    pub fn one(&self) -> Scalar {
        self.from_i64(1)
    }

    pub fn from_i64(&self, n: i64) -> Scalar {
        match *self {
            FieldSpec::Rationals => small(n as i128, 1),
            FieldSpec::PrimeField(p) => Scalar::Fp {
                v: (n as i128).rem_euclid(p as i128) as u64,
                p,
            },
        }
    }

    pub fn from_bigint(&self, n: &BigInt) -> Scalar {
        match *self {
            FieldSpec::Rationals => big(BigRational::from_integer(n.clone())),
            FieldSpec::PrimeField(p) => {
                let m = BigInt::from(p);
                let r = ((n % &m) + &m) % &m;
                Scalar::Fp { v: r.to_u64().unwrap_or(0), p }
            }
        }
    }

    /// `num / den` as a field element.
    pub fn from_ratio(&self, num: &BigInt, den: &BigInt) -> Result<Scalar, ScalarError> {
        let d = self.from_bigint(den);
        if d.is_zero() {
            return Err(ScalarError::DivisionByZero);
        }
        self.from_bigint(num).try_div(&d)
    }

    /// Parses an integer or a fraction `a/b`.
    pub fn parse_scalar(&self, s: &str) -> Result<Scalar, ScalarError> {
        let s = s.trim();
        let bad = || ScalarError::Parse(s.to_string());
        let (num, den) = match s.split_once('/') {
            Some((a, b)) => (a.trim(), b.trim()),
            None => (s, "1"),
        };
        let num = BigInt::from_str(num).map_err(|_| bad())?;
        let den = BigInt::from_str(den).map_err(|_| bad())?;
        self.from_ratio(&num, &den)
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldSpec::Rationals => write!(f, "Q"),
            FieldSpec::PrimeField(p) => write!(f, "Fp:{p}"),
        }
    }
}

impl FromStr for FieldSpec {
    type Err = ScalarError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s == "Q" {
            return Ok(FieldSpec::Rationals);
        }
        if let Some(p) = s.strip_prefix("Fp:") {
            let p: u64 = p.trim().parse().map_err(|_| ScalarError::Parse(s.to_string()))?;
            return FieldSpec::prime(p);
        }
        Err(ScalarError::Parse(s.to_string()))
    }
}

/// An exact field element tagged with its field.
///
/// Rationals whose numerator and denominator fit in `i64` are always stored
/// as `Qs`, so the representation is canonical.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Scalar {
    Qs(i64, i64),
    Q(BigRational),
    Fp { v: u64, p: u64 },
}

fn gcd_u128(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Normalized rational from `i128` parts; `d != 0`.
fn small(n: i128, d: i128) -> Scalar {
    let g = gcd_u128(n.unsigned_abs(), d.unsigned_abs()) as i128;
    let (mut n, mut d) = if g > 1 { (n / g, d / g) } else { (n, d) };
    if d < 0 {
        n = -n;
        d = -d;
    }
    if n > i64::MIN as i128 && n <= i64::MAX as i128 && d <= i64::MAX as i128 {
        Scalar::Qs(n as i64, d as i64)
    } else {
        Scalar::Q(BigRational::new(BigInt::from(n), BigInt::from(d)))
    }
}

fn big(r: BigRational) -> Scalar {
    match (r.numer().to_i64(), r.denom().to_i64()) {
        (Some(n), Some(d)) if n != i64::MIN => Scalar::Qs(n, d),
        _ => Scalar::Q(r),
    }
}

fn to_big(s: &Scalar) -> BigRational {
    match s {
        Scalar::Qs(n, d) => BigRational::new_raw(BigInt::from(*n), BigInt::from(*d)),
        Scalar::Q(r) => r.clone(),
        Scalar::Fp { .. } => unreachable!(),
    }
}

impl Scalar {
    pub fn field(&self) -> FieldSpec {
        match self {
            Scalar::Qs(..) | Scalar::Q(_) => FieldSpec::Rationals,
            Scalar::Fp { p, .. } => FieldSpec::PrimeField(*p),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Qs(n, _) => *n == 0,
            Scalar::Q(q) => q.is_zero(),
            Scalar::Fp { v, .. } => *v == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Qs(n, d) => *n == 1 && *d == 1,
            Scalar::Q(q) => q.is_one(),
            Scalar::Fp { v, .. } => *v == 1,
        }
    }

    fn check(&self, other: &Scalar) -> Result<(), ScalarError> {
        let (a, b) = (self.field(), other.field());
        if a == b {
            Ok(())
        } else {
            Err(ScalarError::FieldMismatch(a, b))
        }
    }

    pub fn try_add(&self, other: &Scalar) -> Result<Scalar, ScalarError> {
        self.check(other)?;
        Ok(match (self, other) {
            (Scalar::Qs(a, b), Scalar::Qs(c, d)) => {
                small(*a as i128 * *d as i128 + *c as i128 * *b as i128, *b as i128 * *d as i128)
            }
            (Scalar::Fp { v: a, p }, Scalar::Fp { v: b, .. }) => Scalar::Fp {
                v: ((*a as u128 + *b as u128) % *p as u128) as u64,
                p: *p,
            },
            (Scalar::Fp { .. }, _) | (_, Scalar::Fp { .. }) => unreachable!(),
            (a, b) => big(to_big(a) + to_big(b)),
        })
    }

    pub fn try_sub(&self, other: &Scalar) -> Result<Scalar, ScalarError> {
        self.try_add(&other.neg_ref())
    }

    pub fn try_mul(&self, other: &Scalar) -> Result<Scalar, ScalarError> {
        self.check(other)?;
        Ok(match (self, other) {
            (Scalar::Qs(a, b), Scalar::Qs(c, d)) => small(*a as i128 * *c as i128, *b as i128 * *d as i128),
            (Scalar::Fp { v: a, p }, Scalar::Fp { v: b, .. }) => Scalar::Fp {
                v: ((*a as u128 * *b as u128) % *p as u128) as u64,
                p: *p,
            },
            (Scalar::Fp { .. }, _) | (_, Scalar::Fp { .. }) => unreachable!(),
            (a, b) => big(to_big(a) * to_big(b)),
        })
    }

    pub fn try_div(&self, other: &Scalar) -> Result<Scalar, ScalarError> {
        self.try_mul(&other.inv()?)
    }

    pub fn neg_ref(&self) -> Scalar {
        match self {
            Scalar::Qs(n, d) => Scalar::Qs(-n, *d),
            Scalar::Q(a) => big(-a),
            Scalar::Fp { v, p } => Scalar::Fp { v: if *v == 0 { 0 } else { p - v }, p: *p },
        }
    }

    pub fn inv(&self) -> Result<Scalar, ScalarError> {
        if self.is_zero() {
            return Err(ScalarError::DivisionByZero);
        }
        Ok(match self {
            Scalar::Qs(n, d) => small(*d as i128, *n as i128),
            Scalar::Q(a) => big(a.recip()),
            Scalar::Fp { v, p } => Scalar::Fp { v: pow_mod(*v, p - 2, *p), p: *p },
        })
    }

    /// Rational numerator and denominator (for `Fp`, the representative over 1).
    pub fn as_ratio(&self) -> (BigInt, BigInt) {
        match self {
            Scalar::Qs(n, d) => (BigInt::from(*n), BigInt::from(*d)),
            Scalar::Q(a) => (a.numer().clone(), a.denom().clone()),
            Scalar::Fp { v, .. } => (BigInt::from(*v), BigInt::one()),
        }
    }

    pub fn is_negative(&self) -> bool {
        match self {
            Scalar::Qs(n, _) => *n < 0,
            Scalar::Q(a) => a.is_negative(),
            Scalar::Fp { .. } => false,
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Qs(n, 1) => write!(f, "{n}"),
            Scalar::Qs(n, d) => write!(f, "{n}/{d}"),
            Scalar::Q(a) => {
                if a.denom().is_one() {
                    write!(f, "{}", a.numer())
                } else {
                    write!(f, "{}/{}", a.numer(), a.denom())
                }
            }
            Scalar::Fp { v, .. } => write!(f, "{v}"),
        }
    }
}

macro_rules! forward_op {
    ($tr:ident, $m:ident, $call:ident) => {
        impl $tr<&Scalar> for &Scalar {
            type Output = Scalar;
            fn $m(self, rhs: &Scalar) -> Scalar {
                self.$call(rhs).expect("scalar operation across different fields")
            }
        }
        impl $tr<Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: Scalar) -> Scalar {
                (&self).$call(&rhs).expect("scalar operation across different fields")
            }
        }
    };
}

forward_op!(Add, add, try_add);
forward_op!(Sub, sub, try_sub);
forward_op!(Mul, mul, try_mul);

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        self.neg_ref()
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        self.neg_ref()
    }
}

fn pow_mod(b: u64, mut e: u64, m: u64) -> u64 {
    let mut r: u128 = 1 % m as u128;
    let mut b128 = (b % m) as u128;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b128 % m as u128;
        }
        b128 = b128 * b128 % m as u128;
        e >>= 1;
    }
    r as u64
}

/// Deterministic Miller-Rabin for 64-bit integers.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for &b in &BASES {
        if n.is_multiple_of(b) {
            return n == b;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'outer: for &a in &BASES {
        let mut x = pow_mod(a, d, n) as u128;
        if x == 1 || x == (n - 1) as u128 {
            continue;
        }
        for _ in 1..s {
            x = x * x % n as u128;
            if x == (n - 1) as u128 {
                continue 'outer;
            }
        }
        return false;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(a: i64, b: i64) -> Scalar {
        FieldSpec::Rationals.from_ratio(&BigInt::from(a), &BigInt::from(b)).unwrap()
    }

    #[test]
    fn rational_sum() {
        assert_eq!(q(1, 2) + q(1, 3), q(5, 6));
        assert_eq!(q(2, 4), q(1, 2));
        assert_eq!(q(3, -6), q(-1, 2));
    }

    #[test]
    fn prime_field_ops() {
        let f5 = FieldSpec::prime(5).unwrap();
        assert_eq!(f5.from_i64(3) + f5.from_i64(4), f5.from_i64(2));
        assert_eq!(f5.from_i64(2).inv().unwrap(), f5.from_i64(3));
        assert_eq!(f5.from_i64(-1), f5.from_i64(4));
        assert_eq!(q(2, 1).inv().unwrap(), q(1, 2));
    }

    #[test]
    fn identities() {
        let x = q(-7, 9);
        assert_eq!(&x + &FieldSpec::Rationals.zero(), x);
        assert_eq!(&x * &FieldSpec::Rationals.one(), x);
    }

    #[test]
    fn errors() {
        assert_eq!(FieldSpec::prime(9), Err(ScalarError::NotPrime(9)));
        assert_eq!(q(0, 1).inv(), Err(ScalarError::DivisionByZero));
        let f7 = FieldSpec::prime(7).unwrap();
        assert!(matches!(
            q(1, 1).try_add(&f7.one()),
            Err(ScalarError::FieldMismatch(_, _))
        ));
    }

    #[test]
    fn parsing() {
        assert_eq!("Q".parse::<FieldSpec>().unwrap(), FieldSpec::Rationals);
        assert_eq!("Fp:7".parse::<FieldSpec>().unwrap(), FieldSpec::PrimeField(7));
        assert!("Fp:8".parse::<FieldSpec>().is_err());
        assert_eq!(FieldSpec::Rationals.parse_scalar("-3/6").unwrap(), q(-1, 2));
        let f7 = FieldSpec::prime(7).unwrap();
        assert_eq!(f7.parse_scalar("1/2").unwrap(), f7.from_i64(4));
    }

    #[test]
    fn small_and_big_agree() {
        let big = q(i64::MAX, 3);
        let twice = &big + &big;
        assert_eq!(twice.as_ratio(), (BigInt::from(i64::MAX) * 2, BigInt::from(3)));
        assert_eq!(&twice - &big, big);
        assert_eq!(&(&twice * &q(3, 2)) * &q(1, i64::MAX), q(1, 1));
        assert!(matches!(&twice - &twice, Scalar::Qs(0, 1)));
    }

    #[test]
    fn primality() {
        let small: Vec<u64> = (0..30).filter(|&n| is_prime(n)).collect();
        assert_eq!(small, vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29]);
        assert!(is_prime(1_000_000_007));
        assert!(!is_prime(1_000_000_007 * 3));
    }
}
