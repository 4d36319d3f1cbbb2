//! Exact coefficient fields: the rationals and prime fields `F_p`.
//!
//! A [`Field`] is a runtime descriptor; a [`Scalar`] carries enough
//! information to do arithmetic on its own, so sparse containers never need
//! to store a zero or consult the field except to create constants.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FieldError {
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("unknown field `{0}` (expected Q, F<p> or Fp with a prime)")]
    Unknown(String),
    #[error("cannot parse scalar `{0}`")]
    BadScalar(String),
    #[error("division by zero")]
    DivisionByZero,
}

/// Coefficient field.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[derive(Default)]
pub enum Field {
    #[default]
    Rational,
    Prime(u64),
}


fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

impl Field {
    /// `F_p`; rejects composite moduli and anything that would overflow `u64`
    /// products.
    pub fn prime(p: u64) -> Result<Field, FieldError> {
        if !is_prime(p) || p >= (1 << 31) {
            return Err(FieldError::NotPrime(p));
        }
        Ok(Field::Prime(p))
    }

    pub fn characteristic(&self) -> u64 {
        match self {
            Field::Rational => 0,
            Field::Prime(p) => *p,
        }
    }

    pub fn zero(&self) -> Scalar {
        self.from_i64(0)
    }

    pub fn one(&self) -> Scalar {
        self.from_i64(1)
    }

    pub fn from_i64(&self, n: i64) -> Scalar {
        match self {
            Field::Rational => Scalar::Q(BigRational::from_integer(BigInt::from(n))),
            Field::Prime(p) => Scalar::Fp {
                value: n.rem_euclid(*p as i64) as u64,
                modulus: *p,
            },
        }
    }

    pub fn from_bigint(&self, n: &BigInt) -> Scalar {
        match self {
            Field::Rational => Scalar::Q(BigRational::from_integer(n.clone())),
            Field::Prime(p) => {
                let r = n.mod_floor(&BigInt::from(*p));
                Scalar::Fp {
                    value: r.to_u64().expect("residue fits"),
                    modulus: *p,
                }
            }
        }
    }

    /// `binom(n, k)` as an element of the field (reduced mod p in `F_p`).
    pub fn binomial(&self, n: u64, k: u64) -> Scalar {
        if k > n {
            return self.zero();
        }
        let b: BigInt = num_integer::binomial(BigInt::from(n), BigInt::from(k));
        self.from_bigint(&b)
    }

    /// Parses `"p/q"` or an integer into the field.
    pub fn parse_scalar(&self, s: &str) -> Result<Scalar, FieldError> {
        let s = s.trim();
        let bad = || FieldError::BadScalar(s.to_string());
        let (num, den) = match s.split_once('/') {
            Some((a, b)) => (
                BigInt::from_str(a.trim()).map_err(|_| bad())?,
                BigInt::from_str(b.trim()).map_err(|_| bad())?,
            ),
            None => (BigInt::from_str(s).map_err(|_| bad())?, BigInt::one()),
        };
        if den.is_zero() {
            return Err(FieldError::DivisionByZero);
        }
        let n = self.from_bigint(&num);
        let d = self.from_bigint(&den);
        let d_inv = d.inv().ok_or(FieldError::DivisionByZero)?;
        Ok(&n * &d_inv)
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Rational => write!(f, "Q"),
            Field::Prime(p) => write!(f, "F{p}"),
        }
    }
}

impl FromStr for Field {
    type Err = FieldError;

    /// Accepts `Q`, `QQ` and `F<p>` (e.g. `F2`, `F101`).
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim();
        match t {
            "Q" | "QQ" | "q" => Ok(Field::Rational),
            _ => {
                let digits = t
                    .strip_prefix('F')
                    .or_else(|| t.strip_prefix("GF"))
                    .ok_or_else(|| FieldError::Unknown(t.to_string()))?;
                let p: u64 = digits
                    .parse()
                    .map_err(|_| FieldError::Unknown(t.to_string()))?;
                Field::prime(p)
            }
        }
    }
}

/// An exact field element.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Scalar {
    Q(BigRational),
    Fp { value: u64, modulus: u64 },
}

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1u64;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    acc
}

impl Scalar {
    pub fn field(&self) -> Field {
        match self {
            Scalar::Q(_) => Field::Rational,
            Scalar::Fp { modulus, .. } => Field::Prime(*modulus),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Q(q) => q.is_zero(),
            Scalar::Fp { value, .. } => *value == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Q(q) => q.is_one(),
            Scalar::Fp { value, .. } => *value == 1,
        }
    }

    pub fn inv(&self) -> Option<Scalar> {
        if self.is_zero() {
            return None;
        }
        Some(match self {
            Scalar::Q(q) => Scalar::Q(q.recip()),
            Scalar::Fp { value, modulus } => Scalar::Fp {
                value: pow_mod(*value, modulus - 2, *modulus),
                modulus: *modulus,
            },
        })
    }

    /// True when the element prints with a leading minus sign.
    pub fn is_negative_display(&self) -> bool {
        match self {
            Scalar::Q(q) => q.is_negative(),
            Scalar::Fp { .. } => false,
        }
    }
}

fn same_field(a: &Scalar, b: &Scalar) -> u64 {
    match (a, b) {
        (Scalar::Fp { modulus: p, .. }, Scalar::Fp { modulus: q, .. }) if p == q => *p,
        _ => panic!("mixed coefficient fields: {a:?} and {b:?}"),
    }
}

impl<'a> Add<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn add(self, rhs: &'a Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Q(a), Scalar::Q(b)) => Scalar::Q(a + b),
            _ => {
                let m = same_field(self, rhs);
                let (Scalar::Fp { value: a, .. }, Scalar::Fp { value: b, .. }) = (self, rhs) else {
                    unreachable!()
                };
                Scalar::Fp {
                    value: (a + b) % m,
                    modulus: m,
                }
            }
        }
    }
}

impl<'a> Mul<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &'a Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Q(a), Scalar::Q(b)) => Scalar::Q(a * b),
            _ => {
                let m = same_field(self, rhs);
                let (Scalar::Fp { value: a, .. }, Scalar::Fp { value: b, .. }) = (self, rhs) else {
                    unreachable!()
                };
                Scalar::Fp {
                    value: a * b % m,
                    modulus: m,
                }
            }
        }
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Q(a) => Scalar::Q(-a),
            Scalar::Fp { value, modulus } => Scalar::Fp {
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

impl<'a> Sub<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &'a Scalar) -> Scalar {
        self + &(-rhs)
    }
}

impl Add for Scalar {
    type Output = Scalar;
    fn add(self, rhs: Scalar) -> Scalar {
        &self + &rhs
    }
}

impl Sub for Scalar {
    type Output = Scalar;
    fn sub(self, rhs: Scalar) -> Scalar {
        &self - &rhs
    }
}

impl Mul for Scalar {
    type Output = Scalar;
    fn mul(self, rhs: Scalar) -> Scalar {
        &self * &rhs
    }
}

impl AddAssign<&Scalar> for Scalar {
    fn add_assign(&mut self, rhs: &Scalar) {
        match (&mut *self, rhs) {
            (Scalar::Q(a), Scalar::Q(b)) => *a += b,
            _ => *self = &*self + rhs,
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Q(q) => {
                if q.denom().is_one() {
                    write!(f, "{}", q.numer())
                } else {
                    write!(f, "{}/{}", q.numer(), q.denom())
                }
            }
            Scalar::Fp { value, .. } => write!(f, "{value}"),
        }
    }
}
