//! Prime fields and the rationals, with a single runtime-tagged scalar type.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use super::LinError;

/// The ground field `k`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Field {
    /// `F_p`; the modulus is always prime.
    Prime(u64),
    Rationals,
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d.saturating_mul(d) <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

impl Field {
    pub fn prime(p: u64) -> Result<Self, LinError> {
        // products are taken in u128, so any u64 prime is fine
        if is_prime(p) {
            Ok(Field::Prime(p))
        } else {
            Err(LinError::NotPrime(p))
        }
    }

    pub fn characteristic(&self) -> u64 {
        match self {
            Field::Prime(p) => *p,
            Field::Rationals => 0,
        }
    }

    pub fn zero(&self) -> Scalar {
        self.from_i64(0)
    }

    pub fn one(&self) -> Scalar {
        self.from_i64(1)
    }

    pub fn from_i64(&self, v: i64) -> Scalar {
        match *self {
            Field::Prime(p) => Scalar::Fp { value: (v as i128).rem_euclid(p as i128) as u64, modulus: p },
            Field::Rationals => Scalar::Q(BigRational::from_integer(BigInt::from(v))),
        }
    }

    pub fn from_bigint(&self, v: &BigInt) -> Scalar {
        match *self {
            Field::Prime(p) => {
                let r = v.mod_floor_u64(p);
                Scalar::Fp { value: r, modulus: p }
            }
            Field::Rationals => Scalar::Q(BigRational::from_integer(v.clone())),
        }
    }

    /// All field elements, for finite fields small enough to enumerate.
    pub fn elements(&self) -> Option<Vec<Scalar>> {
        match *self {
            Field::Prime(p) if p <= 1 << 16 => Some((0..p).map(|v| Scalar::Fp { value: v, modulus: p }).collect()),
            _ => None,
        }
    }

    /// Parse a scalar literal: an integer, or `a/b` over the rationals.
    pub fn parse_scalar(&self, s: &str) -> Result<Scalar, LinError> {
        let s = s.trim();
        let bad = || LinError::BadScalar(s.to_string());
        if let Some((num, den)) = s.split_once('/') {
            let n = BigInt::from_str(num.trim()).map_err(|_| bad())?;
            let d = BigInt::from_str(den.trim()).map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            let n = self.from_bigint(&n);
            let d = self.from_bigint(&d);
            return d.inv().map(|di| &n * &di).ok_or_else(bad);
        }
        let n = BigInt::from_str(s).map_err(|_| bad())?;
        Ok(self.from_bigint(&n))
    }
}

trait ModFloorU64 {
    fn mod_floor_u64(&self, p: u64) -> u64;
}

impl ModFloorU64 for BigInt {
    fn mod_floor_u64(&self, p: u64) -> u64 {
        let m = BigInt::from(p);
        let r = ((self % &m) + &m) % &m;
        r.to_u64().expect("residue fits")
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Prime(p) => write!(f, "F{p}"),
            Field::Rationals => write!(f, "Q"),
        }
    }
}

impl FromStr for Field {
    type Err = LinError;

    /// Accepts `F<p>` or `Q`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s == "Q" {
            return Ok(Field::Rationals);
        }
        let p =
            s.strip_prefix('F').and_then(|r| r.parse::<u64>().ok()).ok_or_else(|| LinError::BadField(s.to_string()))?;
        Field::prime(p)
    }
}

/// An exact field element. Mixing elements of different fields is a bug and panics.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Scalar {
    Fp { value: u64, modulus: u64 },
    Q(BigRational),
}

impl Scalar {
    pub fn field(&self) -> Field {
        match self {
            Scalar::Fp { modulus, .. } => Field::Prime(*modulus),
            Scalar::Q(_) => Field::Rationals,
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Fp { value, .. } => *value == 0,
            Scalar::Q(q) => q.is_zero(),
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Fp { value, .. } => *value == 1,
            Scalar::Q(q) => q.is_one(),
        }
    }

    pub fn inv(&self) -> Option<Scalar> {
        if self.is_zero() {
            return None;
        }
        match self {
            Scalar::Fp { value, modulus } => {
                // Fermat: a^(p-2)
                Some(Scalar::Fp { value: pow_mod(*value, modulus - 2, *modulus), modulus: *modulus })
            }
            Scalar::Q(q) => Some(Scalar::Q(q.recip())),
        }
    }

    pub fn pow(&self, mut e: u64) -> Scalar {
        let mut base = self.clone();
        let mut acc = self.field().one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    /// `(-1)^e` in the field of `self`.
    pub fn sign_of(field: Field, odd: bool) -> Scalar {
        if odd {
            -field.one()
        } else {
            field.one()
        }
    }
}

fn pow_mod(b: u64, mut e: u64, m: u64) -> u64 {
    let m = m as u128;
    let mut acc = 1u128 % m;
    let mut base = b as u128 % m;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % m;
        }
        base = base * base % m;
        e >>= 1;
    }
    acc as u64
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Fp { value, .. } => write!(f, "{value}"),
            Scalar::Q(q) => {
                if q.denom().is_one() {
                    write!(f, "{}", q.numer())
                } else {
                    write!(f, "{}/{}", q.numer(), q.denom())
                }
            }
        }
    }
}

fn same_field(a: &Scalar, b: &Scalar) -> u64 {
    match (a, b) {
        (Scalar::Fp { modulus: p, .. }, Scalar::Fp { modulus: q, .. }) if p == q => *p,
        (Scalar::Q(_), Scalar::Q(_)) => 0,
        _ => panic!("scalar field mismatch: {:?} vs {:?}", a.field(), b.field()),
    }
}

impl<'a> Add<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn add(self, rhs: &'a Scalar) -> Scalar {
        let p = same_field(self, rhs);
        match (self, rhs) {
            (Scalar::Fp { value: a, .. }, Scalar::Fp { value: b, .. }) => {
                Scalar::Fp { value: ((*a as u128 + *b as u128) % p as u128) as u64, modulus: p }
            }
            (Scalar::Q(a), Scalar::Q(b)) => Scalar::Q(a + b),
            _ => unreachable!(),
        }
    }
}

impl<'a> Sub<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &'a Scalar) -> Scalar {
        let p = same_field(self, rhs);
        match (self, rhs) {
            (Scalar::Fp { value: a, .. }, Scalar::Fp { value: b, .. }) => {
                Scalar::Fp { value: ((*a as u128 + p as u128 - *b as u128) % p as u128) as u64, modulus: p }
            }
            (Scalar::Q(a), Scalar::Q(b)) => Scalar::Q(a - b),
            _ => unreachable!(),
        }
    }
}

impl<'a> Mul<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &'a Scalar) -> Scalar {
        let p = same_field(self, rhs);
        match (self, rhs) {
            (Scalar::Fp { value: a, .. }, Scalar::Fp { value: b, .. }) => {
                Scalar::Fp { value: ((*a as u128 * *b as u128) % p as u128) as u64, modulus: p }
            }
            (Scalar::Q(a), Scalar::Q(b)) => Scalar::Q(a * b),
            _ => unreachable!(),
        }
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Fp { value, modulus } => {
                Scalar::Fp { value: if *value == 0 { 0 } else { modulus - value }, modulus: *modulus }
            }
            Scalar::Q(q) => Scalar::Q(-q),
        }
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
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

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_check() {
        assert!(Field::prime(2).is_ok());
        assert!(Field::prime(5).is_ok());
        assert!(Field::prime(1).is_err());
        assert!(Field::prime(9).is_err());
    }

    #[test]
    fn fp_arithmetic() {
        let f = Field::prime(5).unwrap();
        let a = f.from_i64(3);
        let b = f.from_i64(4);
        assert_eq!(&a + &b, f.from_i64(2));
        assert_eq!(&a * &b, f.from_i64(2));
        assert_eq!(&a - &b, f.from_i64(4));
        assert_eq!(a.inv().unwrap(), f.from_i64(2));
        assert_eq!(f.from_i64(-1), f.from_i64(4));
        assert!(f.zero().inv().is_none());
    }

    #[test]
    fn rational_parse_and_display() {
        let q = Field::Rationals;
        let x = q.parse_scalar("-6/4").unwrap();
        assert_eq!(x.to_string(), "-3/2");
        let f7 = Field::prime(7).unwrap();
        // 1/2 = 4 mod 7
        assert_eq!(f7.parse_scalar("1/2").unwrap(), f7.from_i64(4));
        assert_eq!("F5".parse::<Field>().unwrap(), Field::Prime(5));
        assert!("F6".parse::<Field>().is_err());
    }
}
