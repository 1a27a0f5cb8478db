//! Exact coefficient fields: the rationals and prime fields.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The ground field: characteristic 0 (the rationals) or a prime `p` (the field with `p` elements).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "u64", into = "u64")]
pub struct FieldSpec {
    characteristic: u64,
}

impl FieldSpec {
    pub const RATIONALS: FieldSpec = FieldSpec { characteristic: 0 };

    /// Moduli are capped at 2^32 so that products of representatives fit in a `u64`.
    pub fn new(characteristic: u64) -> Result<Self> {
        if characteristic == 0 {
            return Ok(Self::RATIONALS);
        }
        if characteristic >= 1 << 32 {
            return Err(Error::Precondition(format!(
                "characteristic {characteristic} exceeds the supported range"
            )));
        }
        if !is_prime(characteristic) {
            return Err(Error::Precondition(format!(
                "characteristic {characteristic} is not 0 or a prime"
            )));
        }
        Ok(FieldSpec { characteristic })
    }

    pub fn prime(p: u64) -> Self {
        Self::new(p).expect("prime characteristic")
    }

    pub fn characteristic(self) -> u64 {
        self.characteristic
    }

    pub fn is_zero_characteristic(self) -> bool {
        self.characteristic == 0
    }

    pub fn zero(self) -> Scalar {
        self.from_i64(0)
    }

    pub fn one(self) -> Scalar {
        self.from_i64(1)
    }

    pub fn from_i64(self, n: i64) -> Scalar {
        self.from_bigint(&BigInt::from(n))
    }

    pub fn from_bigint(self, n: &BigInt) -> Scalar {
        match self.characteristic {
            0 => Scalar::Rational(BigRational::from_integer(n.clone())),
            p => {
                let r = n.mod_floor(&BigInt::from(p));
                Scalar::Modular {
                    value: r.to_u64().expect("reduced residue"),
                    modulus: p,
                }
            }
        }
    }

    /// Image of a rational number. Fails in characteristic `p` when `p` divides the denominator.
    pub fn from_rational(self, q: &BigRational) -> Result<Scalar> {
        match self.characteristic {
            0 => Ok(Scalar::Rational(q.clone())),
            _ => {
                let num = self.from_bigint(q.numer());
                let den = self.from_bigint(q.denom());
                num.checked_div(&den)
            }
        }
    }
}

impl TryFrom<u64> for FieldSpec {
    type Error = Error;
    fn try_from(value: u64) -> Result<Self> {
        FieldSpec::new(value)
    }
}

impl From<FieldSpec> for u64 {
    fn from(f: FieldSpec) -> u64 {
        f.characteristic
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.characteristic {
            0 => write!(f, "Q"),
            p => write!(f, "F_{p}"),
        }
    }
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// An exact field element. Rationals are kept as reduced fractions; prime-field
/// elements as their representative in `0..p`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Scalar {
    Rational(BigRational),
    Modular { value: u64, modulus: u64 },
}

impl Scalar {
    pub fn field(&self) -> FieldSpec {
        match self {
            Scalar::Rational(_) => FieldSpec::RATIONALS,
            Scalar::Modular { modulus, .. } => FieldSpec {
                characteristic: *modulus,
            },
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Rational(q) => q.is_zero(),
            Scalar::Modular { value, .. } => *value == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Rational(q) => q.is_one(),
            Scalar::Modular { value, .. } => *value == 1,
        }
    }

    /// True for rationals below zero; prime-field elements are never negative.
    pub fn is_negative(&self) -> bool {
        matches!(self, Scalar::Rational(q) if q.is_negative())
    }

    pub fn inv(&self) -> Result<Scalar> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(match self {
            Scalar::Rational(q) => Scalar::Rational(q.recip()),
            Scalar::Modular { value, modulus } => Scalar::Modular {
                value: pow_mod(*value, modulus - 2, *modulus),
                modulus: *modulus,
            },
        })
    }

    pub fn checked_div(&self, rhs: &Scalar) -> Result<Scalar> {
        check_same(self, rhs);
        Ok(self * &rhs.inv()?)
    }

    pub fn pow(&self, mut k: u64) -> Scalar {
        let mut base = self.clone();
        let mut acc = self.field().one();
        while k > 0 {
            if k & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            k >>= 1;
        }
        acc
    }

    /// Signed integer power; negative exponents invert first.
    pub fn powi(&self, k: i64) -> Result<Scalar> {
        if k >= 0 {
            Ok(self.pow(k as u64))
        } else {
            Ok(self.inv()?.pow(k.unsigned_abs()))
        }
    }

    /// The rational value, when this element lives in characteristic 0.
    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            Scalar::Rational(q) => Some(q),
            Scalar::Modular { .. } => None,
        }
    }

    /// Parses `a`, `-a`, or `a/b` in the given field.
    pub fn parse(field: FieldSpec, text: &str) -> Result<Scalar> {
        let q = parse_rational(text)?;
        field.from_rational(&q)
    }
}

pub(crate) fn parse_rational(text: &str) -> Result<BigRational> {
    let t = text.trim();
    let bad = || Error::Parse(format!("invalid rational literal `{text}`"));
    let (n, d) = match t.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (t, "1"),
    };
    let n: BigInt = n.parse().map_err(|_| bad())?;
    let d: BigInt = d.parse().map_err(|_| bad())?;
    if d.is_zero() {
        return Err(Error::DivisionByZero);
    }
    Ok(BigRational::new(n, d))
}

pub(crate) fn format_rational(q: &BigRational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1u64 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, b, m);
        }
        b = mul_mod(b, b, m);
        e >>= 1;
    }
    acc
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn check_same(a: &Scalar, b: &Scalar) {
    if a.field() != b.field() {
        panic!("field mismatch: {} vs {}", a.field(), b.field());
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rational(q) => f.write_str(&format_rational(q)),
            Scalar::Modular { value, .. } => write!(f, "{value}"),
        }
    }
}

impl Add<&Scalar> for &Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        check_same(self, rhs);
        match (self, rhs) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a + b),
            (Scalar::Modular { value: a, modulus }, Scalar::Modular { value: b, .. }) => {
                Scalar::Modular {
                    value: ((*a as u128 + *b as u128) % *modulus as u128) as u64,
                    modulus: *modulus,
                }
            }
            _ => unreachable!(),
        }
    }
}

impl Sub<&Scalar> for &Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        self + &(-rhs)
    }
}

impl Mul<&Scalar> for &Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        check_same(self, rhs);
        match (self, rhs) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a * b),
            (Scalar::Modular { value: a, modulus }, Scalar::Modular { value: b, .. }) => {
                Scalar::Modular {
                    value: mul_mod(*a, *b, *modulus),
                    modulus: *modulus,
                }
            }
            _ => unreachable!(),
        }
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Rational(a) => Scalar::Rational(-a),
            Scalar::Modular { value, modulus } => Scalar::Modular {
                value: if *value == 0 { 0 } else { modulus - value },
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
        *self = &*self + rhs;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(n: i64, d: i64) -> Scalar {
        Scalar::Rational(BigRational::new(n.into(), d.into()))
    }

    #[test]
    fn rational_sum() {
        assert_eq!(&q(1, 2) + &q(1, 3), q(5, 6));
    }

    #[test]
    fn modular_product() {
        let f5 = FieldSpec::prime(5);
        assert_eq!(&f5.from_i64(3) * &f5.from_i64(2), f5.one());
    }

    #[test]
    fn division_by_zero() {
        let one = FieldSpec::RATIONALS.one();
        let zero = FieldSpec::RATIONALS.zero();
        assert_eq!(one.checked_div(&zero), Err(Error::DivisionByZero));
        let f7 = FieldSpec::prime(7);
        assert_eq!(f7.one().checked_div(&f7.zero()), Err(Error::DivisionByZero));
    }

    #[test]
    fn rejects_composite_characteristic() {
        assert!(FieldSpec::new(6).is_err());
        assert!(FieldSpec::new(1).is_err());
        assert!(FieldSpec::new(13).is_ok());
    }

    #[test]
    fn rational_image_in_prime_field() {
        let f3 = FieldSpec::prime(3);
        let half = f3
            .from_rational(&BigRational::new(1.into(), 2.into()))
            .unwrap();
        assert_eq!(half, f3.from_i64(2));
        assert!(f3
            .from_rational(&BigRational::new(1.into(), 3.into()))
            .is_err());
        assert_eq!(Scalar::parse(f3, "-1").unwrap(), f3.from_i64(2));
    }

    fn any_field() -> impl Strategy<Value = FieldSpec> {
        prop_oneof![
            Just(FieldSpec::RATIONALS),
            Just(FieldSpec::prime(2)),
            Just(FieldSpec::prime(3)),
            Just(FieldSpec::prime(101)),
        ]
    }

    fn scalars(field: FieldSpec) -> impl Strategy<Value = Scalar> {
        (-50i64..50, 1i64..12).prop_filter_map("denominator invertible", move |(n, d)| {
            field
                .from_rational(&BigRational::new(n.into(), d.into()))
                .ok()
        })
    }

    proptest! {
        #[test]
        fn field_axioms(
            (a, b, c) in any_field().prop_flat_map(|f| (scalars(f), scalars(f), scalars(f)))
        ) {
            prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert_eq!(&a + &b, &b + &a);
            prop_assert!((&a - &a).is_zero());
            if !a.is_zero() {
                prop_assert!((&a * &a.inv().unwrap()).is_one());
                prop_assert_eq!(b.checked_div(&a).unwrap().mul(a.clone()), b.clone());
            }
        }
    }
}
