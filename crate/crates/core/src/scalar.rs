//! Exact field elements: rationals (small fast path, big fallback) or residues mod a prime.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Field {
    Q,
    Fp(u64),
}

impl Field {
    pub fn fp(p: u64) -> Result<Field, Error> {
        if !(2..(1 << 31)).contains(&p) || !is_prime(p) {
            return Err(Error::Field(format!("{p} is not a prime below 2^31")));
        }
        Ok(Field::Fp(p))
    }

    pub fn zero(self) -> Scalar {
        self.int(0)
    }

    pub fn one(self) -> Scalar {
        self.int(1)
    }

    pub fn int(self, n: i64) -> Scalar {
        match self {
            Field::Q => Scalar(Repr::Small(n, 1)),
            Field::Fp(p) => Scalar(Repr::Fp(n.rem_euclid(p as i64) as u64, p)),
        }
    }

    /// `(-1)^k`
    pub fn sign(self, k: i64) -> Scalar {
        if k.rem_euclid(2) == 0 {
            self.one()
        } else {
            self.int(-1)
        }
    }

    pub fn parse(self, s: &str) -> Result<Scalar, Error> {
        let s = s.trim();
        let (num, den) = match s.split_once('/') {
            Some((a, b)) => (a.trim(), b.trim()),
            None => (s, "1"),
        };
        let bad = || Error::Field(format!("bad scalar literal '{s}'"));
        let num = BigInt::from_str(num).map_err(|_| bad())?;
        let den = BigInt::from_str(den).map_err(|_| bad())?;
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        match self {
            Field::Q => Ok(Scalar::from_big(BigRational::new(num, den))),
            Field::Fp(p) => {
                let pb = BigInt::from(p);
                let n = num.mod_floor(&pb).to_u64().unwrap();
                let d = den.mod_floor(&pb).to_u64().unwrap();
                if d == 0 {
                    return Err(Error::DivisionByZero);
                }
                Ok(Scalar(Repr::Fp(n, p)).mul(&Scalar(Repr::Fp(d, p)).inv()?))
            }
        }
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Q => write!(f, "Q"),
            Field::Fp(p) => write!(f, "Fp:{p}"),
        }
    }
}

impl FromStr for Field {
    type Err = Error;
    fn from_str(s: &str) -> Result<Field, Error> {
        let s = s.trim();
        if s == "Q" {
            return Ok(Field::Q);
        }
        if let Some(p) = s.strip_prefix("Fp:") {
            let p: u64 = p
                .trim()
                .parse()
                .map_err(|_| Error::Field(format!("bad prime in '{s}'")))?;
            return Field::fp(p);
        }
        Err(Error::Field(format!("unknown field '{s}'")))
    }
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
enum Repr {
    /// Normalized: den > 0, gcd(num, den) = 1, and the value does not fit here iff it is `Big`.
    Small(i64, i64),
    Big(BigRational),
    Fp(u64, u64),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Scalar(Repr);

fn gcd_i128(a: i128, b: i128) -> i128 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

impl Scalar {
    fn from_i128(num: i128, den: i128) -> Scalar {
        debug_assert!(den != 0);
        let g = gcd_i128(num, den);
        let (mut n, mut d) = (num / g, den / g);
        if d < 0 {
            n = -n;
            d = -d;
        }
        match (i64::try_from(n), i64::try_from(d)) {
            (Ok(n), Ok(d)) => Scalar(Repr::Small(n, d)),
            _ => Scalar(Repr::Big(BigRational::new(BigInt::from(n), BigInt::from(d)))),
        }
    }

    fn from_big(r: BigRational) -> Scalar {
        match (r.numer().to_i64(), r.denom().to_i64()) {
            (Some(n), Some(d)) => Scalar(Repr::Small(n, d)),
            _ => Scalar(Repr::Big(r)),
        }
    }

    fn to_big(&self) -> BigRational {
        match &self.0 {
            Repr::Small(n, d) => BigRational::new_raw(BigInt::from(*n), BigInt::from(*d)),
            Repr::Big(r) => r.clone(),
            Repr::Fp(..) => panic!("prime-field element used as a rational"),
        }
    }

    pub fn field(&self) -> Field {
        match self.0 {
            Repr::Fp(_, p) => Field::Fp(p),
            _ => Field::Q,
        }
    }

    pub fn is_zero(&self) -> bool {
        match &self.0 {
            Repr::Small(n, _) => *n == 0,
            Repr::Big(r) => r.is_zero(),
            Repr::Fp(v, _) => *v == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match &self.0 {
            Repr::Small(n, d) => *n == 1 && *d == 1,
            Repr::Big(r) => r.is_one(),
            Repr::Fp(v, _) => *v == 1,
        }
    }

    pub fn add(&self, o: &Scalar) -> Scalar {
        match (&self.0, &o.0) {
            (Repr::Small(a, b), Repr::Small(c, d)) => {
                if *b == 1 && *d == 1 {
                    if let Some(s) = a.checked_add(*c) {
                        return Scalar(Repr::Small(s, 1));
                    }
                }
                let (a, b, c, d) = (*a as i128, *b as i128, *c as i128, *d as i128);
                match (a.checked_mul(d), c.checked_mul(b), b.checked_mul(d)) {
                    (Some(x), Some(y), Some(z)) => match x.checked_add(y) {
                        Some(n) => Scalar::from_i128(n, z),
                        None => Scalar::from_big(self.to_big() + o.to_big()),
                    },
                    _ => Scalar::from_big(self.to_big() + o.to_big()),
                }
            }
            (Repr::Fp(a, p), Repr::Fp(b, q)) => {
                assert_eq!(p, q, "mixed prime fields");
                Scalar(Repr::Fp((a + b) % p, *p))
            }
            (Repr::Fp(..), _) | (_, Repr::Fp(..)) => panic!("mixed fields"),
            _ => Scalar::from_big(self.to_big() + o.to_big()),
        }
    }

    pub fn neg(&self) -> Scalar {
        match &self.0 {
            Repr::Small(n, d) => match n.checked_neg() {
                Some(m) => Scalar(Repr::Small(m, *d)),
                None => Scalar::from_big(-self.to_big()),
            },
            Repr::Big(r) => Scalar::from_big(-r.clone()),
            Repr::Fp(v, p) => Scalar(Repr::Fp((p - v) % p, *p)),
        }
    }

    pub fn sub(&self, o: &Scalar) -> Scalar {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Scalar) -> Scalar {
        match (&self.0, &o.0) {
            (Repr::Small(a, b), Repr::Small(c, d)) => {
                if *b == 1 && *d == 1 {
                    if let Some(s) = a.checked_mul(*c) {
                        return Scalar(Repr::Small(s, 1));
                    }
                }
                let (a, b, c, d) = (*a as i128, *b as i128, *c as i128, *d as i128);
                match (a.checked_mul(c), b.checked_mul(d)) {
                    (Some(n), Some(z)) => Scalar::from_i128(n, z),
                    _ => Scalar::from_big(self.to_big() * o.to_big()),
                }
            }
            (Repr::Fp(a, p), Repr::Fp(b, q)) => {
                assert_eq!(p, q, "mixed prime fields");
                Scalar(Repr::Fp(a * b % p, *p))
            }
            (Repr::Fp(..), _) | (_, Repr::Fp(..)) => panic!("mixed fields"),
            _ => Scalar::from_big(self.to_big() * o.to_big()),
        }
    }

    pub fn inv(&self) -> Result<Scalar, Error> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(match &self.0 {
            Repr::Small(n, d) => Scalar::from_i128(*d as i128, *n as i128),
            Repr::Big(r) => Scalar::from_big(r.recip()),
            Repr::Fp(v, p) => Scalar(Repr::Fp(pow_mod(*v, p - 2, *p), *p)),
        })
    }

    pub fn div(&self, o: &Scalar) -> Result<Scalar, Error> {
        Ok(self.mul(&o.inv()?))
    }

    /// Total order used only for deterministic tie breaking.
    pub fn canonical_cmp(&self, o: &Scalar) -> Ordering {
        match (&self.0, &o.0) {
            (Repr::Fp(a, _), Repr::Fp(b, _)) => a.cmp(b),
            _ => self.to_big().cmp(&o.to_big()),
        }
    }

    pub fn is_negative(&self) -> bool {
        match &self.0 {
            Repr::Small(n, _) => *n < 0,
            Repr::Big(r) => r.is_negative(),
            Repr::Fp(..) => false,
        }
    }
}

fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1u64;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    r
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.0 {
            Repr::Small(n, 1) => write!(f, "{n}"),
            Repr::Small(n, d) => write!(f, "{n}/{d}"),
            Repr::Big(r) => write!(f, "{r}"),
            Repr::Fp(v, _) => write!(f, "{v}"),
        }
    }
}

macro_rules! binop {
    ($tr:ident, $m:ident, $f:ident) => {
        impl $tr<&Scalar> for &Scalar {
            type Output = Scalar;
            fn $m(self, o: &Scalar) -> Scalar {
                Scalar::$f(self, o)
            }
        }
        impl $tr<Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, o: Scalar) -> Scalar {
                Scalar::$f(&self, &o)
            }
        }
        impl $tr<&Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, o: &Scalar) -> Scalar {
                Scalar::$f(&self, o)
            }
        }
    };
}
binop!(Add, add, add);
binop!(Sub, sub, sub);
binop!(Mul, mul, mul);

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar::neg(&self)
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar::neg(self)
    }
}

impl AddAssign<&Scalar> for Scalar {
    fn add_assign(&mut self, o: &Scalar) {
        *self = Scalar::add(self, o);
    }
}

impl SubAssign<&Scalar> for Scalar {
    fn sub_assign(&mut self, o: &Scalar) {
        *self = Scalar::sub(self, o);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(n: i64, d: i64) -> Scalar {
        Field::Q.int(n).div(&Field::Q.int(d)).unwrap()
    }

    #[test]
    fn rational_sum() {
        assert_eq!(q(1, 2) + q(1, 3), q(5, 6));
    }

    #[test]
    fn prime_product() {
        let f = Field::fp(7).unwrap();
        assert!((f.int(3) * f.int(5)).is_one());
    }

    #[test]
    fn inverse_of_zero_fails() {
        assert!(matches!(Field::Q.zero().inv(), Err(Error::DivisionByZero)));
        assert!(Field::fp(5).unwrap().zero().inv().is_err());
    }

    #[test]
    fn overflow_promotes_to_big() {
        let big = Field::Q.int(i64::MAX);
        let s = &big + &big;
        assert_eq!(s.to_string(), "18446744073709551614");
        let back = s - &big;
        assert_eq!(back, big);
        assert!(matches!(back.0, Repr::Small(..)));
    }

    #[test]
    fn parse_literals() {
        assert_eq!(Field::Q.parse("-3/6").unwrap(), q(-1, 2));
        let f = Field::fp(7).unwrap();
        assert_eq!(f.parse("1/3").unwrap(), f.int(5));
        assert!("Fp:8".parse::<Field>().is_err());
        assert_eq!("Fp:11".parse::<Field>().unwrap(), Field::Fp(11));
    }

    fn arb_q() -> impl Strategy<Value = Scalar> {
        (-50i64..50, 1i64..20).prop_map(|(n, d)| q(n, d))
    }

    fn arb_fp() -> impl Strategy<Value = Scalar> {
        (0i64..101).prop_map(|n| Field::Fp(101).int(n))
    }

    proptest! {
        #[test]
        fn rational_field_axioms(a in arb_q(), b in arb_q(), c in arb_q()) {
            prop_assert_eq!(&a + &b, &b + &a);
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert_eq!((&a + &b) + &c, &a + &(&b + &c));
            prop_assert_eq!((&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &(&b + &c), &a * &b + &a * &c);
            prop_assert!((&a + &(-&a)).is_zero());
            if !a.is_zero() {
                prop_assert!((&a * &a.inv().unwrap()).is_one());
            }
        }

        #[test]
        fn prime_field_axioms(a in arb_fp(), b in arb_fp(), c in arb_fp()) {
            prop_assert_eq!(&a + &b, &b + &a);
            prop_assert_eq!((&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &(&b + &c), &a * &b + &a * &c);
            prop_assert!((&a + &(-&a)).is_zero());
            if !a.is_zero() {
                prop_assert!((&a * &a.inv().unwrap()).is_one());
            }
        }
    }
}
