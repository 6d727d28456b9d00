//! Coefficient fields: the rationals with exact big-integer arithmetic, or a
//! prime field F_p.

use std::fmt;

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Field {
    Rational,
    Prime(u64),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FieldError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("cannot parse coefficient {0:?}")]
    BadCoefficient(String),
    #[error("coefficient belongs to a different field")]
    FieldMismatch,
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// A field element. `Rat` values always belong to `Field::Rational`; `Mod`
/// values are residues of the ambient prime field.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Scalar {
    Rat(BigRational),
    Mod(u64),
}

impl Field {
    pub fn rational() -> Field {
        Field::Rational
    }

    pub fn prime(p: u64) -> Result<Field, FieldError> {
        if is_prime(p) {
            Ok(Field::Prime(p))
        } else {
            Err(FieldError::NotPrime(p))
        }
    }

    pub fn characteristic(&self) -> u64 {
        match self {
            Field::Rational => 0,
            Field::Prime(p) => *p,
        }
    }

    pub fn zero(&self) -> Scalar {
        match self {
            Field::Rational => Scalar::Rat(BigRational::zero()),
            Field::Prime(_) => Scalar::Mod(0),
        }
    }

    pub fn one(&self) -> Scalar {
        match self {
            Field::Rational => Scalar::Rat(BigRational::one()),
            Field::Prime(_) => Scalar::Mod(1),
        }
    }

    pub fn from_i64(&self, n: i64) -> Scalar {
        match self {
            Field::Rational => Scalar::Rat(BigRational::from(BigInt::from(n))),
            Field::Prime(p) => {
                let p = *p as i128;
                Scalar::Mod(((n as i128).rem_euclid(p)) as u64)
            }
        }
    }

    pub fn is_zero(&self, a: &Scalar) -> bool {
        match a {
            Scalar::Rat(r) => r.is_zero(),
            Scalar::Mod(m) => *m == 0,
        }
    }

    pub fn add(&self, a: &Scalar, b: &Scalar) -> Scalar {
        match (self, a, b) {
            (Field::Rational, Scalar::Rat(x), Scalar::Rat(y)) => Scalar::Rat(x + y),
            (Field::Prime(p), Scalar::Mod(x), Scalar::Mod(y)) => Scalar::Mod((x + y) % p),
            _ => panic!("scalar/field mismatch"),
        }
    }

    pub fn sub(&self, a: &Scalar, b: &Scalar) -> Scalar {
        self.add(a, &self.neg(b))
    }

    pub fn neg(&self, a: &Scalar) -> Scalar {
        match (self, a) {
            (Field::Rational, Scalar::Rat(x)) => Scalar::Rat(-x),
            (Field::Prime(p), Scalar::Mod(x)) => Scalar::Mod((p - x % p) % p),
            _ => panic!("scalar/field mismatch"),
        }
    }

    pub fn mul(&self, a: &Scalar, b: &Scalar) -> Scalar {
        match (self, a, b) {
            (Field::Rational, Scalar::Rat(x), Scalar::Rat(y)) => Scalar::Rat(x * y),
            (Field::Prime(p), Scalar::Mod(x), Scalar::Mod(y)) => {
                Scalar::Mod(((*x as u128 * *y as u128) % *p as u128) as u64)
            }
            _ => panic!("scalar/field mismatch"),
        }
    }

    pub fn inv(&self, a: &Scalar) -> Scalar {
        match (self, a) {
            (Field::Rational, Scalar::Rat(x)) => {
                assert!(!x.is_zero(), "division by zero");
                Scalar::Rat(x.recip())
            }
            (Field::Prime(p), Scalar::Mod(x)) => {
                assert!(*x % p != 0, "division by zero");
                // Fermat: x^(p-2) mod p
                let mut base = *x as u128 % *p as u128;
                let mut exp = p - 2;
                let m = *p as u128;
                let mut acc: u128 = 1;
                while exp > 0 {
                    if exp & 1 == 1 {
                        acc = acc * base % m;
                    }
                    base = base * base % m;
                    exp >>= 1;
                }
                Scalar::Mod(acc as u64)
            }
            _ => panic!("scalar/field mismatch"),
        }
    }

    /// Parse a coefficient string: an integer, or a reduced fraction "a/b"
    /// over the rationals, or a residue over F_p.
    pub fn parse(&self, s: &str) -> Result<Scalar, FieldError> {
        let s = s.trim();
        let bad = || FieldError::BadCoefficient(s.to_string());
        match self {
            Field::Rational => {
                let r = if let Some((num, den)) = s.split_once('/') {
                    let n: BigInt = num.trim().parse().map_err(|_| bad())?;
                    let d: BigInt = den.trim().parse().map_err(|_| bad())?;
                    if d.is_zero() {
                        return Err(bad());
                    }
                    BigRational::new(n, d)
                } else {
                    BigRational::from(s.parse::<BigInt>().map_err(|_| bad())?)
                };
                Ok(Scalar::Rat(r))
            }
            Field::Prime(p) => {
                let n: i128 = s.parse().map_err(|_| bad())?;
                Ok(Scalar::Mod(n.rem_euclid(*p as i128) as u64))
            }
        }
    }

    /// Canonical rendering: reduced fraction with `/` only when the
    /// denominator is not 1; plain residue over F_p.
    pub fn render(&self, a: &Scalar) -> String {
        match a {
            Scalar::Rat(r) => {
                if r.denom().is_one() {
                    r.numer().to_string()
                } else {
                    format!("{}/{}", r.numer(), r.denom())
                }
            }
            Scalar::Mod(m) => m.to_string(),
        }
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

/// Multiply through by all denominators and recheck: used by tests to make
/// sure rational arithmetic stayed exact.
pub fn clears_denominators(values: &[Scalar]) -> bool {
    let mut lcm = BigInt::one();
    for v in values {
        if let Scalar::Rat(r) = v {
            lcm = num::integer::lcm(lcm, r.denom().clone());
        }
    }
    values.iter().all(|v| match v {
        Scalar::Rat(r) => (r * BigRational::from(lcm.clone())).denom().is_one(),
        Scalar::Mod(_) => true,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_validation() {
        assert!(Field::prime(2).is_ok());
        assert!(Field::prime(7).is_ok());
        assert_eq!(Field::prime(6), Err(FieldError::NotPrime(6)));
        assert_eq!(Field::prime(1), Err(FieldError::NotPrime(1)));
    }

    #[test]
    fn rational_parse_render_round_trip() {
        let q = Field::Rational;
        for s in ["0", "5", "-3/2", "7/3", "-1"] {
            let v = q.parse(s).unwrap();
            assert_eq!(q.render(&v), s);
        }
        // non-reduced input renders reduced
        assert_eq!(q.render(&q.parse("4/6").unwrap()), "2/3");
        assert!(q.parse("1/0").is_err());
        assert!(q.parse("x").is_err());
    }

    #[test]
    fn fp_arithmetic() {
        let f = Field::prime(5).unwrap();
        let three = f.parse("3").unwrap();
        let four = f.parse("-1").unwrap();
        assert_eq!(four, Scalar::Mod(4));
        assert_eq!(f.add(&three, &four), Scalar::Mod(2));
        assert_eq!(f.mul(&three, &four), Scalar::Mod(2));
        assert_eq!(f.mul(&f.inv(&three), &three), f.one());
    }

    #[test]
    fn rational_inverse_exact() {
        let q = Field::Rational;
        let v = q.parse("-22/7").unwrap();
        assert_eq!(q.mul(&v, &q.inv(&v)), q.one());
        assert!(clears_denominators(&[v, q.parse("5/6").unwrap()]));
    }
}
