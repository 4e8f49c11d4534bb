//! Exact field elements: arbitrary-precision rationals and prime fields.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Default prime for `F_p` screening runs. Large enough that every
/// contraction multiplicity and grid coordinate used at desk scale stays
/// a unit.
pub const DEFAULT_PRIME: u64 = 1_000_003;

/// The coefficient field of a computation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub enum Field {
    /// Exact rationals with arbitrary-precision numerator and denominator.
    Rational,
    /// The prime field `F_p`.
    Prime(u64),
}

impl Field {
    pub fn prime_default() -> Field {
        Field::Prime(DEFAULT_PRIME)
    }

    /// Validates a prime-field descriptor. `p` must be an odd prime that
    /// also exceeds `min_char`, the largest degree/grid bound the caller
    /// intends to use.
    pub fn prime_checked(p: u64, min_char: u64) -> Result<Field> {
        if !is_prime_u64(p) {
            return Err(Error::invalid(format!("{p} is not prime")));
        }
        if p <= min_char {
            return Err(Error::CharacteristicTooSmall { p, degree: min_char as u32 });
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
        match self {
            Field::Rational => Scalar::Rational(BigRational::zero()),
            Field::Prime(p) => Scalar::Prime { value: 0, modulus: *p },
        }
    }

    pub fn one(&self) -> Scalar {
        self.from_i64(1)
    }

    pub fn from_i64(&self, v: i64) -> Scalar {
        match self {
            Field::Rational => Scalar::Rational(BigRational::from_integer(BigInt::from(v))),
            Field::Prime(p) => {
                let r = v.rem_euclid(*p as i64) as u64;
                Scalar::Prime { value: r, modulus: *p }
            }
        }
    }

    pub fn from_ratio(&self, num: i64, den: i64) -> Result<Scalar> {
        if den == 0 {
            return Err(Error::DivisionByZero);
        }
        match self {
            Field::Rational => Ok(Scalar::Rational(BigRational::new(
                BigInt::from(num),
                BigInt::from(den),
            ))),
            Field::Prime(_) => self.from_i64(num).div(&self.from_i64(den)),
        }
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Rational => write!(f, "Q"),
            Field::Prime(p) => write!(f, "Fp:{p}"),
        }
    }
}

/// An exact field element tagged with its field.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Scalar {
    Rational(BigRational),
    Prime { value: u64, modulus: u64 },
}

impl Scalar {
    pub fn field(&self) -> Field {
        match self {
            Scalar::Rational(_) => Field::Rational,
            Scalar::Prime { modulus, .. } => Field::Prime(*modulus),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Rational(r) => r.is_zero(),
            Scalar::Prime { value, .. } => *value == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Rational(r) => r.is_one(),
            Scalar::Prime { value, .. } => *value == 1,
        }
    }

    fn check(&self, other: &Scalar) {
        let (a, b) = (self.field(), other.field());
        assert_eq!(a, b, "scalar field mismatch: {a} vs {b}");
    }

    pub fn add(&self, other: &Scalar) -> Scalar {
        self.check(other);
        match (self, other) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a + b),
            (Scalar::Prime { value: a, modulus: p }, Scalar::Prime { value: b, .. }) => {
                Scalar::Prime { value: (a + b) % p, modulus: *p }
            }
            _ => unreachable!(),
        }
    }

    pub fn sub(&self, other: &Scalar) -> Scalar {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Scalar {
        match self {
            Scalar::Rational(a) => Scalar::Rational(-a),
            Scalar::Prime { value, modulus } => {
                Scalar::Prime { value: (modulus - value) % modulus, modulus: *modulus }
            }
        }
    }

    pub fn mul(&self, other: &Scalar) -> Scalar {
        self.check(other);
        match (self, other) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a * b),
            (Scalar::Prime { value: a, modulus: p }, Scalar::Prime { value: b, .. }) => {
                Scalar::Prime { value: mulmod(*a, *b, *p), modulus: *p }
            }
            _ => unreachable!(),
        }
    }

    pub fn inv(&self) -> Result<Scalar> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        match self {
            Scalar::Rational(a) => Ok(Scalar::Rational(a.recip())),
            Scalar::Prime { value, modulus } => {
                // Fermat inversion; modulus is validated prime at construction.
                let inv = powmod(*value, *modulus - 2, *modulus);
                Ok(Scalar::Prime { value: inv, modulus: *modulus })
            }
        }
    }

    pub fn div(&self, other: &Scalar) -> Result<Scalar> {
        Ok(self.mul(&other.inv()?))
    }

    /// Multiplies by a machine integer (used for binomial/factorial factors).
    pub fn mul_i64(&self, k: i64) -> Scalar {
        self.mul(&self.field().from_i64(k))
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            Scalar::Rational(r) => Some(r),
            _ => None,
        }
    }

    /// Exact string form: `p/q` or `p` over the rationals, the canonical
    /// representative over a prime field.
    pub fn to_coeff_string(&self) -> String {
        match self {
            Scalar::Rational(r) => {
                if r.denom().is_one() {
                    r.numer().to_string()
                } else {
                    format!("{}/{}", r.numer(), r.denom())
                }
            }
            Scalar::Prime { value, .. } => value.to_string(),
        }
    }

    pub fn parse(field: Field, s: &str) -> Result<Scalar> {
        let s = s.trim();
        match field {
            Field::Rational => {
                let r = if let Some((num, den)) = s.split_once('/') {
                    let n: BigInt = num
                        .trim()
                        .parse()
                        .map_err(|_| Error::Parse(format!("bad numerator {num:?}")))?;
                    let d: BigInt = den
                        .trim()
                        .parse()
                        .map_err(|_| Error::Parse(format!("bad denominator {den:?}")))?;
                    if d.is_zero() {
                        return Err(Error::DivisionByZero);
                    }
                    BigRational::new(n, d)
                } else {
                    let n: BigInt =
                        s.parse().map_err(|_| Error::Parse(format!("bad integer {s:?}")))?;
                    BigRational::from_integer(n)
                };
                Ok(Scalar::Rational(r))
            }
            Field::Prime(p) => {
                let v: i64 = s.parse().map_err(|_| Error::Parse(format!("bad residue {s:?}")))?;
                Ok(Scalar::Prime { value: v.rem_euclid(p as i64) as u64, modulus: p })
            }
        }
    }

    /// Signed magnitude when the value is a small integer, for fast paths.
    pub fn to_i64(&self) -> Option<i64> {
        match self {
            Scalar::Rational(r) => {
                if r.denom().is_one() {
                    let n = r.numer();
                    if n.abs() <= BigInt::from(i64::MAX) {
                        return Some(i64::try_from(n).ok()?);
                    }
                }
                None
            }
            Scalar::Prime { value, .. } => Some(*value as i64),
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_coeff_string())
    }
}

pub(crate) fn mulmod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

pub(crate) fn powmod(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mulmod(acc, base, p);
        }
        base = mulmod(base, base, p);
        exp >>= 1;
    }
    acc
}

/// Deterministic Miller–Rabin for u64 (fixed witness set).
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for q in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == q {
            return true;
        }
        if n % q == 0 {
            return false;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = powmod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 0..s - 1 {
            x = mulmod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_arithmetic_is_exact() {
        let f = Field::Rational;
        let a = f.from_ratio(1, 3).unwrap();
        let b = f.from_ratio(1, 6).unwrap();
        assert_eq!(a.add(&b), f.from_ratio(1, 2).unwrap());
        assert_eq!(a.mul(&b), f.from_ratio(1, 18).unwrap());
        assert!(f.zero().inv().is_err());
    }

    #[test]
    fn prime_field_inverse() {
        let f = Field::prime_checked(DEFAULT_PRIME, 100).unwrap();
        let a = f.from_i64(12345);
        let inv = a.inv().unwrap();
        assert!(a.mul(&inv).is_one());
    }

    #[test]
    fn prime_validation() {
        assert!(Field::prime_checked(1_000_003, 10).is_ok());
        assert!(Field::prime_checked(1_000_004, 10).is_err());
        assert!(Field::prime_checked(7, 10).is_err());
        assert!(is_prime_u64(2));
        assert!(is_prime_u64((1 << 61) - 1));
        assert!(!is_prime_u64(1));
    }

    #[test]
    fn coeff_string_round_trip() {
        let f = Field::Rational;
        for s in ["3", "-7/2", "0", "123456789012345678901/7"] {
            let v = Scalar::parse(f, s).unwrap();
            assert_eq!(Scalar::parse(f, &v.to_coeff_string()).unwrap(), v);
        }
    }
}
