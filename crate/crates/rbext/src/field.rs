//! Exact ground fields: the rationals and prime fields F_p.
//!
//! Every scalar carries its field so that mixed-field arithmetic is caught
//! immediately. Rational arithmetic uses arbitrary-precision integers;
//! residues are kept reduced in `[0, p)`.

use std::fmt;

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Zero};

use crate::error::{Error, Result};

/// The ground field: Q or F_p for a prime p.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Field {
    Rationals,
    Prime(u64),
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

impl Field {
    pub fn rationals() -> Field {
        Field::Rationals
    }

    /// Prime field constructor; primality is checked by trial division.
    pub fn prime(p: u64) -> Result<Field> {
        if is_prime(p) {
            Ok(Field::Prime(p))
        } else {
            Err(Error::Validation(format!("{p} is not prime")))
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, Field::Prime(_))
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Rationals => write!(f, "Q"),
            Field::Prime(p) => write!(f, "F_{p}"),
        }
    }
}

/// An element of the ground field, always in canonical form.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Scalar {
    Rat(BigRational),
    Mod { value: u64, p: u64 },
}

fn mod_inverse(a: u64, p: u64) -> Option<u64> {
    // extended Euclid on (a, p)
    if a % p == 0 {
        return None;
    }
    let (mut old_r, mut r) = (a as i128, p as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    if old_r != 1 {
        return None;
    }
    Some(old_s.rem_euclid(p as i128) as u64)
}

impl Scalar {
    pub fn zero(field: &Field) -> Scalar {
        match field {
            Field::Rationals => Scalar::Rat(BigRational::zero()),
            Field::Prime(p) => Scalar::Mod { value: 0, p: *p },
        }
    }

    pub fn one(field: &Field) -> Scalar {
        match field {
            Field::Rationals => Scalar::Rat(BigRational::one()),
            Field::Prime(p) => Scalar::Mod { value: 1, p: *p },
        }
    }

    pub fn from_i64(n: i64, field: &Field) -> Scalar {
        match field {
            Field::Rationals => Scalar::Rat(BigRational::from(BigInt::from(n))),
            Field::Prime(p) => Scalar::Mod {
                value: (n as i128).rem_euclid(*p as i128) as u64,
                p: *p,
            },
        }
    }

    pub fn field(&self) -> Field {
        match self {
            Scalar::Rat(_) => Field::Rationals,
            Scalar::Mod { p, .. } => Field::Prime(*p),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Rat(r) => r.is_zero(),
            Scalar::Mod { value, .. } => *value == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Rat(r) => r.is_one(),
            Scalar::Mod { value, .. } => *value == 1,
        }
    }

    pub fn add(&self, other: &Scalar) -> Scalar {
        match (self, other) {
            (Scalar::Rat(a), Scalar::Rat(b)) => Scalar::Rat(a + b),
            (Scalar::Mod { value: a, p }, Scalar::Mod { value: b, p: q }) if p == q => {
                Scalar::Mod {
                    value: (a + b) % p,
                    p: *p,
                }
            }
            _ => panic!("scalar arithmetic across distinct fields"),
        }
    }

    pub fn sub(&self, other: &Scalar) -> Scalar {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Scalar) -> Scalar {
        match (self, other) {
            (Scalar::Rat(a), Scalar::Rat(b)) => Scalar::Rat(a * b),
            (Scalar::Mod { value: a, p }, Scalar::Mod { value: b, p: q }) if p == q => {
                Scalar::Mod {
                    value: ((*a as u128 * *b as u128) % *p as u128) as u64,
                    p: *p,
                }
            }
            _ => panic!("scalar arithmetic across distinct fields"),
        }
    }

    pub fn neg(&self) -> Scalar {
        match self {
            Scalar::Rat(a) => Scalar::Rat(-a),
            Scalar::Mod { value, p } => Scalar::Mod {
                value: (p - value) % p,
                p: *p,
            },
        }
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self) -> Option<Scalar> {
        match self {
            Scalar::Rat(a) => {
                if a.is_zero() {
                    None
                } else {
                    Some(Scalar::Rat(a.recip()))
                }
            }
            Scalar::Mod { value, p } => mod_inverse(*value, *p).map(|v| Scalar::Mod {
                value: v,
                p: *p,
            }),
        }
    }

    pub fn div(&self, other: &Scalar) -> Option<Scalar> {
        other.inv().map(|inv| self.mul(&inv))
    }

    /// Parses the canonical text form `-?[0-9]+(/[0-9]+)?`.
    pub fn parse(text: &str, field: &Field) -> Result<Scalar> {
        let (num_str, den_str) = match text.split_once('/') {
            Some((n, d)) => (n, Some(d)),
            None => (text, None),
        };
        let check_digits = |s: &str, allow_sign: bool| -> Result<()> {
            let body = if allow_sign {
                s.strip_prefix('-').unwrap_or(s)
            } else {
                s
            };
            if body.is_empty() || !body.bytes().all(|b| b.is_ascii_digit()) {
                return Err(Error::Parse(format!("malformed scalar {text:?}")));
            }
            Ok(())
        };
        check_digits(num_str, true)?;
        if let Some(d) = den_str {
            check_digits(d, false)?;
        }
        let num: BigInt = num_str
            .parse()
            .map_err(|_| Error::Parse(format!("malformed scalar {text:?}")))?;
        let den: BigInt = match den_str {
            Some(d) => d
                .parse()
                .map_err(|_| Error::Parse(format!("malformed scalar {text:?}")))?,
            None => BigInt::one(),
        };
        if den.is_zero() {
            return Err(Error::Parse(format!("zero denominator in {text:?}")));
        }
        match field {
            Field::Rationals => Ok(Scalar::Rat(BigRational::new(num, den))),
            Field::Prime(p) => {
                let pb = BigInt::from(*p);
                let num_res = num.mod_floor_u64(*p);
                let den_res = (&den % &pb).mod_floor_u64(*p);
                let inv = mod_inverse(den_res, *p).ok_or_else(|| {
                    Error::NonInvertibleDenominator(den.to_string(), *p)
                })?;
                Ok(Scalar::Mod {
                    value: ((num_res as u128 * inv as u128) % *p as u128) as u64,
                    p: *p,
                })
            }
        }
    }
}

trait ModFloorU64 {
    fn mod_floor_u64(&self, p: u64) -> u64;
}

impl ModFloorU64 for BigInt {
    fn mod_floor_u64(&self, p: u64) -> u64 {
        use num::Integer;
        let r = self.mod_floor(&BigInt::from(p));
        // r is in [0, p)
        let (_, digits) = r.to_u64_digits();
        *digits.first().unwrap_or(&0)
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rat(r) => {
                if r.denom().is_one() {
                    write!(f, "{}", r.numer())
                } else {
                    write!(f, "{}/{}", r.numer(), r.denom())
                }
            }
            Scalar::Mod { value, .. } => write!(f, "{value}"),
        }
    }
}

impl Scalar {
    fn sign_key(&self) -> (u8, Vec<u8>) {
        // lexicographic ordering key used only for deterministic output ordering
        let s = self.to_string();
        (0, s.into_bytes())
    }
}

impl PartialOrd for Scalar {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Scalar {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        match (self, other) {
            (Scalar::Rat(a), Scalar::Rat(b)) => a.cmp(b),
            (Scalar::Mod { value: a, .. }, Scalar::Mod { value: b, .. }) => a.cmp(b),
            _ => self.sign_key().cmp(&other.sign_key()),
        }
    }
}
