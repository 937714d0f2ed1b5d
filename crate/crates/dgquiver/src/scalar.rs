//! Exact field scalars: arbitrary-precision rationals and prime fields.
//!
//! Every computation in this crate runs over one of these fields.  There is
//! no floating point anywhere; equality of scalars is literal equality.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::Error;

/// The ground field a computation runs over.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FieldKind {
    /// The rational numbers.
    Rational,
    /// The prime field with `p` elements.
    Prime(u64),
}

impl FieldKind {
    pub fn characteristic(&self) -> u64 {
        match self {
            FieldKind::Rational => 0,
            FieldKind::Prime(p) => *p,
        }
    }

    pub fn is_char_zero(&self) -> bool {
        matches!(self, FieldKind::Rational)
    }

    /// Parse a field tag as used in spec files: `"Q"` or `"Fp:<prime>"`.
    pub fn parse_tag(tag: &str) -> Result<Self, Error> {
        if tag == "Q" {
            return Ok(FieldKind::Rational);
        }
        if let Some(p) = tag.strip_prefix("Fp:") {
            let p: u64 = p
                .parse()
                .map_err(|_| Error::Parse(format!("bad prime in field tag {tag:?}")))?;
            if !is_prime(p) {
                return Err(Error::Parse(format!("{p} is not prime")));
            }
            return Ok(FieldKind::Prime(p));
        }
        Err(Error::Parse(format!(
            "unknown field tag {tag:?} (expected \"Q\" or \"Fp:<prime>\")"
        )))
    }

    pub fn tag(&self) -> String {
        match self {
            FieldKind::Rational => "Q".to_owned(),
            FieldKind::Prime(p) => format!("Fp:{p}"),
        }
    }
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

/// An exact field element.
///
/// Rationals are kept in lowest terms with positive denominator (the
/// `BigRational` constructor normalises).  Prime-field elements are canonical
/// representatives in `[0, p)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Scalar {
    Rational(BigRational),
    Prime { value: u64, modulus: u64 },
}

impl Scalar {
    pub fn zero(kind: FieldKind) -> Self {
        match kind {
            FieldKind::Rational => Scalar::Rational(BigRational::zero()),
            FieldKind::Prime(p) => Scalar::Prime {
                value: 0,
                modulus: p,
            },
        }
    }

    pub fn one(kind: FieldKind) -> Self {
        match kind {
            FieldKind::Rational => Scalar::Rational(BigRational::one()),
            FieldKind::Prime(p) => Scalar::Prime {
                value: 1 % p,
                modulus: p,
            },
        }
    }

    pub fn from_i64(kind: FieldKind, v: i64) -> Self {
        match kind {
            FieldKind::Rational => Scalar::Rational(BigRational::from(BigInt::from(v))),
            FieldKind::Prime(p) => {
                let r = v.rem_euclid(p as i64) as u64;
                Scalar::Prime {
                    value: r,
                    modulus: p,
                }
            }
        }
    }

    pub fn kind(&self) -> FieldKind {
        match self {
            Scalar::Rational(_) => FieldKind::Rational,
            Scalar::Prime { modulus, .. } => FieldKind::Prime(*modulus),
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
            Scalar::Prime { value, modulus } => *value == 1 % *modulus,
        }
    }

    pub fn add(&self, other: &Scalar) -> Scalar {
        match (self, other) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a + b),
            (
                Scalar::Prime {
                    value: a,
                    modulus: p,
                },
                Scalar::Prime {
                    value: b,
                    modulus: q,
                },
            ) => {
                assert_eq!(p, q, "scalar field mismatch");
                Scalar::Prime {
                    value: ((*a as u128 + *b as u128) % *p as u128) as u64,
                    modulus: *p,
                }
            }
            _ => panic!("scalar field mismatch"),
        }
    }

    pub fn sub(&self, other: &Scalar) -> Scalar {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Scalar {
        match self {
            Scalar::Rational(a) => Scalar::Rational(-a),
            Scalar::Prime { value, modulus } => Scalar::Prime {
                value: if *value == 0 { 0 } else { modulus - value },
                modulus: *modulus,
            },
        }
    }

    pub fn mul(&self, other: &Scalar) -> Scalar {
        match (self, other) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a * b),
            (
                Scalar::Prime {
                    value: a,
                    modulus: p,
                },
                Scalar::Prime {
                    value: b,
                    modulus: q,
                },
            ) => {
                assert_eq!(p, q, "scalar field mismatch");
                Scalar::Prime {
                    value: ((*a as u128 * *b as u128) % *p as u128) as u64,
                    modulus: *p,
                }
            }
            _ => panic!("scalar field mismatch"),
        }
    }

    pub fn inv(&self) -> Option<Scalar> {
        if self.is_zero() {
            return None;
        }
        Some(match self {
            Scalar::Rational(a) => Scalar::Rational(a.recip()),
            Scalar::Prime { value, modulus } => {
                // Fermat: a^(p-2) mod p.
                let mut base = *value as u128;
                let m = *modulus as u128;
                let mut exp = m - 2;
                let mut acc: u128 = 1;
                while exp > 0 {
                    if exp & 1 == 1 {
                        acc = acc * base % m;
                    }
                    base = base * base % m;
                    exp >>= 1;
                }
                Scalar::Prime {
                    value: acc as u64,
                    modulus: *modulus,
                }
            }
        })
    }

    pub fn div(&self, other: &Scalar) -> Option<Scalar> {
        other.inv().map(|i| self.mul(&i))
    }

    /// `(-1)^n` in this field, for Koszul signs.
    pub fn sign(kind: FieldKind, n: i64) -> Scalar {
        if n.rem_euclid(2) == 0 {
            Scalar::one(kind)
        } else {
            Scalar::one(kind).neg()
        }
    }

    /// Parse an exact coefficient string such as `"3"`, `"-3/2"`, `"0"`.
    pub fn parse(kind: FieldKind, s: &str) -> Result<Scalar, Error> {
        let s = s.trim();
        match kind {
            FieldKind::Rational => {
                let r = if let Some((num, den)) = s.split_once('/') {
                    let n = BigInt::from_str(num.trim())
                        .map_err(|_| Error::Parse(format!("bad numerator in {s:?}")))?;
                    let d = BigInt::from_str(den.trim())
                        .map_err(|_| Error::Parse(format!("bad denominator in {s:?}")))?;
                    if d.is_zero() {
                        return Err(Error::Parse(format!("zero denominator in {s:?}")));
                    }
                    BigRational::new(n, d)
                } else {
                    let n = BigInt::from_str(s)
                        .map_err(|_| Error::Parse(format!("bad rational {s:?}")))?;
                    BigRational::from(n)
                };
                Ok(Scalar::Rational(r))
            }
            FieldKind::Prime(p) => {
                if let Some((num, den)) = s.split_once('/') {
                    let n = Scalar::parse_prime_int(num, p)?;
                    let d = Scalar::parse_prime_int(den, p)?;
                    n.div(&d)
                        .ok_or_else(|| Error::Parse(format!("division by zero in {s:?} mod {p}")))
                } else {
                    Scalar::parse_prime_int(s, p)
                }
            }
        }
    }

    fn parse_prime_int(s: &str, p: u64) -> Result<Scalar, Error> {
        let v = i128::from_str(s.trim()).map_err(|_| Error::Parse(format!("bad integer {s:?}")))?;
        let r = v.rem_euclid(p as i128) as u64;
        Ok(Scalar::Prime {
            value: r,
            modulus: p,
        })
    }

    /// Exact serialisation; inverse of [`Scalar::parse`].
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

    /// Numerator/denominator as `i64`, when small.  Handy in tests.
    pub fn rational_parts(&self) -> Option<(i64, i64)> {
        match self {
            Scalar::Rational(r) => {
                let n: i64 = r.numer().try_into().ok()?;
                let d: i64 = r.denom().try_into().ok()?;
                Some((n, d))
            }
            _ => None,
        }
    }

    pub fn abs_is_one(&self) -> bool {
        match self {
            Scalar::Rational(r) => r.abs().is_one(),
            Scalar::Prime { .. } => self.is_one() || self.neg().is_one(),
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_coeff_string())
    }
}
