//! Exact scalars and coordinate vectors.
//!
//! Every number in the crate is a [`Rational`]: an arbitrary precision
//! fraction kept in lowest terms with a positive denominator. Nothing is ever
//! rounded.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Exact fraction. `num_rational` normalizes on construction, so the stored
/// numerator/denominator pair is always reduced with a positive denominator.
pub type Rational = BigRational;

/// Alias kept for readers coming from the data-model vocabulary.
pub type RationalScalar = Rational;

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn frac(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn ints(values: &[i64]) -> Vec<Rational> {
    values.iter().map(|&v| int(v)).collect()
}

/// Parses `"7"`, `"-3"` or `"p/q"`. Decimal points and exponents are refused.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let t = text.trim();
    if t.is_empty() {
        return Err(Error::Parse("empty rational".into()));
    }
    let (num, den) = match t.split_once('/') {
        Some((n, d)) => (n.trim(), Some(d.trim())),
        None => (t, None),
    };
    let parse_int = |s: &str| -> Result<BigInt> {
        let digits = s.strip_prefix(['+', '-']).unwrap_or(s);
        if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
            return Err(Error::Parse(format!("`{text}` is not an integer or p/q fraction")));
        }
        s.parse::<BigInt>()
            .map_err(|e| Error::Parse(format!("`{text}`: {e}")))
    };
    let n = parse_int(num)?;
    match den {
        None => Ok(Rational::from_integer(n)),
        Some(d) => {
            let d = parse_int(d)?;
            if d.is_zero() {
                return Err(Error::Parse(format!("`{text}` has zero denominator")));
            }
            Ok(Rational::new(n, d))
        }
    }
}

/// Comma separated list of rationals, e.g. `"1,1,0,1,2"` or `"1/2, -3"`.
pub fn parse_vector(text: &str) -> Result<Vec<Rational>> {
    let t = text.trim();
    if t.is_empty() {
        return Ok(Vec::new());
    }
    t.split(',').map(parse_rational).collect()
}

pub fn format_rational(q: &Rational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

pub fn format_vector(v: &[Rational]) -> String {
    let parts: Vec<String> = v.iter().map(format_rational).collect();
    format!("({})", parts.join(", "))
}

pub fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).fold(Rational::zero(), |acc, (x, y)| acc + x * y)
}

pub fn add(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn sub(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn scale(s: &Rational, v: &[Rational]) -> Vec<Rational> {
    v.iter().map(|x| s * x).collect()
}

pub fn is_zero_vec(v: &[Rational]) -> bool {
    v.iter().all(Zero::is_zero)
}

pub fn zeros(n: usize) -> Vec<Rational> {
    vec![Rational::zero(); n]
}

/// Nonnegative combination `sum coeffs[i] * rows[i]`.
pub fn combine(coeffs: &[Rational], rows: &[Vec<Rational>], dim: usize) -> Vec<Rational> {
    let mut out = zeros(dim);
    for (c, row) in coeffs.iter().zip(rows) {
        if c.is_zero() {
            continue;
        }
        for (o, x) in out.iter_mut().zip(row) {
            *o += c * x;
        }
    }
    out
}

/// Positive rescaling to a primitive integer vector: denominators cleared,
/// entries divided by their gcd. Orientation is preserved. The zero vector is
/// returned unchanged.
pub fn primitive(v: &[Rational]) -> Vec<Rational> {
    if is_zero_vec(v) {
        return v.to_vec();
    }
    let lcm = v
        .iter()
        .fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
    let scaled: Vec<BigInt> = v.iter().map(|q| (q * &lcm).to_integer()).collect();
    let gcd = scaled
        .iter()
        .filter(|x| !x.is_zero())
        .fold(BigInt::zero(), |acc, x| acc.gcd(x));
    scaled
        .into_iter()
        .map(|x| Rational::from_integer(x / &gcd))
        .collect()
}

/// Rescales so the first nonzero entry is positive, then makes primitive.
/// Used for lines and subspace bases, where orientation carries no meaning.
pub fn primitive_unoriented(v: &[Rational]) -> Vec<Rational> {
    let p = primitive(v);
    match p.iter().find(|x| !x.is_zero()) {
        Some(first) if first.is_negative() => p.iter().map(|x| -x).collect(),
        _ => p,
    }
}

/// A numerical class: coordinates in a named basis.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ClassVector {
    pub basis: String,
    pub coords: Vec<Rational>,
}

impl ClassVector {
    pub fn new(basis: impl Into<String>, coords: Vec<Rational>) -> Self {
        Self {
            basis: basis.into(),
            coords,
        }
    }

    pub fn from_ints(basis: impl Into<String>, coords: &[i64]) -> Self {
        Self::new(basis, ints(coords))
    }

    pub fn zero(basis: impl Into<String>, dim: usize) -> Self {
        Self::new(basis, zeros(dim))
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn is_zero(&self) -> bool {
        is_zero_vec(&self.coords)
    }

    fn check_compatible(&self, other: &ClassVector) -> Result<()> {
        if self.basis != other.basis {
            return Err(Error::BasisMismatch {
                left: self.basis.clone(),
                right: other.basis.clone(),
            });
        }
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: other.dim(),
            });
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &ClassVector) -> Result<ClassVector> {
        self.check_compatible(other)?;
        Ok(ClassVector::new(self.basis.clone(), add(&self.coords, &other.coords)))
    }

    pub fn checked_sub(&self, other: &ClassVector) -> Result<ClassVector> {
        self.check_compatible(other)?;
        Ok(ClassVector::new(self.basis.clone(), sub(&self.coords, &other.coords)))
    }

    pub fn scaled(&self, s: &Rational) -> ClassVector {
        ClassVector::new(self.basis.clone(), scale(s, &self.coords))
    }

    /// Evaluates `self` as a functional on `other` (coordinate dot product).
    pub fn pair(&self, other: &ClassVector) -> Result<Rational> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: other.dim(),
            });
        }
        Ok(dot(&self.coords, &other.coords))
    }
}

impl fmt::Display for ClassVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", format_vector(&self.coords))
    }
}

/// Serde adapter writing rationals as strings and accepting strings or JSON
/// integers (never floats).
pub mod serde_rational {
    use super::*;

    pub fn serialize<S: Serializer>(q: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(q))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Rational, D::Error> {
        let raw = RawRational::deserialize(d)?;
        raw.into_rational().map_err(serde::de::Error::custom)
    }

    #[derive(Deserialize)]
    #[serde(untagged)]
    pub(crate) enum RawRational {
        Int(i64),
        Text(String),
        Float(f64),
    }

    impl RawRational {
        pub(crate) fn into_rational(self) -> Result<Rational> {
            match self {
                RawRational::Int(i) => Ok(int(i)),
                RawRational::Text(t) => parse_rational(&t),
                RawRational::Float(x) => Err(Error::Parse(format!(
                    "floating point value {x} not accepted; write it as a \"p/q\" string"
                ))),
            }
        }
    }
}

pub mod serde_vector {
    use super::serde_rational::RawRational;
    use super::*;

    pub fn serialize<S: Serializer>(v: &[Rational], s: S) -> std::result::Result<S::Ok, S::Error> {
        let strings: Vec<String> = v.iter().map(format_rational).collect();
        strings.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Vec<Rational>, D::Error> {
        let raw = Vec::<RawRational>::deserialize(d)?;
        raw.into_iter()
            .map(|r| r.into_rational().map_err(serde::de::Error::custom))
            .collect()
    }
}

pub mod serde_matrix {
    use super::serde_rational::RawRational;
    use super::*;

    pub fn serialize<S: Serializer>(m: &[Vec<Rational>], s: S) -> std::result::Result<S::Ok, S::Error> {
        let strings: Vec<Vec<String>> = m
            .iter()
            .map(|row| row.iter().map(format_rational).collect())
            .collect();
        strings.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Vec<Vec<Rational>>, D::Error> {
        let raw = Vec::<Vec<RawRational>>::deserialize(d)?;
        raw.into_iter()
            .map(|row| {
                row.into_iter()
                    .map(|r| r.into_rational().map_err(serde::de::Error::custom))
                    .collect()
            })
            .collect()
    }
}

impl Serialize for ClassVector {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Repr<'a> {
            basis: &'a str,
            #[serde(with = "serde_vector")]
            coords: &'a [Rational],
        }
        Repr {
            basis: &self.basis,
            coords: &self.coords,
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for ClassVector {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Repr {
            basis: String,
            #[serde(with = "serde_vector")]
            coords: Vec<Rational>,
        }
        let r = Repr::deserialize(d)?;
        Ok(ClassVector::new(r.basis, r.coords))
    }
}
