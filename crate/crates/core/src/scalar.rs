//! Exact coefficient rings for the rest of the crate.
//!
//! Everything downstream (polynomials, orbits, lattices) is generic over a
//! [`Scalar`]: an exact commutative ring with decidable equality and a total
//! order used only for canonical sorting. Three rings are provided: arbitrary
//! precision integers, rationals, and [`GoldenInt`], the ring of integers
//! `Z[tau]` of `Q(sqrt 5)` with `tau^2 = tau + 1`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{One, Signed, Zero};

use crate::error::Error;

/// Arbitrary precision signed integer.
pub type Int = BigInt;

/// Arbitrary precision rational, used for charts and universal formulas.
pub type Rational = Ratio<BigInt>;

/// An exact commutative-ring value.
///
/// The `Ord` bound does not need any algebraic meaning; it pins a canonical
/// ordering so that every container iterates deterministically.
pub trait Scalar:
    Clone
    + Eq
    + Ord
    + fmt::Debug
    + fmt::Display
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
    + Zero
    + One
{
    fn from_i64(n: i64) -> Self;

    fn from_int(n: &Int) -> Self;

    /// `Some(q)` iff `self = q * d` exactly in the ring.
    fn div_exact(&self, d: &Self) -> Option<Self>;

    /// Whether display should render this value with a leading minus sign.
    /// Purely presentational for rings without a canonical order.
    fn display_negative(&self) -> bool;
}

impl Scalar for BigInt {
    fn from_i64(n: i64) -> Self {
        BigInt::from(n)
    }

    fn from_int(n: &Int) -> Self {
        n.clone()
    }

    fn div_exact(&self, d: &Self) -> Option<Self> {
        if d.is_zero() {
            return None;
        }
        let (q, r) = self.div_rem(d);
        r.is_zero().then_some(q)
    }

    fn display_negative(&self) -> bool {
        self.is_negative()
    }
}

impl Scalar for Rational {
    fn from_i64(n: i64) -> Self {
        Ratio::from_integer(BigInt::from(n))
    }

    fn from_int(n: &Int) -> Self {
        Ratio::from_integer(n.clone())
    }

    fn div_exact(&self, d: &Self) -> Option<Self> {
        (!d.is_zero()).then(|| self / d)
    }

    fn display_negative(&self) -> bool {
        self.is_negative()
    }
}

/// Nonnegative gcd of two integers, `gcd(0, 0) = 0`.
pub fn gcd_int(a: &Int, b: &Int) -> Int {
    a.gcd(b)
}

/// Nearest integer to `n / d`, halves rounded away from zero.
fn round_div(n: &Int, d: &Int) -> Int {
    Ratio::new(n.clone(), d.clone()).round().to_integer()
}

/// Element `a + b*tau` of `Z[tau]`, `tau = (1 + sqrt 5)/2`, `tau^2 = tau + 1`.
///
/// The ring is norm-Euclidean for `N(a + b*tau) = a^2 + ab - b^2`, so gcds
/// exist; they are unique only up to the units `±tau^k`, see
/// [`GoldenInt::canonical_associate`].
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GoldenInt {
    pub a: Int,
    pub b: Int,
}

impl GoldenInt {
    pub fn new(a: Int, b: Int) -> Self {
        GoldenInt { a, b }
    }

    pub fn from_pair(a: i64, b: i64) -> Self {
        GoldenInt::new(Int::from(a), Int::from(b))
    }

    /// The unit `tau`.
    pub fn tau() -> Self {
        GoldenInt::from_pair(0, 1)
    }

    /// Field norm `N(a + b*tau) = a^2 + ab - b^2`; multiplicative, `±1`
    /// exactly on units.
    pub fn norm(&self) -> Int {
        &self.a * &self.a + &self.a * &self.b - &self.b * &self.b
    }

    /// Galois conjugate `a + b - b*tau` (sends `tau` to `1 - tau`).
    pub fn conj(&self) -> Self {
        GoldenInt::new(&self.a + &self.b, -self.b.clone())
    }

    /// Sign of the real embedding `a + b*(1 + sqrt 5)/2`, computed exactly.
    pub fn embedding_sign(&self) -> i32 {
        // a + b*(1+sqrt5)/2 has the sign of p + q*sqrt5 with p = 2a+b, q = b.
        let p: Int = Int::from(2) * &self.a + &self.b;
        let q = self.b.clone();
        match (p.sign(), q.sign()) {
            (num_bigint::Sign::NoSign, num_bigint::Sign::NoSign) => 0,
            (num_bigint::Sign::Minus, num_bigint::Sign::NoSign)
            | (num_bigint::Sign::NoSign, num_bigint::Sign::Minus)
            | (num_bigint::Sign::Minus, num_bigint::Sign::Minus) => -1,
            (num_bigint::Sign::Plus, num_bigint::Sign::NoSign)
            | (num_bigint::Sign::NoSign, num_bigint::Sign::Plus)
            | (num_bigint::Sign::Plus, num_bigint::Sign::Plus) => 1,
            (num_bigint::Sign::Plus, num_bigint::Sign::Minus) => {
                // sqrt5 is irrational, so p^2 = 5 q^2 cannot occur here.
                if &p * &p > Int::from(5) * &q * &q {
                    1
                } else {
                    -1
                }
            }
            (num_bigint::Sign::Minus, num_bigint::Sign::Plus) => {
                if Int::from(5) * &q * &q > &p * &p {
                    1
                } else {
                    -1
                }
            }
        }
    }

    /// Rounded Euclidean quotient: the nearest lattice point to the exact
    /// field quotient `self / d`. The remainder `self - q*d` then satisfies
    /// `|N(r)| < |N(d)|` (the rounding box has norm bound 5/16).
    pub fn div_round(&self, d: &Self) -> Self {
        assert!(!d.is_zero(), "division by zero in Z[tau]");
        let num = self.clone() * d.conj();
        let den = d.norm();
        GoldenInt::new(round_div(&num.a, &den), round_div(&num.b, &den))
    }

    /// The associate `±tau^k * self` with positive real embedding `e` and
    /// `1 <= e / sqrt|N| < tau`. Unique in each class of associates.
    pub fn canonical_associate(&self) -> Self {
        assert!(!self.is_zero(), "canonical associate of zero is undefined");
        let mut x = if self.embedding_sign() < 0 {
            -self.clone()
        } else {
            self.clone()
        };
        let abs_norm = GoldenInt::new(self.norm().abs(), Int::zero());
        // e >= sqrt|N|  <=>  emb(x^2 - |N|) >= 0, and similarly for the
        // upper bound against |N| * tau^2.
        let upper = abs_norm.clone() * (GoldenInt::tau() * GoldenInt::tau());
        let inv_tau = GoldenInt::from_pair(-1, 1);
        while (x.clone() * x.clone() - abs_norm.clone()).embedding_sign() < 0 {
            x = x * GoldenInt::tau();
        }
        while (x.clone() * x.clone() - upper.clone()).embedding_sign() >= 0 {
            x = x * inv_tau.clone();
        }
        x
    }

    /// Whether this value is an associate of `sqrt 5 = 2*tau - 1`.
    pub fn is_sqrt5_associate(&self) -> bool {
        !self.is_zero() && self.canonical_associate() == GoldenInt::from_pair(-1, 2)
    }
}

/// Euclidean gcd in `Z[tau]`, reported as the canonical associate;
/// `gcd(0, 0) = 0`.
pub fn gcd_golden(x: &GoldenInt, y: &GoldenInt) -> GoldenInt {
    let mut a = x.clone();
    let mut b = y.clone();
    while !b.is_zero() {
        let q = a.div_round(&b);
        let r = a - q * b.clone();
        debug_assert!(r.norm().abs() < b.norm().abs());
        a = b;
        b = r;
    }
    if a.is_zero() {
        a
    } else {
        a.canonical_associate()
    }
}

impl Add for GoldenInt {
    type Output = GoldenInt;
    fn add(self, rhs: GoldenInt) -> GoldenInt {
        GoldenInt::new(self.a + rhs.a, self.b + rhs.b)
    }
}

impl Sub for GoldenInt {
    type Output = GoldenInt;
    fn sub(self, rhs: GoldenInt) -> GoldenInt {
        GoldenInt::new(self.a - rhs.a, self.b - rhs.b)
    }
}

impl Neg for GoldenInt {
    type Output = GoldenInt;
    fn neg(self) -> GoldenInt {
        GoldenInt::new(-self.a, -self.b)
    }
}

impl Mul for GoldenInt {
    type Output = GoldenInt;
    fn mul(self, rhs: GoldenInt) -> GoldenInt {
        // (a + b t)(c + d t) = ac + bd + (ad + bc + bd) t  using t^2 = t + 1.
        let bd = &self.b * &rhs.b;
        let a = &self.a * &rhs.a + &bd;
        let b = &self.a * &rhs.b + &self.b * &rhs.a + bd;
        GoldenInt::new(a, b)
    }
}

impl Zero for GoldenInt {
    fn zero() -> Self {
        GoldenInt::new(Int::zero(), Int::zero())
    }
    fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }
}

impl One for GoldenInt {
    fn one() -> Self {
        GoldenInt::new(Int::one(), Int::zero())
    }
}

impl Scalar for GoldenInt {
    fn from_i64(n: i64) -> Self {
        GoldenInt::new(Int::from(n), Int::zero())
    }

    fn from_int(n: &Int) -> Self {
        GoldenInt::new(n.clone(), Int::zero())
    }

    fn div_exact(&self, d: &Self) -> Option<Self> {
        if d.is_zero() {
            return None;
        }
        let num = self.clone() * d.conj();
        let den = d.norm();
        let qa = num.a.div_exact(&den)?;
        let qb = num.b.div_exact(&den)?;
        Some(GoldenInt::new(qa, qb))
    }

    fn display_negative(&self) -> bool {
        self.embedding_sign() < 0
    }
}

impl fmt::Display for GoldenInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_negative() {
            write!(f, "{}-{}*tau", self.a, self.b.magnitude())
        } else {
            write!(f, "{}+{}*tau", self.a, self.b)
        }
    }
}

impl fmt::Debug for GoldenInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl FromStr for GoldenInt {
    type Err = Error;

    /// Accepts `a`, `b*tau`, `tau`, and signed combinations such as
    /// `-1+2*tau` or `2*tau-1`.
    fn from_str(s: &str) -> Result<Self, Error> {
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(Error::Parse(format!("empty Z[tau] literal: {s:?}")));
        }
        let bad = || Error::Parse(format!("invalid Z[tau] literal: {s:?}"));
        let mut value = GoldenInt::zero();
        let mut term = String::new();
        let mut terms: Vec<String> = Vec::new();
        for (i, c) in compact.chars().enumerate() {
            if (c == '+' || c == '-') && i > 0 {
                terms.push(std::mem::take(&mut term));
            }
            term.push(c);
        }
        terms.push(term);
        for t in terms {
            let (sign, body) = match t.strip_prefix('-') {
                Some(rest) => (-1i64, rest),
                None => (1i64, t.strip_prefix('+').unwrap_or(&t)),
            };
            if body.is_empty() {
                return Err(bad());
            }
            let part = if let Some(coef) = body.strip_suffix("*tau") {
                let c: Int = coef.parse().map_err(|_| bad())?;
                GoldenInt::new(Int::zero(), c)
            } else if body == "tau" {
                GoldenInt::tau()
            } else {
                let c: Int = body.parse().map_err(|_| bad())?;
                GoldenInt::new(c, Int::zero())
            };
            value = value + part * GoldenInt::from_i64(sign);
        }
        Ok(value)
    }
}

impl serde::Serialize for GoldenInt {
    /// `{"a": "..", "b": "..", "display": "a+b*tau"}`, integers as decimal
    /// strings so values survive JSON consumers with 53-bit numbers.
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("GoldenInt", 3)?;
        st.serialize_field("a", &self.a.to_string())?;
        st.serialize_field("b", &self.b.to_string())?;
        st.serialize_field("display", &self.to_string())?;
        st.end()
    }
}

impl<'de> serde::Deserialize<'de> for GoldenInt {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(serde::Deserialize)]
        struct Raw {
            a: String,
            b: String,
            #[serde(default)]
            #[allow(dead_code)]
            display: Option<String>,
        }
        let raw = Raw::deserialize(d)?;
        let a: Int = raw.a.parse().map_err(serde::de::Error::custom)?;
        let b: Int = raw.b.parse().map_err(serde::de::Error::custom)?;
        Ok(GoldenInt::new(a, b))
    }
}

/// Serde adapter writing an [`Int`] as a decimal string.
pub mod int_string {
    use super::Int;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &Int, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&x.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Int, D::Error> {
        String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }
}

/// Serde adapter for maps with small integer keys and [`Int`] values.
pub mod int_map_string {
    use std::collections::BTreeMap;

    use super::Int;
    use serde::{Deserialize, Deserializer, Serialize as _, Serializer};

    pub fn serialize<S: Serializer>(m: &BTreeMap<u32, Int>, s: S) -> Result<S::Ok, S::Error> {
        let raw: BTreeMap<u32, String> = m.iter().map(|(k, v)| (*k, v.to_string())).collect();
        raw.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BTreeMap<u32, Int>, D::Error> {
        let raw = BTreeMap::<u32, String>::deserialize(d)?;
        raw.into_iter()
            .map(|(k, v)| Ok((k, v.parse().map_err(serde::de::Error::custom)?)))
            .collect()
    }
}
