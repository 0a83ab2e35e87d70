//! Integer Laurent polynomials in one variable `v`.
//!
//! Coefficients are exact integers. They live in an `i64` while they fit and
//! are promoted to a `BigInt` on overflow, so no arithmetic is ever lossy.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use serde::de::{self, MapAccess, Visitor};
use serde::ser::SerializeMap;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::Error;

/// An exact integer.
#[derive(Clone, PartialEq, Eq, Hash)]
pub enum Coeff {
    Small(i64),
    /// Only used for values outside the `i64` range.
    Big(BigInt),
}

impl Coeff {
    pub const ZERO: Coeff = Coeff::Small(0);
    pub const ONE: Coeff = Coeff::Small(1);

    fn normalize(b: BigInt) -> Coeff {
        match b.to_i64() {
            Some(s) => Coeff::Small(s),
            None => Coeff::Big(b),
        }
    }

    fn to_big(&self) -> BigInt {
        match self {
            Coeff::Small(s) => BigInt::from(*s),
            Coeff::Big(b) => b.clone(),
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Coeff::Small(0))
    }

    pub fn to_i64(&self) -> Option<i64> {
        match self {
            Coeff::Small(s) => Some(*s),
            Coeff::Big(_) => None,
        }
    }

    pub fn signum(&self) -> i32 {
        match self {
            Coeff::Small(s) => s.signum() as i32,
            Coeff::Big(b) => match b.sign() {
                num_bigint::Sign::Minus => -1,
                num_bigint::Sign::NoSign => 0,
                num_bigint::Sign::Plus => 1,
            },
        }
    }
}

impl From<i64> for Coeff {
    fn from(v: i64) -> Self {
        Coeff::Small(v)
    }
}

impl From<BigInt> for Coeff {
    fn from(v: BigInt) -> Self {
        Coeff::normalize(v)
    }
}

impl Add for &Coeff {
    type Output = Coeff;
    fn add(self, rhs: &Coeff) -> Coeff {
        if let (Coeff::Small(a), Coeff::Small(b)) = (self, rhs) {
            if let Some(c) = a.checked_add(*b) {
                return Coeff::Small(c);
            }
        }
        Coeff::normalize(self.to_big() + rhs.to_big())
    }
}

impl Sub for &Coeff {
    type Output = Coeff;
    fn sub(self, rhs: &Coeff) -> Coeff {
        if let (Coeff::Small(a), Coeff::Small(b)) = (self, rhs) {
            if let Some(c) = a.checked_sub(*b) {
                return Coeff::Small(c);
            }
        }
        Coeff::normalize(self.to_big() - rhs.to_big())
    }
}

impl Mul for &Coeff {
    type Output = Coeff;
    fn mul(self, rhs: &Coeff) -> Coeff {
        if let (Coeff::Small(a), Coeff::Small(b)) = (self, rhs) {
            if let Some(c) = a.checked_mul(*b) {
                return Coeff::Small(c);
            }
        }
        Coeff::normalize(self.to_big() * rhs.to_big())
    }
}

impl Neg for &Coeff {
    type Output = Coeff;
    fn neg(self) -> Coeff {
        match self {
            Coeff::Small(a) => match a.checked_neg() {
                Some(c) => Coeff::Small(c),
                None => Coeff::normalize(-BigInt::from(*a)),
            },
            Coeff::Big(b) => Coeff::normalize(-b.clone()),
        }
    }
}

impl PartialOrd for Coeff {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Coeff {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Coeff::Small(a), Coeff::Small(b)) => a.cmp(b),
            _ => self.to_big().cmp(&other.to_big()),
        }
    }
}

impl fmt::Display for Coeff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Coeff::Small(s) => write!(f, "{s}"),
            Coeff::Big(b) => write!(f, "{b}"),
        }
    }
}

impl fmt::Debug for Coeff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Coeff {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self, Error> {
        if let Ok(v) = s.parse::<i64>() {
            return Ok(Coeff::Small(v));
        }
        s.parse::<BigInt>()
            .map(Coeff::normalize)
            .map_err(|_| Error::parse(format!("bad integer `{s}`")))
    }
}

/// A Laurent polynomial `sum_k c_k v^k` with integer coefficients.
///
/// Zero coefficients are never stored; the empty map is the zero polynomial.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct LaurentPoly {
    terms: BTreeMap<i32, Coeff>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(1, 0)
    }

    /// The variable `v`.
    pub fn v() -> Self {
        Self::monomial(1, 1)
    }

    pub fn v_inv() -> Self {
        Self::monomial(1, -1)
    }

    pub fn constant(c: i64) -> Self {
        Self::monomial(c, 0)
    }

    /// `c * v^exp`.
    pub fn monomial(c: impl Into<Coeff>, exp: i32) -> Self {
        let mut p = Self::zero();
        p.add_term(exp, &c.into());
        p
    }

    pub fn from_terms<I, C>(terms: I) -> Self
    where
        I: IntoIterator<Item = (i32, C)>,
        C: Into<Coeff>,
    {
        let mut p = Self::zero();
        for (e, c) in terms {
            p.add_term(e, &c.into());
        }
        p
    }

    /// `v^-1 - v`, the coefficient in the quadratic relation.
    pub fn v_inv_minus_v() -> Self {
        Self::from_terms([(-1, 1i64), (1, -1)])
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms.get(&0) == Some(&Coeff::ONE)
    }

    pub fn coeff(&self, exp: i32) -> Coeff {
        self.terms.get(&exp).cloned().unwrap_or(Coeff::ZERO)
    }

    pub fn constant_term(&self) -> Coeff {
        self.coeff(0)
    }

    pub fn terms(&self) -> impl Iterator<Item = (i32, &Coeff)> + '_ {
        self.terms.iter().map(|(e, c)| (*e, c))
    }

    pub fn min_exp(&self) -> Option<i32> {
        self.terms.keys().next().copied()
    }

    pub fn max_exp(&self) -> Option<i32> {
        self.terms.keys().next_back().copied()
    }

    pub fn add_term(&mut self, exp: i32, c: &Coeff) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(exp).or_insert(Coeff::ZERO);
        *slot = &*slot + c;
        if slot.is_zero() {
            self.terms.remove(&exp);
        }
    }

    /// Multiplication by `v^k`.
    pub fn shift(&self, k: i32) -> Self {
        Self {
            terms: self.terms.iter().map(|(e, c)| (e + k, c.clone())).collect(),
        }
    }

    pub fn scale(&self, c: &Coeff) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self {
            terms: self.terms.iter().map(|(e, x)| (*e, x * c)).collect(),
        }
    }

    /// The bar involution `v -> v^-1`.
    pub fn bar(&self) -> Self {
        Self {
            terms: self.terms.iter().map(|(e, c)| (-e, c.clone())).collect(),
        }
    }

    /// True iff every exponent is at least 1 (the zero polynomial qualifies).
    pub fn in_v_times_zv(&self) -> bool {
        self.min_exp().is_none_or(|e| e >= 1)
    }

    /// True iff every exponent is non-negative.
    pub fn in_zv(&self) -> bool {
        self.min_exp().is_none_or(|e| e >= 0)
    }

    pub fn is_bar_invariant(&self) -> bool {
        *self == self.bar()
    }

    /// Evaluate at `v = 1`.
    pub fn at_one(&self) -> Coeff {
        self.terms.values().fold(Coeff::ZERO, |acc, c| &acc + c)
    }
}

impl Add for &LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Add for LaurentPoly {
    type Output = LaurentPoly;
    fn add(mut self, rhs: LaurentPoly) -> LaurentPoly {
        self += &rhs;
        self
    }
}

impl AddAssign<&LaurentPoly> for LaurentPoly {
    fn add_assign(&mut self, rhs: &LaurentPoly) {
        for (e, c) in &rhs.terms {
            self.add_term(*e, c);
        }
    }
}

impl SubAssign<&LaurentPoly> for LaurentPoly {
    fn sub_assign(&mut self, rhs: &LaurentPoly) {
        for (e, c) in &rhs.terms {
            self.add_term(*e, &-c);
        }
    }
}

impl Sub for &LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl Sub for LaurentPoly {
    type Output = LaurentPoly;
    fn sub(mut self, rhs: LaurentPoly) -> LaurentPoly {
        self -= &rhs;
        self
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        LaurentPoly {
            terms: self.terms.iter().map(|(e, c)| (*e, -c)).collect(),
        }
    }
}

impl Neg for LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        -&self
    }
}

impl Mul for &LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = LaurentPoly::zero();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &rhs.terms {
                out.add_term(e1 + e2, &(c1 * c2));
            }
        }
        out
    }
}

impl Mul for LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: LaurentPoly) -> LaurentPoly {
        &self * &rhs
    }
}

impl fmt::Display for LaurentPoly {
    /// Canonical form: terms in increasing exponent, e.g. `-v^-1 + 1 + 3*v^2`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (i, (e, c)) in self.terms.iter().enumerate() {
            let negative = c.signum() < 0;
            let abs = if negative { -c } else { c.clone() };
            match (i, negative) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let unit = abs == Coeff::ONE;
            match *e {
                0 => write!(f, "{abs}")?,
                1 if unit => f.write_str("v")?,
                1 => write!(f, "{abs}*v")?,
                _ if unit => write!(f, "v^{e}")?,
                _ => write!(f, "{abs}*v^{e}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LaurentPoly({self})")
    }
}

impl FromStr for LaurentPoly {
    type Err = Error;

    /// Accepts the canonical form plus looser variants such as `2v`, `v^{-1}`,
    /// `v^(-2)`, `3 * v ^ 2` and repeated exponents (which are summed).
    fn from_str(s: &str) -> Result<Self, Error> {
        let chars: Vec<char> = s.chars().filter(|c| !c.is_whitespace()).collect();
        if chars.is_empty() {
            return Err(Error::parse("empty polynomial"));
        }
        let mut pos = 0;
        let mut out = LaurentPoly::zero();
        while pos < chars.len() {
            let mut sign = 1i64;
            while pos < chars.len() && (chars[pos] == '+' || chars[pos] == '-') {
                if chars[pos] == '-' {
                    sign = -sign;
                }
                pos += 1;
            }
            let start = pos;
            while pos < chars.len() && chars[pos].is_ascii_digit() {
                pos += 1;
            }
            let coeff: Option<Coeff> = if pos > start {
                let digits: String = chars[start..pos].iter().collect();
                Some(digits.parse()?)
            } else {
                None
            };
            if pos < chars.len() && chars[pos] == '*' {
                if coeff.is_none() {
                    return Err(Error::parse("`*` without a coefficient"));
                }
                pos += 1;
                if pos >= chars.len() || chars[pos] != 'v' {
                    return Err(Error::parse("expected `v` after `*`"));
                }
            }
            let exp = if pos < chars.len() && chars[pos] == 'v' {
                pos += 1;
                if pos < chars.len() && chars[pos] == '^' {
                    pos += 1;
                    let close = match chars.get(pos) {
                        Some('{') => Some('}'),
                        Some('(') => Some(')'),
                        _ => None,
                    };
                    if close.is_some() {
                        pos += 1;
                    }
                    let estart = pos;
                    if pos < chars.len() && (chars[pos] == '-' || chars[pos] == '+') {
                        pos += 1;
                    }
                    while pos < chars.len() && chars[pos].is_ascii_digit() {
                        pos += 1;
                    }
                    let text: String = chars[estart..pos].iter().collect();
                    let e: i32 = text
                        .parse()
                        .map_err(|_| Error::parse(format!("bad exponent `{text}`")))?;
                    if let Some(c) = close {
                        if chars.get(pos) != Some(&c) {
                            return Err(Error::parse(format!("expected `{c}`")));
                        }
                        pos += 1;
                    }
                    e
                } else {
                    1
                }
            } else {
                if coeff.is_none() {
                    return Err(Error::parse(format!(
                        "unexpected character at offset {pos} in `{s}`"
                    )));
                }
                0
            };
            let c = coeff.unwrap_or(Coeff::ONE);
            out.add_term(exp, &(&c * &Coeff::Small(sign)));
            if pos < chars.len() && chars[pos] != '+' && chars[pos] != '-' {
                return Err(Error::parse(format!(
                    "unexpected `{}` at offset {pos}",
                    chars[pos]
                )));
            }
            if pos < chars.len() && pos + 1 == chars.len() {
                return Err(Error::parse("dangling operator"));
            }
        }
        Ok(out)
    }
}

impl Serialize for LaurentPoly {
    /// JSON object from exponent (as a string key) to coefficient. Coefficients
    /// outside the `i64` range are written as decimal strings.
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut map = serializer.serialize_map(Some(self.terms.len()))?;
        for (e, c) in &self.terms {
            match c {
                Coeff::Small(v) => map.serialize_entry(&e.to_string(), v)?,
                Coeff::Big(b) => map.serialize_entry(&e.to_string(), &b.to_string())?,
            }
        }
        map.end()
    }
}

impl<'de> Deserialize<'de> for LaurentPoly {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        struct PolyVisitor;

        impl<'de> Visitor<'de> for PolyVisitor {
            type Value = LaurentPoly;

            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("an object mapping exponents to integer coefficients")
            }

            fn visit_map<A: MapAccess<'de>>(self, mut access: A) -> Result<LaurentPoly, A::Error> {
                let mut out = LaurentPoly::zero();
                while let Some((k, v)) = access.next_entry::<String, serde_json::Value>()? {
                    let exp: i32 = k
                        .parse()
                        .map_err(|_| de::Error::custom(format!("bad exponent `{k}`")))?;
                    let c: Coeff = match &v {
                        serde_json::Value::Number(n) => n
                            .as_i64()
                            .map(Coeff::Small)
                            .ok_or_else(|| de::Error::custom("coefficient must be an integer"))?,
                        serde_json::Value::String(s) => s.parse().map_err(de::Error::custom)?,
                        _ => return Err(de::Error::custom("coefficient must be an integer")),
                    };
                    if c.is_zero() {
                        return Err(de::Error::custom("zero coefficients are not stored"));
                    }
                    out.add_term(exp, &c);
                }
                Ok(out)
            }
        }

        deserializer.deserialize_map(PolyVisitor)
    }
}

impl Zero for LaurentPoly {
    fn zero() -> Self {
        LaurentPoly::zero()
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(s: &str) -> LaurentPoly {
        s.parse().unwrap()
    }

    #[test]
    fn ring_examples() {
        assert_eq!(&p("v + v^-1") + &p("-v^-1"), LaurentPoly::v());
        assert_eq!(&p("v^-1 - v") * &LaurentPoly::v(), p("1 - v^2"));
        assert!((&p("3 + v") * &LaurentPoly::zero()).is_zero());
    }

    #[test]
    fn bar_examples() {
        assert_eq!(LaurentPoly::v().bar(), LaurentPoly::v_inv());
        assert_eq!(p("1 + v^2").bar(), p("1 + v^-2"));
        let q = p("-2*v^-3 + 7 + v^5");
        assert_eq!(q.bar().bar(), q);
    }

    #[test]
    fn v_times_zv_membership() {
        assert!(p("v + 3*v^2").in_v_times_zv());
        assert!(!LaurentPoly::one().in_v_times_zv());
        assert!(LaurentPoly::zero().in_v_times_zv());
    }

    #[test]
    fn canonical_display() {
        assert_eq!(p("3v^2 + 1 - v^-1").to_string(), "-v^-1 + 1 + 3*v^2");
        assert_eq!(LaurentPoly::zero().to_string(), "0");
        assert_eq!(p("-v").to_string(), "-v");
        assert_eq!(p("2*v").to_string(), "2*v");
        assert_eq!(p("v^{-2} + v^(3)").to_string(), "v^-2 + v^3");
    }

    #[test]
    fn parse_rejects_garbage() {
        for bad in ["", "+", "v^", "3*", "x", "2v3", "1 +", "v^{2", "*v"] {
            assert!(bad.parse::<LaurentPoly>().is_err(), "accepted {bad:?}");
        }
    }

    #[test]
    fn overflow_promotes_to_bigint() {
        let big = LaurentPoly::constant(i64::MAX);
        let sq = &big * &big;
        let c = sq.constant_term();
        assert!(matches!(c, Coeff::Big(_)));
        let back = &sq - &sq;
        assert!(back.is_zero());
        let text = sq.to_string();
        assert_eq!(text.parse::<LaurentPoly>().unwrap(), sq);
        let json = serde_json::to_string(&sq).unwrap();
        assert_eq!(serde_json::from_str::<LaurentPoly>(&json).unwrap(), sq);
    }

    #[test]
    fn json_shape() {
        let q = p("-v^-1 + 4*v^2");
        assert_eq!(serde_json::to_string(&q).unwrap(), r#"{"-1":-1,"2":4}"#);
    }

    fn arb_poly() -> impl Strategy<Value = LaurentPoly> {
        proptest::collection::btree_map(-6i32..6, -20i64..20, 0..6)
            .prop_map(LaurentPoly::from_terms)
    }

    proptest! {
        #[test]
        fn bar_is_ring_involution(a in arb_poly(), b in arb_poly()) {
            prop_assert_eq!((&a * &b).bar(), &a.bar() * &b.bar());
            prop_assert_eq!((&a + &b).bar(), &a.bar() + &b.bar());
            prop_assert_eq!(a.bar().bar(), a.clone());
        }

        #[test]
        fn text_and_json_round_trip(a in arb_poly()) {
            prop_assert_eq!(a.to_string().parse::<LaurentPoly>().unwrap(), a.clone());
            let json = serde_json::to_string(&a).unwrap();
            prop_assert_eq!(serde_json::from_str::<LaurentPoly>(&json).unwrap(), a);
        }

        #[test]
        fn distributive(a in arb_poly(), b in arb_poly(), c in arb_poly()) {
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        }
    }
}
