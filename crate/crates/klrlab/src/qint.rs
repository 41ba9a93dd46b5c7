//! Exact Laurent polynomials in one variable `q` with arbitrary-precision
//! integer coefficients, together with quantum integers and the bar
//! involution `q ↦ q⁻¹`.
//!
//! A [`LaurentPoly`] is stored canonically: terms sorted by exponent and no
//! zero coefficients, so structural equality is mathematical equality.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::de::{self, Deserializer, SeqAccess, Visitor};
use serde::ser::{SerializeSeq, Serializer};
use serde::{Deserialize, Serialize};

/// A Laurent polynomial `Σ c_e q^e` with integer coefficients.
#[derive(Clone, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct LaurentPoly {
    terms: BTreeMap<i32, BigInt>,
}

impl LaurentPoly {
    /// The zero polynomial.
    pub fn zero() -> Self {
        Self::default()
    }

    /// The constant polynomial `1`.
    pub fn one() -> Self {
        Self::constant(1)
    }

    /// The constant polynomial `c`.
    pub fn constant(c: impl Into<BigInt>) -> Self {
        Self::monomial(0, c)
    }

    /// The monomial `q^e`.
    pub fn q_pow(e: i32) -> Self {
        Self::monomial(e, 1)
    }

    /// The monomial `c·q^e` (zero if `c = 0`).
    pub fn monomial(e: i32, c: impl Into<BigInt>) -> Self {
        let c = c.into();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(e, c);
        }
        Self { terms }
    }

    /// Builds a polynomial from `(exponent, coefficient)` pairs; repeated
    /// exponents are summed and zero coefficients dropped.
    pub fn from_terms<I, C>(pairs: I) -> Self
    where
        I: IntoIterator<Item = (i32, C)>,
        C: Into<BigInt>,
    {
        let mut p = Self::zero();
        for (e, c) in pairs {
            p.add_term(e, c.into());
        }
        p
    }

    /// Iterates over `(exponent, coefficient)` pairs in ascending exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (i32, &BigInt)> + '_ {
        self.terms.iter().map(|(e, c)| (*e, c))
    }

    /// Number of nonzero terms.
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    /// True if there are no terms, i.e. for the zero polynomial.
    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// True for the zero polynomial.
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// True for the constant `1`.
    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms.get(&0).is_some_and(|c| c.is_one())
    }

    /// Coefficient of `q^e`.
    pub fn coeff(&self, e: i32) -> BigInt {
        self.terms.get(&e).cloned().unwrap_or_default()
    }

    /// Smallest exponent with a nonzero coefficient.
    pub fn min_exp(&self) -> Option<i32> {
        self.terms.keys().next().copied()
    }

    /// Largest exponent with a nonzero coefficient.
    pub fn max_exp(&self) -> Option<i32> {
        self.terms.keys().next_back().copied()
    }

    /// Coefficient of the highest power of `q`.
    pub fn leading_coeff(&self) -> Option<&BigInt> {
        self.terms.values().next_back()
    }

    /// Adds `c·q^e` in place, keeping the representation canonical.
    pub fn add_term(&mut self, e: i32, c: BigInt) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(e).or_default();
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&e);
        }
    }

    /// Multiplies by `q^k`.
    pub fn shift(&self, k: i32) -> Self {
        Self {
            terms: self.terms.iter().map(|(e, c)| (e + k, c.clone())).collect(),
        }
    }

    /// Multiplies every coefficient by `s`.
    pub fn scale(&self, s: &BigInt) -> Self {
        if s.is_zero() {
            return Self::zero();
        }
        Self {
            terms: self.terms.iter().map(|(e, c)| (*e, c * s)).collect(),
        }
    }

    /// The bar involution `q ↦ q⁻¹`.
    pub fn bar(&self) -> Self {
        Self {
            terms: self.terms.iter().map(|(e, c)| (-e, c.clone())).collect(),
        }
    }

    /// Value at `q = 1`.
    pub fn eval_at_one(&self) -> BigInt {
        self.terms.values().sum()
    }

    /// Positive gcd of all coefficients (zero for the zero polynomial).
    pub fn content(&self) -> BigInt {
        self.terms
            .values()
            .fold(BigInt::zero(), |g, c| g.gcd(c))
    }

    /// Divides every coefficient by `d`, which must divide all of them.
    fn div_scalar_exact(&self, d: &BigInt) -> Self {
        Self {
            terms: self.terms.iter().map(|(e, c)| (*e, c / d)).collect(),
        }
    }

    /// Exact division in `ℤ[q, q⁻¹]`: returns `Some(r)` with `r·other = self`
    /// when such an `r` exists.
    pub fn div_exact(&self, other: &LaurentPoly) -> Option<LaurentPoly> {
        assert!(!other.is_zero(), "division by the zero polynomial");
        if self.is_zero() {
            return Some(Self::zero());
        }
        let mut rem = self.clone();
        let mut quot = Self::zero();
        let (b_lo, b_hi) = (other.min_exp()?, other.max_exp()?);
        let b_lc = other.leading_coeff()?.clone();
        let a_lo = self.min_exp()?;
        // Divide from the top; the quotient's lowest exponent is a_lo - b_lo.
        while let Some(r_hi) = rem.max_exp() {
            let shift = r_hi - b_hi;
            if shift < a_lo - b_lo {
                return None;
            }
            let (q, r) = rem.terms[&r_hi].div_rem(&b_lc);
            if !r.is_zero() {
                return None;
            }
            let term = Self::monomial(shift, q);
            rem = &rem - &(&term * other);
            quot = &quot + &term;
        }
        Some(quot)
    }

    /// Greatest common divisor in `ℤ[q, q⁻¹]`, normalised to have lowest
    /// exponent 0 and a positive leading coefficient. Units `±q^k` are
    /// ignored, so the result is unique.
    pub fn gcd(&self, other: &LaurentPoly) -> LaurentPoly {
        if self.is_zero() {
            return other.normalize_unit();
        }
        if other.is_zero() {
            return self.normalize_unit();
        }
        let ca = self.content();
        let cb = other.content();
        let c = ca.gcd(&cb);
        let mut a = self.div_scalar_exact(&ca).normalize_unit();
        let mut b = other.div_scalar_exact(&cb).normalize_unit();
        if a.max_exp() < b.max_exp() {
            std::mem::swap(&mut a, &mut b);
        }
        // Primitive polynomial remainder sequence over ℤ.
        while !b.is_zero() {
            let r = a.pseudo_rem(&b);
            a = b;
            if r.is_zero() {
                b = Self::zero();
            } else {
                let cr = r.content();
                b = r.div_scalar_exact(&cr).normalize_unit();
            }
        }
        a.normalize_unit().scale(&c)
    }

    /// Removes the unit `±q^k` so that the lowest exponent is 0 and the
    /// leading coefficient is positive.
    pub fn normalize_unit(&self) -> LaurentPoly {
        match self.min_exp() {
            None => Self::zero(),
            Some(lo) => {
                let p = self.shift(-lo);
                if p.leading_coeff().is_some_and(|c| c.is_negative()) {
                    -p
                } else {
                    p
                }
            }
        }
    }

    /// Pseudo-remainder of two polynomials with lowest exponent 0.
    fn pseudo_rem(&self, b: &LaurentPoly) -> LaurentPoly {
        let db = b.max_exp().unwrap_or(0);
        let lc = b.leading_coeff().cloned().unwrap_or_else(BigInt::one);
        let mut r = self.clone();
        while let Some(dr) = r.max_exp() {
            if dr < db {
                break;
            }
            let rc = r.terms[&dr].clone();
            r = &r.scale(&lc) - &b.shift(dr - db).scale(&rc);
        }
        r
    }

    /// Renders the polynomial with the given variable name.
    pub fn render(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (i, (e, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            if i == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let mono = match *e {
                0 => String::new(),
                1 => var.to_string(),
                _ => format!("{var}^{e}"),
            };
            if mono.is_empty() {
                out.push_str(&abs.to_string());
            } else if abs.is_one() {
                out.push_str(&mono);
            } else {
                out.push_str(&format!("{abs}{mono}"));
            }
        }
        out
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render("q"))
    }
}

impl fmt::Debug for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LaurentPoly({self})")
    }
}

impl From<i64> for LaurentPoly {
    fn from(c: i64) -> Self {
        Self::constant(c)
    }
}

impl<'a> Add<&'a LaurentPoly> for &'a LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: &'a LaurentPoly) -> LaurentPoly {
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
            self.add_term(*e, c.clone());
        }
    }
}

impl SubAssign<&LaurentPoly> for LaurentPoly {
    fn sub_assign(&mut self, rhs: &LaurentPoly) {
        for (e, c) in &rhs.terms {
            self.add_term(*e, -c);
        }
    }
}

impl<'a> Sub<&'a LaurentPoly> for &'a LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: &'a LaurentPoly) -> LaurentPoly {
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

impl Neg for LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        Self {
            terms: self.terms.into_iter().map(|(e, c)| (e, -c)).collect(),
        }
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        -(self.clone())
    }
}

impl<'a> Mul<&'a LaurentPoly> for &'a LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: &'a LaurentPoly) -> LaurentPoly {
        let mut out = LaurentPoly::zero();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                out.add_term(ea + eb, ca * cb);
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

/// The quantum integer `[n] = (qⁿ − q⁻ⁿ)/(q − q⁻¹)`.
///
/// For `n > 0` this is `q^{n−1} + q^{n−3} + … + q^{1−n}`; `[0] = 0` and
/// `[−n] = −[n]`.
pub fn quantum_integer(n: i64) -> LaurentPoly {
    let sign: i64 = if n < 0 { -1 } else { 1 };
    let m = n.unsigned_abs() as i32;
    LaurentPoly::from_terms((0..m).map(|k| (m - 1 - 2 * k, sign)))
}

/// The bar involution `q ↦ q⁻¹`.
pub fn bar_involution(p: &LaurentPoly) -> LaurentPoly {
    p.bar()
}

/// Ring operation selector for [`laurent_arith`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LaurentOp {
    Add,
    Mul,
    Eq,
}

/// Result of [`laurent_arith`]: a polynomial for ring operations, a boolean
/// for equality.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LaurentValue {
    Poly(LaurentPoly),
    Bool(bool),
}

/// Exact ring operations on Laurent polynomials.
pub fn laurent_arith(a: &LaurentPoly, b: &LaurentPoly, op: LaurentOp) -> LaurentValue {
    match op {
        LaurentOp::Add => LaurentValue::Poly(a + b),
        LaurentOp::Mul => LaurentValue::Poly(a * b),
        LaurentOp::Eq => LaurentValue::Bool(a == b),
    }
}

/// Serialises as `[[exponent, coefficient], …]` in ascending exponent order.
/// Coefficients that fit in an `i64` are JSON integers; larger ones are
/// decimal strings.
impl Serialize for LaurentPoly {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(self.terms.len()))?;
        for (e, c) in &self.terms {
            match i64::try_from(c) {
                Ok(small) => seq.serialize_element(&(*e, small))?,
                Err(_) => seq.serialize_element(&(*e, c.to_string()))?,
            }
        }
        seq.end()
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
enum CoeffRepr {
    Int(i64),
    Text(String),
}

impl<'de> Deserialize<'de> for LaurentPoly {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        struct PairsVisitor;
        impl<'de> Visitor<'de> for PairsVisitor {
            type Value = LaurentPoly;
            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("an array of [exponent, coefficient] pairs")
            }
            fn visit_seq<A: SeqAccess<'de>>(self, mut seq: A) -> Result<LaurentPoly, A::Error> {
                let mut p = LaurentPoly::zero();
                while let Some((e, c)) = seq.next_element::<(i32, CoeffRepr)>()? {
                    let c = match c {
                        CoeffRepr::Int(v) => BigInt::from(v),
                        CoeffRepr::Text(s) => s
                            .parse::<BigInt>()
                            .map_err(|_| de::Error::custom(format!("bad coefficient {s:?}")))?,
                    };
                    p.add_term(e, c);
                }
                Ok(p)
            }
        }
        deserializer.deserialize_seq(PairsVisitor)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lp(pairs: &[(i32, i64)]) -> LaurentPoly {
        LaurentPoly::from_terms(pairs.iter().copied())
    }

    #[test]
    fn quantum_integer_examples() {
        assert!(quantum_integer(0).is_zero());
        assert_eq!(quantum_integer(2), lp(&[(-1, 1), (1, 1)]));
        assert_eq!(quantum_integer(-3), lp(&[(-2, -1), (0, -1), (2, -1)]));
    }

    #[test]
    fn quantum_integer_matches_defining_ratio() {
        // (q^n - q^-n) = [n] (q - q^-1)
        let denom = lp(&[(1, 1), (-1, -1)]);
        for n in -6..=6i64 {
            let lhs = lp(&[(n as i32, 1), (-(n as i32), -1)]);
            assert_eq!(&quantum_integer(n) * &denom, lhs, "n = {n}");
        }
    }

    #[test]
    fn bar_examples() {
        assert_eq!(bar_involution(&lp(&[(2, 1), (0, 1)])), lp(&[(-2, 1), (0, 1)]));
        assert!(bar_involution(&LaurentPoly::zero()).is_zero());
        for n in 0..8 {
            assert_eq!(bar_involution(&quantum_integer(n)), quantum_integer(n));
        }
    }

    #[test]
    fn arith_examples() {
        let q = LaurentPoly::q_pow(1);
        let qi = LaurentPoly::q_pow(-1);
        assert_eq!(
            laurent_arith(&q, &qi, LaurentOp::Add),
            LaurentValue::Poly(lp(&[(-1, 1), (1, 1)]))
        );
        let two = quantum_integer(2);
        assert_eq!(
            laurent_arith(&two, &two, LaurentOp::Mul),
            LaurentValue::Poly(lp(&[(-2, 1), (0, 2), (2, 1)]))
        );
        assert_eq!(laurent_arith(&two, &two, LaurentOp::Eq), LaurentValue::Bool(true));
    }

    #[test]
    fn exact_division_and_gcd() {
        let a = quantum_integer(2);
        let b = quantum_integer(3);
        let prod = &a * &b;
        assert_eq!(prod.div_exact(&a), Some(b.clone()));
        assert_eq!(prod.div_exact(&b), Some(a.clone()));
        assert_eq!(a.div_exact(&b), None);
        assert_eq!(lp(&[(0, 3)]).div_exact(&lp(&[(0, 2)])), None);
        // [4] = [2](q^2 + q^-2) shares no factor with [3].
        let g = prod.gcd(&(&a * &quantum_integer(4)));
        assert_eq!(g, a.normalize_unit());
        assert_eq!(lp(&[(0, 4), (1, 6)]).gcd(&lp(&[(0, 6)])), lp(&[(0, 2)]));
    }

    #[test]
    fn json_round_trip() {
        let p = lp(&[(-1, 1), (1, 1)]);
        let s = serde_json::to_string(&p).unwrap();
        assert_eq!(s, "[[-1,1],[1,1]]");
        let back: LaurentPoly = serde_json::from_str(&s).unwrap();
        assert_eq!(back, p);
        let big = LaurentPoly::constant(BigInt::from(10).pow(30));
        let s = serde_json::to_string(&big).unwrap();
        let back: LaurentPoly = serde_json::from_str(&s).unwrap();
        assert_eq!(back, big);
    }

    #[test]
    fn display() {
        assert_eq!(lp(&[(-1, 1), (1, 1)]).to_string(), "q + q^-1");
        assert_eq!(lp(&[(0, -2), (2, 3)]).to_string(), "3q^2 - 2");
        assert_eq!(LaurentPoly::zero().to_string(), "0");
    }
}
