//! Dense univariate polynomials over the integers.
//!
//! Coefficients are stored low-to-high with no trailing zeros, so the zero
//! polynomial is the empty vector and `degree` is always `len - 1`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::de::{self, SeqAccess, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct IntPoly {
    coeffs: Vec<BigInt>,
}

impl IntPoly {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        IntPoly { coeffs }
    }

    pub fn from_i64s(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero() -> Self {
        IntPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(BigInt::one())
    }

    pub fn constant(c: BigInt) -> Self {
        Self::new(vec![c])
    }

    /// `c * t^k`
    pub fn monomial(c: BigInt, k: usize) -> Self {
        let mut coeffs = vec![BigInt::zero(); k];
        coeffs.push(c);
        Self::new(coeffs)
    }

    /// The linear polynomial `t - a`.
    pub fn linear_root(a: i64) -> Self {
        Self::from_i64s(&[-a, 1])
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<BigInt> {
        self.coeffs
    }

    /// Coefficient of `t^k`; zero beyond the degree.
    pub fn coeff(&self, k: usize) -> BigInt {
        self.coeffs.get(k).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&BigInt> {
        self.coeffs.last()
    }

    pub fn is_monic(&self) -> bool {
        self.leading().is_some_and(One::is_one)
    }

    /// Maximum absolute value of the coefficients.
    pub fn height(&self) -> BigInt {
        self.coeffs.iter().map(|c| c.abs()).max().unwrap_or_default()
    }

    pub fn content(&self) -> BigInt {
        self.coeffs
            .iter()
            .fold(BigInt::zero(), |acc, c| acc.gcd(c))
    }

    /// Divides out the content and makes the leading coefficient positive.
    pub fn primitive_part(&self) -> IntPoly {
        if self.is_zero() {
            return IntPoly::zero();
        }
        let mut c = self.content();
        if self.leading().unwrap().is_negative() {
            c = -c;
        }
        IntPoly {
            coeffs: self.coeffs.iter().map(|x| x / &c).collect(),
        }
    }

    pub fn scale(&self, c: &BigInt) -> IntPoly {
        IntPoly::new(self.coeffs.iter().map(|x| x * c).collect())
    }

    pub fn eval(&self, x: &BigInt) -> BigInt {
        self.coeffs
            .iter()
            .rev()
            .fold(BigInt::zero(), |acc, c| acc * x + c)
    }

    pub fn derivative(&self) -> IntPoly {
        IntPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * BigInt::from(k))
                .collect(),
        )
    }

    pub fn pow(&self, mut e: u32) -> IntPoly {
        let mut base = self.clone();
        let mut acc = IntPoly::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Splits `f = t^k * g` with `g(0) != 0`.
    pub fn strip_t_power(&self) -> (usize, IntPoly) {
        let k = self.coeffs.iter().take_while(|c| c.is_zero()).count();
        if self.is_zero() {
            return (0, IntPoly::zero());
        }
        (k, IntPoly { coeffs: self.coeffs[k..].to_vec() })
    }

    /// `t^d f(1/t)` for `d = deg f`.
    pub fn reverse(&self) -> Result<IntPoly> {
        match self.coeffs.first() {
            None => Err(Error::ZeroPolynomial),
            Some(c) if c.is_zero() => Err(Error::ZeroConstantTerm),
            Some(_) => Ok(IntPoly {
                coeffs: self.coeffs.iter().rev().cloned().collect(),
            }),
        }
    }

    /// Literal test of `f(t) = t^d f(1/t)`: palindromic with nonzero constant term.
    pub fn is_reciprocal(&self) -> bool {
        if self.is_zero() || self.coeffs[0].is_zero() {
            return false;
        }
        let n = self.coeffs.len();
        (0..n / 2).all(|k| self.coeffs[k] == self.coeffs[n - 1 - k])
    }

    /// Test of `f(t) = (-1)^d t^{2d} f(-1/t)` for `deg f = 2d`.
    ///
    /// Expanding the right side, the coefficient of `t^k` is
    /// `(-1)^d (-1)^(2d-k) c_{2d-k} = (-1)^(d+k) c_{2d-k}`, so the identity is
    /// `c_k = (-1)^(d+k) c_{2d-k}` for every `k`.
    pub fn is_skew_reciprocal(&self) -> Result<bool> {
        let deg = self.degree().ok_or(Error::ZeroPolynomial)?;
        if deg % 2 == 1 {
            return Err(Error::OddDegree(deg));
        }
        let d = deg / 2;
        Ok((0..=deg).all(|k| {
            let mirror = &self.coeffs[deg - k];
            if (d + k) % 2 == 0 {
                self.coeffs[k] == *mirror
            } else {
                self.coeffs[k] == -mirror
            }
        }))
    }

    /// `g(t) -> g(t^2)`.
    pub fn substitute_square(&self) -> IntPoly {
        let mut coeffs = vec![BigInt::zero(); (2 * self.coeffs.len()).saturating_sub(1)];
        for (k, c) in self.coeffs.iter().enumerate() {
            coeffs[2 * k] = c.clone();
        }
        IntPoly { coeffs }
    }

    /// Inverse of [`IntPoly::substitute_square`]; `None` when an odd-exponent
    /// coefficient is nonzero.
    pub fn extract_square_substitution(&self) -> Option<IntPoly> {
        if self.coeffs.iter().skip(1).step_by(2).any(|c| !c.is_zero()) {
            return None;
        }
        Some(IntPoly::new(self.coeffs.iter().step_by(2).cloned().collect()))
    }

    /// `f(t) -> f(-t)`.
    pub fn negate_variable(&self) -> IntPoly {
        IntPoly {
            coeffs: self
                .coeffs
                .iter()
                .enumerate()
                .map(|(k, c)| if k % 2 == 1 { -c } else { c.clone() })
                .collect(),
        }
    }

    /// Long division by a divisor whose leading coefficient is `±1`.
    pub fn divrem_exact(&self, divisor: &IntPoly) -> Result<(IntPoly, IntPoly)> {
        let lead = divisor.leading().ok_or(Error::DivisionByZero)?;
        if !lead.abs().is_one() {
            return Err(Error::NonUnitLeadingCoefficient(lead.to_string()));
        }
        Ok(self.long_division(divisor, |c, l| Some(c * l)))
    }

    /// Quotient `f / g` when `g` divides `f` in `Z[t]`, for any nonzero `g`.
    pub fn exact_quotient(&self, divisor: &IntPoly) -> Result<IntPoly> {
        if divisor.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let mut failed = false;
        let (q, r) = self.long_division(divisor, |c, l| {
            let (q, rem) = c.div_rem(l);
            if rem.is_zero() {
                Some(q)
            } else {
                failed = true;
                None
            }
        });
        if failed || !r.is_zero() {
            return Err(Error::NotDivisible);
        }
        Ok(q)
    }

    // `step(c, lead)` yields the next quotient coefficient; for unit leads
    // `c * lead` equals `c / lead`.
    fn long_division<F>(&self, divisor: &IntPoly, mut step: F) -> (IntPoly, IntPoly)
    where
        F: FnMut(&BigInt, &BigInt) -> Option<BigInt>,
    {
        let dd = divisor.coeffs.len() - 1;
        let lead = divisor.leading().unwrap();
        if self.coeffs.len() <= dd {
            return (IntPoly::zero(), self.clone());
        }
        let mut rem = self.coeffs.clone();
        let mut quot = vec![BigInt::zero(); rem.len() - dd];
        for k in (0..quot.len()).rev() {
            let c = &rem[k + dd];
            if c.is_zero() {
                continue;
            }
            let Some(q) = step(c, lead) else {
                return (IntPoly::zero(), self.clone());
            };
            for (j, dc) in divisor.coeffs.iter().enumerate() {
                rem[k + j] -= &q * dc;
            }
            quot[k] = q;
        }
        rem.truncate(dd);
        (IntPoly::new(quot), IntPoly::new(rem))
    }

    /// Pseudo-remainder: `lc(g)^(deg f - deg g + 1) f = q g + r`.
    pub fn pseudo_remainder(&self, divisor: &IntPoly) -> Result<IntPoly> {
        let dg = divisor.degree().ok_or(Error::DivisionByZero)?;
        let lead = divisor.leading().unwrap();
        let Some(df) = self.degree() else {
            return Ok(IntPoly::zero());
        };
        if df < dg {
            return Ok(self.clone());
        }
        let mut rem = self.coeffs.clone();
        let mut steps = df - dg + 1;
        while rem.len() > dg {
            let top = rem.len() - 1;
            let c = rem[top].clone();
            for x in rem.iter_mut() {
                *x *= lead;
            }
            for (j, dc) in divisor.coeffs.iter().enumerate() {
                rem[top - dg + j] -= &c * dc;
            }
            steps -= 1;
            while rem.last().is_some_and(Zero::is_zero) {
                rem.pop();
            }
        }
        let fixup = num_traits::pow(lead.clone(), steps);
        Ok(IntPoly::new(rem).scale(&fixup))
    }

    /// Primitive gcd with positive leading coefficient, from the
    /// subresultant remainder sequence.
    pub fn gcd_primitive(&self, other: &IntPoly) -> Result<IntPoly> {
        match (self.is_zero(), other.is_zero()) {
            (true, true) => return Err(Error::ZeroPolynomial),
            (true, false) => return Ok(other.primitive_part()),
            (false, true) => return Ok(self.primitive_part()),
            _ => {}
        }
        let (mut a, mut b) = if self.coeffs.len() >= other.coeffs.len() {
            (self.primitive_part(), other.primitive_part())
        } else {
            (other.primitive_part(), self.primitive_part())
        };
        let mut g = BigInt::one();
        let mut h = BigInt::one();
        loop {
            let delta = a.coeffs.len() - b.coeffs.len();
            let r = a.pseudo_remainder(&b)?;
            if r.is_zero() {
                return Ok(b.primitive_part());
            }
            if r.degree() == Some(0) {
                return Ok(IntPoly::one());
            }
            let divisor = &g * num_traits::pow(h.clone(), delta);
            a = b;
            b = IntPoly::new(r.coeffs.iter().map(|c| c / &divisor).collect());
            g = a.leading().unwrap().clone();
            if delta >= 1 {
                h = num_traits::pow(g.clone(), delta) / num_traits::pow(h.clone(), delta - 1);
            }
        }
    }

    /// `f * (t+1)^k` with `k = target - deg f`.
    pub fn pad_to_degree(&self, target: usize) -> Result<IntPoly> {
        let current = self.degree().ok_or(Error::ZeroPolynomial)?;
        if target < current {
            return Err(Error::TargetDegreeTooSmall { target, current });
        }
        Ok(self * &IntPoly::linear_root(-1).pow((target - current) as u32))
    }

    /// Dense list form, e.g. `[1, 3, 1]`.
    pub fn to_dense_string(&self) -> String {
        let parts: Vec<String> = self.coeffs.iter().map(ToString::to_string).collect();
        format!("[{}]", parts.join(", "))
    }

    /// Parses `[c0, c1, ...]` or a monomial expression in `t` (or `x`).
    pub fn parse(s: &str) -> Result<IntPoly> {
        let s = s.trim();
        if s.starts_with('[') {
            parse_dense(s)
        } else {
            parse_monomials(s)
        }
    }
}

fn parse_dense(s: &str) -> Result<IntPoly> {
    let inner = s
        .strip_prefix('[')
        .and_then(|r| r.strip_suffix(']'))
        .ok_or_else(|| Error::Parse(format!("unterminated list: {s}")))?;
    if inner.trim().is_empty() {
        return Ok(IntPoly::zero());
    }
    inner
        .split(',')
        .map(|tok| {
            let tok = tok.trim().trim_matches('"');
            tok.parse::<BigInt>()
                .map_err(|_| Error::Parse(format!("bad coefficient {tok:?}")))
        })
        .collect::<Result<Vec<_>>>()
        .map(IntPoly::new)
}

fn parse_monomials(s: &str) -> Result<IntPoly> {
    let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if compact.is_empty() {
        return Err(Error::Parse("empty polynomial".into()));
    }
    let mut terms = Vec::new();
    let mut start = 0;
    for (i, ch) in compact.char_indices() {
        if (ch == '+' || ch == '-') && i > 0 && !compact[..i].ends_with('^') {
            terms.push(&compact[start..i]);
            start = i;
        }
    }
    terms.push(&compact[start..]);

    let mut coeffs: Vec<BigInt> = Vec::new();
    for term in terms {
        let (negative, body) = match term.as_bytes().first() {
            Some(b'-') => (true, &term[1..]),
            Some(b'+') => (false, &term[1..]),
            _ => (false, term),
        };
        let bad = || Error::Parse(format!("bad term {term:?}"));
        let var = body.find(['t', 'x']);
        let (coef, exp) = match var {
            None => (body.parse::<BigInt>().map_err(|_| bad())?, 0usize),
            Some(pos) => {
                let head = body[..pos].trim_end_matches('*');
                let coef = if head.is_empty() {
                    BigInt::one()
                } else {
                    head.parse::<BigInt>().map_err(|_| bad())?
                };
                let tail = &body[pos + 1..];
                let exp = if tail.is_empty() {
                    1
                } else {
                    tail.strip_prefix('^')
                        .and_then(|e| e.parse::<usize>().ok())
                        .ok_or_else(bad)?
                };
                (coef, exp)
            }
        };
        if coeffs.len() <= exp {
            coeffs.resize(exp + 1, BigInt::zero());
        }
        if negative {
            coeffs[exp] -= coef;
        } else {
            coeffs[exp] += coef;
        }
    }
    Ok(IntPoly::new(coeffs))
}

impl FromStr for IntPoly {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        IntPoly::parse(s)
    }
}

impl fmt::Display for IntPoly {
    /// Monomial form, highest degree first: `t^2+3t+1`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let mag = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if neg { "-" } else { "+" })?;
            }
            first = false;
            if k == 0 || !mag.is_one() {
                write!(f, "{mag}")?;
            }
            match k {
                0 => {}
                1 => write!(f, "t")?,
                _ => write!(f, "t^{k}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IntPoly({self})")
    }
}

/// Serializes as a dense JSON list; coefficients outside `i64` become strings.
pub(crate) fn serialize_bigint<S: Serializer>(c: &BigInt, s: S) -> std::result::Result<S::Ok, S::Error> {
    match c.to_i64() {
        Some(v) => s.serialize_i64(v),
        None => s.serialize_str(&c.to_string()),
    }
}

pub(crate) struct BigIntRepr(pub BigInt);

impl Serialize for BigIntRepr {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        serialize_bigint(&self.0, s)
    }
}

impl<'de> Deserialize<'de> for BigIntRepr {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        struct V;
        impl Visitor<'_> for V {
            type Value = BigIntRepr;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                write!(f, "an integer or decimal string")
            }
            fn visit_i64<E: de::Error>(self, v: i64) -> std::result::Result<BigIntRepr, E> {
                Ok(BigIntRepr(v.into()))
            }
            fn visit_u64<E: de::Error>(self, v: u64) -> std::result::Result<BigIntRepr, E> {
                Ok(BigIntRepr(v.into()))
            }
            fn visit_str<E: de::Error>(self, v: &str) -> std::result::Result<BigIntRepr, E> {
                v.parse().map(BigIntRepr).map_err(E::custom)
            }
        }
        d.deserialize_any(V)
    }
}

impl Serialize for IntPoly {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeSeq;
        let mut seq = s.serialize_seq(Some(self.coeffs.len()))?;
        for c in &self.coeffs {
            seq.serialize_element(&BigIntRepr(c.clone()))?;
        }
        seq.end()
    }
}

impl<'de> Deserialize<'de> for IntPoly {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        struct V;
        impl<'de> Visitor<'de> for V {
            type Value = IntPoly;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                write!(f, "a dense coefficient list")
            }
            fn visit_seq<A: SeqAccess<'de>>(self, mut seq: A) -> std::result::Result<IntPoly, A::Error> {
                let mut coeffs = Vec::new();
                while let Some(BigIntRepr(c)) = seq.next_element()? {
                    coeffs.push(c);
                }
                Ok(IntPoly::new(coeffs))
            }
        }
        d.deserialize_seq(V)
    }
}

impl Add for &IntPoly {
    type Output = IntPoly;

    fn add(self, rhs: &IntPoly) -> IntPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        IntPoly::new((0..n).map(|k| self.coeff(k) + rhs.coeff(k)).collect())
    }
}

impl Sub for &IntPoly {
    type Output = IntPoly;

    fn sub(self, rhs: &IntPoly) -> IntPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        IntPoly::new((0..n).map(|k| self.coeff(k) - rhs.coeff(k)).collect())
    }
}

impl Mul for &IntPoly {
    type Output = IntPoly;

    fn mul(self, rhs: &IntPoly) -> IntPoly {
        if self.is_zero() || rhs.is_zero() {
            return IntPoly::zero();
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        IntPoly::new(out)
    }
}

impl Neg for &IntPoly {
    type Output = IntPoly;

    fn neg(self) -> IntPoly {
        IntPoly { coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for IntPoly {
            type Output = IntPoly;
            fn $m(self, rhs: IntPoly) -> IntPoly {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

/// Breusch's lower bound 1179/1000 for the Mahler measure of a nonreciprocal
/// irreducible integer polynomial other than `t` and `t - 1`.
pub const BREUSCH_BOUND: (u32, u32) = (1179, 1000);

pub fn breusch_bound() -> f64 {
    BREUSCH_BOUND.0 as f64 / BREUSCH_BOUND.1 as f64
}

/// `M(L)` to five decimal places.
pub const LEHMER_NUMBER_REFERENCE: f64 = 1.17628;
pub const LEHMER_NUMBER_DECIMALS: u32 = 5;

/// `L(t) = t^10+t^9-t^7-t^6-t^5-t^4-t^3+t+1`.
pub fn lehmer_polynomial() -> IntPoly {
    IntPoly::from_i64s(&[1, 1, 0, -1, -1, -1, -1, -1, 0, 1, 1])
}
