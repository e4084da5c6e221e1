//! Certified Mahler measure and house.
//!
//! The Kronecker part of the input is decided exactly and removed, the rest
//! is split into squarefree factors, and each factor's roots are enclosed by
//! exact inclusion disks at an escalating working precision. Roots on the
//! unit circle are never decided numerically: the exact number of them is
//! computed first, and a disk cluster straddling the circle is accepted as
//! "on the circle" only once the straddling clusters hold exactly that many
//! roots.

mod kronecker;
mod roots;
mod unit_circle;

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::poly::IntPoly;

pub use kronecker::{
    cyclotomic, cyclotomic_indices_up_to_degree, euler_phi, graeffe, is_kronecker,
    kronecker_split, mahler_graeffe_oracle,
};
pub use roots::{roots_certified, roots_certified_with, RootDisk};
pub use unit_circle::{palindromic_to_trace, sturm_count, unit_circle_root_count};

pub(crate) const INITIAL_BITS: u32 = 64;
pub const DEFAULT_MAX_BITS: u32 = 4096;
pub const MIN_TOLERANCE: f64 = 1e-14;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MeasureOptions {
    /// Hard cap on the fractional bits of the fixed-point root approximations.
    pub max_bits: u32,
}

impl Default for MeasureOptions {
    fn default() -> Self {
        MeasureOptions { max_bits: DEFAULT_MAX_BITS }
    }
}

pub(crate) fn check_tolerance(tol: f64) -> Result<()> {
    if tol.is_finite() && tol >= MIN_TOLERANCE {
        Ok(())
    } else {
        Err(Error::InvalidTolerance(tol))
    }
}

/// A closed real interval `[lo, hi]` known to contain a value, with the
/// working precision that produced it.
///
/// Arithmetic rounds outward, so derived enclosures stay valid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Enclosure {
    pub lo: f64,
    pub hi: f64,
    pub bits: u32,
}

impl Enclosure {
    pub fn new(lo: f64, hi: f64, bits: u32) -> Self {
        assert!(lo <= hi && lo.is_finite() && hi.is_finite(), "bad enclosure [{lo}, {hi}]");
        Enclosure { lo, hi, bits }
    }

    pub fn point(x: f64) -> Self {
        Enclosure::new(x, x, 0)
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn mid(&self) -> f64 {
        self.lo + (self.hi - self.lo) / 2.0
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    pub fn intersects(&self, other: &Enclosure) -> bool {
        self.lo <= other.hi && other.lo <= self.hi
    }

    /// `true` unless the enclosed value is certainly above `other`'s.
    pub fn not_above(&self, other: &Enclosure) -> bool {
        self.lo <= other.hi
    }

    pub fn is_exactly(&self, x: f64) -> bool {
        self.lo == x && self.hi == x
    }

    fn from_products(candidates: [f64; 4], bits: u32) -> Enclosure {
        let lo = candidates.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = candidates.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        Enclosure::new(lo.next_down(), hi.next_up(), bits)
    }

    pub fn mul(&self, o: &Enclosure) -> Enclosure {
        let (a, b) = (self, o);
        Enclosure::from_products(
            [a.lo * b.lo, a.lo * b.hi, a.hi * b.lo, a.hi * b.hi],
            a.bits.max(b.bits),
        )
    }

    /// Division by an enclosure that excludes zero.
    pub fn div(&self, o: &Enclosure) -> Enclosure {
        assert!(o.lo > 0.0 || o.hi < 0.0, "divisor enclosure contains zero");
        let (a, b) = (self, o);
        Enclosure::from_products(
            [a.lo / b.lo, a.lo / b.hi, a.hi / b.lo, a.hi / b.hi],
            a.bits.max(b.bits),
        )
    }

    /// Natural log of a positive enclosure; two ulps of slack cover the
    /// error of the platform `ln`.
    pub fn ln(&self) -> Enclosure {
        assert!(self.lo > 0.0, "log of nonpositive enclosure");
        let lo = self.lo.ln().next_down().next_down();
        let hi = self.hi.ln().next_up().next_up();
        Enclosure::new(lo, hi, self.bits)
    }

    /// Multiplication by `2^k`, exact in binary floating point.
    pub fn scale_pow2(&self, k: i32) -> Enclosure {
        let s = 2f64.powi(k);
        Enclosure::new(self.lo * s, self.hi * s, self.bits)
    }

    /// Smallest enclosure of `min(x, y)` for `x` in `self`, `y` in `o`.
    pub fn min_with(&self, o: &Enclosure) -> Enclosure {
        Enclosure::new(self.lo.min(o.lo), self.hi.min(o.hi), self.bits.max(o.bits))
    }

    pub fn from_rationals(lo: &BigRational, hi: &BigRational, bits: u32) -> Enclosure {
        Enclosure::new(round_down(lo), round_up(hi), bits)
    }
}

impl fmt::Display for Enclosure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo, self.hi)
    }
}

impl Serialize for Enclosure {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("Enclosure", 3)?;
        st.serialize_field("lo", &self.lo.to_string())?;
        st.serialize_field("hi", &self.hi.to_string())?;
        st.serialize_field("bits", &self.bits)?;
        st.end()
    }
}

/// Largest `f64` not above `x`.
pub(crate) fn round_down(x: &BigRational) -> f64 {
    let mut v = x.to_f64().expect("finite rational");
    while BigRational::from_float(v).is_none_or(|r| &r > x) {
        v = v.next_down();
    }
    v
}

/// Smallest `f64` not below `x`.
pub(crate) fn round_up(x: &BigRational) -> f64 {
    let mut v = x.to_f64().expect("finite rational");
    while BigRational::from_float(v).is_none_or(|r| &r < x) {
        v = v.next_up();
    }
    v
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MeasureResult {
    pub mahler: Enclosure,
    pub house: Enclosure,
    pub is_kronecker: bool,
    pub root_count_outside_unit_circle: usize,
}

/// Squarefree factorization `f = c * prod u_k^k` (Yun), with primitive
/// factors of positive degree and positive leading coefficient.
pub fn squarefree_decomposition(f: &IntPoly) -> Vec<(IntPoly, u32)> {
    let mut out = Vec::new();
    if f.degree().unwrap_or(0) == 0 {
        return out;
    }
    let f = f.primitive_part();
    let df = f.derivative();
    let a0 = f.gcd_primitive(&df).expect("nonzero");
    let mut b = f.exact_quotient(&a0).expect("gcd divides f");
    let c = df.exact_quotient(&a0).expect("gcd divides f'");
    let mut d = &c - &b.derivative();
    let mut k = 1;
    while b.degree().unwrap_or(0) > 0 {
        let a = b.gcd_primitive(&d).expect("b nonzero");
        if a.degree().unwrap_or(0) > 0 {
            out.push((a.clone(), k));
        }
        b = b.exact_quotient(&a).expect("gcd divides b");
        let c = d.exact_quotient(&a).expect("gcd divides d");
        d = &c - &b.derivative();
        k += 1;
    }
    out
}

#[derive(Clone, Copy)]
struct Targets {
    mahler: bool,
    house: bool,
}

fn analyze(f: &IntPoly, tol: f64, opts: &MeasureOptions, targets: Targets) -> Result<MeasureResult> {
    check_tolerance(tol)?;
    let deg = f.degree().ok_or(Error::ZeroPolynomial)?;
    let one = Enclosure::point(1.0);
    let zero = Enclosure::point(0.0);
    let monic = f.is_monic();
    let (_, g) = f.strip_t_power();
    if deg == 0 || g.degree() == Some(0) {
        return Ok(MeasureResult {
            mahler: one,
            house: zero,
            is_kronecker: monic,
            root_count_outside_unit_circle: 0,
        });
    }
    if monic && is_kronecker(&g) {
        return Ok(MeasureResult {
            mahler: one,
            house: one,
            is_kronecker: true,
            root_count_outside_unit_circle: 0,
        });
    }

    let (kron, rest) = kronecker_split(&g);
    let factors = squarefree_decomposition(&rest);
    let circle: Vec<usize> = factors.iter().map(|(u, _)| unit_circle_root_count(u)).collect();
    let mut approx: Vec<Option<(Vec<roots::Fx>, u32)>> = vec![None; factors.len()];
    let house_floor = if kron.degree().unwrap_or(0) > 0 { BigRational::one() } else { BigRational::zero() };

    let mut bits = INITIAL_BITS;
    while bits <= opts.max_bits {
        let mut certified = true;
        let mut m_lo = BigRational::one();
        let mut m_hi = BigRational::one();
        let mut h_lo = house_floor.clone();
        let mut h_hi = house_floor.clone();
        let mut outside = 0usize;
        for (idx, (u, mult)) in factors.iter().enumerate() {
            let prev = approx[idx].as_ref().map(|(z, b)| (z.as_slice(), *b));
            let z = roots::approximate(u, prev, bits);
            let cert = roots::certify(u, &z, bits);
            approx[idx] = Some((z, bits));
            let Some(cert) = cert else {
                certified = false;
                continue;
            };
            let unit = roots::scale_one(cert.scale);
            let straddling: usize = cert
                .clusters
                .iter()
                .filter(|c| c.lo <= unit && unit <= c.hi)
                .map(|c| c.members.len())
                .sum();
            if straddling != circle[idx] {
                certified = false;
                continue;
            }
            for c in &cert.clusters {
                let (lo, hi) = if c.lo > unit || c.hi < unit {
                    (roots::at_scale(&c.lo, cert.scale), roots::at_scale(&c.hi, cert.scale))
                } else {
                    (BigRational::one(), BigRational::one())
                };
                if c.lo > unit {
                    let e = (c.members.len() as u32 * mult) as i32;
                    m_lo *= num_traits::pow(lo.clone(), e as usize);
                    m_hi *= num_traits::pow(hi.clone(), e as usize);
                    outside += e as usize;
                }
                if lo > h_lo {
                    h_lo = lo;
                }
                if hi > h_hi {
                    h_hi = hi;
                }
            }
        }
        if certified {
            let mahler = Enclosure::from_rationals(&m_lo, &m_hi, bits);
            let house = Enclosure::from_rationals(&h_lo, &h_hi, bits);
            let fits = |e: &Enclosure| e.width() <= tol;
            let done = (!targets.mahler || fits(&mahler)) && (!targets.house || fits(&house));
            if done {
                return Ok(MeasureResult {
                    mahler,
                    house,
                    is_kronecker: false,
                    root_count_outside_unit_circle: outside,
                });
            }
            // tolerance below what f64 endpoints can express
            let limit = BigRational::new(BigInt::one(), BigInt::from(1u64 << 60));
            let tight = |lo: &BigRational, hi: &BigRational| (hi - lo) < limit;
            if (!targets.mahler || tight(&m_lo, &m_hi)) && (!targets.house || tight(&h_lo, &h_hi)) {
                return Err(Error::PrecisionExhausted { bits });
            }
        }
        bits *= 2;
    }
    Err(Error::PrecisionExhausted { bits: opts.max_bits })
}

/// Enclosure of `M(f) = prod max(1, |a|)` over the roots of monic `f`.
pub fn mahler(f: &IntPoly, tol: f64) -> Result<Enclosure> {
    mahler_with(f, tol, &MeasureOptions::default())
}

pub fn mahler_with(f: &IntPoly, tol: f64, opts: &MeasureOptions) -> Result<Enclosure> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if !f.is_monic() {
        return Err(Error::NotMonic);
    }
    analyze(f, tol, opts, Targets { mahler: true, house: false }).map(|r| r.mahler)
}

/// Enclosure of the largest root modulus of `f`.
pub fn house(f: &IntPoly, tol: f64) -> Result<Enclosure> {
    house_with(f, tol, &MeasureOptions::default())
}

pub fn house_with(f: &IntPoly, tol: f64, opts: &MeasureOptions) -> Result<Enclosure> {
    match f.degree() {
        None => Err(Error::ZeroPolynomial),
        Some(0) => Err(Error::ConstantPolynomial),
        Some(_) => analyze(f, tol, opts, Targets { mahler: false, house: true }).map(|r| r.house),
    }
}

/// Both enclosures plus the exact Kronecker flag and the count of roots
/// outside the unit circle, for monic `f`.
pub fn measure(f: &IntPoly, tol: f64) -> Result<MeasureResult> {
    measure_with(f, tol, &MeasureOptions::default())
}

pub fn measure_with(f: &IntPoly, tol: f64, opts: &MeasureOptions) -> Result<MeasureResult> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if !f.is_monic() {
        return Err(Error::NotMonic);
    }
    analyze(f, tol, opts, Targets { mahler: true, house: true })
}
