//! Simultaneous root approximation and exact inclusion disks.
//!
//! Approximations come from Aberth iteration, first in `f64` and then in
//! big-integer fixed point at the working precision. Inclusion is certified
//! exactly: for distinct centers `z_i` of a degree-`n` polynomial `p` with
//! Weierstrass corrections `w_i = p(z_i) / (lc * prod_{j != i} (z_i - z_j))`,
//! the disks `D(z_i, n |w_i|)` cover every root, and a connected component
//! made of `m` disks holds exactly `m` roots. Enlarging the radii preserves
//! both facts, so radii are rounded up freely.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::poly::IntPoly;

use super::{round_up, squarefree_decomposition, MeasureOptions, INITIAL_BITS};

/// A disk certified to contain a root.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct RootDisk {
    pub center: Complex64,
    pub radius: f64,
}

/// Complex fixed-point value `(re + i im) / 2^bits`.
#[derive(Debug, Clone, PartialEq)]
pub(crate) struct Fx {
    pub re: BigInt,
    pub im: BigInt,
}

impl Fx {
    fn zero() -> Self {
        Fx { re: BigInt::zero(), im: BigInt::zero() }
    }

    fn add(&self, o: &Fx) -> Fx {
        Fx { re: &self.re + &o.re, im: &self.im + &o.im }
    }

    fn sub(&self, o: &Fx) -> Fx {
        Fx { re: &self.re - &o.re, im: &self.im - &o.im }
    }

    fn mul(&self, o: &Fx, bits: u32) -> Fx {
        Fx {
            re: (&self.re * &o.re - &self.im * &o.im) >> bits,
            im: (&self.re * &o.im + &self.im * &o.re) >> bits,
        }
    }

    fn div(&self, o: &Fx, bits: u32) -> Option<Fx> {
        let den = &o.re * &o.re + &o.im * &o.im;
        if den.is_zero() {
            return None;
        }
        let re = (&self.re * &o.re + &self.im * &o.im) << bits;
        let im = (&self.im * &o.re - &self.re * &o.im) << bits;
        Some(Fx { re: re / &den, im: im / &den })
    }

    fn norm_sqr(&self) -> BigInt {
        &self.re * &self.re + &self.im * &self.im
    }

    fn max_abs(&self) -> BigInt {
        self.re.abs().max(self.im.abs())
    }

    fn from_c64(z: Complex64, bits: u32) -> Fx {
        let conv = |x: f64| -> BigInt {
            let head = bits.min(60);
            let v = BigInt::from((x * 2f64.powi(head as i32)).round() as i128);
            v << (bits - head)
        };
        Fx { re: conv(z.re), im: conv(z.im) }
    }

    fn to_c64(&self, bits: u32) -> Complex64 {
        let conv = |x: &BigInt| {
            BigRational::new(x.clone(), BigInt::one() << bits)
                .to_f64()
                .unwrap_or(f64::NAN)
        };
        Complex64::new(conv(&self.re), conv(&self.im))
    }

    fn rescale(&self, from: u32, to: u32) -> Fx {
        if to >= from {
            Fx { re: &self.re << (to - from), im: &self.im << (to - from) }
        } else {
            Fx { re: &self.re >> (from - to), im: &self.im >> (from - to) }
        }
    }
}

/// Aberth iteration in `f64`; seeds for the fixed-point stage.
pub(crate) fn aberth_f64(p: &IntPoly) -> Vec<Complex64> {
    let n = p.degree().unwrap_or(0);
    if n == 0 {
        return Vec::new();
    }
    let coeffs: Vec<f64> = p.coeffs().iter().map(|c| c.to_f64().unwrap_or(f64::NAN)).collect();
    let lead = coeffs[n].abs();
    let radius = if coeffs.iter().all(|c| c.is_finite()) && coeffs[0] != 0.0 {
        (coeffs[0].abs() / lead).powf(1.0 / n as f64)
    } else {
        1.0
    };
    let mut z: Vec<Complex64> = (0..n)
        .map(|k| Complex64::from_polar(radius, std::f64::consts::TAU * k as f64 / n as f64 + 0.7))
        .collect();
    if !coeffs.iter().all(|c| c.is_finite()) {
        return z;
    }
    let eval = |x: Complex64| -> (Complex64, Complex64) {
        let mut v = Complex64::new(0.0, 0.0);
        let mut d = Complex64::new(0.0, 0.0);
        for &c in coeffs.iter().rev() {
            d = d * x + v;
            v = v * x + c;
        }
        (v, d)
    };
    for _ in 0..500 {
        let mut done = true;
        for i in 0..n {
            let (v, d) = eval(z[i]);
            if v == Complex64::new(0.0, 0.0) {
                continue;
            }
            let ratio = v / d;
            let s: Complex64 = (0..n).filter(|&j| j != i).map(|j| 1.0 / (z[i] - z[j])).sum();
            let corr = ratio / (1.0 - ratio * s);
            if !corr.re.is_finite() || !corr.im.is_finite() {
                continue;
            }
            z[i] -= corr;
            if corr.norm() > 1e-15 * (1.0 + z[i].norm()) {
                done = false;
            }
        }
        if done {
            break;
        }
    }
    z
}

fn eval_fx(coeffs: &[BigInt], z: &Fx, bits: u32) -> (Fx, Fx) {
    let mut v = Fx::zero();
    let mut d = Fx::zero();
    for c in coeffs.iter().rev() {
        d = d.mul(z, bits).add(&v);
        v = v.mul(z, bits);
        v.re += c << bits;
    }
    (v, d)
}

/// Aberth refinement in fixed point until corrections fall below `2^(8 - bits)`.
pub(crate) fn aberth_fixed(p: &IntPoly, z: &mut [Fx], bits: u32) {
    let n = z.len();
    let coeffs = p.coeffs();
    let tiny = BigInt::from(256);
    let one = Fx { re: BigInt::one() << bits, im: BigInt::zero() };
    let max_iter = 12 + 2 * (32 - bits.leading_zeros());
    for _ in 0..max_iter {
        let mut worst = BigInt::zero();
        for i in 0..n {
            let (v, d) = eval_fx(coeffs, &z[i], bits);
            if v.re.is_zero() && v.im.is_zero() {
                continue;
            }
            let Some(ratio) = v.div(&d, bits) else { continue };
            let mut s = Fx::zero();
            let mut ok = true;
            for j in (0..n).filter(|&j| j != i) {
                match one.div(&z[i].sub(&z[j]), bits) {
                    Some(q) => s = s.add(&q),
                    None => ok = false,
                }
            }
            if !ok {
                continue;
            }
            let denom = one.sub(&ratio.mul(&s, bits));
            let Some(corr) = ratio.div(&denom, bits) else { continue };
            worst = worst.max(corr.max_abs());
            z[i] = z[i].sub(&corr);
        }
        if worst <= tiny {
            break;
        }
    }
}

/// An exact inclusion disk at scale `2^-scale`: center `c / 2^scale`,
/// radius `r / 2^scale`.
#[derive(Debug, Clone)]
pub(crate) struct ExactDisk {
    pub center: Fx,
    pub radius: BigInt,
}

/// A connected component of inclusion disks, holding exactly
/// `members.len()` roots whose moduli lie in `[lo, hi] / 2^scale`.
#[derive(Debug, Clone)]
pub(crate) struct Cluster {
    pub members: Vec<usize>,
    pub lo: BigInt,
    pub hi: BigInt,
}

#[derive(Debug, Clone)]
pub(crate) struct Certificate {
    pub scale: u32,
    pub disks: Vec<ExactDisk>,
    pub clusters: Vec<Cluster>,
}

fn ceil_div(a: &BigInt, b: &BigInt) -> BigInt {
    let (q, r) = (a / b, a % b);
    if r.is_zero() { q } else { q + 1 }
}

fn ceil_sqrt(a: &BigInt) -> BigInt {
    let s = a.sqrt();
    if &s * &s == *a { s } else { s + 1 }
}

/// Exact inclusion disks for the approximations `z` (scale `2^-bits`) of the
/// roots of `p`. `None` when two centers coincide.
pub(crate) fn certify(p: &IntPoly, z: &[Fx], bits: u32) -> Option<Certificate> {
    let n = z.len();
    let lead = p.leading()?.clone();
    let scale = 2 * bits;
    let mut disks = Vec::with_capacity(n);
    for i in 0..n {
        // 2^(bits n) p(z_i) as a Gaussian integer
        let mut f = Fx::zero();
        for (k, c) in p.coeffs().iter().enumerate().rev() {
            f = Fx {
                re: &f.re * &z[i].re - &f.im * &z[i].im,
                im: &f.re * &z[i].im + &f.im * &z[i].re,
            };
            f.re += c << (bits as usize * (n - k));
        }
        // 2^(bits (n-1)) prod_{j != i} (z_i - z_j)
        let mut prod = Fx { re: BigInt::one(), im: BigInt::zero() };
        for j in (0..n).filter(|&j| j != i) {
            let diff = z[i].sub(&z[j]);
            prod = Fx {
                re: &prod.re * &diff.re - &prod.im * &diff.im,
                im: &prod.re * &diff.im + &prod.im * &diff.re,
            };
        }
        let den = prod.norm_sqr() * &lead * &lead;
        if den.is_zero() {
            return None;
        }
        // radius * 2^scale = n |f| 2^bits / (|lead| |prod|)
        let num = (f.norm_sqr() * BigInt::from(n * n)) << (2 * bits);
        let radius = ceil_sqrt(&ceil_div(&num, &den));
        disks.push(ExactDisk { center: z[i].rescale(bits, scale), radius });
    }

    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], i: usize) -> usize {
        let mut r = i;
        while parent[r] != r {
            r = parent[r];
        }
        parent[i] = r;
        r
    }
    for i in 0..n {
        for j in i + 1..n {
            let gap = disks[i].center.sub(&disks[j].center).norm_sqr();
            let reach = &disks[i].radius + &disks[j].radius;
            if gap <= &reach * &reach {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                parent[a.max(b)] = a.min(b);
            }
        }
    }
    let mut clusters: Vec<Cluster> = Vec::new();
    let mut slot = vec![usize::MAX; n];
    for i in 0..n {
        let root = find(&mut parent, i);
        let d = &disks[i];
        let norm = d.center.norm_sqr();
        let floor = norm.sqrt();
        let ceil = if &floor * &floor == norm { floor.clone() } else { &floor + 1 };
        let lo = (floor - &d.radius).max(BigInt::zero());
        let hi = ceil + &d.radius;
        if slot[root] == usize::MAX {
            slot[root] = clusters.len();
            clusters.push(Cluster { members: vec![i], lo, hi });
        } else {
            let c = &mut clusters[slot[root]];
            c.members.push(i);
            c.lo = c.lo.clone().min(lo);
            c.hi = c.hi.clone().max(hi);
        }
    }
    Some(Certificate { scale, disks, clusters })
}

/// Approximations of the roots of squarefree `p` at `bits`, reusing `prev`
/// from a lower precision when available.
pub(crate) fn approximate(p: &IntPoly, prev: Option<(&[Fx], u32)>, bits: u32) -> Vec<Fx> {
    let (mut z, jitter_exp): (Vec<Fx>, u32) = match prev {
        Some((z, from)) => (z.iter().map(|x| x.rescale(from, bits)).collect(), from - 16),
        None => (aberth_f64(p).into_iter().map(|c| Fx::from_c64(c, bits)).collect(), 40),
    };
    // Aberth keeps symmetric configurations symmetric (e.g. two seeds on the
    // perpendicular bisector of two close real roots); a small fixed nudge
    // in a different direction per seed breaks that.
    for (k, x) in z.iter_mut().enumerate() {
        let angle = 2.399_963_229_728_653 * (k + 1) as f64;
        let unit = BigInt::one() << (bits - jitter_exp.min(bits));
        let scale = |c: f64| BigInt::from((c * 1024.0).round() as i64) * &unit / 1024;
        x.re += scale(angle.cos());
        x.im += scale(angle.sin());
    }
    aberth_fixed(p, &mut z, bits);
    z
}

/// Disks certified to contain the roots of `f`, one per root counted with
/// multiplicity, each of radius at most `tol`.
pub fn roots_certified(f: &IntPoly, tol: f64) -> Result<Vec<RootDisk>> {
    roots_certified_with(f, tol, &MeasureOptions::default())
}

pub fn roots_certified_with(f: &IntPoly, tol: f64, opts: &MeasureOptions) -> Result<Vec<RootDisk>> {
    super::check_tolerance(tol)?;
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let (zeros, rest) = f.strip_t_power();
    let mut out = vec![RootDisk { center: Complex64::new(0.0, 0.0), radius: 0.0 }; zeros];
    if rest.degree() == Some(0) {
        return Ok(out);
    }
    for (factor, mult) in squarefree_decomposition(&rest.primitive_part()) {
        let disks = isolate_squarefree(&factor, tol, opts)?;
        for _ in 0..mult {
            out.extend_from_slice(&disks);
        }
    }
    Ok(out)
}

fn isolate_squarefree(p: &IntPoly, tol: f64, opts: &MeasureOptions) -> Result<Vec<RootDisk>> {
    let mut bits = INITIAL_BITS;
    let mut prev: Option<(Vec<Fx>, u32)> = None;
    while bits <= opts.max_bits {
        let z = approximate(p, prev.as_ref().map(|(z, b)| (z.as_slice(), *b)), bits);
        if let Some(cert) = certify(p, &z, bits) {
            if cert.clusters.iter().all(|c| c.members.len() == 1) {
                let disks: Vec<RootDisk> = cert.disks.iter().map(|d| to_root_disk(d, cert.scale)).collect();
                if disks.iter().all(|d| d.radius <= tol) {
                    return Ok(disks);
                }
            }
        }
        prev = Some((z, bits));
        bits *= 2;
    }
    Err(Error::PrecisionExhausted { bits: opts.max_bits })
}

fn to_root_disk(d: &ExactDisk, scale: u32) -> RootDisk {
    let denom = BigInt::one() << scale;
    let exact_re = BigRational::new(d.center.re.clone(), denom.clone());
    let exact_im = BigRational::new(d.center.im.clone(), denom.clone());
    let center = d.center.to_c64(scale);
    let err = |approx: f64, exact: &BigRational| -> BigRational {
        (BigRational::from_float(approx).unwrap_or_default() - exact).abs()
    };
    let slack = err(center.re, &exact_re) + err(center.im, &exact_im);
    let radius = round_up(&(BigRational::new(d.radius.clone(), denom) + slack));
    RootDisk { center, radius }
}

pub(crate) fn scale_one(scale: u32) -> BigInt {
    BigInt::one() << scale
}

/// Rational `x / 2^scale`.
pub(crate) fn at_scale(x: &BigInt, scale: u32) -> BigRational {
    BigRational::new(x.clone(), scale_one(scale))
}
