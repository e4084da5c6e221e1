//! Exact count of roots on the unit circle.
//!
//! A root `a` with `|a| = 1` has `1/a = conj(a)` as a root too, so it is a
//! root of `g = gcd(f, rev f)`. After removing `t - 1` and `t + 1`, `g` is
//! palindromic of even degree `2m` and `g(t) = t^m h(t + 1/t)`. Roots on the
//! circle correspond two-to-one to real roots of `h` in `(-2, 2)`, counted
//! with a Sturm sequence.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::poly::IntPoly;

/// Number of roots of squarefree `f` (with `f(0) != 0`) on the unit circle.
pub fn unit_circle_root_count(f: &IntPoly) -> usize {
    let Ok(rev) = f.reverse() else {
        return 0;
    };
    let mut g = f.gcd_primitive(&rev).expect("nonzero input");
    let mut count = 0;
    for r in [1i64, -1] {
        let lin = IntPoly::linear_root(r);
        let (q, rem) = g.divrem_exact(&lin).expect("monic divisor");
        if rem.is_zero() {
            g = q;
            count += 1;
        }
    }
    if g.degree().unwrap_or(0) == 0 {
        return count;
    }
    assert!(g.is_reciprocal(), "gcd(f, rev f) without t-1, t+1 must be palindromic: {g}");
    let h = palindromic_to_trace(&g);
    count + 2 * sturm_count(&h, -2, 2)
}

/// `h` with `g(t) = t^m h(t + 1/t)` for palindromic `g` of degree `2m`.
pub fn palindromic_to_trace(g: &IntPoly) -> IntPoly {
    let m = g.degree().unwrap_or(0) / 2;
    // p_k(x) = t^k + t^-k: p_0 = 2, p_1 = x, p_{k+1} = x p_k - p_{k-1}
    let x = IntPoly::from_i64s(&[0, 1]);
    let mut prev = IntPoly::from_i64s(&[2]);
    let mut cur = x.clone();
    let mut h = IntPoly::constant(g.coeff(m));
    for k in 1..=m {
        h = &h + &cur.scale(&g.coeff(m + k));
        let next = &(&x * &cur) - &prev;
        prev = std::mem::replace(&mut cur, next);
    }
    h
}

type RatPoly = Vec<BigRational>;

fn trim(p: &mut RatPoly) {
    while p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
}

fn rem(a: &RatPoly, b: &RatPoly) -> RatPoly {
    let mut r = a.clone();
    let db = b.len() - 1;
    let lead = b.last().unwrap();
    while r.len() > db {
        let top = r.len() - 1;
        let q = &r[top] / lead;
        for (j, c) in b.iter().enumerate() {
            r[top - db + j] -= &q * c;
        }
        r.pop();
        trim(&mut r);
    }
    r
}

fn sign_at(p: &RatPoly, x: &BigRational) -> i32 {
    let v = p.iter().rev().fold(BigRational::zero(), |acc, c| acc * x + c);
    if v.is_positive() {
        1
    } else if v.is_negative() {
        -1
    } else {
        0
    }
}

/// Distinct real roots of squarefree `h` in `(a, b]`.
pub fn sturm_count(h: &IntPoly, a: i64, b: i64) -> usize {
    if h.degree().unwrap_or(0) == 0 {
        return 0;
    }
    let to_rat = |p: &IntPoly| -> RatPoly {
        p.coeffs().iter().map(|c| BigRational::from_integer(c.clone())).collect()
    };
    let mut seq = vec![to_rat(h), to_rat(&h.derivative())];
    loop {
        let n = seq.len();
        let mut r = rem(&seq[n - 2], &seq[n - 1]);
        if r.is_empty() {
            break;
        }
        for c in r.iter_mut() {
            *c = -c.clone();
        }
        seq.push(r);
    }
    let variations = |x: i64| {
        let x = BigRational::from_integer(BigInt::from(x));
        let signs: Vec<i32> = seq.iter().map(|p| sign_at(p, &x)).filter(|&s| s != 0).collect();
        signs.windows(2).filter(|w| w[0] != w[1]).count()
    };
    variations(a) - variations(b)
}
