//! Graeffe root squaring, the exact Kronecker test and cyclotomic factors.

use std::collections::HashSet;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::binomial;
use num_traits::{One, ToPrimitive, Zero};

use crate::poly::IntPoly;

/// Root-squaring transform: the result has roots `a^2` for every root `a`.
///
/// With `f(t) = e(t^2) + t o(t^2)` this is `(-1)^d (e(x)^2 - x o(x)^2)`,
/// which keeps monic input monic.
pub fn graeffe(f: &IntPoly) -> IntPoly {
    let Some(d) = f.degree() else {
        return IntPoly::zero();
    };
    let even = IntPoly::new(f.coeffs().iter().step_by(2).cloned().collect());
    let odd = IntPoly::new(f.coeffs().iter().skip(1).step_by(2).cloned().collect());
    let x = IntPoly::monomial(BigInt::one(), 1);
    let g = &(&even * &even) - &(&x * &(&odd * &odd));
    if d % 2 == 1 {
        -&g
    } else {
        g
    }
}

/// Exact decision whether every root of monic `f` is zero or on the unit
/// circle. Non-monic input is never Kronecker.
///
/// Iterates [`graeffe`] on the `t`-free part: a coefficient above
/// `C(d, d/2)` proves a root off the circle, and a repeated iterate proves
/// all roots lie on it. The iterates of a Kronecker polynomial stay in a
/// finite set, so one of the two always happens.
pub fn is_kronecker(f: &IntPoly) -> bool {
    if !f.is_monic() {
        return false;
    }
    let (_, mut g) = f.strip_t_power();
    let d = g.degree().unwrap_or(0);
    if d == 0 {
        return true;
    }
    let bound = binomial(BigInt::from(d), BigInt::from(d / 2));
    let mut seen = HashSet::new();
    loop {
        if g.height() > bound {
            return false;
        }
        if !seen.insert(g.clone()) {
            return true;
        }
        g = graeffe(&g);
    }
}

pub fn euler_phi(mut n: u64) -> u64 {
    let mut result = n;
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            while n.is_multiple_of(p) {
                n /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if n > 1 {
        result -= result / n;
    }
    result
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            out.push(p);
            while n.is_multiple_of(p) {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

fn substitute_power(f: &IntPoly, k: usize) -> IntPoly {
    let mut coeffs = vec![BigInt::zero(); (f.coeffs().len().max(1) - 1) * k + 1];
    for (i, c) in f.coeffs().iter().enumerate() {
        coeffs[i * k] = c.clone();
    }
    IntPoly::new(coeffs)
}

/// The `n`-th cyclotomic polynomial, `n >= 1`.
///
/// Uses `Phi_{mp}(t) = Phi_m(t^p) / Phi_m(t)` for primes `p` not dividing
/// `m`, then `Phi_n(t) = Phi_rad(n)(t^(n / rad n))`.
pub fn cyclotomic(n: u64) -> IntPoly {
    assert!(n >= 1, "cyclotomic index must be positive");
    let mut phi = IntPoly::linear_root(1);
    let mut rad = 1;
    for p in prime_factors(n) {
        phi = substitute_power(&phi, p as usize)
            .divrem_exact(&phi)
            .expect("cyclotomic polynomials are monic")
            .0;
        rad *= p;
    }
    substitute_power(&phi, (n / rad) as usize)
}

/// All `n` with `phi(n) <= d`, ascending. Since `phi(n) >= sqrt(n / 2)`,
/// every such `n` is at most `2 d^2`.
pub fn cyclotomic_indices_up_to_degree(d: usize) -> Vec<u64> {
    let limit = (2 * d * d).max(2) as u64;
    (1..=limit).filter(|&n| euler_phi(n) <= d as u64).collect()
}

/// Splits `f` (with `f(0) != 0`) as `kronecker * rest` where `kronecker` is
/// the full product of cyclotomic factors and `rest` has none.
pub fn kronecker_split(f: &IntPoly) -> (IntPoly, IntPoly) {
    let mut rest = f.clone();
    let mut kron = IntPoly::one();
    let Ok(rev) = f.reverse() else {
        return (kron, rest);
    };
    // every root of unity a has 1/a as a root too, so it divides gcd(f, rev f)
    let circle_part = f.gcd_primitive(&rev).unwrap_or_else(|_| IntPoly::one());
    let budget = circle_part.degree().unwrap_or(0);
    if budget == 0 {
        return (kron, rest);
    }
    for n in cyclotomic_indices_up_to_degree(budget) {
        let phi = cyclotomic(n);
        loop {
            let (q, r) = rest.divrem_exact(&phi).expect("cyclotomic polynomials are monic");
            if !r.is_zero() {
                break;
            }
            rest = q;
            kron = &kron * &phi;
        }
    }
    (kron, rest)
}

const ORACLE_SAMPLES: usize = 1024;

/// Uncertified Mahler measure estimate from `iterations` exact Graeffe steps.
///
/// After `k` steps the roots are `b = a^(2^k)`. The mean of `log |f_k|` over
/// the `N` roots of `z^N = -1` equals `(1/N) sum log |b^N + 1|`, which is
/// `log M(f_k)` up to terms bounded by `d log 2 / N`; dividing by `2^k`
/// gives `log M(f)`. An iterate that repeats means `M(f) = 1` exactly.
pub fn mahler_graeffe_oracle(f: &IntPoly, iterations: u32) -> f64 {
    let (_, mut g) = f.strip_t_power();
    if g.degree().unwrap_or(0) == 0 {
        return 1.0;
    }
    let mut seen = vec![g.clone()];
    for _ in 0..iterations {
        g = graeffe(&g);
        if seen.contains(&g) {
            return 1.0;
        }
        seen.push(g.clone());
    }
    let max_bits = g.coeffs().iter().map(|c| c.bits()).max().unwrap_or(0);
    let shift = max_bits.saturating_sub(960);
    let coeffs: Vec<f64> = g
        .coeffs()
        .iter()
        .map(|c| (c >> shift).to_f64().unwrap_or(0.0))
        .collect();
    let mut total = 0.0;
    for j in 0..ORACLE_SAMPLES {
        let theta = std::f64::consts::TAU * (j as f64 + 0.5) / ORACLE_SAMPLES as f64;
        let z = Complex64::from_polar(1.0, theta);
        let v = coeffs.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c);
        total += v.norm().ln();
    }
    let mean = total / ORACLE_SAMPLES as f64 + shift as f64 * std::f64::consts::LN_2;
    (mean / 2f64.powi(iterations as i32)).exp()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::lehmer_polynomial;

    fn p(s: &str) -> IntPoly {
        s.parse().unwrap()
    }

    #[test]
    fn graeffe_examples() {
        assert_eq!(graeffe(&p("t^2-3t+1")), p("t^2-7t+1"));
        assert_eq!(graeffe(&p("t^2+1")), p("t^2+2t+1"));
        assert_eq!(graeffe(&p("t-1")), p("t-1"));
        assert_eq!(graeffe(&p("t+2")), p("t-4"));
    }

    #[test]
    fn kronecker_examples() {
        assert!(is_kronecker(&p("t^2+t+1")));
        assert!(!is_kronecker(&p("t^2-3t+1")));
        assert!(!is_kronecker(&lehmer_polynomial()));
        assert!(!is_kronecker(&p("t^2+t-1")));
        assert!(is_kronecker(&p("t^3")));
        assert!(is_kronecker(&p("t^4+1")));
        assert!(is_kronecker(&(p("t^2") * p("t-1").pow(3) * p("t^2+1"))));
        assert!(!is_kronecker(&p("2t^2+1")));
    }

    #[test]
    fn cyclotomic_values() {
        assert_eq!(cyclotomic(1), p("t-1"));
        assert_eq!(cyclotomic(2), p("t+1"));
        assert_eq!(cyclotomic(8), p("t^4+1"));
        assert_eq!(cyclotomic(12), p("t^4-t^2+1"));
        assert_eq!(cyclotomic(30), p("t^8+t^7-t^5-t^4-t^3+t+1"));
        // Phi_105 is the first with a coefficient -2
        assert_eq!(cyclotomic(105).coeff(7), BigInt::from(-2));
        for n in 1..60u64 {
            assert_eq!(cyclotomic(n).degree(), Some(euler_phi(n) as usize));
        }
    }

    #[test]
    fn split_removes_cyclotomic_content() {
        let l = lehmer_polynomial();
        let f = &(&l * &p("t+1").pow(3)) * &cyclotomic(12);
        let (kron, rest) = kronecker_split(&f);
        assert_eq!(rest, l);
        assert_eq!(kron, &p("t+1").pow(3) * &cyclotomic(12));
        assert_eq!(kronecker_split(&l).1, l);
    }

    #[test]
    fn oracle_examples() {
        assert!((mahler_graeffe_oracle(&lehmer_polynomial(), 8) - 1.17628).abs() < 1e-4);
        let gold = (3.0 + 5f64.sqrt()) / 2.0;
        assert!((mahler_graeffe_oracle(&p("t^2-3t+1"), 10) - gold).abs() < 1e-6);
        assert_eq!(mahler_graeffe_oracle(&p("t^2+t+1"), 1), 1.0);
        assert_eq!(mahler_graeffe_oracle(&p("t^2+t+1"), 8), 1.0);
    }
}
