//! Decomposition of monic skew-reciprocal polynomials of degree `2^(i+1)`.
//!
//! Such a polynomial is either `g(t^2)` for a reciprocal `g`, or it has a
//! nonreciprocal irreducible factor other than `t - 1`. The second case is
//! certified without factoring: after removing `(t - 1)^v`, the cofactor `u`
//! is nonreciprocal, so one of its irreducible factors is, and `u(1) != 0`.

use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::measure::is_kronecker;
use crate::poly::IntPoly;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RekursDecomposition {
    /// `f(t) = g(t^2)` with `g` reciprocal.
    SquareSubstitution { g: IntPoly },
    /// `f = (t - 1)^v u` with `u(1) != 0` and `u` nonreciprocal.
    NonreciprocalWitness { v: usize, u: IntPoly },
}

impl Serialize for RekursDecomposition {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            RekursDecomposition::SquareSubstitution { g } => {
                let mut s = serializer.serialize_struct("RekursDecomposition", 2)?;
                s.serialize_field("case", "square")?;
                s.serialize_field("g", g)?;
                s.end()
            }
            RekursDecomposition::NonreciprocalWitness { v, u } => {
                let mut s = serializer.serialize_struct("RekursDecomposition", 3)?;
                s.serialize_field("case", "witness")?;
                s.serialize_field("v", v)?;
                s.serialize_field("u", u)?;
                s.end()
            }
        }
    }
}

impl RekursDecomposition {
    pub fn is_square(&self) -> bool {
        matches!(self, RekursDecomposition::SquareSubstitution { .. })
    }

    /// Rebuilds the decomposed polynomial.
    pub fn reconstruct(&self) -> IntPoly {
        match self {
            RekursDecomposition::SquareSubstitution { g } => g.substitute_square(),
            RekursDecomposition::NonreciprocalWitness { v, u } => {
                &IntPoly::linear_root(1).pow(*v as u32) * u
            }
        }
    }
}

/// `f = (t - 1)^v u` with `u(1) != 0`.
pub fn strip_linear_root_one(f: &IntPoly) -> (usize, IntPoly) {
    let lin = IntPoly::linear_root(1);
    let mut u = f.clone();
    let mut v = 0;
    if u.is_zero() {
        return (0, u);
    }
    loop {
        let (q, r) = u.divrem_exact(&lin).expect("t - 1 is monic");
        if !r.is_zero() {
            return (v, u);
        }
        u = q;
        v += 1;
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct DecomposeOptions {
    /// Admit every degree divisible by 4, not only powers of two.
    pub allow_multiple_of_four: bool,
}

pub fn rekurs_decompose(f: &IntPoly) -> Result<RekursDecomposition> {
    rekurs_decompose_with(f, &DecomposeOptions::default())
}

pub fn rekurs_decompose_with(f: &IntPoly, opts: &DecomposeOptions) -> Result<RekursDecomposition> {
    let d = f.degree().ok_or(Error::ZeroPolynomial)?;
    if !f.is_monic() {
        return Err(Error::NotMonic);
    }
    let degree_ok = if opts.allow_multiple_of_four {
        d >= 4 && d % 4 == 0
    } else {
        d >= 4 && d.is_power_of_two()
    };
    if !degree_ok {
        return Err(Error::InvalidDegree(d));
    }
    if !f.is_skew_reciprocal()? {
        return Err(Error::NotSkewReciprocal);
    }
    if is_kronecker(f) {
        return Err(Error::KroneckerInput);
    }
    if f.is_reciprocal() {
        // c_k = c_{2d-k} and c_k = (-1)^{d+k} c_{2d-k} with d even kill odd k
        let g = f
            .extract_square_substitution()
            .expect("reciprocal skew-reciprocal polynomials of degree 4k are even");
        debug_assert!(g.is_reciprocal());
        return Ok(RekursDecomposition::SquareSubstitution { g });
    }
    let (v, u) = strip_linear_root_one(f);
    if u.is_reciprocal() {
        return Err(Error::LemmaFalsified(f.clone()));
    }
    Ok(RekursDecomposition::NonreciprocalWitness { v, u })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::lehmer_polynomial;

    fn p(s: &str) -> IntPoly {
        s.parse().unwrap()
    }

    #[test]
    fn strip_examples() {
        assert_eq!(strip_linear_root_one(&(p("t-1").pow(2) * p("t+2"))), (2, p("t+2")));
        assert_eq!(strip_linear_root_one(&lehmer_polynomial()), (0, lehmer_polynomial()));
        assert_eq!(strip_linear_root_one(&p("t^2-2t+1")), (2, IntPoly::one()));
    }

    #[test]
    fn square_case() {
        let f = p("t^4-3t^2+1");
        let d = rekurs_decompose(&f).unwrap();
        assert_eq!(d, RekursDecomposition::SquareSubstitution { g: p("t^2-3t+1") });
        assert_eq!(d.reconstruct(), f);
        assert_eq!(f, p("t^2+t-1") * p("t^2-t-1"));
        assert_eq!(
            serde_json::to_string(&d).unwrap(),
            r#"{"case":"square","g":[1,-3,1]}"#
        );
    }

    #[test]
    fn witness_case() {
        // skew, degree 4: c3 = 1, c2 = 0, c1 = -1
        let f = p("t^4+t^3-t+1");
        assert!(f.is_skew_reciprocal().unwrap());
        let d = rekurs_decompose(&f).unwrap();
        let RekursDecomposition::NonreciprocalWitness { v, ref u } = d else {
            panic!("expected witness, got {d:?}");
        };
        assert_eq!(v, 0);
        assert!(!u.is_reciprocal());
        assert_eq!(d.reconstruct(), f);
        assert_eq!(
            serde_json::to_string(&d).unwrap(),
            r#"{"case":"witness","v":0,"u":[1,-1,0,1,1]}"#
        );
    }

    #[test]
    fn preconditions() {
        assert_eq!(rekurs_decompose(&p("t^2+t-1")), Err(Error::InvalidDegree(2)));
        assert_eq!(rekurs_decompose(&p("t^4+1")), Err(Error::KroneckerInput));
        assert_eq!(rekurs_decompose(&p("t^4+t^3+t+1")), Err(Error::NotSkewReciprocal));
        assert_eq!(rekurs_decompose(&p("2t^4+1")), Err(Error::NotMonic));
        let deg12 = p("t^6-3t^3+1").substitute_square();
        assert_eq!(rekurs_decompose(&deg12), Err(Error::InvalidDegree(12)));
        let opts = DecomposeOptions { allow_multiple_of_four: true };
        assert!(rekurs_decompose_with(&deg12, &opts).unwrap().is_square());
    }
}
