//! Exhaustive height-bounded minimization over monic reciprocal and
//! skew-reciprocal polynomials.
//!
//! A space of degree `2d` and height `H` has free coefficients
//! `c_d..c_{2d-1}` in `[-H, H]`; the rest follow from `c_{2d} = 1` and the
//! class identity. Members are indexed in lexicographic order of the free
//! vector (`c_d` most significant), and work is split on `c_d`.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::measure::{
    check_tolerance, house_with, is_kronecker, mahler_with, Enclosure, MeasureOptions,
};
use crate::poly::{breusch_bound, IntPoly};
use crate::structure::{rekurs_decompose, RekursDecomposition};

/// Refinement stops here when near-ties persist.
pub const REFINE_FLOOR: f64 = 1e-13;

/// Default cap on the number of members a sequence table may enumerate.
pub const DEFAULT_TABLE_BUDGET: u128 = 2_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Kind {
    Reciprocal,
    SkewReciprocal,
}

impl FromStr for Kind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Kind> {
        match s {
            "reciprocal" | "rec" => Ok(Kind::Reciprocal),
            "skew" | "skew_reciprocal" | "skew-reciprocal" => Ok(Kind::SkewReciprocal),
            _ => Err(Error::Parse(format!("unknown kind {s:?}"))),
        }
    }
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Kind::Reciprocal => "reciprocal",
            Kind::SkewReciprocal => "skew_reciprocal",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Objective {
    Mahler,
    House,
}

impl FromStr for Objective {
    type Err = Error;
    fn from_str(s: &str) -> Result<Objective> {
        match s {
            "mahler" | "measure" => Ok(Objective::Mahler),
            "house" => Ok(Objective::House),
            _ => Err(Error::Parse(format!("unknown objective {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct SearchSpace {
    pub kind: Kind,
    pub degree: usize,
    pub height: u32,
}

impl SearchSpace {
    pub fn new(kind: Kind, degree: usize, height: u32) -> Result<Self> {
        if degree == 0 || degree % 2 == 1 {
            return Err(Error::InvalidSpace(format!("degree must be positive and even, got {degree}")));
        }
        Ok(SearchSpace { kind, degree, height })
    }

    /// The space of degree `2^i`.
    pub fn preset(kind: Kind, i: u32, height: u32) -> Result<Self> {
        if i == 0 || i >= usize::BITS {
            return Err(Error::InvalidSpace(format!("index must be in 1..{}, got {i}", usize::BITS)));
        }
        Self::new(kind, 1 << i, height)
    }

    pub fn half_degree(&self) -> usize {
        self.degree / 2
    }

    fn base(&self) -> u128 {
        2 * self.height as u128 + 1
    }

    /// `(2H + 1)^d`, saturating.
    pub fn size(&self) -> u128 {
        let mut n: u128 = 1;
        for _ in 0..self.half_degree() {
            n = n.saturating_mul(self.base());
        }
        n
    }

    /// Member with free coefficients `c_d..c_{2d-1}`.
    pub fn from_free(&self, free: &[i64]) -> IntPoly {
        let d = self.half_degree();
        assert_eq!(free.len(), d, "wrong number of free coefficients");
        let mut c = vec![BigInt::from(0); 2 * d + 1];
        c[2 * d] = BigInt::from(1);
        for (k, &v) in free.iter().enumerate() {
            c[d + k] = BigInt::from(v);
        }
        for j in 0..d {
            let mirror = c[2 * d - j].clone();
            c[j] = match self.kind {
                Kind::Reciprocal => mirror,
                // c_j = (-1)^{d+j} c_{2d-j}
                Kind::SkewReciprocal if (d + j) % 2 == 1 => -mirror,
                Kind::SkewReciprocal => mirror,
            };
        }
        IntPoly::new(c)
    }

    /// Member at lexicographic position `index < size()`.
    pub fn at(&self, index: u128) -> IntPoly {
        let d = self.half_degree();
        let base = self.base();
        let mut free = vec![0i64; d];
        let mut rest = index;
        for k in (0..d).rev() {
            free[k] = (rest % base) as i64 - self.height as i64;
            rest /= base;
        }
        self.from_free(&free)
    }

    pub fn iter(&self) -> impl Iterator<Item = IntPoly> + '_ {
        (0..self.size()).map(move |i| self.at(i))
    }

    /// Membership predicate: monic of the right degree, in the class, with
    /// free coefficients bounded by the height.
    pub fn contains(&self, f: &IntPoly) -> bool {
        let d = self.half_degree();
        if f.degree() != Some(self.degree) || !f.is_monic() {
            return false;
        }
        let in_class = match self.kind {
            Kind::Reciprocal => f.is_reciprocal(),
            Kind::SkewReciprocal => f.is_skew_reciprocal().unwrap_or(false),
        };
        let h = BigInt::from(self.height);
        in_class && (d..2 * d).all(|k| f.coeff(k).magnitude() <= h.magnitude())
    }

    fn chunk_len(&self) -> u128 {
        self.size() / self.base()
    }
}

impl fmt::Display for SearchSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} degree {} height {}", self.kind, self.degree, self.height)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SearchOptions {
    pub tol: f64,
    /// Worker threads; 0 means available parallelism.
    pub jobs: usize,
    pub max_bits: u32,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions { tol: 1e-10, jobs: 0, max_bits: MeasureOptions::default().max_bits }
    }
}

impl SearchOptions {
    pub fn with_tol(tol: f64) -> Self {
        SearchOptions { tol, ..Default::default() }
    }

    fn measure_options(&self) -> MeasureOptions {
        MeasureOptions { max_bits: self.max_bits }
    }
}

/// Runs `work` once per value of the first free coefficient and returns the
/// results in that order, whatever the number of workers.
fn run_chunks<T, F>(space: &SearchSpace, jobs: usize, work: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(std::ops::Range<u128>) -> Result<T> + Sync + Send,
{
    let len = space.chunk_len();
    let ranges: Vec<_> = (0..space.base()).map(|k| k * len..(k + 1) * len).collect();
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        if jobs != 1 {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(jobs)
                .build()
                .expect("thread pool");
            return pool.install(|| ranges.into_par_iter().map(&work).collect());
        }
    }
    let _ = jobs;
    ranges.into_iter().map(work).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SearchReport {
    pub space: SearchSpace,
    pub objective: Objective,
    pub tol: f64,
    pub enumerated: u128,
    /// `None` when every member is Kronecker.
    pub minimum: Option<Enclosure>,
    pub witnesses: Vec<IntPoly>,
    pub excluded_kronecker: u128,
    pub precision_escalations: u64,
    /// Members whose enclosure could not reach the tolerance; they are left
    /// out of the minimum.
    pub precision_exhausted: Vec<IntPoly>,
}

struct Candidate {
    poly: IntPoly,
    value: Enclosure,
}

#[derive(Default)]
struct Partial {
    excluded: u128,
    candidates: Vec<Candidate>,
    exhausted: Vec<IntPoly>,
}

/// Keeps the candidates that may still be minimal.
fn prune(candidates: &mut Vec<Candidate>) {
    let best = candidates.iter().map(|c| c.value.hi).fold(f64::INFINITY, f64::min);
    candidates.retain(|c| c.value.lo <= best);
}

fn evaluate(f: &IntPoly, objective: Objective, tol: f64, opts: &MeasureOptions) -> Result<Enclosure> {
    match objective {
        Objective::Mahler => mahler_with(f, tol, opts),
        Objective::House => house_with(f, tol, opts),
    }
}

pub fn min_mahler(space: &SearchSpace, opts: &SearchOptions) -> Result<SearchReport> {
    minimize(space, Objective::Mahler, opts)
}

pub fn min_house(space: &SearchSpace, opts: &SearchOptions) -> Result<SearchReport> {
    minimize(space, Objective::House, opts)
}

/// Smallest measure or house over the non-Kronecker members.
///
/// Members whose enclosures overlap the best one are refined at shrinking
/// tolerances down to [`REFINE_FLOOR`]; those still overlapping are all
/// reported as witnesses.
pub fn minimize(space: &SearchSpace, objective: Objective, opts: &SearchOptions) -> Result<SearchReport> {
    check_tolerance(opts.tol)?;
    let mopts = opts.measure_options();
    let parts = run_chunks(space, opts.jobs, |range| {
        let mut part = Partial::default();
        for idx in range {
            let f = space.at(idx);
            if is_kronecker(&f) {
                part.excluded += 1;
                continue;
            }
            match evaluate(&f, objective, opts.tol, &mopts) {
                Ok(value) => part.candidates.push(Candidate { poly: f, value }),
                Err(Error::PrecisionExhausted { .. }) => part.exhausted.push(f),
                Err(e) => return Err(e),
            }
        }
        prune(&mut part.candidates);
        Ok(part)
    })?;

    let mut all = Partial::default();
    for p in parts {
        all.excluded += p.excluded;
        all.candidates.extend(p.candidates);
        all.exhausted.extend(p.exhausted);
    }
    prune(&mut all.candidates);

    let mut escalations = 0;
    let mut tol = opts.tol;
    while all.candidates.len() > 1 && tol > REFINE_FLOOR {
        tol = (tol / 1024.0).max(REFINE_FLOOR);
        for c in &mut all.candidates {
            escalations += 1;
            if let Ok(v) = evaluate(&c.poly, objective, tol, &mopts) {
                c.value = v;
            }
        }
        prune(&mut all.candidates);
    }

    let minimum = all.candidates.iter().map(|c| c.value).reduce(|a, b| a.min_with(&b));
    Ok(SearchReport {
        space: *space,
        objective,
        tol: opts.tol,
        enumerated: space.size(),
        minimum,
        witnesses: all.candidates.into_iter().map(|c| c.poly).collect(),
        excluded_kronecker: all.excluded,
        precision_escalations: escalations,
        precision_exhausted: all.exhausted,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RekursReport {
    pub space: SearchSpace,
    pub enumerated: u128,
    pub excluded_kronecker: u128,
    pub square_cases: u128,
    pub witness_cases: u128,
    /// Smallest Mahler measure over the witness cases.
    pub min_witness_mahler: Option<Enclosure>,
    /// Witness cases whose measure is not certified above the Breusch
    /// bound (minus `1e-9`).
    pub below_breusch: Vec<IntPoly>,
}

/// Decomposes every non-Kronecker member of a skew space of degree
/// `2^(i+1)`, `i >= 1`. A falsified decomposition aborts the run.
pub fn verify_rekurs_over_space(space: &SearchSpace, opts: &SearchOptions) -> Result<RekursReport> {
    if space.kind != Kind::SkewReciprocal || space.degree < 4 || !space.degree.is_power_of_two() {
        return Err(Error::InvalidSpace(format!(
            "needs a skew space of degree 2^(i+1) with i >= 1, got {space}"
        )));
    }
    check_tolerance(opts.tol)?;
    let mopts = opts.measure_options();
    let threshold = breusch_bound() - 1e-9;

    #[derive(Default)]
    struct Counts {
        excluded: u128,
        square: u128,
        witness: u128,
        min: Option<Enclosure>,
        below: Vec<IntPoly>,
    }

    let parts = run_chunks(space, opts.jobs, |range| {
        let mut c = Counts::default();
        for idx in range {
            let f = space.at(idx);
            if is_kronecker(&f) {
                c.excluded += 1;
                continue;
            }
            match rekurs_decompose(&f)? {
                RekursDecomposition::SquareSubstitution { .. } => c.square += 1,
                d @ RekursDecomposition::NonreciprocalWitness { .. } => {
                    debug_assert_eq!(d.reconstruct(), f);
                    c.witness += 1;
                    let m = mahler_with(&f, opts.tol, &mopts)?;
                    if m.lo <= threshold {
                        c.below.push(f);
                    }
                    c.min = Some(c.min.map_or(m, |x| x.min_with(&m)));
                }
            }
        }
        Ok(c)
    })?;

    let mut total = Counts::default();
    for p in parts {
        total.excluded += p.excluded;
        total.square += p.square;
        total.witness += p.witness;
        total.below.extend(p.below);
        total.min = match (total.min, p.min) {
            (Some(a), Some(b)) => Some(a.min_with(&b)),
            (a, b) => a.or(b),
        };
    }
    Ok(RekursReport {
        space: *space,
        enumerated: space.size(),
        excluded_kronecker: total.excluded,
        square_cases: total.square,
        witness_cases: total.witness,
        min_witness_mahler: total.min,
        below_breusch: total.below,
    })
}

/// One row of the height-restricted sequence estimates at degree `2^i`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SequenceRow {
    pub i: u32,
    pub height: u32,
    /// Smallest house over reciprocal members.
    pub lambda: Enclosure,
    /// Smallest house over skew-reciprocal members.
    pub lambda_skew: Enclosure,
    /// `2^i log lambda`.
    pub r: Enclosure,
    /// `2^i log lambda_skew`.
    pub s: Enclosure,
    /// `prod_{j <= i} r_j / s_j`.
    pub q: Enclosure,
    /// Smallest Mahler measure over reciprocal members.
    pub mahler: Enclosure,
    /// Smallest Mahler measure over skew-reciprocal members.
    pub mahler_skew: Enclosure,
    /// `prod_{j <= i} mahler_j / mahler_skew_j`.
    pub mahler_ratio_product: Enclosure,
    /// For `i >= 2`: whether `s_i >= min(r_{i-1}, log 1.179)` is consistent
    /// with the enclosures (not certified false).
    pub skew_lower_bound: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SequenceTable {
    pub tol: f64,
    pub rows: Vec<SequenceRow>,
}

/// Total members enumerated by [`sequence_table`] (each space is searched
/// once per objective).
pub fn table_cost(heights: &[u32]) -> u128 {
    heights
        .iter()
        .enumerate()
        .map(|(k, &h)| {
            let i = k as u32 + 1;
            let size = SearchSpace::preset(Kind::Reciprocal, i, h).map_or(u128::MAX, |s| s.size());
            size.saturating_mul(4)
        })
        .fold(0u128, u128::saturating_add)
}

/// Rows `i = 1..=heights.len()`, with height `heights[i - 1]` at degree `2^i`.
pub fn sequence_table(heights: &[u32], opts: &SearchOptions, budget: u128) -> Result<SequenceTable> {
    check_tolerance(opts.tol)?;
    let estimated = table_cost(heights);
    if estimated > budget {
        return Err(Error::BudgetExceeded { estimated, budget });
    }
    let log_breusch = Enclosure::new(breusch_bound().next_down(), breusch_bound().next_up(), 0).ln();
    let mut rows: Vec<SequenceRow> = Vec::new();
    for (k, &h) in heights.iter().enumerate() {
        let i = k as u32 + 1;
        let best = |kind, objective| -> Result<Enclosure> {
            let space = SearchSpace::preset(kind, i, h)?;
            minimize(&space, objective, opts)?.minimum.ok_or_else(|| {
                Error::InvalidSpace(format!("{space} has no non-Kronecker member"))
            })
        };
        let lambda = best(Kind::Reciprocal, Objective::House)?;
        let lambda_skew = best(Kind::SkewReciprocal, Objective::House)?;
        let mahler = best(Kind::Reciprocal, Objective::Mahler)?;
        let mahler_skew = best(Kind::SkewReciprocal, Objective::Mahler)?;
        let r = lambda.ln().scale_pow2(i as i32);
        let s = lambda_skew.ln().scale_pow2(i as i32);
        let ratio = r.div(&s);
        let mratio = mahler.div(&mahler_skew);
        let (q, mahler_ratio_product, skew_lower_bound) = match rows.last() {
            None => (ratio, mratio, None),
            Some(prev) => {
                let bound_lo = prev.r.lo.min(log_breusch.lo);
                (prev.q.mul(&ratio), prev.mahler_ratio_product.mul(&mratio), Some(s.hi >= bound_lo))
            }
        };
        rows.push(SequenceRow {
            i,
            height: h,
            lambda,
            lambda_skew,
            r,
            s,
            q,
            mahler,
            mahler_skew,
            mahler_ratio_product,
            skew_lower_bound,
        });
    }
    Ok(SequenceTable { tol: opts.tol, rows })
}

impl SequenceTable {
    pub const CSV_HEADER: &'static str = "i,height,r_lo,r_hi,s_lo,s_hi,q_lo,q_hi,\
lambda_lo,lambda_hi,lambda_skew_lo,lambda_skew_hi,R_lo,R_hi,S_lo,S_hi,\
R_over_S_product_lo,R_over_S_product_hi,skew_lower_bound";

    pub fn to_csv(&self) -> String {
        let mut out = String::from(Self::CSV_HEADER);
        out.push('\n');
        for row in &self.rows {
            let mut cells = vec![row.i.to_string(), row.height.to_string()];
            for e in [
                &row.r,
                &row.s,
                &row.q,
                &row.lambda,
                &row.lambda_skew,
                &row.mahler,
                &row.mahler_skew,
                &row.mahler_ratio_product,
            ] {
                cells.push(e.lo.to_string());
                cells.push(e.hi.to_string());
            }
            cells.push(row.skew_lower_bound.map_or(String::new(), |b| b.to_string()));
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }
}
