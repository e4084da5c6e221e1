//! Browser bindings for the demo page in `www/`.
//!
//! Every export takes plain strings and numbers and returns a JSON string,
//! either the result or `{"error": "..."}`.

use serde::Serialize;
use skewrec::measure::{measure, roots_certified};
use skewrec::search::{minimize, Kind, Objective, SearchOptions, SearchSpace};
use skewrec::symplectic::{charpoly, companion_anti_symplectic, companion_symplectic};
use skewrec::IntPoly;
use wasm_bindgen::prelude::*;

/// Largest search space the page will enumerate in one call.
pub const MAX_SEARCH_SIZE: u128 = 50_000;

#[derive(Serialize)]
struct Root {
    re: f64,
    im: f64,
    radius: f64,
}

#[derive(Serialize)]
struct MeasureView {
    poly: String,
    #[serde(flatten)]
    result: skewrec::MeasureResult,
    roots: Vec<Root>,
}

#[derive(Serialize)]
struct CompanionView {
    poly: String,
    matrix: Vec<Vec<String>>,
    charpoly: String,
    charpoly_matches: bool,
}

fn respond<T: Serialize>(r: skewrec::Result<T>) -> String {
    match r {
        Ok(v) => serde_json::to_string(&v).unwrap_or_else(|e| error_json(&e.to_string())),
        Err(e) => error_json(&e.to_string()),
    }
}

fn error_json(msg: &str) -> String {
    serde_json::json!({ "error": msg }).to_string()
}

fn parse(poly: &str) -> skewrec::Result<IntPoly> {
    poly.parse()
}

/// Mahler measure, house and root disks of `poly`, for plotting against
/// the unit circle.
#[wasm_bindgen]
pub fn measure_json(poly: &str, tol: f64) -> String {
    respond(parse(poly).and_then(|f| {
        let result = measure(&f, tol)?;
        let roots = roots_certified(&f, tol)?
            .into_iter()
            .map(|d| Root { re: d.center.re, im: d.center.im, radius: d.radius })
            .collect();
        Ok(MeasureView { poly: f.to_string(), result, roots })
    }))
}

/// Companion matrix of a reciprocal `poly`, or of a skew-reciprocal one
/// when `anti` is set.
#[wasm_bindgen]
pub fn companion_json(poly: &str, anti: bool) -> String {
    respond(parse(poly).and_then(|f| {
        let m = if anti { companion_anti_symplectic(&f)? } else { companion_symplectic(&f)? };
        let cp = charpoly(&m);
        Ok(CompanionView {
            poly: f.to_string(),
            matrix: m.rows().map(|r| r.iter().map(|x| x.to_string()).collect()).collect(),
            charpoly_matches: cp == f,
            charpoly: cp.to_string(),
        })
    }))
}

/// Exhaustive minimum of the Mahler measure (or house) over a small space.
#[wasm_bindgen]
pub fn search_json(kind: &str, degree: usize, height: u32, house: bool, tol: f64) -> String {
    let run = || -> skewrec::Result<_> {
        let kind: Kind = kind.parse()?;
        let space = SearchSpace::new(kind, degree, height)?;
        if space.size() > MAX_SEARCH_SIZE {
            return Err(skewrec::Error::BudgetExceeded { estimated: space.size(), budget: MAX_SEARCH_SIZE });
        }
        let objective = if house { Objective::House } else { Objective::Mahler };
        let opts = SearchOptions { jobs: 1, ..SearchOptions::with_tol(tol) };
        minimize(&space, objective, &opts)
    };
    respond(run())
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::Value;

    fn json(s: String) -> Value {
        serde_json::from_str(&s).unwrap()
    }

    #[test]
    fn measure_reports_roots() {
        let v = json(measure_json("t^2-3t+1", 1e-10));
        assert_eq!(v["roots"].as_array().unwrap().len(), 2);
        assert_eq!(v["root_count_outside_unit_circle"], 1);
        assert!(json(measure_json("t^2+", 1e-10))["error"].is_string());
    }

    #[test]
    fn companion_and_search() {
        let v = json(companion_json("t^2+3t+1", false));
        assert_eq!(v["matrix"].to_string(), r#"[["0","-1"],["1","-3"]]"#);
        assert_eq!(v["charpoly_matches"], true);
        let v = json(search_json("skew", 2, 3, true, 1e-10));
        assert_eq!(v["witnesses"].to_string(), "[[-1,-1,1],[-1,1,1]]");
        assert!(json(search_json("skew", 20, 9, false, 1e-10))["error"].is_string());
    }
}
