//! Command-line front end for the `skewrec` library.

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use skewrec::measure::{is_kronecker, measure_with, MeasureOptions};
use skewrec::search::{
    minimize, sequence_table, verify_rekurs_over_space, Kind, Objective, SearchOptions, SearchSpace,
    DEFAULT_TABLE_BUDGET,
};
use skewrec::structure::{rekurs_decompose_with, DecomposeOptions};
use skewrec::symplectic::{
    charpoly, check_charpoly_symmetry, companion_anti_symplectic, companion_symplectic,
    verify_companions_over_space,
};
use skewrec::{Error, IntPoly};

#[derive(Parser, Debug)]
#[command(name = "skewrec", version, about = "Reciprocal and skew-reciprocal integer polynomials")]
struct Cli {
    #[command(flatten)]
    config: Config,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone, Serialize)]
struct Config {
    /// Width bound for every reported enclosure.
    #[arg(long, global = true, default_value_t = 1e-10)]
    tol: f64,
    /// Precision cap for root refinement, in bits.
    #[arg(long, global = true, env = "SKEWREC_MAX_BITS", default_value_t = 4096)]
    max_bits: u32,
    /// Search workers; defaults to the available parallelism.
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Seed for the random matrix samples of `verify`.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Write to this file instead of standard output.
    #[arg(long, short, global = true)]
    #[serde(skip)]
    output: Option<PathBuf>,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Mahler measure, house and Kronecker flag of a monic polynomial.
    Measure { poly: String },
    /// Monic, reciprocal, skew-reciprocal and Kronecker flags.
    Classify { poly: String },
    /// Square-substitution or nonreciprocal-witness decomposition.
    Decompose {
        poly: String,
        /// Admit every degree divisible by 4.
        #[arg(long)]
        multiple_of_four: bool,
    },
    /// Symplectic (or, with --anti, anti-symplectic) companion matrix.
    Companion {
        poly: String,
        #[arg(long)]
        anti: bool,
    },
    /// Exhaustive minimum over a height-bounded space.
    Search {
        #[arg(long, value_parser = parse_kind)]
        kind: Kind,
        #[arg(long)]
        degree: usize,
        #[arg(long)]
        height: u32,
        /// Minimize the house instead of the Mahler measure.
        #[arg(long, conflicts_with = "measure")]
        house: bool,
        /// Minimize the Mahler measure (the default).
        #[arg(long)]
        measure: bool,
    },
    /// Height-restricted sequence estimates, one row per degree 2^i.
    Table {
        /// Largest index i; heights repeat their last entry up to it.
        #[arg(long)]
        max_i: Option<u32>,
        /// Heights for i = 1, 2, ..., comma separated.
        #[arg(long, value_delimiter = ',', default_value = "3,2")]
        heights: Vec<u32>,
        /// Cap on enumerated members.
        #[arg(long, default_value_t = DEFAULT_TABLE_BUDGET)]
        budget: u128,
    },
    /// Exhaustive decomposition, companion and sampling suites.
    Verify {
        #[arg(long, default_value_t = 1000)]
        samples: usize,
    },
}

fn parse_kind(s: &str) -> Result<Kind, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_poly(s: &str) -> Result<IntPoly, Error> {
    IntPoly::parse(s)
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::PrecisionExhausted { .. } => 3,
        Error::BudgetExceeded { .. } => 4,
        Error::LemmaFalsified(_) => 5,
        _ => 2,
    }
}

enum Output {
    Json(Value),
    Csv(String),
}

fn classify(f: &IntPoly) -> Value {
    json!({
        "poly": f,
        "degree": f.degree(),
        "monic": f.is_monic(),
        "reciprocal": f.is_reciprocal(),
        "skew_reciprocal": f.is_skew_reciprocal().ok(),
        "kronecker": is_kronecker(f),
    })
}

fn run(command: &Command, config: &Config, format: Format) -> Result<Output, Error> {
    let mopts = MeasureOptions { max_bits: config.max_bits };
    let sopts = SearchOptions { tol: config.tol, jobs: config.jobs.unwrap_or(0), max_bits: config.max_bits };
    let value = match command {
        Command::Measure { poly } => {
            let f = parse_poly(poly)?;
            serde_json::to_value(measure_with(&f, config.tol, &mopts)?).expect("serializable")
        }
        Command::Classify { poly } => classify(&parse_poly(poly)?),
        Command::Decompose { poly, multiple_of_four } => {
            let f = parse_poly(poly)?;
            let opts = DecomposeOptions { allow_multiple_of_four: *multiple_of_four };
            serde_json::to_value(rekurs_decompose_with(&f, &opts)?).expect("serializable")
        }
        Command::Companion { poly, anti } => {
            let f = parse_poly(poly)?;
            let m = if *anti { companion_anti_symplectic(&f)? } else { companion_symplectic(&f)? };
            let cp = charpoly(&m);
            json!({
                "input": f,
                "anti": anti,
                "matrix": m,
                "symplectic": m.is_symplectic(),
                "anti_symplectic": m.is_anti_symplectic(),
                "charpoly": cp,
                "charpoly_matches": cp == f,
            })
        }
        Command::Search { kind, degree, height, house, .. } => {
            let space = SearchSpace::new(*kind, *degree, *height)?;
            let objective = if *house { Objective::House } else { Objective::Mahler };
            serde_json::to_value(minimize(&space, objective, &sopts)?).expect("serializable")
        }
        Command::Table { max_i, heights, budget } => {
            let mut hs = heights.clone();
            if hs.is_empty() {
                return Err(Error::Parse("at least one height is needed".into()));
            }
            if let Some(m) = max_i {
                let last = *hs.last().unwrap();
                hs.resize(*m as usize, last);
            }
            let table = sequence_table(&hs, &sopts, *budget)?;
            if format == Format::Csv {
                return Ok(Output::Csv(table.to_csv()));
            }
            serde_json::to_value(table).expect("serializable")
        }
        Command::Verify { samples } => {
            let mut rekurs = Vec::new();
            for (degree, height) in [(4, 2), (8, 1)] {
                let space = SearchSpace::new(Kind::SkewReciprocal, degree, height)?;
                rekurs.push(verify_rekurs_over_space(&space, &sopts)?);
            }
            let mut companion = Vec::new();
            for kind in [Kind::Reciprocal, Kind::SkewReciprocal] {
                for degree in [2, 4, 6, 8] {
                    companion.push(verify_companions_over_space(&SearchSpace::new(kind, degree, 2)?));
                }
            }
            let sampling = check_charpoly_symmetry(*samples, 4, 30, config.seed);
            let passed = rekurs.iter().all(|r| r.below_breusch.is_empty())
                && companion.iter().all(|c| c.failures.is_empty())
                && sampling.symplectic_failures == 0
                && sampling.anti_symplectic_failures == 0;
            json!({ "passed": passed, "rekurs": rekurs, "companion": companion, "sampling": sampling })
        }
    };
    if format == Format::Csv {
        return Err(Error::Parse("csv output is only available for `table`".into()));
    }
    Ok(Output::Json(value))
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Measure { .. } => "measure",
        Command::Classify { .. } => "classify",
        Command::Decompose { .. } => "decompose",
        Command::Companion { .. } => "companion",
        Command::Search { .. } => "search",
        Command::Table { .. } => "table",
        Command::Verify { .. } => "verify",
    }
}

fn text(value: &Value, indent: usize, out: &mut String) {
    let pad = "  ".repeat(indent);
    match value {
        Value::Object(map) if map.contains_key("lo") && map.contains_key("hi") => {
            out.push_str(&format!("[{}, {}]\n", plain(&map["lo"]), plain(&map["hi"])));
        }
        Value::Object(map) => {
            if indent > 0 {
                out.push('\n');
            }
            for (k, v) in map {
                out.push_str(&format!("{pad}{k}: "));
                text(v, indent + 1, out);
            }
        }
        Value::Array(items) if items.iter().all(|v| !v.is_object()) => {
            out.push_str(&value.to_string());
            out.push('\n');
        }
        Value::Array(items) => {
            out.push('\n');
            for (i, v) in items.iter().enumerate() {
                out.push_str(&format!("{pad}- [{i}] "));
                text(v, indent + 1, out);
            }
        }
        other => {
            out.push_str(&plain(other));
            out.push('\n');
        }
    }
}

/// Indented JSON that keeps arrays of scalars and `[lo, hi]`-style leaves on
/// one line.
fn pretty(value: &Value, indent: usize, out: &mut String) {
    let inline = |v: &Value| match v {
        Value::Array(items) => items.iter().all(|x| !x.is_object() && !x.is_array()),
        Value::Object(_) => false,
        _ => true,
    };
    let pad = "  ".repeat(indent + 1);
    match value {
        v if inline(v) => out.push_str(&v.to_string()),
        Value::Array(items) if items.is_empty() => out.push_str("[]"),
        Value::Object(map) if map.is_empty() => out.push_str("{}"),
        Value::Array(items) => {
            out.push_str("[\n");
            for (i, v) in items.iter().enumerate() {
                out.push_str(&pad);
                pretty(v, indent + 1, out);
                out.push_str(if i + 1 < items.len() { ",\n" } else { "\n" });
            }
            out.push_str(&"  ".repeat(indent));
            out.push(']');
        }
        Value::Object(map) => {
            out.push_str("{\n");
            for (i, (k, v)) in map.iter().enumerate() {
                out.push_str(&format!("{pad}{}: ", Value::String(k.clone())));
                pretty(v, indent + 1, out);
                out.push_str(if i + 1 < map.len() { ",\n" } else { "\n" });
            }
            out.push_str(&"  ".repeat(indent));
            out.push('}');
        }
        _ => unreachable!(),
    }
}

fn plain(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

fn render(cli: &Cli, format: Format, output: Output) -> String {
    let name = command_name(&cli.command);
    match output {
        Output::Csv(csv) => {
            let run = serde_json::to_string(&json!({ "command": name, "config": &cli.config })).unwrap();
            format!("# {run}\n{csv}")
        }
        Output::Json(result) => {
            let run = json!({
                "command": name,
                "version": env!("CARGO_PKG_VERSION"),
                "config": &cli.config,
            });
            match format {
                Format::Text => {
                    let mut s = format!("skewrec {name}\n");
                    text(&result, 0, &mut s);
                    s
                }
                _ => {
                    let doc = json!({ "run": run, "result": result });
                    let mut s = String::new();
                    pretty(&doc, 0, &mut s);
                    s + "\n"
                }
            }
        }
    }
}

fn main() -> ExitCode {
    let mut cli = Cli::parse();
    let format = cli.config.format.unwrap_or(match cli.command {
        Command::Table { .. } => Format::Csv,
        _ => Format::Json,
    });
    cli.config.format = Some(format);
    if cli.config.jobs.is_none() {
        cli.config.jobs = Some(std::thread::available_parallelism().map_or(1, |n| n.get()));
    }
    match run(&cli.command, &cli.config, format) {
        Ok(output) => {
            let body = render(&cli, format, output);
            let written = match &cli.config.output {
                Some(path) => std::fs::write(path, body),
                None => std::io::stdout().write_all(body.as_bytes()),
            };
            if let Err(e) = written {
                eprintln!("skewrec: cannot write output: {e}");
                return ExitCode::from(2);
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("skewrec: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
