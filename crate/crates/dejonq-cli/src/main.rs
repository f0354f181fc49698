//! Command-line front end for the `dejonq` library.
//!
//! Triangular maps, flow families, and Lie algebras are read from JSON
//! documents (see the library's `expr` module for the schemas); small
//! scalar inputs are taken inline. Every report is deterministic: the same
//! inputs produce byte-identical output, in prose by default or as JSON
//! with `--json`.
//!
//! Exit codes: `0` for a definitive answer, `1` for any input or usage
//! error, `2` when a bounded search ended without deciding (an order cap
//! was hit, an invariant level stayed unresolved, or slicing ran out of
//! candidate values).

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand};
use serde::Serialize;

use dejonq::expr::{parse_ratfunc, render, AlgebraDocument, MapDocument};
use dejonq::invariants::{invariant_chain, AnsatzBounds, LevelOutcome};
use dejonq::jonq::{JonqElement, OrderResult};
use dejonq::slice::{
    coadjoint_flows, slice_chain, verify_cross_section, AdditiveFlow, NilpotentAlgebra, SliceError,
    SliceOptions,
};
use dejonq::torus::{line_certificate, LineConclusion, WeightAction};
use dejonq::{IntMatrix, Rational};

/// Exit code for "the bounded search did not decide".
const EXIT_UNDECIDED: u8 = 2;

#[derive(Parser)]
#[command(
    name = "dejonq",
    version,
    about = "Triangular rational maps: composition, orders, invariants, slices",
    propagate_version = true
)]
struct Cli {
    /// Emit machine-readable JSON instead of prose.
    #[arg(long, global = true)]
    json: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the product of two triangular maps (left map applied to the
    /// output functions of the right).
    Compose {
        /// JSON document for the left factor.
        first: PathBuf,
        /// JSON document for the right factor.
        second: PathBuf,
    },
    /// Print the inverse of a triangular map.
    Invert {
        /// JSON document for the map.
        map: PathBuf,
    },
    /// Decide whether a map has finite order, searching up to a cap.
    Order {
        /// JSON document for the map.
        map: PathBuf,
        /// Largest power to try before giving up.
        #[arg(long, default_value_t = 4096)]
        cap: u64,
    },
    /// Apply a map to an expression, or move a rational point.
    Apply {
        /// JSON document for the map.
        map: PathBuf,
        /// Expression in x1, x2, ... to transform.
        #[arg(long, conflicts_with = "point")]
        expr: Option<String>,
        /// Comma-separated rational coordinates of a point to move.
        #[arg(long)]
        point: Option<String>,
    },
    /// Search for a chain of invariants of the group generated by a list
    /// of maps.
    Invariants {
        /// JSON array of map documents.
        generators: PathBuf,
        /// Degree bound in each level's own coordinate.
        #[arg(long, default_value_t = 6)]
        max_degree: u32,
        /// Total degree bound in the later coordinates.
        #[arg(long, default_value_t = 6)]
        max_aux_degree: u32,
    },
    /// Faithfulness and monomial invariants of a diagonal torus action.
    TorusInvariants {
        /// Weight matrix as inline JSON, e.g. `[[5,3]]`.
        weights: String,
    },
    /// Slice a family of additive flows down to a cross-section with
    /// invariant coordinates.
    Slice {
        /// JSON array of flow documents.
        flows: PathBuf,
        /// Comma-separated rational slice values to try, in order.
        #[arg(long)]
        candidates: Option<String>,
    },
    /// Compute the coadjoint flows of a nilpotent Lie algebra, then slice
    /// them.
    CoadjointSlice {
        /// JSON document with dimension and structure constants.
        algebra: PathBuf,
    },
    /// Count generic line intersections for the plane action with weights
    /// (D1, D2).
    LineCheck { d1: i64, d2: i64 },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let code = match err.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            // clap renders help to stdout and errors to stderr on its own
            let _ = err.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::from(1)
        }
    }
}

fn run(cli: &Cli) -> Result<u8, String> {
    match &cli.command {
        Command::Compose { first, second } => {
            let g = load_element(first)?;
            let h = load_element(second)?;
            if g.arity() != h.arity() {
                return Err(format!(
                    "maps have different arities ({} vs {})",
                    g.arity(),
                    h.arity()
                ));
            }
            report_element(&g.compose(&h), cli.json);
            Ok(0)
        }
        Command::Invert { map } => {
            let g = load_element(map)?;
            report_element(&g.invert(), cli.json);
            Ok(0)
        }
        Command::Order { map, cap } => {
            let g = load_element(map)?;
            run_order(&g, *cap, cli.json)
        }
        Command::Apply { map, expr, point } => {
            let g = load_element(map)?;
            match (expr, point) {
                (Some(expr), None) => run_apply_expr(&g, expr, cli.json),
                (None, Some(point)) => run_apply_point(&g, point, cli.json),
                _ => Err("pass exactly one of --expr and --point".to_string()),
            }
        }
        Command::Invariants {
            generators,
            max_degree,
            max_aux_degree,
        } => {
            let gens = load_elements(generators)?;
            let bounds = AnsatzBounds {
                max_degree: *max_degree,
                max_aux_degree: *max_aux_degree,
            };
            run_invariants(&gens, &bounds, cli.json)
        }
        Command::TorusInvariants { weights } => run_torus(weights, cli.json),
        Command::Slice { flows, candidates } => {
            let family = load_flows(flows)?;
            let options = match candidates {
                Some(list) => SliceOptions {
                    candidates: parse_rationals(list)?,
                },
                None => SliceOptions::default(),
            };
            run_slice(&family, &options, None, cli.json)
        }
        Command::CoadjointSlice { algebra } => {
            let algebra = load_algebra(algebra)?;
            let family = coadjoint_flows(&algebra);
            run_slice(&family, &SliceOptions::default(), Some(&family), cli.json)
        }
        Command::LineCheck { d1, d2 } => run_line_check(*d1, *d2, cli.json),
    }
}

// ---------------------------------------------------------------------------
// input loading

fn read_input(path: &Path) -> Result<String, String> {
    fs::read_to_string(path).map_err(|err| format!("{}: {err}", path.display()))
}

fn load_element(path: &Path) -> Result<JonqElement, String> {
    let text = read_input(path)?;
    let doc = MapDocument::from_json(&text).map_err(|err| format!("{}: {err}", path.display()))?;
    JonqElement::from_document(&doc).map_err(|err| format!("{}: {err}", path.display()))
}

fn load_elements(path: &Path) -> Result<Vec<JonqElement>, String> {
    let text = read_input(path)?;
    let docs: Vec<MapDocument> =
        serde_json::from_str(&text).map_err(|err| format!("{}: {err}", path.display()))?;
    docs.iter()
        .enumerate()
        .map(|(i, doc)| {
            JonqElement::from_document(doc)
                .map_err(|err| format!("{}, entry {}: {err}", path.display(), i + 1))
        })
        .collect()
}

fn load_flows(path: &Path) -> Result<Vec<AdditiveFlow>, String> {
    let text = read_input(path)?;
    let docs: Vec<MapDocument> =
        serde_json::from_str(&text).map_err(|err| format!("{}: {err}", path.display()))?;
    docs.iter()
        .enumerate()
        .map(|(i, doc)| {
            AdditiveFlow::from_document(doc)
                .map_err(|err| format!("{}, entry {}: {err}", path.display(), i + 1))
        })
        .collect()
}

fn load_algebra(path: &Path) -> Result<NilpotentAlgebra, String> {
    let text = read_input(path)?;
    let doc =
        AlgebraDocument::from_json(&text).map_err(|err| format!("{}: {err}", path.display()))?;
    NilpotentAlgebra::from_document(&doc).map_err(|err| format!("{}: {err}", path.display()))
}

fn parse_rationals(list: &str) -> Result<Vec<Rational>, String> {
    list.split(',')
        .map(str::trim)
        .map(|part| {
            part.parse::<Rational>()
                .map_err(|err| format!("bad rational {part:?}: {err}"))
        })
        .collect()
}

// ---------------------------------------------------------------------------
// per-command reports

fn report_element(g: &JonqElement, json: bool) {
    if json {
        println!("{}", g.to_document().to_json());
    } else {
        for i in 1..=g.arity() {
            let rule = g.rule(i).expect("index in range");
            println!("x{i} -> {}", render(&rule));
        }
    }
}

#[derive(Serialize)]
struct OrderOutput {
    order: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    value: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    cap: Option<u64>,
}

fn run_order(g: &JonqElement, cap: u64, json: bool) -> Result<u8, String> {
    let (output, code) = match g.order(cap) {
        OrderResult::Finite(m) => (
            OrderOutput {
                order: "finite",
                value: Some(m),
                cap: None,
            },
            0,
        ),
        OrderResult::Infinite => (
            OrderOutput {
                order: "infinite",
                value: None,
                cap: None,
            },
            0,
        ),
        OrderResult::Unknown { cap } => (
            OrderOutput {
                order: "unknown",
                value: None,
                cap: Some(cap),
            },
            EXIT_UNDECIDED,
        ),
    };
    if json {
        println!("{}", to_json(&output));
    } else {
        match output.order {
            "finite" => println!("order: finite {}", output.value.expect("finite order")),
            "infinite" => println!("order: infinite"),
            _ => println!("order: unknown (cap {})", output.cap.expect("cap recorded")),
        }
    }
    Ok(code)
}

#[derive(Serialize)]
struct ApplyOutput {
    result: String,
}

fn run_apply_expr(g: &JonqElement, expr: &str, json: bool) -> Result<u8, String> {
    let parsed = parse_ratfunc(expr).map_err(|err| err.to_string())?;
    if parsed
        .max_x_index()
        .is_some_and(|i| i as usize > g.arity())
    {
        return Err(format!(
            "expression uses more than {} coordinates",
            g.arity()
        ));
    }
    if parsed.has_params() {
        return Err("expression must not use the parameters u, a1, a2".to_string());
    }
    let image = g.apply(&parsed);
    if json {
        println!(
            "{}",
            to_json(&ApplyOutput {
                result: render(&image)
            })
        );
    } else {
        println!("{}", render(&image));
    }
    Ok(0)
}

#[derive(Serialize)]
struct PointOutput {
    point: Option<Vec<String>>,
}

fn run_apply_point(g: &JonqElement, point: &str, json: bool) -> Result<u8, String> {
    let coords = parse_rationals(point)?;
    if coords.len() != g.arity() {
        return Err(format!(
            "point has {} coordinates, the map expects {}",
            coords.len(),
            g.arity()
        ));
    }
    let image = g.move_point(&coords);
    if json {
        let output = PointOutput {
            point: image
                .as_ref()
                .map(|p| p.iter().map(Rational::to_string).collect()),
        };
        println!("{}", to_json(&output));
    } else {
        match image {
            Some(p) => {
                let rendered: Vec<String> = p.iter().map(Rational::to_string).collect();
                println!("({})", rendered.join(", "));
            }
            None => println!("undefined"),
        }
    }
    Ok(0)
}

#[derive(Serialize)]
struct LevelOutput {
    level: usize,
    status: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    invariant: Option<String>,
}

#[derive(Serialize)]
struct ChainOutput {
    arity: usize,
    levels: Vec<LevelOutput>,
    complete: bool,
    independent: bool,
}

fn run_invariants(gens: &[JonqElement], bounds: &AnsatzBounds, json: bool) -> Result<u8, String> {
    let chain = invariant_chain(gens, bounds).map_err(|err| err.to_string())?;
    let levels: Vec<LevelOutput> = chain
        .levels()
        .iter()
        .map(|report| match &report.outcome {
            LevelOutcome::Certified { invariant } => LevelOutput {
                level: report.level,
                status: "certified",
                invariant: Some(render(invariant)),
            },
            LevelOutcome::Unresolved { .. } => LevelOutput {
                level: report.level,
                status: "unresolved",
                invariant: None,
            },
            LevelOutcome::Trivial => LevelOutput {
                level: report.level,
                status: "trivial",
                invariant: None,
            },
        })
        .collect();
    let output = ChainOutput {
        arity: chain.arity(),
        levels,
        complete: chain.fully_certified(),
        independent: chain.pure_certified(),
    };
    if json {
        println!("{}", to_json(&output));
    } else {
        println!("arity: {}", output.arity);
        for level in &output.levels {
            match &level.invariant {
                Some(inv) => println!("level {}: certified {inv}", level.level),
                None => println!("level {}: {}", level.level, level.status),
            }
        }
        println!("complete: {}", output.complete);
        println!("independent: {}", output.independent);
    }
    Ok(if output.complete { 0 } else { EXIT_UNDECIDED })
}

#[derive(Serialize)]
struct TorusOutput {
    torus_rank: usize,
    coordinates: usize,
    weight_rank: usize,
    invariant_factors: Vec<String>,
    faithful: bool,
    trdeg: usize,
    invariants: Vec<String>,
}

fn run_torus(weights: &str, json: bool) -> Result<u8, String> {
    let rows: Vec<Vec<i64>> =
        serde_json::from_str(weights).map_err(|err| format!("bad weight matrix: {err}"))?;
    let m = rows.len();
    let n = rows.first().map_or(0, Vec::len);
    if rows.iter().any(|row| row.len() != n) {
        return Err("weight matrix rows have unequal lengths".to_string());
    }
    let flat: Vec<i64> = rows.into_iter().flatten().collect();
    let action =
        WeightAction::new(IntMatrix::from_i64(m, n, &flat)).map_err(|err| err.to_string())?;
    let report = action.faithfulness();
    let output = TorusOutput {
        torus_rank: report.torus_rank,
        coordinates: report.coords,
        weight_rank: report.weight_rank,
        invariant_factors: report
            .invariant_factors
            .iter()
            .map(ToString::to_string)
            .collect(),
        faithful: report.faithful,
        trdeg: report.invariants_trdeg,
        invariants: action.monomial_invariants().iter().map(render).collect(),
    };
    if json {
        println!("{}", to_json(&output));
    } else {
        println!("torus rank: {}", output.torus_rank);
        println!("coordinates: {}", output.coordinates);
        println!("weight rank: {}", output.weight_rank);
        println!(
            "invariant factors: {}",
            if output.invariant_factors.is_empty() {
                "none".to_string()
            } else {
                output.invariant_factors.join(", ")
            }
        );
        println!("faithful: {}", output.faithful);
        println!("invariant field transcendence degree: {}", output.trdeg);
        for inv in &output.invariants {
            println!("invariant: {inv}");
        }
    }
    Ok(0)
}

#[derive(Serialize)]
struct SlicedOutput {
    index: usize,
    value: String,
}

#[derive(Serialize)]
struct SliceOutput {
    #[serde(skip_serializing_if = "Option::is_none")]
    flows: Option<Vec<Vec<String>>>,
    arity: usize,
    sliced: Vec<SlicedOutput>,
    survivors: Vec<usize>,
    invariants: Vec<String>,
    verified: bool,
}

fn run_slice(
    family: &[AdditiveFlow],
    options: &SliceOptions,
    show_flows: Option<&[AdditiveFlow]>,
    json: bool,
) -> Result<u8, String> {
    let result = match slice_chain(family, options) {
        Ok(result) => result,
        Err(err @ SliceError::CandidatesExhausted { .. }) => {
            // A definitive negative is out of reach: more candidates might
            // still work, so report the stall rather than an error.
            if json {
                println!(
                    "{}",
                    to_json(&serde_json::json!({ "stalled": err.to_string() }))
                );
            } else {
                println!("stalled: {err}");
            }
            return Ok(EXIT_UNDECIDED);
        }
        Err(err) => return Err(err.to_string()),
    };
    verify_cross_section(family, &result).map_err(|err| err.to_string())?;
    let output = SliceOutput {
        flows: show_flows.map(|flows| {
            flows
                .iter()
                .map(|h| h.offsets().iter().map(render).collect())
                .collect()
        }),
        arity: result.arity,
        sliced: result
            .sliced
            .iter()
            .map(|(index, value)| SlicedOutput {
                index: *index,
                value: value.to_string(),
            })
            .collect(),
        survivors: result.survivors.clone(),
        invariants: result.invariants.iter().map(render).collect(),
        verified: true,
    };
    if json {
        println!("{}", to_json(&output));
    } else {
        if let Some(flows) = show_flows {
            for (i, h) in flows.iter().enumerate() {
                if h.is_trivial() {
                    println!("flow {}: trivial", i + 1);
                } else {
                    let moved: Vec<String> = h
                        .offsets()
                        .iter()
                        .enumerate()
                        .filter(|(_, f)| !f.is_zero())
                        .map(|(j, f)| format!("x{} += {}", j + 1, render(f)))
                        .collect();
                    println!("flow {}: {}", i + 1, moved.join("; "));
                }
            }
        }
        println!("arity: {}", output.arity);
        let sliced: Vec<String> = output
            .sliced
            .iter()
            .map(|s| format!("x{} = {}", s.index, s.value))
            .collect();
        println!(
            "sliced: {}",
            if sliced.is_empty() {
                "none".to_string()
            } else {
                sliced.join("; ")
            }
        );
        let survivors: Vec<String> = output.survivors.iter().map(|i| format!("x{i}")).collect();
        println!(
            "survivors: {}",
            if survivors.is_empty() {
                "none".to_string()
            } else {
                survivors.join(", ")
            }
        );
        for (surv, inv) in output.survivors.iter().zip(&output.invariants) {
            println!("invariant for x{surv}: {inv}");
        }
        println!("verified: {}", output.verified);
    }
    Ok(0)
}

#[derive(Serialize)]
struct LineCaseOutput {
    mu1: bool,
    mu2: bool,
    nu: bool,
    count: u32,
}

#[derive(Serialize)]
struct LineOutput {
    d1: i64,
    d2: i64,
    cases: Vec<LineCaseOutput>,
    separated: bool,
    high_degree: bool,
    coprime: bool,
    conclusion: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    case: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    line: Option<String>,
}

/// Names the terms present in a case, e.g. `a1*x1 + c`.
fn case_label(mu1: bool, mu2: bool, nu: bool) -> String {
    let mut parts = Vec::new();
    if mu1 {
        parts.push("a1*x1");
    }
    if mu2 {
        parts.push("a2*x2");
    }
    if nu {
        parts.push("c");
    }
    parts.join(" + ")
}

fn run_line_check(d1: i64, d2: i64, json: bool) -> Result<u8, String> {
    let cert = line_certificate(d1, d2).map_err(|err| err.to_string())?;
    let (conclusion, case, line) = match &cert.conclusion {
        LineConclusion::NoLine => ("no-line", None, None),
        LineConclusion::Candidate { case, line } => ("candidate", Some(*case), Some(line.clone())),
    };
    let output = LineOutput {
        d1: cert.d1,
        d2: cert.d2,
        cases: cert
            .cases
            .iter()
            .map(|c| LineCaseOutput {
                mu1: c.mu1,
                mu2: c.mu2,
                nu: c.nu,
                count: c.count,
            })
            .collect(),
        separated: cert.conditions.separated,
        high_degree: cert.conditions.high_degree,
        coprime: cert.conditions.coprime,
        conclusion,
        case,
        line,
    };
    if json {
        println!("{}", to_json(&output));
    } else {
        println!("weights: d1 = {}, d2 = {}", output.d1, output.d2);
        for (i, c) in output.cases.iter().enumerate() {
            println!(
                "case {} ({}): {} roots",
                i + 1,
                case_label(c.mu1, c.mu2, c.nu),
                c.count
            );
        }
        println!(
            "separated: {}; high degree: {}; coprime: {}",
            output.separated, output.high_degree, output.coprime
        );
        match (&output.case, &output.line) {
            (Some(case), Some(line)) => println!("conclusion: candidate line {line} (case {case})"),
            _ => println!("conclusion: no orbit closure is a line"),
        }
    }
    Ok(0)
}

fn to_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("report serializes")
}
