//! Command-line front end: parse spec files, run the certified analyses, and
//! emit deterministic JSON reports, replayable certificates, and SVG figures.
//!
//! Exit codes are a contract: 0 success, 2 parse/validation error, 3 depth or
//! resource exhaustion, 4 thickness-condition violation, 5 invalid
//! certificate.

mod certs;
mod format;
mod svg;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use cantor_forge_core::circlemap::{choose_window, CircleMap};
use cantor_forge_core::intersect::{gap_lemma_point, Mode};
use cantor_forge_core::thickness::{
    check_hky, check_newhouse, eps_thickness_pure, eps_thickness_windowed_lower,
    hausdorff_lower_bound, thickness, thickness_windowed,
};
use cantor_forge_core::tree::{
    build_tree, diagonal_window, pinned_window, verify_tree, TStarStream, WidthSchedule,
};
use cantor_forge_core::{CantorSpec, Error as CoreError, SubCantor, ThicknessReport};

use certs::*;
use format::*;

#[derive(Parser)]
#[command(name = "cantor-forge", version, about = "Certified thickness, intersection, and constant-gap tree computations for self-similar Cantor sets")]
struct Cli {
    /// Default working precision in bits (also via CANTOR_FORGE_PRECISION).
    #[arg(long, global = true)]
    precision: Option<u32>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Thickness of a spec, optionally restricted to a window.
    Thickness {
        spec: PathBuf,
        /// Restrict to a window "lo,hi" before measuring.
        #[arg(long, allow_hyphen_values = true)]
        window: Option<String>,
        /// Report the epsilon-thickness for this epsilon instead.
        #[arg(long, allow_hyphen_values = true)]
        eps: Option<String>,
    },
    /// Newhouse / Hunt-Kan-Yorke condition report for a pair of specs.
    Check { spec_a: PathBuf, spec_b: PathBuf },
    /// Certified intersection point of two interleaved specs.
    Intersect {
        spec_a: PathBuf,
        spec_b: PathBuf,
        /// Target box width, e.g. "1/1000000".
        #[arg(long, default_value = "1/1000000")]
        width: String,
        /// Condition backing the descent: hky or newhouse.
        #[arg(long, default_value = "hky")]
        mode: String,
        #[arg(long, default_value_t = 96)]
        budget: u32,
        /// Write the replayable certificate here.
        #[arg(long)]
        cert: Option<PathBuf>,
    },
    /// Thickness-preserving circle-map window about a point.
    Window {
        spec: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        x1: String,
        /// Circle center "a,b".
        #[arg(long, allow_hyphen_values = true)]
        center: String,
        /// Exact squared radius "p/q".
        #[arg(long)]
        t_sq: String,
        #[arg(long, default_value = "lower")]
        branch: String,
        /// Required thickness margin c in (0, 1).
        #[arg(long, default_value = "9/10")]
        c: String,
        #[arg(long, default_value_t = 64)]
        budget: u32,
        #[arg(long)]
        cert: Option<PathBuf>,
    },
    /// Build and verify a constant-gap tree placement in a product.
    Tree {
        spec_a: PathBuf,
        spec_b: PathBuf,
        /// Tree shape file: {"tstar":{...}} or {"parents":[...]}.
        #[arg(long)]
        tree: PathBuf,
        /// Seed points "x1,x2" and "y1,y2" in the product.
        #[arg(long, allow_hyphen_values = true)]
        seed_x: String,
        #[arg(long, allow_hyphen_values = true)]
        seed_y: String,
        /// Edge-width tolerance for verification.
        #[arg(long, default_value = "1/1000000000")]
        tol: String,
        #[arg(long, default_value_t = 160)]
        base_bits: u32,
        #[arg(long, default_value_t = 16)]
        step_bits: u32,
        /// Stream this many universal-tree vertices as JSON lines instead of
        /// building the shape in --tree.
        #[arg(long)]
        stream: Option<usize>,
        /// With --stream: recompute but do not re-emit the first N vertices.
        #[arg(long, default_value_t = 0)]
        skip: usize,
        #[arg(long)]
        cert: Option<PathBuf>,
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Sample realized distances and certify a tree build at each.
    Diagonal {
        spec_a: PathBuf,
        spec_b: PathBuf,
        #[arg(long)]
        tree: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        seed_x: String,
        #[arg(long, allow_hyphen_values = true)]
        seed_y: String,
        #[arg(long, default_value_t = 5)]
        samples: usize,
        #[arg(long, default_value_t = 160)]
        base_bits: u32,
        #[arg(long, default_value_t = 16)]
        step_bits: u32,
    },
    /// Certify sampled pinned distances from a fixed external point.
    Pinned {
        spec_a: PathBuf,
        spec_b: PathBuf,
        /// Pin point "a,b".
        #[arg(long, allow_hyphen_values = true)]
        pin: String,
        #[arg(long, default_value_t = 5)]
        samples: usize,
        #[arg(long, default_value_t = 48)]
        bits: u32,
    },
    /// Independently re-verify a certificate file.
    Replay { cert: PathBuf },
    /// Render a tree certificate as an SVG figure.
    Render {
        cert: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let precision = cli
        .precision
        .or_else(|| {
            std::env::var("CANTOR_FORGE_PRECISION").ok().and_then(|v| v.parse().ok())
        })
        .unwrap_or(96);
    match run(cli.command, precision) {
        Ok(code) => code,
        Err(Failure::Parse(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Core(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(core_exit(&e))
        }
        Err(Failure::Certificate(msg)) => {
            eprintln!("certificate invalid: {msg}");
            ExitCode::from(5)
        }
    }
}

enum Failure {
    Parse(String),
    Core(CoreError),
    Certificate(String),
}

impl From<CoreError> for Failure {
    fn from(e: CoreError) -> Self {
        Failure::Core(e)
    }
}

impl From<String> for Failure {
    fn from(m: String) -> Self {
        Failure::Parse(m)
    }
}

fn core_exit(e: &CoreError) -> u8 {
    match e {
        CoreError::InvalidParameter(_) => 2,
        CoreError::ResourceLimit(_)
        | CoreError::IncompleteGaps { .. }
        | CoreError::DepthExhausted(_)
        | CoreError::Exhausted(_) => 3,
        CoreError::ConditionViolation(_) => 4,
    }
}

fn load_json(path: &Path) -> Result<Value, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::Parse(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text)
        .map_err(|e| Failure::Parse(format!("bad JSON in {}: {e}", path.display())))
}

fn load_spec(path: &Path) -> Result<CantorSpec, Failure> {
    Ok(spec_from_json(&load_json(path)?)?)
}

fn write_text(path: &Path, text: &str) -> Result<(), Failure> {
    std::fs::write(path, text)
        .map_err(|e| Failure::Parse(format!("cannot write {}: {e}", path.display())))
}

fn emit(v: &Value) {
    println!("{}", serde_json::to_string(v).expect("serializable"));
}

fn report_json(report: &ThicknessReport) -> Value {
    if report.is_exact() {
        json!({
            "thickness": rational_to_json(&report.upper),
            "witness": rational_to_json(&report.witness_endpoint),
            "depth": report.depth_used,
        })
    } else {
        json!({
            "lower": rational_to_json(&report.lower),
            "upper": rational_to_json(&report.upper),
            "witness": rational_to_json(&report.witness_endpoint),
            "depth": report.depth_used,
        })
    }
}

fn run(command: Command, precision: u32) -> Result<ExitCode, Failure> {
    match command {
        Command::Thickness { spec, window, eps } => {
            let spec = load_spec(&spec)?;
            let window = window.map(|w| point_from_str(&w)).transpose()?;
            let eps = eps.map(|e| rational_from_str(&e)).transpose()?;
            match (window, eps) {
                (None, None) => {
                    emit(&report_json(&thickness(&spec)?));
                }
                (Some(w), None) => {
                    let sub = SubCantor::new(spec, w)?;
                    let report = thickness_windowed(&sub)?;
                    emit(&report_json(&report));
                    if !report.is_exact() {
                        return Ok(ExitCode::from(3));
                    }
                }
                (None, Some(e)) => {
                    let v = eps_thickness_pure(&spec, &e)?;
                    emit(&json!({"eps_thickness": rational_to_json(&v)}));
                }
                (Some(w), Some(e)) => {
                    let sub = SubCantor::new(spec, w)?;
                    let v = eps_thickness_windowed_lower(&sub, &e, 8)?;
                    emit(&json!({"eps_thickness_lower": rational_to_json(&v)}));
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Check { spec_a, spec_b } => {
            let a = load_spec(&spec_a)?;
            let b = load_spec(&spec_b)?;
            let ta = thickness(&a)?.upper;
            let tb = thickness(&b)?.upper;
            let hky = check_hky(&ta, &tb)?;
            let prec = cantor_forge_core::scalar::pow2_inv(precision.min(64));
            let ha = hausdorff_lower_bound(&ta, &prec)?;
            let hb = hausdorff_lower_bound(&tb, &prec)?;
            emit(&json!({
                "tau": [rational_to_json(&ta), rational_to_json(&tb)],
                "newhouse": check_newhouse(&ta, &tb)?,
                "hky": {
                    "satisfied": hky.satisfied,
                    "ordering_used": [
                        rational_to_json(&hky.ordering_used.0),
                        rational_to_json(&hky.ordering_used.1),
                    ],
                    "residuals": hky.residuals.iter().map(rational_to_json).collect::<Vec<_>>(),
                },
                "hausdorff_lower": [enclosure_to_json(&ha), enclosure_to_json(&hb)],
            }));
            Ok(ExitCode::SUCCESS)
        }
        Command::Intersect { spec_a, spec_b, width, mode, budget, cert } => {
            let a = load_spec(&spec_a)?;
            let b = load_spec(&spec_b)?;
            let width = rational_from_str(&width)?;
            let mode = match mode.as_str() {
                "hky" => Mode::Hky,
                "newhouse" => Mode::NewhouseOnly,
                other => return Err(Failure::Parse(format!("unknown mode {other:?}"))),
            };
            let out = gap_lemma_point(&a, &b, &width, &[], mode, budget)?;
            let doc = intersection_to_json(&a, &b, &out);
            emit(&json!({
                "box": enclosure_to_json(&out.point_box),
                "levels": out.chain.len(),
            }));
            if let Some(path) = cert {
                write_text(&path, &serde_json::to_string_pretty(&doc).expect("serializable"))?;
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Window { spec, x1, center, t_sq, branch, c, budget, cert } => {
            let k = load_spec(&spec)?;
            let x1 = rational_from_str(&x1)?;
            let center = point_from_str(&center)?;
            let t_sq = rational_from_str(&t_sq)?;
            let branch = branch_from_json(&Value::String(branch))?;
            let c = rational_from_str(&c)?;
            let map = CircleMap::new(center.clone(), t_sq.clone(), branch)?;
            let w = choose_window(&k, &x1, &map, &c, budget)?;
            let doc = WindowDoc {
                spec: k,
                x1,
                center,
                t_sq,
                branch,
                c,
                window: w.window.clone(),
                eps: w.distortion_eps.clone(),
                tau_eps_lower: w.tau_eps_lower.clone(),
                image_thickness_lb: w.image_thickness_lb.clone(),
                depth: 8,
            };
            let v = window_to_json(&doc);
            emit(&v);
            if let Some(path) = cert {
                write_text(&path, &serde_json::to_string_pretty(&v).expect("serializable"))?;
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Tree {
            spec_a,
            spec_b,
            tree,
            seed_x,
            seed_y,
            tol,
            base_bits,
            step_bits,
            stream,
            skip,
            cert,
            svg,
        } => {
            let a = load_spec(&spec_a)?;
            let b = load_spec(&spec_b)?;
            let seed_x = point_from_str(&seed_x)?;
            let seed_y = point_from_str(&seed_y)?;
            let tol = rational_from_str(&tol)?;
            let schedule = WidthSchedule { base_bits, step_bits };
            let placement = if let Some(n) = stream {
                let mut s = TStarStream::new(&a, &b, &seed_x, &seed_y, n, schedule)?;
                let mut emitted = 0usize;
                while let Some((id, point)) = s.next_vertex()? {
                    emitted += 1;
                    if emitted > skip {
                        emit(&json!({
                            "id": id,
                            "box1": enclosure_to_json(&point.box1),
                            "box2": enclosure_to_json(&point.box2),
                        }));
                    }
                }
                s.placement().clone()
            } else {
                let shape = tree_spec_from_json(&load_json(&tree)?)?;
                build_tree(&a, &b, &shape, &seed_x, &seed_y, schedule)?
            };
            let report = verify_tree(&placement, &tol);
            if stream.is_none() {
                emit(&json!({
                    "t": {"sq": rational_to_json(&placement.t_sq)},
                    "vertices": placement.vertices.len(),
                    "edges": report.edges,
                    "pass": report.pass,
                    "worst_edge_width": report.worst_edge.as_ref()
                        .map(|(_, _, w)| rational_to_json(w))
                        .unwrap_or(Value::Null),
                    "failures": report.failures,
                }));
            }
            if let Some(path) = cert {
                let doc = tree_to_json(&a, &b, &placement, &tol);
                write_text(&path, &serde_json::to_string_pretty(&doc).expect("serializable"))?;
            }
            if let Some(path) = svg {
                write_text(&path, &svg::render_tree(&a, &b, &placement)?)?;
            }
            if report.pass {
                Ok(ExitCode::SUCCESS)
            } else {
                Err(Failure::Certificate(report.failures.join("; ")))
            }
        }
        Command::Diagonal { spec_a, spec_b, tree, seed_x, seed_y, samples, base_bits, step_bits } => {
            let a = load_spec(&spec_a)?;
            let b = load_spec(&spec_b)?;
            let shape = tree_spec_from_json(&load_json(&tree)?)?;
            let seed_x = point_from_str(&seed_x)?;
            let seed_y = point_from_str(&seed_y)?;
            let schedule = WidthSchedule { base_bits, step_bits };
            let out = diagonal_window(&a, &b, &shape, &seed_x, &seed_y, samples, schedule)?;
            let all_ok = out.iter().all(|s| s.ok);
            emit(&json!(out.iter().map(|s| json!({
                "t_sq": rational_to_json(&s.t_sq),
                "ok": s.ok,
                "detail": s.detail,
            })).collect::<Vec<_>>()));
            if all_ok {
                Ok(ExitCode::SUCCESS)
            } else {
                Ok(ExitCode::from(4))
            }
        }
        Command::Pinned { spec_a, spec_b, pin, samples, bits } => {
            let a = load_spec(&spec_a)?;
            let b = load_spec(&spec_b)?;
            let pin = point_from_str(&pin)?;
            let out = pinned_window(&a, &b, &pin, samples, bits)?;
            let all_ok = out.iter().all(|s| s.ok);
            emit(&json!(out.iter().map(|s| json!({
                "t_sq": rational_to_json(&s.t_sq),
                "ok": s.ok,
                "detail": s.detail,
            })).collect::<Vec<_>>()));
            if all_ok {
                Ok(ExitCode::SUCCESS)
            } else {
                Ok(ExitCode::from(4))
            }
        }
        Command::Replay { cert } => {
            let doc = load_json(&cert)?;
            match certs::replay(&doc, precision) {
                Ok(()) => {
                    emit(&json!({"pass": true}));
                    Ok(ExitCode::SUCCESS)
                }
                Err(msg) => Err(Failure::Certificate(msg)),
            }
        }
        Command::Render { cert, out } => {
            let doc = load_json(&cert)?;
            let (k1, k2, placement, _tol) = tree_from_json(&doc)?;
            write_text(&out, &svg::render_tree(&k1, &k2, &placement)?)?;
            Ok(ExitCode::SUCCESS)
        }
    }
}
