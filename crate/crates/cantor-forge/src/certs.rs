//! Certificate files: self-contained JSON documents that an independent
//! checker can replay from scratch. Three kinds exist — intersection chains,
//! circle-map window certificates, and full tree placements.

use serde_json::{json, Value};

use cantor_forge_core::circlemap::{distortion_bound, Branch, CircleMap};
use cantor_forge_core::intersect::{
    verify_chain, ChainLevel, IntersectionEnclosure, InterleaveWitness, Mode, SpecialPair,
};
use cantor_forge_core::thickness::{eps_thickness_windowed_lower, thickness};
use cantor_forge_core::tree::{
    verify_placement, verify_tree, CircleLevel, PlanarPoint, TreePlacement, VertexCert,
    VertexOrigin, KEEP,
};
use cantor_forge_core::{CantorSpec, Rational, SubCantor};

use crate::format::*;

fn branch_to_json(b: Branch) -> Value {
    match b {
        Branch::Lower => json!("lower"),
        Branch::Upper => json!("upper"),
    }
}

pub fn branch_from_json(v: &Value) -> FmtResult<Branch> {
    match v.as_str() {
        Some("lower") => Ok(Branch::Lower),
        Some("upper") => Ok(Branch::Upper),
        _ => Err(format!("expected \"lower\" or \"upper\", got {v}")),
    }
}

fn mode_to_json(m: Mode) -> Value {
    match m {
        Mode::Hky => json!("hky"),
        Mode::NewhouseOnly => json!("newhouse"),
    }
}

fn mode_from_json(v: &Value) -> FmtResult<Mode> {
    match v.as_str() {
        Some("hky") => Ok(Mode::Hky),
        Some("newhouse") => Ok(Mode::NewhouseOnly),
        _ => Err(format!("expected \"hky\" or \"newhouse\", got {v}")),
    }
}

pub fn intersection_to_json(
    k1: &CantorSpec,
    k2: &CantorSpec,
    cert: &IntersectionEnclosure,
) -> Value {
    json!({
        "kind": "intersection",
        "k1": spec_to_json(k1),
        "k2": spec_to_json(k2),
        "mode": mode_to_json(cert.mode),
        "tau_a": rational_to_json(&cert.tau_a),
        "tau_b": rational_to_json(&cert.tau_b),
        "root_witness": {
            "a_in_b": rational_to_json(&cert.root_witness.a_in_b),
            "b_in_a": rational_to_json(&cert.root_witness.b_in_a),
        },
        "chain": cert.chain.iter().map(|l| json!({
            "child_a": l.child_a,
            "child_b": l.child_b,
            "witness_ab": rational_to_json(&l.witness_ab),
            "witness_ba": rational_to_json(&l.witness_ba),
        })).collect::<Vec<_>>(),
        "box": enclosure_to_json(&cert.point_box),
    })
}

pub fn intersection_from_json(
    v: &Value,
) -> FmtResult<(CantorSpec, CantorSpec, IntersectionEnclosure)> {
    let k1 = spec_from_json(obj_get(v, "k1")?)?;
    let k2 = spec_from_json(obj_get(v, "k2")?)?;
    let chain = obj_get(v, "chain")?
        .as_array()
        .ok_or_else(|| "chain must be an array".to_string())?
        .iter()
        .map(|l| {
            Ok(ChainLevel {
                child_a: obj_get(l, "child_a")?
                    .as_u64()
                    .ok_or_else(|| "bad child index".to_string())? as u32,
                child_b: obj_get(l, "child_b")?
                    .as_u64()
                    .ok_or_else(|| "bad child index".to_string())? as u32,
                witness_ab: rational_from_json(obj_get(l, "witness_ab")?)?,
                witness_ba: rational_from_json(obj_get(l, "witness_ba")?)?,
            })
        })
        .collect::<FmtResult<Vec<_>>>()?;
    let w = obj_get(v, "root_witness")?;
    let cert = IntersectionEnclosure {
        mode: mode_from_json(obj_get(v, "mode")?)?,
        tau_a: rational_from_json(obj_get(v, "tau_a")?)?,
        tau_b: rational_from_json(obj_get(v, "tau_b")?)?,
        root_witness: InterleaveWitness {
            a_in_b: rational_from_json(obj_get(w, "a_in_b")?)?,
            b_in_a: rational_from_json(obj_get(w, "b_in_a")?)?,
        },
        chain,
        point_box: enclosure_from_json(obj_get(v, "box")?)?,
    };
    Ok((k1, k2, cert))
}

pub struct WindowDoc {
    pub spec: CantorSpec,
    pub x1: Rational,
    pub center: (Rational, Rational),
    pub t_sq: Rational,
    pub branch: Branch,
    pub c: Rational,
    pub window: (Rational, Rational),
    pub eps: Rational,
    pub tau_eps_lower: Rational,
    pub image_thickness_lb: Rational,
    pub depth: u32,
}

pub fn window_to_json(doc: &WindowDoc) -> Value {
    json!({
        "kind": "window",
        "spec": spec_to_json(&doc.spec),
        "x1": rational_to_json(&doc.x1),
        "center": [rational_to_json(&doc.center.0), rational_to_json(&doc.center.1)],
        "t_sq": rational_to_json(&doc.t_sq),
        "branch": branch_to_json(doc.branch),
        "c": rational_to_json(&doc.c),
        "window": interval_to_json(&doc.window),
        "eps": rational_to_json(&doc.eps),
        "tau_eps_lower": rational_to_json(&doc.tau_eps_lower),
        "image_thickness_lb": rational_to_json(&doc.image_thickness_lb),
        "depth": doc.depth,
    })
}

pub fn window_from_json(v: &Value) -> FmtResult<WindowDoc> {
    let center = obj_get(v, "center")?
        .as_array()
        .filter(|a| a.len() == 2)
        .ok_or_else(|| "center must be [a, b]".to_string())?;
    Ok(WindowDoc {
        spec: spec_from_json(obj_get(v, "spec")?)?,
        x1: rational_from_json(obj_get(v, "x1")?)?,
        center: (rational_from_json(&center[0])?, rational_from_json(&center[1])?),
        t_sq: rational_from_json(obj_get(v, "t_sq")?)?,
        branch: branch_from_json(obj_get(v, "branch")?)?,
        c: rational_from_json(obj_get(v, "c")?)?,
        window: interval_from_json(obj_get(v, "window")?)?,
        eps: rational_from_json(obj_get(v, "eps")?)?,
        tau_eps_lower: rational_from_json(obj_get(v, "tau_eps_lower")?)?,
        image_thickness_lb: rational_from_json(obj_get(v, "image_thickness_lb")?)?,
        depth: obj_get(v, "depth")?.as_u64().ok_or_else(|| "bad depth".to_string())? as u32,
    })
}

/// Re-check a window certificate from scratch: distortion bound, restricted
/// epsilon-thickness, and the claimed image-thickness margin.
pub fn replay_window(doc: &WindowDoc, precision: u32) -> Result<(), String> {
    let map = CircleMap::new(doc.center.clone(), doc.t_sq.clone(), doc.branch)
        .map_err(|e| e.to_string())?;
    let d = distortion_bound(&map, &doc.window, precision).map_err(|e| e.to_string())?;
    if d.eps.hi > doc.eps {
        return Err("recorded distortion bound is smaller than the recomputed one".to_string());
    }
    let sub = SubCantor::new(doc.spec.clone(), doc.window.clone()).map_err(|e| e.to_string())?;
    let tau_eps =
        eps_thickness_windowed_lower(&sub, &doc.eps, doc.depth).map_err(|e| e.to_string())?;
    if tau_eps < doc.tau_eps_lower {
        return Err("recorded epsilon-thickness bound fails".to_string());
    }
    let one = Rational::from_integer(1.into());
    if doc.eps >= one {
        return Err("distortion bound must stay below 1".to_string());
    }
    let lb = (&one - &doc.eps) * &doc.tau_eps_lower;
    if lb < doc.image_thickness_lb {
        return Err("recorded image thickness bound fails".to_string());
    }
    let tau = thickness(&doc.spec).map_err(|e| e.to_string())?.upper;
    if doc.image_thickness_lb < &doc.c * &tau {
        return Err("window misses the requested thickness margin".to_string());
    }
    if doc.window.0 > doc.x1 || doc.x1 > doc.window.1 {
        return Err("window does not contain the anchor point".to_string());
    }
    Ok(())
}

fn origin_to_json(o: &VertexOrigin) -> Value {
    match o {
        VertexOrigin::SeedRoot => json!("seed-root"),
        VertexOrigin::SeedChild => json!("seed-child"),
        VertexOrigin::Star(c) => json!({"star": {
            "center": c.center,
            "branch": branch_to_json(c.branch),
            "anchor_path": c.anchor_path,
            "eps": rational_to_json(&c.distortion_eps),
            "image_tau_lb": rational_to_json(&c.image_tau_lb),
            "root_member1": rational_to_json(&c.root_member1),
            "root_member2": rational_to_json(&c.root_member2),
            "chain": c.chain.iter().map(|l| json!({
                "child1": if l.child1 == KEEP { Value::Null } else { json!(l.child1) },
                "child2": if l.child2 == KEEP { Value::Null } else { json!(l.child2) },
                "member1": rational_to_json(&l.member1),
                "member2": rational_to_json(&l.member2),
            })).collect::<Vec<_>>(),
        }}),
    }
}

fn origin_from_json(v: &Value) -> FmtResult<VertexOrigin> {
    match v {
        Value::String(s) if s == "seed-root" => Ok(VertexOrigin::SeedRoot),
        Value::String(s) if s == "seed-child" => Ok(VertexOrigin::SeedChild),
        Value::Object(_) => {
            let c = obj_get(v, "star")?;
            let chain = obj_get(c, "chain")?
                .as_array()
                .ok_or_else(|| "chain must be an array".to_string())?
                .iter()
                .map(|l| {
                    let side = |key: &str| -> FmtResult<u32> {
                        match obj_get(l, key)? {
                            Value::Null => Ok(KEEP),
                            n => n
                                .as_u64()
                                .map(|n| n as u32)
                                .ok_or_else(|| "bad child index".to_string()),
                        }
                    };
                    Ok(CircleLevel {
                        child1: side("child1")?,
                        child2: side("child2")?,
                        member1: rational_from_json(obj_get(l, "member1")?)?,
                        member2: rational_from_json(obj_get(l, "member2")?)?,
                    })
                })
                .collect::<FmtResult<Vec<_>>>()?;
            Ok(VertexOrigin::Star(VertexCert {
                center: obj_get(c, "center")?
                    .as_u64()
                    .ok_or_else(|| "bad center index".to_string())? as usize,
                branch: branch_from_json(obj_get(c, "branch")?)?,
                anchor_path: obj_get(c, "anchor_path")?
                    .as_array()
                    .ok_or_else(|| "bad anchor path".to_string())?
                    .iter()
                    .map(|d| d.as_u64().map(|d| d as u32).ok_or_else(|| "bad digit".to_string()))
                    .collect::<FmtResult<Vec<_>>>()?,
                distortion_eps: rational_from_json(obj_get(c, "eps")?)?,
                image_tau_lb: rational_from_json(obj_get(c, "image_tau_lb")?)?,
                root_member1: rational_from_json(obj_get(c, "root_member1")?)?,
                root_member2: rational_from_json(obj_get(c, "root_member2")?)?,
                chain,
            }))
        }
        other => Err(format!("bad vertex origin {other}")),
    }
}

pub fn tree_to_json(
    k1: &CantorSpec,
    k2: &CantorSpec,
    placement: &TreePlacement,
    tol: &Rational,
) -> Value {
    json!({
        "kind": "tree",
        "k1": spec_to_json(k1),
        "k2": spec_to_json(k2),
        "t": {"sq": rational_to_json(&placement.t_sq)},
        "tol": rational_to_json(tol),
        "parents": placement.parents
            .iter()
            .map(|p| p.map(|p| json!(p)).unwrap_or(Value::Null))
            .collect::<Vec<_>>(),
        "vertices": placement.vertices.iter().map(|p| json!({
            "box1": enclosure_to_json(&p.box1),
            "box2": enclosure_to_json(&p.box2),
        })).collect::<Vec<_>>(),
        "origins": placement.origins.iter().map(origin_to_json).collect::<Vec<_>>(),
        "seed": {
            "x1": enclosure_to_json(&placement.seed.x1),
            "x2": rational_to_json(&placement.seed.x2),
            "y1": enclosure_to_json(&placement.seed.y1),
            "y2": rational_to_json(&placement.seed.y2),
            "r": rational_to_json(&placement.seed.r),
            "chain": intersection_to_json(k1, k1, &placement.seed.cert),
        },
    })
}

pub fn tree_from_json(v: &Value) -> FmtResult<(CantorSpec, CantorSpec, TreePlacement, Rational)> {
    let k1 = spec_from_json(obj_get(v, "k1")?)?;
    let k2 = spec_from_json(obj_get(v, "k2")?)?;
    let t_sq = rational_from_json(obj_get(obj_get(v, "t")?, "sq")?)?;
    let tol = rational_from_json(obj_get(v, "tol")?)?;
    let parents = obj_get(v, "parents")?
        .as_array()
        .ok_or_else(|| "parents must be an array".to_string())?
        .iter()
        .map(|p| match p {
            Value::Null => Ok(None),
            n => n.as_u64().map(|n| Some(n as usize)).ok_or_else(|| "bad parent".to_string()),
        })
        .collect::<FmtResult<Vec<_>>>()?;
    let vertices = obj_get(v, "vertices")?
        .as_array()
        .ok_or_else(|| "vertices must be an array".to_string())?
        .iter()
        .map(|p| {
            Ok(PlanarPoint {
                box1: enclosure_from_json(obj_get(p, "box1")?)?,
                box2: enclosure_from_json(obj_get(p, "box2")?)?,
            })
        })
        .collect::<FmtResult<Vec<_>>>()?;
    let origins = obj_get(v, "origins")?
        .as_array()
        .ok_or_else(|| "origins must be an array".to_string())?
        .iter()
        .map(origin_from_json)
        .collect::<FmtResult<Vec<_>>>()?;
    let seed_v = obj_get(v, "seed")?;
    let (_, _, chain) = intersection_from_json(obj_get(seed_v, "chain")?)?;
    let seed = SpecialPair {
        x1: enclosure_from_json(obj_get(seed_v, "x1")?)?,
        x2: rational_from_json(obj_get(seed_v, "x2")?)?,
        y1: enclosure_from_json(obj_get(seed_v, "y1")?)?,
        y2: rational_from_json(obj_get(seed_v, "y2")?)?,
        r: rational_from_json(obj_get(seed_v, "r")?)?,
        cert: chain,
    };
    Ok((k1, k2, TreePlacement { t_sq, parents, vertices, origins, seed }, tol))
}

/// Replay any certificate document; `Err` carries the first failure.
pub fn replay(v: &Value, precision: u32) -> Result<(), String> {
    match obj_get(v, "kind")?.as_str() {
        Some("intersection") => {
            let (k1, k2, cert) = intersection_from_json(v)?;
            verify_chain(&k1, &k2, &cert).map_err(|e| e.to_string())
        }
        Some("window") => replay_window(&window_from_json(v)?, precision),
        Some("tree") => {
            let (k1, k2, placement, tol) = tree_from_json(v)?;
            verify_placement(&k1, &k2, &placement).map_err(|e| e.to_string())?;
            let report = verify_tree(&placement, &tol);
            if report.pass {
                Ok(())
            } else {
                Err(report.failures.join("; "))
            }
        }
        other => Err(format!("unknown certificate kind {other:?}")),
    }
}
