//! Acceptance gate: eleven end-to-end criteria with pinned tolerances and
//! wall-clock budgets. Each test prints exactly one PASS/FAIL line.

use std::process::Command;
use std::time::{Duration, Instant};

use num_traits::Signed;

use cantor_forge_core::cantor::{Classification, EndpointStatus};
use cantor_forge_core::circlemap::{choose_window, map_pieces, Branch, CircleMap};
use cantor_forge_core::scalar::{int, ratio};
use cantor_forge_core::thickness::{
    check_hky, check_newhouse, hausdorff_lower_bound, thickness, thickness_windowed,
};
use cantor_forge_core::tree::{
    build_tree, diagonal_window, verify_placement, verify_tree, TStarStream, TreeSpec,
    WidthSchedule,
};
use cantor_forge_core::{CantorSpec, Rational, SubCantor};

fn r(n: i64, d: i64) -> Rational {
    ratio(n, d)
}

fn mid(alpha_n: i64, alpha_d: i64) -> CantorSpec {
    CantorSpec::middle_alpha(&r(alpha_n, alpha_d)).expect("valid alpha")
}

/// Report one criterion: print the single PASS/FAIL line, then fail the test
/// on any recorded problem or a blown time budget.
fn conclude(number: u32, name: &str, limit: Duration, start: Instant, failures: Vec<String>) {
    let elapsed = start.elapsed();
    let pass = failures.is_empty() && elapsed <= limit;
    println!(
        "{} criterion {number} ({name}): {:.2}s of {:.0}s budget",
        if pass { "PASS" } else { "FAIL" },
        elapsed.as_secs_f64(),
        limit.as_secs_f64(),
    );
    assert!(
        failures.is_empty(),
        "criterion {number} ({name}) failed:\n{}",
        failures.join("\n")
    );
    assert!(elapsed <= limit, "criterion {number} ({name}) exceeded its {limit:?} budget");
}

/// Deterministic xorshift64* generator for the randomized criteria.
struct Rng(u64);

impl Rng {
    fn next(&mut self) -> u64 {
        let mut x = self.0;
        x ^= x >> 12;
        x ^= x << 25;
        x ^= x >> 27;
        self.0 = x;
        x.wrapping_mul(0x2545F4914F6CDD1D)
    }

    /// Uniform integer in `[1, n]`.
    fn upto(&mut self, n: u64) -> i64 {
        (self.next() % n + 1) as i64
    }
}

/// Brute-force thickness of a finite union of closed intervals: minimum over
/// internal gap endpoints of bridge length over gap length, where a bridge
/// runs to the near end of the first gap at least as long as the reference
/// gap, or to the end of the union. Returns None without two pieces.
fn brute_thickness(intervals: &[(Rational, Rational)]) -> Option<Rational> {
    let mut pieces: Vec<(Rational, Rational)> = intervals.to_vec();
    pieces.sort_by(|a, b| a.0.cmp(&b.0));
    let mut merged: Vec<(Rational, Rational)> = Vec::new();
    for p in pieces {
        match merged.last_mut() {
            Some(last) if p.0 <= last.1 => {
                if p.1 > last.1 {
                    last.1 = p.1;
                }
            }
            _ => merged.push(p),
        }
    }
    if merged.len() < 2 {
        return None;
    }
    let gaps: Vec<(Rational, Rational)> =
        merged.windows(2).map(|w| (w[0].1.clone(), w[1].0.clone())).collect();
    let glen = |g: &(Rational, Rational)| &g.1 - &g.0;
    let mut min: Option<Rational> = None;
    for (i, g) in gaps.iter().enumerate() {
        let len = glen(g);
        // Bridge to the left of the gap's left endpoint.
        let mut far_left = merged[0].0.clone();
        for h in gaps[..i].iter().rev() {
            if glen(h) >= len {
                far_left = h.1.clone();
                break;
            }
        }
        // Bridge to the right of the gap's right endpoint.
        let mut far_right = merged.last().unwrap().1.clone();
        for h in &gaps[i + 1..] {
            if glen(h) >= len {
                far_right = h.0.clone();
                break;
            }
        }
        for v in [(&g.0 - far_left) / &len, (far_right - &g.1) / &len] {
            if min.as_ref().map(|m| &v < m).unwrap_or(true) {
                min = Some(v);
            }
        }
    }
    min
}

#[test]
fn criterion_01_closed_form_thickness() {
    let start = Instant::now();
    let mut failures = Vec::new();
    for (n, d) in [(1i64, 3i64), (1, 4), (1, 6), (1, 10)] {
        let alpha = r(n, d);
        let expected = (Rational::from_integer(1.into()) - &alpha) / (r(2, 1) * &alpha);
        let report = thickness(&mid(n, d)).expect("thickness computes");
        if report.value() != Some(&expected) {
            failures.push(format!("middle-{n}/{d}: got {:?}, want {expected}", report.value()));
        }
    }
    conclude(1, "closed-form thickness", Duration::from_secs(1), start, failures);
}

#[test]
fn criterion_02_condition_classification() {
    let start = Instant::now();
    let mut failures = Vec::new();
    let t6 = thickness(&mid(1, 6)).unwrap().value().unwrap().clone();
    let t4 = thickness(&mid(1, 4)).unwrap().value().unwrap().clone();
    if t6 != r(5, 2) || t4 != r(3, 2) {
        failures.push(format!("unexpected thickness values {t6}, {t4}"));
    }
    if !check_hky(&t6, &t6).unwrap().satisfied {
        failures.push("middle-1/6 self-pair must satisfy the HKY condition".into());
    }
    if !check_newhouse(&t6, &t6).unwrap() {
        failures.push("middle-1/6 self-pair must satisfy the Newhouse condition".into());
    }
    if check_hky(&t4, &t4).unwrap().satisfied {
        failures.push("middle-1/4 self-pair must fail the HKY condition".into());
    }
    if !check_newhouse(&t4, &t4).unwrap() {
        failures.push("middle-1/4 self-pair must satisfy the Newhouse condition".into());
    }
    conclude(2, "condition classification", Duration::from_secs(1), start, failures);
}

#[test]
fn criterion_03_condition_properties() {
    let start = Instant::now();
    let mut failures = Vec::new();
    let mut rng = Rng(0x9E3779B97F4A7C15);
    let hky_sym = |a: &Rational, b: &Rational| {
        let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
        check_hky(hi, lo).unwrap().satisfied
    };
    let threshold = r(2415, 1000);
    for case in 0..10_000u32 {
        let t1 = r(1, 1) + r(rng.upto(450), rng.upto(100));
        let t2 = r(1, 1) + r(rng.upto(450), rng.upto(100));
        let base = hky_sym(&t1, &t2);
        // Monotonicity: enlarging either thickness preserves the condition.
        if base {
            let u1 = &t1 + r(rng.upto(40), rng.upto(40));
            let u2 = &t2 + r(rng.upto(40), rng.upto(40));
            if !hky_sym(&u1, &u2) {
                failures.push(format!("case {case}: monotonicity broken at ({u1}, {u2})"));
            }
            if &t1 * &t2 <= int(5) {
                failures.push(format!("case {case}: HKY with product <= 5 at ({t1}, {t2})"));
            }
        }
        // Rationals above 2415/1000 > 1 + sqrt(2) always satisfy HKY.
        let s1 = &threshold + r(rng.upto(200), rng.upto(100));
        let s2 = &threshold + r(rng.upto(200), rng.upto(100));
        if !hky_sym(&s1, &s2) {
            failures.push(format!("case {case}: HKY must hold at ({s1}, {s2})"));
        }
        if failures.len() > 5 {
            break;
        }
    }
    conclude(3, "HKY remark properties, 10^4 pairs", Duration::from_secs(10), start, failures);
}

#[test]
fn criterion_04_restriction_example() {
    let start = Instant::now();
    let mut failures = Vec::new();
    let k = mid(1, 3);
    let window = (r(2, 9), r(7, 9));
    let sub = SubCantor::new(k.clone(), window.clone()).expect("valid window");
    let report = thickness_windowed(&sub).expect("windowed thickness computes");
    if report.value() != Some(&r(1, 3)) {
        failures.push(format!("windowed thickness: got {:?}, want 1/3", report.value()));
    }
    let clipped = k.refine(8).expect("depth-8 refinement").clip(&window);
    match brute_thickness(&clipped.pieces) {
        Some(v) if v == r(1, 3) => {}
        other => failures.push(format!("depth-8 oracle: got {other:?}, want 1/3")),
    }
    conclude(4, "middle-third restriction = 1/3", Duration::from_secs(1), start, failures);
}

/// Non-endpoint member of the cylinder at `path`: the copy of the fixed
/// point of the two-digit substitution 0,1 (its address is periodic and
/// never locks onto a child boundary).
fn periodic_member(spec: &CantorSpec, path: &[u32]) -> Rational {
    let hull = spec.hull();
    let c01 = spec.cylinder(&[0, 1]).expect("two-digit cylinder");
    let s = (&c01.1 - &c01.0) / spec.hull_len();
    let fixed = (&c01.0 - &s * &hull.0) / (Rational::from_integer(1.into()) - &s);
    let cyl = spec.cylinder(path).expect("valid path");
    &cyl.0 + (&cyl.1 - &cyl.0) * (fixed - &hull.0) / spec.hull_len()
}

#[test]
fn criterion_05_bubble_window_suite() {
    let start = Instant::now();
    let mut failures = Vec::new();
    let mut rng = Rng(0xC0FFEE123456789);
    for case in 0..100u32 {
        let spec = match rng.upto(3) {
            1 => mid(1, 3 + rng.upto(12)),
            2 => mid(2, 7 + rng.upto(12)),
            _ => {
                // Asymmetric two-child spec with integer proportions.
                let (a, g, b) = (rng.upto(6), rng.upto(4), rng.upto(6));
                let total = a + g + b;
                CantorSpec::new(
                    (r(0, 1), r(1, 1)),
                    vec![(r(0, 1), r(a, total)), (r(a + g, total), r(b, total))],
                )
                .unwrap()
            }
        };
        let depth = rng.upto(3) as usize;
        let path: Vec<u32> = (0..depth).map(|_| (rng.upto(2) - 1) as u32).collect();
        let cyl = spec.cylinder(&path).unwrap();
        let x = match rng.upto(3) {
            1 => cyl.0.clone(),
            2 => cyl.1.clone(),
            _ => periodic_member(&spec, &path),
        };
        let w = spec.hull_len() / Rational::from_integer((1i64 << rng.upto(4)).into());
        let interval = (&x - &w, &x + &w);
        let status_of = |s: &CantorSpec, p: &Rational| match s.classify(p, 64) {
            Classification::Inside { endpoint, .. } => endpoint,
            Classification::Outside { .. } => panic!("member classified outside"),
        };
        let before = status_of(&spec, &x);
        let sub = match cantor_forge_core::circlemap::bubble_window(&spec, &x, &interval, 64) {
            Ok(s) => s,
            Err(e) => {
                failures.push(format!("case {case}: bubble_window failed: {e}"));
                continue;
            }
        };
        let j = sub.window().clone();
        if !(j.0 <= x && x <= j.1) {
            failures.push(format!("case {case}: window does not contain x"));
            continue;
        }
        let tau = thickness(&spec).unwrap().value().unwrap().clone();
        match thickness_windowed(&sub) {
            Ok(rep) if rep.lower >= tau => {}
            Ok(rep) => failures.push(format!(
                "case {case}: restricted thickness {} below {tau}",
                rep.lower
            )),
            Err(e) => failures.push(format!("case {case}: windowed thickness failed: {e}")),
        }
        // Endpoint status must be preserved by the restriction: gaps of the
        // restriction are gaps of the set, so only the window cuts matter.
        match before {
            EndpointStatus::NonEndpoint { .. } => {
                if x == j.0 || x == j.1 {
                    failures.push(format!("case {case}: non-endpoint became a window endpoint"));
                }
            }
            _ => {
                if !matches!(
                    status_of(&spec, &x),
                    EndpointStatus::GapEndpoint { .. } | EndpointStatus::HullEndpoint
                ) {
                    failures.push(format!("case {case}: endpoint status changed"));
                }
            }
        }
        if failures.len() > 5 {
            break;
        }
    }
    conclude(5, "bubble window suite, 100 cases", Duration::from_secs(30), start, failures);
}

#[test]
fn criterion_06_circle_window_images() {
    let start = Instant::now();
    let mut failures = Vec::new();
    let mut rng = Rng(0xDEADBEEFCAFE42);
    for case in 0..50u32 {
        let spec = mid(1, 3 + rng.upto(9));
        let depth = rng.upto(3) as usize;
        let path: Vec<u32> = (0..depth).map(|_| (rng.upto(2) - 1) as u32).collect();
        let cyl = spec.cylinder(&path).unwrap();
        let x1 = if rng.upto(2) == 1 { cyl.0.clone() } else { cyl.1.clone() };
        let d = r(1, 2) + r(rng.upto(10), 40);
        let center = (&x1 - &d, r(0, 1));
        let t_sq = &d * &d + r(rng.upto(8), 16);
        let map = CircleMap::new(center, t_sq, Branch::Upper).unwrap();
        let cert = match choose_window(&spec, &x1, &map, &r(1, 2), 64) {
            Ok(c) => c,
            Err(e) => {
                failures.push(format!("case {case}: choose_window failed: {e}"));
                continue;
            }
        };
        let clipped = spec.refine(10).unwrap().clip(&cert.window);
        let mapped = match map_pieces(&map, &clipped.pieces, 120) {
            Ok(m) => m,
            Err(e) => {
                failures.push(format!("case {case}: map_pieces failed: {e}"));
                continue;
            }
        };
        let intervals: Vec<(Rational, Rational)> =
            mapped.into_iter().map(|e| (e.lo, e.hi)).collect();
        // Truncation slack: outward rounding of the 120-bit image enclosures
        // can only fatten pieces, so a relative 2^-30 cushion is ample.
        let slack = &cert.image_thickness_lb / Rational::from_integer((1i64 << 30).into());
        let floor = &cert.image_thickness_lb - slack;
        if let Some(v) = brute_thickness(&intervals) {
            if v < floor {
                failures.push(format!(
                    "case {case}: image approximant thickness {v} below bound {floor}"
                ));
            }
        }
        if failures.len() > 5 {
            break;
        }
    }
    conclude(6, "circle window image bound, 50 cases", Duration::from_secs(60), start, failures);
}

#[test]
fn criterion_07_hausdorff_bound() {
    let start = Instant::now();
    let mut failures = Vec::new();
    let tol = r(1, 1_000_000);
    let enc = hausdorff_lower_bound(&r(1, 1), &tol).expect("enclosure computes");
    let target = r(630_930, 1_000_000);
    if enc.width() > tol {
        failures.push(format!("enclosure width {} exceeds 1e-6", enc.width()));
    }
    if (enc.midpoint() - &target).abs() > tol {
        failures.push(format!("log2/log3 enclosure strays from {target}"));
    }
    let half = hausdorff_lower_bound(&r(1, 2), &tol).expect("enclosure computes");
    if !half.is_point() || half.lo != r(1, 2) {
        failures.push(format!("tau = 1/2 must give exactly 1/2, got [{}, {}]", half.lo, half.hi));
    }
    conclude(7, "Hausdorff dimension bound", Duration::from_secs(1), start, failures);
}

#[test]
fn criterion_08_intersection_certificate() {
    let start = Instant::now();
    let mut failures = Vec::new();
    let dir = tempfile::tempdir().expect("tempdir");
    let spec_a = dir.path().join("a.json");
    let spec_b = dir.path().join("b.json");
    let cert = dir.path().join("cert.json");
    std::fs::write(&spec_a, r#"{"middle_alpha":"1/4"}"#).unwrap();
    std::fs::write(
        &spec_b,
        r#"{"hull":["1/5","6/5"],"children":[["0","3/8"],["5/8","3/8"]]}"#,
    )
    .unwrap();
    let bin = env!("CARGO_BIN_EXE_cantor-forge");
    let out = Command::new(bin)
        .args(["intersect"])
        .arg(&spec_a)
        .arg(&spec_b)
        .args(["--width", "1/1000000", "--mode", "newhouse", "--cert"])
        .arg(&cert)
        .output()
        .expect("intersect runs");
    if !out.status.success() {
        failures.push(format!("intersect exited {:?}", out.status.code()));
    }
    let replay = Command::new(bin).arg("replay").arg(&cert).output().expect("replay runs");
    if replay.status.code() != Some(0) {
        failures.push(format!("replay exited {:?}", replay.status.code()));
    }
    // Pull the certified box back out of the certificate.
    let doc: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&cert).unwrap()).unwrap();
    let bound = |i: usize| -> Rational {
        doc["box"][i].as_str().unwrap().parse().expect("rational bound")
    };
    let (lo, hi) = (bound(0), bound(1));
    if &hi - &lo > r(1, 1_000_000) {
        failures.push(format!("certified box wider than 1e-6: [{lo}, {hi}]"));
    }
    // The box must meet the brute-force depth-12 approximant intersection.
    let k = mid(1, 4);
    let shifted = k.affine_image(&r(1, 1), &r(1, 5)).unwrap();
    let pa = k.refine(12).unwrap().pieces;
    let pb = shifted.refine(12).unwrap().pieces;
    let meets = pa.iter().any(|a| {
        a.1 >= lo
            && a.0 <= hi
            && pb.iter().any(|b| {
                let olo = a.0.clone().max(b.0.clone()).max(lo.clone());
                let ohi = a.1.clone().min(b.1.clone()).min(hi.clone());
                olo <= ohi
            })
    });
    if !meets {
        failures.push("certified box misses the depth-12 brute-force intersection".into());
    }
    conclude(8, "intersection certificate replay", Duration::from_secs(10), start, failures);
}

fn seed_points() -> ((Rational, Rational), (Rational, Rational)) {
    ((r(25, 144), r(25, 144)), (r(7, 12), r(7, 12)))
}

fn schedule() -> WidthSchedule {
    WidthSchedule { base_bits: 104, step_bits: 12 }
}

#[test]
fn criterion_09_end_to_end_trees() {
    let start = Instant::now();
    let mut failures = Vec::new();
    let k = mid(1, 6);
    let (x, y) = seed_points();
    let tol = r(1, 1_000_000_000);
    let chain = TreeSpec::Explicit { parents: vec![None, Some(0), Some(1), Some(2)] };
    let tstar = TreeSpec::TStar { branching: 3, depth: 2 };
    for (name, tree, vertices) in [("4-vertex chain", &chain, 4usize), ("T* b=3 d=2", &tstar, 13)]
    {
        match build_tree(&k, &k, tree, &x, &y, schedule()) {
            Ok(placement) => {
                if placement.vertices.len() != vertices {
                    failures.push(format!("{name}: wrong vertex count"));
                }
                let report = verify_tree(&placement, &tol);
                if !report.pass {
                    failures.push(format!("{name}: verify_tree failed: {:?}", report.failures));
                }
                if let Err(e) = verify_placement(&k, &k, &placement) {
                    failures.push(format!("{name}: certificate replay failed: {e}"));
                }
                // Determinism across reruns.
                match build_tree(&k, &k, tree, &x, &y, schedule()) {
                    Ok(again) if again == placement => {}
                    Ok(_) => failures.push(format!("{name}: rebuild differs")),
                    Err(e) => failures.push(format!("{name}: rebuild failed: {e}")),
                }
            }
            Err(e) => failures.push(format!("{name}: build failed: {e}")),
        }
    }
    conclude(9, "end-to-end tree builds", Duration::from_secs(120), start, failures);
}

#[test]
fn criterion_10_streaming_tree() {
    let start = Instant::now();
    let mut failures = Vec::new();
    let k = mid(1, 6);
    let (x, y) = seed_points();
    let tol = r(1, 1_000_000_000);
    let mut stream = TStarStream::new(&k, &k, &x, &y, 50, schedule()).expect("stream starts");
    let mut first = Vec::new();
    loop {
        match stream.next_vertex() {
            Ok(Some(v)) => first.push(v),
            Ok(None) => break,
            Err(e) => {
                failures.push(format!("stream failed after {} vertices: {e}", first.len()));
                break;
            }
        }
    }
    if first.len() != 50 {
        failures.push(format!("expected 50 streamed vertices, got {}", first.len()));
    }
    let report = verify_tree(stream.placement(), &tol);
    if !report.pass {
        failures.push(format!("verify_tree failed on the streamed subtree: {:?}", report.failures));
    }
    if let Err(e) = verify_placement(&k, &k, stream.placement()) {
        failures.push(format!("streamed certificate replay failed: {e}"));
    }
    // Resume from a checkpoint: an independent stream must reproduce the
    // identical suffix after skipping the already-seen prefix.
    let mut resumed = TStarStream::new(&k, &k, &x, &y, 50, schedule()).expect("stream restarts");
    for skipped in 0..30 {
        match resumed.next_vertex() {
            Ok(Some(v)) => {
                if v != first[skipped] {
                    failures.push(format!("vertex {skipped} differs on resume"));
                }
            }
            other => failures.push(format!("resume broke at vertex {skipped}: {other:?}")),
        }
    }
    for tail in 30..50 {
        match resumed.next_vertex() {
            Ok(Some(v)) => {
                if v != first[tail] {
                    failures.push(format!("resumed vertex {tail} differs"));
                }
            }
            other => failures.push(format!("resume broke at vertex {tail}: {other:?}")),
        }
    }
    conclude(10, "streaming universal tree, 50 vertices", Duration::from_secs(300), start, failures);
}

#[test]
fn criterion_11_interior_evidence() {
    let start = Instant::now();
    let mut failures = Vec::new();
    let k = mid(1, 6);
    let (x, y) = seed_points();
    let chain = TreeSpec::Explicit { parents: vec![None, Some(0), Some(1), Some(2)] };
    match diagonal_window(&k, &k, &chain, &x, &y, 25, schedule()) {
        Ok(outcomes) => {
            if outcomes.len() != 25 {
                failures.push(format!("expected 25 samples, got {}", outcomes.len()));
            }
            for (i, o) in outcomes.iter().enumerate() {
                if !o.ok {
                    failures.push(format!("sample {i} (t^2 = {}) failed: {}", o.t_sq, o.detail));
                }
            }
        }
        Err(e) => failures.push(format!("diagonal sampling failed: {e}")),
    }
    conclude(11, "interior evidence, 25 sampled distances", Duration::from_secs(1800), start, failures);
}
