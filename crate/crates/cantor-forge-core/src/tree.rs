//! Constant-gap-length tree construction inside the product of two thick
//! Cantor sets: seed edge, star expansion about a placed vertex, level
//! recursion over finite trees, streaming enumeration of the universal
//! countable tree, verification, and distance-set window sampling.
//!
//! Vertices are not exact points: each one is a pair of tiny coordinate
//! boxes together with a certificate that a true point of the product lies in
//! the box at exact distance `t` from its parent's true point. New vertices
//! are found on the circle of radius `t` about the parent by intersecting the
//! circle-map image of a small first-coordinate window with the second set;
//! every interval computation is outward-rounded over the parent's coordinate
//! boxes, so the certificate holds for the true (unknown) parent position.
//!
//! Precision is scheduled by tree level: the root box is extremely tight and
//! every generation is allowed a fixed factor more slack, which keeps the
//! parent-box uncertainty negligible against the margins of its children's
//! interval tests — no cascading refinement of already-placed vertices is
//! ever needed.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use num_traits::{One, Signed, Zero};

use crate::cantor::CantorSpec;
use crate::circlemap::Branch;
use crate::error::{Error, Result};
use crate::intersect::{special_pair_for_distance, SpecialPair};
use crate::scalar::{pow2_inv, sqrt_enclosure, Enclosure, Rational};
use crate::thickness::{check_hky, eps_thickness_pure, hky_for_all_first_at_least, thickness};

/// Axis-aligned planar box with certified coordinate enclosures.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rect {
    pub x: Enclosure,
    pub y: Enclosure,
}

impl Rect {
    pub fn intersects(&self, other: &Rect) -> bool {
        self.x.intersects(&other.x) && self.y.intersects(&other.y)
    }

    pub fn contains(&self, other: &Rect) -> bool {
        self.x.contains_interval(&other.x) && self.y.contains_interval(&other.y)
    }
}

/// The tree to be embedded: an explicit parent array, or a truncation of the
/// universal tree of all finite positive-integer sequences.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TreeSpec {
    Explicit { parents: Vec<Option<usize>> },
    TStar { branching: u32, depth: u32 },
}

impl TreeSpec {
    /// Parent array in placement order (vertex 0 is the root, every parent
    /// precedes its children).
    pub fn parents(&self) -> Result<Vec<Option<usize>>> {
        match self {
            TreeSpec::Explicit { parents } => {
                if parents.is_empty() || parents[0].is_some() {
                    return Err(Error::InvalidParameter(
                        "vertex 0 must be the root (parent null)".to_string(),
                    ));
                }
                for (v, p) in parents.iter().enumerate().skip(1) {
                    match p {
                        Some(p) if *p < v => {}
                        _ => {
                            return Err(Error::InvalidParameter(format!(
                                "vertex {v} must have a parent with a smaller id"
                            )));
                        }
                    }
                }
                Ok(parents.clone())
            }
            TreeSpec::TStar { branching, depth } => {
                if *branching < 1 || *depth < 1 {
                    return Err(Error::InvalidParameter(
                        "branching and depth must be at least 1".to_string(),
                    ));
                }
                let mut parents = vec![None];
                let mut level_start = 0usize;
                let mut level_len = 1usize;
                for _ in 0..*depth {
                    let next_start = parents.len();
                    for p in level_start..level_start + level_len {
                        for _ in 0..*branching {
                            parents.push(Some(p));
                        }
                    }
                    level_start = next_start;
                    level_len = parents.len() - next_start;
                }
                Ok(parents)
            }
        }
    }

    /// Tree level of every vertex (root at 0).
    pub fn levels(&self) -> Result<Vec<u32>> {
        let parents = self.parents()?;
        let mut levels = vec![0u32; parents.len()];
        for (v, p) in parents.iter().enumerate() {
            if let Some(p) = p {
                levels[v] = levels[*p] + 1;
            }
        }
        Ok(levels)
    }

    pub fn edges(&self) -> Result<Vec<(usize, usize)>> {
        Ok(self
            .parents()?
            .iter()
            .enumerate()
            .filter_map(|(v, p)| p.map(|p| (p, v)))
            .collect())
    }
}

/// The first `limit` vertices of the universal tree, enumerated by weight
/// (sequence length plus digit sum), lexicographically within a weight. The
/// empty sequence is the root and every parent precedes its children.
pub fn tstar_prefix(limit: usize) -> Vec<Vec<u32>> {
    fn compositions(sum: u32, parts: u32, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if parts == 1 {
            prefix.push(sum);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for first in 1..=sum - parts + 1 {
            prefix.push(first);
            compositions(sum - first, parts - 1, prefix, out);
            prefix.pop();
        }
    }
    let mut out = vec![Vec::new()];
    let mut weight = 2u32;
    while out.len() < limit {
        for parts in (1..=weight / 2).rev() {
            let sum = weight - parts;
            if sum >= parts {
                compositions(sum, parts, &mut Vec::new(), &mut out);
            }
        }
        out.sort_by_key(|s| {
            (s.len() as u32 + s.iter().sum::<u32>(), s.clone())
        });
        weight += 1;
    }
    out.truncate(limit);
    out
}

/// A placed vertex: coordinate boxes that contain a true point of the
/// product, at exact distance `t` from the parent's true point.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlanarPoint {
    pub box1: Enclosure,
    pub box2: Enclosure,
}

impl PlanarPoint {
    pub fn rect(&self) -> Rect {
        Rect { x: self.box1.clone(), y: self.box2.clone() }
    }
}

/// One level of a circle-descent chain: child indices taken in each set plus
/// the exact member witnesses of the interleaving of the image copy and the
/// second-set copy (valid for every parent position in its boxes).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CircleLevel {
    pub child1: u32,
    pub child2: u32,
    /// Member of the first set in the current first-coordinate cylinder whose
    /// image lies strictly inside the second-set cylinder.
    pub member1: Rational,
    /// Member of the second set in the current cylinder lying strictly inside
    /// the image of the first-coordinate cylinder.
    pub member2: Rational,
}

/// Replayable certificate for a star-expanded vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VertexCert {
    /// Vertex id of the circle center (the parent).
    pub center: usize,
    pub branch: Branch,
    /// Path from the hull to the anchor cylinder of the first set.
    pub anchor_path: Vec<u32>,
    /// Certified distortion bound of the circle map over the anchor cylinder,
    /// valid for every center position in the parent's boxes.
    pub distortion_eps: Rational,
    /// `(1 - eps) * tau_eps(K1)`: lower bound on the image thickness of every
    /// sub-cylinder copy.
    pub image_tau_lb: Rational,
    /// Interleaving witnesses for the anchor pair (anchor cylinder image
    /// against the second set's hull).
    pub root_member1: Rational,
    pub root_member2: Rational,
    pub chain: Vec<CircleLevel>,
}

/// How a vertex was placed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum VertexOrigin {
    SeedRoot,
    SeedChild,
    Star(VertexCert),
}

/// A full placement: one planar point per tree vertex, the exact squared gap
/// length, and the per-vertex certificates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TreePlacement {
    pub t_sq: Rational,
    pub parents: Vec<Option<usize>>,
    pub vertices: Vec<PlanarPoint>,
    pub origins: Vec<VertexOrigin>,
    pub seed: SpecialPair,
}

/// Per-level precision schedule: a vertex at tree level `L` gets coordinate
/// boxes of width at most `2^-(base_bits - step_bits * L)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WidthSchedule {
    pub base_bits: u32,
    pub step_bits: u32,
}

impl Default for WidthSchedule {
    fn default() -> Self {
        WidthSchedule { base_bits: 160, step_bits: 16 }
    }
}

impl WidthSchedule {
    pub fn bits_at(&self, level: u32) -> Result<u32> {
        let used = level.saturating_mul(self.step_bits);
        if used + 40 > self.base_bits {
            return Err(Error::DepthExhausted(format!(
                "tree level {level} exceeds the fixed precision schedule"
            )));
        }
        Ok(self.base_bits - used)
    }
}

/// Thickness condition backing a circle descent.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CircleMode {
    Hky,
    NewhouseOnly,
}

/// Interval-robust circle evaluation about a boxed center.
struct BoxedCircle<'a> {
    c1: &'a Enclosure,
    c2: &'a Enclosure,
    t_sq: &'a Rational,
    branch: Branch,
    bits: u32,
}

impl BoxedCircle<'_> {
    /// Enclosure of `g(s)` over every center position, or `None` when `s` is
    /// not provably inside the open domain.
    fn eval(&self, s: &Rational) -> Option<Enclosure> {
        let d = Enclosure::point(s.clone()).sub(self.c1);
        let ds = d.square();
        let disc_lo = self.t_sq - &ds.hi;
        if !disc_lo.is_positive() {
            return None;
        }
        let disc_hi = self.t_sq - &ds.lo;
        let root = Enclosure {
            lo: sqrt_enclosure(&disc_lo, self.bits).ok()?.lo,
            hi: sqrt_enclosure(&disc_hi, self.bits).ok()?.hi,
        };
        Some(match self.branch {
            Branch::Lower => self.c2.sub(&root),
            Branch::Upper => self.c2.add(&root),
        })
    }

    /// True when the interval lies strictly right of the center for every
    /// center position (the map is then monotone over it).
    fn strictly_right(&self, iv: &(Rational, Rational)) -> bool {
        iv.0 > self.c1.hi
    }

    fn strictly_left(&self, iv: &(Rational, Rational)) -> bool {
        iv.1 < self.c1.lo
    }

    fn increasing_on(&self, iv: &(Rational, Rational)) -> Option<bool> {
        if self.strictly_right(iv) {
            Some(self.branch == Branch::Lower)
        } else if self.strictly_left(iv) {
            Some(self.branch == Branch::Upper)
        } else {
            None
        }
    }

    /// Inner enclosure of the image hull of the interval: an interval that is
    /// contained in the true image hull for every center position. `None`
    /// when the inner interval is empty or the domain check fails.
    fn image_inner(&self, iv: &(Rational, Rational)) -> Option<Enclosure> {
        let increasing = self.increasing_on(iv)?;
        let ga = self.eval(&iv.0)?;
        let gb = self.eval(&iv.1)?;
        let (lo, hi) = if increasing { (ga.hi, gb.lo) } else { (gb.hi, ga.lo) };
        if lo <= hi {
            Some(Enclosure { lo, hi })
        } else {
            None
        }
    }

    /// Outer enclosure of the image hull (contains the true hull for every
    /// center position).
    fn image_outer(&self, iv: &(Rational, Rational)) -> Option<Enclosure> {
        self.increasing_on(iv)?;
        let ga = self.eval(&iv.0)?;
        let gb = self.eval(&iv.1)?;
        Some(Enclosure { lo: ga.lo.min(gb.lo), hi: ga.hi.max(gb.hi) })
    }

    /// Distortion bound over the interval, valid for every center position.
    fn distortion(&self, iv: &(Rational, Rational)) -> Option<Rational> {
        let (d0, d1) = if self.strictly_right(iv) {
            (&iv.0 - &self.c1.hi, &iv.1 - &self.c1.lo)
        } else if self.strictly_left(iv) {
            (&self.c1.lo - &iv.1, &self.c1.hi - &iv.0)
        } else {
            return None;
        };
        if !d0.is_positive() {
            return None;
        }
        let d0_sq = &d0 * &d0;
        let d1_sq = &d1 * &d1;
        if &d1_sq >= self.t_sq {
            return None;
        }
        let ratio = (&d1_sq / &d0_sq) * ((self.t_sq - &d0_sq) / (self.t_sq - &d1_sq));
        let root = sqrt_enclosure(&ratio, 64).ok()?;
        Some(&root.hi - Rational::one())
    }
}

/// Depth cap for adaptive witness searches. Kept safely below the
/// classification budget used when certificates are replayed, so every
/// witness found here is recognized as a member on verification.
const WITNESS_DEPTH: u32 = 48;

/// Exact member of the set's copy of `cyl` lying strictly inside the open
/// interval `(lo, hi)`: descend only the cylinders that meet the interval
/// until an endpoint lands inside. Cylinders that meet the interval without
/// an endpoint inside must span it entirely, so the search follows a single
/// chain and fails quickly when the interval sits inside a gap.
fn member_within(
    spec: &CantorSpec,
    cyl: &(Rational, Rational),
    lo: &Rational,
    hi: &Rational,
) -> Option<Rational> {
    if lo >= hi {
        return None;
    }
    let mut stack = vec![(cyl.clone(), 0u32)];
    while let Some((c, depth)) = stack.pop() {
        for e in [&c.0, &c.1] {
            if *e > *lo && *e < *hi {
                return Some(e.clone());
            }
        }
        if depth >= WITNESS_DEPTH {
            continue;
        }
        for i in (0..spec.child_count()).rev() {
            let ch = spec.child_interval(&c, i);
            if ch.1 > *lo && ch.0 < *hi {
                stack.push((ch, depth + 1));
            }
        }
    }
    None
}

/// Exact member of the first set's copy of `cyl1` whose image is strictly
/// inside `(lo, hi)` for every center position in its boxes. Subtrees whose
/// outward-rounded image misses the interval are pruned.
fn member_mapped_within(
    k1: &CantorSpec,
    bc: &BoxedCircle<'_>,
    cyl1: &(Rational, Rational),
    lo: &Rational,
    hi: &Rational,
) -> Option<Rational> {
    let mut stack = vec![(cyl1.clone(), 0u32)];
    let mut budget = 512u32;
    while let Some((c, depth)) = stack.pop() {
        if budget == 0 {
            return None;
        }
        budget -= 1;
        for e in [&c.0, &c.1] {
            if let Some(img) = bc.eval(e) {
                if img.lo > *lo && img.hi < *hi {
                    return Some(e.clone());
                }
            }
        }
        if depth >= WITNESS_DEPTH {
            continue;
        }
        for i in (0..k1.child_count()).rev() {
            let ch = k1.child_interval(&c, i);
            if let Some(outer) = bc.image_outer(&ch) {
                if outer.hi > *lo && outer.lo < *hi {
                    stack.push((ch, depth + 1));
                }
            }
        }
    }
    None
}

/// Robust interleaving of the image of a first-set cylinder with a second-set
/// cylinder: an exact member of each set witnessing, for every center
/// position, that each copy meets the interior of the other's hull.
fn robust_interleave(
    k1: &CantorSpec,
    k2: &CantorSpec,
    bc: &BoxedCircle<'_>,
    cyl1: &(Rational, Rational),
    cyl2: &(Rational, Rational),
) -> Option<(Rational, Rational)> {
    let outer = bc.image_outer(cyl1)?;
    if outer.hi <= cyl2.0 || outer.lo >= cyl2.1 {
        return None;
    }
    let m1 = member_mapped_within(k1, bc, cyl1, &cyl2.0, &cyl2.1)?;
    let inner = bc.image_inner(cyl1)?;
    let m2 = member_within(k2, cyl2, &inner.lo, &inner.hi)?;
    Some((m1, m2))
}

struct DescentOutcome {
    chain: Vec<CircleLevel>,
    cyl1: (Rational, Rational),
    cyl2: (Rational, Rational),
}

/// Joint descent of a first-set cylinder (through the circle map) and a
/// second-set cylinder, keeping the pair interleaved for every center
/// position, until both cylinders are narrower than the target and the
/// resulting planar box avoids every rectangle in `avoid`.
fn circle_descent(
    k1: &CantorSpec,
    k2: &CantorSpec,
    bc: &BoxedCircle<'_>,
    start1: (Rational, Rational),
    start2: (Rational, Rational),
    target: &Rational,
    avoid: &[Rect],
    depth_budget: u32,
) -> Result<DescentOutcome> {
    struct Frame {
        cyl1: (Rational, Rational),
        cyl2: (Rational, Rational),
        candidates: Vec<(Option<u32>, Option<u32>, Rational, Rational)>,
        next: usize,
    }

    let width = |c: &(Rational, Rational)| &c.1 - &c.0;

    let moves = |cyl1: &(Rational, Rational), cyl2: &(Rational, Rational)| {
        // Descend the wider cylinder; on (near-)ties offer both sides.
        let w1 = width(cyl1);
        let w2 = width(cyl2);
        let mut opts: Vec<(Option<usize>, Option<usize>)> = Vec::new();
        let descend1 = w1 >= w2;
        let descend2 = w2 >= w1 * ratio_half();
        if descend1 {
            for i in 0..k1.child_count() {
                opts.push((Some(i), None));
            }
        }
        if descend2 || !descend1 {
            for j in 0..k2.child_count() {
                opts.push((None, Some(j)));
            }
        }
        let mut out = Vec::new();
        for (i, j) in opts {
            let c1 = i.map(|i| k1.child_interval(cyl1, i)).unwrap_or_else(|| cyl1.clone());
            let c2 = j.map(|j| k2.child_interval(cyl2, j)).unwrap_or_else(|| cyl2.clone());
            let rect = Rect {
                x: Enclosure { lo: c1.0.clone(), hi: c1.1.clone() },
                y: Enclosure { lo: c2.0.clone(), hi: c2.1.clone() },
            };
            if avoid.iter().any(|a| a.contains(&rect)) {
                continue;
            }
            if let Some((m1, m2)) = robust_interleave(k1, k2, bc, &c1, &c2) {
                out.push((
                    i.map(|i| i as u32),
                    j.map(|j| j as u32),
                    m1,
                    m2,
                    width(&c1).min(width(&c2)),
                ));
            }
        }
        out.sort_by(|a, b| b.4.cmp(&a.4).then(a.0.cmp(&b.0)).then(a.1.cmp(&b.1)));
        out.into_iter().map(|(i, j, m1, m2, _)| (i, j, m1, m2)).collect::<Vec<_>>()
    };

    let mut stack = vec![Frame {
        candidates: moves(&start1, &start2),
        cyl1: start1,
        cyl2: start2,
        next: 0,
    }];
    let mut chain: Vec<CircleLevel> = Vec::new();
    let mut expanded: u64 = 0;
    loop {
        let top = stack.len() - 1;
        {
            let f = &stack[top];
            let rect = Rect {
                x: Enclosure { lo: f.cyl1.0.clone(), hi: f.cyl1.1.clone() },
                y: Enclosure { lo: f.cyl2.0.clone(), hi: f.cyl2.1.clone() },
            };
            if &width(&f.cyl1) <= target
                && &width(&f.cyl2) <= target
                && !avoid.iter().any(|a| a.intersects(&rect))
            {
                return Ok(DescentOutcome {
                    chain: chain.clone(),
                    cyl1: f.cyl1.clone(),
                    cyl2: f.cyl2.clone(),
                });
            }
        }
        expanded += 1;
        if expanded > 200_000 {
            return Err(Error::DepthExhausted(
                "circle descent exceeded its search budget".to_string(),
            ));
        }
        let within = stack.len() as u32 <= depth_budget;
        let choice = {
            let f = &mut stack[top];
            if within && f.next < f.candidates.len() {
                let c = f.candidates[f.next].clone();
                f.next += 1;
                Some(c)
            } else {
                None
            }
        };
        match choice {
            Some((i, j, m1, m2)) => {
                let cyl1 = i
                    .map(|i| k1.child_interval(&stack[top].cyl1, i as usize))
                    .unwrap_or_else(|| stack[top].cyl1.clone());
                let cyl2 = j
                    .map(|j| k2.child_interval(&stack[top].cyl2, j as usize))
                    .unwrap_or_else(|| stack[top].cyl2.clone());
                let candidates = moves(&cyl1, &cyl2);
                chain.push(CircleLevel {
                    child1: i.unwrap_or(KEEP),
                    child2: j.unwrap_or(KEEP),
                    member1: m1,
                    member2: m2,
                });
                stack.push(Frame { cyl1, cyl2, candidates, next: 0 });
            }
            None => {
                stack.pop();
                chain.pop();
                if stack.is_empty() {
                    return Err(Error::Exhausted(
                        "no interleaved cylinder pair survived the avoid set".to_string(),
                    ));
                }
            }
        }
    }
}

fn ratio_half() -> Rational {
    crate::scalar::ratio(1, 2)
}

/// Sentinel for a chain level that keeps one side's cylinder unchanged.
pub const KEEP: u32 = u32::MAX;

/// Seed the construction: turn a requested pair of product points into two
/// special vertices at their exact distance. Returns the root, its first
/// child, and the exact squared gap length.
pub fn seed_edge(
    k1: &CantorSpec,
    k2: &CantorSpec,
    x: &(Rational, Rational),
    y: &(Rational, Rational),
    bits: u32,
    depth_budget: u32,
) -> Result<(PlanarPoint, PlanarPoint, Rational, SpecialPair)> {
    let dx = &x.0 - &y.0;
    let dy = &x.1 - &y.1;
    let t_sq = &dx * &dx + &dy * &dy;
    if t_sq.is_zero() {
        return Err(Error::InvalidParameter("distinct seed points required".to_string()));
    }
    let pair = special_pair_for_distance(k1, k2, x, y, &pow2_inv(bits), depth_budget)?;
    let root = PlanarPoint { box1: pair.x1.clone(), box2: Enclosure::point(pair.x2.clone()) };
    let child = PlanarPoint { box1: pair.y1.clone(), box2: Enclosure::point(pair.y2.clone()) };
    Ok((root, child, t_sq, pair))
}

/// Expand `m` new vertices on the circle of squared radius `t_sq` about
/// `center`: each is certified to contain a special point of the product at
/// exact distance `t` from the center's true point, with boxes of width at
/// most `2^-bits`, pairwise disjoint and disjoint from every rectangle in
/// `used` (in particular sharing no coordinate with the center).
#[allow(clippy::too_many_arguments)]
pub fn expand_star(
    k1: &CantorSpec,
    k2: &CantorSpec,
    center: &PlanarPoint,
    center_id: usize,
    t_sq: &Rational,
    m: usize,
    used: &[Rect],
    used_anchors: &[(Rational, Rational)],
    bits: u32,
    mode: CircleMode,
) -> Result<Vec<(PlanarPoint, VertexCert)>> {
    if m == 0 {
        return Ok(Vec::new());
    }
    let tau1 = thickness(k1)?.upper;
    let tau2 = thickness(k2)?.upper;
    let target = pow2_inv(bits);
    let eval_bits = bits + 32;
    let max_eps = crate::scalar::ratio(1, 32);

    let mut found: Vec<(PlanarPoint, VertexCert)> = Vec::new();
    let mut anchors: Vec<(Rational, Rational)> = used_anchors.to_vec();
    let mut avoid: Vec<Rect> = used.to_vec();

    // When the condition already holds for the worst distortion the search
    // accepts, no per-anchor condition check is needed (`tau_eps >= tau`).
    let lb_worst = (Rational::one() - &max_eps) * &tau1;
    let condition_worst = match mode {
        CircleMode::Hky => hky_for_all_first_at_least(&lb_worst, &tau2)?,
        CircleMode::NewhouseOnly => &lb_worst * &tau2 > Rational::one(),
    };

    for branch in [Branch::Lower, Branch::Upper] {
        let bc = BoxedCircle {
            c1: &center.box1,
            c2: &center.box2,
            t_sq,
            branch,
            bits: eval_bits,
        };
        // Anchor candidates: first-set cylinders by depth, leftmost first.
        // Subtrees whose image provably misses the second set's hull, or that
        // lie entirely outside the circle's domain, are pruned.
        let mut frontier = vec![(k1.hull().clone(), Vec::<u32>::new())];
        for _depth in 1..=16 {
            let mut next: Vec<((Rational, Rational), Vec<u32>)> = Vec::new();
            let mut candidates: Vec<((Rational, Rational), Vec<u32>)> = Vec::new();
            for (cyl, path) in &frontier {
                for i in 0..k1.child_count() {
                    let child = k1.child_interval(cyl, i);
                    let mut p = path.clone();
                    p.push(i as u32);
                    let one_sided = bc.strictly_right(&child) || bc.strictly_left(&child);
                    if one_sided {
                        // Entirely outside the open domain for every center
                        // position: no descendant can ever map anywhere.
                        let d_min = if bc.strictly_right(&child) {
                            &child.0 - &center.box1.hi
                        } else {
                            &center.box1.lo - &child.1
                        };
                        if &(&d_min * &d_min) >= t_sq {
                            continue;
                        }
                        if let Some(outer) = bc.image_outer(&child) {
                            let h = k2.hull();
                            if outer.hi <= h.0 || outer.lo >= h.1 {
                                // Image misses the second set entirely, and
                                // every descendant's image is contained in it.
                                continue;
                            }
                            candidates.push((child.clone(), p.clone()));
                        }
                    }
                    next.push((child, p));
                }
            }
            frontier = next;
            for (anchor, path) in &candidates {
                if found.len() >= m {
                    break;
                }
                if anchors.iter().any(|a| anchor.0 < a.1 && a.0 < anchor.1) {
                    continue;
                }
                let eps = match bc.distortion(anchor) {
                    Some(e) => e.max(Rational::zero()),
                    None => continue,
                };
                if eps > max_eps {
                    continue;
                }
                let tau_eps = eps_thickness_pure(k1, &eps)?;
                let lb = (Rational::one() - &eps) * &tau_eps;
                if !condition_worst {
                    let condition_ok = match mode {
                        CircleMode::Hky => hky_for_all_first_at_least(&lb, &tau2)?,
                        CircleMode::NewhouseOnly => &lb * &tau2 > Rational::one(),
                    };
                    if !condition_ok {
                        continue;
                    }
                }
                let root_witness =
                    match robust_interleave(k1, k2, &bc, anchor, k2.hull()) {
                        Some(w) => w,
                        None => continue,
                    };
                let outcome = match circle_descent(
                    k1,
                    k2,
                    &bc,
                    anchor.clone(),
                    k2.hull().clone(),
                    &target,
                    &avoid,
                    bits * 2 + 64,
                ) {
                    Ok(o) => o,
                    Err(Error::Exhausted(_)) | Err(Error::DepthExhausted(_)) => continue,
                    Err(e) => return Err(e),
                };
                let point = PlanarPoint {
                    box1: Enclosure { lo: outcome.cyl1.0, hi: outcome.cyl1.1 },
                    box2: Enclosure { lo: outcome.cyl2.0, hi: outcome.cyl2.1 },
                };
                let cert = VertexCert {
                    center: center_id,
                    branch,
                    anchor_path: path.clone(),
                    distortion_eps: eps,
                    image_tau_lb: lb,
                    root_member1: root_witness.0,
                    root_member2: root_witness.1,
                    chain: outcome.chain,
                };
                anchors.push(anchor.clone());
                avoid.push(point.rect());
                found.push((point, cert));
            }
            if found.len() >= m {
                break;
            }
        }
        if found.len() >= m {
            break;
        }
    }
    if found.len() < m {
        return Err(Error::Exhausted(format!(
            "only {} of {m} circle vertices could be certified (thickness {tau1}, {tau2})",
            found.len()
        )));
    }
    Ok(found)
}

/// Place a finite tree in the product: the seed pair becomes the root edge,
/// and every further vertex is star-expanded about its parent.
pub fn build_tree(
    k1: &CantorSpec,
    k2: &CantorSpec,
    tree: &TreeSpec,
    seed_x: &(Rational, Rational),
    seed_y: &(Rational, Rational),
    schedule: WidthSchedule,
) -> Result<TreePlacement> {
    let parents = tree.parents()?;
    let levels = tree.levels()?;
    if parents.len() < 2 || parents[1] != Some(0) {
        return Err(Error::InvalidParameter(
            "the tree needs at least the root edge (vertex 1 under vertex 0)".to_string(),
        ));
    }
    let tau1 = thickness(k1)?.upper;
    let tau2 = thickness(k2)?.upper;
    let hky = check_hky(&tau1, &tau2)?;
    if !hky.satisfied {
        return Err(Error::ConditionViolation(format!(
            "tree construction requires the Hunt-Kan-Yorke condition; it fails for ({tau1}, {tau2})"
        )));
    }
    let (root, first, t_sq, seed) =
        seed_edge(k1, k2, seed_x, seed_y, schedule.bits_at(0)?, 512)?;
    let mut vertices = vec![root, first];
    let mut origins = vec![VertexOrigin::SeedRoot, VertexOrigin::SeedChild];
    let mut anchors_by_parent: BTreeMap<usize, Vec<(Rational, Rational)>> = BTreeMap::new();
    for v in 2..parents.len() {
        let p = parents[v].expect("non-root vertex");
        let bits = schedule.bits_at(levels[v])?;
        let used: Vec<Rect> = vertices.iter().map(|pt| pt.rect()).collect();
        let anchors = anchors_by_parent.entry(p).or_default();
        let mut out = expand_star(
            k1,
            k2,
            &vertices[p],
            p,
            &t_sq,
            1,
            &used,
            anchors,
            bits,
            CircleMode::Hky,
        )?;
        let (point, cert) = out.pop().expect("m = 1");
        anchors.push({
            // Re-derive the anchor interval from the recorded path.
            let iv = k1.cylinder(&cert.anchor_path)?;
            iv
        });
        vertices.push(point);
        origins.push(VertexOrigin::Star(cert));
    }
    Ok(TreePlacement { t_sq, parents, vertices, origins, seed })
}

/// Verification report: every check is an entry, never a panic.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TreeReport {
    pub pass: bool,
    pub edges: usize,
    /// Widest edge-distance enclosure, with the edge realizing it.
    pub worst_edge: Option<(usize, usize, Rational)>,
    pub failures: Vec<String>,
}

/// Check a placement against its tree: every edge's distance enclosure must
/// contain `t` with width at most `tol`, and all vertex boxes must be
/// pairwise disjoint.
pub fn verify_tree(placement: &TreePlacement, tol: &Rational) -> TreeReport {
    let mut failures = Vec::new();
    let mut worst: Option<(usize, usize, Rational)> = None;
    let mut edges = 0usize;
    for (v, p) in placement.parents.iter().enumerate() {
        let Some(p) = p else { continue };
        edges += 1;
        let a = &placement.vertices[*p];
        let b = &placement.vertices[v];
        let dx = a.box1.sub(&b.box1);
        let dy = a.box2.sub(&b.box2);
        let dsq = dx.square().add(&dy.square());
        if !dsq.contains(&placement.t_sq) {
            failures.push(format!("edge ({p}, {v}): distance enclosure misses t"));
        }
        let dist = match (sqrt_enclosure(&dsq.lo, 128), sqrt_enclosure(&dsq.hi, 128)) {
            (Ok(lo), Ok(hi)) => Enclosure { lo: lo.lo, hi: hi.hi },
            _ => {
                failures.push(format!("edge ({p}, {v}): distance enclosure is invalid"));
                continue;
            }
        };
        let w = dist.width();
        if &w > tol {
            failures.push(format!("edge ({p}, {v}): distance width {w} exceeds tolerance"));
        }
        if worst.as_ref().map(|(_, _, ww)| &w > ww).unwrap_or(true) {
            worst = Some((*p, v, w));
        }
    }
    for i in 0..placement.vertices.len() {
        for j in i + 1..placement.vertices.len() {
            if placement.vertices[i].rect().intersects(&placement.vertices[j].rect()) {
                failures.push(format!("vertices {i} and {j} have overlapping boxes"));
            }
        }
    }
    TreeReport { pass: failures.is_empty(), edges, worst_edge: worst, failures }
}

/// Independent replay of a placement: re-derives every cylinder from the
/// recorded paths and chains and re-checks, from scratch, all interval
/// inequalities the construction relied on.
pub fn verify_placement(
    k1: &CantorSpec,
    k2: &CantorSpec,
    placement: &TreePlacement,
) -> Result<()> {
    let bad = |m: String| Err(Error::ConditionViolation(m));
    crate::intersect::verify_chain(
        k1,
        &k1.affine_image(&Rational::one(), &placement.seed.r)?,
        &placement.seed.cert,
    )?;
    let tau2 = thickness(k2)?.upper;
    for (v, origin) in placement.origins.iter().enumerate() {
        let cert = match origin {
            VertexOrigin::SeedRoot | VertexOrigin::SeedChild => continue,
            VertexOrigin::Star(c) => c,
        };
        let center = &placement.vertices[cert.center];
        let point = &placement.vertices[v];
        let bits = {
            // Conservative evaluation precision for replay.
            let w = point.box1.width().min(point.box2.width());
            let mut b = 32u32;
            while pow2_inv(b) > w && b < 4096 {
                b += 32;
            }
            b + 32
        };
        let bc = BoxedCircle {
            c1: &center.box1,
            c2: &center.box2,
            t_sq: &placement.t_sq,
            branch: cert.branch,
            bits,
        };
        let anchor = k1.cylinder(&cert.anchor_path)?;
        let eps = bc
            .distortion(&anchor)
            .ok_or_else(|| Error::ConditionViolation(format!("vertex {v}: anchor distortion fails")))?
            .max(Rational::zero());
        if eps > cert.distortion_eps {
            return bad(format!("vertex {v}: recorded distortion bound is too small"));
        }
        let tau_eps = eps_thickness_pure(k1, &cert.distortion_eps)?;
        let lb = (Rational::one() - &cert.distortion_eps) * &tau_eps;
        if lb < cert.image_tau_lb || !hky_for_all_first_at_least(&cert.image_tau_lb, &tau2)? {
            return bad(format!("vertex {v}: image thickness bound fails"));
        }
        let check = |cyl1: &(Rational, Rational),
                     cyl2: &(Rational, Rational),
                     m1: &Rational,
                     m2: &Rational|
         -> bool {
            if !matches!(k1.classify(m1, 64), crate::cantor::Classification::Inside { .. })
                || m1 < &cyl1.0
                || m1 > &cyl1.1
            {
                return false;
            }
            if !matches!(k2.classify(m2, 64), crate::cantor::Classification::Inside { .. })
                || m2 < &cyl2.0
                || m2 > &cyl2.1
            {
                return false;
            }
            let img = match bc.eval(m1) {
                Some(e) => e,
                None => return false,
            };
            if !(img.lo > cyl2.0 && img.hi < cyl2.1) {
                return false;
            }
            let inner = match bc.image_inner(cyl1) {
                Some(e) => e,
                None => return false,
            };
            m2 > &inner.lo && m2 < &inner.hi
        };
        let mut cyl1 = anchor.clone();
        let mut cyl2 = k2.hull().clone();
        if !check(&cyl1, &cyl2, &cert.root_member1, &cert.root_member2) {
            return bad(format!("vertex {v}: anchor interleaving fails"));
        }
        for (level, step) in cert.chain.iter().enumerate() {
            if step.child1 != KEEP {
                if step.child1 as usize >= k1.child_count() {
                    return bad(format!("vertex {v}: bad child index at level {level}"));
                }
                cyl1 = k1.child_interval(&cyl1, step.child1 as usize);
            }
            if step.child2 != KEEP {
                if step.child2 as usize >= k2.child_count() {
                    return bad(format!("vertex {v}: bad child index at level {level}"));
                }
                cyl2 = k2.child_interval(&cyl2, step.child2 as usize);
            }
            if !check(&cyl1, &cyl2, &step.member1, &step.member2) {
                return bad(format!("vertex {v}: interleaving fails at level {level}"));
            }
        }
        if point.box1.lo != cyl1.0
            || point.box1.hi != cyl1.1
            || point.box2.lo != cyl2.0
            || point.box2.hi != cyl2.1
        {
            return bad(format!("vertex {v}: recorded boxes do not match the chain"));
        }
    }
    Ok(())
}

/// Streaming placement of the universal tree: vertices come out in weight
/// order (parents always first), deterministically — re-running and skipping
/// a prefix reproduces the identical suffix.
pub struct TStarStream<'a> {
    k1: &'a CantorSpec,
    k2: &'a CantorSpec,
    schedule: WidthSchedule,
    sequences: Vec<Vec<u32>>,
    placement: TreePlacement,
    index_of: BTreeMap<Vec<u32>, usize>,
    anchors_by_parent: BTreeMap<usize, Vec<(Rational, Rational)>>,
    next: usize,
}

impl<'a> TStarStream<'a> {
    pub fn new(
        k1: &'a CantorSpec,
        k2: &'a CantorSpec,
        seed_x: &(Rational, Rational),
        seed_y: &(Rational, Rational),
        limit: usize,
        schedule: WidthSchedule,
    ) -> Result<Self> {
        if limit < 2 {
            return Err(Error::InvalidParameter("stream at least the seed edge".to_string()));
        }
        let tau1 = thickness(k1)?.upper;
        let tau2 = thickness(k2)?.upper;
        if !check_hky(&tau1, &tau2)?.satisfied {
            return Err(Error::ConditionViolation(format!(
                "tree construction requires the Hunt-Kan-Yorke condition; it fails for ({tau1}, {tau2})"
            )));
        }
        let sequences = tstar_prefix(limit);
        let (root, first, t_sq, seed) =
            seed_edge(k1, k2, seed_x, seed_y, schedule.bits_at(0)?, 512)?;
        let mut index_of = BTreeMap::new();
        index_of.insert(sequences[0].clone(), 0);
        index_of.insert(sequences[1].clone(), 1);
        let placement = TreePlacement {
            t_sq,
            parents: vec![None, Some(0)],
            vertices: vec![root, first],
            origins: vec![VertexOrigin::SeedRoot, VertexOrigin::SeedChild],
            seed,
        };
        Ok(TStarStream {
            k1,
            k2,
            schedule,
            sequences,
            placement,
            index_of,
            anchors_by_parent: BTreeMap::new(),
            next: 0,
        })
    }

    /// The placement built so far (a valid tree placement at every prefix).
    pub fn placement(&self) -> &TreePlacement {
        &self.placement
    }

    /// Produce the next vertex: its universal-tree id and planar point.
    pub fn next_vertex(&mut self) -> Result<Option<(Vec<u32>, PlanarPoint)>> {
        if self.next >= self.sequences.len() {
            return Ok(None);
        }
        let seq = self.sequences[self.next].clone();
        self.next += 1;
        if self.next <= 2 {
            let v = self.next - 1;
            return Ok(Some((seq, self.placement.vertices[v].clone())));
        }
        let parent_seq = seq[..seq.len() - 1].to_vec();
        let p = *self
            .index_of
            .get(&parent_seq)
            .ok_or_else(|| Error::InvalidParameter("parent not yet streamed".to_string()))?;
        let bits = self.schedule.bits_at(seq.len() as u32)?;
        let used: Vec<Rect> = self.placement.vertices.iter().map(|pt| pt.rect()).collect();
        let anchors = self.anchors_by_parent.entry(p).or_default();
        let mut out = expand_star(
            self.k1,
            self.k2,
            &self.placement.vertices[p],
            p,
            &self.placement.t_sq,
            1,
            &used,
            anchors,
            bits,
            CircleMode::Hky,
        )?;
        let (point, cert) = out.pop().expect("m = 1");
        anchors.push(self.k1.cylinder(&cert.anchor_path)?);
        let v = self.placement.vertices.len();
        self.index_of.insert(seq.clone(), v);
        self.placement.parents.push(Some(p));
        self.placement.vertices.push(point.clone());
        self.placement.origins.push(VertexOrigin::Star(cert));
        Ok(Some((seq, point)))
    }
}

/// Outcome of one distance sample.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SampleOutcome {
    pub t_sq: Rational,
    pub ok: bool,
    pub detail: String,
}

/// Sample gap lengths realized by varying the second coordinate of the seed
/// pair over members of the second set; each sample attempts a full tree
/// build and reports a genuine membership certificate on success.
#[allow(clippy::too_many_arguments)]
pub fn diagonal_window(
    k1: &CantorSpec,
    k2: &CantorSpec,
    tree: &TreeSpec,
    seed_x: &(Rational, Rational),
    seed_y: &(Rational, Rational),
    samples: usize,
    schedule: WidthSchedule,
) -> Result<Vec<SampleOutcome>> {
    let tau1 = thickness(k1)?.upper;
    let tau2 = thickness(k2)?.upper;
    if !check_hky(&tau1, &tau2)?.satisfied {
        return Err(Error::ConditionViolation(format!(
            "distance sampling requires the Hunt-Kan-Yorke condition; it fails for ({tau1}, {tau2})"
        )));
    }
    if samples < 1 {
        return Err(Error::InvalidParameter("at least one sample required".to_string()));
    }
    // Candidate second coordinates: interior construction endpoints of the
    // second set at depth 5, evenly subsampled.
    let approx = k2.refine(5)?;
    let hull = k2.hull();
    let mut members: Vec<Rational> = approx
        .pieces
        .iter()
        .flat_map(|(a, b)| [a.clone(), b.clone()])
        .filter(|p| p > &hull.0 && p < &hull.1 && p != &seed_x.1)
        .collect();
    members.sort();
    members.dedup();
    if members.len() < samples {
        return Err(Error::InvalidParameter("not enough member candidates to sample".to_string()));
    }
    let mut out = Vec::with_capacity(samples);
    for s in 0..samples {
        let idx = s * (members.len() - 1) / samples.max(1);
        let y2 = members[idx].clone();
        let y = (seed_y.0.clone(), y2);
        let dx = &seed_x.0 - &y.0;
        let dy = &seed_x.1 - &y.1;
        let t_sq = &dx * &dx + &dy * &dy;
        match build_tree(k1, k2, tree, seed_x, &y, schedule) {
            Ok(placement) => {
                let report = verify_tree(&placement, &pow2_inv(20));
                out.push(SampleOutcome {
                    t_sq,
                    ok: report.pass,
                    detail: if report.pass {
                        format!("{} edges certified", report.edges)
                    } else {
                        report.failures.join("; ")
                    },
                });
            }
            Err(e) => out.push(SampleOutcome { t_sq, ok: false, detail: e.to_string() }),
        }
    }
    Ok(out)
}

/// Certify sampled distances from a fixed pin to the product: for each
/// sampled squared distance, search for a certified point of the product on
/// the circle about the pin. Only the Newhouse condition is required; runs
/// without the Hunt-Kan-Yorke condition are existence-only.
pub fn pinned_window(
    k1: &CantorSpec,
    k2: &CantorSpec,
    pin: &(Rational, Rational),
    samples: usize,
    bits: u32,
) -> Result<Vec<SampleOutcome>> {
    let tau1 = thickness(k1)?.upper;
    let tau2 = thickness(k2)?.upper;
    if &tau1 * &tau2 <= Rational::one() {
        return Err(Error::ConditionViolation(format!(
            "pinned sampling requires the Newhouse condition; {tau1} * {tau2} is not above 1"
        )));
    }
    if samples < 1 {
        return Err(Error::InvalidParameter("at least one sample required".to_string()));
    }
    let mode = if check_hky(&tau1, &tau2)?.satisfied {
        CircleMode::Hky
    } else {
        CircleMode::NewhouseOnly
    };
    let a1 = k1.refine(3)?;
    let a2 = k2.refine(3)?;
    let mut t_sqs: Vec<Rational> = Vec::new();
    'outer: for (p1, _) in a1.pieces.iter().skip(1) {
        for (p2, _) in a2.pieces.iter().skip(1) {
            let dx = p1 - &pin.0;
            let dy = p2 - &pin.1;
            let t_sq = &dx * &dx + &dy * &dy;
            if t_sq.is_zero() {
                continue;
            }
            if !t_sqs.contains(&t_sq) {
                t_sqs.push(t_sq);
            }
            if t_sqs.len() >= samples {
                break 'outer;
            }
        }
    }
    if t_sqs.len() < samples {
        return Err(Error::InvalidParameter("not enough distinct sample distances".to_string()));
    }
    let pin_point = PlanarPoint {
        box1: Enclosure::point(pin.0.clone()),
        box2: Enclosure::point(pin.1.clone()),
    };
    let mut out = Vec::with_capacity(samples);
    for t_sq in t_sqs {
        let r = expand_star(k1, k2, &pin_point, 0, &t_sq, 1, &[], &[], bits, mode);
        match r {
            Ok(points) => out.push(SampleOutcome {
                t_sq,
                ok: true,
                detail: format!(
                    "point box around ({}, {})",
                    points[0].0.box1.midpoint(),
                    points[0].0.box2.midpoint()
                ),
            }),
            Err(e) => out.push(SampleOutcome { t_sq, ok: false, detail: e.to_string() }),
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::ratio;

    fn mid6() -> CantorSpec {
        CantorSpec::middle_alpha(&ratio(1, 6)).unwrap()
    }

    fn seed_points() -> ((Rational, Rational), (Rational, Rational)) {
        ((ratio(25, 144), ratio(25, 144)), (ratio(7, 12), ratio(7, 12)))
    }

    fn small_schedule() -> WidthSchedule {
        WidthSchedule { base_bits: 80, step_bits: 12 }
    }

    #[test]
    fn tree_spec_shapes() {
        let t = TreeSpec::TStar { branching: 3, depth: 2 };
        let parents = t.parents().unwrap();
        assert_eq!(parents.len(), 13);
        assert_eq!(t.edges().unwrap().len(), 12);
        let levels = t.levels().unwrap();
        assert_eq!(levels.iter().filter(|&&l| l == 2).count(), 9);
        let chain = TreeSpec::Explicit { parents: vec![None, Some(0), Some(1), Some(2)] };
        assert_eq!(chain.edges().unwrap(), vec![(0, 1), (1, 2), (2, 3)]);
        assert!(TreeSpec::Explicit { parents: vec![Some(0)] }.parents().is_err());
        assert!(TreeSpec::Explicit { parents: vec![None, Some(1)] }.parents().is_err());
    }

    #[test]
    fn tstar_prefix_order() {
        let seqs = tstar_prefix(10);
        assert_eq!(seqs[0], Vec::<u32>::new());
        assert_eq!(seqs[1], vec![1]);
        // Every parent precedes its children.
        for (i, s) in seqs.iter().enumerate() {
            if !s.is_empty() {
                let parent = s[..s.len() - 1].to_vec();
                assert!(seqs[..i].contains(&parent), "parent of {s:?} missing");
            }
        }
        // Weights are non-decreasing.
        let weight = |s: &Vec<u32>| s.len() as u32 + s.iter().sum::<u32>();
        for w in seqs.windows(2) {
            assert!(weight(&w[0]) <= weight(&w[1]));
        }
    }

    #[test]
    fn seed_edge_exact_distance() {
        let k = mid6();
        let (x, y) = seed_points();
        let (root, child, t_sq, _) = seed_edge(&k, &k, &x, &y, 80, 512).unwrap();
        assert_eq!(t_sq, ratio(3481, 10368));
        // First coordinates at exact offset; boxes tiny and disjoint.
        assert_eq!(&root.box1.lo - &child.box1.lo, ratio(-59, 144));
        assert!(root.box1.width() <= pow2_inv(80));
        assert!(!root.rect().intersects(&child.rect()));
    }

    #[test]
    fn build_and_verify_three_chain() {
        let k = mid6();
        let (x, y) = seed_points();
        let tree = TreeSpec::Explicit { parents: vec![None, Some(0), Some(1)] };
        let placement = build_tree(&k, &k, &tree, &x, &y, small_schedule()).unwrap();
        assert_eq!(placement.vertices.len(), 3);
        let report = verify_tree(&placement, &pow2_inv(30));
        assert!(report.pass, "failures: {:?}", report.failures);
        verify_placement(&k, &k, &placement).unwrap();
        // Determinism.
        let again = build_tree(&k, &k, &tree, &x, &y, small_schedule()).unwrap();
        assert_eq!(placement, again);
    }

    #[test]
    fn tampered_placement_fails() {
        let k = mid6();
        let (x, y) = seed_points();
        let tree = TreeSpec::Explicit { parents: vec![None, Some(0), Some(1)] };
        let mut placement = build_tree(&k, &k, &tree, &x, &y, small_schedule()).unwrap();
        let shift = pow2_inv(20);
        placement.vertices[2].box1 = Enclosure {
            lo: &placement.vertices[2].box1.lo + &shift,
            hi: &placement.vertices[2].box1.hi + &shift,
        };
        let report = verify_tree(&placement, &pow2_inv(30));
        assert!(!report.pass);
        assert!(verify_placement(&k, &k, &placement).is_err());
    }

    #[test]
    fn hky_required_for_trees() {
        let k = CantorSpec::middle_alpha(&ratio(1, 4)).unwrap();
        let tree = TreeSpec::Explicit { parents: vec![None, Some(0)] };
        let x = (ratio(1, 8), ratio(1, 8));
        let y = (ratio(5, 8), ratio(5, 8));
        let r = build_tree(&k, &k, &tree, &x, &y, small_schedule());
        assert!(matches!(r, Err(Error::ConditionViolation(_))));
    }

    #[test]
    fn stream_matches_build() {
        let k = mid6();
        let (x, y) = seed_points();
        let mut stream = TStarStream::new(&k, &k, &x, &y, 4, small_schedule()).unwrap();
        let mut got = Vec::new();
        while let Some(v) = stream.next_vertex().unwrap() {
            got.push(v);
        }
        assert_eq!(got.len(), 4);
        let report = verify_tree(stream.placement(), &pow2_inv(30));
        assert!(report.pass, "failures: {:?}", report.failures);
        // Resuming from scratch reproduces the identical prefix.
        let mut stream2 = TStarStream::new(&k, &k, &x, &y, 4, small_schedule()).unwrap();
        let mut got2 = Vec::new();
        while let Some(v) = stream2.next_vertex().unwrap() {
            got2.push(v);
        }
        assert_eq!(got, got2);
    }

    #[test]
    fn pinned_samples_certify() {
        let k = mid6();
        let out = pinned_window(&k, &k, &(ratio(-1, 2), ratio(-1, 2)), 2, 48).unwrap();
        assert_eq!(out.len(), 2);
        assert!(out.iter().all(|s| s.ok), "{out:?}");
        // Newhouse precondition.
        let thin = crate::cantor::middle_third();
        assert!(pinned_window(&thin, &thin, &(ratio(-1, 2), ratio(-1, 2)), 1, 32).is_err());
    }
}
