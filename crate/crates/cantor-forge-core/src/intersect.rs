//! Interleaving tests, certified location of points in the intersection of
//! two thick Cantor sets, and special-point pair construction for a given
//! distance.
//!
//! The central object is a nested chain of cylinder pairs: at every level the
//! two restrictions are interleaved scaled copies of the full sets, so the
//! thickness condition that held at the top holds again, and the gap lemma
//! guarantees the pair still intersects. The chain is therefore a
//! machine-checkable certificate that a true intersection point lies in the
//! final box. Under the Hunt-Kan-Yorke condition the intersection inside the
//! final box contains a whole Cantor set, which is what certifies that
//! non-gap-endpoint (special) choices exist there.

use alloc::string::ToString;
use alloc::vec;
use alloc::vec::Vec;

use num_traits::Signed;

use crate::cantor::{CantorSpec, Classification};
use crate::error::{Error, Result};
use crate::scalar::{Enclosure, Rational};
use crate::thickness::{check_hky, check_newhouse, thickness};

/// Proof that two sets each meet the interior of the other's convex hull.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InterleaveWitness {
    /// A member of the first set strictly inside the second set's hull.
    pub a_in_b: Rational,
    /// A member of the second set strictly inside the first set's hull.
    pub b_in_a: Rational,
}

/// Which thickness condition backs a certificate chain.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    /// Full Hunt-Kan-Yorke condition: the intersection inside every chain box
    /// contains a Cantor set, so special (non-endpoint) choices exist.
    Hky,
    /// Newhouse condition only: existence of at least one intersection point.
    /// Non-robust — the intersection could be a single point.
    NewhouseOnly,
}

/// One level of a certificate chain: the child indices taken in each set and
/// the interleaving witnesses for the resulting cylinder pair.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChainLevel {
    pub child_a: u32,
    pub child_b: u32,
    pub witness_ab: Rational,
    pub witness_ba: Rational,
}

/// Certified enclosure of an intersection point: nested interleaved cylinder
/// pairs ending in a box of the requested width.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntersectionEnclosure {
    pub mode: Mode,
    pub tau_a: Rational,
    pub tau_b: Rational,
    pub root_witness: InterleaveWitness,
    pub chain: Vec<ChainLevel>,
    pub point_box: Enclosure,
}

const SEARCH_PIECE_CAP: u64 = 1 << 16;

/// A member of `spec` lying in the given cylinder interval and strictly
/// inside the open interval, found by cylinder descent (cylinder endpoints
/// are always members).
fn member_in_open(
    spec: &CantorSpec,
    cyl: &(Rational, Rational),
    open: &(Rational, Rational),
    depth_budget: u32,
) -> Option<Rational> {
    let mut stack = vec![(cyl.clone(), 0u32)];
    let mut visited = 0u64;
    while let Some((c, d)) = stack.pop() {
        visited += 1;
        if visited > SEARCH_PIECE_CAP {
            return None;
        }
        if c.1 <= open.0 || c.0 >= open.1 {
            continue;
        }
        if c.0 > open.0 && c.0 < open.1 {
            return Some(c.0);
        }
        if c.1 > open.0 && c.1 < open.1 {
            return Some(c.1);
        }
        if d < depth_budget {
            for i in (0..spec.child_count()).rev() {
                stack.push((spec.child_interval(&c, i), d + 1));
            }
        }
    }
    None
}

/// Interleaving test on cylinder restrictions: each copy must have a member
/// strictly inside the interior of the other's interval.
fn interleaved_cyls(
    a: &CantorSpec,
    ca: &(Rational, Rational),
    b: &CantorSpec,
    cb: &(Rational, Rational),
    depth_budget: u32,
) -> Option<InterleaveWitness> {
    let a_in_b = member_in_open(a, ca, cb, depth_budget)?;
    let b_in_a = member_in_open(b, cb, ca, depth_budget)?;
    Some(InterleaveWitness { a_in_b, b_in_a })
}

/// Whether the two sets are interleaved (Definition: each has non-empty
/// intersection with the interior of the convex hull of the other), with
/// member witnesses when they are.
pub fn interleaved(a: &CantorSpec, b: &CantorSpec) -> Option<InterleaveWitness> {
    interleaved_cyls(a, a.hull(), b, b.hull(), 48)
}

fn condition_check(mode: Mode, tau_a: &Rational, tau_b: &Rational) -> Result<()> {
    match mode {
        Mode::Hky => {
            let r = check_hky(tau_a, tau_b)?;
            if !r.satisfied {
                let which = if r.residuals[1] <= Rational::from_integer(0.into()) {
                    "second"
                } else {
                    "third"
                };
                return Err(Error::ConditionViolation(alloc::format!(
                    "Hunt-Kan-Yorke fails for ({tau_a}, {tau_b}): {which} inequality"
                )));
            }
        }
        Mode::NewhouseOnly => {
            if !check_newhouse(tau_a, tau_b)? {
                return Err(Error::ConditionViolation(alloc::format!(
                    "Newhouse fails: {tau_a} * {tau_b} is not above 1"
                )));
            }
        }
    }
    Ok(())
}

fn box_of(ca: &(Rational, Rational), cb: &(Rational, Rational)) -> Enclosure {
    Enclosure {
        lo: ca.0.clone().max(cb.0.clone()),
        hi: ca.1.clone().min(cb.1.clone()),
    }
}

/// Certified intersection point of two interleaved thick Cantor sets.
///
/// Descends to child cylinder pairs that remain interleaved, preferring the
/// pair with the widest narrower cylinder (then lowest indices), until the
/// box `ca` intersect `cb` has width at most `target_width` and is disjoint
/// from every avoid box. Backtracks when a branch dies; the returned chain
/// replays level by level.
pub fn gap_lemma_point(
    a: &CantorSpec,
    b: &CantorSpec,
    target_width: &Rational,
    avoid: &[Enclosure],
    mode: Mode,
    depth_budget: u32,
) -> Result<IntersectionEnclosure> {
    if !target_width.is_positive() {
        return Err(Error::InvalidParameter("target width must be positive".to_string()));
    }
    let tau_a = thickness(a)?.upper;
    let tau_b = thickness(b)?.upper;
    condition_check(mode, &tau_a, &tau_b)?;
    let root_witness = interleaved(a, b).ok_or_else(|| {
        Error::InvalidParameter("the sets are not interleaved".to_string())
    })?;

    struct Frame {
        ca: (Rational, Rational),
        cb: (Rational, Rational),
        candidates: Vec<(u32, u32, InterleaveWitness)>,
        next: usize,
    }

    let viable = |ca: &(Rational, Rational), cb: &(Rational, Rational)| {
        let mut out = Vec::new();
        for i in 0..a.child_count() {
            let cai = a.child_interval(ca, i);
            for j in 0..b.child_count() {
                let cbj = b.child_interval(cb, j);
                let bx = box_of(&cai, &cbj);
                if bx.lo > bx.hi {
                    continue;
                }
                // A branch whose box already sits inside an avoid box can
                // never escape it.
                if avoid.iter().any(|av| av.contains_interval(&bx)) {
                    continue;
                }
                if let Some(w) = interleaved_cyls(a, &cai, b, &cbj, 24) {
                    out.push((i as u32, j as u32, w, cai.clone(), cbj.clone()));
                }
            }
        }
        // Widest narrower cylinder first, then lowest index pair.
        out.sort_by(|x, y| {
            let mx = (&x.3 .1 - &x.3 .0).min(&x.4 .1 - &x.4 .0);
            let my = (&y.3 .1 - &y.3 .0).min(&y.4 .1 - &y.4 .0);
            my.cmp(&mx).then(x.0.cmp(&y.0)).then(x.1.cmp(&y.1))
        });
        out.into_iter().map(|(i, j, w, _, _)| (i, j, w)).collect::<Vec<_>>()
    };

    let mut stack = vec![Frame {
        ca: a.hull().clone(),
        cb: b.hull().clone(),
        candidates: viable(a.hull(), b.hull()),
        next: 0,
    }];
    let mut chain: Vec<ChainLevel> = Vec::new();
    let mut expanded: u64 = 0;
    loop {
        let top = stack.len() - 1;
        // Success test on the current node.
        let bx = box_of(&stack[top].ca, &stack[top].cb);
        if bx.lo <= bx.hi
            && &bx.width() <= target_width
            && !avoid.iter().any(|av| av.intersects(&bx))
        {
            return Ok(IntersectionEnclosure {
                mode,
                tau_a,
                tau_b,
                root_witness,
                chain,
                point_box: bx,
            });
        }
        // Advance: take the next viable child pair at the top frame; a frame
        // at the depth budget gets no children and backtracks.
        let within_depth = stack.len() as u32 <= depth_budget;
        let choice = {
            let f = &mut stack[top];
            if within_depth && f.next < f.candidates.len() {
                let c = f.candidates[f.next].clone();
                f.next += 1;
                Some(c)
            } else {
                None
            }
        };
        expanded += 1;
        if expanded > 100_000 {
            return Err(Error::DepthExhausted(alloc::format!(
                "no certified box of width {target_width} within the search budget"
            )));
        }
        match choice {
            Some((i, j, w)) => {
                let ca = a.child_interval(&stack[top].ca, i as usize);
                let cb = b.child_interval(&stack[top].cb, j as usize);
                let candidates = viable(&ca, &cb);
                chain.push(ChainLevel { child_a: i, child_b: j, witness_ab: w.a_in_b, witness_ba: w.b_in_a });
                stack.push(Frame { ca, cb, candidates, next: 0 });
            }
            None => {
                stack.pop();
                chain.pop();
                if stack.is_empty() {
                    return Err(Error::Exhausted(
                        "every candidate cylinder pair was excluded".to_string(),
                    ));
                }
            }
        }
    }
}

/// Independent replay of a certificate chain: re-derives the cylinders from
/// the recorded child indices and re-checks, from scratch, the thickness
/// values, the condition, every interleaving witness, and the final box.
pub fn verify_chain(a: &CantorSpec, b: &CantorSpec, cert: &IntersectionEnclosure) -> Result<()> {
    let bad = |m: &str| Err(Error::ConditionViolation(m.to_string()));
    if thickness(a)?.upper != cert.tau_a || thickness(b)?.upper != cert.tau_b {
        return bad("recorded thickness values do not match the specs");
    }
    condition_check(cert.mode, &cert.tau_a, &cert.tau_b)?;
    let check_witness = |spec: &CantorSpec,
                         w: &Rational,
                         own: &(Rational, Rational),
                         other: &(Rational, Rational)|
     -> bool {
        if w < &own.0 || w > &own.1 || w <= &other.0 || w >= &other.1 {
            return false;
        }
        matches!(spec.classify(w, 64), Classification::Inside { .. })
    };
    let mut ca = a.hull().clone();
    let mut cb = b.hull().clone();
    if !check_witness(a, &cert.root_witness.a_in_b, &ca, &cb)
        || !check_witness(b, &cert.root_witness.b_in_a, &cb, &ca)
    {
        return bad("root interleaving witness fails");
    }
    for (level, step) in cert.chain.iter().enumerate() {
        if step.child_a as usize >= a.child_count() || step.child_b as usize >= b.child_count() {
            return bad("child index out of range in chain");
        }
        ca = a.child_interval(&ca, step.child_a as usize);
        cb = b.child_interval(&cb, step.child_b as usize);
        if !check_witness(a, &step.witness_ab, &ca, &cb)
            || !check_witness(b, &step.witness_ba, &cb, &ca)
        {
            return Err(Error::ConditionViolation(alloc::format!(
                "interleaving witness fails at chain level {level}"
            )));
        }
    }
    let bx = box_of(&ca, &cb);
    if bx.lo > bx.hi {
        return bad("final cylinders do not intersect");
    }
    if cert.point_box != bx {
        return bad("recorded box does not match the final cylinders");
    }
    Ok(())
}

/// A certified pair of points of `K` at exact mutual offset `r`:
/// `x = y + r`, both coordinates backed by one chain on `K` and `r + K`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TranslatedPair {
    pub x: Enclosure,
    pub y: Enclosure,
    pub r: Rational,
    pub cert: IntersectionEnclosure,
}

/// `count` pairwise-disjoint certified pairs `(x, y)` with `x = y + r`, both
/// in `K`. Requires the Hunt-Kan-Yorke condition for `K` with itself, which
/// makes the intersection of `K` and `r + K` a Cantor set — so every returned
/// box also contains non-gap-endpoint choices.
pub fn translated_self_intersection(
    k: &CantorSpec,
    r: &Rational,
    count: usize,
    target_width: &Rational,
    depth_budget: u32,
) -> Result<Vec<TranslatedPair>> {
    if r.abs() >= k.hull_len() {
        return Err(Error::InvalidParameter(
            "translation must be smaller than the hull diameter".to_string(),
        ));
    }
    let shifted = k.affine_image(&Rational::from_integer(1.into()), r)?;
    let mut avoid: Vec<Enclosure> = Vec::new();
    let mut out = Vec::with_capacity(count);
    for _ in 0..count {
        let cert = gap_lemma_point(k, &shifted, target_width, &avoid, Mode::Hky, depth_budget)?;
        let x = cert.point_box.clone();
        let y = Enclosure { lo: &x.lo - r, hi: &x.hi - r };
        avoid.push(x.clone());
        out.push(TranslatedPair { x, y, r: r.clone(), cert });
    }
    Ok(out)
}

/// A pair of special planar points realizing a prescribed distance: first
/// coordinates at exact offset `r` inside certified boxes, second coordinates
/// carried over exactly from the request.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpecialPair {
    pub x1: Enclosure,
    pub x2: Rational,
    pub y1: Enclosure,
    pub y2: Rational,
    /// `x1 = y1 + r` exactly, enclosure for enclosure.
    pub r: Rational,
    pub cert: IntersectionEnclosure,
}

/// Replace the first coordinates of `x` and `y` by special (non-gap-endpoint)
/// members of `K1` with the same difference, keeping the second coordinates,
/// so the distance between the two planar points is preserved exactly.
pub fn special_pair_for_distance(
    k1: &CantorSpec,
    k2: &CantorSpec,
    x: &(Rational, Rational),
    y: &(Rational, Rational),
    target_width: &Rational,
    depth_budget: u32,
) -> Result<SpecialPair> {
    if x == y {
        return Err(Error::InvalidParameter("distinct points required".to_string()));
    }
    for p1 in [&x.0, &y.0] {
        if !matches!(k1.classify(p1, 64), Classification::Inside { .. }) {
            return Err(Error::InvalidParameter(
                "first coordinates must belong to the first set".to_string(),
            ));
        }
    }
    let h2 = k2.hull();
    for p2 in [&x.1, &y.1] {
        if p2 <= &h2.0 || p2 >= &h2.1 {
            return Err(Error::InvalidParameter(
                "second coordinates must be strictly between the extremes of the second set"
                    .to_string(),
            ));
        }
        if !matches!(k2.classify(p2, 64), Classification::Inside { .. }) {
            return Err(Error::InvalidParameter(
                "second coordinates must belong to the second set".to_string(),
            ));
        }
    }
    let r = &x.0 - &y.0;
    let pair = translated_self_intersection(k1, &r, 1, target_width, depth_budget)?
        .pop()
        .expect("count = 1");
    Ok(SpecialPair {
        x1: pair.x,
        x2: x.1.clone(),
        y1: pair.y,
        y2: y.1.clone(),
        r,
        cert: pair.cert,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cantor::middle_third;
    use crate::scalar::ratio;

    fn mid(n: i64, d: i64) -> CantorSpec {
        CantorSpec::middle_alpha(&ratio(n, d)).unwrap()
    }

    #[test]
    fn interleaved_examples() {
        let a = mid(1, 4);
        let b = a.affine_image(&ratio(1, 1), &ratio(1, 5)).unwrap();
        let w = interleaved(&a, &b).unwrap();
        assert!(w.a_in_b > ratio(1, 5) && w.a_in_b < ratio(6, 5));
        assert!(w.b_in_a > ratio(0, 1) && w.b_in_a < ratio(1, 1));
        // Disjoint hulls.
        let c = middle_third();
        let far = c.affine_image(&ratio(1, 1), &ratio(2, 1)).unwrap();
        assert!(interleaved(&c, &far).is_none());
        // Hulls touching at a single point.
        let touch = c.affine_image(&ratio(1, 1), &ratio(1, 1)).unwrap();
        assert!(interleaved(&c, &touch).is_none());
    }

    #[test]
    fn gap_lemma_point_finds_box() {
        let a = mid(1, 4);
        let b = a.affine_image(&ratio(1, 1), &ratio(1, 5)).unwrap();
        let cert = gap_lemma_point(
            &a,
            &b,
            &ratio(1, 1_000_000),
            &[],
            Mode::NewhouseOnly,
            96,
        )
        .unwrap();
        assert!(cert.point_box.width() <= ratio(1, 1_000_000));
        verify_chain(&a, &b, &cert).unwrap();
        // The box must meet the brute-force depth-12 approximant intersection.
        let pa = a.refine(12).unwrap();
        let pb = b.refine(12).unwrap();
        let hit = pa.pieces.iter().any(|(alo, ahi)| {
            pb.pieces.iter().any(|(blo, bhi)| {
                let lo = alo.clone().max(blo.clone()).max(cert.point_box.lo.clone());
                let hi = ahi.clone().min(bhi.clone()).min(cert.point_box.hi.clone());
                lo <= hi
            })
        });
        assert!(hit);
    }

    #[test]
    fn gap_lemma_point_condition_violation() {
        let c = middle_third();
        let b = c.affine_image(&ratio(1, 1), &ratio(1, 5)).unwrap();
        // tau = 1 on both sides: Newhouse needs a strict product above 1.
        let r = gap_lemma_point(&c, &b, &ratio(1, 100), &[], Mode::NewhouseOnly, 32);
        assert!(matches!(r, Err(Error::ConditionViolation(_))));
        // middle-1/4 fails HKY but passes Newhouse.
        let a = mid(1, 4);
        let b = a.affine_image(&ratio(1, 1), &ratio(1, 5)).unwrap();
        let r = gap_lemma_point(&a, &b, &ratio(1, 100), &[], Mode::Hky, 32);
        assert!(matches!(r, Err(Error::ConditionViolation(_))));
    }

    #[test]
    fn self_intersection_identity() {
        let a = mid(1, 6);
        let cert =
            gap_lemma_point(&a, &a, &ratio(1, 1000), &[], Mode::Hky, 64).unwrap();
        verify_chain(&a, &a, &cert).unwrap();
    }

    #[test]
    fn translated_pairs_are_disjoint_and_exact() {
        let k = mid(1, 6);
        let pairs =
            translated_self_intersection(&k, &ratio(59, 144), 2, &ratio(1, 10_000), 96).unwrap();
        assert_eq!(pairs.len(), 2);
        for p in &pairs {
            assert_eq!(&p.x.lo - &p.y.lo, ratio(59, 144));
            assert_eq!(&p.x.hi - &p.y.hi, ratio(59, 144));
        }
        assert!(!pairs[0].x.intersects(&pairs[1].x));
        // Thin set fails the self-HKY requirement.
        let r = translated_self_intersection(&middle_third(), &ratio(1, 5), 1, &ratio(1, 100), 32);
        assert!(matches!(r, Err(Error::ConditionViolation(_))));
        // Oversized translation.
        let r = translated_self_intersection(&k, &ratio(3, 2), 1, &ratio(1, 100), 32);
        assert!(matches!(r, Err(Error::InvalidParameter(_))));
    }

    #[test]
    fn special_pair_seed_example() {
        let k = mid(1, 6);
        let x = (ratio(25, 144), ratio(25, 144));
        let y = (ratio(7, 12), ratio(7, 12));
        let p = special_pair_for_distance(&k, &k, &x, &y, &ratio(1, 10_000), 96).unwrap();
        assert_eq!(p.r, ratio(-59, 144));
        assert_eq!(&p.x1.lo - &p.y1.lo, ratio(-59, 144));
        assert_eq!(p.x2, ratio(25, 144));
        assert_eq!(p.y2, ratio(7, 12));
        // Degenerate and extreme-coordinate inputs are rejected.
        assert!(special_pair_for_distance(&k, &k, &x, &x, &ratio(1, 100), 32).is_err());
        let bad = (ratio(1, 4), ratio(0, 1));
        assert!(special_pair_for_distance(&k, &k, &bad, &y, &ratio(1, 100), 32).is_err());
    }

    #[test]
    fn tampered_chain_fails_replay() {
        let a = mid(1, 6);
        let b = a.affine_image(&ratio(1, 1), &ratio(1, 7)).unwrap();
        let mut cert =
            gap_lemma_point(&a, &b, &ratio(1, 1000), &[], Mode::Hky, 64).unwrap();
        verify_chain(&a, &b, &cert).unwrap();
        cert.point_box.hi = &cert.point_box.hi + ratio(1, 10);
        assert!(verify_chain(&a, &b, &cert).is_err());
    }
}
