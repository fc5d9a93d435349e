//! Gap/bridge analysis, thickness and epsilon-thickness, and the Newhouse /
//! Hunt-Kan-Yorke condition checks.
//!
//! For a bounded gap `G` with endpoint `u`, the bridge `B(u)` runs from `u`
//! to the near end of the closest gap beyond `u` whose length is at least
//! `|G|` (the hull endpoint when no such gap exists). Local thickness is
//! `|B(u)| / |G|`; the thickness of the set is the infimum over bounded-gap
//! endpoints.
//!
//! For the self-similar specs of this crate the infimum is attained among the
//! depth-1 gap endpoints: every gap strictly inside the open interior of a
//! cylinder is the image of a gap of the whole set under the cylinder map, so
//! a deeper endpoint either reproduces the local thickness of its top-level
//! counterpart exactly (bridge terminating inside the cylinder) or exceeds it
//! (bridge escaping the cylinder). This makes `thickness` exact for pure
//! specs; window restrictions fall back to certified bounds when exactness
//! cannot be established.

use alloc::format;
use alloc::string::ToString;
use alloc::vec::Vec;

use num_traits::{One, Signed};

use crate::cantor::{CantorSpec, Classification, EndpointStatus, Gap, GapList, SubCantor};
use crate::error::{Error, Result};
use crate::scalar::{int, ln_enclosure, ratio, Enclosure, Rational};

/// Scan direction for a bridge: the side of the gap the endpoint is on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

/// The bridge at a gap endpoint: `[u, far_end]` (or `[far_end, u]`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bridge {
    pub endpoint_u: Rational,
    pub far_end: Rational,
    pub side: Side,
    /// The reference gap whose endpoint `u` is.
    pub gap: Gap,
}

impl Bridge {
    pub fn len(&self) -> Rational {
        (&self.far_end - &self.endpoint_u).abs()
    }
}

fn find_reference_gap(gaps: &GapList, u: &Rational, side: Side) -> Option<Gap> {
    gaps.gaps
        .iter()
        .find(|g| match side {
            Side::Right => &g.right == u,
            Side::Left => &g.left == u,
        })
        .cloned()
}

/// Far end of the bridge at `u` scanning in `side` direction, counting gaps
/// of length `>= qualify_len` as terminators. Falls back to the hull endpoint
/// (the `b = infinity` convention).
fn scan_far_end(gaps: &GapList, u: &Rational, side: Side, qualify_len: &Rational) -> Rational {
    match side {
        Side::Right => gaps
            .gaps
            .iter()
            .filter(|g| &g.left >= u)
            .find(|g| &g.len() >= qualify_len)
            .map(|g| g.left.clone())
            .unwrap_or_else(|| gaps.hull.1.clone()),
        Side::Left => gaps
            .gaps
            .iter()
            .rev()
            .filter(|g| &g.right <= u)
            .find(|g| &g.len() >= qualify_len)
            .map(|g| g.right.clone())
            .unwrap_or_else(|| gaps.hull.0.clone()),
    }
}

/// Bridge at a bounded-gap endpoint `u`. The gap list must provably contain
/// every gap at least as long as the reference gap.
pub fn bridge_at(gaps: &GapList, u: &Rational, side: Side) -> Result<Bridge> {
    let gap = find_reference_gap(gaps, u, side).ok_or_else(|| {
        Error::InvalidParameter(format!("{u} is not a matching gap endpoint in the list"))
    })?;
    let glen = gap.len();
    if !gaps.covers(&glen) {
        return Err(Error::IncompleteGaps { required_len: glen });
    }
    let far_end = scan_far_end(gaps, u, side, &glen);
    Ok(Bridge { endpoint_u: u.clone(), far_end, side, gap })
}

/// Exact local thickness `|B(u)| / |G|`.
pub fn local_thickness(gaps: &GapList, u: &Rational, side: Side) -> Result<Rational> {
    let b = bridge_at(gaps, u, side)?;
    Ok(b.len() / b.gap.len())
}

fn eps_qualify_len(glen: &Rational, epsilon: &Rational) -> Rational {
    (Rational::one() - epsilon) * glen
}

/// Epsilon-bridge local value: gaps of length `>= (1 - eps) * |G|` terminate
/// the scan. At `eps = 0` this coincides with `local_thickness`.
pub fn eps_local_thickness(
    gaps: &GapList,
    u: &Rational,
    side: Side,
    epsilon: &Rational,
) -> Result<Rational> {
    check_epsilon(epsilon)?;
    let gap = find_reference_gap(gaps, u, side).ok_or_else(|| {
        Error::InvalidParameter(format!("{u} is not a matching gap endpoint in the list"))
    })?;
    let glen = gap.len();
    let q = eps_qualify_len(&glen, epsilon);
    if !gaps.covers(&q) {
        return Err(Error::IncompleteGaps { required_len: q });
    }
    let far = scan_far_end(gaps, u, side, &q);
    Ok((far - u).abs() / glen)
}

fn check_epsilon(epsilon: &Rational) -> Result<()> {
    if epsilon.is_negative() || epsilon >= &Rational::one() {
        return Err(Error::InvalidParameter("epsilon must lie in [0, 1)".to_string()));
    }
    Ok(())
}

/// Epsilon-thickness over a finite gap list: infimum of the epsilon-local
/// values over every endpoint of every listed gap. Refuses (like `bridge_at`)
/// when the list's completeness guarantee does not reach the qualifying
/// length of some listed gap.
pub fn eps_thickness(gaps: &GapList, epsilon: &Rational) -> Result<Rational> {
    check_epsilon(epsilon)?;
    let mut min: Option<Rational> = None;
    for g in &gaps.gaps {
        for (u, side) in [(&g.left, Side::Left), (&g.right, Side::Right)] {
            let v = eps_local_thickness(gaps, u, side, epsilon)?;
            if min.as_ref().map(|m| &v < m).unwrap_or(true) {
                min = Some(v);
            }
        }
    }
    min.ok_or_else(|| Error::InvalidParameter("gap list has no bounded gaps".to_string()))
}

/// Thickness value with certified two-sided bounds and a witness endpoint.
/// `exact` means `lower == upper == value`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ThicknessReport {
    pub lower: Rational,
    pub upper: Rational,
    pub witness_endpoint: Rational,
    pub witness_depth: u32,
    pub depth_used: u32,
}

impl ThicknessReport {
    pub fn is_exact(&self) -> bool {
        self.lower == self.upper
    }

    pub fn value(&self) -> Option<&Rational> {
        if self.is_exact() {
            Some(&self.upper)
        } else {
            None
        }
    }
}

/// Local thickness at every endpoint of every gap born at depth <= `depth`,
/// computed against a complete-enough gap list.
fn local_values_up_to(
    spec: &CantorSpec,
    depth: u32,
) -> Result<Vec<(Rational, Side, Rational, Bridge)>> {
    let born = spec.gaps_up_to(depth)?;
    let min_len = born
        .gaps
        .iter()
        .map(|g| g.len())
        .min()
        .ok_or_else(|| Error::InvalidParameter("no gaps at requested depth".to_string()))?;
    let complete = spec.gaps_longer_than(&min_len)?;
    let mut out = Vec::new();
    for g in &born.gaps {
        for (u, side) in [(g.left.clone(), Side::Left), (g.right.clone(), Side::Right)] {
            let b = bridge_at(&complete, &u, side)?;
            let v = b.len() / b.gap.len();
            out.push((u, side, v, b));
        }
    }
    Ok(out)
}

/// Exact thickness of a pure spec: minimum of the depth-1 endpoint values.
pub fn thickness(spec: &CantorSpec) -> Result<ThicknessReport> {
    let vals = local_values_up_to(spec, 1)?;
    let (u, _, v, _) = vals
        .iter()
        .min_by(|a, b| a.2.cmp(&b.2))
        .expect("a spec always has at least one depth-1 gap")
        .clone();
    Ok(ThicknessReport {
        lower: v.clone(),
        upper: v,
        witness_endpoint: u,
        witness_depth: 1,
        depth_used: 1,
    })
}

/// Exact epsilon-thickness of a pure spec, by the same depth-1 reduction
/// (the qualifying predicate is scale-invariant).
pub fn eps_thickness_pure(spec: &CantorSpec, epsilon: &Rational) -> Result<Rational> {
    check_epsilon(epsilon)?;
    let born = spec.gaps_up_to(1)?;
    let min_len = born.gaps.iter().map(|g| g.len()).min().unwrap();
    let q = eps_qualify_len(&min_len, epsilon);
    let complete = spec.gaps_longer_than(&q)?;
    let mut min: Option<Rational> = None;
    for g in &born.gaps {
        for (u, side) in [(&g.left, Side::Left), (&g.right, Side::Right)] {
            let v = eps_local_thickness(&complete, u, side, epsilon)?;
            if min.as_ref().map(|m| &v < m).unwrap_or(true) {
                min = Some(v);
            }
        }
    }
    Ok(min.unwrap())
}

/// Smallest local-thickness value realized by an endpoint whose gap and
/// bridge both fit strictly inside a depth-1 cylinder. Such configurations
/// replicate exactly inside every cylinder copy of the set, so the value is
/// attained inside every window that contains a full cylinder.
fn min_replicable_value(spec: &CantorSpec, scan_depth: u32) -> Result<Option<Rational>> {
    let vals = local_values_up_to(spec, scan_depth)?;
    let hull = spec.hull();
    let depth1: Vec<(Rational, Rational)> =
        (0..spec.child_count()).map(|i| spec.child_interval(hull, i)).collect();
    let mut min: Option<Rational> = None;
    for (_, _, v, b) in &vals {
        let lo = b.gap.left.clone().min(b.endpoint_u.clone().min(b.far_end.clone()));
        let hi = b.gap.right.clone().max(b.endpoint_u.clone().max(b.far_end.clone()));
        let contained = depth1.iter().any(|(a, z)| a <= &lo && &hi <= z);
        if contained && min.as_ref().map(|m| v < m).unwrap_or(true) {
            min = Some(v.clone());
        }
    }
    Ok(min)
}

/// Thickness of a window restriction `K` intersected with `J`. Exact whenever
/// either the examined minimum does not exceed the pure thickness, or the
/// pure minimum is replicable inside cylinders; otherwise certified bounds.
pub fn thickness_windowed(sub: &SubCantor) -> Result<ThicknessReport> {
    let spec = sub.base();
    let window = sub.window();
    if window == spec.hull() {
        return thickness(spec);
    }
    let pure = thickness(spec)?;
    let tau_pure = pure.upper.clone();
    let replicable = min_replicable_value(spec, 5)?;

    // Depth of the gaps whose endpoints bound the window.
    let mut d0 = 0u32;
    for e in [&window.0, &window.1] {
        if let Classification::Inside {
            endpoint: EndpointStatus::GapEndpoint { gap, .. }, ..
        } = spec.classify(e, 64)
        {
            d0 = d0.max(gap.birth_depth);
        }
    }
    let mut depth = (d0 + 6).max(6);
    loop {
        let born = spec.gaps_up_to(depth)?.restrict(window);
        if born.gaps.is_empty() {
            depth += 2;
            if depth > 40 {
                return Err(Error::DepthExhausted(
                    "no bounded gaps found inside the window".to_string(),
                ));
            }
            continue;
        }
        let min_len = born.gaps.iter().map(|g| g.len()).min().unwrap();
        let complete = spec.gaps_longer_than(&min_len)?.restrict(window);
        let mut best: Option<(Rational, Rational, u32)> = None;
        for g in &born.gaps {
            for (u, side) in [(&g.left, Side::Left), (&g.right, Side::Right)] {
                let v = local_thickness(&complete, u, side)?;
                if best.as_ref().map(|(bv, _, _)| &v < bv).unwrap_or(true) {
                    best = Some((v, u.clone(), g.birth_depth));
                }
            }
        }
        let (examined_min, witness, wd) = best.unwrap();
        // Unexamined endpoints live inside full cylinder copies contained in
        // the window, so their values are at least the pure thickness.
        if examined_min <= tau_pure {
            return Ok(ThicknessReport {
                lower: examined_min.clone(),
                upper: examined_min,
                witness_endpoint: witness,
                witness_depth: wd,
                depth_used: depth,
            });
        }
        if replicable.as_ref() == Some(&tau_pure) {
            // The pure minimum is attained arbitrarily deep inside the window.
            return Ok(ThicknessReport {
                lower: tau_pure.clone(),
                upper: tau_pure,
                witness_endpoint: pure.witness_endpoint,
                witness_depth: pure.witness_depth,
                depth_used: depth,
            });
        }
        return Ok(ThicknessReport {
            lower: tau_pure.min(examined_min.clone()),
            upper: examined_min,
            witness_endpoint: witness,
            witness_depth: wd,
            depth_used: depth,
        });
    }
}

/// Certified lower bound on the true epsilon-thickness of `K` intersected
/// with `J`: the minimum of the examined windowed values and the exact pure
/// epsilon-thickness (which bounds every value inside full cylinder copies).
pub fn eps_thickness_windowed_lower(
    sub: &SubCantor,
    epsilon: &Rational,
    depth: u32,
) -> Result<Rational> {
    check_epsilon(epsilon)?;
    let spec = sub.base();
    let window = sub.window();
    let pure_eps = eps_thickness_pure(spec, epsilon)?;
    let born = spec.gaps_up_to(depth)?.restrict(window);
    if born.gaps.is_empty() {
        return Ok(pure_eps);
    }
    let min_len = born.gaps.iter().map(|g| g.len()).min().unwrap();
    let q = eps_qualify_len(&min_len, epsilon);
    let complete = spec.gaps_longer_than(&q)?.restrict(window);
    let mut min = pure_eps;
    for g in &born.gaps {
        for (u, side) in [(&g.left, Side::Left), (&g.right, Side::Right)] {
            let v = eps_local_thickness(&complete, u, side, epsilon)?;
            if v < min {
                min = v;
            }
        }
    }
    Ok(min)
}

fn check_positive(t: &Rational, name: &str) -> Result<()> {
    if !t.is_positive() {
        return Err(Error::InvalidParameter(format!("{name} must be positive")));
    }
    Ok(())
}

/// Newhouse condition: `t1 * t2 > 1`, exact.
pub fn check_newhouse(t1: &Rational, t2: &Rational) -> Result<bool> {
    check_positive(t1, "t1")?;
    check_positive(t2, "t2")?;
    Ok(t1 * t2 > Rational::one())
}

/// Result of the three-inequality Hunt-Kan-Yorke check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HkyResult {
    pub satisfied: bool,
    /// The ordered pair `(tau1, tau2)` the residuals refer to (larger first).
    pub ordering_used: (Rational, Rational),
    /// `tau1 - tau2`, `tau1 - (tau2^2 + 3 tau2 + 1)/tau2^2`,
    /// `tau2 - (2 tau1 + 1)^2 / tau1^3`. Satisfied iff the first is >= 0 and
    /// the others are > 0.
    pub residuals: [Rational; 3],
}

fn hky_residuals(t1: &Rational, t2: &Rational) -> [Rational; 3] {
    let r1 = t1 - t2;
    let r2 = t1 - (t2 * t2 + int(3) * t2 + Rational::one()) / (t2 * t2);
    let two_t1_plus_1 = int(2) * t1 + Rational::one();
    let r3 = t2 - (&two_t1_plus_1 * &two_t1_plus_1) / (t1 * t1 * t1);
    [r1, r2, r3]
}

/// Hunt-Kan-Yorke thickness condition for the pair; the larger value is
/// placed first (either ordering is allowed and only the sorted one can pass
/// the first inequality).
pub fn check_hky(t1: &Rational, t2: &Rational) -> Result<HkyResult> {
    check_positive(t1, "t1")?;
    check_positive(t2, "t2")?;
    let (a, b) = if t1 >= t2 { (t1.clone(), t2.clone()) } else { (t2.clone(), t1.clone()) };
    let residuals = hky_residuals(&a, &b);
    let satisfied =
        !residuals[0].is_negative() && residuals[1].is_positive() && residuals[2].is_positive();
    Ok(HkyResult { satisfied, ordering_used: (a, b), residuals })
}

/// True when every pair `(s, t2)` with `s >= lower_bound_t1` satisfies the
/// Hunt-Kan-Yorke condition. Uses the condition's monotonicity together with
/// the fact that `(2s + 1)^2 / s^3` is decreasing in `s`.
pub fn hky_for_all_first_at_least(lower_bound_t1: &Rational, t2: &Rational) -> Result<bool> {
    check_positive(lower_bound_t1, "lower_bound_t1")?;
    check_positive(t2, "t2")?;
    if lower_bound_t1 >= t2 {
        Ok(check_hky(lower_bound_t1, t2)?.satisfied)
    } else {
        Ok(check_hky(t2, lower_bound_t1)?.satisfied && check_hky(t2, t2)?.satisfied)
    }
}

/// Certified enclosure of `log 2 / log(2 + 1/t)`, the Hausdorff dimension
/// lower bound implied by thickness `t`. Exact when `2 + 1/t` is an integer
/// power of two.
pub fn hausdorff_lower_bound(t: &Rational, precision: &Rational) -> Result<Enclosure> {
    check_positive(t, "t")?;
    if !precision.is_positive() {
        return Err(Error::InvalidParameter("precision must be positive".to_string()));
    }
    let arg = int(2) + t.recip();
    // Exact case: arg = 2^k.
    if arg.denom().is_one() {
        let mag = arg.numer().magnitude();
        if let Some(k) = mag.trailing_zeros() {
            if k >= 1 && (mag >> (k as usize)).is_one() {
                return Ok(Enclosure::point(ratio(1, k as i64)));
            }
        }
    }
    let mut target = precision.clone() / int(4);
    loop {
        let ln2 = ln_enclosure(&int(2), &target)?;
        let lna = ln_enclosure(&arg, &target)?;
        let out = ln2.div(&lna)?;
        if &out.width() <= precision {
            return Ok(out);
        }
        target /= int(4);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cantor::middle_third;
    use crate::scalar::ratio;

    fn mid(alpha_n: i64, alpha_d: i64) -> CantorSpec {
        CantorSpec::middle_alpha(&ratio(alpha_n, alpha_d)).unwrap()
    }

    #[test]
    fn bridge_examples_middle_third() {
        let c = middle_third();
        let gaps = c.gaps_longer_than(&ratio(1, 729)).unwrap();
        let b = bridge_at(&gaps, &ratio(2, 3), Side::Right).unwrap();
        assert_eq!(b.far_end, ratio(1, 1));
        assert_eq!(b.len(), ratio(1, 3));
        // u = 8/27, right endpoint of gap (7/27, 8/27): bridge reaches 1/3.
        let b = bridge_at(&gaps, &ratio(8, 27), Side::Right).unwrap();
        assert_eq!(b.far_end, ratio(1, 3));
        assert_eq!(b.len(), ratio(1, 27));
    }

    #[test]
    fn bridge_windowed_restriction() {
        let c = middle_third();
        let gaps =
            c.gaps_longer_than(&ratio(1, 729)).unwrap().restrict(&(ratio(2, 9), ratio(7, 9)));
        let b = bridge_at(&gaps, &ratio(1, 3), Side::Left).unwrap();
        assert_eq!(b.far_end, ratio(2, 9));
        assert_eq!(b.len(), ratio(1, 9));
        assert_eq!(local_thickness(&gaps, &ratio(1, 3), Side::Left).unwrap(), ratio(1, 3));
    }

    #[test]
    fn bridge_rejects_incomplete_list() {
        let c = middle_third();
        // Only the depth-1 gap, claimed complete only above 1/9.
        let gaps = c.gaps_up_to(1).unwrap();
        // Reference gap has length 1/3 > 1/9, fine:
        assert!(bridge_at(&gaps, &ratio(2, 3), Side::Right).is_ok());
        // A depth-2 list guarantees nothing below 1/27; a large epsilon drops
        // the qualifying length to 1/60, so the scan must refuse.
        let gaps2 = c.gaps_up_to(2).unwrap();
        let r = eps_local_thickness(&gaps2, &ratio(2, 3), Side::Right, &ratio(19, 20));
        assert!(matches!(r, Err(Error::IncompleteGaps { .. })));
    }

    #[test]
    fn local_thickness_middle_sixth() {
        let c = mid(1, 6);
        let gaps = c.gaps_longer_than(&ratio(1, 1000)).unwrap();
        assert_eq!(local_thickness(&gaps, &ratio(7, 12), Side::Right).unwrap(), ratio(5, 2));
    }

    #[test]
    fn thickness_closed_form() {
        for (n, d) in [(1i64, 3i64), (1, 4), (1, 6), (1, 10)] {
            let alpha = ratio(n, d);
            let c = CantorSpec::middle_alpha(&alpha).unwrap();
            let expect = (Rational::one() - &alpha) / (int(2) * &alpha);
            let r = thickness(&c).unwrap();
            assert!(r.is_exact());
            assert_eq!(r.upper, expect, "alpha = {n}/{d}");
        }
    }

    #[test]
    fn thickness_restriction_example() {
        let sub =
            SubCantor::new(middle_third(), (ratio(2, 9), ratio(7, 9))).unwrap();
        let r = thickness_windowed(&sub).unwrap();
        assert!(r.is_exact());
        assert_eq!(r.upper, ratio(1, 3));
    }

    #[test]
    fn thickness_affine_invariance() {
        let c = mid(1, 6);
        let img = c.affine_image(&ratio(-7, 3), &ratio(2, 11)).unwrap();
        assert_eq!(thickness(&c).unwrap().upper, thickness(&img).unwrap().upper);
    }

    #[test]
    fn eps_thickness_examples() {
        let c = middle_third();
        assert_eq!(eps_thickness_pure(&c, &ratio(0, 1)).unwrap(), ratio(1, 1));
        // Small epsilon does not admit any new qualifying gaps.
        assert_eq!(eps_thickness_pure(&c, &ratio(1, 10)).unwrap(), ratio(1, 1));
        // At eps = 3/4 the depth-2 gaps (length 1/9 >= (1/4)(1/3)) terminate
        // the scan from 2/3 at 7/9, giving (1/9)/(1/3) = 1/3.
        assert_eq!(eps_thickness_pure(&c, &ratio(3, 4)).unwrap(), ratio(1, 3));
        assert!(eps_thickness_pure(&c, &ratio(1, 1)).is_err());
        assert!(eps_thickness_pure(&c, &ratio(-1, 10)).is_err());
        // List form: depth-3 list, small epsilon keeps every bridge intact.
        let gaps = c.gaps_up_to(3).unwrap();
        assert_eq!(eps_thickness(&gaps, &ratio(0, 1)).unwrap(), ratio(1, 1));
        assert_eq!(eps_thickness(&gaps, &ratio(1, 10)).unwrap(), ratio(1, 1));
        // Monotone: fewer gaps qualify as epsilon grows.
        let e0 = eps_thickness(&gaps, &ratio(0, 1)).unwrap();
        let e1 = eps_thickness(&gaps, &ratio(1, 10)).unwrap();
        assert!(e0 >= e1);
    }

    #[test]
    fn eps_equals_thickness_at_zero() {
        for (n, d) in [(1i64, 3i64), (1, 6), (1, 4)] {
            let c = mid(n, d);
            assert_eq!(
                eps_thickness_pure(&c, &ratio(0, 1)).unwrap(),
                thickness(&c).unwrap().upper
            );
        }
    }

    #[test]
    fn newhouse_examples() {
        assert!(check_newhouse(&ratio(3, 2), &ratio(3, 2)).unwrap());
        assert!(!check_newhouse(&ratio(1, 1), &ratio(1, 1)).unwrap());
        assert!(check_newhouse(&ratio(5, 2), &ratio(5, 2)).unwrap());
        assert!(check_newhouse(&ratio(-1, 2), &ratio(1, 1)).is_err());
    }

    #[test]
    fn hky_examples() {
        let r = check_hky(&ratio(5, 2), &ratio(5, 2)).unwrap();
        assert!(r.satisfied);
        assert_eq!(r.residuals[0], ratio(0, 1));
        assert_eq!(r.residuals[1], ratio(7, 50));
        assert_eq!(r.residuals[2], ratio(49, 250));
        let r = check_hky(&ratio(3, 2), &ratio(3, 2)).unwrap();
        assert!(!r.satisfied);
        assert!(r.residuals[1].is_negative());
        assert!(!check_hky(&ratio(1, 1), &ratio(1, 1)).unwrap().satisfied);
    }

    #[test]
    fn hky_lower_bound_propagation() {
        // Everything at or above 2.325 paired with 5/2 satisfies the condition.
        assert!(hky_for_all_first_at_least(&ratio(93, 40), &ratio(5, 2)).unwrap());
        assert!(!hky_for_all_first_at_least(&ratio(1, 1), &ratio(5, 2)).unwrap());
    }

    #[test]
    fn hausdorff_examples() {
        // tau = 1/2 gives 2 + 1/t = 4, exactly 1/2.
        let e = hausdorff_lower_bound(&ratio(1, 2), &ratio(1, 1_000_000)).unwrap();
        assert!(e.is_point());
        assert_eq!(e.lo, ratio(1, 2));
        // tau = 1 gives log2/log3 = 0.6309297535714...
        let e = hausdorff_lower_bound(&ratio(1, 1), &ratio(1, 1_000_000)).unwrap();
        assert!(e.width() <= ratio(1, 1_000_000));
        let approx = ratio(630_930, 1_000_000);
        assert!((&e.lo - &approx).abs() < ratio(2, 1_000_000));
        // Monotone in t, below 1.
        let big = hausdorff_lower_bound(&int(1_000_000), &ratio(1, 1_000_000)).unwrap();
        assert!(big.hi < Rational::one());
        assert!(big.lo > e.hi);
    }
}
