//! Exact representation, refinement, and restriction of self-similar Cantor
//! sets on the line.
//!
//! A [`CantorSpec`] presents the attractor of an iterated function system of
//! orientation-preserving affine contractions with a common layout: the hull
//! `[a, b]` carries `k >= 2` children, each a scaled copy of the whole set,
//! separated by positive gaps. Hull endpoints always belong to the set.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::ToString;
use alloc::vec;
use alloc::vec::Vec;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::scalar::{int, ratio, Rational};

/// Hard cap on the number of pieces a single refinement may materialize.
const MAX_PIECES: u64 = 1 << 22;

/// Finitely presented self-similar Cantor set: hull plus child placements
/// given as `(offset, length)` pairs relative to unit scale.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CantorSpec {
    hull: (Rational, Rational),
    children: Vec<(Rational, Rational)>,
}

impl CantorSpec {
    pub fn new(hull: (Rational, Rational), children: Vec<(Rational, Rational)>) -> Result<Self> {
        if hull.0 >= hull.1 {
            return Err(Error::InvalidParameter("hull must have positive length".to_string()));
        }
        if children.len() < 2 {
            return Err(Error::InvalidParameter("at least two children required".to_string()));
        }
        if !children[0].0.is_zero() {
            return Err(Error::InvalidParameter("first child must start at offset 0".to_string()));
        }
        let one = Rational::one();
        let last = children.last().unwrap();
        if &last.0 + &last.1 != one {
            return Err(Error::InvalidParameter("last child must end at offset 1".to_string()));
        }
        for (off, len) in &children {
            if !len.is_positive() {
                return Err(Error::InvalidParameter("child lengths must be positive".to_string()));
            }
            if len >= &one {
                return Err(Error::InvalidParameter("child lengths must be below 1".to_string()));
            }
            if off.is_negative() {
                return Err(Error::InvalidParameter("child offsets must be non-negative".to_string()));
            }
        }
        for w in children.windows(2) {
            if &w[0].0 + &w[0].1 >= w[1].0 {
                return Err(Error::InvalidParameter(
                    "children must be separated by positive gaps".to_string(),
                ));
            }
        }
        Ok(CantorSpec { hull, children })
    }

    /// The middle-alpha Cantor set on `[0, 1]`: two children of length
    /// `(1 - alpha) / 2` at offsets `0` and `(1 + alpha) / 2`.
    pub fn middle_alpha(alpha: &Rational) -> Result<Self> {
        if !alpha.is_positive() || alpha >= &Rational::one() {
            return Err(Error::InvalidParameter("alpha must lie in (0, 1)".to_string()));
        }
        let beta = (Rational::one() - alpha) / int(2);
        let second = (Rational::one() + alpha) / int(2);
        CantorSpec::new(
            (Rational::zero(), Rational::one()),
            vec![(Rational::zero(), beta.clone()), (second, beta)],
        )
    }

    pub fn hull(&self) -> &(Rational, Rational) {
        &self.hull
    }

    pub fn hull_len(&self) -> Rational {
        &self.hull.1 - &self.hull.0
    }

    pub fn children(&self) -> &[(Rational, Rational)] {
        &self.children
    }

    pub fn child_count(&self) -> usize {
        self.children.len()
    }

    /// Largest child length relative to unit scale.
    pub fn max_child_len(&self) -> Rational {
        self.children.iter().map(|(_, l)| l.clone()).max().unwrap()
    }

    /// Relative gaps `(start, length)` between consecutive children.
    pub fn relative_gaps(&self) -> Vec<(Rational, Rational)> {
        self.children
            .windows(2)
            .map(|w| {
                let start = &w[0].0 + &w[0].1;
                let len = &w[1].0 - &start;
                (start, len)
            })
            .collect()
    }

    pub fn max_relative_gap(&self) -> Rational {
        self.relative_gaps().into_iter().map(|(_, l)| l).max().unwrap()
    }

    /// Child `i` of the interval `[lo, hi]` under the spec's layout.
    pub fn child_interval(&self, interval: &(Rational, Rational), i: usize) -> (Rational, Rational) {
        let len = &interval.1 - &interval.0;
        let (off, l) = &self.children[i];
        let lo = &interval.0 + off * &len;
        let hi = &lo + l * &len;
        (lo, hi)
    }

    /// Gaps of the interval `[lo, hi]` between consecutive children.
    pub fn gap_intervals(&self, interval: &(Rational, Rational)) -> Vec<(Rational, Rational)> {
        let len = &interval.1 - &interval.0;
        self.relative_gaps()
            .into_iter()
            .map(|(start, l)| {
                let lo = &interval.0 + &start * &len;
                let hi = &lo + &l * &len;
                (lo, hi)
            })
            .collect()
    }

    /// The cylinder reached by following `path` from the hull.
    pub fn cylinder(&self, path: &[u32]) -> Result<(Rational, Rational)> {
        let mut cur = self.hull.clone();
        for &d in path {
            let i = d as usize;
            if i >= self.children.len() {
                return Err(Error::InvalidParameter(format!(
                    "child index {d} out of range (k = {})",
                    self.children.len()
                )));
            }
            cur = self.child_interval(&cur, i);
        }
        Ok(cur)
    }

    /// The affine image `scale * K + shift`, as a spec. Thickness is
    /// invariant: gap/bridge length ratios are preserved exactly.
    pub fn affine_image(&self, scale: &Rational, shift: &Rational) -> Result<CantorSpec> {
        if scale.is_zero() {
            return Err(Error::InvalidParameter("scale must be nonzero".to_string()));
        }
        let a = scale * &self.hull.0 + shift;
        let b = scale * &self.hull.1 + shift;
        if scale.is_positive() {
            CantorSpec::new((a, b), self.children.clone())
        } else {
            let one = Rational::one();
            let mut children: Vec<(Rational, Rational)> = self
                .children
                .iter()
                .map(|(off, len)| (&one - off - len, len.clone()))
                .collect();
            children.reverse();
            CantorSpec::new((b, a), children)
        }
    }

    /// Depth-`depth` construction intervals.
    pub fn refine(&self, depth: u32) -> Result<Approximant> {
        let k = self.children.len() as u64;
        let mut count: u64 = 1;
        for _ in 0..depth {
            count = count.checked_mul(k).ok_or_else(|| {
                Error::ResourceLimit(format!("refinement to depth {depth} overflows piece count"))
            })?;
            if count > MAX_PIECES {
                return Err(Error::ResourceLimit(format!(
                    "refinement to depth {depth} needs {count} pieces (cap {MAX_PIECES})"
                )));
            }
        }
        let mut pieces = vec![self.hull.clone()];
        for _ in 0..depth {
            let mut next = Vec::with_capacity(pieces.len() * self.children.len());
            for p in &pieces {
                for i in 0..self.children.len() {
                    next.push(self.child_interval(p, i));
                }
            }
            pieces = next;
        }
        Ok(Approximant { depth, pieces })
    }

    /// All bounded gaps with birth depth `<= depth`, sorted by left endpoint.
    pub fn gaps_up_to(&self, depth: u32) -> Result<GapList> {
        if depth < 1 {
            return Err(Error::InvalidParameter("depth must be at least 1".to_string()));
        }
        let k = self.children.len() as u64;
        let mut count: u64 = 1;
        for _ in 0..depth {
            count = count.saturating_mul(k);
            if count > MAX_PIECES {
                return Err(Error::ResourceLimit(format!(
                    "gap enumeration to depth {depth} exceeds piece cap"
                )));
            }
        }
        let mut gaps = Vec::new();
        let mut cylinders = vec![self.hull.clone()];
        for d in 1..=depth {
            let mut next = Vec::with_capacity(cylinders.len() * self.children.len());
            for c in &cylinders {
                for (lo, hi) in self.gap_intervals(c) {
                    gaps.push(Gap { left: lo, right: hi, birth_depth: d });
                }
                for i in 0..self.children.len() {
                    next.push(self.child_interval(c, i));
                }
            }
            cylinders = next;
        }
        gaps.sort_by(|a, b| a.left.cmp(&b.left));
        // Gaps born at depth > d have length <= hull_len * lmax^d * gmax.
        let mut bound = self.hull_len() * self.max_relative_gap();
        let lmax = self.max_child_len();
        for _ in 0..depth {
            bound *= &lmax;
        }
        Ok(GapList {
            hull: self.hull.clone(),
            gaps,
            completeness: Completeness::AllLongerThan(bound),
        })
    }

    /// Every gap of length `>= threshold`, sorted. The recursion prunes
    /// cylinders too small to contain a qualifying gap.
    pub fn gaps_longer_than(&self, threshold: &Rational) -> Result<GapList> {
        if !threshold.is_positive() {
            return Err(Error::InvalidParameter("threshold must be positive".to_string()));
        }
        let gmax = self.max_relative_gap();
        let mut gaps = Vec::new();
        let mut stack = vec![(self.hull.clone(), 1u32)];
        let mut visited: u64 = 0;
        while let Some((c, depth)) = stack.pop() {
            visited += 1;
            if visited > MAX_PIECES {
                return Err(Error::ResourceLimit(
                    "gap enumeration by length exceeds cylinder cap".to_string(),
                ));
            }
            for (lo, hi) in self.gap_intervals(&c) {
                if &hi - &lo >= *threshold {
                    gaps.push(Gap { left: lo, right: hi, birth_depth: depth });
                }
            }
            for i in 0..self.children.len() {
                let child = self.child_interval(&c, i);
                // No gap inside the child can exceed child_len * gmax.
                if (&child.1 - &child.0) * &gmax >= *threshold {
                    stack.push((child, depth + 1));
                }
            }
        }
        gaps.sort_by(|a, b| a.left.cmp(&b.left));
        Ok(GapList {
            hull: self.hull.clone(),
            gaps,
            completeness: Completeness::AllAtLeast(threshold.clone()),
        })
    }

    /// Locate `x` relative to the depth-`budget` construction.
    pub fn classify(&self, x: &Rational, budget: u32) -> Classification {
        if x < &self.hull.0 || x > &self.hull.1 {
            return Classification::Outside { gap: None };
        }
        if x == &self.hull.0 || x == &self.hull.1 {
            let digit = if x == &self.hull.0 { 0 } else { self.children.len() as u32 - 1 };
            return Classification::Inside {
                address: Address { digits: vec![digit] },
                endpoint: EndpointStatus::HullEndpoint,
            };
        }
        let mut digits = Vec::new();
        let mut cur = self.hull.clone();
        // Normalized position within the current cylinder; repetition of this
        // state means the address is eventually periodic.
        let mut seen: BTreeMap<Rational, u32> = BTreeMap::new();
        for depth in 0..budget {
            let clen = &cur.1 - &cur.0;
            let s = (x - &cur.0) / &clen;
            if let Some(&first) = seen.get(&s) {
                return Classification::Inside {
                    address: Address { digits },
                    endpoint: EndpointStatus::NonEndpoint { period: depth - first },
                };
            }
            seen.insert(s, depth);
            // Find the child containing x, or the gap.
            let mut placed = false;
            for (i, _) in self.children.iter().enumerate() {
                let child = self.child_interval(&cur, i);
                if x >= &child.0 && x <= &child.1 {
                    if x == &child.0 && i > 0 {
                        // Right endpoint of the gap preceding child i.
                        let gaps = self.gap_intervals(&cur);
                        let g = gaps[i - 1].clone();
                        digits.push(i as u32);
                        return Classification::Inside {
                            address: Address { digits },
                            endpoint: EndpointStatus::GapEndpoint {
                                gap: Gap { left: g.0, right: g.1, birth_depth: depth + 1 },
                                side: GapSide::Right,
                            },
                        };
                    }
                    if x == &child.1 && i + 1 < self.children.len() {
                        let gaps = self.gap_intervals(&cur);
                        let g = gaps[i].clone();
                        digits.push(i as u32);
                        return Classification::Inside {
                            address: Address { digits },
                            endpoint: EndpointStatus::GapEndpoint {
                                gap: Gap { left: g.0, right: g.1, birth_depth: depth + 1 },
                                side: GapSide::Left,
                            },
                        };
                    }
                    digits.push(i as u32);
                    cur = child;
                    placed = true;
                    break;
                }
            }
            if !placed {
                for (lo, hi) in self.gap_intervals(&cur) {
                    if x > &lo && x < &hi {
                        return Classification::Outside {
                            gap: Some(Gap { left: lo, right: hi, birth_depth: depth + 1 }),
                        };
                    }
                }
                unreachable!("x inside cylinder but neither in a child nor a gap");
            }
        }
        Classification::Inside {
            address: Address { digits },
            endpoint: EndpointStatus::UndecidedAtDepth(budget),
        }
    }

    /// True if `x` is a member that is a bounded-gap endpoint or a hull
    /// endpoint, decided within `budget` levels.
    pub fn is_gap_or_hull_endpoint(&self, x: &Rational, budget: u32) -> Result<bool> {
        match self.classify(x, budget) {
            Classification::Outside { .. } => Ok(false),
            Classification::Inside { endpoint, .. } => match endpoint {
                EndpointStatus::GapEndpoint { .. } | EndpointStatus::HullEndpoint => Ok(true),
                EndpointStatus::NonEndpoint { .. } => Ok(false),
                EndpointStatus::UndecidedAtDepth(d) => Err(Error::DepthExhausted(format!(
                    "endpoint status of point undecided at depth {d}"
                ))),
            },
        }
    }
}

/// Finite-depth realization of a spec: sorted disjoint closed intervals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Approximant {
    pub depth: u32,
    pub pieces: Vec<(Rational, Rational)>,
}

impl Approximant {
    /// Pieces clipped to a window whose endpoints lie in the set.
    pub fn clip(&self, window: &(Rational, Rational)) -> Approximant {
        let pieces = self
            .pieces
            .iter()
            .filter(|(lo, hi)| hi > &window.0 && lo < &window.1)
            .map(|(lo, hi)| (lo.clone().max(window.0.clone()), hi.clone().min(window.1.clone())))
            .collect();
        Approximant { depth: self.depth, pieces }
    }
}

/// A bounded gap: maximal open interval in the complement of the set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Gap {
    pub left: Rational,
    pub right: Rational,
    pub birth_depth: u32,
}

impl Gap {
    pub fn len(&self) -> Rational {
        &self.right - &self.left
    }
}

/// Which endpoint of its gap a member point is.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GapSide {
    /// The point is the left endpoint of the gap (set continues to its left).
    Left,
    /// The point is the right endpoint of the gap (set continues to its right).
    Right,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EndpointStatus {
    GapEndpoint { gap: Gap, side: GapSide },
    HullEndpoint,
    /// Eventually periodic address that never locks onto a child boundary.
    NonEndpoint { period: u32 },
    UndecidedAtDepth(u32),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Classification {
    Outside { gap: Option<Gap> },
    Inside { address: Address, endpoint: EndpointStatus },
}

/// Finite prefix of the nested-cylinder address of a point; digits index
/// children from 0.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Address {
    pub digits: Vec<u32>,
}

/// What the enumeration guarantees about gaps missing from a list.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Completeness {
    /// Every gap of length strictly greater than the bound is present.
    AllLongerThan(Rational),
    /// Every gap of length at least the bound is present.
    AllAtLeast(Rational),
}

/// Sorted list of bounded gaps together with the completeness guarantee
/// needed for exact bridge computation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GapList {
    pub hull: (Rational, Rational),
    pub gaps: Vec<Gap>,
    pub completeness: Completeness,
}

impl GapList {
    /// True if the list provably contains every gap of length `>= threshold`.
    pub fn covers(&self, threshold: &Rational) -> bool {
        match &self.completeness {
            Completeness::AllLongerThan(b) => threshold > b,
            Completeness::AllAtLeast(b) => threshold >= b,
        }
    }

    /// Restriction to a window whose endpoints are gap or hull endpoints:
    /// keeps the gaps strictly inside the window and re-hulls.
    pub fn restrict(&self, window: &(Rational, Rational)) -> GapList {
        let gaps = self
            .gaps
            .iter()
            .filter(|g| g.left >= window.0 && g.right <= window.1)
            .cloned()
            .collect();
        GapList { hull: window.clone(), gaps, completeness: self.completeness.clone() }
    }
}

/// Restriction of a base spec to a compact window whose endpoints belong to
/// the set (gap endpoints or hull endpoints), so the restriction is Cantor.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubCantor {
    base: CantorSpec,
    window: (Rational, Rational),
}

impl SubCantor {
    pub fn new(base: CantorSpec, window: (Rational, Rational)) -> Result<Self> {
        Self::with_budget(base, window, 64)
    }

    pub fn with_budget(
        base: CantorSpec,
        window: (Rational, Rational),
        budget: u32,
    ) -> Result<Self> {
        if window.0 >= window.1 {
            return Err(Error::InvalidParameter("window must have positive length".to_string()));
        }
        if window.0 < base.hull().0 || window.1 > base.hull().1 {
            return Err(Error::InvalidParameter("window must lie inside the hull".to_string()));
        }
        for e in [&window.0, &window.1] {
            if !base.is_gap_or_hull_endpoint(e, budget)? {
                return Err(Error::InvalidParameter(
                    "window endpoints must be gap endpoints or hull endpoints".to_string(),
                ));
            }
        }
        Ok(SubCantor { base, window })
    }

    pub fn base(&self) -> &CantorSpec {
        &self.base
    }

    pub fn window(&self) -> &(Rational, Rational) {
        &self.window
    }

    /// The whole set as a trivial restriction.
    pub fn whole(base: CantorSpec) -> Self {
        let window = base.hull().clone();
        SubCantor { base, window }
    }
}

/// Convenience constructor used throughout tests.
pub fn middle_third() -> CantorSpec {
    CantorSpec::middle_alpha(&ratio(1, 3)).unwrap()
}
