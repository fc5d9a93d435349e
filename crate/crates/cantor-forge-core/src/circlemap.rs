//! The circle function `g_{y,t}`, certified distortion bounds, window
//! selection, and thickness-preserving image computation.
//!
//! `g_{y,t}(s) = y2 -/+ sqrt(t^2 - (s - y1)^2)` traces the lower (resp. upper)
//! half of the circle of radius `t` about `y = (y1, y2)`. The radius is stored
//! as its square, which stays rational whenever the map is built from a pair
//! of rational points; domain tests and derivative ratios are then exact.

use alloc::format;
use alloc::string::ToString;
use alloc::vec::Vec;

use num_traits::{One, Signed, Zero};

use crate::cantor::{
    CantorSpec, Classification, EndpointStatus, Gap, GapList, GapSide, SubCantor,
};
use crate::error::{Error, Result};
use crate::scalar::{int, sqrt_enclosure, Enclosure, Rational};
use crate::thickness::{eps_thickness_windowed_lower, thickness};

/// Which half of the circle the map traces.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    Lower,
    Upper,
}

/// The circle map `g_{y,t}` with exact rational center and squared radius.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CircleMap {
    center: (Rational, Rational),
    t_sq: Rational,
    branch: Branch,
}

impl CircleMap {
    pub fn new(center: (Rational, Rational), t_sq: Rational, branch: Branch) -> Result<Self> {
        if !t_sq.is_positive() {
            return Err(Error::InvalidParameter("squared radius must be positive".to_string()));
        }
        Ok(CircleMap { center, t_sq, branch })
    }

    /// Map through the circle about `center` passing through `on_circle`.
    /// The branch is the one containing `on_circle`; points level with the
    /// center are rejected (both branches meet there).
    pub fn through_point(
        center: (Rational, Rational),
        on_circle: &(Rational, Rational),
    ) -> Result<Self> {
        let dx = &on_circle.0 - &center.0;
        let dy = &on_circle.1 - &center.1;
        if dy.is_zero() {
            return Err(Error::InvalidParameter(
                "circle point level with the center does not select a branch".to_string(),
            ));
        }
        let branch = if dy.is_negative() { Branch::Lower } else { Branch::Upper };
        let t_sq = &dx * &dx + &dy * &dy;
        CircleMap::new(center, t_sq, branch)
    }

    pub fn center(&self) -> &(Rational, Rational) {
        &self.center
    }

    pub fn t_sq(&self) -> &Rational {
        &self.t_sq
    }

    pub fn branch(&self) -> Branch {
        self.branch
    }

    /// Enclosure of the radius, width at most `2^-abs_bits`.
    pub fn t_enclosure(&self, abs_bits: u32) -> Enclosure {
        sqrt_enclosure(&self.t_sq, abs_bits).expect("t_sq is positive")
    }

    /// True if `s` lies strictly inside the open domain `(y1 - t, y1 + t)`.
    pub fn in_domain(&self, s: &Rational) -> bool {
        let d = s - &self.center.0;
        &d * &d < self.t_sq
    }

    /// `t^2 - (s - y1)^2`, exact; positive iff `s` is in the open domain.
    fn discriminant(&self, s: &Rational) -> Rational {
        let d = s - &self.center.0;
        &self.t_sq - &d * &d
    }

    /// Certified enclosure of `g(s)` at an exact point, width at most
    /// `2^-abs_bits`; exact when the square root is rational.
    pub fn eval(&self, s: &Rational, abs_bits: u32) -> Result<Enclosure> {
        let disc = self.discriminant(s);
        if !disc.is_positive() {
            return Err(Error::InvalidParameter(format!(
                "{s} is outside the open domain of the circle map"
            )));
        }
        let root = sqrt_enclosure(&disc, abs_bits)?;
        let y2 = Enclosure::point(self.center.1.clone());
        Ok(match self.branch {
            Branch::Lower => y2.sub(&root),
            Branch::Upper => y2.add(&root),
        })
    }

    /// Certified enclosure of `g` over an input enclosure that must lie
    /// strictly inside the open domain.
    pub fn eval_enclosure(&self, s: &Enclosure, abs_bits: u32) -> Result<Enclosure> {
        let d = s.sub(&Enclosure::point(self.center.0.clone()));
        let dsq = d.square();
        let disc_lo = &self.t_sq - &dsq.hi;
        let disc_hi = &self.t_sq - &dsq.lo;
        if !disc_lo.is_positive() {
            return Err(Error::InvalidParameter(
                "input enclosure reaches the domain boundary of the circle map".to_string(),
            ));
        }
        let root = Enclosure {
            lo: sqrt_enclosure(&disc_lo, abs_bits)?.lo,
            hi: sqrt_enclosure(&disc_hi, abs_bits)?.hi,
        };
        let y2 = Enclosure::point(self.center.1.clone());
        Ok(match self.branch {
            Branch::Lower => y2.sub(&root),
            Branch::Upper => y2.add(&root),
        })
    }

    /// Exact square of the derivative magnitude at `s`:
    /// `|g'(s)|^2 = (s - y1)^2 / (t^2 - (s - y1)^2)`.
    pub fn derivative_sq(&self, s: &Rational) -> Result<Rational> {
        let disc = self.discriminant(s);
        if !disc.is_positive() {
            return Err(Error::InvalidParameter(
                "derivative requested outside the open domain".to_string(),
            ));
        }
        let d = s - &self.center.0;
        Ok(&d * &d / disc)
    }
}

/// Certified distortion of a circle map over a window on one monotone side.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Distortion {
    /// Exact square of the sup/inf derivative-magnitude ratio over the window.
    pub ratio_sq: Rational,
    /// Enclosure of `sqrt(ratio_sq) - 1`; `eps.hi` is the certified rational
    /// upper bound on the distortion. Exact when the ratio is a perfect square.
    pub eps: Enclosure,
}

/// Upper bound on `sup | |g'(x)| / |g'(x')| - 1 |` over `x, x'` in `J`.
///
/// `|g'(s)|` is increasing in `|s - y1|`, so the extremes sit at the window
/// endpoints and the squared ratio `(d1^2 / d0^2) * (t^2 - d0^2) / (t^2 - d1^2)`
/// (with `d0 <= d1` the endpoint distances from `y1`) is exactly rational.
pub fn distortion_bound(map: &CircleMap, j: &(Rational, Rational), abs_bits: u32) -> Result<Distortion> {
    if j.0 > j.1 {
        return Err(Error::InvalidParameter("window endpoints out of order".to_string()));
    }
    let y1 = &map.center().0;
    let on_right = &j.0 > y1;
    let on_left = &j.1 < y1;
    if !on_right && !on_left {
        return Err(Error::InvalidParameter(
            "window must avoid the critical point of the circle map".to_string(),
        ));
    }
    let (d0, d1) = if on_right {
        (&j.0 - y1, &j.1 - y1)
    } else {
        (y1 - &j.1, y1 - &j.0)
    };
    let d1_sq = &d1 * &d1;
    if &d1_sq >= map.t_sq() {
        return Err(Error::InvalidParameter(
            "window reaches the domain boundary of the circle map".to_string(),
        ));
    }
    let d0_sq = &d0 * &d0;
    let ratio_sq = (&d1_sq / &d0_sq) * ((map.t_sq() - &d0_sq) / (map.t_sq() - &d1_sq));
    let root = sqrt_enclosure(&ratio_sq, abs_bits)?;
    let one = Enclosure::point(Rational::one());
    Ok(Distortion { ratio_sq, eps: root.sub(&one) })
}

/// Monotone image of construction pieces under the map: each piece maps to
/// the hull of its endpoint enclosures (tight by monotonicity, since every
/// piece lies on a single side of the critical point).
pub fn map_pieces(
    map: &CircleMap,
    pieces: &[(Rational, Rational)],
    abs_bits: u32,
) -> Result<Vec<Enclosure>> {
    let y1 = &map.center().0;
    let mut out = Vec::with_capacity(pieces.len());
    for (a, b) in pieces {
        if a <= y1 && y1 <= b {
            return Err(Error::InvalidParameter(
                "piece straddles the critical point of the circle map".to_string(),
            ));
        }
        let ea = map.eval(a, abs_bits)?;
        let eb = map.eval(b, abs_bits)?;
        out.push(Enclosure {
            lo: ea.lo.clone().min(eb.lo.clone()),
            hi: ea.hi.max(eb.hi),
        });
    }
    Ok(out)
}

fn gaps_contained_on_side(
    gaps: &GapList,
    x: &Rational,
    i: &(Rational, Rational),
    right_of_x: bool,
) -> Vec<Gap> {
    gaps.gaps
        .iter()
        .filter(|g| &g.left > &i.0 && &g.right < &i.1)
        .filter(|g| if right_of_x { &g.left >= x } else { &g.right <= x })
        .cloned()
        .collect()
}

/// One-sided window construction: from the gap (or hull) endpoint `x`,
/// scanning toward the set, stop at the near endpoint of the chosen gap.
fn window_from_endpoint(
    spec: &CantorSpec,
    x: &Rational,
    i: &(Rational, Rational),
    glen: Option<&Rational>,
    scan_right: bool,
    budget: u32,
) -> Result<(Rational, Rational)> {
    // First look for a gap at least as long as the reference gap whose near
    // endpoint lies strictly inside the search interval.
    if let Some(glen) = glen {
        let candidates = spec.gaps_longer_than(glen)?;
        let hit = if scan_right {
            candidates
                .gaps
                .iter()
                .filter(|g| &g.left > x && g.left < i.1)
                .min_by(|a, b| a.left.cmp(&b.left))
                .map(|g| g.left.clone())
        } else {
            candidates
                .gaps
                .iter()
                .filter(|g| &g.right < x && g.right > i.0)
                .max_by(|a, b| a.right.cmp(&b.right))
                .map(|g| g.right.clone())
        };
        if let Some(y) = hit {
            return Ok(if scan_right { (x.clone(), y) } else { (y, x.clone()) });
        }
    }
    // Fall back to the longest gap contained in the interval on the scan
    // side (leftmost on ties). Deepen until some gap fits, then sweep every
    // gap at least that long so the maximum is certain.
    for depth in 1..=budget {
        let born = match spec.gaps_up_to(depth) {
            Ok(g) => g,
            Err(Error::ResourceLimit(_)) => break,
            Err(e) => return Err(e),
        };
        let inside = gaps_contained_on_side(&born, x, i, scan_right);
        if let Some(len) = inside.iter().map(|g| g.len()).max() {
            let all = spec.gaps_longer_than(&len)?;
            let inside = gaps_contained_on_side(&all, x, i, scan_right);
            let best = inside
                .iter()
                .filter(|g| g.len() == inside.iter().map(|h| h.len()).max().unwrap())
                .min_by(|a, b| a.left.cmp(&b.left))
                .unwrap();
            let y = if scan_right { best.left.clone() } else { best.right.clone() };
            return Ok(if scan_right { (x.clone(), y) } else { (y, x.clone()) });
        }
    }
    Err(Error::DepthExhausted(
        "no gap fits inside the requested interval within the depth budget".to_string(),
    ))
}

/// The flanking gap on one side of a non-endpoint `x`: the nearest gap to `x`
/// contained in `i`, found at the shallowest depth where one exists.
fn flanking_gap(
    spec: &CantorSpec,
    x: &Rational,
    i: &(Rational, Rational),
    right_of_x: bool,
    budget: u32,
) -> Result<Gap> {
    for depth in 1..=budget {
        let born = match spec.gaps_up_to(depth) {
            Ok(g) => g,
            Err(Error::ResourceLimit(_)) => break,
            Err(e) => return Err(e),
        };
        let inside = gaps_contained_on_side(&born, x, i, right_of_x);
        let pick = if right_of_x {
            inside.into_iter().min_by(|a, b| a.left.cmp(&b.left))
        } else {
            inside.into_iter().max_by(|a, b| a.right.cmp(&b.right))
        };
        if let Some(g) = pick {
            return Ok(g);
        }
    }
    Err(Error::DepthExhausted(
        "no flanking gap inside the requested interval within the depth budget".to_string(),
    ))
}

/// Compact window `J` inside the open interval `I`, containing `x`, whose
/// restriction keeps at least the thickness of the whole set and preserves
/// the endpoint/non-endpoint status of `x`.
///
/// Gap-endpoint case: scan into the set for the first gap at least as long as
/// the reference gap (falling back to the longest gap contained in `I`) and
/// stop at its near endpoint. Non-endpoint case: flank `x` with two gaps
/// contained in `I`, then push each cut outward to the last gap at least as
/// long as the shorter flank, so every interior bridge of the restriction
/// coincides with its bridge in the full set.
pub fn bubble_window(
    spec: &CantorSpec,
    x: &Rational,
    i: &(Rational, Rational),
    budget: u32,
) -> Result<SubCantor> {
    if i.0 >= i.1 || x <= &i.0 || x >= &i.1 {
        return Err(Error::InvalidParameter(
            "the open interval must strictly contain x".to_string(),
        ));
    }
    let status = match spec.classify(x, budget) {
        Classification::Outside { .. } => {
            return Err(Error::InvalidParameter("x is not a member of the set".to_string()));
        }
        Classification::Inside { endpoint, .. } => endpoint,
    };
    let hull = spec.hull();
    // Clamp the search interval to the hull; x stays strictly inside unless
    // it is a hull endpoint, which the one-sided construction handles.
    let i = (i.0.clone().max(hull.0.clone() - int(1)), i.1.clone().min(hull.1.clone() + int(1)));
    let window = match status {
        EndpointStatus::GapEndpoint { gap, side } => {
            let scan_right = side == GapSide::Right;
            window_from_endpoint(spec, x, &i, Some(&gap.len()), scan_right, budget)?
        }
        EndpointStatus::HullEndpoint => {
            let scan_right = x == &hull.0;
            window_from_endpoint(spec, x, &i, None, scan_right, budget)?
        }
        EndpointStatus::NonEndpoint { .. } => {
            let gl = flanking_gap(spec, x, &i, false, budget)?;
            let gr = flanking_gap(spec, x, &i, true, budget)?;
            let ell = gl.len().min(gr.len());
            let qualifying = spec.gaps_longer_than(&ell)?;
            // Rightmost qualifying gap between the left flank and x.
            let u = qualifying
                .gaps
                .iter()
                .filter(|g| g.left >= gl.right && &g.right <= x)
                .max_by(|a, b| a.right.cmp(&b.right))
                .map(|g| g.right.clone())
                .unwrap_or_else(|| gl.right.clone());
            let v = qualifying
                .gaps
                .iter()
                .filter(|g| g.right <= gr.left && &g.left >= x)
                .min_by(|a, b| a.left.cmp(&b.left))
                .map(|g| g.left.clone())
                .unwrap_or_else(|| gr.left.clone());
            (u, v)
        }
        EndpointStatus::UndecidedAtDepth(d) => {
            return Err(Error::DepthExhausted(format!(
                "endpoint status of x undecided at depth {d}"
            )));
        }
    };
    SubCantor::with_budget(spec.clone(), window, budget)
}

/// A window on which the circle map provably loses only a `c` fraction of
/// thickness: the image of the restriction has thickness at least
/// `image_thickness_lb = (1 - eps) * tau_eps(K within J) >= c * tau(K)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WindowCertificate {
    pub window: (Rational, Rational),
    /// Certified rational upper bound on the derivative-ratio distortion.
    pub distortion_eps: Rational,
    pub margin_c: Rational,
    /// Certified lower bound on the epsilon-thickness of the restriction.
    pub tau_eps_lower: Rational,
    /// `(1 - distortion_eps) * tau_eps_lower`.
    pub image_thickness_lb: Rational,
}

/// Shrink a window around `x1` until the distortion is small enough that
/// `(1 - eps) * tau_eps(K within J) >= c * tau(K)`, all compared exactly.
pub fn choose_window(
    spec: &CantorSpec,
    x1: &Rational,
    map: &CircleMap,
    c: &Rational,
    budget: u32,
) -> Result<WindowCertificate> {
    if !c.is_positive() || c >= &Rational::one() {
        return Err(Error::InvalidParameter("margin c must lie in (0, 1)".to_string()));
    }
    if x1 == &map.center().0 {
        return Err(Error::InvalidParameter(
            "x1 coincides with the critical point of the circle map".to_string(),
        ));
    }
    if !map.in_domain(x1) {
        return Err(Error::InvalidParameter("x1 is outside the circle map domain".to_string()));
    }
    let tau = thickness(spec)?.upper;
    let target = c * &tau;
    let y1 = &map.center().0;
    // Initial half-width keeps the interval on one monotone side.
    let mut half = (x1 - y1).abs() / int(2);
    let mut last_eps: Option<Rational> = None;
    for _ in 0..budget {
        let i = (x1 - &half, x1 + &half);
        let sub = match bubble_window(spec, x1, &i, budget) {
            Ok(s) => s,
            Err(Error::DepthExhausted(_)) => break,
            Err(e) => return Err(e),
        };
        let j = sub.window().clone();
        // The window may touch the domain boundary only through x1's side;
        // reject and shrink if it does.
        match distortion_bound(map, &j, 96) {
            Ok(d) => {
                let eps = d.eps.hi.clone().max(Rational::zero());
                last_eps = Some(eps.clone());
                if eps < Rational::one() {
                    let tau_eps = eps_thickness_windowed_lower(&sub, &eps, 8)?;
                    let lb = (Rational::one() - &eps) * &tau_eps;
                    if lb >= target {
                        return Ok(WindowCertificate {
                            window: j,
                            distortion_eps: eps,
                            margin_c: c.clone(),
                            tau_eps_lower: tau_eps,
                            image_thickness_lb: lb,
                        });
                    }
                }
            }
            Err(Error::InvalidParameter(_)) => {}
            Err(e) => return Err(e),
        }
        half /= int(2);
    }
    Err(Error::DepthExhausted(format!(
        "could not certify the window margin within the budget (best distortion: {})",
        last_eps.map(|e| e.to_string()).unwrap_or_else(|| "none".to_string())
    )))
}
