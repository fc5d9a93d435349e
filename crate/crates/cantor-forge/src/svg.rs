//! SVG rendering of a product approximant with tree edges overlaid. The
//! figure is derived purely from the certificate contents plus a bounded
//! refinement of the two specs (depth capped at 6), so it regenerates
//! identically across runs.

use cantor_forge_core::tree::TreePlacement;
use cantor_forge_core::{CantorSpec, Rational};

const DEPTH_CAP: u32 = 6;
const SIZE: f64 = 1000.0;
const MARGIN: f64 = 40.0;

fn to_f64(r: &Rational) -> f64 {
    // Good enough for plotting; certificates never round-trip through here.
    num_traits::ToPrimitive::to_f64(r).unwrap_or(0.0)
}

pub fn render_tree(
    k1: &CantorSpec,
    k2: &CantorSpec,
    placement: &TreePlacement,
) -> Result<String, String> {
    let a1 = k1.refine(DEPTH_CAP).map_err(|e| e.to_string())?;
    let a2 = k2.refine(DEPTH_CAP).map_err(|e| e.to_string())?;
    let h1 = k1.hull();
    let h2 = k2.hull();
    let (x0, x1) = (to_f64(&h1.0), to_f64(&h1.1));
    let (y0, y1) = (to_f64(&h2.0), to_f64(&h2.1));
    let sx = (SIZE - 2.0 * MARGIN) / (x1 - x0);
    let sy = (SIZE - 2.0 * MARGIN) / (y1 - y0);
    let px = |x: f64| MARGIN + (x - x0) * sx;
    let py = |y: f64| SIZE - MARGIN - (y - y0) * sy;

    let mut out = String::new();
    out.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 {SIZE} {SIZE}\">\n"
    ));
    out.push_str(&format!(
        "<rect x=\"0\" y=\"0\" width=\"{SIZE}\" height=\"{SIZE}\" fill=\"white\"/>\n"
    ));
    out.push_str("<g fill=\"#c8d4e3\" stroke=\"none\">\n");
    for (p1a, p1b) in &a1.pieces {
        let (xa, xb) = (px(to_f64(p1a)), px(to_f64(p1b)));
        for (p2a, p2b) in &a2.pieces {
            let (ya, yb) = (py(to_f64(p2b)), py(to_f64(p2a)));
            out.push_str(&format!(
                "<rect x=\"{xa:.3}\" y=\"{ya:.3}\" width=\"{:.3}\" height=\"{:.3}\"/>\n",
                xb - xa,
                yb - ya
            ));
        }
    }
    out.push_str("</g>\n");
    out.push_str("<g stroke=\"#b03030\" stroke-width=\"2\" fill=\"none\">\n");
    let mid = |p: &cantor_forge_core::tree::PlanarPoint| {
        (px(to_f64(&p.box1.midpoint())), py(to_f64(&p.box2.midpoint())))
    };
    for (v, parent) in placement.parents.iter().enumerate() {
        if let Some(p) = parent {
            let (ax, ay) = mid(&placement.vertices[*p]);
            let (bx, by) = mid(&placement.vertices[v]);
            out.push_str(&format!(
                "<line x1=\"{ax:.3}\" y1=\"{ay:.3}\" x2=\"{bx:.3}\" y2=\"{by:.3}\"/>\n"
            ));
        }
    }
    out.push_str("</g>\n<g fill=\"#14335c\">\n");
    for p in &placement.vertices {
        let (cx, cy) = mid(p);
        out.push_str(&format!("<circle cx=\"{cx:.3}\" cy=\"{cy:.3}\" r=\"5\"/>\n"));
    }
    out.push_str("</g>\n</svg>\n");
    Ok(out)
}
