//! Standalone SVG drawings of the triangulation and of a labelled quiver.
use std::fmt::Write;

use crate::dimer::DimerModel;
use crate::divisors::TorusDivisor;
use crate::error::{Error, Result};
use crate::moduli::Fan;
use crate::report::compact_label;

const UNIT: f64 = 80.0;
const MARGIN: f64 = 40.0;

fn header(width: f64, height: f64) -> String {
    format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{width:.0}\" height=\"{height:.0}\" \
         viewBox=\"0 0 {width:.0} {height:.0}\" font-family=\"sans-serif\" font-size=\"12\">\n\
         <rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
    )
}

/// The triangulated polygon: hull, edges (compact edges drawn solid, others dashed) and every
/// lattice point tagged with its ray number.
pub fn triangulation_svg(fan: &Fan) -> String {
    let xs = fan.rays.iter().map(|r| r.point[0]);
    let ys = fan.rays.iter().map(|r| r.point[1]);
    let (x0, x1) = (xs.clone().min().unwrap_or(0), xs.max().unwrap_or(0));
    let (y0, y1) = (ys.clone().min().unwrap_or(0), ys.max().unwrap_or(0));
    let width = (x1 - x0) as f64 * UNIT + 2.0 * MARGIN;
    let height = (y1 - y0) as f64 * UNIT + 2.0 * MARGIN;
    let at = |p: [i64; 2]| (MARGIN + (p[0] - x0) as f64 * UNIT, height - MARGIN - (p[1] - y0) as f64 * UNIT);

    let mut out = header(width, height);
    let hull: Vec<String> = fan
        .polygon
        .hull
        .iter()
        .map(|&p| {
            let (x, y) = at(p);
            format!("{x:.1},{y:.1}")
        })
        .collect();
    writeln!(out, "<polygon points=\"{}\" fill=\"#eef3fb\" stroke=\"black\" stroke-width=\"2\"/>", hull.join(" ")).unwrap();
    for e in fan.edges() {
        let (ax, ay) = at(fan.rays[e[0]].point);
        let (bx, by) = at(fan.rays[e[1]].point);
        let dash = if fan.is_compact_edge(e) { "" } else { " stroke-dasharray=\"4 3\"" };
        writeln!(out, "<line x1=\"{ax:.1}\" y1=\"{ay:.1}\" x2=\"{bx:.1}\" y2=\"{by:.1}\" stroke=\"#334\"{dash}/>").unwrap();
    }
    for (r, ray) in fan.rays.iter().enumerate() {
        let (x, y) = at(ray.point);
        let fill = if fan.is_compact_ray(r) { "#c33" } else { "black" };
        writeln!(out, "<circle cx=\"{x:.1}\" cy=\"{y:.1}\" r=\"4\" fill=\"{fill}\"/>").unwrap();
        writeln!(out, "<text x=\"{:.1}\" y=\"{:.1}\">{}</text>", x + 6.0, y - 6.0, r + 1).unwrap();
    }
    out.push_str("</svg>\n");
    out
}

/// The quiver in its fundamental domain with every arrow tagged by its divisor label. An arrow
/// crossing the boundary of the square is drawn as two translated copies clipped to it.
pub fn quiver_svg(model: &DimerModel, labels: &[TorusDivisor]) -> Result<String> {
    let positions = model
        .positions()
        .ok_or_else(|| Error::Input("the quiver view needs vertex positions".into()))?;
    let side = 6.0 * UNIT;
    let size = side + 2.0 * MARGIN;
    let at = |p: [f64; 2]| (MARGIN + p[0] * side, MARGIN + (1.0 - p[1]) * side);

    let mut out = header(size, size);
    out.push_str(
        "<defs><marker id=\"head\" viewBox=\"0 0 10 10\" refX=\"10\" refY=\"5\" markerWidth=\"8\" \
         markerHeight=\"8\" orient=\"auto-start-reverse\"><path d=\"M0,0 L10,5 L0,10 z\" fill=\"#334\"/></marker></defs>\n",
    );
    writeln!(
        out,
        "<rect x=\"{MARGIN}\" y=\"{MARGIN}\" width=\"{side}\" height=\"{side}\" fill=\"none\" stroke=\"#999\" stroke-dasharray=\"6 4\"/>"
    )
    .unwrap();
    writeln!(
        out,
        "<clipPath id=\"domain\"><rect x=\"{MARGIN}\" y=\"{MARGIN}\" width=\"{side}\" height=\"{side}\"/></clipPath>"
    )
    .unwrap();
    for a in model.arrows() {
        let (tail, head) = (positions[a.tail], positions[a.head]);
        let [wx, wy] = a.wind.map(|w| w as f64);
        let copies = if a.wind == [0, 0] {
            vec![(tail, [head[0], head[1]])]
        } else {
            vec![(tail, [head[0] + wx, head[1] + wy]), ([tail[0] - wx, tail[1] - wy], head)]
        };
        let mut label_at = None;
        for (from, to) in copies {
            let (tx, ty) = at(from);
            let (hx, hy) = at(to);
            let (dx, dy) = (hx - tx, hy - ty);
            let length = (dx * dx + dy * dy).sqrt().max(1.0);
            let shrink = 10.0 / length;
            let (sx, sy) = (tx + dx * shrink, ty + dy * shrink);
            let (ex, ey) = (hx - dx * shrink, hy - dy * shrink);
            writeln!(
                out,
                "<line x1=\"{sx:.1}\" y1=\"{sy:.1}\" x2=\"{ex:.1}\" y2=\"{ey:.1}\" stroke=\"#334\" \
                 marker-end=\"url(#head)\" clip-path=\"url(#domain)\"/>"
            )
            .unwrap();
            let mid = ((sx + ex) / 2.0, (sy + ey) / 2.0);
            let inside = |c: f64| (MARGIN..=MARGIN + side).contains(&c);
            if label_at.is_none() || (inside(mid.0) && inside(mid.1)) {
                label_at = Some(mid);
            }
        }
        let (lx, ly) = label_at.expect("every arrow has a drawn copy");
        let label = compact_label(&labels[a.id].display_rays());
        writeln!(out, "<text x=\"{lx:.1}\" y=\"{:.1}\" fill=\"#06c\" text-anchor=\"middle\">{label}</text>", ly - 3.0)
            .unwrap();
    }
    for (v, &p) in positions.iter().enumerate() {
        let (x, y) = at(p);
        writeln!(out, "<circle cx=\"{x:.1}\" cy=\"{y:.1}\" r=\"10\" fill=\"white\" stroke=\"black\"/>").unwrap();
        writeln!(out, "<text x=\"{x:.1}\" y=\"{:.1}\" text-anchor=\"middle\">{v}</text>", y + 4.0).unwrap();
    }
    out.push_str("</svg>\n");
    Ok(out)
}
