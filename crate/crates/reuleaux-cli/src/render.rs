//! SVG rendering of disk-polygons: boundary arcs as true circular arcs,
//! vertex markers, optional gradient arrows.

use reuleaux::geom::{DiskPolygon, PerturbationField, Point2};

const PAD: f64 = 0.15; // width units of margin around the drawing

struct Frame {
    scale: f64,
    min_x: f64,
    max_y: f64,
    width: f64,
    height: f64,
}

impl Frame {
    fn fit(dp: &DiskPolygon, scale: f64) -> Frame {
        let mut min_x = f64::INFINITY;
        let mut max_x = f64::NEG_INFINITY;
        let mut min_y = f64::INFINITY;
        let mut max_y = f64::NEG_INFINITY;
        // arc midpoints bulge past the vertex hull
        for i in 0..dp.n() {
            let c = dp.arc_center(i);
            let w = dp.vertex(i) - c;
            for t in [0.0, 0.5, 1.0] {
                let p = c + w.rotate(dp.arc_length(i) * t);
                min_x = min_x.min(p.x());
                max_x = max_x.max(p.x());
                min_y = min_y.min(p.y());
                max_y = max_y.max(p.y());
            }
        }
        Frame {
            scale,
            min_x: min_x - PAD,
            max_y: max_y + PAD,
            width: (max_x - min_x + 2.0 * PAD) * scale,
            height: (max_y - min_y + 2.0 * PAD) * scale,
        }
    }

    fn map(&self, p: Point2) -> (f64, f64) {
        ((p.x() - self.min_x) * self.scale, (self.max_y - p.y()) * self.scale)
    }
}

/// Render the polygon at `scale` user units per width unit. Gradient arrows
/// (one per vertex) are drawn when a field is supplied.
pub fn render_svg(dp: &DiskPolygon, scale: f64, gradient: Option<&PerturbationField>) -> String {
    let frame = Frame::fit(dp, scale);
    let n = dp.n();
    let mut svg = String::new();
    svg.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{:.0}\" height=\"{:.0}\" viewBox=\"0 0 {:.2} {:.2}\">\n",
        frame.width.ceil(),
        frame.height.ceil(),
        frame.width,
        frame.height
    ));
    svg.push_str(
        "  <defs><marker id=\"arrow\" markerWidth=\"8\" markerHeight=\"8\" refX=\"6\" refY=\"3\" orient=\"auto\"><path d=\"M0,0 L6,3 L0,6 z\" fill=\"#e36209\"/></marker></defs>\n",
    );

    // boundary path: counter-clockwise arcs become sweep-flag 0 after the
    // y-axis flip into screen coordinates
    let (x0, y0) = frame.map(dp.vertex(0));
    let mut d = format!("M {x0:.4} {y0:.4}");
    let r = frame.scale;
    for i in 0..n {
        let (x, y) = frame.map(dp.vertex((i + 1) % n));
        d.push_str(&format!(" A {r:.4} {r:.4} 0 0 0 {x:.4} {y:.4}"));
    }
    d.push_str(" Z");
    svg.push_str(&format!(
        "  <path class=\"boundary\" d=\"{d}\" fill=\"#eef4fc\" stroke=\"#1f6feb\" stroke-width=\"2\"/>\n"
    ));

    if let Some(field) = gradient {
        let longest = field.iter().map(|v| v.norm()).fold(0.0f64, f64::max);
        // arrows scaled to at most a quarter of the width unit
        let arrow_scale = if longest > 0.0 { 0.25 / longest } else { 0.0 };
        for i in 0..n {
            let from = dp.vertex(i);
            let to = from + field.get(i) * arrow_scale;
            let (x1, y1) = frame.map(from);
            let (x2, y2) = frame.map(to);
            svg.push_str(&format!(
                "  <line class=\"gradient\" x1=\"{x1:.4}\" y1=\"{y1:.4}\" x2=\"{x2:.4}\" y2=\"{y2:.4}\" stroke=\"#e36209\" stroke-width=\"1.5\" marker-end=\"url(#arrow)\"/>\n"
            ));
        }
    }

    for i in 0..n {
        let (cx, cy) = frame.map(dp.vertex(i));
        svg.push_str(&format!(
            "  <circle class=\"vertex\" cx=\"{cx:.4}\" cy=\"{cy:.4}\" r=\"3\" fill=\"#24292f\"/>\n"
        ));
    }
    svg.push_str("</svg>\n");
    svg
}

#[cfg(test)]
mod tests {
    use super::*;
    use reuleaux::geom::build_regular_reuleaux;

    #[test]
    fn triangle_has_three_arc_segments() {
        let dp = build_regular_reuleaux(3).unwrap().as_disk_polygon();
        let svg = render_svg(&dp, 300.0, None);
        assert_eq!(svg.matches(" A ").count(), 3);
        assert_eq!(svg.matches("class=\"vertex\"").count(), 3);
        assert_eq!(svg.matches("class=\"gradient\"").count(), 0);
    }

    #[test]
    fn arc_bulge_is_outside_the_vertex_hull() {
        // the drawn arc midpoint must sit farther from the centroid than the
        // chord midpoint; a wrong sweep flag would put it inside
        let dp = build_regular_reuleaux(3).unwrap().as_disk_polygon();
        let c = dp.arc_center(0);
        let w = dp.vertex(0) - c;
        let arc_mid = c + w.rotate(dp.arc_length(0) * 0.5);
        let chord_mid = Point2::midpoint(dp.vertex(0), dp.vertex(1));
        let centroid = Point2::new(
            dp.vertices().iter().map(|p| p.x()).sum::<f64>() / 3.0,
            dp.vertices().iter().map(|p| p.y()).sum::<f64>() / 3.0,
        );
        assert!(arc_mid.dist(centroid) > chord_mid.dist(centroid));
        // frame mapping preserves that relation (pure scale + flip)
        let frame = Frame::fit(&dp, 300.0);
        let (ax, ay) = frame.map(arc_mid);
        let (gx, gy) = frame.map(centroid);
        let (mx, my) = frame.map(chord_mid);
        let da = ((ax - gx).powi(2) + (ay - gy).powi(2)).sqrt();
        let dm = ((mx - gx).powi(2) + (my - gy).powi(2)).sqrt();
        assert!(da > dm);
    }
}
