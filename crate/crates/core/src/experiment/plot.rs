use std::fmt::Write as _;

use crate::model::RoutePlan;
use crate::tsplib::{Instance, Point};

/// Width and height of the square SVG canvas, in user units.
pub const CANVAS_SIZE: f64 = 800.0;
const MARGIN: f64 = 40.0;
const PALETTE: &[&str] = &[
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f",
    "#bcbd22", "#17becf",
];

/// Uniform-scale affine map from instance coordinates onto the canvas, with
/// the y axis flipped so north points up.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CanvasMap {
    min_x: f64,
    min_y: f64,
    scale: f64,
}

impl CanvasMap {
    pub fn fit(points: &[Point]) -> Self {
        let (mut min_x, mut min_y) = (f64::INFINITY, f64::INFINITY);
        let (mut max_x, mut max_y) = (f64::NEG_INFINITY, f64::NEG_INFINITY);
        for p in points {
            min_x = min_x.min(p.x);
            min_y = min_y.min(p.y);
            max_x = max_x.max(p.x);
            max_y = max_y.max(p.y);
        }
        let span = (max_x - min_x).max(max_y - min_y);
        let scale = if span > 0.0 {
            (CANVAS_SIZE - 2.0 * MARGIN) / span
        } else {
            1.0
        };
        CanvasMap {
            min_x,
            min_y,
            scale,
        }
    }

    pub fn to_canvas(&self, p: Point) -> (f64, f64) {
        (
            MARGIN + (p.x - self.min_x) * self.scale,
            CANVAS_SIZE - MARGIN - (p.y - self.min_y) * self.scale,
        )
    }

    pub fn to_instance(&self, cx: f64, cy: f64) -> Point {
        Point::new(
            self.min_x + (cx - MARGIN) / self.scale,
            self.min_y + (CANVAS_SIZE - MARGIN - cy) / self.scale,
        )
    }
}

/// Renders the instance and plan as SVG: targets as dots, the base as a
/// square, and each nonempty route as its own colored polyline.
pub fn emit_route_plot(inst: &Instance, plan: &RoutePlan) -> String {
    let map = CanvasMap::fit(inst.coords());
    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{s}" height="{s}" viewBox="0 0 {s} {s}">"#,
        s = CANVAS_SIZE
    );
    let _ = writeln!(
        svg,
        r#"<rect width="100%" height="100%" fill="white"/>"#
    );
    for (k, route) in plan.routes.iter().enumerate() {
        if route.nodes.len() <= 2 {
            continue;
        }
        let pts: Vec<String> = route
            .nodes
            .iter()
            .map(|&v| {
                let (x, y) = map.to_canvas(inst.coords()[v]);
                format!("{x:.3},{y:.3}")
            })
            .collect();
        let _ = writeln!(
            svg,
            r#"<polyline class="route" data-uav="{k}" fill="none" stroke="{}" stroke-width="1.5" points="{}"/>"#,
            PALETTE[k % PALETTE.len()],
            pts.join(" ")
        );
    }
    for t in inst.targets() {
        let (x, y) = map.to_canvas(inst.coords()[t]);
        let fill = if plan.visited.contains(&t) { "black" } else { "#bbbbbb" };
        let _ = writeln!(
            svg,
            r#"<circle class="target" data-node="{t}" cx="{x:.3}" cy="{y:.3}" r="3" fill="{fill}"/>"#
        );
    }
    let (bx, by) = map.to_canvas(inst.coords()[inst.base()]);
    let _ = writeln!(
        svg,
        r#"<rect class="base" data-node="{}" x="{:.3}" y="{:.3}" width="10" height="10" fill="red"/>"#,
        inst.base(),
        bx - 5.0,
        by - 5.0
    );
    svg.push_str("</svg>\n");
    svg
}
