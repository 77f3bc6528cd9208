//! Static SVG 1.1 figures of polygons, solver trails and Voronoi cells.

use std::fmt::Write as _;

use crate::geom::{ConvexPolygon, Point};

const PALETTE: [&str; 8] = ["#4e79a7", "#f28e2b", "#e15759", "#76b7b2", "#59a14f", "#edc948", "#b07aa1", "#ff9da7"];

pub struct Figure {
    lo: Point,
    hi: Point,
    stroke: f64,
    body: String,
}

fn points_attr(points: &[Point]) -> String {
    points.iter().map(|p| format!("{},{}", p.x, -p.y)).collect::<Vec<_>>().join(" ")
}

impl Figure {
    pub fn new(poly: &ConvexPolygon) -> Self {
        let (lo, hi) = poly.bounds();
        let pad = 0.05 * poly.diameter();
        let mut fig = Self {
            lo: Point { x: lo.x - pad, y: lo.y - pad },
            hi: Point { x: hi.x + pad, y: hi.y + pad },
            stroke: poly.diameter() / 300.0,
            body: String::new(),
        };
        let _ = writeln!(
            fig.body,
            r##"  <polygon id="domain" points="{}" fill="#f4f4f4" stroke="black" stroke-width="{}"/>"##,
            points_attr(poly.vertices()),
            2.0 * fig.stroke
        );
        fig
    }

    pub fn cell(&mut self, index: usize, cell: &ConvexPolygon) {
        let _ = writeln!(
            self.body,
            r##"  <polygon class="cell" points="{}" fill="{}" fill-opacity="0.35" stroke="black" stroke-width="{}"/>"##,
            points_attr(cell.vertices()),
            PALETTE[index % PALETTE.len()],
            self.stroke
        );
    }

    pub fn trail(&mut self, points: &[Point]) {
        if points.len() < 2 {
            return;
        }
        let _ = writeln!(
            self.body,
            r##"  <polyline class="trail" points="{}" fill="none" stroke="#e15759" stroke-width="{}"/>"##,
            points_attr(points),
            self.stroke
        );
    }

    pub fn marker(&mut self, p: Point, class: &str) {
        let _ = writeln!(
            self.body,
            r##"  <circle class="{class}" cx="{}" cy="{}" r="{}" fill="black"/>"##,
            p.x,
            -p.y,
            3.0 * self.stroke
        );
    }

    pub fn render(&self) -> String {
        let (w, h) = (self.hi.x - self.lo.x, self.hi.y - self.lo.y);
        format!(
            concat!(
                "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n",
                "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" ",
                "viewBox=\"{} {} {} {}\" width=\"600\" height=\"{}\">\n{}</svg>\n"
            ),
            self.lo.x,
            -self.hi.y,
            w,
            h,
            (600.0 * h / w).round(),
            self.body
        )
    }
}
