//! SVG figures of a report, in the body plane or in the image plane of `T̂`.
//!
//! Output is a pure function of its inputs: fixed 800×800 canvas, fixed
//! layer order, coordinates rounded to four decimals.

use std::f64::consts::PI;
use std::fmt::Write;

use crate::gauge::Gauge;
use crate::report::SolveReport;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum View {
    /// The body, the inscribed ellipse `T̃(S¹)` and its `d₂`-scaled copy.
    #[default]
    Body,
    /// The unit circle, the circle of radius `d₂`, and `T̂` applied to the body.
    Image,
}

const SIZE: f64 = 800.0;
const MARGIN: f64 = 40.0;
const SMOOTH_SAMPLES: usize = 720;

fn num(x: f64) -> String {
    let s = format!("{x:.4}");
    if s == "-0.0000" {
        "0.0000".to_string()
    } else {
        s
    }
}

struct Canvas {
    scale: f64,
    out: String,
}

impl Canvas {
    fn new(extent: f64) -> Self {
        let mut out = String::new();
        out.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
        let _ = writeln!(
            out,
            "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{0}\" height=\"{0}\" viewBox=\"0 0 {0} {0}\">",
            SIZE
        );
        out.push_str("<rect x=\"0\" y=\"0\" width=\"800\" height=\"800\" fill=\"white\"/>\n");
        Canvas {
            scale: (0.5 * SIZE - MARGIN) / extent,
            out,
        }
    }

    fn map(&self, p: [f64; 2]) -> (String, String) {
        (num(0.5 * SIZE + self.scale * p[0]), num(0.5 * SIZE - self.scale * p[1]))
    }

    fn open_layer(&mut self, id: &str, style: &str) {
        let _ = writeln!(self.out, "<g id=\"{id}\" {style}>");
    }

    fn close_layer(&mut self) {
        self.out.push_str("</g>\n");
    }

    /// Origin-centred ellipse with semi-axis `r1` along angle `theta` and `r2` across it.
    fn ellipse(&mut self, r1: f64, r2: f64, theta: f64) {
        let c = num(0.5 * SIZE);
        if (r1 - r2).abs() <= 1e-9 * r1.max(r2) {
            let _ = writeln!(self.out, "<circle cx=\"{c}\" cy=\"{c}\" r=\"{}\"/>", num(self.scale * r1));
        } else {
            let _ = writeln!(
                self.out,
                "<ellipse cx=\"{c}\" cy=\"{c}\" rx=\"{}\" ry=\"{}\" transform=\"rotate({} {c} {c})\"/>",
                num(self.scale * r1),
                num(self.scale * r2),
                num(-theta.to_degrees())
            );
        }
    }

    fn polygon(&mut self, points: &[[f64; 2]]) {
        let coords: Vec<String> = points
            .iter()
            .map(|p| {
                let (x, y) = self.map(*p);
                format!("{x},{y}")
            })
            .collect();
        let _ = writeln!(self.out, "<polygon points=\"{}\"/>", coords.join(" "));
    }

    fn marker(&mut self, p: [f64; 2], label: &str, filled: bool) {
        let (x, y) = self.map(p);
        let fill = if filled { "black" } else { "white" };
        let h = 5.0;
        let left = num(0.5 * SIZE + self.scale * p[0] - h);
        let top = num(0.5 * SIZE - self.scale * p[1] - h);
        let _ = writeln!(
            self.out,
            "<rect x=\"{left}\" y=\"{top}\" width=\"10\" height=\"10\" fill=\"{fill}\" stroke=\"black\"/>"
        );
        let _ = writeln!(self.out, "<text x=\"{x}\" y=\"{y}\" dx=\"8\" dy=\"-8\" font-size=\"16\">{label}</text>");
    }

    fn finish(mut self) -> String {
        self.out.push_str("</svg>\n");
        self.out
    }
}

/// Boundary of a body as a closed polygon (exact for polygon gauges).
fn outline(gauge: &Gauge) -> Vec<[f64; 2]> {
    match gauge {
        Gauge::Polygon(p) => p.vertices().to_vec(),
        _ => (0..SMOOTH_SAMPLES)
            .map(|k| gauge.boundary_point(2.0 * PI * k as f64 / SMOOTH_SAMPLES as f64))
            .collect(),
    }
}

/// Renders the report; the body outline is drawn when `gauge` is given.
pub fn render_svg(report: &SolveReport, view: View, gauge: Option<&Gauge>) -> String {
    let std = report.params_inscribed.to_std();
    let (r1, r2) = std.semi_axes();
    let theta = std.theta();
    let t = report.t_hat;
    match view {
        View::Body => {
            let mut canvas = Canvas::new(report.d2 * r1.max(r2));
            if let Some(g) = gauge {
                canvas.open_layer("body", "fill=\"none\" stroke=\"black\" stroke-width=\"2\"");
                match g {
                    Gauge::Circle => canvas.ellipse(1.0, 1.0, 0.0),
                    Gauge::Ellipse(e) => {
                        let s = e.to_std();
                        let (a1, a2) = s.semi_axes();
                        canvas.ellipse(a1, a2, s.theta());
                    }
                    _ => canvas.polygon(&outline(g)),
                }
                canvas.close_layer();
            }
            canvas.open_layer("inscribed", "fill=\"none\" stroke=\"blue\" stroke-width=\"1.5\"");
            canvas.ellipse(r1, r2, theta);
            canvas.close_layer();
            canvas.open_layer("outer", "fill=\"none\" stroke=\"red\" stroke-width=\"1.5\"");
            canvas.ellipse(report.d2 * r1, report.d2 * r2, theta);
            canvas.close_layer();
            canvas.open_layer("points", "font-family=\"serif\"");
            for (i, x) in report.x_points.iter().enumerate() {
                canvas.marker(*x, &format!("x{}", i + 1), true);
            }
            for (i, y) in report.y_points.iter().enumerate() {
                canvas.marker(*y, &format!("y{}", i + 1), false);
            }
            canvas.close_layer();
            canvas.finish()
        }
        View::Image => {
            let mut canvas = Canvas::new(report.d2);
            if let Some(g) = gauge {
                canvas.open_layer("body", "fill=\"none\" stroke=\"black\" stroke-width=\"2\"");
                let image: Vec<[f64; 2]> = outline(g).into_iter().map(|p| t.apply(p)).collect();
                canvas.polygon(&image);
                canvas.close_layer();
            }
            canvas.open_layer("unit", "fill=\"none\" stroke=\"blue\" stroke-width=\"1.5\"");
            canvas.ellipse(1.0, 1.0, 0.0);
            canvas.close_layer();
            canvas.open_layer("outer", "fill=\"none\" stroke=\"red\" stroke-width=\"1.5\"");
            canvas.ellipse(report.d2, report.d2, 0.0);
            canvas.close_layer();
            canvas.open_layer("points", "font-family=\"serif\"");
            for (i, x) in report.x_points.iter().enumerate() {
                canvas.marker(t.apply(*x), &format!("T̂x{}", i + 1), true);
            }
            for (i, y) in report.y_points.iter().enumerate() {
                canvas.marker(t.apply(*y), &format!("T̂y{}", i + 1), false);
            }
            canvas.close_layer();
            canvas.finish()
        }
    }
}
