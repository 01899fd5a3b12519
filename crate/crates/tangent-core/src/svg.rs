//! Deterministic SVG rendering: the curve (projected to the x-y plane),
//! the classified point, and the tangent segment when one exists.
//!
//! Output is a pure function of the inputs — no timestamps, fixed
//! coordinate formatting — so identical invocations are byte-identical
//! and diffs are meaningful in tests.

use std::fmt;
use std::fmt::Write as _;

use crate::curve::CurveExpr;
use crate::tangent::{tangent_line, TangentReport};

/// Rendering options.
#[derive(Debug, Clone, PartialEq)]
pub struct PlotOptions {
    pub width: u32,
    pub height: u32,
    /// Curve samples across the parameter range.
    pub samples: usize,
    /// Padding in pixels between the drawing and the frame.
    pub margin: f64,
}

impl Default for PlotOptions {
    fn default() -> PlotOptions {
        PlotOptions {
            width: 640,
            height: 480,
            samples: 256,
            margin: 40.0,
        }
    }
}

impl PlotOptions {
    pub fn validate(&self) -> Result<(), InvalidPlot> {
        fn bad(message: String) -> Result<(), InvalidPlot> {
            Err(InvalidPlot { message })
        }
        if self.samples < 16 {
            return bad(format!(
                "svg_samples must be at least 16, got {}",
                self.samples
            ));
        }
        if self.width == 0 || self.height == 0 {
            return bad(format!(
                "svg dimensions must be positive, got {}x{}",
                self.width, self.height
            ));
        }
        if !(self.margin.is_finite() && self.margin >= 0.0) {
            return bad(format!(
                "svg_margin must be nonnegative, got {}",
                self.margin
            ));
        }
        let least = f64::from(self.width.min(self.height));
        if 2.0 * self.margin >= least {
            return bad(format!(
                "svg_margin {} leaves no room inside {}x{}",
                self.margin, self.width, self.height
            ));
        }
        Ok(())
    }
}

/// Invalid [`PlotOptions`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InvalidPlot {
    pub message: String,
}

impl fmt::Display for InvalidPlot {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "invalid plot options: {}", self.message)
    }
}

impl std::error::Error for InvalidPlot {}

#[derive(Debug, Clone, Copy)]
struct Bounds {
    xmin: f64,
    xmax: f64,
    ymin: f64,
    ymax: f64,
}

impl Bounds {
    fn empty() -> Bounds {
        Bounds {
            xmin: f64::INFINITY,
            xmax: f64::NEG_INFINITY,
            ymin: f64::INFINITY,
            ymax: f64::NEG_INFINITY,
        }
    }

    fn add(&mut self, (x, y): (f64, f64)) {
        self.xmin = self.xmin.min(x);
        self.xmax = self.xmax.max(x);
        self.ymin = self.ymin.min(y);
        self.ymax = self.ymax.max(y);
    }

    fn is_empty(&self) -> bool {
        self.xmin > self.xmax
    }

    /// Give zero-extent axes some room so the scale stays finite.
    fn inflate_degenerate(&mut self) {
        if self.xmax - self.xmin < 1e-9 {
            self.xmin -= 0.5;
            self.xmax += 0.5;
        }
        if self.ymax - self.ymin < 1e-9 {
            self.ymin -= 0.5;
            self.ymax += 0.5;
        }
    }
}

/// Uniform data-to-pixel mapping with a flipped y axis, centered.
struct Mapping {
    s: f64,
    ox: f64,
    oy: f64,
    xmin: f64,
    ymin: f64,
    height: f64,
}

impl Mapping {
    fn new(b: &Bounds, opts: &PlotOptions) -> Mapping {
        let w = f64::from(opts.width);
        let h = f64::from(opts.height);
        let dx = b.xmax - b.xmin;
        let dy = b.ymax - b.ymin;
        let s = ((w - 2.0 * opts.margin) / dx).min((h - 2.0 * opts.margin) / dy);
        Mapping {
            s,
            ox: (w - s * dx) / 2.0,
            oy: (h - s * dy) / 2.0,
            xmin: b.xmin,
            ymin: b.ymin,
            height: h,
        }
    }

    fn map(&self, (x, y): (f64, f64)) -> (f64, f64) {
        (
            self.ox + (x - self.xmin) * self.s,
            self.height - (self.oy + (y - self.ymin) * self.s),
        )
    }
}

fn escape(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    for c in text.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            _ => out.push(c),
        }
    }
    out
}

/// Render the curve over `[t_min, t_max]` together with the classified
/// point from `report`. Sample points where the curve is not evaluable
/// split the polyline into separate runs.
pub fn render(
    curve: &CurveExpr,
    report: &TangentReport,
    t_min: f64,
    t_max: f64,
    opts: &PlotOptions,
) -> String {
    assert!(
        t_min.is_finite() && t_max.is_finite() && t_min < t_max,
        "render needs a finite range with t_min < t_max"
    );
    if let Err(e) = opts.validate() {
        panic!("{e}");
    }

    // Sample the curve, splitting at unevaluable parameters.
    let mut runs: Vec<Vec<(f64, f64)>> = Vec::new();
    let mut current: Vec<(f64, f64)> = Vec::new();
    for i in 0..opts.samples {
        let t = t_min + (t_max - t_min) * (i as f64) / ((opts.samples - 1) as f64);
        match curve.point_at(t) {
            Ok(p) => current.push((p.x, p.y)),
            Err(_) => {
                if current.len() >= 2 {
                    runs.push(std::mem::take(&mut current));
                } else {
                    current.clear();
                }
            }
        }
    }
    if current.len() >= 2 {
        runs.push(current);
    }

    let marker = if report.point.is_finite() {
        Some((report.point.x, report.point.y))
    } else {
        None
    };

    let mut bounds = Bounds::empty();
    for run in &runs {
        for &p in run {
            bounds.add(p);
        }
    }
    if let Some(a) = marker {
        bounds.add(a);
    }
    if bounds.is_empty() {
        bounds.add((-1.0, -1.0));
        bounds.add((1.0, 1.0));
    }

    // Tangent segment centered at the point, sized against the drawing.
    let segment = tangent_line(report).ok().and_then(|line| {
        let dir = (line.direction.x, line.direction.y);
        let n = (dir.0 * dir.0 + dir.1 * dir.1).sqrt();
        if n < 1e-12 || !report.point.is_finite() {
            // The tangent projects to a point in the x-y plane.
            return None;
        }
        let mut b = bounds;
        b.inflate_degenerate();
        let half = 0.25 * (b.xmax - b.xmin).max(b.ymax - b.ymin);
        let (ux, uy) = (dir.0 / n, dir.1 / n);
        Some((
            (line.point.x - ux * half, line.point.y - uy * half),
            (line.point.x + ux * half, line.point.y + uy * half),
        ))
    });
    if let Some((p, q)) = segment {
        bounds.add(p);
        bounds.add(q);
    }
    bounds.inflate_degenerate();

    let m = Mapping::new(&bounds, opts);
    let mut svg = String::new();
    let _ = writeln!(
        svg,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{w}\" height=\"{h}\" viewBox=\"0 0 {w} {h}\">",
        w = opts.width,
        h = opts.height
    );
    let _ = writeln!(
        svg,
        "  <rect width=\"{}\" height=\"{}\" fill=\"#ffffff\"/>",
        opts.width, opts.height
    );
    for run in &runs {
        let mut points = String::new();
        for &p in run {
            let (px, py) = m.map(p);
            if !points.is_empty() {
                points.push(' ');
            }
            let _ = write!(points, "{px:.3},{py:.3}");
        }
        let _ = writeln!(
            svg,
            "  <polyline points=\"{points}\" fill=\"none\" stroke=\"#2f6f4f\" stroke-width=\"1.5\"/>"
        );
    }
    if let Some((p, q)) = segment {
        let (x1, y1) = m.map(p);
        let (x2, y2) = m.map(q);
        let _ = writeln!(
            svg,
            "  <line class=\"tangent\" x1=\"{x1:.3}\" y1=\"{y1:.3}\" x2=\"{x2:.3}\" y2=\"{y2:.3}\" stroke=\"#b3261e\" stroke-width=\"1.5\"/>"
        );
    }
    if let Some(a) = marker {
        let (cx, cy) = m.map(a);
        let _ = writeln!(
            svg,
            "  <circle cx=\"{cx:.3}\" cy=\"{cy:.3}\" r=\"3.5\" fill=\"#1a1a1a\"/>"
        );
    }
    let _ = writeln!(
        svg,
        "  <text x=\"8\" y=\"16\" font-family=\"monospace\" font-size=\"12\">{}</text>",
        escape(curve.label())
    );
    let _ = writeln!(
        svg,
        "  <text x=\"8\" y=\"32\" font-family=\"monospace\" font-size=\"12\">{} at t0 = {}</text>",
        report.verdict, report.t0
    );
    svg.push_str("</svg>\n");
    svg
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::CurveExpr;
    use crate::limits::LimitConfig;
    use crate::tangent::{classify, report_for_error, DEFAULT_COLLINEAR_TOL};

    fn classified(src: &str, t0: f64) -> (CurveExpr, TangentReport) {
        let curve = CurveExpr::parse_literal(src).unwrap();
        let report = classify(&curve, t0, &LimitConfig::default(), DEFAULT_COLLINEAR_TOL)
            .unwrap_or_else(|e| report_for_error(t0, &e));
        (curve, report)
    }

    #[test]
    fn circle_plot_has_curve_point_and_tangent() {
        let (curve, report) = classified("x=cos(t); y=sin(t)", 0.0);
        let svg = render(
            &curve,
            &report,
            0.0,
            std::f64::consts::TAU,
            &PlotOptions::default(),
        );
        assert!(svg.starts_with("<svg "));
        assert!(svg.ends_with("</svg>\n"));
        assert_eq!(svg.matches("<polyline").count(), 1);
        assert_eq!(svg.matches("class=\"tangent\"").count(), 1);
        assert_eq!(svg.matches("<circle").count(), 1);
        assert!(svg.contains("Tangent at t0 = 0"), "{svg}");
        assert!(!svg.contains("NaN"));
    }

    #[test]
    fn corner_plot_has_marker_but_no_tangent_segment() {
        let (curve, report) = classified("f=abs(t)", 0.0);
        let svg = render(&curve, &report, -1.0, 1.0, &PlotOptions::default());
        assert!(!svg.contains("class=\"tangent\""));
        assert_eq!(svg.matches("<circle").count(), 1);
        assert!(svg.contains("Corner at t0 = 0"), "{svg}");
    }

    #[test]
    fn unevaluable_samples_split_the_polyline() {
        let (curve, report) = classified("f=1 / t", 0.5);
        let opts = PlotOptions {
            samples: 17, // odd count samples t = 0 exactly
            ..PlotOptions::default()
        };
        let svg = render(&curve, &report, -1.0, 1.0, &opts);
        assert_eq!(svg.matches("<polyline").count(), 2, "{svg}");
        assert!(!svg.contains("NaN"));
    }

    #[test]
    fn missing_base_point_is_rendered_without_marker() {
        let curve = CurveExpr::parse_literal("f=ln(t)").unwrap();
        let err = curve.point_at(0.0).unwrap_err();
        let report = report_for_error(0.0, &err);
        let svg = render(&curve, &report, 0.1, 2.0, &PlotOptions::default());
        assert!(!svg.contains("<circle"));
        assert!(svg.contains("Degenerate at t0 = 0"), "{svg}");
        assert!(!svg.contains("NaN"));
    }

    #[test]
    fn output_is_deterministic() {
        let (curve, report) = classified("x=cos(t); y=sin(t)", 0.9);
        let opts = PlotOptions::default();
        let a = render(&curve, &report, 0.0, std::f64::consts::TAU, &opts);
        let b = render(&curve, &report, 0.0, std::f64::consts::TAU, &opts);
        assert_eq!(a, b);
    }

    #[test]
    fn options_validation() {
        assert!(PlotOptions::default().validate().is_ok());
        for bad in [
            PlotOptions {
                samples: 8,
                ..PlotOptions::default()
            },
            PlotOptions {
                width: 0,
                ..PlotOptions::default()
            },
            PlotOptions {
                margin: 400.0,
                ..PlotOptions::default()
            },
        ] {
            assert!(bad.validate().is_err(), "{bad:?}");
        }
    }
}
