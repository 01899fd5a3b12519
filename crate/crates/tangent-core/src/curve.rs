//! Parametric curves built from expression trees.
//!
//! A curve is `t ↦ (x(t), y(t), z(t))` with all coordinates sharing one
//! parameter variable. Planar curves set `z = 0`. A *graph* curve is the
//! special shape `t ↦ (t, f(t), 0)`, which several graph-specific
//! operations (extended slopes, vertical tangents) rely on.
//!
//! Curve literals:
//!
//! ```text
//! x=<expr>; y=<expr>            planar parametric
//! x=<expr>; y=<expr>; z=<expr>  spatial parametric
//! f=<expr>                      graph of a function
//! ```

use std::fmt;

use crate::expr::{EvalError, ExprAst, ParseError};
use crate::vec3::Vec3;

/// Derivative vectors shorter than this are treated as vanishing.
pub const DERIV_EPS: f64 = 1e-12;

/// Chords shorter than this are treated as zero. The threshold scales
/// with the two points: forming `M - A` loses about 16 digits relative
/// to the larger operand, so a chord 13 orders of magnitude below that
/// scale is cancellation noise with a meaningless direction. (Near the
/// origin the threshold shrinks with the points themselves — the
/// subtraction is exact there, and curves like the semicubical cusp
/// produce genuinely tiny but trustworthy chords.)
pub fn chord_eps(a: Vec3, m: Vec3) -> f64 {
    1e-13 * a.norm().max(m.norm())
}

/// Errors from evaluating curve geometry.
#[derive(Debug, Clone, PartialEq)]
pub enum CurveError {
    /// A coordinate expression failed to evaluate.
    Eval(EvalError),
    /// The point was evaluable but has a non-finite coordinate.
    NonFinitePoint { t: f64 },
    /// The probe point coincides with the base point to within
    /// [`chord_eps`]; no secant direction exists.
    ZeroChord { t0: f64, t: f64 },
    /// The derivative vector vanishes (shorter than [`DERIV_EPS`]).
    ZeroDerivative { t0: f64 },
    /// Coordinate expressions disagree on the parameter variable.
    MixedVariables { first: String, second: String },
}

impl fmt::Display for CurveError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CurveError::Eval(e) => write!(f, "{e}"),
            CurveError::NonFinitePoint { t } => {
                write!(f, "curve point at t = {t} is not finite")
            }
            CurveError::ZeroChord { t0, t } => {
                write!(
                    f,
                    "zero chord: curve points at t0 = {t0} and t = {t} coincide"
                )
            }
            CurveError::ZeroDerivative { t0 } => {
                write!(f, "derivative vector vanishes at t0 = {t0}")
            }
            CurveError::MixedVariables { first, second } => {
                write!(
                    f,
                    "coordinate expressions mix variables '{first}' and '{second}'"
                )
            }
        }
    }
}

impl std::error::Error for CurveError {
    fn source(&self) -> Option<&(dyn std::error::Error + 'static)> {
        match self {
            CurveError::Eval(e) => Some(e),
            _ => None,
        }
    }
}

impl From<EvalError> for CurveError {
    fn from(e: EvalError) -> CurveError {
        CurveError::Eval(e)
    }
}

/// One secant probe: the parameter step, the chord components, and the
/// chord scaled to unit length.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SecantSample {
    pub delta_t: f64,
    pub delta_x: f64,
    pub delta_y: f64,
    pub delta_z: f64,
    pub unit_dir: Vec3,
}

impl SecantSample {
    /// The chord vector `M - A` reassembled from its components.
    pub fn chord(&self) -> Vec3 {
        Vec3::new(self.delta_x, self.delta_y, self.delta_z)
    }
}

/// A parametric curve with expression coordinates.
#[derive(Debug, Clone)]
pub struct CurveExpr {
    x: ExprAst,
    y: ExprAst,
    z: ExprAst,
    label: String,
    graph: bool,
}

impl CurveExpr {
    /// Build a parametric curve; `z = None` means a planar curve.
    pub fn parametric(x: ExprAst, y: ExprAst, z: Option<ExprAst>) -> Result<CurveExpr, CurveError> {
        let z = z.unwrap_or_else(|| ExprAst::number(0.0));
        check_shared_variable(&[&x, &y, &z])?;
        let mut c = CurveExpr {
            x,
            y,
            z,
            label: String::new(),
            graph: false,
        };
        c.label = c.literal();
        Ok(c)
    }

    /// Build the graph curve `t ↦ (t, f(t), 0)`.
    pub fn graph(f: ExprAst) -> CurveExpr {
        let var = f.var_name().unwrap_or("t");
        let mut c = CurveExpr {
            x: ExprAst::variable(var),
            y: f,
            z: ExprAst::number(0.0),
            label: String::new(),
            graph: true,
        };
        c.label = c.literal();
        c
    }

    /// Parse a curve literal (see the module docs for the forms).
    /// Error offsets index into `src`.
    pub fn parse_literal(src: &str) -> Result<CurveExpr, ParseError> {
        let mut segments = split_segments(src);
        // Tolerate one trailing ';'.
        if let Some(last) = segments.last() {
            if last.1.trim().is_empty() {
                segments.pop();
            }
        }
        if segments.is_empty() {
            return Err(ParseError {
                offset: 0,
                expected: "a curve literal ('x=...; y=...' or 'f=...')".to_owned(),
            });
        }

        let mut entries = Vec::new();
        for (seg_offset, seg) in &segments {
            entries.push(parse_segment(*seg_offset, seg)?);
        }

        let mut curve = if entries[0].key == "f" {
            if entries.len() > 1 {
                return Err(ParseError {
                    offset: entries[1].key_offset,
                    expected: "end of input (the 'f=' form takes a single entry)".to_owned(),
                });
            }
            CurveExpr::graph(entries.remove(0).expr)
        } else {
            let keys = ["x", "y", "z"];
            if entries.len() > 3 {
                return Err(ParseError {
                    offset: entries[3].key_offset,
                    expected: "end of input (at most 'x=', 'y=', 'z=' entries)".to_owned(),
                });
            }
            for (entry, want) in entries.iter().zip(keys) {
                if entry.key != want {
                    return Err(ParseError {
                        offset: entry.key_offset,
                        expected: format!("'{want}=' (entries in x, y, z order)"),
                    });
                }
            }
            if entries.len() < 2 {
                return Err(ParseError {
                    offset: src.len(),
                    expected: "'; y=<expr>'".to_owned(),
                });
            }
            let mut it = entries.into_iter();
            let x = it.next().unwrap();
            let y = it.next().unwrap();
            let z = it.next();
            let shared = [Some(&x), Some(&y), z.as_ref()]
                .into_iter()
                .flatten()
                .find_map(|e| e.expr.var_name().map(|v| (v.to_owned(), e.expr_offset)));
            if let Some((first, _)) = &shared {
                for entry in [Some(&x), Some(&y), z.as_ref()].into_iter().flatten() {
                    if let Some(v) = entry.expr.var_name() {
                        if v != first {
                            return Err(ParseError {
                                offset: entry.expr_offset,
                                expected: format!(
                                    "an expression in the shared variable '{first}' (found '{v}')"
                                ),
                            });
                        }
                    }
                }
            }
            CurveExpr::parametric(x.expr, y.expr, z.map(|e| e.expr))
                .expect("variables were checked segment by segment")
        };
        curve.label = src.trim().to_owned();
        Ok(curve)
    }

    /// True for curves built as graphs `t ↦ (t, f(t), 0)`.
    pub fn is_graph(&self) -> bool {
        self.graph
    }

    /// Short human label; for parsed curves this is the original literal.
    pub fn label(&self) -> &str {
        &self.label
    }

    /// Canonical literal form regenerated from the coordinate trees.
    pub fn literal(&self) -> String {
        if self.graph {
            format!("f={}", self.y)
        } else if self.z == ExprAst::number(0.0) {
            format!("x={}; y={}", self.x, self.y)
        } else {
            format!("x={}; y={}; z={}", self.x, self.y, self.z)
        }
    }

    pub fn x(&self) -> &ExprAst {
        &self.x
    }

    pub fn y(&self) -> &ExprAst {
        &self.y
    }

    pub fn z(&self) -> &ExprAst {
        &self.z
    }

    /// Name of the parameter variable ("t" if no coordinate uses one).
    pub fn var_name(&self) -> &str {
        self.x
            .var_name()
            .or(self.y.var_name())
            .or(self.z.var_name())
            .unwrap_or("t")
    }

    /// Evaluate the curve point at parameter `t`.
    pub fn point_at(&self, t: f64) -> Result<Vec3, CurveError> {
        let p = Vec3::new(self.x.eval(t)?, self.y.eval(t)?, self.z.eval(t)?);
        if !p.is_finite() {
            return Err(CurveError::NonFinitePoint { t });
        }
        Ok(p)
    }

    /// Secant probe from the base point at `t0` toward the point at `t`.
    pub fn secant_direction(&self, t0: f64, t: f64) -> Result<SecantSample, CurveError> {
        let a = self.point_at(t0)?;
        let m = self.point_at(t)?;
        let chord = m - a;
        let n = chord.norm();
        if n <= chord_eps(a, m) {
            return Err(CurveError::ZeroChord { t0, t });
        }
        Ok(SecantSample {
            delta_t: t - t0,
            delta_x: chord.x,
            delta_y: chord.y,
            delta_z: chord.z,
            unit_dir: chord / n,
        })
    }

    /// Unit tangent direction from the dual-number derivative, when the
    /// derivative exists and does not vanish.
    pub fn analytic_direction(&self, t0: f64) -> Result<Vec3, CurveError> {
        let dx = self.x.eval_dual(t0)?;
        let dy = self.y.eval_dual(t0)?;
        let dz = self.z.eval_dual(t0)?;
        let v = Vec3::new(dx.derivative, dy.derivative, dz.derivative);
        if v.norm() < DERIV_EPS {
            return Err(CurveError::ZeroDerivative { t0 });
        }
        Ok(v.normalized())
    }
}

struct Entry {
    key: String,
    key_offset: usize,
    expr: ExprAst,
    expr_offset: usize,
}

fn split_segments(src: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = 0;
    for (i, c) in src.char_indices() {
        if c == ';' {
            out.push((start, &src[start..i]));
            start = i + 1;
        }
    }
    out.push((start, &src[start..]));
    out
}

fn parse_segment(seg_offset: usize, seg: &str) -> Result<Entry, ParseError> {
    let trimmed_start = seg_offset + (seg.len() - seg.trim_start().len());
    let body = seg.trim();
    if body.is_empty() {
        return Err(ParseError {
            offset: seg_offset,
            expected: "a '<name>=<expr>' entry".to_owned(),
        });
    }
    let Some(eq) = body.find('=') else {
        return Err(ParseError {
            offset: trimmed_start,
            expected: "'=' in a '<name>=<expr>' entry".to_owned(),
        });
    };
    let key = body[..eq].trim().to_owned();
    if !matches!(key.as_str(), "x" | "y" | "z" | "f") {
        return Err(ParseError {
            offset: trimmed_start,
            expected: format!("'x', 'y', 'z', or 'f' before '=' (found '{key}')"),
        });
    }
    let expr_offset = trimmed_start + eq + 1;
    let expr_src = &body[eq + 1..];
    let expr = ExprAst::parse(expr_src).map_err(|e| ParseError {
        offset: expr_offset + e.offset,
        expected: e.expected,
    })?;
    Ok(Entry {
        key,
        key_offset: trimmed_start,
        expr,
        expr_offset,
    })
}

fn check_shared_variable(exprs: &[&ExprAst]) -> Result<(), CurveError> {
    let mut seen: Option<&str> = None;
    for e in exprs {
        if let Some(v) = e.var_name() {
            match seen {
                None => seen = Some(v),
                Some(first) if first != v => {
                    return Err(CurveError::MixedVariables {
                        first: first.to_owned(),
                        second: v.to_owned(),
                    })
                }
                _ => {}
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn literal_forms() {
        let c = CurveExpr::parse_literal("x=cos(t); y=sin(t)").unwrap();
        assert!(!c.is_graph());
        let p = c.point_at(0.0).unwrap();
        assert_eq!(p, Vec3::new(1.0, 0.0, 0.0));

        let c = CurveExpr::parse_literal("x=cos(t); y=sin(t); z=t").unwrap();
        let p = c.point_at(0.0).unwrap();
        assert_eq!(p, Vec3::new(1.0, 0.0, 0.0));
        assert_eq!(c.point_at(2.0).unwrap().z, 2.0);

        let c = CurveExpr::parse_literal("f=t^2").unwrap();
        assert!(c.is_graph());
        assert_eq!(c.point_at(3.0).unwrap(), Vec3::new(3.0, 9.0, 0.0));

        // Trailing semicolon is tolerated.
        assert!(CurveExpr::parse_literal("x=t; y=t;").is_ok());
    }

    #[test]
    fn literal_errors_carry_offsets() {
        let err = CurveExpr::parse_literal("x=t").unwrap_err();
        assert!(err.expected.contains("y="), "got {}", err.expected);

        let err = CurveExpr::parse_literal("x=t; w=t").unwrap_err();
        assert_eq!(err.offset, 5);
        assert!(err.expected.contains("found 'w'"), "got {}", err.expected);

        let err = CurveExpr::parse_literal("f=t; y=t").unwrap_err();
        assert!(
            err.expected.contains("single entry"),
            "got {}",
            err.expected
        );

        // Offset of an inner expression error is relative to the whole literal.
        let err = CurveExpr::parse_literal("x=t; y=t +").unwrap_err();
        assert_eq!(err.offset, 10);

        let err = CurveExpr::parse_literal("x=t; y=s").unwrap_err();
        assert_eq!(err.offset, 7);
        assert!(err.expected.contains("'t'"), "got {}", err.expected);

        let err = CurveExpr::parse_literal("y=t; x=t").unwrap_err();
        assert!(err.expected.contains("'x='"), "got {}", err.expected);
    }

    #[test]
    fn graph_shorthand_matches_parametric_form() {
        let g = CurveExpr::parse_literal("f=u^2").unwrap();
        let p = CurveExpr::parse_literal("x=u; y=u^2").unwrap();
        for t in [-2.0, -0.5, 0.0, 1.25] {
            assert_eq!(g.point_at(t).unwrap(), p.point_at(t).unwrap());
        }
        assert!(g.is_graph());
        assert!(!p.is_graph());
        assert_eq!(g.var_name(), "u");
    }

    #[test]
    fn point_errors() {
        let c = CurveExpr::parse_literal("f=ln(t)").unwrap();
        assert!(matches!(c.point_at(0.0), Err(CurveError::Eval(_))));

        let c = CurveExpr::parse_literal("f=exp(t)").unwrap();
        assert!(matches!(
            c.point_at(1000.0),
            Err(CurveError::NonFinitePoint { .. })
        ));
    }

    #[test]
    fn secant_directions() {
        let line = CurveExpr::parse_literal("x=t; y=t").unwrap();
        for t in [0.5, 1e-3, -2.0] {
            let s = line.secant_direction(0.0, t).unwrap();
            let want = Vec3::new(1.0, 1.0, 0.0).normalized() * t.signum();
            assert!((s.unit_dir - want).norm() < 1e-15);
            assert_eq!(s.delta_t, t);
        }

        let constant = CurveExpr::parse_literal("x=1; y=2").unwrap();
        assert!(matches!(
            constant.secant_direction(0.0, 0.5),
            Err(CurveError::ZeroChord { .. })
        ));
    }

    fn probe_curves() -> Vec<CurveExpr> {
        [
            "x=cos(t); y=sin(t)",
            "x=t^2; y=t^3",
            "x=cos(t); y=sin(t); z=t",
            "f=t^3 - 2 * t",
            "f=exp(t / 4)",
        ]
        .iter()
        .map(|s| CurveExpr::parse_literal(s).unwrap())
        .collect()
    }

    proptest::proptest! {
        /// Swapping the endpoints exactly negates both the chord and the
        /// unit direction.
        #[test]
        fn secant_is_antisymmetric(
            idx in 0usize..5,
            t0 in -2.0f64..2.0,
            dt in proptest::prelude::prop_oneof![-1.0f64..-1e-6, 1e-6f64..1.0],
        ) {
            let c = &probe_curves()[idx];
            let t = t0 + dt;
            let (Ok(fwd), Ok(rev)) =
                (c.secant_direction(t0, t), c.secant_direction(t, t0))
            else {
                return Ok(());
            };
            proptest::prop_assert_eq!(rev.unit_dir, -fwd.unit_dir);
            proptest::prop_assert_eq!(rev.chord(), -fwd.chord());
            proptest::prop_assert_eq!(rev.delta_t, -fwd.delta_t);
        }

        /// Normalizing the chord agrees with normalizing the difference
        /// quotient and multiplying by the sign of the parameter step:
        /// the two routes to the unit secant are the same vector.
        #[test]
        fn unit_secant_matches_signed_quotient_route(
            idx in 0usize..5,
            t0 in -2.0f64..2.0,
            dt in proptest::prelude::prop_oneof![-1.0f64..-1e-6, 1e-6f64..1.0],
        ) {
            let c = &probe_curves()[idx];
            let Ok(s) = c.secant_direction(t0, t0 + dt) else {
                return Ok(());
            };
            let quotient = Vec3::new(
                s.delta_x / s.delta_t,
                s.delta_y / s.delta_t,
                s.delta_z / s.delta_t,
            );
            let routed = quotient.normalized() * s.delta_t.signum();
            proptest::prop_assert!(
                (routed - s.unit_dir).norm() < 1e-12,
                "chord route {} vs quotient route {}",
                s.unit_dir,
                routed
            );
        }
    }

    #[test]
    fn zero_chord_threshold_scales_with_the_points() {
        // Points ~1e8 from the origin: a 1e-9 chord is below resolution.
        let c = CurveExpr::parse_literal("x=100000000 + t; y=100000000").unwrap();
        assert!(matches!(
            c.secant_direction(0.0, 1e-9),
            Err(CurveError::ZeroChord { .. })
        ));
        // ... but well-separated points are fine.
        assert!(c.secant_direction(0.0, 1e-2).is_ok());

        // Near the origin the threshold shrinks with the points: the
        // quadratically small chords of a cusp stay usable.
        let cusp = CurveExpr::parse_literal("x=t^2; y=t^3").unwrap();
        let s = cusp.secant_direction(0.0, 1e-7).unwrap();
        assert!((s.unit_dir - Vec3::new(1.0, 0.0, 0.0)).norm() < 1e-6);
    }

    #[test]
    fn analytic_directions() {
        let circle = CurveExpr::parse_literal("x=cos(t); y=sin(t)").unwrap();
        let d = circle.analytic_direction(0.0).unwrap();
        assert!((d - Vec3::new(0.0, 1.0, 0.0)).norm() < 1e-15);

        let cusp = CurveExpr::parse_literal("x=t^2; y=t^3").unwrap();
        assert!(matches!(
            cusp.analytic_direction(0.0),
            Err(CurveError::ZeroDerivative { .. })
        ));

        let v = CurveExpr::parse_literal("f=abs(t)").unwrap();
        assert!(matches!(
            v.analytic_direction(0.0),
            Err(CurveError::Eval(_))
        ));
    }

    #[test]
    fn mixed_variables_rejected() {
        let x = ExprAst::parse("t").unwrap();
        let y = ExprAst::parse("s^2").unwrap();
        assert!(matches!(
            CurveExpr::parametric(x, y, None),
            Err(CurveError::MixedVariables { .. })
        ));
    }

    #[test]
    fn canonical_literal_reparses() {
        for src in ["x=cos(t); y=sin(t)", "f=t^2 - 1", "x=t; y=t^2; z=t^3"] {
            let c = CurveExpr::parse_literal(src).unwrap();
            let lit = c.literal();
            let c2 = CurveExpr::parse_literal(&lit).unwrap();
            assert_eq!(c.is_graph(), c2.is_graph());
            for t in [-1.0, 0.3, 2.0] {
                assert_eq!(c.point_at(t).unwrap(), c2.point_at(t).unwrap());
            }
        }
    }
}
