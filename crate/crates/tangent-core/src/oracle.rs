//! Curated regression corpus with analytically known tangent behavior.
//!
//! Each case records a curve, a parameter, the expected verdict, and —
//! for tangent cases — the expected direction, all derived by hand from
//! the geometry rather than from this crate's own numerics. Running the
//! corpus through [`classify`] is the regression suite: every case must
//! pass with the default configuration.
//!
//! The corpus is also exported as a JSONL data file
//! (`data/corpus.jsonl`, same curve-literal syntax as the CLI) so other
//! implementations can consume identical cases.

use serde::Serialize;

use crate::curve::CurveExpr;
use crate::limits::LimitConfig;
use crate::tangent::{canonical_direction, classify, collinear, report_for_error, Verdict};
use crate::vec3::Vec3;

/// One corpus entry.
#[derive(Debug, Clone)]
pub struct CorpusCase {
    /// Short stable identifier.
    pub name: &'static str,
    pub curve: CurveExpr,
    pub t0: f64,
    pub expected_verdict: Verdict,
    /// Canonical unit direction, present exactly for `Tangent` cases.
    pub expected_direction: Option<Vec3>,
    /// How the expectation was derived.
    pub provenance: &'static str,
}

/// Result of checking one corpus case. Failures are data, not errors.
#[derive(Debug, Clone)]
pub struct OracleOutcome {
    pub name: &'static str,
    pub curve: String,
    pub t0: f64,
    pub expected: Verdict,
    pub verdict: Verdict,
    pub pass: bool,
    /// Collinearity residual reported by the classification, if any.
    pub residual: Option<f64>,
    /// Empty on pass; diagnostics (both side limits, residuals) on failure.
    pub note: String,
}

fn case(
    name: &'static str,
    literal: &str,
    t0: f64,
    expected_verdict: Verdict,
    expected_direction: Option<Vec3>,
    provenance: &'static str,
) -> CorpusCase {
    let curve = CurveExpr::parse_literal(literal)
        .unwrap_or_else(|e| panic!("corpus literal {literal:?}: {e}"));
    if let Some(d) = expected_direction {
        debug_assert!((d.norm() - 1.0).abs() < 1e-12, "{name}: {d} is not unit");
        debug_assert_eq!(expected_verdict, Verdict::Tangent, "{name}");
    }
    CorpusCase {
        name,
        curve,
        t0,
        expected_verdict,
        expected_direction,
        provenance,
    }
}

/// Tangent direction of a circle traversed as (cos t, sin t): collinear
/// with (-sin t0, cos t0, 0), stored in canonical orientation.
fn circle_dir(t0: f64) -> Vec3 {
    canonical_direction(Vec3::new(-t0.sin(), t0.cos(), 0.0))
}

const CIRCLE_NOTE: &str = "Hand derivation: the tangent of a circle at a point is perpendicular \
     to the radius through that point, so it is collinear with (-sin t0, cos t0, 0); \
     translation and radius do not change the direction.";

/// The built-in corpus.
pub fn builtin_corpus() -> Vec<CorpusCase> {
    let unit_circle = "x=cos(t); y=sin(t)";
    let offset_circle = "x=0.75 + 2.5 * cos(t); y=-1.5 + 2.5 * sin(t)";
    vec![
        case(
            "circle-r1-t0",
            unit_circle,
            0.0,
            Verdict::Tangent,
            Some(circle_dir(0.0)),
            CIRCLE_NOTE,
        ),
        case(
            "circle-r1-t0.9",
            unit_circle,
            0.9,
            Verdict::Tangent,
            Some(circle_dir(0.9)),
            CIRCLE_NOTE,
        ),
        case(
            "circle-r1-t2.5",
            unit_circle,
            2.5,
            Verdict::Tangent,
            Some(circle_dir(2.5)),
            CIRCLE_NOTE,
        ),
        case(
            "circle-r2.5-t0",
            offset_circle,
            0.0,
            Verdict::Tangent,
            Some(circle_dir(0.0)),
            CIRCLE_NOTE,
        ),
        case(
            "circle-r2.5-t0.9",
            offset_circle,
            0.9,
            Verdict::Tangent,
            Some(circle_dir(0.9)),
            CIRCLE_NOTE,
        ),
        case(
            "circle-r2.5-t2.5",
            offset_circle,
            2.5,
            Verdict::Tangent,
            Some(circle_dir(2.5)),
            CIRCLE_NOTE,
        ),
        case(
            "cbrt-vertical",
            "f=cbrt(t)",
            0.0,
            Verdict::Tangent,
            Some(Vec3::new(0.0, 1.0, 0.0)),
            "Hand derivation: the unit secants of the cube-root graph lean toward the \
             vertical axis as the probe approaches 0; the one-sided limits are (0,1,0) and \
             (0,-1,0), which span the same vertical line.",
        ),
        case(
            "abs-corner",
            "f=abs(t)",
            0.0,
            Verdict::Corner,
            None,
            "Hand derivation: every right secant of |x| at 0 is (1,1)/sqrt(2) and every \
             left secant is (-1,1)/sqrt(2); the limits exist but are not collinear \
             (cross norm exactly 1).",
        ),
        case(
            "parabola-flat",
            "f=t^2",
            0.0,
            Verdict::Tangent,
            Some(Vec3::new(1.0, 0.0, 0.0)),
            "Hand derivation: differentiable graph with slope 0 at the origin; the tangent \
             direction is (1, 0, 0).",
        ),
        case(
            "parabola-slope2",
            "f=t^2",
            1.0,
            Verdict::Tangent,
            Some(Vec3::new(1.0, 2.0, 0.0).normalized()),
            "Hand derivation: differentiable graph with slope 2 at x = 1; the tangent \
             direction is (1, 2, 0) normalized.",
        ),
        case(
            "semicubical-cusp",
            "x=t^2; y=t^3",
            0.0,
            Verdict::Tangent,
            Some(Vec3::new(1.0, 0.0, 0.0)),
            "Hand derivation: unit secants simplify to sign(t) * (1, t, 0)/sqrt(1 + t^2), \
             so both one-sided limits are on the x-axis and collinear, although the \
             derivative vector vanishes at the cusp.",
        ),
        case(
            "cubic-diagonal",
            "x=t^3; y=t^3",
            0.0,
            Verdict::Tangent,
            Some(Vec3::new(1.0, 1.0, 0.0).normalized()),
            "Hand derivation: the track is the line y = x traversed with a momentary stop; \
             every chord lies on the line, so the unit secants are constantly \
             (1,1)/sqrt(2) up to sign, although the derivative vector vanishes at 0.",
        ),
        case(
            "helix",
            "x=cos(t); y=sin(t); z=t",
            1.0,
            Verdict::Tangent,
            Some(canonical_direction(Vec3::new(
                -1.0f64.sin(),
                1.0f64.cos(),
                1.0,
            ))),
            "Hand derivation: smooth space curve; the tangent direction follows the \
             derivative (-sin t, cos t, 1)/sqrt(2).",
        ),
        case(
            "constant-point",
            "x=1; y=1",
            0.0,
            Verdict::Degenerate,
            None,
            "Hand derivation: the curve never leaves the point, so every chord is zero and \
             no secant direction exists.",
        ),
        case(
            "oscillator",
            "f=t * sin(1 / (abs(t) + 1e-300))",
            0.0,
            Verdict::Undetermined,
            None,
            "Hand derivation: the secant slope at step h is sin(1/(h + 1e-300)), which is \
             sin(1/h) to within one part in 1e280: it sweeps [-1, 1] without settling, so \
             no side limit exists. The infinitesimal offset keeps the expression \
             evaluable at 0, where the curve passes through the origin.",
        ),
        case(
            "line",
            "x=t; y=2 * t",
            0.5,
            Verdict::Tangent,
            Some(Vec3::new(1.0, 2.0, 0.0).normalized()),
            "Hand derivation: every secant of a line lies on the line itself.",
        ),
        case(
            "sqrt-endpoint",
            "f=sqrt(t)",
            0.0,
            Verdict::Degenerate,
            None,
            "Hand derivation: the domain ends at 0, so the left side has no curve points \
             to take secants through; the point is degenerate, not a two-sided tangent.",
        ),
    ]
}

/// Check one case: the verdict must match, and for tangent cases the
/// reported direction must be collinear with the expected one (within
/// `10 * collinear_tol`) and agree in canonical orientation.
pub fn run_oracle(case: &CorpusCase, cfg: &LimitConfig, collinear_tol: f64) -> OracleOutcome {
    let report = match classify(&case.curve, case.t0, cfg, collinear_tol) {
        Ok(r) => r,
        Err(e) => report_for_error(case.t0, &e),
    };
    let mut problems: Vec<String> = Vec::new();
    if report.verdict != case.expected_verdict {
        problems.push(format!(
            "expected verdict {}, got {}",
            case.expected_verdict, report.verdict
        ));
    }
    if let (Some(want), Some(got)) = (case.expected_direction, report.direction) {
        let (ok, cross) = collinear(want, got, 10.0 * collinear_tol);
        if !ok {
            problems.push(format!(
                "direction {got} is not collinear with expected {want} (cross norm {cross:.3e})"
            ));
        } else if want.dot(got) <= 0.0 {
            problems.push(format!(
                "direction {got} is oriented against expected {want}"
            ));
        }
    } else if case.expected_direction.is_some() && report.verdict == Verdict::Tangent {
        problems.push("tangent verdict without a reported direction".to_owned());
    }
    let pass = problems.is_empty();
    let note = if pass {
        String::new()
    } else {
        problems.push(format!("minus side: {}", report.minus.brief()));
        problems.push(format!("plus side: {}", report.plus.brief()));
        if let Some(r) = report.collinearity_residual {
            problems.push(format!("collinearity residual {r:.3e}"));
        }
        problems.join("; ")
    };
    OracleOutcome {
        name: case.name,
        curve: case.curve.label().to_owned(),
        t0: case.t0,
        expected: case.expected_verdict,
        verdict: report.verdict,
        pass,
        residual: report.collinearity_residual,
        note,
    }
}

/// Run the whole corpus.
pub fn run_all(cfg: &LimitConfig, collinear_tol: f64) -> Vec<OracleOutcome> {
    builtin_corpus()
        .iter()
        .map(|c| run_oracle(c, cfg, collinear_tol))
        .collect()
}

#[derive(Serialize)]
struct CorpusRecord<'a> {
    name: &'a str,
    curve: &'a str,
    t0: f64,
    expected_verdict: &'a str,
    expected_direction: Option<[f64; 3]>,
    provenance: &'a str,
}

/// The corpus as JSON Lines, one case per line (the exported data file).
pub fn corpus_jsonl() -> String {
    let mut out = String::new();
    for case in builtin_corpus() {
        let record = CorpusRecord {
            name: case.name,
            curve: case.curve.label(),
            t0: case.t0,
            expected_verdict: case.expected_verdict.as_str(),
            expected_direction: case.expected_direction.map(|d| d.to_array()),
            provenance: case.provenance,
        };
        out.push_str(&serde_json::to_string(&record).expect("corpus records serialize"));
        out.push('\n');
    }
    out
}
