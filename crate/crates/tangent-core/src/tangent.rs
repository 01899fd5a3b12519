//! Tangent-line classification at a point of a parametric curve.
//!
//! The decision rests on the two one-sided limits of the unit secant
//! vector. Both exist and are collinear: a tangent line. Both exist but
//! point along genuinely different lines: a corner. A side yields no
//! usable secants (outside the domain, or the curve does not move): the
//! point is degenerate. Anything else stays undetermined.
//!
//! A converged two-sided quotient limit implies collinear one-sided
//! limits, so classification first tries that cheaper route and falls
//! back to the two one-sided estimates when it fails — the fallback
//! matters: a cusp such as `(t², t³)` has a tangent line even though the
//! quotient direction flips sign across it.

use std::fmt;

use crate::curve::{CurveError, CurveExpr};
use crate::limits::{one_sided_limit, two_sided_limit, LimitConfig, LimitOutcome, Side};
use crate::vec3::Vec3;

/// Default ceiling on the collinearity residual `‖u × v‖`.
pub const DEFAULT_COLLINEAR_TOL: f64 = 1e-5;

/// Reported directions have components below this snapped to zero.
pub const SNAP_EPS: f64 = 1e-6;

/// Smallest component magnitude that may fix the reported orientation.
pub const LEAD_EPS: f64 = 1e-12;

/// Difference quotients beyond this magnitude count as diverging.
pub const SLOPE_BIG: f64 = 1e8;

/// Relative agreement required between slope estimates.
pub const SLOPE_TOL: f64 = 1e-6;

/// Classification verdict.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Tangent,
    Corner,
    Degenerate,
    Undetermined,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Tangent => "Tangent",
            Verdict::Corner => "Corner",
            Verdict::Degenerate => "Degenerate",
            Verdict::Undetermined => "Undetermined",
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Everything `classify` decided about one point.
#[derive(Debug, Clone, PartialEq)]
pub struct TangentReport {
    pub t0: f64,
    /// Base point; NaN components when the point was not evaluable
    /// (embedded error reports from [`sweep`]).
    pub point: Vec3,
    pub verdict: Verdict,
    /// Canonicalized tangent direction, present only for `Tangent`.
    pub direction: Option<Vec3>,
    /// Limit outcome approaching from below.
    pub minus: LimitOutcome,
    /// Limit outcome approaching from above.
    pub plus: LimitOutcome,
    /// `‖u × v‖` for the compared unit directions, when both existed.
    pub collinearity_residual: Option<f64>,
    pub notes: String,
}

/// A tangent line in point-direction form.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TangentLine {
    pub point: Vec3,
    pub direction: Vec3,
}

impl TangentLine {
    /// Point on the line at signed distance `s` from the base point.
    pub fn at(&self, s: f64) -> Vec3 {
        self.point + self.direction * s
    }
}

/// The report's verdict does not admit a tangent line.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NoTangent {
    pub verdict: Verdict,
}

impl fmt::Display for NoTangent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "no tangent line: verdict is {}", self.verdict)
    }
}

impl std::error::Error for NoTangent {}

/// Collinearity test for unit vectors: the residual is `‖u × v‖`, which
/// vanishes for parallel *and* antiparallel pairs — the two one-sided
/// unit secants of a smooth arc are opposite and still span one line.
pub fn collinear(u: Vec3, v: Vec3, tol: f64) -> (bool, f64) {
    debug_assert!((u.norm() - 1.0).abs() < 1e-9, "u must be unit: {u}");
    debug_assert!((v.norm() - 1.0).abs() < 1e-9, "v must be unit: {v}");
    let residual = u.cross(v).norm();
    (residual <= tol, residual)
}

/// Canonical form of a reported unit direction: components smaller than
/// [`SNAP_EPS`] snap to zero (then renormalize), and the sign is fixed so
/// the first component larger than [`LEAD_EPS`] is positive.
pub fn canonical_direction(v: Vec3) -> Vec3 {
    let snap = |c: f64| if c.abs() < SNAP_EPS { 0.0 } else { c };
    let mut w = Vec3::new(snap(v.x), snap(v.y), snap(v.z));
    if w == Vec3::ZERO {
        // Unreachable for unit input, but never divide by zero.
        w = v;
    }
    // Renormalize only when needed, so canonical vectors pass through
    // bit-identically (the function is idempotent).
    if w != v || (w.norm() - 1.0).abs() > 1e-12 {
        w = w.normalized();
    }
    let lead = if w.x.abs() > LEAD_EPS {
        w.x
    } else if w.y.abs() > LEAD_EPS {
        w.y
    } else {
        w.z
    };
    if lead < 0.0 {
        w = -w;
    }
    // Scrub negative zeros (the flip turns 0.0 into -0.0), so canonical
    // vectors also serialize identically.
    Vec3::new(w.x + 0.0, w.y + 0.0, w.z + 0.0)
}

/// Classify the point at `t0`. See [`classify_with_fast_path`].
pub fn classify(
    curve: &CurveExpr,
    t0: f64,
    cfg: &LimitConfig,
    collinear_tol: f64,
) -> Result<TangentReport, CurveError> {
    classify_with_fast_path(curve, t0, cfg, collinear_tol, true)
}

/// Classify the point at `t0`, optionally skipping the two-sided fast
/// path (useful for cross-checking the two routes against each other).
///
/// Errors only when the base point itself cannot be evaluated; probe
/// failures for t ≠ t0 are folded into the verdict.
pub fn classify_with_fast_path(
    curve: &CurveExpr,
    t0: f64,
    cfg: &LimitConfig,
    collinear_tol: f64,
    use_fast_path: bool,
) -> Result<TangentReport, CurveError> {
    assert!(
        collinear_tol.is_finite() && collinear_tol > 0.0,
        "collinear_tol must be positive and finite, got {collinear_tol}"
    );
    let point = curve.point_at(t0)?;

    if use_fast_path {
        if let LimitOutcome::Converged {
            direction,
            achieved_tol,
            steps_used,
        } = two_sided_limit(curve, t0, cfg)
        {
            // Worst pairwise cross-product norm over the accepted window:
            // for unit vectors ‖u × v‖ = sin(angle).
            let residual = achieved_tol.sin();
            if residual <= collinear_tol {
                let outcome = LimitOutcome::Converged {
                    direction,
                    achieved_tol,
                    steps_used,
                };
                return Ok(TangentReport {
                    t0,
                    point,
                    verdict: Verdict::Tangent,
                    direction: Some(canonical_direction(direction)),
                    minus: outcome.clone(),
                    plus: outcome,
                    collinearity_residual: Some(residual),
                    notes: "two-sided fast path: quotient direction converged".to_owned(),
                });
            }
        }
    }

    let minus = one_sided_limit(curve, t0, Side::Minus, cfg);
    let plus = one_sided_limit(curve, t0, Side::Plus, cfg);

    let report = match (&minus, &plus) {
        (
            LimitOutcome::Converged { direction: u, .. },
            LimitOutcome::Converged { direction: v, .. },
        ) => {
            let (is_tangent, residual) = collinear(*u, *v, collinear_tol);
            if is_tangent {
                TangentReport {
                    t0,
                    point,
                    verdict: Verdict::Tangent,
                    direction: Some(canonical_direction(*v)),
                    minus,
                    plus,
                    collinearity_residual: Some(residual),
                    notes: "one-sided unit secant limits are collinear".to_owned(),
                }
            } else {
                TangentReport {
                    t0,
                    point,
                    verdict: Verdict::Corner,
                    direction: None,
                    minus,
                    plus,
                    collinearity_residual: Some(residual),
                    notes: format!(
                        "one-sided limits exist but are not collinear (residual {residual:.3e})"
                    ),
                }
            }
        }
        _ => {
            let verdict = if matches!(minus, LimitOutcome::Degenerate { .. })
                || matches!(plus, LimitOutcome::Degenerate { .. })
            {
                Verdict::Degenerate
            } else {
                Verdict::Undetermined
            };
            let notes = side_notes(&minus, &plus);
            TangentReport {
                t0,
                point,
                verdict,
                direction: None,
                minus,
                plus,
                collinearity_residual: None,
                notes,
            }
        }
    };
    Ok(report)
}

fn side_notes(minus: &LimitOutcome, plus: &LimitOutcome) -> String {
    let mut parts = Vec::new();
    for (label, outcome) in [("minus", minus), ("plus", plus)] {
        match outcome {
            LimitOutcome::Degenerate { reason } => parts.push(format!("{label} side: {reason}")),
            LimitOutcome::Undetermined { diagnostic } => {
                parts.push(format!("{label} side: {diagnostic}"))
            }
            LimitOutcome::Converged { .. } => {}
        }
    }
    parts.join("; ")
}

/// Report used when the base point itself cannot be evaluated; the point
/// is NaN and both sides carry the error text.
pub fn report_for_error(t0: f64, err: &CurveError) -> TangentReport {
    let reason = format!("base point not evaluable: {err}");
    TangentReport {
        t0,
        point: Vec3::new(f64::NAN, f64::NAN, f64::NAN),
        verdict: Verdict::Degenerate,
        direction: None,
        minus: LimitOutcome::Degenerate {
            reason: reason.clone(),
        },
        plus: LimitOutcome::Degenerate {
            reason: reason.clone(),
        },
        collinearity_residual: None,
        notes: reason,
    }
}

/// Extract the tangent line from a report.
pub fn tangent_line(report: &TangentReport) -> Result<TangentLine, NoTangent> {
    match (report.verdict, report.direction) {
        (Verdict::Tangent, Some(direction)) => Ok(TangentLine {
            point: report.point,
            direction,
        }),
        _ => Err(NoTangent {
            verdict: report.verdict,
        }),
    }
}

/// Classify `n` evenly spaced parameters across `[t_min, t_max]`.
/// Points where the curve itself is not evaluable become embedded
/// degenerate reports rather than aborting the sweep.
pub fn sweep(
    curve: &CurveExpr,
    t_min: f64,
    t_max: f64,
    n: usize,
    cfg: &LimitConfig,
    collinear_tol: f64,
) -> Vec<TangentReport> {
    assert!(
        t_min.is_finite() && t_max.is_finite() && t_min < t_max,
        "sweep needs a finite range with t_min < t_max"
    );
    assert!(n >= 2, "sweep needs at least two samples");
    (0..n)
        .map(|i| {
            let t0 = t_min + (t_max - t_min) * (i as f64) / ((n - 1) as f64);
            match classify(curve, t0, cfg, collinear_tol) {
                Ok(report) => report,
                Err(err) => report_for_error(t0, &err),
            }
        })
        .collect()
}

// ---------------------------------------------------------------------------
// Extended derivative for graphs
// ---------------------------------------------------------------------------

/// Extended-real derivative of a graph at a point: a finite slope, a
/// signed or unsigned infinite slope (vertical tangent), or nothing.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ExtendedDerivative {
    Finite(f64),
    PlusInfinity,
    MinusInfinity,
    UnsignedInfinity,
    DoesNotExist,
}

impl ExtendedDerivative {
    /// Whether the extended derivative exists (possibly infinite); by
    /// the correspondence for graphs this is equivalent to the graph
    /// having a tangent line at the point.
    pub fn exists(self) -> bool {
        !matches!(self, ExtendedDerivative::DoesNotExist)
    }
}

impl fmt::Display for ExtendedDerivative {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtendedDerivative::Finite(m) => write!(f, "{m}"),
            ExtendedDerivative::PlusInfinity => f.write_str("+infinity"),
            ExtendedDerivative::MinusInfinity => f.write_str("-infinity"),
            ExtendedDerivative::UnsignedInfinity => f.write_str("unsigned infinity"),
            ExtendedDerivative::DoesNotExist => f.write_str("does not exist"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum SideSlope {
    Finite(f64),
    /// Diverging difference quotients; `true` means toward +infinity.
    Diverging(bool),
    Unresolved,
}

fn slopes_agree(tail: &[f64]) -> bool {
    for (i, a) in tail.iter().enumerate() {
        for b in &tail[i + 1..] {
            if (a - b).abs() > SLOPE_TOL * 1.0f64.max(a.abs()).max(b.abs()) {
                return false;
            }
        }
    }
    true
}

fn slopes_diverge(tail: &[f64]) -> bool {
    let all_big = tail.iter().all(|q| q.abs() > SLOPE_BIG);
    let growing = tail.windows(2).all(|w| w[1].abs() > w[0].abs());
    let same_sign = tail.windows(2).all(|w| w[0].signum() == w[1].signum());
    all_big && growing && same_sign
}

fn side_slope(curve: &CurveExpr, x0: f64, y0: f64, side: Side, cfg: &LimitConfig) -> SideSlope {
    let sign = match side {
        Side::Minus => -1.0,
        Side::Plus => 1.0,
    };
    let mut qs: Vec<f64> = Vec::with_capacity(cfg.max_steps);
    for k in 0..cfg.max_steps {
        let h = cfg.h0 * cfg.rho.powi(k as i32);
        let x = x0 + sign * h;
        if x == x0 {
            continue;
        }
        let Ok(p) = curve.point_at(x) else { continue };
        let q = (p.y - y0) / (x - x0);
        if q.is_nan() {
            continue;
        }
        qs.push(q);
        if qs.len() >= cfg.window {
            let tail = &qs[qs.len() - cfg.window..];
            // Agreement first: a large but settled quotient is a steep
            // finite slope, not a divergence.
            if slopes_agree(tail) {
                return SideSlope::Finite(*tail.last().unwrap());
            }
            if slopes_diverge(tail) {
                return SideSlope::Diverging(*tail.last().unwrap() > 0.0);
            }
        }
    }
    SideSlope::Unresolved
}

/// Estimate the extended derivative of a graph curve at `x0`.
///
/// Errors if the base point is not evaluable. Panics when called on a
/// non-graph curve.
pub fn extended_derivative(
    curve: &CurveExpr,
    x0: f64,
    cfg: &LimitConfig,
) -> Result<ExtendedDerivative, CurveError> {
    assert!(
        curve.is_graph(),
        "extended_derivative requires a graph curve (t, f(t), 0)"
    );
    if let Err(e) = cfg.validate() {
        panic!("{e}");
    }
    let base = curve.point_at(x0)?;
    let minus = side_slope(curve, x0, base.y, Side::Minus, cfg);
    let plus = side_slope(curve, x0, base.y, Side::Plus, cfg);
    let ext = match (minus, plus) {
        (SideSlope::Finite(a), SideSlope::Finite(b)) => {
            if (a - b).abs() <= SLOPE_TOL * 1.0f64.max(a.abs()).max(b.abs()) {
                ExtendedDerivative::Finite(0.5 * (a + b))
            } else {
                ExtendedDerivative::DoesNotExist
            }
        }
        (SideSlope::Diverging(up_l), SideSlope::Diverging(up_r)) => match (up_l, up_r) {
            (true, true) => ExtendedDerivative::PlusInfinity,
            (false, false) => ExtendedDerivative::MinusInfinity,
            _ => ExtendedDerivative::UnsignedInfinity,
        },
        _ => ExtendedDerivative::DoesNotExist,
    };
    Ok(ext)
}

/// Classify a graph point and cross-check the verdict against the
/// extended derivative: for graphs, a tangent line exists exactly when
/// the extended derivative does. A disagreement between the two
/// estimators downgrades the verdict to `Undetermined`.
pub fn graph_tangent(
    curve: &CurveExpr,
    x0: f64,
    cfg: &LimitConfig,
) -> Result<TangentReport, CurveError> {
    assert!(curve.is_graph(), "graph_tangent requires a graph curve");
    let ext = extended_derivative(curve, x0, cfg)?;
    let mut report = classify(curve, x0, cfg, DEFAULT_COLLINEAR_TOL)?;
    let slope_says_tangent = ext.exists();
    let secants_say_tangent = report.verdict == Verdict::Tangent;
    if slope_says_tangent != secants_say_tangent {
        report.notes = format!(
            "slope estimate ({ext}) and secant verdict ({}) disagree",
            report.verdict
        );
        report.verdict = Verdict::Undetermined;
        report.direction = None;
    } else if slope_says_tangent {
        report.notes = format!("{}; extended slope {ext}", report.notes);
    }
    Ok(report)
}
