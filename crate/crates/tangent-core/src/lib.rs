//! Tangent-line classification for parametric curves and graphs.
//!
//! The core question: does a curve have a tangent line at a point, and
//! if so, which line? The answer is computed from one-sided limits of
//! unit secant directions, cross-checked against a two-sided quotient
//! route and (for graphs) an extended slope estimate.

pub mod cli;
pub mod curve;
pub mod expr;
pub mod limits;
pub mod oracle;
pub mod report;
pub mod svg;
pub mod tangent;
pub mod vec3;

pub use curve::{CurveError, CurveExpr, SecantSample};
pub use expr::{EvalError, ExprAst, ParseError};
pub use limits::{one_sided_limit, two_sided_limit, LimitConfig, LimitOutcome, Side};
pub use report::{MachineRecord, OracleRecord};
pub use svg::PlotOptions;
pub use tangent::{
    classify, classify_with_fast_path, extended_derivative, graph_tangent, sweep, tangent_line,
    ExtendedDerivative, TangentLine, TangentReport, Verdict,
};
pub use vec3::Vec3;
