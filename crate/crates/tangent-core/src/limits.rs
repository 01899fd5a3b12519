//! One-sided and two-sided limits of secant directions.
//!
//! Probes approach the base parameter along the geometric schedule
//! `t = t0 ± h0·rho^k`. An estimate sequence counts as converged when the
//! last `window` unit vectors agree pairwise within `angle_tol` radians.
//!
//! The one-sided limit estimates the unit secant vector itself, which
//! carries the approach sign: on a smooth arc the two sides converge to
//! opposite vectors. The two-sided limit instead estimates the direction
//! of the normalized difference quotient — the unit chord with the sign
//! of the parameter step divided out — which is the same vector from both
//! sides and therefore can have a genuine two-sided limit.

use std::fmt;

use crate::curve::{chord_eps, CurveExpr};
use crate::vec3::Vec3;

/// Which side of the base parameter to approach from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Minus,
    Plus,
}

impl Side {
    fn sign(self) -> f64 {
        match self {
            Side::Minus => -1.0,
            Side::Plus => 1.0,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Side::Minus => "minus",
            Side::Plus => "plus",
        }
    }
}

/// Probe schedule and convergence thresholds.
#[derive(Debug, Clone, PartialEq)]
pub struct LimitConfig {
    /// Initial parameter step.
    pub h0: f64,
    /// Step shrink factor per probe, in (0, 1).
    pub rho: f64,
    /// Pairwise angular agreement (radians) required for convergence.
    pub angle_tol: f64,
    /// Number of consecutive estimates that must agree.
    pub window: usize,
    /// Length of the probe schedule per side.
    pub max_steps: usize,
}

impl Default for LimitConfig {
    fn default() -> LimitConfig {
        LimitConfig {
            h0: 1e-2,
            rho: 0.5,
            angle_tol: 1e-7,
            window: 3,
            max_steps: 48,
        }
    }
}

impl LimitConfig {
    pub fn validate(&self) -> Result<(), InvalidConfig> {
        fn bad(message: String) -> Result<(), InvalidConfig> {
            Err(InvalidConfig { message })
        }
        if !(self.h0.is_finite() && self.h0 > 0.0) {
            return bad(format!("h0 must be positive and finite, got {}", self.h0));
        }
        if !(self.rho.is_finite() && self.rho > 0.0 && self.rho < 1.0) {
            return bad(format!("rho must lie in (0, 1), got {}", self.rho));
        }
        if !(self.angle_tol.is_finite() && self.angle_tol > 0.0) {
            return bad(format!(
                "angle_tol must be positive and finite, got {}",
                self.angle_tol
            ));
        }
        if self.window < 2 {
            return bad(format!("window must be at least 2, got {}", self.window));
        }
        if self.max_steps < self.window {
            return bad(format!(
                "max_steps ({}) must be at least window ({})",
                self.max_steps, self.window
            ));
        }
        Ok(())
    }

    fn assert_valid(&self) {
        if let Err(e) = self.validate() {
            panic!("{e}");
        }
    }

    /// Probe offset for schedule index `k`.
    pub(crate) fn step(&self, k: usize) -> f64 {
        self.h0 * self.rho.powi(k as i32)
    }
}

/// Invalid [`LimitConfig`] parameters.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InvalidConfig {
    pub message: String,
}

impl fmt::Display for InvalidConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "invalid limit configuration: {}", self.message)
    }
}

impl std::error::Error for InvalidConfig {}

/// Result of a limit estimation.
#[derive(Debug, Clone, PartialEq)]
pub enum LimitOutcome {
    /// The last `window` estimates agreed; `direction` is the final one.
    Converged {
        direction: Vec3,
        /// Worst pairwise angle (radians) within the accepted window.
        achieved_tol: f64,
        /// Probes executed, including skipped ones.
        steps_used: usize,
    },
    /// No usable secant data: the side leaves the curve's domain, or the
    /// chord length collapses on most probes.
    Degenerate { reason: String },
    /// Probes ran out before the window stabilized.
    Undetermined { diagnostic: String },
}

impl LimitOutcome {
    pub fn direction(&self) -> Option<Vec3> {
        match self {
            LimitOutcome::Converged { direction, .. } => Some(*direction),
            _ => None,
        }
    }

    pub fn is_converged(&self) -> bool {
        matches!(self, LimitOutcome::Converged { .. })
    }

    pub fn steps_used(&self) -> usize {
        match self {
            LimitOutcome::Converged { steps_used, .. } => *steps_used,
            _ => 0,
        }
    }

    /// One-line human summary of the outcome.
    pub fn brief(&self) -> String {
        match self {
            LimitOutcome::Converged {
                direction,
                achieved_tol,
                steps_used,
            } => format!(
                "converged to {direction} after {steps_used} probes (window spread {achieved_tol:.2e} rad)"
            ),
            LimitOutcome::Degenerate { reason } => format!("degenerate: {reason}"),
            LimitOutcome::Undetermined { diagnostic } => format!("undetermined: {diagnostic}"),
        }
    }
}

fn worst_pairwise_angle(dirs: &[Vec3]) -> f64 {
    let mut worst = 0.0f64;
    for (i, a) in dirs.iter().enumerate() {
        for b in &dirs[i + 1..] {
            worst = worst.max(a.angle_to(*b));
        }
    }
    worst
}

fn best_pairwise_angle(dirs: &[Vec3]) -> f64 {
    let mut best = f64::INFINITY;
    for (i, a) in dirs.iter().enumerate() {
        for b in &dirs[i + 1..] {
            best = best.min(a.angle_to(*b));
        }
    }
    best
}

#[derive(Debug, Default, Clone)]
struct Tally {
    executed: usize,
    zero_chords: usize,
    domain_skips: usize,
}

struct Estimator<'a> {
    cfg: &'a LimitConfig,
    dirs: Vec<Vec3>,
    tally: Tally,
}

impl<'a> Estimator<'a> {
    fn new(cfg: &'a LimitConfig) -> Estimator<'a> {
        Estimator {
            cfg,
            dirs: Vec::with_capacity(cfg.max_steps),
            tally: Tally::default(),
        }
    }

    /// Record one probe direction (already sign-adjusted by the caller)
    /// and report convergence when the agreement window closes.
    fn push(&mut self, dir: Vec3) -> Option<LimitOutcome> {
        self.dirs.push(dir);
        if self.dirs.len() < self.cfg.window {
            return None;
        }
        let tail = &self.dirs[self.dirs.len() - self.cfg.window..];
        let worst = worst_pairwise_angle(tail);
        if worst <= self.cfg.angle_tol {
            Some(LimitOutcome::Converged {
                direction: *self.dirs.last().unwrap(),
                achieved_tol: worst,
                steps_used: self.tally.executed,
            })
        } else {
            None
        }
    }

    /// Verdict after the schedule is exhausted without convergence.
    fn exhausted(&self) -> LimitOutcome {
        let t = &self.tally;
        if t.executed > 0 && t.domain_skips == t.executed {
            return LimitOutcome::Degenerate {
                reason: "side not in domain".to_owned(),
            };
        }
        if 2 * t.zero_chords > t.executed {
            return LimitOutcome::Degenerate {
                reason: format!("zero chord on {} of {} probes", t.zero_chords, t.executed),
            };
        }
        LimitOutcome::Undetermined {
            diagnostic: self.diagnose(),
        }
    }

    /// Oscillation vs slow convergence: the estimates oscillate when the
    /// last `window` of them are pairwise more than `10·angle_tol` apart
    /// — every pair disagrees by much more than the target, so the
    /// sequence is jumping around rather than settling.
    fn diagnose(&self) -> String {
        let w = self.cfg.window;
        if self.dirs.len() < w {
            return format!(
                "slow convergence: only {} usable estimates from {} probes",
                self.dirs.len(),
                self.tally.executed
            );
        }
        let tail = &self.dirs[self.dirs.len() - w..];
        let spread = worst_pairwise_angle(tail);
        if best_pairwise_angle(tail) > 10.0 * self.cfg.angle_tol {
            format!(
                "oscillating: the last {} estimates are pairwise more than {:.1e} rad apart after {} probes (spread {:.3e} rad)",
                w,
                10.0 * self.cfg.angle_tol,
                self.tally.executed,
                spread
            )
        } else {
            format!(
                "slow convergence: no agreement within {:.1e} rad after {} probes (last spread {:.3e} rad)",
                self.cfg.angle_tol, self.tally.executed, spread
            )
        }
    }
}

/// Estimate the one-sided limit of the unit secant vector at `t0`.
pub fn one_sided_limit(curve: &CurveExpr, t0: f64, side: Side, cfg: &LimitConfig) -> LimitOutcome {
    cfg.assert_valid();
    let a = match curve.point_at(t0) {
        Ok(a) => a,
        Err(e) => {
            return LimitOutcome::Degenerate {
                reason: format!("base point not evaluable: {e}"),
            }
        }
    };
    let mut est = Estimator::new(cfg);
    for k in 0..cfg.max_steps {
        let t = t0 + side.sign() * cfg.step(k);
        est.tally.executed += 1;
        if t == t0 {
            // The step underflowed below the resolution of t0.
            est.tally.zero_chords += 1;
            continue;
        }
        match curve.point_at(t) {
            Err(_) => est.tally.domain_skips += 1,
            Ok(m) => {
                let chord = m - a;
                let n = chord.norm();
                if n <= chord_eps(a, m) {
                    est.tally.zero_chords += 1;
                } else if let Some(out) = est.push(chord / n) {
                    return out;
                }
            }
        }
    }
    est.exhausted()
}

/// Estimate the two-sided limit of the normalized difference quotient
/// direction at `t0`, interleaving probes from both sides.
///
/// The quotient direction equals the unit secant multiplied by the sign
/// of the parameter step, so both sides target the same vector and the
/// combined sequence can stabilize. Convergence is only accepted when
/// the agreeing window contains estimates from both sides.
pub fn two_sided_limit(curve: &CurveExpr, t0: f64, cfg: &LimitConfig) -> LimitOutcome {
    cfg.assert_valid();
    let a = match curve.point_at(t0) {
        Ok(a) => a,
        Err(e) => {
            return LimitOutcome::Degenerate {
                reason: format!("base point not evaluable: {e}"),
            }
        }
    };
    let mut est = Estimator::new(cfg);
    let mut sides: Vec<Side> = Vec::new();
    let mut per_side = [Tally::default(), Tally::default()]; // [minus, plus]
    for k in 0..cfg.max_steps {
        let h = cfg.step(k);
        for side in [Side::Plus, Side::Minus] {
            let t = t0 + side.sign() * h;
            let side_tally = &mut per_side[match side {
                Side::Minus => 0,
                Side::Plus => 1,
            }];
            est.tally.executed += 1;
            side_tally.executed += 1;
            if t == t0 {
                est.tally.zero_chords += 1;
                side_tally.zero_chords += 1;
                continue;
            }
            match curve.point_at(t) {
                Err(_) => {
                    est.tally.domain_skips += 1;
                    side_tally.domain_skips += 1;
                }
                Ok(m) => {
                    let chord = m - a;
                    let n = chord.norm();
                    if n <= chord_eps(a, m) {
                        est.tally.zero_chords += 1;
                        side_tally.zero_chords += 1;
                        continue;
                    }
                    // Chord scaled by sign(Δt)/|chord|: the unit secant
                    // with the side's sign divided out, so both sides
                    // share one limit at smooth points.
                    let q = chord * (side.sign() / n);
                    sides.push(side);
                    est.dirs.push(q);
                    if est.dirs.len() >= cfg.window {
                        let lo = est.dirs.len() - cfg.window;
                        let tail_sides = &sides[lo..];
                        let mixed =
                            tail_sides.contains(&Side::Minus) && tail_sides.contains(&Side::Plus);
                        if mixed {
                            let worst = worst_pairwise_angle(&est.dirs[lo..]);
                            if worst <= cfg.angle_tol {
                                return LimitOutcome::Converged {
                                    direction: *est.dirs.last().unwrap(),
                                    achieved_tol: worst,
                                    steps_used: est.tally.executed,
                                };
                            }
                        }
                    }
                }
            }
        }
    }
    // A two-sided limit needs both sides to produce data at all.
    for side_tally in &per_side {
        if side_tally.executed > 0 && side_tally.domain_skips == side_tally.executed {
            return LimitOutcome::Degenerate {
                reason: "side not in domain".to_owned(),
            };
        }
    }
    est.exhausted()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::CurveExpr;

    fn curve(src: &str) -> CurveExpr {
        CurveExpr::parse_literal(src).unwrap()
    }

    #[test]
    fn config_validation() {
        assert!(LimitConfig::default().validate().is_ok());
        for bad in [
            LimitConfig {
                h0: 0.0,
                ..LimitConfig::default()
            },
            LimitConfig {
                rho: 1.0,
                ..LimitConfig::default()
            },
            LimitConfig {
                rho: -0.5,
                ..LimitConfig::default()
            },
            LimitConfig {
                angle_tol: 0.0,
                ..LimitConfig::default()
            },
            LimitConfig {
                window: 1,
                ..LimitConfig::default()
            },
            LimitConfig {
                max_steps: 2,
                ..LimitConfig::default()
            },
        ] {
            assert!(bad.validate().is_err(), "{bad:?} should be invalid");
        }
    }

    #[test]
    fn line_sides_converge_to_opposite_unit_secants() {
        let line = curve("x=t; y=2 * t");
        let cfg = LimitConfig::default();
        let want = Vec3::new(1.0, 2.0, 0.0).normalized();

        let plus = one_sided_limit(&line, 0.0, Side::Plus, &cfg);
        let LimitOutcome::Converged {
            direction,
            achieved_tol,
            steps_used,
        } = plus
        else {
            panic!("plus side should converge, got {plus:?}");
        };
        assert!((direction - want).norm() < 1e-12, "got {direction}");
        assert!(achieved_tol <= cfg.angle_tol);
        assert_eq!(steps_used, cfg.window);

        let minus = one_sided_limit(&line, 0.0, Side::Minus, &cfg);
        let dir = minus.direction().expect("minus side should converge");
        // Approaching from below, the unit secant points the other way.
        assert!((dir + want).norm() < 1e-12, "got {dir}");
    }

    #[test]
    fn two_sided_quotient_direction_is_sign_free() {
        let line = curve("x=t; y=2 * t");
        let cfg = LimitConfig::default();
        let want = Vec3::new(1.0, 2.0, 0.0).normalized();
        let out = two_sided_limit(&line, 0.0, &cfg);
        let dir = out.direction().expect("two-sided limit should converge");
        assert!((dir - want).norm() < 1e-12, "got {dir}");
    }

    #[test]
    fn vertical_tangent_graph_converges_one_sided() {
        let c = curve("f=cbrt(t)");
        let cfg = LimitConfig::default();
        let up = Vec3::new(0.0, 1.0, 0.0);

        let plus = one_sided_limit(&c, 0.0, Side::Plus, &cfg);
        let LimitOutcome::Converged {
            direction,
            steps_used,
            ..
        } = plus
        else {
            panic!("expected convergence, got {plus:?}");
        };
        assert!(direction.angle_to(up) < 1e-5, "got {direction}");
        assert!(steps_used < cfg.max_steps);

        let minus = one_sided_limit(&c, 0.0, Side::Minus, &cfg);
        let dir = minus.direction().expect("minus side should converge");
        assert!(dir.angle_to(-up) < 1e-5, "got {dir}");

        // The quotient direction agrees from both sides: a genuine
        // two-sided limit even though the unit secants flip sign.
        let both = two_sided_limit(&c, 0.0, &cfg);
        let dir = both.direction().expect("two-sided limit should converge");
        assert!(dir.angle_to(up) < 1e-5, "got {dir}");
    }

    #[test]
    fn corner_sides_converge_separately_but_not_two_sided() {
        let c = curve("f=abs(t)");
        let cfg = LimitConfig::default();

        let plus = one_sided_limit(&c, 0.0, Side::Plus, &cfg);
        let dir = plus.direction().unwrap();
        assert!((dir - Vec3::new(1.0, 1.0, 0.0).normalized()).norm() < 1e-12);

        let minus = one_sided_limit(&c, 0.0, Side::Minus, &cfg);
        let dir = minus.direction().unwrap();
        assert!((dir - Vec3::new(-1.0, 1.0, 0.0).normalized()).norm() < 1e-12);

        // Two-sided: the quotient alternates between two directions a
        // right angle apart, so it must not converge.
        let both = two_sided_limit(&c, 0.0, &cfg);
        assert!(
            matches!(both, LimitOutcome::Undetermined { .. }),
            "got {both:?}"
        );
    }

    #[test]
    fn constant_curve_is_degenerate() {
        let c = curve("x=1; y=2");
        let cfg = LimitConfig::default();
        let out = one_sided_limit(&c, 0.0, Side::Plus, &cfg);
        let LimitOutcome::Degenerate { reason } = out else {
            panic!("expected degenerate, got {out:?}");
        };
        assert!(reason.contains("zero chord"), "got {reason}");
    }

    #[test]
    fn out_of_domain_side_is_degenerate() {
        let c = curve("f=sqrt(t)");
        let cfg = LimitConfig::default();
        let out = one_sided_limit(&c, 0.0, Side::Minus, &cfg);
        assert_eq!(
            out,
            LimitOutcome::Degenerate {
                reason: "side not in domain".to_owned()
            }
        );
        // The plus side is fine (vertical, converges one-sided).
        assert!(one_sided_limit(&c, 0.0, Side::Plus, &cfg).is_converged());
        // ... but the two-sided limit needs both sides.
        let both = two_sided_limit(&c, 0.0, &cfg);
        assert!(
            matches!(&both, LimitOutcome::Degenerate { reason } if reason.contains("domain")),
            "got {both:?}"
        );
    }

    #[test]
    fn unevaluable_base_point_is_degenerate() {
        let c = curve("x=t; y=t * sin(1 / t)");
        let out = one_sided_limit(&c, 0.0, Side::Plus, &LimitConfig::default());
        let LimitOutcome::Degenerate { reason } = out else {
            panic!("expected degenerate, got {out:?}");
        };
        assert!(reason.contains("base point"), "got {reason}");
    }

    #[test]
    fn diagnostics_distinguish_oscillation_from_slow_convergence() {
        let c = curve("f=cbrt(t)");
        // Stop early, while the estimates are still far apart: every pair
        // in the final window disagrees by much more than the tolerance.
        let cfg = LimitConfig {
            max_steps: 16,
            ..LimitConfig::default()
        };
        let out = one_sided_limit(&c, 0.0, Side::Plus, &cfg);
        let LimitOutcome::Undetermined { diagnostic } = out else {
            panic!("expected undetermined, got {out:?}");
        };
        assert!(diagnostic.starts_with("oscillating"), "got {diagnostic}");

        // Stop just short of convergence: the window has nearly settled
        // (some pairs within 10x the tolerance), so it is merely slow.
        let cfg = LimitConfig {
            max_steps: 28,
            ..LimitConfig::default()
        };
        let out = one_sided_limit(&c, 0.0, Side::Plus, &cfg);
        let LimitOutcome::Undetermined { diagnostic } = out else {
            panic!("expected undetermined, got {out:?}");
        };
        assert!(
            diagnostic.starts_with("slow convergence"),
            "got {diagnostic}"
        );
    }

    #[test]
    fn steps_shrink_geometrically() {
        let cfg = LimitConfig::default();
        assert_eq!(cfg.step(0), 1e-2);
        assert_eq!(cfg.step(1), 5e-3);
        assert!(cfg.step(47) > 0.0);
        assert!(cfg.step(47) < 1e-15);
    }
}
