//! A small 3-vector used for curve points and directions.
//!
//! Planar curves are embedded with `z = 0`, which keeps the secant and
//! tangent machinery uniform across the 2D and 3D cases.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

/// A vector in 3-space with `f64` components.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Vec3 {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Vec3 {
    pub const ZERO: Vec3 = Vec3 {
        x: 0.0,
        y: 0.0,
        z: 0.0,
    };

    #[inline]
    pub const fn new(x: f64, y: f64, z: f64) -> Vec3 {
        Vec3 { x, y, z }
    }

    #[inline]
    pub fn dot(self, other: Vec3) -> f64 {
        self.x * other.x + self.y * other.y + self.z * other.z
    }

    #[inline]
    pub fn cross(self, other: Vec3) -> Vec3 {
        Vec3 {
            x: self.y * other.z - self.z * other.y,
            y: self.z * other.x - self.x * other.z,
            z: self.x * other.y - self.y * other.x,
        }
    }

    /// Euclidean length.
    #[inline]
    pub fn norm(self) -> f64 {
        self.dot(self).sqrt()
    }

    /// Scale to unit length. The caller must ensure the vector is nonzero.
    #[inline]
    pub fn normalized(self) -> Vec3 {
        self / self.norm()
    }

    /// Angular distance to `other` in radians, assuming both vectors are
    /// unit length: `arccos` of the dot product clamped to `[-1, 1]`.
    ///
    /// The clamp matters; rounding can push the dot product of two nearly
    /// parallel unit vectors a few ulps past 1, where `acos` returns NaN.
    #[inline]
    pub fn angle_to(self, other: Vec3) -> f64 {
        self.dot(other).clamp(-1.0, 1.0).acos()
    }

    #[inline]
    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }

    #[inline]
    pub fn to_array(self) -> [f64; 3] {
        [self.x, self.y, self.z]
    }
}

impl Add for Vec3 {
    type Output = Vec3;
    #[inline]
    fn add(self, other: Vec3) -> Vec3 {
        Vec3::new(self.x + other.x, self.y + other.y, self.z + other.z)
    }
}

impl Sub for Vec3 {
    type Output = Vec3;
    #[inline]
    fn sub(self, other: Vec3) -> Vec3 {
        Vec3::new(self.x - other.x, self.y - other.y, self.z - other.z)
    }
}

impl Neg for Vec3 {
    type Output = Vec3;
    #[inline]
    fn neg(self) -> Vec3 {
        Vec3::new(-self.x, -self.y, -self.z)
    }
}

impl Mul<f64> for Vec3 {
    type Output = Vec3;
    #[inline]
    fn mul(self, s: f64) -> Vec3 {
        Vec3::new(self.x * s, self.y * s, self.z * s)
    }
}

impl Div<f64> for Vec3 {
    type Output = Vec3;
    #[inline]
    fn div(self, s: f64) -> Vec3 {
        Vec3::new(self.x / s, self.y / s, self.z / s)
    }
}

impl fmt::Display for Vec3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.x, self.y, self.z)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cross_is_perpendicular() {
        let a = Vec3::new(1.0, 2.0, 3.0);
        let b = Vec3::new(-0.5, 4.0, 1.25);
        let c = a.cross(b);
        assert!(c.dot(a).abs() < 1e-12);
        assert!(c.dot(b).abs() < 1e-12);
    }

    #[test]
    fn angle_to_handles_rounding_past_one() {
        let u = Vec3::new(0.6, 0.8, 0.0);
        // Same direction scaled then renormalized: dot may exceed 1 by ulps.
        let v = (u * 3.0).normalized();
        let angle = u.angle_to(v);
        assert!(angle >= 0.0, "angle must not be NaN, got {angle}");
        assert!(angle < 1e-7);
    }

    #[test]
    fn angle_between_opposite_vectors_is_pi() {
        let u = Vec3::new(0.0, 1.0, 0.0);
        let angle = u.angle_to(-u);
        assert!((angle - std::f64::consts::PI).abs() < 1e-12);
    }

    #[test]
    fn normalized_has_unit_length() {
        let v = Vec3::new(3.0, -4.0, 12.0);
        assert!((v.normalized().norm() - 1.0).abs() < 1e-15);
    }
}
