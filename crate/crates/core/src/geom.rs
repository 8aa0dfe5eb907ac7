//! Small fixed-size vector and transform math.

use core::ops::{Add, AddAssign, Div, Mul, Neg, Sub};


/// Tolerance on the length of vectors that must be unit.
pub const UNIT_TOLERANCE: f64 = 1e-9;

/// A point or direction in 3D space. Coordinates are meters.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Vec3 {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Vec3 {
    pub const ZERO: Vec3 = Vec3 { x: 0.0, y: 0.0, z: 0.0 };

    pub const fn new(x: f64, y: f64, z: f64) -> Vec3 {
        Vec3 { x, y, z }
    }

    pub fn dot(self, other: Vec3) -> f64 {
        self.x * other.x + self.y * other.y + self.z * other.z
    }

    pub fn cross(self, other: Vec3) -> Vec3 {
        Vec3 {
            x: self.y * other.z - self.z * other.y,
            y: self.z * other.x - self.x * other.z,
            z: self.x * other.y - self.y * other.x,
        }
    }

    pub fn norm_sq(self) -> f64 {
        self.dot(self)
    }

    pub fn norm(self) -> f64 {
        crate::fmath::sqrt(self.norm_sq())
    }

    /// Scaled copy with unit length. The zero vector is returned unchanged.
    pub fn normalized(self) -> Vec3 {
        let n = self.norm();
        if n > 0.0 {
            self / n
        } else {
            self
        }
    }

    pub fn is_unit(self) -> bool {
        (self.norm() - 1.0).abs() <= UNIT_TOLERANCE
    }

    pub fn distance(self, other: Vec3) -> f64 {
        (self - other).norm()
    }

    /// Coordinate by axis index (0 = x, 1 = y, 2 = z).
    pub fn axis(self, axis: usize) -> f64 {
        match axis {
            0 => self.x,
            1 => self.y,
            _ => self.z,
        }
    }

    pub fn min_components(self, other: Vec3) -> Vec3 {
        Vec3::new(self.x.min(other.x), self.y.min(other.y), self.z.min(other.z))
    }

    pub fn max_components(self, other: Vec3) -> Vec3 {
        Vec3::new(self.x.max(other.x), self.y.max(other.y), self.z.max(other.z))
    }

    pub fn max_component(self) -> f64 {
        self.x.max(self.y).max(self.z)
    }
}

impl Add for Vec3 {
    type Output = Vec3;
    fn add(self, o: Vec3) -> Vec3 {
        Vec3::new(self.x + o.x, self.y + o.y, self.z + o.z)
    }
}

impl AddAssign for Vec3 {
    fn add_assign(&mut self, o: Vec3) {
        *self = *self + o;
    }
}

impl Sub for Vec3 {
    type Output = Vec3;
    fn sub(self, o: Vec3) -> Vec3 {
        Vec3::new(self.x - o.x, self.y - o.y, self.z - o.z)
    }
}

impl Neg for Vec3 {
    type Output = Vec3;
    fn neg(self) -> Vec3 {
        Vec3::new(-self.x, -self.y, -self.z)
    }
}

impl Mul<f64> for Vec3 {
    type Output = Vec3;
    fn mul(self, s: f64) -> Vec3 {
        Vec3::new(self.x * s, self.y * s, self.z * s)
    }
}

impl Mul<Vec3> for f64 {
    type Output = Vec3;
    fn mul(self, v: Vec3) -> Vec3 {
        v * self
    }
}

impl Div<f64> for Vec3 {
    type Output = Vec3;
    fn div(self, s: f64) -> Vec3 {
        Vec3::new(self.x / s, self.y / s, self.z / s)
    }
}

/// Row-major 3x3 matrix, used for rotations.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Mat3 {
    rows: [Vec3; 3],
}

impl Mat3 {
    pub const IDENTITY: Mat3 = Mat3 {
        rows: [
            Vec3::new(1.0, 0.0, 0.0),
            Vec3::new(0.0, 1.0, 0.0),
            Vec3::new(0.0, 0.0, 1.0),
        ],
    };

    pub fn rotation_x(angle_rad: f64) -> Mat3 {
        let (s, c) = crate::fmath::sin_cos(angle_rad);
        Mat3 {
            rows: [
                Vec3::new(1.0, 0.0, 0.0),
                Vec3::new(0.0, c, -s),
                Vec3::new(0.0, s, c),
            ],
        }
    }

    pub fn rotation_y(angle_rad: f64) -> Mat3 {
        let (s, c) = crate::fmath::sin_cos(angle_rad);
        Mat3 {
            rows: [
                Vec3::new(c, 0.0, s),
                Vec3::new(0.0, 1.0, 0.0),
                Vec3::new(-s, 0.0, c),
            ],
        }
    }

    pub fn rotation_z(angle_rad: f64) -> Mat3 {
        let (s, c) = crate::fmath::sin_cos(angle_rad);
        Mat3 {
            rows: [
                Vec3::new(c, -s, 0.0),
                Vec3::new(s, c, 0.0),
                Vec3::new(0.0, 0.0, 1.0),
            ],
        }
    }
}

impl Mul<Vec3> for Mat3 {
    type Output = Vec3;
    fn mul(self, v: Vec3) -> Vec3 {
        Vec3::new(self.rows[0].dot(v), self.rows[1].dot(v), self.rows[2].dot(v))
    }
}

impl Mul<Mat3> for Mat3 {
    type Output = Mat3;
    fn mul(self, o: Mat3) -> Mat3 {
        let col = |i: usize| Vec3::new(o.rows[0].axis(i), o.rows[1].axis(i), o.rows[2].axis(i));
        let (c0, c1, c2) = (col(0), col(1), col(2));
        Mat3 {
            rows: [
                Vec3::new(self.rows[0].dot(c0), self.rows[0].dot(c1), self.rows[0].dot(c2)),
                Vec3::new(self.rows[1].dot(c0), self.rows[1].dot(c1), self.rows[1].dot(c2)),
                Vec3::new(self.rows[2].dot(c0), self.rows[2].dot(c1), self.rows[2].dot(c2)),
            ],
        }
    }
}

/// Rigid placement with uniform scale: `p -> R * (s * p) + t`.
#[derive(Clone, Copy, Debug)]
pub struct Transform {
    scale: f64,
    rotation: Mat3,
    translation: Vec3,
}

impl Transform {
    /// Build a transform. `scale` must be finite and positive.
    pub fn new(scale: f64, rotation: Mat3, translation: Vec3) -> Transform {
        assert!(scale.is_finite() && scale > 0.0, "scale must be positive");
        Transform { scale, rotation, translation }
    }

    /// Rotation given as extrinsic x, y, z Euler angles in degrees,
    /// applied in that order (so the matrix is `Rz * Ry * Rx`).
    pub fn from_euler_deg(scale: f64, euler_deg: [f64; 3], translation: Vec3) -> Transform {
        let rad = |d: f64| d * core::f64::consts::PI / 180.0;
        let rotation = Mat3::rotation_z(rad(euler_deg[2]))
            * Mat3::rotation_y(rad(euler_deg[1]))
            * Mat3::rotation_x(rad(euler_deg[0]));
        Transform::new(scale, rotation, translation)
    }

    pub fn identity() -> Transform {
        Transform::new(1.0, Mat3::IDENTITY, Vec3::ZERO)
    }

    pub fn apply(&self, p: Vec3) -> Vec3 {
        self.rotation * (p * self.scale) + self.translation
    }
}

/// A ray with unit direction.
#[derive(Clone, Copy, Debug)]
pub struct Ray {
    pub origin: Vec3,
    pub direction: Vec3,
}

impl Ray {
    /// `direction` is normalized on construction.
    pub fn new(origin: Vec3, direction: Vec3) -> Ray {
        Ray { origin, direction: direction.normalized() }
    }

    pub fn from_points(origin: Vec3, toward: Vec3) -> Ray {
        Ray::new(origin, toward - origin)
    }

    pub fn at(&self, t: f64) -> Vec3 {
        self.origin + self.direction * t
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cross_follows_right_hand_rule() {
        let x = Vec3::new(1.0, 0.0, 0.0);
        let y = Vec3::new(0.0, 1.0, 0.0);
        assert_eq!(x.cross(y), Vec3::new(0.0, 0.0, 1.0));
    }

    #[test]
    fn rotation_z_quarter_turn() {
        let r = Mat3::rotation_z(core::f64::consts::FRAC_PI_2);
        let v = r * Vec3::new(1.0, 0.0, 0.0);
        assert!((v - Vec3::new(0.0, 1.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn transform_applies_scale_then_rotation_then_translation() {
        let t = Transform::from_euler_deg(2.0, [0.0, 0.0, 90.0], Vec3::new(0.0, 0.0, 1.0));
        let p = t.apply(Vec3::new(1.0, 0.0, 0.0));
        assert!((p - Vec3::new(0.0, 2.0, 1.0)).norm() < 1e-12);
    }

    #[test]
    fn ray_normalizes_direction() {
        let r = Ray::new(Vec3::ZERO, Vec3::new(0.0, 0.0, 5.0));
        assert!(r.direction.is_unit());
        assert_eq!(r.at(2.0), Vec3::new(0.0, 0.0, 2.0));
    }
}
