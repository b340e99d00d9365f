use std::ops::{Add, Mul, Neg, Sub};

use rand::Rng;
use rand_distr::StandardNormal;

use super::GeometryError;

/// Tolerance on `|x² + y² + z² − 1|` for a [`UnitVec`].
pub const UNIT_NORM_TOL: f64 = 1e-12;

/// A plain vector in ℝ³, used for intermediate results such as cross products.
#[derive(Clone, Copy, Debug, PartialEq, Default)]
pub struct Vec3 {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Vec3 {
    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        Self { x, y, z }
    }

    pub fn dot(self, other: Vec3) -> f64 {
        self.x * other.x + self.y * other.y + self.z * other.z
    }

    pub fn cross(self, other: Vec3) -> Vec3 {
        Vec3::new(
            self.y * other.z - self.z * other.y,
            self.z * other.x - self.x * other.z,
            self.x * other.y - self.y * other.x,
        )
    }

    pub fn norm(self) -> f64 {
        self.dot(self).sqrt()
    }

    /// Projects onto the sphere; `None` when the vector is too short to carry a
    /// direction.
    pub fn normalize(self) -> Option<UnitVec> {
        let n = self.norm();
        if !n.is_finite() || n < 1e-300 {
            return None;
        }
        Some(UnitVec {
            x: self.x / n,
            y: self.y / n,
            z: self.z / n,
        })
    }
}

impl Add for Vec3 {
    type Output = Vec3;
    fn add(self, rhs: Vec3) -> Vec3 {
        Vec3::new(self.x + rhs.x, self.y + rhs.y, self.z + rhs.z)
    }
}

impl Sub for Vec3 {
    type Output = Vec3;
    fn sub(self, rhs: Vec3) -> Vec3 {
        Vec3::new(self.x - rhs.x, self.y - rhs.y, self.z - rhs.z)
    }
}

impl Mul<f64> for Vec3 {
    type Output = Vec3;
    fn mul(self, rhs: f64) -> Vec3 {
        Vec3::new(self.x * rhs, self.y * rhs, self.z * rhs)
    }
}

impl Neg for Vec3 {
    type Output = Vec3;
    fn neg(self) -> Vec3 {
        Vec3::new(-self.x, -self.y, -self.z)
    }
}

/// A point of the unit sphere 𝕊², also used as the unit normal of a great
/// circle.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct UnitVec {
    x: f64,
    y: f64,
    z: f64,
}

impl UnitVec {
    pub const NORTH: UnitVec = UnitVec {
        x: 0.0,
        y: 0.0,
        z: 1.0,
    };
    pub const SOUTH: UnitVec = UnitVec {
        x: 0.0,
        y: 0.0,
        z: -1.0,
    };
    pub const X: UnitVec = UnitVec {
        x: 1.0,
        y: 0.0,
        z: 0.0,
    };
    pub const Y: UnitVec = UnitVec {
        x: 0.0,
        y: 1.0,
        z: 0.0,
    };

    /// Normalizes `(x, y, z)` onto the sphere.
    pub fn new(x: f64, y: f64, z: f64) -> Result<Self, GeometryError> {
        Vec3::new(x, y, z)
            .normalize()
            .ok_or(GeometryError::ZeroVector)
    }

    /// Point at colatitude `theta` (angle from the north pole) and longitude
    /// `phi`, both in radians.
    pub fn from_spherical(theta: f64, phi: f64) -> Self {
        let (st, ct) = theta.sin_cos();
        let (sp, cp) = phi.sin_cos();
        // already unit length up to rounding; renormalize to pin the invariant
        Vec3::new(st * cp, st * sp, ct)
            .normalize()
            .expect("trigonometric point is nonzero")
    }

    pub fn x(self) -> f64 {
        self.x
    }

    pub fn y(self) -> f64 {
        self.y
    }

    pub fn z(self) -> f64 {
        self.z
    }

    pub fn to_vec3(self) -> Vec3 {
        Vec3::new(self.x, self.y, self.z)
    }

    pub fn dot(self, other: UnitVec) -> f64 {
        self.to_vec3().dot(other.to_vec3())
    }

    pub fn cross(self, other: UnitVec) -> Vec3 {
        self.to_vec3().cross(other.to_vec3())
    }

    /// Geodesic distance in radians.
    pub fn angle_to(self, other: UnitVec) -> f64 {
        // atan2 form keeps full precision for nearly equal or antipodal points
        let c = self.cross(other).norm();
        let d = self.dot(other);
        c.atan2(d)
    }

    /// Uniform point on 𝕊²: a normalized triple of standard Gaussians.
    pub fn random<R: Rng + ?Sized>(rng: &mut R) -> Self {
        loop {
            let v = Vec3::new(
                rng.sample(StandardNormal),
                rng.sample(StandardNormal),
                rng.sample(StandardNormal),
            );
            if let Some(u) = v.normalize() {
                return u;
            }
        }
    }

    pub fn norm_error(self) -> f64 {
        (self.to_vec3().dot(self.to_vec3()) - 1.0).abs()
    }
}

impl Neg for UnitVec {
    type Output = UnitVec;
    fn neg(self) -> UnitVec {
        UnitVec {
            x: -self.x,
            y: -self.y,
            z: -self.z,
        }
    }
}

impl From<UnitVec> for Vec3 {
    fn from(u: UnitVec) -> Vec3 {
        u.to_vec3()
    }
}

/// Uniform point on 𝕊² drawn from `rng`.
pub fn uniform_point<R: Rng + ?Sized>(rng: &mut R) -> UnitVec {
    UnitVec::random(rng)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn new_normalizes() {
        let u = UnitVec::new(3.0, 4.0, 12.0).unwrap();
        assert!(u.norm_error() <= UNIT_NORM_TOL);
        assert!((u.z() - 12.0 / 13.0).abs() < 1e-15);
        assert!(UnitVec::new(0.0, 0.0, 0.0).is_err());
        assert!(UnitVec::new(f64::NAN, 0.0, 1.0).is_err());
    }

    #[test]
    fn angle_is_accurate_near_zero_and_pi() {
        let a = UnitVec::X;
        let b = UnitVec::from_spherical(std::f64::consts::FRAC_PI_2, 1e-9);
        assert!((a.angle_to(b) - 1e-9).abs() < 1e-20);
        assert!((a.angle_to(-a) - std::f64::consts::PI).abs() < 1e-15);
    }

    #[test]
    fn uniform_point_moments() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let n = 1_000_000;
        let (mut sx, mut sy, mut sz, mut upper) = (0.0, 0.0, 0.0, 0usize);
        for _ in 0..n {
            let u = uniform_point(&mut rng);
            assert!(u.norm_error() <= UNIT_NORM_TOL);
            sx += u.x();
            sy += u.y();
            sz += u.z();
            if u.z() > 0.0 {
                upper += 1;
            }
        }
        let n = n as f64;
        // SE of each coordinate mean is sqrt(1/3)/1000 ≈ 0.00058
        for m in [sx / n, sy / n, sz / n] {
            assert!(m.abs() < 0.005, "coordinate mean {m}");
        }
        assert!((upper as f64 / n - 0.5).abs() < 0.003);
    }

    #[test]
    fn uniform_point_is_deterministic_per_seed() {
        let draw = || {
            let mut rng = ChaCha8Rng::seed_from_u64(42);
            (uniform_point(&mut rng), uniform_point(&mut rng))
        };
        assert_eq!(draw(), draw());
    }
}
