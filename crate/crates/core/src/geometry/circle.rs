use super::{GeometryError, UnitVec, Vec3};

/// Half-width of the zero band used by every sign predicate.
pub const SIGN_EPS: f64 = 1e-12;

/// Position of a point relative to an oriented great circle.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Side {
    Negative,
    On,
    Positive,
}

impl Side {
    pub fn signum(self) -> i8 {
        match self {
            Side::Negative => -1,
            Side::On => 0,
            Side::Positive => 1,
        }
    }

    fn from_dot(d: f64) -> Side {
        if d > SIGN_EPS {
            Side::Positive
        } else if d < -SIGN_EPS {
            Side::Negative
        } else {
            Side::On
        }
    }
}

/// A great circle of 𝕊², stored by its unit normal in canonical sign.
///
/// The canonical representative has `z > 0`; on the equatorial band of normals
/// ties are broken by `x > 0`, then `y > 0`. Flipping the normal therefore
/// never changes the circle.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GreatCircle {
    normal: UnitVec,
}

impl GreatCircle {
    pub fn from_normal(normal: UnitVec) -> Self {
        let flip = if normal.z() != 0.0 {
            normal.z() < 0.0
        } else if normal.x() != 0.0 {
            normal.x() < 0.0
        } else {
            normal.y() < 0.0
        };
        GreatCircle {
            normal: if flip { -normal } else { normal },
        }
    }

    /// The circle through two distinct, non-antipodal points.
    pub fn through(a: UnitVec, b: UnitVec) -> Result<Self, GeometryError> {
        let c = a.cross(b);
        if c.norm() <= 1e-14 {
            return Err(GeometryError::Collinear);
        }
        c.normalize()
            .map(Self::from_normal)
            .ok_or(GeometryError::Collinear)
    }

    /// The distinguished circle `z = 0`.
    pub fn equator() -> Self {
        GreatCircle {
            normal: UnitVec::NORTH,
        }
    }

    pub fn normal(&self) -> UnitVec {
        self.normal
    }

    pub fn is_equator(&self) -> bool {
        self.normal == UnitVec::NORTH
    }

    /// An orthonormal basis `(e1, e2)` of the plane of the circle with
    /// `e1 × e2 = normal`.
    pub fn basis(&self) -> (UnitVec, UnitVec) {
        let n = self.normal.to_vec3();
        // pick the coordinate axis least aligned with n
        let axis = if n.x.abs() <= n.y.abs() && n.x.abs() <= n.z.abs() {
            Vec3::new(1.0, 0.0, 0.0)
        } else if n.y.abs() <= n.z.abs() {
            Vec3::new(0.0, 1.0, 0.0)
        } else {
            Vec3::new(0.0, 0.0, 1.0)
        };
        let e1 = n.cross(axis).normalize().expect("axis not parallel to normal");
        let e2 = n.cross(e1.to_vec3()).normalize().expect("unit cross");
        (e1, e2)
    }

    /// Angular coordinate of `x` (assumed on the circle) in `(-π, π]`,
    /// increasing counter-clockwise around the canonical normal.
    pub fn angle_of(&self, x: UnitVec) -> f64 {
        let (e1, e2) = self.basis();
        x.dot(e2).atan2(x.dot(e1))
    }

    /// The two antipodal intersection points with another circle, or `None`
    /// when the circles coincide to within the sign band.
    pub fn intersections(&self, other: &GreatCircle) -> Option<(UnitVec, UnitVec)> {
        let c = self.normal.cross(other.normal);
        if c.norm() <= SIGN_EPS {
            return None;
        }
        let p = c.normalize()?;
        Some((p, -p))
    }
}

/// Sign of `⟨normal, x⟩` with the zero band `|⟨n, x⟩| ≤ 1e-12`.
pub fn side_of_normal(normal: UnitVec, x: UnitVec) -> Side {
    Side::from_dot(normal.dot(x))
}

/// Which closed hemisphere of `g` (relative to its canonical normal) holds `x`.
pub fn side_of(g: &GreatCircle, x: UnitVec) -> Side {
    side_of_normal(g.normal(), x)
}
