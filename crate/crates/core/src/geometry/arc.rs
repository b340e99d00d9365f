use std::f64::consts::{PI, TAU};

use super::{GeometryError, GreatCircle, UnitVec, SIGN_EPS};

/// Tolerance for an arc endpoint to count as lying on its carrier circle.
pub const ON_CIRCLE_TOL: f64 = 1e-10;

/// A geodesic arc on a great circle.
///
/// `positive` selects the direction of travel: counter-clockwise around the
/// circle's canonical normal when `true`, clockwise otherwise. Together with
/// the endpoints this fixes which of the two arcs between them is meant, and
/// which side of the carrier lies to the left of the direction of travel.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Arc {
    Open {
        circle: GreatCircle,
        from: UnitVec,
        to: UnitVec,
        positive: bool,
    },
    /// The whole circle, traversed once; it has no endpoints.
    Full { circle: GreatCircle, positive: bool },
}

impl Arc {
    pub fn new(
        circle: GreatCircle,
        from: UnitVec,
        to: UnitVec,
        positive: bool,
    ) -> Result<Self, GeometryError> {
        let n = circle.normal();
        if n.dot(from).abs() > ON_CIRCLE_TOL || n.dot(to).abs() > ON_CIRCLE_TOL {
            return Err(GeometryError::OffCircle);
        }
        if from.angle_to(to) <= SIGN_EPS {
            return Err(GeometryError::EmptyArc);
        }
        Ok(Arc::Open {
            circle,
            from,
            to,
            positive,
        })
    }

    /// Builds the arc travelling counter-clockwise around `oriented_normal`
    /// from `from` to `to`.
    pub fn around(oriented_normal: UnitVec, from: UnitVec, to: UnitVec) -> Result<Self, GeometryError> {
        let circle = GreatCircle::from_normal(oriented_normal);
        Arc::new(circle, from, to, circle.normal() == oriented_normal)
    }

    pub fn full(circle: GreatCircle, positive: bool) -> Self {
        Arc::Full { circle, positive }
    }

    pub fn circle(&self) -> GreatCircle {
        match *self {
            Arc::Open { circle, .. } | Arc::Full { circle, .. } => circle,
        }
    }

    pub fn is_full(&self) -> bool {
        matches!(self, Arc::Full { .. })
    }

    /// Normal around which the arc runs counter-clockwise; the left-hand side
    /// of the direction of travel is where `⟨normal, x⟩ > 0`.
    pub fn oriented_normal(&self) -> UnitVec {
        let (circle, positive) = match *self {
            Arc::Open {
                circle, positive, ..
            }
            | Arc::Full { circle, positive } => (circle, positive),
        };
        if positive {
            circle.normal()
        } else {
            -circle.normal()
        }
    }

    pub fn start(&self) -> Option<UnitVec> {
        match *self {
            Arc::Open { from, .. } => Some(from),
            Arc::Full { .. } => None,
        }
    }

    pub fn end(&self) -> Option<UnitVec> {
        match *self {
            Arc::Open { to, .. } => Some(to),
            Arc::Full { .. } => None,
        }
    }

    pub fn reversed(&self) -> Arc {
        match *self {
            Arc::Open {
                circle,
                from,
                to,
                positive,
            } => Arc::Open {
                circle,
                from: to,
                to: from,
                positive: !positive,
            },
            Arc::Full { circle, positive } => Arc::Full {
                circle,
                positive: !positive,
            },
        }
    }

    /// Travelled angle in radians, in `(0, 2π]`.
    pub fn angle(&self) -> f64 {
        match *self {
            Arc::Full { .. } => TAU,
            Arc::Open { from, to, .. } => sweep(self.oriented_normal(), from, to),
        }
    }

    /// σ₁-length, normalized so that a full great circle has length 1.
    pub fn length(&self) -> f64 {
        self.angle() / TAU
    }

    /// Tangent of the direction of travel at a point `x` of the carrier.
    pub fn tangent_at(&self, x: UnitVec) -> UnitVec {
        self.oriented_normal()
            .cross(x)
            .normalize()
            .expect("point on circle is orthogonal to its normal")
    }

    /// Whether `x`, assumed on the carrier circle, lies on the arc.
    pub fn covers(&self, x: UnitVec) -> bool {
        match *self {
            Arc::Full { .. } => true,
            Arc::Open { from, .. } => {
                if from.angle_to(x) <= SIGN_EPS {
                    return true;
                }
                sweep(self.oriented_normal(), from, x) <= self.angle() + SIGN_EPS
            }
        }
    }

    /// Point at fraction `s ∈ [0, 1]` of the way along the arc.
    pub fn point_at(&self, s: f64) -> UnitVec {
        let n = self.oriented_normal();
        let start = match *self {
            Arc::Open { from, .. } => from,
            Arc::Full { circle, .. } => circle.basis().0,
        };
        let phi = s * self.angle();
        let t = n.cross(start);
        let (sp, cp) = phi.sin_cos();
        (start.to_vec3() * cp + t * sp)
            .normalize()
            .expect("rotated unit vector")
    }

    pub fn midpoint(&self) -> UnitVec {
        self.point_at(0.5)
    }

    /// Geodesic distance in radians from `x` to the closest point of the arc.
    pub fn distance_to(&self, x: UnitVec) -> f64 {
        let n = self.circle().normal();
        let h = n.dot(x).clamp(-1.0, 1.0);
        let proj = x.to_vec3() - n.to_vec3() * h;
        let to_circle = h.abs().asin();
        let Some(q) = proj.normalize().filter(|_| proj.norm() > SIGN_EPS) else {
            // x is a pole of the carrier: every point is a quarter turn away
            return PI / 2.0;
        };
        match *self {
            Arc::Full { .. } => to_circle,
            Arc::Open { from, to, .. } => {
                if self.covers(q) {
                    to_circle
                } else {
                    x.angle_to(from).min(x.angle_to(to))
                }
            }
        }
    }
}

/// Counter-clockwise sweep around `n` from `a` to `b`, in `[0, 2π)`.
fn sweep(n: UnitVec, a: UnitVec, b: UnitVec) -> f64 {
    let theta = n.to_vec3().dot(a.cross(b)).atan2(a.dot(b));
    if theta < 0.0 {
        theta + TAU
    } else {
        theta
    }
}
