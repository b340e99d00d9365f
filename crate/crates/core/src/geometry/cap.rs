use std::f64::consts::{FRAC_PI_2, PI};

use super::{Arc, GeometryError, GreatCircle, UnitVec, SIGN_EPS};

/// A closed spherical cap `{x : d(x, center) ≤ theta}` with `0 < theta < π/2`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SphericalCap {
    center: UnitVec,
    theta: f64,
}

impl SphericalCap {
    pub fn new(center: UnitVec, theta: f64) -> Result<Self, GeometryError> {
        if !(theta > 0.0 && theta < FRAC_PI_2) {
            return Err(GeometryError::CapRadius(theta));
        }
        Ok(SphericalCap { center, theta })
    }

    pub fn center(&self) -> UnitVec {
        self.center
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    /// `τ([C]) = sin θ`: the normals of circles meeting the cap form a band of
    /// half-width θ around the great circle orthogonal to the center.
    pub fn hitting_measure(&self) -> f64 {
        self.theta.sin()
    }

    /// Normalized area `(1 − cos θ)/2`.
    pub fn area(&self) -> f64 {
        (1.0 - self.theta.cos()) / 2.0
    }

    pub fn contains(&self, x: UnitVec) -> bool {
        self.center.angle_to(x) <= self.theta + SIGN_EPS
    }

    pub fn hit_by(&self, g: &GreatCircle) -> bool {
        g.normal().dot(self.center).abs() <= self.theta.sin() + SIGN_EPS
    }

    /// Whether the arc comes within the cap (closest-point distance with the
    /// global sign band).
    pub fn meets_arc(&self, arc: &Arc) -> bool {
        arc.distance_to(self.center) <= self.theta + SIGN_EPS
    }

    /// Angular distance of the two centers minus both radii; positive when the
    /// caps are disjoint.
    pub fn gap(&self, other: &SphericalCap) -> f64 {
        self.center.angle_to(other.center) - self.theta - other.theta
    }

    /// Both caps fit strictly inside one open hemisphere.
    pub fn shares_open_hemisphere(&self, other: &SphericalCap) -> bool {
        self.center.angle_to(other.center) + self.theta + other.theta < PI
    }

    /// The cap avoids the equator and returns the hemisphere sign (+1 upper,
    /// −1 lower) it sits in.
    pub fn open_hemisphere(&self) -> Option<i8> {
        let colat = self.center.z().clamp(-1.0, 1.0).acos();
        if colat + self.theta < FRAC_PI_2 {
            Some(1)
        } else if colat - self.theta > FRAC_PI_2 {
            Some(-1)
        } else {
            None
        }
    }
}

/// Normalized area σ₂ of the intersection of the caps `(c1, r1)` and
/// `(c2, r2)`, radii in `(0, π)`.
pub fn cap_intersection_area(c1: UnitVec, r1: f64, c2: UnitVec, r2: f64) -> f64 {
    let d = c1.angle_to(c2);
    let cap = |r: f64| (1.0 - r.cos()) / 2.0;
    if d >= r1 + r2 {
        return 0.0;
    }
    if d <= (r1 - r2).abs() {
        return cap(r1.min(r2));
    }
    if r1 + r2 + d >= 2.0 * PI {
        // the complements are disjoint
        return cap(r1) + cap(r2) - 1.0;
    }
    let (cd, sd) = (d.cos(), d.sin());
    let (c1r, s1r) = (r1.cos(), r1.sin());
    let (c2r, s2r) = (r2.cos(), r2.sin());
    let clamp = |x: f64| x.clamp(-1.0, 1.0);
    // lens area on the unit sphere (steradians)
    let apex = clamp((cd - c1r * c2r) / (s1r * s2r)).acos();
    let w1 = clamp((c2r - cd * c1r) / (sd * s1r)).acos();
    let w2 = clamp((c1r - cd * c2r) / (sd * s2r)).acos();
    let sr = 2.0 * (PI - apex - w1 * c1r - w2 * c2r);
    sr / (4.0 * PI)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn radius_bounds() {
        assert!(SphericalCap::new(UnitVec::NORTH, 0.0).is_err());
        assert!(SphericalCap::new(UnitVec::NORTH, FRAC_PI_2).is_err());
        assert!(SphericalCap::new(UnitVec::NORTH, 0.2).is_ok());
    }

    #[test]
    fn hemisphere_placement() {
        let c = SphericalCap::new(UnitVec::from_spherical(PI / 4.0, 0.0), PI / 6.0).unwrap();
        assert_eq!(c.open_hemisphere(), Some(1));
        let d = SphericalCap::new(UnitVec::from_spherical(1.4, 0.0), 0.3).unwrap();
        assert_eq!(d.open_hemisphere(), None);
        let e = SphericalCap::new(UnitVec::from_spherical(2.5, 0.0), 0.3).unwrap();
        assert_eq!(e.open_hemisphere(), Some(-1));
    }

    #[test]
    fn arc_intersection() {
        let cap = SphericalCap::new(UnitVec::from_spherical(PI / 2.0 - 0.2, 0.5), 0.25).unwrap();
        let eq_arc = Arc::new(GreatCircle::equator(), UnitVec::X, UnitVec::Y, true).unwrap();
        assert!(cap.meets_arc(&eq_arc));
        let far = Arc::new(GreatCircle::equator(), -UnitVec::X, -UnitVec::Y, true).unwrap();
        assert!(!cap.meets_arc(&far));
        let narrow = SphericalCap::new(UnitVec::from_spherical(PI / 2.0 - 0.2, 0.5), 0.15).unwrap();
        assert!(!narrow.meets_arc(&eq_arc));
    }

    #[test]
    fn intersection_area_limits() {
        let a = UnitVec::NORTH;
        assert_eq!(cap_intersection_area(a, 0.3, -a, 0.3), 0.0);
        let inner = cap_intersection_area(a, 0.3, UnitVec::from_spherical(0.1, 0.0), 0.9);
        assert!((inner - (1.0 - 0.3f64.cos()) / 2.0).abs() < 1e-15);
    }

    #[test]
    fn intersection_area_matches_monte_carlo() {
        let c1 = UnitVec::from_spherical(0.4, 0.2);
        let c2 = UnitVec::from_spherical(1.1, 1.0);
        let (r1, r2) = (0.7, 1.2);
        let exact = cap_intersection_area(c1, r1, c2, r2);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let n = 400_000;
        let hits = (0..n)
            .filter(|_| {
                let x = UnitVec::random(&mut rng);
                c1.angle_to(x) <= r1 && c2.angle_to(x) <= r2
            })
            .count() as f64;
        let p = hits / n as f64;
        let se = (p * (1.0 - p) / n as f64).sqrt();
        assert!((p - exact).abs() < 4.0 * se, "exact {exact} mc {p} se {se}");
    }
}
