//! Integral-geometric functionals evaluated by Monte Carlo, quadrature, or in
//! closed form.

use std::f64::consts::{FRAC_PI_2, PI};

use rand::Rng;

use super::{cap_intersection_area, chord_length, GeometryError, GreatCircle, SphericalCap, SphericalPolygon, UnitVec};

/// A Monte Carlo mean with its standard error.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct McEstimate {
    pub mean: f64,
    pub se: f64,
    pub n: usize,
}

impl McEstimate {
    pub fn from_samples<I: IntoIterator<Item = f64>>(samples: I) -> Option<Self> {
        let (mut n, mut mean, mut m2) = (0usize, 0.0, 0.0);
        for x in samples {
            n += 1;
            let d = x - mean;
            mean += d / n as f64;
            m2 += d * (x - mean);
        }
        if n == 0 {
            return None;
        }
        let se = if n > 1 {
            (m2 / (n - 1) as f64 / n as f64).sqrt()
        } else {
            0.0
        };
        Some(McEstimate { mean, se, n })
    }

    pub fn z_against(&self, target: f64) -> f64 {
        z_score(self.mean, target, self.se)
    }
}

/// `(estimate − target)/se`; 0 when the two agree to rounding, ±∞ for a
/// zero SE otherwise.
pub fn z_score(estimate: f64, target: f64, se: f64) -> f64 {
    let diff = estimate - target;
    // agreement to rounding is exact, whatever the standard error
    if diff.abs() <= 1e-12 * target.abs().max(1.0) {
        0.0
    } else if se > 0.0 {
        diff / se
    } else {
        diff.signum() * f64::INFINITY
    }
}

/// Monte Carlo estimate of `∫ v₁(p ∩ g) τ(dg)`, which equals `v₂(p)`.
pub fn crofton_mc<R: Rng + ?Sized>(
    p: &SphericalPolygon,
    n: usize,
    rng: &mut R,
) -> Result<McEstimate, GeometryError> {
    if n == 0 {
        return Err(GeometryError::NoSamples);
    }
    let samples = (0..n).map(|_| {
        let g = GreatCircle::from_normal(UnitVec::random(rng));
        chord_length(p, &g)
    });
    Ok(McEstimate::from_samples(samples).expect("n > 0"))
}

fn check_pair(c1: &SphericalCap, c2: &SphericalCap) -> Result<(), GeometryError> {
    if c1.gap(c2) <= 0.0 {
        return Err(GeometryError::OverlappingCaps);
    }
    if !c1.shares_open_hemisphere(c2) {
        return Err(GeometryError::NoCommonHemisphere);
    }
    Ok(())
}

/// Whether `g` separates two disjoint caps: it misses both and their centers
/// lie strictly on opposite sides.
pub fn separates(g: &GreatCircle, c1: &SphericalCap, c2: &SphericalCap) -> Result<bool, GeometryError> {
    check_pair(c1, c2)?;
    Ok(separates_unchecked(g, c1, c2))
}

fn separates_unchecked(g: &GreatCircle, c1: &SphericalCap, c2: &SphericalCap) -> bool {
    let n = g.normal();
    let (d1, d2) = (n.dot(c1.center()), n.dot(c2.center()));
    !c1.hit_by(g) && !c2.hit_by(g) && d1 * d2 < 0.0
}

/// Monte Carlo estimate of `τ([C₁|C₂])` from `n` uniformly drawn normals.
pub fn tau_separating_mc<R: Rng + ?Sized>(
    c1: &SphericalCap,
    c2: &SphericalCap,
    n: usize,
    rng: &mut R,
) -> Result<McEstimate, GeometryError> {
    check_pair(c1, c2)?;
    if n == 0 {
        return Err(GeometryError::NoSamples);
    }
    let samples = (0..n).map(|_| {
        let g = GreatCircle::from_normal(UnitVec::random(rng));
        f64::from(u8::from(separates_unchecked(&g, c1, c2)))
    });
    Ok(McEstimate::from_samples(samples).expect("n > 0"))
}

/// Midpoint-rule quadrature of `τ([C₁|C₂])` on an area-uniform grid of
/// normals: `n` bands in `z` times `2n` sectors in longitude.
pub fn tau_separating_quadrature(
    c1: &SphericalCap,
    c2: &SphericalCap,
    n: usize,
) -> Result<f64, GeometryError> {
    check_pair(c1, c2)?;
    if n == 0 {
        return Err(GeometryError::NoSamples);
    }
    let m = 2 * n;
    let mut count = 0usize;
    for i in 0..n {
        let z = -1.0 + (2.0 * i as f64 + 1.0) / n as f64;
        let r = (1.0 - z * z).sqrt();
        for j in 0..m {
            let phi = 2.0 * PI * (j as f64 + 0.5) / m as f64;
            let u = UnitVec::new(r * phi.cos(), r * phi.sin(), z).expect("unit grid point");
            if separates_unchecked(&GreatCircle::from_normal(u), c1, c2) {
                count += 1;
            }
        }
    }
    Ok(count as f64 / (n * m) as f64)
}

/// Closed form of `τ([C₁|C₂])`.
///
/// A normal `u` gives a separating circle when `⟨u, c₁⟩ > sin θ₁` and
/// `⟨u, c₂⟩ < −sin θ₂` (or the reverse), i.e. when it lies in the cap of
/// radius `π/2 − θ₁` about `c₁` and the cap of radius `π/2 − θ₂` about `−c₂`.
pub fn tau_separating(c1: &SphericalCap, c2: &SphericalCap) -> Result<f64, GeometryError> {
    check_pair(c1, c2)?;
    Ok(2.0
        * cap_intersection_area(
            c1.center(),
            FRAC_PI_2 - c1.theta(),
            -c2.center(),
            FRAC_PI_2 - c2.theta(),
        ))
}

/// Closed form of `τ([conv(C₁ ∪ C₂)])`: one minus the measure of circles
/// leaving both caps on the same side.
pub fn tau_hull(c1: &SphericalCap, c2: &SphericalCap) -> Result<f64, GeometryError> {
    check_pair(c1, c2)?;
    Ok(1.0
        - 2.0
            * cap_intersection_area(
                c1.center(),
                FRAC_PI_2 - c1.theta(),
                c2.center(),
                FRAC_PI_2 - c2.theta(),
            ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::boundary_measure;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn two_caps() -> (SphericalCap, SphericalCap) {
        let th = PI / 12.0;
        (
            SphericalCap::new(UnitVec::from_spherical(PI / 4.0, 0.0), th).unwrap(),
            SphericalCap::new(UnitVec::from_spherical(PI / 4.0, PI / 2.0), th).unwrap(),
        )
    }

    #[test]
    fn crofton_hemisphere_and_lune() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let h = SphericalPolygon::hemisphere(UnitVec::NORTH);
        let e = crofton_mc(&h, 100_000, &mut rng).unwrap();
        // every circle meets the hemisphere in a half circle
        assert!((e.mean - 0.5).abs() < 1e-12);
        let lune = SphericalPolygon::lune(UnitVec::Y, UnitVec::NORTH, UnitVec::X).unwrap();
        let e = crofton_mc(&lune, 100_000, &mut rng).unwrap();
        assert!(e.z_against(0.25).abs() < 3.0, "{e:?}");
        assert!(crofton_mc(&lune, 0, &mut rng).is_err());
    }

    #[test]
    fn coincident_caps_rejected() {
        let c = SphericalCap::new(UnitVec::NORTH, 0.1).unwrap();
        let g = GreatCircle::equator();
        assert_eq!(separates(&g, &c, &c), Err(GeometryError::OverlappingCaps));
        let far = SphericalCap::new(UnitVec::from_spherical(PI - 0.05, 0.0), 0.1).unwrap();
        assert_eq!(separates(&g, &c, &far), Err(GeometryError::NoCommonHemisphere));
    }

    #[test]
    fn bisector_separates_symmetric_caps() {
        let c1 = SphericalCap::new(UnitVec::from_spherical(PI / 4.0, 0.0), 0.05).unwrap();
        let c2 = SphericalCap::new(UnitVec::from_spherical(PI / 4.0, PI), 0.05).unwrap();
        // the meridian plane x = 0 bisects the two centers
        let g = GreatCircle::from_normal(UnitVec::X);
        assert!(separates(&g, &c1, &c2).unwrap());
        assert!(!separates(&GreatCircle::from_normal(UnitVec::Y), &c1, &c2).unwrap());
    }

    #[test]
    fn separating_measure_three_routes() {
        let (c1, c2) = two_caps();
        let exact = tau_separating(&c1, &c2).unwrap();
        let grid = tau_separating_quadrature(&c1, &c2, 1500).unwrap();
        assert!((exact - grid).abs() < 2e-4, "exact {exact} grid {grid}");
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        let mc = tau_separating_mc(&c1, &c2, 1_000_000, &mut rng).unwrap();
        assert!(mc.z_against(grid).abs() < 3.0, "{mc:?} vs {grid}");
    }

    #[test]
    fn hull_measure_limits() {
        // touching caps: nothing separates, the hull is barely more than both
        let th = 0.2;
        let c1 = SphericalCap::new(UnitVec::from_spherical(0.5, 0.0), th).unwrap();
        let c2 = SphericalCap::new(UnitVec::from_spherical(0.5 + 2.0 * th + 1e-9, 0.0), th).unwrap();
        assert!(tau_separating(&c1, &c2).unwrap() < 1e-6);
        // hull of two caps vs the boundary length of a polygonal hull approximant
        let (a, b) = two_caps();
        let hull = tau_hull(&a, &b).unwrap();
        let approx = hull_polygon_perimeter(&a, &b);
        assert!((hull - approx).abs() < 1e-4, "{hull} vs {approx}");
    }

    /// Perimeter of the convex hull of densely sampled boundary points of
    /// both caps (gift wrapping on the sphere).
    fn hull_polygon_perimeter(a: &SphericalCap, b: &SphericalCap) -> f64 {
        let mut pts = Vec::new();
        for cap in [a, b] {
            let (e1, e2) = GreatCircle::from_normal(cap.center()).basis();
            for k in 0..2000 {
                let t = 2.0 * PI * k as f64 / 2000.0;
                let dir = e1.to_vec3() * t.cos() + e2.to_vec3() * t.sin();
                let p = cap.center().to_vec3() * cap.theta().cos() + dir * cap.theta().sin();
                pts.push(p.normalize().unwrap());
            }
        }
        // all points lie in the hemisphere around the mean direction; project
        // gnomonically and take the planar hull, which maps to the spherical one
        let m = (a.center().to_vec3() + b.center().to_vec3()).normalize().unwrap();
        let (e1, e2) = GreatCircle::from_normal(m).basis();
        let mut plane: Vec<(f64, f64, usize)> = pts
            .iter()
            .enumerate()
            .map(|(i, p)| {
                let h = p.dot(m);
                (p.dot(e1) / h, p.dot(e2) / h, i)
            })
            .collect();
        plane.sort_by(|x, y| x.partial_cmp(y).unwrap());
        let cross = |o: (f64, f64, usize), a: (f64, f64, usize), b: (f64, f64, usize)| {
            (a.0 - o.0) * (b.1 - o.1) - (a.1 - o.1) * (b.0 - o.0)
        };
        let mut hull: Vec<(f64, f64, usize)> = Vec::new();
        for pass in 0..2 {
            let start = hull.len();
            let iter: Box<dyn Iterator<Item = &(f64, f64, usize)>> = if pass == 0 {
                Box::new(plane.iter())
            } else {
                Box::new(plane.iter().rev())
            };
            for &p in iter {
                while hull.len() >= start + 2 && cross(hull[hull.len() - 2], hull[hull.len() - 1], p) <= 0.0 {
                    hull.pop();
                }
                hull.push(p);
            }
            hull.pop();
        }
        let verts: Vec<UnitVec> = hull.iter().map(|h| pts[h.2]).collect();
        let poly = SphericalPolygon::from_vertices(&verts).unwrap();
        boundary_measure(&poly).unwrap()
    }
}
