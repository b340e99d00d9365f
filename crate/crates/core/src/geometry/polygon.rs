use std::f64::consts::{PI, TAU};

use super::{side_of, Arc, GeometryError, GreatCircle, Side, UnitVec, SIGN_EPS};

/// Polygons whose normalized area falls below this are treated as having
/// empty interior.
pub const DEGENERATE_AREA: f64 = 1e-14;

/// Tolerance for the convexity test on construction.
const CONVEX_TOL: f64 = 1e-10;

/// A spherically convex polygon: an intersection of finitely many closed
/// hemispheres, described by its boundary.
///
/// The boundary is a cycle of arcs traversed with the interior on the left.
/// The two hemispheres of the initial tessellation are represented by a single
/// full-circle arc and no vertices. Vertices in the relative interior of a
/// side (interior angle π) are allowed; tessellation cells routinely carry
/// them where a neighbouring chord ends.
#[derive(Clone, Debug, PartialEq)]
pub struct SphericalPolygon {
    arcs: Vec<Arc>,
}

/// The spherical intrinsic volumes (Steiner coefficients) of a convex set.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct IntrinsicVolumes {
    pub v0: f64,
    pub v1: f64,
    pub v2: f64,
}

impl IntrinsicVolumes {
    /// A single point: its ε-tube is a cap of normalized area `(1 − cos ε)/2`.
    pub fn point() -> Self {
        IntrinsicVolumes {
            v0: 0.5,
            v1: 0.0,
            v2: 0.0,
        }
    }

    /// A great circle, with the convention `v₀ = 0` taken from the standard
    /// spherical integral geometry references rather than derived here.
    pub fn great_circle() -> Self {
        IntrinsicVolumes {
            v0: 0.0,
            v1: 1.0,
            v2: 0.0,
        }
    }

    /// Normalized area of the ε-neighbourhood predicted by the Steiner
    /// polynomial, for `0 < ε < π/2`.
    pub fn tube_area(&self, eps: f64) -> f64 {
        (1.0 - eps.cos()) * self.v0 + eps.sin() * self.v1 + self.v2
    }
}

impl SphericalPolygon {
    /// The closed hemisphere `{x : ⟨pole, x⟩ ≥ 0}`.
    pub fn hemisphere(pole: UnitVec) -> Self {
        let circle = GreatCircle::from_normal(pole);
        SphericalPolygon {
            arcs: vec![Arc::full(circle, circle.normal() == pole)],
        }
    }

    /// Polygon through `vertices` listed counter-clockwise as seen from
    /// outside the sphere; consecutive vertices are joined by the shorter arc.
    pub fn from_vertices(vertices: &[UnitVec]) -> Result<Self, GeometryError> {
        if vertices.len() < 2 {
            return Err(GeometryError::TooFewVertices);
        }
        let n = vertices.len();
        let mut arcs = Vec::with_capacity(n);
        for i in 0..n {
            let (a, b) = (vertices[i], vertices[(i + 1) % n]);
            let circle = GreatCircle::through(a, b)?;
            let positive = circle.normal().to_vec3().dot(a.cross(b)) > 0.0;
            arcs.push(Arc::new(circle, a, b, positive)?);
        }
        Self::from_arcs(arcs)
    }

    /// Polygon from an explicit boundary cycle; consecutive arcs must share
    /// endpoints and every vertex must lie on the inner side of every arc.
    pub fn from_arcs(arcs: Vec<Arc>) -> Result<Self, GeometryError> {
        if arcs.is_empty() {
            return Err(GeometryError::TooFewVertices);
        }
        if arcs.iter().any(Arc::is_full) {
            if arcs.len() != 1 {
                return Err(GeometryError::BrokenBoundary);
            }
            return Ok(SphericalPolygon { arcs });
        }
        let n = arcs.len();
        for i in 0..n {
            let end = arcs[i].end().expect("open arc");
            let next = arcs[(i + 1) % n].start().expect("open arc");
            if end.angle_to(next) > 1e-10 {
                return Err(GeometryError::BrokenBoundary);
            }
        }
        let poly = SphericalPolygon { arcs };
        for arc in &poly.arcs {
            let normal = arc.oriented_normal();
            if poly.vertices().any(|v| normal.dot(v) < -CONVEX_TOL) {
                return Err(GeometryError::NotConvex);
            }
            // a boundary arc longer than a half circle cannot bound a convex set
            if arc.angle() > PI + 1e-9 {
                return Err(GeometryError::NotConvex);
            }
        }
        Ok(poly)
    }

    /// The lune `{x : ⟨n1, x⟩ ≥ 0, ⟨n2, x⟩ ≥ 0}` with corners `±corner`; both
    /// normals must be orthogonal to `corner`.
    pub fn lune(corner: UnitVec, n1: UnitVec, n2: UnitVec) -> Result<Self, GeometryError> {
        let half = |n: UnitVec, other: UnitVec| -> Result<Arc, GeometryError> {
            let dir = n.cross(corner).normalize().ok_or(GeometryError::Collinear)?;
            // travelling counter-clockwise around n from `corner` passes through
            // `dir` first; keep that half when it lies inside the other bound
            if other.dot(dir) >= 0.0 {
                Arc::around(n, corner, -corner)
            } else {
                Arc::around(n, -corner, corner)
            }
        };
        let a1 = half(n1, n2)?;
        let a2 = half(n2, n1)?;
        let arcs = if a1.end() == a2.start() {
            vec![a1, a2]
        } else {
            vec![a2, a1]
        };
        Self::from_arcs(arcs)
    }

    /// Wraps a boundary cycle already known to be valid.
    pub(crate) fn from_arcs_unchecked(arcs: Vec<Arc>) -> Self {
        SphericalPolygon { arcs }
    }

    pub fn arcs(&self) -> &[Arc] {
        &self.arcs
    }

    pub fn is_hemisphere(&self) -> bool {
        self.arcs.len() == 1 && self.arcs[0].is_full()
    }

    pub fn vertices(&self) -> impl Iterator<Item = UnitVec> + '_ {
        self.arcs.iter().filter_map(Arc::start)
    }

    /// Closed membership test with tolerance `tol` on every bounding
    /// half-space.
    pub fn contains_with(&self, x: UnitVec, tol: f64) -> bool {
        self.arcs
            .iter()
            .all(|a| a.oriented_normal().dot(x) >= -tol)
    }

    pub fn contains(&self, x: UnitVec) -> bool {
        self.contains_with(x, SIGN_EPS)
    }

    /// Unnormalized area (steradians) by Gauss–Bonnet: `2π − Σ` turning angles.
    pub fn area_sr(&self) -> f64 {
        if self.is_hemisphere() {
            return TAU;
        }
        let n = self.arcs.len();
        let mut turning = 0.0;
        for i in 0..n {
            let incoming = &self.arcs[i];
            let outgoing = &self.arcs[(i + 1) % n];
            let v = outgoing.start().expect("open arc");
            turning += turning_angle(incoming.oriented_normal(), outgoing.oriented_normal(), v);
        }
        TAU - turning
    }

    /// σ₁-length of the boundary.
    pub fn perimeter(&self) -> f64 {
        self.arcs.iter().map(Arc::length).sum()
    }

    fn check_interior(&self) -> Result<f64, GeometryError> {
        let area = self.area_sr();
        if area / (4.0 * PI) <= DEGENERATE_AREA {
            return Err(GeometryError::Degenerate);
        }
        Ok(area)
    }
}

/// Signed left turn at `v` from a path running counter-clockwise around
/// `n_in` to one running counter-clockwise around `n_out`.
pub(crate) fn turning_angle(n_in: UnitVec, n_out: UnitVec, v: UnitVec) -> f64 {
    let t_in = n_in.cross(v);
    let t_out = n_out.cross(v);
    v.to_vec3().dot(t_in.cross(t_out)).atan2(t_in.dot(t_out))
}

/// Whether `g` meets the polygon.
///
/// For a convex polygon this reduces to its vertices not all lying strictly on
/// one side of `g`; every great circle meets a hemisphere.
pub fn hits(g: &GreatCircle, p: &SphericalPolygon) -> bool {
    if p.is_hemisphere() {
        return true;
    }
    let mut pos = false;
    let mut neg = false;
    for v in p.vertices() {
        match side_of(g, v) {
            Side::On => return true,
            Side::Positive => pos = true,
            Side::Negative => neg = true,
        }
        if pos && neg {
            return true;
        }
    }
    false
}

/// `τ([p]) = σ₁(∂p)`, the measure of great circles hitting `p`.
pub fn boundary_measure(p: &SphericalPolygon) -> Result<f64, GeometryError> {
    p.check_interior()?;
    Ok(p.perimeter())
}

/// The intrinsic volumes `(v₀, v₁, v₂)` of a polygon with nonempty interior.
pub fn intrinsic_volumes(p: &SphericalPolygon) -> Result<IntrinsicVolumes, GeometryError> {
    let area = p.check_interior()?;
    Ok(IntrinsicVolumes {
        v0: (TAU - area) / (4.0 * PI),
        v1: p.perimeter() / 2.0,
        v2: area / (4.0 * PI),
    })
}

/// σ₁-length of `p ∩ g`.
pub fn chord_length(p: &SphericalPolygon, g: &GreatCircle) -> f64 {
    let (e1, e2) = g.basis();
    // running intersection [lo, hi] of angular intervals along g
    let mut window: Option<(f64, f64)> = None;
    for arc in p.arcs() {
        let n = arc.oriented_normal();
        let (a, b) = (n.dot(e1), n.dot(e2));
        if a.hypot(b) <= SIGN_EPS {
            // g is the carrier of this arc: the constraint holds everywhere
            continue;
        }
        let centre = b.atan2(a);
        window = Some(match window {
            None => (centre - PI / 2.0, centre + PI / 2.0),
            Some((lo, hi)) => {
                let mid = 0.5 * (lo + hi);
                let c = centre + TAU * ((mid - centre) / TAU).round();
                let (lo, hi) = (lo.max(c - PI / 2.0), hi.min(c + PI / 2.0));
                if hi <= lo {
                    return 0.0;
                }
                (lo, hi)
            }
        });
    }
    match window {
        None => 1.0,
        Some((lo, hi)) => (hi - lo) / TAU,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    const FRAC_PI_2: f64 = PI / 2.0;

    fn octant() -> SphericalPolygon {
        SphericalPolygon::from_vertices(&[UnitVec::X, UnitVec::Y, UnitVec::NORTH]).unwrap()
    }

    pub(crate) fn cap_approximant(center_theta: f64, center_phi: f64, radius: f64, n: usize) -> SphericalPolygon {
        // regular n-gon inscribed in the cap, counter-clockwise seen from outside
        let c = UnitVec::from_spherical(center_theta, center_phi);
        let (e1, e2) = GreatCircle::from_normal(c).basis();
        let (e1, e2) = if GreatCircle::from_normal(c).normal() == c {
            (e1, e2)
        } else {
            (e2, e1)
        };
        let verts: Vec<_> = (0..n)
            .map(|k| {
                let a = TAU * k as f64 / n as f64;
                let (s, co) = a.sin_cos();
                let r = radius.sin();
                (c.to_vec3() * radius.cos() + (e1.to_vec3() * co + e2.to_vec3() * s) * r)
                    .normalize()
                    .unwrap()
            })
            .collect();
        SphericalPolygon::from_vertices(&verts).unwrap()
    }

    #[test]
    fn hemisphere_measures() {
        let h = SphericalPolygon::hemisphere(UnitVec::NORTH);
        assert_eq!(boundary_measure(&h).unwrap(), 1.0);
        let iv = intrinsic_volumes(&h).unwrap();
        assert_eq!((iv.v0, iv.v1, iv.v2), (0.0, 0.5, 0.5));
        let g = GreatCircle::from_normal(UnitVec::new(0.3, 0.1, 0.2).unwrap());
        assert!(hits(&g, &h));
        assert!((chord_length(&h, &g) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn hemisphere_steiner_tube() {
        // ε-tube of a hemisphere is a cap of radius π/2 + ε
        let iv = intrinsic_volumes(&SphericalPolygon::hemisphere(UnitVec::SOUTH)).unwrap();
        for eps in [0.1, 0.5, 1.2] {
            let cap = (1.0 - (FRAC_PI_2 + eps).cos()) / 2.0;
            assert!((iv.tube_area(eps) - cap).abs() < 1e-15);
        }
    }

    #[test]
    fn point_steiner_tube() {
        for eps in [0.1, 0.7] {
            let cap = (1.0 - f64::cos(eps)) / 2.0;
            assert!((IntrinsicVolumes::point().tube_area(eps) - cap).abs() < 1e-15);
        }
    }

    #[test]
    fn octant_triangle() {
        let p = octant();
        assert!((p.area_sr() - FRAC_PI_2).abs() < 1e-14);
        assert!((boundary_measure(&p).unwrap() - 0.75).abs() < 1e-15);
        let iv = intrinsic_volumes(&p).unwrap();
        assert!((iv.v2 - 0.125).abs() < 1e-15);
        assert!((iv.v0 + iv.v2 - 0.5).abs() < 1e-15);
        assert!(p.contains(UnitVec::new(1.0, 1.0, 1.0).unwrap()));
        assert!(!p.contains(UnitVec::new(-1.0, 1.0, 1.0).unwrap()));
    }

    #[test]
    fn clockwise_vertices_rejected() {
        let r = SphericalPolygon::from_vertices(&[UnitVec::Y, UnitVec::X, UnitVec::NORTH]);
        assert_eq!(r, Err(GeometryError::NotConvex));
    }

    #[test]
    fn split_hemisphere_lune() {
        // upper hemisphere cut by the circle x = 0
        let lune = SphericalPolygon::lune(UnitVec::Y, UnitVec::NORTH, UnitVec::X).unwrap();
        assert!((boundary_measure(&lune).unwrap() - 1.0).abs() < 1e-15);
        let iv = intrinsic_volumes(&lune).unwrap();
        assert!((iv.v2 - 0.25).abs() < 1e-15);
        assert!(lune.contains(UnitVec::new(1.0, 0.0, 1.0).unwrap()));
        assert!(!lune.contains(UnitVec::new(-1.0, 0.0, 1.0).unwrap()));
        assert!(!lune.contains(UnitVec::new(1.0, 0.0, -1.0).unwrap()));
    }

    #[test]
    fn lune_area_matches_dihedral_angle() {
        for alpha in [0.3f64, 1.0, 2.5] {
            let n2 = UnitVec::new(alpha.sin(), 0.0, -alpha.cos()).unwrap();
            // n1 = north, corner on the y axis: dihedral angle is π − angle(n1, n2)
            let lune = SphericalPolygon::lune(UnitVec::Y, UnitVec::NORTH, n2).unwrap();
            let iv = intrinsic_volumes(&lune).unwrap();
            let dihedral = PI - UnitVec::NORTH.angle_to(n2);
            assert!((iv.v2 - dihedral / TAU).abs() < 1e-14);
            assert!((iv.v0 + iv.v2 - 0.5).abs() < 1e-14);
        }
    }

    #[test]
    fn cap_approximant_misses_equator() {
        let p = cap_approximant(0.0, 0.0, PI / 6.0, 64);
        assert!(!hits(&GreatCircle::equator(), &p));
        // perimeter of the inscribed 64-gon is just under the circle's sin θ
        let tau = boundary_measure(&p).unwrap();
        assert!(tau < 0.5 && tau > 0.499);
    }

    #[test]
    fn degenerate_polygon_rejected() {
        let a = UnitVec::X;
        let b = UnitVec::new(1.0, 1.0, 0.0).unwrap();
        let p = SphericalPolygon::from_vertices(&[a, b]).unwrap();
        assert_eq!(boundary_measure(&p), Err(GeometryError::Degenerate));
        assert_eq!(intrinsic_volumes(&p), Err(GeometryError::Degenerate));
    }

    /// Brute-force oracle: does any densely sampled boundary point lie on
    /// each side of g?
    fn hits_by_boundary_sampling(g: &GreatCircle, p: &SphericalPolygon) -> bool {
        let mut pos = false;
        let mut neg = false;
        for arc in p.arcs() {
            for k in 0..=400 {
                let d = g.normal().dot(arc.point_at(k as f64 / 400.0));
                pos |= d >= 0.0;
                neg |= d <= 0.0;
            }
        }
        pos && neg
    }

    #[test]
    fn hits_agrees_with_boundary_sampling() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let lune = SphericalPolygon::lune(UnitVec::Y, UnitVec::NORTH, UnitVec::X).unwrap();
        let tri = octant();
        let cap = cap_approximant(0.7, 1.9, 0.4, 12);
        for _ in 0..10_000 {
            let g = GreatCircle::from_normal(UnitVec::random(&mut rng));
            for p in [&lune, &tri, &cap] {
                assert_eq!(hits(&g, p), hits_by_boundary_sampling(&g, p));
            }
        }
    }

    #[test]
    fn chord_length_matches_geometry() {
        // the octant cut by the circle x = y runs from the pole to (1,1,0)/√2
        let g = GreatCircle::from_normal(UnitVec::new(1.0, -1.0, 0.0).unwrap());
        assert!((chord_length(&octant(), &g) - 0.25).abs() < 1e-15);
        assert_eq!(chord_length(&octant(), &GreatCircle::from_normal(UnitVec::new(1.0, 1.0, 1.0).unwrap())), 0.0);
    }
}
