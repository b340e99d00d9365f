//! Points, great circles, arcs, convex polygons and caps on the unit sphere,
//! with the normalized measures σ₁, σ₂ and τ.
//!
//! Lengths are σ₁-normalized (a great circle has length 1) and areas are
//! σ₂-normalized (the sphere has area 1) unless a name says otherwise
//! (`angle`, `area_sr`).

mod arc;
mod cap;
mod circle;
mod integral;
mod polygon;
mod vector;

use thiserror::Error;

pub use arc::{Arc, ON_CIRCLE_TOL};
pub use cap::{cap_intersection_area, SphericalCap};
pub use circle::{side_of, side_of_normal, GreatCircle, Side, SIGN_EPS};
pub use integral::{
    crofton_mc, separates, tau_hull, tau_separating, tau_separating_mc, tau_separating_quadrature, z_score,
    McEstimate,
};
pub use polygon::{
    boundary_measure, chord_length, hits, intrinsic_volumes, IntrinsicVolumes, SphericalPolygon, DEGENERATE_AREA,
};
pub(crate) use polygon::turning_angle;
pub use vector::{uniform_point, UnitVec, Vec3, UNIT_NORM_TOL};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeometryError {
    #[error("vector has no direction")]
    ZeroVector,
    #[error("points are equal or antipodal; no unique great circle")]
    Collinear,
    #[error("arc endpoint is not on its carrier circle")]
    OffCircle,
    #[error("arc has coincident endpoints")]
    EmptyArc,
    #[error("polygon needs at least two vertices")]
    TooFewVertices,
    #[error("consecutive boundary arcs do not share endpoints")]
    BrokenBoundary,
    #[error("polygon is not spherically convex")]
    NotConvex,
    #[error("polygon has empty interior")]
    Degenerate,
    #[error("cap radius {0} outside (0, π/2)")]
    CapRadius(f64),
    #[error("caps overlap")]
    OverlappingCaps,
    #[error("caps are not contained in a common open hemisphere")]
    NoCommonHemisphere,
    #[error("at least one sample is required")]
    NoSamples,
}
