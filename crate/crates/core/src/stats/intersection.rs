//! The point process `Y_t ∩ g` on a fixed great circle `g`.

use super::StatsError;
use crate::geometry::{GreatCircle, UnitVec, SIGN_EPS};
use crate::tessellation::{Tessellation, EQUATOR};

/// Points of `Y_t ∩ g`, split by hemisphere; the two points of `g` on the
/// equator belong to every realization and are reported apart.
#[derive(Clone, Debug, PartialEq)]
pub struct CircleIntersection {
    pub upper: Vec<UnitVec>,
    pub lower: Vec<UnitVec>,
    pub equatorial: [UnitVec; 2],
}

/// Mean number of points of `Y_t` on either open half of `g`. This is
/// `t·τ([h])` for the open half circle `h`, and `τ([h]) = 1` because almost
/// every great circle meets `h` exactly once.
pub fn half_circle_mean(t: f64) -> f64 {
    t
}

pub fn intersect_with_circle(t: &Tessellation, g: &GreatCircle) -> Result<CircleIntersection, StatsError> {
    if g.is_equator() {
        return Err(StatsError::EquatorSection);
    }
    let u = g.normal();
    let mut upper = Vec::new();
    let mut lower = Vec::new();
    for e in t.live_edges() {
        let edge = &t.edges()[e];
        if edge.carrier == EQUATOR {
            continue;
        }
        let Some(p) = edge.arc.circle().normal().cross(u).normalize() else {
            continue;
        };
        for x in [p, -p] {
            if edge.arc.covers(x) {
                if x.z() > SIGN_EPS {
                    upper.push(x);
                } else if x.z() < -SIGN_EPS {
                    lower.push(x);
                }
            }
        }
    }
    let q = UnitVec::NORTH.cross(u).normalize().expect("g is not the equator");
    Ok(CircleIntersection {
        upper,
        lower,
        equatorial: [q, -q],
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn initial_has_only_the_equator_pair() {
        let g = GreatCircle::from_normal(UnitVec::new(0.3, 0.4, 0.5).unwrap());
        let r = intersect_with_circle(&Tessellation::initial(), &g).unwrap();
        assert!(r.upper.is_empty() && r.lower.is_empty());
        for p in r.equatorial {
            assert!(p.z().abs() < 1e-15);
            assert!(g.normal().dot(p).abs() < 1e-15);
        }
        assert_eq!(
            intersect_with_circle(&Tessellation::initial(), &GreatCircle::equator()),
            Err(StatsError::EquatorSection)
        );
    }

    #[test]
    fn one_chord_crossed_once() {
        let mut t = Tessellation::initial();
        t.split(0, &GreatCircle::from_normal(UnitVec::X)).unwrap();
        let g = GreatCircle::from_normal(UnitVec::Y);
        let r = intersect_with_circle(&t, &g).unwrap();
        assert_eq!(r.upper.len(), 1);
        assert!((r.upper[0].z() - 1.0).abs() < 1e-15);
        assert!(r.lower.is_empty());
    }
}
