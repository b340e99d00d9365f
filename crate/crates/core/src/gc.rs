//! The Poisson great-circle tessellation: the equator together with a
//! Poisson(t) number of independent uniform great circles.

use std::f64::consts::TAU;

use rand::Rng;
use rand_distr::{Distribution, Poisson};
use thiserror::Error;

use crate::geometry::{Arc, GreatCircle, UnitVec};
use crate::process::{replicate_with, DEFAULT_MAX_DEGENERATE_RETRIES};
use crate::tessellation::{
    Carrier, CarrierKind, Edge, HalfEdge, Model, RealizationSummary, Tessellation, Vertex, EQUATOR,
};

/// Circles whose normals are this close, or a circle passing this close to
/// an existing crossing, are degenerate.
pub const GC_TOL: f64 = 1e-10;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GcError {
    #[error("t must be ≥ 0 (got {0})")]
    InvalidTime(f64),
    #[error("circle {0} is parallel to an earlier circle or passes through an existing crossing")]
    Degenerate(usize),
    #[error("{0} consecutive degenerate circles drawn")]
    DegeneracyBudget(u32),
}

#[derive(Clone, Debug, PartialEq)]
pub struct GreatCircleTessellation {
    /// The random circles, without the equator.
    pub circles: Vec<GreatCircle>,
    pub tessellation: Tessellation,
}

/// Whether `u` is in general position with respect to `circles`.
fn admissible(u: UnitVec, circles: &[GreatCircle]) -> bool {
    for (i, a) in circles.iter().enumerate() {
        if u.cross(a.normal()).norm() <= GC_TOL {
            return false;
        }
        for b in &circles[..i] {
            let p = a.normal().cross(b.normal());
            if u.to_vec3().dot(p).abs() <= GC_TOL * p.norm() {
                return false;
            }
        }
    }
    true
}

/// Samples the tessellation at intensity `t`.
pub fn run_gc<R: Rng + ?Sized>(t: f64, rng: &mut R) -> Result<GreatCircleTessellation, GcError> {
    if !(t >= 0.0 && t.is_finite()) {
        return Err(GcError::InvalidTime(t));
    }
    let n = if t > 0.0 {
        Poisson::new(t).expect("positive mean").sample(rng) as usize
    } else {
        0
    };
    let mut all = vec![GreatCircle::equator()];
    for _ in 0..n {
        let mut tries = 0;
        loop {
            let u = UnitVec::random(rng);
            if admissible(u, &all) {
                all.push(GreatCircle::from_normal(u));
                break;
            }
            tries += 1;
            if tries > DEFAULT_MAX_DEGENERATE_RETRIES {
                return Err(GcError::DegeneracyBudget(tries));
            }
        }
    }
    from_circles(&all[1..], t)
}

/// The arrangement of the equator and `circles`, stamped with time `t`.
pub fn from_circles(circles: &[GreatCircle], t: f64) -> Result<GreatCircleTessellation, GcError> {
    let mut all = vec![GreatCircle::equator()];
    for (i, c) in circles.iter().enumerate() {
        if !admissible(c.normal(), &all) {
            return Err(GcError::Degenerate(i));
        }
        all.push(*c);
    }
    let tessellation = if circles.is_empty() {
        let mut t0 = Tessellation::initial();
        t0.model = Model::GreatCircles;
        t0.time = t;
        t0
    } else {
        arrangement(&all, t)
    };
    Ok(GreatCircleTessellation {
        circles: circles.to_vec(),
        tessellation,
    })
}

fn arrangement(all: &[GreatCircle], t: f64) -> Tessellation {
    let k = all.len();
    let mut vertices = Vec::new();
    // vertices on each circle, as (angle, vertex id)
    let mut on: Vec<Vec<(f64, usize)>> = vec![Vec::new(); k];
    for i in 0..k {
        for j in i + 1..k {
            let p = all[i].normal().cross(all[j].normal()).normalize().expect("distinct circles");
            for x in [p, -p] {
                let id = vertices.len();
                vertices.push(Vertex {
                    pos: x,
                    on_equator: i == EQUATOR,
                });
                for c in [i, j] {
                    on[c].push((all[c].angle_of(x).rem_euclid(TAU), id));
                }
            }
        }
    }
    let carriers: Vec<Carrier> = all
        .iter()
        .enumerate()
        .map(|(i, &circle)| Carrier {
            circle,
            kind: if i == EQUATOR { CarrierKind::Equator } else { CarrierKind::Circle },
        })
        .collect();

    // edges run counter-clockwise around each canonical normal, from each
    // vertex to the next one on the circle
    let mut edges = Vec::new();
    let mut base = vec![0usize; k];
    let mut slot: Vec<std::collections::HashMap<usize, usize>> = vec![Default::default(); k];
    for c in 0..k {
        on[c].sort_by(|a, b| a.0.total_cmp(&b.0));
        base[c] = edges.len();
        let m = on[c].len();
        for s in 0..m {
            let (a, b) = (on[c][s].1, on[c][(s + 1) % m].1);
            slot[c].insert(a, s);
            edges.push(Edge {
                arc: Arc::new(all[c], vertices[a].pos, vertices[b].pos, true).expect("vertices on circle"),
                carrier: c,
                ends: Some((a, b)),
                left: 0,
                right: 0,
                alive: true,
            });
        }
    }
    let starting = |c: usize, v: usize| base[c] + slot[c][&v];
    let ending = |c: usize, v: usize| base[c] + (slot[c][&v] + on[c].len() - 1) % on[c].len();

    // trace faces keeping the interior on the left: at each crossing turn onto
    // the other circle, in the direction that enters the left side
    let mut used = vec![[false; 2]; edges.len()];
    let mut boundaries = Vec::new();
    for e0 in 0..edges.len() {
        for dir in [true, false] {
            if used[e0][usize::from(!dir)] {
                continue;
            }
            let mut face = Vec::new();
            let mut h = HalfEdge { edge: e0, forward: dir };
            loop {
                used[h.edge][usize::from(!h.forward)] = true;
                face.push(h);
                let e = &edges[h.edge];
                let (a, b) = e.ends.expect("open edge");
                let v = if h.forward { b } else { a };
                let left = if h.forward {
                    e.arc.oriented_normal()
                } else {
                    -e.arc.oriented_normal()
                };
                let c = e.carrier;
                let other = (0..k)
                    .find(|&o| o != c && on[o].iter().any(|&(_, id)| id == v))
                    .expect("two circles cross at every vertex");
                let d = all[other].normal().cross(vertices[v].pos);
                h = if d.dot(left.to_vec3()) > 0.0 {
                    HalfEdge { edge: starting(other, v), forward: true }
                } else {
                    HalfEdge { edge: ending(other, v), forward: false }
                };
                if h.edge == e0 && h.forward == dir {
                    break;
                }
            }
            let z: f64 = face
                .iter()
                .map(|h| edges[h.edge].arc.midpoint().z())
                .sum();
            boundaries.push((face, if z > 0.0 { 1 } else { -1 }));
        }
    }
    Tessellation::from_parts(vertices, carriers, edges, boundaries, t, Model::GreatCircles)
}

/// Summaries of `reps` independent great-circle tessellations at intensity
/// `t`, seeded per replication from `seed`.
pub fn replicate_gc(t: f64, seed: u64, reps: usize, jobs: Option<usize>) -> Result<Vec<RealizationSummary>, GcError> {
    if !(t >= 0.0 && t.is_finite()) {
        return Err(GcError::InvalidTime(t));
    }
    replicate_with(seed, reps, jobs, |_, rng| run_gc(t, rng).map(|g| g.tessellation.summarize()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tessellation::validate;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn circle(x: f64, y: f64, z: f64) -> GreatCircle {
        GreatCircle::from_normal(UnitVec::new(x, y, z).unwrap())
    }

    #[test]
    fn no_circles_two_cells() {
        let g = from_circles(&[], 0.0).unwrap();
        let s = g.tessellation.summarize();
        assert_eq!((s.cells, s.vertices, s.edges), (2, 0, 0));
        assert!(validate(&g.tessellation).is_empty());
    }

    #[test]
    fn two_circles_counts() {
        let g = from_circles(&[circle(1.0, 0.0, 0.0), circle(0.0, 1.0, 0.0)], 1.0).unwrap();
        let s = g.tessellation.summarize();
        assert_eq!((s.vertices, s.edges, s.cells), (6, 12, 8));
        // the octahedral arrangement: eight octants
        for c in g.tessellation.live_cells() {
            assert!((g.tessellation.cell_area(c) - 0.125).abs() < 1e-14);
        }
        let v = validate(&g.tessellation);
        assert!(v.is_empty(), "{v:?}");
    }

    #[test]
    fn random_arrangements_are_valid() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for _ in 0..50 {
            let g = run_gc(4.0, &mut rng).unwrap();
            let n = g.circles.len() as u64;
            let s = g.tessellation.summarize();
            if n > 0 {
                assert_eq!((s.vertices, s.edges, s.cells), (n * (n + 1), 2 * n * (n + 1), n * n + n + 2));
            }
            let v = validate(&g.tessellation);
            assert!(v.is_empty(), "{v:?}");
        }
    }

    #[test]
    fn triple_point_rejected() {
        // all three pass through the y axis
        let r = from_circles(&[circle(1.0, 0.0, 0.0), circle(1.0, 0.0, 1.0)], 1.0);
        assert_eq!(r, Err(GcError::Degenerate(1)));
        assert_eq!(from_circles(&[circle(0.0, 0.0, 1.0)], 1.0), Err(GcError::Degenerate(0)));
    }
}
