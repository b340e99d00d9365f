use std::collections::HashMap;
use std::f64::consts::PI;

use crate::geometry::{SphericalPolygon, UnitVec, UNIT_NORM_TOL};

use super::summary::sides;
use super::{CarrierKind, Model, Tessellation};

const AREA_TOL: f64 = 1e-9;
const LENGTH_TOL: f64 = 1e-9;
const PROBES: usize = 64;

/// Fibonacci lattice on the sphere, rotated off the coordinate planes; avoids
/// both poles and the equator.
fn probe_points(n: usize) -> impl Iterator<Item = UnitVec> {
    let golden = PI * (3.0 - 5f64.sqrt());
    (0..n).map(move |i| {
        let z = 1.0 - (2 * i + 1) as f64 / n as f64;
        let r = (1.0 - z * z).sqrt();
        let phi = golden * i as f64 + 0.3;
        UnitVec::new(r * phi.cos(), r * phi.sin(), z).expect("lattice point")
    })
}

/// Every violated structural invariant, as human-readable messages; empty for
/// a valid tessellation.
pub fn validate(t: &Tessellation) -> Vec<String> {
    let mut out = Vec::new();
    let s = t.summarize();
    let (z, e, v, m) = (s.cells, s.edges, s.vertices, s.segments);

    if (s.total_area - 1.0).abs() > AREA_TOL {
        out.push(format!("cell areas sum to {}", s.total_area));
    }
    if v as i64 - e as i64 + z as i64 != 2 {
        out.push(format!("Euler characteristic V−E+Z = {}", v as i64 - e as i64 + z as i64));
    }
    match t.model {
        Model::Splitting => {
            if m + 2 != z || v != 2 * m || e != 3 * m {
                out.push(format!("counts Z={z} E={e} V={v} M={m} break M=Z−2, V=2M, E=3M"));
            }
            let mut per_half = [0u64; 2];
            for c in t.carriers() {
                if let CarrierKind::Segment { hemisphere, .. } = c.kind {
                    per_half[usize::from(hemisphere < 0)] += 1;
                }
            }
            let expected: u64 = per_half.iter().map(|&k| if k == 0 { 1 } else { 4 * k }).sum();
            if s.sides != expected {
                out.push(format!("{} sides, expected {expected}", s.sides));
            }
            let want = 2.0 * (s.len_segments + 2.0 * PI);
            if (s.len_sides - want).abs() > LENGTH_TOL {
                out.push(format!("L_S = {} but 2(L_M + 2π) = {want}", s.len_sides));
            }
        }
        Model::GreatCircles => {
            let n = t
                .carriers()
                .iter()
                .filter(|c| c.kind == CarrierKind::Circle)
                .count() as u64;
            let (ev, ee, ez) = if n == 0 {
                (0, 0, 2)
            } else {
                (n * (n + 1), 2 * n * (n + 1), n * n + n + 2)
            };
            if (v, e, z) != (ev, ee, ez) {
                out.push(format!("{n} circles give V={v} E={e} Z={z}, expected {ev}, {ee}, {ez}"));
            }
            let want = 4.0 * PI * (n + 1) as f64;
            if (s.len_sides - want).abs() > LENGTH_TOL {
                out.push(format!("L_S = {} but expected {want}", s.len_sides));
            }
        }
    }

    for (i, vx) in t.vertices().iter().enumerate() {
        if vx.pos.norm_error() > UNIT_NORM_TOL {
            out.push(format!("vertex {i} is off the sphere"));
        }
    }

    // each live edge is traversed once forward by its left cell and once
    // backward by its right cell, and by no one else
    let mut seen: HashMap<(usize, bool), usize> = HashMap::new();
    for c in t.live_cells() {
        for h in &t.cells[c].boundary {
            let edge = &t.edges[h.edge];
            if !edge.alive {
                out.push(format!("cell {c} references dead edge {}", h.edge));
            }
            let owner = if h.forward { edge.left } else { edge.right };
            if owner != c {
                out.push(format!("edge {} lists cell {owner} but is traversed by cell {c}", h.edge));
            }
            *seen.entry((h.edge, h.forward)).or_default() += 1;
        }
    }
    for i in t.live_edges() {
        let edge = &t.edges[i];
        if edge.left == edge.right {
            out.push(format!("edge {i} has the same cell on both sides"));
        }
        for dir in [true, false] {
            let k = seen.get(&(i, dir)).copied().unwrap_or(0);
            if k != 1 {
                out.push(format!("edge {i} traversed {k} times in direction {dir}"));
            }
        }
    }

    let mut degree = vec![0u32; t.vertices().len()];
    for i in t.live_edges() {
        if let Some((a, b)) = t.edges[i].ends {
            degree[a] += 1;
            degree[b] += 1;
        }
    }
    let want_degree = match t.model {
        Model::Splitting => 3,
        Model::GreatCircles => 4,
    };
    for (i, &d) in degree.iter().enumerate() {
        if d != want_degree {
            out.push(format!("vertex {i} has degree {d}"));
        }
    }

    let mut polygons = Vec::new();
    for c in t.live_cells() {
        let b = &t.cells[c].boundary;
        if b.len() > 1 {
            for k in 0..b.len() {
                let (h, next) = (b[k], b[(k + 1) % b.len()]);
                if t.half_edge_end(h).is_none() || t.half_edge_end(h) != t.half_edge_start(next) {
                    out.push(format!("cell {c} boundary breaks after edge {}", h.edge));
                }
            }
        }
        let arcs = b.iter().map(|&h| t.half_edge_arc(h)).collect();
        match SphericalPolygon::from_arcs(arcs) {
            Ok(p) => polygons.push(p),
            Err(err) => out.push(format!("cell {c}: {err}")),
        }
        if (t.cells[c].perimeter() - t.cell_polygon(c).perimeter()).abs() > LENGTH_TOL {
            out.push(format!("cell {c} has a stale perimeter"));
        }
    }
    if polygons.len() as u64 == z {
        for (k, x) in probe_points(PROBES).enumerate() {
            let n = polygons.iter().filter(|p| p.contains_with(x, -1e-12)).count();
            if n != 1 {
                out.push(format!("probe point {k} lies in {n} cells"));
            }
        }
    }

    if sides(t).iter().any(|s| s.edges.is_empty()) {
        out.push("empty side".to_string());
    }
    out
}
