use std::collections::HashSet;
use std::f64::consts::TAU;

use serde::Serialize;

use super::{CarrierId, CellId, EdgeId, Tessellation, VertexId, EQUATOR};

/// The five object classes of a tessellation: cells Z, edges E, vertices V,
/// sides S (a multiset, one entry per incident cell) and maximal segments M.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Class {
    Cell,
    Edge,
    Vertex,
    Side,
    Segment,
}

pub const CLASSES: [Class; 5] = [Class::Cell, Class::Edge, Class::Vertex, Class::Side, Class::Segment];

impl Class {
    pub fn symbol(self) -> char {
        match self {
            Class::Cell => 'Z',
            Class::Edge => 'E',
            Class::Vertex => 'V',
            Class::Side => 'S',
            Class::Segment => 'M',
        }
    }

    pub(crate) fn index(self) -> usize {
        self as usize
    }
}

/// Adjacency totals `N_XY = Σ_{x ∈ X} #{y ∈ Y : x ⊆ y or y ⊆ x}`.
///
/// The relation is symmetric, so `N_XY = N_YX`; `μ_XY` is estimated by
/// `E N_XY / E |X|`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Incidences([[u64; 5]; 5]);

impl Incidences {
    pub fn get(&self, x: Class, y: Class) -> u64 {
        self.0[x.index()][y.index()]
    }

    fn set(&mut self, x: Class, y: Class, n: u64) {
        self.0[x.index()][y.index()] = n;
        self.0[y.index()][x.index()] = n;
    }
}

/// Counts, total lengths and adjacency totals of one realization.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct RealizationSummary {
    pub t: f64,
    pub cells: u64,
    pub edges: u64,
    pub vertices: u64,
    pub sides: u64,
    pub segments: u64,
    /// Total edge length in radians (the unsubdivided equator is not an edge).
    pub len_edges: f64,
    pub len_segments: f64,
    /// Total side length in radians, each side counted once per cell.
    pub len_sides: f64,
    pub total_area: f64,
    pub equator_vertices: u64,
    pub equator_sides: u64,
    pub incidences: Incidences,
}

impl RealizationSummary {
    pub fn count(&self, c: Class) -> u64 {
        match c {
            Class::Cell => self.cells,
            Class::Edge => self.edges,
            Class::Vertex => self.vertices,
            Class::Side => self.sides,
            Class::Segment => self.segments,
        }
    }

    /// Total length of a one-dimensional class.
    pub fn length(&self, c: Class) -> Option<f64> {
        match c {
            Class::Edge => Some(self.len_edges),
            Class::Side => Some(self.len_sides),
            Class::Segment => Some(self.len_segments),
            Class::Cell | Class::Vertex => None,
        }
    }
}

/// A side: a maximal run of boundary edges of one cell on one carrier.
#[derive(Clone, Debug, PartialEq)]
pub(crate) struct SideRecord {
    pub cell: CellId,
    pub carrier: CarrierId,
    /// Includes the equator loop for an unsplit hemisphere.
    pub edges: Vec<EdgeId>,
    pub vertices: Vec<VertexId>,
}

pub(crate) fn sides(t: &Tessellation) -> Vec<SideRecord> {
    let mut out = Vec::new();
    for c in t.live_cells() {
        let b = &t.cells[c].boundary;
        let k = b.len();
        let carrier = |i: usize| t.edges[b[i % k].edge].carrier;
        let Some(start) = (0..k).find(|&i| carrier(i + k - 1) != carrier(i)) else {
            // the whole boundary lies on one circle
            out.push(SideRecord {
                cell: c,
                carrier: carrier(0),
                edges: b.iter().map(|h| h.edge).collect(),
                vertices: b.iter().filter_map(|&h| t.half_edge_start(h)).collect(),
            });
            continue;
        };
        let mut i = start;
        while i < start + k {
            let mut side = SideRecord {
                cell: c,
                carrier: carrier(i),
                edges: Vec::new(),
                vertices: Vec::new(),
            };
            while i < start + k && carrier(i) == side.carrier {
                let h = b[i % k];
                side.edges.push(h.edge);
                side.vertices.extend(t.half_edge_start(h));
                i += 1;
            }
            side.vertices.extend(t.half_edge_end(b[(i - 1) % k]));
            out.push(side);
        }
    }
    out
}

impl Tessellation {
    pub fn summarize(&self) -> RealizationSummary {
        let edges: Vec<EdgeId> = self.live_edges().filter(|&e| !self.edges[e].is_loop()).collect();
        let mut by_carrier: Vec<Vec<EdgeId>> = vec![Vec::new(); self.carriers.len()];
        for e in self.live_edges() {
            by_carrier[self.edges[e].carrier].push(e);
        }
        let segments: Vec<CarrierId> = (0..self.carriers.len())
            .filter(|&c| self.carriers[c].is_segment())
            .collect();
        let cells: Vec<CellId> = self.live_cells().collect();
        let sides = sides(self);

        let n_cells = cells.len() as u64;
        let n_edges = edges.len() as u64;
        let n_vertices = self.vertices.len() as u64;
        let n_sides = sides.len() as u64;
        let n_segments = segments.len() as u64;

        let edge_len = |e: EdgeId| TAU * self.edges[e].arc.length();
        let len_edges = edges.iter().map(|&e| edge_len(e)).sum();
        let len_segments = segments
            .iter()
            .flat_map(|&m| by_carrier[m].iter())
            .map(|&e| edge_len(e))
            .sum();
        let len_sides = sides
            .iter()
            .flat_map(|s| s.edges.iter())
            .map(|&e| edge_len(e))
            .sum();
        let total_area = cells.iter().map(|&c| self.cell_area(c)).sum();

        let open = |e: &EdgeId| !self.edges[*e].is_loop();
        let mut inc = Incidences::default();
        inc.set(Class::Cell, Class::Cell, n_cells);
        inc.set(Class::Edge, Class::Edge, n_edges);
        inc.set(Class::Vertex, Class::Vertex, n_vertices);
        inc.set(Class::Segment, Class::Segment, n_segments);

        let mut ze = 0;
        let mut zv = 0;
        for &c in &cells {
            let b = &self.cells[c].boundary;
            ze += b.iter().filter(|h| open(&h.edge)).count() as u64;
            zv += self.cell_vertices(c).count() as u64;
        }
        inc.set(Class::Cell, Class::Edge, ze);
        inc.set(Class::Cell, Class::Vertex, zv);

        // a side lies in its own cell, and in the neighbour when every one of
        // its edges borders that same neighbour
        let zs = sides
            .iter()
            .map(|s| {
                let mut others = s.edges.iter().map(|&e| self.edges[e].other_cell(s.cell));
                let first = others.next().expect("side has an edge");
                1 + u64::from(others.all(|o| o == first))
            })
            .sum();
        inc.set(Class::Cell, Class::Side, zs);

        let zm = segments
            .iter()
            .map(|&m| {
                let es = &by_carrier[m];
                let e0 = self.edges[es[0]];
                [e0.left, e0.right]
                    .into_iter()
                    .filter(|&c| es.iter().all(|&e| self.edges[e].left == c || self.edges[e].right == c))
                    .count() as u64
            })
            .sum();
        inc.set(Class::Cell, Class::Segment, zm);

        inc.set(Class::Edge, Class::Vertex, 2 * n_edges);
        let es = sides.iter().map(|s| s.edges.iter().filter(|e| open(e)).count() as u64).sum();
        inc.set(Class::Edge, Class::Side, es);
        let em = segments.iter().map(|&m| by_carrier[m].len() as u64).sum();
        inc.set(Class::Edge, Class::Segment, em);

        let vs = sides.iter().map(|s| s.vertices.len() as u64).sum();
        inc.set(Class::Vertex, Class::Side, vs);
        let vm = segments.iter().map(|&m| by_carrier[m].len() as u64 + 1).sum();
        inc.set(Class::Vertex, Class::Segment, vm);

        let sm = sides.iter().filter(|s| self.carriers[s.carrier].is_segment()).count() as u64;
        inc.set(Class::Side, Class::Segment, sm);

        let mut ss = 0u64;
        let mut groups: Vec<Vec<HashSet<EdgeId>>> = vec![Vec::new(); self.carriers.len()];
        for s in &sides {
            groups[s.carrier].push(s.edges.iter().copied().collect());
        }
        for g in &groups {
            for a in g {
                for b in g {
                    if a.is_subset(b) || b.is_subset(a) {
                        ss += 1;
                    }
                }
            }
        }
        inc.set(Class::Side, Class::Side, ss);

        RealizationSummary {
            t: self.time,
            cells: n_cells,
            edges: n_edges,
            vertices: n_vertices,
            sides: n_sides,
            segments: n_segments,
            len_edges,
            len_segments,
            len_sides,
            total_area,
            equator_vertices: self.vertices.iter().filter(|v| v.on_equator).count() as u64,
            equator_sides: sides.iter().filter(|s| s.carrier == EQUATOR).count() as u64,
            incidences: inc,
        }
    }
}
