//! Incidence model of a tessellation of the sphere and the split operation.
//!
//! Ids are indices into append-only arenas and are never reused. Splitting a
//! cell marks it dead and appends two daughters; splitting an edge marks it
//! dead and appends its two pieces. Dead records keep their geometry so event
//! logs stay meaningful.

mod export;
mod summary;
mod validate;

use thiserror::Error;

use crate::geometry::{turning_angle, Arc, GreatCircle, SphericalPolygon, UnitVec, SIGN_EPS};

pub use export::{edge_records, model_name, write_geometry, EdgeRecord, GEOMETRY_COLUMNS, GEOMETRY_HEADER};
pub use summary::{Class, Incidences, RealizationSummary, CLASSES};
pub use validate::validate;

pub type CellId = usize;
pub type VertexId = usize;
pub type EdgeId = usize;
pub type CarrierId = usize;

/// Carrier id of the equator in every tessellation.
pub const EQUATOR: CarrierId = 0;

/// Chord endpoints closer than this (radians) to an existing vertex, or
/// circles this close to a boundary carrier, are rejected as degenerate.
pub const VERTEX_TOL: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Vertex {
    pub pos: UnitVec,
    pub on_equator: bool,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum CarrierKind {
    Equator,
    /// A maximal segment: the chord laid down by one split.
    Segment {
        ends: [VertexId; 2],
        born: f64,
        hemisphere: i8,
    },
    /// A whole great circle of the comparison model.
    Circle,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Carrier {
    pub circle: GreatCircle,
    pub kind: CarrierKind,
}

impl Carrier {
    pub fn is_segment(&self) -> bool {
        matches!(self.kind, CarrierKind::Segment { .. })
    }
}

/// An edge between two vertices, or the unsubdivided equator (`ends == None`).
///
/// The cell on the left of `arc` (where `⟨arc.oriented_normal(), x⟩ > 0`) is
/// `left`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Edge {
    pub arc: Arc,
    pub carrier: CarrierId,
    pub ends: Option<(VertexId, VertexId)>,
    pub left: CellId,
    pub right: CellId,
    pub alive: bool,
}

impl Edge {
    pub fn is_loop(&self) -> bool {
        self.ends.is_none()
    }

    pub fn other_cell(&self, c: CellId) -> CellId {
        if self.left == c {
            self.right
        } else {
            self.left
        }
    }
}

/// An edge as traversed by one of its cells; `forward` means along the edge's
/// own orientation, i.e. the cell is its `left` cell.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct HalfEdge {
    pub edge: EdgeId,
    pub forward: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Cell {
    /// Boundary cycle, interior on the left.
    pub boundary: Vec<HalfEdge>,
    pub alive: bool,
    pub born: f64,
    /// +1 for the upper hemisphere, −1 for the lower.
    pub hemisphere: i8,
    perimeter: f64,
}

impl Cell {
    /// `τ([p]) = σ₁(∂p)`, the rate at which the cell is split.
    pub fn perimeter(&self) -> f64 {
        self.perimeter
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Model {
    Splitting,
    GreatCircles,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Tessellation {
    pub(crate) vertices: Vec<Vertex>,
    pub(crate) carriers: Vec<Carrier>,
    pub(crate) edges: Vec<Edge>,
    pub(crate) cells: Vec<Cell>,
    pub(crate) time: f64,
    pub(crate) model: Model,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SplitError {
    #[error("cell {0} does not exist or has already been split")]
    NoSuchCell(CellId),
    #[error("circle misses cell {0}")]
    Miss(CellId),
    #[error("degenerate split of cell {cell}: {reason}")]
    Degenerate { cell: CellId, reason: &'static str },
}

impl SplitError {
    /// Degenerate configurations have probability zero; the caller draws a
    /// fresh circle.
    pub fn is_retriable(&self) -> bool {
        matches!(self, SplitError::Degenerate { .. })
    }
}

/// Ids created by one split.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SplitOutcome {
    /// Daughters on the positive and negative side of the circle's normal.
    pub daughters: [CellId; 2],
    pub vertices: [VertexId; 2],
    pub segment: CarrierId,
    pub chord: EdgeId,
}

impl Tessellation {
    /// The two closed hemispheres bounded by the equator.
    pub fn initial() -> Self {
        let equator = GreatCircle::equator();
        let hemisphere = |h: i8, forward: bool| Cell {
            boundary: vec![HalfEdge { edge: 0, forward }],
            alive: true,
            born: 0.0,
            hemisphere: h,
            perimeter: 1.0,
        };
        Tessellation {
            vertices: Vec::new(),
            carriers: vec![Carrier {
                circle: equator,
                kind: CarrierKind::Equator,
            }],
            edges: vec![Edge {
                arc: Arc::full(equator, true),
                carrier: EQUATOR,
                ends: None,
                left: 0,
                right: 1,
                alive: true,
            }],
            cells: vec![hemisphere(1, true), hemisphere(-1, false)],
            time: 0.0,
            model: Model::Splitting,
        }
    }

    pub fn time(&self) -> f64 {
        self.time
    }

    pub(crate) fn set_time(&mut self, t: f64) {
        debug_assert!(t >= self.time);
        self.time = t;
    }

    pub fn model(&self) -> Model {
        self.model
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn carriers(&self) -> &[Carrier] {
        &self.carriers
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn cells(&self) -> &[Cell] {
        &self.cells
    }

    pub fn live_cells(&self) -> impl Iterator<Item = CellId> + '_ {
        self.cells.iter().enumerate().filter(|(_, c)| c.alive).map(|(i, _)| i)
    }

    pub fn live_edges(&self) -> impl Iterator<Item = EdgeId> + '_ {
        self.edges.iter().enumerate().filter(|(_, e)| e.alive).map(|(i, _)| i)
    }

    /// The boundary arc of a half-edge in its traversal direction.
    pub fn half_edge_arc(&self, h: HalfEdge) -> Arc {
        let arc = self.edges[h.edge].arc;
        if h.forward {
            arc
        } else {
            arc.reversed()
        }
    }

    /// Start vertex of a half-edge; `None` for the equator loop.
    pub fn half_edge_start(&self, h: HalfEdge) -> Option<VertexId> {
        self.edges[h.edge]
            .ends
            .map(|(a, b)| if h.forward { a } else { b })
    }

    pub fn half_edge_end(&self, h: HalfEdge) -> Option<VertexId> {
        self.edges[h.edge]
            .ends
            .map(|(a, b)| if h.forward { b } else { a })
    }

    /// Corner vertices of a cell in boundary order.
    pub fn cell_vertices(&self, c: CellId) -> impl Iterator<Item = VertexId> + '_ {
        self.cells[c]
            .boundary
            .iter()
            .filter_map(move |&h| self.half_edge_start(h))
    }

    pub fn cell_polygon(&self, c: CellId) -> SphericalPolygon {
        let arcs = self.cells[c]
            .boundary
            .iter()
            .map(|&h| self.half_edge_arc(h))
            .collect();
        SphericalPolygon::from_arcs_unchecked(arcs)
    }

    /// Normalized area of a cell from the turning angles of its boundary.
    pub fn cell_area(&self, c: CellId) -> f64 {
        let b = &self.cells[c].boundary;
        if b.len() == 1 {
            return 0.5;
        }
        let turning: f64 = (0..b.len())
            .map(|i| {
                let h_in = b[i];
                let h_out = b[(i + 1) % b.len()];
                let v = self.vertices[self.half_edge_start(h_out).expect("open edge")].pos;
                turning_angle(
                    self.half_edge_arc(h_in).oriented_normal(),
                    self.half_edge_arc(h_out).oriented_normal(),
                    v,
                )
            })
            .sum();
        (std::f64::consts::TAU - turning) / (4.0 * std::f64::consts::PI)
    }

    /// Whether `g` meets the closed cell.
    pub fn cell_hit_by(&self, c: CellId, g: &GreatCircle) -> bool {
        let u = g.normal();
        let (mut pos, mut neg) = (false, false);
        let mut any = false;
        for v in self.cell_vertices(c) {
            any = true;
            let d = u.dot(self.vertices[v].pos);
            if d.abs() <= SIGN_EPS {
                return true;
            }
            if d > 0.0 {
                pos = true;
            } else {
                neg = true;
            }
        }
        !any || (pos && neg)
    }

    fn recompute_perimeter(&mut self, c: CellId) {
        let p = self.cells[c]
            .boundary
            .iter()
            .map(|&h| self.edges[h.edge].arc.length())
            .sum();
        self.cells[c].perimeter = p;
    }

    fn push_cell(&mut self, boundary: Vec<HalfEdge>, hemisphere: i8) -> CellId {
        let id = self.cells.len();
        self.cells.push(Cell {
            boundary,
            alive: true,
            born: self.time,
            hemisphere,
            perimeter: 0.0,
        });
        for k in 0..self.cells[id].boundary.len() {
            let h = self.cells[id].boundary[k];
            let e = &mut self.edges[h.edge];
            if h.forward {
                e.left = id;
            } else {
                e.right = id;
            }
        }
        self.recompute_perimeter(id);
        id
    }

    fn push_vertex(&mut self, pos: UnitVec, on_equator: bool) -> VertexId {
        self.vertices.push(Vertex { pos, on_equator });
        self.vertices.len() - 1
    }

    fn push_edge(&mut self, edge: Edge) -> EdgeId {
        self.edges.push(edge);
        self.edges.len() - 1
    }

    /// Replaces `cell`'s daughters' view of `old` in the neighbour across it by
    /// `pieces`, given in the edge's own orientation.
    fn replace_in_neighbour(&mut self, cell: CellId, old: HalfEdge, pieces: [EdgeId; 2]) {
        let n = self.edges[old.edge].other_cell(cell);
        let forward = !old.forward;
        let new = if forward {
            [
                HalfEdge { edge: pieces[0], forward },
                HalfEdge { edge: pieces[1], forward },
            ]
        } else {
            [
                HalfEdge { edge: pieces[1], forward },
                HalfEdge { edge: pieces[0], forward },
            ]
        };
        let b = &mut self.cells[n].boundary;
        let pos = b
            .iter()
            .position(|h| h.edge == old.edge)
            .expect("neighbour shares the edge");
        b.splice(pos..=pos, new);
        self.recompute_perimeter(n);
    }

    /// Point where `g` (normal `u`) crosses the traversed arc `h`: leaving the
    /// positive side when `exit`, entering it otherwise.
    fn crossing(&self, cell: CellId, h: HalfEdge, u: UnitVec, exit: bool) -> Result<UnitVec, SplitError> {
        let arc = self.half_edge_arc(h);
        let c = arc.oriented_normal().cross(u);
        if c.norm() <= VERTEX_TOL {
            return Err(SplitError::Degenerate {
                cell,
                reason: "circle coincides with a boundary carrier",
            });
        }
        let x = c.normalize().expect("nonzero");
        let x = if exit { x } else { -x };
        if let (Some(a), Some(b)) = (arc.start(), arc.end()) {
            if x.angle_to(a) <= VERTEX_TOL || x.angle_to(b) <= VERTEX_TOL {
                return Err(SplitError::Degenerate {
                    cell,
                    reason: "chord ends too close to an existing vertex",
                });
            }
            debug_assert!(arc.covers(x));
        }
        Ok(x)
    }

    /// Splits the edge under half-edge `h` of `cell` at `x`; returns the two
    /// pieces in `cell`'s traversal order.
    fn subdivide(&mut self, cell: CellId, h: HalfEdge, x: UnitVec) -> (VertexId, HalfEdge, HalfEdge) {
        let e = self.edges[h.edge];
        let (a, b) = e.ends.expect("open edge");
        let v = self.push_vertex(x, e.carrier == EQUATOR);
        let n = e.arc.oriented_normal();
        let piece = |from: UnitVec, to: UnitVec| Arc::around(n, from, to).expect("point on carrier");
        let (pa, pb) = (self.vertices[a].pos, self.vertices[b].pos);
        let e1 = self.push_edge(Edge {
            arc: piece(pa, x),
            ends: Some((a, v)),
            ..e
        });
        let e2 = self.push_edge(Edge {
            arc: piece(x, pb),
            ends: Some((v, b)),
            ..e
        });
        self.edges[h.edge].alive = false;
        self.replace_in_neighbour(cell, h, [e1, e2]);
        let (first, second) = if h.forward {
            (HalfEdge { edge: e1, forward: true }, HalfEdge { edge: e2, forward: true })
        } else {
            (HalfEdge { edge: e2, forward: false }, HalfEdge { edge: e1, forward: false })
        };
        (v, first, second)
    }

    /// Replaces `cell` by its two closed daughters `cell ∩ g⁺` and `cell ∩ g⁻`.
    ///
    /// The tessellation is left untouched on error.
    pub fn split(&mut self, cell: CellId, g: &GreatCircle) -> Result<SplitOutcome, SplitError> {
        let c = self
            .cells
            .get(cell)
            .filter(|c| c.alive)
            .ok_or(SplitError::NoSuchCell(cell))?;
        let bnd = c.boundary.clone();
        let hemisphere = c.hemisphere;
        let u = g.normal();
        if bnd.len() == 1 {
            return self.split_loop(cell, g, hemisphere);
        }
        let k = bnd.len();
        let d: Vec<f64> = bnd
            .iter()
            .map(|&h| u.dot(self.vertices[self.half_edge_start(h).expect("open edge")].pos))
            .collect();
        if d.iter().any(|x| x.abs() <= SIGN_EPS) {
            return Err(SplitError::Degenerate {
                cell,
                reason: "circle passes through a vertex",
            });
        }
        let exit = (0..k).find(|&i| d[i] > 0.0 && d[(i + 1) % k] < 0.0);
        let entry = (0..k).find(|&i| d[i] < 0.0 && d[(i + 1) % k] > 0.0);
        let (Some(i), Some(j)) = (exit, entry) else {
            return Err(SplitError::Miss(cell));
        };
        let x1 = self.crossing(cell, bnd[i], u, true)?;
        let x2 = self.crossing(cell, bnd[j], u, false)?;
        let chord_arc = Arc::around(u, x1, x2).map_err(|_| SplitError::Degenerate {
            cell,
            reason: "chord too short",
        })?;

        let (v1, i_first, i_second) = self.subdivide(cell, bnd[i], x1);
        let (v2, j_first, j_second) = self.subdivide(cell, bnd[j], x2);
        let segment = self.carriers.len();
        self.carriers.push(Carrier {
            circle: *g,
            kind: CarrierKind::Segment {
                ends: [v1, v2],
                born: self.time,
                hemisphere,
            },
        });
        let chord = self.push_edge(Edge {
            arc: chord_arc,
            carrier: segment,
            ends: Some((v1, v2)),
            left: cell,
            right: cell,
            alive: true,
        });
        let run = |from: usize, to: usize| {
            let mut out = Vec::new();
            let mut m = (from + 1) % k;
            while m != to {
                out.push(bnd[m]);
                m = (m + 1) % k;
            }
            out
        };
        let mut plus = vec![j_second];
        plus.extend(run(j, i));
        plus.extend([i_first, HalfEdge { edge: chord, forward: true }]);
        let mut minus = vec![i_second];
        minus.extend(run(i, j));
        minus.extend([j_first, HalfEdge { edge: chord, forward: false }]);

        self.cells[cell].alive = false;
        let p = self.push_cell(plus, hemisphere);
        let m = self.push_cell(minus, hemisphere);
        Ok(SplitOutcome {
            daughters: [p, m],
            vertices: [v1, v2],
            segment,
            chord,
        })
    }

    /// First split of a hemisphere whose boundary is still the whole equator.
    fn split_loop(&mut self, cell: CellId, g: &GreatCircle, hemisphere: i8) -> Result<SplitOutcome, SplitError> {
        let h = self.cells[cell].boundary[0];
        let u = g.normal();
        let x1 = self.crossing(cell, h, u, true)?;
        let x2 = -x1;
        let e = self.edges[h.edge];
        let on_equator = e.carrier == EQUATOR;
        let v1 = self.push_vertex(x1, on_equator);
        let v2 = self.push_vertex(x2, on_equator);
        let n = e.arc.oriented_normal();
        let half = |from, to| Arc::around(n, from, to).expect("antipodes on carrier");
        let ea = self.push_edge(Edge {
            arc: half(x1, x2),
            ends: Some((v1, v2)),
            ..e
        });
        let eb = self.push_edge(Edge {
            arc: half(x2, x1),
            ends: Some((v2, v1)),
            ..e
        });
        self.edges[h.edge].alive = false;
        self.replace_in_neighbour(cell, h, [ea, eb]);
        let (to_v2, to_v1) = if h.forward {
            (HalfEdge { edge: ea, forward: true }, HalfEdge { edge: eb, forward: true })
        } else {
            (HalfEdge { edge: eb, forward: false }, HalfEdge { edge: ea, forward: false })
        };
        let segment = self.carriers.len();
        self.carriers.push(Carrier {
            circle: *g,
            kind: CarrierKind::Segment {
                ends: [v1, v2],
                born: self.time,
                hemisphere,
            },
        });
        let chord = self.push_edge(Edge {
            arc: Arc::around(u, x1, x2).expect("antipodes on circle"),
            carrier: segment,
            ends: Some((v1, v2)),
            left: cell,
            right: cell,
            alive: true,
        });
        self.cells[cell].alive = false;
        let p = self.push_cell(vec![to_v1, HalfEdge { edge: chord, forward: true }], hemisphere);
        let m = self.push_cell(vec![to_v2, HalfEdge { edge: chord, forward: false }], hemisphere);
        Ok(SplitOutcome {
            daughters: [p, m],
            vertices: [v1, v2],
            segment,
            chord,
        })
    }

    /// Assembles a tessellation from raw parts (comparison model).
    pub(crate) fn from_parts(
        vertices: Vec<Vertex>,
        carriers: Vec<Carrier>,
        edges: Vec<Edge>,
        boundaries: Vec<(Vec<HalfEdge>, i8)>,
        time: f64,
        model: Model,
    ) -> Self {
        let mut t = Tessellation {
            vertices,
            carriers,
            edges,
            cells: Vec::new(),
            time,
            model,
        };
        for (b, h) in boundaries {
            t.push_cell(b, h);
        }
        t
    }
}
