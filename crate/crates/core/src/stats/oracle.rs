//! Closed-form means of the splitting tessellation and of the Poisson
//! great-circle tessellation at time `t`.

use std::f64::consts::PI;

use serde::Serialize;

use super::StatsError;
use crate::tessellation::Class;

/// Exact means for the splitting tessellation at time `t`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct OracleValues {
    pub t: f64,
    /// Mean total edge length `L_E` (radians).
    pub len_edges: f64,
    pub len_segments: f64,
    pub len_sides: f64,
    /// Mean counts `λ_X`, indexed by class.
    pub intensities: [f64; 5],
    pub equator_vertices: f64,
    pub equator_sides: f64,
}

/// Means of the typical cell, edge, side and maximal segment.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct TypicalValues {
    /// `a_Z`, in steradians.
    pub cell_area: f64,
    /// `ℓ_∂Z`.
    pub cell_perimeter: f64,
    pub edge_length: f64,
    pub side_length: f64,
    pub segment_length: f64,
}

fn check_time(t: f64) -> Result<(), StatsError> {
    if t >= 0.0 && t.is_finite() {
        Ok(())
    } else {
        Err(StatsError::InvalidTime(t))
    }
}

fn check_positive(t: f64) -> Result<(), StatsError> {
    check_time(t)?;
    if t == 0.0 {
        return Err(StatsError::UndefinedAtZero);
    }
    Ok(())
}

/// Totals and intensities of the splitting tessellation; defined for `t ≥ 0`.
pub fn closed_form(t: f64) -> Result<OracleValues, StatsError> {
    check_time(t)?;
    let s = t * t + 2.0 * t;
    Ok(OracleValues {
        t,
        len_edges: 2.0 * PI * (1.0 + t - (-2.0 * t).exp()),
        len_segments: 2.0 * PI * t,
        len_sides: 4.0 * PI * (t + 1.0),
        intensities: [s + 2.0, 3.0 * s, 2.0 * s, 2.0 * (2.0 * s + (-t).exp()), s],
        equator_vertices: 4.0 * t,
        equator_sides: 4.0 * t + 2.0 * (-t).exp(),
    })
}

impl OracleValues {
    pub fn intensity(&self, c: Class) -> f64 {
        self.intensities[c.index()]
    }

    pub fn total_length(&self, c: Class) -> Option<f64> {
        match c {
            Class::Edge => Some(self.len_edges),
            Class::Segment => Some(self.len_segments),
            Class::Side => Some(self.len_sides),
            Class::Cell | Class::Vertex => None,
        }
    }

    /// Typical-object means; they are ratios `L_X/λ_X` and need `t > 0`.
    pub fn typical(&self) -> Result<TypicalValues, StatsError> {
        check_positive(self.t)?;
        let l = |c: Class| self.total_length(c).expect("length class") / self.intensity(c);
        Ok(TypicalValues {
            cell_area: 4.0 * PI / self.intensity(Class::Cell),
            cell_perimeter: self.len_sides / self.intensity(Class::Cell),
            edge_length: l(Class::Edge),
            side_length: l(Class::Side),
            segment_length: l(Class::Segment),
        })
    }

    /// Mean number `μ_XY` of objects of class `Y` adjacent to the typical
    /// object of class `X`; `None` for the five pairs with no known closed
    /// form (ZS, SZ, ZM, MZ, SS).
    pub fn adjacency(&self, x: Class, y: Class) -> Result<Option<f64>, StatsError> {
        check_positive(self.t)?;
        let t = self.t;
        let s = t * t + 2.0 * t;
        let d = 2.0 * s + (-t).exp();
        use Class::*;
        let v = match (x, y) {
            (Cell, Cell) | (Edge, Edge) | (Vertex, Vertex) | (Segment, Segment) => 1.0,
            (Cell, Edge) | (Cell, Vertex) => 6.0 * s / (s + 2.0),
            (Edge, Cell) => 2.0,
            (Edge, Vertex) => 2.0,
            (Edge, Side) => 2.0,
            (Edge, Segment) => (3.0 * t + 2.0) / (3.0 * (t + 2.0)),
            (Vertex, Cell) | (Vertex, Edge) => 3.0,
            (Vertex, Side) => 5.0,
            (Vertex, Segment) => 2.0 * (t + 1.0) / (t + 2.0),
            (Side, Edge) => 3.0 * s / d,
            (Side, Vertex) => 5.0 * s / d,
            (Side, Segment) => (2.0 * t * t + 2.0 * t) / d,
            (Segment, Edge) => (3.0 * t + 2.0) / (t + 2.0),
            (Segment, Vertex) | (Segment, Side) => 4.0 * (t + 1.0) / (t + 2.0),
            (Cell, Side) | (Side, Cell) | (Cell, Segment) | (Segment, Cell) | (Side, Side) => return Ok(None),
        };
        Ok(Some(v))
    }
}

/// Exact means for the Poisson great-circle tessellation with intensity `t`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct GcOracleValues {
    pub t: f64,
    pub len_edges: f64,
    pub len_sides: f64,
    pub vertices: f64,
    pub edges: f64,
    pub cells: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct GcTypicalValues {
    pub edge_length: f64,
    pub cell_perimeter: f64,
    pub cell_area: f64,
}

pub fn gc_closed_form(t: f64) -> Result<GcOracleValues, StatsError> {
    check_time(t)?;
    let s = t * t + 2.0 * t;
    Ok(GcOracleValues {
        t,
        len_edges: 2.0 * PI * (1.0 + t - (-t).exp()),
        len_sides: 4.0 * PI * (t + 1.0),
        vertices: s,
        edges: 2.0 * s,
        cells: s + 2.0,
    })
}

impl GcOracleValues {
    pub fn typical(&self) -> Result<GcTypicalValues, StatsError> {
        check_positive(self.t)?;
        Ok(GcTypicalValues {
            edge_length: self.len_edges / self.edges,
            cell_perimeter: self.len_sides / self.cells,
            cell_area: 4.0 * PI / self.cells,
        })
    }
}
