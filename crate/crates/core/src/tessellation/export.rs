use std::io::{self, Write};

use serde::Serialize;

use super::{CarrierId, CellId, EdgeId, Model, Tessellation};

/// First line of every geometry file.
pub const GEOMETRY_HEADER: &str = "# sphsplit-geometry v1";

pub const GEOMETRY_COLUMNS: [&str; 13] =
    ["edge", "carrier", "nx", "ny", "nz", "ax", "ay", "az", "bx", "by", "bz", "left", "right"];

/// One live edge: its carrier circle's canonical normal, its endpoints in
/// edge orientation and the cells on either side.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EdgeRecord {
    pub edge: EdgeId,
    /// Carrier id; for the splitting model every carrier except the equator
    /// (id 0) is a maximal segment.
    pub carrier: CarrierId,
    pub normal: [f64; 3],
    /// `None` for the unsubdivided equator.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub start: Option<[f64; 3]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub end: Option<[f64; 3]>,
    pub left: CellId,
    pub right: CellId,
}

pub fn edge_records(t: &Tessellation) -> Vec<EdgeRecord> {
    let xyz = |v: usize| t.vertices()[v].pos.to_vec3();
    t.live_edges()
        .map(|i| {
            let e = &t.edges()[i];
            let n = t.carriers()[e.carrier].circle.normal();
            let (start, end) = match e.ends {
                Some((a, b)) => {
                    let (a, b) = (xyz(a), xyz(b));
                    (Some([a.x, a.y, a.z]), Some([b.x, b.y, b.z]))
                }
                None => (None, None),
            };
            EdgeRecord {
                edge: i,
                carrier: e.carrier,
                normal: [n.x(), n.y(), n.z()],
                start,
                end,
                left: e.left,
                right: e.right,
            }
        })
        .collect()
}

pub fn model_name(m: Model) -> &'static str {
    match m {
        Model::Splitting => "splitting",
        Model::GreatCircles => "great-circles",
    }
}

/// Writes the live edges as CSV with the columns in [`GEOMETRY_COLUMNS`],
/// after two `#` comment lines (format version, then model, time and counts).
/// The unsubdivided equator leaves its six endpoint fields empty. Numbers
/// use Rust's shortest round-trip formatting, which does not depend on the
/// locale.
pub fn write_geometry<W: Write>(t: &Tessellation, mut w: W) -> io::Result<()> {
    writeln!(w, "{GEOMETRY_HEADER}")?;
    writeln!(
        w,
        "# model={} t={} cells={} edges={} vertices={}",
        model_name(t.model()),
        t.time(),
        t.live_cells().count(),
        t.live_edges().count(),
        t.vertices().len()
    )?;
    let mut out = csv::Writer::from_writer(w);
    out.write_record(GEOMETRY_COLUMNS)?;
    let three = |p: Option<[f64; 3]>| match p {
        Some(p) => p.map(|x| x.to_string()),
        None => Default::default(),
    };
    for r in edge_records(t) {
        let mut row = vec![r.edge.to_string(), r.carrier.to_string()];
        row.extend(r.normal.map(|x| x.to_string()));
        row.extend(three(r.start));
        row.extend(three(r.end));
        row.push(r.left.to_string());
        row.push(r.right.to_string());
        out.write_record(&row)?;
    }
    out.flush()
}
