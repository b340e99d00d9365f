//! Sample means, ratio-of-means estimators and their standard errors.

use std::f64::consts::PI;

use serde::Serialize;

use super::oracle::{GcOracleValues, OracleValues};
use super::StatsError;
use crate::geometry::z_score;
use crate::tessellation::{Class, RealizationSummary, CLASSES};

/// One estimated quantity, optionally compared with its exact value.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Estimate {
    pub quantity: String,
    pub estimate: f64,
    pub se: f64,
    pub oracle: Option<f64>,
    pub z: Option<f64>,
}

impl Estimate {
    pub fn new(quantity: impl Into<String>, estimate: f64, se: f64, oracle: Option<f64>) -> Self {
        Estimate {
            quantity: quantity.into(),
            estimate,
            se,
            z: oracle.map(|o| z_score(estimate, o, se)),
            oracle,
        }
    }

    /// `|estimate − oracle| ≤ k·se`; false when there is no oracle.
    pub fn within(&self, k: f64) -> bool {
        match self.oracle {
            Some(o) => (self.estimate - o).abs() <= k * self.se || (self.estimate - o).abs() <= 1e-12 * o.abs().max(1.0),
            None => false,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EstimateReport {
    pub t: f64,
    pub reps: usize,
    pub rows: Vec<Estimate>,
}

impl EstimateReport {
    pub fn get(&self, quantity: &str) -> Option<&Estimate> {
        self.rows.iter().find(|r| r.quantity == quantity)
    }
}

/// Mean and standard error of the mean.
pub fn mean_se(xs: &[f64]) -> Result<(f64, f64), StatsError> {
    let n = xs.len();
    if n < 2 {
        return Err(StatsError::TooFewReplications { need: 2, got: n });
    }
    let m = xs.iter().sum::<f64>() / n as f64;
    let var = xs.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / (n - 1) as f64;
    Ok((m, (var / n as f64).sqrt()))
}

/// `Σa/Σb` with its delta-method standard error.
pub fn ratio_estimate(a: &[f64], b: &[f64], what: &str) -> Result<(f64, f64), StatsError> {
    let n = a.len();
    if n < 2 {
        return Err(StatsError::TooFewReplications { need: 2, got: n });
    }
    assert_eq!(n, b.len());
    let ma = a.iter().sum::<f64>() / n as f64;
    let mb = b.iter().sum::<f64>() / n as f64;
    if mb == 0.0 {
        return Err(StatsError::ZeroDenominator(what.to_string()));
    }
    let r = ma / mb;
    let var = a
        .iter()
        .zip(b)
        .map(|(x, y)| {
            let d = (x - ma) - r * (y - mb);
            d * d
        })
        .sum::<f64>()
        / (n - 1) as f64;
    Ok((r, (var / n as f64).sqrt() / mb.abs()))
}

fn column(s: &[RealizationSummary], f: impl Fn(&RealizationSummary) -> f64) -> Vec<f64> {
    s.iter().map(f).collect()
}

/// Sample means of all counts and total lengths, including the equator
/// vertex and side counts.
pub fn estimate_means(s: &[RealizationSummary], oracle: Option<&OracleValues>) -> Result<EstimateReport, StatsError> {
    if s.is_empty() {
        return Err(StatsError::TooFewReplications { need: 2, got: 0 });
    }
    let mut rows = Vec::new();
    for c in CLASSES {
        let (m, se) = mean_se(&column(s, |r| r.count(c) as f64))?;
        rows.push(Estimate::new(format!("lambda_{}", c.symbol()), m, se, oracle.map(|o| o.intensity(c))));
    }
    for c in [Class::Edge, Class::Segment, Class::Side] {
        let (m, se) = mean_se(&column(s, |r| r.length(c).expect("length class")))?;
        rows.push(Estimate::new(format!("L_{}", c.symbol()), m, se, oracle.and_then(|o| o.total_length(c))));
    }
    let (m, se) = mean_se(&column(s, |r| r.equator_vertices as f64))?;
    rows.push(Estimate::new("equator_vertices", m, se, oracle.map(|o| o.equator_vertices)));
    let (m, se) = mean_se(&column(s, |r| r.equator_sides as f64))?;
    rows.push(Estimate::new("equator_sides", m, se, oracle.map(|o| o.equator_sides)));
    Ok(EstimateReport {
        t: s[0].t,
        reps: s.len(),
        rows,
    })
}

/// Ratio-of-means estimates of the typical cell area and perimeter and the
/// typical edge, side and segment lengths.
pub fn typical_estimates(s: &[RealizationSummary], oracle: Option<&OracleValues>) -> Result<EstimateReport, StatsError> {
    let typ = oracle.map(|o| o.typical()).transpose()?;
    let count = |c: Class| column(s, move |r| r.count(c) as f64);
    let length = |c: Class| column(s, move |r| r.length(c).expect("length class"));
    let area = column(s, |r| 4.0 * PI * r.total_area);
    let mut rows = Vec::new();
    let (v, se) = ratio_estimate(&area, &count(Class::Cell), "cells")?;
    rows.push(Estimate::new("a_Z", v, se, typ.map(|t| t.cell_area)));
    let (v, se) = ratio_estimate(&length(Class::Side), &count(Class::Cell), "cells")?;
    rows.push(Estimate::new("l_dZ", v, se, typ.map(|t| t.cell_perimeter)));
    let (v, se) = ratio_estimate(&length(Class::Edge), &count(Class::Edge), "edges")?;
    rows.push(Estimate::new("l_E", v, se, typ.map(|t| t.edge_length)));
    let (v, se) = ratio_estimate(&length(Class::Side), &count(Class::Side), "sides")?;
    rows.push(Estimate::new("l_S", v, se, typ.map(|t| t.side_length)));
    let (v, se) = ratio_estimate(&length(Class::Segment), &count(Class::Segment), "segments")?;
    rows.push(Estimate::new("l_M", v, se, typ.map(|t| t.segment_length)));
    Ok(EstimateReport {
        t: s.first().map_or(0.0, |r| r.t),
        reps: s.len(),
        rows,
    })
}

/// Ratio-of-means estimates `μ̂_XY = mean N_XY / mean |X|` for all 25 pairs;
/// pairs without a closed form carry no oracle.
pub fn adjacency_estimates(s: &[RealizationSummary], oracle: Option<&OracleValues>) -> Result<EstimateReport, StatsError> {
    let mut rows = Vec::new();
    for x in CLASSES {
        let den = column(s, |r| r.count(x) as f64);
        for y in CLASSES {
            let num = column(s, |r| r.incidences.get(x, y) as f64);
            let name = format!("mu_{}{}", x.symbol(), y.symbol());
            let (v, se) = ratio_estimate(&num, &den, &name)?;
            let exact = match oracle {
                Some(o) => o.adjacency(x, y)?,
                None => None,
            };
            rows.push(Estimate::new(name, v, se, exact));
        }
    }
    Ok(EstimateReport {
        t: s.first().map_or(0.0, |r| r.t),
        reps: s.len(),
        rows,
    })
}

/// Adjacency totals that are fixed multiples of a count in every
/// realization; returns a message per violation.
pub fn constant_adjacency_violations(r: &RealizationSummary) -> Vec<String> {
    let checks = [
        (Class::Edge, Class::Cell, 2),
        (Class::Vertex, Class::Cell, 3),
        (Class::Vertex, Class::Side, 5),
        (Class::Edge, Class::Side, 2),
        (Class::Edge, Class::Vertex, 2),
        (Class::Vertex, Class::Edge, 3),
    ];
    checks
        .iter()
        .filter(|&&(x, y, k)| r.incidences.get(x, y) != k * r.count(x))
        .map(|&(x, y, k)| {
            format!(
                "N_{}{} = {} but {k}·|{}| = {}",
                x.symbol(),
                y.symbol(),
                r.incidences.get(x, y),
                x.symbol(),
                k * r.count(x)
            )
        })
        .collect()
}

/// Sample means for the great-circle model: `L_E`, `L_S`, `λ_V`, `λ_E`, `λ_Z`
/// and the typical cell area and perimeter.
pub fn gc_estimates(s: &[RealizationSummary], oracle: Option<&GcOracleValues>) -> Result<EstimateReport, StatsError> {
    let mut rows = Vec::new();
    let (m, se) = mean_se(&column(s, |r| r.len_edges))?;
    rows.push(Estimate::new("L_E", m, se, oracle.map(|o| o.len_edges)));
    let (m, se) = mean_se(&column(s, |r| r.len_sides))?;
    rows.push(Estimate::new("L_S", m, se, oracle.map(|o| o.len_sides)));
    let (m, se) = mean_se(&column(s, |r| r.vertices as f64))?;
    rows.push(Estimate::new("lambda_V", m, se, oracle.map(|o| o.vertices)));
    let (m, se) = mean_se(&column(s, |r| r.edges as f64))?;
    rows.push(Estimate::new("lambda_E", m, se, oracle.map(|o| o.edges)));
    let (m, se) = mean_se(&column(s, |r| r.cells as f64))?;
    rows.push(Estimate::new("lambda_Z", m, se, oracle.map(|o| o.cells)));
    let typ = oracle.map(|o| o.typical()).transpose()?;
    let cells = column(s, |r| r.cells as f64);
    let (v, se) = ratio_estimate(&column(s, |r| r.len_edges), &column(s, |r| r.edges as f64), "edges")?;
    rows.push(Estimate::new("l_E", v, se, typ.map(|t| t.edge_length)));
    let (v, se) = ratio_estimate(&column(s, |r| r.len_sides), &cells, "cells")?;
    rows.push(Estimate::new("l_dZ", v, se, typ.map(|t| t.cell_perimeter)));
    let (v, se) = ratio_estimate(&column(s, |r| 4.0 * PI * r.total_area), &cells, "cells")?;
    rows.push(Estimate::new("a_Z", v, se, typ.map(|t| t.cell_area)));
    Ok(EstimateReport {
        t: s.first().map_or(0.0, |r| r.t),
        reps: s.len(),
        rows,
    })
}

/// Pearson correlation with the standard error `√((1 − r²)/(n − 2))`.
pub fn correlation(x: &[f64], y: &[f64]) -> Result<(f64, f64), StatsError> {
    let n = x.len();
    if n < 3 {
        return Err(StatsError::TooFewReplications { need: 3, got: n });
    }
    let mx = x.iter().sum::<f64>() / n as f64;
    let my = y.iter().sum::<f64>() / n as f64;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (a, b) in x.iter().zip(y) {
        sxy += (a - mx) * (b - my);
        sxx += (a - mx) * (a - mx);
        syy += (b - my) * (b - my);
    }
    if sxx == 0.0 || syy == 0.0 {
        return Err(StatsError::ZeroDenominator("variance".into()));
    }
    let r = sxy / (sxx * syy).sqrt();
    Ok((r, ((1.0 - r * r) / (n - 2) as f64).sqrt()))
}
