//! Exact means, Monte Carlo estimators and tests built on the simulators.

mod capacity;
mod estimate;
mod gof;
mod intersection;
mod oracle;

use thiserror::Error;

use crate::gc::GcError;
use crate::geometry::GeometryError;
use crate::process::ProcessError;

pub use capacity::{capacity_mc, capacity_single, capacity_two_caps, misses, CapacitySpec, TwoCapTerms};
pub use estimate::{
    adjacency_estimates, constant_adjacency_violations, correlation, estimate_means, gc_estimates, mean_se,
    ratio_estimate, typical_estimates, Estimate, EstimateReport,
};
pub use gof::{poisson_gof, GofResult, MIN_GOF_SAMPLE};
pub use intersection::{half_circle_mean, intersect_with_circle, CircleIntersection};
pub use oracle::{closed_form, gc_closed_form, GcOracleValues, GcTypicalValues, OracleValues, TypicalValues};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum StatsError {
    #[error("t must be ≥ 0 (got {0})")]
    InvalidTime(f64),
    #[error("typical-object means are undefined at t = 0")]
    UndefinedAtZero,
    #[error("need at least {need} replications, got {got}")]
    TooFewReplications { need: usize, got: usize },
    #[error("zero denominator for {0}")]
    ZeroDenominator(String),
    #[error("need at least {need} observations, got {got}")]
    InsufficientSample { need: usize, got: usize },
    #[error("Poisson mean must be positive and finite (got {0})")]
    InvalidMean(f64),
    #[error("fewer than two bins remain after pooling")]
    TooFewBins,
    #[error("at least one cap is required")]
    NoCaps,
    #[error("cap {0} meets the equator")]
    CapMeetsEquator(usize),
    #[error("caps lie in different hemispheres")]
    CapsInDifferentHemispheres,
    #[error("caps {0} and {1} overlap")]
    CapsOverlap(usize, usize),
    #[error("the two-cap formula needs exactly two caps, got {0}")]
    NotTwoCaps(usize),
    #[error("sections along the equator itself are not supported")]
    EquatorSection,
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Process(#[from] ProcessError),
    #[error(transparent)]
    GreatCircles(#[from] GcError),
}

impl StatsError {
    /// Whether a simulation gave up after exhausting a retry budget.
    pub fn is_budget(&self) -> bool {
        match self {
            StatsError::Process(e) => e.is_budget(),
            StatsError::GreatCircles(e) => matches!(e, GcError::DegeneracyBudget(_)),
            _ => false,
        }
    }
}
