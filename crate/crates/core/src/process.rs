//! The splitting dynamic: every cell `p` waits an exponential time with rate
//! `τ([p])` and is then split by a great circle drawn from `τ(· ∩ [p])/τ([p])`.
//!
//! By superposition the process is simulated with one global clock: the
//! total rate is `Λ = Σ τ([p])`, the next jump comes after `Exp(Λ)` and picks
//! a cell with probability `τ([p])/Λ`.

use std::io::{self, Write};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::Exp1;
use rayon::prelude::*;
use thiserror::Error;

use crate::geometry::{hits, GreatCircle, SphericalPolygon, UnitVec};
use crate::tessellation::{CarrierId, CellId, SplitError, Tessellation, VertexId};

pub const DEFAULT_MAX_REJECTION_ITERS: u64 = 1_000_000;
pub const DEFAULT_MAX_DEGENERATE_RETRIES: u32 = 1_000;

/// The random generator behind every simulation.
pub type SimRng = ChaCha8Rng;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ProcessError {
    #[error("t must be ≥ 0 (got {0})")]
    InvalidTime(f64),
    #[error("max_rejection_iters must be ≥ 1")]
    InvalidRejectionCap,
    #[error(
        "no splitting circle accepted{} with τ = {tau:e} after {iters} proposals; \
         raise max_rejection_iters or lower t",
        .cell.map(|c| format!(" for cell {c}")).unwrap_or_default()
    )]
    RejectionBudget { cell: Option<CellId>, tau: f64, iters: u64 },
    #[error("cell {cell}: {retries} consecutive degenerate splits")]
    DegeneracyBudget { cell: CellId, retries: u32 },
    #[error(transparent)]
    Split(#[from] SplitError),
}

impl ProcessError {
    /// Whether the failure is an exhausted numerical budget rather than bad
    /// input.
    pub fn is_budget(&self) -> bool {
        matches!(self, ProcessError::RejectionBudget { .. } | ProcessError::DegeneracyBudget { .. })
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ProcessConfig {
    pub t_max: f64,
    pub seed: u64,
    pub max_rejection_iters: u64,
    pub max_degenerate_retries: u32,
    pub record_events: bool,
}

impl ProcessConfig {
    pub fn new(t_max: f64, seed: u64) -> Result<Self, ProcessError> {
        let c = ProcessConfig {
            t_max,
            seed,
            max_rejection_iters: DEFAULT_MAX_REJECTION_ITERS,
            max_degenerate_retries: DEFAULT_MAX_DEGENERATE_RETRIES,
            record_events: false,
        };
        c.check()?;
        Ok(c)
    }

    pub fn with_events(mut self, on: bool) -> Self {
        self.record_events = on;
        self
    }

    pub fn check(&self) -> Result<(), ProcessError> {
        if !(self.t_max >= 0.0 && self.t_max.is_finite()) {
            return Err(ProcessError::InvalidTime(self.t_max));
        }
        if self.max_rejection_iters == 0 {
            return Err(ProcessError::InvalidRejectionCap);
        }
        Ok(())
    }
}

/// One jump of the process.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Event {
    pub time: f64,
    pub cell: CellId,
    pub normal: UnitVec,
    pub daughters: [CellId; 2],
    pub vertices: [VertexId; 2],
    pub segment: CarrierId,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Run {
    pub tessellation: Tessellation,
    pub events: Vec<Event>,
    pub jumps: u64,
}

fn propose<R: Rng + ?Sized>(
    hit: impl Fn(&GreatCircle) -> bool,
    rng: &mut R,
    max_iters: u64,
) -> Result<(GreatCircle, u64), u64> {
    for k in 1..=max_iters {
        let g = GreatCircle::from_normal(UnitVec::random(rng));
        if hit(&g) {
            return Ok((g, k));
        }
    }
    Err(max_iters)
}

/// Draws a circle from `τ(· ∩ [p])/τ([p])` by proposing uniform normals until
/// one hits `p`; returns it with the number of proposals used.
pub fn sample_split_circle<R: Rng + ?Sized>(
    p: &SphericalPolygon,
    rng: &mut R,
    max_iters: u64,
) -> Result<(GreatCircle, u64), ProcessError> {
    propose(|g| hits(g, p), rng, max_iters).map_err(|iters| ProcessError::RejectionBudget {
        cell: None,
        tau: p.perimeter(),
        iters,
    })
}

fn split_cell<R: Rng + ?Sized>(
    t: &mut Tessellation,
    cell: CellId,
    rng: &mut R,
    config: &ProcessConfig,
) -> Result<Event, ProcessError> {
    for _ in 0..=config.max_degenerate_retries {
        let (g, _) = propose(|g| t.cell_hit_by(cell, g), rng, config.max_rejection_iters).map_err(|iters| {
            ProcessError::RejectionBudget {
                cell: Some(cell),
                tau: t.cells()[cell].perimeter(),
                iters,
            }
        })?;
        match t.split(cell, &g) {
            Ok(out) => {
                return Ok(Event {
                    time: t.time(),
                    cell,
                    normal: g.normal(),
                    daughters: out.daughters,
                    vertices: out.vertices,
                    segment: out.segment,
                })
            }
            Err(e) if e.is_retriable() => continue,
            Err(e) => return Err(e.into()),
        }
    }
    Err(ProcessError::DegeneracyBudget {
        cell,
        retries: config.max_degenerate_retries,
    })
}

/// Performs one jump unless it would land after `horizon`; in that case the
/// clock is frozen at `horizon` and `None` is returned.
fn step<R: Rng + ?Sized>(
    t: &mut Tessellation,
    rng: &mut R,
    config: &ProcessConfig,
    horizon: f64,
) -> Result<Option<Event>, ProcessError> {
    let cells: Vec<(CellId, f64)> = t.live_cells().map(|c| (c, t.cells()[c].perimeter())).collect();
    let total: f64 = cells.iter().map(|c| c.1).sum();
    let dt: f64 = rng.sample::<f64, _>(Exp1) / total;
    if t.time() + dt > horizon {
        t.set_time(horizon);
        return Ok(None);
    }
    t.set_time(t.time() + dt);
    let mut x = rng.random::<f64>() * total;
    let mut chosen = cells[cells.len() - 1].0;
    for &(c, tau) in &cells {
        if x < tau {
            chosen = c;
            break;
        }
        x -= tau;
    }
    split_cell(t, chosen, rng, config).map(Some)
}

/// One jump with no time horizon; returns the event and the waiting time.
pub fn advance<R: Rng + ?Sized>(
    t: &mut Tessellation,
    rng: &mut R,
    config: &ProcessConfig,
) -> Result<(Event, f64), ProcessError> {
    let before = t.time();
    let ev = step(t, rng, config, f64::INFINITY)?.expect("no horizon");
    Ok((ev, ev.time - before))
}

/// Continues `state` up to `config.t_max`, drawing from `rng`.
pub fn run_from<R: Rng + ?Sized>(
    mut state: Tessellation,
    config: &ProcessConfig,
    rng: &mut R,
) -> Result<Run, ProcessError> {
    config.check()?;
    let mut events = Vec::new();
    let mut jumps = 0;
    let horizon = config.t_max.max(state.time());
    while let Some(ev) = step(&mut state, rng, config, horizon)? {
        jumps += 1;
        if config.record_events {
            events.push(ev);
        }
    }
    Ok(Run {
        tessellation: state,
        events,
        jumps,
    })
}

/// The splitting tessellation at time `config.t_max`, seeded by `config.seed`.
pub fn run(config: &ProcessConfig) -> Result<Run, ProcessError> {
    let mut rng = SimRng::seed_from_u64(config.seed);
    run_from(Tessellation::initial(), config, &mut rng)
}

const GOLDEN_GAMMA: u64 = 0x9e37_79b9_7f4a_7c15;

/// Seed of replication `index` under master seed `master`: the
/// `(index + 1)`-th output of a SplitMix64 generator started at `master`.
pub fn replication_seed(master: u64, index: u64) -> u64 {
    let mut z = master.wrapping_add(GOLDEN_GAMMA.wrapping_mul(index.wrapping_add(1)));
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Runs `f` for replications `0..reps`, each with its own generator seeded by
/// [`replication_seed`], on `jobs` threads (all cores when `None`). Results
/// come back in replication order, so they do not depend on scheduling.
pub fn replicate_with<T, E, F>(master: u64, reps: usize, jobs: Option<usize>, f: F) -> Result<Vec<T>, E>
where
    T: Send,
    E: Send,
    F: Fn(usize, &mut SimRng) -> Result<T, E> + Sync + Send,
{
    let work = || {
        (0..reps)
            .into_par_iter()
            .map(|i| {
                let mut rng = SimRng::seed_from_u64(replication_seed(master, i as u64));
                f(i, &mut rng)
            })
            .collect::<Result<Vec<T>, E>>()
    };
    match jobs.map(|n| rayon::ThreadPoolBuilder::new().num_threads(n).build()) {
        Some(Ok(pool)) => pool.install(work),
        _ => work(),
    }
}

/// Runs `reps` independent realizations to `config.t_max` and returns the
/// final tessellation of each, in replication order.
pub fn replicate_runs(config: &ProcessConfig, reps: usize, jobs: Option<usize>) -> Result<Vec<Run>, ProcessError> {
    config.check()?;
    replicate_with(config.seed, reps, jobs, |_, rng| {
        run_from(Tessellation::initial(), config, rng)
    })
}

/// Summaries of `reps` independent realizations at `config.t_max`.
pub fn replicate(
    config: &ProcessConfig,
    reps: usize,
    jobs: Option<usize>,
) -> Result<Vec<crate::tessellation::RealizationSummary>, ProcessError> {
    config.check()?;
    replicate_with(config.seed, reps, jobs, |_, rng| {
        run_from(Tessellation::initial(), config, rng).map(|r| r.tessellation.summarize())
    })
}

/// First line of every event log.
pub const EVENT_HEADER: &str = "# sphsplit-events v1";

/// Writes one line per jump: `time cell nx ny nz plus minus v1 v2 segment`.
pub fn write_events<W: Write>(events: &[Event], mut w: W) -> io::Result<()> {
    writeln!(w, "{EVENT_HEADER}")?;
    writeln!(w, "# time cell nx ny nz plus minus v1 v2 segment")?;
    for e in events {
        let n = e.normal;
        writeln!(
            w,
            "{} {} {} {} {} {} {} {} {} {}",
            e.time,
            e.cell,
            n.x(),
            n.y(),
            n.z(),
            e.daughters[0],
            e.daughters[1],
            e.vertices[0],
            e.vertices[1],
            e.segment
        )?;
    }
    Ok(())
}
