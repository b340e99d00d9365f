use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use serde::Serialize;

use sphsplit::gc::{replicate_gc, run_gc, GcError};
use sphsplit::geometry::{GreatCircle, SphericalCap, UnitVec};
use sphsplit::process::{
    replicate, replicate_with, run, run_from, ProcessConfig, ProcessError, SimRng, DEFAULT_MAX_DEGENERATE_RETRIES,
    DEFAULT_MAX_REJECTION_ITERS,
};
use sphsplit::report::{Format, Manifest, Report, Section};
use sphsplit::selftest::{self, SelftestConfig, DEFAULT_SEED};
use sphsplit::stats::{
    adjacency_estimates, capacity_mc, capacity_single, capacity_two_caps, closed_form, correlation, estimate_means,
    gc_closed_form, gc_estimates, half_circle_mean, intersect_with_circle, mean_se, poisson_gof, typical_estimates,
    CapacitySpec, Estimate, StatsError,
};
use sphsplit::tessellation::{edge_records, write_geometry, EdgeRecord, Tessellation, CLASSES, EQUATOR};

#[derive(Parser)]
#[command(name = "sphsplit", version, about = "Splitting tessellations of the sphere: simulation and checks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Common {
    /// Master seed; every random draw derives from it.
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Output file (standard output when omitted).
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = OutFormat::Csv)]
    format: OutFormat,
    /// Worker threads (all cores when omitted); results do not depend on it.
    #[arg(long)]
    jobs: Option<usize>,
}

#[derive(ValueEnum, Clone, Copy)]
enum OutFormat {
    Csv,
    Structured,
}

impl From<OutFormat> for Format {
    fn from(f: OutFormat) -> Format {
        match f {
            OutFormat::Csv => Format::Csv,
            OutFormat::Structured => Format::Structured,
        }
    }
}

#[derive(ValueEnum, Clone, Copy, PartialEq)]
enum ModelArg {
    Splitting,
    Gc,
}

#[derive(Subcommand)]
enum Command {
    /// Means, typical-object means and adjacencies of the splitting model.
    Simulate {
        #[arg(long = "t", allow_negative_numbers = true)]
        t: f64,
        #[arg(long, default_value_t = 10_000)]
        reps: usize,
        /// Proposals per split before giving up on a cell.
        #[arg(long, default_value_t = DEFAULT_MAX_REJECTION_ITERS)]
        max_rejection_iters: u64,
        /// Consecutive degenerate circles per split before giving up.
        #[arg(long, default_value_t = DEFAULT_MAX_DEGENERATE_RETRIES)]
        max_degenerate_retries: u32,
        #[command(flatten)]
        common: Common,
    },
    /// Closed-form means at time t.
    Oracle {
        #[arg(long = "t", allow_negative_numbers = true)]
        t: f64,
        #[command(flatten)]
        common: Common,
    },
    /// Means of the Poisson great-circle model with intensity t.
    Gc {
        #[arg(long = "t", allow_negative_numbers = true)]
        t: f64,
        #[arg(long, default_value_t = 10_000)]
        reps: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Probability that the tessellation avoids a union of caps.
    Capacity {
        #[arg(long = "t", allow_negative_numbers = true)]
        t: f64,
        #[arg(long, default_value_t = 100_000)]
        reps: usize,
        /// A cap as `colatitude,longitude,radius` in radians; repeat for
        /// several caps.
        #[arg(long = "cap", required = true, value_parser = parse_triple, allow_negative_numbers = true)]
        caps: Vec<[f64; 3]>,
        #[command(flatten)]
        common: Common,
    },
    /// Points where the tessellation crosses a fixed great circle.
    Intersect {
        #[arg(long = "t", allow_negative_numbers = true)]
        t: f64,
        #[arg(long, default_value_t = 10_000)]
        reps: usize,
        /// Normal `x,y,z` of the great circle.
        #[arg(long, default_value = "0,1,0", value_parser = parse_triple, allow_negative_numbers = true)]
        normal: [f64; 3],
        #[command(flatten)]
        common: Common,
    },
    /// Edges of one realization.
    Export {
        #[arg(long = "t", allow_negative_numbers = true)]
        t: f64,
        #[arg(long, value_enum, default_value_t = ModelArg::Splitting)]
        model: ModelArg,
        #[command(flatten)]
        common: Common,
    },
    /// The full statistical self-test.
    Selftest {
        #[arg(long, default_value_t = 10_000)]
        reps: usize,
        #[arg(long, default_value_t = 100_000)]
        capacity_reps: usize,
        #[arg(long, default_value_t = 100_000)]
        crofton_samples: usize,
        #[command(flatten)]
        common: Common,
    },
}

fn parse_triple(s: &str) -> Result<[f64; 3], String> {
    let parts: Vec<&str> = s.split(',').collect();
    let [a, b, c] = parts.as_slice() else {
        return Err(format!("expected three comma-separated numbers, got {s:?}"));
    };
    let num = |x: &str| x.trim().parse::<f64>().map_err(|e| format!("{x:?}: {e}"));
    Ok([num(a)?, num(b)?, num(c)?])
}

enum Status {
    Ok,
    SelftestFailed,
}

fn open_output(out: &Option<PathBuf>) -> Result<Box<dyn Write>> {
    Ok(match out {
        Some(p) => Box::new(BufWriter::new(
            File::create(p).with_context(|| format!("cannot write {}", p.display()))?,
        )),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn emit(mut report: Report, common: &Common, start: Instant) -> Result<()> {
    report.manifest.set_duration(start.elapsed());
    let mut w = open_output(&common.out)?;
    report.write(common.format.into(), &mut w)?;
    w.flush()?;
    Ok(())
}

fn manifest(command: &str, common: &Common) -> Manifest {
    Manifest::new(command, common.seed)
}

fn simulate(t: f64, reps: usize, budget: (u64, u32), common: &Common) -> Result<Report> {
    let mut config = ProcessConfig::new(t, common.seed)?;
    (config.max_rejection_iters, config.max_degenerate_retries) = budget;
    let summaries = replicate(&config, reps, common.jobs)?;
    let oracle = closed_form(t)?;
    let mut r = Report::new(
        manifest("simulate", common)
            .param("t", t)
            .param("reps", reps)
            .param("max_rejection_iters", budget.0)
            .param("max_degenerate_retries", budget.1),
    );
    r.push(Section::new("means").rows(estimate_means(&summaries, Some(&oracle))?.rows));
    if t > 0.0 {
        r.push(Section::new("typical").rows(typical_estimates(&summaries, Some(&oracle))?.rows));
        r.push(Section::new("adjacency").rows(adjacency_estimates(&summaries, Some(&oracle))?.rows));
    }
    Ok(r)
}

fn oracle(t: f64, common: &Common) -> Result<Report> {
    let o = closed_form(t)?;
    let mut r = Report::new(manifest("oracle", common).param("t", t));
    let mut means = Section::new("means");
    for c in CLASSES {
        means = means.value(format!("lambda_{}", c.symbol()), o.intensity(c));
    }
    means = means
        .value("L_E", o.len_edges)
        .value("L_M", o.len_segments)
        .value("L_S", o.len_sides)
        .value("equator_vertices", o.equator_vertices)
        .value("equator_sides", o.equator_sides);
    r.push(means);
    if t > 0.0 {
        let ty = o.typical()?;
        r.push(
            Section::new("typical")
                .value("a_Z", ty.cell_area)
                .value("l_dZ", ty.cell_perimeter)
                .value("l_E", ty.edge_length)
                .value("l_S", ty.side_length)
                .value("l_M", ty.segment_length),
        );
        let mut adj = Section::new("adjacency");
        let mut unknown = Vec::new();
        for x in CLASSES {
            for y in CLASSES {
                let name = format!("mu_{}{}", x.symbol(), y.symbol());
                match o.adjacency(x, y)? {
                    Some(v) => adj = adj.value(name, v),
                    None => unknown.push(name),
                }
            }
        }
        adj.notes.push(format!("no closed form: {}", unknown.join(" ")));
        r.push(adj);
    }
    let g = gc_closed_form(t)?;
    let mut gc = Section::new("great_circles")
        .value("L_E", g.len_edges)
        .value("L_S", g.len_sides)
        .value("lambda_V", g.vertices)
        .value("lambda_E", g.edges)
        .value("lambda_Z", g.cells);
    if t > 0.0 {
        let ty = g.typical()?;
        gc = gc
            .value("l_E", ty.edge_length)
            .value("l_dZ", ty.cell_perimeter)
            .value("a_Z", ty.cell_area);
    }
    r.push(gc);
    Ok(r)
}

fn great_circles(t: f64, reps: usize, common: &Common) -> Result<Report> {
    let summaries = replicate_gc(t, common.seed, reps, common.jobs)?;
    let o = gc_closed_form(t)?;
    let mut r = Report::new(manifest("gc", common).param("t", t).param("reps", reps));
    r.push(Section::new("means").rows(gc_estimates(&summaries, Some(&o))?.rows));
    Ok(r)
}

fn capacity(t: f64, reps: usize, caps: &[[f64; 3]], common: &Common) -> Result<Report> {
    let mut m = manifest("capacity", common).param("t", t).param("reps", reps);
    for (i, [colat, lon, radius]) in caps.iter().enumerate() {
        m = m.param(format!("cap{i}"), format!("{colat},{lon},{radius}"));
    }
    let caps = caps
        .iter()
        .map(|&[colat, lon, radius]| SphericalCap::new(UnitVec::from_spherical(colat, lon), radius))
        .collect::<Result<Vec<_>, _>>()?;
    let spec = CapacitySpec::new(caps.clone())?;
    let e = capacity_mc(&spec, t, reps, common.seed, common.jobs)?;
    let mut s = Section::new("capacity");
    let exact = match caps.as_slice() {
        [c] => {
            s = s.value("tau", c.hitting_measure());
            Some(capacity_single(c, t))
        }
        [_, _] => {
            let terms = capacity_two_caps(&spec, t)?;
            s = s
                .value("tau_1", terms.tau_1)
                .value("tau_2", terms.tau_2)
                .value("tau_separating", terms.tau_separating)
                .value("tau_hull", terms.tau_hull);
            Some(terms.value)
        }
        _ => {
            s.notes.push("no closed form for more than two caps".to_string());
            None
        }
    };
    let mut r = Report::new(m);
    r.push(s.rows([Estimate::new("avoid", e.mean, e.se, exact)]));
    Ok(r)
}

fn intersect(t: f64, reps: usize, normal: [f64; 3], common: &Common) -> Result<Report> {
    let [x, y, z] = normal;
    let g = GreatCircle::from_normal(UnitVec::new(x, y, z)?);
    let config = ProcessConfig::new(t, common.seed)?;
    let per_rep = replicate_with(common.seed, reps, common.jobs, |_, rng| -> Result<_, StatsError> {
        let run = run_from(Tessellation::initial(), &config, rng)?;
        let tess = &run.tessellation;
        let x = intersect_with_circle(tess, &g)?;
        let pair = x.equatorial.iter().all(|&q| {
            tess.live_edges()
                .any(|e| tess.edges()[e].carrier == EQUATOR && tess.edges()[e].arc.covers(q))
        });
        Ok((x.upper.len() as u64, x.lower.len() as u64, pair))
    })?;
    let upper: Vec<u64> = per_rep.iter().map(|r| r.0).collect();
    let lower: Vec<u64> = per_rep.iter().map(|r| r.1).collect();
    let as_f64 = |v: &[u64]| v.iter().map(|&c| c as f64).collect::<Vec<_>>();
    let mean = half_circle_mean(t);
    let mut s = Section::new("section");
    let mut rows = Vec::new();
    for (name, counts) in [("upper", &upper), ("lower", &lower)] {
        let (m, se) = mean_se(&as_f64(counts))?;
        rows.push(Estimate::new(format!("{name}_count"), m, se, Some(mean)));
        if t > 0.0 {
            let gof = poisson_gof(counts, mean)?;
            s = s
                .value(format!("{name}_chi2"), gof.statistic)
                .value(format!("{name}_df"), gof.df as f64)
                .value(format!("{name}_p"), gof.p_value);
        }
    }
    if t > 0.0 {
        let (c, se) = correlation(&as_f64(&upper), &as_f64(&lower))?;
        rows.push(Estimate::new("correlation", c, se, Some(0.0)));
    }
    let present = per_rep.iter().filter(|r| r.2).count() as f64 / per_rep.len().max(1) as f64;
    let mut r = Report::new(
        manifest("intersect", common)
            .param("t", t)
            .param("reps", reps)
            .param("normal", format!("{} {} {}", g.normal().x(), g.normal().y(), g.normal().z())),
    );
    r.push(s.value("equator_pair_present", present).rows(rows));
    Ok(r)
}

#[derive(Serialize)]
struct GeometryDoc<'a> {
    manifest: &'a Manifest,
    edges: Vec<EdgeRecord>,
}

fn export(t: f64, model: ModelArg, common: &Common, start: Instant) -> Result<()> {
    let tess = match model {
        ModelArg::Splitting => run(&ProcessConfig::new(t, common.seed)?)?.tessellation,
        ModelArg::Gc => run_gc(t, &mut SimRng::seed_from_u64(common.seed))?.tessellation,
    };
    let name = match model {
        ModelArg::Splitting => "splitting",
        ModelArg::Gc => "gc",
    };
    let mut m = manifest("export", common).param("t", t).param("model", name);
    m.set_duration(start.elapsed());
    let mut w = open_output(&common.out)?;
    match common.format {
        OutFormat::Csv => {
            m.write_comments(&mut w)?;
            write_geometry(&tess, &mut w)?;
        }
        OutFormat::Structured => {
            let doc = GeometryDoc {
                manifest: &m,
                edges: edge_records(&tess),
            };
            w.write_all(toml::to_string(&doc)?.as_bytes())?;
        }
    }
    w.flush()?;
    Ok(())
}

fn run_selftest(cfg: SelftestConfig, common: &Common, start: Instant) -> Result<Status> {
    let outcomes = selftest::run_all(&cfg)?;
    let mut failed = false;
    for o in &outcomes {
        eprintln!("criterion {:>2}: {}  {}", o.id, if o.passed { "pass" } else { "FAIL" }, o.title);
        for f in &o.failures {
            eprintln!("    {f}");
        }
        failed |= !o.passed;
    }
    emit(selftest::report(&cfg, &outcomes), common, start)?;
    Ok(if failed { Status::SelftestFailed } else { Status::Ok })
}

fn dispatch(cli: Cli) -> Result<Status> {
    let start = Instant::now();
    match cli.command {
        Command::Simulate {
            t,
            reps,
            max_rejection_iters,
            max_degenerate_retries,
            common,
        } => emit(simulate(t, reps, (max_rejection_iters, max_degenerate_retries), &common)?, &common, start)?,
        Command::Oracle { t, common } => emit(oracle(t, &common)?, &common, start)?,
        Command::Gc { t, reps, common } => emit(great_circles(t, reps, &common)?, &common, start)?,
        Command::Capacity { t, reps, caps, common } => emit(capacity(t, reps, &caps, &common)?, &common, start)?,
        Command::Intersect { t, reps, normal, common } => emit(intersect(t, reps, normal, &common)?, &common, start)?,
        Command::Export { t, model, common } => export(t, model, &common, start)?,
        Command::Selftest {
            reps,
            capacity_reps,
            crofton_samples,
            common,
        } => {
            if reps < 100 {
                bail!("selftest needs --reps ≥ 100");
            }
            let cfg = SelftestConfig {
                seed: common.seed,
                jobs: common.jobs,
                reps,
                capacity_reps,
                crofton_samples,
            };
            return run_selftest(cfg, &common, start);
        }
    }
    Ok(Status::Ok)
}

/// 3 for an exhausted retry budget or a failed split, 2 for anything else
/// (bad arguments, invalid ranges, unwritable output).
fn exit_code(e: &anyhow::Error) -> u8 {
    for cause in e.chain() {
        let internal = if let Some(s) = cause.downcast_ref::<StatsError>() {
            s.is_budget() || matches!(s, StatsError::Process(ProcessError::Split(_)))
        } else if let Some(p) = cause.downcast_ref::<ProcessError>() {
            p.is_budget() || matches!(p, ProcessError::Split(_))
        } else if let Some(g) = cause.downcast_ref::<GcError>() {
            matches!(g, GcError::DegeneracyBudget(_))
        } else {
            false
        };
        if internal {
            return 3;
        }
    }
    2
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(Status::Ok) => ExitCode::SUCCESS,
        Ok(Status::SelftestFailed) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
