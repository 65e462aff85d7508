//! Configuration-driven convergence and stability experiments.
//!
//! [`run_experiment`] runs every `(ne, dt)` point of an [`ExperimentConfig`],
//! measures errors against the configured reference and returns (and
//! optionally writes) one [`ConvergenceRow`] per point.

pub mod config;
pub mod problems;
pub mod reference;
pub mod report;

use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::Instant;

pub use config::{ExperimentConfig, GenerateSpec, InitialState, ProblemId, ReferenceSpec, SweepKind};
pub use problems::{build_problem, initial_state, Discretization};
pub use reference::{generate_reference, load_reference, obtain_reference, read_reference, write_reference, StoredReference};
pub use report::{courant_numbers, l2_error, observed_order, read_csv, write_csv, ConvergenceRow, Reference, RunStatus};

use crate::error::{Error, Result};
use crate::integrators::{integrate, TimeLoopConfig, Trajectory};
use crate::mesh::FieldState;

/// Outcome of one sweep point.
#[derive(Debug, Clone)]
pub struct PointResult {
    pub ne: usize,
    pub dt: f64,
    pub row: ConvergenceRow,
    /// Final state (absent after a blow-up).
    pub state: Option<FieldState>,
    /// Largest `|u|` over the initial state and all accepted steps.
    pub peak_abs: f64,
    pub initial_max_abs: f64,
}

#[derive(Debug, Clone)]
pub struct ExperimentReport {
    pub components: Vec<String>,
    pub points: Vec<PointResult>,
}

impl ExperimentReport {
    pub fn rows(&self) -> Vec<ConvergenceRow> {
        self.points.iter().map(|p| p.row.clone()).collect()
    }

    /// Error of component `c` at every point.
    pub fn errors(&self, c: usize) -> Vec<f64> {
        self.points.iter().map(|p| p.row.errors[c]).collect()
    }

    /// Observed orders of component `c` (from the second row on; NaN where undefined).
    pub fn orders(&self, c: usize) -> Vec<f64> {
        self.points.iter().skip(1).map(|p| p.row.orders[c].unwrap_or(f64::NAN)).collect()
    }
}

/// Builds the problem at one point, integrates it and measures the error.
/// Without a reference and without a closed-form solution the errors are NaN.
pub fn run_point(cfg: &ExperimentConfig, ne: usize, dt: f64, reference: Option<&StoredReference>) -> Result<PointResult> {
    let disc = build_problem(cfg, cfg.k, ne)?;
    let u0 = initial_state(cfg, &disc)?;
    let space = disc.space();
    let speed = disc.max_speed(&u0.values);
    let kappa = if cfg.problem.is_euler() { 0.0 } else { cfg.kappa };
    let (cr_a, cr_d) = courant_numbers(speed, dt, space.mesh(), space.basis(), kappa);
    let mut tl = TimeLoopConfig::new(dt, cfg.t_final);
    tl.krylov = cfg.krylov;
    tl.relinearization = cfg.relinearization;
    let initial_max_abs = u0.max_abs();
    let mut peak = initial_max_abs;
    let mut iters = 0usize;
    let mut obs = |_: usize, _: f64, u: &[f64], it: usize| {
        peak = u.iter().fold(peak, |a, v| a.max(v.abs()));
        iters += it;
    };
    let start = Instant::now();
    let res: Result<Trajectory> = match &disc {
        Discretization::Burgers(b) => integrate(b, cfg.integrator, &u0.values, &tl, Some(&mut obs)),
        Discretization::Euler(e) => integrate(e, cfg.integrator, &u0.values, &tl, Some(&mut obs)),
    };
    let wallclock_s = start.elapsed().as_secs_f64();
    let m = disc.components();
    let scale = cfg.scale(ne, dt);
    let mut row = ConvergenceRow { scale, errors: vec![f64::NAN; m], orders: vec![None; m], cr_a, cr_d, krylov_iters: 0, wallclock_s, status: RunStatus::Ok };
    let state = match res {
        Ok(traj) => {
            row.krylov_iters = traj.stats.krylov.iterations;
            let state = FieldState::from_values(space, m, traj.state)?;
            row.errors = match reference {
                Some(r) => l2_error(space, &state, Reference::Discrete(&r.space, &r.state))?,
                None => match problems::exact_solution(cfg, cfg.t_final) {
                    Some(exact) => l2_error(space, &state, Reference::Exact(&exact))?,
                    None => vec![f64::NAN; m],
                },
            };
            Some(state)
        }
        Err(Error::BlowUp { .. }) => {
            row.krylov_iters = iters;
            row.status = RunStatus::BlowUp;
            None
        }
        Err(e) => return Err(e),
    };
    Ok(PointResult { ne, dt, row, state, peak_abs: peak, initial_max_abs })
}

/// The reference of `cfg`: `None` for exact solutions.
pub fn resolve_reference(cfg: &ExperimentConfig) -> Result<Option<StoredReference>> {
    match &cfg.reference {
        ReferenceSpec::Exact => Ok(None),
        ReferenceSpec::Stored(path) => load_reference(path, cfg, None).map(Some),
        ReferenceSpec::Generate(spec) => obtain_reference(cfg, spec).map(Some),
    }
}

/// Runs the whole sweep (points in parallel when `cfg.jobs > 1`), fills the
/// observed orders and writes the CSV to `cfg.out` if set.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ExperimentReport> {
    cfg.validate()?;
    let reference = resolve_reference(cfg)?;
    let points = cfg.points();
    let results: Mutex<Vec<Option<Result<PointResult>>>> = Mutex::new((0..points.len()).map(|_| None).collect());
    let next = AtomicUsize::new(0);
    let worker = || loop {
        let i = next.fetch_add(1, Ordering::SeqCst);
        if i >= points.len() {
            break;
        }
        let (ne, dt) = points[i];
        let r = run_point(cfg, ne, dt, reference.as_ref());
        results.lock().expect("result slot")[i] = Some(r);
    };
    std::thread::scope(|s| {
        for _ in 1..cfg.jobs.min(points.len()) {
            s.spawn(worker);
        }
        worker();
    });
    let mut out = Vec::with_capacity(points.len());
    for r in results.into_inner().expect("results") {
        out.push(r.expect("every point ran")?);
    }
    let mut rows: Vec<ConvergenceRow> = out.iter().map(|p| p.row.clone()).collect();
    report::fill_orders(&mut rows);
    for (p, r) in out.iter_mut().zip(rows) {
        p.row = r;
    }
    let components: Vec<String> = cfg.problem.components().iter().map(|s| s.to_string()).collect();
    if let Some(path) = &cfg.out {
        let refs: Vec<&str> = components.iter().map(String::as_str).collect();
        report::write_csv_file(path, &refs, &out.iter().map(|p| p.row.clone()).collect::<Vec<_>>())?;
    }
    Ok(ExperimentReport { components, points: out })
}
