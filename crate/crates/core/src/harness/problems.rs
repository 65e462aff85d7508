//! Built-in problems: meshes, initial states, sources and exact solutions.

use std::sync::Arc;

use crate::basis::{l2_project, lgl_basis, over_integration_rule};
use crate::burgers::{Burgers, BurgersConfig};
use crate::error::Result;
use crate::euler::{isentropic_vortex_periodic, Euler, NCOMP};
use crate::harness::config::{side_count, ExperimentConfig, InitialState, ProblemId};
use crate::mesh::{build_interval_mesh, build_quad_mesh, BoundaryKind, DgSpace, FieldState, Grading, Rectangle};

/// Domain of the vortex problem.
pub const VORTEX_DOMAIN: Rectangle = Rectangle { x: (0.0, 10.0), y: (-5.0, 5.0) };

/// Manufactured steady solution `sin(x^2) x (x - 1)`.
pub fn mms_solution(x: f64) -> f64 {
    (x * x).sin() * x * (x - 1.0)
}

/// Source making [`mms_solution`] a steady state of `u_t + u u_x = kappa u_xx`.
pub fn mms_source(kappa: f64) -> impl Fn(f64) -> f64 + Send + Sync + Clone {
    move |x: f64| {
        let (s, c) = (x * x).sin_cos();
        let g = x * x - x;
        let u = s * g;
        let du = 2.0 * x * c * g + s * (2.0 * x - 1.0);
        let d2u = 2.0 * c * g - 4.0 * x * x * s * g + 4.0 * x * c * (2.0 * x - 1.0) + 2.0 * s;
        u * du - kappa * d2u
    }
}

pub fn smooth_initial(x: f64) -> f64 {
    (2.0 * std::f64::consts::PI * x).sin().powi(3) * (1.0 - x).max(0.0).powf(1.5)
}

pub fn shock_initial(x: f64) -> f64 {
    (2.0 * std::f64::consts::PI * x).sin()
}

/// A discretized problem instance.
#[derive(Debug, Clone)]
pub enum Discretization {
    Burgers(Burgers),
    Euler(Euler),
}

impl Discretization {
    pub fn space(&self) -> &DgSpace {
        match self {
            Discretization::Burgers(b) => b.space(),
            Discretization::Euler(e) => e.space(),
        }
    }

    pub fn components(&self) -> usize {
        match self {
            Discretization::Burgers(_) => 1,
            Discretization::Euler(_) => NCOMP,
        }
    }

    /// Characteristic speed for the advective Courant number.
    pub fn max_speed(&self, u: &[f64]) -> f64 {
        match self {
            Discretization::Burgers(b) => b.max_speed(u),
            Discretization::Euler(e) => e.max_speed(u),
        }
    }
}

pub fn burgers_config(cfg: &ExperimentConfig) -> BurgersConfig {
    let mut bc = BurgersConfig::new(cfg.kappa, cfg.flux).with_sigma(cfg.sigma).with_integration(cfg.integration);
    if cfg.problem == ProblemId::BurgersMms {
        bc = bc.with_source(Arc::new(mms_source(cfg.kappa)));
    }
    bc
}

/// Builds the discretization of `cfg.problem` with order `k` on `ne` elements.
pub fn build_problem(cfg: &ExperimentConfig, k: usize, ne: usize) -> Result<Discretization> {
    let basis = lgl_basis(k)?;
    if cfg.problem.is_euler() {
        let n = side_count(ne).ok_or_else(|| crate::Error::Config(format!("ne = {ne} is not a perfect square")))?;
        let mesh = build_quad_mesh(VORTEX_DOMAIN, n, n, &Grading::default(), BoundaryKind::Periodic)?;
        Ok(Discretization::Euler(Euler::new(DgSpace::new(mesh, basis), cfg.euler.gamma)?))
    } else {
        let mesh = build_interval_mesh(0.0, 1.0, ne, BoundaryKind::DirichletZero)?;
        Ok(Discretization::Burgers(Burgers::new(DgSpace::new(mesh, basis), burgers_config(cfg))?))
    }
}

/// The solution at time `t` where a closed form is known.
pub fn exact_solution(cfg: &ExperimentConfig, t: f64) -> Option<impl Fn([f64; 2], &mut [f64]) + '_> {
    if !cfg.problem.has_exact_solution() {
        return None;
    }
    let (lx, ly) = (VORTEX_DOMAIN.x.1 - VORTEX_DOMAIN.x.0, VORTEX_DOMAIN.y.1 - VORTEX_DOMAIN.y.0);
    Some(move |x: [f64; 2], out: &mut [f64]| match cfg.problem {
        ProblemId::EulerVortex => out.copy_from_slice(&isentropic_vortex_periodic(x, t, &cfg.euler, lx, ly).conserved()),
        _ => out[0] = mms_solution(x[0]),
    })
}

fn initial_condition(cfg: &ExperimentConfig) -> impl Fn([f64; 2], &mut [f64]) + '_ {
    let (lx, ly) = (VORTEX_DOMAIN.x.1 - VORTEX_DOMAIN.x.0, VORTEX_DOMAIN.y.1 - VORTEX_DOMAIN.y.0);
    move |x: [f64; 2], out: &mut [f64]| match cfg.problem {
        ProblemId::BurgersMms => out[0] = mms_solution(x[0]),
        ProblemId::BurgersSmooth => out[0] = smooth_initial(x[0]),
        ProblemId::BurgersShock => out[0] = shock_initial(x[0]),
        ProblemId::EulerVortex => out.copy_from_slice(&isentropic_vortex_periodic(x, 0.0, &cfg.euler, lx, ly).conserved()),
    }
}

/// Initial nodal state by interpolation or L2 projection, per `cfg.initial`.
pub fn initial_state(cfg: &ExperimentConfig, disc: &Discretization) -> Result<FieldState> {
    let space = disc.space();
    let m = disc.components();
    let ic = initial_condition(cfg);
    match cfg.initial {
        InitialState::Interpolate => Ok(space.interpolate(m, ic)),
        InitialState::Project => l2_project(space, m, &over_integration_rule(space.order())?, ic),
    }
}
