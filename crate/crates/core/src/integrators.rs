//! Exponential and explicit Runge-Kutta time steppers over split operators.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::operator::{SemiDiscreteSystem, SplitOperator};
use crate::phi::{phi_combination, KrylovSettings, KrylovStats, LinearOperator, PhiCombinationProblem};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum IntegratorKind {
    ExpEuler,
    Epi2,
    Exprb32,
    Exprb42,
    Rk2,
    Rk3,
    Rk4,
}

impl IntegratorKind {
    pub const ALL: [IntegratorKind; 7] = [
        IntegratorKind::ExpEuler,
        IntegratorKind::Epi2,
        IntegratorKind::Exprb32,
        IntegratorKind::Exprb42,
        IntegratorKind::Rk2,
        IntegratorKind::Rk3,
        IntegratorKind::Rk4,
    ];

    pub fn name(self) -> &'static str {
        match self {
            IntegratorKind::ExpEuler => "exp_euler",
            IntegratorKind::Epi2 => "epi2",
            IntegratorKind::Exprb32 => "exprb32",
            IntegratorKind::Exprb42 => "exprb42",
            IntegratorKind::Rk2 => "rk2",
            IntegratorKind::Rk3 => "rk3",
            IntegratorKind::Rk4 => "rk4",
        }
    }

    pub fn is_exponential(self) -> bool {
        matches!(self, IntegratorKind::ExpEuler | IntegratorKind::Epi2 | IntegratorKind::Exprb32 | IntegratorKind::Exprb42)
    }

    /// Classical order on smooth problems.
    pub fn order(self) -> usize {
        match self {
            IntegratorKind::ExpEuler => 1,
            IntegratorKind::Epi2 | IntegratorKind::Rk2 => 2,
            IntegratorKind::Exprb32 | IntegratorKind::Rk3 => 3,
            IntegratorKind::Exprb42 | IntegratorKind::Rk4 => 4,
        }
    }

    /// Exponential Euler keeps `L` fixed at the initial state; with a fresh
    /// `L = R'(u_n)` every step it would coincide with EPI2.
    pub fn default_relinearization(self) -> Relinearization {
        match self {
            IntegratorKind::ExpEuler => Relinearization::Frozen,
            _ => Relinearization::EveryStep,
        }
    }
}

impl fmt::Display for IntegratorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for IntegratorKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key = s.trim().to_ascii_lowercase().replace('-', "_");
        IntegratorKind::ALL.into_iter().find(|k| k.name() == key).ok_or_else(|| Error::Config(format!("unknown integrator '{s}'")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relinearization {
    /// Reference state `u_n` at the start of every step.
    EveryStep,
    /// Reference state `u_0` for the whole run.
    Frozen,
}

fn combination<O: LinearOperator>(op: &O, b: Vec<&[f64]>, dt: f64, settings: KrylovSettings) -> Result<(Vec<f64>, KrylovStats)> {
    phi_combination(&PhiCombinationProblem { op, b, dt, settings })
}

fn axpy(a: f64, x: &[f64], y: &mut [f64]) {
    y.iter_mut().zip(x).for_each(|(y, x)| *y += a * x);
}

/// `e^{dt L} u + dt phi_1(dt L) N(u)`.
pub fn step_exp_euler<S: SplitOperator>(op: &S, u: &[f64], dt: f64, settings: KrylovSettings) -> Result<(Vec<f64>, KrylovStats)> {
    let mut n = vec![0.0; u.len()];
    op.apply_nonlinear(u, &mut n);
    combination(op, vec![u, &n], dt, settings)
}

/// `u + dt phi_1(dt L) R(u)`.
pub fn step_epi2<S: SplitOperator>(op: &S, u: &[f64], dt: f64, settings: KrylovSettings) -> Result<(Vec<f64>, KrylovStats)> {
    let mut r = vec![0.0; u.len()];
    op.apply_full(u, &mut r);
    let zero = vec![0.0; u.len()];
    let (mut w, stats) = combination(op, vec![&zero, &r], dt, settings)?;
    axpy(1.0, u, &mut w);
    Ok((w, stats))
}

fn nonlinear_difference<S: SplitOperator>(op: &S, stage: &[f64], u: &[f64], scale: f64) -> Vec<f64> {
    let mut d = vec![0.0; u.len()];
    let mut nu = vec![0.0; u.len()];
    op.apply_nonlinear(stage, &mut d);
    op.apply_nonlinear(u, &mut nu);
    d.iter_mut().zip(&nu).for_each(|(a, b)| *a = (*a - b) * scale);
    d
}

/// Third-order two-stage exponential Rosenbrock method.
pub fn step_exprb32<S: SplitOperator>(op: &S, u: &[f64], dt: f64, settings: KrylovSettings) -> Result<(Vec<f64>, KrylovStats)> {
    let (stage, mut stats) = step_epi2(op, u, dt, settings)?;
    // 2 dt phi_3(dt L) D = dt^3 phi_3(dt L) (2 D / dt^2)
    let b3 = nonlinear_difference(op, &stage, u, 2.0 / (dt * dt));
    let zero = vec![0.0; u.len()];
    let (w, s2) = combination(op, vec![&zero, &zero, &zero, &b3], dt, settings)?;
    stats += s2;
    let mut out = stage;
    axpy(1.0, &w, &mut out);
    Ok((out, stats))
}

/// Fourth-order two-stage exponential Rosenbrock method (internal stage at `3 dt / 4`).
pub fn step_exprb42<S: SplitOperator>(op: &S, u: &[f64], dt: f64, settings: KrylovSettings) -> Result<(Vec<f64>, KrylovStats)> {
    let mut r = vec![0.0; u.len()];
    op.apply_full(u, &mut r);
    let zero = vec![0.0; u.len()];
    let (mut stage, mut stats) = combination(op, vec![&zero, &r], 0.75 * dt, settings)?;
    axpy(1.0, u, &mut stage);
    let b3 = nonlinear_difference(op, &stage, u, 32.0 / 9.0 / (dt * dt));
    let (mut w, s2) = combination(op, vec![&zero, &r, &zero, &b3], dt, settings)?;
    stats += s2;
    axpy(1.0, u, &mut w);
    Ok((w, stats))
}

/// Heun (`Rk2`), Shu-Osher SSP (`Rk3`) or classical (`Rk4`) step of `u' = rhs(u)`.
pub fn step_rk<F>(kind: IntegratorKind, rhs: F, u: &[f64], dt: f64) -> Result<Vec<f64>>
where
    F: Fn(&[f64], &mut [f64]),
{
    let n = u.len();
    let stage = |base: &[f64], a: f64, k: &[f64]| -> Vec<f64> { base.iter().zip(k).map(|(b, k)| b + a * k).collect() };
    let mut k1 = vec![0.0; n];
    rhs(u, &mut k1);
    match kind {
        IntegratorKind::Rk2 => {
            let u1 = stage(u, dt, &k1);
            let mut k2 = vec![0.0; n];
            rhs(&u1, &mut k2);
            Ok((0..n).map(|i| u[i] + 0.5 * dt * (k1[i] + k2[i])).collect())
        }
        IntegratorKind::Rk3 => {
            let u1 = stage(u, dt, &k1);
            let mut k2 = vec![0.0; n];
            rhs(&u1, &mut k2);
            let u2: Vec<f64> = (0..n).map(|i| 0.75 * u[i] + 0.25 * (u1[i] + dt * k2[i])).collect();
            let mut k3 = vec![0.0; n];
            rhs(&u2, &mut k3);
            Ok((0..n).map(|i| u[i] / 3.0 + 2.0 / 3.0 * (u2[i] + dt * k3[i])).collect())
        }
        IntegratorKind::Rk4 => {
            let mut k2 = vec![0.0; n];
            let mut k3 = vec![0.0; n];
            let mut k4 = vec![0.0; n];
            rhs(&stage(u, 0.5 * dt, &k1), &mut k2);
            rhs(&stage(u, 0.5 * dt, &k2), &mut k3);
            rhs(&stage(u, dt, &k3), &mut k4);
            Ok((0..n).map(|i| u[i] + dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i])).collect())
        }
        other => Err(Error::InvalidInput(format!("{other} is not a Runge-Kutta method"))),
    }
}

/// One exponential step of `kind` with the given split operator.
pub fn step_exponential<S: SplitOperator>(kind: IntegratorKind, op: &S, u: &[f64], dt: f64, settings: KrylovSettings) -> Result<(Vec<f64>, KrylovStats)> {
    match kind {
        IntegratorKind::ExpEuler => step_exp_euler(op, u, dt, settings),
        IntegratorKind::Epi2 => step_epi2(op, u, dt, settings),
        IntegratorKind::Exprb32 => step_exprb32(op, u, dt, settings),
        IntegratorKind::Exprb42 => step_exprb42(op, u, dt, settings),
        other => Err(Error::InvalidInput(format!("{other} is not an exponential method"))),
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeLoopConfig {
    pub dt: f64,
    pub t_final: f64,
    /// `None` uses [`IntegratorKind::default_relinearization`].
    pub relinearization: Option<Relinearization>,
    pub krylov: KrylovSettings,
    /// A state with `max |u| > blowup_factor (1 + max |u_0|)` counts as blown up.
    pub blowup_factor: f64,
}

impl TimeLoopConfig {
    pub fn new(dt: f64, t_final: f64) -> Self {
        TimeLoopConfig { dt, t_final, relinearization: None, krylov: KrylovSettings::default(), blowup_factor: 1e8 }
    }

    /// Step sizes: whole steps of `dt` and one shortened last step if needed.
    pub fn steps(&self) -> Result<Vec<f64>> {
        if !(self.dt > 0.0) || !(self.t_final >= 0.0) || !self.t_final.is_finite() {
            return Err(Error::InvalidInput(format!("bad time loop dt={} t_final={}", self.dt, self.t_final)));
        }
        let ratio = self.t_final / self.dt;
        let whole = (ratio + 1e-9).floor() as usize;
        let mut steps = vec![self.dt; whole];
        let rest = self.t_final - whole as f64 * self.dt;
        if rest > 1e-9 * self.dt {
            steps.push(rest);
        }
        Ok(steps)
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct IntegrationStats {
    pub steps: usize,
    pub krylov: KrylovStats,
    /// Krylov iterations per step (empty for Runge-Kutta runs).
    pub iterations_per_step: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub state: Vec<f64>,
    pub time: f64,
    pub stats: IntegrationStats,
}

/// Per-step diagnostics: step index (1-based), time, state and Krylov iterations of the step.
pub type Observer<'o> = &'o mut dyn FnMut(usize, f64, &[f64], usize);

/// Integrates `sys` from `u0` to `cfg.t_final`.
pub fn integrate<S: SemiDiscreteSystem>(
    sys: &S,
    kind: IntegratorKind,
    u0: &[f64],
    cfg: &TimeLoopConfig,
    mut observer: Option<Observer<'_>>,
) -> Result<Trajectory> {
    if u0.len() != sys.dim() {
        return Err(Error::DimensionMismatch(format!("initial state of length {} for system of size {}", u0.len(), sys.dim())));
    }
    let steps = cfg.steps()?;
    let bound = cfg.blowup_factor * (1.0 + u0.iter().fold(0.0f64, |a, v| a.max(v.abs())));
    let relin = cfg.relinearization.unwrap_or(kind.default_relinearization());
    let frozen = if kind.is_exponential() && relin == Relinearization::Frozen { Some(sys.split_at(u0)?) } else { None };
    let mut u = u0.to_vec();
    let mut t = 0.0;
    let mut stats = IntegrationStats::default();
    for (i, &dt) in steps.iter().enumerate() {
        let (next, ks) = if kind.is_exponential() {
            let res = match &frozen {
                Some(op) => step_exponential(kind, op, &u, dt, cfg.krylov),
                None => step_exponential(kind, &sys.split_at(&u)?, &u, dt, cfg.krylov),
            };
            match res {
                Ok(r) => r,
                Err(Error::KrylovDivergence { .. }) | Err(Error::Overflow(_)) | Err(Error::Inadmissible(_)) => {
                    return Err(Error::BlowUp { step: i + 1, time: t + dt })
                }
                Err(e) => return Err(e),
            }
        } else {
            (step_rk(kind, |x, y| sys.rhs(x, y), &u, dt)?, KrylovStats::default())
        };
        t = if i + 1 == steps.len() { cfg.t_final } else { t + dt };
        let bad = next.iter().any(|v| !v.is_finite() || v.abs() > bound);
        if bad {
            return Err(Error::BlowUp { step: i + 1, time: t });
        }
        u = next;
        stats.steps += 1;
        stats.krylov += ks;
        if kind.is_exponential() {
            stats.iterations_per_step.push(ks.iterations);
        }
        if let Some(obs) = observer.as_mut() {
            obs(i + 1, t, &u, ks.iterations);
        }
    }
    Ok(Trajectory { state: u, time: t, stats })
}

/// Independent scalar equations `y' = lambda y + a y^2 + c`, one per component.
///
/// Split at `yr`: `L = lambda + 2 a yr`, `N(y) = a y^2 + c - 2 a yr y`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScalarOde {
    pub lambda: f64,
    pub a: f64,
    pub c: f64,
    pub n: usize,
}

impl ScalarOde {
    pub fn riccati(lambda: f64, n: usize) -> Self {
        ScalarOde { lambda, a: 1.0, c: 0.0, n }
    }

    pub fn affine(lambda: f64, c: f64) -> Self {
        ScalarOde { lambda, a: 0.0, c, n: 1 }
    }

    /// Reference solution by `substeps` classical RK4 steps.
    pub fn reference(&self, y0: &[f64], t: f64, substeps: usize) -> Vec<f64> {
        let h = t / substeps as f64;
        let mut y = y0.to_vec();
        for _ in 0..substeps {
            y = step_rk(IntegratorKind::Rk4, |x, o| self.rhs(x, o), &y, h).expect("rk4");
        }
        y
    }
}

#[derive(Debug, Clone)]
pub struct ScalarOdeSplit {
    ode: ScalarOde,
    jac: Vec<f64>,
    reference: Vec<f64>,
}

impl LinearOperator for ScalarOdeSplit {
    fn dim(&self) -> usize {
        self.ode.n
    }

    fn apply(&self, x: &[f64], y: &mut [f64]) {
        for i in 0..x.len() {
            y[i] = self.jac[i] * x[i];
        }
    }
}

impl SplitOperator for ScalarOdeSplit {
    fn apply_nonlinear(&self, u: &[f64], out: &mut [f64]) {
        let o = &self.ode;
        for i in 0..u.len() {
            out[i] = o.a * u[i] * u[i] + o.c - 2.0 * o.a * self.reference[i] * u[i];
        }
    }
}

impl SemiDiscreteSystem for ScalarOde {
    type Split<'a> = ScalarOdeSplit;

    fn dim(&self) -> usize {
        self.n
    }

    fn split_at(&self, reference: &[f64]) -> Result<ScalarOdeSplit> {
        if reference.len() != self.n {
            return Err(Error::DimensionMismatch("reference length".into()));
        }
        Ok(ScalarOdeSplit { ode: *self, jac: reference.iter().map(|r| self.lambda + 2.0 * self.a * r).collect(), reference: reference.to_vec() })
    }

    fn rhs(&self, u: &[f64], out: &mut [f64]) {
        for i in 0..u.len() {
            out[i] = self.lambda * u[i] + self.a * u[i] * u[i] + self.c;
        }
    }
}
