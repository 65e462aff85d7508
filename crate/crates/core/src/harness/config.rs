//! Experiment configuration: flat `key = value` files plus command-line overrides.

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use crate::burgers::{FluxKind, Integration, Sigma};
use crate::error::{Error, Result};
use crate::euler::EulerConfig;
use crate::integrators::{IntegratorKind, Relinearization};
use crate::phi::KrylovSettings;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ProblemId {
    BurgersMms,
    BurgersSmooth,
    BurgersShock,
    EulerVortex,
}

impl ProblemId {
    pub const ALL: [ProblemId; 4] = [ProblemId::BurgersMms, ProblemId::BurgersSmooth, ProblemId::BurgersShock, ProblemId::EulerVortex];

    pub fn name(self) -> &'static str {
        match self {
            ProblemId::BurgersMms => "burgers-mms",
            ProblemId::BurgersSmooth => "burgers-smooth",
            ProblemId::BurgersShock => "burgers-shock",
            ProblemId::EulerVortex => "euler-vortex",
        }
    }

    pub fn is_euler(self) -> bool {
        self == ProblemId::EulerVortex
    }

    /// Component names used in CSV column headers.
    pub fn components(self) -> &'static [&'static str] {
        if self.is_euler() {
            &["rho", "rhou", "rhov", "rhoE"]
        } else {
            &["u"]
        }
    }

    /// Whether a closed-form solution at `t_final` is available.
    pub fn has_exact_solution(self) -> bool {
        matches!(self, ProblemId::BurgersMms | ProblemId::EulerVortex)
    }
}

impl fmt::Display for ProblemId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ProblemId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key = s.trim().to_ascii_lowercase().replace('_', "-");
        ProblemId::ALL.into_iter().find(|p| p.name() == key).ok_or_else(|| Error::Config(format!("unknown problem '{s}'")))
    }
}

/// How a numerical reference is produced when no exact solution is used.
#[derive(Debug, Clone, PartialEq)]
pub struct GenerateSpec {
    pub integrator: IntegratorKind,
    pub dt: f64,
    /// `None`: the run's `k` for temporal sweeps, 8 otherwise.
    pub k: Option<usize>,
    /// `None`: the run's (finest) `ne`.
    pub ne: Option<usize>,
    /// Cache file; reused when its metadata matches, written otherwise.
    pub file: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum ReferenceSpec {
    Exact,
    Stored(PathBuf),
    Generate(GenerateSpec),
}

/// How the initial nodal state is built from the initial condition.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InitialState {
    Interpolate,
    Project,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepKind {
    Single,
    Spatial,
    Temporal,
    /// `ne` and `dt` refined together, paired entry by entry.
    Joint,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub problem: ProblemId,
    pub integrator: IntegratorKind,
    pub k: usize,
    /// Element counts; for the 2D problem the total count of a square grid.
    pub ne: Vec<usize>,
    pub dt: Vec<f64>,
    pub t_final: f64,
    pub flux: FluxKind,
    pub sigma: Sigma,
    pub kappa: f64,
    pub integration: Integration,
    pub initial: InitialState,
    pub euler: EulerConfig,
    pub reference: ReferenceSpec,
    pub krylov: KrylovSettings,
    pub relinearization: Option<Relinearization>,
    pub jobs: usize,
    pub out: Option<PathBuf>,
}

impl ExperimentConfig {
    /// Problem defaults (single run; adjust `ne`/`dt` for sweeps).
    pub fn for_problem(problem: ProblemId) -> Self {
        let mut cfg = ExperimentConfig {
            problem,
            integrator: IntegratorKind::Exprb32,
            k: 2,
            ne: vec![20],
            dt: vec![1e-3],
            t_final: 1.0,
            flux: FluxKind::LaxFriedrichs,
            sigma: Sigma::Constant(0.0),
            kappa: 0.03,
            integration: Integration::Collocation,
            initial: InitialState::Project,
            euler: EulerConfig::default(),
            reference: ReferenceSpec::Exact,
            krylov: KrylovSettings::default(),
            relinearization: None,
            jobs: 1,
            out: None,
        };
        match problem {
            ProblemId::BurgersMms => {
                cfg.kappa = 0.05;
                cfg.t_final = 0.01;
                cfg.dt = vec![5e-5];
                cfg.integration = Integration::OverIntegrated;
            }
            ProblemId::BurgersSmooth => {
                cfg.k = 4;
                cfg.ne = vec![40];
                cfg.reference = ReferenceSpec::Generate(default_generate());
            }
            ProblemId::BurgersShock => {
                cfg.k = 4;
                cfg.ne = vec![40];
                cfg.kappa = 0.002;
                cfg.flux = FluxKind::Entropy;
                cfg.sigma = Sigma::ShockAdaptive;
                cfg.reference = ReferenceSpec::Generate(default_generate());
            }
            ProblemId::EulerVortex => {
                cfg.ne = vec![256];
                cfg.dt = vec![0.01];
                cfg.integrator = IntegratorKind::Exprb42;
                cfg.initial = InitialState::Interpolate;
            }
        }
        cfg
    }

    /// Parses a configuration file and applies `overrides` (same keys) on top.
    pub fn from_file(path: &Path, overrides: &[(String, String)]) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        let mut pairs = parse_pairs(&text)?;
        pairs.extend(overrides.iter().cloned());
        Self::from_pairs(&pairs)
    }

    /// Builds a configuration from key-value pairs; later keys win.
    pub fn from_pairs(pairs: &[(String, String)]) -> Result<Self> {
        let mut map = BTreeMap::new();
        for (k, v) in pairs {
            map.insert(normalize_key(k), v.trim().to_string());
        }
        let problem: ProblemId = map.remove("problem").ok_or_else(|| Error::Config("missing key 'problem'".into()))?.parse()?;
        let mut cfg = Self::for_problem(problem);
        let mut generate = match &cfg.reference {
            ReferenceSpec::Generate(g) => g.clone(),
            _ => default_generate(),
        };
        let mut reference_kind: Option<String> = None;
        let mut reference_file: Option<PathBuf> = None;
        let mut krylov_tol = None;
        for (key, value) in &map {
            let v = value.as_str();
            match key.as_str() {
                "integrator" => cfg.integrator = v.parse()?,
                "k" => cfg.k = parse_num(key, v)?,
                "ne" => cfg.ne = parse_list(key, v)?,
                "dt" => cfg.dt = parse_list(key, v)?,
                "tfinal" => cfg.t_final = parse_num(key, v)?,
                "flux" => cfg.flux = parse_flux(v)?,
                "sigma" => cfg.sigma = parse_sigma(v)?,
                "kappa" => cfg.kappa = parse_num(key, v)?,
                "integration" => cfg.integration = parse_integration(v)?,
                "initial" => {
                    cfg.initial = match v {
                        "interpolate" => InitialState::Interpolate,
                        "project" => InitialState::Project,
                        _ => return Err(Error::Config(format!("initial must be interpolate or project, got '{v}'"))),
                    }
                }
                "gamma" => cfg.euler.gamma = parse_num(key, v)?,
                "vortex_alpha" => cfg.euler.alpha = parse_num(key, v)?,
                "vortex_lambda" => cfg.euler.lambda = parse_num(key, v)?,
                "mean_u" => cfg.euler.mean_velocity[0] = parse_num(key, v)?,
                "mean_v" => cfg.euler.mean_velocity[1] = parse_num(key, v)?,
                "reference" => reference_kind = Some(v.to_ascii_lowercase()),
                "reference_file" => reference_file = Some(PathBuf::from(v)),
                "reference_integrator" => generate.integrator = v.parse()?,
                "reference_dt" => generate.dt = parse_num(key, v)?,
                "reference_k" => generate.k = Some(parse_num(key, v)?),
                "reference_ne" => generate.ne = Some(parse_num(key, v)?),
                "krylov_tol" => krylov_tol = Some(parse_num(key, v)?),
                "krylov_max_basis" => cfg.krylov.max_basis = parse_num(key, v)?,
                "krylov_orth" => {
                    cfg.krylov.orth_length = if v == "full" { usize::MAX } else { parse_num(key, v)? };
                }
                "relinearize" => {
                    cfg.relinearization = Some(match v {
                        "every-step" | "every_step" => Relinearization::EveryStep,
                        "frozen" => Relinearization::Frozen,
                        _ => return Err(Error::Config(format!("relinearize must be every-step or frozen, got '{v}'"))),
                    })
                }
                "jobs" => cfg.jobs = parse_num(key, v)?,
                "out" => cfg.out = Some(PathBuf::from(v)),
                _ => return Err(Error::Config(format!("unknown key '{key}'"))),
            }
        }
        if let Some(t) = krylov_tol {
            cfg.krylov = cfg.krylov.with_tol(t);
        }
        cfg.reference = match reference_kind.as_deref() {
            None => match cfg.reference {
                ReferenceSpec::Exact if reference_file.is_none() => ReferenceSpec::Exact,
                _ => ReferenceSpec::Generate(GenerateSpec { file: reference_file, ..generate }),
            },
            Some("exact") => ReferenceSpec::Exact,
            Some("generate") => ReferenceSpec::Generate(GenerateSpec { file: reference_file, ..generate }),
            Some("stored") => ReferenceSpec::Stored(reference_file.ok_or_else(|| Error::Config("reference = stored needs reference_file".into()))?),
            Some(other) => return Err(Error::Config(format!("reference must be exact, stored or generate, got '{other}'"))),
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::Config(m));
        if !(1..=20).contains(&self.k) {
            return bad(format!("k must lie in 1..=20, got {}", self.k));
        }
        if self.ne.is_empty() || self.dt.is_empty() {
            return bad("ne and dt need at least one entry".into());
        }
        if self.ne.contains(&0) {
            return bad("ne entries must be positive".into());
        }
        if self.dt.iter().any(|&d| !(d > 0.0 && d.is_finite())) {
            return bad("dt entries must be positive".into());
        }
        if self.ne.len() > 1 && self.dt.len() > 1 && self.ne.len() != self.dt.len() {
            return bad("a joint sweep needs equally long ne and dt lists".into());
        }
        if !(self.t_final > 0.0 && self.t_final.is_finite()) {
            return bad(format!("tfinal must be positive, got {}", self.t_final));
        }
        if self.jobs == 0 {
            return bad("jobs must be at least 1".into());
        }
        if self.problem.is_euler() {
            if self.ne.iter().any(|&n| side_count(n).is_none()) {
                return bad("euler-vortex ne must be a perfect square (total element count)".into());
            }
            if !(self.euler.gamma > 1.0) {
                return bad(format!("gamma must exceed 1, got {}", self.euler.gamma));
            }
        } else {
            if !(self.kappa > 0.0) {
                return bad(format!("kappa must be positive, got {}", self.kappa));
            }
            if let Sigma::Constant(s) = self.sigma {
                if !(s >= 0.0) {
                    return bad(format!("sigma must be nonnegative, got {s}"));
                }
            }
        }
        if self.problem == ProblemId::BurgersShock && self.ne.iter().any(|n| n % 2 != 0) {
            return bad("burgers-shock needs even ne so that x = 0.5 is a mesh vertex".into());
        }
        match &self.reference {
            ReferenceSpec::Exact if !self.problem.has_exact_solution() => {
                bad(format!("{} has no exact solution; use reference = generate or stored", self.problem))
            }
            ReferenceSpec::Generate(g) if !(g.dt > 0.0) => bad("reference_dt must be positive".into()),
            _ => Ok(()),
        }
    }

    pub fn sweep_kind(&self) -> SweepKind {
        match (self.ne.len() > 1, self.dt.len() > 1) {
            (false, false) => SweepKind::Single,
            (true, false) => SweepKind::Spatial,
            (false, true) => SweepKind::Temporal,
            (true, true) => SweepKind::Joint,
        }
    }

    /// `(ne, dt)` for every sweep point.
    pub fn points(&self) -> Vec<(usize, f64)> {
        let n = self.ne.len().max(self.dt.len());
        (0..n).map(|i| (self.ne[i.min(self.ne.len() - 1)], self.dt[i.min(self.dt.len() - 1)])).collect()
    }

    /// Element size for `ne` elements.
    pub fn element_size(&self, ne: usize) -> f64 {
        if self.problem.is_euler() {
            10.0 / side_count(ne).unwrap_or(1) as f64
        } else {
            1.0 / ne as f64
        }
    }

    /// The refinement parameter of a sweep point: `dt` for temporal sweeps, `h` otherwise.
    pub fn scale(&self, ne: usize, dt: f64) -> f64 {
        match self.sweep_kind() {
            SweepKind::Temporal => dt,
            _ => self.element_size(ne),
        }
    }
}

fn default_generate() -> GenerateSpec {
    GenerateSpec { integrator: IntegratorKind::Rk4, dt: 1e-5, k: None, ne: None, file: None }
}

/// Elements per side of a square grid with `ne` elements in total.
pub fn side_count(ne: usize) -> Option<usize> {
    let s = (ne as f64).sqrt().round() as usize;
    (s * s == ne && s > 0).then_some(s)
}

fn normalize_key(k: &str) -> String {
    let k = k.trim().trim_start_matches("--").to_ascii_lowercase().replace('-', "_");
    match k.as_str() {
        "t_final" => "tfinal".into(),
        _ => k,
    }
}

/// Splits `key = value` lines; `#` starts a comment, blank lines are skipped.
pub fn parse_pairs(text: &str) -> Result<Vec<(String, String)>> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line.split_once('=').ok_or_else(|| Error::Config(format!("line {}: expected key = value, got '{raw}'", i + 1)))?;
        if k.trim().is_empty() {
            return Err(Error::Config(format!("line {}: empty key", i + 1)));
        }
        out.push((k.trim().to_string(), v.trim().to_string()));
    }
    Ok(out)
}

fn parse_num<T: FromStr>(key: &str, v: &str) -> Result<T> {
    v.trim().parse().map_err(|_| Error::Config(format!("cannot parse {key} = '{v}'")))
}

fn parse_list<T: FromStr>(key: &str, v: &str) -> Result<Vec<T>> {
    v.split(',').filter(|s| !s.trim().is_empty()).map(|s| parse_num(key, s)).collect()
}

pub(crate) fn parse_flux(v: &str) -> Result<FluxKind> {
    match v.trim().to_ascii_lowercase().as_str() {
        "lf" | "lax-friedrichs" | "lax_friedrichs" => Ok(FluxKind::LaxFriedrichs),
        "ef" | "entropy" => Ok(FluxKind::Entropy),
        _ => Err(Error::Config(format!("flux must be lf or ef, got '{v}'"))),
    }
}

pub(crate) fn parse_sigma(v: &str) -> Result<Sigma> {
    match v.trim().to_ascii_lowercase().as_str() {
        "adaptive" | "shock" => Ok(Sigma::ShockAdaptive),
        s => Ok(Sigma::Constant(parse_num("sigma", s)?)),
    }
}

fn parse_integration(v: &str) -> Result<Integration> {
    match v.trim().to_ascii_lowercase().as_str() {
        "collocation" | "lgl" => Ok(Integration::Collocation),
        "over" | "over-integrated" | "over_integrated" | "gauss" => Ok(Integration::OverIntegrated),
        _ => Err(Error::Config(format!("integration must be collocation or over-integrated, got '{v}'"))),
    }
}

pub(crate) fn flux_name(f: FluxKind) -> &'static str {
    match f {
        FluxKind::LaxFriedrichs => "lf",
        FluxKind::Entropy => "ef",
    }
}

pub(crate) fn sigma_name(s: Sigma) -> String {
    match s {
        Sigma::Constant(v) => format!("{v:e}"),
        Sigma::ShockAdaptive => "adaptive".into(),
    }
}

pub(crate) fn integration_name(i: Integration) -> &'static str {
    match i {
        Integration::Collocation => "collocation",
        Integration::OverIntegrated => "over-integrated",
    }
}
