//! Stored reference solutions.
//!
//! A reference file is UTF-8 text. It starts with `# key = value` metadata
//! lines (the first must be `# expdg-reference = 1`), followed by one value per
//! line in `[element][node][component]` order. Values use Rust's shortest
//! round-trip scientific notation, so regenerating from the same configuration
//! yields an identical file. The `hash` entry is the SHA-256 of the canonical
//! description of everything that determines the solution.

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::Path;

use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::harness::config::{flux_name, integration_name, sigma_name, ExperimentConfig, GenerateSpec, InitialState, SweepKind};
use crate::harness::problems::{build_problem, initial_state, Discretization};
use crate::integrators::{integrate, IntegratorKind, TimeLoopConfig};
use crate::mesh::{DgSpace, FieldState};

pub const FORMAT_VERSION: &str = "1";

#[derive(Debug, Clone, PartialEq)]
pub struct ReferenceMeta {
    pub problem: String,
    pub hash: String,
    pub k: usize,
    pub ne: usize,
    pub dt: f64,
    pub integrator: IntegratorKind,
    pub t_final: f64,
    pub components: usize,
}

/// A reference state with the space it lives on.
#[derive(Debug, Clone)]
pub struct StoredReference {
    pub meta: ReferenceMeta,
    pub space: DgSpace,
    pub state: FieldState,
}

/// Order and element count used to generate the reference of `cfg`.
pub fn resolve_generate(cfg: &ExperimentConfig, spec: &GenerateSpec) -> (usize, usize) {
    let finest = *cfg.ne.iter().max().unwrap_or(&1);
    let k = spec.k.unwrap_or(match cfg.sweep_kind() {
        SweepKind::Single | SweepKind::Temporal => cfg.k,
        _ => 8,
    });
    (k, spec.ne.unwrap_or(finest))
}

/// Canonical text describing a reference run; its SHA-256 is the file hash.
pub fn describe(cfg: &ExperimentConfig, integrator: IntegratorKind, k: usize, ne: usize, dt: f64) -> String {
    let mut s = String::new();
    let _ = write!(s, "problem={};t_final={:e};k={k};ne={ne};dt={dt:e};integrator={integrator};", cfg.problem, cfg.t_final);
    let _ = write!(s, "initial={};", if cfg.initial == InitialState::Project { "project" } else { "interpolate" });
    if cfg.problem.is_euler() {
        let e = &cfg.euler;
        let _ = write!(s, "gamma={:e};alpha={:e};lambda={:e};mean={:e},{:e}", e.gamma, e.alpha, e.lambda, e.mean_velocity[0], e.mean_velocity[1]);
    } else {
        let _ =
            write!(s, "kappa={:e};flux={};sigma={};integration={}", cfg.kappa, flux_name(cfg.flux), sigma_name(cfg.sigma), integration_name(cfg.integration));
    }
    s
}

pub fn hash_hex(text: &str) -> String {
    Sha256::digest(text.as_bytes()).iter().map(|b| format!("{b:02x}")).collect()
}

fn expected_meta(cfg: &ExperimentConfig, spec: &GenerateSpec) -> ReferenceMeta {
    let (k, ne) = resolve_generate(cfg, spec);
    ReferenceMeta {
        problem: cfg.problem.name().into(),
        hash: hash_hex(&describe(cfg, spec.integrator, k, ne, spec.dt)),
        k,
        ne,
        dt: spec.dt,
        integrator: spec.integrator,
        t_final: cfg.t_final,
        components: cfg.problem.components().len(),
    }
}

/// Runs the reference configuration to `cfg.t_final`.
pub fn generate_reference(cfg: &ExperimentConfig, spec: &GenerateSpec) -> Result<StoredReference> {
    let meta = expected_meta(cfg, spec);
    let disc = build_problem(cfg, meta.k, meta.ne)?;
    let u0 = initial_state(cfg, &disc)?;
    let mut tl = TimeLoopConfig::new(spec.dt, cfg.t_final);
    tl.krylov = cfg.krylov;
    let traj = match &disc {
        Discretization::Burgers(b) => integrate(b, spec.integrator, &u0.values, &tl, None)?,
        Discretization::Euler(e) => integrate(e, spec.integrator, &u0.values, &tl, None)?,
    };
    let space = disc.space().clone();
    let state = FieldState::from_values(&space, meta.components, traj.state)?;
    Ok(StoredReference { meta, space, state })
}

pub fn write_reference(path: &Path, r: &StoredReference) -> Result<()> {
    let m = &r.meta;
    let mut out = String::new();
    let _ = writeln!(out, "# expdg-reference = {FORMAT_VERSION}");
    let _ = writeln!(out, "# problem = {}", m.problem);
    let _ = writeln!(out, "# hash = {}", m.hash);
    let _ = writeln!(out, "# k = {}", m.k);
    let _ = writeln!(out, "# ne = {}", m.ne);
    let _ = writeln!(out, "# dt = {:e}", m.dt);
    let _ = writeln!(out, "# integrator = {}", m.integrator);
    let _ = writeln!(out, "# t_final = {:e}", m.t_final);
    let _ = writeln!(out, "# components = {}", m.components);
    let _ = writeln!(out, "# values = {}", r.state.values.len());
    for v in &r.state.values {
        let _ = writeln!(out, "{v:e}");
    }
    std::fs::File::create(path)?.write_all(out.as_bytes())?;
    Ok(())
}

/// Parses a reference file into metadata and raw values.
pub fn read_reference(path: &Path) -> Result<(ReferenceMeta, Vec<f64>)> {
    let text = std::fs::read_to_string(path)?;
    let bad = |m: String| Error::InvalidInput(format!("{}: {m}", path.display()));
    let mut meta = std::collections::BTreeMap::new();
    let mut values = Vec::new();
    for (i, line) in text.lines().enumerate() {
        if let Some(h) = line.strip_prefix('#') {
            let (k, v) = h.split_once('=').ok_or_else(|| bad(format!("line {}: malformed header", i + 1)))?;
            meta.insert(k.trim().to_string(), v.trim().to_string());
        } else if !line.trim().is_empty() {
            values.push(line.trim().parse::<f64>().map_err(|_| bad(format!("line {}: bad value", i + 1)))?);
        }
    }
    if meta.get("expdg-reference").map(String::as_str) != Some(FORMAT_VERSION) {
        return Err(bad("not a version-1 reference file".into()));
    }
    let get = |k: &str| meta.get(k).cloned().ok_or_else(|| bad(format!("missing header '{k}'")));
    let num = |k: &str| -> Result<f64> { get(k)?.parse().map_err(|_| bad(format!("bad header '{k}'"))) };
    let int = |k: &str| -> Result<usize> { get(k)?.parse().map_err(|_| bad(format!("bad header '{k}'"))) };
    let m = ReferenceMeta {
        problem: get("problem")?,
        hash: get("hash")?,
        k: int("k")?,
        ne: int("ne")?,
        dt: num("dt")?,
        integrator: get("integrator")?.parse()?,
        t_final: num("t_final")?,
        components: int("components")?,
    };
    if int("values")? != values.len() {
        return Err(bad(format!("header announces {} values, found {}", int("values")?, values.len())));
    }
    Ok((m, values))
}

/// Loads a stored reference, failing if it was produced for another configuration.
/// With `spec = None` (a `stored` reference) only the problem and final time are checked.
pub fn load_reference(path: &Path, cfg: &ExperimentConfig, spec: Option<&GenerateSpec>) -> Result<StoredReference> {
    let (meta, values) = read_reference(path)?;
    match spec {
        Some(spec) => {
            let want = expected_meta(cfg, spec);
            if meta != want {
                return Err(Error::ReferenceMismatch(format!(
                    "{} holds k={} ne={} dt={:e} hash {}, configuration needs k={} ne={} dt={:e} hash {}",
                    path.display(),
                    meta.k,
                    meta.ne,
                    meta.dt,
                    meta.hash,
                    want.k,
                    want.ne,
                    want.dt,
                    want.hash
                )));
            }
        }
        None => {
            if meta.problem != cfg.problem.name() || meta.t_final != cfg.t_final {
                return Err(Error::ReferenceMismatch(format!(
                    "{} is for {} at t={}, configuration is {} at t={}",
                    path.display(),
                    meta.problem,
                    meta.t_final,
                    cfg.problem,
                    cfg.t_final
                )));
            }
        }
    }
    let disc = build_problem(cfg, meta.k, meta.ne)?;
    let space = disc.space().clone();
    let state = FieldState::from_values(&space, meta.components, values)?;
    Ok(StoredReference { meta, space, state })
}

/// Loads `spec.file` when it matches, otherwise generates (and stores, if a file is named).
pub fn obtain_reference(cfg: &ExperimentConfig, spec: &GenerateSpec) -> Result<StoredReference> {
    if let Some(path) = &spec.file {
        if path.exists() {
            return load_reference(path, cfg, Some(spec));
        }
        let r = generate_reference(cfg, spec)?;
        write_reference(path, &r)?;
        return Ok(r);
    }
    generate_reference(cfg, spec)
}
