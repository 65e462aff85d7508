//! Local DG discretization of the 1D viscous Burgers equation
//! `u_t + (u^2/2)_x = kappa u_xx + s(x)`.
//!
//! The auxiliary gradient `q` uses the central flux. The convective flux is
//! split at a reference state `ur` into the linear part `ur u` (with a
//! Lax-Friedrichs type interface flux) and the remainder `ur u - u^2/2`.
//! All interface fluxes here are x-direction values: with `uL`, `uR` the
//! traces to the left and right of a face, the jump is `[u] = uL - uR`.

use std::sync::Arc;

use crate::basis::{l2_project, over_integration_rule};
use crate::error::{Error, Result};
use crate::mesh::{DgSpace, FieldState, Side};
use crate::operator::{SemiDiscreteSystem, SplitOperator};
use crate::phi::LinearOperator;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FluxKind {
    LaxFriedrichs,
    Entropy,
}

/// Jump penalty of the entropy flux.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Sigma {
    Constant(f64),
    /// `kappa/100 + h max(|u-|, |u+|)` per face, from the current state.
    ShockAdaptive,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Integration {
    /// Quadrature on the LGL nodes (diagonal mass matrix).
    Collocation,
    /// Gauss rule with `(3k+3)/2` points and the exact mass matrix.
    OverIntegrated,
}

pub type SourceFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

#[derive(Clone)]
pub struct BurgersConfig {
    pub kappa: f64,
    pub flux: FluxKind,
    pub sigma: Sigma,
    pub integration: Integration,
    pub source: Option<SourceFn>,
}

impl std::fmt::Debug for BurgersConfig {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("BurgersConfig")
            .field("kappa", &self.kappa)
            .field("flux", &self.flux)
            .field("sigma", &self.sigma)
            .field("integration", &self.integration)
            .field("source", &self.source.is_some())
            .finish()
    }
}

impl BurgersConfig {
    pub fn new(kappa: f64, flux: FluxKind) -> Self {
        BurgersConfig { kappa, flux, sigma: Sigma::Constant(0.0), integration: Integration::Collocation, source: None }
    }

    pub fn with_sigma(mut self, sigma: Sigma) -> Self {
        self.sigma = sigma;
        self
    }

    pub fn with_integration(mut self, integration: Integration) -> Self {
        self.integration = integration;
        self
    }

    pub fn with_source(mut self, source: SourceFn) -> Self {
        self.source = Some(source);
        self
    }
}

/// Entropy-conserving flux of `u^2/2` plus the jump penalty `(sigma/h) [u]`.
pub fn entropy_flux(u_minus: f64, u_plus: f64, jump: f64, sigma: f64, h: f64) -> f64 {
    let avg_sq = 0.25 * (u_minus * u_minus + u_plus * u_plus);
    let avg = 0.5 * (u_minus + u_plus);
    (avg_sq + avg * avg) / 3.0 + sigma / h * jump
}

/// `{u^2/2} + max(|u-|, |u+|) [u] / 2`.
pub fn lax_friedrichs_flux(u_minus: f64, u_plus: f64, jump: f64) -> f64 {
    0.25 * (u_minus * u_minus + u_plus * u_plus) + 0.5 * u_minus.abs().max(u_plus.abs()) * jump
}

/// `{ur u} + max(|ur-|, |ur+|) [u] / 2`, linear in `u`.
pub fn linearized_flux(ur_minus: f64, ur_plus: f64, u_minus: f64, u_plus: f64, jump: f64) -> f64 {
    0.5 * (ur_minus * u_minus + ur_plus * u_plus) + 0.5 * ur_minus.abs().max(ur_plus.abs()) * jump
}

#[derive(Debug, Clone, Copy)]
struct FaceInfo {
    left: Option<usize>,
    right: Option<usize>,
    h: f64,
}

impl FaceInfo {
    fn is_boundary(&self) -> bool {
        self.left.is_none() || self.right.is_none()
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Part {
    Linear,
    Nonlinear,
    Full,
}

/// The discrete Burgers operator on a 1D space.
#[derive(Debug, Clone)]
pub struct Burgers {
    space: DgSpace,
    cfg: BurgersConfig,
    np: usize,
    nq: usize,
    wq: Vec<f64>,
    /// Interpolation to quadrature points, `nq x np` row-major.
    b: Vec<f64>,
    /// Reference derivative at quadrature points, `nq x np`.
    bd: Vec<f64>,
    /// Inverse reference mass matrix, `np x np`.
    minv: Vec<f64>,
    jac: Vec<f64>,
    faces: Vec<FaceInfo>,
    source: Option<Vec<f64>>,
}

impl Burgers {
    pub fn new(space: DgSpace, cfg: BurgersConfig) -> Result<Self> {
        if space.mesh().dim() != 1 {
            return Err(Error::InvalidMesh("Burgers needs a 1D mesh".into()));
        }
        if !(cfg.kappa > 0.0) || !cfg.kappa.is_finite() {
            return Err(Error::InvalidInput(format!("kappa must be positive, got {}", cfg.kappa)));
        }
        if let Sigma::Constant(s) = cfg.sigma {
            if !(s >= 0.0) {
                return Err(Error::InvalidInput(format!("sigma must be nonnegative, got {s}")));
            }
        }
        let basis = space.basis();
        let np = basis.len();
        let rule = match cfg.integration {
            Integration::Collocation => basis.lgl_rule(),
            Integration::OverIntegrated => over_integration_rule(basis.order())?,
        };
        let nq = rule.len();
        let bmat = basis.interpolation_matrix(&rule.points);
        let dmat = basis.derivative_matrix(&rule.points);
        let minv_m = basis.mass_matrix(&rule).try_inverse().ok_or_else(|| Error::InvalidInput("singular mass matrix".into()))?;
        let row_major =
            |m: &nalgebra::DMatrix<f64>| -> Vec<f64> { (0..m.nrows()).flat_map(|i| (0..m.ncols()).map(move |j| (i, j))).map(|(i, j)| m[(i, j)]).collect() };
        let mesh = space.mesh();
        let jac = mesh.elements().iter().map(|e| 0.5 * e.size[0]).collect();
        let faces = mesh
            .faces()
            .iter()
            .map(|f| {
                let other = f.neighbor_element().map(|(e, _)| e);
                let (left, right) = if f.owner_side == Side::East { (Some(f.owner), other) } else { (other, Some(f.owner)) };
                FaceInfo { left, right, h: f.h }
            })
            .collect();
        let source = match &cfg.source {
            None => None,
            Some(s) => {
                let quad = over_integration_rule(basis.order() + 2)?;
                let s = s.clone();
                Some(l2_project(&space, 1, &quad, move |x, out| out[0] = s(x[0]))?.values)
            }
        };
        Ok(Burgers { np, nq, wq: rule.weights.clone(), b: row_major(&bmat), bd: row_major(&dmat), minv: row_major(&minv_m), jac, faces, source, space, cfg })
    }

    pub fn space(&self) -> &DgSpace {
        &self.space
    }

    pub fn config(&self) -> &BurgersConfig {
        &self.cfg
    }

    pub fn len(&self) -> usize {
        self.space.num_nodes()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn ne(&self) -> usize {
        self.jac.len()
    }

    fn traces(&self, u: &[f64], f: &FaceInfo) -> (f64, f64) {
        let np = self.np;
        (f.left.map_or(0.0, |e| u[e * np + np - 1]), f.right.map_or(0.0, |e| u[e * np]))
    }

    fn at_quad(&self, ue: &[f64], out: &mut [f64]) {
        let np = self.np;
        for (q, o) in out.iter_mut().enumerate() {
            *o = self.b[q * np..(q + 1) * np].iter().zip(ue).map(|(a, b)| a * b).sum();
        }
    }

    fn solve_mass(&self, e: usize, rhs: &[f64], out: &mut [f64]) {
        let np = self.np;
        let s = 1.0 / self.jac[e];
        for i in 0..np {
            out[i] = s * self.minv[i * np..(i + 1) * np].iter().zip(rhs).map(|(a, b)| a * b).sum::<f64>();
        }
    }

    /// Auxiliary gradient `q` of `u` with the central flux (zero trace on Dirichlet faces).
    pub fn gradient(&self, u: &[f64]) -> Vec<f64> {
        let np = self.np;
        let nq = self.nq;
        let mut rhs = vec![0.0; u.len()];
        let mut dq = vec![0.0; nq];
        for e in 0..self.ne() {
            let ue = &u[e * np..(e + 1) * np];
            for q in 0..nq {
                dq[q] = self.wq[q] * self.bd[q * np..(q + 1) * np].iter().zip(ue).map(|(a, b)| a * b).sum::<f64>();
            }
            for j in 0..np {
                rhs[e * np + j] = (0..nq).map(|q| dq[q] * self.b[q * np + j]).sum();
            }
        }
        for f in &self.faces {
            let (ul, ur) = self.traces(u, f);
            let ustar = if f.is_boundary() { 0.0 } else { 0.5 * (ul + ur) };
            if let Some(l) = f.left {
                rhs[l * np + np - 1] += ustar - ul;
            }
            if let Some(r) = f.right {
                rhs[r * np] -= ustar - ur;
            }
        }
        let mut q = vec![0.0; u.len()];
        for e in 0..self.ne() {
            self.solve_mass(e, &rhs[e * np..(e + 1) * np], &mut q[e * np..(e + 1) * np]);
        }
        q
    }

    fn sigma(&self, ul: f64, ur: f64, h: f64) -> f64 {
        match self.cfg.sigma {
            Sigma::Constant(s) => s,
            Sigma::ShockAdaptive => self.cfg.kappa / 100.0 + h * ul.abs().max(ur.abs()),
        }
    }

    fn nonlinear_flux(&self, ul: f64, ur: f64, h: f64) -> f64 {
        match self.cfg.flux {
            FluxKind::LaxFriedrichs => lax_friedrichs_flux(ul, ur, ul - ur),
            FluxKind::Entropy => entropy_flux(ul, ur, ul - ur, self.sigma(ul, ur, h), h),
        }
    }

    fn residual(&self, u: &[f64], out: &mut [f64], part: Part, reference: Option<&Reference>) {
        let np = self.np;
        let nq = self.nq;
        let kappa = self.cfg.kappa;
        let q = if part == Part::Nonlinear { Vec::new() } else { self.gradient(u) };
        let mut rhs = vec![0.0; u.len()];
        let mut uq = vec![0.0; nq];
        let mut qq = vec![0.0; nq];
        let mut fq = vec![0.0; nq];
        for e in 0..self.ne() {
            self.at_quad(&u[e * np..(e + 1) * np], &mut uq);
            if part != Part::Nonlinear {
                self.at_quad(&q[e * np..(e + 1) * np], &mut qq);
            }
            for i in 0..nq {
                let f = match part {
                    Part::Linear => kappa * qq[i] - reference.unwrap().quad[e * nq + i] * uq[i],
                    Part::Nonlinear => reference.unwrap().quad[e * nq + i] * uq[i] - 0.5 * uq[i] * uq[i],
                    Part::Full => kappa * qq[i] - 0.5 * uq[i] * uq[i],
                };
                fq[i] = self.wq[i] * f;
            }
            for j in 0..np {
                rhs[e * np + j] = -(0..nq).map(|i| fq[i] * self.bd[i * np + j]).sum::<f64>();
            }
        }
        for (fi, f) in self.faces.iter().enumerate() {
            let (ul, ur) = self.traces(u, f);
            let diffusive = || {
                let (ql, qr) = self.traces(&q, f);
                match (f.left, f.right) {
                    (Some(_), Some(_)) => 0.5 * (ql + qr),
                    (Some(_), None) => ql,
                    _ => qr,
                }
            };
            let linear = || {
                let (rl, rr) = reference.unwrap().face[fi];
                linearized_flux(rl, rr, ul, ur, ul - ur)
            };
            let flux = match part {
                Part::Linear => kappa * diffusive() - linear(),
                Part::Nonlinear => linear() - self.nonlinear_flux(ul, ur, f.h),
                Part::Full => kappa * diffusive() - self.nonlinear_flux(ul, ur, f.h),
            };
            if let Some(l) = f.left {
                rhs[l * np + np - 1] += flux;
            }
            if let Some(r) = f.right {
                rhs[r * np] -= flux;
            }
        }
        for e in 0..self.ne() {
            self.solve_mass(e, &rhs[e * np..(e + 1) * np], &mut out[e * np..(e + 1) * np]);
        }
        if part != Part::Linear {
            if let Some(s) = &self.source {
                out.iter_mut().zip(s).for_each(|(o, s)| *o += s);
            }
        }
    }

    fn reference(&self, ur: &[f64]) -> Reference {
        let nq = self.nq;
        let np = self.np;
        let mut quad = vec![0.0; self.ne() * nq];
        for e in 0..self.ne() {
            self.at_quad(&ur[e * np..(e + 1) * np], &mut quad[e * nq..(e + 1) * nq]);
        }
        let face = self.faces.iter().map(|f| self.traces(ur, f)).collect();
        Reference { quad, face }
    }

    /// Broken L2 inner product under the configured quadrature.
    pub fn inner(&self, u: &[f64], v: &[f64]) -> f64 {
        let np = self.np;
        let mut uq = vec![0.0; self.nq];
        let mut vq = vec![0.0; self.nq];
        (0..self.ne())
            .map(|e| {
                self.at_quad(&u[e * np..(e + 1) * np], &mut uq);
                self.at_quad(&v[e * np..(e + 1) * np], &mut vq);
                self.jac[e] * (0..self.nq).map(|i| self.wq[i] * uq[i] * vq[i]).sum::<f64>()
            })
            .sum()
    }

    /// `sum over faces of (sigma/h) [u]^2` for the constant penalty.
    pub fn jump_penalty(&self, u: &[f64]) -> f64 {
        let s = match self.cfg.sigma {
            Sigma::Constant(s) => s,
            Sigma::ShockAdaptive => return f64::NAN,
        };
        self.faces
            .iter()
            .map(|f| {
                let (ul, ur) = self.traces(u, f);
                s / f.h * (ul - ur).powi(2)
            })
            .sum()
    }

    /// `||u_x||^2 + sum over faces of [u]^2 / h`.
    pub fn dg_norm_sq(&self, u: &[f64]) -> f64 {
        let np = self.np;
        let mut grad = 0.0;
        for e in 0..self.ne() {
            let ue = &u[e * np..(e + 1) * np];
            let s = 1.0 / self.jac[e];
            for i in 0..self.nq {
                let d: f64 = self.bd[i * np..(i + 1) * np].iter().zip(ue).map(|(a, b)| a * b).sum::<f64>() * s;
                grad += self.jac[e] * self.wq[i] * d * d;
            }
        }
        let jumps: f64 = self
            .faces
            .iter()
            .map(|f| {
                let (ul, ur) = self.traces(u, f);
                (ul - ur).powi(2) / f.h
            })
            .sum();
        grad + jumps
    }

    /// Largest nodal `|u|`, the convective speed for Courant numbers.
    pub fn max_speed(&self, u: &[f64]) -> f64 {
        u.iter().fold(0.0, |a, v| a.max(v.abs()))
    }
}

#[derive(Debug, Clone)]
struct Reference {
    quad: Vec<f64>,
    face: Vec<(f64, f64)>,
}

/// Burgers operator split at a frozen reference state.
#[derive(Debug, Clone)]
pub struct BurgersSplit<'a> {
    sys: &'a Burgers,
    reference: Reference,
}

impl LinearOperator for BurgersSplit<'_> {
    fn dim(&self) -> usize {
        self.sys.len()
    }

    fn apply(&self, x: &[f64], y: &mut [f64]) {
        self.sys.residual(x, y, Part::Linear, Some(&self.reference));
    }
}

impl SplitOperator for BurgersSplit<'_> {
    fn apply_nonlinear(&self, u: &[f64], out: &mut [f64]) {
        self.sys.residual(u, out, Part::Nonlinear, Some(&self.reference));
    }
}

impl SemiDiscreteSystem for Burgers {
    type Split<'a> = BurgersSplit<'a>;

    fn dim(&self) -> usize {
        self.len()
    }

    fn split_at<'a>(&'a self, reference: &[f64]) -> Result<BurgersSplit<'a>> {
        if reference.len() != self.len() {
            return Err(Error::DimensionMismatch(format!("reference of length {} for {} nodes", reference.len(), self.len())));
        }
        if reference.iter().any(|v| !v.is_finite()) {
            return Err(Error::Inadmissible("non-finite reference state".into()));
        }
        Ok(BurgersSplit { sys: self, reference: self.reference(reference) })
    }

    fn rhs(&self, u: &[f64], out: &mut [f64]) {
        self.residual(u, out, Part::Full, None);
    }
}

/// `q` for a field on `sys`'s space.
pub fn burgers_gradient(sys: &Burgers, u: &FieldState) -> Result<FieldState> {
    u.check(sys.space(), 1)?;
    FieldState::from_values(sys.space(), 1, sys.gradient(&u.values))
}

/// `L + N` at `ur = u`, which is the reference-free right-hand side.
pub fn burgers_full_rhs(sys: &Burgers, u: &FieldState) -> Result<FieldState> {
    u.check(sys.space(), 1)?;
    let mut out = vec![0.0; u.len()];
    sys.rhs(&u.values, &mut out);
    FieldState::from_values(sys.space(), 1, out)
}

pub fn burgers_split_operator<'a>(sys: &'a Burgers, reference: &FieldState) -> Result<BurgersSplit<'a>> {
    reference.check(sys.space(), 1)?;
    sys.split_at(&reference.values)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basis::lgl_basis;
    use crate::mesh::{build_interval_mesh, BoundaryKind};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn system(k: usize, ne: usize, bc: BoundaryKind, cfg: BurgersConfig) -> Burgers {
        let space = DgSpace::new(build_interval_mesh(0.0, 1.0, ne, bc).unwrap(), lgl_basis(k).unwrap());
        Burgers::new(space, cfg).unwrap()
    }

    fn random(n: usize, rng: &mut ChaCha8Rng) -> Vec<f64> {
        (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect()
    }

    #[test]
    fn flux_examples() {
        assert!((entropy_flux(0.3, 0.3, 0.0, 0.1, 0.5) - 0.045).abs() < 1e-16);
        assert!((entropy_flux(1.0, -1.0, 2.0, 0.0, 1.0) - 1.0 / 6.0).abs() < 1e-15);
        assert!((entropy_flux(1.0, 0.0, 1.0, 3e-4, 0.05) - (1.0 / 6.0 + 0.006)).abs() < 1e-15);
        assert_eq!(lax_friedrichs_flux(2.0, 0.0, 2.0), 3.0);
        assert!((lax_friedrichs_flux(-0.4, -0.4, 0.0) - 0.08).abs() < 1e-16);
        assert_eq!(lax_friedrichs_flux(0.0, 0.0, 0.0), 0.0);
    }

    #[test]
    fn gradient_of_constant_vanishes() {
        let sys = system(3, 5, BoundaryKind::Periodic, BurgersConfig::new(0.1, FluxKind::LaxFriedrichs));
        let q = sys.gradient(&vec![2.5; sys.len()]);
        assert!(q.iter().all(|v| v.abs() < 1e-12));
    }

    #[test]
    fn gradient_is_exact_for_continuous_quadratic() {
        for integration in [Integration::Collocation, Integration::OverIntegrated] {
            let cfg = BurgersConfig::new(0.1, FluxKind::LaxFriedrichs).with_integration(integration);
            let sys = system(2, 4, BoundaryKind::DirichletZero, cfg);
            let u = sys.space().interpolate(1, |x, o| o[0] = x[0] * (1.0 - x[0]));
            let q = sys.gradient(&u.values);
            let exact = sys.space().interpolate(1, |x, o| o[0] = 1.0 - 2.0 * x[0]);
            let err = q.iter().zip(&exact.values).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
            assert!(err < 1e-12, "{integration:?}: {err}");
        }
    }

    #[test]
    fn constant_state_is_steady() {
        let cfg = BurgersConfig::new(0.03, FluxKind::Entropy).with_sigma(Sigma::Constant(1e-2));
        let sys = system(4, 6, BoundaryKind::Periodic, cfg);
        let u = vec![0.7; sys.len()];
        let split = sys.split_at(&u).unwrap();
        let mut l = vec![0.0; u.len()];
        let mut n = vec![0.0; u.len()];
        split.apply(&vec![1.0; u.len()], &mut l);
        split.apply_nonlinear(&u, &mut n);
        assert!(n.iter().all(|v| v.abs() < 1e-12));
        // L(1) at ur = 0.7 is -(d/dx)(0.7 * 1) = 0.
        assert!(l.iter().all(|v| v.abs() < 1e-12));
    }

    #[test]
    fn splitting_is_reference_free() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for bc in [BoundaryKind::Periodic, BoundaryKind::DirichletZero] {
            for flux in [FluxKind::LaxFriedrichs, FluxKind::Entropy] {
                let cfg = BurgersConfig::new(0.05, flux).with_sigma(Sigma::ShockAdaptive);
                let sys = system(3, 7, bc, cfg);
                let u = random(sys.len(), &mut rng);
                let mut full = vec![0.0; u.len()];
                sys.rhs(&u, &mut full);
                for _ in 0..3 {
                    let r = random(sys.len(), &mut rng);
                    let mut split = vec![0.0; u.len()];
                    sys.split_at(&r).unwrap().apply_full(&u, &mut split);
                    let d = full.iter().zip(&split).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
                    let s = full.iter().fold(0.0f64, |a, b| a.max(b.abs()));
                    assert!(d <= 1e-12 * s, "{d} vs {s}");
                }
            }
        }
    }

    #[test]
    fn energy_identity_with_over_integration() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let (kappa, sigma) = (0.07, 0.02);
        let cfg = BurgersConfig::new(kappa, FluxKind::Entropy).with_sigma(Sigma::Constant(sigma)).with_integration(Integration::OverIntegrated);
        let sys = system(4, 5, BoundaryKind::Periodic, cfg);
        let u = random(sys.len(), &mut rng);
        let mut rhs = vec![0.0; u.len()];
        sys.rhs(&u, &mut rhs);
        let q = sys.gradient(&u);
        let lhs = sys.inner(&u, &rhs);
        let expected = -kappa * sys.inner(&q, &q) - sys.jump_penalty(&u);
        assert!((lhs - expected).abs() < 1e-11 * (1.0 + sys.inner(&u, &u)), "{lhs} vs {expected}");
    }

    #[test]
    fn mass_is_conserved_on_periodic_mesh() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let sys = system(3, 8, BoundaryKind::Periodic, BurgersConfig::new(0.02, FluxKind::LaxFriedrichs));
        let u = random(sys.len(), &mut rng);
        let mut rhs = vec![0.0; u.len()];
        sys.rhs(&u, &mut rhs);
        let ones = vec![1.0; u.len()];
        assert!(sys.inner(&ones, &rhs).abs() < 1e-12);
    }

    #[test]
    fn linear_part_is_linear() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let sys = system(2, 6, BoundaryKind::DirichletZero, BurgersConfig::new(0.1, FluxKind::Entropy));
        let r = random(sys.len(), &mut rng);
        let split = sys.split_at(&r).unwrap();
        let (u, w) = (random(sys.len(), &mut rng), random(sys.len(), &mut rng));
        let (a, b) = (1.7, -0.3);
        let comb: Vec<f64> = u.iter().zip(&w).map(|(x, y)| a * x + b * y).collect();
        let (mut lc, mut lu, mut lw) = (vec![0.0; u.len()], vec![0.0; u.len()], vec![0.0; u.len()]);
        split.apply(&comb, &mut lc);
        split.apply(&u, &mut lu);
        split.apply(&w, &mut lw);
        for i in 0..u.len() {
            assert!((lc[i] - a * lu[i] - b * lw[i]).abs() < 1e-10 * (1.0 + lc[i].abs()));
        }
    }

    #[test]
    fn dg_norm_vanishes_only_for_constants() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let sys = system(2, 4, BoundaryKind::Periodic, BurgersConfig::new(0.1, FluxKind::Entropy));
        assert!(sys.dg_norm_sq(&vec![3.0; sys.len()]) < 1e-20);
        assert!(sys.dg_norm_sq(&random(sys.len(), &mut rng)) > 0.0);
    }
}
