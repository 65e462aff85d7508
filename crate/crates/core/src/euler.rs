//! Nodal DG discretization of the 2D compressible Euler equations on periodic
//! tensor-product quadrilateral meshes.
//!
//! Conserved variables are ordered `(rho, rho u, rho v, rho E)`. The linear part
//! uses the flux Jacobian frozen at a reference state; interface dissipation of
//! both parts is the Roe matrix `|A|`.

use crate::error::{Error, Result};
use crate::mesh::{BoundaryKind, DgSpace, FieldState, Side};
use crate::operator::{SemiDiscreteSystem, SplitOperator};
use crate::phi::LinearOperator;

pub const NCOMP: usize = 4;

pub type Vec4 = [f64; 4];
pub type Mat4 = [[f64; 4]; 4];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EulerState {
    pub rho: f64,
    pub momentum: [f64; 2],
    pub energy: f64,
}

impl EulerState {
    pub fn from_conserved(q: &[f64]) -> Self {
        EulerState { rho: q[0], momentum: [q[1], q[2]], energy: q[3] }
    }

    pub fn from_primitive(rho: f64, velocity: [f64; 2], p: f64, gamma: f64) -> Self {
        let ke = 0.5 * rho * (velocity[0] * velocity[0] + velocity[1] * velocity[1]);
        EulerState { rho, momentum: [rho * velocity[0], rho * velocity[1]], energy: p / (gamma - 1.0) + ke }
    }

    pub fn conserved(&self) -> Vec4 {
        [self.rho, self.momentum[0], self.momentum[1], self.energy]
    }

    pub fn velocity(&self) -> [f64; 2] {
        [self.momentum[0] / self.rho, self.momentum[1] / self.rho]
    }

    pub fn pressure(&self, gamma: f64) -> f64 {
        let [u, v] = self.velocity();
        (gamma - 1.0) * (self.energy - 0.5 * self.rho * (u * u + v * v))
    }

    pub fn sound_speed(&self, gamma: f64) -> f64 {
        (gamma * self.pressure(gamma) / self.rho).sqrt()
    }

    /// Total specific enthalpy `H = E + p/rho`.
    pub fn enthalpy(&self, gamma: f64) -> f64 {
        (self.energy + self.pressure(gamma)) / self.rho
    }

    pub fn is_admissible(&self, gamma: f64) -> bool {
        self.rho > 0.0 && self.pressure(gamma) > 0.0 && self.energy.is_finite() && self.momentum.iter().all(|m| m.is_finite())
    }

    fn check(&self, gamma: f64) -> Result<()> {
        if self.is_admissible(gamma) {
            Ok(())
        } else {
            Err(Error::Inadmissible(format!("rho={} p={}", self.rho, self.pressure(gamma))))
        }
    }
}

/// Gas constant and isentropic-vortex parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EulerConfig {
    pub gamma: f64,
    pub alpha: f64,
    pub lambda: f64,
    /// Mean velocity `(u, v)`.
    pub mean_velocity: [f64; 2],
    pub rho_inf: f64,
    pub t_inf: f64,
    pub p_inf: f64,
    pub center: [f64; 2],
}

impl Default for EulerConfig {
    fn default() -> Self {
        EulerConfig { gamma: 1.4, alpha: 2.0, lambda: 0.05, mean_velocity: [0.2, 0.0], rho_inf: 1.0, t_inf: 1.0, p_inf: 1.0, center: [5.0, 0.0] }
    }
}

fn normal_flux(q: &[f64], n: [f64; 2], gamma: f64) -> Vec4 {
    let rho = q[0];
    let (u, v) = (q[1] / rho, q[2] / rho);
    let p = (gamma - 1.0) * (q[3] - 0.5 * rho * (u * u + v * v));
    let un = u * n[0] + v * n[1];
    [rho * un, q[1] * un + p * n[0], q[2] * un + p * n[1], (q[3] + p) * un]
}

/// Columns of the physical flux: `[x-flux, y-flux]`, each a 4-vector.
pub fn euler_flux(q: &EulerState, gamma: f64) -> Result<[Vec4; 2]> {
    q.check(gamma)?;
    let c = q.conserved();
    Ok([normal_flux(&c, [1.0, 0.0], gamma), normal_flux(&c, [0.0, 1.0], gamma)])
}

fn jacobian_from_primitive(u: f64, v: f64, h: f64, n: [f64; 2], gamma: f64) -> Mat4 {
    let g1 = gamma - 1.0;
    let un = u * n[0] + v * n[1];
    let phi = 0.5 * g1 * (u * u + v * v);
    let vel = [u, v];
    let mut a = [[0.0; 4]; 4];
    a[0] = [0.0, n[0], n[1], 0.0];
    for i in 0..2 {
        a[i + 1][0] = phi * n[i] - vel[i] * un;
        for j in 0..2 {
            a[i + 1][j + 1] = vel[i] * n[j] - g1 * n[i] * vel[j] + if i == j { un } else { 0.0 };
        }
        a[i + 1][3] = g1 * n[i];
    }
    a[3] = [(phi - h) * un, h * n[0] - g1 * u * un, h * n[1] - g1 * v * un, gamma * un];
    a
}

/// Flux Jacobian `d(F n)/dq`, rows and columns ordered `(rho, rho u, rho v, rho E)`.
pub fn flux_jacobian(q: &EulerState, n: [f64; 2], gamma: f64) -> Result<Mat4> {
    q.check(gamma)?;
    let [u, v] = q.velocity();
    Ok(jacobian_from_primitive(u, v, q.enthalpy(gamma), n, gamma))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RoeAverage {
    pub rho: f64,
    pub velocity: [f64; 2],
    pub enthalpy: f64,
    pub sound_speed: f64,
}

fn roe_average_unchecked(qm: &[f64], qp: &[f64], gamma: f64) -> RoeAverage {
    let sm = qm[0].sqrt();
    let sp = qp[0].sqrt();
    let hm = enthalpy_of(qm, gamma);
    let hp = enthalpy_of(qp, gamma);
    let w = 1.0 / (sm + sp);
    let u = (qm[1] / sm + qp[1] / sp) * w;
    let v = (qm[2] / sm + qp[2] / sp) * w;
    let h = (sm * hm + sp * hp) * w;
    let a2 = (gamma - 1.0) * (h - 0.5 * (u * u + v * v));
    RoeAverage { rho: sm * sp, velocity: [u, v], enthalpy: h, sound_speed: a2.sqrt() }
}

fn enthalpy_of(q: &[f64], gamma: f64) -> f64 {
    let ke = 0.5 * (q[1] * q[1] + q[2] * q[2]) / q[0];
    (q[3] + (gamma - 1.0) * (q[3] - ke)) / q[0]
}

/// Roe-averaged primitives of two admissible states.
pub fn roe_average(qm: &EulerState, qp: &EulerState, gamma: f64) -> Result<RoeAverage> {
    qm.check(gamma)?;
    qp.check(gamma)?;
    let avg = roe_average_unchecked(&qm.conserved(), &qp.conserved(), gamma);
    if !(avg.sound_speed > 0.0) {
        return Err(Error::Inadmissible("Roe average has nonpositive sound speed squared".into()));
    }
    Ok(avg)
}

/// Right eigenvectors (as columns) and left eigenvectors (as rows) of the
/// flux Jacobian in direction `n`, with eigenvalues `un - a, un, un, un + a`.
pub fn eigensystem(avg: &RoeAverage, n: [f64; 2], gamma: f64) -> (Mat4, Mat4, Vec4) {
    let [u, v] = avg.velocity;
    let (h, a) = (avg.enthalpy, avg.sound_speed);
    let un = u * n[0] + v * n[1];
    let ut = -u * n[1] + v * n[0];
    let q2 = u * u + v * v;
    let b1 = (gamma - 1.0) / (a * a);
    let b2 = 0.5 * q2 * b1;
    let cols = [[1.0, u - a * n[0], v - a * n[1], h - a * un], [1.0, u, v, 0.5 * q2], [0.0, -n[1], n[0], ut], [1.0, u + a * n[0], v + a * n[1], h + a * un]];
    let mut r = [[0.0; 4]; 4];
    for (j, c) in cols.iter().enumerate() {
        for i in 0..4 {
            r[i][j] = c[i];
        }
    }
    let l = [
        [0.5 * (b2 + un / a), 0.5 * (-b1 * u - n[0] / a), 0.5 * (-b1 * v - n[1] / a), 0.5 * b1],
        [1.0 - b2, b1 * u, b1 * v, -b1],
        [-ut, -n[1], n[0], 0.0],
        [0.5 * (b2 - un / a), 0.5 * (-b1 * u + n[0] / a), 0.5 * (-b1 * v + n[1] / a), 0.5 * b1],
    ];
    (r, l, [un - a, un, un, un + a])
}

/// `|A| = R |Lambda| R^{-1}` at a Roe state.
pub fn roe_dissipation(avg: &RoeAverage, n: [f64; 2], gamma: f64) -> Mat4 {
    let (r, l, lam) = eigensystem(avg, n, gamma);
    let mut out = [[0.0; 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            out[i][j] = (0..4).map(|k| r[i][k] * lam[k].abs() * l[k][j]).sum();
        }
    }
    out
}

fn matvec(a: &Mat4, x: &[f64]) -> Vec4 {
    let mut y = [0.0; 4];
    for i in 0..4 {
        y[i] = a[i][0] * x[0] + a[i][1] * x[1] + a[i][2] * x[2] + a[i][3] * x[3];
    }
    y
}

fn roe_flux_unchecked(qm: &[f64], qp: &[f64], n: [f64; 2], gamma: f64) -> Vec4 {
    let fm = normal_flux(qm, n, gamma);
    let fp = normal_flux(qp, n, gamma);
    let abs_a = roe_dissipation(&roe_average_unchecked(qm, qp, gamma), n, gamma);
    let jump = [qm[0] - qp[0], qm[1] - qp[1], qm[2] - qp[2], qm[3] - qp[3]];
    let d = matvec(&abs_a, &jump);
    [0.5 * (fm[0] + fp[0] + d[0]), 0.5 * (fm[1] + fp[1] + d[1]), 0.5 * (fm[2] + fp[2] + d[2]), 0.5 * (fm[3] + fp[3] + d[3])]
}

/// Roe numerical flux `{F n} + |A(roe)| (q- - q+) / 2` through a face with normal `n` (from `-` to `+`).
pub fn roe_flux(qm: &EulerState, qp: &EulerState, n: [f64; 2], gamma: f64) -> Result<Vec4> {
    roe_average(qm, qp, gamma)?;
    Ok(roe_flux_unchecked(&qm.conserved(), &qp.conserved(), n, gamma))
}

/// Exact isentropic vortex translating with the mean flow (no periodic images).
pub fn isentropic_vortex(x: [f64; 2], t: f64, cfg: &EulerConfig) -> EulerState {
    let xt = x[0] - cfg.center[0] - cfg.mean_velocity[0] * t;
    let yt = x[1] - cfg.center[1] - cfg.mean_velocity[1] * t;
    vortex_at_offset(xt, yt, cfg)
}

fn vortex_at_offset(xt: f64, yt: f64, cfg: &EulerConfig) -> EulerState {
    let g = cfg.gamma;
    let r2 = xt * xt + yt * yt;
    let s = cfg.lambda / (2.0 * std::f64::consts::PI);
    let e = (0.5 * cfg.alpha * (1.0 - r2)).exp();
    let u = cfg.mean_velocity[0] - s * yt * e;
    let v = cfg.mean_velocity[1] + s * xt * e;
    let cp = g / (g - 1.0);
    let temp = cfg.t_inf - s * s * e * e / (2.0 * cfg.alpha * cp);
    let ratio = temp / cfg.t_inf;
    let rho = cfg.rho_inf * ratio.powf(1.0 / (g - 1.0));
    let p = cfg.p_inf * ratio.powf(g / (g - 1.0));
    EulerState::from_primitive(rho, [u, v], p, g)
}

/// Vortex on a periodic rectangle: the nearest periodic image of the translated center.
pub fn isentropic_vortex_periodic(x: [f64; 2], t: f64, cfg: &EulerConfig, lx: f64, ly: f64) -> EulerState {
    let wrap = |d: f64, l: f64| d - l * (d / l).round();
    let xt = wrap(x[0] - cfg.center[0] - cfg.mean_velocity[0] * t, lx);
    let yt = wrap(x[1] - cfg.center[1] - cfg.mean_velocity[1] * t, ly);
    vortex_at_offset(xt, yt, cfg)
}

#[derive(Debug, Clone, Copy)]
struct FaceInfo {
    owner: usize,
    neighbor: usize,
    axis: usize,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Part {
    Linear,
    Nonlinear,
    Full,
}

/// The discrete Euler operator on a periodic quadrilateral space.
#[derive(Debug, Clone)]
pub struct Euler {
    space: DgSpace,
    gamma: f64,
    np: usize,
    /// `w_i D_ia / w_a` stored at `[a * np + i]`.
    weak_d: Vec<f64>,
    /// `1 / w_0` (equal to `1 / w_k`).
    lift: f64,
    /// `(2/hx, 2/hy)` per element.
    scale: Vec<[f64; 2]>,
    faces: Vec<FaceInfo>,
    owner_nodes: [Vec<usize>; 2],
    neighbor_nodes: [Vec<usize>; 2],
}

impl Euler {
    pub fn new(space: DgSpace, gamma: f64) -> Result<Self> {
        let mesh = space.mesh();
        if mesh.dim() != 2 {
            return Err(Error::InvalidMesh("Euler needs a 2D mesh".into()));
        }
        if mesh.bc() != BoundaryKind::Periodic {
            return Err(Error::InvalidMesh("Euler runs support periodic boundaries only".into()));
        }
        if !(gamma > 1.0) {
            return Err(Error::InvalidInput(format!("gamma must exceed 1, got {gamma}")));
        }
        let basis = space.basis();
        let np = basis.len();
        let w = basis.weights();
        let d = basis.diff_matrix();
        let mut weak_d = vec![0.0; np * np];
        for a in 0..np {
            for i in 0..np {
                weak_d[a * np + i] = w[i] * d[(i, a)] / w[a];
            }
        }
        let scale = mesh.elements().iter().map(|e| [2.0 / e.size[0], 2.0 / e.size[1]]).collect();
        let faces = mesh
            .faces()
            .iter()
            .map(|f| FaceInfo { owner: f.owner, neighbor: f.neighbor_element().expect("periodic mesh").0, axis: f.owner_side.axis() })
            .collect();
        let owner_nodes = [space.side_nodes(Side::East).to_vec(), space.side_nodes(Side::North).to_vec()];
        let neighbor_nodes = [space.side_nodes(Side::West).to_vec(), space.side_nodes(Side::South).to_vec()];
        Ok(Euler { lift: 1.0 / w[0], space, gamma, np, weak_d, scale, faces, owner_nodes, neighbor_nodes })
    }

    pub fn space(&self) -> &DgSpace {
        &self.space
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn len(&self) -> usize {
        self.space.num_nodes() * NCOMP
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn npe(&self) -> usize {
        self.np * self.np
    }

    fn residual(&self, q: &[f64], out: &mut [f64], part: Part, reference: Option<&Reference>) {
        let np = self.np;
        let npe = self.npe();
        let g = self.gamma;
        let mut fx = vec![0.0; npe * NCOMP];
        let mut fy = vec![0.0; npe * NCOMP];
        for (e, sc) in self.scale.iter().enumerate() {
            let base = e * npe;
            for j in 0..npe {
                let qn = &q[(base + j) * NCOMP..(base + j + 1) * NCOMP];
                let (gx, gy) = match part {
                    Part::Full => (normal_flux(qn, [1.0, 0.0], g), normal_flux(qn, [0.0, 1.0], g)),
                    Part::Linear => {
                        let r = reference.unwrap();
                        (matvec(&r.ax[base + j], qn), matvec(&r.ay[base + j], qn))
                    }
                    Part::Nonlinear => {
                        let r = reference.unwrap();
                        let (lx, ly) = (matvec(&r.ax[base + j], qn), matvec(&r.ay[base + j], qn));
                        let (nx, ny) = (normal_flux(qn, [1.0, 0.0], g), normal_flux(qn, [0.0, 1.0], g));
                        (std::array::from_fn(|c| nx[c] - lx[c]), std::array::from_fn(|c| ny[c] - ly[c]))
                    }
                };
                fx[j * NCOMP..(j + 1) * NCOMP].copy_from_slice(&gx);
                fy[j * NCOMP..(j + 1) * NCOMP].copy_from_slice(&gy);
            }
            for b in 0..np {
                for a in 0..np {
                    let node = a + np * b;
                    let o = &mut out[(base + node) * NCOMP..(base + node + 1) * NCOMP];
                    o.fill(0.0);
                    let wd_a = &self.weak_d[a * np..(a + 1) * np];
                    let wd_b = &self.weak_d[b * np..(b + 1) * np];
                    for i in 0..np {
                        let cx = sc[0] * wd_a[i];
                        let cy = sc[1] * wd_b[i];
                        let jx = (i + np * b) * NCOMP;
                        let jy = (a + np * i) * NCOMP;
                        for c in 0..NCOMP {
                            o[c] += cx * fx[jx + c] + cy * fy[jy + c];
                        }
                    }
                }
            }
        }
        for (fi, f) in self.faces.iter().enumerate() {
            let n = if f.axis == 0 { [1.0, 0.0] } else { [0.0, 1.0] };
            let so = self.scale[f.owner][f.axis] * self.lift;
            let sn = self.scale[f.neighbor][f.axis] * self.lift;
            for (t, (&jo, &jn)) in self.owner_nodes[f.axis].iter().zip(&self.neighbor_nodes[f.axis]).enumerate() {
                let io = (f.owner * npe + jo) * NCOMP;
                let inb = (f.neighbor * npe + jn) * NCOMP;
                let qm = &q[io..io + NCOMP];
                let qp = &q[inb..inb + NCOMP];
                let linear = |r: &Reference| -> Vec4 {
                    let (am, ap) = if f.axis == 0 {
                        (&r.ax[f.owner * npe + jo], &r.ax[f.neighbor * npe + jn])
                    } else {
                        (&r.ay[f.owner * npe + jo], &r.ay[f.neighbor * npe + jn])
                    };
                    let (lm, lp) = (matvec(am, qm), matvec(ap, qp));
                    let jump: Vec4 = std::array::from_fn(|c| qm[c] - qp[c]);
                    let d = matvec(&r.face[fi * np + t], &jump);
                    std::array::from_fn(|c| 0.5 * (lm[c] + lp[c] + d[c]))
                };
                let flux: Vec4 = match part {
                    Part::Full => roe_flux_unchecked(qm, qp, n, g),
                    Part::Linear => linear(reference.unwrap()),
                    Part::Nonlinear => {
                        let nl = roe_flux_unchecked(qm, qp, n, g);
                        let l = linear(reference.unwrap());
                        std::array::from_fn(|c| nl[c] - l[c])
                    }
                };
                for c in 0..NCOMP {
                    out[io + c] -= so * flux[c];
                    out[inb + c] += sn * flux[c];
                }
            }
        }
    }

    fn reference(&self, qr: &[f64]) -> Result<Reference> {
        let g = self.gamma;
        let nn = self.space.num_nodes();
        let mut ax = Vec::with_capacity(nn);
        let mut ay = Vec::with_capacity(nn);
        for j in 0..nn {
            let s = EulerState::from_conserved(&qr[j * NCOMP..(j + 1) * NCOMP]);
            ax.push(flux_jacobian(&s, [1.0, 0.0], g)?);
            ay.push(flux_jacobian(&s, [0.0, 1.0], g)?);
        }
        let npe = self.npe();
        let mut face = Vec::with_capacity(self.faces.len() * self.np);
        for f in &self.faces {
            let n = if f.axis == 0 { [1.0, 0.0] } else { [0.0, 1.0] };
            for (&jo, &jn) in self.owner_nodes[f.axis].iter().zip(&self.neighbor_nodes[f.axis]) {
                let qm = EulerState::from_conserved(&qr[(f.owner * npe + jo) * NCOMP..][..NCOMP]);
                let qp = EulerState::from_conserved(&qr[(f.neighbor * npe + jn) * NCOMP..][..NCOMP]);
                face.push(roe_dissipation(&roe_average(&qm, &qp, g)?, n, g));
            }
        }
        Ok(Reference { ax, ay, face })
    }

    /// Largest `|u . n| + a` over nodes and both axes.
    pub fn max_speed(&self, q: &[f64]) -> f64 {
        q.chunks(NCOMP)
            .map(|c| {
                let s = EulerState::from_conserved(c);
                let [u, v] = s.velocity();
                u.abs().max(v.abs()) + s.sound_speed(self.gamma)
            })
            .fold(0.0, f64::max)
    }

    /// Integral of each conserved component over the domain (LGL quadrature).
    pub fn totals(&self, q: &[f64]) -> Vec4 {
        let w = self.space.basis().weights();
        let np = self.np;
        let mut tot = [0.0; 4];
        for (e, el) in self.space.mesh().elements().iter().enumerate() {
            let jac = 0.25 * el.size[0] * el.size[1];
            for j in 0..self.npe() {
                let wt = jac * w[j % np] * w[j / np];
                for c in 0..NCOMP {
                    tot[c] += wt * q[(e * self.npe() + j) * NCOMP + c];
                }
            }
        }
        tot
    }
}

#[derive(Debug, Clone)]
struct Reference {
    ax: Vec<Mat4>,
    ay: Vec<Mat4>,
    face: Vec<Mat4>,
}

/// Euler operator split at a frozen reference state.
#[derive(Debug, Clone)]
pub struct EulerSplit<'a> {
    sys: &'a Euler,
    reference: Reference,
}

impl LinearOperator for EulerSplit<'_> {
    fn dim(&self) -> usize {
        self.sys.len()
    }

    fn apply(&self, x: &[f64], y: &mut [f64]) {
        self.sys.residual(x, y, Part::Linear, Some(&self.reference));
    }
}

impl SplitOperator for EulerSplit<'_> {
    fn apply_nonlinear(&self, u: &[f64], out: &mut [f64]) {
        self.sys.residual(u, out, Part::Nonlinear, Some(&self.reference));
    }
}

impl SemiDiscreteSystem for Euler {
    type Split<'a> = EulerSplit<'a>;

    fn dim(&self) -> usize {
        self.len()
    }

    fn split_at<'a>(&'a self, reference: &[f64]) -> Result<EulerSplit<'a>> {
        if reference.len() != self.len() {
            return Err(Error::DimensionMismatch(format!("reference of length {} for {} unknowns", reference.len(), self.len())));
        }
        Ok(EulerSplit { sys: self, reference: self.reference(reference)? })
    }

    fn rhs(&self, u: &[f64], out: &mut [f64]) {
        self.residual(u, out, Part::Full, None);
    }
}

pub fn euler_split_operator<'a>(sys: &'a Euler, reference: &FieldState) -> Result<EulerSplit<'a>> {
    reference.check(sys.space(), NCOMP)?;
    sys.split_at(&reference.values)
}
