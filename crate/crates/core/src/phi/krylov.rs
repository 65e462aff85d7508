//! Matrix-free Krylov evaluation of `sum_i dt^i phi_i(dt L) b_i`.
//!
//! The combination is the top block of `exp(A_aug) [b_0; e_p / eta]` for the
//! augmented operator `A_aug = [[dt L, eta B], [0, J]]`, `B = [dt^p b_p, ..., dt b_1]`
//! and `J` the nilpotent shift. That exponential action is integrated over
//! unit time with an adaptive sequence of substeps, each projected onto an
//! Arnoldi (or incomplete orthogonalization) basis.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::phi::dense::expm;

/// Matrix-free linear action `y = A x`. Must be safe for concurrent read-only use.
pub trait LinearOperator {
    fn dim(&self) -> usize;
    fn apply(&self, x: &[f64], y: &mut [f64]);
}

impl LinearOperator for DMatrix<f64> {
    fn dim(&self) -> usize {
        self.nrows()
    }

    fn apply(&self, x: &[f64], y: &mut [f64]) {
        let n = self.nrows();
        y.iter_mut().for_each(|v| *v = 0.0);
        for (j, &xj) in x.iter().enumerate() {
            if xj != 0.0 {
                let col = self.column(j);
                for i in 0..n {
                    y[i] += col[i] * xj;
                }
            }
        }
    }
}

impl<T: LinearOperator + ?Sized> LinearOperator for &T {
    fn dim(&self) -> usize {
        (**self).dim()
    }

    fn apply(&self, x: &[f64], y: &mut [f64]) {
        (**self).apply(x, y)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KrylovSettings {
    pub tol: f64,
    pub max_basis: usize,
    /// Full Arnoldi when `>= max_basis`, incomplete orthogonalization otherwise.
    pub orth_length: usize,
    pub initial_basis: usize,
    pub max_substeps: usize,
}

impl Default for KrylovSettings {
    fn default() -> Self {
        KrylovSettings { tol: 1e-12, max_basis: 128, orth_length: 2, initial_basis: 16, max_substeps: 40 }
    }
}

impl KrylovSettings {
    pub fn with_tol(mut self, tol: f64) -> Self {
        self.tol = tol;
        self
    }

    pub fn full_orthogonalization(mut self) -> Self {
        self.orth_length = self.max_basis;
        self
    }
}

/// Work counters for one or more combination evaluations.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct KrylovStats {
    pub substeps: usize,
    /// Arnoldi steps, i.e. operator applications.
    pub iterations: usize,
    pub max_basis_used: usize,
}

impl std::ops::AddAssign for KrylovStats {
    fn add_assign(&mut self, o: KrylovStats) {
        self.substeps += o.substeps;
        self.iterations += o.iterations;
        self.max_basis_used = self.max_basis_used.max(o.max_basis_used);
    }
}

/// Arnoldi relation `A V_m = V_{m+1} H` with `H` of size `(m+1) x m`.
#[derive(Debug, Clone)]
pub struct KrylovFactorization {
    /// `m` basis vectors, plus `v_{m+1}` unless the iteration broke down.
    pub basis: Vec<Vec<f64>>,
    pub hessenberg: DMatrix<f64>,
    pub beta: f64,
    pub breakdown: bool,
}

impl KrylovFactorization {
    pub fn size(&self) -> usize {
        self.hessenberg.ncols()
    }
}

struct Arnoldi<O> {
    op: O,
    orth_length: usize,
    beta: f64,
    basis: Vec<Vec<f64>>,
    /// Column `j` holds `h[0..=j+1][j]`.
    cols: Vec<Vec<f64>>,
    breakdown: bool,
    work: Vec<f64>,
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

impl<O: LinearOperator> Arnoldi<O> {
    fn new(op: O, seed: &[f64], orth_length: usize) -> Result<Self> {
        let beta = norm(seed);
        if beta == 0.0 || !beta.is_finite() {
            return Err(Error::InvalidInput(format!("Krylov seed has norm {beta}")));
        }
        let n = seed.len();
        Ok(Arnoldi {
            op,
            orth_length: orth_length.max(1),
            beta,
            basis: vec![seed.iter().map(|v| v / beta).collect()],
            cols: Vec::new(),
            breakdown: false,
            work: vec![0.0; n],
        })
    }

    fn size(&self) -> usize {
        self.cols.len()
    }

    /// One Arnoldi step; returns `false` once the space is invariant.
    fn step(&mut self) -> bool {
        if self.breakdown {
            return false;
        }
        let j = self.cols.len();
        let mut w = std::mem::take(&mut self.work);
        self.op.apply(&self.basis[j], &mut w);
        let wnorm0 = norm(&w);
        let start = (j + 1).saturating_sub(self.orth_length);
        let mut col = vec![0.0; j + 2];
        let passes = if self.orth_length > j { 2 } else { 1 };
        for _ in 0..passes {
            for i in start..=j {
                let v = &self.basis[i];
                let h = dot(&w, v);
                col[i] += h;
                w.iter_mut().zip(v).for_each(|(a, b)| *a -= h * b);
            }
        }
        let hn = norm(&w);
        col[j + 1] = hn;
        self.cols.push(col);
        if !(hn > 1e-12 * wnorm0.max(f64::MIN_POSITIVE)) {
            self.breakdown = true;
            self.work = w;
            return false;
        }
        let next: Vec<f64> = w.iter().map(|v| v / hn).collect();
        self.work = w;
        self.basis.push(next);
        true
    }

    fn hessenberg(&self, m: usize) -> DMatrix<f64> {
        let mut h = DMatrix::zeros(m + 1, m);
        for (j, col) in self.cols.iter().take(m).enumerate() {
            for (i, &v) in col.iter().enumerate() {
                h[(i, j)] = v;
            }
        }
        h
    }
}

/// Builds an `m`-step Krylov factorization of `op` from `seed`, stopping early on breakdown.
pub fn krylov_build<O: LinearOperator>(op: O, seed: &[f64], m: usize, orth_length: usize) -> Result<KrylovFactorization> {
    if seed.len() != op.dim() {
        return Err(Error::DimensionMismatch(format!("seed length {} vs operator {}", seed.len(), op.dim())));
    }
    let mut a = Arnoldi::new(op, seed, orth_length)?;
    while a.size() < m && a.step() {}
    let size = a.size();
    Ok(KrylovFactorization { hessenberg: a.hessenberg(size), beta: a.beta, breakdown: a.breakdown, basis: a.basis })
}

/// One evaluation of `w = sum_{i=0}^{p} dt^i phi_i(dt L) b_i`.
pub struct PhiCombinationProblem<'a, O: LinearOperator> {
    pub op: O,
    /// `b[0..=p]`, each of length `op.dim()`.
    pub b: Vec<&'a [f64]>,
    pub dt: f64,
    pub settings: KrylovSettings,
}

struct Augmented<'a, O> {
    op: &'a O,
    dt: f64,
    /// Columns of `eta B`, ordered `b_p .. b_1`.
    cols: Vec<Vec<f64>>,
    n: usize,
}

impl<O: LinearOperator> LinearOperator for Augmented<'_, O> {
    fn dim(&self) -> usize {
        self.n + self.cols.len()
    }

    fn apply(&self, x: &[f64], y: &mut [f64]) {
        let n = self.n;
        let p = self.cols.len();
        let (xt, xb) = x.split_at(n);
        let (yt, yb) = y.split_at_mut(n);
        self.op.apply(xt, yt);
        yt.iter_mut().for_each(|v| *v *= self.dt);
        for (c, col) in self.cols.iter().enumerate() {
            let s = xb[c];
            if s != 0.0 {
                yt.iter_mut().zip(col).for_each(|(a, b)| *a += s * b);
            }
        }
        for c in 0..p {
            yb[c] = if c + 1 < p { xb[c + 1] } else { 0.0 };
        }
    }
}

/// Evaluates the combination; returns the vector and work counters.
pub fn phi_combination<O: LinearOperator>(prob: &PhiCombinationProblem<'_, O>) -> Result<(Vec<f64>, KrylovStats)> {
    let n = prob.op.dim();
    let s = prob.settings;
    if prob.b.is_empty() {
        return Err(Error::InvalidInput("need at least b_0".into()));
    }
    if let Some(bad) = prob.b.iter().find(|b| b.len() != n) {
        return Err(Error::DimensionMismatch(format!("vector of length {} for operator of size {n}", bad.len())));
    }
    if !(prob.dt > 0.0) || !(s.tol > 0.0) || s.max_basis == 0 {
        return Err(Error::InvalidInput("dt, tol and max_basis must be positive".into()));
    }
    let mut stats = KrylovStats::default();

    // Drop trailing zero vectors; scale b_i by dt^i.
    let mut p = prob.b.len() - 1;
    while p > 0 && prob.b[p].iter().all(|&v| v == 0.0) {
        p -= 1;
    }
    let scaled: Vec<Vec<f64>> = (1..=p)
        .map(|i| {
            let f = prob.dt.powi(i as i32);
            prob.b[i].iter().map(|v| v * f).collect()
        })
        .collect();
    let bmax = scaled.iter().map(|b| norm(b)).fold(0.0, f64::max);
    let eta = if bmax > 0.0 { 2f64.powi(-(bmax.log2().round() as i32)) } else { 1.0 };
    let cols: Vec<Vec<f64>> = scaled.iter().rev().map(|b| b.iter().map(|v| v * eta).collect()).collect();
    let aug = Augmented { op: &prob.op, dt: prob.dt, cols, n };

    let mut y: Vec<f64> = prob.b[0].to_vec();
    if p > 0 {
        y.extend(std::iter::repeat_n(0.0, p - 1));
        y.push(1.0 / eta);
    }
    if y.iter().all(|&v| v == 0.0) {
        return Ok((vec![0.0; n], stats));
    }

    let max_m = s.max_basis;
    // An operator that fits in the basis budget has an exactly reachable invariant
    // subspace; incomplete orthogonalization would hide the breakdown.
    let orth = if aug.dim() <= max_m { usize::MAX } else { s.orth_length };
    let mut target_m = s.initial_basis.clamp(1, max_m);
    let mut t = 0.0f64;
    let mut tau = 1.0f64;
    let mut last_err = f64::NAN;
    let mut halvings = 0usize;
    while t < 1.0 {
        if stats.substeps >= s.max_substeps {
            return Err(Error::KrylovDivergence { estimate: last_err, substeps: stats.substeps });
        }
        tau = tau.min(1.0 - t);
        let mut arn = Arnoldi::new(&aug, &y, orth)?;
        let beta = arn.beta;
        let mut m;
        let (coeffs, err) = loop {
            while arn.size() < target_m && !arn.breakdown {
                arn.step();
                stats.iterations += 1;
            }
            m = arn.size();
            stats.max_basis_used = stats.max_basis_used.max(m);
            let h = arn.hessenberg(m);
            let (coeffs, err) = if arn.breakdown {
                let hm = h.view((0, 0), (m, m)).into_owned() * tau;
                let e = expm(&hm)?;
                (e.column(0).into_owned(), 0.0)
            } else {
                let mut hbar = DMatrix::zeros(m + 1, m + 1);
                hbar.view_mut((0, 0), (m + 1, m)).copy_from(&h);
                let e = expm(&(hbar * tau))?;
                let err = beta * e[(m, 0)].abs();
                (e.view((0, 0), (m, 1)).column(0).into_owned(), err)
            };
            last_err = err;
            if err <= s.tol * tau * beta {
                break (coeffs, err);
            }
            if m < max_m {
                target_m = ((m as f64 * 1.5).ceil() as usize).clamp(m + 1, max_m);
                continue;
            }
            tau *= 0.5;
            halvings += 1;
            if halvings > 60 {
                return Err(Error::KrylovDivergence { estimate: err, substeps: stats.substeps });
            }
        };
        let mut next = vec![0.0; y.len()];
        for (j, c) in coeffs.iter().enumerate() {
            let v = &arn.basis[j];
            let c = c * beta;
            next.iter_mut().zip(v).for_each(|(a, b)| *a += c * b);
        }
        y = next;
        t += tau;
        stats.substeps += 1;
        if err < 0.05 * s.tol * tau * beta && m <= target_m {
            tau *= 2.0;
        }
        target_m = m.max(s.initial_basis.min(max_m));
    }
    y.truncate(n);
    Ok((y, stats))
}

/// Dense reference: `sum_i dt^i phi_i(dt L) b_i` via [`phi_dense`](crate::phi::phi_dense).
pub fn phi_combination_dense(l: &DMatrix<f64>, b: &[DVector<f64>], dt: f64) -> Result<DVector<f64>> {
    let n = l.nrows();
    let mut out = DVector::zeros(n);
    let scaled = l * dt;
    for (i, bi) in b.iter().enumerate() {
        if bi.iter().all(|&v| v == 0.0) {
            continue;
        }
        let phi = crate::phi::dense::phi_dense(i, &scaled)?;
        out += phi * bi * dt.powi(i as i32);
    }
    Ok(out)
}
