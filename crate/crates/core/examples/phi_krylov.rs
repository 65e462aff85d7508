//! Matrix-free evaluation of `phi_0(dt L) b0 + dt phi_1(dt L) b1 + dt^2 phi_2(dt L) b2`
//! for a stiff 1D diffusion operator, checked against a dense evaluation.
//!
//! ```text
//! cargo run --release -p expdg --example phi_krylov
//! ```

use expdg::phi::{phi_combination, phi_combination_dense, phi_scalar, KrylovSettings, LinearOperator, PhiCombinationProblem};
use nalgebra::{DMatrix, DVector};

/// Periodic second difference `nu (u[i-1] - 2 u[i] + u[i+1]) / dx^2`, applied without a matrix.
struct Diffusion {
    n: usize,
    coef: f64,
}

impl LinearOperator for Diffusion {
    fn dim(&self) -> usize {
        self.n
    }

    fn apply(&self, x: &[f64], y: &mut [f64]) {
        let n = self.n;
        for i in 0..n {
            y[i] = self.coef * (x[(i + n - 1) % n] - 2.0 * x[i] + x[(i + 1) % n]);
        }
    }
}

fn main() -> expdg::Result<()> {
    println!("phi_k(0) = 1/k!: {:?}", (0..4).map(|k| phi_scalar(k, 0.0)).collect::<Vec<_>>());
    println!("phi_1(-1e-9) = {:.15}", phi_scalar(1, -1e-9));

    let n = 200;
    let dx = 1.0 / n as f64;
    let op = Diffusion { n, coef: 0.01 / (dx * dx) };
    let x = |i: usize| i as f64 * dx;
    let b0: Vec<f64> = (0..n).map(|i| (2.0 * std::f64::consts::PI * x(i)).sin()).collect();
    let b1: Vec<f64> = (0..n).map(|i| (x(i) - 0.5).abs()).collect();
    let b2: Vec<f64> = (0..n).map(|i| if x(i) < 0.5 { 1.0 } else { -1.0 }).collect();

    let mut l = DMatrix::zeros(n, n);
    for j in 0..n {
        let mut e = vec![0.0; n];
        e[j] = 1.0;
        let mut col = vec![0.0; n];
        op.apply(&e, &mut col);
        l.set_column(j, &DVector::from_vec(col));
    }
    let dense_b: Vec<DVector<f64>> = [&b0, &b1, &b2].iter().map(|v| DVector::from_column_slice(v)).collect();

    println!("\n{:>6} {:>10} {:>12} {:>10} {:>8}", "dt", "|dt L|", "rel. error", "iters", "substeps");
    for dt in [1e-3, 1e-2, 1e-1, 1.0] {
        let prob = PhiCombinationProblem { op: &op, b: vec![&b0, &b1, &b2], dt, settings: KrylovSettings::default().with_tol(1e-10) };
        let (w, stats) = phi_combination(&prob)?;
        let exact = phi_combination_dense(&l, &dense_b, dt)?;
        let err = (DVector::from_vec(w) - &exact).norm() / exact.norm();
        println!("{dt:>6} {:>10.1e} {err:>12.2e} {:>10} {:>8}", 4.0 * op.coef * dt, stats.iterations, stats.substeps);
    }
    Ok(())
}
