//! Exponential integration far beyond the explicit stability limit.
//!
//! A steepening sine wave with a small viscosity is advanced with EPI2 at a
//! diffusive Courant number above one hundred, and with RK2 near its limit.
//!
//! ```text
//! cargo run --release -p expdg --example large_courant
//! ```

use expdg::burgers::{FluxKind, Sigma};
use expdg::harness::{run_point, ExperimentConfig, ProblemId};
use expdg::integrators::IntegratorKind;

fn main() -> expdg::Result<()> {
    let mut cfg = ExperimentConfig::for_problem(ProblemId::BurgersSmooth);
    cfg.k = 4;
    cfg.flux = FluxKind::Entropy;
    cfg.sigma = Sigma::ShockAdaptive;
    cfg.t_final = 1.0;
    println!("{:>8} {:>8} {:>8} {:>8} {:>14} {:>10} {:>8}", "method", "dt", "Cr_a", "Cr_d", "peak/initial", "krylov", "status");
    for (kind, dt) in [(IntegratorKind::Epi2, 0.1), (IntegratorKind::Exprb32, 0.1), (IntegratorKind::Rk2, 1e-4), (IntegratorKind::Rk2, 2e-4)] {
        cfg.integrator = kind;
        let p = run_point(&cfg, 40, dt, None)?;
        println!(
            "{:>8} {:>8} {:>8.2} {:>8.1} {:>14.4} {:>10} {:>8}",
            kind.name(),
            dt,
            p.row.cr_a,
            p.row.cr_d,
            p.peak_abs / p.initial_max_abs,
            p.row.krylov_iters,
            p.row.status
        );
    }
    Ok(())
}
