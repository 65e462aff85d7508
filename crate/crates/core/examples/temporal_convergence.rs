//! Temporal convergence on smooth Burgers against a generated reference.
//!
//! The reference (RK4 with a tiny step on the same mesh and order) is written
//! to a file on first use and reloaded, after a metadata check, by the
//! following sweeps.
//!
//! ```text
//! cargo run --release -p expdg --example temporal_convergence
//! ```

use expdg::harness::{run_experiment, ExperimentConfig, GenerateSpec, ProblemId, ReferenceSpec};
use expdg::integrators::IntegratorKind;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dir = scratch_dir()?;
    let path = dir.join("smooth_k3_ne20.ref");
    for kind in [IntegratorKind::Epi2, IntegratorKind::Exprb32, IntegratorKind::Exprb42] {
        let mut cfg = ExperimentConfig::for_problem(ProblemId::BurgersSmooth);
        cfg.integrator = kind;
        cfg.k = 3;
        cfg.ne = vec![20];
        cfg.dt = vec![0.1, 0.05, 0.025, 0.0125];
        cfg.jobs = 4;
        cfg.reference = ReferenceSpec::Generate(GenerateSpec { integrator: IntegratorKind::Rk4, dt: 1e-5, k: None, ne: None, file: Some(path.clone()) });
        let report = run_experiment(&cfg)?;
        let errs: Vec<String> = report.errors(0).iter().map(|e| format!("{e:.2e}")).collect();
        let orders: Vec<String> = report.orders(0).iter().map(|o| format!("{o:.2}")).collect();
        println!("{:>8}: errors {}  orders {}", kind.name(), errs.join(" "), orders.join(" "));
    }
    println!("reference stored at {}", path.display());
    Ok(())
}

fn scratch_dir() -> std::io::Result<std::path::PathBuf> {
    let dir = std::env::temp_dir().join("expdg-example");
    std::fs::create_dir_all(&dir)?;
    Ok(dir)
}
