//! Isentropic vortex advection with the Roe-flux Euler discretization and
//! EXPRB42, compared with the exact translated vortex.
//!
//! ```text
//! cargo run --release -p expdg --example euler_vortex
//! ```

use expdg::harness::{run_experiment, ExperimentConfig, ProblemId};

fn main() -> expdg::Result<()> {
    for k in 1..=2 {
        let mut cfg = ExperimentConfig::for_problem(ProblemId::EulerVortex);
        cfg.k = k;
        cfg.ne = vec![64, 256, 1024];
        cfg.t_final = 0.5;
        cfg.dt = vec![0.05];
        cfg.jobs = 3;
        let report = run_experiment(&cfg)?;
        println!("k = {k}, {} to t = {}", cfg.integrator, cfg.t_final);
        println!("  {:>5} {:>8} {:>11} {:>11} {:>11} {:>11} {:>6}", "ne", "h", "rho", "rho u", "rho v", "E", "Cr_a");
        for p in &report.points {
            let e = &p.row.errors;
            println!("  {:>5} {:>8.4} {:>11.3e} {:>11.3e} {:>11.3e} {:>11.3e} {:>6.2}", p.ne, p.row.scale, e[0], e[1], e[2], e[3], p.row.cr_a);
        }
        let orders: Vec<String> = report.orders(0).iter().map(|o| format!("{o:.2}")).collect();
        println!("  density orders: {}", orders.join(", "));
    }
    Ok(())
}
