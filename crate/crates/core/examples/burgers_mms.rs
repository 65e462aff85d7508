//! Spatial convergence of the Burgers LDG discretization against a
//! manufactured solution, for polynomial orders 1 to 3.
//!
//! ```text
//! cargo run --release -p expdg --example burgers_mms
//! ```

use expdg::harness::{run_experiment, ExperimentConfig, ProblemId};

fn main() -> expdg::Result<()> {
    for k in 1..=3 {
        let mut cfg = ExperimentConfig::for_problem(ProblemId::BurgersMms);
        cfg.k = k;
        cfg.ne = vec![10, 20, 40, 80];
        cfg.jobs = 4;
        let report = run_experiment(&cfg)?;
        println!("k = {k} ({}, dt = {:e}, t = {})", cfg.integrator, cfg.dt[0], cfg.t_final);
        println!("  {:>5} {:>12} {:>7} {:>8}", "ne", "L2 error", "order", "Cr_d");
        for p in &report.points {
            let order = p.row.orders[0].map_or("-".to_string(), |o| format!("{o:.2}"));
            println!("  {:>5} {:>12.3e} {:>7} {:>8.3}", p.ne, p.row.errors[0], order, p.row.cr_d);
        }
    }
    Ok(())
}
