//! Generating, storing and reusing a reference solution.
//!
//! ```text
//! cargo run --release -p expdg --example reference_files
//! ```

use expdg::error::Error;
use expdg::harness::{generate_reference, load_reference, read_reference, write_reference, ExperimentConfig, GenerateSpec, ProblemId};
use expdg::integrators::IntegratorKind;

fn main() -> expdg::Result<()> {
    let mut cfg = ExperimentConfig::for_problem(ProblemId::BurgersSmooth);
    cfg.ne = vec![10, 20];
    cfg.t_final = 0.1;
    let spec = GenerateSpec { integrator: IntegratorKind::Rk4, dt: 1e-5, k: Some(6), ne: None, file: None };

    let path = std::env::temp_dir().join("expdg-smooth-k6.ref");
    let r = generate_reference(&cfg, &spec)?;
    write_reference(&path, &r)?;
    let text = std::fs::read_to_string(&path)?;
    println!("{}:", path.display());
    for line in text.lines().take(12) {
        println!("  {line}");
    }
    println!("  ...");

    let again = generate_reference(&cfg, &spec)?;
    let path2 = std::env::temp_dir().join("expdg-smooth-k6-again.ref");
    write_reference(&path2, &again)?;
    println!("regenerated file identical: {}", std::fs::read(&path)? == std::fs::read(&path2)?);

    let (meta, values) = read_reference(&path)?;
    println!("read back k={} ne={} dt={:e} with {} values", meta.k, meta.ne, meta.dt, values.len());
    load_reference(&path, &cfg, Some(&spec))?;
    println!("reuse with the same configuration: ok");

    cfg.kappa *= 2.0;
    match load_reference(&path, &cfg, Some(&spec)) {
        Err(Error::ReferenceMismatch(msg)) => println!("reuse after changing kappa rejected:\n  {msg}"),
        other => println!("unexpected: {:?}", other.map(|r| r.meta)),
    }
    Ok(())
}
