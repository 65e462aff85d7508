//! Runs a flat `key = value` configuration file and prints the CSV report.
//!
//! ```text
//! cargo run --release -p expdg --example config_sweep
//! cargo run --release -p expdg --example config_sweep -- crates/core/examples/configs/shock_epi2.cfg k=3
//! ```
//!
//! Arguments after the file are `key=value` overrides.

use std::path::PathBuf;

use expdg::harness::{run_experiment, write_csv, ExperimentConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let path = args.next().map(PathBuf::from).unwrap_or_else(|| PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("examples/configs/mms_spatial.cfg"));
    let overrides = args
        .map(|a| a.split_once('=').map(|(k, v)| (k.to_string(), v.to_string())).ok_or(format!("expected key=value, got '{a}'")))
        .collect::<Result<Vec<_>, _>>()?;
    let cfg = ExperimentConfig::from_file(&path, &overrides)?;
    eprintln!("{}: {} with {}, k={}, {:?} sweep", path.display(), cfg.problem, cfg.integrator, cfg.k, cfg.sweep_kind());
    let report = run_experiment(&cfg)?;
    let comps: Vec<&str> = report.components.iter().map(String::as_str).collect();
    write_csv(std::io::stdout().lock(), &comps, &report.rows())?;
    Ok(())
}
