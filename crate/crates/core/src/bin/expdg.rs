//! Command-line experiment runner.
//!
//! ```text
//! expdg --config sweep.cfg --integrator epi2 --dt 0.5,0.25,0.1 --out epi2.csv
//! expdg --problem burgers-mms --k 2 --ne 20,40,80,160 --dt 5e-5 --tfinal 0.01
//! ```

use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use expdg::harness::{self, ExperimentConfig, ReferenceSpec, RunStatus};

#[derive(Parser, Debug)]
#[command(name = "expdg", about = "Run exponential DG convergence and stability experiments")]
struct Cli {
    /// Flat `key = value` configuration file; flags below override its entries.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    problem: Option<String>,
    #[arg(long)]
    integrator: Option<String>,
    #[arg(long)]
    k: Option<String>,
    /// Element counts, comma separated.
    #[arg(long)]
    ne: Option<String>,
    /// Step sizes, comma separated.
    #[arg(long)]
    dt: Option<String>,
    #[arg(long)]
    tfinal: Option<String>,
    #[arg(long)]
    flux: Option<String>,
    #[arg(long)]
    sigma: Option<String>,
    #[arg(long)]
    kappa: Option<String>,
    /// CSV output path (stdout when absent).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Extra `key=value` overrides, repeatable.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    set: Vec<String>,
    /// Only generate the configured reference solution and write it here.
    #[arg(long, value_name = "PATH")]
    write_reference: Option<PathBuf>,
}

fn overrides(cli: &Cli) -> Result<Vec<(String, String)>, String> {
    let mut out = Vec::new();
    let flags = [
        ("problem", &cli.problem),
        ("integrator", &cli.integrator),
        ("k", &cli.k),
        ("ne", &cli.ne),
        ("dt", &cli.dt),
        ("tfinal", &cli.tfinal),
        ("flux", &cli.flux),
        ("sigma", &cli.sigma),
        ("kappa", &cli.kappa),
    ];
    for (key, val) in flags {
        if let Some(v) = val {
            out.push((key.to_string(), v.clone()));
        }
    }
    if let Some(p) = &cli.out {
        out.push(("out".into(), p.display().to_string()));
    }
    for s in &cli.set {
        let (k, v) = s.split_once('=').ok_or_else(|| format!("--set expects KEY=VALUE, got '{s}'"))?;
        out.push((k.to_string(), v.to_string()));
    }
    Ok(out)
}

fn run(cli: &Cli) -> Result<bool, Box<dyn std::error::Error>> {
    let pairs = overrides(cli)?;
    let cfg = match &cli.config {
        Some(path) => ExperimentConfig::from_file(path, &pairs)?,
        None => ExperimentConfig::from_pairs(&pairs)?,
    };
    if let Some(path) = &cli.write_reference {
        let ReferenceSpec::Generate(spec) = &cfg.reference else {
            return Err("this configuration has no generated reference".into());
        };
        let r = harness::generate_reference(&cfg, spec)?;
        harness::write_reference(path, &r)?;
        eprintln!("wrote {} (k={}, ne={}, dt={:e})", path.display(), r.meta.k, r.meta.ne, r.meta.dt);
        return Ok(true);
    }
    let report = harness::run_experiment(&cfg)?;
    if cfg.out.is_none() {
        let comps: Vec<&str> = report.components.iter().map(String::as_str).collect();
        harness::write_csv(std::io::stdout().lock(), &comps, &report.rows())?;
    }
    Ok(report.points.iter().all(|p| p.row.status == RunStatus::Ok))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => {
            eprintln!("expdg: at least one run blew up (see the status column)");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("expdg: {e}");
            ExitCode::FAILURE
        }
    }
}
