use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use dftgen::molio::{GeometryManifest, LengthUnit};
use dftgen::pipeline::{self, GenerateOptions, PipelineError};
use dftgen::{Precision, SCFOptions};

#[derive(Parser)]
#[command(name = "dftgen", version, about = "B3LYP labels for molecular conformers")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute energy/HOMO/LUMO/gap records for every manifest entry.
    Generate {
        #[arg(long)]
        manifest: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value = "sto-3g")]
        basis: String,
        #[arg(long, default_value = "f64")]
        precision: Precision,
        /// Defaults to the number of hardware threads.
        #[arg(long)]
        workers: Option<usize>,
        #[arg(long, default_value_t = 1)]
        grid_level: u32,
        #[arg(long, default_value_t = 50)]
        max_iter: usize,
        /// Hartree.
        #[arg(long, default_value_t = 0.01)]
        conv_std: f64,
        #[arg(long)]
        resume: bool,
        #[arg(long, default_value = "angstrom")]
        unit: LengthUnit,
        /// Also write the converged records here.
        #[arg(long)]
        clean: Option<PathBuf>,
    },
    /// Energy and gap agreement between two record files.
    Compare {
        #[arg(long)]
        a: PathBuf,
        #[arg(long)]
        b: PathBuf,
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Histogram of per-SMILES conformer gap spread.
    Variance {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 20)]
        bins: usize,
    },
}

fn execute(cmd: Command) -> Result<(), PipelineError> {
    match cmd {
        Command::Generate {
            manifest,
            out,
            basis,
            precision,
            workers,
            grid_level,
            max_iter,
            conv_std,
            resume,
            unit,
            clean,
        } => {
            let defaults = GenerateOptions::default();
            let opts = GenerateOptions {
                basis,
                scf: SCFOptions {
                    max_iterations: max_iter,
                    convergence_std: conv_std,
                    precision,
                    grid_level,
                    ..SCFOptions::default()
                },
                workers: workers.unwrap_or(defaults.workers),
                resume,
                unit,
            };
            let manifest = GeometryManifest::load(&manifest)?;
            let s = pipeline::run(&manifest, &opts, &out)?;
            println!(
                "{} entries: {} resumed, {} written ({} converged), {} failed in {:.1} s",
                s.total,
                s.resumed,
                s.written,
                s.converged,
                s.failures.len(),
                s.seconds
            );
            if let Some(path) = clean {
                let records = pipeline::read_records(&out)?;
                pipeline::write_records(&path, &pipeline::clean(&records))?;
            }
        }
        Command::Compare { a, b, report } => {
            let r = pipeline::compare(&pipeline::read_records(&a)?, &pipeline::read_records(&b)?)?;
            println!(
                "{} of {} compared: MAE energy {:.3} meV, MAE gap {:.3} meV, converged {:.1}% / {:.1}%",
                r.n_molecules,
                r.n_total,
                r.mae_energy_mev,
                r.mae_gap_mev,
                100.0 * r.convergence_rate_a,
                100.0 * r.convergence_rate_b
            );
            if let Some(path) = report {
                let text = serde_json::to_string_pretty(&r).expect("report serializes");
                std::fs::write(&path, text).map_err(|e| PipelineError::Io { path, source: e })?;
            }
        }
        Command::Variance { input, out, bins } => {
            let stats = pipeline::variance_stats(&pipeline::read_records(&input)?, bins);
            println!("{} SMILES with at least two converged conformers", stats.spreads.len());
            std::fs::write(&out, stats.histogram.to_csv()).map_err(|e| PipelineError::Io { path: out, source: e })?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info")).init();
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match execute(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_io() { 2 } else { 1 })
        }
    }
}
