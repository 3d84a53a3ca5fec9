//! `tbreg` — transport Bregman divergences from the command line.

use clap::{Parser, Subcommand};
use std::io;
use std::path::PathBuf;
use std::process::ExitCode;
use transport_bregman_cli::compare::cmd_compare;
use transport_bregman_cli::spec::{AxisRange, DensitySpec, SweepColumn, SweepSpec};
use transport_bregman_cli::sweep::cmd_gaussian_sweep;
use transport_bregman_cli::verify::cmd_verify;
use transport_bregman_cli::CliError;

/// Transport Bregman divergences between one-dimensional and Gaussian
/// densities: closed-form sweeps, pairwise comparison, self-verification.
#[derive(Parser)]
#[command(name = "tbreg", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Tabulate divergences between zero-mean Gaussians over a grid of
    /// standard deviations and write them as CSV.
    GaussianSweep {
        /// First-argument axis as MIN:MAX:STEPS (standard deviations).
        #[arg(long, default_value = "0.2:3.0:60")]
        sigma_x: String,
        /// Second-argument axis as MIN:MAX:STEPS (standard deviations).
        #[arg(long, default_value = "0.2:3.0:60")]
        sigma_y: String,
        /// Comma-separated subset of kl,tkl,tjs,w2.
        #[arg(long, default_value = "kl,tkl,tjs,w2")]
        divergences: String,
        /// Output CSV path.
        #[arg(long)]
        out: PathBuf,
    },
    /// Compare two densities under every divergence that applies to them.
    ///
    /// Density specs: gaussian:MEAN:VARIANCE, uniform:A:B, grid:PATH
    /// (two-column "x density" text), samples:PATH (one draw per line).
    Compare {
        /// First density (the divergence's left argument).
        #[arg(long)]
        p: String,
        /// Second density (the reference).
        #[arg(long)]
        q: String,
        /// Quadrature node budget (default 2048, minimum 16).
        #[arg(long)]
        nodes: Option<usize>,
        /// Quadrature endpoint clip in (0, 0.01) (default 1e-6).
        #[arg(long)]
        clip: Option<f64>,
    },
    /// Run the brute-force property suite and report every check.
    Verify {
        /// Seed for the randomized checks.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Optional CSV dump of the raw check numbers.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn run(cli: Cli) -> Result<u8, CliError> {
    match cli.command {
        Command::GaussianSweep {
            sigma_x,
            sigma_y,
            divergences,
            out,
        } => {
            let spec = SweepSpec {
                sigma_x: AxisRange::parse(&sigma_x)?,
                sigma_y: AxisRange::parse(&sigma_y)?,
                columns: SweepColumn::parse_list(&divergences)?,
            };
            cmd_gaussian_sweep(&spec, &out)?;
            Ok(0)
        }
        Command::Compare { p, q, nodes, clip } => {
            let p = DensitySpec::parse(&p)?;
            let q = DensitySpec::parse(&q)?;
            cmd_compare(&p, &q, nodes, clip, &mut io::stdout().lock())?;
            Ok(0)
        }
        Command::Verify { seed, out } => cmd_verify(seed, out.as_deref(), &mut io::stdout().lock()),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(2)
        }
    }
}
