//! `aracodes`: design, verify, density evolution and simulation of
//! capacity-achieving ARA-type ensembles on the binary erasure channel.
//!
//! Every subcommand prints a JSON status object on stdout (or stderr when
//! the main product is streamed to stdout) and exits with 0 iff all its
//! checks pass.

mod commands;
mod grid;
mod output;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use ara_core::{BParam, EnsembleSpec, Family, Side};
use clap::{Args, Parser, Subcommand};

#[derive(Parser, Debug)]
#[command(name = "aracodes", version, about)]
struct Cli {
    /// Worker threads for simulation (0 = one per core).
    #[arg(long, global = true, env = "ARACODES_THREADS", default_value_t = 0)]
    threads: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Construct a degree-distribution pair and write it with its reports.
    Design {
        #[command(flatten)]
        ensemble: EnsembleArgs,
        /// Output JSON file (stdout when absent).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check residuals, membership, symmetry and reduction for a design file.
    Verify {
        /// Design JSON produced by `design`.
        pair: PathBuf,
        /// Tolerance for fixed-point residuals and the capacity identity.
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
        /// Tolerance for six-step versus reduced-map agreement.
        #[arg(long, default_value_t = 1e-8)]
        reduction_tol: f64,
        /// Report file (stdout when absent).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Density evolution over a grid of channel erasure probabilities.
    De {
        pair: PathBuf,
        /// `start:stop:step` (inclusive) or a single value.
        #[arg(long)]
        channel: String,
        #[command(flatten)]
        de: DeArgs,
        /// CSV file (stdout when absent).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Bisection for the density-evolution threshold.
    Threshold {
        pair: PathBuf,
        #[arg(long, default_value_t = 0.01)]
        lo: f64,
        #[arg(long, default_value_t = 0.99)]
        hi: f64,
        /// Bracket width at which bisection stops.
        #[arg(long, default_value_t = 1e-4)]
        tol_p: f64,
        #[command(flatten)]
        de: DeArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Monte Carlo erasure decoding on sampled Tanner graphs.
    Simulate {
        #[command(flatten)]
        ensemble: EnsembleArgs,
        /// Target transmitted block length.
        #[arg(long)]
        n: usize,
        /// `start:stop:step` (inclusive) or a single value.
        #[arg(long)]
        channel: String,
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        trials: u64,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Outer code rate `a/b`, adding `b - a` random parity checks.
        #[arg(long)]
        outer: Option<String>,
        /// Fraction of punctured bits revealed to the decoder.
        #[arg(long, default_value_t = ara_core::sim::DEFAULT_PILOT_FRACTION)]
        pilots: f64,
        /// Sample one graph for all trials instead of one per trial.
        #[arg(long)]
        fixed_graph: bool,
        /// Node-distribution tail mass dropped when realizing degrees.
        #[arg(long, default_value_t = ara_core::sim::DEFAULT_TAIL_MASS)]
        tail_mass: f64,
        /// Write the adjacency list of one sampled graph here.
        #[arg(long)]
        dump_graph: Option<PathBuf>,
        /// CSV file (stdout when absent).
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args, Debug, Clone)]
struct EnsembleArgs {
    #[arg(long)]
    family: Family,
    /// Design erasure probability.
    #[arg(long)]
    p: Option<f64>,
    /// Matched-family parameter: a number or `auto`.
    #[arg(long, conflicts_with_all = ["bit_regular", "check_regular"])]
    b: Option<BParam>,
    /// Regular bit-side node degree.
    #[arg(long, conflicts_with = "check_regular")]
    bit_regular: Option<u32>,
    /// Regular check-side node degree.
    #[arg(long)]
    check_regular: Option<u32>,
    /// LDPC bit-side edge polynomial, e.g. `x^2`.
    #[arg(long)]
    lambda: Option<String>,
    /// LDPC check-side edge polynomial, e.g. `x^5`.
    #[arg(long)]
    rho: Option<String>,
    /// Number of series coefficients.
    #[arg(long, default_value_t = ara_core::series::DEFAULT_PRECISION)]
    precision: usize,
}

impl EnsembleArgs {
    fn spec(&self) -> Result<EnsembleSpec, String> {
        let need_p = || self.p.ok_or_else(|| format!("--p is required for family {}", self.family));
        let spec = match self.family {
            Family::Ldpc => {
                let (Some(l), Some(r)) = (&self.lambda, &self.rho) else {
                    return Err("ldpc needs --lambda and --rho".into());
                };
                EnsembleSpec { p: self.p.unwrap_or(0.5), ..EnsembleSpec::ldpc(l, r) }
            }
            family => match (self.b, self.bit_regular, self.check_regular) {
                (Some(b), None, None) => EnsembleSpec::matched(family, need_p()?, b),
                (None, Some(d), None) => EnsembleSpec::regular(family, need_p()?, d, Side::Bit),
                (None, None, Some(d)) => EnsembleSpec::regular(family, need_p()?, d, Side::Check),
                _ => return Err(format!("{family} needs one of --b, --bit-regular or --check-regular")),
            },
        };
        Ok(spec.with_precision(self.precision))
    }
}

#[derive(Args, Debug, Clone)]
struct DeArgs {
    #[arg(long, default_value_t = 10_000)]
    max_iter: usize,
    /// Fraction of punctured bits assumed known when starting DE.
    #[arg(long, default_value_t = 1e-6)]
    de_pilots: f64,
}

impl DeArgs {
    fn config(&self) -> ara_core::de::DeConfig {
        ara_core::de::DeConfig { max_iter: self.max_iter, pilot_fraction: self.de_pilots, ..Default::default() }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(cli.threads).build_global() {
        log::warn!("thread pool already configured: {e}");
    }
    let status = commands::run(cli.command);
    let to_stderr = status.streamed;
    let text = output::to_json(&status.body);
    // A closed pipe on the status stream is not worth a panic.
    let _ = if to_stderr {
        writeln!(std::io::stderr(), "{text}")
    } else {
        writeln!(std::io::stdout(), "{text}")
    };
    if status.ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
