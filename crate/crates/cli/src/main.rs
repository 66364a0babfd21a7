//! `mocc`: crossover-distance decoding experiments from the command line.

mod config;
mod chart;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use mocc_core::analysis::report::{approx_csv, num, pc_csv, sweep_csv};
use mocc_core::analysis::{approx_ber, sweep, Scheme};
use mocc_core::{
    build_weights_auto, crossover_distance, derive_params, level_sum_distance, min_crossover_vector, BitSeq,
};

use config::{ConfigError, RunConfig};

#[derive(Parser)]
#[command(name = "mocc", version, about = "Crossover-distance decoding over the diffusion ISI channel")]
struct Cli {
    /// Configuration file (`key = value` lines).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output file; defaults to the config's `out`, then stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Base seed, overriding the config.
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Tabulate P_c(l) and W_c(l) at the configured slot interval.
    Pc,
    /// Minimum crossover vector and distances between two bit strings.
    Distance { x: String, y: String },
    /// Monte Carlo BER sweep.
    Sweep {
        /// Also write a BER chart.
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Weight-enumerator BER approximation for conv_cd.
    Approx,
}

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("{0}")]
    Input(mocc_core::Error),
    #[error("{0}")]
    Numerical(mocc_core::Error),
    #[error("cannot write {path}: {source}")]
    Write { path: String, source: std::io::Error },
}

impl From<mocc_core::Error> for CliError {
    fn from(e: mocc_core::Error) -> Self {
        use mocc_core::Error as E;
        match e {
            E::Validation { .. } | E::Composition { .. } => CliError::Input(e),
            _ => CliError::Numerical(e),
        }
    }
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) | CliError::Input(_) => 2,
            CliError::Numerical(_) => 3,
            CliError::Write { .. } => 1,
        }
    }
}

fn write_to(path: Option<&Path>, text: &str) -> Result<(), CliError> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|source| CliError::Write { path: p.display().to_string(), source }),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn join<T: ToString>(items: &[T]) -> String {
    items.iter().map(ToString::to_string).collect::<Vec<_>>().join(",")
}

fn run(cli: Cli) -> Result<(), CliError> {
    let mut cfg = match &cli.config {
        Some(path) => RunConfig::load(path)?,
        None => RunConfig::default(),
    };
    if let Some(seed) = cli.seed {
        cfg.seed = seed;
    }
    let out = cli.out.clone().or_else(|| cfg.out.clone());
    let (ig, _) = derive_params(&cfg.physical)?;
    match cli.command {
        Command::Pc => {
            let w = build_weights_auto(ig, cfg.slot_interval, cfg.l_max)?;
            write_to(out.as_deref(), &pc_csv(w.probabilities(), w.weights()))
        }
        Command::Distance { x, y } => {
            let x: BitSeq = x.parse()?;
            let y: BitSeq = y.parse()?;
            let v = min_crossover_vector(x.as_slice(), y.as_slice())?;
            let mut report = format!(
                "levels: {}\nS_v: {}\nM_v: {}\nlevel_sum_distance: {}\n",
                join(v.levels()),
                v.sum(),
                v.max(),
                level_sum_distance(&v)
            );
            if cfg.slot_interval_given {
                let w = build_weights_auto(ig, cfg.slot_interval, cfg.l_max)?;
                report.push_str(&format!("crossover_distance: {}\n", num(crossover_distance(&v, &w))));
            }
            write_to(out.as_deref(), &report)
        }
        Command::Sweep { svg } => {
            let points = sweep(&cfg.experiment()?)?;
            write_to(out.as_deref(), &sweep_csv(&points))?;
            match svg.or_else(|| cfg.svg.clone()) {
                Some(path) => write_to(Some(&path), &chart::ber_svg(&points)),
                None => Ok(()),
            }
        }
        Command::Approx => {
            let code = cfg.code()?;
            let limits = cfg.approx_limits();
            let rows = cfg
                .approx_tb_grid
                .iter()
                .map(|&tb| Ok((tb, approx_ber(&code, ig, tb, &limits)?)))
                .collect::<Result<Vec<_>, CliError>>()?;
            write_to(out.as_deref(), &approx_csv(&Scheme::ConvCd(code).id(), &rows))
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
