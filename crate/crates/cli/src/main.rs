use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use tbell::commands::{self, DEFAULT_SHEAR_MAX, DEFAULT_SHEAR_MIN};
use tbell::config::{Overrides, Params};
use tbell::CliError;

/// Time-parameterized CHSH experiments: optimal settings, scans, Monte Carlo
/// runs, local-realist bounds and frame orderings.
#[derive(Debug, Parser)]
#[command(name = "tbell", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    flags: Flags,
}

#[derive(Debug, Args)]
struct Flags {
    /// Energy gap ΔE = E₋ − E₊ (default 1).
    #[arg(long, global = true, allow_negative_numbers = true)]
    delta_e: Option<f64>,
    /// E₊; use together with --e-minus instead of --delta-e.
    #[arg(long, global = true, allow_negative_numbers = true)]
    e_plus: Option<f64>,
    #[arg(long, global = true, allow_negative_numbers = true)]
    e_minus: Option<f64>,
    /// Initial phase t₀ of the optimal settings (default 0).
    #[arg(long, global = true, allow_negative_numbers = true)]
    t0: Option<f64>,
    /// Number of pairs to simulate.
    #[arg(long, global = true)]
    pairs: Option<u64>,
    /// RNG seed (default 0).
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// `uniform` or `fixed(i)` with i in 0..4.
    #[arg(long, global = true)]
    scheduler: Option<String>,
    /// Output directory for `simulate`, input directory for `verify`.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Number of rows in a `scan`.
    #[arg(long, global = true)]
    steps: Option<u64>,
    /// `key = value` file with defaults for the flags above.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print the CHSH-maximizing times and the resulting value.
    Optimal,
    /// Sweep a phase shear on wing 2 and tabulate the CHSH value.
    Scan {
        #[arg(long, allow_negative_numbers = true, default_value_t = DEFAULT_SHEAR_MIN)]
        shear_min: f64,
        #[arg(long, allow_negative_numbers = true, default_value_t = DEFAULT_SHEAR_MAX)]
        shear_max: f64,
    },
    /// Monte Carlo pair experiment at the optimal settings.
    Simulate,
    /// Exhaustive local-realist bounds.
    Lhv,
    /// Orderings of three events across inertial frames.
    Frames {
        /// Events η±, η′, η″ as `t,x`.
        #[arg(num_args = 3, allow_hyphen_values = true)]
        events: Vec<String>,
    },
    /// Recompute a `simulate` summary from its records.
    Verify,
}

impl Flags {
    fn overrides(&self) -> Overrides {
        Overrides {
            delta_e: self.delta_e,
            e_plus: self.e_plus,
            e_minus: self.e_minus,
            t0: self.t0,
            pairs: self.pairs,
            seed: self.seed,
            scheduler: self.scheduler.clone(),
            out: self.out.clone(),
            steps: self.steps,
        }
    }

    fn params(&self) -> Result<Params, CliError> {
        let file = match &self.config {
            Some(path) => Overrides::load(path)?,
            None => Overrides::default(),
        };
        self.overrides().resolve(&file)
    }
}

fn run(cli: &Cli) -> Result<String, CliError> {
    let params = cli.flags.params()?;
    match &cli.command {
        Command::Optimal => Ok(commands::optimal(&params)?.render()),
        Command::Scan {
            shear_min,
            shear_max,
        } => Ok(commands::scan(&params, *shear_min, *shear_max)?.render()),
        Command::Simulate => {
            let out = commands::simulate(&params)?;
            let mut text = out.manifest.to_kv().render_prefixed("# ");
            text.push_str(&out.summary);
            Ok(text)
        }
        Command::Lhv => Ok(commands::lhv()?.render()),
        Command::Frames { events } => Ok(commands::frames(events)?.render()),
        Command::Verify => {
            let dir = params
                .out
                .ok_or_else(|| CliError::Invalid("verify needs --out <dir>".into()))?;
            let summary = commands::verify(&dir)?;
            Ok(format!("# verified {}\n{summary}", dir.display()))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(text) => {
            print!("{text}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("tbell: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
