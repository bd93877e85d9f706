use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use ellipsum::balance::{solve_from_toml, BalanceMode};
use ellipsum::{
    emit_report, parse_selection, parse_structured, run_suite, Format, HarnessError, Identity,
    SamplerConfig,
};

#[derive(Parser)]
#[command(
    name = "ellipsum",
    version,
    about = "Seeded numerical verification of elliptic hypergeometric identities"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Human,
    Structured,
}

impl From<FormatArg> for Format {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Human => Format::Human,
            FormatArg::Structured => Format::Structured,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Sample and check one identity, a comma-separated list, or `all`.
    /// `list` prints the identity names.
    Verify {
        identity: String,
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long, default_value_t = 1e-8)]
        tolerance: f64,
        /// Overrides the seed in the config file.
        #[arg(long, env = "ELLIPSUM_SEED")]
        seed: Option<u64>,
        #[arg(long)]
        trials: Option<u32>,
        #[arg(long, value_enum, default_value = "human")]
        format: FormatArg,
    },
    /// Solve a balancing constraint for its free parameter.
    SolveBalance {
        #[arg(value_enum)]
        mode: BalanceMode,
        #[arg(long)]
        params: PathBuf,
    },
    /// Re-render a structured report read from a file or stdin.
    Report {
        #[arg(long, value_enum, default_value = "human")]
        format: FormatArg,
        /// Structured report; `-` or absent reads stdin.
        input: Option<PathBuf>,
    },
}

fn read_input(path: Option<&PathBuf>) -> Result<String, HarnessError> {
    let mut text = String::new();
    match path {
        Some(p) if p.as_os_str() != "-" => {
            text = std::fs::read_to_string(p)
                .map_err(|e| HarnessError::Report(format!("{}: {e}", p.display())))?;
        }
        _ => {
            std::io::stdin()
                .read_to_string(&mut text)
                .map_err(|e| HarnessError::Report(e.to_string()))?;
        }
    }
    Ok(text)
}

fn run(cli: Cli) -> Result<u8, HarnessError> {
    match cli.command {
        Command::Verify {
            identity,
            config,
            tolerance,
            seed,
            trials,
            format,
        } => {
            if identity == "list" {
                for id in Identity::ALL {
                    println!("{id}");
                }
                return Ok(0);
            }
            let config =
                config.ok_or_else(|| HarnessError::Config("--config is required".into()))?;
            let mut cfg = SamplerConfig::load(&config)?;
            if let Some(seed) = seed {
                cfg.seed = seed;
            }
            if let Some(trials) = trials {
                cfg.trials = trials;
            }
            cfg.validate()?;
            if tolerance.is_nan() || tolerance <= 0.0 {
                return Err(HarnessError::Config(format!(
                    "tolerance must be positive, got {tolerance}"
                )));
            }
            let ids = parse_selection(&identity)?;
            let report = run_suite(&cfg, &ids, tolerance)?;
            print!("{}", emit_report(&report, format.into()));
            Ok(report.exit_code() as u8)
        }
        Command::SolveBalance { mode, params } => {
            let text = std::fs::read_to_string(&params)
                .map_err(|e| HarnessError::Config(format!("{}: {e}", params.display())))?;
            println!("{}", solve_from_toml(mode, &text)?);
            Ok(0)
        }
        Command::Report { format, input } => {
            let parsed = parse_structured(&read_input(input.as_ref())?)?;
            print!("{}", parsed.render(format.into()));
            Ok(if parsed.all_pass() { 0 } else { 1 })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
