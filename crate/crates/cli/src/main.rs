use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::Parser;
use k3walls::{emit, run, AnalysisConfig, Command, ConfigError, Format, RunError};

/// Exact Bridgeland wall-and-chamber calculator for K3 surfaces of Picard rank one.
///
/// Commands: walls, path, gieseker-bound, nef-divisor, hilb-nef, lagrangian,
/// is-geometric, spherical-solve, classify. Flags override values read from
/// `--config`. Rationals are written `p/q` or as integers.
#[derive(Parser, Debug)]
#[command(name = "k3walls", version)]
struct Cli {
    command: String,
    /// `key = value` config file.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    d: Option<String>,
    /// Mukai vector `r,c,s`.
    #[arg(long, allow_hyphen_values = true)]
    vector: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    b: Option<String>,
    /// `T = t²`.
    #[arg(long = "T", allow_hyphen_values = true)]
    t_sq: Option<String>,
    #[arg(long)]
    n: Option<String>,
    /// Interval such as `[-3/2,-1/2]`.
    #[arg(long = "b-range", allow_hyphen_values = true)]
    b_range: Option<String>,
    /// Interval such as `(0,2]`.
    #[arg(long = "T-range", allow_hyphen_values = true)]
    t_range: Option<String>,
    /// `r,c,s = value; ...` for spherical-solve.
    #[arg(long, allow_hyphen_values = true)]
    constraints: Option<String>,
    /// Falls back to K3WALLS_RANK_BOUND, then to 2|r| + 4.
    #[arg(long = "rank-bound")]
    rank_bound: Option<String>,
    /// text, json or svg; repeat or comma-separate for several.
    #[arg(long = "format")]
    format: Vec<String>,
    /// Output file. With several formats each gets its own extension.
    #[arg(long)]
    out: Option<String>,
}

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error(transparent)]
    Run(#[from] RunError),
    #[error("writing {path}: {source}")]
    Write {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

impl From<ConfigError> for CliError {
    fn from(e: ConfigError) -> Self {
        CliError::Run(e.into())
    }
}

fn build_config(cli: &Cli) -> Result<AnalysisConfig, ConfigError> {
    let command: Command = cli.command.parse()?;
    let mut config = match &cli.config {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
                path: path.display().to_string(),
                source,
            })?;
            AnalysisConfig::parse(&text, Some(command))?
        }
        None => AnalysisConfig::new(command),
    };
    let overrides = [
        ("d", &cli.d),
        ("vector", &cli.vector),
        ("b", &cli.b),
        ("T", &cli.t_sq),
        ("n", &cli.n),
        ("b_range", &cli.b_range),
        ("T_range", &cli.t_range),
        ("constraints", &cli.constraints),
        ("rank_bound", &cli.rank_bound),
        ("out", &cli.out),
    ];
    for (key, value) in overrides {
        if let Some(value) = value {
            config.set(key, value)?;
        }
    }
    if !cli.format.is_empty() {
        config.set("formats", &cli.format.join(","))?;
    }
    Ok(config)
}

fn output_path(out: &str, format: Format, several: bool) -> PathBuf {
    if several {
        Path::new(out).with_extension(format.extension())
    } else {
        PathBuf::from(out)
    }
}

fn execute(cli: &Cli) -> Result<(), CliError> {
    let config = build_config(cli)?;
    let report = run(&config)?;
    let formats = config.formats_or_default();
    // render everything first so a bad format leaves no partial output behind
    let rendered = formats
        .iter()
        .map(|&f| emit(&report, f).map(|text| (f, text)))
        .collect::<Result<Vec<_>, _>>()?;
    match &config.out {
        Some(out) => {
            for (format, text) in &rendered {
                let path = output_path(out, *format, rendered.len() > 1);
                std::fs::write(&path, text).map_err(|source| CliError::Write {
                    path: path.display().to_string(),
                    source,
                })?;
            }
        }
        None => {
            for (_, text) in &rendered {
                print!("{text}");
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("k3walls: {e}");
            let code = match &e {
                CliError::Run(run) => run.exit_code(),
                CliError::Write { .. } => 1,
            };
            ExitCode::from(code as u8)
        }
    }
}
