use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use padovan_cli::{
    cmd_bounds, cmd_reduce, cmd_report, cmd_search, cmd_verify_all, CliError, CommandOutput, OutputFormat, RunConfig,
};
use rug::Integer;

#[derive(Parser)]
#[command(
    name = "padovan-verify",
    version,
    about = "Certify the repdigits that are sums of three Padovan numbers"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    #[command(flatten)]
    opts: Opts,
}

#[derive(Subcommand)]
enum Command {
    /// Exhaustive search over small indices.
    Search,
    /// Linear-form bounds and the absolute bound on the largest index.
    Bounds,
    /// Bounds followed by the three reduction stages.
    Reduce,
    /// The whole pipeline, ending in a single certificate.
    VerifyAll,
    /// Validate a certificate file and render it.
    Report { input: PathBuf },
}

#[derive(Args)]
struct Opts {
    /// Working precision in decimal digits.
    #[arg(long, global = true, default_value_t = 400)]
    precision: u32,
    #[arg(long, global = true, default_value_t = 500)]
    n_max: u32,
    #[arg(long, global = true, default_value_t = 100)]
    l_max: u32,
    /// Reduction modulus instead of the rounded absolute bound.
    #[arg(long, global = true)]
    m_override: Option<String>,
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Output format; json for runs, markdown for `report`.
    #[arg(long, global = true)]
    format: Option<OutputFormat>,
    /// Worker threads for the sweeps; defaults to all cores.
    #[arg(long, global = true)]
    threads: Option<usize>,
}

impl Opts {
    fn config(&self) -> Result<RunConfig, CliError> {
        let m_override = self.m_override.as_deref().map(parse_modulus).transpose()?;
        Ok(RunConfig {
            precision_digits: self.precision,
            n_max: self.n_max,
            l_max: self.l_max,
            m_override,
            output_path: self.out.clone(),
            format: self.format.unwrap_or_default(),
        })
    }
}

/// Accepts plain integers and `3e48` style powers.
fn parse_modulus(s: &str) -> Result<Integer, CliError> {
    let bad = || CliError::Config(format!("invalid modulus {s:?}"));
    match s.split_once(['e', 'E']) {
        Some((lead, exp)) => {
            let lead: Integer = lead.parse().map_err(|_| bad())?;
            let exp: u32 = exp.parse().map_err(|_| bad())?;
            Ok(lead * Integer::from(Integer::u_pow_u(10, exp)))
        }
        None => s.parse().map_err(|_| bad()),
    }
}

fn run(cli: Cli) -> Result<i32, CliError> {
    if let Some(n) = cli.opts.threads {
        if n == 0 {
            return Err(CliError::Config("--threads must be positive".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Config(e.to_string()))?;
    }
    let config = cli.opts.config()?;
    let output: CommandOutput = match cli.command {
        Command::Search => cmd_search(&config)?,
        Command::Bounds => cmd_bounds(&config)?,
        Command::Reduce => cmd_reduce(&config)?,
        Command::VerifyAll => cmd_verify_all(&config)?,
        Command::Report { input } => {
            let text = cmd_report(&input, cli.opts.format.unwrap_or(OutputFormat::Markdown))?;
            match &config.output_path {
                Some(path) => std::fs::write(path, text).map_err(|source| CliError::Io {
                    path: path.display().to_string(),
                    source,
                })?,
                None => print!("{text}"),
            }
            return Ok(0);
        }
    };
    for line in &output.summary {
        eprintln!("{line}");
    }
    if let Some(text) = output.persist(&config)? {
        print!("{text}");
    }
    Ok(output.status.code())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_status().code() as u8)
        }
    }
}
