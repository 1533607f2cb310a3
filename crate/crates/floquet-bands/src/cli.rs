use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::commands::{cmd_bands, cmd_hill_compare, cmd_verify, Outcome};
use crate::config::{ConfigLayer, OutputFormat, RunConfig};
use crate::error::{exit, CliError};
use crate::presets::Preset;

/// Floquet discriminants, band structures and PT-reality certificates for
/// complex potentials of period π.
#[derive(Debug, Parser)]
#[command(name = "floquet-bands", version)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check the reality and composition identities over an energy grid.
    Verify(RunArgs),
    /// Scan the discriminant and write the band table.
    Bands(RunArgs),
    /// Compare the lowest three bands with the plane-wave (Hill) oracle.
    HillCompare(RunArgs),
}

#[derive(Debug, Clone, Default, Args)]
pub struct RunArgs {
    /// Potential V(x), e.g. "cos(2*x)+0.3i*sin(2*x)".
    #[arg(long)]
    pub potential: Option<String>,
    /// Named potential: free, mathieu, pt-lattice or pt-exp.
    #[arg(long)]
    pub preset: Option<Preset>,
    /// Gain/loss strength for the pt-lattice preset.
    #[arg(long, allow_negative_numbers = true)]
    pub v0: Option<f64>,
    /// Energy window as a:b.
    #[arg(long, value_name = "A:B", allow_hyphen_values = true, value_parser = parse_range)]
    pub e_range: Option<(f64, f64)>,
    /// Number of scan energies.
    #[arg(long = "n")]
    pub n_samples: Option<usize>,
    /// RK4 steps per period (even, at least 16).
    #[arg(long = "steps")]
    pub steps_per_period: Option<usize>,
    /// Plane-wave cutoff N of the Hill oracle.
    #[arg(long)]
    pub hill_n: Option<usize>,
    #[arg(long)]
    pub format: Option<OutputFormat>,
    /// Output file.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// JSON config file; flags take precedence over its values.
    #[arg(long)]
    pub config: Option<PathBuf>,
}

fn parse_range(s: &str) -> Result<(f64, f64), String> {
    let (a, b) = s
        .split_once(':')
        .ok_or_else(|| format!("expected a:b, got '{s}'"))?;
    let num = |t: &str| t.trim().parse::<f64>().map_err(|_| format!("bad number '{t}' in '{s}'"));
    Ok((num(a)?, num(b)?))
}

impl RunArgs {
    pub fn layer(&self) -> ConfigLayer {
        ConfigLayer {
            potential: self.potential.clone(),
            preset: self.preset,
            v0: self.v0,
            e_min: self.e_range.map(|r| r.0),
            e_max: self.e_range.map(|r| r.1),
            n_samples: self.n_samples,
            steps_per_period: self.steps_per_period,
            hill_n: self.hill_n,
            tol_identity: None,
            tol_root: None,
            merge_tol: None,
            output_format: self.format,
            output_path: self.out.clone(),
        }
    }

    pub fn resolve(&self) -> Result<RunConfig, CliError> {
        let file = match &self.config {
            Some(path) => ConfigLayer::from_file(path)?,
            None => ConfigLayer::default(),
        };
        RunConfig::resolve(self.layer().over(file))
    }
}

impl Command {
    pub fn execute(&self) -> Result<Outcome, CliError> {
        match self {
            Command::Verify(a) => cmd_verify(&a.resolve()?),
            Command::Bands(a) => cmd_bands(&a.resolve()?),
            Command::HillCompare(a) => cmd_hill_compare(&a.resolve()?),
        }
    }
}

/// Runs the program on `args` and returns the exit status.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { exit::USAGE } else { exit::OK };
        }
    };
    match cli.command.execute() {
        Ok(outcome) => {
            println!("{}", outcome.summary);
            for f in &outcome.files {
                println!("wrote {}", f.display());
            }
            if outcome.passed {
                exit::OK
            } else {
                eprintln!("error: check failed");
                exit::IDENTITY
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
