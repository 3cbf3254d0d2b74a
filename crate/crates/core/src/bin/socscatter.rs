use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use log::{error, warn};

use socscatter::io::{run, Command, Format, PartialConfig, RunConfig};
use socscatter::Error;

/// Two-body scattering in a 1D spin-orbit-coupled Fermi gas with Raman dressing.
///
/// Units: ħ = m = λ = 1. Energies in ħ²λ²/2μ, g in ħ²λ/m.
#[derive(Parser, Debug)]
#[command(name = "socscatter", version)]
struct Cli {
    #[command(subcommand)]
    command: Sub,
}

#[derive(Subcommand, Debug)]
enum Sub {
    /// All six wave vectors (branch, kind, flux) over an energy grid.
    Dispersion(Flags),
    /// Reflection/transmission probabilities and closed-channel occupations.
    Scatter(Flags),
    /// Reflection-resonance positions in [-Ω, 0] over a coupling grid.
    Resonances(Flags),
    /// Bound-state energies below the lowest threshold over a coupling grid.
    BoundStates(Flags),
}

#[derive(Args, Debug, Default)]
struct Flags {
    /// Raman coupling ħΩ.
    #[arg(long, allow_hyphen_values = true)]
    omega: Option<f64>,
    /// Contact coupling (attractive < 0).
    #[arg(long, allow_hyphen_values = true)]
    g: Option<f64>,
    /// Incident channel label (1..6).
    #[arg(long)]
    incident: Option<usize>,
    #[arg(long, allow_hyphen_values = true)]
    emin: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    emax: Option<f64>,
    #[arg(long)]
    steps: Option<usize>,
    #[arg(long, allow_hyphen_values = true)]
    gmin: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    gmax: Option<f64>,
    #[arg(long)]
    gsteps: Option<usize>,
    /// Output file (stdout if omitted).
    #[arg(long)]
    out: Option<PathBuf>,
    /// csv or json.
    #[arg(long)]
    format: Option<String>,
    /// key=value configuration file; flags take precedence.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Landmark exclusion radius for grid points.
    #[arg(long)]
    exclusion: Option<f64>,
    /// Omit the metadata header.
    #[arg(long)]
    no_meta: bool,
}

impl Flags {
    fn into_partial(self) -> Result<(Option<PathBuf>, PartialConfig), Error> {
        let format = self
            .format
            .as_deref()
            .map(str::parse::<Format>)
            .transpose()?;
        let partial = PartialConfig {
            omega: self.omega,
            g: self.g,
            incident: self.incident,
            emin: self.emin,
            emax: self.emax,
            steps: self.steps,
            gmin: self.gmin,
            gmax: self.gmax,
            gsteps: self.gsteps,
            out: self.out,
            format,
            exclusion: self.exclusion,
            no_meta: self.no_meta.then_some(true),
        };
        Ok((self.config, partial))
    }
}

fn configure_threads() {
    let Ok(raw) = std::env::var("SOCSCATTER_THREADS") else {
        return;
    };
    match raw.trim().parse::<usize>() {
        Ok(n) if n > 0 => {
            if let Err(e) = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build_global()
            {
                warn!("could not cap threads: {e}");
            }
        }
        _ => warn!("ignoring SOCSCATTER_THREADS={raw:?}"),
    }
}

fn execute(cli: Cli) -> Result<i32, Error> {
    let (command, flags) = match cli.command {
        Sub::Dispersion(f) => (Command::Dispersion, f),
        Sub::Scatter(f) => (Command::Scatter, f),
        Sub::Resonances(f) => (Command::Resonances, f),
        Sub::BoundStates(f) => (Command::BoundStates, f),
    };
    let (config_path, flags) = flags.into_partial()?;
    let base = match config_path {
        Some(path) => {
            let text = std::fs::read_to_string(&path)
                .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
            PartialConfig::parse(&text)?
        }
        None => PartialConfig::default(),
    };
    let config = RunConfig::resolve(command, base.overlay(flags))?;
    let output = run(&config)?;
    match &config.out {
        Some(path) => {
            let file =
                File::create(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
            let mut w = BufWriter::new(file);
            output.table.write(config.format, &mut w)?;
            w.flush().map_err(|e| Error::Io(e.to_string()))?;
        }
        None => {
            let stdout = io::stdout();
            let mut w = BufWriter::new(stdout.lock());
            output.table.write(config.format, &mut w)?;
            w.flush().map_err(|e| Error::Io(e.to_string()))?;
        }
    }
    if output.numerical_failures > 0 {
        error!(
            "{} grid points failed numerically",
            output.numerical_failures
        );
        return Ok(1);
    }
    Ok(0)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    configure_threads();
    let cli = Cli::parse();
    match execute(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("socscatter: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
