use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use polaron_sim::error::ChartError;
use polaron_sim::presets::{self, Command, Preset};
use polaron_sim::run::{execute, plot_from_csv, write_outputs};
use polaron_sim::{Config, ConfigError, SimError};

#[derive(Parser)]
#[command(
    name = "polaron",
    version,
    about = "Steady-state cavity squeezing of a phonon-dressed quantum dot"
)]
struct Cli {
    /// Worker threads for sweeps (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Phonon-induced scattering rates against detuning.
    Rates(Inputs),
    /// One steady state and its observables.
    Steady(Inputs),
    /// Variance and cavity moments against Δ_cl or Δ_xl.
    Sweep(Inputs),
    /// Exciton coherence over a Δ_xl × Δ_cl grid.
    Contour(Inputs),
    /// Variance and coherence against bath temperature.
    TempSweep(Inputs),
    /// Fock populations and cavity density-matrix elements.
    Fock(Inputs),
    /// Redraw a preset's charts from CSV files in --out.
    Plot(Inputs),
}

#[derive(Args)]
struct Inputs {
    /// JSON configuration; replaces the preset's configuration when both are given.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Figure recipe: fig2a, fig2b, fig3a, fig3b, fig4, fig5, fig7 or fig8.
    #[arg(long)]
    preset: Option<String>,
    /// Output directory.
    #[arg(long, default_value = "out")]
    out: PathBuf,
}

/// Preset whose charts a bare `--config` run draws.
fn default_preset(command: Command) -> Option<&'static str> {
    match command {
        Command::Rates => Some("fig2a"),
        Command::Sweep => Some("fig3b"),
        Command::Contour => Some("fig3a"),
        Command::TempSweep => Some("fig7"),
        Command::Fock => Some("fig5"),
        Command::Steady => None,
    }
}

fn load_preset(name: &str, command: Option<Command>) -> Result<Preset, ConfigError> {
    let p = presets::load(name)?;
    if let Some(c) = command {
        if c != p.command {
            return Err(ConfigError::WrongCommand {
                preset: name.to_string(),
                expected: p.command.name().to_string(),
                requested: c.name().to_string(),
            });
        }
    }
    Ok(p)
}

fn run(command: Command, inputs: &Inputs) -> Result<(), SimError> {
    let preset = inputs
        .preset
        .as_deref()
        .map(|n| load_preset(n, Some(command)))
        .transpose()?;
    let config = match (&inputs.config, &preset) {
        (Some(path), _) => Config::load(path)?,
        (None, Some(p)) => p.config.clone(),
        (None, None) => return Err(ConfigError::NoInput.into()),
    };
    let (stem, panels, strict) = match &preset {
        Some(p) => (p.name.clone(), p.panels.clone(), true),
        None => {
            let panels = default_preset(command)
                .map(|n| presets::load(n).map(|p| p.panels))
                .transpose()?;
            (
                command.name().replace('-', "_"),
                panels.unwrap_or_default(),
                false,
            )
        }
    };
    let output = execute(command, &config)?;
    print!("{}", output.summary);
    let written = match write_outputs(&inputs.out, &stem, &output, &panels) {
        Err(SimError::Chart(ChartError::MissingColumn(c))) if !strict => {
            eprintln!(
                "note: default charts skipped, column `{c}` not produced by this configuration"
            );
            write_outputs(&inputs.out, &stem, &output, &[])?
        }
        other => other?,
    };
    for path in written {
        println!("wrote {}", path.display());
    }
    Ok(())
}

fn plot(inputs: &Inputs) -> Result<(), SimError> {
    let name = inputs.preset.as_deref().ok_or(ConfigError::NoInput)?;
    let preset = load_preset(name, None)?;
    for path in plot_from_csv(&inputs.out, &preset.name, &preset.panels)? {
        println!("wrote {}", path.display());
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
        {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    let result = match &cli.command {
        Cmd::Rates(i) => run(Command::Rates, i),
        Cmd::Steady(i) => run(Command::Steady, i),
        Cmd::Sweep(i) => run(Command::Sweep, i),
        Cmd::Contour(i) => run(Command::Contour, i),
        Cmd::TempSweep(i) => run(Command::TempSweep, i),
        Cmd::Fock(i) => run(Command::Fock, i),
        Cmd::Plot(i) => plot(i),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
