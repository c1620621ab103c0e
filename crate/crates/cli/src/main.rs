mod presets;
mod run;
mod scenario;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use run::{CliError, Result};
use scenario::{Format, Overrides, Scenario};

/// Modified Hong-Ou-Mandel interference simulator.
///
/// Units: linewidths and detunings in rad/ps, delays in ps.
#[derive(Parser)]
#[command(name = "mhom", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// List the built-in presets.
    List,
    /// Print a preset as an editable TOML scenario.
    Show { preset: String },
    /// Run a preset or a TOML scenario file and write its data files.
    Run(RunArgs),
}

#[derive(Args)]
struct RunArgs {
    /// Preset name (see `mhom list`).
    #[arg(required_unless_present = "config", conflicts_with = "config")]
    preset: Option<String>,
    /// TOML scenario file.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Path imbalance τ₀ in ps.
    #[arg(long, allow_hyphen_values = true)]
    tau0: Option<f64>,
    /// Interferometer phase φ in rad.
    #[arg(long, allow_hyphen_values = true)]
    phi: Option<f64>,
    /// Sum-frequency linewidth σ₊ in rad/ps.
    #[arg(long)]
    sigma_plus: Option<f64>,
    /// Difference-frequency linewidth σ₋ in rad/ps.
    #[arg(long)]
    sigma_minus: Option<f64>,
    /// Nodes per grid axis (delay and detuning).
    #[arg(long)]
    grid: Option<usize>,
    /// Output directory.
    #[arg(long, default_value = ".")]
    out: PathBuf,
    #[arg(long, value_enum)]
    format: Option<Format>,
}

fn load(args: &RunArgs) -> Result<Scenario> {
    let mut scenario = match (&args.preset, &args.config) {
        (Some(name), _) => presets::find(name)
            .ok_or_else(|| CliError::Config(format!("unknown preset '{name}'")))?
            .scenario(),
        (None, Some(path)) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
            toml::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?
        }
        (None, None) => return Err(CliError::Config("give a preset or --config".into())),
    };
    scenario.apply(&Overrides {
        tau0: args.tau0,
        phi: args.phi,
        sigma_plus: args.sigma_plus,
        sigma_minus: args.sigma_minus,
        grid: args.grid,
        format: args.format,
    });
    Ok(scenario)
}

fn write_files(dir: &Path, files: &[(String, String)]) -> Result<()> {
    std::fs::create_dir_all(dir)?;
    for (name, contents) in files {
        std::fs::write(dir.join(name), contents)?;
        log::info!("wrote {}", dir.join(name).display());
    }
    Ok(())
}

fn execute(cli: Cli) -> Result<()> {
    match cli.command {
        Command::List => {
            for p in presets::PRESETS {
                println!("{:<16}{}", p.name, p.description);
            }
        }
        Command::Show { preset } => {
            let p = presets::find(&preset)
                .ok_or_else(|| CliError::Config(format!("unknown preset '{preset}'")))?;
            let text = toml::to_string(&p.scenario()).map_err(|e| CliError::Failed(e.to_string()))?;
            print!("{text}");
        }
        Command::Run(args) => {
            let scenario = load(&args)?;
            let out = run::run(&scenario)?;
            write_files(&args.out, &out.files)?;
            println!("{}", out.summary);
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match execute(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let record = serde_json::json!({ "error": e.kind(), "message": e.to_string() });
            eprintln!("{record}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
