//! Command-line front end: `run`, `convergence` and `detect`.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use dgshock::harness::{cmd_convergence, cmd_run, detect, presets::PRESETS, RunConfig};
use dgshock::Error;

#[derive(Parser)]
#[command(name = "dgshock", version, about = "1D DG solver with modal-decay shock capturing")]
struct Cli {
    /// Directory for output files (overrides `output.directory`).
    #[arg(long, global = true)]
    output_dir: Option<PathBuf>,

    /// Set a config key, e.g. `--override dg.N=5`. Repeatable.
    #[arg(long = "override", value_name = "KEY=VALUE", global = true)]
    overrides: Vec<String>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one simulation. CONFIG is a TOML file or a preset name.
    Run { config: String },
    /// Run the refinement schedule of a config and write convergence.csv.
    Convergence { config: String },
    /// Print the smoothness report of a corpus function as JSON.
    Detect {
        function: String,
        #[arg(value_name = "N")]
        degree: usize,
    },
}

fn load(config: &str, overrides: &[String]) -> Result<RunConfig, Error> {
    let path = Path::new(config);
    if path.exists() {
        RunConfig::load(Some(path), overrides)
    } else if PRESETS.contains(&config) {
        let mut all = vec![format!("preset=\"{config}\"")];
        all.extend(overrides.iter().cloned());
        RunConfig::load(None, &all)
    } else {
        Err(Error::config("<file>", format!("`{config}` is neither a file nor a preset ({})", PRESETS.join(", "))))
    }
}

fn exit_code(e: &Error) -> u8 {
    if e.is_solver_failure() {
        3
    } else if matches!(e, Error::Io(_) | Error::Json(_)) {
        1
    } else {
        2
    }
}

fn out_dir(cli_dir: &Option<PathBuf>, cfg: &RunConfig) -> PathBuf {
    cli_dir.clone().unwrap_or_else(|| PathBuf::from(&cfg.output_directory))
}

fn execute(cli: Cli) -> Result<u8, Error> {
    match &cli.command {
        Command::Run { config } => {
            let cfg = load(config, &cli.overrides)?;
            let dir = out_dir(&cli.output_dir, &cfg);
            let s = cmd_run(&cfg, &dir)?;
            println!(
                "{}: N={} K={} t={} steps={} rejected={} -> {}",
                cfg.preset.as_deref().unwrap_or(cfg.kind.name()),
                s.n,
                s.k,
                s.final_time.unwrap_or(f64::NAN),
                s.accepted_steps,
                s.rejected_steps,
                dir.display()
            );
            Ok(0)
        }
        Command::Convergence { config } => {
            let cfg = load(config, &cli.overrides)?;
            let dir = out_dir(&cli.output_dir, &cfg);
            let t = cmd_convergence(&cfg, &dir)?;
            print!("{}", dgshock::harness::convergence::table_csv(&t));
            Ok(if t.failures() > 0 { 3 } else { 0 })
        }
        Command::Detect { function, degree } => {
            let r = detect(function, *degree)?;
            println!("{}", serde_json::to_string_pretty(&r)?);
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
