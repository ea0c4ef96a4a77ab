use std::path::{Path, PathBuf};
use std::process::ExitCode;

use altxxz_cli::emit::{
    fits, fits_table, majorization_table, phase_diagram_table, points_table, pseudo_points,
    pseudo_table, renyi_table, spectrum_table, sweep_tables,
};
use altxxz_cli::recipe::figure_recipe;
use altxxz_cli::table::{Format, Table};
use altxxz_cli::validate::{run_criterion, CRITERIA, EXPECTED_FAILURES};
use altxxz_cli::{run_sweep, CliError, Result, RunOptions, SweepConfig, SweepRun};
use clap::{Parser, Subcommand};

#[derive(Parser)]
#[command(
    name = "altxxz",
    version,
    about = "Entanglement convertibility sweeps of the bond-alternating XXZ chain"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Sweep configuration (TOML).
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Output directory; overrides the config.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Worker threads; 0 uses one per core.
    #[arg(long, global = true)]
    workers: Option<usize>,

    /// Evaluate every point even if a cached record exists.
    #[arg(long, global = true)]
    no_cache: bool,

    #[arg(long, global = true, default_value = "csv")]
    format: Format,

    /// Lanczos start-vector seed; overrides the config.
    #[arg(long, global = true)]
    seed: Option<u64>,
}

#[derive(Subcommand)]
enum Command {
    /// Run a sweep and write all per-point tables.
    Sweep,
    /// Write the Renyi-entropy table with DLC signs and the per-point summary.
    Dlc,
    /// Write the majorization table.
    Majorize,
    /// Write the entanglement spectrum table.
    Spectrum,
    /// Pseudo-critical points and their power-law extrapolation.
    Scaling,
    /// Critical points for every fixed value of the config.
    PhaseDiagram,
    /// Print (or with --out, write) a named recipe config.
    Recipe { name: String },
    /// Run the acceptance criteria.
    Validate {
        /// Run only these criteria.
        #[arg(long, value_delimiter = ',')]
        only: Vec<u8>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn load(cli: &Cli) -> Result<SweepConfig> {
    let path = cli
        .config
        .as_deref()
        .ok_or_else(|| CliError::Config("--config is required".into()))?;
    SweepConfig::load(path)
}

fn sweep(cli: &Cli) -> Result<(SweepRun, PathBuf)> {
    let config = load(cli)?;
    let out = cli.out.clone().unwrap_or_else(|| config.output_dir.clone());
    let opts = RunOptions {
        workers: cli.workers,
        cache: cli.no_cache.then_some(false),
        cache_root: None,
        seed: cli.seed,
    };
    let run = run_sweep(&config, &opts)?;
    let failed = run.records.iter().filter(|r| r.is_err()).count();
    eprintln!(
        "{} points: {} evaluated, {} from cache, {} failed",
        run.points.len(),
        run.evaluated,
        run.cache_hits,
        failed
    );
    Ok((run, out))
}

fn write_all(tables: &[Table], dir: &Path, format: Format) -> Result<()> {
    for t in tables {
        let path = t.write(dir, format)?;
        eprintln!("wrote {} ({} rows)", path.display(), t.rows.len());
    }
    Ok(())
}

fn run(cli: &Cli) -> Result<ExitCode> {
    let (tables, out) = match &cli.command {
        Command::Recipe { name } => {
            let config = figure_recipe(name)?;
            let text = config.to_toml();
            match &cli.out {
                Some(dir) => {
                    std::fs::create_dir_all(dir).map_err(|e| CliError::Io {
                        path: dir.clone(),
                        source: e,
                    })?;
                    let path = dir.join(format!("{name}.toml"));
                    std::fs::write(&path, text).map_err(|e| CliError::Io {
                        path: path.clone(),
                        source: e,
                    })?;
                    eprintln!("wrote {}", path.display());
                }
                None => print!("{text}"),
            }
            return Ok(ExitCode::SUCCESS);
        }
        Command::Validate { only } => return Ok(validate(only)),
        Command::Sweep => {
            let (run, out) = sweep(cli)?;
            (sweep_tables(&run), out)
        }
        Command::Dlc => {
            let (run, out) = sweep(cli)?;
            (vec![points_table(&run), renyi_table(&run)], out)
        }
        Command::Majorize => {
            let (run, out) = sweep(cli)?;
            (vec![majorization_table(&run)], out)
        }
        Command::Spectrum => {
            let (run, out) = sweep(cli)?;
            (vec![spectrum_table(&run)], out)
        }
        Command::Scaling => {
            let (run, out) = sweep(cli)?;
            let pseudo = pseudo_points(&run);
            let rows = fits(&run, &pseudo);
            (
                vec![
                    points_table(&run),
                    pseudo_table(&run, &pseudo),
                    fits_table(&run, &rows),
                ],
                out,
            )
        }
        Command::PhaseDiagram => {
            let (run, out) = sweep(cli)?;
            let pseudo = pseudo_points(&run);
            let rows = fits(&run, &pseudo);
            (
                vec![
                    pseudo_table(&run, &pseudo),
                    fits_table(&run, &rows),
                    phase_diagram_table(&run, &rows),
                ],
                out,
            )
        }
    };
    write_all(&tables, &out, cli.format)?;
    Ok(ExitCode::SUCCESS)
}

/// Exit status 0 when exactly the documented criteria fail.
fn validate(only: &[u8]) -> ExitCode {
    let ids: Vec<u8> = if only.is_empty() {
        CRITERIA.to_vec()
    } else {
        only.to_vec()
    };
    let mut unexpected = Vec::new();
    for id in ids {
        let report = run_criterion(id);
        println!("{report}");
        if report.passed == EXPECTED_FAILURES.contains(&id) {
            unexpected.push(id);
        }
    }
    if unexpected.is_empty() {
        println!("all criteria behave as documented (known failures: {EXPECTED_FAILURES:?})");
        ExitCode::SUCCESS
    } else {
        println!("unexpected outcome for criteria {unexpected:?}");
        ExitCode::FAILURE
    }
}
