//! Command-line entry point.
//!
//! `roadloc sweep --config <path> --out <dir>` runs the distance x yaw sweep
//! and emits `grid.csv` plus one heat map per metric.
//! `roadloc trajectory --config <path> --out <dir> [--baseline <csv>]` runs
//! the straight-road evaluation and emits `trace.csv`, `summary.csv`, and
//! optionally `merged.csv`.
//! `roadloc render --grid <csv> --metric <name> --out <img>` re-renders a
//! stored grid.
//!
//! Exit codes: 0 success, 1 validation error, 2 I/O error.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use roadloc::config::{self, ConfigError, Mode, RunConfig};
use roadloc::experiments::{compare_with_baseline, run_sweep, run_trajectory, summarize};
use roadloc::io::{self, IoError, Metric};

#[derive(Parser)]
#[command(name = "roadloc", about = "Roadside LiDAR vehicle localization experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the distance x yaw error-grid sweep.
    Sweep {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Run the straight-road trajectory evaluation.
    Trajectory {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// External baseline trace (position_m,error_m) to join against.
        #[arg(long)]
        baseline: Option<PathBuf>,
    },
    /// Render a stored grid CSV as a PPM heat map.
    Render {
        #[arg(long)]
        grid: PathBuf,
        #[arg(long)]
        metric: String,
        #[arg(long)]
        out: PathBuf,
        /// Lower color-scale bound (defaults per metric).
        #[arg(long)]
        scale_min: Option<f64>,
        /// Upper color-scale bound (defaults per metric).
        #[arg(long)]
        scale_max: Option<f64>,
    },
}

#[derive(Debug)]
enum CliError {
    Validation(String),
    Io(String),
}

impl From<ConfigError> for CliError {
    fn from(e: ConfigError) -> Self {
        match e {
            ConfigError::Io { .. } => CliError::Io(e.to_string()),
            _ => CliError::Validation(e.to_string()),
        }
    }
}

impl From<IoError> for CliError {
    fn from(e: IoError) -> Self {
        match e {
            IoError::File { .. } => CliError::Io(e.to_string()),
            _ => CliError::Validation(e.to_string()),
        }
    }
}

fn main() -> ExitCode {
    env_logger::init();
    if let Ok(threads) = std::env::var("ROADLOC_THREADS") {
        match threads.parse::<usize>() {
            Ok(n) if n > 0 => {
                let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
            }
            _ => {
                eprintln!("error: ROADLOC_THREADS must be a positive integer");
                return ExitCode::from(1);
            }
        }
    }
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Validation(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(CliError::Io(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn ensure_out_dir(dir: &Path) -> Result<(), CliError> {
    std::fs::create_dir_all(dir)
        .map_err(|e| CliError::Io(format!("cannot create {}: {e}", dir.display())))
}

fn load(config_path: &Path, want: Mode) -> Result<RunConfig, CliError> {
    let cfg = config::parse_config(config_path)?;
    if cfg.mode != want {
        return Err(CliError::Validation(format!(
            "{} is a {:?}-mode config",
            config_path.display(),
            cfg.mode
        )));
    }
    Ok(cfg)
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Sweep { config, out } => {
            let cfg = load(&config, Mode::Sweep)?;
            let sweep = cfg.sweep.as_ref().expect("sweep mode");
            ensure_out_dir(&out)?;
            let grid = run_sweep(sweep, cfg.seed)
                .map_err(|e| CliError::Validation(e.to_string()))?;
            io::write_grid_csv(&grid, &out.join("grid.csv"))?;
            for (metric, name, scale) in [
                (Metric::CenterError, "center_error", cfg.render.center_error),
                (
                    Metric::BboxAreaError,
                    "bbox_area_error",
                    cfg.render.bbox_area_error,
                ),
                (Metric::YawError, "yaw_error", cfg.render.yaw_error),
                (Metric::PointCount, "point_count", cfg.render.point_count),
            ] {
                io::render_heatmap(&grid, metric, &out.join(format!("{name}.ppm")), scale)?;
            }
            let ok = grid
                .cells
                .iter()
                .filter(|c| c.status == roadloc::experiments::CellStatus::Ok)
                .count();
            println!(
                "sweep complete: {} cells ({} ok), outputs in {}",
                grid.cells.len(),
                ok,
                out.display()
            );
            Ok(())
        }
        Command::Trajectory {
            config,
            out,
            baseline,
        } => {
            let cfg = load(&config, Mode::Trajectory)?;
            let traj = cfg.trajectory.as_ref().expect("trajectory mode");
            ensure_out_dir(&out)?;
            let trace = run_trajectory(traj, cfg.seed)
                .map_err(|e| CliError::Validation(e.to_string()))?;
            io::write_trace_csv(&trace, &out.join("trace.csv"))?;

            let full = (traj.longitudinal_min, traj.longitudinal_max);
            let mut ranges = vec![full];
            if full.0 <= -36.0 && full.1 >= 36.0 {
                ranges.push((-36.0, 36.0));
            }
            let summaries = summarize(&trace, &ranges);
            let mut text =
                String::from("range_min_m,range_max_m,ok_count,failed_count,mae_m,p25_m,p50_m,p75_m\n");
            for s in &summaries {
                use std::fmt::Write as _;
                match s.stats {
                    Some(st) => writeln!(
                        text,
                        "{},{},{},{},{},{},{},{}",
                        s.range.0,
                        s.range.1,
                        s.ok_count,
                        s.failed_count,
                        st.mean_abs_error,
                        st.p25,
                        st.p50,
                        st.p75
                    ),
                    None => writeln!(
                        text,
                        "{},{},{},{},,,,",
                        s.range.0, s.range.1, s.ok_count, s.failed_count
                    ),
                }
                .expect("string write");
            }
            std::fs::write(out.join("summary.csv"), text)
                .map_err(|e| CliError::Io(format!("summary.csv: {e}")))?;

            if let Some(baseline_path) = baseline {
                let baseline_trace = io::read_baseline_csv(&baseline_path)?;
                let merged = compare_with_baseline(&trace, &baseline_trace, traj.sample_step)
                    .map_err(|e| CliError::Validation(e.to_string()))?;
                io::write_merged_csv(&merged, &out.join("merged.csv"))?;
            }
            println!(
                "trajectory complete: {} samples, outputs in {}",
                trace.len(),
                out.display()
            );
            Ok(())
        }
        Command::Render {
            grid,
            metric,
            out,
            scale_min,
            scale_max,
        } => {
            let metric: Metric = metric.parse()?;
            let g = io::read_grid_csv(&grid)?;
            let defaults = roadloc::config::RenderScales::default();
            let default_scale = match metric {
                Metric::CenterError => defaults.center_error,
                Metric::BboxAreaError => defaults.bbox_area_error,
                Metric::YawError => defaults.yaw_error,
                Metric::PointCount => defaults.point_count,
            };
            let scale = (
                scale_min.unwrap_or(default_scale.0),
                scale_max.unwrap_or(default_scale.1),
            );
            io::render_heatmap(&g, metric, &out, scale)?;
            println!("rendered {} to {}", grid.display(), out.display());
            Ok(())
        }
    }
}
