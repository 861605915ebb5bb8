use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use hexloc::coverage::{coverage_margin, plan_rect_path, verify_coverage, Rect};
use hexloc::experiments::{
    run_bounded_suite, run_compare, run_connected_suite, run_connected_trial, write_rows,
    ExperimentConfig, Margin, Mode, OutputFormat,
};
use hexloc::localizer::LocalizationParams;
use hexloc::protocol::{write_event_log_csv, write_path_trace_csv};
use hexloc::Point2D;

type BoxResult<T> = Result<T, Box<dyn std::error::Error>>;

#[derive(Parser)]
#[command(
    name = "hexloc",
    version,
    about = "Mobile-anchor localization with hexagonal beacon paths"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Localize random connected networks with the anchor protocol.
    Connected {
        #[command(flatten)]
        common: Common,
        /// Event log CSV of the first trial.
        #[arg(long)]
        events: Option<PathBuf>,
        /// Anchor path trace CSV of the first trial.
        #[arg(long)]
        trace: Option<PathBuf>,
    },
    /// Localize random sensors in a rectangle from a planned path.
    Bounded(Common),
    /// Path lengths of the hexagon plan against the competitor schemes.
    Compare(Common),
    /// Waypoints of the planned path.
    Plan(Common),
    /// Localize a grid of virtual sensors against the planned path.
    Verify(Common),
}

#[derive(Args)]
struct Common {
    /// Sensor counts, comma separated.
    #[arg(long, value_delimiter = ',')]
    n: Option<Vec<usize>>,
    /// Area as WxH meters.
    #[arg(long, value_parser = parse_area)]
    area: Option<Rect>,
    /// Communication ranges, comma separated.
    #[arg(long, value_delimiter = ',')]
    r: Option<Vec<f64>>,
    /// Beacon divisors (u = r/k), comma separated.
    #[arg(long, value_delimiter = ',')]
    k: Option<Vec<u32>>,
    /// Coverage margin: meters, or r/K.
    #[arg(long)]
    x: Option<Margin>,
    #[arg(long)]
    trials: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 2.0)]
    grid_step: f64,
    /// Output file; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, default_value = "csv")]
    format: OutputFormat,
    /// Allow u > r/7.5.
    #[arg(long = "unsafe")]
    allow_unsafe: bool,
}

fn parse_area(s: &str) -> Result<Rect, String> {
    let (w, h) = s
        .split_once(['x', 'X'])
        .ok_or_else(|| format!("expected WxH, got `{s}`"))?;
    let w: f64 = w.trim().parse().map_err(|_| format!("bad width `{w}`"))?;
    let h: f64 = h.trim().parse().map_err(|_| format!("bad height `{h}`"))?;
    Rect::new(w, h, Point2D::new(0.0, 0.0)).map_err(|e| e.to_string())
}

impl Common {
    fn config(&self, mode: Mode) -> ExperimentConfig {
        let mut cfg = ExperimentConfig::new(mode);
        if let Some(n) = &self.n {
            cfg.n = n.clone();
        }
        if let Some(a) = self.area {
            cfg.area = a;
        }
        if let Some(r) = &self.r {
            cfg.r = r.clone();
        }
        if let Some(k) = &self.k {
            cfg.k = k.clone();
        }
        if let Some(t) = self.trials {
            cfg.trials = t;
        }
        cfg.x = self.x;
        cfg.seed = self.seed;
        cfg.grid_step = self.grid_step;
        cfg.allow_unsafe = self.allow_unsafe;
        cfg
    }

    fn writer(&self) -> BoxResult<Box<dyn Write>> {
        Ok(match &self.out {
            Some(p) => Box::new(BufWriter::new(File::create(p)?)),
            None => Box::new(BufWriter::new(io::stdout().lock())),
        })
    }
}

/// Plan and verify take a single `(r, k)` cell.
fn single_cell(cfg: &ExperimentConfig) -> BoxResult<(LocalizationParams, f64)> {
    cfg.validate()?;
    cfg.check_spacing()?;
    let cells = cfg.range_cells();
    let [(r, k)] = cells[..] else {
        return Err("plan and verify take a single --r and --k".into());
    };
    let params = LocalizationParams::with_divisor(r, k)?;
    let x = match cfg.x {
        Some(m) => m.resolve(r),
        None => coverage_margin(r, params.u)?,
    };
    Ok((params, x))
}

fn report_violations(violations: &[String]) -> bool {
    for v in violations {
        eprintln!("violation: {v}");
    }
    !violations.is_empty()
}

#[derive(Serialize)]
struct WaypointRow {
    x: f64,
    y: f64,
    kind: &'static str,
}

#[derive(Serialize)]
struct CoverageRow {
    worst_error: f64,
    mean_error: f64,
    uncovered: usize,
    min_pair_distance: f64,
    sensors_checked: usize,
}

fn run(cli: Cli) -> BoxResult<bool> {
    match cli.command {
        Command::Connected {
            common,
            events,
            trace,
        } => {
            let cfg = common.config(Mode::Connected);
            let summary = run_connected_suite(&cfg)?;
            if events.is_some() || trace.is_some() {
                let (r, k) = cfg.range_cells()[0];
                let params = LocalizationParams::with_divisor(r, k)?;
                let first = run_connected_trial(&cfg, cfg.n[0], &params, cfg.trial_seed(0))?;
                if let Some(p) = events {
                    write_event_log_csv(&first.events, File::create(p)?)?;
                }
                if let Some(p) = trace {
                    write_path_trace_csv(&first.path_trace, File::create(p)?)?;
                }
            }
            write_rows(&summary.rows, common.format, common.writer()?)?;
            Ok(report_violations(&summary.violations))
        }
        Command::Bounded(common) => {
            let summary = run_bounded_suite(&common.config(Mode::Bounded))?;
            write_rows(&summary.rows, common.format, common.writer()?)?;
            Ok(report_violations(&summary.violations))
        }
        Command::Compare(common) => {
            let summary = run_compare(&common.config(Mode::Compare))?;
            let mut out = common.writer()?;
            match common.format {
                OutputFormat::Csv => {
                    write_rows(&summary.table, OutputFormat::Csv, &mut out)?;
                    writeln!(out)?;
                    write_rows(&summary.improvements, OutputFormat::Csv, &mut out)?;
                }
                OutputFormat::Json => {
                    serde_json::to_writer_pretty(&mut out, &summary)?;
                    writeln!(out)?;
                }
            }
            out.flush()?;
            Ok(false)
        }
        Command::Plan(common) => {
            let cfg = common.config(Mode::Plan);
            let (params, x) = single_cell(&cfg)?;
            let plan = plan_rect_path(&cfg.area, params.r, x, params.u)?;
            eprintln!(
                "hexagons {}, length {:.3} m",
                plan.hexagons.len(),
                plan.total_length
            );
            let mut out = common.writer()?;
            match common.format {
                OutputFormat::Csv => plan.write_csv(&mut out)?,
                OutputFormat::Json => {
                    let rows: Vec<WaypointRow> = plan
                        .waypoints
                        .iter()
                        .zip(&plan.kinds)
                        .map(|(p, k)| WaypointRow {
                            x: p.x,
                            y: p.y,
                            kind: k.as_str(),
                        })
                        .collect();
                    write_rows(&rows, OutputFormat::Json, &mut out)?;
                }
            }
            out.flush()?;
            Ok(false)
        }
        Command::Verify(common) => {
            let cfg = common.config(Mode::Verify);
            let (params, x) = single_cell(&cfg)?;
            let plan = plan_rect_path(&cfg.area, params.r, x, params.u)?;
            let report = verify_coverage(&plan, &cfg.area, &params, cfg.grid_step)?;
            let mut out = common.writer()?;
            match common.format {
                OutputFormat::Json => {
                    serde_json::to_writer_pretty(&mut out, &report)?;
                    writeln!(out)?;
                }
                OutputFormat::Csv => write_rows(
                    &[CoverageRow {
                        worst_error: report.worst_error,
                        mean_error: report.mean_error,
                        uncovered: report.uncovered.len(),
                        min_pair_distance: report.min_pair_distance,
                        sensors_checked: report.sensors_checked,
                    }],
                    OutputFormat::Csv,
                    &mut out,
                )?,
            }
            out.flush()?;
            let guaranteed = params.is_safe_spacing()
                && x >= coverage_margin(params.r, params.u)? * (1.0 - 1e-12);
            let mut violations = Vec::new();
            if guaranteed && !report.uncovered.is_empty() {
                violations.push(format!(
                    "{} grid points not localized",
                    report.uncovered.len()
                ));
            }
            if guaranteed && report.worst_error >= 0.5 * params.r {
                violations.push(format!("worst error {:.3} reaches r/2", report.worst_error));
            }
            Ok(report_violations(&violations))
        }
    }
}

fn main() -> ExitCode {
    // Exit code 2 is reserved for guarantee violations, so usage errors
    // exit with 1 instead of clap's default.
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::FAILURE
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli) {
        Ok(false) => ExitCode::SUCCESS,
        Ok(true) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
