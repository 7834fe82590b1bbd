//! `lorentz-lab`: command-line front end.

mod commands;
mod format;
mod report;
mod spaces;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use lorentz_lab::chains::Direction;
use lorentz_lab::comparison::BoundMode;
use lorentz_lab::tol::Tolerances;

use commands::{AsymptoteArgs, BoundKind, CurvatureArgs, SplitArgs};
use format::ToleranceFlags;
use report::{write_json, CliError, Outcome, RunReport};
use spaces::AnySpace;

#[derive(Parser)]
#[command(name = "lorentz-lab", version, about = "Checks on finite and analytic Lorentzian pre-length spaces")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Global {
    /// Worker threads for internal parallelism.
    #[arg(long, env = "LORENTZ_LAB_THREADS", global = true)]
    threads: Option<usize>,
    /// Also write the run report to this file.
    #[arg(long, global = true)]
    report: Option<PathBuf>,
    #[arg(long = "tol-mesh", global = true)]
    tol_mesh: Option<f64>,
    #[arg(long = "tol-stack", global = true)]
    tol_stack: Option<f64>,
    #[arg(long = "tol-angle", global = true)]
    tol_angle: Option<f64>,
    #[arg(long = "tol-null", global = true)]
    tol_null: Option<f64>,
    #[arg(long = "tol-busemann", global = true)]
    tol_busemann: Option<f64>,
    #[arg(long = "tol-parallel", global = true)]
    tol_parallel: Option<f64>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Bound {
    #[value(name = "lower0")]
    Lower0,
    #[value(name = "upper0")]
    Upper0,
    Monotonicity,
}

#[derive(Clone, Copy, ValueEnum)]
enum Side {
    Lower,
    Upper,
}

#[derive(Clone, Copy, ValueEnum)]
enum Dir {
    Future,
    Past,
}

#[derive(Subcommand)]
enum Command {
    /// Checks the axioms of a space file.
    Validate { path: PathBuf },
    /// Prints tau between two points.
    Tau {
        path: PathBuf,
        #[arg(long)]
        from: String,
        #[arg(long)]
        to: String,
        /// Also compute the longest chain over the sample.
        #[arg(long)]
        intrinsic: bool,
    },
    /// Triangle comparison against Minkowski space.
    Curvature {
        path: PathBuf,
        #[arg(long, value_enum)]
        bound: Bound,
        /// Bound direction for the monotonicity check.
        #[arg(long, value_enum, default_value = "lower")]
        side: Side,
        #[arg(long, default_value_t = 200)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Per-triangle worst defects.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Builds the asymptote to a line through a point.
    Asymptote {
        path: PathBuf,
        #[arg(long)]
        line: PathBuf,
        #[arg(long)]
        from: String,
        #[arg(long, value_enum, default_value = "future")]
        direction: Dir,
        /// Comma-separated horizons; default 2, 4, ..., 256.
        #[arg(long)]
        horizons: Option<String>,
        /// Use the closed-form asymptote where the space has one.
        #[arg(long)]
        analytic: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Reconstructs the splitting along a line.
    Split {
        path: PathBuf,
        #[arg(long)]
        line: PathBuf,
        /// Times as lo:hi:step.
        #[arg(long = "t-grid", default_value = "-1:1:0.25")]
        t_grid: String,
        #[arg(long)]
        horizons: Option<String>,
        #[arg(long)]
        analytic: bool,
        #[arg(long)]
        out: Option<PathBuf>,
        /// CSV of images with their Busemann value and d_S row.
        #[arg(long)]
        plot: Option<PathBuf>,
    },
}

impl Global {
    fn flags(&self) -> ToleranceFlags {
        ToleranceFlags {
            mesh: self.tol_mesh,
            stack: self.tol_stack,
            angle: self.tol_angle,
            null: self.tol_null,
            busemann: self.tol_busemann,
            parallel: self.tol_parallel,
        }
    }
}

fn path_of(c: &Command) -> &PathBuf {
    match c {
        Command::Validate { path }
        | Command::Tau { path, .. }
        | Command::Curvature { path, .. }
        | Command::Asymptote { path, .. }
        | Command::Split { path, .. } => path,
    }
}

fn dispatch(cmd: &Command, any: &AnySpace, tol: &Tolerances) -> Result<Outcome, CliError> {
    let table = match any {
        AnySpace::Finite(l) => Some(&l.space),
        _ => None,
    };
    match cmd {
        Command::Validate { .. } => with_space!(any, s => commands::validate(s, table)),
        Command::Tau { from, to, intrinsic, .. } => {
            with_space!(any, s => commands::tau(s, table, from, to, *intrinsic))
        }
        Command::Curvature { bound, side, samples, seed, csv, .. } => {
            let bound = match bound {
                Bound::Lower0 => BoundKind::Lower0,
                Bound::Upper0 => BoundKind::Upper0,
                Bound::Monotonicity => BoundKind::Monotonicity(match side {
                    Side::Lower => BoundMode::Lower,
                    Side::Upper => BoundMode::Upper,
                }),
            };
            let args = CurvatureArgs { bound, samples: *samples, seed: *seed, tol: tol.stack, csv: csv.as_deref() };
            with_space!(any, s => commands::curvature(s, &args))
        }
        Command::Asymptote { line, from, direction, horizons, analytic, out, .. } => {
            let args = AsymptoteArgs {
                line,
                from,
                direction: match direction {
                    Dir::Future => Direction::Future,
                    Dir::Past => Direction::Past,
                },
                horizons: commands::parse_horizons(horizons.as_deref())?,
                analytic: *analytic,
                out: out.as_deref(),
            };
            with_space!(any, s => commands::asymptote(s, tol, &args))
        }
        Command::Split { line, t_grid, horizons, analytic, out, plot, .. } => {
            let args = SplitArgs {
                line,
                times: commands::parse_grid(t_grid)?,
                horizons: commands::parse_horizons(horizons.as_deref())?,
                analytic: *analytic,
                out: out.as_deref(),
                plot: plot.as_deref(),
            };
            with_space!(any, s => commands::split(s, tol, &args))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();
    if let Some(n) = cli.global.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("warning: thread pool: {e}");
        }
    }
    let echo: Vec<String> = std::env::args().skip(1).collect();
    let mut tolerances = None;
    let outcome = spaces::load_space(path_of(&cli.command)).and_then(|(file, any)| {
        let tol = format::resolve_tolerances(&file, &cli.global.flags());
        tolerances = Some(tol);
        dispatch(&cli.command, &any, &tol)
    });
    if let Err(e) = &outcome {
        eprintln!("error: {e}");
    }
    let report = RunReport::new(echo, tolerances, outcome, start.elapsed().as_secs_f64());
    if let Ok(text) = serde_json::to_string_pretty(&report) {
        let mut out = std::io::stdout().lock();
        let _ = writeln!(out, "{text}");
    }
    let mut code = report.exit_code;
    if let Some(path) = &cli.global.report {
        if let Err(e) = write_json(path, &report) {
            eprintln!("error: {e}");
            code = code.max(e.exit_code());
        }
    }
    ExitCode::from(code as u8)
}
