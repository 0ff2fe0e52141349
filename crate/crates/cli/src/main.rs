//! `pedflow` command-line front end.
//!
//! Exit status: 0 on success, 1 for bad data or an empty analysis window,
//! 2 for I/O failures (and for malformed command lines).

mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use pedflow::{Rect, VarianceMode, Vec2};

#[derive(Debug, Parser)]
#[command(
    name = "pedflow",
    version,
    about = "Pedestrian trajectory analytics and simulation"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check an NTXY file and list every rule violation.
    Validate {
        input: PathBuf,
        /// Frame interval to use instead of inferring it.
        #[arg(long)]
        theta: Option<f64>,
    },
    /// Per-pedestrian metrics and the window aggregate.
    Analyze {
        input: PathBuf,
        #[command(flatten)]
        analysis: AnalysisArgs,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        /// Per-pedestrian table (or the whole JSON document) destination.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Aggregate JSON destination in csv mode.
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Run a scenario file and write the sampled NTXY dataset.
    Simulate { scenario: PathBuf, output: PathBuf },
    /// Compare two designs; each input is an NTXY file or a JSON report.
    Compare {
        before: PathBuf,
        after: PathBuf,
        #[command(flatten)]
        analysis: AnalysisArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Draw trajectories as SVG.
    Plot {
        input: PathBuf,
        output: PathBuf,
        #[arg(long, value_parser = parse_rect, value_name = "X0,Y0,X1,Y1")]
        trap: Option<Rect>,
        #[arg(long, default_value_t = 800)]
        width: u32,
        #[arg(long, default_value_t = 600)]
        height: u32,
        #[arg(long)]
        theta: Option<f64>,
    },
}

#[derive(Debug, Clone, Args)]
pub struct AnalysisArgs {
    /// Analysis window in seconds.
    #[arg(long, value_parser = parse_window, value_name = "T1:T2", conflicts_with = "full")]
    pub window: Option<(f64, f64)>,
    /// Use the full observed time span (the default).
    #[arg(long)]
    pub full: bool,
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    pub weight_a: f64,
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    pub weight_b: f64,
    #[arg(long, value_enum, default_value_t = VarianceArg::Componentwise)]
    pub variance_mode: VarianceArg,
    /// Trap area A.
    #[arg(long)]
    pub area: Option<f64>,
    /// Trap length L along the travel axis.
    #[arg(long)]
    pub length: Option<f64>,
    /// Trap rectangle; sets A and L when they are not given.
    #[arg(long, value_parser = parse_rect, value_name = "X0,Y0,X1,Y1")]
    pub trap: Option<Rect>,
    /// Longest run of missing frames to fill by interpolation.
    #[arg(long, default_value_t = 0)]
    pub max_gap: usize,
    /// Frame interval to use instead of inferring it.
    #[arg(long)]
    pub theta: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum VarianceArg {
    Componentwise,
    Trace,
}

impl From<VarianceArg> for VarianceMode {
    fn from(v: VarianceArg) -> Self {
        match v {
            VarianceArg::Componentwise => VarianceMode::Componentwise,
            VarianceArg::Trace => VarianceMode::Trace,
        }
    }
}

fn parse_window(s: &str) -> Result<(f64, f64), String> {
    let (a, b) = s.split_once(':').ok_or("expected T1:T2")?;
    let num = |v: &str| v.trim().parse::<f64>().map_err(|e| format!("`{v}`: {e}"));
    Ok((num(a)?, num(b)?))
}

fn parse_rect(s: &str) -> Result<Rect, String> {
    let v = s
        .split(',')
        .map(|p| p.trim().parse::<f64>().map_err(|e| format!("`{p}`: {e}")))
        .collect::<Result<Vec<_>, _>>()?;
    match v[..] {
        [x0, y0, x1, y1] if v.iter().all(|c| c.is_finite()) => {
            let r = Rect::from_corners(Vec2::new(x0, y0), Vec2::new(x1, y1));
            if r.area() > 0.0 {
                Ok(r)
            } else {
                Err("rectangle has zero area".into())
            }
        }
        _ => Err("expected four numbers x0,y0,x1,y1".into()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Validate { input, theta } => commands::validate(&input, theta),
        Command::Analyze {
            input,
            analysis,
            format,
            out,
            report,
        } => commands::analyze(&input, &analysis, format, out.as_deref(), report.as_deref()),
        Command::Simulate { scenario, output } => commands::simulate(&scenario, &output),
        Command::Compare {
            before,
            after,
            analysis,
            out,
        } => commands::compare(&before, &after, &analysis, out.as_deref()),
        Command::Plot {
            input,
            output,
            trap,
            width,
            height,
            theta,
        } => commands::plot(&input, &output, trap, width, height, theta),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("pedflow: {e}");
            ExitCode::from(e.code())
        }
    }
}
