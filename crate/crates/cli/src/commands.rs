use std::fmt;
use std::fs::{self, File};
use std::io::{self, BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use pedflow::plot::{render_svg, PlotOptions};
use pedflow::report::{format_sig, rounded_report};
use pedflow::simulator::simulate as run_scenario;
use pedflow::{
    aggregate, compare_designs, interpolate_gaps, load_scenario, parse_ntxy, parse_records,
    validate_dataset, write_ntxy, AggregateReport, AnalysisConfig, AnalysisWindow, MetricsConfig,
    NtxyDataset, PiWeights, Rect, TrapGeometry,
};

use crate::output;
use crate::{AnalysisArgs, Format};

#[derive(Debug)]
pub enum CliError {
    /// Bad data, bad parameters or an empty window.
    Domain(String),
    /// The environment failed us: unreadable input, unwritable output.
    Io(String),
}

impl CliError {
    pub fn code(&self) -> u8 {
        match self {
            CliError::Domain(_) => 1,
            CliError::Io(_) => 2,
        }
    }

    fn io(path: &Path, e: io::Error) -> Self {
        CliError::Io(format!("{}: {e}", path.display()))
    }

    fn at(path: &Path, e: pedflow::Error) -> Self {
        match e {
            pedflow::Error::Io(e) => Self::io(path, e),
            other => CliError::Domain(format!("{}: {other}", path.display())),
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Domain(m) | CliError::Io(m) => f.write_str(m),
        }
    }
}

impl From<pedflow::Error> for CliError {
    fn from(e: pedflow::Error) -> Self {
        match e {
            pedflow::Error::Io(e) => CliError::Io(e.to_string()),
            other => CliError::Domain(other.to_string()),
        }
    }
}

type CliResult<T = ()> = Result<T, CliError>;

fn open(path: &Path) -> CliResult<BufReader<File>> {
    File::open(path)
        .map(BufReader::new)
        .map_err(|e| CliError::io(path, e))
}

fn load_dataset(path: &Path, theta: Option<f64>) -> CliResult<NtxyDataset> {
    parse_ntxy(open(path)?, theta).map_err(|e| CliError::at(path, e))
}

/// Writes through a buffered file, or to stdout when `path` is `None`.
fn emit(path: Option<&Path>, write: impl FnOnce(&mut dyn Write) -> io::Result<()>) -> CliResult {
    match path {
        Some(p) => {
            let file = File::create(p).map_err(|e| CliError::io(p, e))?;
            let mut w = BufWriter::new(file);
            write(&mut w)
                .and_then(|_| w.flush())
                .map_err(|e| CliError::io(p, e))
        }
        None => {
            let stdout = io::stdout();
            let mut w = stdout.lock();
            write(&mut w)
                .and_then(|_| w.flush())
                .map_err(|e| CliError::Io(format!("stdout: {e}")))
        }
    }
}

pub fn validate(path: &Path, theta: Option<f64>) -> CliResult {
    let records = parse_records(open(path)?).map_err(|e| CliError::at(path, e))?;
    let dataset =
        NtxyDataset::from_records_lenient(&records, theta).map_err(|e| CliError::at(path, e))?;
    let diagnostics = validate_dataset(&dataset);
    if diagnostics.is_empty() {
        println!(
            "OK: {} pedestrians, {} observations, theta={}",
            dataset.pedestrian_count(),
            dataset.observation_count(),
            format_sig(dataset.frame_interval())
        );
        return Ok(());
    }
    for d in &diagnostics {
        println!("{d}");
    }
    Err(CliError::Domain(format!(
        "{}: {} problem(s) found",
        path.display(),
        diagnostics.len()
    )))
}

fn analysis_config(args: &AnalysisArgs) -> CliResult<AnalysisConfig> {
    Ok(AnalysisConfig {
        metrics: MetricsConfig {
            variance_mode: args.variance_mode.into(),
            ..MetricsConfig::default()
        },
        weights: PiWeights::new(args.weight_a, args.weight_b)?,
    })
}

fn trap_geometry(args: &AnalysisArgs) -> CliResult<Option<TrapGeometry>> {
    let geometry = match (args.area, args.trap) {
        (Some(area), Some(rect)) => TrapGeometry::new(area, args.length)?.with_rect(rect)?,
        (Some(area), None) => TrapGeometry::new(area, args.length)?,
        (None, Some(rect)) => TrapGeometry::new(rect.area(), args.length)?.with_rect(rect)?,
        (None, None) if args.length.is_some() => {
            return Err(CliError::Domain("--length needs --area or --trap".into()))
        }
        (None, None) => return Ok(None),
    };
    Ok(Some(geometry))
}

fn explicit_window(args: &AnalysisArgs) -> CliResult<Option<AnalysisWindow>> {
    args.window
        .map(|(a, b)| AnalysisWindow::new(a, b))
        .transpose()
        .map_err(CliError::from)
}

fn analyze_dataset(
    dataset: &NtxyDataset,
    window: &AnalysisWindow,
    args: &AnalysisArgs,
) -> CliResult<AggregateReport> {
    let config = analysis_config(args)?;
    let trap = trap_geometry(args)?;
    let filled = interpolate_gaps(dataset, args.max_gap)?;
    let report = aggregate(&filled, window, trap.as_ref(), &config)?;
    if report.n == 0 {
        return Err(CliError::Domain(format!(
            "no pedestrian has two or more observations in [{}, {}]",
            format_sig(window.t_start),
            format_sig(window.t_end)
        )));
    }
    Ok(report)
}

pub fn analyze(
    input: &Path,
    args: &AnalysisArgs,
    format: Format,
    out: Option<&Path>,
    report_path: Option<&Path>,
) -> CliResult {
    let dataset = load_dataset(input, args.theta)?;
    let window = match explicit_window(args)? {
        Some(w) => w,
        None => AnalysisWindow::full(&dataset)?,
    };
    let report = analyze_dataset(&dataset, &window, args).map_err(|e| match e {
        CliError::Domain(m) => CliError::Domain(format!("{}: {m}", input.display())),
        io => io,
    })?;

    match format {
        Format::Json => emit(out, |w| {
            w.write_all(output::analysis_json(&report).as_bytes())
        }),
        Format::Csv => {
            let aggregate = output::aggregate_json(&report);
            let csv = |w: &mut dyn Write| {
                output::write_pedestrian_csv(&report, &mut *w).map_err(io::Error::from)
            };
            match (out, report_path) {
                (None, None) => emit(None, |w| {
                    csv(&mut *w)?;
                    writeln!(w)?;
                    w.write_all(aggregate.as_bytes())
                }),
                (out, report_path) => {
                    emit(out, csv)?;
                    emit(report_path, |w| w.write_all(aggregate.as_bytes()))
                }
            }
        }
    }
}

pub fn simulate(scenario_path: &Path, out: &Path) -> CliResult {
    let scenario =
        load_scenario(open(scenario_path)?).map_err(|e| CliError::at(scenario_path, e))?;
    let run = run_scenario(&scenario).map_err(|e| CliError::at(scenario_path, e))?;
    let mut bytes = Vec::new();
    write_ntxy(&run.dataset, &mut bytes)?;
    fs::write(out, bytes).map_err(|e| CliError::io(out, e))?;
    println!(
        "{} spawned, {} completed, {} frames",
        run.spawned, run.completed, run.frames
    );
    Ok(())
}

enum Design {
    Dataset(NtxyDataset),
    Report(AggregateReport),
}

fn looks_like_json(path: &Path) -> CliResult<bool> {
    if path
        .extension()
        .is_some_and(|e| e.eq_ignore_ascii_case("json"))
    {
        return Ok(true);
    }
    let mut r = open(path)?;
    loop {
        let buf = r.fill_buf().map_err(|e| CliError::io(path, e))?;
        if buf.is_empty() {
            return Ok(false);
        }
        if let Some(&b) = buf.iter().find(|b| !b.is_ascii_whitespace()) {
            return Ok(b == b'{');
        }
        let n = buf.len();
        r.consume(n);
    }
}

fn load_design(path: &Path, args: &AnalysisArgs) -> CliResult<Design> {
    if !looks_like_json(path)? {
        return load_dataset(path, args.theta).map(Design::Dataset);
    }
    let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    let bad =
        |e: serde_json::Error| CliError::Domain(format!("{}: not a report: {e}", path.display()));
    let mut value: serde_json::Value = serde_json::from_str(&text).map_err(bad)?;
    // accept the full analyze document as well as a bare aggregate
    if let Some(inner) = value.get_mut("aggregate") {
        value = inner.take();
    }
    serde_json::from_value(value)
        .map(Design::Report)
        .map_err(bad)
}

fn union_span(designs: &[&Design]) -> CliResult<AnalysisWindow> {
    let spans: Vec<(f64, f64)> = designs
        .iter()
        .filter_map(|d| match d {
            Design::Dataset(ds) => ds.time_span(),
            Design::Report(_) => None,
        })
        .collect();
    let start = spans.iter().map(|s| s.0).fold(f64::INFINITY, f64::min);
    let end = spans.iter().map(|s| s.1).fold(f64::NEG_INFINITY, f64::max);
    if spans.is_empty() {
        return Err(CliError::Domain("no observations in either dataset".into()));
    }
    Ok(AnalysisWindow::new(start, end)?)
}

pub fn compare(before: &Path, after: &Path, args: &AnalysisArgs, out: Option<&Path>) -> CliResult {
    let designs = [load_design(before, args)?, load_design(after, args)?];
    let window = match explicit_window(args)? {
        Some(w) => Some(w),
        None if designs.iter().any(|d| matches!(d, Design::Dataset(_))) => {
            Some(union_span(&[&designs[0], &designs[1]])?)
        }
        None => None,
    };
    let [b, a] = designs;
    let report = |d: Design, path: &Path| -> CliResult<AggregateReport> {
        match d {
            Design::Report(r) => Ok(r),
            Design::Dataset(ds) => {
                let w = window.expect("window set when a dataset is present");
                analyze_dataset(&ds, &w, args).map_err(|e| match e {
                    CliError::Domain(m) => CliError::Domain(format!("{}: {m}", path.display())),
                    io => io,
                })
            }
        }
    };
    // Saved reports carry 6 significant digits, so fresh ones are compared
    // at the same precision.
    let comparison = compare_designs(
        &rounded_report(&report(b, before)?),
        &rounded_report(&report(a, after)?),
    )?;
    emit(out, |w| {
        w.write_all(output::comparison_json(&comparison).as_bytes())
    })
}

pub fn plot(
    input: &Path,
    out: &Path,
    trap: Option<Rect>,
    width: u32,
    height: u32,
    theta: Option<f64>,
) -> CliResult {
    if width == 0 || height == 0 {
        return Err(CliError::Domain(
            "plot width and height must be positive".into(),
        ));
    }
    let dataset = load_dataset(input, theta)?;
    let opts = PlotOptions {
        width,
        height,
        trap,
        ..PlotOptions::default()
    };
    let svg = render_svg(&dataset, &opts).map_err(|e| CliError::at(input, e))?;
    fs::write(out, svg).map_err(|e| CliError::io(out, e))
}
