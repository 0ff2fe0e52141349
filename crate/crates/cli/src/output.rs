//! Report rendering: the per-pedestrian table (CSV or JSON rows) and the
//! JSON documents. Every derived number carries 6 significant digits.

use std::io::Write;

use pedflow::aggregation::PedestrianResult;
use pedflow::report::{format_sig, round_sig, rounded_comparison, rounded_report};
use pedflow::{AggregateReport, DesignComparison, PedestrianId, Vec2};
use serde::Serialize;

pub const CSV_COLUMNS: [&str; 17] = [
    "id",
    "rho",
    "t_in",
    "t_out",
    "omega",
    "psi",
    "omega_straight",
    "xi_x",
    "xi_y",
    "var_x",
    "var_y",
    "gamma",
    "lambda",
    "pi",
    "dir_x",
    "dir_y",
    "flags",
];

#[derive(Debug, Serialize)]
struct PedestrianRow {
    id: PedestrianId,
    rho: usize,
    t_in: f64,
    t_out: f64,
    omega: f64,
    psi: f64,
    omega_straight: f64,
    xi_x: f64,
    xi_y: f64,
    var_x: f64,
    var_y: f64,
    gamma: Option<f64>,
    lambda: Option<f64>,
    pi: Option<f64>,
    dir_x: Option<f64>,
    dir_y: Option<f64>,
    flags: String,
}

fn row(p: &PedestrianResult, direction: Option<&Vec2>) -> PedestrianRow {
    let m = &p.metrics;
    PedestrianRow {
        id: m.pedestrian_id,
        rho: m.observation_count,
        t_in: m.t_in,
        t_out: m.t_out,
        omega: m.total_distance,
        psi: m.average_speed,
        omega_straight: m.straight_distance,
        xi_x: m.mean_displacement.x,
        xi_y: m.mean_displacement.y,
        var_x: m.displacement_variance.x,
        var_y: m.displacement_variance.y,
        gamma: m.uncomfortability,
        lambda: m.delay,
        pi: p.pi,
        dir_x: direction.map(|d| d.x),
        dir_y: direction.map(|d| d.y),
        flags: if m.is_stationary() {
            "stationary".into()
        } else {
            String::new()
        },
    }
}

fn rows(report: &AggregateReport) -> impl Iterator<Item = PedestrianRow> + '_ {
    report
        .pedestrians
        .iter()
        .map(|p| row(p, report.directions.get(&p.metrics.pedestrian_id)))
}

fn rounded(r: PedestrianRow) -> PedestrianRow {
    let opt = |v: Option<f64>| v.map(round_sig);
    PedestrianRow {
        t_in: round_sig(r.t_in),
        t_out: round_sig(r.t_out),
        omega: round_sig(r.omega),
        psi: round_sig(r.psi),
        omega_straight: round_sig(r.omega_straight),
        xi_x: round_sig(r.xi_x),
        xi_y: round_sig(r.xi_y),
        var_x: round_sig(r.var_x),
        var_y: round_sig(r.var_y),
        gamma: opt(r.gamma),
        lambda: opt(r.lambda),
        pi: opt(r.pi),
        dir_x: opt(r.dir_x),
        dir_y: opt(r.dir_y),
        ..r
    }
}

/// Per-pedestrian CSV; undefined values are empty fields.
pub fn write_pedestrian_csv<W: Write>(report: &AggregateReport, out: W) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_COLUMNS)?;
    let num = |v: f64| format_sig(v);
    let opt = |v: Option<f64>| v.map(format_sig).unwrap_or_default();
    for r in rows(report) {
        w.write_record([
            r.id.to_string(),
            r.rho.to_string(),
            num(r.t_in),
            num(r.t_out),
            num(r.omega),
            num(r.psi),
            num(r.omega_straight),
            num(r.xi_x),
            num(r.xi_y),
            num(r.var_x),
            num(r.var_y),
            opt(r.gamma),
            opt(r.lambda),
            opt(r.pi),
            opt(r.dir_x),
            opt(r.dir_y),
            r.flags,
        ])?;
    }
    w.flush()?;
    Ok(())
}

#[derive(Serialize)]
struct AnalysisDocument<'a> {
    pedestrians: Vec<PedestrianRow>,
    aggregate: &'a AggregateReport,
}

pub fn analysis_json(report: &AggregateReport) -> String {
    let aggregate = rounded_report(report);
    let doc = AnalysisDocument {
        pedestrians: rows(report).map(rounded).collect(),
        aggregate: &aggregate,
    };
    pretty(&doc)
}

pub fn aggregate_json(report: &AggregateReport) -> String {
    pretty(&rounded_report(report))
}

pub fn comparison_json(comparison: &DesignComparison) -> String {
    pretty(&rounded_comparison(comparison))
}

fn pretty<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report types serialize");
    s.push('\n');
    s
}
