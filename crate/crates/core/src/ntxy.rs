//! The NTXY movement database: data model, reader, writer and the
//! structural operations (validation, gap filling, window clipping).
//!
//! File layout: one observation per line, four fields `N T X Y` separated
//! by a single TAB on write (TABs or runs of spaces on read). An optional
//! first line `N\tT\tX\tY` is a header, `#` lines are comments and blank
//! lines are skipped. `T` is clock time in seconds, constant spacing
//! `frame_interval` between consecutive frames of one pedestrian.

use std::collections::BTreeMap;
use std::fmt;
use std::io::{BufRead, Write};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::Vec2;

/// Absolute tolerance, in seconds, for every time comparison.
pub const TIME_TOLERANCE: f64 = 1e-9;

/// Frame interval assumed when nothing in the data pins it down (no
/// pedestrian has two observations) and no hint was given.
pub const FALLBACK_FRAME_INTERVAL: f64 = 1.0;

pub const HEADER: &str = "N\tT\tX\tY";

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct PedestrianId(pub u32);

impl fmt::Display for PedestrianId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// One NTXY row.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ObservationRecord {
    pub pedestrian_id: PedestrianId,
    pub time: f64,
    pub x: f64,
    pub y: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Observation {
    pub time: f64,
    pub position: Vec2,
}

impl Observation {
    pub fn new(time: f64, x: f64, y: f64) -> Self {
        Observation {
            time,
            position: Vec2::new(x, y),
        }
    }
}

/// Time-ordered observations of one pedestrian.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pedestrian_id: PedestrianId,
    points: Vec<Observation>,
}

impl Trajectory {
    /// Builds a trajectory, sorting the points by time. At least one point
    /// is required; spacing is checked by [`validate_dataset`].
    pub fn new(pedestrian_id: PedestrianId, mut points: Vec<Observation>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::InsufficientObservations {
                pedestrian: pedestrian_id,
                count: 0,
            });
        }
        points.sort_by(|a, b| a.time.total_cmp(&b.time));
        Ok(Trajectory {
            pedestrian_id,
            points,
        })
    }

    pub fn pedestrian_id(&self) -> PedestrianId {
        self.pedestrian_id
    }

    pub fn points(&self) -> &[Observation] {
        &self.points
    }

    /// Number of observations (rho).
    pub fn observation_count(&self) -> usize {
        self.points.len()
    }

    /// Time of the first record (t_in).
    pub fn first_time(&self) -> f64 {
        self.points[0].time
    }

    /// Time of the last record (t_out).
    pub fn last_time(&self) -> f64 {
        self.points[self.points.len() - 1].time
    }

    pub fn first_position(&self) -> Vec2 {
        self.points[0].position
    }

    pub fn last_position(&self) -> Vec2 {
        self.points[self.points.len() - 1].position
    }

    /// Applies `f` to every point, keeping the id. Handy for building
    /// transformed copies in tests and tools.
    pub fn map_points(&self, mut f: impl FnMut(Observation) -> Observation) -> Trajectory {
        let points = self.points.iter().map(|&p| f(p)).collect();
        Trajectory::new(self.pedestrian_id, points).expect("non-empty by construction")
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct NtxyDataset {
    frame_interval: f64,
    trajectories: BTreeMap<PedestrianId, Trajectory>,
    source_label: String,
}

impl NtxyDataset {
    pub fn new(
        frame_interval: f64,
        trajectories: impl IntoIterator<Item = Trajectory>,
    ) -> Result<Self> {
        check_frame_interval(frame_interval)?;
        let mut map = BTreeMap::new();
        for t in trajectories {
            let id = t.pedestrian_id;
            if map.insert(id, t).is_some() {
                return Err(Error::invalid(
                    "dataset",
                    format!("pedestrian id {id} appears in more than one trajectory"),
                ));
            }
        }
        Ok(NtxyDataset {
            frame_interval,
            trajectories: map,
            source_label: String::new(),
        })
    }

    pub fn empty(frame_interval: f64) -> Result<Self> {
        Self::new(frame_interval, std::iter::empty())
    }

    /// Groups records into trajectories and enforces the strict rules:
    /// no duplicate `(id, time)` pairs and every intra-pedestrian time step
    /// an integer multiple of the frame interval.
    pub fn from_records(
        records: &[ObservationRecord],
        frame_interval_hint: Option<f64>,
    ) -> Result<Self> {
        let grouped = group_records(records);
        for (&id, points) in &grouped {
            for w in points.windows(2) {
                if w[1].time - w[0].time <= TIME_TOLERANCE {
                    return Err(Error::DuplicateObservation {
                        pedestrian: id,
                        time: w[1].time,
                    });
                }
            }
        }
        let frame_interval = resolve_frame_interval(&grouped, frame_interval_hint)?;
        for (&id, points) in &grouped {
            for w in points.windows(2) {
                let delta = w[1].time - w[0].time;
                if frame_multiple(delta, frame_interval).is_none() {
                    return Err(Error::Cadence {
                        pedestrian: id,
                        delta,
                        frame_interval,
                    });
                }
            }
        }
        Self::from_grouped(grouped, frame_interval)
    }

    /// Groups records without rejecting duplicates or irregular spacing, so
    /// that [`validate_dataset`] can report every problem at once.
    pub fn from_records_lenient(
        records: &[ObservationRecord],
        frame_interval_hint: Option<f64>,
    ) -> Result<Self> {
        let grouped = group_records(records);
        let frame_interval = resolve_frame_interval(&grouped, frame_interval_hint)?;
        Self::from_grouped(grouped, frame_interval)
    }

    fn from_grouped(
        grouped: BTreeMap<PedestrianId, Vec<Observation>>,
        frame_interval: f64,
    ) -> Result<Self> {
        let trajectories = grouped
            .into_iter()
            .map(|(id, points)| Trajectory::new(id, points))
            .collect::<Result<Vec<_>>>()?;
        Self::new(frame_interval, trajectories)
    }

    pub fn with_source_label(mut self, label: impl Into<String>) -> Self {
        self.source_label = label.into();
        self
    }

    /// Frame interval (theta) in seconds.
    pub fn frame_interval(&self) -> f64 {
        self.frame_interval
    }

    pub fn source_label(&self) -> &str {
        &self.source_label
    }

    /// Trajectories in ascending pedestrian-id order.
    pub fn trajectories(&self) -> impl ExactSizeIterator<Item = &Trajectory> {
        self.trajectories.values()
    }

    pub fn trajectory(&self, id: PedestrianId) -> Option<&Trajectory> {
        self.trajectories.get(&id)
    }

    pub fn pedestrian_count(&self) -> usize {
        self.trajectories.len()
    }

    pub fn is_empty(&self) -> bool {
        self.trajectories.is_empty()
    }

    pub fn observation_count(&self) -> usize {
        self.trajectories.values().map(|t| t.points.len()).sum()
    }

    /// All rows in canonical order (id, then time).
    pub fn records(&self) -> impl Iterator<Item = ObservationRecord> + '_ {
        self.trajectories.values().flat_map(|t| {
            t.points.iter().map(move |p| ObservationRecord {
                pedestrian_id: t.pedestrian_id,
                time: p.time,
                x: p.position.x,
                y: p.position.y,
            })
        })
    }

    /// Earliest and latest observation time over all pedestrians.
    pub fn time_span(&self) -> Option<(f64, f64)> {
        self.trajectories.values().fold(None, |acc, t| {
            let (a, b) = (t.first_time(), t.last_time());
            Some(match acc {
                None => (a, b),
                Some((lo, hi)) => (f64::min(lo, a), f64::max(hi, b)),
            })
        })
    }
}

fn check_frame_interval(theta: f64) -> Result<()> {
    if theta.is_finite() && theta > 0.0 {
        Ok(())
    } else {
        Err(Error::invalid(
            "frame interval",
            format!("{theta} is not a positive finite number of seconds"),
        ))
    }
}

fn group_records(records: &[ObservationRecord]) -> BTreeMap<PedestrianId, Vec<Observation>> {
    let mut grouped: BTreeMap<PedestrianId, Vec<Observation>> = BTreeMap::new();
    for r in records {
        grouped
            .entry(r.pedestrian_id)
            .or_default()
            .push(Observation::new(r.time, r.x, r.y));
    }
    for points in grouped.values_mut() {
        points.sort_by(|a, b| a.time.total_cmp(&b.time));
    }
    grouped
}

fn min_positive_delta(grouped: &BTreeMap<PedestrianId, Vec<Observation>>) -> Option<f64> {
    grouped
        .values()
        .flat_map(|points| points.windows(2).map(|w| w[1].time - w[0].time))
        .filter(|&d| d > TIME_TOLERANCE)
        .min_by(f64::total_cmp)
}

fn resolve_frame_interval(
    grouped: &BTreeMap<PedestrianId, Vec<Observation>>,
    hint: Option<f64>,
) -> Result<f64> {
    match hint {
        Some(h) => {
            check_frame_interval(h)?;
            Ok(h)
        }
        None => Ok(min_positive_delta(grouped).unwrap_or(FALLBACK_FRAME_INTERVAL)),
    }
}

/// Number of frames spanned by `delta`, if it is a positive integer
/// multiple of `theta` within [`TIME_TOLERANCE`].
pub(crate) fn frame_multiple(delta: f64, theta: f64) -> Option<usize> {
    let k = (delta / theta).round();
    (k >= 1.0 && (delta - k * theta).abs() <= TIME_TOLERANCE).then_some(k as usize)
}

// ---------------------------------------------------------------------------
// Reading

fn is_decimal(s: &str) -> bool {
    let body = s.strip_prefix(['+', '-']).unwrap_or(s);
    let (int, frac) = match body.split_once('.') {
        Some((i, f)) => (i, f),
        None => (body, ""),
    };
    !(int.is_empty() && frac.is_empty())
        && int.bytes().all(|b| b.is_ascii_digit())
        && frac.bytes().all(|b| b.is_ascii_digit())
}

fn parse_decimal(field: &str, name: &str, line: usize) -> Result<f64> {
    if !is_decimal(field) {
        return Err(Error::Parse {
            line,
            message: format!("{name} field `{field}` is not a decimal number"),
        });
    }
    let v: f64 = field.parse().map_err(|_| Error::Parse {
        line,
        message: format!("{name} field `{field}` is not a decimal number"),
    })?;
    if !v.is_finite() {
        return Err(Error::Parse {
            line,
            message: format!("{name} field `{field}` is out of range"),
        });
    }
    Ok(v)
}

fn parse_line(text: &str, line: usize) -> Result<ObservationRecord> {
    let fields: Vec<&str> = text.split_whitespace().collect();
    if fields.len() != 4 {
        return Err(Error::Parse {
            line,
            message: format!("expected 4 fields, found {}", fields.len()),
        });
    }
    let id = Some(fields[0])
        .filter(|f| f.bytes().all(|b| b.is_ascii_digit()))
        .and_then(|f| f.parse::<u32>().ok())
        .filter(|&n| n >= 1)
        .ok_or_else(|| Error::Parse {
            line,
            message: format!(
                "pedestrian number `{}` is not a positive integer",
                fields[0]
            ),
        })?;
    let time = parse_decimal(fields[1], "time", line)?;
    if time < 0.0 {
        return Err(Error::Parse {
            line,
            message: format!("time `{}` is negative", fields[1]),
        });
    }
    let x = parse_decimal(fields[2], "X", line)?;
    let y = parse_decimal(fields[3], "Y", line)?;
    Ok(ObservationRecord {
        pedestrian_id: PedestrianId(id),
        time,
        x,
        y,
    })
}

/// Reads raw rows, checking syntax only. Line numbers in errors are 1-based.
pub fn parse_records<R: BufRead>(reader: R) -> Result<Vec<ObservationRecord>> {
    let mut records = Vec::new();
    let mut seen_content = false;
    for (idx, line) in reader.lines().enumerate() {
        let line = line?;
        let text = line.strip_suffix('\r').unwrap_or(&line);
        let trimmed = text.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        if !seen_content {
            seen_content = true;
            if trimmed.split_whitespace().eq(["N", "T", "X", "Y"]) {
                continue;
            }
        }
        records.push(parse_line(trimmed, idx + 1)?);
    }
    Ok(records)
}

/// Parses an NTXY stream into a dataset. Without a hint the frame interval
/// is the smallest positive time step found within any one pedestrian.
pub fn parse_ntxy<R: BufRead>(reader: R, frame_interval_hint: Option<f64>) -> Result<NtxyDataset> {
    let records = parse_records(reader)?;
    NtxyDataset::from_records(&records, frame_interval_hint)
}

// ---------------------------------------------------------------------------
// Writing

#[derive(Debug, Clone, Copy)]
pub struct WriteOptions {
    pub header: bool,
}

impl Default for WriteOptions {
    fn default() -> Self {
        WriteOptions { header: true }
    }
}

/// Shortest fixed-point rendering (at least one fractional digit) that
/// reads back within a picosecond.
pub fn format_time(t: f64) -> String {
    for decimals in 1..=12 {
        let s = format!("{t:.decimals$}");
        if s.parse::<f64>().is_ok_and(|v| (v - t).abs() <= 1e-12) {
            return s;
        }
    }
    format!("{t}")
}

/// Fixed-point with at most six fractional digits, trailing zeros trimmed.
pub fn format_coordinate(v: f64) -> String {
    let s = format!("{v:.6}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" {
        "0".to_string()
    } else {
        s.to_string()
    }
}

pub fn write_ntxy<W: Write>(dataset: &NtxyDataset, writer: W) -> Result<()> {
    write_ntxy_with(dataset, writer, WriteOptions::default())
}

pub fn write_ntxy_with<W: Write>(
    dataset: &NtxyDataset,
    mut writer: W,
    options: WriteOptions,
) -> Result<()> {
    if options.header {
        writeln!(writer, "{HEADER}")?;
    }
    for r in dataset.records() {
        writeln!(
            writer,
            "{}\t{}\t{}\t{}",
            r.pedestrian_id,
            format_time(r.time),
            format_coordinate(r.x),
            format_coordinate(r.y)
        )?;
    }
    writer.flush()?;
    Ok(())
}

// ---------------------------------------------------------------------------
// Validation

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum DiagnosticRule {
    FrameInterval,
    InvalidId,
    NegativeTime,
    NonFinite,
    Duplicate,
    Cadence,
    Unordered,
}

impl DiagnosticRule {
    pub fn name(self) -> &'static str {
        match self {
            DiagnosticRule::FrameInterval => "frame-interval",
            DiagnosticRule::InvalidId => "invalid-id",
            DiagnosticRule::NegativeTime => "negative-time",
            DiagnosticRule::NonFinite => "non-finite",
            DiagnosticRule::Duplicate => "duplicate",
            DiagnosticRule::Cadence => "cadence",
            DiagnosticRule::Unordered => "unordered",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Diagnostic {
    pub pedestrian: Option<PedestrianId>,
    pub time: Option<f64>,
    pub rule: DiagnosticRule,
    pub message: String,
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.rule.name())?;
        if let Some(id) = self.pedestrian {
            write!(f, ": pedestrian {id}")?;
        }
        if let Some(t) = self.time {
            write!(f, " at t={}", format_time(t))?;
        }
        write!(f, ": {}", self.message)
    }
}

/// Checks every dataset and trajectory invariant; empty iff all hold.
pub fn validate_dataset(dataset: &NtxyDataset) -> Vec<Diagnostic> {
    let mut out = Vec::new();
    let theta = dataset.frame_interval;
    let theta_ok = theta.is_finite() && theta > 0.0;
    if !theta_ok {
        out.push(Diagnostic {
            pedestrian: None,
            time: None,
            rule: DiagnosticRule::FrameInterval,
            message: format!("frame interval {theta} must be positive"),
        });
    }
    for t in dataset.trajectories.values() {
        let id = t.pedestrian_id;
        let diag = |time: Option<f64>, rule, message: String| Diagnostic {
            pedestrian: Some(id),
            time,
            rule,
            message,
        };
        if id.0 == 0 {
            out.push(diag(
                None,
                DiagnosticRule::InvalidId,
                "pedestrian id must be at least 1".into(),
            ));
        }
        for p in &t.points {
            if !p.time.is_finite() || !p.position.is_finite() {
                out.push(diag(
                    Some(p.time),
                    DiagnosticRule::NonFinite,
                    "non-finite time or coordinate".into(),
                ));
            } else if p.time < 0.0 {
                out.push(diag(
                    Some(p.time),
                    DiagnosticRule::NegativeTime,
                    "time is negative".into(),
                ));
            }
        }
        for w in t.points.windows(2) {
            let (a, b) = (w[0].time, w[1].time);
            if !(a.is_finite() && b.is_finite()) {
                continue;
            }
            let delta = b - a;
            if delta < -TIME_TOLERANCE {
                out.push(diag(
                    Some(b),
                    DiagnosticRule::Unordered,
                    format!("follows later time {}", format_time(a)),
                ));
            } else if delta.abs() <= TIME_TOLERANCE {
                out.push(diag(
                    Some(b),
                    DiagnosticRule::Duplicate,
                    "more than one observation at this time".into(),
                ));
            } else if theta_ok && (delta - theta).abs() > TIME_TOLERANCE {
                let message = match frame_multiple(delta, theta) {
                    Some(k) => format!(
                        "{} missing frame(s) between t={} and t={}",
                        k - 1,
                        format_time(a),
                        format_time(b)
                    ),
                    None => format!(
                        "step {delta} from t={} is not a multiple of the frame interval {theta}",
                        format_time(a)
                    ),
                };
                out.push(diag(Some(b), DiagnosticRule::Cadence, message));
            }
        }
    }
    out
}

// ---------------------------------------------------------------------------
// Structural operations

/// Fills internal gaps of up to `max_gap_frames` missing frames by linear
/// interpolation. Larger gaps are an error.
pub fn interpolate_gaps(dataset: &NtxyDataset, max_gap_frames: usize) -> Result<NtxyDataset> {
    let theta = dataset.frame_interval;
    let mut trajectories = Vec::with_capacity(dataset.trajectories.len());
    for t in dataset.trajectories.values() {
        let id = t.pedestrian_id;
        let mut points = Vec::with_capacity(t.points.len());
        points.push(t.points[0]);
        for w in t.points.windows(2) {
            let (a, b) = (w[0], w[1]);
            let delta = b.time - a.time;
            if delta <= TIME_TOLERANCE {
                return Err(Error::DuplicateObservation {
                    pedestrian: id,
                    time: b.time,
                });
            }
            let frames = frame_multiple(delta, theta).ok_or(Error::Cadence {
                pedestrian: id,
                delta,
                frame_interval: theta,
            })?;
            let missing = frames - 1;
            if missing > max_gap_frames {
                return Err(Error::Ungapfillable {
                    pedestrian: id,
                    from: a.time,
                    to: b.time,
                    missing,
                    limit: max_gap_frames,
                });
            }
            for j in 1..frames {
                let s = j as f64 / frames as f64;
                points.push(Observation {
                    time: a.time + j as f64 * theta,
                    position: a.position + (b.position - a.position) * s,
                });
            }
            points.push(b);
        }
        trajectories.push(Trajectory::new(id, points)?);
    }
    Ok(NtxyDataset::new(theta, trajectories)?.with_source_label(dataset.source_label.clone()))
}

/// Keeps observations with `t_start <= time <= t_end`; pedestrians left
/// without observations are dropped.
pub fn clip_window(dataset: &NtxyDataset, t_start: f64, t_end: f64) -> Result<NtxyDataset> {
    if t_start.partial_cmp(&t_end) != Some(std::cmp::Ordering::Less) {
        return Err(Error::InvalidWindow {
            start: t_start,
            end: t_end,
        });
    }
    let trajectories = dataset.trajectories.values().filter_map(|t| {
        let points: Vec<Observation> = t
            .points
            .iter()
            .copied()
            .filter(|p| p.time >= t_start - TIME_TOLERANCE && p.time <= t_end + TIME_TOLERANCE)
            .collect();
        (!points.is_empty()).then_some(Trajectory {
            pedestrian_id: t.pedestrian_id,
            points,
        })
    });
    Ok(NtxyDataset::new(dataset.frame_interval, trajectories)?
        .with_source_label(dataset.source_label.clone()))
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) const SAMPLE: &str = include_str!("../tests/data/sample.ntxy");

    fn sample() -> NtxyDataset {
        parse_ntxy(SAMPLE.as_bytes(), Some(0.5)).unwrap()
    }

    fn dataset(theta: f64, rows: &[(u32, f64, f64, f64)]) -> NtxyDataset {
        let records: Vec<_> = rows
            .iter()
            .map(|&(n, t, x, y)| ObservationRecord {
                pedestrian_id: PedestrianId(n),
                time: t,
                x,
                y,
            })
            .collect();
        NtxyDataset::from_records_lenient(&records, Some(theta)).unwrap()
    }

    #[test]
    fn parses_sample_row() {
        let recs = parse_records("4\t2.0\t586\t145\n".as_bytes()).unwrap();
        assert_eq!(
            recs,
            vec![ObservationRecord {
                pedestrian_id: PedestrianId(4),
                time: 2.0,
                x: 586.0,
                y: 145.0
            }]
        );
    }

    #[test]
    fn empty_stream_is_empty_dataset() {
        let d = parse_ntxy("".as_bytes(), None).unwrap();
        assert!(d.is_empty());
        let d = parse_ntxy("N\tT\tX\tY\n# nothing\n".as_bytes(), None).unwrap();
        assert!(d.is_empty());
    }

    #[test]
    fn sample_groups_into_four_pedestrians() {
        let d = sample();
        let sizes: Vec<_> = d
            .trajectories()
            .map(|t| (t.pedestrian_id().0, t.observation_count()))
            .collect();
        assert_eq!(sizes, vec![(3, 4), (4, 5), (5, 12), (6, 2)]);
        assert_eq!(d.observation_count(), 23);
    }

    #[test]
    fn infers_half_second_frame_interval() {
        let d = parse_ntxy(SAMPLE.as_bytes(), None).unwrap();
        assert_eq!(d.frame_interval(), 0.5);
    }

    #[test]
    fn accepts_spaces_and_crlf() {
        let d = parse_ntxy("1   0.0  1 2\r\n1 0.5 1 3\r\n".as_bytes(), None).unwrap();
        assert_eq!(d.observation_count(), 2);
        assert_eq!(d.frame_interval(), 0.5);
    }

    #[test]
    fn malformed_rows_report_line_numbers() {
        let err = parse_ntxy("N\tT\tX\tY\n1\t0.0\t1\n".as_bytes(), None).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }), "{err}");
        let err = parse_ntxy("1\t0.0\t1\tabc\n".as_bytes(), None).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 1, .. }));
        for bad in [
            "0\t0\t1\t1",
            "-2\t0\t1\t1",
            "1.5\t0\t1\t1",
            "1\t-1\t1\t1",
            "1\tinf\t1\t1",
            "1\t1e3\t1\t1",
        ] {
            assert!(parse_ntxy(bad.as_bytes(), None).is_err(), "{bad}");
        }
    }

    #[test]
    fn duplicate_rows_are_rejected() {
        let err = parse_ntxy("1\t0.0\t1\t1\n1\t0.0\t1\t1\n".as_bytes(), None).unwrap_err();
        assert!(matches!(
            err,
            Error::DuplicateObservation {
                pedestrian: PedestrianId(1),
                ..
            }
        ));
    }

    #[test]
    fn inconsistent_cadence_names_the_pedestrian() {
        let text = "1\t0.0\t0\t0\n1\t0.5\t0\t1\n2\t0.0\t0\t0\n2\t0.75\t0\t1\n";
        let err = parse_ntxy(text.as_bytes(), None).unwrap_err();
        assert!(
            matches!(
                err,
                Error::Cadence {
                    pedestrian: PedestrianId(2),
                    ..
                }
            ),
            "{err}"
        );
    }

    #[test]
    fn hint_must_be_positive() {
        assert!(parse_ntxy("1\t0\t0\t0\n".as_bytes(), Some(0.0)).is_err());
    }

    #[test]
    fn writes_single_row() {
        let d = dataset(0.5, &[(1, 0.0, 1.5, 2.5)]);
        let mut buf = Vec::new();
        write_ntxy_with(&d, &mut buf, WriteOptions { header: false }).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "1\t0.0\t1.5\t2.5\n");
    }

    #[test]
    fn empty_dataset_writes_header_only() {
        let mut buf = Vec::new();
        write_ntxy(&NtxyDataset::empty(0.5).unwrap(), &mut buf).unwrap();
        assert_eq!(buf, b"N\tT\tX\tY\n");
    }

    #[test]
    fn number_formatting() {
        assert_eq!(format_time(13.5), "13.5");
        assert_eq!(format_time(2.0), "2.0");
        assert_eq!(format_time(0.1 * 3.0), "0.3");
        assert_eq!(format_time(0.04 * 7.0), "0.28");
        assert_eq!(format_coordinate(475.0), "475");
        assert_eq!(format_coordinate(-0.25), "-0.25");
        assert_eq!(format_coordinate(1.0 / 3.0), "0.333333");
        assert_eq!(format_coordinate(-1e-9), "0");
    }

    #[test]
    fn sample_round_trips() {
        let d = sample();
        let mut buf = Vec::new();
        write_ntxy(&d, &mut buf).unwrap();
        let again = parse_ntxy(buf.as_slice(), None).unwrap();
        assert_eq!(d, again);
    }

    #[test]
    fn sample_is_valid() {
        assert!(validate_dataset(&sample()).is_empty());
    }

    #[test]
    fn missing_frame_gives_one_cadence_diagnostic() {
        let d = dataset(
            0.5,
            &[(1, 1.0, 0.0, 0.0), (1, 1.5, 0.0, 1.0), (1, 2.5, 0.0, 3.0)],
        );
        let diags = validate_dataset(&d);
        assert_eq!(diags.len(), 1);
        assert_eq!(diags[0].rule, DiagnosticRule::Cadence);
        assert_eq!(diags[0].time, Some(2.5));
    }

    #[test]
    fn duplicate_row_gives_one_duplicate_diagnostic() {
        let d = dataset(
            0.5,
            &[(1, 1.0, 0.0, 0.0), (1, 1.0, 0.0, 0.0), (1, 1.5, 0.0, 1.0)],
        );
        let diags = validate_dataset(&d);
        assert_eq!(diags.len(), 1);
        assert_eq!(diags[0].rule, DiagnosticRule::Duplicate);
    }

    #[test]
    fn interpolates_midpoint() {
        let d = dataset(0.5, &[(1, 1.0, 0.0, 0.0), (1, 2.0, 0.0, 2.0)]);
        let filled = interpolate_gaps(&d, 1).unwrap();
        let pts = filled.trajectory(PedestrianId(1)).unwrap().points();
        assert_eq!(pts.len(), 3);
        assert_eq!(pts[1], Observation::new(1.5, 0.0, 1.0));
        assert!(validate_dataset(&filled).is_empty());
    }

    #[test]
    fn interpolation_is_identity_without_gaps() {
        let d = sample();
        assert_eq!(interpolate_gaps(&d, 0).unwrap(), d);
    }

    #[test]
    fn oversized_gap_is_an_error() {
        let d = dataset(0.5, &[(7, 1.0, 0.0, 0.0), (7, 3.0, 0.0, 2.0)]);
        let err = interpolate_gaps(&d, 1).unwrap_err();
        assert!(matches!(
            err,
            Error::Ungapfillable {
                pedestrian: PedestrianId(7),
                missing: 3,
                limit: 1,
                ..
            }
        ));
    }

    #[test]
    fn clip_keeps_window_rows() {
        let d = sample();
        let c = clip_window(&d, 2.0, 4.0).unwrap();
        assert!(c.trajectory(PedestrianId(3)).is_none());
        assert_eq!(
            c.trajectory(PedestrianId(4)).unwrap().observation_count(),
            5
        );
        assert_eq!(c.frame_interval(), 0.5);
    }

    #[test]
    fn clip_full_span_is_identity_and_far_window_is_empty() {
        let d = sample();
        let (a, b) = d.time_span().unwrap();
        assert_eq!((a, b), (1.0, 15.0));
        assert_eq!(clip_window(&d, a, b).unwrap(), d);
        assert!(clip_window(&d, 100.0, 200.0).unwrap().is_empty());
        assert!(matches!(
            clip_window(&d, 4.0, 4.0),
            Err(Error::InvalidWindow { .. })
        ));
    }
}
