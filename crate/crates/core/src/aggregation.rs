//! Window-level aggregation: the pedestrian performance index and the
//! macroscopic flow variables (flow rate, time/space mean speed, area
//! module, moving direction), plus before/after design comparison.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{Rect, Vec2};
use crate::metrics::{
    individual_pi, pedestrian_metrics, MetricsConfig, PedestrianMetrics, PiWeights, VarianceMode,
};
use crate::ntxy::{clip_window, NtxyDataset, PedestrianId, Trajectory, TIME_TOLERANCE};

/// Closed analysis interval `[t_start, t_end]` in seconds.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AnalysisWindow {
    pub t_start: f64,
    pub t_end: f64,
}

impl AnalysisWindow {
    pub fn new(t_start: f64, t_end: f64) -> Result<Self> {
        if !(t_start.is_finite() && t_end.is_finite() && t_start < t_end) {
            return Err(Error::InvalidWindow {
                start: t_start,
                end: t_end,
            });
        }
        Ok(AnalysisWindow { t_start, t_end })
    }

    /// The dataset's full observed time span.
    pub fn full(dataset: &NtxyDataset) -> Result<Self> {
        let (a, b) = dataset.time_span().ok_or(Error::NoPedestrians)?;
        Self::new(a, b)
    }

    pub fn length(&self) -> f64 {
        self.t_end - self.t_start
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrapGeometry {
    /// Trap area A.
    pub area: f64,
    /// Trap length L along the main (Y) travel axis. Metadata only: it
    /// cancels out of the space mean speed.
    pub length: Option<f64>,
    pub rect: Option<Rect>,
}

impl TrapGeometry {
    pub fn new(area: f64, length: Option<f64>) -> Result<Self> {
        if !(area.is_finite() && area > 0.0) {
            return Err(Error::invalid(
                "trap area",
                format!("{area} must be positive"),
            ));
        }
        if let Some(length) = length {
            if !(length.is_finite() && length > 0.0) {
                return Err(Error::invalid(
                    "trap length",
                    format!("{length} must be positive"),
                ));
            }
        }
        Ok(TrapGeometry {
            area,
            length,
            rect: None,
        })
    }

    /// Area and Y-extent taken from the rectangle.
    pub fn from_rect(rect: Rect) -> Result<Self> {
        let mut g = Self::new(rect.area(), Some(rect.height()))?;
        g.rect = Some(rect);
        Ok(g)
    }

    /// Attaches a rectangle, which must agree with the area and, when set,
    /// the length.
    pub fn with_rect(mut self, rect: Rect) -> Result<Self> {
        let close = |a: f64, b: f64| (a - b).abs() <= 1e-6 * a.abs().max(b.abs());
        let length_ok = self.length.is_none_or(|l| close(rect.height(), l));
        if !close(rect.area(), self.area) || !length_ok {
            return Err(Error::invalid(
                "trap geometry",
                format!(
                    "rectangle gives A={} L={}, configured A={} L={:?}",
                    rect.area(),
                    rect.height(),
                    self.area,
                    self.length
                ),
            ));
        }
        self.length.get_or_insert(rect.height());
        self.rect = Some(rect);
        Ok(self)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct AnalysisConfig {
    pub metrics: MetricsConfig,
    pub weights: PiWeights,
}

#[derive(Debug, Clone, PartialEq)]
pub struct WindowSelection {
    /// Clipped trajectories with at least two in-window observations.
    pub trajectories: Vec<Trajectory>,
    /// Pedestrians seen exactly once inside the window.
    pub single_observation: usize,
}

impl WindowSelection {
    pub fn n(&self) -> usize {
        self.trajectories.len()
    }
}

pub fn select_window_pedestrians(
    dataset: &NtxyDataset,
    window: &AnalysisWindow,
) -> Result<WindowSelection> {
    let clipped = clip_window(dataset, window.t_start, window.t_end)?;
    let (trajectories, singles): (Vec<_>, Vec<_>) = clipped
        .trajectories()
        .cloned()
        .partition(|t| t.observation_count() >= 2);
    Ok(WindowSelection {
        trajectories,
        single_observation: singles.len(),
    })
}

/// Arithmetic mean of the individual indices.
pub fn performance_index(per_pedestrian_pi: &[f64]) -> Result<f64> {
    if per_pedestrian_pi.is_empty() {
        return Err(Error::NoPedestrians);
    }
    Ok(per_pedestrian_pi.iter().sum::<f64>() / per_pedestrian_pi.len() as f64)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FlowVariables {
    pub flow_rate: f64,
    pub time_mean_speed: Option<f64>,
    pub space_mean_speed: Option<f64>,
    pub area_module: Option<f64>,
}

/// `q = n / (T2 - T1)`; TMS and SMS are the arithmetic and harmonic means
/// of `speeds`; `M = A / n`.
pub fn traffic_flow_variables(
    speeds: &[f64],
    n: usize,
    window: &AnalysisWindow,
    trap: Option<&TrapGeometry>,
) -> FlowVariables {
    let flow_rate = n as f64 / window.length();
    let (time_mean_speed, space_mean_speed) = if speeds.is_empty() {
        (None, None)
    } else {
        let count = speeds.len() as f64;
        let tms = speeds.iter().sum::<f64>() / count;
        let sms = speeds
            .iter()
            .all(|&s| s > 0.0)
            .then(|| count / speeds.iter().map(|s| 1.0 / s).sum::<f64>());
        (Some(tms), sms)
    };
    let area_module = match (trap, n) {
        (Some(g), n) if n > 0 => Some(g.area / n as f64),
        _ => None,
    };
    FlowVariables {
        flow_rate,
        time_mean_speed,
        space_mean_speed,
        area_module,
    }
}

/// Unit vector from the first to the last recorded position.
pub fn moving_direction(trajectory: &Trajectory) -> Result<Vec2> {
    (trajectory.last_position() - trajectory.first_position())
        .normalized()
        .ok_or(Error::UndefinedDirection {
            pedestrian: trajectory.pedestrian_id(),
        })
}

#[derive(Debug, Clone, PartialEq)]
pub struct PedestrianResult {
    pub metrics: PedestrianMetrics,
    pub pi: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AggregateReport {
    pub window: AnalysisWindow,
    /// Distinct pedestrians with at least two in-window observations.
    pub n: usize,
    /// Pedestrians left out of the means: single in-window observation or
    /// no movement.
    pub excluded: usize,
    pub pi: Option<f64>,
    pub q: f64,
    pub tms: Option<f64>,
    pub sms: Option<f64>,
    pub area_module: Option<f64>,
    pub weights: PiWeights,
    pub variance_mode: VarianceMode,
    #[serde(default)]
    pub directions: BTreeMap<PedestrianId, Vec2>,
    #[serde(skip)]
    pub pedestrians: Vec<PedestrianResult>,
}

/// Full window analysis. Metrics are computed on the clipped
/// sub-trajectories and summed in ascending pedestrian-id order.
pub fn aggregate(
    dataset: &NtxyDataset,
    window: &AnalysisWindow,
    trap: Option<&TrapGeometry>,
    config: &AnalysisConfig,
) -> Result<AggregateReport> {
    let selection = select_window_pedestrians(dataset, window)?;
    let theta = dataset.frame_interval();

    let mut pedestrians = Vec::with_capacity(selection.n());
    let mut directions = BTreeMap::new();
    for t in &selection.trajectories {
        let metrics = pedestrian_metrics(t, theta, &config.metrics)?;
        let pi = individual_pi(&metrics, &config.weights).ok();
        if let Ok(dir) = moving_direction(t) {
            directions.insert(t.pedestrian_id(), dir);
        }
        pedestrians.push(PedestrianResult { metrics, pi });
    }

    let defined: Vec<&PedestrianResult> = pedestrians.iter().filter(|p| p.pi.is_some()).collect();
    let pis: Vec<f64> = defined.iter().filter_map(|p| p.pi).collect();
    let speeds: Vec<f64> = defined.iter().map(|p| p.metrics.average_speed).collect();
    let flow = traffic_flow_variables(&speeds, selection.n(), window, trap);

    Ok(AggregateReport {
        window: *window,
        n: selection.n(),
        excluded: selection.single_observation + (pedestrians.len() - defined.len()),
        pi: performance_index(&pis).ok(),
        q: flow.flow_rate,
        tms: flow.time_mean_speed,
        sms: flow.space_mean_speed,
        area_module: flow.area_module,
        weights: config.weights,
        variance_mode: config.metrics.variance_mode,
        directions,
        pedestrians,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    #[serde(rename = "after better")]
    AfterBetter,
    #[serde(rename = "before better")]
    BeforeBetter,
    #[serde(rename = "tie")]
    Tie,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::AfterBetter => "after better",
            Verdict::BeforeBetter => "before better",
            Verdict::Tie => "tie",
        }
    }
}

/// Differences `after - before`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReportDelta {
    pub pi: f64,
    pub q: f64,
    pub tms: Option<f64>,
    pub sms: Option<f64>,
    pub area_module: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DesignComparison {
    pub before: AggregateReport,
    pub after: AggregateReport,
    pub delta: ReportDelta,
    pub verdict: Verdict,
}

/// A lower performance index marks the better design.
pub fn compare_designs(
    before: &AggregateReport,
    after: &AggregateReport,
) -> Result<DesignComparison> {
    if before.weights != after.weights {
        return Err(Error::IncomparableReports(format!(
            "weights differ (a={}, b={} vs a={}, b={})",
            before.weights.a, before.weights.b, after.weights.a, after.weights.b
        )));
    }
    if before.variance_mode != after.variance_mode {
        return Err(Error::IncomparableReports(format!(
            "variance modes differ ({} vs {})",
            before.variance_mode.as_str(),
            after.variance_mode.as_str()
        )));
    }
    if (before.window.length() - after.window.length()).abs() > TIME_TOLERANCE {
        return Err(Error::IncomparableReports(format!(
            "window lengths differ ({} s vs {} s)",
            before.window.length(),
            after.window.length()
        )));
    }
    let (Some(pi_before), Some(pi_after)) = (before.pi, after.pi) else {
        return Err(Error::IncomparableReports(
            "performance index is undefined in at least one report".into(),
        ));
    };
    let diff = |a: Option<f64>, b: Option<f64>| Some(b? - a?);
    let delta = ReportDelta {
        pi: pi_after - pi_before,
        q: after.q - before.q,
        tms: diff(before.tms, after.tms),
        sms: diff(before.sms, after.sms),
        area_module: diff(before.area_module, after.area_module),
    };
    let verdict = if pi_after < pi_before {
        Verdict::AfterBetter
    } else if pi_after > pi_before {
        Verdict::BeforeBetter
    } else {
        Verdict::Tie
    };
    Ok(DesignComparison {
        before: before.clone(),
        after: after.clone(),
        delta,
        verdict,
    })
}
