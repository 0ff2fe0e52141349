//! Individual flow-performance quantities for one pedestrian.
//!
//! Everything is derived from the per-frame walking displacements
//! `d_t = x(t + theta) - x(t)`: total walking distance, average speed,
//! straight-line distance and displacement, mean displacement, the
//! displacement variance, the uncomfortability index and the delay. The
//! individual performance index is the weighted sum `a * gamma + b * lambda`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::Vec2;
use crate::ntxy::{PedestrianId, Trajectory, TIME_TOLERANCE};

/// How the displacement variance feeds the uncomfortability index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum VarianceMode {
    /// Per-axis variances; gamma uses their Euclidean norm.
    #[default]
    Componentwise,
    /// Sum of the per-axis variances (rotation invariant).
    Trace,
}

impl VarianceMode {
    pub fn as_str(self) -> &'static str {
        match self {
            VarianceMode::Componentwise => "componentwise",
            VarianceMode::Trace => "trace",
        }
    }
}

impl std::str::FromStr for VarianceMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "componentwise" => Ok(VarianceMode::Componentwise),
            "trace" => Ok(VarianceMode::Trace),
            other => Err(Error::invalid(
                "variance mode",
                format!("`{other}` (expected componentwise or trace)"),
            )),
        }
    }
}

/// What to do with a pedestrian that never moves (zero walking distance).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum UndefinedPolicy {
    /// Return metrics with gamma and lambda left undefined.
    #[default]
    Flag,
    /// Fail with [`Error::Stationary`].
    Reject,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct MetricsConfig {
    pub variance_mode: VarianceMode,
    pub undefined_policy: UndefinedPolicy,
}

/// Weights of the individual performance index.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PiWeights {
    pub a: f64,
    pub b: f64,
}

impl PiWeights {
    pub fn new(a: f64, b: f64) -> Result<Self> {
        if !(a.is_finite() && b.is_finite() && a >= 0.0 && b >= 0.0 && a + b > 0.0) {
            return Err(Error::invalid(
                "weights",
                format!("a={a}, b={b}: both must be non-negative and not both zero"),
            ));
        }
        Ok(PiWeights { a, b })
    }
}

impl Default for PiWeights {
    fn default() -> Self {
        PiWeights { a: 1.0, b: 1.0 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct StepKinematics {
    pub displacements: Vec<Vec2>,
    pub distances: Vec<f64>,
}

/// Per-frame displacements and their lengths. Requires at least two
/// observations spaced exactly one frame apart.
pub fn step_kinematics(trajectory: &Trajectory, frame_interval: f64) -> Result<StepKinematics> {
    let points = trajectory.points();
    let id = trajectory.pedestrian_id();
    if points.len() < 2 {
        return Err(Error::InsufficientObservations {
            pedestrian: id,
            count: points.len(),
        });
    }
    let mut displacements = Vec::with_capacity(points.len() - 1);
    for w in points.windows(2) {
        if ((w[1].time - w[0].time) - frame_interval).abs() > TIME_TOLERANCE {
            return Err(Error::NonContiguous {
                pedestrian: id,
                time: w[1].time,
            });
        }
        displacements.push(w[1].position - w[0].position);
    }
    let distances = displacements.iter().map(|d| d.norm()).collect();
    Ok(StepKinematics {
        displacements,
        distances,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PedestrianMetrics {
    pub pedestrian_id: PedestrianId,
    /// Number of observations (rho).
    pub observation_count: usize,
    pub t_in: f64,
    pub t_out: f64,
    /// omega: sum of the per-frame walking distances.
    pub total_distance: f64,
    /// Psi: omega / (t_out - t_in).
    pub average_speed: f64,
    /// Omega: distance between the first and last positions.
    pub straight_distance: f64,
    pub straight_displacement: Vec2,
    /// xi: straight displacement / (rho - 1).
    pub mean_displacement: Vec2,
    /// Z: per-axis mean squared deviation of the displacements from xi.
    pub displacement_variance: Vec2,
    pub variance_mode: VarianceMode,
    /// gamma; `None` when the pedestrian never moved.
    pub uncomfortability: Option<f64>,
    /// lambda in seconds per length unit; `None` when the pedestrian never moved.
    pub delay: Option<f64>,
}

impl PedestrianMetrics {
    pub fn is_stationary(&self) -> bool {
        self.uncomfortability.is_none() || self.delay.is_none()
    }

    /// Variance magnitude that enters gamma under the configured mode.
    pub fn variance_magnitude(&self) -> f64 {
        match self.variance_mode {
            VarianceMode::Componentwise => self.displacement_variance.norm(),
            VarianceMode::Trace => self.displacement_variance.x + self.displacement_variance.y,
        }
    }
}

pub fn pedestrian_metrics(
    trajectory: &Trajectory,
    frame_interval: f64,
    config: &MetricsConfig,
) -> Result<PedestrianMetrics> {
    let steps = step_kinematics(trajectory, frame_interval)?;
    let samples = steps.displacements.len() as f64;

    let total_distance: f64 = steps.distances.iter().sum();
    let t_in = trajectory.first_time();
    let t_out = trajectory.last_time();
    let average_speed = total_distance / (t_out - t_in);

    let straight_displacement = trajectory.last_position() - trajectory.first_position();
    let straight_distance = straight_displacement.norm();
    let mean_displacement = straight_displacement / samples;

    let mut sq = Vec2::ZERO;
    for &d in &steps.displacements {
        let dev = d - mean_displacement;
        sq += Vec2::new(dev.x * dev.x, dev.y * dev.y);
    }
    let displacement_variance = sq / samples;

    let mut metrics = PedestrianMetrics {
        pedestrian_id: trajectory.pedestrian_id(),
        observation_count: trajectory.observation_count(),
        t_in,
        t_out,
        total_distance,
        average_speed,
        straight_distance,
        straight_displacement,
        mean_displacement,
        displacement_variance,
        variance_mode: config.variance_mode,
        uncomfortability: None,
        delay: None,
    };

    if total_distance == 0.0 {
        return match config.undefined_policy {
            UndefinedPolicy::Flag => Ok(metrics),
            UndefinedPolicy::Reject => Err(Error::Stationary {
                pedestrian: metrics.pedestrian_id,
            }),
        };
    }

    metrics.uncomfortability = Some(metrics.variance_magnitude() / total_distance);
    let excess = path_excess(&steps, straight_displacement, total_distance);
    metrics.delay = Some(excess / (total_distance * average_speed));
    Ok(metrics)
}

/// `omega - Omega` without cancellation.
///
/// With `u` the unit net heading, `Omega = sum(u . d)`, so the excess is
/// `sum(|d| - u . d)`. Each term is non-negative and, for steps close to
/// `u`, is evaluated as `(u x d)^2 / (|d| + u . d)`. The first-order error
/// from rounding in `u` cancels because `sum(u x d) = 0`.
fn path_excess(steps: &StepKinematics, net: Vec2, total_distance: f64) -> f64 {
    let Some(u) = net.normalized() else {
        return total_distance;
    };
    steps
        .displacements
        .iter()
        .zip(&steps.distances)
        .map(|(d, &len)| {
            let along = u.dot(*d);
            if along > 0.0 {
                let cross = u.x * d.y - u.y * d.x;
                cross * cross / (len + along)
            } else {
                len - along
            }
        })
        .sum()
}

/// `a * gamma + b * lambda`.
pub fn individual_pi(metrics: &PedestrianMetrics, weights: &PiWeights) -> Result<f64> {
    match (metrics.uncomfortability, metrics.delay) {
        (Some(gamma), Some(lambda)) => Ok(weights.a * gamma + weights.b * lambda),
        _ => Err(Error::UndefinedPi(format!(
            "pedestrian {} is stationary",
            metrics.pedestrian_id
        ))),
    }
}
