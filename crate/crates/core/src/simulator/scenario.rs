use std::io::BufRead;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::geometry::{Rect, Vec2};

/// Side of the trap rectangle. North is the `max.y` side, east `max.x`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Edge {
    North,
    South,
    East,
    West,
}

impl Edge {
    pub fn as_str(self) -> &'static str {
        match self {
            Edge::North => "north",
            Edge::South => "south",
            Edge::East => "east",
            Edge::West => "west",
        }
    }

    /// Endpoints of this side of `rect`.
    pub fn segment(self, rect: &Rect) -> (Vec2, Vec2) {
        let (lo, hi) = (rect.min, rect.max);
        match self {
            Edge::North => (Vec2::new(lo.x, hi.y), hi),
            Edge::South => (lo, Vec2::new(hi.x, lo.y)),
            Edge::East => (Vec2::new(hi.x, lo.y), hi),
            Edge::West => (lo, Vec2::new(lo.x, hi.y)),
        }
    }

    /// Unit normal pointing out of the rectangle.
    pub fn outward_normal(self) -> Vec2 {
        match self {
            Edge::North => Vec2::new(0.0, 1.0),
            Edge::South => Vec2::new(0.0, -1.0),
            Edge::East => Vec2::new(1.0, 0.0),
            Edge::West => Vec2::new(-1.0, 0.0),
        }
    }

    /// True once `p` has reached or passed this side of `rect`.
    pub fn reached(self, rect: &Rect, p: Vec2) -> bool {
        match self {
            Edge::North => p.y >= rect.max.y,
            Edge::South => p.y <= rect.min.y,
            Edge::East => p.x >= rect.max.x,
            Edge::West => p.x <= rect.min.x,
        }
    }
}

impl FromStr for Edge {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "north" => Ok(Edge::North),
            "south" => Ok(Edge::South),
            "east" => Ok(Edge::East),
            "west" => Ok(Edge::West),
            other => Err(format!("`{other}` is not one of north, south, east, west")),
        }
    }
}

/// Social-force constants.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ForceParameters {
    /// Relaxation time tau (s).
    pub relaxation_time: f64,
    /// Agent repulsion strength (length/s^2).
    pub agent_strength: f64,
    /// Agent repulsion range (length).
    pub agent_range: f64,
    pub obstacle_strength: f64,
    pub obstacle_range: f64,
    /// Speed cap as a multiple of the desired speed.
    pub speed_cap_factor: f64,
}

impl Default for ForceParameters {
    fn default() -> Self {
        ForceParameters {
            relaxation_time: 0.5,
            agent_strength: 2.0,
            agent_range: 0.3,
            obstacle_strength: 4.0,
            obstacle_range: 0.2,
            speed_cap_factor: 1.3,
        }
    }
}

/// An agent injected at a fixed time and place, on top of the random arrivals.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScriptedSpawn {
    pub time: f64,
    pub position: Vec2,
    pub desired_speed: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub trap: Rect,
    pub entry_edge: Edge,
    pub exit_edge: Edge,
    /// Poisson arrival rate (pedestrians/s).
    pub arrival_rate: f64,
    pub speed_min: f64,
    pub speed_max: f64,
    pub obstacles: Vec<Rect>,
    /// Simulated time (s).
    pub duration: f64,
    /// Sampling interval theta (s).
    pub frame_interval: f64,
    /// Physics step (s); `frame_interval` must be a whole multiple of it.
    pub timestep: f64,
    pub seed: u64,
    pub agent_radius: f64,
    pub forces: ForceParameters,
    pub spawns: Vec<ScriptedSpawn>,
}

pub const DEFAULT_ARRIVAL_RATE: f64 = 0.5;
pub const DEFAULT_FRAME_INTERVAL: f64 = 0.5;
pub const DEFAULT_TIMESTEP: f64 = 0.1;
pub const DEFAULT_SPEED_RANGE: (f64, f64) = (1.0, 1.5);
pub const DEFAULT_RADIUS: f64 = 0.25;

impl Scenario {
    /// South-to-north scenario with every optional field at its default.
    pub fn new(trap: Rect, duration: f64, seed: u64) -> Self {
        Scenario {
            trap,
            entry_edge: Edge::South,
            exit_edge: Edge::North,
            arrival_rate: DEFAULT_ARRIVAL_RATE,
            speed_min: DEFAULT_SPEED_RANGE.0,
            speed_max: DEFAULT_SPEED_RANGE.1,
            obstacles: Vec::new(),
            duration,
            frame_interval: DEFAULT_FRAME_INTERVAL,
            timestep: DEFAULT_TIMESTEP,
            seed,
            agent_radius: DEFAULT_RADIUS,
            forces: ForceParameters::default(),
            spawns: Vec::new(),
        }
    }

    /// Physics steps per sampling interval.
    pub fn steps_per_frame(&self) -> usize {
        (self.frame_interval / self.timestep).round() as usize
    }

    pub fn validate(&self) -> Result<()> {
        let positive = |key: &str, v: f64| {
            if v.is_finite() && v > 0.0 {
                Ok(())
            } else {
                Err(Error::config(key, format!("{v} must be positive")))
            }
        };
        if !(self.trap.min.is_finite() && self.trap.max.is_finite())
            || self.trap.width() <= 0.0
            || self.trap.height() <= 0.0
        {
            return Err(Error::config(
                "trap_max",
                "trap rectangle must have positive width and height",
            ));
        }
        if self.entry_edge == self.exit_edge {
            return Err(Error::config("exit_edge", "must differ from entry_edge"));
        }
        if !(self.arrival_rate.is_finite() && self.arrival_rate >= 0.0) {
            return Err(Error::config(
                "arrival_rate",
                format!("{} must be non-negative", self.arrival_rate),
            ));
        }
        positive("speed_min", self.speed_min)?;
        positive("speed_max", self.speed_max)?;
        if self.speed_min > self.speed_max {
            return Err(Error::config("speed_max", "must be at least speed_min"));
        }
        positive("duration", self.duration)?;
        positive("theta", self.frame_interval)?;
        positive("dt", self.timestep)?;
        let k = (self.frame_interval / self.timestep).round();
        if k < 1.0 || (self.frame_interval - k * self.timestep).abs() > 1e-9 {
            return Err(Error::config(
                "dt",
                format!(
                    "theta={} is not a whole multiple of dt={}",
                    self.frame_interval, self.timestep
                ),
            ));
        }
        positive("radius", self.agent_radius)?;
        positive("tau", self.forces.relaxation_time)?;
        positive("agent_range", self.forces.agent_range)?;
        positive("obstacle_range", self.forces.obstacle_range)?;
        for (key, v) in [
            ("agent_repulsion", self.forces.agent_strength),
            ("obstacle_repulsion", self.forces.obstacle_strength),
        ] {
            if !(v.is_finite() && v >= 0.0) {
                return Err(Error::config(key, format!("{v} must be non-negative")));
            }
        }
        if !(self.forces.speed_cap_factor.is_finite() && self.forces.speed_cap_factor >= 1.0) {
            return Err(Error::config("speed_cap", "must be at least 1"));
        }
        for o in &self.obstacles {
            if !(o.min.is_finite() && o.max.is_finite()) || o.width() <= 0.0 || o.height() <= 0.0 {
                return Err(Error::config(
                    "obstacle",
                    "obstacle must have positive width and height",
                ));
            }
            if !self.trap.contains_rect(o) {
                return Err(Error::config("obstacle", "obstacle lies outside the trap"));
            }
        }
        for s in &self.spawns {
            if !(s.time.is_finite() && s.time >= 0.0 && s.time <= self.duration) {
                return Err(Error::config(
                    "spawn",
                    format!("time {} is outside [0, duration]", s.time),
                ));
            }
            if !self.trap.contains(s.position) {
                return Err(Error::config("spawn", "position lies outside the trap"));
            }
            positive("spawn", s.desired_speed)?;
        }
        Ok(())
    }
}

fn parse_numbers(key: &str, value: &str, count: usize) -> Result<Vec<f64>> {
    let numbers = value
        .split(',')
        .map(|s| s.trim().parse::<f64>())
        .collect::<Result<Vec<_>, _>>()
        .map_err(|_| Error::config(key, format!("`{value}` is not a list of numbers")))?;
    if numbers.len() != count || numbers.iter().any(|v| !v.is_finite()) {
        return Err(Error::config(
            key,
            format!("expected {count} finite numbers, got `{value}`"),
        ));
    }
    Ok(numbers)
}

fn parse_scalar(key: &str, value: &str) -> Result<f64> {
    Ok(parse_numbers(key, value, 1)?[0])
}

fn parse_point(key: &str, value: &str) -> Result<Vec2> {
    let v = parse_numbers(key, value, 2)?;
    Ok(Vec2::new(v[0], v[1]))
}

/// Reads the `key = value` scenario format. Required keys: `trap_min`,
/// `trap_max`, `duration`, `seed`; `obstacle` and `spawn` may repeat.
pub fn load_scenario<R: BufRead>(reader: R) -> Result<Scenario> {
    let mut seen = std::collections::BTreeSet::new();
    let mut trap_min = None;
    let mut trap_max = None;
    let mut duration = None;
    let mut seed = None;
    let mut s = Scenario::new(Rect::from_corners(Vec2::ZERO, Vec2::ZERO), 0.0, 0);

    for (idx, line) in reader.lines().enumerate() {
        let line = line?;
        let content = line.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let (key, value) = content.split_once('=').ok_or_else(|| {
            Error::config(content, format!("line {}: expected `key = value`", idx + 1))
        })?;
        let (key, value) = (key.trim(), value.trim());
        let repeatable = matches!(key, "obstacle" | "spawn");
        if !repeatable && !seen.insert(key.to_string()) {
            return Err(Error::config(key, "given more than once"));
        }
        match key {
            "trap_min" => trap_min = Some(parse_point(key, value)?),
            "trap_max" => trap_max = Some(parse_point(key, value)?),
            "entry_edge" => s.entry_edge = value.parse().map_err(|e| Error::config(key, e))?,
            "exit_edge" => s.exit_edge = value.parse().map_err(|e| Error::config(key, e))?,
            "arrival_rate" => s.arrival_rate = parse_scalar(key, value)?,
            "speed_min" => s.speed_min = parse_scalar(key, value)?,
            "speed_max" => s.speed_max = parse_scalar(key, value)?,
            "duration" => duration = Some(parse_scalar(key, value)?),
            "theta" => s.frame_interval = parse_scalar(key, value)?,
            "dt" => s.timestep = parse_scalar(key, value)?,
            "seed" => {
                seed = Some(value.parse::<u64>().map_err(|_| {
                    Error::config(key, format!("`{value}` is not an unsigned 64-bit integer"))
                })?)
            }
            "radius" => s.agent_radius = parse_scalar(key, value)?,
            "tau" => s.forces.relaxation_time = parse_scalar(key, value)?,
            "agent_repulsion" => s.forces.agent_strength = parse_scalar(key, value)?,
            "agent_range" => s.forces.agent_range = parse_scalar(key, value)?,
            "obstacle_repulsion" => s.forces.obstacle_strength = parse_scalar(key, value)?,
            "obstacle_range" => s.forces.obstacle_range = parse_scalar(key, value)?,
            "speed_cap" => s.forces.speed_cap_factor = parse_scalar(key, value)?,
            "obstacle" => {
                let v = parse_numbers(key, value, 4)?;
                s.obstacles.push(Rect::from_corners(
                    Vec2::new(v[0], v[1]),
                    Vec2::new(v[2], v[3]),
                ));
            }
            "spawn" => {
                let v = parse_numbers(key, value, 4)?;
                s.spawns.push(ScriptedSpawn {
                    time: v[0],
                    position: Vec2::new(v[1], v[2]),
                    desired_speed: v[3],
                });
            }
            other => return Err(Error::config(other, "unknown key")),
        }
    }

    let require = |v: Option<Vec2>, key: &str| v.ok_or_else(|| Error::config(key, "missing"));
    s.trap = Rect::from_corners(
        require(trap_min, "trap_min")?,
        require(trap_max, "trap_max")?,
    );
    s.duration = duration.ok_or_else(|| Error::config("duration", "missing"))?;
    s.seed = seed.ok_or_else(|| Error::config("seed", "missing"))?;
    s.validate()?;
    Ok(s)
}
