//! Deterministic microscopic pedestrian simulator that writes NTXY.
//!
//! Pedestrians arrive on the entry edge as a seeded Poisson process (plus
//! any scripted spawns), walk toward the exit edge under a social-force
//! model and are sampled at every multiple of the frame interval while
//! inside the trap.

mod model;
mod scenario;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp};

use crate::error::Result;
use crate::geometry::Vec2;
use crate::ntxy::{NtxyDataset, Observation, PedestrianId, Trajectory};

pub use model::{acceleration, desired_direction, step, AgentState};
pub use scenario::{load_scenario, Edge, ForceParameters, Scenario, ScriptedSpawn};

/// Outcome of one run.
#[derive(Debug, Clone, PartialEq)]
pub struct SimulationRun {
    pub dataset: NtxyDataset,
    pub spawned: usize,
    /// Agents that left through the exit edge before the end.
    pub completed: usize,
    /// Sampling instants covered.
    pub frames: usize,
}

#[derive(Debug, Clone, Copy)]
struct Arrival {
    time: f64,
    position: Vec2,
    desired_speed: f64,
}

/// Spawn-rejection attempts before accepting a point inside an obstacle margin.
const SPAWN_ATTEMPTS: usize = 64;

fn goal_for(scenario: &Scenario, from: Vec2) -> Vec2 {
    let (a, b) = scenario.exit_edge.segment(&scenario.trap);
    let r = scenario.agent_radius;
    // keep the goal off the corners
    let lo = Vec2::new(a.x.min(b.x), a.y.min(b.y));
    let hi = Vec2::new(a.x.max(b.x), a.y.max(b.y));
    let inset = |v: f64, lo: f64, hi: f64| {
        if hi - lo > 2.0 * r {
            v.clamp(lo + r, hi - r)
        } else {
            (lo + hi) / 2.0
        }
    };
    if lo.x == hi.x {
        Vec2::new(lo.x, inset(from.y, lo.y, hi.y))
    } else {
        Vec2::new(inset(from.x, lo.x, hi.x), lo.y)
    }
}

/// Draws arrivals: all arrival times first, then per-agent position and
/// desired speed, from a single ChaCha8 stream seeded by `scenario.seed`.
fn draw_arrivals(scenario: &Scenario) -> Vec<Arrival> {
    let mut rng = ChaCha8Rng::seed_from_u64(scenario.seed);
    let mut times = Vec::new();
    if scenario.arrival_rate > 0.0 {
        let gaps = Exp::new(scenario.arrival_rate).expect("positive rate");
        let mut t = gaps.sample(&mut rng);
        while t < scenario.duration {
            times.push(t);
            t += gaps.sample(&mut rng);
        }
    }

    let (a, b) = scenario.entry_edge.segment(&scenario.trap);
    let r = scenario.agent_radius;
    let length = a.distance(b);
    let along = (b - a).normalized().expect("non-degenerate edge");
    let usable = (length - 2.0 * r).max(0.0);
    let clear = |p: Vec2| !scenario.obstacles.iter().any(|o| o.inflated(r).contains(p));

    let mut arrivals: Vec<Arrival> = times
        .into_iter()
        .map(|time| {
            let mut position = a + along * (length / 2.0);
            for _ in 0..SPAWN_ATTEMPTS {
                let s: f64 = rng.gen();
                position = a + along * ((length - usable) / 2.0 + s * usable);
                if clear(position) {
                    break;
                }
            }
            let desired_speed = if scenario.speed_max > scenario.speed_min {
                rng.gen_range(scenario.speed_min..=scenario.speed_max)
            } else {
                scenario.speed_min
            };
            Arrival {
                time,
                position,
                desired_speed,
            }
        })
        .collect();

    arrivals.extend(scenario.spawns.iter().map(|s| Arrival {
        time: s.time,
        position: s.position,
        desired_speed: s.desired_speed,
    }));
    arrivals.sort_by(|x, y| x.time.total_cmp(&y.time));
    arrivals
}

/// Runs the scenario and returns the sampled dataset with run statistics.
pub fn simulate(scenario: &Scenario) -> Result<SimulationRun> {
    scenario.validate()?;
    let arrivals = draw_arrivals(scenario);
    let dt = scenario.timestep;
    let per_frame = scenario.steps_per_frame();
    let total_steps = ((scenario.duration + 1e-9) / dt).floor() as usize;

    let mut agents: Vec<AgentState> = Vec::new();
    let mut next_arrival = 0;
    let mut next_agent_id = 1u32;
    // agent id -> NTXY pedestrian number, assigned at first sample
    let mut numbering: std::collections::BTreeMap<u32, PedestrianId> = Default::default();
    let mut tracks: Vec<Vec<Observation>> = Vec::new();
    let mut frames = 0;
    let mut completed = 0;

    for k in 0..=total_steps {
        let now = k as f64 * dt;
        while next_arrival < arrivals.len() && arrivals[next_arrival].time <= now + 1e-9 {
            let arr = arrivals[next_arrival];
            let goal = goal_for(scenario, arr.position);
            let heading = desired_direction(
                arr.position,
                goal,
                scenario.agent_radius,
                &scenario.obstacles,
                &scenario.trap,
            );
            agents.push(AgentState {
                id: next_agent_id,
                position: arr.position,
                velocity: heading * arr.desired_speed,
                desired_speed: arr.desired_speed,
                goal,
                radius: scenario.agent_radius,
            });
            next_agent_id += 1;
            next_arrival += 1;
        }

        if k % per_frame == 0 {
            let time = (k / per_frame) as f64 * scenario.frame_interval;
            frames += 1;
            for a in &agents {
                if !scenario.trap.contains(a.position) {
                    continue;
                }
                let id = *numbering.entry(a.id).or_insert_with(|| {
                    tracks.push(Vec::new());
                    PedestrianId(tracks.len() as u32)
                });
                tracks[id.0 as usize - 1].push(Observation {
                    time,
                    position: a.position,
                });
            }
        }

        if k == total_steps {
            break;
        }
        let before = agents.len();
        agents = step(&agents, scenario);
        completed += before - agents.len();
    }

    let trajectories = tracks
        .into_iter()
        .enumerate()
        .map(|(i, points)| Trajectory::new(PedestrianId(i as u32 + 1), points))
        .collect::<Result<Vec<_>>>()?;
    let dataset = NtxyDataset::new(scenario.frame_interval, trajectories)?
        .with_source_label(format!("simulator seed={}", scenario.seed));
    Ok(SimulationRun {
        dataset,
        spawned: (next_agent_id - 1) as usize,
        completed,
        frames,
    })
}

/// The sampled NTXY dataset of a run.
pub fn run_to_ntxy(scenario: &Scenario) -> Result<NtxyDataset> {
    Ok(simulate(scenario)?.dataset)
}
