//! Force model and integrator.
//!
//! acceleration = (v0 * e - v) / tau
//!              + sum_j A * exp((r_i + r_j - d_ij) / B) * n_ij
//!              + sum_o A_o * exp((r_i - d_io) / B_o) * n_io
//!
//! where `e` points at the agent's current waypoint: its goal when the
//! straight line is clear, otherwise a corner of the first obstacle in the
//! way. Integration is semi-implicit Euler followed by the speed cap and
//! the trap/obstacle position constraints.

use crate::geometry::{Rect, Vec2};

use super::scenario::{Edge, Scenario};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AgentState {
    /// Spawn-order id (not the NTXY pedestrian number).
    pub id: u32,
    pub position: Vec2,
    pub velocity: Vec2,
    pub desired_speed: f64,
    /// Target point on the exit edge.
    pub goal: Vec2,
    pub radius: f64,
}

impl AgentState {
    pub fn speed_cap(&self, scenario: &Scenario) -> f64 {
        scenario.forces.speed_cap_factor * self.desired_speed
    }
}

/// Extra distance kept from obstacle corners when routing around them.
const CORNER_CLEARANCE: f64 = 0.1;

/// Unit vector toward the agent's next waypoint, or zero at the goal.
/// Detour corners outside `trap` are never chosen while an inside one exists.
pub fn desired_direction(
    position: Vec2,
    goal: Vec2,
    radius: f64,
    obstacles: &[Rect],
    trap: &Rect,
) -> Vec2 {
    let blocking = obstacles
        .iter()
        .filter_map(|o| {
            let body = o.inflated(radius);
            body.segment_entry(position, goal).map(|t| (t, o))
        })
        .min_by(|a, b| a.0.total_cmp(&b.0));
    let target = match blocking {
        None => goal,
        Some((_, obstacle)) => {
            let body = obstacle.inflated(radius);
            let corners = obstacle.inflated(radius + CORNER_CLEARANCE).corners();
            let cost = |c: &Vec2| position.distance(*c) + c.distance(goal);
            let reachable: Vec<Vec2> = corners
                .iter()
                .copied()
                .filter(|c| trap.contains(*c))
                .collect();
            let candidates = if reachable.is_empty() {
                corners.to_vec()
            } else {
                reachable
            };
            let visible = candidates
                .iter()
                .filter(|c| body.segment_entry(position, **c).is_none())
                .min_by(|a, b| cost(a).total_cmp(&cost(b)));
            let best =
                visible.or_else(|| candidates.iter().min_by(|a, b| cost(a).total_cmp(&cost(b))));
            *best.expect("at least one corner")
        }
    };
    (target - position).normalized().unwrap_or(Vec2::ZERO)
}

/// Nearest boundary point, outward unit normal and distance from `p` to the
/// rectangle. Inside the rectangle the distance is 0 and the normal points
/// through the nearest face.
fn obstacle_contact(o: &Rect, p: Vec2) -> (Vec2, Vec2, f64) {
    let nearest = o.closest_point(p);
    let diff = p - nearest;
    let d = diff.norm();
    if d > 0.0 {
        return (nearest, diff / d, d);
    }
    let faces = [
        (p.x - o.min.x, Vec2::new(-1.0, 0.0), Vec2::new(o.min.x, p.y)),
        (o.max.x - p.x, Vec2::new(1.0, 0.0), Vec2::new(o.max.x, p.y)),
        (p.y - o.min.y, Vec2::new(0.0, -1.0), Vec2::new(p.x, o.min.y)),
        (o.max.y - p.y, Vec2::new(0.0, 1.0), Vec2::new(p.x, o.max.y)),
    ];
    let (_, normal, boundary) = faces
        .into_iter()
        .min_by(|a, b| a.0.total_cmp(&b.0))
        .expect("four faces");
    (boundary, normal, 0.0)
}

/// Net acceleration on `agents[index]`.
pub fn acceleration(index: usize, agents: &[AgentState], scenario: &Scenario) -> Vec2 {
    let f = &scenario.forces;
    let me = &agents[index];
    let e = desired_direction(
        me.position,
        me.goal,
        me.radius,
        &scenario.obstacles,
        &scenario.trap,
    );
    let mut acc = (e * me.desired_speed - me.velocity) / f.relaxation_time;

    for (j, other) in agents.iter().enumerate() {
        if j == index {
            continue;
        }
        let diff = me.position - other.position;
        let d = diff.norm();
        let n = match diff.normalized() {
            Some(n) => n,
            // Coincident agents: separate along x, lower id to the left.
            None if me.id < other.id => Vec2::new(-1.0, 0.0),
            None => Vec2::new(1.0, 0.0),
        };
        acc += n * (f.agent_strength * ((me.radius + other.radius - d) / f.agent_range).exp());
    }

    for o in &scenario.obstacles {
        let (_, n, d) = obstacle_contact(o, me.position);
        acc += n * (f.obstacle_strength * ((me.radius - d) / f.obstacle_range).exp());
    }
    acc
}

/// Moves `p` out of any obstacle it overlaps (so its disk just touches)
/// and back inside the trap on every side but the exit.
fn constrain(p: Vec2, radius: f64, scenario: &Scenario) -> Vec2 {
    let mut p = p;
    for o in &scenario.obstacles {
        let (boundary, n, d) = obstacle_contact(o, p);
        if d < radius {
            p = boundary + n * radius;
        }
    }
    let (lo, hi) = (scenario.trap.min, scenario.trap.max);
    let x_hi = if scenario.exit_edge == Edge::East {
        f64::INFINITY
    } else {
        hi.x
    };
    let x_lo = if scenario.exit_edge == Edge::West {
        f64::NEG_INFINITY
    } else {
        lo.x
    };
    let y_hi = if scenario.exit_edge == Edge::North {
        f64::INFINITY
    } else {
        hi.y
    };
    let y_lo = if scenario.exit_edge == Edge::South {
        f64::NEG_INFINITY
    } else {
        lo.y
    };
    Vec2::new(p.x.clamp(x_lo, x_hi), p.y.clamp(y_lo, y_hi))
}

/// Advances all agents by one physics step and drops those that reached
/// the exit edge. Forces are evaluated on the pre-step state; agents are
/// processed in ascending id order.
pub fn step(agents: &[AgentState], scenario: &Scenario) -> Vec<AgentState> {
    let dt = scenario.timestep;
    let mut order: Vec<usize> = (0..agents.len()).collect();
    order.sort_by_key(|&i| agents[i].id);

    let mut next = Vec::with_capacity(agents.len());
    for &i in &order {
        let mut a = agents[i];
        let acc = acceleration(i, agents, scenario);
        let mut v = a.velocity + acc * dt;
        let cap = a.speed_cap(scenario);
        let speed = v.norm();
        if speed > cap {
            v = v * (cap / speed);
        }
        a.velocity = v;
        a.position = constrain(a.position + v * dt, a.radius, scenario);
        if !scenario.exit_edge.reached(&scenario.trap, a.position) {
            next.push(a);
        }
    }
    next
}

#[cfg(test)]
mod tests {
    use super::*;

    fn corridor() -> Scenario {
        Scenario::new(
            Rect::from_corners(Vec2::ZERO, Vec2::new(10.0, 50.0)),
            10.0,
            1,
        )
    }

    fn agent(id: u32, x: f64, y: f64, vy: f64) -> AgentState {
        AgentState {
            id,
            position: Vec2::new(x, y),
            velocity: Vec2::new(0.0, vy),
            desired_speed: 1.2,
            goal: Vec2::new(x, 50.0),
            radius: 0.25,
        }
    }

    #[test]
    fn cruising_agent_is_in_equilibrium() {
        let s = corridor();
        let agents = [agent(1, 5.0, 10.0, 1.2)];
        let acc = acceleration(0, &agents, &s);
        assert!(acc.norm() < 1e-12);
        let after = step(&agents, &s);
        assert_eq!(after[0].velocity, Vec2::new(0.0, 1.2));
    }

    #[test]
    fn relaxation_from_rest() {
        let s = corridor();
        let after = step(&[agent(1, 5.0, 10.0, 0.0)], &s);
        // v += (v0 e - v) / tau * dt = 1.2 * 0.1 / 0.5
        let expected = 0.2 * 1.2;
        assert!((after[0].velocity.y - expected).abs() < 1e-15);
        assert_eq!(after[0].velocity.x, 0.0);
    }

    #[test]
    fn distant_agents_do_not_interact() {
        let s = corridor();
        // separation minus radii = 7.5 > 20 * B = 6
        let agents = [agent(1, 1.0, 10.0, 1.2), agent(2, 9.0, 10.0, 1.2)];
        assert!(acceleration(0, &agents, &s).norm() < 1e-9);
        assert!(acceleration(1, &agents, &s).norm() < 1e-9);
    }

    #[test]
    fn close_agents_push_apart() {
        let s = corridor();
        let agents = [agent(1, 5.0, 10.0, 1.2), agent(2, 5.3, 10.0, 1.2)];
        assert!(acceleration(0, &agents, &s).x < 0.0);
        assert!(acceleration(1, &agents, &s).x > 0.0);
    }

    #[test]
    fn agents_leave_through_the_exit() {
        let s = corridor();
        let after = step(&[agent(1, 5.0, 49.9, 1.2)], &s);
        assert!(after.is_empty());
    }

    #[test]
    fn routes_around_blocking_obstacle() {
        let wall = Rect::from_corners(Vec2::new(0.0, 20.0), Vec2::new(6.0, 21.0));
        let trap = corridor().trap;
        let e = desired_direction(
            Vec2::new(3.0, 15.0),
            Vec2::new(3.0, 50.0),
            0.25,
            &[wall],
            &trap,
        );
        assert!(e.x > 0.0 && e.y > 0.0, "{e:?}");
        let clear = desired_direction(
            Vec2::new(8.0, 15.0),
            Vec2::new(8.0, 50.0),
            0.25,
            &[wall],
            &trap,
        );
        assert_eq!(clear, Vec2::new(0.0, 1.0));
    }

    #[test]
    fn agents_are_kept_out_of_obstacles_and_inside_trap() {
        let mut s = corridor();
        s.obstacles.push(Rect::from_corners(
            Vec2::new(4.0, 20.0),
            Vec2::new(6.0, 21.0),
        ));
        let p = constrain(Vec2::new(5.0, 20.2), 0.25, &s);
        assert_eq!(p, Vec2::new(5.0, 19.75));
        let p = constrain(Vec2::new(-1.0, 5.0), 0.25, &s);
        assert_eq!(p, Vec2::new(0.0, 5.0));
    }
}
