//! Test helpers: random trajectory generation and a deliberately naive
//! re-implementation of the per-pedestrian formulas, written against plain
//! `(t, x, y)` tuples so it shares no code with the library.

#![allow(dead_code)]

use pedflow::{Observation, PedestrianId, Trajectory};
use proptest::prelude::*;

#[derive(Debug, Clone, PartialEq)]
pub struct Naive {
    pub omega: f64,
    pub psi: f64,
    pub omega_straight: f64,
    pub disp: (f64, f64),
    pub xi: (f64, f64),
    pub var: (f64, f64),
    pub gamma: f64,
    pub gamma_trace: f64,
    pub lambda: f64,
}

pub fn naive_metrics(rows: &[(f64, f64, f64)]) -> Naive {
    let rho = rows.len();
    let mut omega = 0.0;
    let mut dx = Vec::new();
    let mut dy = Vec::new();
    for i in 0..rho - 1 {
        let ax = rows[i + 1].1 - rows[i].1;
        let ay = rows[i + 1].2 - rows[i].2;
        dx.push(ax);
        dy.push(ay);
        omega += (ax * ax + ay * ay).sqrt();
    }
    let duration = rows[rho - 1].0 - rows[0].0;
    let psi = omega / duration;
    let sx = rows[rho - 1].1 - rows[0].1;
    let sy = rows[rho - 1].2 - rows[0].2;
    let omega_straight = (sx * sx + sy * sy).sqrt();
    let m = (rho - 1) as f64;
    let xi = (sx / m, sy / m);
    let mut vx = 0.0;
    let mut vy = 0.0;
    for i in 0..rho - 1 {
        vx += (dx[i] - xi.0).powi(2);
        vy += (dy[i] - xi.1).powi(2);
    }
    let var = (vx / m, vy / m);
    let gamma = (var.0 * var.0 + var.1 * var.1).sqrt() / omega;
    let gamma_trace = (var.0 + var.1) / omega;
    let lambda = (omega - omega_straight) / (omega * psi);
    Naive {
        omega,
        psi,
        omega_straight,
        disp: (sx, sy),
        xi,
        var,
        gamma,
        gamma_trace,
        lambda,
    }
}

pub fn rows_of(t: &Trajectory) -> Vec<(f64, f64, f64)> {
    t.points()
        .iter()
        .map(|p| (p.time, p.position.x, p.position.y))
        .collect()
}

pub fn trajectory(id: u32, rows: &[(f64, f64, f64)]) -> Trajectory {
    Trajectory::new(
        PedestrianId(id),
        rows.iter()
            .map(|&(t, x, y)| Observation::new(t, x, y))
            .collect(),
    )
    .unwrap()
}

/// Relative closeness with an absolute floor for values near zero.
pub fn close(a: f64, b: f64, rel: f64) -> bool {
    (a - b).abs() <= rel * a.abs().max(b.abs()).max(1e-12)
}

/// Frame intervals that are exact in binary and decimal alike.
pub fn theta_strategy() -> impl Strategy<Value = f64> {
    prop::sample::select(vec![0.04, 0.1, 0.2, 0.25, 0.5, 1.0, 2.0])
}

/// A zig-zag walk with `len` points starting on a random frame.
pub fn walk_strategy(
    len: std::ops::RangeInclusive<usize>,
) -> impl Strategy<Value = (f64, Vec<(f64, f64, f64)>)> {
    (theta_strategy(), 0u32..200, len).prop_flat_map(|(theta, start_frame, n)| {
        (
            Just(theta),
            Just(start_frame),
            (-50.0..50.0f64, -50.0..50.0f64),
            prop::collection::vec((0.05..3.0f64, 0.05..0.8f64), n - 1),
        )
            .prop_map(|(theta, start_frame, (x0, y0), steps)| {
                let t0 = start_frame as f64 * theta;
                let mut rows = vec![(t0, x0, y0)];
                let (mut x, mut y) = (x0, y0);
                for (i, (len, angle)) in steps.into_iter().enumerate() {
                    // mostly +Y, zig-zagging so that no two consecutive
                    // steps are parallel
                    let side = if i % 2 == 0 { 1.0 } else { -1.0 };
                    let heading = std::f64::consts::FRAC_PI_2 + side * angle;
                    x += len * heading.cos();
                    y += len * heading.sin();
                    rows.push(((start_frame as usize + i + 1) as f64 * theta, x, y));
                }
                (theta, rows)
            })
    })
}
