mod common;

use common::{close, naive_metrics, rows_of, trajectory, walk_strategy};
use pedflow::{
    compare_designs, individual_pi, pedestrian_metrics, performance_index, traffic_flow_variables,
    AggregateReport, AnalysisWindow, MetricsConfig, PedestrianMetrics, PiWeights, VarianceMode,
    Verdict,
};
use proptest::prelude::*;

const REL: f64 = 1e-9;

fn metrics(rows: &[(f64, f64, f64)], theta: f64, mode: VarianceMode) -> PedestrianMetrics {
    let config = MetricsConfig {
        variance_mode: mode,
        ..Default::default()
    };
    pedestrian_metrics(&trajectory(1, rows), theta, &config).unwrap()
}

fn all_close(a: &PedestrianMetrics, b: &PedestrianMetrics, rel: f64) -> bool {
    close(a.total_distance, b.total_distance, rel)
        && close(a.average_speed, b.average_speed, rel)
        && close(a.straight_distance, b.straight_distance, rel)
        // vector components are compared against the path scale
        && (a.mean_displacement - b.mean_displacement).norm() <= rel * a.total_distance
        && (a.straight_displacement - b.straight_displacement).norm() <= rel * a.total_distance
        && (a.displacement_variance - b.displacement_variance).norm()
            <= rel * a.displacement_variance.norm().max(a.total_distance * a.total_distance * 1e-6)
        && close(a.uncomfortability.unwrap(), b.uncomfortability.unwrap(), rel)
        && close(a.delay.unwrap(), b.delay.unwrap(), rel)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn matches_naive_oracle((theta, rows) in walk_strategy(5..=50)) {
        let m = metrics(&rows, theta, VarianceMode::Componentwise);
        let o = naive_metrics(&rows);
        prop_assert!(close(m.total_distance, o.omega, REL));
        prop_assert!(close(m.average_speed, o.psi, REL));
        prop_assert!(close(m.straight_distance, o.omega_straight, REL));
        prop_assert!(close(m.mean_displacement.x, o.xi.0, REL));
        prop_assert!(close(m.mean_displacement.y, o.xi.1, REL));
        prop_assert!(close(m.displacement_variance.x, o.var.0, REL));
        prop_assert!(close(m.displacement_variance.y, o.var.1, REL));
        prop_assert!(close(m.uncomfortability.unwrap(), o.gamma, REL));
        prop_assert!(close(m.delay.unwrap(), o.lambda, REL));
        let t = metrics(&rows, theta, VarianceMode::Trace);
        prop_assert!(close(t.uncomfortability.unwrap(), o.gamma_trace, REL));
    }

    #[test]
    fn structural_invariants((theta, rows) in walk_strategy(2..=40)) {
        let m = metrics(&rows, theta, VarianceMode::Componentwise);
        prop_assert!(m.total_distance >= m.straight_distance * (1.0 - 1e-12));
        prop_assert!(m.displacement_variance.x >= 0.0 && m.displacement_variance.y >= 0.0);
        prop_assert!(m.uncomfortability.unwrap() >= 0.0 && m.delay.unwrap() >= 0.0);
        prop_assert!(close(m.average_speed * (m.t_out - m.t_in), m.total_distance, 1e-12));
        let traj = trajectory(1, &rows);
        let steps = pedflow::step_kinematics(&traj, theta).unwrap();
        prop_assert_eq!(steps.displacements.len(), rows.len() - 1);
        let mut sum = pedflow::Vec2::ZERO;
        for (d, &dist) in steps.displacements.iter().zip(&steps.distances) {
            prop_assert!(close(d.norm(), dist, 1e-12));
            sum += *d;
        }
        prop_assert!((sum - m.straight_displacement).norm() <= 1e-9 * m.total_distance);
    }

    #[test]
    fn translation_invariance((theta, rows) in walk_strategy(3..=30), dx in -1e3..1e3f64, dy in -1e3..1e3f64) {
        let base = metrics(&rows, theta, VarianceMode::Componentwise);
        let moved: Vec<_> = rows.iter().map(|&(t, x, y)| (t, x + dx, y + dy)).collect();
        prop_assert!(all_close(&base, &metrics(&moved, theta, VarianceMode::Componentwise), 1e-9));
    }

    #[test]
    fn time_shift_invariance((theta, rows) in walk_strategy(3..=30), frames in 0u32..10_000) {
        let base = metrics(&rows, theta, VarianceMode::Componentwise);
        let shift = frames as f64 * theta;
        let shifted: Vec<_> = rows.iter().map(|&(t, x, y)| (t + shift, x, y)).collect();
        let m = metrics(&shifted, theta, VarianceMode::Componentwise);
        prop_assert!(all_close(&base, &m, 1e-9));
    }

    #[test]
    fn scaling_laws((theta, rows) in walk_strategy(3..=30), k in 0.01..100.0f64) {
        let base = metrics(&rows, theta, VarianceMode::Componentwise);
        let scaled: Vec<_> = rows.iter().map(|&(t, x, y)| (t, x * k, y * k)).collect();
        let m = metrics(&scaled, theta, VarianceMode::Componentwise);
        prop_assert!(close(m.total_distance, k * base.total_distance, REL));
        prop_assert!(close(m.average_speed, k * base.average_speed, REL));
        prop_assert!(close(m.straight_distance, k * base.straight_distance, REL));
        prop_assert!(close(m.mean_displacement.norm(), k * base.mean_displacement.norm(), REL));
        prop_assert!(close(m.displacement_variance.x, k * k * base.displacement_variance.x, REL));
        prop_assert!(close(m.displacement_variance.y, k * k * base.displacement_variance.y, REL));
        prop_assert!(close(m.uncomfortability.unwrap(), k * base.uncomfortability.unwrap(), REL));
        prop_assert!(close(m.delay.unwrap(), base.delay.unwrap() / k, REL));
    }

    #[test]
    fn straight_uniform_walk_is_ideal(
        theta in common::theta_strategy(),
        n in 2usize..40,
        (x0, y0) in (-100.0..100.0f64, -100.0..100.0f64),
        step in 0.1..3.0f64,
    ) {
        // axis-aligned so every step is bitwise identical
        let rows: Vec<_> = (0..n).map(|i| (i as f64 * theta, x0, y0 + i as f64 * step)).collect();
        let m = metrics(&rows, theta, VarianceMode::Componentwise);
        prop_assert!(m.uncomfortability.unwrap().abs() <= 1e-12);
        prop_assert!(m.delay.unwrap().abs() <= 1e-12);
        prop_assert!(individual_pi(&m, &PiWeights::default()).unwrap().abs() <= 1e-12);
    }

    #[test]
    fn nonuniform_steps_have_positive_gamma((theta, rows) in walk_strategy(3..=20)) {
        let m = metrics(&rows, theta, VarianceMode::Componentwise);
        // random steps are never all identical
        prop_assert!(m.uncomfortability.unwrap() > 0.0);
    }

    #[test]
    fn bent_paths_have_positive_delay((theta, rows) in walk_strategy(3..=20)) {
        let m = metrics(&rows, theta, VarianceMode::Componentwise);
        prop_assert!(m.delay.unwrap() > 0.0);
    }

    #[test]
    fn collinear_forward_steps_have_zero_delay(steps in prop::collection::vec(0.1..3.0f64, 1..30)) {
        let mut rows = vec![(0.0, 0.0, 0.0)];
        let mut y = 0.0;
        for (i, s) in steps.iter().enumerate() {
            y += s;
            rows.push(((i + 1) as f64 * 0.5, 0.0, y));
        }
        let m = metrics(&rows, 0.5, VarianceMode::Componentwise);
        prop_assert!(m.delay.unwrap() <= 1e-12);
    }

    #[test]
    fn sms_never_exceeds_tms(speeds in prop::collection::vec(0.01..10.0f64, 1..60)) {
        let w = AnalysisWindow::new(0.0, 100.0).unwrap();
        let f = traffic_flow_variables(&speeds, speeds.len(), &w, None);
        let (tms, sms) = (f.time_mean_speed.unwrap(), f.space_mean_speed.unwrap());
        prop_assert!(sms <= tms * (1.0 + 1e-12));
        prop_assert!(close(f.flow_rate * w.length(), speeds.len() as f64, 1e-12));
    }

    #[test]
    fn mean_pi_is_bounded(pis in prop::collection::vec(0.0..5.0f64, 1..50)) {
        let pi = performance_index(&pis).unwrap();
        let lo = pis.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = pis.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        prop_assert!(pi >= lo * (1.0 - 1e-12) && pi <= hi * (1.0 + 1e-12));
    }

    #[test]
    fn verdict_is_antisymmetric(a in 0.0..2.0f64, b in 0.0..2.0f64) {
        let report = |pi: f64| AggregateReport {
            window: AnalysisWindow::new(0.0, 60.0).unwrap(),
            n: 5,
            excluded: 0,
            pi: Some(pi),
            q: 0.1,
            tms: Some(1.0),
            sms: Some(1.0),
            area_module: None,
            weights: PiWeights::default(),
            variance_mode: VarianceMode::Componentwise,
            directions: Default::default(),
            pedestrians: Vec::new(),
        };
        let fwd = compare_designs(&report(a), &report(b)).unwrap().verdict;
        let back = compare_designs(&report(b), &report(a)).unwrap().verdict;
        let flipped = match fwd {
            Verdict::AfterBetter => Verdict::BeforeBetter,
            Verdict::BeforeBetter => Verdict::AfterBetter,
            Verdict::Tie => Verdict::Tie,
        };
        prop_assert_eq!(back, flipped);
    }
}

#[test]
fn equal_speeds_make_sms_equal_tms() {
    let w = AnalysisWindow::new(0.0, 10.0).unwrap();
    let f = traffic_flow_variables(&[1.3; 7], 7, &w, None);
    assert!(close(
        f.time_mean_speed.unwrap(),
        f.space_mean_speed.unwrap(),
        1e-15
    ));
}

#[test]
fn oracle_agrees_on_pedestrian4() {
    let rows = [
        (2.0, 586.0, 145.0),
        (2.5, 592.0, 233.0),
        (3.0, 598.0, 311.0),
        (3.5, 598.0, 379.0),
        (4.0, 585.0, 442.0),
    ];
    let o = naive_metrics(&rows);
    let m = metrics(&rows, 0.5, VarianceMode::Componentwise);
    assert_eq!(rows_of(&trajectory(4, &rows)).len(), 5);
    assert!(close(o.gamma, m.uncomfortability.unwrap(), 1e-12));
    assert_eq!(o.var, (60.1875, 92.1875));
}
