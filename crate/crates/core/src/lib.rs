//! Pedestrian trajectory analytics over the NTXY movement database.
//!
//! An NTXY dataset records, for every pedestrian inside an observation
//! region (the "trap"), one `(N, T, X, Y)` row per frame. This crate
//! parses and writes that format, derives per-pedestrian flow-performance
//! metrics and the aggregate performance index, computes macroscopic flow
//! variables, and ships a small force-based simulator that emits NTXY so
//! facility designs can be compared before and after a change.

pub mod aggregation;
pub mod error;
pub mod geometry;
pub mod metrics;
pub mod ntxy;
pub mod plot;
pub mod report;
pub mod simulator;

pub use aggregation::{
    aggregate, compare_designs, moving_direction, performance_index, select_window_pedestrians,
    traffic_flow_variables, AggregateReport, AnalysisConfig, AnalysisWindow, DesignComparison,
    FlowVariables, TrapGeometry, Verdict, WindowSelection,
};
pub use error::{Error, Result};
pub use geometry::{Rect, Vec2};
pub use metrics::{
    individual_pi, pedestrian_metrics, step_kinematics, MetricsConfig, PedestrianMetrics,
    PiWeights, StepKinematics, UndefinedPolicy, VarianceMode,
};
pub use ntxy::{
    clip_window, interpolate_gaps, parse_ntxy, parse_records, validate_dataset, write_ntxy,
    Diagnostic, DiagnosticRule, NtxyDataset, Observation, ObservationRecord, PedestrianId,
    Trajectory, TIME_TOLERANCE,
};
pub use simulator::{load_scenario, run_to_ntxy, AgentState, Edge, Scenario, SimulationRun};
