//! Route planning for a fleet of range-limited UAVs that should visit as many
//! targets as possible.
//!
//! Two solvers share one problem model: a deterministic nearest-neighbour
//! baseline ([`nn`]) and a Max-Min Ant System variant ([`mmas`]). The
//! [`experiment`] module runs seeded sweeps over fleet sizes and flight ranges
//! derived from the instance's critical distance.

pub mod experiment;
pub mod generate;
pub mod mmas;
pub mod model;
pub mod nn;
pub mod tsplib;

pub use model::{
    plan_cost, route_length, target_coverage, validate_plan, ModelError, ProblemConfig, Route,
    RoutePlan, Violation, RANGE_TOLERANCE,
};
pub use mmas::{run_mmas, MmasOutcome, MmasParams, TauMinSchedule, UpdateRule};
pub use nn::{initial_cost, nn_construct, TieRule};
pub use tsplib::{
    build_distance_matrix, critical_distance, parse_tsplib, DistanceMatrix, Instance, Metric,
    ParseError, ParseErrorKind, Point,
};
