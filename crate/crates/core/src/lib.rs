//! Schedule risk analysis for resource-constrained project schedules.
//!
//! The crate parses PSPLib-style instances and multi-project bundles,
//! checks candidate schedules for feasibility, attaches stochastic activity
//! durations, and computes a Schedule Risk Baseline (the variance of total
//! project duration at each control period, conditioned on the plan having
//! been followed up to that period) together with its integral, the
//! Schedule Risk Value. Candidates with equal planned makespan can then be
//! ranked by total risk.

pub mod error;
pub mod instance;
pub mod network;
pub mod schedule;
pub mod sgs;
pub mod srb;
pub mod uncertainty;

pub use error::{Error, Result};
pub use instance::{
    parse_instance, parse_multiproject, parse_schedule, write_instance, write_multiproject,
    write_schedule, Activity, ActivityKey, MultiProjectProblem, ProjectEntry, ProjectInstance,
    Resource, Schedule,
};
pub use network::Network;
