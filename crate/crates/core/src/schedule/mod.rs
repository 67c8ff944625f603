//! Deterministic schedule analysis: critical-path forward pass,
//! feasibility checks and multi-project comparison metrics.

mod cpm;
mod feasibility;
mod metrics;

pub use cpm::{cpm, cpm_makespan, late_starts, CpmResult};
pub use feasibility::{
    makespan, resource_profile, validate, validate_starts, FeasibilityReport, PrecedenceViolation,
    ReleaseViolation, ResourceProfile, ResourceViolation,
};
pub use metrics::{multiproject_metrics, MultiProjectMetrics};
