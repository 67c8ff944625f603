//! Schedule Risk Baseline engine.
//!
//! For a feasible schedule and a duration model, the baseline at control
//! period `t` is the variance of total project duration given that every
//! activity ran exactly as planned up to `t`. Finished work is fixed,
//! ongoing work keeps only the uncertainty of its remaining part, and
//! unstarted work is fully stochastic. The Schedule Risk Value is the
//! area under that curve from 0 to the planned finish.
//!
//! Every replication draws one standard-normal deviate per activity and
//! reuses it at every control period and for every candidate schedule
//! (common random numbers).

mod conditional;
mod grid;
mod quadrature;
mod rank;
mod simulate;

pub use conditional::{conditional_spec, Conditional, OngoingPolicy};
pub use grid::ControlGrid;
pub use quadrature::{srv, trapezoid};
pub use rank::{rank_schedules, Policies, RiskReport, RunInfo, ScheduleRisk};
pub use simulate::{
    analyze, simulate_duration, simulate_table, srb_curve, DeviateSource, NormalDeviates,
    ReplicationTable, ScheduleAnalysis, SimOptions, SrbCurve, SrbPoint, StartPolicy,
};
