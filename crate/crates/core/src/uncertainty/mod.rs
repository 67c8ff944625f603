//! Stochastic activity durations: distribution families parameterized by
//! mean and coefficient of variation, reproducible cv assignment, and the
//! per-run duration model.

mod cv;
mod family;
mod model;

pub use cv::assign_cvs;
pub use family::{lognormal_params, DurationSpec, Family};
pub use model::{DurationModel, ModelActivity, ModelConfig, ModelFile};
