use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::uncertainty::DurationSpec;

/// How much uncertainty an activity keeps while it is in progress.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum OngoingPolicy {
    /// Remaining mean is the planned remainder `r`; sd is scaled to
    /// `sd * r / mean`, so the coefficient of variation is unchanged.
    #[default]
    LinearScaled,
    /// Remaining mean is `r` but the sd stays at its full original value
    /// until the planned finish.
    AllOrNothing,
}

impl OngoingPolicy {
    pub fn name(self) -> &'static str {
        match self {
            OngoingPolicy::LinearScaled => "linear-scaled",
            OngoingPolicy::AllOrNothing => "all-or-nothing",
        }
    }
}

impl fmt::Display for OngoingPolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for OngoingPolicy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "linear-scaled" | "linear" => Ok(OngoingPolicy::LinearScaled),
            "all-or-nothing" => Ok(OngoingPolicy::AllOrNothing),
            _ => Err(Error::Domain(format!("unknown ongoing policy `{s}`"))),
        }
    }
}

/// State of one activity at a control period, assuming the plan was
/// followed up to that period.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Conditional {
    /// Planned finish at or before `t`: duration is known.
    Finished { duration: f64 },
    /// Started before `t`, finishing after it: the elapsed part is known,
    /// the remainder is drawn from `remaining`.
    Ongoing {
        elapsed: f64,
        remaining: DurationSpec,
    },
    /// Planned start at or after `t`.
    Unstarted(DurationSpec),
}

pub fn conditional_spec(
    spec: &DurationSpec,
    planned_start: u32,
    planned_duration: u32,
    t: u32,
    policy: OngoingPolicy,
) -> Conditional {
    let finish = planned_start + planned_duration;
    if finish <= t {
        return Conditional::Finished {
            duration: f64::from(planned_duration),
        };
    }
    if planned_start >= t {
        return Conditional::Unstarted(*spec);
    }
    let elapsed = t - planned_start;
    let remaining = f64::from(finish - t);
    let cv = match policy {
        OngoingPolicy::LinearScaled => spec.cv,
        OngoingPolicy::AllOrNothing => spec.sd() / remaining,
    };
    Conditional::Ongoing {
        elapsed: f64::from(elapsed),
        remaining: DurationSpec {
            family: spec.family,
            mean: remaining,
            cv,
        },
    }
}
