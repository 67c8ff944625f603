//! Project instances, multi-project bundles and candidate schedules.

mod multiproject;
mod psplib;
mod schedule_file;

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use multiproject::{parse_multiproject, write_multiproject, MultiProjectProblem, ProjectEntry};
pub use psplib::{parse_instance, write_instance};
pub use schedule_file::{parse_schedule, write_schedule};

/// A single-mode activity. `id` is the 0-based position inside its
/// instance; `file_id` is the job number used in the source file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Activity {
    pub id: usize,
    pub file_id: u32,
    pub duration: u32,
    /// Units requested per period, aligned with `ProjectInstance::resources`.
    pub demands: Vec<u32>,
    /// Successor ids (0-based).
    pub successors: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Resource {
    pub id: String,
    pub capacity: u32,
}

/// Header values of a PSPLib file that carry no scheduling meaning here
/// but are kept so a parsed file can be written back unchanged.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct PsplibHeader {
    pub generator_seed: u64,
    pub horizon: u32,
    pub release_date: u32,
    pub due_date: u32,
    pub tardiness_cost: u32,
    pub mpm_time: u32,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProjectInstance {
    pub name: String,
    pub header: PsplibHeader,
    pub activities: Vec<Activity>,
    pub resources: Vec<Resource>,
}

impl ProjectInstance {
    /// Builds an instance and checks its invariants: unique file ids,
    /// successors in range, one source, one sink, empty dummies, no cycles.
    pub fn new(
        name: impl Into<String>,
        activities: Vec<Activity>,
        resources: Vec<Resource>,
    ) -> Result<Self> {
        let instance = ProjectInstance {
            name: name.into(),
            header: PsplibHeader::default(),
            activities,
            resources,
        };
        instance.validate()?;
        Ok(instance)
    }

    /// Convenience constructor for tests and examples: activities given as
    /// `(duration, demands, successor file ids)` with file ids `1..=n`.
    pub fn from_table(
        name: impl Into<String>,
        rows: &[(u32, Vec<u32>, Vec<u32>)],
        capacities: &[u32],
    ) -> Result<Self> {
        let activities = rows
            .iter()
            .enumerate()
            .map(|(id, (duration, demands, succ))| Activity {
                id,
                file_id: id as u32 + 1,
                duration: *duration,
                demands: demands.clone(),
                successors: succ.iter().map(|s| *s as usize - 1).collect(),
            })
            .collect();
        let resources = capacities
            .iter()
            .enumerate()
            .map(|(i, &capacity)| Resource {
                id: format!("R{}", i + 1),
                capacity,
            })
            .collect();
        Self::new(name, activities, resources)
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.activities.len();
        if n == 0 {
            return Err(Error::Invalid("instance has no activities".into()));
        }
        let mut seen = HashMap::new();
        for (pos, a) in self.activities.iter().enumerate() {
            if a.id != pos {
                return Err(Error::Invalid(format!(
                    "activity {} stored at position {pos} has id {}",
                    a.file_id, a.id
                )));
            }
            if seen.insert(a.file_id, pos).is_some() {
                return Err(Error::DuplicateActivity(a.file_id.to_string()));
            }
            if a.demands.len() != self.resources.len() {
                return Err(Error::Invalid(format!(
                    "activity {} lists {} demands for {} resources",
                    a.file_id,
                    a.demands.len(),
                    self.resources.len()
                )));
            }
            if let Some(&s) = a.successors.iter().find(|&&s| s >= n) {
                return Err(Error::Invalid(format!(
                    "activity {} has unknown successor index {s}",
                    a.file_id
                )));
            }
        }

        let preds = self.predecessor_counts();
        let sources: Vec<_> = (0..n).filter(|&i| preds[i] == 0).collect();
        let sinks: Vec<_> = (0..n)
            .filter(|&i| self.activities[i].successors.is_empty())
            .collect();
        if sources.len() != 1 {
            return Err(Error::Invalid(format!(
                "expected exactly one source activity, found {}",
                sources.len()
            )));
        }
        if sinks.len() != 1 {
            return Err(Error::Invalid(format!(
                "expected exactly one sink activity, found {}",
                sinks.len()
            )));
        }
        for &d in [sources[0], sinks[0]].iter() {
            let a = &self.activities[d];
            if n > 1 && (a.duration != 0 || a.demands.iter().any(|&x| x != 0)) {
                return Err(Error::Invalid(format!(
                    "dummy activity {} must have zero duration and demands",
                    a.file_id
                )));
            }
        }
        self.topological_order()?;
        Ok(())
    }

    fn predecessor_counts(&self) -> Vec<usize> {
        let mut counts = vec![0; self.activities.len()];
        for a in &self.activities {
            for &s in &a.successors {
                counts[s] += 1;
            }
        }
        counts
    }

    pub fn predecessors(&self) -> Vec<Vec<usize>> {
        let mut preds = vec![Vec::new(); self.activities.len()];
        for a in &self.activities {
            for &s in &a.successors {
                preds[s].push(a.id);
            }
        }
        preds
    }

    /// Kahn's algorithm; smallest ready id first so the order is canonical.
    pub fn topological_order(&self) -> Result<Vec<usize>> {
        let succ: Vec<&[usize]> = self
            .activities
            .iter()
            .map(|a| a.successors.as_slice())
            .collect();
        crate::network::topological_sort(&succ)
            .map_err(|i| Error::Cycle(self.activities[i].file_id.to_string()))
    }

    pub fn source(&self) -> usize {
        let preds = self.predecessor_counts();
        preds.iter().position(|&c| c == 0).unwrap_or(0)
    }

    pub fn sink(&self) -> usize {
        self.activities
            .iter()
            .position(|a| a.successors.is_empty())
            .unwrap_or(self.activities.len() - 1)
    }

    pub fn index_of(&self, file_id: u32) -> Option<usize> {
        self.activities.iter().position(|a| a.file_id == file_id)
    }

    pub fn resource_index(&self, id: &str) -> Option<usize> {
        self.resources.iter().position(|r| r.id == id)
    }
}

/// Identifies an activity across projects: the project name plus the
/// activity's job number in its source file.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct ActivityKey {
    pub project: String,
    pub activity: u32,
}

impl ActivityKey {
    pub fn new(project: impl Into<String>, activity: u32) -> Self {
        ActivityKey {
            project: project.into(),
            activity,
        }
    }
}

impl fmt::Display for ActivityKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.project, self.activity)
    }
}

/// Planned start per activity. Records are keyed by project name and
/// file job number, so one schedule can span a multi-project bundle.
/// Start times are absolute periods.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Schedule {
    pub label: String,
    pub starts: BTreeMap<ActivityKey, u32>,
}

impl Schedule {
    pub fn new(label: impl Into<String>) -> Self {
        Schedule {
            label: label.into(),
            starts: BTreeMap::new(),
        }
    }

    pub fn with_starts<I>(label: impl Into<String>, project: &str, starts: I) -> Self
    where
        I: IntoIterator<Item = (u32, u32)>,
    {
        Schedule {
            label: label.into(),
            starts: starts
                .into_iter()
                .map(|(a, s)| (ActivityKey::new(project, a), s))
                .collect(),
        }
    }

    pub fn start(&self, project: &str, activity: u32) -> Option<u32> {
        self.starts
            .get(&ActivityKey::new(project, activity))
            .copied()
    }

    /// Distinct project names referenced by the records, in sorted order.
    pub fn projects(&self) -> Vec<&str> {
        let mut names: Vec<&str> = self.starts.keys().map(|k| k.project.as_str()).collect();
        names.dedup();
        names
    }
}
