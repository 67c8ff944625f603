use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::instance::{ActivityKey, Schedule};
use crate::network::Network;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrecedenceViolation {
    pub predecessor: ActivityKey,
    pub successor: ActivityKey,
    /// `start(successor) - finish(predecessor)`, always negative here.
    pub gap: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResourceViolation {
    pub resource: String,
    pub period: u32,
    pub usage: u32,
    pub capacity: u32,
}

/// An activity planned before its project's arrival date.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReleaseViolation {
    pub activity: ActivityKey,
    pub start: u32,
    pub arrival: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FeasibilityReport {
    pub label: String,
    pub feasible: bool,
    pub precedence_violations: Vec<PrecedenceViolation>,
    pub resource_violations: Vec<ResourceViolation>,
    pub release_violations: Vec<ReleaseViolation>,
}

/// Usage per pooled resource for every period in `[0, horizon)`, where the
/// horizon is the latest planned finish.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResourceProfile {
    pub usage: Vec<Vec<u32>>,
}

impl ResourceProfile {
    pub fn horizon(&self) -> usize {
        self.usage.first().map_or(0, Vec::len)
    }
}

pub fn resource_profile(network: &Network, starts: &[u32]) -> ResourceProfile {
    let horizon = network.planned_finish(starts) as usize;
    let mut usage = vec![vec![0u32; horizon]; network.resources.len()];
    for (node, &s) in network.nodes.iter().zip(starts) {
        for (r, &d) in node.demands.iter().enumerate() {
            if d == 0 {
                continue;
            }
            for slot in &mut usage[r][s as usize..(s + node.duration) as usize] {
                *slot += d;
            }
        }
    }
    ResourceProfile { usage }
}

/// Checks a schedule against precedence, resource capacities and arrival
/// dates. Fails only when the schedule does not fit the network.
pub fn validate(schedule: &Schedule, network: &Network) -> Result<FeasibilityReport> {
    let starts = network.resolve(schedule)?;
    Ok(validate_starts(&schedule.label, network, &starts))
}

pub fn validate_starts(label: &str, network: &Network, starts: &[u32]) -> FeasibilityReport {
    let mut precedence_violations = Vec::new();
    for (i, node) in network.nodes.iter().enumerate() {
        let finish = i64::from(starts[i]) + i64::from(node.duration);
        for &j in &node.successors {
            let gap = i64::from(starts[j]) - finish;
            if gap < 0 {
                precedence_violations.push(PrecedenceViolation {
                    predecessor: node.key.clone(),
                    successor: network.nodes[j].key.clone(),
                    gap,
                });
            }
        }
    }

    let profile = resource_profile(network, starts);
    let mut resource_violations = Vec::new();
    for (r, usage) in profile.usage.iter().enumerate() {
        let capacity = network.resources[r].capacity;
        for (period, &u) in usage.iter().enumerate() {
            if u > capacity {
                resource_violations.push(ResourceViolation {
                    resource: network.resources[r].id.clone(),
                    period: period as u32,
                    usage: u,
                    capacity,
                });
            }
        }
    }

    let release_violations: Vec<_> = network
        .nodes
        .iter()
        .enumerate()
        .filter(|&(i, _)| starts[i] < network.arrival(i))
        .map(|(i, n)| ReleaseViolation {
            activity: n.key.clone(),
            start: starts[i],
            arrival: network.arrival(i),
        })
        .collect();

    FeasibilityReport {
        label: label.to_string(),
        feasible: precedence_violations.is_empty()
            && resource_violations.is_empty()
            && release_violations.is_empty(),
        precedence_violations,
        resource_violations,
        release_violations,
    }
}

/// Latest finish minus earliest start.
pub fn makespan(schedule: &Schedule, network: &Network) -> Result<u32> {
    let starts = network.resolve(schedule)?;
    let first = starts.iter().copied().min().unwrap_or(0);
    Ok(network.planned_finish(&starts) - first)
}
