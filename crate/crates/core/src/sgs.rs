//! Serial schedule generation scheme.
//!
//! Activities are taken one at a time from the eligible set (all
//! predecessors scheduled) in priority order and placed at the earliest
//! period where precedence, arrival date and remaining capacity allow.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::instance::Schedule;
use crate::network::Network;
use crate::schedule::{cpm, late_starts};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PriorityRule {
    MinSlack,
    LatestFinish,
    ShortestDuration,
    MostSuccessors,
    Random(u64),
}

impl PriorityRule {
    pub const DETERMINISTIC: [PriorityRule; 4] = [
        PriorityRule::MinSlack,
        PriorityRule::LatestFinish,
        PriorityRule::ShortestDuration,
        PriorityRule::MostSuccessors,
    ];

    /// Priority key per node; smaller keys are scheduled first.
    fn keys(self, network: &Network) -> Vec<i64> {
        let n = network.len();
        match self {
            PriorityRule::MinSlack | PriorityRule::LatestFinish => {
                let early = cpm(network);
                let late = late_starts(network, early.makespan);
                (0..n)
                    .map(|i| {
                        if self == PriorityRule::MinSlack {
                            i64::from(late[i]) - i64::from(early.earliest_starts[i])
                        } else {
                            i64::from(late[i]) + i64::from(network.nodes[i].duration)
                        }
                    })
                    .collect()
            }
            PriorityRule::ShortestDuration => network
                .nodes
                .iter()
                .map(|n| i64::from(n.duration))
                .collect(),
            PriorityRule::MostSuccessors => {
                // Transitive successor count, negated.
                let mut reach: Vec<Vec<bool>> = vec![vec![false; n]; n];
                for &i in network.topological_order().iter().rev() {
                    for &s in &network.nodes[i].successors {
                        let below = reach[s].clone();
                        reach[i][s] = true;
                        for (a, b) in reach[i].iter_mut().zip(below) {
                            *a |= b;
                        }
                    }
                }
                reach
                    .iter()
                    .map(|r| -(r.iter().filter(|&&b| b).count() as i64))
                    .collect()
            }
            PriorityRule::Random(seed) => {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                (0..n)
                    .map(|_| rng.random_range(0..i64::from(u32::MAX)))
                    .collect()
            }
        }
    }
}

impl fmt::Display for PriorityRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PriorityRule::MinSlack => f.write_str("min-slack"),
            PriorityRule::LatestFinish => f.write_str("latest-finish"),
            PriorityRule::ShortestDuration => f.write_str("shortest-duration"),
            PriorityRule::MostSuccessors => f.write_str("most-successors"),
            PriorityRule::Random(seed) => write!(f, "random-{seed}"),
        }
    }
}

impl FromStr for PriorityRule {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "min-slack" => Ok(PriorityRule::MinSlack),
            "latest-finish" => Ok(PriorityRule::LatestFinish),
            "shortest-duration" => Ok(PriorityRule::ShortestDuration),
            "most-successors" => Ok(PriorityRule::MostSuccessors),
            "random" => Ok(PriorityRule::Random(0)),
            other => other
                .strip_prefix("random-")
                .or_else(|| other.strip_prefix("random:"))
                .and_then(|seed| seed.parse().ok())
                .map(PriorityRule::Random)
                .ok_or_else(|| Error::Domain(format!("unknown priority rule `{s}`"))),
        }
    }
}

/// Builds a feasible schedule for `network`. The schedule is labelled with
/// the rule name and lists every activity, dummies included.
pub fn serial_sgs(network: &Network, rule: PriorityRule) -> Result<Schedule> {
    for node in &network.nodes {
        for (r, &d) in node.demands.iter().enumerate() {
            let capacity = network.resources[r].capacity;
            if d > capacity {
                return Err(Error::Unschedulable {
                    activity: node.key.to_string(),
                    resource: network.resources[r].id.clone(),
                    demand: d,
                    capacity,
                });
            }
        }
    }

    let keys = rule.keys(network);
    let n = network.len();
    let mut usage: Vec<Vec<u32>> = vec![Vec::new(); network.resources.len()];
    let mut start: Vec<Option<u32>> = vec![None; n];
    let mut pending: Vec<usize> = network.nodes.iter().map(|n| n.predecessors.len()).collect();
    let mut eligible: Vec<usize> = (0..n).filter(|&i| pending[i] == 0).collect();

    while !eligible.is_empty() {
        let (pos, &i) = eligible
            .iter()
            .enumerate()
            .min_by_key(|&(_, &i)| (keys[i], i))
            .expect("non-empty");
        eligible.swap_remove(pos);
        let node = &network.nodes[i];
        let ready = node
            .predecessors
            .iter()
            .map(|&p| start[p].expect("predecessor scheduled") + network.nodes[p].duration)
            .max()
            .unwrap_or(0)
            .max(network.arrival(i));

        let fits = |t: u32| {
            node.demands.iter().enumerate().all(|(r, &d)| {
                d == 0
                    || (t..t + node.duration).all(|p| {
                        usage[r].get(p as usize).copied().unwrap_or(0) + d
                            <= network.resources[r].capacity
                    })
            })
        };
        let mut t = ready;
        while !fits(t) {
            t += 1;
        }
        for (r, &d) in node.demands.iter().enumerate() {
            if d == 0 {
                continue;
            }
            let end = (t + node.duration) as usize;
            if usage[r].len() < end {
                usage[r].resize(end, 0);
            }
            for slot in &mut usage[r][t as usize..end] {
                *slot += d;
            }
        }
        start[i] = Some(t);
        for &s in &node.successors {
            pending[s] -= 1;
            if pending[s] == 0 {
                eligible.push(s);
            }
        }
    }

    let starts: Vec<u32> = start.into_iter().map(|s| s.unwrap_or(0)).collect();
    Ok(network.schedule_from_starts(rule.to_string(), &starts))
}
