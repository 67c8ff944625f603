//! Exhaustive enumeration for small networks with two-point durations.
//!
//! Every stochastic activity takes `mean - sd` or `mean + sd`. Replication
//! `r` of an enumeration run maps bit `k` of `r` to the outcome of the
//! `k`-th stochastic activity, so `2^k` replications cover every outcome
//! exactly once. The reference below computes the baseline from those
//! outcomes without going through the simulator.

#![allow(dead_code)]

use schedrisk::srb::{DeviateSource, OngoingPolicy, StartPolicy};
use schedrisk::uncertainty::{DurationModel, DurationSpec, Family};
use schedrisk::{Network, ProjectInstance};

pub struct Case {
    pub name: &'static str,
    pub network: Network,
    pub starts: Vec<u32>,
    /// Per node: `(mean, cv)`; `cv` 0 for deterministic nodes.
    pub params: Vec<(u32, f64)>,
}

impl Case {
    fn new(
        name: &'static str,
        rows: &[(u32, f64, Vec<u32>, Vec<u32>)],
        caps: &[u32],
        starts: Vec<u32>,
    ) -> Case {
        let table: Vec<(u32, Vec<u32>, Vec<u32>)> = rows
            .iter()
            .map(|(d, _, dem, succ)| (*d, dem.clone(), succ.clone()))
            .collect();
        let inst = ProjectInstance::from_table(name, &table, caps).unwrap();
        Case {
            name,
            network: Network::from_instance(&inst),
            starts,
            params: rows.iter().map(|(d, cv, _, _)| (*d, *cv)).collect(),
        }
    }

    pub fn stochastic(&self) -> Vec<usize> {
        (0..self.params.len())
            .filter(|&i| self.params[i].1 > 0.0)
            .collect()
    }

    pub fn outcomes(&self) -> usize {
        1 << self.stochastic().len()
    }

    pub fn planned(&self) -> u32 {
        self.network.planned_finish(&self.starts)
    }

    pub fn model(&self) -> DurationModel {
        let specs = self
            .params
            .iter()
            .map(|&(mean, cv)| DurationSpec::new(Family::TwoPoint, f64::from(mean), cv).unwrap())
            .collect();
        DurationModel::with_specs(Family::TwoPoint, specs, 0, self.outcomes()).unwrap()
    }

    pub fn deviates(&self) -> BitDeviates {
        BitDeviates {
            stochastic: self.stochastic(),
            n: self.params.len(),
        }
    }

    /// Sample variance (divisor `N - 1`) of total duration over all outcomes
    /// at control period `t`. Durations are multiples of 1/4, so the sums are
    /// carried in exact integer quarters.
    pub fn variance(&self, t: u32, start: StartPolicy, ongoing: OngoingPolicy) -> f64 {
        let n = self.outcomes() as i128;
        let (mut sum, mut sum_sq) = (0i128, 0i128);
        for mask in 0..self.outcomes() {
            let x = self.total_quarters(mask, t, start, ongoing);
            sum += x;
            sum_sq += x * x;
        }
        let ss = (n * sum_sq - sum * sum) as f64 / (16 * n) as f64;
        ss / (n - 1) as f64
    }

    /// Total duration of outcome `mask` at `t`, in quarters.
    fn total_quarters(
        &self,
        mask: usize,
        t: u32,
        start: StartPolicy,
        ongoing: OngoingPolicy,
    ) -> i128 {
        let q = |x: f64| {
            let v = x * 4.0;
            assert_eq!(v, v.round(), "{} needs a dyadic duration", self.name);
            v as i128
        };
        let stochastic = self.stochastic();
        let sign = |i: usize| match stochastic.iter().position(|&s| s == i) {
            Some(k) if mask >> k & 1 == 1 => 1i128,
            Some(_) => -1,
            None => 0,
        };
        let t4 = i128::from(t) * 4;
        let nodes = &self.network.nodes;
        let mut finish: Vec<Option<i128>> = vec![None; nodes.len()];
        // Relax until every node is placed; the networks are tiny.
        while finish.iter().any(Option::is_none) {
            for i in 0..nodes.len() {
                if finish[i].is_some() {
                    continue;
                }
                let (mean, cv) = self.params[i];
                let s4 = i128::from(self.starts[i]) * 4;
                let mean4 = i128::from(mean) * 4;
                let sd4 = q(f64::from(mean) * cv);
                if s4 + mean4 <= t4 {
                    finish[i] = Some(s4 + mean4);
                } else if s4 < t4 {
                    let rem4 = s4 + mean4 - t4;
                    let dev4 = match ongoing {
                        OngoingPolicy::LinearScaled => q(rem4 as f64 / 4.0 * cv),
                        OngoingPolicy::AllOrNothing => sd4,
                    };
                    finish[i] = Some(t4 + (rem4 + sign(i) * dev4).max(0));
                } else {
                    let preds: Option<Vec<i128>> =
                        nodes[i].predecessors.iter().map(|&p| finish[p]).collect();
                    let Some(preds) = preds else { continue };
                    let ready = preds.into_iter().max().unwrap_or(0);
                    let floor = match start {
                        StartPolicy::ReadyTime if !nodes[i].dummy => s4,
                        _ => t4,
                    };
                    finish[i] = Some(ready.max(floor) + (mean4 + sign(i) * sd4).max(0));
                }
            }
        }
        finish.into_iter().map(Option::unwrap).max().unwrap()
    }
}

/// Deviate `+1` or `-1` per stochastic activity, read from the bits of the
/// replication index.
pub struct BitDeviates {
    stochastic: Vec<usize>,
    n: usize,
}

impl DeviateSource for BitDeviates {
    fn fill(&self, replication: usize, out: &mut [f64]) {
        assert_eq!(out.len(), self.n);
        out.fill(0.0);
        for (k, &i) in self.stochastic.iter().enumerate() {
            out[i] = if replication >> k & 1 == 1 { 1.0 } else { -1.0 };
        }
    }
}

/// Small networks, each with a feasible schedule. Rows are
/// `(mean, cv, demands, successor file ids)`.
pub fn cases() -> Vec<Case> {
    vec![
        Case::new(
            "chain",
            &[
                (0, 0.0, vec![0], vec![2]),
                (4, 0.25, vec![1], vec![3]),
                (2, 0.5, vec![1], vec![4]),
                (0, 0.0, vec![0], vec![]),
            ],
            &[1],
            vec![0, 0, 4, 6],
        ),
        Case::new(
            "shared-resource",
            &[
                (0, 0.0, vec![0], vec![2, 3]),
                (4, 0.5, vec![1], vec![4]),
                (2, 0.5, vec![1], vec![4]),
                (0, 0.0, vec![0], vec![]),
            ],
            &[1],
            vec![0, 0, 4, 6],
        ),
        Case::new(
            "diamond",
            &[
                (0, 0.0, vec![0], vec![2, 3]),
                (2, 0.5, vec![1], vec![4]),
                (4, 0.25, vec![1], vec![4]),
                (4, 0.5, vec![1], vec![5]),
                (0, 0.0, vec![0], vec![]),
            ],
            &[2],
            vec![0, 0, 0, 4, 8],
        ),
        Case::new(
            "slack",
            &[
                (0, 0.0, vec![0], vec![2, 3]),
                (2, 0.5, vec![1], vec![4]),
                (4, 0.25, vec![1], vec![4]),
                (0, 0.0, vec![0], vec![]),
            ],
            &[1],
            vec![0, 4, 0, 6],
        ),
        Case::new(
            "fork",
            &[
                (0, 0.0, vec![0], vec![2]),
                (2, 0.5, vec![1], vec![3, 4]),
                (4, 0.25, vec![1], vec![5]),
                (4, 0.5, vec![0], vec![5]),
                (0, 0.0, vec![0], vec![]),
            ],
            &[1],
            vec![0, 0, 2, 2, 6],
        ),
    ]
}
