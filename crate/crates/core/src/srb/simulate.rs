use std::fmt;
use std::fmt::Write as _;
use std::str::FromStr;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{conditional_spec, srv, Conditional, ControlGrid, OngoingPolicy};
use crate::error::{Error, Result};
use crate::instance::Schedule;
use crate::network::Network;
use crate::schedule::validate_starts;
use crate::uncertainty::{DurationModel, DurationSpec};

/// When an activity that has not started by the control period may start
/// in a replication.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StartPolicy {
    /// Not before its planned start nor before its predecessors finish.
    /// Dummy milestones only wait for their predecessors.
    #[default]
    ReadyTime,
    /// As soon as its predecessors finish (and not before the control
    /// period or its project's arrival).
    PrecedenceOnly,
}

impl StartPolicy {
    pub fn name(self) -> &'static str {
        match self {
            StartPolicy::ReadyTime => "ready-time",
            StartPolicy::PrecedenceOnly => "precedence-only",
        }
    }
}

impl fmt::Display for StartPolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for StartPolicy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "ready-time" => Ok(StartPolicy::ReadyTime),
            "precedence-only" => Ok(StartPolicy::PrecedenceOnly),
            _ => Err(Error::Domain(format!("unknown start policy `{s}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct SimOptions {
    pub start: StartPolicy,
    pub ongoing: OngoingPolicy,
    /// Worker threads; `None` uses the global rayon pool. Results do not
    /// depend on this value.
    pub threads: Option<usize>,
}

/// Supplies the standard-normal deviates of one replication, one per
/// network node. Implementations must be pure functions of the
/// replication index.
pub trait DeviateSource: Sync {
    fn fill(&self, replication: usize, out: &mut [f64]);
}

/// ChaCha8 seeded once, with the replication index as stream id.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NormalDeviates {
    pub seed: u64,
}

impl DeviateSource for NormalDeviates {
    fn fill(&self, replication: usize, out: &mut [f64]) {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(replication as u64);
        for z in out.iter_mut() {
            *z = StandardNormal.sample(&mut rng);
        }
    }
}

enum NodeState {
    Finished(f64),
    Ongoing(DurationSpec),
    Unstarted,
}

/// Classification of every node at one control period. Depends only on
/// the plan, so it is shared by all replications.
struct Stage {
    t: u32,
    states: Vec<NodeState>,
}

impl Stage {
    fn new(
        network: &Network,
        starts: &[u32],
        model: &DurationModel,
        t: u32,
        policy: OngoingPolicy,
    ) -> Self {
        let states = network
            .nodes
            .iter()
            .enumerate()
            .map(|(i, node)| {
                match conditional_spec(&model.specs[i], starts[i], node.duration, t, policy) {
                    Conditional::Finished { duration } => {
                        NodeState::Finished(f64::from(starts[i]) + duration)
                    }
                    Conditional::Ongoing { remaining, .. } => NodeState::Ongoing(remaining),
                    Conditional::Unstarted(_) => NodeState::Unstarted,
                }
            })
            .collect();
        Stage { t, states }
    }
}

/// Forward pass of one replication at one control period. `full` holds the
/// sampled full duration of each node, `z` the deviates they came from.
fn forward_pass(
    network: &Network,
    starts: &[u32],
    stage: &Stage,
    start_policy: StartPolicy,
    z: &[f64],
    full: &[f64],
    finish: &mut [f64],
) -> f64 {
    let t = f64::from(stage.t);
    let mut total = 0.0f64;
    for &i in network.topological_order() {
        let f = match &stage.states[i] {
            NodeState::Finished(f) => *f,
            NodeState::Ongoing(remaining) => t + remaining.sample(z[i]),
            NodeState::Unstarted => {
                let ready = network.nodes[i]
                    .predecessors
                    .iter()
                    .map(|&p| finish[p])
                    .fold(0.0f64, f64::max);
                // Dummies are milestones: the sink must be free to finish early.
                let floor = match start_policy {
                    StartPolicy::ReadyTime if !network.nodes[i].dummy => f64::from(starts[i]),
                    _ => t.max(f64::from(network.arrival(i))),
                };
                ready.max(floor) + full[i]
            }
        };
        finish[i] = f;
        total = total.max(f);
    }
    total
}

/// Total project duration of one replication at control period `t`.
pub fn simulate_duration(
    network: &Network,
    starts: &[u32],
    model: &DurationModel,
    t: u32,
    z: &[f64],
    options: &SimOptions,
) -> f64 {
    assert_eq!(z.len(), network.len(), "one deviate per activity");
    let stage = Stage::new(network, starts, model, t, options.ongoing);
    let full: Vec<f64> = model
        .specs
        .iter()
        .zip(z)
        .map(|(s, &z)| s.sample(z))
        .collect();
    let mut finish = vec![0.0; network.len()];
    forward_pass(
        network,
        starts,
        &stage,
        options.start,
        z,
        &full,
        &mut finish,
    )
}

/// Simulated total durations, `durations[k][r]` for control period
/// `times[k]` and replication `r`.
#[derive(Debug, Clone, PartialEq)]
pub struct ReplicationTable {
    pub times: Vec<u32>,
    pub durations: Vec<Vec<f64>>,
}

fn mean_and_variance(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let ss: f64 = xs.iter().map(|x| (x - mean) * (x - mean)).sum();
    (mean, ss / (n - 1.0))
}

impl ReplicationTable {
    pub fn replications(&self) -> usize {
        self.durations.first().map_or(0, Vec::len)
    }

    /// Mean and sample variance (divisor n - 1) at every control period.
    /// The last period is the planned finish, where the variance is 0.
    pub fn moments(&self) -> Vec<(f64, f64)> {
        let last = self.times.len() - 1;
        self.durations
            .iter()
            .enumerate()
            .map(|(k, xs)| {
                let (mean, var) = mean_and_variance(xs);
                if k == last {
                    (mean, 0.0)
                } else {
                    (mean, var)
                }
            })
            .collect()
    }

    /// SRV computed separately on `batches` contiguous blocks of
    /// replications.
    pub fn batch_srvs(&self, batches: usize) -> Vec<f64> {
        let n = self.replications();
        let size = n / batches;
        let xs: Vec<f64> = self.times.iter().map(|&t| f64::from(t)).collect();
        let last = self.times.len() - 1;
        (0..batches)
            .map(|b| {
                let ys: Vec<f64> = self
                    .durations
                    .iter()
                    .enumerate()
                    .map(|(k, row)| {
                        if k == last {
                            0.0
                        } else {
                            mean_and_variance(&row[b * size..(b + 1) * size]).1
                        }
                    })
                    .collect();
                super::trapezoid(&xs, &ys)
            })
            .collect()
    }

    /// Batch-means standard error of the SRV estimate.
    pub fn srv_standard_error(&self, batches: usize) -> f64 {
        let srvs = self.batch_srvs(batches);
        let (_, var) = mean_and_variance(&srvs);
        (var / batches as f64).sqrt()
    }

    /// Linear-interpolation quantile of the durations at control index `k`.
    pub fn quantile(&self, k: usize, p: f64) -> f64 {
        let mut xs = self.durations[k].clone();
        xs.sort_by(f64::total_cmp);
        let h = (xs.len() - 1) as f64 * p;
        let lo = h.floor() as usize;
        let hi = (lo + 1).min(xs.len() - 1);
        xs[lo] + (h - lo as f64) * (xs[hi] - xs[lo])
    }
}

/// Runs every replication at every control period with deviates from
/// `deviates`. Periods at or after the planned finish are not simulated.
pub fn simulate_table(
    network: &Network,
    starts: &[u32],
    model: &DurationModel,
    grid: &ControlGrid,
    options: &SimOptions,
    deviates: &dyn DeviateSource,
) -> ReplicationTable {
    let planned = f64::from(network.planned_finish(starts));
    let finish_t = network.planned_finish(starts);
    let stages: Vec<Option<Stage>> = grid
        .times()
        .iter()
        .map(|&t| (t < finish_t).then(|| Stage::new(network, starts, model, t, options.ongoing)))
        .collect();
    let n = network.len();

    let run = |rep: usize| -> Vec<f64> {
        let mut z = vec![0.0; n];
        deviates.fill(rep, &mut z);
        let full: Vec<f64> = model
            .specs
            .iter()
            .zip(&z)
            .map(|(s, &z)| s.sample(z))
            .collect();
        let mut finish = vec![0.0; n];
        stages
            .iter()
            .map(|stage| match stage {
                Some(stage) => forward_pass(
                    network,
                    starts,
                    stage,
                    options.start,
                    &z,
                    &full,
                    &mut finish,
                ),
                None => planned,
            })
            .collect()
    };
    let reps = model.replications;
    let rows: Vec<Vec<f64>> = match options.threads {
        Some(k) => rayon::ThreadPoolBuilder::new()
            .num_threads(k.max(1))
            .build()
            .expect("thread pool")
            .install(|| (0..reps).into_par_iter().map(run).collect()),
        None => (0..reps).into_par_iter().map(run).collect(),
    };

    let mut durations = vec![Vec::with_capacity(reps); grid.len()];
    for row in rows {
        for (k, d) in row.into_iter().enumerate() {
            durations[k].push(d);
        }
    }
    ReplicationTable {
        times: grid.times().to_vec(),
        durations,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SrbPoint {
    pub t: u32,
    pub variance: f64,
    pub mean: f64,
    pub sd: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SrbCurve {
    pub label: String,
    pub points: Vec<SrbPoint>,
    pub replications: usize,
    pub seed: u64,
}

impl SrbCurve {
    fn from_table(label: &str, table: &ReplicationTable, seed: u64) -> Self {
        let points = table
            .times
            .iter()
            .zip(table.moments())
            .map(|(&t, (mean, variance))| SrbPoint {
                t,
                variance,
                mean,
                sd: variance.sqrt(),
            })
            .collect();
        SrbCurve {
            label: label.to_string(),
            points,
            replications: table.replications(),
            seed,
        }
    }

    /// `t,variance,mean,sd` with full precision.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("t,variance,mean,sd\n");
        for p in &self.points {
            let _ = writeln!(out, "{},{},{},{}", p.t, p.variance, p.mean, p.sd);
        }
        out
    }

    /// Two whitespace-separated columns, `t variance`, for plotting tools.
    pub fn to_columns(&self) -> String {
        let mut out = format!("# {}\n# t variance\n", self.label);
        for p in &self.points {
            let _ = writeln!(out, "{} {}", p.t, p.variance);
        }
        out
    }

    pub fn variance_at(&self, t: u32) -> Option<f64> {
        self.points.iter().find(|p| p.t == t).map(|p| p.variance)
    }
}

/// Baseline, replication table and summary statistics of one schedule.
#[derive(Debug, Clone, PartialEq)]
pub struct ScheduleAnalysis {
    pub planned: u32,
    pub starts: Vec<u32>,
    pub table: ReplicationTable,
    pub curve: SrbCurve,
    pub srv: f64,
}

impl ScheduleAnalysis {
    /// Mean simulated duration before execution starts.
    pub fn mean_duration(&self) -> f64 {
        self.curve.points[0].mean
    }
}

fn checked_starts(network: &Network, schedule: &Schedule) -> Result<Vec<u32>> {
    let starts = network.resolve(schedule)?;
    if !validate_starts(&schedule.label, network, &starts).feasible {
        return Err(Error::Infeasible(schedule.label.clone()));
    }
    Ok(starts)
}

/// Baseline of a feasible schedule on an explicit control grid, which must
/// end at the schedule's planned finish.
pub fn srb_curve(
    network: &Network,
    schedule: &Schedule,
    model: &DurationModel,
    grid: &ControlGrid,
    options: &SimOptions,
) -> Result<SrbCurve> {
    Ok(analyze_on(network, schedule, model, grid.clone(), options)?.curve)
}

/// Baseline on the grid `0, step, ..., planned finish`.
pub fn analyze(
    network: &Network,
    schedule: &Schedule,
    model: &DurationModel,
    grid_step: u32,
    options: &SimOptions,
) -> Result<ScheduleAnalysis> {
    let starts = checked_starts(network, schedule)?;
    let grid = ControlGrid::with_step(network.planned_finish(&starts), grid_step)?;
    analyze_on(network, schedule, model, grid, options)
}

fn analyze_on(
    network: &Network,
    schedule: &Schedule,
    model: &DurationModel,
    grid: ControlGrid,
    options: &SimOptions,
) -> Result<ScheduleAnalysis> {
    let starts = checked_starts(network, schedule)?;
    if model.specs.len() != network.len() {
        return Err(Error::Domain(format!(
            "model covers {} activities, network has {}",
            model.specs.len(),
            network.len()
        )));
    }
    let planned = network.planned_finish(&starts);
    if grid.finish() != planned {
        return Err(Error::Domain(format!(
            "control grid ends at {}, planned finish is {planned}",
            grid.finish()
        )));
    }
    let deviates = NormalDeviates { seed: model.seed };
    let table = simulate_table(network, &starts, model, &grid, options, &deviates);
    let curve = SrbCurve::from_table(&schedule.label, &table, model.seed);
    let srv = srv(&curve);
    Ok(ScheduleAnalysis {
        planned,
        starts,
        table,
        curve,
        srv,
    })
}
