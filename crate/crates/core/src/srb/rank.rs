use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use super::{analyze, OngoingPolicy, SimOptions, SrbCurve, StartPolicy};
use crate::error::{Error, Result};
use crate::instance::Schedule;
use crate::network::Network;
use crate::schedule::validate;
use crate::uncertainty::{DurationModel, Family};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Policies {
    pub start: StartPolicy,
    pub ongoing: OngoingPolicy,
    pub grid_step: u32,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunInfo {
    pub seed: u64,
    pub cv_seed: u64,
    pub replications: usize,
    pub family: Family,
    pub cv_range: [f64; 2],
    pub policies: Policies,
}

/// One row of the report. Statistics are absent for rejected schedules.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScheduleRisk {
    pub label: String,
    pub planned: Option<u32>,
    pub mean: Option<f64>,
    pub p10: Option<f64>,
    pub p50: Option<f64>,
    pub p90: Option<f64>,
    pub srv: Option<f64>,
    pub feasible: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RiskReport {
    pub schema: u32,
    pub run: RunInfo,
    pub schedules: Vec<ScheduleRisk>,
    /// Feasible labels by ascending SRV, ties by label.
    pub ranking: Vec<String>,
    #[serde(skip)]
    pub curves: Vec<SrbCurve>,
}

impl RiskReport {
    pub fn to_json(&self) -> String {
        let mut text = serde_json::to_string_pretty(self).expect("report serializes");
        text.push('\n');
        text
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::parse(e.line(), format!("report: {e}")))
    }

    pub fn get(&self, label: &str) -> Option<&ScheduleRisk> {
        self.schedules.iter().find(|s| s.label == label)
    }

    /// Ranked rows, lowest risk first.
    pub fn ranked(&self) -> impl Iterator<Item = &ScheduleRisk> {
        self.ranking.iter().filter_map(|l| self.get(l))
    }
}

/// Analyzes every candidate under the same model and ranks the feasible
/// ones by SRV. Candidates that do not match the network are refused;
/// infeasible ones are reported and left out of the ranking.
pub fn rank_schedules(
    network: &Network,
    candidates: &[Schedule],
    model: &DurationModel,
    grid_step: u32,
    options: &SimOptions,
) -> Result<RiskReport> {
    let mut labels = HashSet::new();
    for c in candidates {
        if !labels.insert(c.label.as_str()) {
            return Err(Error::Domain(format!(
                "duplicate candidate label `{}`",
                c.label
            )));
        }
    }
    let reports = candidates
        .iter()
        .map(|c| validate(c, network))
        .collect::<Result<Vec<_>>>()?;

    let mut schedules = Vec::with_capacity(candidates.len());
    let mut curves = Vec::new();
    for (candidate, feasibility) in candidates.iter().zip(&reports) {
        if !feasibility.feasible {
            schedules.push(ScheduleRisk {
                label: candidate.label.clone(),
                planned: None,
                mean: None,
                p10: None,
                p50: None,
                p90: None,
                srv: None,
                feasible: false,
            });
            continue;
        }
        let analysis = analyze(network, candidate, model, grid_step, options)?;
        let t = &analysis.table;
        schedules.push(ScheduleRisk {
            label: candidate.label.clone(),
            planned: Some(analysis.planned),
            mean: Some(analysis.mean_duration()),
            p10: Some(t.quantile(0, 0.10)),
            p50: Some(t.quantile(0, 0.50)),
            p90: Some(t.quantile(0, 0.90)),
            srv: Some(analysis.srv),
            feasible: true,
        });
        curves.push(analysis.curve);
    }

    let mut ranked: Vec<&ScheduleRisk> = schedules.iter().filter(|s| s.feasible).collect();
    ranked.sort_by(|a, b| {
        a.srv
            .unwrap_or(f64::INFINITY)
            .total_cmp(&b.srv.unwrap_or(f64::INFINITY))
            .then_with(|| a.label.cmp(&b.label))
    });
    let ranking = ranked.into_iter().map(|s| s.label.clone()).collect();

    Ok(RiskReport {
        schema: 1,
        run: RunInfo {
            seed: model.seed,
            cv_seed: model.cv_seed,
            replications: model.replications,
            family: model.family,
            cv_range: [model.cv_range.0, model.cv_range.1],
            policies: Policies {
                start: options.start,
                ongoing: options.ongoing,
                grid_step,
            },
        },
        schedules,
        ranking,
        curves,
    })
}
