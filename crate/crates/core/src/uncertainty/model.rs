use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{assign_cvs, DurationSpec, Family};
use crate::error::{Error, Result};
use crate::instance::ActivityKey;
use crate::network::Network;

pub const DEFAULT_REPLICATIONS: usize = 10_000;

/// Knobs for building a [`DurationModel`] from a network.
#[derive(Debug, Clone, PartialEq)]
pub struct ModelConfig {
    pub family: Family,
    pub cv_lo: f64,
    pub cv_hi: f64,
    /// Seed for the cv draws.
    pub cv_seed: u64,
    /// Seed for the simulation deviates.
    pub seed: u64,
    pub replications: usize,
}

impl Default for ModelConfig {
    fn default() -> Self {
        ModelConfig {
            family: Family::Lognormal,
            cv_lo: 0.10,
            cv_hi: 0.30,
            cv_seed: 0,
            seed: 0,
            replications: DEFAULT_REPLICATIONS,
        }
    }
}

/// One duration spec per network node plus the sampling seed and
/// replication count. The mean of every spec is the planned duration.
#[derive(Debug, Clone, PartialEq)]
pub struct DurationModel {
    pub family: Family,
    pub cv_range: (f64, f64),
    pub cv_seed: u64,
    pub seed: u64,
    pub replications: usize,
    pub specs: Vec<DurationSpec>,
}

impl DurationModel {
    /// Draws cvs with [`assign_cvs`] and attaches them to planned durations.
    pub fn generate(network: &Network, config: &ModelConfig) -> Result<Self> {
        let cvs = assign_cvs(network, config.cv_seed, config.cv_lo, config.cv_hi)?;
        let mut model = Self::from_cvs(
            network,
            config.family,
            &cvs,
            config.seed,
            config.replications,
        )?;
        model.cv_range = (config.cv_lo, config.cv_hi);
        model.cv_seed = config.cv_seed;
        Ok(model)
    }

    pub fn from_cvs(
        network: &Network,
        family: Family,
        cvs: &BTreeMap<ActivityKey, f64>,
        seed: u64,
        replications: usize,
    ) -> Result<Self> {
        let specs = network
            .nodes
            .iter()
            .map(|node| {
                let mean = f64::from(node.duration);
                if node.dummy || node.duration == 0 {
                    return Ok(DurationSpec::deterministic(mean));
                }
                let cv = *cvs
                    .get(&node.key)
                    .ok_or_else(|| Error::Domain(format!("no cv for activity {}", node.key)))?;
                DurationSpec::new(family, mean, cv)
            })
            .collect::<Result<Vec<_>>>()?;
        let (lo, hi) = specs
            .iter()
            .filter(|s| !s.is_deterministic())
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), s| {
                (lo.min(s.cv), hi.max(s.cv))
            });
        Self::with_specs(family, specs, seed, replications).map(|mut m| {
            m.cv_range = if lo <= hi { (lo, hi) } else { (0.0, 0.0) };
            m
        })
    }

    pub fn with_specs(
        family: Family,
        specs: Vec<DurationSpec>,
        seed: u64,
        replications: usize,
    ) -> Result<Self> {
        if replications < 2 {
            return Err(Error::Domain(format!(
                "at least 2 replications are needed for a variance, got {replications}"
            )));
        }
        Ok(DurationModel {
            family,
            cv_range: (0.0, 0.0),
            cv_seed: seed,
            seed,
            replications,
            specs,
        })
    }

    /// Same cvs, different deviates.
    pub fn reseeded(&self, seed: u64) -> Self {
        DurationModel {
            seed,
            ..self.clone()
        }
    }

    pub fn to_file(&self, network: &Network) -> ModelFile {
        ModelFile {
            schema: 1,
            family: self.family,
            seed: self.seed,
            cv_seed: self.cv_seed,
            replications: self.replications,
            cv_range: [self.cv_range.0, self.cv_range.1],
            activities: network
                .nodes
                .iter()
                .zip(&self.specs)
                .map(|(node, spec)| ModelActivity {
                    project: node.key.project.clone(),
                    activity: node.key.activity,
                    family: spec.family,
                    mean: spec.mean,
                    cv: spec.cv,
                })
                .collect(),
        }
    }

    pub fn to_json(&self, network: &Network) -> String {
        let mut text =
            serde_json::to_string_pretty(&self.to_file(network)).expect("model serializes");
        text.push('\n');
        text
    }

    /// Rebuilds a model from its sidecar. Every node of `network` must be
    /// listed; dummies may be omitted.
    pub fn from_file(file: &ModelFile, network: &Network) -> Result<Self> {
        if file.schema != 1 {
            return Err(Error::Domain(format!(
                "unsupported model schema {}",
                file.schema
            )));
        }
        let mut by_key: BTreeMap<ActivityKey, &ModelActivity> = BTreeMap::new();
        for a in &file.activities {
            let key = ActivityKey::new(a.project.clone(), a.activity);
            if network.index_of(&key).is_none() {
                return Err(Error::Domain(format!("model lists unknown activity {key}")));
            }
            by_key.insert(key, a);
        }
        let specs = network
            .nodes
            .iter()
            .map(|node| match by_key.get(&node.key) {
                Some(a) => DurationSpec::new(a.family, a.mean, a.cv),
                None if node.dummy => Ok(DurationSpec::deterministic(f64::from(node.duration))),
                None => Err(Error::Domain(format!(
                    "model has no entry for {}",
                    node.key
                ))),
            })
            .collect::<Result<Vec<_>>>()?;
        let mut model = Self::with_specs(file.family, specs, file.seed, file.replications)?;
        model.cv_seed = file.cv_seed;
        model.cv_range = (file.cv_range[0], file.cv_range[1]);
        Ok(model)
    }

    pub fn from_json(text: &str, network: &Network) -> Result<Self> {
        let file: ModelFile = serde_json::from_str(text)
            .map_err(|e| Error::parse(e.line(), format!("model file: {e}")))?;
        Self::from_file(&file, network)
    }

    pub fn all_deterministic(&self) -> bool {
        self.specs.iter().all(DurationSpec::is_deterministic)
    }
}

/// JSON sidecar written next to every analysis.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelFile {
    pub schema: u32,
    pub family: Family,
    pub seed: u64,
    pub cv_seed: u64,
    pub replications: usize,
    pub cv_range: [f64; 2],
    pub activities: Vec<ModelActivity>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelActivity {
    pub project: String,
    pub activity: u32,
    pub family: Family,
    pub mean: f64,
    pub cv: f64,
}
