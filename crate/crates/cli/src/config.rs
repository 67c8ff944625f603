use std::path::{Path, PathBuf};

use anyhow::{bail, Context};
use clap::Args;
use serde::{Deserialize, Serialize};

use schedrisk::srb::{OngoingPolicy, SimOptions, StartPolicy};
use schedrisk::uncertainty::{Family, ModelConfig};

/// Everything a run needs. Loaded from `--config` when given, then
/// overridden field by field by command-line flags.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    /// Single PSPLib instance.
    pub instance: Option<PathBuf>,
    /// Multi-project descriptor; mutually exclusive with `instance`.
    pub bundle: Option<PathBuf>,
    pub schedules: Vec<PathBuf>,
    /// Priority rules whose serial-SGS schedules join the candidates.
    pub rules: Vec<String>,
    pub family: Family,
    pub cv_lo: f64,
    pub cv_hi: f64,
    pub seed: u64,
    /// Seed for the cv draws; defaults to `seed`.
    pub cv_seed: Option<u64>,
    pub replications: usize,
    pub grid_step: u32,
    pub start_policy: StartPolicy,
    pub ongoing_policy: OngoingPolicy,
    pub out: PathBuf,
    pub threads: Option<usize>,
    /// Reuse the durations of an earlier run's `model.json`.
    pub model: Option<PathBuf>,
    pub gnuplot: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        let model = ModelConfig::default();
        RunConfig {
            instance: None,
            bundle: None,
            schedules: Vec::new(),
            rules: Vec::new(),
            family: model.family,
            cv_lo: model.cv_lo,
            cv_hi: model.cv_hi,
            seed: 0,
            cv_seed: None,
            replications: model.replications,
            grid_step: 1,
            start_policy: StartPolicy::default(),
            ongoing_policy: OngoingPolicy::default(),
            out: PathBuf::from("out"),
            threads: None,
            model: None,
            gnuplot: false,
        }
    }
}

impl RunConfig {
    pub fn from_json_file(path: &Path) -> anyhow::Result<Self> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("reading config {}", path.display()))?;
        let mut config: RunConfig = serde_json::from_str(&text)
            .with_context(|| format!("parsing config {}", path.display()))?;
        // Paths inside a config file are relative to the file.
        let base = path.parent().unwrap_or(Path::new(""));
        let rebase = |p: &mut PathBuf| {
            if p.is_relative() {
                *p = base.join(&*p);
            }
        };
        config.instance.as_mut().map(rebase);
        config.bundle.as_mut().map(rebase);
        config.model.as_mut().map(rebase);
        config.schedules.iter_mut().for_each(rebase);
        rebase(&mut config.out);
        Ok(config)
    }

    pub fn check(&self) -> anyhow::Result<()> {
        match (&self.instance, &self.bundle) {
            (None, None) => bail!("one of --instance or --bundle is required"),
            (Some(_), Some(_)) => bail!("--instance and --bundle are mutually exclusive"),
            _ => {}
        }
        if self
            .cv_lo
            .partial_cmp(&self.cv_hi)
            .is_none_or(|o| o.is_gt())
        {
            bail!(
                "cv-lo ({}) must not exceed cv-hi ({})",
                self.cv_lo,
                self.cv_hi
            );
        }
        if self.replications < 2 {
            bail!(
                "at least 2 replications are required, got {}",
                self.replications
            );
        }
        if self.grid_step < 1 {
            bail!("grid step must be at least 1");
        }
        if self.threads == Some(0) {
            bail!("--threads must be at least 1");
        }
        Ok(())
    }

    pub fn model_config(&self) -> ModelConfig {
        ModelConfig {
            family: self.family,
            cv_lo: self.cv_lo,
            cv_hi: self.cv_hi,
            cv_seed: self.cv_seed.unwrap_or(self.seed),
            seed: self.seed,
            replications: self.replications,
        }
    }

    pub fn sim_options(&self) -> SimOptions {
        SimOptions {
            start: self.start_policy,
            ongoing: self.ongoing_policy,
            threads: self.threads,
        }
    }
}

/// Flags shared by every subcommand. Unset flags leave the config value.
#[derive(Debug, Clone, Default, Args)]
pub struct RunArgs {
    /// JSON file with the same fields as the flags.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// PSPLib single-mode instance (.sm).
    #[arg(long, conflicts_with = "bundle")]
    pub instance: Option<PathBuf>,
    /// Multi-project descriptor.
    #[arg(long)]
    pub bundle: Option<PathBuf>,
    /// Schedule CSV (project,activity,start); repeatable.
    #[arg(long = "schedule")]
    pub schedules: Vec<PathBuf>,
    /// Priority rules for generated candidates, comma separated
    /// (min-slack, latest-finish, shortest-duration, most-successors, random-N).
    #[arg(long, value_delimiter = ',')]
    pub rules: Vec<String>,
    #[arg(long)]
    pub family: Option<Family>,
    #[arg(long)]
    pub cv_lo: Option<f64>,
    #[arg(long)]
    pub cv_hi: Option<f64>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub cv_seed: Option<u64>,
    #[arg(long)]
    pub reps: Option<usize>,
    #[arg(long)]
    pub grid_step: Option<u32>,
    /// ready-time or precedence-only.
    #[arg(long)]
    pub policy_start: Option<StartPolicy>,
    /// linear-scaled or all-or-nothing.
    #[arg(long)]
    pub policy_ongoing: Option<OngoingPolicy>,
    /// Output directory.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub threads: Option<usize>,
    /// Durations from an earlier model.json instead of fresh cv draws.
    #[arg(long)]
    pub model: Option<PathBuf>,
    /// Also write two-column `t variance` files.
    #[arg(long)]
    pub gnuplot: bool,
}

impl RunArgs {
    pub fn resolve(&self) -> anyhow::Result<RunConfig> {
        let mut c = match &self.config {
            Some(path) => RunConfig::from_json_file(path)?,
            None => RunConfig::default(),
        };
        if self.instance.is_some() {
            c.instance = self.instance.clone();
            c.bundle = None;
        }
        if self.bundle.is_some() {
            c.bundle = self.bundle.clone();
            c.instance = None;
        }
        if !self.schedules.is_empty() {
            c.schedules = self.schedules.clone();
        }
        if !self.rules.is_empty() {
            c.rules = self.rules.clone();
        }
        c.family = self.family.unwrap_or(c.family);
        c.cv_lo = self.cv_lo.unwrap_or(c.cv_lo);
        c.cv_hi = self.cv_hi.unwrap_or(c.cv_hi);
        c.seed = self.seed.unwrap_or(c.seed);
        c.cv_seed = self.cv_seed.or(c.cv_seed);
        c.replications = self.reps.unwrap_or(c.replications);
        c.grid_step = self.grid_step.unwrap_or(c.grid_step);
        c.start_policy = self.policy_start.unwrap_or(c.start_policy);
        c.ongoing_policy = self.policy_ongoing.unwrap_or(c.ongoing_policy);
        c.out = self.out.clone().unwrap_or(c.out);
        c.threads = self.threads.or(c.threads);
        c.model = self.model.clone().or(c.model);
        c.gnuplot |= self.gnuplot;
        c.check()?;
        Ok(c)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flags_override_config_file() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("run.json");
        std::fs::write(
            &path,
            r#"{"instance": "j.sm", "seed": 3, "replications": 50, "family": "uniform"}"#,
        )
        .unwrap();
        let args = RunArgs {
            config: Some(path),
            seed: Some(8),
            ..Default::default()
        };
        let c = args.resolve().unwrap();
        assert_eq!(c.seed, 8);
        assert_eq!(c.replications, 50);
        assert_eq!(c.family, Family::Uniform);
        assert_eq!(
            c.instance.as_deref(),
            Some(dir.path().join("j.sm").as_path())
        );
        assert_eq!(c.model_config().cv_seed, 8);
    }

    #[test]
    fn invariants() {
        let base = RunArgs {
            instance: Some("x.sm".into()),
            ..Default::default()
        };
        assert!(base.resolve().is_ok());
        assert!(RunArgs {
            cv_lo: Some(0.4),
            ..base.clone()
        }
        .resolve()
        .is_err());
        assert!(RunArgs {
            reps: Some(1),
            ..base.clone()
        }
        .resolve()
        .is_err());
        assert!(RunArgs {
            grid_step: Some(0),
            ..base.clone()
        }
        .resolve()
        .is_err());
        assert!(RunArgs {
            instance: None,
            ..base
        }
        .resolve()
        .is_err());
    }

    #[test]
    fn unknown_config_field_is_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("run.json");
        std::fs::write(&path, r#"{"instance": "j.sm", "replicatoins": 5}"#).unwrap();
        assert!(RunConfig::from_json_file(&path).is_err());
    }
}
