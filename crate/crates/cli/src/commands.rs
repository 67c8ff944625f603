use std::collections::HashSet;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context};
use serde::Serialize;

use schedrisk::schedule::{
    makespan, multiproject_metrics, validate, FeasibilityReport, MultiProjectMetrics,
};
use schedrisk::sgs::{serial_sgs, PriorityRule};
use schedrisk::srb::{analyze, rank_schedules, SrbCurve};
use schedrisk::uncertainty::DurationModel;
use schedrisk::{
    parse_instance, parse_multiproject, parse_schedule, write_schedule, MultiProjectProblem,
    Network, Schedule,
};

use crate::config::RunConfig;

/// Exit status of a command that ran to completion.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Ok = 0,
    /// Some schedule is infeasible, or nothing could be ranked.
    Rejected = 1,
}

pub struct Loaded {
    pub problem: MultiProjectProblem,
    pub network: Network,
    pub candidates: Vec<Schedule>,
}

fn read(path: &Path) -> anyhow::Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

pub fn load_problem(config: &RunConfig) -> anyhow::Result<MultiProjectProblem> {
    if let Some(path) = &config.instance {
        let mut instance =
            parse_instance(&read(path)?).with_context(|| format!("parsing {}", path.display()))?;
        if let Some(stem) = path.file_stem() {
            instance.name = stem.to_string_lossy().into_owned();
        }
        return Ok(MultiProjectProblem::single(instance));
    }
    let path = config.bundle.as_ref().expect("checked by RunConfig::check");
    let base = path.parent().unwrap_or(Path::new("")).to_path_buf();
    let descriptor = read(path)?;
    parse_multiproject(&descriptor, |p| {
        fs::read_to_string(base.join(p)).map_err(|e| e.to_string())
    })
    .with_context(|| format!("parsing {}", path.display()))
}

/// Problem, network and every candidate: schedule files first (labelled by
/// file stem), then one serial-SGS schedule per rule.
pub fn load(config: &RunConfig) -> anyhow::Result<Loaded> {
    let problem = load_problem(config)?;
    let network = Network::from_problem(&problem);
    let mut candidates = Vec::new();
    for path in &config.schedules {
        let label = path
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| path.display().to_string());
        let schedule = parse_schedule(&read(path)?, &label)
            .with_context(|| format!("parsing {}", path.display()))?;
        candidates.push(schedule);
    }
    for rule in &config.rules {
        let rule: PriorityRule = rule.parse()?;
        candidates.push(serial_sgs(&network, rule)?);
    }
    let mut seen = HashSet::new();
    for c in &candidates {
        if !seen.insert(file_label(&c.label)) {
            bail!("two candidates share the label `{}`", c.label);
        }
    }
    Ok(Loaded {
        problem,
        network,
        candidates,
    })
}

/// Label made safe for use in a file name.
pub fn file_label(label: &str) -> String {
    label
        .chars()
        .map(|c| {
            if c.is_ascii_alphanumeric() || "-_.".contains(c) {
                c
            } else {
                '_'
            }
        })
        .collect()
}

fn write_file(dir: &Path, name: &str, text: &str) -> anyhow::Result<PathBuf> {
    let path = dir.join(name);
    fs::write(&path, text).with_context(|| format!("writing {}", path.display()))?;
    Ok(path)
}

fn out_dir(config: &RunConfig) -> anyhow::Result<&Path> {
    fs::create_dir_all(&config.out)
        .with_context(|| format!("creating {}", config.out.display()))?;
    Ok(&config.out)
}

fn model(config: &RunConfig, network: &Network) -> anyhow::Result<DurationModel> {
    match &config.model {
        Some(path) => DurationModel::from_json(&read(path)?, network)
            .with_context(|| format!("loading {}", path.display())),
        None => Ok(DurationModel::generate(network, &config.model_config())?),
    }
}

fn write_curve(config: &RunConfig, dir: &Path, curve: &SrbCurve) -> anyhow::Result<()> {
    let name = file_label(&curve.label);
    write_file(dir, &format!("srb_{name}.csv"), &curve.to_csv())?;
    if config.gnuplot {
        write_file(dir, &format!("srb_{name}.dat"), &curve.to_columns())?;
    }
    Ok(())
}

#[derive(Serialize)]
struct ValidationEntry {
    #[serde(flatten)]
    report: FeasibilityReport,
    makespan: u32,
    #[serde(skip_serializing_if = "Option::is_none")]
    metrics: Option<MultiProjectMetrics>,
}

#[derive(Serialize)]
struct Validation {
    schema: u32,
    feasible: bool,
    schedules: Vec<ValidationEntry>,
}

pub fn cmd_validate(config: &RunConfig, out: &mut dyn Write) -> anyhow::Result<Status> {
    let loaded = load(config)?;
    if loaded.candidates.is_empty() {
        bail!("nothing to validate: give --schedule or --rules");
    }
    let mut entries = Vec::new();
    for s in &loaded.candidates {
        let report = validate(s, &loaded.network)?;
        let metrics = match loaded.problem.projects.len() {
            1 => None,
            _ => Some(multiproject_metrics(s, &loaded.problem)?),
        };
        writeln!(
            out,
            "{}: {} ({} precedence, {} resource, {} release violations)",
            s.label,
            if report.feasible {
                "feasible"
            } else {
                "INFEASIBLE"
            },
            report.precedence_violations.len(),
            report.resource_violations.len(),
            report.release_violations.len()
        )?;
        for v in &report.resource_violations {
            writeln!(
                out,
                "  resource {} period {}: {} > {}",
                v.resource, v.period, v.usage, v.capacity
            )?;
        }
        entries.push(ValidationEntry {
            makespan: makespan(s, &loaded.network)?,
            report,
            metrics,
        });
    }
    let feasible = entries.iter().all(|e| e.report.feasible);
    let doc = Validation {
        schema: 1,
        feasible,
        schedules: entries,
    };
    let mut text = serde_json::to_string_pretty(&doc)?;
    text.push('\n');
    write_file(out_dir(config)?, "validation.json", &text)?;
    Ok(if feasible {
        Status::Ok
    } else {
        Status::Rejected
    })
}

pub fn cmd_rank(config: &RunConfig, out: &mut dyn Write) -> anyhow::Result<Status> {
    let loaded = load(config)?;
    if loaded.candidates.is_empty() {
        bail!("nothing to rank: give --schedule or --rules");
    }
    let model = model(config, &loaded.network)?;
    let report = rank_schedules(
        &loaded.network,
        &loaded.candidates,
        &model,
        config.grid_step,
        &config.sim_options(),
    )?;
    let dir = out_dir(config)?;
    write_file(dir, "report.json", &report.to_json())?;
    write_file(dir, "model.json", &model.to_json(&loaded.network))?;
    for curve in &report.curves {
        write_curve(config, dir, curve)?;
    }

    writeln!(
        out,
        "{:<4} {:<24} {:>8} {:>10} {:>12}",
        "rank", "label", "planned", "mean", "SRV"
    )?;
    for (k, row) in report.ranked().enumerate() {
        writeln!(
            out,
            "{:<4} {:<24} {:>8} {:>10.2} {:>12.2}",
            k + 1,
            row.label,
            row.planned.unwrap_or(0),
            row.mean.unwrap_or(f64::NAN),
            row.srv.unwrap_or(f64::NAN)
        )?;
    }
    for row in report.schedules.iter().filter(|s| !s.feasible) {
        writeln!(out, "-    {:<24} infeasible, not ranked", row.label)?;
    }
    if report.ranking.is_empty() {
        writeln!(out, "no feasible candidate")?;
        return Ok(Status::Rejected);
    }
    Ok(Status::Ok)
}

pub fn cmd_curve(config: &RunConfig, out: &mut dyn Write) -> anyhow::Result<Status> {
    let loaded = load(config)?;
    let [schedule] = loaded.candidates.as_slice() else {
        bail!(
            "curve takes exactly one schedule, got {}",
            loaded.candidates.len()
        );
    };
    if !validate(schedule, &loaded.network)?.feasible {
        writeln!(out, "{}: infeasible", schedule.label)?;
        return Ok(Status::Rejected);
    }
    let model = model(config, &loaded.network)?;
    let analysis = analyze(
        &loaded.network,
        schedule,
        &model,
        config.grid_step,
        &config.sim_options(),
    )?;
    let dir = out_dir(config)?;
    write_file(dir, "model.json", &model.to_json(&loaded.network))?;
    write_curve(config, dir, &analysis.curve)?;
    writeln!(
        out,
        "{}: planned {} mean {:.2} SRV {:.2}",
        schedule.label,
        analysis.planned,
        analysis.mean_duration(),
        analysis.srv
    )?;
    Ok(Status::Ok)
}

/// Writes one schedule CSV per rule and prints each makespan.
pub fn cmd_sgs(config: &RunConfig, out: &mut dyn Write) -> anyhow::Result<Status> {
    let mut config = config.clone();
    if config.rules.is_empty() {
        config.rules = PriorityRule::DETERMINISTIC
            .iter()
            .map(ToString::to_string)
            .collect();
    }
    config.schedules.clear();
    let loaded = load(&config)?;
    let dir = out_dir(&config)?;
    for s in &loaded.candidates {
        let path = write_file(
            dir,
            &format!("{}.csv", file_label(&s.label)),
            &write_schedule(s),
        )?;
        writeln!(
            out,
            "{:<24} {:>6}  {}",
            s.label,
            makespan(s, &loaded.network)?,
            path.display()
        )?;
    }
    Ok(Status::Ok)
}
