//! Multi-project bundle descriptors.
//!
//! ```text
//! # comment
//! problem mp_j30_a2
//! project <name> <instance-path> <arrival>
//! global <resource-id> <capacity>
//! ```
//!
//! A project resource whose id matches a `global` line is pooled across
//! all projects at the global capacity; every other resource stays local
//! to its project with the capacity from the instance file.

use std::collections::HashSet;
use std::fmt::Write as _;

use super::{parse_instance, ProjectInstance, Resource};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProjectEntry {
    pub name: String,
    /// Path as written in the descriptor, kept for round-tripping.
    pub path: String,
    pub arrival: u32,
    pub instance: ProjectInstance,
}

impl ProjectEntry {
    pub fn local_resources<'a>(
        &'a self,
        globals: &'a [Resource],
    ) -> impl Iterator<Item = &'a Resource> + 'a {
        self.instance
            .resources
            .iter()
            .filter(move |r| !globals.iter().any(|g| g.id == r.id))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiProjectProblem {
    pub name: String,
    pub projects: Vec<ProjectEntry>,
    pub globals: Vec<Resource>,
}

impl MultiProjectProblem {
    /// Wraps one instance as a bundle with arrival 0 and no global resources.
    pub fn single(instance: ProjectInstance) -> Self {
        MultiProjectProblem {
            name: instance.name.clone(),
            projects: vec![ProjectEntry {
                name: instance.name.clone(),
                path: format!("{}.sm", instance.name),
                arrival: 0,
                instance,
            }],
            globals: Vec::new(),
        }
    }

    pub fn project(&self, name: &str) -> Option<&ProjectEntry> {
        self.projects.iter().find(|p| p.name == name)
    }

    pub fn validate(&self) -> Result<()> {
        let mut names = HashSet::new();
        for p in &self.projects {
            if !names.insert(p.name.as_str()) {
                return Err(Error::Invalid(format!("duplicate project `{}`", p.name)));
            }
        }
        let mut ids = HashSet::new();
        for g in &self.globals {
            if !ids.insert(g.id.as_str()) {
                return Err(Error::Invalid(format!(
                    "duplicate global resource `{}`",
                    g.id
                )));
            }
            let used = self
                .projects
                .iter()
                .any(|p| p.instance.resource_index(&g.id).is_some());
            if !used {
                return Err(Error::Invalid(format!(
                    "global resource `{}` is not used by any project",
                    g.id
                )));
            }
        }
        Ok(())
    }
}

/// Parses a bundle descriptor. `resolve` maps an instance path to its text.
pub fn parse_multiproject<F>(descriptor: &str, mut resolve: F) -> Result<MultiProjectProblem>
where
    F: FnMut(&str) -> std::result::Result<String, String>,
{
    let mut name = String::new();
    let mut projects = Vec::new();
    let mut globals = Vec::new();

    for (idx, raw) in descriptor.lines().enumerate() {
        let line = idx + 1;
        let text = raw.split('#').next().unwrap_or("").trim();
        if text.is_empty() {
            continue;
        }
        let fields: Vec<&str> = text.split_whitespace().collect();
        match fields[0] {
            "problem" if fields.len() == 2 => name = fields[1].to_string(),
            "project" if fields.len() == 4 => {
                let arrival: i64 = fields[3].parse().map_err(|_| {
                    Error::parse(line, format!("invalid arrival date `{}`", fields[3]))
                })?;
                if arrival < 0 {
                    return Err(Error::parse(
                        line,
                        format!(
                            "negative arrival date {arrival} for project `{}`",
                            fields[1]
                        ),
                    ));
                }
                let text = resolve(fields[2]).map_err(|reason| Error::Unresolved {
                    name: fields[2].to_string(),
                    reason,
                })?;
                let instance = parse_instance(&text).map_err(|e| Error::Unresolved {
                    name: fields[2].to_string(),
                    reason: e.to_string(),
                })?;
                projects.push(ProjectEntry {
                    name: fields[1].to_string(),
                    path: fields[2].to_string(),
                    arrival: arrival as u32,
                    instance,
                });
            }
            "global" if fields.len() == 3 => {
                let capacity = fields[2]
                    .parse()
                    .map_err(|_| Error::parse(line, format!("invalid capacity `{}`", fields[2])))?;
                globals.push(Resource {
                    id: fields[1].to_string(),
                    capacity,
                });
            }
            keyword => {
                return Err(Error::parse(
                    line,
                    format!("unrecognised descriptor line starting with `{keyword}`"),
                ))
            }
        }
    }
    if projects.is_empty() {
        return Err(Error::parse(
            descriptor.lines().count() + 1,
            "bundle lists no projects",
        ));
    }
    if name.is_empty() {
        name = projects
            .iter()
            .map(|p: &ProjectEntry| p.name.as_str())
            .collect::<Vec<_>>()
            .join("+");
    }
    let problem = MultiProjectProblem {
        name,
        projects,
        globals,
    };
    for g in &problem.globals {
        if !problem
            .projects
            .iter()
            .any(|p| p.instance.resource_index(&g.id).is_some())
        {
            return Err(Error::Unresolved {
                name: g.id.clone(),
                reason: "unknown global resource id".into(),
            });
        }
    }
    problem.validate()?;
    Ok(problem)
}

pub fn write_multiproject(problem: &MultiProjectProblem) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "problem {}", problem.name);
    for p in &problem.projects {
        let _ = writeln!(out, "project {} {} {}", p.name, p.path, p.arrival);
    }
    for g in &problem.globals {
        let _ = writeln!(out, "global {} {}", g.id, g.capacity);
    }
    out
}
