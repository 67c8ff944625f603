//! Flattened activity network shared by analysis, simulation and
//! schedule generation.
//!
//! A single instance and a multi-project bundle both reduce to one DAG of
//! nodes over one pooled resource list. Global resources of a bundle keep
//! their id; local resources are renamed `<project>/<id>`.

use std::collections::{BTreeSet, HashMap};

use crate::error::{Error, Result};
use crate::instance::{ActivityKey, MultiProjectProblem, ProjectInstance, Resource, Schedule};

/// Kahn's algorithm over successor lists, taking the smallest ready index
/// first. On a cycle returns the index of some node on or behind it.
pub(crate) fn topological_sort(successors: &[&[usize]]) -> std::result::Result<Vec<usize>, usize> {
    let n = successors.len();
    let mut indegree = vec![0usize; n];
    for succ in successors {
        for &s in succ.iter() {
            indegree[s] += 1;
        }
    }
    let mut ready: BTreeSet<usize> = (0..n).filter(|&i| indegree[i] == 0).collect();
    let mut order = Vec::with_capacity(n);
    while let Some(i) = ready.pop_first() {
        order.push(i);
        for &s in successors[i] {
            indegree[s] -= 1;
            if indegree[s] == 0 {
                ready.insert(s);
            }
        }
    }
    if order.len() == n {
        Ok(order)
    } else {
        Err((0..n).find(|&i| indegree[i] > 0).unwrap_or(0))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Node {
    pub key: ActivityKey,
    pub project: usize,
    pub duration: u32,
    /// Demand per pooled resource.
    pub demands: Vec<u32>,
    pub successors: Vec<usize>,
    pub predecessors: Vec<usize>,
    /// Source or sink of its project.
    pub dummy: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProjectSpan {
    pub name: String,
    pub arrival: u32,
    pub nodes: std::ops::Range<usize>,
    pub source: usize,
    pub sink: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Network {
    pub name: String,
    pub nodes: Vec<Node>,
    pub resources: Vec<Resource>,
    pub projects: Vec<ProjectSpan>,
    topo: Vec<usize>,
    index: HashMap<ActivityKey, usize>,
}

impl Network {
    pub fn from_instance(instance: &ProjectInstance) -> Self {
        Self::from_problem(&MultiProjectProblem::single(instance.clone()))
    }

    pub fn from_problem(problem: &MultiProjectProblem) -> Self {
        let mut resources: Vec<Resource> = problem.globals.clone();
        let mut nodes = Vec::new();
        let mut projects = Vec::new();
        let single = problem.projects.len() == 1;

        for (p, entry) in problem.projects.iter().enumerate() {
            let inst = &entry.instance;
            let mapping: Vec<usize> = inst
                .resources
                .iter()
                .map(|r| {
                    if let Some(g) = problem.globals.iter().position(|g| g.id == r.id) {
                        g
                    } else {
                        resources.push(Resource {
                            id: if single {
                                r.id.clone()
                            } else {
                                format!("{}/{}", entry.name, r.id)
                            },
                            capacity: r.capacity,
                        });
                        resources.len() - 1
                    }
                })
                .collect();
            let pooled = |demands: &[u32]| {
                let mut out = vec![0; resources.len()];
                for (k, &r) in mapping.iter().enumerate() {
                    out[r] = demands[k];
                }
                out
            };
            let offset = nodes.len();
            let (source, sink) = (inst.source(), inst.sink());
            let preds = inst.predecessors();
            for a in &inst.activities {
                nodes.push(Node {
                    key: ActivityKey::new(entry.name.clone(), a.file_id),
                    project: p,
                    duration: a.duration,
                    demands: pooled(&a.demands),
                    successors: a.successors.iter().map(|&s| s + offset).collect(),
                    predecessors: preds[a.id].iter().map(|&s| s + offset).collect(),
                    dummy: inst.activities.len() > 1 && (a.id == source || a.id == sink),
                });
            }
            projects.push(ProjectSpan {
                name: entry.name.clone(),
                arrival: entry.arrival,
                nodes: offset..nodes.len(),
                source: offset + source,
                sink: offset + sink,
            });
        }
        for node in &mut nodes {
            node.demands.resize(resources.len(), 0);
        }
        let succ: Vec<&[usize]> = nodes.iter().map(|n| n.successors.as_slice()).collect();
        // Each instance was validated acyclic, and projects are disjoint.
        let topo = topological_sort(&succ).unwrap_or_else(|_| (0..nodes.len()).collect());
        let index = nodes
            .iter()
            .enumerate()
            .map(|(i, n)| (n.key.clone(), i))
            .collect();
        Network {
            name: problem.name.clone(),
            nodes,
            resources,
            projects,
            topo,
            index,
        }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn topological_order(&self) -> &[usize] {
        &self.topo
    }

    pub fn index_of(&self, key: &ActivityKey) -> Option<usize> {
        self.index.get(key).copied()
    }

    pub fn arrival(&self, node: usize) -> u32 {
        self.projects[self.nodes[node].project].arrival
    }

    /// Maps a schedule onto node indices. Every non-dummy activity needs a
    /// start; a missing source starts at the earliest start of its
    /// project's other activities and a missing sink at their latest finish.
    pub fn resolve(&self, schedule: &Schedule) -> Result<Vec<u32>> {
        let structural = |message: String| Error::Structural {
            label: schedule.label.clone(),
            message,
        };
        let mut starts: Vec<Option<u32>> = vec![None; self.nodes.len()];
        for (key, &start) in &schedule.starts {
            let i = self
                .index_of(key)
                .ok_or_else(|| structural(format!("unknown activity {key}")))?;
            starts[i] = Some(start);
        }
        if let Some(i) =
            (0..self.nodes.len()).find(|&i| starts[i].is_none() && !self.nodes[i].dummy)
        {
            return Err(structural(format!(
                "no start for activity {}",
                self.nodes[i].key
            )));
        }
        for span in &self.projects {
            if starts[span.source].is_none() {
                let first = span
                    .nodes
                    .clone()
                    .filter(|&i| i != span.source && i != span.sink)
                    .filter_map(|i| starts[i])
                    .min()
                    .unwrap_or(span.arrival);
                starts[span.source] = Some(first);
            }
            if starts[span.sink].is_none() {
                let last = span
                    .nodes
                    .clone()
                    .filter(|&i| i != span.sink)
                    .filter_map(|i| starts[i].map(|s| s + self.nodes[i].duration))
                    .max()
                    .unwrap_or(span.arrival);
                starts[span.sink] = Some(last);
            }
        }
        Ok(starts.into_iter().map(|s| s.unwrap_or(0)).collect())
    }

    /// Inverse of [`Network::resolve`]: a schedule listing every node.
    pub fn schedule_from_starts(&self, label: impl Into<String>, starts: &[u32]) -> Schedule {
        Schedule {
            label: label.into(),
            starts: self
                .nodes
                .iter()
                .zip(starts)
                .map(|(n, &s)| (n.key.clone(), s))
                .collect(),
        }
    }

    /// Latest planned finish over all nodes.
    pub fn planned_finish(&self, starts: &[u32]) -> u32 {
        self.nodes
            .iter()
            .zip(starts)
            .map(|(n, &s)| s + n.duration)
            .max()
            .unwrap_or(0)
    }
}

impl From<&ProjectInstance> for Network {
    fn from(instance: &ProjectInstance) -> Self {
        Network::from_instance(instance)
    }
}

impl From<&MultiProjectProblem> for Network {
    fn from(problem: &MultiProjectProblem) -> Self {
        Network::from_problem(problem)
    }
}
