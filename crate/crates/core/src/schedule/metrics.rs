use serde::{Deserialize, Serialize};

use super::cpm_makespan;
use crate::error::{Error, Result};
use crate::instance::{MultiProjectProblem, Schedule};
use crate::network::Network;

/// Total makespan, average project delay and the sample standard
/// deviation of project delays.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MultiProjectMetrics {
    pub tms: u32,
    pub apd: f64,
    pub dpd: f64,
    /// Delay per project, in bundle order.
    pub delays: Vec<i64>,
}

/// A project's delay is its span from arrival to finish minus its own
/// resource-unconstrained critical path length.
pub fn multiproject_metrics(
    schedule: &Schedule,
    problem: &MultiProjectProblem,
) -> Result<MultiProjectMetrics> {
    let network = Network::from_problem(problem);
    let scheduled = schedule.projects();
    if let Some(p) = problem
        .projects
        .iter()
        .find(|p| !scheduled.contains(&p.name.as_str()))
    {
        return Err(Error::Structural {
            label: schedule.label.clone(),
            message: format!("no records for project `{}`", p.name),
        });
    }
    let starts = network.resolve(schedule)?;

    let mut delays = Vec::with_capacity(problem.projects.len());
    let mut last_finish = 0;
    for (entry, span) in problem.projects.iter().zip(&network.projects) {
        let finish = span
            .nodes
            .clone()
            .map(|i| starts[i] + network.nodes[i].duration)
            .max()
            .unwrap_or(entry.arrival);
        last_finish = last_finish.max(finish);
        let (critical, _) = cpm_makespan(&entry.instance);
        delays.push(i64::from(finish) - i64::from(entry.arrival) - i64::from(critical));
    }
    let first_arrival = problem
        .projects
        .iter()
        .map(|p| p.arrival)
        .min()
        .unwrap_or(0);

    let n = delays.len() as f64;
    let apd = delays.iter().sum::<i64>() as f64 / n;
    let dpd = if delays.len() < 2 {
        0.0
    } else {
        let ss: f64 = delays.iter().map(|&d| (d as f64 - apd).powi(2)).sum();
        (ss / (n - 1.0)).sqrt()
    };
    Ok(MultiProjectMetrics {
        tms: last_finish.saturating_sub(first_arrival),
        apd,
        dpd,
        delays,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::ProjectInstance;
    use crate::schedule::cpm;

    fn chain(name: &str) -> ProjectInstance {
        ProjectInstance::from_table(
            name,
            &[
                (0, vec![0], vec![2]),
                (4, vec![1], vec![3]),
                (3, vec![1], vec![4]),
                (0, vec![0], vec![]),
            ],
            &[1],
        )
        .unwrap()
    }

    #[test]
    fn zero_delay_single_project() {
        let problem = MultiProjectProblem::single(chain("a"));
        let net = Network::from_problem(&problem);
        let es = cpm(&net).earliest_starts;
        let s = net.schedule_from_starts("cpm", &es);
        let m = multiproject_metrics(&s, &problem).unwrap();
        assert_eq!((m.tms, m.apd, m.dpd), (7, 0.0, 0.0));
    }

    #[test]
    fn missing_project_is_error() {
        let mut problem = MultiProjectProblem::single(chain("a"));
        let mut b = problem.projects[0].clone();
        b.name = "b".into();
        problem.projects.push(b);
        let s = Schedule::with_starts("s", "a", [(2, 0), (3, 4)]);
        assert!(multiproject_metrics(&s, &problem).is_err());
    }
}
