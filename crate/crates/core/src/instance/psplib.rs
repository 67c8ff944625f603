//! Reader and writer for the PSPLib single-mode `.sm` layout.
//!
//! Sections are located by their keywords; separator lines of `*` and `-`
//! are skipped. The horizon and project-information values are kept only
//! so that writing reproduces them.

use std::collections::HashMap;
use std::fmt::Write as _;

use super::{Activity, ProjectInstance, PsplibHeader, Resource};
use crate::error::{Error, Result};

const STARS: &str = "************************************************************************";
const DASHES: &str = "------------------------------------------------------------------------";

struct Lines<'a> {
    lines: Vec<(usize, &'a str)>,
    pos: usize,
    last_line: usize,
}

impl<'a> Lines<'a> {
    fn new(text: &'a str) -> Self {
        let all: Vec<&str> = text.lines().collect();
        let last_line = all.len();
        let lines = all
            .into_iter()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim_end_matches('\r')))
            .filter(|(_, l)| {
                let t = l.trim();
                !t.is_empty() && !t.chars().all(|c| c == '*') && !t.chars().all(|c| c == '-')
            })
            .collect();
        Lines {
            lines,
            pos: 0,
            last_line,
        }
    }

    fn next(&mut self, expected: &str) -> Result<(usize, &'a str)> {
        match self.lines.get(self.pos) {
            Some(&item) => {
                self.pos += 1;
                Ok(item)
            }
            None => Err(Error::parse(
                self.last_line + 1,
                format!("unexpected end of input, expected {expected}"),
            )),
        }
    }

    /// Consumes a `key : value` line whose key starts with `key`.
    fn field(&mut self, key: &str) -> Result<(usize, &'a str)> {
        let (line, text) = self.next(key)?;
        let (k, v) = text
            .split_once(':')
            .ok_or_else(|| Error::parse(line, format!("expected `{key} : ...`")))?;
        if !k.trim_start().to_ascii_lowercase().starts_with(key) {
            return Err(Error::parse(
                line,
                format!("expected `{key}`, found `{}`", k.trim()),
            ));
        }
        Ok((line, v.trim()))
    }

    fn header(&mut self, keyword: &str) -> Result<usize> {
        let (line, text) = self.next(keyword)?;
        if !text.trim_start().starts_with(keyword) {
            return Err(Error::parse(
                line,
                format!(
                    "expected section header `{keyword}`, found `{}`",
                    text.trim()
                ),
            ));
        }
        Ok(line)
    }
}

fn number<T: std::str::FromStr>(line: usize, token: &str, what: &str) -> Result<T> {
    token
        .parse()
        .map_err(|_| Error::parse(line, format!("invalid {what} `{token}`")))
}

fn first_number<T: std::str::FromStr>(line: usize, value: &str, what: &str) -> Result<T> {
    let token = value
        .split_whitespace()
        .next()
        .ok_or_else(|| Error::parse(line, format!("missing {what}")))?;
    number(line, token, what)
}

fn numbers(line: usize, text: &str, what: &str) -> Result<Vec<u64>> {
    text.split_whitespace()
        .map(|t| number(line, t, what))
        .collect()
}

/// `R 1  R 2` -> `["R1", "R2"]`. Name tokens are joined with the number
/// that follows them.
fn resource_names(line: usize, tokens: &[&str]) -> Result<Vec<String>> {
    let mut names = Vec::new();
    let mut iter = tokens.iter();
    while let Some(tok) = iter.next() {
        if tok.chars().all(|c| c.is_ascii_digit()) {
            return Err(Error::parse(line, format!("unexpected token `{tok}`")));
        }
        if tok.chars().any(|c| c.is_ascii_digit()) {
            names.push(tok.to_string());
        } else {
            let num = iter
                .next()
                .ok_or_else(|| Error::parse(line, format!("resource `{tok}` has no number")))?;
            names.push(format!("{tok}{num}"));
        }
    }
    Ok(names)
}

/// Parses a PSPLib `.sm` file.
pub fn parse_instance(text: &str) -> Result<ProjectInstance> {
    let mut lines = Lines::new(text);
    let mut header = PsplibHeader::default();

    let (_, basedata) = lines.field("file with basedata")?;
    let name = basedata
        .strip_suffix(".bas")
        .unwrap_or(basedata)
        .to_string();
    let (line, seed) = lines.field("initial value random generator")?;
    header.generator_seed = first_number(line, seed, "generator seed")?;

    let (line, projects) = lines.field("projects")?;
    let projects: u32 = first_number(line, projects, "project count")?;
    if projects != 1 {
        return Err(Error::Unsupported {
            line,
            feature: format!("{projects} projects in one .sm file"),
        });
    }
    let (jobs_line, jobs) = lines.field("jobs")?;
    let job_count: usize = first_number(jobs_line, jobs, "job count")?;
    let (line, horizon) = lines.field("horizon")?;
    header.horizon = first_number(line, horizon, "horizon")?;

    lines.header("RESOURCES")?;
    let (line, renewable) = lines.field("- renewable")?;
    let renewable: usize = first_number(line, renewable, "renewable resource count")?;
    for kind in ["- nonrenewable", "- doubly constrained"] {
        let (line, value) = lines.field(kind)?;
        let count: usize = first_number(line, value, "resource count")?;
        if count > 0 {
            return Err(Error::Unsupported {
                line,
                feature: format!("{} resources", kind.trim_start_matches("- ")),
            });
        }
    }

    lines.header("PROJECT INFORMATION")?;
    lines.header("pronr.")?;
    let (line, info) = lines.next("project information values")?;
    let info = numbers(line, info, "project information value")?;
    if info.len() != 6 {
        return Err(Error::parse(
            line,
            format!(
                "expected 6 project information values, found {}",
                info.len()
            ),
        ));
    }
    header.release_date = info[2] as u32;
    header.due_date = info[3] as u32;
    header.tardiness_cost = info[4] as u32;
    header.mpm_time = info[5] as u32;

    lines.header("PRECEDENCE RELATIONS")?;
    lines.header("jobnr.")?;
    let mut file_ids = Vec::with_capacity(job_count);
    let mut successor_ids = Vec::with_capacity(job_count);
    let mut position: HashMap<u32, usize> = HashMap::new();
    for _ in 0..job_count {
        let (line, text) = lines.next("precedence record")?;
        let values = numbers(line, text, "precedence value")?;
        if values.len() < 3 {
            return Err(Error::parse(
                line,
                "precedence record needs job, modes, successor count",
            ));
        }
        let job = values[0] as u32;
        if values[1] != 1 {
            return Err(Error::Unsupported {
                line,
                feature: format!("multi-mode job {job} ({} modes)", values[1]),
            });
        }
        let count = values[2] as usize;
        if values.len() != 3 + count {
            return Err(Error::parse(
                line,
                format!(
                    "job {job} declares {count} successors but lists {}",
                    values.len() - 3
                ),
            ));
        }
        if position.insert(job, file_ids.len()).is_some() {
            return Err(Error::DuplicateActivity(job.to_string()));
        }
        file_ids.push(job);
        successor_ids.push(
            values[3..]
                .iter()
                .map(|&s| (line, s as u32))
                .collect::<Vec<_>>(),
        );
    }

    let req_line = lines.header("REQUESTS/DURATIONS")?;
    let (line, text) = lines.next("request header")?;
    let tokens: Vec<&str> = text.split_whitespace().collect();
    let after = tokens
        .iter()
        .position(|t| t.eq_ignore_ascii_case("duration"))
        .ok_or_else(|| Error::parse(line, "request header has no `duration` column"))?;
    let names = resource_names(line, &tokens[after + 1..])?;
    if names.len() != renewable {
        return Err(Error::parse(
            line,
            format!(
                "header declares {renewable} resources, request table has {}",
                names.len()
            ),
        ));
    }
    let mut durations = vec![None; job_count];
    let mut demands = vec![Vec::new(); job_count];
    for _ in 0..job_count {
        let (line, text) = lines.next("request record")?;
        let values = numbers(line, text, "request value")?;
        if values.len() != 3 + renewable {
            return Err(Error::parse(
                line,
                format!(
                    "expected {} request values, found {}",
                    3 + renewable,
                    values.len()
                ),
            ));
        }
        let job = values[0] as u32;
        let &pos = position
            .get(&job)
            .ok_or_else(|| Error::parse(line, format!("request for unknown job {job}")))?;
        if durations[pos].is_some() {
            return Err(Error::DuplicateActivity(job.to_string()));
        }
        if values[1] != 1 {
            return Err(Error::Unsupported {
                line,
                feature: format!("mode {} for job {job}", values[1]),
            });
        }
        durations[pos] = Some(values[2] as u32);
        demands[pos] = values[3..].iter().map(|&v| v as u32).collect();
    }
    if let Some(pos) = durations.iter().position(Option::is_none) {
        return Err(Error::parse(
            req_line,
            format!("no request record for job {}", file_ids[pos]),
        ));
    }

    lines.header("RESOURCEAVAILABILITIES")?;
    let (line, text) = lines.next("availability header")?;
    let tokens: Vec<&str> = text.split_whitespace().collect();
    let avail_names = resource_names(line, &tokens)?;
    if avail_names != names {
        return Err(Error::parse(
            line,
            "availability columns differ from request columns",
        ));
    }
    let (line, text) = lines.next("resource capacities")?;
    let caps = numbers(line, text, "capacity")?;
    if caps.len() != renewable {
        return Err(Error::parse(
            line,
            format!("expected {renewable} capacities, found {}", caps.len()),
        ));
    }
    if let Ok((line, text)) = lines.next("") {
        return Err(Error::parse(
            line,
            format!("trailing content `{}`", text.trim()),
        ));
    }

    let mut activities = Vec::with_capacity(job_count);
    for (pos, &file_id) in file_ids.iter().enumerate() {
        let successors = successor_ids[pos]
            .iter()
            .map(|&(line, s)| {
                position.get(&s).copied().ok_or_else(|| {
                    Error::parse(line, format!("job {file_id} has unknown successor {s}"))
                })
            })
            .collect::<Result<Vec<_>>>()?;
        activities.push(Activity {
            id: pos,
            file_id,
            duration: durations[pos].unwrap_or(0),
            demands: std::mem::take(&mut demands[pos]),
            successors,
        });
    }
    let resources = names
        .into_iter()
        .zip(caps)
        .map(|(id, c)| Resource {
            id,
            capacity: c as u32,
        })
        .collect();

    let instance = ProjectInstance {
        name,
        header,
        activities,
        resources,
    };
    instance.validate()?;
    Ok(instance)
}

/// `R1` -> `R 1`, the spelling used in PSPLib column headers.
fn column_name(id: &str) -> String {
    match id.find(|c: char| c.is_ascii_digit()) {
        Some(i) if i > 0 => format!("{} {}", &id[..i], &id[i..]),
        _ => id.to_string(),
    }
}

/// Writes an instance in the `.sm` layout.
pub fn write_instance(instance: &ProjectInstance) -> String {
    let h = &instance.header;
    let n = instance.activities.len();
    let mut out = String::new();
    let columns: String = instance
        .resources
        .iter()
        .map(|r| format!("  {}", column_name(&r.id)))
        .collect();

    let _ = writeln!(out, "{STARS}");
    let _ = writeln!(out, "file with basedata            : {}.bas", instance.name);
    let _ = writeln!(out, "initial value random generator: {}", h.generator_seed);
    let _ = writeln!(out, "{STARS}");
    let _ = writeln!(out, "projects                      :  1");
    let _ = writeln!(out, "jobs (incl. supersource/sink ):  {n}");
    let _ = writeln!(out, "horizon                       :  {}", h.horizon);
    let _ = writeln!(out, "RESOURCES");
    let _ = writeln!(
        out,
        "  - renewable                 :  {}   R",
        instance.resources.len()
    );
    let _ = writeln!(out, "  - nonrenewable              :  0   N");
    let _ = writeln!(out, "  - doubly constrained        :  0   D");
    let _ = writeln!(out, "{STARS}");
    let _ = writeln!(out, "PROJECT INFORMATION:");
    let _ = writeln!(out, "pronr.  #jobs rel.date duedate tardcost  MPM-Time");
    let _ = writeln!(
        out,
        "    1     {:2}      {}       {}        {}        {}",
        n.saturating_sub(2),
        h.release_date,
        h.due_date,
        h.tardiness_cost,
        h.mpm_time
    );
    let _ = writeln!(out, "{STARS}");
    let _ = writeln!(out, "PRECEDENCE RELATIONS:");
    let _ = writeln!(out, "jobnr.    #modes  #successors   successors");
    for a in &instance.activities {
        let mut succ: Vec<u32> = a
            .successors
            .iter()
            .map(|&s| instance.activities[s].file_id)
            .collect();
        succ.sort_unstable();
        let tail: String = succ.iter().map(|s| format!("{s:4}")).collect();
        let line = format!("{:4}        1{:11}         {tail}", a.file_id, succ.len());
        let _ = writeln!(out, "{}", line.trim_end());
    }
    let _ = writeln!(out, "{STARS}");
    let _ = writeln!(out, "REQUESTS/DURATIONS:");
    let _ = writeln!(out, "jobnr. mode duration{columns}");
    let _ = writeln!(out, "{DASHES}");
    for a in &instance.activities {
        let req: String = a.demands.iter().map(|d| format!("{d:5}")).collect();
        let _ = writeln!(out, "{:4}{:7}{:6}{req}", a.file_id, 1, a.duration);
    }
    let _ = writeln!(out, "{STARS}");
    let _ = writeln!(out, "RESOURCEAVAILABILITIES:");
    let _ = writeln!(out, "{columns}");
    let caps: String = instance
        .resources
        .iter()
        .map(|r| format!("{:5}", r.capacity))
        .collect();
    let _ = writeln!(out, "{caps}");
    let _ = writeln!(out, "{STARS}");
    out
}
