//! Reader and writer for the PSPLIB single-mode `.sm` layout.
//!
//! Only the sections that carry the network are interpreted: the job count,
//! `PRECEDENCE RELATIONS:`, `REQUESTS/DURATIONS:` and, when present,
//! `RESOURCEAVAILABILITIES:`. Everything else in the file is skipped.

use std::fmt::Write as _;

use thiserror::Error;

use crate::graph;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PsplibError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("missing section `{0}`")]
    MissingSection(&'static str),
    #[error("precedence relations are cyclic (job {job} lies on or behind a cycle)")]
    Cycle { job: usize },
}

fn syntax(line: usize, message: impl Into<String>) -> PsplibError {
    PsplibError::Syntax { line, message: message.into() }
}

/// The network part of a PSPLIB project. Job `j` of the file is index `j - 1`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct PsplibProject {
    pub durations: Vec<u32>,
    pub successors: Vec<Vec<usize>>,
    /// Per job, the request for each renewable resource type.
    pub requests: Vec<Vec<u32>>,
    /// Availability per renewable resource type; zeros when the file omits it.
    pub capacities: Vec<u32>,
    pub horizon: Option<u32>,
}

impl PsplibProject {
    pub fn job_count(&self) -> usize {
        self.durations.len()
    }

    pub fn renewable_count(&self) -> usize {
        self.capacities.len()
    }

    /// Renders the project back into the `.sm` layout.
    pub fn to_sm_string(&self, basedata: &str) -> String {
        let n = self.job_count();
        let stars = "*".repeat(72);
        let horizon = self.horizon.unwrap_or_else(|| self.durations.iter().sum());
        let mut out = String::new();
        let _ = writeln!(out, "{stars}");
        let _ = writeln!(out, "file with basedata            : {basedata}");
        let _ = writeln!(out, "initial value random generator: 0");
        let _ = writeln!(out, "{stars}");
        let _ = writeln!(out, "projects                      :  1");
        let _ = writeln!(out, "jobs (incl. supersource/sink ):  {n}");
        let _ = writeln!(out, "horizon                       :  {horizon}");
        let _ = writeln!(out, "RESOURCES");
        let _ = writeln!(out, "  - renewable                 :  {}   R", self.renewable_count());
        let _ = writeln!(out, "  - nonrenewable              :  0   N");
        let _ = writeln!(out, "  - doubly constrained        :  0   D");
        let _ = writeln!(out, "{stars}");
        let _ = writeln!(out, "PRECEDENCE RELATIONS:");
        let _ = writeln!(out, "jobnr.    #modes  #successors   successors");
        for (j, succ) in self.successors.iter().enumerate() {
            let _ = write!(out, "{:>4}        1{:>11}     ", j + 1, succ.len());
            for s in succ {
                let _ = write!(out, "{:>4}", s + 1);
            }
            out.push('\n');
        }
        let _ = writeln!(out, "{stars}");
        let _ = writeln!(out, "REQUESTS/DURATIONS:");
        let _ = write!(out, "jobnr. mode duration");
        for t in 0..self.renewable_count() {
            let _ = write!(out, "  R {}", t + 1);
        }
        out.push('\n');
        let _ = writeln!(out, "{}", "-".repeat(72));
        for j in 0..n {
            let _ = write!(out, "{:>4}{:>6}{:>6}   ", j + 1, 1, self.durations[j]);
            for r in &self.requests[j] {
                let _ = write!(out, "{r:>5}");
            }
            out.push('\n');
        }
        let _ = writeln!(out, "{stars}");
        let _ = writeln!(out, "RESOURCEAVAILABILITIES:");
        for t in 0..self.renewable_count() {
            let _ = write!(out, "  R {}", t + 1);
        }
        out.push('\n');
        for c in &self.capacities {
            let _ = write!(out, "{c:>5}");
        }
        out.push('\n');
        let _ = writeln!(out, "{stars}");
        out
    }
}

fn parse_ints(line_no: usize, line: &str) -> Result<Vec<i64>, PsplibError> {
    line.split_whitespace()
        .map(|tok| tok.parse::<i64>().map_err(|_| syntax(line_no, format!("expected integer, found `{tok}`"))))
        .collect()
}

fn non_negative(line_no: usize, value: i64, what: &str) -> Result<u32, PsplibError> {
    u32::try_from(value).map_err(|_| syntax(line_no, format!("{what} must be a non-negative integer, found {value}")))
}

/// Value after the first `:` of a `key : value` header line.
fn header_value(line_no: usize, line: &str) -> Result<u32, PsplibError> {
    let value = line
        .split_once(':')
        .map(|(_, v)| v)
        .and_then(|v| v.split_whitespace().next())
        .ok_or_else(|| syntax(line_no, "expected `key : value`"))?;
    value.parse().map_err(|_| syntax(line_no, format!("expected integer, found `{value}`")))
}

struct Lines<'a> {
    lines: Vec<(usize, &'a str)>,
    pos: usize,
}

impl<'a> Lines<'a> {
    fn next_content(&mut self) -> Option<(usize, &'a str)> {
        while self.pos < self.lines.len() {
            let (no, line) = self.lines[self.pos];
            self.pos += 1;
            if !line.trim().is_empty() {
                return Some((no, line));
            }
        }
        None
    }

    /// Rows of a section: every following non-empty line up to a `*` rule.
    fn section_rows(&mut self) -> Vec<(usize, &'a str)> {
        let mut rows = Vec::new();
        while let Some((no, line)) = self.next_content() {
            if line.trim_start().starts_with('*') {
                break;
            }
            rows.push((no, line));
        }
        rows
    }
}

/// Parses a single-mode PSPLIB file.
pub fn parse_psplib(text: &str) -> Result<PsplibProject, PsplibError> {
    let mut lines = Lines { lines: text.lines().enumerate().map(|(i, l)| (i + 1, l)).collect(), pos: 0 };

    let mut declared_jobs = None;
    let mut declared_renewable = None;
    let mut horizon = None;
    let mut precedence: Option<Vec<(usize, Vec<i64>)>> = None;
    let mut requests: Option<(usize, Vec<(usize, Vec<i64>)>)> = None;
    let mut capacities: Option<Vec<u32>> = None;

    while let Some((no, line)) = lines.next_content() {
        let trimmed = line.trim();
        if trimmed.starts_with("jobs") {
            declared_jobs = Some(header_value(no, trimmed)?);
        } else if trimmed.starts_with("horizon") {
            horizon = Some(header_value(no, trimmed)?);
        } else if trimmed.starts_with("- renewable") {
            declared_renewable = Some(header_value(no, trimmed)?);
        } else if trimmed.starts_with("PRECEDENCE") {
            if trimmed != "PRECEDENCE RELATIONS:" {
                return Err(syntax(no, format!("malformed section header `{trimmed}`")));
            }
            let (hno, header) = lines.next_content().ok_or_else(|| syntax(no, "section ends before its column header"))?;
            if !header.trim_start().starts_with("jobnr") {
                return Err(syntax(hno, "expected `jobnr.` column header"));
            }
            let rows = lines
                .section_rows()
                .into_iter()
                .map(|(rno, row)| parse_ints(rno, row).map(|v| (rno, v)))
                .collect::<Result<Vec<_>, _>>()?;
            precedence = Some(rows);
        } else if trimmed.starts_with("REQUESTS") {
            if trimmed != "REQUESTS/DURATIONS:" {
                return Err(syntax(no, format!("malformed section header `{trimmed}`")));
            }
            let (hno, header) = lines.next_content().ok_or_else(|| syntax(no, "section ends before its column header"))?;
            if !header.trim_start().starts_with("jobnr") {
                return Err(syntax(hno, "expected `jobnr.` column header"));
            }
            let tokens: Vec<&str> = header.split_whitespace().collect();
            let renewable = tokens.iter().filter(|t| **t == "R").count();
            let resource_columns = tokens.iter().filter(|t| matches!(**t, "R" | "N" | "D")).count();
            let mut rows = lines.section_rows();
            if rows.first().is_some_and(|(_, l)| l.trim_start().starts_with('-')) {
                rows.remove(0);
            }
            let rows = rows
                .into_iter()
                .map(|(rno, row)| {
                    let v = parse_ints(rno, row)?;
                    if v.len() != 3 + resource_columns {
                        return Err(syntax(rno, format!("expected {} columns, found {}", 3 + resource_columns, v.len())));
                    }
                    Ok((rno, v[..3 + renewable].to_vec()))
                })
                .collect::<Result<Vec<_>, _>>()?;
            requests = Some((renewable, rows));
        } else if trimmed.starts_with("RESOURCEAVAILABILITIES") {
            if trimmed != "RESOURCEAVAILABILITIES:" {
                return Err(syntax(no, format!("malformed section header `{trimmed}`")));
            }
            let (hno, _) = lines.next_content().ok_or_else(|| syntax(no, "section ends before its column header"))?;
            let (vno, values) = lines.next_content().ok_or_else(|| syntax(hno, "missing availability row"))?;
            capacities = Some(
                parse_ints(vno, values)?
                    .into_iter()
                    .map(|c| non_negative(vno, c, "availability"))
                    .collect::<Result<_, _>>()?,
            );
        }
    }

    let precedence = precedence.ok_or(PsplibError::MissingSection("PRECEDENCE RELATIONS:"))?;
    let (renewable, request_rows) = requests.ok_or(PsplibError::MissingSection("REQUESTS/DURATIONS:"))?;
    let n = precedence.len();
    if let Some(declared) = declared_jobs {
        if declared as usize != n {
            let line = precedence.last().map_or(1, |(l, _)| *l);
            return Err(syntax(line, format!("header declares {declared} jobs but {n} precedence rows follow")));
        }
    }
    if let Some(declared) = declared_renewable {
        if declared as usize != renewable {
            let line = request_rows.first().map_or(1, |(l, _)| *l);
            return Err(syntax(line, format!("header declares {declared} renewable resources, columns show {renewable}")));
        }
    }

    let mut successors = Vec::with_capacity(n);
    for (idx, (no, row)) in precedence.iter().enumerate() {
        if row.len() < 3 {
            return Err(syntax(*no, "precedence row needs job, mode count and successor count"));
        }
        if row[0] != idx as i64 + 1 {
            return Err(syntax(*no, format!("expected job {}, found {}", idx + 1, row[0])));
        }
        if row[1] != 1 {
            return Err(syntax(*no, format!("job {} has {} modes; only single-mode files are supported", row[0], row[1])));
        }
        let count = non_negative(*no, row[2], "successor count")? as usize;
        if row.len() != 3 + count {
            return Err(syntax(*no, format!("job {} declares {count} successors but lists {}", row[0], row.len() - 3)));
        }
        let mut succ = Vec::with_capacity(count);
        for &s in &row[3..] {
            if s < 1 || s as usize > n {
                return Err(syntax(*no, format!("successor {s} out of range 1..={n}")));
            }
            if !succ.contains(&(s as usize - 1)) {
                succ.push(s as usize - 1);
            }
        }
        successors.push(succ);
    }

    if request_rows.len() != n {
        let line = request_rows.last().map_or(1, |(l, _)| *l);
        return Err(syntax(line, format!("{} request rows for {n} jobs", request_rows.len())));
    }
    let mut durations = Vec::with_capacity(n);
    let mut job_requests = Vec::with_capacity(n);
    for (idx, (no, row)) in request_rows.iter().enumerate() {
        if row[0] != idx as i64 + 1 {
            return Err(syntax(*no, format!("expected job {}, found {}", idx + 1, row[0])));
        }
        if row[1] != 1 {
            return Err(syntax(*no, format!("job {} uses mode {}; only single-mode files are supported", row[0], row[1])));
        }
        durations.push(non_negative(*no, row[2], "duration")?);
        job_requests.push(row[3..].iter().map(|&r| non_negative(*no, r, "request")).collect::<Result<Vec<_>, _>>()?);
    }

    if let Some(job) = successors.iter().enumerate().find_map(|(i, s)| s.contains(&i).then_some(i)) {
        return Err(PsplibError::Cycle { job: job + 1 });
    }
    let peeled = graph::kahn_peel(&successors);
    if peeled.len() != n {
        let mut seen = vec![false; n];
        for i in peeled {
            seen[i] = true;
        }
        let job = seen.iter().position(|s| !s).unwrap_or(0);
        return Err(PsplibError::Cycle { job: job + 1 });
    }

    let capacities = match capacities {
        Some(c) if c.len() == renewable => c,
        Some(c) => {
            return Err(syntax(0, format!("{} availabilities for {renewable} renewable resources", c.len())));
        }
        None => vec![0; renewable],
    };

    Ok(PsplibProject { durations, successors, requests: job_requests, capacities, horizon })
}
