use std::fmt::Write as _;
use std::time::Duration;

use anyhow::{bail, Context};
use rayon::prelude::*;

use msrcpspr::instance::{default_extension, AdaptationOptions, RateParameter, ReliabilityParams};
use msrcpspr::pareto::{enumerate_front, plain_epsilon_front, FrontOptions, Traversal};
use msrcpspr::report::{
    front_csv, percent_change, ranking_csv, sensitivity, simulation_csv, simulation_row, sweep_csv,
};
use msrcpspr::schedule::{gantt_csv, gantt_svg, to_gantt};
use msrcpspr::solver::{self, Limits, Objective, SolveStatus, SubproblemSpec};
use msrcpspr::vikor::{rank, select_compromise};
use msrcpspr::{Front, Instance, Solution};

use crate::input::{self, read_project, sidecar_path, InstanceArgs};
use crate::{AdaptArgs, FrontArgs, LimitArgs, ObjectiveArg, Outcome, ParameterArg, ParetoArgs, SimulateArgs, SolveArgs, SweepArgs};

/// Relative simulation gaps above this are reported.
const GAP_REPORT: f64 = 0.05;

impl LimitArgs {
    fn limits(&self) -> Limits {
        Limits { time: Some(Duration::from_secs_f64(self.time_limit)), nodes: None }
    }
}

impl FrontArgs {
    fn options(&self) -> FrontOptions {
        let traversal = if self.parallel {
            Traversal::Parallel
        } else {
            Traversal::Sequential { bypass: !self.no_bypass }
        };
        FrontOptions { grid_count: self.grid, eps: self.eps, traversal, limits: self.limits.limits() }
    }
}

pub fn validate(args: &InstanceArgs) -> anyhow::Result<Outcome> {
    let instance = args.load()?;
    println!(
        "valid: {} activities ({} executable), {} resources, {} skills",
        instance.activity_count(),
        instance.executable().count(),
        instance.resource_count(),
        instance.skill_count
    );
    Ok(Outcome::Done)
}

fn write_schedule(instance: &Instance, solution: &Solution, out: &std::path::Path, svg: Option<&str>) -> anyhow::Result<()> {
    let rows = to_gantt(instance, solution).context("rendering the schedule")?;
    input::write(out, "schedule.csv", &gantt_csv(&rows))?;
    if let Some(title) = svg {
        input::write(out, "gantt.svg", &gantt_svg(&rows, title))?;
    }
    Ok(())
}

pub fn solve(args: &SolveArgs, draw: bool) -> anyhow::Result<Outcome> {
    let instance = args.instance.load()?;
    let objective = match args.objective {
        ObjectiveArg::Makespan => Objective::Makespan,
        ObjectiveArg::Cost => Objective::Cost,
    };
    let mut spec = SubproblemSpec::minimise(objective);
    if let Some(budget) = args.budget {
        spec = spec.with_budget(budget);
    }
    let result = solver::solve(&instance, &spec, &args.limits.limits())?;
    println!("status: {}", result.status.as_str());
    println!("nodes: {}", result.nodes_explored);
    if let (Some(values), Some(solution)) = (result.objectives, result.solution.as_ref()) {
        println!("makespan: {}", values.makespan);
        println!("cost: {}", values.cost);
        let title = format!("makespan {} / cost {}", values.makespan, values.cost);
        write_schedule(&instance, solution, &args.out, draw.then_some(title.as_str()))?;
    }
    Ok(match result.status {
        SolveStatus::Optimal => Outcome::Done,
        _ => Outcome::Unsolved,
    })
}

fn summary(front: &Front, plain: Option<&Front>, ranks: &[usize], q: &[f64]) -> String {
    let mut out = String::new();
    let _ = write!(out, "{:>5} {:>12} {:>14}", "point", "makespan", "cost");
    if plain.is_some() {
        let _ = write!(out, " {:>12} {:>14} {:>10} {:>10}", "eps makespan", "eps cost", "makespan %", "cost %");
    }
    let _ = writeln!(out, " {:>8} {:>5}", "Q", "rank");
    let rows = front.points.len().max(plain.map_or(0, |p| p.points.len()));
    let cell = |v: Option<f64>, prec: usize| v.map(|x| format!("{x:.prec$}")).unwrap_or_else(|| "-".into());
    for k in 0..rows {
        let a = front.points.get(k).map(|p| p.objectives);
        let _ = write!(out, "{:>5} {:>12} {:>14}", k + 1, cell(a.map(|v| v.makespan), 2), cell(a.map(|v| v.cost), 2));
        if let Some(plain) = plain {
            let b = plain.points.get(k).map(|p| p.objectives);
            let change = |f: fn(&msrcpspr::Objectives) -> f64| match (a, b) {
                (Some(a), Some(b)) => Some(percent_change(f(&b), f(&a))),
                _ => None,
            };
            let _ = write!(
                out,
                " {:>12} {:>14} {:>10} {:>10}",
                cell(b.map(|v| v.makespan), 2),
                cell(b.map(|v| v.cost), 2),
                cell(change(|v| v.makespan), 2),
                cell(change(|v| v.cost), 2),
            );
        }
        let rank = ranks.get(k).map(|r| r.to_string()).unwrap_or_else(|| "-".into());
        let _ = writeln!(out, " {:>8} {:>5}", cell(q.get(k).copied(), 4), rank);
    }
    out
}

pub fn pareto(args: &ParetoArgs) -> anyhow::Result<Outcome> {
    let instance = args.instance.load()?;
    let options = args.front.options();
    let front = enumerate_front(&instance, &options)?;
    input::write(&args.out, "front.csv", &front_csv(&front, args.front.timings))?;
    let plain = if args.no_compare {
        None
    } else {
        let plain = plain_epsilon_front(&instance, &options)?;
        input::write(&args.out, "plain_front.csv", &front_csv(&plain, args.front.timings))?;
        Some(plain)
    };
    if front.points.is_empty() {
        println!("{}", front.diagnosis.as_deref().unwrap_or("empty front"));
        return Ok(Outcome::Unsolved);
    }

    let values = front.values();
    let ranking = rank(&values, args.weights, args.v)?;
    let compromise = select_compromise(&ranking);
    input::write(&args.out, "ranking.csv", &ranking_csv(&values, &ranking, &compromise))?;
    for &j in &compromise {
        let point = &front.points[j];
        let rows = to_gantt(&instance, &point.solution).context("rendering a compromise schedule")?;
        let title = format!("point {}: makespan {} / cost {}", j + 1, point.makespan(), point.cost());
        input::write(&args.out, &format!("gantt_point{}.svg", j + 1), &gantt_svg(&rows, &title))?;
    }

    let q: Vec<f64> = ranking.scores.iter().map(|s| s.q).collect();
    print!("{}", summary(&front, plain.as_ref(), &ranking.ranks(), &q));
    let chosen: Vec<String> = compromise.iter().map(|j| (j + 1).to_string()).collect();
    println!("compromise set: {}", chosen.join(", "));
    if front.is_partial() {
        println!("partial front: some solves stopped on the time limit");
        return Ok(Outcome::Unsolved);
    }
    Ok(Outcome::Done)
}

pub fn sweep(args: &SweepArgs) -> anyhow::Result<Outcome> {
    let instance = args.instance.load()?;
    let parameter = match args.parameter {
        ParameterArg::Retrieval => RateParameter::Retrieval,
        ParameterArg::Disruption => RateParameter::Disruption,
    };
    let report = sensitivity(&instance, parameter, &args.multipliers, &args.front.options())?;
    let name = msrcpspr::report::parameter_name(parameter);
    input::write(&args.out, &format!("sweep_{name}.csv"), &sweep_csv(&report))?;
    for (scenario, change) in report.scenarios.iter().zip(report.makespan_pis_changes()) {
        match change {
            Some(c) => println!("{name} x{}: best makespan change {c:.4}%", scenario.multiplier),
            None => println!("{name} x{}: no feasible schedule", scenario.multiplier),
        }
    }
    if report.base.points.is_empty() || report.base.is_partial() {
        return Ok(Outcome::Unsolved);
    }
    Ok(Outcome::Done)
}

pub fn simulate(args: &SimulateArgs) -> anyhow::Result<Outcome> {
    let mut points: Vec<(f64, ReliabilityParams<f64>)> =
        args.points.iter().map(|&[lambda, mu, u, r]| (lambda, ReliabilityParams::new(u, r, mu))).collect();
    if let Some(path) = &args.instance {
        let instance = input::load(path, args.extension.as_deref(), args.default_adaptation)?;
        for resource in &instance.resources {
            points.extend((1..=args.max_rate).map(|lambda| (lambda as f64, resource.reliability)));
        }
    }
    if points.is_empty() {
        bail!("nothing to simulate: pass --instance or --point");
    }
    let rows: Vec<_> = points
        .par_iter()
        .enumerate()
        .map(|(n, &(lambda, params))| simulation_row(lambda, params, args.horizon, args.seed.wrapping_add(n as u64)))
        .collect();
    input::write(&args.out, "simulation.csv", &simulation_csv(&rows))?;
    for row in &rows {
        let p = row.params;
        let label = format!(
            "lambda={} mu={} upsilon={} r={}",
            row.arrival_rate, p.service_rate, p.disruption_rate, p.retrieval_rate
        );
        match (row.analytic, row.relative_gap()) {
            (None, _) => println!("{label}: unstable, skipped"),
            (Some(_), Some(gap)) if gap > GAP_REPORT => {
                println!("{label}: simulation differs from the formula by {:.1}%", 100.0 * gap)
            }
            _ => {}
        }
    }
    Ok(Outcome::Done)
}

pub fn adapt(args: &AdaptArgs) -> anyhow::Result<Outcome> {
    let project = read_project(&args.instance)?;
    let options = AdaptationOptions {
        resources: args.resources,
        skills: args.skills,
        request_cap: args.request_cap,
        cost_seed: args.seed,
        disruption_rate: args.disruption,
        retrieval_rate: args.retrieval,
        service_rate: args.service,
    };
    let extension = default_extension(&project, &options);
    let path = args.out.clone().unwrap_or_else(|| sidecar_path(&args.instance));
    let dir = path.parent().filter(|d| !d.as_os_str().is_empty()).unwrap_or(std::path::Path::new("."));
    let name = path.file_name().context("sidecar path has no file name")?.to_string_lossy();
    input::write(dir, &name, &extension.to_json())?;
    println!("{}", path.display());
    Ok(Outcome::Done)
}
